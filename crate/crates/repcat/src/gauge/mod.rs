//! Leakage dynamics of the CNOT in the shifted Fock basis and the classical
//! gauge-bit tables derived from it.
//!
//! Fast CNOTs leak the data cat qubit out of its code manifold. In the
//! shifted Fock basis the oscillator splits into a logical qubit times a
//! "gauge" excitation mode; the undesired part of the CNOT dynamics couples
//! the ancilla qubit's phase to the gauge occupations. Because every jump
//! operator acts on the gauge sector as a pure ladder operator (times an
//! ancilla unitary), gauge populations never build coherences: the data
//! gauge mode behaves as a classical bit that switches state during CNOTs,
//! applying a Kraus map to the ancilla qubit as it does. One parity check
//! (two CNOTs on the same ancilla) therefore has measurement-error
//! probabilities conditioned on the two adjacent gauge-bit transitions —
//! the [`LeakageTable`] — and those conditionals are what correlate
//! measurement errors across the fast rounds of an asymmetric QEC cycle.
//!
//! * [`reduced`] — the two-branch 2×2 master equation obtained after
//!   adiabatic elimination of the ancilla gauge mode (valid for `Θ ≫ 1`).
//! * [`oracle`] — the pre-elimination master equation on ancilla qubit ⊗
//!   ancilla gauge ⊗ data gauge (truncated to `gauge_levels` excitations),
//!   used as the accuracy reference for the reduced model.
//! * [`table`] — builds, caches, and post-processes [`LeakageTable`]s.
//! * [`toy`] — exact evaluation of the repeated-measurement toy circuit
//!   (Θ back-to-back parity reads of one data qubit, majority-voted).

pub mod oracle;
pub mod reduced;
pub mod table;
pub mod toy;

use serde::{Deserialize, Serialize};

pub use table::{build_leakage_table, load_or_build, table_cache_key, TableError};
pub use toy::{repeated_measurement_sim, ToyResult};

/// How a [`LeakageTable`] was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TableSource {
    /// Two-branch reduced master equation (ancilla gauge eliminated).
    Reduced,
    /// Truncated three-mode master equation with `gauge_levels` gauge states
    /// per mode (2 reproduces the reduced model's state space; 3 adds the
    /// first neglected excitation).
    Oracle { gauge_levels: u8 },
}

/// Numerical integration settings for the gauge master equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    /// Fixed RK4 step count per gate (and per refresh window).
    pub steps_per_gate: u32,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        // The stiffest rate is r₁T = 4α² ≲ 100 and the drive phase turns
        // once per gate; 4000 steps keep the global RK4 error near 1e-12
        // while a full table build stays in the tens of milliseconds.
        IntegratorSettings { steps_per_gate: 4000 }
    }
}

/// One (transition, measurement-error) mass pair.
///
/// `weight` is the probability of the gauge transition itself; `error` is
/// the joint probability of the transition *and* an erroneous ancilla
/// X-measurement, so `error ≤ weight` and the error conditioned on the
/// transition is `error/weight`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct TableEntry {
    pub weight: f64,
    pub error: f64,
}

impl TableEntry {
    /// Measurement-error probability conditioned on this transition.
    pub fn error_given_transition(&self) -> f64 {
        if self.weight <= 0.0 {
            0.0
        } else {
            self.error / self.weight
        }
    }
}

/// Gauge-bit transition and conditional measurement-error table of one
/// parity check.
///
/// All rates are in units of the data two-photon rate (`κ₂ᵈ = 1`,
/// `κ₂ᵃ = Θ`, CNOT duration `1/κ₂ᵃ`). Indices are gauge-bit values:
/// `single[i][j]` covers one CNOT whose data gauge bit goes `i → j`;
/// `pair[i][j][ip][jp]` covers a full check whose first CNOT's gauge bit
/// goes `i → j` and second CNOT's goes `ip → jp` (an ancilla refresh step
/// of duration `1/κ₂ᵃ` sits between the two CNOTs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageTable {
    pub alpha_sq: f64,
    pub theta: u32,
    pub settings: IntegratorSettings,
    pub source: TableSource,
    pub single: [[TableEntry; 2]; 2],
    pub pair: [[[[TableEntry; 2]; 2]; 2]; 2],
}

impl LeakageTable {
    /// Entry for a full parity check with transitions `i → j` (first CNOT)
    /// and `ip → jp` (second CNOT).
    pub fn pair_entry(&self, i: u8, j: u8, ip: u8, jp: u8) -> TableEntry {
        self.pair[i as usize][j as usize][ip as usize][jp as usize]
    }

    /// Marginal per-CNOT transition probability `P(j | i)`.
    pub fn transition_prob(&self, i: u8, j: u8) -> f64 {
        self.single[i as usize][j as usize].weight
    }

    /// Joint probability of a measurement error given the two initial gauge
    /// bits, summed over final states: `P(flip | i, ip)`.
    pub fn error_given_initials(&self, i: u8, ip: u8) -> f64 {
        let mut e = 0.0;
        for j in 0..2 {
            for jp in 0..2 {
                e += self.pair[i as usize][j][ip as usize][jp].error;
            }
        }
        e
    }

    /// Structural invariants: masses are probabilities, transitions from a
    /// fixed start sum to one, errors never exceed their transition weight.
    pub fn validate(&self) -> Result<(), TableError> {
        let check = |name: &'static str, v: f64, hi: f64| -> Result<(), TableError> {
            if !(v.is_finite() && (-1e-9..=hi + 1e-9).contains(&v)) {
                return Err(TableError::InvalidEntry { name, value: v });
            }
            Ok(())
        };
        for i in 0..2 {
            let mut total = 0.0;
            for j in 0..2 {
                let e = self.single[i][j];
                check("single weight", e.weight, 1.0)?;
                check("single error", e.error, e.weight.max(0.0))?;
                total += e.weight;
            }
            if (total - 1.0).abs() > 1e-6 {
                return Err(TableError::InvalidEntry { name: "single weight sum", value: total });
            }
            for ip in 0..2 {
                let mut total = 0.0;
                for j in 0..2 {
                    for jp in 0..2 {
                        let e = self.pair[i][j][ip][jp];
                        check("pair weight", e.weight, 1.0)?;
                        check("pair error", e.error, e.weight.max(0.0))?;
                        total += e.weight;
                    }
                }
                if (total - 1.0).abs() > 1e-6 {
                    return Err(TableError::InvalidEntry {
                        name: "pair weight sum",
                        value: total,
                    });
                }
            }
        }
        Ok(())
    }
}
