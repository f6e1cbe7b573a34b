//! Fault-location enumeration for the repetition-code memory experiment.
//!
//! A distance-`d` experiment runs `R` noisy stabilizer rounds followed by
//! one perfect data readout. Ancilla `s` (`1 ≤ s ≤ d−1`) measures the XX
//! parity of data qubits `s` and `s+1` each round through two CNOTs: a
//! first layer coupling every ancilla `s` to data `s`, a second coupling it
//! to data `s+1`. Measurement `m[r][s]` therefore reads data `s` at the
//! first CNOT and data `s+1` at the second, and detectors are the
//! round-to-round differences `det[r][s] = m[r][s] ⊕ m[r−1][s]` (row 0 is
//! `m[0]` itself, row `R` compares the perfect readout against `m[R−1]`).
//!
//! Every elementary phase-flip propagates to a set of at most two flipped
//! detectors plus a possible logical flip, and faults with identical
//! effect merge into one Bernoulli class (probabilities compose as
//! exclusive-or: `p ⊕ q = p(1−q) + q(1−p)`, which preserves the sampled
//! distribution exactly). The classes per round and data qubit `q` are:
//!
//! * measurement class of check `s`: everything that flips outcome `r,s`
//!   alone (ancilla prep, readout, ancilla idles, CNOT ancilla flips) →
//!   detectors `{(r,s), (r+1,s)}`;
//! * start-of-round class of qubit `q`: data flips landing between the
//!   qubit's last read of round `r−1` and its first read of round `r`
//!   (idles, the previous round's trailing CNOT data flip, the cycle
//!   refresh for asymmetric operation), merged with the first-layer
//!   hook `Z_a Z_d` of check `q`, whose net effect coincides →
//!   detectors `{(r,q−1), (r,q)}`, a logical flip when `q = 1`;
//! * mid-round class of interior qubit `q`: flips between the two reads
//!   (first-layer CNOT data flip, the idle separating the layers), merged
//!   with the second-layer hook of check `q−1` → `{(r,q−1), (r+1,q)}`.
//!
//! Boundary qubits drop the out-of-range detector. The enumeration is the
//! single source of truth for both the sampler and the decoder graph, so
//! the decoder is matched to exactly the error process being sampled
//! (minus deliberate blindness to measurement-error correlations, which
//! enter the graph only through marginals).

use crate::error_model::{NoiseModel, PhenomModel, Strategy};
use serde::{Deserialize, Serialize};

/// One detector: `row` in `0..=R`, `check` in `1..=d−1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DetectorId {
    pub row: u32,
    pub check: u32,
}

/// Where a fault class lives, for diagnostics and tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaultKind {
    /// Flips one measurement outcome: time-like edge.
    Measurement,
    /// Data flip between rounds: space-like edge (diagonal at boundaries).
    DataStart,
    /// Data flip between the two reads of one round: diagonal edge.
    DataMid,
}

/// A merged Bernoulli fault class with its propagated effect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultClass {
    pub kind: FaultKind,
    /// Anchor round `r` (row of the first detector).
    pub round: u32,
    /// Check index for measurement classes, data qubit index otherwise.
    pub location: u32,
    pub probability: f64,
    /// One or two flipped detectors.
    pub detectors: Vec<DetectorId>,
    /// Whether the class flips the logical X readout (data qubit 1 parity).
    pub flips_logical: bool,
}

/// Complete enumeration for one experiment shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitFaults {
    pub distance: usize,
    pub noisy_rounds: usize,
    /// Fast rounds per cycle: 1 except for asymmetric operation.
    pub rounds_per_cycle: usize,
    pub classes: Vec<FaultClass>,
}

impl CircuitFaults {
    /// Detector rows, including the final perfect-readout row.
    pub fn rows(&self) -> usize {
        self.noisy_rounds + 1
    }

    pub fn checks(&self) -> usize {
        self.distance - 1
    }

    pub fn node_count(&self) -> usize {
        self.rows() * self.checks()
    }

    /// Dense node index of a detector, row-major.
    pub fn node_index(&self, det: DetectorId) -> usize {
        det.row as usize * self.checks() + (det.check as usize - 1)
    }

    /// Fold per-fast-round marginal measurement-error probabilities into
    /// the measurement classes (asymmetric operation: the leakage table's
    /// contribution to the decoder graph). `profile[k][s−1]` is the
    /// marginal for check `s` in fast round `k` of a cycle; rounds repeat
    /// with the cycle period.
    pub fn merge_meas_marginals(&mut self, profile: &[Vec<f64>]) {
        assert_eq!(profile.len(), self.rounds_per_cycle, "profile must cover one cycle");
        for class in &mut self.classes {
            if class.kind == FaultKind::Measurement {
                let k = class.round as usize % self.rounds_per_cycle;
                let extra = profile[k][class.location as usize - 1];
                class.probability = xor_prob(class.probability, extra);
            }
        }
    }
}

/// Probability that an odd number of two independent flips occurs.
pub fn xor_prob(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + b * (1.0 - a)
}

/// XOR-combine a list of independent flip probabilities.
pub fn xor_fold(components: &[f64]) -> f64 {
    components.iter().fold(0.0, |acc, &p| xor_prob(acc, p))
}

/// Per-step schedule facts shared by the circuit-level strategies.
///
/// A 4-step round is `prep, CNOT layer 1, CNOT layer 2, measure`; a 5-step
/// round inserts an ancilla-refresh idle between the layers. Idle-step
/// counts below follow directly from which steps read which data qubit.
struct Schedule {
    /// Idles of an interior qubit (or qubit 1) before its first read.
    pre_first: u32,
    /// Idles of an interior qubit between its two reads.
    between: u32,
    /// Idles of an interior qubit (or qubit `d`) after its last read.
    post_last: u32,
    /// Idles of qubit 1 after its only read.
    post_first_only: u32,
    /// Idles of qubit `d` before its only read.
    pre_last_only: u32,
    /// Ancilla idle steps between prep and measurement.
    ancilla_idles: u32,
}

fn schedule(steps_per_round: usize) -> Schedule {
    match steps_per_round {
        // prep(1) read1(2) read2(3) meas(4)
        4 => Schedule {
            pre_first: 1,
            between: 0,
            post_last: 1,
            post_first_only: 2,
            pre_last_only: 2,
            ancilla_idles: 0,
        },
        // prep(1) read1(2) refresh(3) read2(4) meas(5)
        5 => Schedule {
            pre_first: 1,
            between: 1,
            post_last: 1,
            post_first_only: 3,
            pre_last_only: 3,
            ancilla_idles: 1,
        },
        other => panic!("unsupported step count {other}"),
    }
}

/// Enumerate the circuit-level fault classes of a strategy.
///
/// For `FastAsymmetric`, `noisy_rounds` counts fast rounds and must be a
/// multiple of the asymmetry ratio; the returned measurement classes carry
/// only the loss-induced (`κ₁`) components, since the non-adiabatic part is
/// the leakage table's job (sampled jointly by the sampler, merged as
/// marginals into the decoder via [`CircuitFaults::merge_meas_marginals`]).
pub fn circuit_faults(noise: &NoiseModel, distance: usize, noisy_rounds: usize) -> CircuitFaults {
    assert!(distance >= 2, "need at least one check");
    assert!(noisy_rounds >= 1, "need at least one noisy round");
    let rounds_per_cycle = noise.rounds_per_cycle as usize;
    assert!(
        noisy_rounds % rounds_per_cycle == 0,
        "noisy rounds must cover whole cycles ({noisy_rounds} vs {rounds_per_cycle} per cycle)"
    );

    let sched = schedule(noise.steps_per_round);
    let asym = noise.params.strategy == Strategy::FastAsymmetric;
    let meas_za = if asym { noise.cnot.p_za_loss } else { noise.cnot.p_za };
    let (d, r_total) = (distance, noisy_rounds);
    let idle = noise.p_idle_data;
    let (p_zd, p_zazd) = (noise.cnot.p_zd, noise.cnot.p_zazd);

    let mut classes = Vec::new();
    let mut push = |kind: FaultKind,
                    round: u32,
                    location: u32,
                    probability: f64,
                    detectors: Vec<DetectorId>,
                    flips_logical: bool| {
        if probability > 0.0 {
            classes.push(FaultClass { kind, round, location, probability, detectors, flips_logical });
        }
    };

    // Measurement classes, one per check and noisy round.
    let meas_prob = xor_fold(&[
        noise.p_prep,
        noise.p_meas,
        xor_fold(&vec![noise.p_idle_anc; sched.ancilla_idles as usize]),
        meas_za,
        meas_za,
    ]);
    for r in 0..r_total as u32 {
        for s in 1..d as u32 {
            push(
                FaultKind::Measurement,
                r,
                s,
                meas_prob,
                vec![DetectorId { row: r, check: s }, DetectorId { row: r + 1, check: s }],
                false,
            );
        }
    }

    // Start-of-round classes, one per data qubit and row 0..=R.
    for r in 0..=r_total as u32 {
        let first_round = r == 0;
        let last_row = r as usize == r_total;
        // Refresh separates cycles; the final readout follows the last
        // fast round directly.
        let refresh = if asym && !first_round && !last_row && r as usize % rounds_per_cycle == 0 {
            noise.p_refresh_data
        } else {
            0.0
        };
        for q in 1..=d as u32 {
            let (pre, post, trailing_zd) = if q == 1 {
                (sched.pre_first, sched.post_first_only, p_zd)
            } else if q == d as u32 {
                (sched.pre_last_only, sched.post_last, p_zd)
            } else {
                (sched.pre_first, sched.post_last, p_zd)
            };
            let mut components = Vec::new();
            if !first_round {
                components.extend(std::iter::repeat(idle).take(post as usize));
                components.push(trailing_zd); // previous round's read leaves its data flip here
                components.push(refresh);
            }
            if !last_row {
                components.extend(std::iter::repeat(idle).take(pre as usize));
                // First-layer hook of check q: its ancilla and data parts
                // cancel on the shared detector, leaving exactly this
                // class's signature.
                if q < d as u32 {
                    components.push(p_zazd);
                }
                // Second-layer hook of check d−1: both detector flips land
                // on (r, d−1), the signature of this boundary class.
                if q == d as u32 {
                    components.push(p_zazd);
                }
            }
            let mut detectors = Vec::new();
            if q >= 2 {
                detectors.push(DetectorId { row: r, check: q - 1 });
            }
            if q <= d as u32 - 1 {
                detectors.push(DetectorId { row: r, check: q });
            }
            push(FaultKind::DataStart, r, q, xor_fold(&components), detectors, q == 1);
        }
    }

    // Mid-round classes for interior qubits, rounds 0..R.
    for r in 0..r_total as u32 {
        for q in 2..d as u32 {
            let components = [
                p_zd, // first-layer CNOT of check q, after its read of qubit q
                xor_fold(&vec![idle; sched.between as usize]),
                p_zazd, // second-layer hook of check q−1
            ];
            push(
                FaultKind::DataMid,
                r,
                q,
                xor_fold(&components),
                vec![DetectorId { row: r, check: q - 1 }, DetectorId { row: r + 1, check: q }],
                false,
            );
        }
    }

    CircuitFaults { distance, noisy_rounds, rounds_per_cycle, classes }
}

/// Enumerate phenomenological fault classes: per noisy round, each data
/// qubit flips with `p_data` before the measurements, and each outcome
/// flips with `p_meas`; the final readout is perfect.
pub fn phenom_faults(model: &PhenomModel, distance: usize, noisy_rounds: usize) -> CircuitFaults {
    assert!(distance >= 2, "need at least one check");
    assert!(noisy_rounds >= 1, "need at least one noisy round");
    let d = distance as u32;
    let mut classes = Vec::new();
    for r in 0..noisy_rounds as u32 {
        for s in 1..d {
            if model.p_meas > 0.0 {
                classes.push(FaultClass {
                    kind: FaultKind::Measurement,
                    round: r,
                    location: s,
                    probability: model.p_meas,
                    detectors: vec![
                        DetectorId { row: r, check: s },
                        DetectorId { row: r + 1, check: s },
                    ],
                    flips_logical: false,
                });
            }
        }
        for q in 1..=d {
            if model.p_data <= 0.0 {
                continue;
            }
            let mut detectors = Vec::new();
            if q >= 2 {
                detectors.push(DetectorId { row: r, check: q - 1 });
            }
            if q <= d - 1 {
                detectors.push(DetectorId { row: r, check: q });
            }
            classes.push(FaultClass {
                kind: FaultKind::DataStart,
                round: r,
                location: q,
                probability: model.p_data,
                detectors,
                flips_logical: q == 1,
            });
        }
    }
    CircuitFaults { distance, noisy_rounds, rounds_per_cycle: 1, classes }
}
