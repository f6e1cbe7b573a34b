//! Per-operation error probabilities for cat qubit QEC circuits.
//!
//! The starting point is the phase-flip error model of the bias-preserving
//! CNOT between two dissipatively stabilized cat qubits (control = ancilla,
//! target = data), executed in time `T`:
//!
//! * ancilla: `p_Za = α²κ₁ᵃT + 0.159/(α²κ₂ᵃT)` — a single-photon-loss term
//!   plus a non-adiabatic term from running the gate in finite time,
//! * data: `p_Zd = ½α²κ₁ᵈT`,
//! * correlated: `p_ZaZd = ½α²κ₁ᵈT`,
//!
//! with `κ₁ = η·κ₂` on both qubits. Bit flips stay exponentially suppressed
//! (`∝ e^(−2α²)`) and are never sampled; they enter only the analytic
//! logical bit-flip estimate.
//!
//! Three measurement scheduling strategies are supported, all built from the
//! same CNOT model:
//!
//! * [`Strategy::OptimalTime`]: every operation lasts the per-CNOT optimum
//!   `T*` minimizing the total CNOT phase-flip probability; 4-step cycle
//!   (prep, first CNOT layer, second CNOT layer, measurement).
//! * [`Strategy::FastSymmetric`]: every operation lasts `1/κ₂`; a refresh
//!   step between the CNOT layers removes leakage, giving a 5-step cycle.
//! * [`Strategy::FastAsymmetric`]: ancillas are stabilized `Θ = κ₂ᵃ/κ₂ᵈ`
//!   times faster than data; each of the `Θ` fast measurement rounds per
//!   cycle takes `5/κ₂ᵃ`, followed by one data refresh step of `1/κ₂ᵈ`
//!   (cycle duration `6/κ₂ᵈ`). Non-adiabatic ancilla errors are not part of
//!   this strategy's [`NoiseModel`]: they are correlated through data-qubit
//!   leakage and handled by the gauge-bit leakage table; only the
//!   `κ₁`-induced terms appear here.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Coefficient of the non-adiabatic ancilla phase-flip term of the CNOT,
/// `p = NONADIABATIC_COEFF/(α²κ₂ᵃT)`. Fitted against full-oscillator
/// simulations of the dissipative CNOT; taken as given here.
pub const NONADIABATIC_COEFF: f64 = 0.159;

/// Measurement scheduling strategy for the QEC cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// All operations at the per-CNOT optimal duration `T*`.
    OptimalTime,
    /// All operations at `1/κ₂`, refresh step between CNOT layers.
    FastSymmetric,
    /// Fast ancillas (`κ₂ᵃ = Θ·κ₂ᵈ`), Θ fast rounds per cycle plus a data
    /// refresh step; measurement errors carry leakage-induced correlations.
    FastAsymmetric,
}

impl Strategy {
    /// Number of time steps in one stabilizer measurement round.
    pub fn steps_per_round(self) -> usize {
        match self {
            Strategy::OptimalTime => 4,
            Strategy::FastSymmetric | Strategy::FastAsymmetric => 5,
        }
    }
}

/// Physical parameters of a cat qubit architecture.
///
/// Rates are in units of the data two-photon rate (`kappa2_d = 1` in the
/// standard configuration); `eta = κ₁/κ₂` is shared by ancilla and data
/// qubits, so `κ₁ᵃ = eta·kappa2_a` and `κ₁ᵈ = eta·kappa2_d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatParams {
    /// Mean photon number `α²` of the cat states.
    pub alpha_sq: f64,
    /// Figure of merit `η = κ₁/κ₂` (same ratio on ancilla and data).
    pub eta: f64,
    /// Ancilla two-photon stabilization rate `κ₂ᵃ`.
    pub kappa2_a: f64,
    /// Data two-photon stabilization rate `κ₂ᵈ`.
    pub kappa2_d: f64,
    /// Measurement scheduling strategy.
    pub strategy: Strategy,
}

impl CatParams {
    /// Symmetric-rate constructor (`κ₂ᵃ = κ₂ᵈ = 1`).
    pub fn symmetric(alpha_sq: f64, eta: f64, strategy: Strategy) -> Self {
        CatParams { alpha_sq, eta, kappa2_a: 1.0, kappa2_d: 1.0, strategy }
    }

    /// Asymmetric-rate constructor: `κ₂ᵈ = 1`, `κ₂ᵃ = Θ`.
    pub fn asymmetric(alpha_sq: f64, eta: f64, theta: u32) -> Self {
        CatParams {
            alpha_sq,
            eta,
            kappa2_a: f64::from(theta),
            kappa2_d: 1.0,
            strategy: Strategy::FastAsymmetric,
        }
    }

    /// Stabilization-rate asymmetry `Θ = κ₂ᵃ/κ₂ᵈ`, validated to be a
    /// positive integer (the cycle interleaves Θ fast rounds with one data
    /// refresh, so fractional asymmetries have no circuit realization here).
    pub fn theta(&self) -> Result<u32, ModelError> {
        let ratio = self.kappa2_a / self.kappa2_d;
        let rounded = ratio.round();
        if !(rounded >= 1.0 && (ratio - rounded).abs() < 1e-9 && rounded <= u32::MAX as f64) {
            return Err(ModelError::NonIntegerAsymmetry { ratio });
        }
        Ok(rounded as u32)
    }

    /// Structural validation of the raw parameters.
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.alpha_sq.is_finite() && self.alpha_sq > 0.0) {
            return Err(ModelError::InvalidParameter {
                name: "alpha_sq",
                value: self.alpha_sq,
                constraint: "> 0",
            });
        }
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(ModelError::InvalidParameter {
                name: "eta",
                value: self.eta,
                constraint: ">= 0",
            });
        }
        for (name, value) in [("kappa2_a", self.kappa2_a), ("kappa2_d", self.kappa2_d)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ModelError::InvalidParameter { name, value, constraint: "> 0" });
            }
        }
        match self.strategy {
            Strategy::FastAsymmetric => {
                self.theta()?;
            }
            Strategy::OptimalTime | Strategy::FastSymmetric => {
                if (self.kappa2_a - self.kappa2_d).abs() > 1e-9 * self.kappa2_d {
                    return Err(ModelError::AsymmetricRatesForSymmetricStrategy {
                        kappa2_a: self.kappa2_a,
                        kappa2_d: self.kappa2_d,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Errors from constructing or validating an error model.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parameter {name} = {value} violates constraint {constraint}")]
    InvalidParameter { name: &'static str, value: f64, constraint: &'static str },
    #[error("κ₂ᵃ/κ₂ᵈ = {ratio} is not a positive integer asymmetry")]
    NonIntegerAsymmetry { ratio: f64 },
    #[error("strategy requires κ₂ᵃ = κ₂ᵈ but got κ₂ᵃ = {kappa2_a}, κ₂ᵈ = {kappa2_d}")]
    AsymmetricRatesForSymmetricStrategy { kappa2_a: f64, kappa2_d: f64 },
    /// A per-operation error probability left the domain where the model is
    /// meaningful (each elementary fault must be a Bernoulli event with
    /// p < 0.5 for matching weights to stay positive and finite).
    #[error("{operation} error probability {value:.6} is outside [0, 0.5)")]
    ProbabilityOutOfRange { operation: &'static str, value: f64 },
    #[error("optimal CNOT time is undefined for eta = 0 (no loss to trade against)")]
    OptimalTimeUndefined,
}

/// Phase-flip and bit-flip error probabilities of one CNOT of duration
/// `t_gate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CnotNoise {
    /// Gate duration.
    pub t_gate: f64,
    /// Total ancilla (control) phase-flip probability, loss + non-adiabatic.
    pub p_za: f64,
    /// Loss-induced part of `p_za` only (`α²κ₁ᵃT`). The asymmetric strategy
    /// samples this part here and leaves the non-adiabatic part to the
    /// leakage table.
    pub p_za_loss: f64,
    /// Data (target) phase-flip probability.
    pub p_zd: f64,
    /// Correlated ancilla⊗data phase-flip probability.
    pub p_zazd: f64,
    /// Bit-flip probability of the CNOT (analytic, never sampled).
    pub p_x: f64,
}

impl CnotNoise {
    /// Total CNOT phase-flip error probability `p_za + p_zd + p_zazd`.
    pub fn total_z(&self) -> f64 {
        self.p_za + self.p_zd + self.p_zazd
    }
}

/// CNOT duration minimizing the total phase-flip probability
/// `2·(½α²κ₁T) + α²κ₁T + 0.159/(α²κ₂T)`, i.e. `T* = √(0.159/2)/(α²√(κ₁κ₂))`
/// ≈ `0.282/(α²√(κ₁κ₂))`. At `T*` the total CNOT error is
/// `2√(2·0.159)·√η ≈ 1.13√η`.
pub fn optimal_cnot_time(alpha_sq: f64, eta: f64, kappa2: f64) -> Result<f64, ModelError> {
    if !(alpha_sq.is_finite() && alpha_sq > 0.0) {
        return Err(ModelError::InvalidParameter {
            name: "alpha_sq",
            value: alpha_sq,
            constraint: "> 0",
        });
    }
    if !(kappa2.is_finite() && kappa2 > 0.0) {
        return Err(ModelError::InvalidParameter {
            name: "kappa2",
            value: kappa2,
            constraint: "> 0",
        });
    }
    if !(eta.is_finite() && eta > 0.0) {
        return Err(ModelError::OptimalTimeUndefined);
    }
    let kappa1 = eta * kappa2;
    Ok((NONADIABATIC_COEFF / 2.0).sqrt() / (alpha_sq * (kappa1 * kappa2).sqrt()))
}

fn check_prob(operation: &'static str, value: f64) -> Result<f64, ModelError> {
    if !(value.is_finite() && (0.0..0.5).contains(&value)) {
        return Err(ModelError::ProbabilityOutOfRange { operation, value });
    }
    Ok(value)
}

/// Per-CNOT error probabilities for the given parameters and gate duration.
///
/// The ancilla terms use the ancilla rates (`κ₁ᵃ = η·κ₂ᵃ`, `κ₂ᵃ`), the data
/// terms the data rates; for the symmetric strategies the two coincide.
pub fn cnot_noise(params: &CatParams, t_gate: f64) -> Result<CnotNoise, ModelError> {
    params.validate()?;
    if !(t_gate.is_finite() && t_gate > 0.0) {
        return Err(ModelError::InvalidParameter {
            name: "t_gate",
            value: t_gate,
            constraint: "> 0",
        });
    }
    let a2 = params.alpha_sq;
    let kappa1_a = params.eta * params.kappa2_a;
    let kappa1_d = params.eta * params.kappa2_d;
    let p_za_loss = check_prob("CNOT ancilla loss", a2 * kappa1_a * t_gate)?;
    let p_za = check_prob(
        "CNOT ancilla phase-flip",
        p_za_loss + NONADIABATIC_COEFF / (a2 * params.kappa2_a * t_gate),
    )?;
    let p_zd = check_prob("CNOT data phase-flip", 0.5 * a2 * kappa1_d * t_gate)?;
    let p_x = match params.strategy {
        // Slow gates: bit-flip fit dominated by loss-induced leakage.
        Strategy::OptimalTime => {
            (5.58 * params.eta.sqrt() + 1.68 * params.eta) * (-2.0 * a2).exp()
        }
        // Fast gates: non-adiabatic bit-flips dominate.
        Strategy::FastSymmetric | Strategy::FastAsymmetric => 0.5 * (-2.0 * a2).exp(),
    };
    Ok(CnotNoise { t_gate, p_za, p_za_loss, p_zd, p_zazd: p_zd, p_x })
}

/// Per-operation error probabilities of one QEC cycle under a strategy.
///
/// `p_data_cycle` and `q_meas_cycle` are linear per-cycle sums over every
/// fault mechanism touching one interior data qubit (respectively one
/// stabilizer readout), including the data (respectively ancilla) component
/// of correlated CNOT faults. They are reporting/calibration aggregates, not
/// Bernoulli parameters. For `FastAsymmetric`, `q_meas_cycle` counts the
/// loss-induced terms only; the non-adiabatic/leakage part lives in the
/// leakage table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub params: CatParams,
    pub cnot: CnotNoise,
    /// Duration of one circuit time step.
    pub t_step: f64,
    /// Steps per stabilizer measurement round (4 or 5).
    pub steps_per_round: usize,
    /// Fast measurement rounds per QEC cycle (Θ for `FastAsymmetric`, else 1).
    pub rounds_per_cycle: usize,
    /// Ancilla preparation error probability.
    pub p_prep: f64,
    /// Ancilla measurement error probability.
    pub p_meas: f64,
    /// Data idle error probability per step.
    pub p_idle_data: f64,
    /// Ancilla idle error probability during the refresh step (0 when the
    /// cycle has no refresh step).
    pub p_idle_anc: f64,
    /// Data error probability of the cycle-end data refresh step
    /// (`FastAsymmetric` only, else 0).
    pub p_refresh_data: f64,
    /// Per-cycle data phase-flip aggregate.
    pub p_data_cycle: f64,
    /// Per-cycle measurement-flip aggregate (loss-only for `FastAsymmetric`).
    pub q_meas_cycle: f64,
}

/// Build the per-operation error model for one strategy.
pub fn build_noise_model(params: &CatParams) -> Result<NoiseModel, ModelError> {
    params.validate()?;
    let a2 = params.alpha_sq;
    let eta = params.eta;
    let (t_step, p_prep, p_idle_data, p_idle_anc, p_refresh_data) = match params.strategy {
        Strategy::OptimalTime => {
            let t = optimal_cnot_time(a2, eta, params.kappa2_d)?;
            // Prep/meas/idle all last T*, each with loss error α²κ₁T*.
            let p = a2 * eta * params.kappa2_d * t;
            (t, p, p, 0.0, 0.0)
        }
        Strategy::FastSymmetric => {
            let t = 1.0 / params.kappa2_d;
            let p = a2 * eta;
            (t, p, p, p, 0.0)
        }
        Strategy::FastAsymmetric => {
            let theta = f64::from(params.theta()?);
            let t = 1.0 / params.kappa2_a;
            // Ancilla-side steps last 1/κ₂ᵃ: ancilla error α²κ₁ᵃ/κ₂ᵃ = α²η,
            // data idle error α²κ₁ᵈ/κ₂ᵃ = α²η/Θ. The cycle-end data refresh
            // lasts 1/κ₂ᵈ.
            (t, a2 * eta, a2 * eta / theta, a2 * eta, a2 * eta)
        }
    };
    for (op, p) in [
        ("preparation", p_prep),
        ("data idle", p_idle_data),
        ("ancilla refresh idle", p_idle_anc),
        ("data refresh", p_refresh_data),
    ] {
        check_prob(op, p)?;
    }
    let cnot = cnot_noise(params, t_step)?;
    let p_meas = p_prep;
    let rounds_per_cycle = match params.strategy {
        Strategy::FastAsymmetric => params.theta()? as usize,
        _ => 1,
    };

    // Interior data qubit, one full cycle: idle in every step it is not
    // gated (2 of 4 steps for the 4-step cycle, 3 of 5 otherwise), target
    // error in both CNOTs, data component of both hook faults, plus the
    // cycle-end refresh.
    let idle_steps_per_round = (params.strategy.steps_per_round() - 2) as f64;
    let p_data_round = idle_steps_per_round * p_idle_data + 2.0 * cnot.p_zd + 2.0 * cnot.p_zazd;
    let p_data_cycle = rounds_per_cycle as f64 * p_data_round + p_refresh_data;

    // One stabilizer readout: prep + meas + refresh idle + both CNOTs'
    // ancilla flips + ancilla component of both hooks.
    let p_za_counted = match params.strategy {
        Strategy::FastAsymmetric => cnot.p_za_loss,
        _ => cnot.p_za,
    };
    let q_meas_round = p_prep + p_meas + p_idle_anc + 2.0 * p_za_counted + 2.0 * cnot.p_zazd;
    let q_meas_cycle = rounds_per_cycle as f64 * q_meas_round;

    Ok(NoiseModel {
        params: *params,
        cnot,
        t_step,
        steps_per_round: params.strategy.steps_per_round(),
        rounds_per_cycle,
        p_prep,
        p_meas,
        p_idle_data,
        p_idle_anc,
        p_refresh_data,
        p_data_cycle,
        q_meas_cycle,
    })
}

/// Phenomenological error model: independent per-round data flips and
/// measurement flips.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhenomModel {
    /// Data phase-flip probability per qubit per measurement round.
    pub p_data: f64,
    /// Measurement flip probability per stabilizer per round.
    pub p_meas: f64,
}

impl PhenomModel {
    pub fn new(p_data: f64, p_meas: f64) -> Result<Self, ModelError> {
        check_prob("phenomenological data flip", p_data)?;
        check_prob("phenomenological measurement flip", p_meas)?;
        Ok(PhenomModel { p_data, p_meas })
    }
}

/// Collapse a circuit-level model to its phenomenological aggregates
/// `(p, q) = (p_data_cycle, q_meas_cycle)`.
///
/// Meaningful for the symmetric strategies (for `FastAsymmetric` the
/// measurement errors are correlated and not summarized by a single `q`);
/// asymmetric input is rejected.
pub fn phenom_model(noise: &NoiseModel) -> Result<PhenomModel, ModelError> {
    if noise.params.strategy == Strategy::FastAsymmetric {
        return Err(ModelError::InvalidParameter {
            name: "strategy",
            value: f64::NAN,
            constraint: "OptimalTime or FastSymmetric (asymmetric measurement errors are correlated)",
        });
    }
    PhenomModel::new(noise.p_data_cycle, noise.q_meas_cycle)
}
