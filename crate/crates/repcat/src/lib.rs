//! Monte Carlo simulator and analysis toolkit for the repetition cat code.
//!
//! A repetition cat qubit stores a logical qubit in `d` dissipatively
//! stabilized cat qubits whose bit-flips are exponentially suppressed in the
//! mean photon number `α²`; the remaining phase-flips are corrected by a
//! distance-`d` repetition code whose `d − 1` XX stabilizers are read out
//! through bias-preserving CNOTs onto ancilla cat qubits. This crate covers
//! the full pipeline for estimating the logical performance of such a memory:
//!
//! * [`error_model`] — per-operation phase-flip/bit-flip probabilities from
//!   the physical parameters `(α², η = κ₁/κ₂, κ₂ᵃ, κ₂ᵈ)` and the measurement
//!   scheduling strategy.
//! * [`gauge`] — integrators for the shifted-Fock-basis master equations of
//!   the CNOT, the classical gauge-bit leakage tables they induce, and the
//!   repeated-measurement toy circuit quantifying leakage-induced
//!   measurement-error correlations.
//! * [`circuit`] and [`sampler`] — enumeration of elementary fault locations
//!   with propagated detection signatures, and reproducible syndrome
//!   sampling (counter-seeded, worker-count independent).
//! * [`decoder`] — weighted space-time detection graph, exact minimum-weight
//!   perfect matching (integer-weight blossom), and a brute-force oracle.
//! * [`analysis`] — campaign driver with failure-count stopping rules,
//!   threshold fits of `p_ZL = a·d·(x/x_th)^(c·D)`, and qubit-overhead
//!   optimization.
//! * [`shots`] — the binary shot interchange format.
//!
//! All rates are expressed in units of the data-qubit two-photon rate
//! (`κ₂ᵈ = 1`) unless a function documents otherwise.

pub mod circuit;
pub mod error_model;
pub mod gauge;

pub use error_model::{
    build_noise_model, cnot_noise, optimal_cnot_time, phenom_model, CatParams, CnotNoise,
    ModelError, NoiseModel, PhenomModel, Strategy,
};
