//! Reduced two-branch master equation for one CNOT after adiabatic
//! elimination of the ancilla gauge mode.
//!
//! The state is a pair of (unnormalized) 2×2 ancilla-qubit density matrices
//! `(ρ₀, ρ₁)`, one per data gauge-bit value. Over a CNOT of duration `T`
//! they evolve as
//!
//! ```text
//! dρ₀/dt = r₁ · Z(2πt/T) ρ₁ Z(2πt/T)†  −  r₂ · ρ₀
//! dρ₁/dt = r₂ · Z ρ₀ Z                 −  r₁ · ρ₁
//! ```
//!
//! with `Z(θ) = exp(iθZ/2)`, excitation rate `r₂ = π²/(16 α² κ₂ᵃ T²)` (the
//! non-adiabatic coupling strength squared over the ancilla gauge decay
//! rate) and relaxation rate `r₁ = 4 κ₂ᵈ α²`. An upward jump of the gauge
//! bit applies a full ancilla `Z`; the downward jump applies the
//! partially-rotated `Z(2πt/T)`, so a round trip completed at time `t₂`
//! leaves the ancilla flipped with probability `cos²(πt₂/T)`.
//!
//! Branch traces follow the classical two-state rate equation regardless of
//! the matrix contents, which is what makes the gauge bit a valid classical
//! register on top of per-transition Kraus maps.

use nalgebra::Matrix2;
use num_complex::Complex;
use std::f64::consts::PI;

type C64 = Complex<f64>;
type M2 = Matrix2<C64>;

/// Rates and duration of one reduced-model CNOT.
#[derive(Debug, Clone, Copy)]
pub struct ReducedCnot {
    /// Gauge-bit relaxation rate `4 κ₂ᵈ α²`.
    pub r1: f64,
    /// Gauge-bit excitation rate `π²/(16 α² κ₂ᵃ T²)`.
    pub r2: f64,
    /// Gate duration.
    pub t_gate: f64,
    /// RK4 step count.
    pub steps: u32,
}

impl ReducedCnot {
    pub fn new(alpha_sq: f64, kappa2_a: f64, kappa2_d: f64, t_gate: f64, steps: u32) -> Self {
        ReducedCnot {
            r1: 4.0 * kappa2_d * alpha_sq,
            r2: PI * PI / (16.0 * alpha_sq * kappa2_a * t_gate * t_gate),
            t_gate,
            steps,
        }
    }

    /// Evolve the branch pair through one full gate.
    pub fn evolve(&self, rho0: M2, rho1: M2) -> (M2, M2) {
        let n = self.steps.max(1);
        let h = self.t_gate / n as f64;
        let (mut a, mut b) = (rho0, rho1);
        for k in 0..n {
            let t = k as f64 * h;
            let (k1a, k1b) = self.rhs(t, &a, &b);
            let (k2a, k2b) = self.rhs(t + 0.5 * h, &(a + k1a * ch(0.5 * h)), &(b + k1b * ch(0.5 * h)));
            let (k3a, k3b) = self.rhs(t + 0.5 * h, &(a + k2a * ch(0.5 * h)), &(b + k2b * ch(0.5 * h)));
            let (k4a, k4b) = self.rhs(t + h, &(a + k3a * ch(h)), &(b + k3b * ch(h)));
            a += (k1a + k2a * ch(2.0) + k3a * ch(2.0) + k4a) * ch(h / 6.0);
            b += (k1b + k2b * ch(2.0) + k3b * ch(2.0) + k4b) * ch(h / 6.0);
        }
        (a, b)
    }

    /// Kraus maps of one CNOT: start the gauge bit in `start` with ancilla
    /// state `rho`, return the unnormalized branch outputs `[K₀(ρ), K₁(ρ)]`
    /// indexed by the final gauge bit.
    pub fn kraus(&self, start: u8, rho: M2) -> [M2; 2] {
        let zero = M2::zeros();
        let (rho0, rho1) = if start == 0 { (rho, zero) } else { (zero, rho) };
        let (out0, out1) = self.evolve(rho0, rho1);
        [out0, out1]
    }

    fn rhs(&self, t: f64, rho0: &M2, rho1: &M2) -> (M2, M2) {
        let theta = 2.0 * PI * t / self.t_gate;
        let d0 = zrot_conj(rho1, theta) * ch(self.r1) - rho0 * ch(self.r2);
        let d1 = z_conj(rho0) * ch(self.r2) - rho1 * ch(self.r1);
        (d0, d1)
    }
}

fn ch(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `Z ρ Z†` for the full Pauli `Z`: off-diagonal sign flip.
fn z_conj(rho: &M2) -> M2 {
    M2::new(rho[(0, 0)], -rho[(0, 1)], -rho[(1, 0)], rho[(1, 1)])
}

/// `Z(θ) ρ Z(θ)†` with `Z(θ) = diag(e^{iθ/2}, e^{−iθ/2})`.
fn zrot_conj(rho: &M2, theta: f64) -> M2 {
    let p = C64::from_polar(1.0, theta);
    M2::new(rho[(0, 0)], rho[(0, 1)] * p, rho[(1, 0)] * p.conj(), rho[(1, 1)])
}

/// `|+⟩⟨+|` in the Z basis.
pub fn plus_state() -> M2 {
    M2::from_element(ch(0.5))
}

/// `⟨−|ρ|−⟩`: probability of reading the wrong ancilla X outcome.
pub fn minus_population(rho: &M2) -> f64 {
    0.5 * (rho[(0, 0)] + rho[(1, 1)] - rho[(0, 1)] - rho[(1, 0)]).re
}

pub fn trace(rho: &M2) -> f64 {
    (rho[(0, 0)] + rho[(1, 1)]).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tr(m: &M2) -> f64 {
        trace(m)
    }

    /// Branch populations obey the classical two-state rate equation, so
    /// against the closed form `w₁(t) = r₂/(r₁+r₂) · (1 − e^{−(r₁+r₂)t})`
    /// (start in branch 0) the integrator must agree to its own accuracy.
    #[test]
    fn populations_match_two_state_closed_form() {
        for &(a2, theta) in &[(8.0, 5.0), (10.0, 11.0), (4.0, 20.0)] {
            let t = 1.0 / theta;
            let cnot = ReducedCnot::new(a2, theta, 1.0, t, 2000);
            let (r1, r2) = (cnot.r1, cnot.r2);
            let [out0, out1] = cnot.kraus(0, plus_state());
            let w1 = r2 / (r1 + r2) * (1.0 - (-(r1 + r2) * t).exp());
            assert_relative_eq!(tr(&out1), w1, max_relative = 1e-9);
            assert_relative_eq!(tr(&out0) + tr(&out1), 1.0, epsilon = 1e-12);
        }
    }

    /// With relaxation switched off (`r₁ = 0`) the solution is exact: the
    /// no-jump branch decays as `e^{−r₂t}` with no ancilla error, and the
    /// jumped branch carries a full `Z`, i.e. a certain flip.
    #[test]
    fn pure_excitation_is_exact() {
        let mut cnot = ReducedCnot::new(10.0, 1.0, 1.0, 1.0, 2000);
        cnot.r1 = 0.0;
        let [out0, out1] = cnot.kraus(0, plus_state());
        let up = 1.0 - (-cnot.r2).exp();
        assert_relative_eq!(tr(&out0), 1.0 - up, max_relative = 1e-10);
        assert_relative_eq!(minus_population(&out0), 0.0, epsilon = 1e-12);
        assert_relative_eq!(tr(&out1), up, max_relative = 1e-10);
        assert_relative_eq!(minus_population(&out1), tr(&out1), max_relative = 1e-10);
    }

    /// With excitation switched off (`r₂ = 0`) and the gauge bit starting
    /// up, the downward jump at time `t` applies `Z(2πt/T)`, flipping the
    /// ancilla with probability `sin²(πt/T)`. Integrating against the jump
    /// time density gives exactly
    /// `E[1→0] = ½ (1 − e^{−r₁T}) ω² / (r₁² + ω²)` with `ω = 2π/T`.
    #[test]
    fn pure_relaxation_flip_mass_is_exact() {
        for &(a2, theta) in &[(8.0, 20.0), (10.0, 11.0), (6.0, 2.0)] {
            let t: f64 = 1.0 / theta;
            let mut cnot = ReducedCnot::new(a2, theta, 1.0, t, 3000);
            cnot.r2 = 0.0;
            let [out0, out1] = cnot.kraus(1, plus_state());
            let (r1, omega) = (cnot.r1, 2.0 * PI / t);
            let survive = (-r1 * t).exp();
            let expect = 0.5 * (1.0 - survive) * omega * omega / (r1 * r1 + omega * omega);
            assert_relative_eq!(minus_population(&out0), expect, max_relative = 1e-9);
            assert_relative_eq!(tr(&out0), 1.0 - survive, max_relative = 1e-9);
            // The surviving branch has had no operator applied at all.
            assert_relative_eq!(minus_population(&out1), 0.0, epsilon = 1e-12);
        }
    }

    /// Halving the step size must not move the answer: the integrator is
    /// well inside its convergence regime at the default resolution.
    #[test]
    fn step_doubling_is_converged() {
        let coarse = ReducedCnot::new(8.0, 20.0, 1.0, 0.05, 2000);
        let fine = ReducedCnot::new(8.0, 20.0, 1.0, 0.05, 4000);
        let [c0, c1] = coarse.kraus(0, plus_state());
        let [f0, f1] = fine.kraus(0, plus_state());
        for (c, f) in [(&c0, &f0), (&c1, &f1)] {
            assert!((tr(c) - tr(f)).abs() < 1e-11);
            assert!((minus_population(c) - minus_population(f)).abs() < 1e-11);
        }
    }

    /// Total trace across branches is conserved to integrator accuracy.
    #[test]
    fn trace_conservation() {
        let cnot = ReducedCnot::new(4.0, 5.0, 1.0, 0.2, 4000);
        let (out0, out1) = cnot.evolve(plus_state() * ch(0.3), plus_state() * ch(0.7));
        assert_relative_eq!(tr(&out0) + tr(&out1), 1.0, epsilon = 1e-10);
    }
}
