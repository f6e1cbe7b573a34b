//! Pre-elimination gauge master equation: ancilla qubit ⊗ ancilla gauge ⊗
//! data gauge, each gauge mode truncated to `gauge_levels` Fock states.
//!
//! One CNOT of duration `T` evolves under
//!
//! ```text
//! dρ/dt = −i[H, ρ] + 4κ₂ᵃα² D[b_a]ρ + 4κ₂ᵈα² D[Z(2πt/T) ⊗ b_d]ρ
//! H     = (π / 4T) · Z ⊗ (b_a b_d + b_a† b_d†)
//! ```
//!
//! where `Z` is the ancilla-qubit Pauli and `Z(θ) = exp(iθZ/2)`. The
//! non-adiabatic part of the gate coherently exchanges excitation pairs
//! between the two gauge modes with an ancilla-conditioned sign; the fast
//! ancilla repump (`κ₂ᵃ`) turns that into incoherent data-gauge excitation,
//! which is the process the reduced two-branch model keeps.
//!
//! This integrator is the accuracy reference for
//! [`reduced`](super::reduced): with `gauge_levels = 2` it retains exactly
//! the states the reduced model keeps, and `gauge_levels = 3` exposes the
//! first truncation correction.

use nalgebra::DMatrix;
use num_complex::Complex;
use std::f64::consts::PI;

type C64 = Complex<f64>;
type Mat = DMatrix<C64>;

/// Three-mode CNOT integrator. Basis index `(q·G + g_a)·G + g_d` with
/// `q ∈ {0,1}` the ancilla qubit (Z basis) and `g_a, g_d < G` the gauge
/// occupations.
#[derive(Debug, Clone)]
pub struct OracleCnot {
    pub kappa2_a: f64,
    pub t_gate: f64,
    pub gauge_levels: usize,
    pub steps: u32,
    /// Ancilla repump rate `4 κ₂ᵃ α²`.
    repump_rate: f64,
    hamiltonian: Mat,
    jump_a: Mat,
    damp_a: Mat,
    jump_d: Mat,
    damp_d: Mat,
}

impl OracleCnot {
    pub fn new(
        alpha_sq: f64,
        kappa2_a: f64,
        kappa2_d: f64,
        t_gate: f64,
        gauge_levels: usize,
        steps: u32,
    ) -> Self {
        assert!(gauge_levels >= 2, "need at least two gauge states");
        let g = gauge_levels;
        let dim = 2 * g * g;
        let lower = lowering(g);
        let raise = lower.transpose();

        let mut hamiltonian = Mat::zeros(dim, dim);
        let coupling = kron(&lower, &lower) + kron(&raise, &raise);
        let scale = C64::new(PI / (4.0 * t_gate), 0.0);
        for q in 0..2 {
            let sign = if q == 0 { 1.0 } else { -1.0 };
            let block = &coupling * (scale * C64::new(sign, 0.0));
            let off = q * g * g;
            hamiltonian.view_mut((off, off), (g * g, g * g)).copy_from(&block);
        }

        let repump_rate = 4.0 * kappa2_a * alpha_sq;
        let rate_a = C64::new(repump_rate.sqrt(), 0.0);
        let rate_d = C64::new((4.0 * kappa2_d * alpha_sq).sqrt(), 0.0);
        let jump_a = kron(&identity(2), &kron(&lower, &identity(g))) * rate_a;
        let jump_d = kron(&identity(2), &kron(&identity(g), &lower)) * rate_d;
        let damp_a = jump_a.adjoint() * &jump_a;
        let damp_d = jump_d.adjoint() * &jump_d;

        OracleCnot {
            kappa2_a,
            t_gate,
            gauge_levels,
            steps,
            repump_rate,
            hamiltonian,
            jump_a,
            damp_a,
            jump_d,
            damp_d,
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.gauge_levels * self.gauge_levels
    }

    /// `|+⟩⟨+| ⊗ |0_a⟩⟨0_a| ⊗ |i_d⟩⟨i_d|`.
    pub fn initial(&self, data_gauge: usize) -> Mat {
        let g = self.gauge_levels;
        let mut rho = Mat::zeros(self.dim(), self.dim());
        let half = C64::new(0.5, 0.0);
        for q in 0..2 {
            for qp in 0..2 {
                rho[((q * g) * g + data_gauge, (qp * g) * g + data_gauge)] = half;
            }
        }
        rho
    }

    /// Evolve through one CNOT.
    pub fn evolve_cnot(&self, rho: Mat) -> Mat {
        let n = self.steps.max(1);
        let h = self.t_gate / n as f64;
        let mut state = rho;
        for k in 0..n {
            let t = k as f64 * h;
            let k1 = self.rhs(t, &state);
            let k2 = self.rhs(t + 0.5 * h, &(&state + &k1 * ch(0.5 * h)));
            let k3 = self.rhs(t + 0.5 * h, &(&state + &k2 * ch(0.5 * h)));
            let k4 = self.rhs(t + h, &(&state + &k3 * ch(h)));
            state += (k1 + k2 * ch(2.0) + k3 * ch(2.0) + k4) * ch(h / 6.0);
        }
        state
    }

    /// Condition on the data gauge occupying `j`: returns the unnormalized
    /// qubit ⊗ ancilla-gauge block `⟨·,·,j|ρ|·,·,j⟩` of dimension `2G`.
    pub fn project_data_gauge(&self, rho: &Mat, j: usize) -> Mat {
        let g = self.gauge_levels;
        let mut out = Mat::zeros(2 * g, 2 * g);
        for q in 0..2 {
            for ga in 0..g {
                for qp in 0..2 {
                    for gap in 0..g {
                        out[(q * g + ga, qp * g + gap)] =
                            rho[((q * g + ga) * g + j, (qp * g + gap) * g + j)];
                    }
                }
            }
        }
        out
    }

    /// Ancilla refresh between the two CNOTs of a check: only the ancilla
    /// repump acts, for a duration `1/κ₂ᵃ`, on the qubit ⊗ ancilla-gauge
    /// block.
    pub fn refresh(&self, sigma: Mat) -> Mat {
        let g = self.gauge_levels;
        let jump = kron(&identity(2), &lowering(g)) * ch(self.repump_rate.sqrt());
        let damp = jump.adjoint() * &jump;
        let duration = 1.0 / self.kappa2_a;
        let n = self.steps.max(1);
        let h = duration / n as f64;
        let mut state = sigma;
        let rhs = |s: &Mat| -> Mat {
            &jump * s * jump.adjoint() - (&damp * s + s * &damp) * ch(0.5)
        };
        for _ in 0..n {
            let k1 = rhs(&state);
            let k2 = rhs(&(&state + &k1 * ch(0.5 * h)));
            let k3 = rhs(&(&state + &k2 * ch(0.5 * h)));
            let k4 = rhs(&(&state + &k3 * ch(h)));
            state += (k1 + k2 * ch(2.0) + k3 * ch(2.0) + k4) * ch(h / 6.0);
        }
        state
    }

    /// Re-attach a fresh data gauge mode in state `|i⟩⟨i|`.
    pub fn embed_with_data(&self, sigma: &Mat, i: usize) -> Mat {
        let g = self.gauge_levels;
        let mut rho = Mat::zeros(self.dim(), self.dim());
        for q in 0..2 {
            for ga in 0..g {
                for qp in 0..2 {
                    for gap in 0..g {
                        rho[((q * g + ga) * g + i, (qp * g + gap) * g + i)] =
                            sigma[(q * g + ga, qp * g + gap)];
                    }
                }
            }
        }
        rho
    }

    /// `Σ_{g_a} ⟨−, g_a| σ |−, g_a⟩` on a qubit ⊗ ancilla-gauge block.
    pub fn minus_mass(&self, sigma: &Mat) -> f64 {
        let g = self.gauge_levels;
        let mut e = 0.0;
        for ga in 0..g {
            e += 0.5
                * (sigma[(ga, ga)] + sigma[(g + ga, g + ga)]
                    - sigma[(ga, g + ga)]
                    - sigma[(g + ga, ga)])
                    .re;
        }
        e
    }

    pub fn block_trace(sigma: &Mat) -> f64 {
        sigma.diagonal().iter().map(|c| c.re).sum()
    }

    fn rhs(&self, t: f64, rho: &Mat) -> Mat {
        let mut d = &self.hamiltonian * rho - rho * &self.hamiltonian;
        d *= C64::new(0.0, -1.0);
        d += &self.jump_a * rho * self.jump_a.adjoint();
        let mut hop = &self.jump_d * rho * self.jump_d.adjoint();
        self.apply_qubit_phase(&mut hop, 2.0 * PI * t / self.t_gate);
        d += hop;
        d -= (&self.damp_a * rho + rho * &self.damp_a) * ch(0.5);
        d -= (&self.damp_d * rho + rho * &self.damp_d) * ch(0.5);
        d
    }

    /// Conjugate by `Z(θ) ⊗ I ⊗ I`: multiplies the qubit-off-diagonal
    /// blocks by `e^{±iθ}`. Applied to the data-gauge jump term, this turns
    /// `b_d ρ b_d†` into `(Z(θ)⊗b_d) ρ (Z(θ)⊗b_d)†`.
    fn apply_qubit_phase(&self, m: &mut Mat, theta: f64) {
        let g2 = self.gauge_levels * self.gauge_levels;
        let p = C64::from_polar(1.0, theta);
        for r in 0..g2 {
            for c in 0..g2 {
                m[(r, g2 + c)] *= p;
                m[(g2 + r, c)] *= p.conj();
            }
        }
    }
}

fn ch(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

/// Fock lowering operator `b|n⟩ = √n |n−1⟩` truncated to `g` levels.
fn lowering(g: usize) -> Mat {
    let mut b = Mat::zeros(g, g);
    for n in 1..g {
        b[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    b
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}
