//! Reproducible syndrome sampling over enumerated fault classes.
//!
//! A shot is a deterministic function of `(seed, shot_index)`: the generator
//! is ChaCha8 seeded with `seed` on stream `shot_index`, so shots can be
//! sampled in any order, on any number of workers, with bit-identical
//! results. The draw order within a shot is part of that contract: one
//! Bernoulli per fault class in [`CircuitFaults::classes`] order, then (for
//! asymmetric operation) the gauge walk of [`GaugeNoise`] round by round.
//!
//! Sampling happens at the level of merged fault classes with propagated
//! detector signatures; no quantum state is tracked. This is exact because
//! the phase-flip error process is classical here: every elementary fault
//! commutes onto a fixed set of flipped detectors plus a possible logical
//! flip, and independent Bernoullis with XOR-composed probabilities
//! reproduce the joint detector distribution of the elementary mechanisms.
//!
//! Asymmetric operation adds the one non-classical ingredient as a classical
//! hidden-Markov layer: each data qubit carries a persistent gauge bit that
//! may be excited by each CNOT it participates in and is cleared by the
//! cycle-end refresh. Stabilizer readouts then flip with the probability the
//! leakage table assigns to the pair of adjacent gauge-bit transitions,
//! which makes consecutive readout errors of one stabilizer positively
//! correlated within a cycle. [`CorrelationMode::Decorrelated`] replaces
//! those conditional probabilities by their per-position marginals, keeping
//! the average error rate while destroying the correlations; comparing the
//! two isolates what correlations do to the logical error rate.

use crate::circuit::{CircuitFaults, DetectorId};
use crate::error_model::{NoiseModel, Strategy};
use crate::gauge::{meas_error_profile, LeakageTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Detection events of one shot, plus the ground-truth logical flip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeHistory {
    /// Detector rows: noisy rounds plus the final perfect-readout row.
    pub rows: usize,
    /// Checks per row (`d − 1`).
    pub checks: usize,
    /// Row-major detector flips, indexed like [`CircuitFaults::node_index`].
    pub detections: Vec<bool>,
    /// Whether the accumulated data errors flip the logical X readout.
    /// Hidden from the decoder; used to score corrections.
    pub true_logical_flip: bool,
}

impl SyndromeHistory {
    pub fn detection(&self, row: usize, check: usize) -> bool {
        debug_assert!(row < self.rows && (1..=self.checks).contains(&check));
        self.detections[row * self.checks + (check - 1)]
    }

    /// Indices of fired detectors (the matching problem's defect set).
    pub fn defects(&self) -> Vec<usize> {
        (0..self.detections.len()).filter(|&n| self.detections[n]).collect()
    }
}

/// Whether the gauge walk uses the conditional table entries or their
/// per-position marginals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationMode {
    /// Readout errors conditioned on the sampled gauge transitions.
    Correlated,
    /// Same marginal error rates, no dependence on the gauge state.
    Decorrelated,
}

/// Precomputed gauge-walk tables for asymmetric sampling.
#[derive(Debug, Clone)]
pub struct GaugeNoise {
    mode: CorrelationMode,
    /// `P(bit ends 1 | bit starts i)` across one CNOT.
    up: [f64; 2],
    /// `P(readout flip | first CNOT transition i→j, second i′→j′)`.
    cond: [[[[f64; 2]; 2]; 2]; 2],
    /// Marginal readout-flip probability by (fast round in cycle, check).
    profile: Vec<Vec<f64>>,
}

impl GaugeNoise {
    /// Build the walk tables for a `distance`-qubit code from a leakage
    /// table. The marginal profile is the exact chain marginal for each
    /// fast-round position and check, so the decorrelated mode and the
    /// decoder weights agree with the correlated mode's averages by
    /// construction.
    pub fn new(table: &LeakageTable, distance: usize, mode: CorrelationMode) -> Self {
        let up = [table.single[0][1].weight, table.single[1][1].weight];
        let mut cond = [[[[0.0; 2]; 2]; 2]; 2];
        for (i, j, ip, jp) in itertools_4() {
            cond[i][j][ip][jp] = table.pair_entry(i, j, ip, jp).error_given_transition();
        }
        GaugeNoise { mode, up, cond, profile: meas_error_profile(table, distance) }
    }

    pub fn mode(&self) -> CorrelationMode {
        self.mode
    }

    pub fn profile(&self) -> &[Vec<f64>] {
        &self.profile
    }

    /// Walk the gauge register through every fast round, flipping readout
    /// detectors in `flips`. Draw order: layer-1 transitions for qubits
    /// `1..d`, layer-2 transitions for qubits `2..=d`, then one readout
    /// draw per check; gauge bits reset at each cycle boundary.
    fn walk(&self, faults: &CircuitFaults, rng: &mut ChaCha8Rng, flips: &mut [bool]) {
        let d = faults.distance;
        let theta = faults.rounds_per_cycle;
        assert_eq!(self.profile.len(), theta, "table cycle length must match the circuit");
        assert_eq!(self.profile[0].len(), d - 1, "profile must cover every check");

        let mut bits = vec![0u8; d + 1]; // gauge bit of data qubit q, 1-based
        let mut first = vec![(0usize, 0usize); d + 1]; // q's transition with check q
        let mut second = vec![(0usize, 0usize); d + 1]; // q's transition with check q−1
        for r in 0..faults.noisy_rounds {
            match self.mode {
                CorrelationMode::Correlated => {
                    for q in 1..d {
                        let i = bits[q] as usize;
                        let j = usize::from(rng.random::<f64>() < self.up[i]);
                        first[q] = (i, j);
                        bits[q] = j as u8;
                    }
                    for q in 2..=d {
                        let i = bits[q] as usize;
                        let j = usize::from(rng.random::<f64>() < self.up[i]);
                        second[q] = (i, j);
                        bits[q] = j as u8;
                    }
                    for s in 1..d {
                        let (i, j) = first[s];
                        let (ip, jp) = second[s + 1];
                        if rng.random::<f64>() < self.cond[i][j][ip][jp] {
                            flip_readout(faults, flips, r, s);
                        }
                    }
                }
                CorrelationMode::Decorrelated => {
                    let row = &self.profile[r % theta];
                    for s in 1..d {
                        if rng.random::<f64>() < row[s - 1] {
                            flip_readout(faults, flips, r, s);
                        }
                    }
                }
            }
            // Cycle-end data refresh removes leakage.
            if (r + 1) % theta == 0 {
                bits.fill(0);
            }
        }
    }
}

fn itertools_4() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..16).map(|n| (n >> 3 & 1, n >> 2 & 1, n >> 1 & 1, n & 1))
}

fn flip_readout(faults: &CircuitFaults, flips: &mut [bool], round: usize, check: usize) {
    let (r, s) = (round as u32, check as u32);
    flips[faults.node_index(DetectorId { row: r, check: s })] ^= true;
    flips[faults.node_index(DetectorId { row: r + 1, check: s })] ^= true;
}

/// The generator contract: `seed` selects the campaign point, the stream
/// selects the shot, so any subset of shots can be drawn independently.
pub fn shot_rng(seed: u64, shot_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot_index);
    rng
}

/// Sample one shot. `gauge` must be provided exactly when the fault set was
/// built for asymmetric operation (`rounds_per_cycle > 1`).
pub fn sample_shot(
    faults: &CircuitFaults,
    gauge: Option<&GaugeNoise>,
    seed: u64,
    shot_index: u64,
) -> SyndromeHistory {
    assert_eq!(
        faults.rounds_per_cycle > 1,
        gauge.is_some(),
        "gauge walk required exactly for asymmetric fault sets"
    );
    let mut rng = shot_rng(seed, shot_index);
    let mut detections = vec![false; faults.node_count()];
    let mut logical = false;
    for class in &faults.classes {
        if rng.random::<f64>() < class.probability {
            for det in &class.detectors {
                detections[faults.node_index(*det)] ^= true;
            }
            logical ^= class.flips_logical;
        }
    }
    if let Some(gauge) = gauge {
        gauge.walk(faults, &mut rng, &mut detections);
    }
    SyndromeHistory {
        rows: faults.rows(),
        checks: faults.checks(),
        detections,
        true_logical_flip: logical,
    }
}

/// Which fault classes fired in one shot, in [`CircuitFaults::classes`]
/// order — the same draws `sample_shot` makes before the gauge walk.
/// Diagnostic layer for calibration and tests.
pub fn sample_fault_indicators(faults: &CircuitFaults, seed: u64, shot_index: u64) -> Vec<bool> {
    let mut rng = shot_rng(seed, shot_index);
    faults.classes.iter().map(|class| rng.random::<f64>() < class.probability).collect()
}

/// One elementary fault mechanism of the calibration harness, before any
/// class merging: hooks flip both lines at once.
#[derive(Debug, Clone, Copy)]
pub struct Mechanism {
    pub probability: f64,
    pub flips_data: bool,
    pub flips_readout: bool,
}

/// Elementary mechanisms touching one interior data qubit over one
/// measurement round and one stabilizer readout: the pre-merge layer that
/// the per-cycle aggregates sum linearly. Asymmetric models contribute only
/// their loss-induced readout terms here (the leakage table owns the rest),
/// and the cycle-end refresh is excluded (it is per cycle, not per round).
pub fn round_mechanisms(noise: &NoiseModel) -> Vec<Mechanism> {
    let mech = |probability: f64, flips_data: bool, flips_readout: bool| Mechanism {
        probability,
        flips_data,
        flips_readout,
    };
    let idle_steps = noise.steps_per_round - 2;
    let anc_idles = noise.steps_per_round - 4;
    let p_za = match noise.params.strategy {
        Strategy::FastAsymmetric => noise.cnot.p_za_loss,
        _ => noise.cnot.p_za,
    };
    let mut list = Vec::new();
    list.extend(vec![mech(noise.p_idle_data, true, false); idle_steps]);
    list.push(mech(noise.cnot.p_zd, true, false)); // first CNOT, target error
    list.push(mech(noise.cnot.p_zd, true, false)); // second CNOT, target error
    list.push(mech(noise.cnot.p_zazd, true, true)); // first-CNOT hook
    list.push(mech(noise.cnot.p_zazd, true, true)); // second-CNOT hook
    list.push(mech(noise.p_prep, false, true));
    list.push(mech(noise.p_meas, false, true));
    list.extend(vec![mech(noise.p_idle_anc, false, true); anc_idles]);
    list.push(mech(p_za, false, true)); // first CNOT, control error
    list.push(mech(p_za, false, true)); // second CNOT, control error
    list
}

/// Empirical `(data-line, readout-line)` flip rates per round over `shots`
/// samples of the mechanism layer, for calibration against the model's
/// linear per-cycle aggregates.
pub fn empirical_round_rates(noise: &NoiseModel, seed: u64, shots: u64) -> (f64, f64) {
    let mechanisms = round_mechanisms(noise);
    let (mut data_flips, mut readout_flips) = (0u64, 0u64);
    for shot in 0..shots {
        let mut rng = shot_rng(seed, shot);
        let (mut data, mut readout) = (false, false);
        for m in &mechanisms {
            if rng.random::<f64>() < m.probability {
                data ^= m.flips_data;
                readout ^= m.flips_readout;
            }
        }
        data_flips += u64::from(data);
        readout_flips += u64::from(readout);
    }
    (data_flips as f64 / shots as f64, readout_flips as f64 / shots as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_faults, phenom_faults, xor_fold, FaultKind};
    use crate::error_model::{build_noise_model, CatParams, PhenomModel};
    use crate::gauge::{build_leakage_table, IntegratorSettings, TableSource};

    fn phenom(p_data: f64, p_meas: f64) -> PhenomModel {
        PhenomModel::new(p_data, p_meas).unwrap()
    }

    #[test]
    fn no_noise_means_no_detections() {
        let faults = phenom_faults(&phenom(0.0, 0.0), 5, 3);
        let shot = sample_shot(&faults, None, 7, 0);
        assert!(shot.detections.iter().all(|&b| !b));
        assert!(!shot.true_logical_flip);
        assert!(shot.defects().is_empty());
    }

    /// Deterministic limit: every data qubit flips, so stabilizer parities
    /// are unchanged (interior flips cancel pairwise) but the logical
    /// readout is flipped.
    #[test]
    fn certain_data_flips_cancel_in_detections() {
        let faults = phenom_faults(&phenom(1.0, 0.0), 3, 1);
        for shot_index in 0..32 {
            let shot = sample_shot(&faults, None, 11, shot_index);
            assert!(shot.detections.iter().all(|&b| !b));
            assert!(shot.true_logical_flip);
        }
    }

    #[test]
    fn shots_are_deterministic_and_independent_of_order() {
        let noise = build_noise_model(&CatParams::symmetric(8.0, 1e-3, Strategy::FastSymmetric))
            .unwrap();
        let faults = circuit_faults(&noise, 5, 4);
        let forward: Vec<_> = (0..64).map(|i| sample_shot(&faults, None, 3, i)).collect();
        let backward: Vec<_> = (0..64).rev().map(|i| sample_shot(&faults, None, 3, i)).collect();
        for (i, shot) in forward.iter().enumerate() {
            assert_eq!(*shot, backward[63 - i]);
            assert_eq!(*shot, sample_shot(&faults, None, 3, i as u64));
        }
        // Different streams actually differ somewhere.
        assert!(forward.windows(2).any(|w| w[0] != w[1]));
    }

    /// With measurement noise only, each detection column XORs to zero:
    /// outcome flips telescope out of the round-to-round differences.
    #[test]
    fn measurement_only_columns_telescope() {
        let faults = phenom_faults(&phenom(0.0, 0.3), 4, 5);
        for shot_index in 0..200 {
            let shot = sample_shot(&faults, None, 23, shot_index);
            for s in 1..=shot.checks {
                let parity = (0..shot.rows).fold(false, |acc, r| acc ^ shot.detection(r, s));
                assert!(!parity, "column {s} must telescope to the perfect readout");
            }
        }
    }

    /// Empirical detector rates match the exact XOR composition of the
    /// classes covering each detector (distribution-level check of the
    /// sampling, not just of single classes).
    #[test]
    fn detector_rates_match_class_composition() {
        let faults = phenom_faults(&phenom(0.1, 0.05), 3, 2);
        let shots = 100_000u64;
        let mut counts = vec![0u64; faults.node_count()];
        for shot_index in 0..shots {
            let shot = sample_shot(&faults, None, 41, shot_index);
            for (n, &hit) in shot.detections.iter().enumerate() {
                counts[n] += u64::from(hit);
            }
        }
        for n in 0..faults.node_count() {
            let p_exact = faults
                .classes
                .iter()
                .filter(|c| c.detectors.iter().any(|&det| faults.node_index(det) == n))
                .map(|c| c.probability)
                .fold(0.0, crate::circuit::xor_prob);
            let p_hat = counts[n] as f64 / shots as f64;
            let sigma = (p_exact * (1.0 - p_exact) / shots as f64).sqrt();
            assert!(
                (p_hat - p_exact).abs() < 4.5 * sigma,
                "node {n}: {p_hat} vs {p_exact} (sigma {sigma})"
            );
        }
    }

    #[test]
    fn indicators_agree_with_sampled_detections() {
        let noise =
            build_noise_model(&CatParams::symmetric(8.0, 1e-2, Strategy::OptimalTime)).unwrap();
        let faults = circuit_faults(&noise, 5, 3);
        for shot_index in 0..100 {
            let fired = sample_fault_indicators(&faults, 97, shot_index);
            let mut detections = vec![false; faults.node_count()];
            let mut logical = false;
            for (class, hit) in faults.classes.iter().zip(&fired) {
                if *hit {
                    for det in &class.detectors {
                        detections[faults.node_index(*det)] ^= true;
                    }
                    logical ^= class.flips_logical;
                }
            }
            let shot = sample_shot(&faults, None, 97, shot_index);
            assert_eq!(shot.detections, detections);
            assert_eq!(shot.true_logical_flip, logical);
        }
    }

    /// Mechanism-level calibration: empirical per-round data and readout
    /// flip rates reproduce the model's linear aggregates. At this η the
    /// XOR-vs-sum distinction is far below the statistical resolution.
    #[test]
    fn fast_symmetric_rates_match_aggregates() {
        let (a2, eta) = (8.0, 1e-4);
        let noise =
            build_noise_model(&CatParams::symmetric(a2, eta, Strategy::FastSymmetric)).unwrap();
        let shots = 200_000u64;
        let (p_hat, q_hat) = empirical_round_rates(&noise, 131, shots);
        let p_expect = 5.0 * a2 * eta;
        let q_expect = 0.318 / a2 + 6.0 * a2 * eta;
        let sigma = |p: f64| (p * (1.0 - p) / shots as f64).sqrt();
        assert!(
            (p_hat - p_expect).abs() < 4.0 * sigma(p_expect),
            "data line: {p_hat} vs {p_expect}"
        );
        assert!(
            (q_hat - q_expect).abs() < 4.0 * sigma(q_expect),
            "readout line: {q_hat} vs {q_expect}"
        );
    }

    fn asym_setup(theta: u32) -> (CircuitFaults, LeakageTable) {
        // η = 0 silences every κ₁-induced class, leaving the table-driven
        // readout errors as the only fault process: detector prefix-XOR
        // recovers the raw readout errors exactly.
        let noise = build_noise_model(&CatParams::asymmetric(8.0, 0.0, theta)).unwrap();
        let faults = circuit_faults(&noise, 3, 4 * theta as usize);
        let table = build_leakage_table(
            8.0,
            theta,
            IntegratorSettings { steps_per_gate: 600 },
            TableSource::Reduced,
        )
        .unwrap();
        assert!(faults.classes.is_empty());
        (faults, table)
    }

    /// Recover the per-(round, check) readout-error indicators of a shot.
    fn readout_errors(shot: &SyndromeHistory) -> Vec<Vec<bool>> {
        let rounds = shot.rows - 1;
        (0..rounds)
            .map(|r| {
                (1..=shot.checks)
                    .map(|s| (0..=r).fold(false, |acc, rr| acc ^ shot.detection(rr, s)))
                    .collect()
            })
            .collect()
    }

    /// Correlated-mode marginals match the exact chain profile per fast
    /// round position; the decorrelated mode shares them by construction.
    #[test]
    fn walk_marginals_match_profile() {
        let theta = 5;
        let (faults, table) = asym_setup(theta);
        let gauge = GaugeNoise::new(&table, 3, CorrelationMode::Correlated);
        let shots = 60_000u64;
        let rounds = faults.noisy_rounds;
        let mut counts = vec![vec![0u64; 2]; rounds];
        for shot_index in 0..shots {
            let shot = sample_shot(&faults, Some(&gauge), 173, shot_index);
            let errors = readout_errors(&shot);
            for (r, row) in errors.iter().enumerate() {
                for (c, &e) in row.iter().enumerate() {
                    counts[r][c] += u64::from(e);
                }
            }
        }
        for r in 0..rounds {
            for c in 0..2 {
                let expect = gauge.profile()[r % theta as usize][c];
                let hat = counts[r][c] as f64 / shots as f64;
                let sigma = (expect * (1.0 - expect) / shots as f64).sqrt();
                assert!(
                    (hat - expect).abs() < 4.5 * sigma,
                    "round {r} check {}: {hat} vs {expect}",
                    c + 1
                );
            }
        }
    }

    /// Consecutive same-check readout errors inside a cycle covary
    /// positively in correlated mode and not measurably in decorrelated
    /// mode.
    #[test]
    fn correlation_sign_flips_with_mode() {
        let theta = 5;
        let (faults, table) = asym_setup(theta);
        let shots = 60_000u64;
        let mut stats = Vec::new();
        for mode in [CorrelationMode::Correlated, CorrelationMode::Decorrelated] {
            let gauge = GaugeNoise::new(&table, 3, mode);
            let (mut n, mut sx, mut sy, mut sxy) = (0u64, 0u64, 0u64, 0u64);
            for shot_index in 0..shots {
                let shot = sample_shot(&faults, Some(&gauge), 211, shot_index);
                let errors = readout_errors(&shot);
                for r in 0..errors.len() - 1 {
                    if r % theta as usize == theta as usize - 1 {
                        continue; // skip pairs straddling a refresh
                    }
                    for s in 0..2 {
                        let (x, y) = (errors[r][s], errors[r + 1][s]);
                        n += 1;
                        sx += u64::from(x);
                        sy += u64::from(y);
                        sxy += u64::from(x && y);
                    }
                }
            }
            let (n, sx, sy, sxy) = (n as f64, sx as f64, sy as f64, sxy as f64);
            let cov = sxy / n - (sx / n) * (sy / n);
            // Conservative scale for the covariance standard error.
            let sigma = ((sxy / n) * (1.0 - sxy / n) / n).sqrt().max(1e-9) * 1.5;
            stats.push((cov, sigma));
        }
        let (cov_corr, sig_corr) = stats[0];
        let (cov_ind, sig_ind) = stats[1];
        assert!(cov_corr > 5.0 * sig_corr, "correlated covariance {cov_corr} ± {sig_corr}");
        assert!(cov_ind.abs() < 5.0 * sig_ind, "decorrelated covariance {cov_ind} ± {sig_ind}");
        assert!(cov_corr > 10.0 * cov_ind.abs().max(1e-12));
    }

    /// The class pass and the walk compose: with κ₁ noise on, asymmetric
    /// shots still reproduce the κ₁-only measurement class rate at a
    /// detector that the walk also feeds.
    #[test]
    fn asym_classes_and_walk_compose() {
        let theta = 4;
        let noise = build_noise_model(&CatParams::asymmetric(8.0, 1e-3, theta)).unwrap();
        let faults = circuit_faults(&noise, 3, 2 * theta as usize);
        let table = build_leakage_table(
            8.0,
            theta as u32,
            IntegratorSettings { steps_per_gate: 600 },
            TableSource::Reduced,
        )
        .unwrap();
        let gauge = GaugeNoise::new(&table, 3, CorrelationMode::Correlated);
        let shots = 40_000u64;
        // Node (0, 1): fed by the round-0 measurement class, start classes
        // of qubits 1 and 2 at rows 0, the mid class of round 0, and the
        // walk's round-0 readout flip of check 1.
        let node = faults.node_index(DetectorId { row: 0, check: 1 });
        let mut class_xor = 0.0;
        for class in &faults.classes {
            if class.detectors.iter().any(|&det| faults.node_index(det) == node) {
                class_xor = xor_fold(&[class_xor, class.probability]);
            }
        }
        let expect = xor_fold(&[class_xor, gauge.profile()[0][0]]);
        let mut count = 0u64;
        for shot_index in 0..shots {
            let shot = sample_shot(&faults, Some(&gauge), 307, shot_index);
            count += u64::from(shot.detections[node]);
        }
        let hat = count as f64 / shots as f64;
        let sigma = (expect * (1.0 - expect) / shots as f64).sqrt();
        assert!((hat - expect).abs() < 4.5 * sigma, "{hat} vs {expect}");
    }

    #[test]
    #[should_panic(expected = "gauge walk required")]
    fn asym_without_table_is_rejected() {
        let noise = build_noise_model(&CatParams::asymmetric(8.0, 1e-3, 3)).unwrap();
        let faults = circuit_faults(&noise, 3, 3);
        let _ = sample_shot(&faults, None, 0, 0);
    }

    /// Spec of the merged-class frequencies: each class fires at its own
    /// probability (3σ over 10⁵ shots), covering the frequency contract at
    /// the class level.
    #[test]
    fn class_frequencies_match_probabilities() {
        let faults = phenom_faults(&phenom(0.08, 0.03), 3, 1);
        let shots = 100_000u64;
        let mut counts = vec![0u64; faults.classes.len()];
        for shot_index in 0..shots {
            for (k, hit) in sample_fault_indicators(&faults, 57, shot_index).iter().enumerate() {
                counts[k] += u64::from(*hit);
            }
        }
        for (k, class) in faults.classes.iter().enumerate() {
            let hat = counts[k] as f64 / shots as f64;
            let sigma = (class.probability * (1.0 - class.probability) / shots as f64).sqrt();
            assert!(
                (hat - class.probability).abs() < 4.0 * sigma,
                "class {k}: {hat} vs {}",
                class.probability
            );
        }
    }
}
