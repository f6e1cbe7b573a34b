//! Repeated-measurement toy circuit: one data qubit read out `Θ` times
//! back-to-back through fresh ancillas, outcomes majority-voted.
//!
//! This isolates the leakage-induced measurement-error correlations from
//! everything else in the QEC cycle: the only state carried between rounds
//! is the data qubit's gauge bit. Because the gauge bit takes two values
//! and the vote only needs the wrong-outcome count, the full process is a
//! small exact dynamic program, no sampling involved.

use super::LeakageTable;

/// Exact toy-circuit outcome probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyResult {
    /// Rounds voted over (= the table's asymmetry ratio).
    pub theta: u32,
    /// Marginal wrong-outcome probability of each round, in order. Grows
    /// within the sequence as the gauge bit accumulates leakage.
    pub per_round_error: Vec<f64>,
    /// Majority-vote failure probability of the correlated process.
    pub fail_correlated: f64,
    /// Majority-vote failure probability if each round flipped
    /// independently with its marginal probability; the gap to
    /// `fail_correlated` is the effect of the shared gauge bit.
    pub fail_independent: f64,
}

/// Run the toy circuit defined by `table`: `Θ = table.theta` reads in a
/// total time `1/κ₂ᵈ`, majority-voted. An exact tie (even `Θ`) counts as a
/// failure.
pub fn repeated_measurement_sim(table: &LeakageTable) -> ToyResult {
    let theta = table.theta as usize;

    // Joint DP over (gauge bit, wrong-outcome count).
    let mut joint = vec![[0.0f64; 2]; theta + 1]; // joint[k][g]
    joint[0][0] = 1.0;
    let mut per_round_error = Vec::with_capacity(theta);

    for round in 0..theta {
        let occupancy: [f64; 2] = [
            joint.iter().map(|row| row[0]).sum(),
            joint.iter().map(|row| row[1]).sum(),
        ];
        let marginal: f64 = (0..2)
            .map(|i| occupancy[i] * (table.single[i][0].error + table.single[i][1].error))
            .sum();
        per_round_error.push(marginal);

        let mut next = vec![[0.0f64; 2]; theta + 1];
        for k in 0..=round {
            for i in 0..2 {
                let mass = joint[k][i];
                if mass == 0.0 {
                    continue;
                }
                for j in 0..2 {
                    let entry = table.single[i][j];
                    next[k + 1][j] += mass * entry.error;
                    next[k][j] += mass * (entry.weight - entry.error);
                }
            }
        }
        joint = next;
    }

    let fail_correlated = tail_mass(&joint.iter().map(|row| row[0] + row[1]).collect::<Vec<_>>());

    // Independent reference: same marginals, no shared state.
    let mut counts = vec![0.0f64; theta + 1];
    counts[0] = 1.0;
    for &q in &per_round_error {
        let mut next = vec![0.0f64; theta + 1];
        for (k, &mass) in counts.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            if k + 1 < next.len() {
                next[k + 1] += mass * q;
            }
            next[k] += mass * (1.0 - q);
        }
        counts = next;
    }
    let fail_independent = tail_mass(&counts);

    ToyResult { theta: table.theta, per_round_error, fail_correlated, fail_independent }
}

/// Majority-vote failure mass: strictly more wrong than right, with ties
/// counted as failures.
fn tail_mass(count_dist: &[f64]) -> f64 {
    let theta = count_dist.len() - 1;
    count_dist
        .iter()
        .enumerate()
        .filter(|&(k, _)| 2 * k >= theta && k > 0)
        .map(|(_, &mass)| mass)
        .sum()
}
