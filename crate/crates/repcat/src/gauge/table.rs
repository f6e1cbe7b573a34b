//! Construction, caching, and post-processing of [`LeakageTable`]s.
//!
//! Tables are expensive only relative to the sampling hot loop, but they are
//! reused across campaign points and processes, so they cache to JSON files
//! keyed by a content hash of every input that affects the numbers.

use super::oracle::OracleCnot;
use super::reduced::{minus_population, plus_state, trace, ReducedCnot};
use super::{IntegratorSettings, LeakageTable, TableEntry, TableSource};
use sha2::{Digest, Sha256};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Errors from table construction, validation, or cache I/O.
#[derive(Debug)]
pub enum TableError {
    /// A computed entry is out of range or masses fail to normalize.
    InvalidEntry { name: &'static str, value: f64 },
    /// A cached file exists but was built from different inputs.
    CacheMismatch { path: PathBuf },
    /// Cache file I/O failed.
    Io { path: PathBuf, source: io::Error },
    /// Cache file held unparseable JSON.
    Parse { path: PathBuf, source: serde_json::Error },
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::InvalidEntry { name, value } => {
                write!(f, "leakage table entry out of range: {name} = {value}")
            }
            TableError::CacheMismatch { path } => {
                write!(f, "cached table at {} was built from different inputs", path.display())
            }
            TableError::Io { path, source } => {
                write!(f, "leakage table cache I/O at {}: {source}", path.display())
            }
            TableError::Parse { path, source } => {
                write!(f, "leakage table cache at {} is not valid JSON: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for TableError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            TableError::Io { source, .. } => Some(source),
            TableError::Parse { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// Build a [`LeakageTable`] for `κ₂ᵈ = 1`, `κ₂ᵃ = Θ`, CNOT duration `1/Θ`.
pub fn build_leakage_table(
    alpha_sq: f64,
    theta: u32,
    settings: IntegratorSettings,
    source: TableSource,
) -> Result<LeakageTable, TableError> {
    assert!(theta >= 1, "asymmetry ratio must be at least 1");
    let table = match source {
        TableSource::Reduced => build_reduced(alpha_sq, theta, settings),
        TableSource::Oracle { gauge_levels } => {
            build_oracle(alpha_sq, theta, settings, gauge_levels as usize)
        }
    };
    table.validate()?;
    Ok(table)
}

fn build_reduced(alpha_sq: f64, theta: u32, settings: IntegratorSettings) -> LeakageTable {
    let t_gate = 1.0 / theta as f64;
    let cnot = ReducedCnot::new(alpha_sq, theta as f64, 1.0, t_gate, settings.steps_per_gate);

    let mut single = [[TableEntry::default(); 2]; 2];
    let mut pair = [[[[TableEntry::default(); 2]; 2]; 2]; 2];
    for i in 0..2u8 {
        let first = cnot.kraus(i, plus_state());
        for (j, out) in first.iter().enumerate() {
            single[i as usize][j] =
                TableEntry { weight: trace(out), error: minus_population(out) };
            // The refresh between the two CNOTs acts only on the ancilla
            // gauge mode, which this model has eliminated, so the ancilla
            // qubit state carries over unchanged; the second CNOT sees a
            // fresh data gauge bit `ip`.
            for ip in 0..2u8 {
                let second = cnot.kraus(ip, *out);
                for (jp, fin) in second.iter().enumerate() {
                    pair[i as usize][j][ip as usize][jp] =
                        TableEntry { weight: trace(fin), error: minus_population(fin) };
                }
            }
        }
    }
    LeakageTable { alpha_sq, theta, settings, source: TableSource::Reduced, single, pair }
}

fn build_oracle(
    alpha_sq: f64,
    theta: u32,
    settings: IntegratorSettings,
    gauge_levels: usize,
) -> LeakageTable {
    let t_gate = 1.0 / theta as f64;
    let cnot = OracleCnot::new(
        alpha_sq,
        theta as f64,
        1.0,
        t_gate,
        gauge_levels,
        settings.steps_per_gate,
    );

    // Physical gauge occupations fold onto the classical bit as 0 ↔ vacuum,
    // 1 ↔ any excitation.
    let fold = |n: usize| -> usize { n.min(1) };

    let mut single = [[TableEntry::default(); 2]; 2];
    let mut pair = [[[[TableEntry::default(); 2]; 2]; 2]; 2];
    for i in 0..2usize {
        let rho1 = cnot.evolve_cnot(cnot.initial(i));
        for j_phys in 0..gauge_levels {
            let sigma = cnot.project_data_gauge(&rho1, j_phys);
            let j = fold(j_phys);
            single[i][j].weight += OracleCnot::block_trace(&sigma);
            single[i][j].error += cnot.minus_mass(&sigma);

            let refreshed = cnot.refresh(sigma);
            for ip in 0..2usize {
                let rho2 = cnot.evolve_cnot(cnot.embed_with_data(&refreshed, ip));
                for jp_phys in 0..gauge_levels {
                    let tau = cnot.project_data_gauge(&rho2, jp_phys);
                    let jp = fold(jp_phys);
                    pair[i][j][ip][jp].weight += OracleCnot::block_trace(&tau);
                    pair[i][j][ip][jp].error += cnot.minus_mass(&tau);
                }
            }
        }
    }
    LeakageTable {
        alpha_sq,
        theta,
        settings,
        source: TableSource::Oracle { gauge_levels: gauge_levels as u8 },
        single,
        pair,
    }
}

/// Content hash identifying a table build; stable across runs and processes.
pub fn table_cache_key(
    alpha_sq: f64,
    theta: u32,
    settings: IntegratorSettings,
    source: TableSource,
) -> String {
    let mut hasher = Sha256::new();
    let tag = match source {
        TableSource::Reduced => "reduced".to_string(),
        TableSource::Oracle { gauge_levels } => format!("oracle{gauge_levels}"),
    };
    hasher.update(format!(
        "repcat-leakage-v1|a2={:016x}|theta={theta}|steps={}|{tag}",
        alpha_sq.to_bits(),
        settings.steps_per_gate,
    ));
    let digest = hasher.finalize();
    digest[..16].iter().map(|b| format!("{b:02x}")).collect()
}

fn cache_path(
    dir: &Path,
    alpha_sq: f64,
    theta: u32,
    settings: IntegratorSettings,
    source: TableSource,
) -> PathBuf {
    dir.join(format!("leakage-{}.json", table_cache_key(alpha_sq, theta, settings, source)))
}

/// Load a cached table if one exists. `Ok(None)` means a cache miss, which
/// callers that cannot build (offline mode) turn into their own error.
pub fn load_cached(
    alpha_sq: f64,
    theta: u32,
    settings: IntegratorSettings,
    source: TableSource,
    cache_dir: &Path,
) -> Result<Option<LeakageTable>, TableError> {
    let path = cache_path(cache_dir, alpha_sq, theta, settings, source);
    let text = match fs::read_to_string(&path) {
        Ok(text) => text,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(TableError::Io { path, source: e }),
    };
    let table: LeakageTable =
        serde_json::from_str(&text).map_err(|e| TableError::Parse { path: path.clone(), source: e })?;
    let matches = table.alpha_sq.to_bits() == alpha_sq.to_bits()
        && table.theta == theta
        && table.settings == settings
        && table.source == source;
    if !matches {
        return Err(TableError::CacheMismatch { path });
    }
    table.validate()?;
    Ok(Some(table))
}

/// Load from cache or build and (best-effort) store.
pub fn load_or_build(
    alpha_sq: f64,
    theta: u32,
    settings: IntegratorSettings,
    source: TableSource,
    cache_dir: Option<&Path>,
) -> Result<LeakageTable, TableError> {
    if let Some(dir) = cache_dir {
        if let Some(table) = load_cached(alpha_sq, theta, settings, source, dir)? {
            return Ok(table);
        }
    }
    let table = build_leakage_table(alpha_sq, theta, settings, source)?;
    if let Some(dir) = cache_dir {
        let path = cache_path(dir, alpha_sq, theta, settings, source);
        fs::create_dir_all(dir).map_err(|e| TableError::Io { path: dir.to_path_buf(), source: e })?;
        let text = serde_json::to_string_pretty(&table)
            .map_err(|e| TableError::Parse { path: path.clone(), source: e })?;
        fs::write(&path, text).map_err(|e| TableError::Io { path, source: e })?;
    }
    Ok(table)
}

/// Exact marginal measurement-error probability of every check in one QEC
/// cycle of `Θ` fast rounds on a distance-`d` code.
///
/// Data gauge bits start reset (the data refresh at the previous cycle
/// boundary empties the gauge mode to `e^{−4α²}`), then each fast round
/// steps qubits `1..d` once (first CNOT layer) and qubits `2..=d` once
/// (second CNOT layer). Check `s` of round `k` reads qubit `s` at the first
/// layer and qubit `s+1` at the second, so its marginal error averages the
/// pair-table joint errors over the two qubits' current state
/// distributions. Returned as `profile[k][s-1]`, `k < Θ`, `1 ≤ s ≤ d−1`.
///
/// These are true per-position marginals of the correlated process; the
/// decoder consumes them as independent edge probabilities and stays blind
/// to the correlations themselves.
pub fn meas_error_profile(table: &LeakageTable, distance: usize) -> Vec<Vec<f64>> {
    assert!(distance >= 2);
    let theta = table.theta as usize;
    let step = |dist: [f64; 2]| -> [f64; 2] {
        [
            dist[0] * table.single[0][0].weight + dist[1] * table.single[1][0].weight,
            dist[0] * table.single[0][1].weight + dist[1] * table.single[1][1].weight,
        ]
    };
    // dist[q] for data qubits q = 1..=d (index 0 unused).
    let mut dist = vec![[1.0, 0.0]; distance + 1];
    let mut profile = Vec::with_capacity(theta);
    for _ in 0..theta {
        let before_first: Vec<[f64; 2]> = dist.clone();
        for q in 1..distance {
            dist[q] = step(dist[q]);
        }
        let before_second: Vec<[f64; 2]> = dist.clone();
        let mut row = Vec::with_capacity(distance - 1);
        for s in 1..distance {
            let left = before_first[s];
            let right = before_second[s + 1];
            let mut err = 0.0;
            for i in 0..2 {
                for ip in 0..2 {
                    err += left[i] * right[ip] * table.error_given_initials(i as u8, ip as u8);
                }
            }
            row.push(err);
        }
        profile.push(row);
        for q in 2..=distance {
            dist[q] = step(dist[q]);
        }
    }
    profile
}
