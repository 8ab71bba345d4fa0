//! Population sweeps over eigenstate classes and the surveys built on them.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bethe::{
    enumerate_two_magnon, n_magnon_state, one_magnon_state, solve_n_magnon_bae, StateClass, TwoMagnonEigenstate,
    MAX_MAGNONS,
};
use crate::entangle::{concurrence_profile, ConcurrenceProfile, ZERO_TOL};
use crate::error::{param, Error, Result};
use crate::exactcore::{apply_total_raising, binomial, diagonalize, SectorHamiltonian, Spectrum, StateVector};

/// Largest ring whose two-magnon states are certified against the full
/// spectrum; longer rings are certified by eigen-equation residual.
pub const ED_CERTIFY_MAX_SITES: usize = 12;
/// Eigenspace projection required to accept a state.
pub const PROJECTION_TOL: f64 = 1e-8;
/// Residual required to accept a two-magnon state.
pub const TWO_MAGNON_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Certification {
    /// Norm of the projection onto the matching exact eigenspace.
    Projection { norm: f64, degeneracy: usize },
    /// Eigen-equation residual.
    Residual { residual: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PopulationRecord {
    /// Class and labels, e.g. `scattering:1,3`.
    pub id: String,
    pub lambdas: Vec<i64>,
    pub class: StateClass,
    pub goldstones: usize,
    pub profile: ConcurrenceProfile,
    pub energy: f64,
    pub certification: Certification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub n_sites: usize,
    pub records: Vec<PopulationRecord>,
    pub failures: Vec<Failure>,
}

impl SweepReport {
    pub fn count(&self, class: StateClass) -> usize {
        self.records.iter().filter(|r| r.class == class).count()
    }

    pub fn of_class(&self, class: StateClass) -> Vec<PopulationRecord> {
        self.records.iter().filter(|r| r.class == class).cloned().collect()
    }
}

fn certify_state(
    h: &SectorHamiltonian,
    spectrum: Option<&Spectrum>,
    psi: &StateVector,
) -> Result<(f64, Certification)> {
    let check = h.verify_eigenstate(psi)?;
    match spectrum {
        Some(s) => {
            let m = s.match_state(psi, check.rayleigh)?;
            if m.projection < 1.0 - PROJECTION_TOL {
                return Err(Error::Misclassified {
                    residual: 1.0 - m.projection,
                    context: format!("projection onto level at E = {:.12}", m.energy),
                });
            }
            Ok((
                check.rayleigh,
                Certification::Projection {
                    norm: m.projection,
                    degeneracy: m.degeneracy,
                },
            ))
        }
        None => {
            if check.residual > TWO_MAGNON_RESIDUAL_TOL {
                return Err(Error::Misclassified {
                    residual: check.residual,
                    context: "eigen-equation residual".into(),
                });
            }
            Ok((check.rayleigh, Certification::Residual { residual: check.residual }))
        }
    }
}

fn record_for(
    h: &SectorHamiltonian,
    spectrum: Option<&Spectrum>,
    state: &TwoMagnonEigenstate,
) -> Result<PopulationRecord> {
    let psi = state.state()?;
    let (energy, certification) = certify_state(h, spectrum, &psi)?;
    Ok(PopulationRecord {
        id: format!("{}:{}", state.class, state.label()),
        lambdas: vec![state.lambdas.0, state.lambdas.1],
        class: state.class,
        goldstones: state.goldstone_count(),
        profile: concurrence_profile(&psi)?,
        energy,
        certification,
    })
}

/// Every two-magnon eigenstate of an `n_sites` ring (optionally one class
/// only), each certified: by projection onto the exact spectrum for
/// `N <= 12`, by residual beyond. Per-state failures are collected.
pub fn sweep_two_magnon(n_sites: usize, filter: Option<StateClass>) -> Result<SweepReport> {
    if n_sites < 3 {
        return param(format!("two-magnon sweeps need N >= 3, got {n_sites}"));
    }
    let h = SectorHamiltonian::build(n_sites, 2, 1.0)?;
    let spectrum = if n_sites <= ED_CERTIFY_MAX_SITES {
        Some(diagonalize(&h)?)
    } else {
        None
    };
    let (states, solver_failures) = enumerate_two_magnon(n_sites);
    let wanted: Vec<&TwoMagnonEigenstate> =
        states.iter().filter(|s| filter.is_none_or(|c| s.class == c)).collect();
    let results: Vec<Result<PopulationRecord>> =
        wanted.par_iter().map(|s| record_for(&h, spectrum.as_ref(), s)).collect();
    let mut records = Vec::new();
    let mut failures: Vec<Failure> = solver_failures
        .into_iter()
        .map(|((a, b), e)| Failure {
            id: format!("{a},{b}"),
            error: e.to_string(),
        })
        .collect();
    for (s, r) in wanted.iter().zip(results) {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => failures.push(Failure {
                id: format!("{}:{}", s.class, s.label()),
                error: e.to_string(),
            }),
        }
    }
    Ok(SweepReport {
        n_sites,
        records,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationRow {
    pub r: usize,
    pub max: f64,
    /// Median over the states with nonzero `C_r`; absent when there are none.
    pub median_nonzero: Option<f64>,
    pub percent_nonzero: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationStats {
    pub population: usize,
    pub rows: Vec<SeparationRow>,
    /// `nu_histogram[nu]`: states with exactly `nu` nonzero concurrences.
    pub nu_histogram: Vec<usize>,
}

impl SeparationStats {
    pub fn max_nu(&self) -> usize {
        self.nu_histogram.iter().rposition(|&c| c > 0).unwrap_or(0)
    }

    /// Most frequent values of `nu`, in descending order of frequency.
    pub fn nu_modes(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.nu_histogram.len()).collect();
        idx.sort_by(|&a, &b| self.nu_histogram[b].cmp(&self.nu_histogram[a]).then(a.cmp(&b)));
        idx
    }
}

fn median(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some(0.5 * (sorted[n / 2 - 1] + sorted[n / 2])),
    }
}

/// Maximum, nonzero median and percentage nonzero at each separation, and
/// the distribution of the number of nonzero separations per state.
pub fn separation_stats(records: &[PopulationRecord]) -> Result<SeparationStats> {
    let first = records.first().ok_or(Error::EmptyPopulation)?;
    let len = first.profile.len();
    if records.iter().any(|r| r.profile.len() != len) {
        return param("records from different ring lengths");
    }
    let population = records.len();
    let mut rows = Vec::with_capacity(len);
    for r in 1..=len {
        let mut nonzero: Vec<f64> = records.iter().map(|x| x.profile.get(r)).filter(|&c| c > 0.0).collect();
        nonzero.sort_by(f64::total_cmp);
        let max = records.iter().map(|x| x.profile.get(r)).fold(0.0, f64::max);
        rows.push(SeparationRow {
            r,
            max,
            median_nonzero: median(&nonzero),
            percent_nonzero: 100.0 * nonzero.len() as f64 / population as f64,
        });
    }
    let mut nu_histogram = vec![0; len + 1];
    for rec in records {
        nu_histogram[rec.profile.nonzero_count()] += 1;
    }
    Ok(SeparationStats {
        population,
        rows,
        nu_histogram,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuenchEntry {
    /// Labels of the non-Goldstone core.
    pub core: String,
    pub core_class: StateClass,
    pub goldstones: usize,
    pub non_goldstones: usize,
    pub profile: ConcurrenceProfile,
    pub total: f64,
    pub residual: f64,
}

impl QuenchEntry {
    /// Mixed state with at least as many Goldstone as non-Goldstone magnons.
    pub fn expect_quenched(&self) -> bool {
        self.goldstones >= self.non_goldstones && self.goldstones > 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuenchReport {
    pub n_sites: usize,
    pub n_magnons: usize,
    pub entries: Vec<QuenchEntry>,
    pub violations: Vec<String>,
    pub failures: Vec<Failure>,
}

struct Core {
    label: String,
    class: StateClass,
    size: usize,
    psi: StateVector,
}

fn goldstone_chain(core: &Core, max_total: usize) -> Result<Vec<QuenchEntry>> {
    let mut out = Vec::new();
    let mut psi = core.psi.clone();
    for g in 0..=(max_total - core.size) {
        if g > 0 {
            psi = apply_total_raising(&psi)?;
        }
        let h = SectorHamiltonian::on_basis(Arc::clone(psi.shared_basis()), 1.0);
        let check = h.verify_eigenstate(&psi)?;
        let profile = concurrence_profile(&psi)?;
        out.push(QuenchEntry {
            core: core.label.clone(),
            core_class: core.class,
            goldstones: g,
            non_goldstones: core.size,
            total: profile.total(),
            profile,
            residual: check.residual,
        });
    }
    Ok(out)
}

/// Goldstone quenching in the `n_magnons`-magnon sector (3 or 4): every
/// non-Goldstone core of one or two magnons is raised until the sector is
/// reached. Mixed states with at least as many Goldstone as non-Goldstone
/// magnons must carry no concurrence, and no raising step may increase the
/// summed concurrence.
pub fn quench_survey(n_sites: usize, n_magnons: usize) -> Result<QuenchReport> {
    if !(3..=4).contains(&n_magnons) {
        return param(format!("quench survey covers 3 or 4 magnons, got {n_magnons}"));
    }
    if n_sites < 2 * n_magnons {
        return param(format!("N = {n_sites} too short for {n_magnons} magnons"));
    }
    let mut cores = Vec::new();
    let mut failures = Vec::new();
    for l in 1..n_sites as i64 {
        cores.push(Core {
            label: l.to_string(),
            class: StateClass::Scattering,
            size: 1,
            psi: one_magnon_state(n_sites, l)?,
        });
    }
    let (states, solver_failures) = enumerate_two_magnon(n_sites);
    failures.extend(solver_failures.into_iter().map(|((a, b), e)| Failure {
        id: format!("{a},{b}"),
        error: e.to_string(),
    }));
    for s in states.iter().filter(|s| s.goldstone_count() == 0) {
        match s.state() {
            Ok(psi) => cores.push(Core {
                label: s.label(),
                class: s.class,
                size: 2,
                psi,
            }),
            Err(e) => failures.push(Failure {
                id: s.label(),
                error: e.to_string(),
            }),
        }
    }
    let chains: Vec<Result<Vec<QuenchEntry>>> = cores.par_iter().map(|c| goldstone_chain(c, n_magnons)).collect();
    let mut entries = Vec::new();
    let mut violations = Vec::new();
    for (core, chain) in cores.iter().zip(chains) {
        let chain = match chain {
            Ok(c) => c,
            Err(e) => {
                failures.push(Failure {
                    id: core.label.clone(),
                    error: e.to_string(),
                });
                continue;
            }
        };
        for (i, e) in chain.iter().enumerate() {
            let id = format!("{}+{}G", e.core, e.goldstones);
            if e.residual > TWO_MAGNON_RESIDUAL_TOL {
                violations.push(format!("{id}: not an eigenstate (residual {:.3e})", e.residual));
            }
            if e.expect_quenched() && e.profile.values.iter().any(|&c| c >= ZERO_TOL) {
                violations.push(format!("{id}: concurrence survives quenching (total {:.3e})", e.total));
            }
            if i > 0 && e.total > chain[i - 1].total + 1e-10 {
                violations.push(format!(
                    "{id}: total concurrence rose from {:.6e} to {:.6e}",
                    chain[i - 1].total, e.total
                ));
            }
        }
        entries.extend(chain);
    }
    Ok(QuenchReport {
        n_sites,
        n_magnons,
        entries,
        violations,
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    BetheAnsatz,
    /// More magnons than the Bethe machinery handles: exact ground state.
    ExactDiagonalization,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgsReport {
    pub n_sites: usize,
    pub provenance: Provenance,
    pub energy: f64,
    pub ground_energy: f64,
    /// Projection onto the exact ground state.
    pub projection: f64,
    pub profile: ConcurrenceProfile,
    /// Only `C_1` nonzero.
    pub nearest_only: bool,
}

/// Antiferromagnetic ground state `lambda = (1, 3, .., N-1)` of an even
/// ring, compared against the lowest exact eigenvalue of the `N/2` sector.
pub fn ags_survey(n_sites: usize) -> Result<AgsReport> {
    if n_sites < 4 || n_sites % 2 == 1 {
        return param(format!("antiferromagnetic ground state needs even N >= 4, got {n_sites}"));
    }
    let n_up = n_sites / 2;
    let h = SectorHamiltonian::build(n_sites, n_up, 1.0)?;
    let spectrum = diagonalize(&h)?;
    let ground = spectrum.vectors()[0].clone();
    let ground_energy = spectrum.values()[0];
    let lambdas: Vec<i64> = (0..n_up as i64).map(|j| 2 * j + 1).collect();
    let (psi, provenance) = if n_up <= MAX_MAGNONS {
        let roots = solve_n_magnon_bae(n_sites, &lambdas)?;
        (n_magnon_state(n_sites, &roots)?, Provenance::BetheAnsatz)
    } else {
        (ground.clone(), Provenance::ExactDiagonalization)
    };
    let energy = h.verify_eigenstate(&psi)?.rayleigh;
    let projection = ground.inner(&psi)?.norm();
    let profile = concurrence_profile(&psi)?;
    let nearest_only = profile.get(1) > 0.0 && profile.values[1..].iter().all(|&c| c == 0.0);
    Ok(AgsReport {
        n_sites,
        provenance,
        energy,
        ground_energy,
        projection,
        profile,
        nearest_only,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub n_sites: usize,
    pub class: Option<StateClass>,
    pub residual: Option<f64>,
    pub profile: Option<ConcurrenceProfile>,
    pub error: Option<String>,
}

/// Profiles of the eigenstate with fixed labels over a range of ring
/// lengths. Failures are reported per row.
pub fn length_scan(lambdas: &[i64], sizes: std::ops::RangeInclusive<usize>) -> Vec<ScanRow> {
    let sizes: Vec<usize> = sizes.collect();
    sizes
        .par_iter()
        .map(|&n| {
            let attempt = || -> Result<ScanRow> {
                let roots = solve_n_magnon_bae(n, lambdas)?;
                let psi = n_magnon_state(n, &roots)?;
                let check = SectorHamiltonian::on_basis(Arc::clone(psi.shared_basis()), 1.0).verify_eigenstate(&psi)?;
                Ok(ScanRow {
                    n_sites: n,
                    class: Some(roots.class),
                    residual: Some(check.residual),
                    profile: Some(concurrence_profile(&psi)?),
                    error: None,
                })
            };
            attempt().unwrap_or_else(|e| ScanRow {
                n_sites: n,
                class: None,
                residual: None,
                profile: None,
                error: Some(e.to_string()),
            })
        })
        .collect()
}

/// Expected size of a complete two-magnon population.
pub fn two_magnon_population(n_sites: usize) -> usize {
    binomial(n_sites, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(values: Vec<f64>) -> PopulationRecord {
        PopulationRecord {
            id: String::new(),
            lambdas: vec![],
            class: StateClass::Scattering,
            goldstones: 0,
            profile: ConcurrenceProfile { n_sites: 6, values },
            energy: 0.0,
            certification: Certification::Residual { residual: 0.0 },
        }
    }

    #[test]
    fn stats_by_hand() {
        let recs = vec![rec(vec![0.4, 0.0, 0.1]), rec(vec![0.2, 0.0, 0.0]), rec(vec![0.0, 0.0, 0.3])];
        let s = separation_stats(&recs).unwrap();
        assert_eq!(s.rows[0].max, 0.4);
        assert!((s.rows[0].median_nonzero.unwrap() - 0.3).abs() < 1e-15);
        assert!((s.rows[0].percent_nonzero - 200.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.rows[1].median_nonzero, None);
        assert_eq!(s.nu_histogram, vec![0, 2, 1, 0]);
        assert_eq!(s.max_nu(), 2);
        assert!(matches!(separation_stats(&[]), Err(Error::EmptyPopulation)));
    }

    #[test]
    fn six_site_sweep_is_complete() {
        let rep = sweep_two_magnon(6, None).unwrap();
        assert!(rep.failures.is_empty(), "{:?}", rep.failures);
        assert_eq!(rep.records.len(), 15);
        assert_eq!(rep.count(StateClass::GoldstoneMixed), 6);
        assert_eq!(rep.count(StateClass::Singular), 1);
    }

    #[test]
    fn small_quench_survey() {
        let rep = quench_survey(6, 3).unwrap();
        assert!(rep.failures.is_empty(), "{:?}", rep.failures);
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    }

    #[test]
    fn ags_small_rings() {
        let r = ags_survey(4).unwrap();
        assert_eq!(r.provenance, Provenance::BetheAnsatz);
        assert!(r.nearest_only);
        assert!((r.energy - r.ground_energy).abs() < 1e-9);
        assert!(ags_survey(5).is_err());
    }
}
