//! Concurrence profiles of the two-magnon eigenstates without a Goldstone
//! magnon, before and after one total-spin raising step.

use serde::Serialize;

use crate::bethe::{enumerate_two_magnon, StateClass};
use crate::entangle::{concurrence_profile, ConcurrenceProfile};
use crate::error::{param, Error, Result};
use crate::exactcore::{apply_total_raising, verify_eigenstate, EIGEN_RESIDUAL_TOL};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuenchRow {
    pub lambdas: (i64, i64),
    pub class: StateClass,
    /// Profile of the two-magnon state.
    pub bare: ConcurrenceProfile,
    /// Profile after adding one Goldstone magnon.
    pub raised: ConcurrenceProfile,
    /// Largest eigen-equation residual of the two states.
    pub residual: f64,
}

fn class_rank(c: StateClass) -> u8 {
    match c {
        StateClass::Scattering => 0,
        _ => 1,
    }
}

/// One row per two-magnon eigenstate free of Goldstone magnons: scattering
/// states first, then bound and singular ones, each block in label order.
pub fn quench_table(n_sites: usize) -> Result<Vec<QuenchRow>> {
    if n_sites < 4 {
        return param(format!("need N >= 4 for a raised two-magnon state, got {n_sites}"));
    }
    let (states, failures) = enumerate_two_magnon(n_sites);
    if let Some(((a, b), e)) = failures.into_iter().next() {
        return Err(Error::NoRoot(format!("labels ({a},{b}): {e}")));
    }
    let mut rows = Vec::new();
    for s in states.iter().filter(|s| s.goldstone_count() == 0) {
        let psi = s.state()?;
        let up = apply_total_raising(&psi)?;
        let residual = verify_eigenstate(&psi)?.residual.max(verify_eigenstate(&up)?.residual);
        if residual > EIGEN_RESIDUAL_TOL {
            return Err(Error::Misclassified {
                residual,
                context: format!("labels {},{}", s.lambdas.0, s.lambdas.1),
            });
        }
        rows.push(QuenchRow {
            lambdas: s.lambdas,
            class: s.class,
            bare: concurrence_profile(&psi)?,
            raised: concurrence_profile(&up)?,
            residual,
        });
    }
    rows.sort_by_key(|r| (class_rank(r.class), r.lambdas));
    Ok(rows)
}
