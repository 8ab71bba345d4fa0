//! Two-magnon eigenstates by label pair: which family a pair belongs to and
//! the full list of eigenstates of the two-magnon sector.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bethe::{
    cosh_bound_state, goldstone_state, one_magnon_state, scattering_state, singular_state, sinh_bound_state,
    solve_cosh_bae, solve_sinh_bae, solve_two_magnon_scattering, BetheRoots, BoundKind, BoundParams, StateClass,
};
use crate::error::{param, Error, Result};
use crate::exactcore::{apply_total_raising, StateVector};

/// A two-magnon eigenstate identified by its label pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoMagnonEigenstate {
    pub n_sites: usize,
    pub lambdas: (i64, i64),
    pub class: StateClass,
    pub roots: Option<BetheRoots>,
    pub bound: Option<BoundParams>,
}

impl TwoMagnonEigenstate {
    /// The normalized state vector. Goldstone pairs are built by raising
    /// the one-magnon state.
    pub fn state(&self) -> Result<StateVector> {
        let n = self.n_sites;
        match self.class {
            StateClass::GoldstoneMixed => {
                if self.lambdas.1 == 0 {
                    goldstone_state(n, 2)
                } else {
                    apply_total_raising(&one_magnon_state(n, self.lambdas.1)?)
                }
            }
            StateClass::Scattering => {
                let r = self.roots.as_ref().expect("scattering roots");
                let (k1, k2) = (r.ks[0].re, r.ks[1].re);
                scattering_state(n, k1 + k2, k2 - k1, r.phis[0].re)
            }
            StateClass::CoshBound => {
                let b = self.bound.expect("bound parameters");
                cosh_bound_state(n, b.u, b.v)
            }
            StateClass::SinhBound => {
                let b = self.bound.expect("bound parameters");
                sinh_bound_state(n, b.u, b.v)
            }
            StateClass::Singular => singular_state(n),
            StateClass::Wavecomplex => unreachable!("two magnons never form a wavecomplex"),
        }
    }

    pub fn label(&self) -> String {
        format!("{},{}", self.lambdas.0, self.lambdas.1)
    }

    pub fn goldstone_count(&self) -> usize {
        match self.lambdas {
            (0, 0) => 2,
            (0, _) => 1,
            _ => 0,
        }
    }
}

fn singular_at(n_sites: usize, lambda: i64) -> bool {
    (PI * lambda as f64 / n_sites as f64).cos().abs() < 1e-12
}

/// Resolves the label pair `(lambda_1, lambda_2)`, `lambda_1 <= lambda_2`.
///
/// Solvers are tried in the order scattering, cosh, sinh, singular. A pair
/// whose bound momentum `pi (lambda_1 + lambda_2) / N` is a quarter turn has
/// no finite bound root; it names the singular state when
/// `lambda_1 + lambda_2 = 3N/2` and no state otherwise.
pub fn resolve_two_magnon(n_sites: usize, lambda1: i64, lambda2: i64) -> Result<TwoMagnonEigenstate> {
    if lambda1 > lambda2 {
        return param(format!("labels ({lambda1}, {lambda2}) must be ascending"));
    }
    let base = |class, roots, bound| TwoMagnonEigenstate {
        n_sites,
        lambdas: (lambda1, lambda2),
        class,
        roots,
        bound,
    };
    match solve_two_magnon_scattering(n_sites, lambda1, lambda2) {
        Ok(r) => return Ok(base(r.class, Some(r), None)),
        Err(Error::NoScatteringSolution { .. }) => {}
        Err(e) => return Err(e),
    }
    let lambda = lambda1 + lambda2;
    if lambda2 > lambda1 + 1 {
        return Err(Error::NoScatteringSolution {
            n_sites,
            lambdas: vec![lambda1, lambda2],
        });
    }
    if singular_at(n_sites, lambda) {
        if n_sites.is_multiple_of(2) && 2 * lambda == 3 * n_sites as i64 {
            return Ok(base(StateClass::Singular, None, None));
        }
        return Err(Error::NoRoot(format!(
            "pair ({lambda1}, {lambda2}) on N = {n_sites} sits at the singular momentum"
        )));
    }
    let b = if lambda1 == lambda2 {
        solve_cosh_bae(n_sites, lambda)?
    } else {
        solve_sinh_bae(n_sites, lambda)?
    };
    let class = match b.kind {
        BoundKind::Cosh => StateClass::CoshBound,
        BoundKind::Sinh => StateClass::SinhBound,
    };
    Ok(base(class, Some(b.to_roots()), Some(b)))
}

/// Every two-magnon eigenstate of an `n_sites` ring: Goldstone pairs
/// first, then the remaining label pairs in lexicographic order. Pairs
/// without a solution are skipped; any other solver failure is returned
/// alongside the label.
pub fn enumerate_two_magnon(n_sites: usize) -> (Vec<TwoMagnonEigenstate>, Vec<((i64, i64), Error)>) {
    let n = n_sites as i64;
    let mut states = Vec::new();
    let mut failures = Vec::new();
    for l1 in 0..n {
        for l2 in l1..n {
            match resolve_two_magnon(n_sites, l1, l2) {
                Ok(s) => states.push(s),
                Err(Error::NoScatteringSolution { .. }) | Err(Error::NoRoot(_)) => {}
                Err(e) => failures.push(((l1, l2), e)),
            }
        }
    }
    (states, failures)
}
