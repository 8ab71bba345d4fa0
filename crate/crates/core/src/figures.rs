//! Numeric data behind the exported figures: concurrence over continuous
//! state parameters, with the eigenstates marked.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::bethe::{
    all_bound_roots, cosh_bound_state, goldstone_state, scattering_state, sinh_bound_state, BoundKind, StateClass,
};
use crate::entangle::{concurrence, goldstone_concurrence, site_one_profile, two_spin_rdm};
use crate::error::{param, Result};
use crate::stats::{length_scan, sweep_two_magnon};

/// Default number of grid points per axis.
pub const DEFAULT_POINTS: usize = 401;

/// A rectangular table: named columns, one row per sample. The last column
/// is `eigenstate_marker`, 1 for rows that describe eigenstates and 0 for
/// grid samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureData {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FigureData {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn markers(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.rows.iter().filter(|r| *r.last().unwrap() == 1.0)
    }

    pub fn grid(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.rows.iter().filter(|r| *r.last().unwrap() == 0.0)
    }
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

fn c_columns(n_sites: usize) -> Vec<String> {
    (1..=n_sites / 2).map(|r| format!("C{r}")).collect()
}

fn check_points(points: usize) -> Result<()> {
    if points < 2 {
        return param(format!("need at least 2 grid points, got {points}"));
    }
    Ok(())
}

/// Concurrence of spin 1 with spins `2 .. N/2 + 1` in the scattering form
/// with `K = 0`, `phi = 0`, over `k in [0, 2 pi]`. Markers at
/// `k = 2 pi lambda / N`.
pub fn fig1(n_sites: usize, points: usize) -> Result<FigureData> {
    check_points(points)?;
    let mut columns = vec!["param".to_string()];
    columns.extend(c_columns(n_sites));
    columns.push("eigenstate_marker".into());
    let sample = |k: f64, marker: f64| -> Result<Vec<f64>> {
        let psi = scattering_state(n_sites, 0.0, k, 0.0)?;
        let mut row = vec![k];
        row.extend(site_one_profile(&psi)?.values);
        row.push(marker);
        Ok(row)
    };
    let mut rows: Vec<Vec<f64>> = linspace(0.0, TAU, points)
        .par_iter()
        .map(|&k| sample(k, 0.0))
        .collect::<Result<_>>()?;
    for l in 0..n_sites {
        rows.push(sample(TAU * l as f64 / n_sites as f64, 1.0)?);
    }
    Ok(FigureData {
        name: format!("fig1_n{n_sites}"),
        columns,
        rows,
    })
}

/// Pairwise concurrence of the uniform `n`-up state for every
/// `0 <= n <= N`, `2 <= N <= max_sites`: closed form and the value traced
/// from the state.
pub fn fig2(max_sites: usize) -> Result<FigureData> {
    if !(2..=20).contains(&max_sites) {
        return param(format!("max ring length {max_sites} outside 2..=20"));
    }
    let columns = ["param", "n", "C", "C_traced", "eigenstate_marker"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for n_sites in 2..=max_sites {
        for n in 0..=n_sites {
            let psi = goldstone_state(n_sites, n)?;
            let traced = concurrence(&two_spin_rdm(&psi, 1, 2)?);
            rows.push(vec![n_sites as f64, n as f64, goldstone_concurrence(n, n_sites), traced, 1.0]);
        }
    }
    Ok(FigureData {
        name: format!("fig2_max{max_sites}"),
        columns,
        rows,
    })
}

/// Concurrences over the `(k, phi)` plane of the scattering form,
/// `k in [0, 2 pi]`, `phi in [0, pi]`, with every two-magnon scattering and
/// Goldstone eigenstate as markers (each eigenstate is one marker row, so
/// coincident pairs appear twice).
pub fn fig3(n_sites: usize, points: usize) -> Result<FigureData> {
    check_points(points)?;
    let mut columns = vec!["param".to_string(), "phi".to_string()];
    columns.extend(c_columns(n_sites));
    columns.push("eigenstate_marker".into());
    let ks = linspace(0.0, TAU, points);
    let phis = linspace(0.0, PI, points);
    let grid: Vec<(f64, f64)> = ks.iter().flat_map(|&k| phis.iter().map(move |&p| (k, p))).collect();
    let sample = |k: f64, phi: f64, marker: f64| -> Result<Vec<f64>> {
        let mut row = vec![k, phi];
        match scattering_state(n_sites, 0.0, k, phi) {
            Ok(psi) => row.extend(site_one_profile(&psi)?.values),
            // the form vanishes identically at (0, pi)
            Err(crate::Error::Degenerate(_)) => row.extend(vec![f64::NAN; n_sites / 2]),
            Err(e) => return Err(e),
        }
        row.push(marker);
        Ok(row)
    };
    let mut rows: Vec<Vec<f64>> = grid.par_iter().map(|&(k, p)| sample(k, p, 0.0)).collect::<Result<_>>()?;
    let sweep = sweep_two_magnon(n_sites, None)?;
    for rec in &sweep.records {
        if !matches!(rec.class, StateClass::Scattering | StateClass::GoldstoneMixed) {
            continue;
        }
        let roots = crate::bethe::solve_two_magnon_scattering(n_sites, rec.lambdas[0], rec.lambdas[1])?;
        let k = (roots.ks[1] - roots.ks[0]).re;
        let phi = roots.phis[0].re;
        let mut row = vec![k, phi];
        row.extend(rec.profile.values.iter().copied());
        row.push(1.0);
        rows.push(row);
    }
    Ok(FigureData {
        name: format!("fig3_n{n_sites}"),
        columns,
        rows,
    })
}

/// Concurrences of the cosh-type (`Cosh`) or sinh-type bound form over
/// `v in [v_min, v_max]`, with every bound eigenstate of that kind as a
/// marker.
pub fn fig_bound(n_sites: usize, kind: BoundKind, v_min: f64, v_max: f64, points: usize) -> Result<FigureData> {
    check_points(points)?;
    if !(v_min > 0.0 && v_max > v_min) {
        return param(format!("need 0 < v_min < v_max, got [{v_min}, {v_max}]"));
    }
    if kind == BoundKind::Sinh && v_min < 1e-6 {
        return param("sinh-type states need v >= 1e-6");
    }
    let mut columns = vec!["param".to_string()];
    columns.extend(c_columns(n_sites));
    columns.push("eigenstate_marker".into());
    let sample = |v: f64, marker: f64| -> Result<Vec<f64>> {
        let psi = match kind {
            BoundKind::Cosh => cosh_bound_state(n_sites, 0.0, v)?,
            BoundKind::Sinh => sinh_bound_state(n_sites, 0.0, v)?,
        };
        let mut row = vec![v];
        row.extend(site_one_profile(&psi)?.values);
        row.push(marker);
        Ok(row)
    };
    let mut rows: Vec<Vec<f64>> = linspace(v_min, v_max, points)
        .par_iter()
        .map(|&v| sample(v, 0.0))
        .collect::<Result<_>>()?;
    for b in all_bound_roots(n_sites, kind)? {
        rows.push(sample(b.v, 1.0)?);
    }
    let tag = match kind {
        BoundKind::Cosh => "fig4",
        BoundKind::Sinh => "fig5",
    };
    Ok(FigureData {
        name: format!("{tag}_n{n_sites}"),
        columns,
        rows,
    })
}

/// Profiles of the eigenstate with labels `lambdas` over ring lengths, both
/// by separation (`C1 ..`) and counted back from the longest range
/// (`C-1 ..`). Separations beyond a ring's range are NaN.
pub fn fig6(lambdas: &[i64], sizes: std::ops::RangeInclusive<usize>) -> Result<FigureData> {
    let max_len = *sizes.end() / 2;
    let mut columns = vec!["param".to_string()];
    columns.extend((1..=max_len).map(|r| format!("C{r}")));
    columns.extend((1..=max_len).map(|i| format!("C-{i}")));
    columns.push("eigenstate_marker".into());
    let mut rows = Vec::new();
    for row in length_scan(lambdas, sizes) {
        let profile = match (row.profile, row.error) {
            (Some(p), _) => p,
            (None, Some(e)) => return Err(crate::Error::NoRoot(format!("N = {}: {e}", row.n_sites))),
            (None, None) => unreachable!(),
        };
        let mut out = vec![row.n_sites as f64];
        out.extend((1..=max_len).map(|r| if r <= profile.len() { profile.get(r) } else { f64::NAN }));
        out.extend((1..=max_len).map(|i| if i <= profile.len() { profile.from_end(i) } else { f64::NAN }));
        out.push(1.0);
        rows.push(out);
    }
    let label: Vec<String> = lambdas.iter().map(|l| l.to_string()).collect();
    Ok(FigureData {
        name: format!("fig6_{}", label.join("_")),
        columns,
        rows,
    })
}
