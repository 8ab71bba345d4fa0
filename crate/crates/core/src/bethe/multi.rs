//! n-magnon states and the n-magnon Bethe equations.
//!
//! The equations are solved in rapidity variables `z = cot(k/2)/2`, in which
//! `e^{ik} = (z + i/2)/(z - i/2)` and `e^{i phi_ab} = (z_a - z_b + i)/(z_a - z_b - i)`.
//! Real roots use the logarithmic form of the equations, which is monotone and
//! keeps the ordering of the rapidities; complex (string) roots use the
//! polynomial product form.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::bethe::{BetheRoots, StateClass};
use crate::error::{param, Error, Result};
use crate::exactcore::{SectorBasis, SectorHamiltonian, StateVector};
use crate::C64;

/// Largest number of magnons handled by the n-magnon machinery.
pub const MAX_MAGNONS: usize = 5;
/// Bethe-equation residual accepted from the solver.
pub const BAE_TOL: f64 = 1e-9;
/// Eigen-equation residual required of a solved n-magnon state.
pub const MULTI_EIGEN_TOL: f64 = 1e-6;

const MAX_ITER: usize = 200;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// Bethe's sum over permutations,
/// `sum_P exp(i sum_a k_{P(a)} m_a + (i/2) sum_{a<b} phi_{P(a)P(b)})`,
/// normalized numerically. The phases are antisymmetric, so an inverted
/// pair contributes `-phi`.
///
/// Exponents are shifted by their largest real part before exponentiation,
/// so strongly bound roots do not overflow.
pub fn n_magnon_state(n_sites: usize, roots: &BetheRoots) -> Result<StateVector> {
    let n = roots.n_magnons();
    if n > MAX_MAGNONS {
        return param(format!("{n} magnons exceed the limit of {MAX_MAGNONS}"));
    }
    if roots.n_sites != n_sites {
        return param(format!("roots for N = {} used on N = {n_sites}", roots.n_sites));
    }
    if roots.ks.iter().chain(&roots.phis).any(|x| !(x.re.is_finite() && x.im.is_finite())) {
        return param("non-finite Bethe roots");
    }
    let basis = Arc::new(SectorBasis::new(n_sites, n)?);
    let perms = permutations(n);
    let i = C64::i();
    let phase_terms: Vec<C64> = perms
        .iter()
        .map(|p| {
            let mut s = C64::new(0.0, 0.0);
            for a in 0..n {
                for b in a + 1..n {
                    s += roots.phi(p[a], p[b]);
                }
            }
            i * 0.5 * s
        })
        .collect();
    let mut exps = vec![C64::new(0.0, 0.0); perms.len()];
    let mut sites = Vec::with_capacity(n);
    let mut amps = Vec::with_capacity(basis.len());
    let mut log_scales = Vec::with_capacity(basis.len());
    for &c in basis.configs() {
        sites.clear();
        sites.extend(SectorBasis::up_sites(c));
        let mut top = f64::NEG_INFINITY;
        for (e, (p, ph)) in exps.iter_mut().zip(perms.iter().zip(&phase_terms)) {
            let mut x = *ph;
            for (a, &m) in sites.iter().enumerate() {
                x += i * roots.ks[p[a]] * m as f64;
            }
            *e = x;
            top = top.max(x.re);
        }
        let sum: C64 = exps.iter().map(|e| (e - top).exp()).sum();
        amps.push(sum);
        log_scales.push(top);
    }
    let global = log_scales.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for (a, s) in amps.iter_mut().zip(&log_scales) {
        *a *= (s - global).exp();
    }
    let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if !(norm2 > 1e-28 * amps.len() as f64) {
        return Err(Error::Degenerate("Bethe sum vanishes identically".into()));
    }
    StateVector::from_amplitudes(basis, amps)
}

fn k_of_z(z: f64) -> f64 {
    PI - 2.0 * (2.0 * z).atan()
}

fn theta(d: f64) -> f64 {
    d.signum() * PI - 2.0 * d.atan()
}

/// Newton on the logarithmic equations
/// `N k(z_a) - 2 pi lambda_a - sum_b theta(z_a - z_b) = 0`, real `z`
/// ordered decreasingly (ascending labels). Steps that would break the
/// ordering or fail to reduce the residual are halved.
fn solve_real(n_sites: usize, lambdas: &[i64], seed: &[f64]) -> Option<Vec<f64>> {
    let n = lambdas.len();
    let big_n = n_sites as f64;
    let residual = |z: &[f64]| -> Option<DVector<f64>> {
        if z.windows(2).any(|w| w[0] <= w[1]) {
            return None;
        }
        Some(DVector::from_iterator(
            n,
            (0..n).map(|a| {
                let mut f = big_n * k_of_z(z[a]) - TAU * lambdas[a] as f64;
                for b in 0..n {
                    if b != a {
                        f -= theta(z[a] - z[b]);
                    }
                }
                f
            }),
        ))
    };
    let mut z = seed.to_vec();
    let mut f = residual(&z)?;
    for _ in 0..MAX_ITER {
        if f.amax() < 1e-13 {
            return Some(z);
        }
        let mut jac = DMatrix::zeros(n, n);
        for a in 0..n {
            jac[(a, a)] = -4.0 * big_n / (1.0 + 4.0 * z[a] * z[a]);
            for b in 0..n {
                if b != a {
                    let d = z[a] - z[b];
                    let dt = -2.0 / (1.0 + d * d);
                    jac[(a, a)] -= dt;
                    jac[(a, b)] += dt;
                }
            }
        }
        let step = jac.lu().solve(&f)?;
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = z.iter().zip(step.iter()).map(|(a, s)| a - t * s).collect();
            if let Some(ft) = residual(&trial) {
                if ft.norm() < f.norm() || t < 1e-3 {
                    let done = step.amax() * t < 1e-15 * (1.0 + z.iter().fold(0.0f64, |m, x| m.max(x.abs())));
                    z = trial;
                    f = ft;
                    if done {
                        return (f.amax() < 1e-9).then_some(z);
                    }
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-6 {
                return None;
            }
        }
    }
    (f.amax() < 1e-9).then_some(z)
}

/// Row-scaled product form
/// `G_a = (z_a + i/2)^N prod_{b != a}(z_a - z_b - i) - (z_a - i/2)^N prod_{b != a}(z_a - z_b + i)`
/// and its holomorphic Jacobian.
fn product_form(n_sites: usize, z: &[C64]) -> (DVector<C64>, DMatrix<C64>) {
    let n = z.len();
    let i = C64::i();
    let big_n = n_sites as i32;
    let mut g = DVector::zeros(n);
    let mut jac = DMatrix::zeros(n, n);
    for a in 0..n {
        let scale = 1.0 / (z[a].norm() + 1.5).powi(big_n + n as i32 - 1);
        for (sign, shift) in [(1.0, 1.0), (-1.0, -1.0)] {
            // sign * (z_a + shift i/2)^N prod_b (z_a - z_b - shift i)
            let base = z[a] + i * 0.5 * shift;
            let pw = base.powi(big_n);
            let factors: Vec<(usize, C64)> = (0..n).filter(|&b| b != a).map(|b| (b, z[a] - z[b] - i * shift)).collect();
            let prod_except = |skip: Option<usize>| -> C64 {
                factors.iter().filter(|(b, _)| Some(*b) != skip).map(|(_, f)| *f).product()
            };
            let full = prod_except(None);
            g[a] += pw * full * sign * scale;
            let mut d_a = base.powi(big_n - 1) * big_n as f64 * full;
            for &(b, _) in &factors {
                let rest = pw * prod_except(Some(b));
                d_a += rest;
                jac[(a, b)] -= rest * sign * scale;
            }
            jac[(a, a)] += d_a * sign * scale;
        }
    }
    (g, jac)
}

/// Damped complex Newton on the product form.
fn solve_complex(n_sites: usize, seed: &[C64]) -> Option<Vec<C64>> {
    let mut z = seed.to_vec();
    let (mut g, mut jac) = product_form(n_sites, &z);
    for _ in 0..MAX_ITER {
        let step = jac.clone().lu().solve(&g)?;
        let mut t = 1.0;
        loop {
            let trial: Vec<C64> = z.iter().zip(step.iter()).map(|(a, s)| a - s * t).collect();
            let (gt, jt) = product_form(n_sites, &trial);
            if gt.norm() < g.norm() || t < 1e-4 {
                let size = 1.0 + z.iter().fold(0.0f64, |m, x| m.max(x.norm()));
                let moved = step.camax() * t;
                z = trial;
                g = gt;
                jac = jt;
                if moved < 1e-14 * size || g.camax() < 1e-15 {
                    return Some(z);
                }
                break;
            }
            t *= 0.5;
        }
        if z.iter().any(|x| !(x.re.is_finite() && x.im.is_finite())) {
            return None;
        }
    }
    (g.camax() < 1e-12).then_some(z)
}

/// Groups of equal labels, in ascending order: `(label, multiplicity)`.
fn label_groups(lambdas: &[i64]) -> Vec<(i64, usize)> {
    let mut out: Vec<(i64, usize)> = Vec::new();
    for &l in lambdas {
        match out.last_mut() {
            Some((last, m)) if *last == l => *m += 1,
            _ => out.push((l, 1)),
        }
    }
    out
}

/// String seeds: a group of `m` equal labels becomes `x + i(m + 1 - 2j)/2 * (1 + dev)`
/// centred on `x = (m/2) cot(pi m lambda / N)`.
fn string_seed(n_sites: usize, groups: &[(i64, usize)], dev: f64) -> Vec<C64> {
    let big_n = n_sites as f64;
    let mut z = Vec::new();
    for &(l, m) in groups {
        let x = 0.5 * m as f64 / (PI * (m as f64) * l as f64 / big_n).tan();
        for j in 1..=m {
            let off = 0.5 * (m as f64 + 1.0 - 2.0 * j as f64) * (1.0 + dev);
            z.push(C64::new(x, off));
        }
    }
    z
}

fn string_centres(n_sites: usize, groups: &[(i64, usize)]) -> Vec<f64> {
    groups
        .iter()
        .flat_map(|&(l, m)| {
            let x = 0.5 * m as f64 / (PI * (m as f64) * l as f64 / n_sites as f64).tan();
            std::iter::repeat_n(x, m)
        })
        .collect()
}

/// Accepts a solved rapidity set: total momentum consistent with the labels,
/// distinct rapidities away from the poles, branch-consistent roots and an
/// eigenstate of the ring.
fn certify(n_sites: usize, lambdas: &[i64], goldstones: usize, z: &[C64], want_complex: bool) -> Result<BetheRoots> {
    let i = C64::i();
    for (a, za) in z.iter().enumerate() {
        if (za - i * 0.5).norm() < 1e-8 || (za + i * 0.5).norm() < 1e-8 {
            return Err(Error::NoConvergence("rapidity on a pole".into()));
        }
        for zb in &z[a + 1..] {
            if (za - zb).norm() < 1e-6 {
                return Err(Error::NoConvergence("coincident rapidities".into()));
            }
        }
    }
    let complex = z.iter().any(|x| x.im.abs() > 1e-10);
    if complex != want_complex {
        return Err(Error::NoConvergence("root of the wrong type".into()));
    }
    let mut eik = C64::new(1.0, 0.0);
    for za in z {
        eik *= (za + i * 0.5) / (za - i * 0.5);
    }
    let total: i64 = lambdas.iter().sum();
    let expect = C64::from_polar(1.0, TAU * total as f64 / n_sites as f64);
    if (eik - expect).norm() > 1e-8 {
        return Err(Error::NoConvergence("total momentum does not match labels".into()));
    }
    let class = if goldstones > 0 {
        StateClass::GoldstoneMixed
    } else if complex {
        StateClass::Wavecomplex
    } else {
        StateClass::Scattering
    };
    let z_clean: Vec<C64> = z.iter().map(|x| if x.im.abs() <= 1e-10 { C64::new(x.re, 0.0) } else { *x }).collect();
    let roots = BetheRoots::from_rapidities(n_sites, lambdas, goldstones, &z_clean, class)?;
    let res = roots.bae_residual();
    if res > BAE_TOL {
        return Err(Error::NoConvergence(format!("Bethe residual {res:.3e}")));
    }
    let psi = n_magnon_state(n_sites, &roots)?;
    let check = SectorHamiltonian::on_basis(Arc::clone(psi.shared_basis()), 1.0).verify_eigenstate(&psi)?;
    if check.residual > MULTI_EIGEN_TOL {
        return Err(Error::Misclassified {
            residual: check.residual,
            context: format!("labels {lambdas:?} on N = {n_sites}"),
        });
    }
    Ok(roots)
}

fn validate_labels(n_sites: usize, lambdas: &[i64]) -> Result<()> {
    if lambdas.is_empty() || lambdas.len() > MAX_MAGNONS {
        return param(format!("need 1..={MAX_MAGNONS} labels, got {}", lambdas.len()));
    }
    if lambdas.len() > n_sites {
        return param("more magnons than sites");
    }
    if lambdas.windows(2).any(|w| w[0] > w[1]) {
        return param(format!("labels {lambdas:?} must be ascending"));
    }
    if lambdas.iter().any(|&l| !(0..n_sites as i64).contains(&l)) {
        return param(format!("labels {lambdas:?} outside 0..{n_sites}"));
    }
    Ok(())
}

/// Solution of the n-magnon Bethe equations for ascending labels, with the
/// rapidities of the non-Goldstone magnons.
///
/// Zero labels become Goldstone magnons (`k = 0`, zero phases). Distinct
/// nonzero labels are solved for real rapidities; repeated labels are
/// treated as strings and solved in the complex plane, first from string
/// seeds and, failing that, by continuation in the ring length from the
/// smallest ring that holds the labels. `seed` overrides the initial
/// rapidities.
pub fn solve_n_magnon_bae_seeded(
    n_sites: usize,
    lambdas: &[i64],
    seed: Option<&[C64]>,
) -> Result<(BetheRoots, Vec<C64>)> {
    validate_labels(n_sites, lambdas)?;
    let goldstones = lambdas.iter().take_while(|&&l| l == 0).count();
    let rest = &lambdas[goldstones..];
    if rest.is_empty() {
        let roots = BetheRoots {
            n_sites,
            lambdas: lambdas.to_vec(),
            ks: vec![C64::new(0.0, 0.0); lambdas.len()],
            phis: vec![C64::new(0.0, 0.0); lambdas.len() * (lambdas.len() - 1) / 2],
            class: StateClass::GoldstoneMixed,
        };
        return Ok((roots, Vec::new()));
    }
    let groups = label_groups(rest);
    let strings = groups.iter().any(|&(_, m)| m > 1);
    let mut last_err = Error::NoRoot(format!("no seed converged for {lambdas:?} on N = {n_sites}"));
    if !strings {
        let real_seed: Vec<f64> = match seed {
            Some(s) => s.iter().map(|x| x.re).collect(),
            None => rest.iter().map(|&l| 0.5 / (PI * l as f64 / n_sites as f64).tan()).collect(),
        };
        if let Some(z) = solve_real(n_sites, rest, &real_seed) {
            let z: Vec<C64> = z.into_iter().map(|x| C64::new(x, 0.0)).collect();
            match certify(n_sites, lambdas, goldstones, &z, false) {
                Ok(r) => return Ok((r, z)),
                Err(e) => last_err = e,
            }
        }
        return Err(last_err);
    }
    let mut seeds: Vec<Vec<C64>> = Vec::new();
    if let Some(s) = seed {
        seeds.push(s.to_vec());
    }
    for dev in [0.0, 0.05, 0.2, -0.1] {
        seeds.push(string_seed(n_sites, &groups, dev));
    }
    for s in &seeds {
        if let Some(z) = solve_complex(n_sites, s) {
            match certify(n_sites, lambdas, goldstones, &z, true) {
                Ok(r) => return Ok((r, z)),
                Err(e) => last_err = e,
            }
        }
    }
    if seed.is_none() {
        // continuation: walk N up from the smallest ring holding the labels
        let start = (2 * lambdas.len()).max(*rest.last().unwrap() as usize + 2);
        if start < n_sites {
            let mut prev: Option<(usize, Vec<C64>)> = None;
            for m in start..n_sites {
                let attempt = match &prev {
                    Some((pm, pz)) => solve_n_magnon_bae_seeded(m, lambdas, Some(&shift_seed(*pm, m, &groups, pz))),
                    None => solve_n_magnon_bae_seeded(m, lambdas, None),
                };
                if let Ok((_, z)) = attempt {
                    prev = Some((m, z));
                }
            }
            if let Some((pm, pz)) = prev {
                let s = shift_seed(pm, n_sites, &groups, &pz);
                if let Some(z) = solve_complex(n_sites, &s) {
                    match certify(n_sites, lambdas, goldstones, &z, true) {
                        Ok(r) => return Ok((r, z)),
                        Err(e) => last_err = e,
                    }
                }
            }
        }
    }
    Err(last_err)
}

/// Moves a solution on `from` sites to a seed on `to` sites by shifting each
/// string by the change of its centre.
fn shift_seed(from: usize, to: usize, groups: &[(i64, usize)], z: &[C64]) -> Vec<C64> {
    let a = string_centres(from, groups);
    let b = string_centres(to, groups);
    z.iter().zip(a.iter().zip(&b)).map(|(x, (ca, cb))| x + (cb - ca)).collect()
}

/// Roots of the n-magnon Bethe equations for ascending labels.
pub fn solve_n_magnon_bae(n_sites: usize, lambdas: &[i64]) -> Result<BetheRoots> {
    solve_n_magnon_bae_seeded(n_sites, lambdas, None).map(|(r, _)| r)
}
