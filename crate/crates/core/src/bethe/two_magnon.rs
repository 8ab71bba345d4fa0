//! Two-magnon Bethe equations: real scattering roots and the cosh/sinh
//! bound-state equations.

use std::f64::consts::{PI, TAU};

use crate::bethe::{BetheRoots, BoundKind, BoundParams, StateClass};
use crate::error::{param, Error, Result};
use crate::roots::{bisect_newton, scan_brackets};
use crate::C64;

const SCAN_PIECES: usize = 512;
const BOUND_SCAN_PIECES: usize = 400;

fn check_pair(n_sites: usize, l1: i64, l2: i64) -> Result<()> {
    if n_sites < 2 {
        return param(format!("ring length {n_sites} too small"));
    }
    let n = n_sites as i64;
    if !(0..n).contains(&l1) || !(0..n).contains(&l2) {
        return param(format!("labels ({l1}, {l2}) outside 0..{n}"));
    }
    if l1 > l2 {
        return param(format!("labels ({l1}, {l2}) must be ascending"));
    }
    Ok(())
}

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

/// Real solution of the two-magnon Bethe equations with `k_1 <= k_2` and
/// `phi in [0, pi]`.
///
/// With `k_1 = (2 pi lambda_1 + phi)/N` and `k_2 = (2 pi lambda_2 - phi)/N`
/// the linear equations hold identically and the remaining phase equation
/// is a scalar function of `phi`, bracketed on `(0, pi)` and polished by
/// Newton. A zero label gives the Goldstone root `k = 0, phi = 0` exactly.
pub fn solve_two_magnon_scattering(n_sites: usize, lambda1: i64, lambda2: i64) -> Result<BetheRoots> {
    check_pair(n_sites, lambda1, lambda2)?;
    let n = n_sites as f64;
    let zero = C64::new(0.0, 0.0);
    if lambda1 == 0 {
        return Ok(BetheRoots {
            n_sites,
            lambdas: vec![0, lambda2],
            ks: vec![zero, C64::new(TAU * lambda2 as f64 / n, 0.0)],
            phis: vec![zero],
            class: StateClass::GoldstoneMixed,
        });
    }
    let none = || Error::NoScatteringSolution {
        n_sites,
        lambdas: vec![lambda1, lambda2],
    };
    if lambda1 == lambda2 {
        return Err(none());
    }
    let (a1, a2) = (TAU * lambda1 as f64, TAU * lambda2 as f64);
    let f = |phi: f64| {
        2.0 * cot(phi / 2.0) - cot((a1 + phi) / (2.0 * n)) + cot((a2 - phi) / (2.0 * n))
    };
    let df = |phi: f64| {
        let csc2 = |x: f64| 1.0 / (x.sin() * x.sin());
        -csc2(phi / 2.0) + csc2((a1 + phi) / (2.0 * n)) / (2.0 * n) + csc2((a2 - phi) / (2.0 * n)) / (2.0 * n)
    };
    let edge = 1e-9;
    let brackets = scan_brackets(f, edge, PI - edge, SCAN_PIECES);
    let &(lo, hi) = brackets.first().ok_or_else(none)?;
    let phi = bisect_newton(f, df, lo, hi)?;
    let roots = BetheRoots {
        n_sites,
        lambdas: vec![lambda1, lambda2],
        ks: vec![C64::new((a1 + phi) / n, 0.0), C64::new((a2 - phi) / n, 0.0)],
        phis: vec![C64::new(phi, 0.0)],
        class: StateClass::Scattering,
    };
    if roots.bae_residual() > 1e-10 {
        return Err(Error::NoConvergence(format!(
            "scattering root for ({lambda1}, {lambda2}) on N = {n_sites} has residual {:.3e}",
            roots.bae_residual()
        )));
    }
    Ok(roots)
}

/// Lower and upper ends of the bracket searched for bound-state roots.
pub fn bound_bracket(n_sites: usize) -> (f64, f64) {
    let n = n_sites as f64;
    (n.powf(-1.5), n.ln())
}

/// `g(v) = 0` with `g = cosh v - c - tanh(Nv/2) sinh v` (cosh type) or
/// `g = tanh(Nv/2)(cosh v - c) - sinh v` (sinh type); both are the bound
/// equations multiplied through so they stay bounded on the bracket.
fn bound_function(kind: BoundKind, n: f64, c: f64) -> (impl Fn(f64) -> f64, impl Fn(f64) -> f64) {
    let g = move |v: f64| {
        let t = (n * v / 2.0).tanh();
        match kind {
            BoundKind::Cosh => v.cosh() - c - t * v.sinh(),
            BoundKind::Sinh => t * (v.cosh() - c) - v.sinh(),
        }
    };
    let dg = move |v: f64| {
        let t = (n * v / 2.0).tanh();
        let dt = 0.5 * n * (1.0 - t * t);
        match kind {
            BoundKind::Cosh => v.sinh() - dt * v.sinh() - t * v.cosh(),
            BoundKind::Sinh => dt * (v.cosh() - c) + t * v.sinh() - v.cosh(),
        }
    };
    (g, dg)
}

/// Residual of the bound equation in its original ratio form, relative to
/// the size of its terms.
fn bound_residual(kind: BoundKind, n: f64, c: f64, v: f64) -> f64 {
    let lhs = match kind {
        BoundKind::Cosh => 1.0 / (n * v / 2.0).tanh(),
        BoundKind::Sinh => (n * v / 2.0).tanh(),
    };
    let rhs = v.sinh() / (v.cosh() - c);
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0)
}

fn check_bound_label(n_sites: usize, lambda: i64, kind: BoundKind) -> Result<()> {
    if n_sites < 3 {
        return param(format!("bound states need N >= 3, got {n_sites}"));
    }
    let n = n_sites as i64;
    if !(0..2 * n).contains(&lambda) {
        return param(format!("bound label {lambda} outside 0..{}", 2 * n));
    }
    let parity_ok = match kind {
        BoundKind::Cosh => lambda % 2 == 0,
        BoundKind::Sinh => lambda % 2 == 1,
    };
    if !parity_ok {
        return param(format!(
            "{} bound states need {} labels, got {lambda}",
            if kind == BoundKind::Cosh { "cosh-type" } else { "sinh-type" },
            if kind == BoundKind::Cosh { "even" } else { "odd" }
        ));
    }
    Ok(())
}

/// Every root of the bound equation on the standard bracket, ascending.
pub fn bound_roots(n_sites: usize, lambda: i64, kind: BoundKind) -> Result<Vec<BoundParams>> {
    check_bound_label(n_sites, lambda, kind)?;
    let n = n_sites as f64;
    let u = PI * lambda as f64 / n;
    let c = u.cos();
    let (g, dg) = bound_function(kind, n, c);
    let (lo, hi) = bound_bracket(n_sites);
    let mut out = Vec::new();
    for (a, b) in scan_brackets(&g, lo, hi, BOUND_SCAN_PIECES) {
        let mut v = bisect_newton(&g, &dg, a, b)?;
        // extra Newton steps squeeze the last digits out of the product form
        for _ in 0..3 {
            let step = g(v) / dg(v);
            if !step.is_finite() || (v - step) <= a || (v - step) >= b {
                break;
            }
            v -= step;
        }
        out.push(BoundParams {
            n_sites,
            lambda,
            u,
            v,
            kind,
            residual: bound_residual(kind, n, c, v),
        });
    }
    Ok(out)
}

fn first_bound(n_sites: usize, lambda: i64, kind: BoundKind) -> Result<BoundParams> {
    bound_roots(n_sites, lambda, kind)?.into_iter().next().ok_or_else(|| {
        Error::NoRoot(format!(
            "no {} bound root for lambda = {lambda} on N = {n_sites}",
            if kind == BoundKind::Cosh { "cosh" } else { "sinh" }
        ))
    })
}

/// Binding parameter of the cosh-type state with `u = pi lambda / N`:
/// `coth(Nv/2) = sinh v / (cosh v - cos u)`.
pub fn solve_cosh_bae(n_sites: usize, lambda: i64) -> Result<BoundParams> {
    first_bound(n_sites, lambda, BoundKind::Cosh)
}

/// Binding parameter of the sinh-type state with `u = pi lambda / N`:
/// `tanh(Nv/2) = sinh v / (cosh v - cos u)`.
pub fn solve_sinh_bae(n_sites: usize, lambda: i64) -> Result<BoundParams> {
    first_bound(n_sites, lambda, BoundKind::Sinh)
}

/// All bound roots of one kind on an `n_sites` ring, over every admissible
/// label, ordered by label.
pub fn all_bound_roots(n_sites: usize, kind: BoundKind) -> Result<Vec<BoundParams>> {
    let start = match kind {
        BoundKind::Cosh => 0,
        BoundKind::Sinh => 1,
    };
    let mut out = Vec::new();
    for lambda in (start..2 * n_sites as i64).step_by(2) {
        out.extend(bound_roots(n_sites, lambda, kind)?);
    }
    Ok(out)
}
