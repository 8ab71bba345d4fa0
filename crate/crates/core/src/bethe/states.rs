//! Closed-form state constructors for one and two magnons.

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::error::{param, Error, Result};
use crate::exactcore::{binomial, SectorBasis, StateVector};
use crate::C64;

fn sector(n_sites: usize, n_up: usize) -> Result<Arc<SectorBasis>> {
    Ok(Arc::new(SectorBasis::new(n_sites, n_up)?))
}

/// Plane wave `e^{i k m} / sqrt(N)` with `k = 2 pi lambda_1 / N`.
pub fn one_magnon_state(n_sites: usize, lambda1: i64) -> Result<StateVector> {
    if !(0..n_sites as i64).contains(&lambda1) {
        return param(format!("label {lambda1} outside 0..{n_sites}"));
    }
    let basis = sector(n_sites, 1)?;
    let k = TAU * lambda1 as f64 / n_sites as f64;
    let scale = 1.0 / (n_sites as f64).sqrt();
    let amps = (1..=n_sites).map(|m| C64::from_polar(scale, k * m as f64)).collect();
    StateVector::from_normalized(basis, amps)
}

/// Uniform superposition of all configurations with `n` up spins.
pub fn goldstone_state(n_sites: usize, n: usize) -> Result<StateVector> {
    let basis = sector(n_sites, n)?;
    let a = C64::new(1.0 / (binomial(n_sites, n) as f64).sqrt(), 0.0);
    let amps = vec![a; basis.len()];
    StateVector::from_normalized(basis, amps)
}

/// Iterates `(index, m1, m2)` over a two-magnon basis, sites 1-based.
fn pairs(basis: &SectorBasis) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
    basis.configs().iter().enumerate().map(|(i, &c)| {
        let m1 = c.trailing_zeros() as usize + 1;
        let m2 = 64 - c.leading_zeros() as usize;
        (i, m1, m2)
    })
}

/// Closed-form normalization `nu(k, phi)` of the scattering form, so that
/// `2 nu e^{iK(m1+m2)/2} cos((k(m2-m1) + phi)/2)` has unit norm:
///
/// ```text
/// nu^-2 = N(N-1) + [N cos(k + phi) - (N-1) cos(phi) - cos(kN + phi)] / (1 - cos k)
/// ```
///
/// The fraction is 0/0 at `k = 0`; when `1 - cos k < 1e-9` it is replaced by
/// its expansion to second order in `k`,
/// `N(N-1) cos(phi) - k sin(phi) (N^3 - N)/3 - k^2 cos(phi) (N^4 - N^2)/12`.
pub fn scattering_norm(n_sites: usize, k: f64, phi: f64) -> f64 {
    let n = n_sites as f64;
    let fraction = if 1.0 - k.cos() < 1e-9 {
        n * (n - 1.0) * phi.cos() - k * phi.sin() * (n.powi(3) - n) / 3.0
            - k * k * phi.cos() * (n.powi(4) - n * n) / 12.0
    } else {
        (n * (k + phi).cos() - (n - 1.0) * phi.cos() - (k * n + phi).cos()) / (1.0 - k.cos())
    };
    1.0 / (n * (n - 1.0) + fraction).sqrt()
}

/// Two-magnon scattering form
/// `e^{iK(m1+m2)/2} cos((k(m2 - m1) + phi)/2)`, normalized.
///
/// Valid for any real `(K, k, phi)`, eigenstate or not. Normalized with
/// [`scattering_norm`]; where that closed form loses digits to cancellation
/// the vector is renormalized explicitly.
pub fn scattering_state(n_sites: usize, big_k: f64, k: f64, phi: f64) -> Result<StateVector> {
    if !(big_k.is_finite() && k.is_finite() && phi.is_finite()) {
        return param("non-finite scattering parameters");
    }
    let basis = sector(n_sites, 2)?;
    let mut amps = vec![C64::new(0.0, 0.0); basis.len()];
    for (i, m1, m2) in pairs(&basis) {
        let r = (m2 - m1) as f64;
        amps[i] = C64::from_polar(1.0, big_k * (m1 + m2) as f64 / 2.0) * (0.5 * (k * r + phi)).cos();
    }
    let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if norm2 < 1e-24 * basis.len() as f64 {
        return Err(Error::Degenerate(format!(
            "scattering form vanishes for k = {k}, phi = {phi}"
        )));
    }
    let nu = scattering_norm(n_sites, k, phi);
    if nu.is_finite() {
        amps.iter_mut().for_each(|a| *a *= 2.0 * nu);
        StateVector::from_normalized(basis, amps)
    } else {
        StateVector::from_amplitudes(basis, amps)
    }
}

/// `sum_{r=1}^{N-1} f(N/2 - r)^2` in closed form for `f = cosh(v .)`
/// (`sign = +1`) or `f = sinh(v .)` (`sign = -1`):
/// `[sinh((N-1)v) + sign (N-1) sinh v] / (2 sinh v)`.
fn bound_norm_sum(n_sites: usize, v: f64, sign: f64) -> f64 {
    let m = (n_sites - 1) as f64;
    if sign < 0.0 && m * v < 1e-2 {
        // sinh(mv) - m sinh(v) = sum_{j odd >= 3} (m^j - m) v^j / j!
        let mut total = 0.0;
        let mut term_v = v; // v^j / j!
        let mut j = 1.0;
        while j < 40.0 {
            term_v *= v * v / ((j + 1.0) * (j + 2.0));
            j += 2.0;
            total += (m.powf(j) - m) * term_v;
        }
        total / (2.0 * v.sinh())
    } else {
        ((m * v).sinh() + sign * m * v.sinh()) / (2.0 * v.sinh())
    }
}

/// Closed-form normalization of the cosh-type bound state.
pub fn cosh_bound_norm(n_sites: usize, v: f64) -> f64 {
    1.0 / (0.5 * n_sites as f64 * bound_norm_sum(n_sites, v, 1.0)).sqrt()
}

/// Closed-form normalization of the sinh-type bound state; the small-`v`
/// cancellation is handled by a series.
pub fn sinh_bound_norm(n_sites: usize, v: f64) -> f64 {
    1.0 / (0.5 * n_sites as f64 * bound_norm_sum(n_sites, v, -1.0)).sqrt()
}

fn bound_state(n_sites: usize, u: f64, v: f64, sinh_type: bool) -> Result<StateVector> {
    if !(u.is_finite() && v.is_finite()) {
        return param("non-finite bound-state parameters");
    }
    if sinh_type && v < 1e-6 {
        return param(format!("sinh-type bound states need v >= 1e-6, got {v}"));
    }
    if !sinh_type && v <= 0.0 {
        return param(format!("cosh-type bound states need v > 0, got {v}"));
    }
    if n_sites < 3 {
        return param("bound states need N >= 3");
    }
    let basis = sector(n_sites, 2)?;
    let half = n_sites as f64 / 2.0;
    let mut amps = vec![C64::new(0.0, 0.0); basis.len()];
    if v * n_sites as f64 <= 700.0 {
        let nu = if sinh_type { sinh_bound_norm(n_sites, v) } else { cosh_bound_norm(n_sites, v) };
        for (i, m1, m2) in pairs(&basis) {
            let x = v * (half - (m2 - m1) as f64);
            let f = if sinh_type { x.sinh() } else { x.cosh() };
            amps[i] = C64::from_polar(nu * f, u * (m1 + m2) as f64);
        }
        StateVector::from_normalized(basis, amps)
    } else {
        // scale every amplitude by e^{-v(N/2 - 1)} before exponentiating
        let shift = v * (half - 1.0);
        for (i, m1, m2) in pairs(&basis) {
            let x = v * (half - (m2 - m1) as f64);
            let plus = (x - shift).exp();
            let minus = (-x - shift).exp();
            let f = 0.5 * if sinh_type { plus - minus } else { plus + minus };
            amps[i] = C64::from_polar(f, u * (m1 + m2) as f64);
        }
        StateVector::from_amplitudes(basis, amps)
    }
}

/// Cosh-type bound form `e^{iu(m1+m2)} cosh(v(N/2 - (m2 - m1)))`, normalized.
pub fn cosh_bound_state(n_sites: usize, u: f64, v: f64) -> Result<StateVector> {
    bound_state(n_sites, u, v, false)
}

/// Sinh-type bound form `e^{iu(m1+m2)} sinh(v(N/2 - (m2 - m1)))`, normalized.
pub fn sinh_bound_state(n_sites: usize, u: f64, v: f64) -> Result<StateVector> {
    bound_state(n_sites, u, v, true)
}

/// The even-N state with the two up spins always adjacent:
/// amplitude `(-1)^{m+1} / sqrt(N)` on `|m, m+1>`, the wrapped pair
/// `|N, 1>` taking the sign of `m = N`.
pub fn singular_state(n_sites: usize) -> Result<StateVector> {
    if n_sites <= 2 || n_sites % 2 == 1 {
        return param(format!("singular state needs even N > 2, got {n_sites}"));
    }
    let basis = sector(n_sites, 2)?;
    let mut amps = vec![C64::new(0.0, 0.0); basis.len()];
    let a = 1.0 / (n_sites as f64).sqrt();
    for m in 1..=n_sites {
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        let next = m % n_sites + 1;
        let c = (1u64 << (m - 1)) | (1u64 << (next - 1));
        let idx = basis.index_of(c).expect("two-up config");
        amps[idx] = C64::new(sign * a, 0.0);
    }
    StateVector::from_normalized(basis, amps)
}
