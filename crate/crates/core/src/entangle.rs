//! Two-spin reduced density matrices, concurrence and entanglement of
//! formation, plus the closed forms for Goldstone, quenched and singular
//! states.

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::exactcore::StateVector;
use crate::C64;

/// Concurrences below this are reported as exactly zero in profiles.
pub const ZERO_TOL: f64 = 1e-10;
/// Required modulus of `<psi|T psi>` for a profile.
pub const TRANSLATION_TOL: f64 = 1e-10;

/// Reduced density matrix of spins `p < q` in the block form
///
/// ```text
/// | alpha   0      0      0      |
/// | 0       beta   gamma  0      |
/// | 0       gamma* delta  0      |
/// | 0       0      0      epsilon|
/// ```
///
/// on the ordered basis `|up up>, |up down>, |down up>, |down down>` (spin `p`
/// first). States of fixed magnetization have no other entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoSpinRDM {
    pub sites: (usize, usize),
    pub alpha: f64,
    pub beta: f64,
    pub gamma: C64,
    pub delta: f64,
    pub epsilon: f64,
}

impl TwoSpinRDM {
    pub fn trace(&self) -> f64 {
        self.alpha + self.beta + self.delta + self.epsilon
    }

    /// Unit trace, nonnegative diagonal and a positive central block, each
    /// within `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        (self.trace() - 1.0).abs() <= tol
            && [self.alpha, self.beta, self.delta, self.epsilon].iter().all(|&d| d >= -tol)
            && self.gamma.norm_sqr() <= self.beta * self.delta + tol
    }

    /// Dense 4x4 matrix in the ordered basis above.
    pub fn to_matrix(&self) -> [[C64; 4]; 4] {
        let z = C64::new(0.0, 0.0);
        let r = |x: f64| C64::new(x, 0.0);
        [
            [r(self.alpha), z, z, z],
            [z, r(self.beta), self.gamma, z],
            [z, self.gamma.conj(), r(self.delta), z],
            [z, z, z, r(self.epsilon)],
        ]
    }

    /// Largest elementwise difference to another RDM.
    pub fn max_diff(&self, other: &TwoSpinRDM) -> f64 {
        [
            (self.alpha - other.alpha).abs(),
            (self.beta - other.beta).abs(),
            (self.gamma - other.gamma).norm(),
            (self.delta - other.delta).abs(),
            (self.epsilon - other.epsilon).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Partial trace of `psi` over every spin except `p < q` (1-based).
pub fn two_spin_rdm(psi: &StateVector, p: usize, q: usize) -> Result<TwoSpinRDM> {
    let basis = psi.basis();
    let n = basis.n_sites();
    if !(1 <= p && p < q && q <= n) {
        return param(format!("sites ({p}, {q}) need 1 <= p < q <= {n}"));
    }
    let bp = 1u64 << (p - 1);
    let bq = 1u64 << (q - 1);
    let (mut alpha, mut beta, mut delta, mut epsilon) = (0.0, 0.0, 0.0, 0.0);
    let mut gamma = C64::new(0.0, 0.0);
    let amps = psi.amps();
    for (&c, a) in basis.configs().iter().zip(amps) {
        let w = a.norm_sqr();
        match (c & bp != 0, c & bq != 0) {
            (true, true) => alpha += w,
            (false, false) => epsilon += w,
            (false, true) => delta += w,
            (true, false) => {
                beta += w;
                let partner = basis.index_of(c ^ bp ^ bq).expect("same sector");
                gamma += a * amps[partner].conj();
            }
        }
    }
    Ok(TwoSpinRDM {
        sites: (p, q),
        alpha,
        beta,
        gamma,
        delta,
        epsilon,
    })
}

/// `C = 2 max(0, |gamma| - sqrt(alpha epsilon))`, clamped to `[0, 1]`.
pub fn concurrence(rdm: &TwoSpinRDM) -> f64 {
    let c = 2.0 * (rdm.gamma.norm() - (rdm.alpha * rdm.epsilon).max(0.0).sqrt());
    c.clamp(0.0, 1.0)
}

/// Entanglement of formation from concurrence,
/// `h((1 + sqrt(1 - C^2)) / 2)` with `h` the binary entropy in bits.
pub fn eof_from_concurrence(c: f64) -> f64 {
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt()))
}

/// `-x lg x - (1-x) lg(1-x)`, zero at the endpoints.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |t: f64| if t <= 0.0 { 0.0 } else { -t * t.log2() };
    term(x) + term(1.0 - x)
}

/// Concurrences `C_1 .. C_{floor(N/2)}` indexed by separation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcurrenceProfile {
    pub n_sites: usize,
    pub values: Vec<f64>,
}

impl ConcurrenceProfile {
    fn from_raw(n_sites: usize, raw: Vec<f64>) -> Self {
        let values = raw.into_iter().map(|c| if c < ZERO_TOL { 0.0 } else { c }).collect();
        Self { n_sites, values }
    }

    /// `C_r`, `r` from 1.
    pub fn get(&self, r: usize) -> f64 {
        self.values[r - 1]
    }

    /// `C_{-i}`: counted back from the longest range, `C_{-1} = C_{floor(N/2)}`.
    pub fn from_end(&self, i: usize) -> f64 {
        self.values[self.values.len() - i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Number of separations with nonzero concurrence.
    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|&&c| c > 0.0).count()
    }
}

fn pair_concurrence(psi: &StateVector, a: usize, b: usize) -> Result<f64> {
    let (p, q) = if a < b { (a, b) } else { (b, a) };
    Ok(concurrence(&two_spin_rdm(psi, p, q)?))
}

/// Profile of a translation-invariant state, from pairs `(1, 1 + r)`.
///
/// The state must satisfy `|<psi|T psi>| >= 1 - 1e-10`, and every value is
/// cross-checked against the shifted pair `(2, 2 + r)`.
pub fn concurrence_profile(psi: &StateVector) -> Result<ConcurrenceProfile> {
    let n = psi.n_sites();
    let overlap = psi.translation_overlap().norm();
    if overlap < 1.0 - TRANSLATION_TOL {
        return Err(Error::NotTranslationInvariant { overlap });
    }
    let mut raw = Vec::with_capacity(n / 2);
    for r in 1..=n / 2 {
        let c = pair_concurrence(psi, 1, 1 + r)?;
        let shifted = pair_concurrence(psi, 2, (1 + r) % n + 1)?;
        if (c - shifted).abs() > TRANSLATION_TOL {
            return Err(Error::NotTranslationInvariant { overlap });
        }
        raw.push(c);
    }
    Ok(ConcurrenceProfile::from_raw(n, raw))
}

/// Concurrences of the pairs `(1, 1 + r)`, without assuming translation
/// invariance. Used for off-shell states.
pub fn site_one_profile(psi: &StateVector) -> Result<ConcurrenceProfile> {
    let n = psi.n_sites();
    let raw = (1..=n / 2).map(|r| pair_concurrence(psi, 1, 1 + r)).collect::<Result<Vec<_>>>()?;
    Ok(ConcurrenceProfile::from_raw(n, raw))
}

/// Von Neumann entropy (bits) of spin `p` alone.
pub fn single_spin_entropy(psi: &StateVector, p: usize) -> Result<f64> {
    let n = psi.n_sites();
    if !(1..=n).contains(&p) {
        return param(format!("site {p} outside 1..={n}"));
    }
    let bit = 1u64 << (p - 1);
    let up: f64 = psi
        .basis()
        .configs()
        .iter()
        .zip(psi.amps())
        .filter(|(&c, _)| c & bit != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    Ok(binary_entropy(up))
}

/// Pairwise concurrence of the uniform `n`-up state on `N` spins:
/// `2/(N(N-1)) [n(N-n) - sqrt(n(n-1)(N-n)(N-n-1))]`.
pub fn goldstone_concurrence(n: usize, n_sites: usize) -> f64 {
    if n > n_sites || n_sites < 2 {
        return 0.0;
    }
    let (n, big) = (n as f64, n_sites as f64);
    let inner = n * (n - 1.0) * (big - n) * (big - n - 1.0);
    2.0 / (big * (big - 1.0)) * (n * (big - n) - inner.max(0.0).sqrt())
}

fn check_singular(n_sites: usize) -> Result<()> {
    if n_sites <= 2 || n_sites % 2 == 1 {
        return param(format!("singular state needs even N > 2, got {n_sites}"));
    }
    Ok(())
}

/// Concurrence profile of the singular state: `(2 + 2 delta_{N,4})/N` at
/// separation two, zero elsewhere.
pub fn singular_concurrence(n_sites: usize, r: usize) -> Result<f64> {
    check_singular(n_sites)?;
    if !(1..=n_sites / 2).contains(&r) {
        return param(format!("separation {r} outside 1..={}", n_sites / 2));
    }
    Ok(if r == 2 {
        if n_sites == 4 { 1.0 } else { 2.0 / n_sites as f64 }
    } else {
        0.0
    })
}

/// Closed-form RDM of spins `p < q` in the singular state.
pub fn singular_rdm_closed_form(n_sites: usize, p: usize, q: usize) -> Result<TwoSpinRDM> {
    check_singular(n_sites)?;
    if !(1 <= p && p < q && q <= n_sites) {
        return param(format!("sites ({p}, {q}) need 1 <= p < q <= {n_sites}"));
    }
    let n = n_sites as f64;
    let kd = |x: bool| if x { 1.0 } else { 0.0 };
    // adjacency and next-nearest adjacency on the ring
    let sep = (q - p).min(n_sites - (q - p));
    let near = kd(sep == 1);
    let next = kd(sep == 2);
    // on N = 4 the opposite pair is next-nearest both ways round the ring
    let gamma = -next * (1.0 + kd(n_sites == 4)) / n;
    Ok(TwoSpinRDM {
        sites: (p, q),
        alpha: near / n,
        beta: (2.0 - near) / n,
        gamma: C64::new(gamma, 0.0),
        delta: (2.0 - near) / n,
        epsilon: (n - 4.0 + near) / n,
    })
}

/// Closed-form RDM of spins `p < q` in the state with one Goldstone magnon
/// and one magnon of label `lambda_2 != 0`, with
/// `c = cos(pi lambda_2 (p - q) / N)`:
///
/// ```text
/// alpha   = 4 c^2 / (N(N-2))
/// beta    = delta = 2 (N - 2 - 2 c^2) / (N(N-2))
/// gamma   = 2 (N-4) e^{i pi (p-q) lambda_2 / N} c / (N(N-2))
/// epsilon = ((N-2)(N-4) + 4 c^2) / (N(N-2))
/// ```
pub fn quenched_rdm_closed_form(n_sites: usize, lambda2: i64, p: usize, q: usize) -> Result<TwoSpinRDM> {
    if n_sites < 4 {
        return param(format!("closed form needs N >= 4, got {n_sites}"));
    }
    if !(1..n_sites as i64).contains(&lambda2) {
        return param(format!("label {lambda2} outside 1..{n_sites}; the form fails at 0"));
    }
    if !(1 <= p && p < q && q <= n_sites) {
        return param(format!("sites ({p}, {q}) need 1 <= p < q <= {n_sites}"));
    }
    let n = n_sites as f64;
    let arg = std::f64::consts::PI * lambda2 as f64 * (p as f64 - q as f64) / n;
    let c = arg.cos();
    let denom = n * (n - 2.0);
    Ok(TwoSpinRDM {
        sites: (p, q),
        alpha: 4.0 * c * c / denom,
        beta: 2.0 * (n - 2.0 - 2.0 * c * c) / denom,
        gamma: C64::from_polar(2.0 * (n - 4.0) * c / denom, arg),
        delta: 2.0 * (n - 2.0 - 2.0 * c * c) / denom,
        epsilon: ((n - 2.0) * (n - 4.0) + 4.0 * c * c) / denom,
    })
}

/// Entanglement of formation of any single spin with the rest in the
/// one-Goldstone, one-magnon state: the binary entropy of `2/N`.
pub fn single_spin_eof(n_sites: usize) -> Result<f64> {
    if n_sites <= 2 {
        return param(format!("single-spin entropy needs N > 2, got {n_sites}"));
    }
    Ok(binary_entropy(2.0 / n_sites as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bethe::{goldstone_state, one_magnon_state, singular_state};
    use crate::exactcore::apply_total_raising;

    #[test]
    fn concurrence_examples() {
        let bell = TwoSpinRDM {
            sites: (1, 2),
            alpha: 0.0,
            beta: 0.5,
            gamma: C64::new(0.5, 0.0),
            delta: 0.5,
            epsilon: 0.0,
        };
        assert!((concurrence(&bell) - 1.0).abs() < 1e-15);
        let flat = TwoSpinRDM {
            sites: (1, 2),
            alpha: 0.25,
            beta: 0.25,
            gamma: C64::new(0.25, 0.0),
            delta: 0.25,
            epsilon: 0.25,
        };
        assert_eq!(concurrence(&flat), 0.0);
    }

    #[test]
    fn reference_state_rdm() {
        let psi = goldstone_state(5, 0).unwrap();
        let r = two_spin_rdm(&psi, 2, 4).unwrap();
        assert_eq!((r.alpha, r.beta, r.delta, r.epsilon), (0.0, 0.0, 0.0, 1.0));
        assert_eq!(r.gamma, C64::new(0.0, 0.0));
    }

    #[test]
    fn one_magnon_rdm() {
        let n = 9;
        let psi = one_magnon_state(n, 4).unwrap();
        let r = two_spin_rdm(&psi, 2, 7).unwrap();
        assert!((r.gamma.norm() - 1.0 / n as f64).abs() < 1e-14);
        assert!((r.epsilon - (n as f64 - 2.0) / n as f64).abs() < 1e-14);
        assert_eq!(r.alpha, 0.0);
    }

    #[test]
    fn bad_sites() {
        let psi = one_magnon_state(5, 1).unwrap();
        assert!(two_spin_rdm(&psi, 3, 3).is_err());
        assert!(two_spin_rdm(&psi, 0, 2).is_err());
        assert!(two_spin_rdm(&psi, 2, 6).is_err());
    }

    #[test]
    fn goldstone_values() {
        assert_eq!(goldstone_concurrence(0, 7), 0.0);
        assert!(goldstone_concurrence(7, 7).abs() < 1e-15);
        assert!((goldstone_concurrence(1, 9) - 2.0 / 9.0).abs() < 1e-15);
        let expect = (8.0 - 24f64.sqrt()) / 15.0;
        assert!((goldstone_concurrence(2, 6) - expect).abs() < 1e-15);
    }

    #[test]
    fn singular_values() {
        assert_eq!(singular_concurrence(4, 2).unwrap(), 1.0);
        assert_eq!(singular_concurrence(8, 2).unwrap(), 0.25);
        assert_eq!(singular_concurrence(8, 3).unwrap(), 0.0);
        assert!(singular_concurrence(7, 2).is_err());
    }

    #[test]
    fn singular_rdm_matches_trace() {
        for n in (4..=12).step_by(2) {
            let psi = singular_state(n).unwrap();
            for p in 1..=n {
                for q in p + 1..=n {
                    let num = two_spin_rdm(&psi, p, q).unwrap();
                    let closed = singular_rdm_closed_form(n, p, q).unwrap();
                    assert!(num.max_diff(&closed) < 1e-12, "{n} {p} {q} {num:?} {closed:?}");
                }
            }
        }
    }

    #[test]
    fn quenched_closed_form_zero_cosine() {
        // pi * 3 * (1 - 3) / 12 = -pi/2
        let r = quenched_rdm_closed_form(12, 3, 1, 3).unwrap();
        assert!(r.gamma.norm() < 1e-15 && r.alpha < 1e-30);
        assert!(quenched_rdm_closed_form(12, 0, 1, 3).is_err());
    }

    #[test]
    fn quenched_closed_form_matches_trace() {
        let n = 6;
        let psi = apply_total_raising(&one_magnon_state(n, 2).unwrap()).unwrap();
        let num = two_spin_rdm(&psi, 1, 2).unwrap();
        let closed = quenched_rdm_closed_form(n, 2, 1, 2).unwrap();
        assert!(num.max_diff(&closed) < 1e-12, "{num:?} {closed:?}");
    }

    #[test]
    fn entropies() {
        assert!((single_spin_eof(4).unwrap() - 1.0).abs() < 1e-15);
        assert!((single_spin_eof(8).unwrap() - 0.8112781244591328).abs() < 1e-12);
        assert!(single_spin_eof(2).is_err());
        assert_eq!(eof_from_concurrence(0.0), 0.0);
        assert!((eof_from_concurrence(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn profile_rejects_non_invariant_state() {
        let basis = std::sync::Arc::new(crate::exactcore::SectorBasis::new(5, 1).unwrap());
        let mut amps = vec![C64::new(0.0, 0.0); 5];
        amps[0] = C64::new(1.0, 0.0);
        let psi = StateVector::from_amplitudes(basis, amps).unwrap();
        assert!(matches!(concurrence_profile(&psi), Err(Error::NotTranslationInvariant { .. })));
    }
}
