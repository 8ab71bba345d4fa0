use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::C64;

/// Eigenstate family a set of Bethe roots (or a state) belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateClass {
    /// All pseudomomenta real and nonzero.
    Scattering,
    /// Two bound magnons, amplitude `cosh` in the separation.
    CoshBound,
    /// Two bound magnons, amplitude `sinh` in the separation.
    SinhBound,
    /// The even-N two-magnon state with infinitely bound magnons.
    Singular,
    /// At least one zero-pseudomomentum magnon.
    GoldstoneMixed,
    /// Three or more mutually bound magnons.
    Wavecomplex,
}

impl StateClass {
    pub fn as_str(self) -> &'static str {
        match self {
            StateClass::Scattering => "scattering",
            StateClass::CoshBound => "cosh_bound",
            StateClass::SinhBound => "sinh_bound",
            StateClass::Singular => "singular",
            StateClass::GoldstoneMixed => "goldstone_mixed",
            StateClass::Wavecomplex => "wavecomplex",
        }
    }
}

impl std::fmt::Display for StateClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Cosh,
    Sinh,
}

/// Two-magnon bound state parameters: pseudomomenta `u +- i v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParams {
    pub n_sites: usize,
    /// Label entering `cos(pi lambda / N)`; equals `lambda_1 + lambda_2`.
    pub lambda: i64,
    pub u: f64,
    pub v: f64,
    pub kind: BoundKind,
    /// Residual of the bound-state equation at `v`.
    pub residual: f64,
}

impl BoundParams {
    /// Quantum numbers `(lambda_1, lambda_2)` of the pair.
    pub fn lambdas(&self) -> (i64, i64) {
        match self.kind {
            BoundKind::Cosh => (self.lambda / 2, self.lambda / 2),
            BoundKind::Sinh => ((self.lambda - 1) / 2, (self.lambda + 1) / 2),
        }
    }

    /// The equivalent complex Bethe roots: `k = u +- i v` with phase `i N v`
    /// (cosh) or `pi + i N v` (sinh).
    pub fn to_roots(&self) -> BetheRoots {
        let n = self.n_sites as f64;
        let (l1, l2) = self.lambdas();
        let phi = match self.kind {
            BoundKind::Cosh => C64::new(0.0, n * self.v),
            BoundKind::Sinh => C64::new(PI, n * self.v),
        };
        BetheRoots {
            n_sites: self.n_sites,
            lambdas: vec![l1, l2],
            ks: vec![C64::new(self.u, self.v), C64::new(self.u, -self.v)],
            phis: vec![phi],
            class: match self.kind {
                BoundKind::Cosh => StateClass::CoshBound,
                BoundKind::Sinh => StateClass::SinhBound,
            },
        }
    }
}

/// Pseudomomenta, pairwise Bethe phases and quantum numbers of an eigenstate.
///
/// The phases are stored for `a < b` in row-major order; `phi(b, a)` is
/// `-phi(a, b)`. The roots satisfy
///
/// ```text
/// N k_a = 2 pi lambda_a + sum_{b != a} phi_ab
/// 2 cot(phi_ab / 2) = cot(k_a / 2) - cot(k_b / 2)
/// ```
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetheRoots {
    pub n_sites: usize,
    pub lambdas: Vec<i64>,
    pub ks: Vec<C64>,
    pub phis: Vec<C64>,
    pub class: StateClass,
}

pub(crate) fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

impl BetheRoots {
    pub fn n_magnons(&self) -> usize {
        self.ks.len()
    }

    /// Antisymmetric phase lookup.
    pub fn phi(&self, a: usize, b: usize) -> C64 {
        let n = self.n_magnons();
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.phis[pair_index(n, a, b)],
            std::cmp::Ordering::Greater => -self.phis[pair_index(n, b, a)],
            std::cmp::Ordering::Equal => C64::new(0.0, 0.0),
        }
    }

    pub fn goldstone_count(&self) -> usize {
        self.ks.iter().filter(|k| k.norm() == 0.0).count()
    }

    /// Rapidities `z = cot(k/2) / 2` of the non-Goldstone magnons.
    pub fn rapidities(&self) -> Vec<C64> {
        self.ks
            .iter()
            .filter(|k| k.norm() != 0.0)
            .map(|k| 0.5 / (k * 0.5).tan())
            .collect()
    }

    /// Total pseudomomentum `sum_a k_a`.
    pub fn total_momentum(&self) -> C64 {
        self.ks.iter().sum()
    }

    /// Largest violation of the Bethe equations, evaluated from the stored
    /// roots alone.
    ///
    /// The phase equation is used in the product form
    /// `2 cos(phi/2) sin(k_a/2) sin(k_b/2) = sin(phi/2) sin((k_b - k_a)/2)`,
    /// scaled to be insensitive to the magnitude of complex arguments; this
    /// form stays finite for zero pseudomomenta.
    pub fn bae_residual(&self) -> f64 {
        let n = self.n_magnons();
        let big_n = self.n_sites as f64;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            let mut lin = self.ks[a] * big_n - TAU * self.lambdas[a] as f64;
            for b in 0..n {
                if b != a {
                    lin -= self.phi(a, b);
                }
            }
            worst = worst.max(lin.norm());
        }
        for a in 0..n {
            for b in a + 1..n {
                let half_phi = self.phi(a, b) * 0.5;
                let (sa, ca) = ((self.ks[a] * 0.5).sin(), (self.ks[a] * 0.5).cos());
                let (sb, cb) = ((self.ks[b] * 0.5).sin(), (self.ks[b] * 0.5).cos());
                let lhs = half_phi.cos() * sa * sb * 2.0;
                let rhs = half_phi.sin() * ((self.ks[b] - self.ks[a]) * 0.5).sin();
                let scale = (half_phi.cos().norm() + half_phi.sin().norm())
                    * (sa.norm() + ca.norm())
                    * (sb.norm() + cb.norm());
                worst = worst.max((lhs - rhs).norm() / scale);
            }
        }
        worst
    }

    /// Builds roots from rapidities of non-Goldstone magnons plus a number of
    /// Goldstone magnons (zero pseudomomentum, zero phase with every other
    /// magnon). `lambdas` lists the Goldstone zeros first, then one label per
    /// rapidity.
    ///
    /// Principal logarithms give `k_a` and `phi_ab` up to multiples of `2 pi`;
    /// those multiples are then chosen so the linear equations hold exactly
    /// for the requested labels. This is possible whenever the total momentum
    /// agrees with the labels, which is checked.
    pub fn from_rapidities(
        n_sites: usize,
        lambdas: &[i64],
        goldstones: usize,
        z: &[C64],
        class: StateClass,
    ) -> Result<Self> {
        let m = z.len();
        if lambdas.len() != goldstones + m {
            return Err(Error::Parameter(format!(
                "{} labels for {} magnons",
                lambdas.len(),
                goldstones + m
            )));
        }
        let big_n = n_sites as f64;
        let i = C64::i();
        let clog = |w: C64| C64::new(0.0, -1.0) * w.ln();
        let mut ks: Vec<C64> = z
            .iter()
            .map(|&za| {
                let mut k = clog((za + i * 0.5) / (za - i * 0.5));
                if k.re < 0.0 {
                    k.re += TAU;
                }
                k
            })
            .collect();
        let mut phis = vec![C64::new(0.0, 0.0); m * m.saturating_sub(1) / 2];
        for a in 0..m {
            for b in a + 1..m {
                let d = z[a] - z[b];
                phis[pair_index(m, a, b)] = clog((d + i) / (d - i));
            }
        }
        let labels = &lambdas[goldstones..];
        let phi_of = |phis: &[C64], a: usize, b: usize| -> C64 {
            match a.cmp(&b) {
                std::cmp::Ordering::Less => phis[pair_index(m, a, b)],
                std::cmp::Ordering::Greater => -phis[pair_index(m, b, a)],
                std::cmp::Ordering::Equal => C64::new(0.0, 0.0),
            }
        };
        let mut winding = Vec::with_capacity(m);
        for a in 0..m {
            let mut lin = ks[a] * big_n - TAU * labels[a] as f64;
            for b in 0..m {
                lin -= phi_of(&phis, a, b);
            }
            let r = lin.re / TAU;
            if (r - r.round()).abs() > 1e-6 || lin.im.abs() > 1e-6 * (1.0 + ks[a].im.abs() * big_n) {
                return Err(Error::NoConvergence(format!(
                    "rapidities do not satisfy the Bethe equations (winding {r:.3e})"
                )));
            }
            winding.push(r.round() as i64);
        }
        if m > 0 {
            let total: i64 = winding.iter().sum();
            if total % n_sites as i64 != 0 {
                return Err(Error::Misclassified {
                    residual: total as f64,
                    context: format!("total momentum does not match labels {lambdas:?}"),
                });
            }
            let shift = total / n_sites as i64;
            ks[0] -= TAU * shift as f64;
            winding[0] -= shift * n_sites as i64;
            let last = m - 1;
            for a in 0..last {
                phis[pair_index(m, a, last)] += TAU * winding[a] as f64;
            }
        }
        let n_total = goldstones + m;
        let mut all_ks = vec![C64::new(0.0, 0.0); goldstones];
        all_ks.extend(ks);
        let mut all_phis = vec![C64::new(0.0, 0.0); n_total * n_total.saturating_sub(1) / 2];
        for a in 0..m {
            for b in a + 1..m {
                all_phis[pair_index(n_total, goldstones + a, goldstones + b)] = phis[pair_index(m, a, b)];
            }
        }
        Ok(Self {
            n_sites,
            lambdas: lambdas.to_vec(),
            ks: all_ks,
            phis: all_phis,
            class,
        })
    }
}
