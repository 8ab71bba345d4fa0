use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactcore::{SectorBasis, StateVector};
use crate::C64;

/// Residual below which a state counts as an eigenstate.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-8;

/// Heisenberg ring Hamiltonian `J sum_i S_i . S_{i+1}` restricted to one
/// fixed-magnetization sector.
///
/// In the S^z product basis every matrix element is real, so the block is
/// stored as a real symmetric sparse matrix (compressed rows). Each row holds
/// its diagonal entry first.
#[derive(Debug, Clone)]
pub struct SectorHamiltonian {
    basis: Arc<SectorBasis>,
    coupling: f64,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

/// Rayleigh quotient and eigen-equation residual of a trial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenCheck {
    pub rayleigh: f64,
    pub residual: f64,
}

impl EigenCheck {
    pub fn is_eigenstate(&self) -> bool {
        self.residual < EIGEN_RESIDUAL_TOL
    }
}

impl SectorHamiltonian {
    /// Builds the sector block for `n_sites` spins with `n_up` of them up.
    ///
    /// Bonds run `(i, i+1)` for `i = 1..N` with site `N+1` identified with
    /// site 1. On the two-site ring both bonds join the same pair; that pair
    /// is counted once.
    pub fn build(n_sites: usize, n_up: usize, coupling: f64) -> Result<Self> {
        let basis = Arc::new(SectorBasis::new(n_sites, n_up)?);
        Ok(Self::on_basis(basis, coupling))
    }

    pub fn on_basis(basis: Arc<SectorBasis>, coupling: f64) -> Self {
        let n = basis.n_sites();
        let n_bonds = if n == 2 { 1 } else { n };
        let mut row_start = Vec::with_capacity(basis.len() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_start.push(0);
        for (row, &c) in basis.configs().iter().enumerate() {
            let mut diag = 0.0;
            let diag_slot = cols.len();
            cols.push(row);
            vals.push(0.0);
            for i in 0..n_bonds {
                let j = (i + 1) % n;
                let si = (c >> i) & 1;
                let sj = (c >> j) & 1;
                if si == sj {
                    diag += 0.25 * coupling;
                } else {
                    diag -= 0.25 * coupling;
                    let flipped = c ^ (1 << i) ^ (1 << j);
                    cols.push(basis.rank(flipped));
                    vals.push(0.5 * coupling);
                }
            }
            vals[diag_slot] = diag;
            row_start.push(cols.len());
        }
        Self {
            basis,
            coupling,
            row_start,
            cols,
            vals,
        }
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn shared_basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Iterates the stored `(row, col, value)` entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim()).flat_map(move |r| {
            (self.row_start[r]..self.row_start[r + 1]).map(move |e| (r, self.cols[e], self.vals[e]))
        })
    }

    /// `H x` for a complex vector on this basis.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        (0..self.dim())
            .map(|r| {
                (self.row_start[r]..self.row_start[r + 1])
                    .map(|e| x[self.cols[e]] * self.vals[e])
                    .sum()
            })
            .collect()
    }

    /// Dense copy of the block.
    pub fn dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (r, c, v) in self.entries() {
            m[(r, c)] += v;
        }
        m
    }

    /// Energy of the all-down reference state, `J N / 4` (`J / 4` on the
    /// two-site ring).
    pub fn reference_energy(&self) -> f64 {
        let n = self.basis.n_sites();
        let n_bonds = if n == 2 { 1 } else { n };
        self.coupling * n_bonds as f64 / 4.0
    }

    /// Rayleigh quotient and residual `|H psi - E psi|`.
    pub fn verify_eigenstate(&self, psi: &StateVector) -> Result<EigenCheck> {
        if psi.n_sites() != self.basis.n_sites() || psi.n_up() != self.basis.n_up() {
            return Err(Error::BasisMismatch {
                left: self.basis.tag(),
                right: psi.basis().tag(),
            });
        }
        let h_psi = self.apply(psi.amps());
        let rayleigh_c: C64 = psi.amps().iter().zip(&h_psi).map(|(a, b)| a.conj() * b).sum();
        let rayleigh = rayleigh_c.re;
        let residual = psi
            .amps()
            .iter()
            .zip(&h_psi)
            .map(|(a, b)| (b - a * rayleigh).norm_sqr())
            .sum::<f64>()
            .sqrt();
        Ok(EigenCheck { rayleigh, residual })
    }
}

/// Convenience wrapper: builds the sector Hamiltonian for `psi` with `J = 1`
/// and checks it.
pub fn verify_eigenstate(psi: &StateVector) -> Result<EigenCheck> {
    SectorHamiltonian::on_basis(Arc::clone(psi.shared_basis()), 1.0).verify_eigenstate(psi)
}

/// Normalized image of `psi` under the total raising operator `sum_i S_i^+`.
///
/// On a Bethe eigenstate this adds one magnon of zero pseudomomentum.
pub fn apply_total_raising(psi: &StateVector) -> Result<StateVector> {
    let basis = psi.basis();
    let n = basis.n_sites();
    if basis.n_up() >= n {
        return Err(Error::Parameter(format!(
            "cannot raise a fully polarized state on {n} sites"
        )));
    }
    let target = Arc::new(SectorBasis::new(n, basis.n_up() + 1)?);
    let mut out = vec![C64::new(0.0, 0.0); target.len()];
    for (&c, &a) in basis.configs().iter().zip(psi.amps()) {
        if a == C64::new(0.0, 0.0) {
            continue;
        }
        for s in 0..n {
            if c & (1 << s) == 0 {
                out[target.rank(c | (1 << s))] += a;
            }
        }
    }
    let norm = out.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-10 {
        return Err(Error::Degenerate(
            "state is annihilated by the total raising operator".into(),
        ));
    }
    StateVector::from_amplitudes(target, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_block() {
        let h = SectorHamiltonian::build(2, 1, 1.0).unwrap();
        let m = h.dense();
        assert_eq!(m[(0, 0)], -0.25);
        assert_eq!(m[(1, 1)], -0.25);
        assert_eq!(m[(0, 1)], 0.5);
        assert_eq!(m[(1, 0)], 0.5);
    }

    #[test]
    fn reference_state_energy() {
        let h = SectorHamiltonian::build(4, 0, 1.0).unwrap();
        assert_eq!(h.dense()[(0, 0)], 1.0);
        assert_eq!(h.reference_energy(), 1.0);
    }

    #[test]
    fn symmetric_and_commutes_with_translation() {
        for n in 3..=8 {
            for k in 0..=n {
                let h = SectorHamiltonian::build(n, k, 1.3).unwrap();
                let m = h.dense();
                let b = h.basis();
                assert!((&m - m.transpose()).abs().max() < 1e-14);
                // [H, T] = 0 elementwise: H[T a, T b] = H[a, b]
                let perm: Vec<usize> = b.configs().iter().map(|&c| b.rank(b.translate_config(c))).collect();
                for i in 0..b.len() {
                    for j in 0..b.len() {
                        assert!((m[(perm[i], perm[j])] - m[(i, j)]).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn verify_rejects_foreign_state() {
        let h = SectorHamiltonian::build(4, 1, 1.0).unwrap();
        let psi = StateVector::from_amplitudes(
            Arc::new(SectorBasis::new(4, 2).unwrap()),
            vec![C64::new(1.0, 0.0); 6],
        )
        .unwrap();
        assert!(matches!(h.verify_eigenstate(&psi), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn raising_reference_gives_uniform_magnon() {
        let b = Arc::new(SectorBasis::new(5, 0).unwrap());
        let vac = StateVector::from_amplitudes(b, vec![C64::new(1.0, 0.0)]).unwrap();
        let up = apply_total_raising(&vac).unwrap();
        for a in up.amps() {
            assert!((a.re - 1.0 / 5f64.sqrt()).abs() < 1e-14 && a.im.abs() < 1e-15);
        }
    }

    #[test]
    fn raising_highest_weight_is_degenerate() {
        // singlet on two sites is annihilated by S^+
        let b = Arc::new(SectorBasis::new(2, 1).unwrap());
        let singlet = StateVector::from_amplitudes(b, vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]).unwrap();
        assert!(matches!(apply_total_raising(&singlet), Err(Error::Degenerate(_))));
        let full = StateVector::from_amplitudes(Arc::new(SectorBasis::new(3, 3).unwrap()), vec![C64::new(1.0, 0.0)]).unwrap();
        assert!(matches!(apply_total_raising(&full), Err(Error::Parameter(_))));
    }
}
