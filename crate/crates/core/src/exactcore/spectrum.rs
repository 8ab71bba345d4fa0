use std::ops::Range;
use std::sync::Arc;

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::exactcore::{SectorHamiltonian, StateVector};
use crate::C64;

/// Largest sector dimension handed to the dense eigensolver.
pub const MAX_DENSE_DIM: usize = 20_000;

/// Eigenvalues closer than this are treated as one degenerate level.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Full spectrum of a sector block, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: Vec<StateVector>,
}

/// Best match of a trial state against the exact spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceMatch {
    /// Index of the degenerate level in [`Spectrum::levels`].
    pub level: usize,
    pub energy: f64,
    pub degeneracy: usize,
    /// Norm of the projection onto the level's eigenspace.
    pub projection: f64,
}

/// Dense diagonalization of a sector block.
///
/// Eigenvectors are real (the block is real symmetric) and carry the phase
/// convention of [`StateVector::with_canonical_phase`].
pub fn diagonalize(h: &SectorHamiltonian) -> Result<Spectrum> {
    let dim = h.dim();
    if dim > MAX_DENSE_DIM {
        return Err(Error::Resource {
            dim,
            limit: MAX_DENSE_DIM,
        });
    }
    let eig = SymmetricEigen::new(h.dense());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let basis = h.shared_basis();
    let mut values = Vec::with_capacity(dim);
    let mut vectors = Vec::with_capacity(dim);
    for idx in order {
        values.push(eig.eigenvalues[idx]);
        let amps = eig.eigenvectors.column(idx).iter().map(|&x| C64::new(x, 0.0)).collect();
        vectors.push(StateVector::from_amplitudes(Arc::clone(basis), amps)?.with_canonical_phase());
    }
    Ok(Spectrum { values, vectors })
}

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index ranges of degenerate levels, ascending in energy.
    pub fn levels(&self) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.values.len() {
            if i == self.values.len() || self.values[i] - self.values[i - 1] > DEGENERACY_TOL {
                out.push(start..i);
                start = i;
            }
        }
        out
    }

    /// Norm of the projection of `psi` onto the eigenvectors in `range`.
    pub fn projection_norm(&self, psi: &StateVector, range: Range<usize>) -> Result<f64> {
        let mut total = 0.0;
        for v in &self.vectors[range] {
            total += v.inner(psi)?.norm_sqr();
        }
        Ok(total.sqrt())
    }

    /// Finds the degenerate level whose energy is closest to `energy` and
    /// reports the projection of `psi` onto it.
    pub fn match_state(&self, psi: &StateVector, energy: f64) -> Result<SubspaceMatch> {
        let levels = self.levels();
        let (level, range) = levels
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let ea = (self.values[a.start] - energy).abs();
                let eb = (self.values[b.start] - energy).abs();
                ea.total_cmp(&eb)
            })
            .ok_or(Error::EmptyPopulation)?;
        Ok(SubspaceMatch {
            level,
            energy: self.values[range.start],
            degeneracy: range.len(),
            projection: self.projection_norm(psi, range.clone())?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_spectrum() {
        let h = SectorHamiltonian::build(2, 1, 1.0).unwrap();
        let s = diagonalize(&h).unwrap();
        assert!((s.values()[0] + 0.75).abs() < 1e-14);
        assert!((s.values()[1] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn trace_identity_and_orthonormality() {
        let h = SectorHamiltonian::build(4, 2, 1.0).unwrap();
        let s = diagonalize(&h).unwrap();
        let trace: f64 = (0..h.dim()).map(|i| h.dense()[(i, i)]).sum();
        assert!((s.values().iter().sum::<f64>() - trace).abs() < 1e-12);
        for (i, a) in s.vectors().iter().enumerate() {
            for (j, b) in s.vectors().iter().enumerate() {
                let ov = a.inner(b).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ov - expect).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn eigenvectors_pass_verification() {
        let h = SectorHamiltonian::build(7, 3, 1.0).unwrap();
        let s = diagonalize(&h).unwrap();
        for v in s.vectors() {
            assert!(h.verify_eigenstate(v).unwrap().residual < 1e-10);
        }
    }

    #[test]
    fn levels_group_degeneracies() {
        let h = SectorHamiltonian::build(6, 1, 1.0).unwrap();
        let s = diagonalize(&h).unwrap();
        // plane waves k and -k are degenerate: 1 + 2 + 2 + 1 states
        let sizes: Vec<usize> = s.levels().iter().map(|r| r.len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 1]);
    }
}
