use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactcore::SectorBasis;
use crate::C64;

/// Tolerance on the unit norm of a constructed state.
pub const NORM_TOL: f64 = 1e-12;

/// Unit-normalized complex amplitudes over a [`SectorBasis`].
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<SectorBasis>,
    amps: Vec<C64>,
}

impl StateVector {
    /// Normalizes `amps` and wraps them. Fails when the vector is numerically
    /// zero or its length does not match the basis.
    pub fn from_amplitudes(basis: Arc<SectorBasis>, mut amps: Vec<C64>) -> Result<Self> {
        if amps.len() != basis.len() {
            return Err(Error::Parameter(format!(
                "{} amplitudes for a basis of size {}",
                amps.len(),
                basis.len()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 1e-150) {
            return Err(Error::Degenerate(format!(
                "amplitude vector has norm {norm:e}"
            )));
        }
        let inv = 1.0 / norm;
        amps.iter_mut().for_each(|a| *a *= inv);
        Ok(Self { basis, amps })
    }

    /// Wraps amplitudes that are already normalized by a closed form; the
    /// norm is checked against [`NORM_TOL`].
    pub(crate) fn from_normalized(basis: Arc<SectorBasis>, amps: Vec<C64>) -> Result<Self> {
        let norm2 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm2 - 1.0).abs() > 1e3 * NORM_TOL || amps.len() != basis.len() {
            // closed form drifted; renormalize explicitly
            return Self::from_amplitudes(basis, amps);
        }
        Ok(Self { basis, amps })
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn shared_basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn n_sites(&self) -> usize {
        self.basis.n_sites()
    }

    pub fn n_up(&self) -> usize {
        self.basis.n_up()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn same_sector(&self, other: &StateVector) -> Result<()> {
        if self.basis.n_sites() != other.basis.n_sites() || self.basis.n_up() != other.basis.n_up() {
            return Err(Error::BasisMismatch {
                left: self.basis.tag(),
                right: other.basis.tag(),
            });
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.same_sector(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `1 - |<self|other>|`; zero exactly when the states agree up to a
    /// global phase.
    pub fn phase_distance(&self, other: &StateVector) -> Result<f64> {
        Ok(1.0 - self.inner(other)?.norm())
    }

    /// The state translated by one site: amplitude of `c` moves to `T c`.
    pub fn translated(&self) -> StateVector {
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (&c, &a) in self.basis.configs().iter().zip(&self.amps) {
            out[self.basis.rank(self.basis.translate_config(c))] = a;
        }
        StateVector {
            basis: Arc::clone(&self.basis),
            amps: out,
        }
    }

    /// Overlap `<psi|T psi>`. Its modulus is one exactly for translation
    /// eigenstates and its argument is the lattice momentum.
    pub fn translation_overlap(&self) -> C64 {
        let shifted = self.translated();
        self.amps
            .iter()
            .zip(shifted.amps())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Multiplies by a global phase so the first amplitude with modulus above
    /// `1e-12` is real and positive.
    pub fn with_canonical_phase(mut self) -> Self {
        if let Some(lead) = self.amps.iter().find(|a| a.norm() > 1e-12).copied() {
            let phase = lead.conj() / lead.norm();
            self.amps.iter_mut().for_each(|a| *a *= phase);
        }
        self
    }
}
