//! Sector bookkeeping, the ring Hamiltonian and the exact-diagonalization
//! oracle.

mod basis;
mod hamiltonian;
mod spectrum;
mod state;

pub use basis::{binomial, SectorBasis, MAX_SECTOR_LEN, MAX_SITES};
pub use hamiltonian::{apply_total_raising, verify_eigenstate, EigenCheck, SectorHamiltonian, EIGEN_RESIDUAL_TOL};
pub use spectrum::{diagonalize, Spectrum, SubspaceMatch, DEGENERACY_TOL, MAX_DENSE_DIM};
pub use state::{StateVector, NORM_TOL};

use std::sync::Arc;

use crate::error::Result;

/// Canonical basis for `n_up` up spins on an `n_sites` ring.
pub fn enumerate_sector(n_sites: usize, n_up: usize) -> Result<SectorBasis> {
    SectorBasis::new(n_sites, n_up)
}

/// Sector block of `J sum_i S_i . S_{i+1}`.
pub fn build_hamiltonian(n_sites: usize, n_up: usize, coupling: f64) -> Result<SectorHamiltonian> {
    SectorHamiltonian::build(n_sites, n_up, coupling)
}

/// Shared basis handle, used by constructors that build many states.
pub fn shared_sector(n_sites: usize, n_up: usize) -> Result<Arc<SectorBasis>> {
    Ok(Arc::new(SectorBasis::new(n_sites, n_up)?))
}
