//! Exact eigenstates of the periodic spin-1/2 Heisenberg ring built from the
//! Bethe Ansatz, together with the two-qubit entanglement carried by those
//! states.
//!
//! The crate is split along the lines of the computation:
//!
//! * [`exactcore`] enumerates fixed-magnetization sectors, builds the sector
//!   Hamiltonian and provides an exact-diagonalization oracle.
//! * [`bethe`] solves the Bethe equations and turns their roots into state
//!   vectors (scattering, bound, singular, Goldstone and n-magnon states).
//! * [`entangle`] traces states down to two-spin density matrices and
//!   evaluates concurrence, entanglement of formation and the closed forms
//!   known for special families.
//! * [`stats`] runs population sweeps and surveys over eigenstate classes.
//! * [`figures`] and [`table`] assemble the numeric data behind the exported
//!   figures and the partial-quenching table.

pub mod bethe;
pub mod entangle;
pub mod error;
pub mod exactcore;
pub mod figures;
pub mod roots;
pub mod stats;
pub mod table;

pub use error::{Error, Result};

/// Complex scalar used for all amplitudes.
pub type C64 = num_complex::Complex64;
