//! Bethe Ansatz roots and the eigenstates built from them.

mod catalog;
mod multi;
mod params;
mod states;
mod two_magnon;

pub use catalog::{enumerate_two_magnon, resolve_two_magnon, TwoMagnonEigenstate};
pub use multi::{n_magnon_state, solve_n_magnon_bae, solve_n_magnon_bae_seeded, BAE_TOL, MAX_MAGNONS, MULTI_EIGEN_TOL};
pub use params::{BetheRoots, BoundKind, BoundParams, StateClass};
pub use states::{
    cosh_bound_norm, cosh_bound_state, goldstone_state, one_magnon_state, scattering_norm, scattering_state,
    singular_state, sinh_bound_norm, sinh_bound_state,
};
pub use two_magnon::{
    all_bound_roots, bound_bracket, bound_roots, solve_cosh_bae, solve_sinh_bae, solve_two_magnon_scattering,
};
