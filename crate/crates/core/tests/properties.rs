//! Property tests of structural invariants, each checked against a route
//! that does not share code with the implementation.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use proptest::prelude::*;

use magnon_core::bethe::{
    n_magnon_state, one_magnon_state, resolve_two_magnon, sinh_bound_state, solve_n_magnon_bae, BetheRoots,
};
use magnon_core::entangle::{concurrence, site_one_profile, two_spin_rdm};
use magnon_core::exactcore::{
    apply_total_raising, diagonalize, shared_sector, verify_eigenstate, SectorHamiltonian, StateVector,
};
use magnon_core::stats::{quench_survey, sweep_two_magnon};
use magnon_core::C64;

fn random_state(n: usize, up: usize, seed: &[(f64, f64)]) -> StateVector {
    let basis = shared_sector(n, up).unwrap();
    let amps = (0..basis.len())
        .map(|i| {
            let (a, b) = seed[i % seed.len()];
            C64::new(a + 0.1 * i as f64, b - 0.05 * (i * i % 7) as f64)
        })
        .collect();
    StateVector::from_amplitudes(basis, amps).unwrap()
}

/// Heisenberg ring on the full 2^N space, written independently of the
/// sector code: diagonal from bit parities, flips on antiparallel bonds.
fn full_hamiltonian(n: usize) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    let bonds: Vec<(usize, usize)> = if n == 2 { vec![(0, 1)] } else { (0..n).map(|i| (i, (i + 1) % n)).collect() };
    for s in 0..dim {
        for &(i, j) in &bonds {
            let (bi, bj) = ((s >> i) & 1, (s >> j) & 1);
            if bi == bj {
                h[(s, s)] += 0.25;
            } else {
                h[(s, s)] -= 0.25;
                h[(s ^ (1 << i) ^ (1 << j), s)] += 0.5;
            }
        }
    }
    h
}

/// Two-spin density matrix by summing the full projector over all other
/// spins; basis order up-up, up-down, down-up, down-down with `p` first.
fn brute_rdm(psi: &StateVector, p: usize, q: usize) -> [[C64; 4]; 4] {
    let n = psi.n_sites();
    let mut full = vec![C64::new(0.0, 0.0); 1 << n];
    for (i, a) in psi.amps().iter().enumerate() {
        full[psi.basis().config(i) as usize] = *a;
    }
    let (bp, bq) = (1usize << (p - 1), 1usize << (q - 1));
    let local = |s: usize| -> usize {
        let up_p = s & bp != 0;
        let up_q = s & bq != 0;
        match (up_p, up_q) {
            (true, true) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (false, false) => 3,
        }
    };
    let mut rho = [[C64::new(0.0, 0.0); 4]; 4];
    for s in 0..full.len() {
        for t in 0..full.len() {
            if (s & !(bp | bq)) == (t & !(bp | bq)) {
                rho[local(s)][local(t)] += full[s] * full[t].conj();
            }
        }
    }
    rho
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hamiltonian_commutes_with_translation(
        n in 3usize..=10,
        frac in 0.0f64..1.0,
        seed in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..6),
    ) {
        let up = ((n as f64) * frac).round() as usize;
        let psi = random_state(n, up, &seed);
        let h = SectorHamiltonian::build(n, up, 1.0).unwrap();
        let ht = h.apply(psi.translated().amps());
        let h_then_t = StateVector::from_amplitudes(
            psi.shared_basis().clone(),
            h.apply(psi.amps()),
        );
        // T(H psi) against H(T psi), unnormalized
        let th: Vec<C64> = match h_then_t {
            Ok(v) => {
                let scale = h.apply(psi.amps()).iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                v.translated().amps().iter().map(|a| a * scale).collect()
            }
            Err(_) => vec![C64::new(0.0, 0.0); ht.len()],
        };
        for (a, b) in ht.iter().zip(&th) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_matches_full_density_matrix(
        n in 2usize..=8,
        frac in 0.0f64..1.0,
        pq in (1usize..=8, 1usize..=8),
        seed in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..6),
    ) {
        let up = ((n as f64) * frac).round() as usize;
        let (p, q) = ((pq.0 - 1) % n + 1, (pq.1 - 1) % n + 1);
        prop_assume!(p < q);
        let psi = random_state(n, up, &seed);
        let rdm = two_spin_rdm(&psi, p, q).unwrap();
        let dense = rdm.to_matrix();
        let brute = brute_rdm(&psi, p, q);
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((dense[i][j] - brute[i][j]).norm() < 1e-12, "({i},{j}) {:?} vs {:?}", dense[i][j], brute[i][j]);
            }
        }
    }

    #[test]
    fn raising_keeps_energy(n in 3usize..=8, frac in 0.0f64..0.5, pick in 0usize..1000) {
        let up = ((n as f64) * frac).floor() as usize;
        let h = SectorHamiltonian::build(n, up, 1.0).unwrap();
        let spec = diagonalize(&h).unwrap();
        let i = pick % spec.len();
        let psi = &spec.vectors()[i];
        let e = spec.values()[i];
        let raised = match apply_total_raising(psi) {
            Ok(r) => r,
            // the raising image vanishes for top-of-multiplet states
            Err(_) => return Ok(()),
        };
        let check = verify_eigenstate(&raised).unwrap();
        prop_assert!((check.rayleigh - e).abs() < 1e-10);
        prop_assert!(check.residual < 1e-8);
    }

    #[test]
    fn scattering_roots_satisfy_multiplicative_equations(n in 5usize..=30, a in 1i64..30, b in 1i64..30, c in 1i64..30) {
        let labels: BTreeSet<i64> = [a, b, c].iter().map(|x| x % n as i64).filter(|&x| x != 0).collect();
        let labels: Vec<i64> = labels.into_iter().collect();
        prop_assume!(labels.len() >= 2);
        let roots = if labels.len() == 2 {
            // some label pairs name no state at all
            match resolve_two_magnon(n, labels[0], labels[1]).ok().and_then(|s| s.roots) {
                Some(r) => r,
                None => return Ok(()),
            }
        } else {
            match solve_n_magnon_bae(n, &labels) {
                Ok(r) => r,
                Err(_) => return Ok(()),
            }
        };
        prop_assert!(multiplicative_residual(&roots) < 1e-9, "{roots:?}");
    }

    #[test]
    fn sinh_form_has_structural_zeros(n in 4usize..=20, u in 0.0f64..6.3, v in 1e-3f64..3.0) {
        let p = site_one_profile(&sinh_bound_state(n, u, v).unwrap()).unwrap();
        prop_assert!(p.get(1) < 1e-12);
        if n % 2 == 0 {
            prop_assert!(p.get(n / 2) < 1e-12);
        }
    }

    #[test]
    fn raised_one_magnon_is_the_goldstone_pair(n in 4usize..=16, l in 1i64..16) {
        let l = (l - 1) % (n as i64 - 1) + 1;
        let raised = apply_total_raising(&one_magnon_state(n, l).unwrap()).unwrap();
        let direct = resolve_two_magnon(n, 0, l).unwrap();
        // build the pair from its roots, not through the raising operator
        let from_roots = n_magnon_state(n, direct.roots.as_ref().unwrap()).unwrap();
        prop_assert!(raised.phase_distance(&from_roots).unwrap() < 1e-10);
    }
}

/// `e^{i N k_a} = prod_b (z_a - z_b + i)/(z_a - z_b - i)`, with Goldstone
/// magnons dropped; rapidities from the momenta directly.
fn multiplicative_residual(r: &BetheRoots) -> f64 {
    let i = C64::new(0.0, 1.0);
    let n = r.n_sites as f64;
    let ks: Vec<C64> = r.ks.iter().copied().filter(|k| k.norm() > 0.0).collect();
    let z: Vec<C64> = ks.iter().map(|k| (k * 0.5).cos() / (k * 0.5).sin() * 0.5).collect();
    let mut worst: f64 = 0.0;
    for a in 0..ks.len() {
        let lhs = (i * ks[a] * n).exp();
        let mut rhs = C64::new(1.0, 0.0);
        for b in 0..ks.len() {
            if b != a {
                rhs *= (z[a] - z[b] + i) / (z[a] - z[b] - i);
            }
        }
        worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
    }
    worst
}

#[test]
fn sector_spectra_assemble_the_full_spectrum() {
    for n in 2..=8usize {
        let mut sectors: Vec<f64> = (0..=n)
            .flat_map(|up| diagonalize(&SectorHamiltonian::build(n, up, 1.0).unwrap()).unwrap().values().to_vec())
            .collect();
        sectors.sort_by(f64::total_cmp);
        let mut full: Vec<f64> = full_hamiltonian(n).symmetric_eigenvalues().iter().copied().collect();
        full.sort_by(f64::total_cmp);
        assert_eq!(sectors.len(), full.len());
        for (a, b) in sectors.iter().zip(&full) {
            assert!((a - b).abs() < 1e-10, "N = {n}: {a} vs {b}");
        }
    }
}

#[test]
fn string_roots_satisfy_multiplicative_equations() {
    for (n, labels) in [(6usize, vec![1i64, 1]), (6, vec![1, 1, 1]), (9, vec![1, 1, 1]), (12, vec![2, 2, 2])] {
        let r = match labels.len() {
            2 => resolve_two_magnon(n, labels[0], labels[1]).unwrap().bound.unwrap().to_roots(),
            _ => match solve_n_magnon_bae(n, &labels) {
                Ok(r) => r,
                Err(e) => panic!("N = {n} {labels:?}: {e}"),
            },
        };
        assert!(multiplicative_residual(&r) < 1e-9, "N = {n} {labels:?}");
    }
}

#[test]
fn exchange_symmetry_of_the_state() {
    for (n, labels) in [(8usize, vec![1i64, 3]), (9, vec![1, 3, 6]), (7, vec![1, 1, 1]), (10, vec![0, 2, 5])] {
        let r = solve_n_magnon_bae(n, &labels).unwrap();
        let m = r.n_magnons();
        // swap magnons 0 and 1
        let perm: Vec<usize> = (0..m).map(|a| if a < 2 { 1 - a } else { a }).collect();
        let mut phis = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                phis.push(r.phi(perm[a], perm[b]));
            }
        }
        let swapped = BetheRoots {
            lambdas: perm.iter().map(|&a| r.lambdas[a]).collect(),
            ks: perm.iter().map(|&a| r.ks[a]).collect(),
            phis,
            ..r.clone()
        };
        let a = n_magnon_state(n, &r).unwrap();
        let b = n_magnon_state(n, &swapped).unwrap();
        for (x, y) in a.amps().iter().zip(b.amps()) {
            assert!((x - y).norm() < 1e-12, "N = {n} {labels:?}");
        }
    }
}

#[test]
fn raising_a_pair_gives_the_three_magnon_state() {
    for (n, l1, l2) in [(8usize, 1i64, 3i64), (9, 2, 5), (10, 1, 1), (8, 3, 5)] {
        let pair = resolve_two_magnon(n, l1, l2).unwrap().state().unwrap();
        let raised = apply_total_raising(&pair).unwrap();
        let roots = solve_n_magnon_bae(n, &[0, l1, l2]).unwrap();
        let direct = n_magnon_state(n, &roots).unwrap();
        assert!(raised.phase_distance(&direct).unwrap() < 1e-10, "N = {n} ({l1},{l2})");
    }
}

#[test]
fn hierarchy_up_to_fourteen_sites() {
    for n in 8..=14 {
        for magnons in [3, 4] {
            let rep = quench_survey(n, magnons).unwrap();
            assert!(rep.violations.is_empty(), "N = {n}: {:?}", rep.violations);
            assert!(rep.failures.is_empty(), "N = {n}: {:?}", rep.failures);
        }
    }
}

#[test]
fn sweeps_are_deterministic() {
    let a = sweep_two_magnon(14, None).unwrap();
    let b = sweep_two_magnon(14, None).unwrap();
    assert_eq!(a.records, b.records);
}

#[test]
fn rdm_blocks_are_symmetric_for_eigenstates() {
    for n in 4..=10 {
        let (states, _) = magnon_core::bethe::enumerate_two_magnon(n);
        for s in states {
            let psi = s.state().unwrap();
            for q in 2..=n {
                let rdm = two_spin_rdm(&psi, 1, q).unwrap();
                assert!((rdm.beta - rdm.delta).abs() < 1e-12);
                assert!(rdm.is_physical(1e-12));
                assert!(concurrence(&rdm) <= 1.0);
            }
        }
    }
}
