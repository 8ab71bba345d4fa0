//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use magnon_core::bethe::{
    all_bound_roots, n_magnon_state, one_magnon_state, goldstone_state, resolve_two_magnon,
    singular_state, sinh_bound_state, solve_n_magnon_bae, BoundKind, StateClass,
};
use magnon_core::entangle::{
    concurrence, concurrence_profile, goldstone_concurrence, quenched_rdm_closed_form, singular_concurrence,
    site_one_profile, two_spin_rdm,
};
use magnon_core::exactcore::{binomial, diagonalize, verify_eigenstate, SectorHamiltonian};
use magnon_core::stats::{
    ags_survey, length_scan, quench_survey, separation_stats, sweep_two_magnon, Certification,
};
use magnon_core::table::quench_table;

type Outcome = Result<Vec<String>, Vec<String>>;

/// Collects sub-check messages; any failed check fails the criterion.
#[derive(Default)]
struct Checks {
    notes: Vec<String>,
    failed: bool,
}

impl Checks {
    fn check(&mut self, ok: bool, msg: impl Into<String>) {
        if !ok {
            self.failed = true;
            self.notes.push(format!("FAILED {}", msg.into()));
        }
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    fn timed(&mut self, start: Instant, budget: Duration) {
        let took = start.elapsed();
        self.check(took < budget, format!("runtime {took:.2?} over budget {budget:?}"));
        self.note(format!("runtime {took:.2?}"));
    }

    fn finish(self) -> Outcome {
        if self.failed {
            Err(self.notes)
        } else {
            Ok(self.notes)
        }
    }
}

fn try_run(f: impl FnOnce(&mut Checks) -> magnon_core::Result<()>) -> Outcome {
    let mut c = Checks::default();
    if let Err(e) = f(&mut c) {
        c.check(false, format!("error: {e}"));
    }
    c.finish()
}

const PRINTED: [((i64, i64), [f64; 3], [f64; 3]); 9] = [
    ((1, 3), [0.45, 0.0, 0.0], [0.0, 0.0, 0.0]),
    ((1, 4), [0.04, 0.0, 0.0], [0.0, 0.0, 0.0]),
    ((1, 5), [0.0, 0.10, 0.0], [0.0, 0.0, 0.06]),
    ((2, 4), [0.43, 0.0, 0.0], [0.21, 0.0, 0.06]),
    ((2, 5), [0.04, 0.0, 0.0], [0.0, 0.0, 0.0]),
    ((3, 5), [0.45, 0.0, 0.0], [0.0, 0.0, 0.0]),
    ((1, 1), [0.0, 0.28, 0.35], [0.0, 0.0, 0.15]),
    ((4, 5), [0.0, 0.34, 0.0], [0.0, 0.0, 0.0]),
    ((5, 5), [0.0, 0.28, 0.35], [0.0, 0.0, 0.15]),
];

fn c1_six_site_table() -> Outcome {
    try_run(|c| {
        let start = Instant::now();
        let rows = quench_table(6)?;
        c.check(rows.len() == 9, format!("{} rows", rows.len()));
        for (row, (labels, bare, raised)) in rows.iter().zip(PRINTED) {
            c.check(row.lambdas == labels, format!("row order {:?} vs {labels:?}", row.lambdas));
            for (side, got, want) in [("bare", &row.bare, bare), ("raised", &row.raised, raised)] {
                for r in 0..3 {
                    let x = got.values[r];
                    c.check(
                        (x - want[r]).abs() <= 0.005,
                        format!("({},{}) {side} C{} = {x:.5} vs printed {:.2}", labels.0, labels.1, r + 1, want[r]),
                    );
                }
            }
        }
        c.timed(start, Duration::from_secs(1));
        Ok(())
    })
}

fn c2_one_magnon() -> Outcome {
    try_run(|c| {
        let mut worst = 0.0f64;
        for n in 3..=20usize {
            for l in 0..n as i64 {
                let prof = concurrence_profile(&one_magnon_state(n, l)?)?;
                for &x in &prof.values {
                    worst = worst.max((x - 2.0 / n as f64).abs());
                }
            }
        }
        c.check(worst < 1e-10, format!("max deviation from 2/N {worst:.3e}"));
        c.note(format!("max |C - 2/N| = {worst:.1e}"));
        Ok(())
    })
}

fn c3_quench_theorem() -> Outcome {
    try_run(|c| {
        let (mut worst_c, mut worst_rdm) = (0.0f64, 0.0f64);
        for n in 4..=20usize {
            for l in 1..n as i64 {
                let psi = resolve_two_magnon(n, 0, l)?.state()?;
                for p in 1..=n {
                    for q in p + 1..=n {
                        let rdm = two_spin_rdm(&psi, p, q)?;
                        worst_c = worst_c.max(concurrence(&rdm));
                        worst_rdm = worst_rdm.max(rdm.max_diff(&quenched_rdm_closed_form(n, l, p, q)?));
                    }
                }
            }
        }
        c.check(worst_c < 1e-10, format!("max concurrence {worst_c:.3e}"));
        c.check(worst_rdm < 1e-12, format!("closed-form RDM deviation {worst_rdm:.3e}"));
        c.note(format!("max C {worst_c:.1e}, max RDM deviation {worst_rdm:.1e}"));
        Ok(())
    })
}

fn c4_goldstone_sector() -> Outcome {
    try_run(|c| {
        let mut worst = 0.0f64;
        for n_sites in 2..=20usize {
            for n in 0..=n_sites {
                let psi = goldstone_state(n_sites, n)?;
                let traced = concurrence(&two_spin_rdm(&psi, 1, 1 + n_sites / 2)?);
                worst = worst.max((traced - goldstone_concurrence(n, n_sites)).abs());
            }
        }
        c.check(worst < 1e-10, format!("closed form vs trace {worst:.3e}"));
        let c26 = goldstone_concurrence(2, 6);
        // the quoted 0.2068 is rounded up from 0.206735; compare to its last digit
        c.check((c26 - 0.2068).abs() <= 1e-4, format!("C(2,6) = {c26:.5}"));
        c.check((c26 - 0.21).abs() <= 0.005, format!("C(2,6) = {c26:.5} vs printed 0.21"));
        c.note(format!("max deviation {worst:.1e}, C(2,6) = {c26:.5}"));
        Ok(())
    })
}

fn c5_multimagnon_quench() -> Outcome {
    try_run(|c| {
        let start = Instant::now();
        let mut entries = 0;
        let mut quenched = 0;
        for (n_magnons, max_n) in [(3usize, 20usize), (4, 16)] {
            for n in 2 * n_magnons..=max_n {
                let rep = quench_survey(n, n_magnons)?;
                for v in &rep.violations {
                    c.check(false, format!("N = {n}, {n_magnons} magnons: {v}"));
                }
                for f in &rep.failures {
                    c.check(false, format!("N = {n}, {n_magnons} magnons: {} {}", f.id, f.error));
                }
                let last: Vec<_> = rep.entries.iter().filter(|e| e.goldstones + e.non_goldstones == n_magnons).collect();
                entries += last.len();
                quenched += last.iter().filter(|e| e.expect_quenched()).count();
            }
        }
        c.note(format!("{entries} mixed states, {quenched} required quenched"));
        c.timed(start, Duration::from_secs(300));
        Ok(())
    })
}

fn c6_bound_roots() -> Outcome {
    try_run(|c| {
        let cosh: Vec<f64> = all_bound_roots(10, BoundKind::Cosh)?.iter().map(|b| b.v).collect();
        let sinh: Vec<f64> = all_bound_roots(10, BoundKind::Sinh)?.iter().map(|b| b.v).collect();
        for want in [0.258, 1.174] {
            c.check(cosh.iter().any(|v| (v - want).abs() <= 5e-3), format!("cosh root {want} not in {cosh:?}"));
        }
        c.check(sinh.iter().any(|v| (v - 0.521).abs() <= 5e-3), format!("sinh root 0.521 not in {sinh:?}"));
        let mut count = 0;
        for n in 4..=50usize {
            let (lo, hi) = ((n as f64).powf(-1.5), (n as f64).ln());
            for kind in [BoundKind::Cosh, BoundKind::Sinh] {
                for b in all_bound_roots(n, kind)? {
                    count += 1;
                    c.check(b.v > lo && b.v < hi, format!("N = {n} root {} outside bracket", b.v));
                }
            }
        }
        c.note(format!("cosh {cosh:.3?}, sinh {sinh:.3?}, {count} roots for N <= 50"));
        Ok(())
    })
}

fn c7_sinh_zeros() -> Outcome {
    try_run(|c| {
        let (mut worst1, mut worst_half) = (0.0f64, 0.0f64);
        for n in 6..=16usize {
            let vmax = (n as f64).ln();
            for i in 0..50 {
                let u = PI * i as f64 / 50.0;
                for j in 0..50 {
                    let v = 0.01 + (vmax - 0.01) * j as f64 / 49.0;
                    let prof = site_one_profile(&sinh_bound_state(n, u, v)?)?;
                    worst1 = worst1.max(prof.get(1));
                    if n % 2 == 0 {
                        worst_half = worst_half.max(prof.get(n / 2));
                    }
                }
            }
        }
        c.check(worst1 < 1e-12, format!("max C1 {worst1:.3e}"));
        c.check(worst_half < 1e-12, format!("max C_N/2 {worst_half:.3e}"));
        c.note(format!("max C1 {worst1:.1e}, max C_N/2 {worst_half:.1e}"));
        Ok(())
    })
}

fn c8_longest_range() -> Outcome {
    try_run(|c| {
        let start = Instant::now();
        let mut states = 0;
        for n in 4..=24usize {
            let rep = sweep_two_magnon(n, Some(StateClass::Scattering))?;
            for f in &rep.failures {
                c.check(false, format!("N = {n}: {} {}", f.id, f.error));
            }
            for r in &rep.records {
                states += 1;
                let last = r.profile.get(n / 2);
                c.check(last < 1e-10, format!("N = {n} {}: C_N/2 = {last:.3e}", r.id));
            }
        }
        c.note(format!("{states} scattering states"));
        c.timed(start, Duration::from_secs(120));
        Ok(())
    })
}

fn c9_singular() -> Outcome {
    try_run(|c| {
        let mut worst = 0.0f64;
        for n in (4..=16usize).step_by(2) {
            let psi = singular_state(n)?;
            let res = verify_eigenstate(&psi)?.residual;
            c.check(res < 1e-10, format!("N = {n} residual {res:.3e}"));
            let prof = concurrence_profile(&psi)?;
            for r in 1..=n / 2 {
                worst = worst.max((prof.get(r) - singular_concurrence(n, r)?).abs());
            }
            if n == 4 {
                c.check((prof.get(2) - 1.0).abs() < 1e-12, format!("N = 4 C2 = {}", prof.get(2)));
            }
        }
        c.check(worst < 1e-12, format!("closed form deviation {worst:.3e}"));
        c.note(format!("max deviation {worst:.1e}"));
        Ok(())
    })
}

fn c10_three_magnon() -> Outcome {
    try_run(|c| {
        for n in [4usize, 6, 8, 10, 12] {
            let rep = ags_survey(n)?;
            c.check(rep.projection > 1.0 - 1e-8, format!("N = {n} ground-state overlap {}", rep.projection));
            c.check(rep.nearest_only, format!("N = {n} profile {:?}", rep.profile.values));
            if n == 6 {
                let c1 = rep.profile.get(1);
                c.check((c1 - 0.43456).abs() <= 5e-5, format!("N = 6 ground state C1 = {c1:.6} vs printed 0.43456"));
            }
            c.note(format!("N = {n} C1 = {:.6}", rep.profile.get(1)));
        }
        let roots = solve_n_magnon_bae(6, &[1, 1, 1])?;
        let c3 = concurrence_profile(&n_magnon_state(6, &roots)?)?.get(3);
        c.check((c3 - 0.70313).abs() <= 5e-5, format!("(1,1,1) C3 = {c3:.6}"));
        c.note(format!("(1,1,1) C3 = {c3:.6}"));

        let scan = length_scan(&[1, 3, 5], 7..=24);
        let mut first_c2 = None;
        let mut first_c3 = None;
        for row in &scan {
            let Some(p) = &row.profile else {
                c.check(false, format!("N = {} {:?}", row.n_sites, row.error));
                continue;
            };
            if first_c2.is_none() && p.get(2) > p.get(1) && p.get(2) >= p.values.iter().cloned().fold(0.0, f64::max) {
                first_c2 = Some(row.n_sites);
            }
            if first_c3.is_none() && p.get(3) > 0.0 {
                first_c3 = Some(row.n_sites);
            }
        }
        c.check(first_c2 == Some(17), format!("C2 dominance from {first_c2:?}"));
        c.check(first_c3 == Some(20), format!("C3 onset at {first_c3:?}"));
        c.note(format!("(1,3,5): C2 dominant from N = {first_c2:?}, C3 from N = {first_c3:?}"));
        Ok(())
    })
}

fn c11_forty_sites() -> Outcome {
    try_run(|c| {
        let start = Instant::now();
        let rep = sweep_two_magnon(40, Some(StateClass::Scattering))?;
        for f in &rep.failures {
            c.check(false, format!("{} {}", f.id, f.error));
        }
        let stats = separation_stats(&rep.records)?;
        let pct = stats.rows[0].percent_nonzero;
        c.check(pct > 60.0, format!("{pct:.1}% with C1 > 0"));
        let wide: Vec<String> = rep
            .records
            .iter()
            .filter(|r| r.profile.nonzero_count() > 11)
            .map(|r| format!("{} (nu = {})", r.id, r.profile.nonzero_count()))
            .collect();
        c.check(stats.max_nu() <= 11, format!("max nu {} from {}", stats.max_nu(), wide.join(", ")));
        c.check(stats.rows[19].max == 0.0, format!("max C20 {:.3e}", stats.rows[19].max));
        c.note(format!(
            "{} states, {pct:.1}% with C1 > 0, max nu {}",
            stats.population,
            stats.max_nu()
        ));
        c.timed(start, Duration::from_secs(600));
        Ok(())
    })
}

fn c12_oracle() -> Outcome {
    try_run(|c| {
        let mut certified = 0;
        for n in 3..=12usize {
            let rep = sweep_two_magnon(n, None)?;
            for f in &rep.failures {
                c.check(false, format!("N = {n}: {} {}", f.id, f.error));
            }
            let total = rep.records.len();
            c.check(total == binomial(n, 2), format!("N = {n}: {total} states vs {}", binomial(n, 2)));
            for r in &rep.records {
                match r.certification {
                    Certification::Projection { norm, .. } if norm >= 1.0 - 1e-8 => certified += 1,
                    ref other => c.check(false, format!("N = {n} {}: {other:?}", r.id)),
                }
            }
        }
        // n-magnon states against the full spectrum of their sector
        for (n, labels) in [(6usize, vec![1i64, 1, 1]), (8, vec![1, 3, 5]), (9, vec![1, 1, 1]), (10, vec![1, 3, 5, 7])] {
            let roots = solve_n_magnon_bae(n, &labels)?;
            let psi = n_magnon_state(n, &roots)?;
            let h = SectorHamiltonian::build(n, labels.len(), 1.0)?;
            let e = h.verify_eigenstate(&psi)?.rayleigh;
            let m = diagonalize(&h)?.match_state(&psi, e)?;
            c.check(m.projection >= 1.0 - 1e-8, format!("N = {n} {labels:?} projection {}", m.projection));
            certified += 1;
        }
        c.note(format!("{certified} states certified"));
        Ok(())
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("six-site quenching table", c1_six_site_table),
        ("one-magnon equientanglement", c2_one_magnon),
        ("one-Goldstone quench", c3_quench_theorem),
        ("Goldstone sector", c4_goldstone_sector),
        ("multimagnon quenching", c5_multimagnon_quench),
        ("bound-state roots", c6_bound_roots),
        ("sinh-type structural zeros", c7_sinh_zeros),
        ("longest-range scattering zero", c8_longest_range),
        ("singular state", c9_singular),
        ("three-magnon landmarks", c10_three_magnon),
        ("forty-site statistics", c11_forty_sites),
        ("exact-diagonalization equivalence", c12_oracle),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let tag = format!("criterion {:>2}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || tag.ends_with(f.as_str())) {
            continue;
        }
        let (status, notes) = match run() {
            Ok(n) => ("PASS", n),
            Err(n) => {
                failed += 1;
                ("FAIL", n)
            }
        };
        println!("{tag} {status}  {name}: {}", notes.join("; "));
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
