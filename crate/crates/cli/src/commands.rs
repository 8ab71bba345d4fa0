use anyhow::{bail, Result};

use magnon_core::bethe::{
    all_bound_roots, cosh_bound_state, goldstone_state, n_magnon_state, one_magnon_state, resolve_two_magnon,
    scattering_state, singular_state, sinh_bound_state, solve_n_magnon_bae, BetheRoots, BoundKind, StateClass,
    MULTI_EIGEN_TOL,
};
use magnon_core::entangle::{concurrence_profile, eof_from_concurrence, site_one_profile, ConcurrenceProfile};
use magnon_core::exactcore::{apply_total_raising, verify_eigenstate, SectorBasis, StateVector, EIGEN_RESIDUAL_TOL};
use magnon_core::figures::{fig1, fig2, fig3, fig6, fig_bound, FigureData};
use magnon_core::stats::{ags_survey, length_scan, quench_survey, separation_stats, sweep_two_magnon};
use magnon_core::table::quench_table;

use crate::output::{Cell, Table};
use crate::{BoundClass, FigureArgs, FigureKind, PopulationClass, SolveArgs, StateArgs, SurveyArgs, SurveyKind, Table1Args};

fn tolerance(tol: Option<f64>, n_magnons: usize) -> Result<f64> {
    let default = if n_magnons <= 2 { EIGEN_RESIDUAL_TOL } else { MULTI_EIGEN_TOL };
    match tol {
        Some(t) if !(t > 0.0) => bail!("tolerance must be positive, got {t}"),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

fn label(lambdas: &[i64]) -> String {
    lambdas.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn sorted(lambdas: &[i64]) -> Vec<i64> {
    let mut l = lambdas.to_vec();
    l.sort_unstable();
    l
}

fn profile_columns(prefix: &str, n_sites: usize, suffix: &str) -> Vec<String> {
    (1..=n_sites / 2).map(|r| format!("{prefix}{r}{suffix}")).collect()
}

fn profile_cells(p: &ConcurrenceProfile) -> Vec<Cell> {
    p.values.iter().map(|&c| Cell::Num(c)).collect()
}

const SOLVE_COLUMNS: [&str; 10] =
    ["state", "class", "item", "lambda", "re", "im", "bae_residual", "ed_residual", "energy", "certified"];

struct Solved {
    state: String,
    class: StateClass,
    roots: Option<BetheRoots>,
    extra: Vec<(&'static str, f64)>,
    psi: StateVector,
}

fn push_solved(t: &mut Table, s: &Solved, tol: f64) -> Result<()> {
    let check = verify_eigenstate(&s.psi)?;
    let certified = check.residual <= tol;
    if !certified {
        t.fail(&s.state, format!("eigen-equation residual {:.3e} above {tol:.1e}", check.residual));
    }
    let bae = s.roots.as_ref().map_or(f64::NAN, |r| r.bae_residual());
    let tail = |t: &mut Table, item: String, lambda: Cell, re: f64, im: f64| {
        t.push(vec![
            s.state.clone().into(),
            s.class.as_str().into(),
            item.into(),
            lambda,
            re.into(),
            im.into(),
            bae.into(),
            check.residual.into(),
            check.rayleigh.into(),
            (certified as i64).into(),
        ]);
    };
    for &(item, x) in &s.extra {
        tail(t, item.to_string(), Cell::Text(String::new()), x, 0.0);
    }
    if let Some(r) = &s.roots {
        for (a, k) in r.ks.iter().enumerate() {
            tail(t, format!("k{}", a + 1), r.lambdas[a].into(), k.re, k.im);
        }
        let n = r.n_magnons();
        for a in 0..n {
            for b in a + 1..n {
                let phi = r.phi(a, b);
                tail(t, format!("phi{}{}", a + 1, b + 1), Cell::Text(String::new()), phi.re, phi.im);
            }
        }
    }
    Ok(())
}

fn solve_labels(n_sites: usize, lambdas: &[i64]) -> Result<Solved> {
    let lambdas = sorted(lambdas);
    Ok(match lambdas.len() {
        0 => bail!("no labels given"),
        1 => {
            let k = std::f64::consts::TAU * lambdas[0] as f64 / n_sites as f64;
            Solved {
                state: label(&lambdas),
                class: StateClass::Scattering,
                roots: None,
                extra: vec![("k1", k)],
                psi: one_magnon_state(n_sites, lambdas[0])?,
            }
        }
        2 => {
            let s = resolve_two_magnon(n_sites, lambdas[0], lambdas[1])?;
            let roots = s.roots.clone().or_else(|| s.bound.as_ref().map(|b| b.to_roots()));
            let extra = match &s.bound {
                Some(b) => vec![("u", b.u), ("v", b.v)],
                None => vec![],
            };
            Solved {
                state: s.label(),
                class: s.class,
                roots,
                extra,
                psi: s.state()?,
            }
        }
        _ => {
            let roots = solve_n_magnon_bae(n_sites, &lambdas)?;
            Solved {
                state: label(&lambdas),
                class: roots.class,
                psi: n_magnon_state(n_sites, &roots)?,
                roots: Some(roots),
                extra: vec![],
            }
        }
    })
}

pub fn solve(a: &SolveArgs) -> Result<Table> {
    let mut t = Table::new(SOLVE_COLUMNS);
    if let Some(lambdas) = &a.lambdas {
        let tol = tolerance(a.tol, lambdas.len())?;
        push_solved(&mut t, &solve_labels(a.n, lambdas)?, tol)?;
        return Ok(t);
    }
    let Some(class) = a.class else {
        bail!("give --lambdas, or --class with --all");
    };
    let kind = match class {
        BoundClass::Cosh => BoundKind::Cosh,
        BoundClass::Sinh => BoundKind::Sinh,
    };
    let tol = tolerance(a.tol, 2)?;
    for b in all_bound_roots(a.n, kind)? {
        let (l1, l2) = b.lambdas();
        match resolve_two_magnon(a.n, l1, l2).and_then(|s| s.state()) {
            Ok(psi) => push_solved(
                &mut t,
                &Solved {
                    state: format!("{l1},{l2}"),
                    class: match kind {
                        BoundKind::Cosh => StateClass::CoshBound,
                        BoundKind::Sinh => StateClass::SinhBound,
                    },
                    roots: Some(b.to_roots()),
                    extra: vec![("u", b.u), ("v", b.v)],
                    psi,
                },
                tol,
            )?,
            Err(e) => t.fail(format!("{l1},{l2}"), e),
        }
    }
    Ok(t)
}

/// The requested state, whether it is meant to be an eigenstate, and the
/// number of magnons the certification tolerance is chosen for.
fn build_state(a: &StateArgs) -> Result<(StateVector, bool, usize)> {
    let src = &a.source;
    let pair = |xs: &Vec<f64>, what: &str| -> Result<(f64, f64)> {
        match xs.as_slice() {
            [u, v] => Ok((*u, *v)),
            _ => bail!("--{what} takes u,v"),
        }
    };
    let (mut psi, on_shell, magnons) = if let Some(l) = &src.lambdas {
        (solve_labels(a.n, l)?.psi, true, l.len())
    } else if let Some(x) = &src.scattering {
        let [big_k, k, phi] = x.as_slice() else {
            bail!("--scattering takes K,k,phi");
        };
        (scattering_state(a.n, *big_k, *k, *phi)?, false, 2)
    } else if let Some(x) = &src.cosh {
        let (u, v) = pair(x, "cosh")?;
        (cosh_bound_state(a.n, u, v)?, false, 2)
    } else if let Some(x) = &src.sinh {
        let (u, v) = pair(x, "sinh")?;
        (sinh_bound_state(a.n, u, v)?, false, 2)
    } else if src.singular {
        (singular_state(a.n)?, true, 2)
    } else if let Some(g) = src.goldstone {
        (goldstone_state(a.n, g)?, true, 0)
    } else {
        bail!("no state given");
    };
    for _ in 0..a.raise {
        psi = apply_total_raising(&psi)?;
    }
    Ok((psi, on_shell, magnons))
}

fn certify(t: &mut Table, psi: &StateVector, on_shell: bool, magnons: usize, tol: Option<f64>) -> Result<()> {
    if on_shell {
        let tol = tolerance(tol, magnons)?;
        let residual = verify_eigenstate(psi)?.residual;
        if residual > tol {
            t.fail("state", format!("eigen-equation residual {residual:.3e} above {tol:.1e}"));
        }
    }
    Ok(())
}

pub fn state(a: &StateArgs) -> Result<Table> {
    let (psi, on_shell, magnons) = build_state(a)?;
    let mut t = Table::new(["config", "up_sites", "re", "im"]);
    for (i, amp) in psi.amps().iter().enumerate() {
        let config = psi.basis().config(i);
        let sites: Vec<String> = SectorBasis::up_sites(config).map(|s| s.to_string()).collect();
        t.push(vec![(config as i64).into(), sites.join(" ").into(), amp.re.into(), amp.im.into()]);
    }
    certify(&mut t, &psi, on_shell, magnons, a.tol)?;
    Ok(t)
}

pub fn profile(a: &StateArgs) -> Result<Table> {
    let (psi, on_shell, magnons) = build_state(a)?;
    // off-shell forms need not be translation invariant
    let p = if on_shell { concurrence_profile(&psi)? } else { site_one_profile(&psi)? };
    let mut t = Table::new(["r", "C", "eof"]);
    for (i, &c) in p.values.iter().enumerate() {
        t.push(vec![(i + 1).into(), c.into(), eof_from_concurrence(c).into()]);
    }
    certify(&mut t, &psi, on_shell, magnons, a.tol)?;
    Ok(t)
}

fn figure_table(f: FigureData) -> Table {
    let mut t = Table::new(f.columns);
    for row in f.rows {
        t.push(row.into_iter().map(Cell::Num).collect());
    }
    t
}

pub fn figure(a: &FigureArgs) -> Result<Table> {
    let v_range = |lo: f64, hi: f64| (a.v_min.unwrap_or(lo), a.v_max.unwrap_or(hi));
    let f = match a.which {
        FigureKind::Fig1 => fig1(a.n.unwrap_or(6), a.points)?,
        FigureKind::Fig2 => fig2(a.n.unwrap_or(20))?,
        FigureKind::Fig3 => fig3(a.n.unwrap_or(8), a.points)?,
        FigureKind::Fig4 => {
            let (lo, hi) = v_range(1e-3, 3.0);
            fig_bound(a.n.unwrap_or(10), BoundKind::Cosh, lo, hi, a.points)?
        }
        FigureKind::Fig5 => {
            let (lo, hi) = v_range(1e-3, 3.0);
            fig_bound(a.n.unwrap_or(10), BoundKind::Sinh, lo, hi, a.points)?
        }
        FigureKind::Fig6 => {
            let top = a.n.unwrap_or(24);
            let low = a.n_min.unwrap_or_else(|| default_scan_start(&a.lambdas));
            fig6(&a.lambdas, low..=top)?
        }
    };
    Ok(figure_table(f))
}

fn default_scan_start(lambdas: &[i64]) -> usize {
    let top = lambdas.iter().copied().max().unwrap_or(0).max(0) as usize;
    (top + 1).max(2 * lambdas.len())
}

pub fn table1(a: &Table1Args) -> Result<Table> {
    let mut cols: Vec<String> = ["lambda1", "lambda2", "class"].map(String::from).to_vec();
    cols.extend(profile_columns("C", a.n, ""));
    cols.extend(profile_columns("C", a.n, "_goldstone"));
    cols.push("residual".into());
    let mut t = Table::new(cols);
    for row in quench_table(a.n)? {
        let mut cells: Vec<Cell> = vec![row.lambdas.0.into(), row.lambdas.1.into(), row.class.as_str().into()];
        cells.extend(profile_cells(&row.bare));
        cells.extend(profile_cells(&row.raised));
        cells.push(row.residual.into());
        t.push(cells);
    }
    Ok(t)
}

fn population_filter(c: PopulationClass) -> Option<StateClass> {
    match c {
        PopulationClass::All => None,
        PopulationClass::Scattering => Some(StateClass::Scattering),
        PopulationClass::CoshBound => Some(StateClass::CoshBound),
        PopulationClass::SinhBound => Some(StateClass::SinhBound),
        PopulationClass::Singular => Some(StateClass::Singular),
        PopulationClass::GoldstoneMixed => Some(StateClass::GoldstoneMixed),
    }
}

pub fn survey(a: &SurveyArgs) -> Result<Table> {
    match a.kind {
        SurveyKind::Separation => {
            let sweep = sweep_two_magnon(a.n, population_filter(a.class))?;
            let stats = separation_stats(&sweep.records)?;
            let mut t = Table::new(["n", "max", "median_nonzero", "percent_nonzero", "nu_states"]);
            for n in 0..stats.nu_histogram.len() {
                let row = n.checked_sub(1).and_then(|i| stats.rows.get(i));
                t.push(vec![
                    n.into(),
                    row.map_or(f64::NAN, |r| r.max).into(),
                    row.and_then(|r| r.median_nonzero).unwrap_or(f64::NAN).into(),
                    row.map_or(f64::NAN, |r| r.percent_nonzero).into(),
                    stats.nu_histogram[n].into(),
                ]);
            }
            for f in sweep.failures {
                t.fail(f.id, f.error);
            }
            Ok(t)
        }
        SurveyKind::Quench => {
            let rep = quench_survey(a.n, a.magnons)?;
            let mut cols: Vec<String> =
                ["core", "core_class", "goldstones", "non_goldstones", "must_vanish", "total", "residual"]
                    .map(String::from)
                    .to_vec();
            cols.extend(profile_columns("C", a.n, ""));
            let mut t = Table::new(cols);
            for e in &rep.entries {
                let mut cells: Vec<Cell> = vec![
                    e.core.clone().into(),
                    e.core_class.as_str().into(),
                    e.goldstones.into(),
                    e.non_goldstones.into(),
                    (e.expect_quenched() as i64).into(),
                    e.total.into(),
                    e.residual.into(),
                ];
                cells.extend(profile_cells(&e.profile));
                t.push(cells);
            }
            for v in rep.violations {
                t.fail("violation", v);
            }
            for f in rep.failures {
                t.fail(f.id, f.error);
            }
            Ok(t)
        }
        SurveyKind::Ags => {
            let rep = ags_survey(a.n)?;
            let mut cols: Vec<String> =
                ["n_sites", "provenance", "energy", "ground_energy", "projection"].map(String::from).to_vec();
            cols.extend(profile_columns("C", a.n, ""));
            let mut t = Table::new(cols);
            let provenance = match rep.provenance {
                magnon_core::stats::Provenance::BetheAnsatz => "bethe_ansatz",
                magnon_core::stats::Provenance::ExactDiagonalization => "exact_diagonalization",
            };
            let mut cells: Vec<Cell> = vec![
                rep.n_sites.into(),
                provenance.into(),
                rep.energy.into(),
                rep.ground_energy.into(),
                rep.projection.into(),
            ];
            cells.extend(profile_cells(&rep.profile));
            t.push(cells);
            if rep.projection < 1.0 - 1e-8 {
                t.fail("ags", format!("projection on the exact ground state {:.12}", rep.projection));
            }
            Ok(t)
        }
        SurveyKind::Scan => {
            let low = a.n_min.unwrap_or_else(|| default_scan_start(&a.lambdas));
            if low > a.n {
                bail!("empty ring-length range {low}..={}", a.n);
            }
            let mut cols: Vec<String> = ["n_sites", "class", "residual"].map(String::from).to_vec();
            cols.extend(profile_columns("C", a.n, ""));
            cols.extend(profile_columns("C-", a.n, ""));
            let mut t = Table::new(cols);
            let width = a.n / 2;
            for row in length_scan(&a.lambdas, low..=a.n) {
                let (Some(p), Some(class), Some(res)) = (&row.profile, row.class, row.residual) else {
                    t.fail(format!("N={}", row.n_sites), row.error.unwrap_or_default());
                    continue;
                };
                let mut cells: Vec<Cell> = vec![row.n_sites.into(), class.as_str().into(), res.into()];
                let get = |f: &dyn Fn(usize) -> f64, i: usize| if i <= p.len() { f(i) } else { f64::NAN };
                cells.extend((1..=width).map(|r| Cell::Num(get(&|r| p.get(r), r))));
                cells.extend((1..=width).map(|i| Cell::Num(get(&|i| p.from_end(i), i))));
                t.push(cells);
            }
            Ok(t)
        }
    }
}
