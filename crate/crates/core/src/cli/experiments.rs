//! The four experiment drivers. Each returns the files to write and the
//! checks it evaluated; nothing touches the disk here.

use std::time::Instant;

use rayon::prelude::*;

use crate::barriers::{psi_eval, verify_comparison, BarrierError, BarrierVariant, Supersolution, TravelingWave};
use crate::free_boundary::{extract, FreeBoundaryCurve};
use crate::hodograph::{
    admissible_delta, back_transform, solve_optimality, HodographError, OptimalityProblem, Strategy,
};
use crate::model::validate_hypotheses;
use crate::regularity::{measure, MeasureSpec, RegularityReport};
use crate::solver::{energy_report, format_number, solve, SolutionField, SolverError};

use super::config::{ExperimentConfig, LadderEntry, Scenario};
use super::manifest::Check;
use super::scenario::default_ladder;
use super::CliError;

/// Files (name, contents), stage timings and checks of one experiment.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(String, String)>,
    pub timings: Vec<(String, f64)>,
    pub checks: Vec<Check>,
}

impl Outcome {
    fn file(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }
}

fn solver_failure(stage: &str) -> impl Fn(SolverError) -> CliError + '_ {
    move |e| match e {
        SolverError::Hypotheses(_) | SolverError::InvalidGrid(_) | SolverError::InvalidConfig(_) => {
            CliError::Config(format!("{stage}: {e}"))
        }
        other => CliError::Solver(format!("{stage}: {other}")),
    }
}

fn field_csv(u: &SolutionField, labels: [&str; 3]) -> String {
    let mut buf = Vec::new();
    u.write_csv(&mut buf, labels).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

fn curve_csv(c: &FreeBoundaryCurve) -> String {
    let mut buf = Vec::new();
    c.write_csv(&mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

fn measure_spec(cfg: &ExperimentConfig, u: &SolutionField, sweep: bool) -> MeasureSpec {
    let mut spec = MeasureSpec::for_field(u);
    if sweep {
        // a probe radius tied to dx would change what N measures between levels
        spec.rho = 0.05;
    }
    let m = &cfg.measure;
    if let Some(v) = m.rho {
        spec.rho = v;
    }
    if let Some(v) = m.min_gap {
        spec.min_gap = v;
    }
    if let Some(v) = m.energy_radius {
        spec.energy_radius = v;
    }
    spec
}

fn ordering_checks(out: &mut Outcome, r: &RegularityReport, tag: &str) {
    out.check(
        &format!("ordering-n-l{tag}"),
        r.n <= r.l,
        format!("N = {} L = {}", format_number(r.n), format_number(r.l)),
    );
    out.check(
        &format!("ordering-time-modulus{tag}"),
        r.t_half <= r.m,
        format!("T_half = {} M = {}", format_number(r.t_half), format_number(r.m)),
    );
}

fn max_abs(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |m, v| m.max(v.abs()))
}

pub fn simulate(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let scenario = cfg.scenario()?;
    let grid = cfg.grid()?;
    let problem = cfg.problem(&grid)?;
    let scfg = cfg.solver_config(&grid, None)?;
    let mut out = Outcome::default();
    if scenario == Scenario::Custom {
        let report = validate_hypotheses(&problem.boundary, &problem.initial, &problem.bounds);
        out.check(
            "data-hypotheses",
            report.is_admissible() || !problem.enforce_hypotheses,
            report.to_string(),
        );
    }
    let clock = Instant::now();
    let u = solve(&problem, &grid, &scfg).map_err(solver_failure("solve"))?;
    out.timings.push(("solve".into(), clock.elapsed().as_secs_f64()));
    let curve = extract(&u);
    out.file("field.csv", field_csv(&u, ["t", "x", "u"]));
    out.file("interface.csv", curve_csv(&curve));

    let clock = Instant::now();
    let spec = measure_spec(cfg, &u, false);
    let report = measure(&u, &spec);
    let energy = energy_report(&u, spec.energy_radius);
    out.timings.push(("measure".into(), clock.elapsed().as_secs_f64()));
    let mut text = match &report {
        Ok(r) => r.to_kv(),
        Err(e) => format!("# regularity unavailable: {e}\n"),
    };
    match &energy {
        Ok(e) => text.push_str(&e.to_kv()),
        Err(e) => text.push_str(&format!("# energy unavailable: {e}\n")),
    }
    out.file("report.txt", text);

    let nx = grid.nx();
    match scenario {
        Scenario::Stationary => {
            let step = (1..grid.nt())
                .map(|k| max_abs(u.column(k).iter().zip(u.column(k - 1)).map(|(a, b)| a - b)))
                .fold(0.0, f64::max);
            out.check("stationary-per-step", step <= 1e-12, format!("max change {step:e}"));
            let last = u.column(grid.nt() - 1);
            let terminal = max_abs((0..nx).map(|i| last[i] - grid.x(i)));
            out.check(
                "stationary-terminal",
                terminal <= 1e-8,
                format!("max error {terminal:e}"),
            );
            let r_max = max_abs(curve.positions.iter().copied());
            let all_valid = curve.valid.iter().all(|&v| v);
            out.check(
                "interface-at-origin",
                all_valid && r_max <= 1e-9,
                format!("max |r| {r_max:e}"),
            );
            match &report {
                Ok(r) => out.check(
                    "lipschitz-unit",
                    (r.l - 1.0).abs() <= 1e-6,
                    format!("L = {}", format_number(r.l)),
                ),
                Err(e) => out.check("lipschitz-unit", false, e.to_string()),
            }
            match &energy {
                Ok(e) => out.check(
                    "energy-ratio",
                    (e.ratio - 0.4375).abs() <= 1e-3,
                    format!("ratio = {}", format_number(e.ratio)),
                ),
                Err(e) => out.check("energy-ratio", false, e.to_string()),
            }
        }
        Scenario::StepData | Scenario::Custom => match &report {
            Ok(r) => {
                out.check(
                    "separation",
                    r.delta1 > 0.0 && r.delta2 > 0.0,
                    format!(
                        "delta1 = {} delta2 = {}",
                        format_number(r.delta1),
                        format_number(r.delta2)
                    ),
                );
                ordering_checks(&mut out, r, "");
            }
            Err(e) if scenario == Scenario::StepData => out.check("regularity-measured", false, e.to_string()),
            Err(_) => {}
        },
        Scenario::Collapse => {
            let vanish = (0..grid.nt()).find(|&k| u.column(k).iter().all(|&v| v <= 0.0));
            out.check(
                "collapse-vanishes",
                vanish.is_some(),
                match vanish {
                    Some(k) => format!("positive phase gone at t = {}", format_number(grid.t(k))),
                    None => "positive phase survives".into(),
                },
            );
            let last = u.column(grid.nt() - 1);
            let terminal = max_abs(last[1..nx - 1].iter().map(|v| v + 1.0));
            out.check(
                "collapse-terminal",
                terminal <= 1e-3,
                format!("max |u + 1| {terminal:e}"),
            );
        }
        Scenario::BarrierSandwich | Scenario::Optimality => unreachable!("rejected by validation"),
    }
    Ok(out)
}

struct Level {
    entry: LadderEntry,
    n: u32,
    epsilon: f64,
    seconds: f64,
    curve: FreeBoundaryCurve,
    report: RegularityReport,
}

fn relative_change(coarse: f64, fine: f64) -> f64 {
    (fine - coarse).abs() / coarse.abs()
}

pub fn regularity_sweep(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let mut entries = cfg.ladder_entries()?;
    if entries.is_empty() {
        entries = default_ladder();
    }
    let levels: Vec<Level> = entries
        .par_iter()
        .map(|entry| {
            let grid = cfg.grid_with(entry.nx, entry.nt)?;
            let problem = cfg.problem(&grid)?;
            let scfg = cfg.solver_config(&grid, Some(entry))?;
            let clock = Instant::now();
            let stage = format!("solve nx = {}", entry.nx);
            let u = solve(&problem, &grid, &scfg).map_err(solver_failure(&stage))?;
            let report = measure(&u, &measure_spec(cfg, &u, true))
                .map_err(|e| CliError::Solver(format!("measure nx = {}: {e}", entry.nx)))?;
            Ok(Level {
                entry: *entry,
                n: scfg.regularization_n,
                epsilon: scfg.mollify_epsilon,
                seconds: clock.elapsed().as_secs_f64(),
                curve: extract(&u),
                report,
            })
        })
        .collect::<Result<_, CliError>>()?;

    let mut out = Outcome::default();
    let mut table = format!("nx,nt,n,epsilon,{}\n", RegularityReport::CSV_HEADER);
    for lv in &levels {
        let e = lv.entry;
        table.push_str(&format!(
            "{},{},{},{},{}\n",
            e.nx,
            e.nt,
            lv.n,
            format_number(lv.epsilon),
            lv.report.csv_row()
        ));
        out.timings.push((format!("level.nx{}", e.nx), lv.seconds));
        out.file(&format!("interface_nx{}.csv", e.nx), curve_csv(&lv.curve));
    }
    out.file("refinement.csv", table);

    for lv in &levels {
        let r = &lv.report;
        let tag = format!("-nx{}", lv.entry.nx);
        let finite = [r.l, r.m, r.n, r.k, r.delta1, r.delta2, r.energy_ratio]
            .iter()
            .all(|v| v.is_finite());
        out.check(&format!("finite{tag}"), finite, String::new());
        out.check(
            &format!("separation{tag}"),
            r.delta1 > 0.0 && r.delta2 > 0.0,
            format!(
                "delta1 = {} delta2 = {}",
                format_number(r.delta1),
                format_number(r.delta2)
            ),
        );
        ordering_checks(&mut out, r, &tag);
    }
    for w in levels.windows(2) {
        let (a, b) = (&w[0].report, &w[1].report);
        out.check(
            &format!("energy-nonincreasing-nx{}", w[1].entry.nx),
            b.energy_ratio <= a.energy_ratio * 1.1,
            format!("{} -> {}", format_number(a.energy_ratio), format_number(b.energy_ratio)),
        );
    }
    if let [.., coarse, fine] = levels.as_slice() {
        let (a, b) = (&coarse.report, &fine.report);
        let bands = [
            ("stability-l", a.l, b.l, 0.15),
            ("stability-m", a.m, b.m, 0.15),
            ("stability-n", a.n, b.n, 0.20),
            ("stability-k", a.k, b.k, 0.20),
            ("stability-delta1", a.delta1, b.delta1, 0.10),
            ("stability-delta2", a.delta2, b.delta2, 0.10),
        ];
        for (name, x, y, band) in bands {
            let change = relative_change(x, y);
            out.check(
                name,
                change <= band,
                format!("relative change {change:.4} (band {band})"),
            );
        }
    }
    Ok(out)
}

fn barrier_failure(e: BarrierError) -> CliError {
    match e {
        BarrierError::InvalidParameters(m) => CliError::Config(m),
        other => CliError::Solver(format!("barriers: {other}")),
    }
}

pub fn barriers(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid()?;
    let problem = cfg.problem(&grid)?;
    let scfg = cfg.solver_config(&grid, None)?;
    let bounds = problem.bounds;
    let mut out = Outcome::default();

    let clock = Instant::now();
    let u = solve(&problem, &grid, &scfg).map_err(solver_failure("solve"))?;
    out.timings.push(("solve".into(), clock.elapsed().as_secs_f64()));

    let clock = Instant::now();
    let sup = Supersolution::admissible(bounds, &grid).map_err(barrier_failure)?;
    let wave = TravelingWave::admissible(&bounds).map_err(barrier_failure)?;
    let t_max = grid.t_max();
    let sub = SolutionField::from_fn(grid, |x, t| wave.eval(x, t - t_max));
    out.timings.push(("barriers".into(), clock.elapsed().as_secs_f64()));

    let tol = 10.0 * (grid.dx().powi(2) + grid.dt()) * bounds.upper();
    let below = verify_comparison(&sub, &u, tol).map_err(barrier_failure)?;
    let above = verify_comparison(&u, &sup.field, tol).map_err(barrier_failure)?;

    out.file("field.csv", field_csv(&u, ["t", "x", "u"]));
    out.file("interface.csv", curve_csv(&extract(&u)));
    let wave_variant = BarrierVariant::SubsolutionTravelingWave {
        eps: wave.eps(),
        k: wave.k(),
    };
    out.file(
        "subsolution.csv",
        format!("{}\n{}", wave_variant.annotation(), field_csv(&sub, ["t", "x", "u"])),
    );
    let sup_variant = BarrierVariant::SupersolutionParabolicInterface { eps: sup.eps };
    out.file(
        "supersolution.csv",
        format!(
            "{}\n{}",
            sup_variant.annotation(),
            field_csv(&sup.field, ["t", "x", "u"])
        ),
    );

    out.check("subsolution-below", below.passed(), format!("{below:?} tol {tol:e}"));
    out.check("supersolution-above", above.passed(), format!("{above:?} tol {tol:e}"));
    out.check(
        "supersolution-flux",
        sup.admissible(),
        format!(
            "max flux {} bound {}",
            format_number(sup.max_flux),
            format_number(sup.flux_bound)
        ),
    );
    Ok(out)
}

fn hodograph_failure(stage: &str) -> impl Fn(HodographError) -> CliError + '_ {
    move |e| match e {
        HodographError::Invalid(m) => CliError::Config(m),
        other => CliError::Solver(format!("{stage}: {other}")),
    }
}

fn max_diff(a: &SolutionField, b: &SolutionField) -> f64 {
    max_abs(a.values().iter().zip(b.values()).map(|(p, q)| p - q))
}

pub fn optimality(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid()?;
    let d = &cfg.data;
    let base = OptimalityProblem::new(d.delta.unwrap_or(0.1), grid.nx(), grid.nt())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mut out = Outcome::default();

    let clock = Instant::now();
    let newton = admissible_delta(base.clone()).map_err(hodograph_failure("newton"))?;
    out.timings.push(("newton".into(), clock.elapsed().as_secs_f64()));

    let schedule = d.picard_schedule.clone().unwrap_or_else(|| vec![8, 16, 32]);
    let picard_problem = OptimalityProblem {
        delta: newton.delta,
        ..base.clone()
    }
    .with_strategy(Strategy::PicardTj {
        schedule,
        limit_stage: d.limit_stage.unwrap_or(false),
    });
    let clock = Instant::now();
    let picard = solve_optimality(&picard_problem).map_err(hodograph_failure("picard"))?;
    out.timings.push(("picard".into(), clock.elapsed().as_secs_f64()));

    let summary = newton.summary().map_err(hodograph_failure("summary"))?;
    let (u, curve) = back_transform(&newton.v, newton.delta).map_err(hodograph_failure("back-transform"))?;
    let gap = max_diff(&newton.v, &picard.v);
    let g = *newton.w.grid();
    let margin = (0..g.nt())
        .flat_map(|k| (0..g.nx()).map(move |i| (i, k)))
        .map(|(i, k)| psi_eval(newton.kappa, g.x(i), g.t(k)) - newton.w.at(i, k))
        .fold(f64::NEG_INFINITY, f64::max);
    let slack = g.dx().powi(2) + g.dt();

    let mut text = summary.to_kv();
    text.push_str(&format!("newton_picard_gap = {}\n", format_number(gap)));
    text.push_str(&format!("neumann_margin = {}\n", format_number(margin)));
    out.file("summary.txt", text);
    out.file("v.csv", field_csv(&newton.v, ["t", "y", "value"]));
    out.file("w.csv", field_csv(&newton.w, ["t", "y", "value"]));
    out.file("u.csv", field_csv(&u, ["t", "x", "u"]));
    out.file("interface.csv", curve_csv(&curve));
    let mut stages = String::from("j,sweeps,change,drift\n");
    for s in &picard.stages {
        stages.push_str(&format!(
            "{},{},{},{}\n",
            s.j.map_or_else(|| "inf".to_string(), |j| j.to_string()),
            s.sweeps,
            format_number(s.change),
            s.drift.map_or_else(String::new, format_number)
        ));
    }
    out.file("picard.csv", stages);

    out.check(
        "admissible-delta",
        newton.max_slope <= 0.5,
        format!(
            "delta = {} max |delta w_y| = {}",
            format_number(newton.delta),
            format_number(newton.max_slope)
        ),
    );
    let bound = summary.bound;
    out.check(
        "v-bound",
        summary.v_left_final <= bound + 0.005,
        format!(
            "v(0,T) = {} bound = {}",
            format_number(summary.v_left_final),
            format_number(bound)
        ),
    );
    out.check(
        "sqrt-exponent",
        (summary.exponent - 0.5).abs() <= 0.05 && summary.r2 >= 0.99,
        format!(
            "exponent = {} r2 = {}",
            format_number(summary.exponent),
            format_number(summary.r2)
        ),
    );
    out.check(
        "newton-picard",
        gap <= 5e-3,
        format!("max |v_newton - v_picard| = {gap:e}"),
    );
    out.check(
        "neumann-comparison",
        margin <= slack,
        format!("max (Psi - w) = {margin:e} slack {slack:e}"),
    );
    Ok(out)
}
