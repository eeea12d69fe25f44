//! Batch front end. Each subcommand layers flags over an optional flat JSON
//! config, validates everything before computing, writes CSV rows and a JSON
//! summary, and maps failures to exit codes: 1 for a violated invariant, 2
//! for invalid input, 3 for a numerical failure.

pub mod args;
pub mod config;
mod selftest;

use std::f64::consts::FRAC_PI_4;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::Parser;
use serde::Serialize;

use crate::asymptotics::report::real;
use crate::asymptotics::{
    bracketing_check, counting_sweep, fit_log_slope, log_spaced, monotonicity_sweep, positivity_check, write_curve_csv,
    SpacingRule, SweepPolicy, SweepSummary, ThresholdReference,
};
use crate::discretize::{assemble_fiber_pencil, build_mesh, dump_pencil, TruncatedDomain};
use crate::discretize::{assemble_flat_pencil, assemble_reference_pencil};
use crate::error::{Error, Result};
use crate::fibers::{inverse_square_slope, ConeConfig};
use crate::model1d::{
    delta_interval_ground, inverse_square_counts, threshold_decay, BoundaryCondition, IntervalDeltaProblem,
    InverseSquareProblem,
};
use args::{Cli, Command, ConeArgs, Model1dMode, OutputArgs};
use config::Layer;

pub const JOBS_ENV: &str = "CONE_SPECTRA_JOBS";

/// Runs the command line and returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

struct Ctx {
    layer: Layer,
    jobs: usize,
    dump: Option<std::path::PathBuf>,
}

pub fn run(cli: &Cli) -> Result<i32> {
    let layer = Layer::load(cli.config.as_deref())?;
    let env_jobs = match std::env::var(JOBS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::param("jobs", format!("{JOBS_ENV}={v} is not a count")))?,
        ),
        Err(_) => None,
    };
    let jobs = layer.get(cli.jobs, "jobs")?.or(env_jobs).unwrap_or(1);
    if jobs == 0 {
        return Err(Error::param("jobs", "must be at least 1"));
    }
    let dump = layer.get(cli.dump_pencil.clone(), "dump_pencil")?;
    let ctx = Ctx { layer, jobs, dump };
    match &cli.command {
        Command::Fibers(a) => cmd_fibers(&ctx, a),
        Command::Model1d(a) => cmd_model1d(&ctx, a),
        Command::Sweep(a) => cmd_sweep(&ctx, a),
        Command::Monotonic(a) => cmd_monotonic(&ctx, a),
        Command::Positivity(a) => cmd_positivity(&ctx, a),
        Command::Bracketing(a) => cmd_bracketing(&ctx, a),
        Command::Selftest => selftest::run(),
    }
}

fn cone(ctx: &Ctx, a: &ConeArgs) -> Result<ConeConfig> {
    ConeConfig::new(
        ctx.layer.or(a.d, "d", 3)?,
        ctx.layer.angle(a.theta, "theta", FRAC_PI_4)?,
        ctx.layer.or(a.alpha, "alpha", 2.0)?,
    )
}

/// CSV and summary sinks of one command.
struct Sinks {
    csv: Box<dyn Write>,
    summary: Option<std::path::PathBuf>,
}

fn sinks(ctx: &Ctx, o: &OutputArgs) -> Result<Sinks> {
    let csv: Box<dyn Write> = match ctx.layer.get(o.csv.clone(), "csv")? {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    Ok(Sinks {
        csv,
        summary: ctx.layer.get(o.summary.clone(), "summary")?,
    })
}

impl Sinks {
    fn summary<T: Serialize>(&mut self, value: &T) -> Result<()> {
        self.csv.flush()?;
        let text = serde_json::to_string_pretty(value)?;
        match &self.summary {
            Some(p) => std::fs::write(p, text + "\n")?,
            None => eprintln!("{text}"),
        }
        Ok(())
    }
}

fn dump(ctx: &Ctx, p: &crate::eigensolve::SymmetricPencil) -> Result<()> {
    if let Some(path) = &ctx.dump {
        let (a, m) = dump_pencil(p, path)?;
        eprintln!("pencil written to {} and {}", a.display(), m.display());
    }
    Ok(())
}

fn cmd_fibers(ctx: &Ctx, a: &args::FibersArgs) -> Result<i32> {
    let cfg = cone(ctx, &a.cone)?;
    let lmax = ctx.layer.or(a.lmax, "lmax", 3)?;
    let mut out = BufWriter::new(io::stdout());
    writeln!(out, "l,angular_ev,gamma,multiplicity,threshold")?;
    for l in 0..=lmax {
        let f = cfg.fiber(l);
        writeln!(
            out,
            "{},{},{},{},{}",
            l,
            real(f.angular_ev),
            real(f.gamma),
            f.multiplicity,
            real(f.threshold)
        )?;
    }
    out.flush()?;
    Ok(0)
}

#[derive(Serialize)]
struct FitSummary {
    slope: f64,
    intercept: f64,
    r2: f64,
    predicted: Option<f64>,
    relative_deviation: Option<f64>,
}

fn cmd_model1d(ctx: &Ctx, a: &args::Model1dArgs) -> Result<i32> {
    let l = &ctx.layer;
    let mode = l.or(a.mode, "mode", Model1dMode::Decay)?;
    let mut out = sinks(ctx, &a.out)?;
    match mode {
        Model1dMode::Ground => {
            let alpha = l.or(a.alpha, "alpha", 2.0)?;
            let length = l.or(a.length, "length", 5.0)?;
            let bc = l.or(a.bc, "bc", BoundaryCondition::Dirichlet)?;
            let p = IntervalDeltaProblem::new(alpha, length, bc)?;
            writeln!(out.csv, "alpha,L,bc,energy,gap")?;
            match delta_interval_ground(&p) {
                Some(s) => writeln!(
                    out.csv,
                    "{},{},{bc},{},{}",
                    real(alpha),
                    real(length),
                    real(s.energy),
                    real(s.gap)
                )?,
                None => writeln!(out.csv, "{},{},{bc},no bound state,", real(alpha), real(length))?,
            }
            out.csv.flush()?;
        }
        Model1dMode::Decay => {
            let alpha = l.or(a.alpha, "alpha", 2.0)?;
            let bc = l.or(a.bc, "bc", BoundaryCondition::Neumann)?;
            let lo = l.or(a.l_min, "l_min", 2.0)?;
            let hi = l.or(a.l_max, "l_max", 40.0)?;
            let n = l.or(a.l_count, "l_count", 20)?;
            if !(lo > 0.0 && hi > lo && n >= 3) {
                return Err(Error::param("l_min", "need 0 < l_min < l_max and l_count >= 3"));
            }
            let lengths: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
            writeln!(out.csv, "L,energy,gap,ln_abs_gap")?;
            let mut with_state = Vec::new();
            for &len in &lengths {
                let p = IntervalDeltaProblem::new(alpha, len, bc)?;
                match delta_interval_ground(&p) {
                    Some(s) => {
                        writeln!(
                            out.csv,
                            "{},{},{},{}",
                            real(len),
                            real(s.energy),
                            real(s.gap),
                            real(s.gap.abs().ln())
                        )?;
                        with_state.push(len);
                    }
                    None => writeln!(out.csv, "{},no bound state,,", real(len))?,
                }
            }
            let d = threshold_decay(alpha, bc, &with_state)?;
            out.summary(&FitSummary {
                slope: d.slope,
                intercept: d.intercept,
                r2: d.r_squared,
                predicted: Some(-alpha),
                relative_deviation: Some((d.slope + alpha) / -alpha),
            })?;
        }
        Model1dMode::Slope => {
            let c = l.or(a.c, "c", 1.0)?;
            let bc = l.or(a.bc, "bc", BoundaryCondition::Dirichlet)?;
            let e_min = l.or(a.e_min, "e_min", 1e-12)?;
            let e_max = l.or(a.e_max, "e_max", 1e-3)?;
            let per = l.or(a.per_decade, "per_decade", 10)?;
            if !(e_min > 0.0 && e_max > e_min && per >= 1) {
                return Err(Error::param("e_min", "need 0 < e_min < e_max and per_decade >= 1"));
            }
            let n = ((e_max / e_min).log10() * per as f64).round() as usize + 1;
            let depths = log_spaced(e_max, e_min, n.max(2));
            let p = InverseSquareProblem::new(c, bc)?;
            let counts = inverse_square_counts(&p, &depths)?;
            writeln!(out.csv, "E,ln_inv,N")?;
            for (e, k) in depths.iter().zip(&counts) {
                writeln!(out.csv, "{},{},{k}", real(*e), real(e.ln().abs()))?;
            }
            let pts: Vec<(f64, usize)> = depths.iter().copied().zip(counts).collect();
            let fit = fit_log_slope(&pts)?;
            let predicted = inverse_square_slope(c);
            out.summary(&FitSummary {
                slope: fit.slope,
                intercept: fit.intercept,
                r2: fit.r_squared,
                predicted: Some(predicted),
                relative_deviation: Some((fit.slope - predicted) / predicted),
            })?;
        }
    }
    Ok(0)
}

fn cmd_sweep(ctx: &Ctx, a: &args::SweepArgs) -> Result<i32> {
    let l = &ctx.layer;
    let cfg = cone(ctx, &a.cone)?;
    let e_max = l.or(a.e_max, "e_max", 1e-1)?;
    let e_min = l.or(a.e_min, "e_min", 1e-4)?;
    let n = l.or(a.samples, "samples", 13)?;
    let mut pol = SweepPolicy::new(cfg.alpha, e_max, e_min, n)?;
    pol.m_sweep = l.or(a.m_sweep, "m_sweep", pol.m_sweep)?;
    if let Some(h) = l.get(a.h, "h")? {
        pol.h_rule = SpacingRule::Fixed { h };
    }
    pol.reference = l.or(a.threshold, "threshold", ThresholdReference::Mesh)?;
    pol.check_refinement = a.check_refinement || l.or(None, "check_refinement", false)?;
    pol.check_truncation = a.check_truncation || l.or(None, "check_truncation", false)?;
    let check_lower = a.check_lower_bound || l.or(None, "check_lower_bound", false)?;
    pol.validate(&cfg)?;
    let mut out = sinks(ctx, &a.out)?;

    if ctx.dump.is_some() {
        let e = pol.depths.iter().copied().fold(f64::INFINITY, f64::min);
        let dom = TruncatedDomain::for_depth(&cfg, e, pol.m_sweep)?;
        let mesh = build_mesh(&dom, pol.h_rule.spacing(cfg.alpha, pol.m_sweep, e))?;
        dump(ctx, &assemble_fiber_pencil(&cfg, 0, &mesh)?)?;
    }

    let curve = counting_sweep(&cfg, &pol, ctx.jobs)?;
    write_curve_csv(&curve, &mut out.csv)?;
    out.summary(&SweepSummary::new(&curve))?;
    for w in &curve.warnings {
        eprintln!("warning: {w}");
    }
    if check_lower {
        if let Some(s) = curve.lower_bound_violations().first() {
            return Err(Error::InvariantViolation(format!(
                "at E = {:e} the count {} is below the tensor lower bound {}",
                s.e, s.count, s.lower
            )));
        }
    }
    Ok(0)
}

fn cmd_monotonic(ctx: &Ctx, a: &args::MonotonicArgs) -> Result<i32> {
    use std::f64::consts::PI;
    let l = &ctx.layer;
    let alpha = l.or(a.alpha, "alpha", 2.0)?;
    let thetas = l
        .angles(a.thetas.clone(), "thetas")?
        .unwrap_or_else(|| vec![PI / 8.0, PI / 6.0, PI / 4.0, PI / 3.0]);
    let k = l.or(a.k, "k", 3)?;
    let extent_s = l.or(a.extent_s, "extent_s", 12.0)?;
    let extent_t = l.or(a.extent_t, "extent_t", 6.0)?;
    let back = l.or(a.back, "back", 3.0)?;
    let h = l.or(a.h, "h", 0.1)?;
    let dom = TruncatedDomain::reference(extent_s, extent_t)?.with_back(back)?;
    let mesh = build_mesh(&dom, h)?;
    let mut out = sinks(ctx, &a.out)?;
    if ctx.dump.is_some() {
        dump(ctx, &assemble_reference_pencil(3, &mesh)?.at(thetas[0], alpha)?)?;
    }
    let table = monotonicity_sweep(alpha, &thetas, k, &mesh)?;
    let head: Vec<String> = (1..=k).map(|j| format!("E{j}")).collect();
    writeln!(out.csv, "theta,{}", head.join(","))?;
    for (theta, row) in table.thetas.iter().zip(&table.energies) {
        let cells: Vec<String> = row.iter().map(|v| v.map(real).unwrap_or_default()).collect();
        writeln!(out.csv, "{},{}", real(*theta), cells.join(","))?;
    }
    out.summary(&table)?;
    table.check()?;
    Ok(0)
}

fn cmd_positivity(ctx: &Ctx, a: &args::PositivityArgs) -> Result<i32> {
    let l = &ctx.layer;
    let cfg = cone(ctx, &a.cone)?;
    let lmax = l.or(a.lmax, "lmax", if cfg.d == 3 { 3 } else { 1 })?;
    let extent_s = l.or(a.extent_s, "extent_s", 20.0 / cfg.alpha)?;
    let h = l.or(a.h, "h", 0.05)?;
    let dom = TruncatedDomain::with_radius(&cfg, extent_s)?;
    let mesh = build_mesh(&dom, h)?;
    let mut out = sinks(ctx, &a.out)?;
    if ctx.dump.is_some() {
        let first = if cfg.d == 3 { 1 } else { 0 };
        dump(ctx, &assemble_flat_pencil(&cfg, first, &mesh)?)?;
    }
    let rep = positivity_check(&cfg, lmax, &mesh)?;
    writeln!(out.csv, "l,gamma,lowest,threshold,below_threshold")?;
    for f in &rep.fibers {
        writeln!(
            out.csv,
            "{},{},{},{},{}",
            f.l,
            real(f.gamma),
            real(f.lowest),
            real(rep.threshold),
            f.below_threshold
        )?;
    }
    out.summary(&rep)?;
    rep.check()?;
    Ok(0)
}

fn cmd_bracketing(ctx: &Ctx, a: &args::BracketingArgs) -> Result<i32> {
    let l = &ctx.layer;
    let cfg = cone(ctx, &a.cone)?;
    let e = l.or(a.e, "e", 1e-3)?;
    if !(e > 0.0 && e < 1.0) {
        return Err(Error::param("E", format!("depth must lie in (0, 1), got {e}")));
    }
    let k = l.or(a.k, "k", 4.0)?;
    let r = l.or(a.r, "r", 8.0 * e.ln().abs())?;
    let h = l.or(a.h, "h", 0.1)?;
    let mut out = sinks(ctx, &a.out)?;
    if ctx.dump.is_some() {
        let mesh = build_mesh(&TruncatedDomain::with_radius(&cfg, r)?, h)?;
        dump(ctx, &assemble_fiber_pencil(&cfg, 0, &mesh)?)?;
    }
    let rep = bracketing_check(&cfg, e, k, r, h)?;
    writeln!(out.csv, "E,K,R,N_lower,N,N_outer,N_upper")?;
    writeln!(
        out.csv,
        "{},{},{},{},{},{},{}",
        real(e),
        real(k),
        real(r),
        rep.lower.count,
        rep.count,
        rep.outer,
        rep.upper
    )?;
    out.summary(&rep)?;
    rep.check()?;
    Ok(0)
}
