//! Command-line front end.
//!
//! Every subcommand writes its data files and a `manifest.json` into
//! `<out>/<subcommand>/<config digest>/`. The digest covers the normalized
//! command recorded in the manifest, which leaves out `--out` and
//! `--workers`, so reruns land in the same directory with the same bytes.
//! Each flag can also be set through an environment variable named
//! `RICCATI_` followed by the flag in upper snake case.

use std::ffi::OsString;
use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::checks::{run_suite, CheckSettings, Status};
use crate::error::{Error, Result};
use crate::io::{
    figure_bundle, fmt_f64, read_manifest, run_directory, time_points, write_canonical_json, write_grid_function,
    write_histogram_csv, write_manifest, write_series_csv, write_table, FigurePreset, FigureSettings, GridParams,
    RunManifest, COMPARISON_FILE, HISTOGRAM_FILE, MANIFEST_FILE, UK_FILE, VCURVE_FILE, VREF_FILE,
};
use crate::montecarlo::{
    compare_series, estimate_l_tail, estimate_leaf_histogram, estimate_s_tail, estimate_v_curve, Acceptance, McConfig,
};
use crate::numerics::{
    integrate_tail, iterate_qn, iterate_vn, picard_v0, picard_v0_settled, q0_surrogate, riccati_residual,
    NumericsConfig, UniformGrid,
};
use crate::regime::{sweep, SweepSettings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "riccati-cascade",
    version,
    about = "Monte Carlo and grid numerics for the alpha-Riccati branching cascade"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Time-scaling parameter of the cascade
    #[arg(long, global = true, env = "RICCATI_ALPHA")]
    pub alpha: Option<f64>,
    /// Right end of the time grid
    #[arg(long, global = true, env = "RICCATI_T_MAX", default_value_t = 8.0)]
    pub t_max: f64,
    /// Grid step
    #[arg(long, global = true, env = "RICCATI_STEP", default_value_t = 0.01)]
    pub step: f64,
    /// Cascade depth, also the iteration count n of v_n and q_n
    #[arg(long, global = true, env = "RICCATI_DEPTH", default_value_t = 10)]
    pub depth: u32,
    /// Picard depth k of the initial function U_k
    #[arg(long, global = true, env = "RICCATI_PICARD_K", default_value_t = 5)]
    pub picard_k: u32,
    /// Monte Carlo samples per estimate
    #[arg(long, global = true, env = "RICCATI_SAMPLES", default_value_t = 10_000)]
    pub samples: u64,
    /// Master seed; a random one is drawn and printed when absent
    #[arg(long, global = true, env = "RICCATI_SEED")]
    pub seed: Option<u64>,
    /// Tolerance for cutting working grids where iterates have settled
    #[arg(long, global = true, env = "RICCATI_EPS_TAIL", default_value_t = 1e-6)]
    pub eps_tail: f64,
    /// Output root directory
    #[arg(long, global = true, env = "RICCATI_OUT", default_value = "out")]
    pub out: PathBuf,
    /// Worker threads (defaults to the available parallelism); never changes results
    #[arg(long, global = true, env = "RICCATI_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Histogram of the truncated leaf count W_depth(t)
    Hist {
        #[arg(long, env = "RICCATI_T", default_value_t = 2.0)]
        t: f64,
    },
    /// Monte Carlo v_n curve against the deterministic recursion
    Vcurve {
        /// Spacing of the Monte Carlo time points
        #[arg(long, env = "RICCATI_T_STEP", default_value_t = 0.5)]
        t_step: f64,
    },
    /// Picard iterate U_k
    V0,
    /// Deterministic q_n from the q_0 = 1 - U_k surrogate
    Qn,
    /// Tails P(S_depth > t) and P(L_depth > t)
    Paths {
        #[arg(long, env = "RICCATI_T_STEP", default_value_t = 1.0)]
        t_step: f64,
    },
    /// Residual of the Riccati equation for v_n
    Residual,
    /// Full invariant suite; exits with 1 when any check fails
    Check,
    /// Figure-ready data for one of the three standard parameter sets
    Figures {
        #[arg(long, env = "RICCATI_PRESET")]
        preset: FigurePreset,
        #[arg(long, env = "RICCATI_T_STEP", default_value_t = 0.5)]
        t_step: f64,
    },
    /// Limiting q_n(t) across a list of alpha values
    Sweep {
        #[arg(long, env = "RICCATI_ALPHA_LIST", value_delimiter = ',', required = true)]
        alpha_list: Vec<f64>,
        #[arg(long, env = "RICCATI_T", default_value_t = 2.0)]
        t: f64,
        #[arg(long, env = "RICCATI_N_FINAL", default_value_t = 20)]
        n_final: u32,
        #[arg(long, env = "RICCATI_N_COMPARE", default_value_t = 15)]
        n_compare: u32,
    },
    /// Rerun the command recorded in a manifest and compare output digests
    Replay {
        #[arg(long)]
        manifest: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hist { .. } => "hist",
            Command::Vcurve { .. } => "vcurve",
            Command::V0 => "v0",
            Command::Qn => "qn",
            Command::Paths { .. } => "paths",
            Command::Residual => "residual",
            Command::Check => "check",
            Command::Figures { .. } => "figures",
            Command::Sweep { .. } => "sweep",
            Command::Replay { .. } => "replay",
        }
    }
}

/// Result of one subcommand.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub dir: PathBuf,
    /// False when a check or replay comparison failed.
    pub passed: bool,
    pub report: Vec<String>,
}

/// Parse `args` (including the program name), run, print, and return the
/// process exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            for line in &outcome.report {
                println!("{line}");
            }
            println!("output: {}", outcome.dir.display());
            if outcome.passed {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit status for an error: bad parameters are usage errors.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter { .. } | Error::NegativeTime(_) | Error::DepthOverflow { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

pub fn run(cli: &Cli) -> Result<RunOutcome> {
    let ctx = Context::new(&cli.global)?;
    match &cli.command {
        Command::Hist { t } => hist(&ctx, *t),
        Command::Vcurve { t_step } => vcurve(&ctx, *t_step),
        Command::V0 => v0(&ctx),
        Command::Qn => qn(&ctx),
        Command::Paths { t_step } => paths(&ctx, *t_step),
        Command::Residual => residual(&ctx),
        Command::Check => check(&ctx),
        Command::Figures { preset, t_step } => figures(&ctx, *preset, *t_step),
        Command::Sweep {
            alpha_list,
            t,
            n_final,
            n_compare,
        } => sweep_cmd(&ctx, alpha_list, *t, *n_final, *n_compare),
        Command::Replay { manifest } => replay(&ctx, manifest),
    }
}

/// Global flags after validation.
struct Context<'a> {
    g: &'a GlobalArgs,
    workers: usize,
    numerics: NumericsConfig,
}

impl<'a> Context<'a> {
    fn new(g: &'a GlobalArgs) -> Result<Self> {
        let workers = match g.workers {
            Some(0) => return Err(Error::param("workers", "must be positive")),
            Some(w) => w,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        if !(g.eps_tail.is_finite() && g.eps_tail > 0.0) {
            return Err(Error::param("eps-tail", "must be a positive number"));
        }
        Ok(Context {
            g,
            workers,
            numerics: NumericsConfig {
                eps_tail: g.eps_tail,
                ..NumericsConfig::default()
            },
        })
    }

    fn alpha(&self, sub: &str) -> Result<f64> {
        self.g
            .alpha
            .ok_or_else(|| Error::param("alpha", format!("--alpha is required for `{sub}`")))
    }

    fn no_alpha(&self, sub: &str) -> Result<()> {
        match self.g.alpha {
            Some(_) => Err(Error::param("alpha", format!("`{sub}` does not take --alpha"))),
            None => Ok(()),
        }
    }

    fn seed(&self) -> u64 {
        self.g.seed.unwrap_or_else(|| {
            let seed = rand::random::<u64>();
            eprintln!("seed: {seed} (generated; pass --seed {seed} to reproduce)");
            seed
        })
    }

    fn grid(&self) -> Result<UniformGrid> {
        UniformGrid::with_cap(self.g.t_max, self.g.step, self.numerics.max_nodes)
    }

    fn grid_params(&self) -> GridParams {
        GridParams {
            t_max: self.g.t_max,
            step: self.g.step,
            eps_tail: self.g.eps_tail,
        }
    }

    fn mc(&self, seed: u64) -> McConfig {
        McConfig::new(seed)
            .with_samples(self.g.samples)
            .with_depth(self.g.depth)
            .with_workers(self.workers)
    }
}

/// Normalized argument list for the manifest.
struct CommandLine(Vec<String>);

impl CommandLine {
    fn new(sub: &str) -> Self {
        CommandLine(vec![sub.to_string()])
    }

    fn flag(mut self, name: &str, value: impl Display) -> Self {
        self.0.push(format!("--{name}"));
        self.0.push(value.to_string());
        self
    }
}

/// A run in progress: its manifest and output directory.
struct Run {
    manifest: RunManifest,
    dir: PathBuf,
    report: Vec<String>,
}

impl Run {
    fn start(ctx: &Context, sub: &str, manifest: RunManifest) -> Result<Run> {
        let dir = run_directory(&ctx.g.out, sub, &manifest)?;
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Run {
            manifest,
            dir,
            report: Vec::new(),
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn record(&mut self, names: &[&str]) -> Result<()> {
        for name in names {
            self.manifest.record_output(&self.dir, name)?;
        }
        Ok(())
    }

    fn say(&mut self, line: String) {
        self.report.push(line);
    }

    fn finish(mut self, passed: bool) -> Result<RunOutcome> {
        self.manifest.stamp_now();
        write_manifest(&self.manifest, &self.path(MANIFEST_FILE))?;
        Ok(RunOutcome {
            dir: self.dir,
            passed,
            report: self.report,
        })
    }
}

fn hist(ctx: &Context, t: f64) -> Result<RunOutcome> {
    let alpha = ctx.alpha("hist")?;
    let seed = ctx.seed();
    let g = ctx.g;
    let cmd = CommandLine::new("hist")
        .flag("alpha", alpha)
        .flag("t", t)
        .flag("depth", g.depth)
        .flag("samples", g.samples)
        .flag("seed", seed);
    let mut m = RunManifest::new(cmd.0);
    m.alpha = vec![alpha];
    m.depth = Some(g.depth);
    m.samples = Some(g.samples);
    m.seed = Some(seed);
    m.set_parameter("t", t)?;
    let mut run = Run::start(ctx, "hist", m)?;
    let h = estimate_leaf_histogram(alpha, t, &ctx.mc(seed))?;
    write_histogram_csv(&h, &run.path(HISTOGRAM_FILE))?;
    run.record(&[HISTOGRAM_FILE])?;
    run.say(format!(
        "W_{}({t}) at alpha = {alpha}: {} samples, {} occupied bins, max {}, {} truncated, {} at least 64",
        g.depth,
        h.total,
        h.occupied_bins(),
        h.max_observed,
        h.truncated_count,
        h.count_at_least(64)
    ));
    run.finish(true)
}

fn numerics_manifest(ctx: &Context, cmd: CommandLine, alpha: f64) -> RunManifest {
    let mut m = RunManifest::new(cmd.0);
    m.alpha = vec![alpha];
    m.grid = Some(ctx.grid_params());
    m.picard_k = Some(ctx.g.picard_k);
    m
}

fn grid_flags(ctx: &Context, cmd: CommandLine) -> CommandLine {
    cmd.flag("t-max", ctx.g.t_max)
        .flag("step", ctx.g.step)
        .flag("eps-tail", ctx.g.eps_tail)
        .flag("picard-k", ctx.g.picard_k)
}

fn vcurve(ctx: &Context, t_step: f64) -> Result<RunOutcome> {
    let alpha = ctx.alpha("vcurve")?;
    let seed = ctx.seed();
    let g = ctx.g;
    let cmd = grid_flags(ctx, CommandLine::new("vcurve").flag("alpha", alpha))
        .flag("depth", g.depth)
        .flag("samples", g.samples)
        .flag("seed", seed)
        .flag("t-step", t_step);
    let mut m = numerics_manifest(ctx, cmd, alpha);
    m.depth = Some(g.depth);
    m.samples = Some(g.samples);
    m.seed = Some(seed);
    m.set_parameter("t_step", t_step)?;
    let mut run = Run::start(ctx, "vcurve", m)?;
    let grid = ctx.grid()?;
    let v0 = picard_v0_settled(alpha, &grid, g.picard_k, &ctx.numerics)?;
    let reference = iterate_vn(alpha, &grid, g.depth, &v0, &ctx.numerics)?;
    let t_points = time_points(grid.t_max(), t_step)?;
    let mc = estimate_v_curve(alpha, &t_points, g.depth, &v0, &ctx.mc(seed))?;
    let report = compare_series(&mc, &reference, Acceptance::default());
    write_series_csv(&mc, &run.path(VCURVE_FILE))?;
    write_series_csv(&reference, &run.path(VREF_FILE))?;
    write_canonical_json(&report, &run.path(COMPARISON_FILE))?;
    run.record(&[VCURVE_FILE, VREF_FILE, COMPARISON_FILE])?;
    run.say(format!(
        "v_{} at alpha = {alpha}: {} points, {:.1}% within |z| <= {}, max |z| = {:.2}",
        g.depth,
        report.points.len(),
        100.0 * report.fraction_within,
        report.criterion.z_threshold,
        report.max_abs_z
    ));
    run.finish(true)
}

fn v0(ctx: &Context) -> Result<RunOutcome> {
    let alpha = ctx.alpha("v0")?;
    let cmd = grid_flags(ctx, CommandLine::new("v0").flag("alpha", alpha));
    let mut run = Run::start(ctx, "v0", numerics_manifest(ctx, cmd, alpha))?;
    let grid = ctx.grid()?;
    let k = ctx.g.picard_k;
    let u = picard_v0(alpha, &grid, k, &ctx.numerics)?;
    write_grid_function(&u, &run.path(UK_FILE))?;
    // how far the surrogate still is from a few more iterations
    let more = picard_v0(alpha, &grid, k + 3, &ctx.numerics)?;
    let (at, gap) = grid
        .nodes()
        .zip(u.values().iter().zip(more.values()))
        .map(|(t, (a, b))| (t, a - b))
        .fold((0.0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    #[derive(Serialize)]
    struct Surrogate {
        k: u32,
        k_reference: u32,
        max_difference: f64,
        at_t: f64,
    }
    let report = Surrogate {
        k,
        k_reference: k + 3,
        max_difference: gap,
        at_t: at,
    };
    write_canonical_json(&report, &run.path("surrogate.json"))?;
    run.record(&[UK_FILE, "u_k.json", "surrogate.json"])?;
    run.say(format!(
        "U_{k} at alpha = {alpha}: U(t_max) = {:.6}; max U_{k} - U_{} = {gap:.3e} at t = {at}",
        u.values()[u.values().len() - 1],
        k + 3
    ));
    run.finish(true)
}

fn qn(ctx: &Context) -> Result<RunOutcome> {
    let alpha = ctx.alpha("qn")?;
    let g = ctx.g;
    let cmd = grid_flags(ctx, CommandLine::new("qn").flag("alpha", alpha)).flag("depth", g.depth);
    let mut m = numerics_manifest(ctx, cmd, alpha);
    m.depth = Some(g.depth);
    let mut run = Run::start(ctx, "qn", m)?;
    let grid = ctx.grid()?;
    let q0 = q0_surrogate(alpha, &grid, g.picard_k, &ctx.numerics)?;
    let q = iterate_qn(alpha, &grid, g.depth, &q0, &ctx.numerics)?;
    let q0 = q0.truncate_to(&grid);
    write_grid_function(&q0, &run.path("q_0.csv"))?;
    write_grid_function(&q, &run.path("q_n.csv"))?;
    #[derive(Serialize)]
    struct Summary {
        q0_integral: crate::numerics::TailIntegral,
        qn_integral: crate::numerics::TailIntegral,
    }
    let summary = Summary {
        q0_integral: integrate_tail(&q0),
        qn_integral: integrate_tail(&q),
    };
    write_canonical_json(&summary, &run.path("integrals.json"))?;
    run.record(&["q_0.csv", "q_0.json", "q_n.csv", "q_n.json", "integrals.json"])?;
    run.say(format!(
        "q_{} at alpha = {alpha}: q(t_max) = {:.6e}, integral over the grid {:.6}",
        g.depth,
        q.values()[q.values().len() - 1],
        summary.qn_integral.finite_part
    ));
    run.finish(true)
}

fn paths(ctx: &Context, t_step: f64) -> Result<RunOutcome> {
    let alpha = ctx.alpha("paths")?;
    let seed = ctx.seed();
    let g = ctx.g;
    let cmd = CommandLine::new("paths")
        .flag("alpha", alpha)
        .flag("t-max", g.t_max)
        .flag("t-step", t_step)
        .flag("depth", g.depth)
        .flag("samples", g.samples)
        .flag("seed", seed);
    let mut m = RunManifest::new(cmd.0);
    m.alpha = vec![alpha];
    m.depth = Some(g.depth);
    m.samples = Some(g.samples);
    m.seed = Some(seed);
    m.set_parameter("t_max", g.t_max)?;
    m.set_parameter("t_step", t_step)?;
    let mut run = Run::start(ctx, "paths", m)?;
    let t_points = time_points(g.t_max, t_step)?;
    let mc = ctx.mc(seed);
    let s = estimate_s_tail(alpha, &t_points, g.depth, &mc)?;
    let l = estimate_l_tail(alpha, &t_points, g.depth, &mc)?;
    write_series_csv(&s, &run.path("s_tail.csv"))?;
    write_series_csv(&l, &run.path("l_tail.csv"))?;
    run.record(&["s_tail.csv", "l_tail.csv"])?;
    if let (Some(sp), Some(lp)) = (s.points.last(), l.points.last()) {
        run.say(format!(
            "alpha = {alpha}, depth {}: P(S > {t}) = {:.4} ± {:.4}, P(L > {t}) = {:.4} ± {:.4}",
            g.depth,
            sp.mean,
            sp.stderr,
            lp.mean,
            lp.stderr,
            t = sp.t
        ));
    }
    run.finish(true)
}

fn residual(ctx: &Context) -> Result<RunOutcome> {
    let alpha = ctx.alpha("residual")?;
    let g = ctx.g;
    let cmd = grid_flags(ctx, CommandLine::new("residual").flag("alpha", alpha)).flag("depth", g.depth);
    let mut m = numerics_manifest(ctx, cmd, alpha);
    m.depth = Some(g.depth);
    let mut run = Run::start(ctx, "residual", m)?;
    let grid = ctx.grid()?;
    let v0 = picard_v0_settled(alpha, &grid, g.picard_k, &ctx.numerics)?;
    let v = iterate_vn(alpha, &grid, g.depth, &v0, &ctx.numerics)?;
    let report = riccati_residual(&v, alpha)?;
    let rows = report.residuals.iter().enumerate().map(|(i, r)| {
        vec![
            fmt_f64(grid.node(i)),
            fmt_f64(*r),
            u8::from(i < report.interior_len).to_string(),
        ]
    });
    write_table(&run.path("residual.csv"), &["t", "residual", "interior"], rows)?;
    write_grid_function(&v, &run.path("v_n.csv"))?;
    #[derive(Serialize)]
    struct Summary {
        alpha: f64,
        step: f64,
        interior_end: f64,
        max_abs_residual: f64,
    }
    let summary = Summary {
        alpha,
        step: report.step,
        interior_end: report.interior_end(),
        max_abs_residual: report.max_abs_residual,
    };
    write_canonical_json(&summary, &run.path("residual.json"))?;
    run.record(&["residual.csv", "v_n.csv", "v_n.json", "residual.json"])?;
    run.say(format!(
        "v_{} at alpha = {alpha}: max |residual| = {:.3e} on [0, {}]",
        g.depth, report.max_abs_residual, summary.interior_end
    ));
    run.finish(true)
}

fn check(ctx: &Context) -> Result<RunOutcome> {
    let alpha = ctx.alpha("check")?;
    let seed = ctx.seed();
    let g = ctx.g;
    let cmd = grid_flags(ctx, CommandLine::new("check").flag("alpha", alpha))
        .flag("depth", g.depth)
        .flag("samples", g.samples)
        .flag("seed", seed);
    let mut m = numerics_manifest(ctx, cmd, alpha);
    m.depth = Some(g.depth);
    m.samples = Some(g.samples);
    m.seed = Some(seed);
    let mut run = Run::start(ctx, "check", m)?;
    let settings = CheckSettings {
        alpha,
        seed,
        t_max: g.t_max,
        step: g.step,
        depth: g.depth,
        picard_k: g.picard_k,
        samples: g.samples,
        workers: ctx.workers,
        numerics: ctx.numerics,
    };
    let report = run_suite(&settings)?;
    // the worker count is not part of the run's identity
    let stored = crate::checks::CheckReport {
        settings: CheckSettings { workers: 0, ..settings },
        ..report.clone()
    };
    write_canonical_json(&stored, &run.path("check.json"))?;
    run.record(&["check.json"])?;
    for o in &report.outcomes {
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        run.say(format!("{tag} {}: {}", o.name, o.detail));
    }
    run.finish(report.passed)
}

fn figures(ctx: &Context, preset: FigurePreset, t_step: f64) -> Result<RunOutcome> {
    ctx.no_alpha("figures")?;
    let seed = ctx.seed();
    let g = ctx.g;
    let settings = FigureSettings {
        t_max: g.t_max,
        step: g.step,
        depth: g.depth,
        picard_k: g.picard_k,
        mc_step: t_step,
        numerics: ctx.numerics,
        ..FigureSettings::default()
    };
    let (dir, manifest) = figure_bundle(preset, &settings, &ctx.mc(seed), &g.out)?;
    let comparison: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join(COMPARISON_FILE)).map_err(|e| Error::io(&dir, e))?)?;
    Ok(RunOutcome {
        report: vec![format!(
            "{preset} (alpha = {}): {} files, v-curve max |z| = {}",
            preset.alpha(),
            manifest.outputs.len(),
            comparison["max_abs_z"]
        )],
        dir,
        passed: true,
    })
}

fn sweep_cmd(ctx: &Context, alphas: &[f64], t: f64, n_final: u32, n_compare: u32) -> Result<RunOutcome> {
    ctx.no_alpha("sweep")?;
    let g = ctx.g;
    let list = alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
    let cmd = grid_flags(ctx, CommandLine::new("sweep").flag("alpha-list", &list))
        .flag("t", t)
        .flag("n-final", n_final)
        .flag("n-compare", n_compare);
    let mut m = RunManifest::new(cmd.0);
    m.alpha = alphas.to_vec();
    m.grid = Some(ctx.grid_params());
    m.picard_k = Some(g.picard_k);
    m.depth = Some(n_final);
    m.set_parameter("t", t)?;
    m.set_parameter("n_compare", n_compare)?;
    let mut run = Run::start(ctx, "sweep", m)?;
    let settings = SweepSettings {
        t,
        n_final,
        n_compare,
        picard_k: g.picard_k,
    };
    let points = sweep(alphas, &ctx.grid()?, &settings, &ctx.numerics)?;
    let rows = points.iter().map(|p| {
        vec![
            p.alpha.to_string(),
            fmt_f64(p.t),
            fmt_f64(p.q_final),
            fmt_f64(p.q_compare),
            fmt_f64(p.gap),
            if p.positive { "positive" } else { "near_zero" }.to_string(),
            p.slow_convergence.to_string(),
        ]
    });
    write_table(
        &run.path("sweep.csv"),
        &["alpha", "t", "q_final", "q_compare", "gap", "limit", "slow_convergence"],
        rows,
    )?;
    run.record(&["sweep.csv"])?;
    for p in &points {
        run.say(format!(
            "alpha = {:<5} q_{n_final}({t}) = {:.4e}  gap {:.2e}  {}{}",
            p.alpha,
            p.q_final,
            p.gap,
            if p.positive { "positive" } else { "near zero" },
            if p.slow_convergence {
                "  (boundary value, slow convergence)"
            } else {
                ""
            }
        ));
    }
    run.finish(true)
}

/// Rerun the manifest's command into `--out` and compare every output
/// digest with the recorded one.
fn replay(ctx: &Context, manifest_path: &Path) -> Result<RunOutcome> {
    let recorded = read_manifest(manifest_path)?;
    let mut args: Vec<OsString> = vec!["riccati-cascade".into()];
    args.extend(recorded.command.iter().map(OsString::from));
    args.extend(["--out".into(), ctx.g.out.clone().into_os_string()]);
    args.extend(["--workers".into(), ctx.workers.to_string().into()]);
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Format {
        path: manifest_path.to_path_buf(),
        reason: format!("recorded command does not parse: {e}"),
    })?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(Error::param("manifest", "a replay manifest cannot be replayed"));
    }
    let outcome = run(&cli)?;
    let fresh = read_manifest(&outcome.dir.join(MANIFEST_FILE))?;
    let mut report = Vec::new();
    let mut same = fresh.outputs.len() == recorded.outputs.len();
    for (name, digest) in &recorded.outputs {
        let ok = fresh.outputs.get(name) == Some(digest);
        same &= ok;
        report.push(format!("{} {name}", if ok { "identical" } else { "DIFFERENT" }));
    }
    Ok(RunOutcome {
        dir: outcome.dir,
        passed: same && outcome.passed,
        report,
    })
}
