//! Command implementations behind the `sph4r` binary.
//!
//! Each command writes its human-readable report to a caller-supplied
//! writer so it can be exercised directly from tests.

pub mod files;

use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use spherical_synth::de::{self, ConfigError, DifferentialEvolution, GenerationStats};
use spherical_synth::mechanism::Branch;
use spherical_synth::objective::{theta_differences, DesignVector, EvaluationReport, SynthesisProblem, TimingMode};
use thiserror::Error;

use files::{DesignFile, LinkageSummary, ProblemFile, ResultFile, RunInfo};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, io::Error),
    #[error("cannot parse {0}: {1}")]
    Parse(String, String),
    #[error("cannot read points from {0}: {1}")]
    Csv(String, String),
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Model(#[from] spherical_synth::Error),
    #[error("invalid optimizer settings: {0}")]
    Config(#[from] ConfigError),
}

impl CliError {
    pub(crate) fn io(path: &Path, e: io::Error) -> Self {
        CliError::Io(path.display().to_string(), e)
    }
}

/// Exit status for commands that complete without error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Infeasible,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Infeasible => 2,
        }
    }
}

/// Command-line values that take precedence over the problem file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub seeds: Option<usize>,
    pub population: Option<usize>,
    pub generations: Option<usize>,
    pub cr: Option<f64>,
    pub f_lo: Option<f64>,
    pub f_hi: Option<f64>,
    pub out: Option<PathBuf>,
}

pub struct SynthesisOutput {
    pub result: ResultFile,
    pub history: Vec<GenerationStats>,
    pub result_path: Option<PathBuf>,
    pub convergence_path: Option<PathBuf>,
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn out_err(e: io::Error) -> CliError {
    CliError::Io("<output>".into(), e)
}

pub fn cmd_synthesize(
    problem_path: &Path,
    overrides: &Overrides,
    out: &mut dyn Write,
) -> Result<SynthesisOutput, CliError> {
    let file = ProblemFile::load(problem_path)?;
    let problem = file.problem()?;
    let mut settings = file.de.clone();
    if let Some(v) = overrides.seed {
        settings.seed = v;
    }
    if let Some(v) = overrides.seeds {
        settings.seeds = v;
    }
    if let Some(v) = overrides.population {
        settings.population = v;
    }
    if let Some(v) = overrides.generations {
        settings.generations = v;
    }
    if let Some(v) = overrides.cr {
        settings.cr = v;
    }
    if let Some(v) = overrides.f_lo {
        settings.f_lo = v;
        settings.f = None;
    }
    if let Some(v) = overrides.f_hi {
        settings.f_hi = v;
        settings.f = None;
    }
    if settings.seeds == 0 {
        return Err(CliError::Validation("seeds must be at least 1".into()));
    }

    let mut best: Option<(de::Outcome, u64, f64)> = None;
    for seed in settings.seed..settings.seed + settings.seeds as u64 {
        let config = problem.de_config(&settings.config(seed));
        let start = Instant::now();
        let outcome = DifferentialEvolution::new(|x: &[f64]| problem.objective(x), config)?.run();
        let elapsed = start.elapsed().as_secs_f64();
        writeln!(out, "seed {seed}: f_ob = {:.6e} ({elapsed:.1} s)", outcome.best_fitness).map_err(out_err)?;
        if best.as_ref().is_none_or(|b| outcome.best_fitness < b.0.best_fitness) {
            best = Some((outcome, seed, elapsed));
        }
    }
    let (outcome, seed, runtime_seconds) = best.expect("at least one seed");
    let design = DesignVector::new(problem.mode(), outcome.best.clone())?;
    let run = RunInfo { seed, population: settings.population, generations: settings.generations, runtime_seconds };
    let (result, report) = ResultFile::build(&problem, &design, run)?;

    let result_path = overrides.out.clone().or_else(|| file.output.result.as_ref().map(|p| file.resolve(p)));
    let convergence_path = match (&overrides.out, &file.output.convergence) {
        (None, Some(p)) => Some(file.resolve(p)),
        _ => result_path.as_ref().map(|p| p.with_extension("convergence.csv")),
    };
    if let Some(p) = &result_path {
        write_file(p, result.to_toml().as_bytes())?;
    }
    if let Some(p) = &convergence_path {
        let mut buf = Vec::new();
        de::write_history_csv(&outcome.history, &mut buf).map_err(out_err)?;
        write_file(p, &buf)?;
    }
    writeln!(out, "best seed {seed}").map_err(out_err)?;
    print_summary(out, &result, &report, &problem)?;
    if let Some(p) = &result_path {
        writeln!(out, "result written to {}", p.display()).map_err(out_err)?;
    }
    Ok(SynthesisOutput { result, history: outcome.history, result_path, convergence_path })
}

fn fmt_angles(v: &[f64]) -> String {
    v.iter().map(|a| format!("{a:.6}")).collect::<Vec<_>>().join(", ")
}

fn print_summary(
    out: &mut dyn Write,
    result: &ResultFile,
    report: &EvaluationReport,
    problem: &SynthesisProblem,
) -> Result<(), CliError> {
    let d = &result.design;
    let l = &result.linkage;
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(out_err);
    w(out, format!("f_ob = {:.6e}", result.f_ob))?;
    w(out, format!("feasible = {}", report.feasible))?;
    if problem.mode() == TimingMode::Prescribed {
        w(out, format!("theta1 = {}", fmt_angles(&d.theta)))?;
    } else {
        w(out, format!("theta = {} input angles", d.theta.len()))?;
    }
    w(out, format!("beta = {:.6}  gamma = {:.6}", d.beta, d.gamma))?;
    w(out, format!("phi = {}", fmt_angles(&d.phi)))?;
    w(out, format!("eta = {}", fmt_angles(&d.eta)))?;
    w(out, format!("link lengths (input, coupler, output, fixed) = {}", fmt_angles(&l.link_lengths)))?;
    w(out, format!("grashof = {}  input fully rotates = {}", l.grashof, l.input_fully_rotates))?;
    w(out, format!("theta0 = {:.6}  phi0 = {:.6}", l.theta0, l.phi0))?;
    if problem.mode() == TimingMode::Free {
        let (_, mean) = theta_differences(&d.theta);
        let n = d.theta.len();
        w(out, format!("mean input step = {mean:.7}  |mean - 2pi/{n}| = {:.3e}", (mean - 2.0 * PI / n as f64).abs()))?;
    }
    Ok(())
}

/// Report produced by `verify`.
pub struct Verification {
    pub report: EvaluationReport,
    pub linkage: LinkageSummary,
    pub mean_step: Option<f64>,
    pub status: Status,
}

pub fn cmd_verify(design_path: &Path, problem_path: &Path, out: &mut dyn Write) -> Result<Verification, CliError> {
    let design = DesignFile::load(design_path)?;
    let problem = ProblemFile::load(problem_path)?.problem()?;
    verify_design(&design, &problem, out)
}

pub fn verify_design(
    design: &DesignVector,
    problem: &SynthesisProblem,
    out: &mut dyn Write,
) -> Result<Verification, CliError> {
    if design.mode != problem.mode() {
        return Err(CliError::Validation(format!(
            "design is {} timing but problem is {} timing",
            design.mode,
            problem.mode()
        )));
    }
    if design.values.len() != problem.dimension() {
        return Err(CliError::Validation(format!(
            "design has {} entries, problem needs {}",
            design.values.len(),
            problem.dimension()
        )));
    }
    let run = RunInfo { seed: 0, population: 0, generations: 0, runtime_seconds: 0.0 };
    let (result, report) = ResultFile::build(problem, design, run)?;
    print_summary(out, &result, &report, problem)?;
    writeln!(out, "point,squared_error,geodesic_error").map_err(out_err)?;
    for (k, (e, d)) in report.per_point_errors.iter().zip(&report.geodesic_errors).enumerate() {
        writeln!(out, "{},{e:.6e},{d:.6e}", k + 1).map_err(out_err)?;
    }
    let mean_step = (design.mode == TimingMode::Free).then(|| theta_differences(design.thetas()).1);
    let status = if report.feasible { Status::Success } else { Status::Infeasible };
    Ok(Verification { report, linkage: result.linkage, mean_step, status })
}

/// One sampled pose. Position fields are NaN when the linkage cannot be
/// assembled at `theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub theta: f64,
    pub generated: [f64; 3],
    pub input: [f64; 3],
    pub output: [f64; 3],
    pub feasible: bool,
}

/// Input angles `2πk/(samples-1)`, so the first and last rows coincide on a
/// full revolution; a single sample sits at `theta = 0`.
pub fn trace_design(design: &DesignVector, samples: usize) -> Result<Vec<TraceRow>, CliError> {
    if samples == 0 {
        return Err(CliError::Validation("samples must be at least 1".into()));
    }
    let mech = design.mechanism()?;
    let branch = mech.select_branch()?;
    Ok(trace_mechanism(&mech, branch, samples))
}

fn trace_mechanism(mech: &spherical_synth::SphericalFourBar, branch: Branch, samples: usize) -> Vec<TraceRow> {
    (0..samples)
        .map(|k| {
            let theta = if samples == 1 { 0.0 } else { 2.0 * PI * k as f64 / (samples - 1) as f64 };
            match mech.pose(theta, branch) {
                Ok(p) => TraceRow {
                    theta,
                    generated: p.generated.to_array(),
                    input: p.input.to_array(),
                    output: p.output.to_array(),
                    feasible: true,
                },
                Err(_) => TraceRow {
                    theta,
                    generated: [f64::NAN; 3],
                    input: [f64::NAN; 3],
                    output: [f64::NAN; 3],
                    feasible: false,
                },
            }
        })
        .collect()
}

pub fn write_trace_csv<W: Write>(rows: &[TraceRow], mut w: W) -> io::Result<()> {
    writeln!(w, "theta,gen_x,gen_y,gen_z,r2_x,r2_y,r2_z,r3_x,r3_y,r3_z,feasible")?;
    for r in rows {
        let [g, i, o] = [r.generated, r.input, r.output];
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.theta, g[0], g[1], g[2], i[0], i[1], i[2], o[0], o[1], o[2], r.feasible as u8
        )?;
    }
    Ok(())
}

pub fn cmd_trace(
    design_path: &Path,
    samples: usize,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Vec<TraceRow>, CliError> {
    let design = DesignFile::load(design_path)?;
    let rows = trace_design(&design, samples)?;
    match out_path {
        Some(p) => {
            let mut buf = Vec::new();
            write_trace_csv(&rows, &mut buf).map_err(out_err)?;
            write_file(p, &buf)?;
            let bad = rows.iter().filter(|r| !r.feasible).count();
            writeln!(out, "{} samples written to {} ({bad} infeasible)", rows.len(), p.display()).map_err(out_err)?;
        }
        None => write_trace_csv(&rows, out).map_err(out_err)?,
    }
    Ok(rows)
}

pub struct ThetaDiff {
    pub diffs: Vec<f64>,
    pub mean: f64,
    /// `|mean - 2π/n|`.
    pub deviation: f64,
}

pub fn theta_diff(design: &DesignVector) -> Result<ThetaDiff, CliError> {
    if design.mode != TimingMode::Free {
        return Err(CliError::Validation("input-angle differences need a free-timing design".into()));
    }
    let thetas = design.thetas();
    let (diffs, mean) = theta_differences(thetas);
    let deviation = (mean - 2.0 * PI / thetas.len() as f64).abs();
    Ok(ThetaDiff { diffs, mean, deviation })
}

pub fn cmd_thetadiff(design_path: &Path, out: &mut dyn Write) -> Result<ThetaDiff, CliError> {
    let td = theta_diff(&DesignFile::load(design_path)?)?;
    writeln!(out, "k,delta_theta").map_err(out_err)?;
    for (k, d) in td.diffs.iter().enumerate() {
        writeln!(out, "{},{d:.7}", k + 1).map_err(out_err)?;
    }
    let n = td.diffs.len() + 1;
    writeln!(out, "mean = {:.7}", td.mean).map_err(out_err)?;
    writeln!(out, "|mean - 2pi/{n}| = {:.3e}", td.deviation).map_err(out_err)?;
    Ok(td)
}
