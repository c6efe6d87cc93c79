//! Command-line front end and CSV emitters.
//!
//! Every subcommand writes a CSV with a header row. Numbers use the
//! shortest decimal form that round-trips, so identical flags give byte-identical
//! files. `--out` may be omitted for single-run commands (CSV goes to
//! stdout); a command that expands to several runs needs `--out`, and run
//! `k` (1-based) is written to `<stem>_<k>.<ext>`.
//!
//! Exit codes: 0 success, 1 failed verification or an output invariant
//! violation, 2 usage, 3 I/O, 4 degenerate parameters.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::cavity_control::{fig4_sweep, CavityError, CavityParams, SweepPoint};
use crate::linalg::C64;
use crate::qubit_protocol::{
    evolve_n, survival_probability, zeno_survival, OneExcitationState, ProtocolError,
    ProtocolParams, Schedule, TrajectoryPoint, ZenoMode,
};
use crate::so3::{sphere_trajectory, RealVec3, So3Error, SphereTrajectory};
use crate::verify::{run_all, CheckOutcome, DEFAULT_SEED};

const OUTPUT_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "ancilla",
    version,
    about = "Repeated-interaction control of quantum states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bloch-sphere trajectory of the freezing schedule, one file per (phi, n).
    Sphere(SphereArgs),
    /// Survival probability at the end of every step.
    Survival(ScheduleArgs),
    /// Densely sampled survival probability and its time derivative.
    Rate(RateArgs),
    /// Freezing survival vs measurement-induced Zeno survival over N.
    Zeno(ZenoArgs),
    /// M1-B concurrence after controlled evolution, swept over N.
    Entanglement(EntanglementArgs),
    /// Run the cross-check suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SphereArgs {
    /// Control angle(s) in radians, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub phi: Vec<f64>,
    /// Step count(s), comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    /// Initial unit vector as x,y,z.
    #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [0.0, 0.0, 1.0], allow_negative_numbers = true)]
    pub initial: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// Control angle phi = G_ab t_ab in radians.
    #[arg(long, default_value_t = PI / 10.0)]
    pub phi: f64,
    /// Number of steps.
    #[arg(long, default_value_t = 10)]
    pub n: u64,
    /// Exchange angle per step; defaults to pi/(2n).
    #[arg(long)]
    pub theta: Option<f64>,
    /// b-c coupling; time is reported in units of 1/coupling.
    #[arg(long, default_value_t = 1.0)]
    pub g_bc: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g_ab: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Samples per segment, endpoints included.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ZenoArgs {
    #[arg(long, default_value_t = 100)]
    pub n_max: u64,
    #[arg(long, default_value_t = PI / 2.0)]
    pub phi: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EntanglementArgs {
    /// Detuning omega1 - omega2 in 1/s.
    #[arg(long, default_value_t = 8.0e5, allow_negative_numbers = true)]
    pub delta: f64,
    /// Atom-mode coupling in 1/s.
    #[arg(long, default_value_t = 1.5e4)]
    pub g: f64,
    /// Stage-2 pulse area g*t2 in radians.
    #[arg(long, default_value_t = PI / 2.0)]
    pub gt2: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 5, 10, 20, 50])]
    pub n_values: Vec<u64>,
    /// Amplitude of |1_1, g_b> (real).
    #[arg(long, default_value_t = FRAC_1_SQRT_2, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Amplitude of |0_1, e_b> (real).
    #[arg(long, default_value_t = FRAC_1_SQRT_2, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("output check failed: {0}")]
    Invariant(String),
    #[error("{0} verification check(s) failed")]
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) | CliError::Invariant(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Degenerate(_) => 4,
        }
    }
}

impl From<So3Error> for CliError {
    fn from(e: So3Error) -> Self {
        match e {
            So3Error::DegenerateRotation { .. } | So3Error::TrivialControl(_) => {
                CliError::Degenerate(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CavityError> for CliError {
    fn from(e: CavityError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Shortest round-trip form used in every CSV cell, switching to exponent
/// notation for very small or large magnitudes; `-0` is written as `0`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let s = format!("{x:?}");
    match s.strip_suffix(".0") {
        Some(int) => int.to_string(),
        None => s,
    }
}

fn check_probability(p: f64, what: &str) -> Result<(), CliError> {
    if !(p.is_finite() && (-OUTPUT_TOL..=1.0 + OUTPUT_TOL).contains(&p)) {
        return Err(CliError::Invariant(format!(
            "{what} = {p} is not a probability"
        )));
    }
    Ok(())
}

pub fn sphere_csv(traj: &SphereTrajectory) -> Result<String, CliError> {
    let mut s = String::from("step,x,y,z\n");
    for (k, p) in traj.points.iter().enumerate() {
        if (p.norm() - 1.0).abs() > OUTPUT_TOL {
            return Err(CliError::Invariant(format!(
                "sphere point {k} has norm {}",
                p.norm()
            )));
        }
        writeln!(s, "{k},{},{},{}", fmt_num(p.x), fmt_num(p.y), fmt_num(p.z)).unwrap();
    }
    let a = traj.axis;
    writeln!(
        s,
        "# axis,{},{},{}",
        fmt_num(a.x),
        fmt_num(a.y),
        fmt_num(a.z)
    )
    .unwrap();
    Ok(s)
}

pub fn trajectory_csv(points: &[TrajectoryPoint]) -> Result<String, CliError> {
    let mut s = String::from("t,p001,dp001_dt,segment,step\n");
    for p in points {
        check_probability(p.p001, "p001")?;
        writeln!(
            s,
            "{},{},{},{},{}",
            fmt_num(p.t),
            fmt_num(p.p001),
            fmt_num(p.dp001_dt),
            p.segment,
            p.step
        )
        .unwrap();
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoRow {
    pub n: u64,
    pub p001: f64,
    pub zeno_single: f64,
    pub zeno_squared: f64,
}

/// Freezing survival at `θ = π/(2n)` and both Zeno baselines for
/// `n = 1..=n_max`.
pub fn zeno_rows(n_max: u64, phi: f64) -> Result<Vec<ZenoRow>, CliError> {
    if n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    let init = OneExcitationState::EXCITED_C;
    (1..=n_max)
        .map(|n| {
            let params = ProtocolParams::freezing(n, phi)?;
            Ok(ZenoRow {
                n,
                p001: survival_probability(&evolve_n(&params, &init), &init),
                zeno_single: zeno_survival(n, ZenoMode::Single),
                zeno_squared: zeno_survival(n, ZenoMode::Squared),
            })
        })
        .collect()
}

pub fn zeno_csv(rows: &[ZenoRow]) -> Result<String, CliError> {
    let mut s = String::from("n,p001,zeno_paper,zeno_squared\n");
    for r in rows {
        check_probability(r.p001, "p001")?;
        check_probability(r.zeno_single, "zeno_paper")?;
        check_probability(r.zeno_squared, "zeno_squared")?;
        writeln!(
            s,
            "{},{},{},{}",
            r.n,
            fmt_num(r.p001),
            fmt_num(r.zeno_single),
            fmt_num(r.zeno_squared)
        )
        .unwrap();
    }
    Ok(s)
}

pub fn entanglement_csv(points: &[SweepPoint]) -> Result<String, CliError> {
    let mut s = String::from("n,t1,concurrence\n");
    for p in points {
        check_probability(p.concurrence, "concurrence")?;
        writeln!(s, "{},{},{}", p.n, fmt_num(p.t1), fmt_num(p.concurrence)).unwrap();
    }
    Ok(s)
}

fn schedule_params(a: &ScheduleArgs) -> Result<ProtocolParams, CliError> {
    let theta = a.theta.unwrap_or(PI / (2.0 * a.n.max(1) as f64));
    Ok(ProtocolParams::with_couplings(
        a.n, theta, a.phi, a.g_bc, a.g_ab,
    )?)
}

/// One row per step boundary, `t = k·(t_bc + t_ab)` for `k = 0..=N`.
pub fn stroboscopic_points(params: &ProtocolParams) -> Result<Vec<TrajectoryPoint>, CliError> {
    let schedule = Schedule::new(params, &OneExcitationState::EXCITED_C)?;
    let step_len = params.step_duration();
    Ok((0..=params.n_steps)
        .map(|k| {
            let t = k as f64 * step_len;
            let (step, segment, tau) = schedule.locate(t);
            let (p001, dp001_dt) = schedule.evaluate(step, segment, tau);
            TrajectoryPoint {
                t,
                p001,
                dp001_dt,
                segment,
                step,
            }
        })
        .collect())
}

/// `path` for a single run, `<stem>_<k>.<ext>` for run `k` of several.
pub fn run_path(base: &Path, k: usize, runs: usize) -> PathBuf {
    if runs == 1 {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{k}"),
    };
    base.with_file_name(name)
}

fn emit(out: Option<&Path>, csv: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, csv).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(csv.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn run_sphere(a: &SphereArgs) -> Result<(), CliError> {
    let initial = RealVec3::new(a.initial[0], a.initial[1], a.initial[2]);
    let runs: Vec<(f64, u64)> = a
        .phi
        .iter()
        .flat_map(|&phi| a.n.iter().map(move |&n| (phi, n)))
        .collect();
    if runs.iter().any(|&(_, n)| n == 0) {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if runs.len() > 1 && a.out.is_none() {
        return Err(CliError::Usage(format!(
            "{} runs requested; --out is required to name the files",
            runs.len()
        )));
    }
    // Compute everything before writing anything.
    let csvs = runs
        .iter()
        .map(|&(phi, n)| sphere_csv(&sphere_trajectory(phi, n, initial)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    for (k, ((phi, n), csv)) in runs.iter().zip(&csvs).enumerate() {
        match &a.out {
            Some(base) => {
                let path = run_path(base, k + 1, runs.len());
                emit(Some(&path), csv)?;
                eprintln!("phi={phi} n={n} -> {}", path.display());
            }
            None => emit(None, csv)?,
        }
    }
    Ok(())
}

fn run_entanglement(a: &EntanglementArgs) -> Result<(), CliError> {
    if !(a.g.is_finite() && a.g > 0.0) {
        return Err(CliError::Usage(format!(
            "--g must be positive, got {}",
            a.g
        )));
    }
    if a.n_values.contains(&0) {
        return Err(CliError::Usage(
            "--n-values entries must be at least 1".into(),
        ));
    }
    let base = CavityParams::swap_schedule(
        a.g,
        a.delta,
        a.gt2 / a.g,
        1,
        C64::new(a.alpha, 0.0),
        C64::new(a.beta, 0.0),
    )?;
    emit(
        a.out.as_deref(),
        &entanglement_csv(&fig4_sweep(&base, &a.n_values)?)?,
    )
}

fn report(outcomes: &[CheckOutcome]) -> String {
    let mut s = String::new();
    for c in outcomes {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        writeln!(
            s,
            "{tag} {} (worst {:e}, tolerance {:e})",
            c.name, c.worst, c.tolerance
        )
        .unwrap();
    }
    s
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Sphere(a) => run_sphere(a),
        Command::Survival(a) => {
            let points = stroboscopic_points(&schedule_params(a)?)?;
            emit(a.out.as_deref(), &trajectory_csv(&points)?)
        }
        Command::Rate(a) => {
            if a.samples < 2 {
                return Err(CliError::Usage("--samples must be at least 2".into()));
            }
            let params = schedule_params(&a.schedule)?;
            let points = Schedule::new(&params, &OneExcitationState::EXCITED_C)?.sample(a.samples);
            emit(a.schedule.out.as_deref(), &trajectory_csv(&points)?)
        }
        Command::Zeno(a) => emit(a.out.as_deref(), &zeno_csv(&zeno_rows(a.n_max, a.phi)?)?),
        Command::Entanglement(a) => run_entanglement(a),
        Command::Verify(a) => {
            let outcomes = run_all(a.seed);
            print!("{}", report(&outcomes));
            let failed = outcomes.iter().filter(|c| !c.passed()).count();
            if failed > 0 {
                Err(CliError::VerifyFailed(failed))
            } else {
                Ok(())
            }
        }
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("ancilla").chain(args.iter().copied()))
    }

    #[test]
    fn parses_sphere_example() {
        let cli = parse(&[
            "sphere",
            "--phi",
            "0.19634954",
            "--n",
            "20",
            "--out",
            "fig1.csv",
        ])
        .unwrap();
        let Command::Sphere(a) = cli.command else {
            panic!("wrong subcommand")
        };
        assert_eq!(a.phi, vec![0.19634954]);
        assert_eq!(a.n, vec![20]);
        assert_eq!(a.initial, vec![0.0, 0.0, 1.0]);
        assert_eq!(a.out, Some(PathBuf::from("fig1.csv")));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn parses_lists_and_zeno() {
        let cli = parse(&["sphere", "--phi", "0.1,0.2,0.4", "--n", "20"]).unwrap();
        let Command::Sphere(a) = cli.command else {
            panic!()
        };
        assert_eq!(a.phi.len(), 3);
        let cli = parse(&["zeno", "--n-max", "100", "--phi", "1.5707963"]).unwrap();
        let Command::Zeno(a) = cli.command else {
            panic!()
        };
        assert_eq!((a.n_max, a.phi), (100, 1.5707963));
    }

    #[test]
    fn rejects_bad_usage() {
        assert!(parse(&["--bogus"]).is_err());
        assert!(parse(&["sphere", "--n", "20"]).is_err());
        assert!(parse(&["zeno", "--n-max", "ten"]).is_err());
        assert_eq!(main_with_args(["ancilla", "--bogus"]), 2);
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(0.1), "0.1");
        assert_eq!(fmt_num(3.5e-33), "3.5e-33");
        assert_eq!(fmt_num(-2.0), "-2");
        let x = 0.1 + 0.2;
        assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn run_paths() {
        let base = Path::new("out/fig1.csv");
        assert_eq!(run_path(base, 1, 1), PathBuf::from("out/fig1.csv"));
        assert_eq!(run_path(base, 2, 3), PathBuf::from("out/fig1_2.csv"));
        assert_eq!(run_path(Path::new("x"), 3, 3), PathBuf::from("x_3"));
    }

    #[test]
    fn stroboscopic_rows_cover_every_step_boundary() {
        let params = ProtocolParams::freezing(10, PI / 10.0).unwrap();
        let pts = stroboscopic_points(&params).unwrap();
        assert_eq!(pts.len(), 11);
        assert_eq!(pts[0].p001, 1.0);
        assert_eq!((pts[0].step, pts[10].step), (1, 10));
        let init = OneExcitationState::EXCITED_C;
        let end = survival_probability(&evolve_n(&params, &init), &init);
        assert!((pts[10].p001 - end).abs() < 1e-12);
    }

    #[test]
    fn zeno_first_row_is_zero() {
        let rows = zeno_rows(3, PI / 2.0).unwrap();
        assert!(rows[0].p001 < 1e-12 && rows[0].zeno_single < 1e-12);
    }

    #[test]
    fn sphere_csv_shape() {
        let traj = sphere_trajectory(PI / 16.0, 20, RealVec3::E3).unwrap();
        let csv = sphere_csv(&traj).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "step,x,y,z");
        assert_eq!(lines[1], "0,0,0,1");
        assert_eq!(lines.len(), 23);
        assert!(lines[22].starts_with("# axis,"));
    }

    #[test]
    fn invariant_guard_rejects_bad_probability() {
        let bad = [SweepPoint {
            n: 1,
            t1: 1.0,
            concurrence: 1.5,
        }];
        assert!(matches!(
            entanglement_csv(&bad),
            Err(CliError::Invariant(_))
        ));
    }
}
