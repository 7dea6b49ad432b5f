//! Command-line front end: argument parsing, command implementations and exit codes.
//!
//! Exit codes:
//!
//! | code | meaning                                                  |
//! |------|----------------------------------------------------------|
//! | 0    | success                                                  |
//! | 1    | `verify` found at least one failing invariant            |
//! | 2    | `partner`: the constant gives a singular partner (no `--force`) |
//! | 3    | numerical failure (non-convergence, unresolved limits, …) |
//! | 64   | usage error (bad flags, bad config, unsupported model)   |
//! | 74   | I/O error while reading config or writing output         |

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{FamilyChoice, ModelKind, OutputFormat, RunConfig};
use crate::grid::{GridSeries, GridSpec};
use crate::jordan::{lambda_wronskian, SolutionFamily};
use crate::models::{
    box_eigenfunction, box_eigenvalue, BoxCosine, BoxSine, EdhoFamily, RadialOscillator,
};
use crate::quad::{LimitControl, QuadControl};
use crate::specfun::SeriesControl;
use crate::susy::{RaySet, RegularityCheck, SusyRepresentation, SusyTransform};
use crate::verify::{run_suite, VerifyOptions};
use crate::wronskid;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_IRREGULAR: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "confluent", version, about = "Confluent SUSY partners, Jordan chains and Wronskian integrals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the partner potential and transformed states on a grid.
    Partner(RunArgs),
    /// Run the invariant suite and report measured errors.
    Verify(RunArgs),
    /// Modified norm of a bound state from Wronskian limits and by quadrature.
    Norm(RunArgs),
    /// Integral of u² between --x0 and --x, by the Wronskian identity and by quadrature.
    Integrate(RunArgs),
    /// Endpoint limits and the admissible ranges of K and ω₀.
    Regularity(RunArgs),
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Config file with `key = value` lines; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// box | radial_osc | edho
    #[arg(long)]
    pub model: Option<String>,
    /// Angular momentum for radial_osc.
    #[arg(long)]
    pub ell: Option<String>,
    /// Factorization energy; accepts forms such as 4pi^2.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Differential-form constant K.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Integral-form constant ω₀ (needs --x0).
    #[arg(long, allow_hyphen_values = true)]
    pub omega0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// x_min,x_max,n_points
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Comma-separated state energies.
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<String>,
    /// csv | json
    #[arg(long)]
    pub format: Option<String>,
    /// Output path prefix.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Write output even when the partner potential is singular.
    #[arg(long)]
    pub force: bool,
    /// State index for `norm`.
    #[arg(long)]
    pub n: Option<String>,
    /// u1 | u2, for `integrate`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub tol_quad: Option<String>,
    #[arg(long)]
    pub tol_residual: Option<String>,
    #[arg(long)]
    pub tol_series: Option<String>,
    /// Replace every tolerance of `verify`.
    #[arg(long)]
    pub tol_check: Option<String>,
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

#[derive(Debug)]
struct IoFailure(String);

impl std::fmt::Display for IoFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for IoFailure {}

fn io_context<T, E: std::fmt::Display>(r: std::result::Result<T, E>, what: &str) -> anyhow::Result<T> {
    r.map_err(|e| anyhow::Error::new(IoFailure(format!("{what}: {e}"))))
}

impl RunArgs {
    /// Config file (if any), then flags.
    pub fn to_config(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = io_context(fs::read_to_string(path), &format!("reading {}", path.display()))?;
            cfg.apply_text(&text).map_err(|e| usage(e.to_string()))?;
        }
        let flags: [(&str, &Option<String>); 19] = [
            ("ell", &self.ell),
            ("model", &self.model),
            ("lambda", &self.lambda),
            ("k", &self.k),
            ("omega0", &self.omega0),
            ("x0", &self.x0),
            ("x", &self.x),
            ("grid", &self.grid),
            ("eps", &self.eps),
            ("format", &self.format),
            ("out", &self.out),
            ("seed", &self.seed),
            ("n", &self.n),
            ("family", &self.family),
            ("tol_quad", &self.tol_quad),
            ("tol_residual", &self.tol_residual),
            ("tol_series", &self.tol_series),
            ("tol_check", &self.tol_check),
            ("ell", &self.ell),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v).map_err(|e| usage(format!("--{key}: {e}")))?;
            }
        }
        if self.force {
            cfg.force = true;
        }
        Ok(cfg)
    }
}

/// Parse `args` (including the program name) and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> i32 {
    if e.downcast_ref::<UsageError>().is_some() {
        EXIT_USAGE
    } else if e.downcast_ref::<IoFailure>().is_some() {
        EXIT_IO
    } else {
        EXIT_NUMERICAL
    }
}

fn dispatch(command: &Command, out: &mut dyn Write) -> anyhow::Result<i32> {
    match command {
        Command::Partner(a) => cmd_partner(&a.to_config()?, out),
        Command::Verify(a) => cmd_verify(&a.to_config()?, out),
        Command::Norm(a) => cmd_norm(&a.to_config()?, out),
        Command::Integrate(a) => cmd_integrate(&a.to_config()?, out),
        Command::Regularity(a) => cmd_regularity(&a.to_config()?, out),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn series_control(cfg: &RunConfig) -> anyhow::Result<SeriesControl> {
    match cfg.tolerances.series {
        Some(t) => SeriesControl::new(t, SeriesControl::default().max_terms).map_err(|e| usage(e.to_string())),
        None => Ok(SeriesControl::default()),
    }
}

fn quad_control(cfg: &RunConfig) -> QuadControl {
    cfg.tolerances.quad.map_or_else(QuadControl::default, QuadControl::with_tol)
}

fn radial(cfg: &RunConfig, ell: u32) -> anyhow::Result<RadialOscillator> {
    Ok(RadialOscillator {
        ell,
        series: series_control(cfg)?,
    })
}

fn representation(cfg: &RunConfig) -> anyhow::Result<SusyRepresentation> {
    match (cfg.k, cfg.omega0) {
        (Some(_), Some(_)) => Err(usage("give either --k or --omega0, not both")),
        (None, Some(omega0)) => {
            let x0 = cfg.x0.ok_or_else(|| usage("--omega0 needs --x0"))?;
            Ok(SusyRepresentation::Integral { x0, omega0 })
        }
        (Some(k), None) => Ok(SusyRepresentation::Differential { k }),
        (None, None) => Err(usage("give --k (differential form) or --omega0 with --x0 (integral form)")),
    }
}

fn grid(cfg: &RunConfig) -> anyhow::Result<GridSpec> {
    cfg.grid_checked().map_err(|e| usage(e.to_string()))
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    io_context(fs::write(path, text), &format!("writing {}", path.display()))
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value).context("serializing report")?;
    io_context(writeln!(out, "{text}"), "writing report")
}

fn emit(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> anyhow::Result<()> {
    io_context(out.write_fmt(line).and_then(|_| out.write_all(b"\n")), "writing report")
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

// ---------------------------------------------------------------------------
// partner
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct PartnerSidecar {
    command: &'static str,
    model: ModelKind,
    lambda: f64,
    representation: SusyRepresentation,
    grid: GridSpec,
    epsilons: Vec<f64>,
    admissible_k: Option<RaySet>,
    admissible_omega0: Option<RaySet>,
    regularity: RegularityCheck,
    forced: bool,
    max_state_residuals: Vec<Option<f64>>,
    max_residual: Option<f64>,
    potential_file: String,
    states_file: String,
}

fn default_epsilons(model: ModelKind) -> Vec<f64> {
    match model {
        ModelKind::Box => (1..=3).map(box_eigenvalue).collect(),
        ModelKind::RadialOsc { ell } => (0..3).map(|n| RadialOscillator::new(ell).eigenvalue(n)).collect(),
        ModelKind::Edho => Vec::new(),
    }
}

/// `partner`: write `<out>_potential.{csv,json}`, `<out>_states.{csv,json}` and the
/// `<out>.json` sidecar.
pub fn cmd_partner(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<i32> {
    let model = cfg.model_or_box();
    let lambda = cfg.lambda_or_default();
    let rep = representation(cfg)?;
    let grid = grid(cfg)?;
    match model {
        ModelKind::Box => {
            let psi = box_eigenfunction();
            partner_with(cfg, model, BoxSine::unit(), &psi, lambda, rep, grid, out)
        }
        ModelKind::RadialOsc { ell } => {
            let m = radial(cfg, ell)?;
            let psi = m.eigenfunction();
            partner_with(cfg, model, m.u1(), &psi, lambda, rep, grid, out)
        }
        ModelKind::Edho => Err(usage(
            "the energy-dependent oscillator supports only norm and integrate",
        )),
    }
}

#[allow(clippy::too_many_arguments)]
fn partner_with<F: SolutionFamily, S: SolutionFamily>(
    cfg: &RunConfig,
    model: ModelKind,
    family: F,
    psi: &S,
    lambda: f64,
    rep: SusyRepresentation,
    grid: GridSpec,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    let transform = SusyTransform::new(family, lambda, rep)?.with_quad(quad_control(cfg));
    let check = transform.check_regular(&grid);
    if !check.regular && !cfg.force {
        let at = check
            .zero
            .map_or_else(|| "unlocated".to_string(), |z| format!("x = {z:.12}"));
        emit(
            out,
            format_args!(
                "irregular: W_{{u,v}} vanishes at {at} (W_left = {}, W_right = {}); use --force to write anyway",
                check.w_left, check.w_right
            ),
        )?;
        return Ok(EXIT_IRREGULAR);
    }
    let report = transform.regularity_range().ok();
    let epsilons = cfg.epsilons.clone().unwrap_or_else(|| default_epsilons(model));

    let mut potential = GridSeries::new(1);
    let mut states = GridSeries::new(epsilons.len());
    let mut residuals: Vec<Option<f64>> = vec![None; epsilons.len()];
    let last = grid.n_points - 1;
    for (i, x) in grid.points().enumerate() {
        let v = match transform.partner_potential(x) {
            Ok(v) => v,
            Err(e) if cfg.force => {
                let _ = e;
                f64::NAN
            }
            Err(e) => return Err(e.into()),
        };
        potential.push(x, &[v])?;
        let mut row = Vec::with_capacity(epsilons.len());
        for (j, &eps) in epsilons.iter().enumerate() {
            let phi = match transform.transform_state(psi, eps, x) {
                Ok(p) => p,
                Err(_) if cfg.force => f64::NAN,
                Err(e) => return Err(e.into()),
            };
            row.push(phi);
            if i != 0 && i != last {
                if let Ok(r) = transform.state_residual(psi, eps, x) {
                    residuals[j] = Some(residuals[j].map_or(r, |m: f64| m.max(r)));
                }
            }
        }
        states.push(x, &row)?;
    }

    let prefix = cfg.out.clone().unwrap_or_else(|| PathBuf::from("partner"));
    let format = cfg.format.unwrap_or(OutputFormat::Csv);
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let potential_path = with_suffix(&prefix, &format!("_potential.{ext}"));
    let states_path = with_suffix(&prefix, &format!("_states.{ext}"));
    let (pot_text, states_text) = match format {
        OutputFormat::Csv => (potential.to_csv(), states.to_csv()),
        OutputFormat::Json => (potential.to_json(), states.to_json()),
    };
    write_text(&potential_path, &pot_text)?;
    write_text(&states_path, &states_text)?;

    let max_residual = residuals.iter().flatten().copied().reduce(f64::max);
    let sidecar = PartnerSidecar {
        command: "partner",
        model,
        lambda,
        representation: rep,
        grid,
        epsilons,
        admissible_k: report.map(|r| r.admissible_k),
        admissible_omega0: report.and_then(|r| r.admissible_omega0),
        regularity: check,
        forced: cfg.force && !check.regular,
        max_state_residuals: residuals,
        max_residual,
        potential_file: potential_path.display().to_string(),
        states_file: states_path.display().to_string(),
    };
    let sidecar_path = with_suffix(&prefix, ".json");
    write_text(
        &sidecar_path,
        &serde_json::to_string_pretty(&sidecar).context("serializing sidecar")?,
    )?;
    emit(
        out,
        format_args!(
            "wrote {}, {}, {} (max state residual {})",
            potential_path.display(),
            states_path.display(),
            sidecar_path.display(),
            max_residual.map_or_else(|| "n/a".to_string(), |r| format!("{r:.3e}"))
        ),
    )?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// `verify`: one line per invariant (or a JSON report); exit 1 on any failure.
pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<i32> {
    let report = run_suite(&VerifyOptions {
        model: cfg.model,
        seed: cfg.seed,
        tolerance_override: cfg.tolerances.check,
    });
    if cfg.format == Some(OutputFormat::Json) {
        write_json(out, &report)?;
    } else {
        for c in &report.checks {
            emit(
                out,
                format_args!(
                    "{} {:<44} error={:.3e} tol={:.1e}{}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.error,
                    c.tolerance,
                    c.detail.as_deref().map_or(String::new(), |d| format!(" ({d})"))
                ),
            )?;
        }
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        emit(
            out,
            format_args!("seed {}: {} checks, {} failed", report.seed, report.checks.len(), failed),
        )?;
    }
    Ok(if report.all_passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

// ---------------------------------------------------------------------------
// norm and integrate
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct NormReport {
    model: ModelKind,
    n: u32,
    lambda: f64,
    wronskian: f64,
    left_limit: Option<f64>,
    right_limit: Option<f64>,
    quadrature: f64,
    difference: f64,
    /// `1/√N`, the amplitude that normalizes the state (when `N > 0`).
    amplitude: Option<f64>,
}

/// `norm`: modified norm of the `n`-th state with unit amplitude.
pub fn cmd_norm(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<i32> {
    let model = cfg.model_or_box();
    let limits = LimitControl::default();
    let quad = cfg.tolerances.quad.map_or_else(|| QuadControl::with_tol(1e-12), QuadControl::with_tol);
    let (n, lambda, w, q) = match model {
        ModelKind::Box => {
            let n = cfg.n.unwrap_or(1);
            if n == 0 {
                return Err(usage("box states start at n = 1"));
            }
            let lambda = box_eigenvalue(n);
            let f = BoxSine::unit();
            (n, lambda, wronskid::norm_energy(&f, lambda, &limits)?, wronskid::norm_quadrature(&f, lambda, &quad, &limits)?)
        }
        ModelKind::RadialOsc { ell } => {
            let m = radial(cfg, ell)?;
            let n = cfg.n.unwrap_or(0);
            let lambda = m.eigenvalue(n);
            let f = m.eigenfunction();
            (n, lambda, wronskid::norm_energy(&f, lambda, &limits)?, wronskid::norm_quadrature(&f, lambda, &quad, &limits)?)
        }
        ModelKind::Edho => {
            let n = cfg.n.unwrap_or(0);
            let (f, lambda) = crate::models::edho_state(n);
            (n, lambda, wronskid::norm_energy(&f, lambda, &limits)?, wronskid::norm_quadrature(&f, lambda, &quad, &limits)?)
        }
    };
    let report = NormReport {
        model,
        n,
        lambda,
        wronskian: w.value,
        left_limit: w.left_limit,
        right_limit: w.right_limit,
        quadrature: q.value,
        difference: w.value - q.value,
        amplitude: (w.value > 0.0).then(|| 1.0 / w.value.sqrt()),
    };
    if cfg.format == Some(OutputFormat::Json) {
        write_json(out, &report)?;
    } else {
        emit(out, format_args!("model       {}", model.label()))?;
        emit(out, format_args!("n           {n}"))?;
        emit(out, format_args!("lambda      {lambda:.17e}"))?;
        emit(out, format_args!("wronskian   {:.17e}", report.wronskian))?;
        emit(out, format_args!("left_limit  {:.17e}", report.left_limit.unwrap_or(f64::NAN)))?;
        emit(out, format_args!("right_limit {:.17e}", report.right_limit.unwrap_or(f64::NAN)))?;
        emit(out, format_args!("quadrature  {:.17e}", report.quadrature))?;
        emit(out, format_args!("difference  {:.3e}", report.difference))?;
        if let Some(a) = report.amplitude {
            emit(out, format_args!("amplitude   {a:.17e}"))?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct IntegrateReport {
    model: ModelKind,
    family: FamilyChoice,
    lambda: f64,
    x0: f64,
    x: f64,
    wronskian: f64,
    quadrature: f64,
    difference: f64,
}

/// `integrate`: `∫_{x₀}^x (1 − V_λ)u²` by the Wronskian identity and by quadrature.
pub fn cmd_integrate(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<i32> {
    let model = cfg.model_or_box();
    let lambda = cfg.lambda_or_default();
    let x = cfg.x.ok_or_else(|| usage("integrate needs --x"))?;
    let quad = cfg.tolerances.quad.map_or_else(|| QuadControl::with_tol(1e-12), QuadControl::with_tol);
    let (x0, w, q) = match (model, cfg.family) {
        (ModelKind::Box, FamilyChoice::U1) => integrate_pair(&BoxSine::unit(), cfg.x0.unwrap_or(0.0), x, lambda, &quad)?,
        (ModelKind::Box, FamilyChoice::U2) => integrate_pair(&BoxCosine, cfg.x0.unwrap_or(0.0), x, lambda, &quad)?,
        (ModelKind::RadialOsc { ell }, choice) => {
            let m = radial(cfg, ell)?;
            let x0 = cfg.x0.ok_or_else(|| usage("radial_osc integrate needs --x0 > 0"))?;
            match choice {
                FamilyChoice::U1 => integrate_pair(&m.u1(), x0, x, lambda, &quad)?,
                FamilyChoice::U2 => integrate_pair(&m.u2(), x0, x, lambda, &quad)?,
            }
        }
        (ModelKind::Edho, FamilyChoice::U1) => {
            integrate_pair(&EdhoFamily::default(), cfg.x0.unwrap_or(0.0), x, lambda, &quad)?
        }
        (ModelKind::Edho, FamilyChoice::U2) => {
            return Err(usage("the energy-dependent oscillator has no u2 family"))
        }
    };
    let report = IntegrateReport {
        model,
        family: cfg.family,
        lambda,
        x0,
        x,
        wronskian: w,
        quadrature: q,
        difference: w - q,
    };
    if cfg.format == Some(OutputFormat::Json) {
        write_json(out, &report)?;
    } else {
        emit(out, format_args!("wronskian   {w:.17e}"))?;
        emit(out, format_args!("quadrature  {q:.17e}"))?;
        emit(out, format_args!("difference  {:.3e}", w - q))?;
    }
    Ok(EXIT_OK)
}

fn integrate_pair<F: SolutionFamily>(
    f: &F,
    x0: f64,
    x: f64,
    lambda: f64,
    quad: &QuadControl,
) -> anyhow::Result<(f64, f64, f64)> {
    let w = wronskid::integrate_u2_energy(f, x0, x, lambda)?;
    let q = wronskid::quadrature_u2_energy(f, x0, x, lambda, quad)?;
    Ok((x0, w, q))
}

// ---------------------------------------------------------------------------
// regularity
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct RegularityOutput {
    model: ModelKind,
    lambda: f64,
    report: crate::susy::RegularityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    representation: Option<SusyRepresentation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<RegularityCheck>,
}

/// `regularity`: endpoint limits of `W_{u,u_λ}`, admissible rays and, when a
/// constant is given, the sign check on the grid.
pub fn cmd_regularity(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<i32> {
    let model = cfg.model_or_box();
    let lambda = cfg.lambda_or_default();
    let rep = match representation(cfg) {
        Ok(r) => Some(r),
        Err(_) if cfg.k.is_none() && cfg.omega0.is_none() => None,
        Err(e) => return Err(e),
    };
    let grid = grid(cfg)?;
    match model {
        ModelKind::Box => regularity_with(cfg, model, BoxSine::unit(), lambda, rep, grid, out),
        ModelKind::RadialOsc { ell } => {
            let m = radial(cfg, ell)?;
            regularity_with(cfg, model, m.u1(), lambda, rep, grid, out)
        }
        ModelKind::Edho => Err(usage("regularity applies to energy-independent models only")),
    }
}

fn regularity_with<F: SolutionFamily>(
    cfg: &RunConfig,
    model: ModelKind,
    family: F,
    lambda: f64,
    rep: Option<SusyRepresentation>,
    grid: GridSpec,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    let transform = SusyTransform::new(
        family,
        lambda,
        rep.unwrap_or(SusyRepresentation::Differential { k: 0.0 }),
    )?
    .with_quad(quad_control(cfg));
    let report = transform.regularity_range()?;
    let check = rep.map(|_| transform.check_regular(&grid));
    let output = RegularityOutput {
        model,
        lambda,
        report,
        representation: rep,
        check,
    };
    if cfg.format == Some(OutputFormat::Json) {
        write_json(out, &output)?;
    } else {
        emit(out, format_args!("w_left        {}", report.w_left))?;
        emit(out, format_args!("w_right       {}", report.w_right))?;
        emit(out, format_args!("admissible_k  {}", report.admissible_k))?;
        if let Some(o) = report.admissible_omega0 {
            emit(out, format_args!("admissible_w0 {o}"))?;
        }
        emit(out, format_args!("boundary      {:?}", report.boundary_class))?;
        if let Some(c) = check {
            emit(out, format_args!("regular       {}", c.regular))?;
            if let Some(z) = c.zero {
                emit(out, format_args!("zero_at       {z:.15}"))?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// Evaluate `W_{u,u_λ}` for a family; kept public for scripting against the library.
pub fn lambda_wronskian_at<F: SolutionFamily>(f: &F, x: f64, lambda: f64) -> anyhow::Result<f64> {
    lambda_wronskian(f, x, lambda).map_err(|e| anyhow!(e))
}
