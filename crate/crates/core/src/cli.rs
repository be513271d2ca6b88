//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure or refused computation (guard), 2 parse or
//! domain error. Every command is deterministic given `--seed` (or `PURITY_SEED`).

use crate::asymptotics::{
    estimate_typical_probability, resource_ledger, typical_probability, typical_subspace_stats, TypicalSetSpec,
};
use crate::closed_forms::{bb84_ensemble, discretize_uniform_sphere, uniform_curve_point, UniformCurveParam};
use crate::ensemble::{average_state, holevo_information, CQEnsemble};
use crate::error::Error;
use crate::io;
use crate::state::{purity_kappa, shannon_entropy, von_neumann_entropy, ProbabilityDistribution};
use crate::tradeoff::{
    brute_force_oracle_with_channel, compute_d_curve, compute_p_curve, d_multiplier_grid, linear_grid,
    pd_discrepancies, AscentMethod, OptimizerOptions, TradeoffCurve, D_MULTIPLIER_MAX,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "purity", version, about = "Local purity tradeoff curves for classical-quantum ensembles")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy and purity of a density matrix or an ensemble.
    Entropy(EntropyArgs),
    /// P or D curve of an ensemble.
    Curve(CurveArgs),
    /// P curve of the BB84 ensemble with angle θ.
    Bb84(Bb84Args),
    /// Uniform-sphere ensemble: closed form or optimizer on a discretization.
    Uniform(UniformArgs),
    /// Check P(D(R) + R) = D(R) at sample rates.
    VerifyPd(VerifyPdArgs),
    /// Exhaustive grid search over small channels.
    Oracle(OracleArgs),
    /// Typical-set probability, or typical-subspace statistics of a state.
    Typicality(TypicalityArgs),
    /// Resource ledger of the direct-coding protocol.
    Ledger(LedgerArgs),
}

/// Inclusive `start:stop:count` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(format!("expected start:stop:count, got {s:?}"));
    };
    let a: f64 = a.trim().parse().map_err(|_| format!("bad start {a:?}"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad stop {b:?}"))?;
    let n: usize = n.trim().parse().map_err(|_| format!("bad count {n:?}"))?;
    linear_grid(a, b, n).map(Grid).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Pga,
    Am,
    Hybrid,
}

impl From<Method> for AscentMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Pga => AscentMethod::ProjectedGradient,
            Method::Am => AscentMethod::AlternatingMaximization,
            Method::Hybrid => AscentMethod::Hybrid,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OptimizerArgs {
    /// Random restarts per multiplier.
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    /// Master seed; restart i uses seed + i.
    #[arg(long, env = "PURITY_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output alphabet size (default |X| + 2).
    #[arg(long)]
    pub y_size: Option<usize>,
    #[arg(long, default_value_t = 5000)]
    pub max_iterations: usize,
    #[arg(long, value_enum, default_value_t = Method::Hybrid)]
    pub method: Method,
}

impl OptimizerArgs {
    fn options(&self, refinements: usize) -> OptimizerOptions {
        OptimizerOptions {
            refinements,
            y_size: self.y_size,
            restarts: self.restarts,
            master_seed: self.seed,
            max_iterations: self.max_iterations,
            method: self.method.into(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Points CSV (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Envelope CSV (default: <out stem>.envelope.csv).
    #[arg(long)]
    pub envelope_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct EnsembleSource {
    /// Ensemble file.
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
    /// BB84 ensemble with this angle (radians).
    #[arg(long)]
    pub bb84: Option<f64>,
    /// Uniform-sphere discretization with this many nodes.
    #[arg(long)]
    pub sphere: Option<usize>,
}

impl EnsembleSource {
    fn load(&self) -> Result<CQEnsemble, CliError> {
        if let Some(path) = &self.ensemble {
            return Ok(io::parse_ensemble(&read(path)?)?);
        }
        if let Some(theta) = self.bb84 {
            return Ok(bb84_ensemble(theta)?);
        }
        Ok(discretize_uniform_sphere(self.sphere.expect("clap enforces one source"))?)
    }
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct EntropyTarget {
    /// Density-matrix file.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Ensemble file.
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub target: EntropyTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    P,
    D,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub source: EnsembleSource,
    #[arg(long, value_enum, default_value_t = Kind::P)]
    pub kind: Kind,
    /// Multiplier grid start:stop:count (default 0:1:41 for P, 0 plus a geometric grid up to 50 for D).
    #[arg(long, value_parser = parse_grid)]
    pub mu_grid: Option<Grid>,
    /// Extra multipliers placed at envelope chord slopes.
    #[arg(long, default_value_t = 0)]
    pub refine: usize,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Bb84Args {
    /// Angle θ ∈ [0, π/2] in radians.
    #[arg(long)]
    pub theta: f64,
    #[arg(long, value_parser = parse_grid, default_value = "0:1:41")]
    pub mu_grid: Grid,
    /// Extra multipliers placed at envelope chord slopes.
    #[arg(long, default_value_t = 0)]
    pub refine: usize,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct UniformArgs {
    /// Evaluate the parametric closed form over --lambdas instead of optimizing.
    #[arg(long, requires = "lambdas")]
    pub closed_form: bool,
    #[arg(long, value_parser = parse_grid)]
    pub lambdas: Option<Grid>,
    /// Sphere nodes for the optimizer.
    #[arg(long, default_value_t = 32)]
    pub nodes: usize,
    #[arg(long, value_parser = parse_grid, default_value = "0:1:41")]
    pub mu_grid: Grid,
    /// Extra multipliers placed at envelope chord slopes.
    #[arg(long, default_value_t = 0)]
    pub refine: usize,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyPdArgs {
    #[command(flatten)]
    pub source: EnsembleSource,
    /// Sample rates start:stop:count.
    #[arg(long, value_parser = parse_grid, default_value = "0.1:1.5:5")]
    pub rates: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "0:1:41")]
    pub p_grid: Grid,
    /// D multipliers (default 0 plus a geometric grid up to 50).
    #[arg(long, value_parser = parse_grid)]
    pub d_grid: Option<Grid>,
    #[arg(long, default_value_t = 2e-3)]
    pub tolerance: f64,
    /// Extra multipliers placed at envelope chord slopes.
    #[arg(long, default_value_t = 16)]
    pub refine: usize,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: EnsembleSource,
    /// Rate budget R in bits.
    #[arg(long)]
    pub rate: f64,
    #[arg(long, default_value_t = 2)]
    pub y_size: usize,
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TypicalityArgs {
    /// Distribution, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "state", required_unless_present = "state")]
    pub p: Vec<f64>,
    /// Density-matrix file: report typical-subspace rate and mass of its eigenvalues.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub delta: f64,
    /// Estimate by sampling this many sequences instead of summing exactly.
    #[arg(long, conflicts_with = "state")]
    pub monte_carlo: Option<usize>,
    #[arg(long, env = "PURITY_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct LedgerArgs {
    #[command(flatten)]
    pub source: EnsembleSource,
    /// Channel file.
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Output file (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    /// A computed check did not meet its tolerance.
    Verification(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) | CliError::Core(Error::Guard(_)) => 1,
            CliError::Core(_) => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Core(Error::Io(format!("{}: {e}", path.display()))))
}

/// Writes via a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(out: &mut dyn Write, path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, contents)
            .map_err(|e| CliError::Core(Error::Io(format!("{}: {e}", p.display()))))?,
        None => out.write_all(contents.as_bytes())?,
    }
    Ok(())
}

fn emit_curve(out: &mut dyn Write, curve: &TradeoffCurve, output: &OutputArgs) -> Result<(), CliError> {
    emit(out, output.out.as_deref(), &io::format_curve_csv(curve))?;
    let envelope_path = output
        .envelope_out
        .clone()
        .or_else(|| output.out.as_ref().map(|p| p.with_extension("envelope.csv")));
    if let Some(p) = envelope_path {
        emit(out, Some(&p), &io::format_envelope_csv(curve))?;
    }
    Ok(())
}

fn default_d_grid() -> Vec<f64> {
    d_multiplier_grid(25, D_MULTIPLIER_MAX).expect("valid constant grid")
}

/// Dispatches a parsed command, writing reports to `out`.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.command {
        Command::Entropy(a) => {
            if let Some(path) = &a.target.state {
                let rho = io::parse_density_matrix(&read(path)?)?;
                writeln!(out, "dim={}", rho.dim())?;
                writeln!(out, "entropy_bits={}", von_neumann_entropy(&rho)?)?;
                writeln!(out, "kappa_bits={}", purity_kappa(&rho)?)?;
            } else {
                let ens = io::parse_ensemble(&read(a.target.ensemble.as_ref().expect("clap group"))?)?;
                writeln!(out, "labels={}", ens.labels())?;
                writeln!(out, "dim={}", ens.dim())?;
                writeln!(out, "H_X_bits={}", shannon_entropy(ens.probs()))?;
                writeln!(out, "holevo_bits={}", holevo_information(&ens)?)?;
                writeln!(out, "kappa_X_bits={}", purity_kappa(&ens.classical_state())?)?;
                writeln!(out, "kappa_B_bits={}", purity_kappa(&average_state(&ens))?)?;
            }
        }
        Command::Curve(a) => {
            let ens = a.source.load()?;
            let opts = a.optimizer.options(a.refine);
            let curve = match a.kind {
                Kind::P => {
                    let grid = a.mu_grid.clone().map(|g| g.0).unwrap_or_else(|| linear_grid(0.0, 1.0, 41).unwrap());
                    compute_p_curve(&ens, &grid, &opts)?
                }
                Kind::D => {
                    let grid = a.mu_grid.clone().map(|g| g.0).unwrap_or_else(default_d_grid);
                    compute_d_curve(&ens, &grid, &opts)?
                }
            };
            emit_curve(out, &curve, &a.output)?;
        }
        Command::Bb84(a) => {
            let ens = bb84_ensemble(a.theta)?;
            let curve = compute_p_curve(&ens, &a.mu_grid.0, &a.optimizer.options(a.refine))?;
            emit_curve(out, &curve, &a.output)?;
        }
        Command::Uniform(a) => {
            if a.closed_form {
                let lambdas = &a.lambdas.as_ref().expect("clap requires lambdas").0;
                let rows = lambdas
                    .iter()
                    .map(|&lam| {
                        let (r, p) = uniform_curve_point(UniformCurveParam::new(lam)?)?;
                        Ok((lam, r, p))
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                emit(out, a.output.out.as_deref(), &io::format_uniform_csv(&rows))?;
            } else {
                let ens = discretize_uniform_sphere(a.nodes)?;
                let curve = compute_p_curve(&ens, &a.mu_grid.0, &a.optimizer.options(a.refine))?;
                emit_curve(out, &curve, &a.output)?;
            }
        }
        Command::VerifyPd(a) => {
            let ens = a.source.load()?;
            let opts = a.optimizer.options(a.refine);
            let p = compute_p_curve(&ens, &a.p_grid.0, &opts)?;
            let d_grid = a.d_grid.clone().map(|g| g.0).unwrap_or_else(default_d_grid);
            let d = compute_d_curve(&ens, &d_grid, &opts)?;
            let rows = pd_discrepancies(&p, &d, &a.rates.0)?;
            let mut worst: f64 = 0.0;
            for (r, disc) in &rows {
                writeln!(out, "R={r},D={},discrepancy={disc}", d.at(*r))?;
                worst = worst.max(*disc);
            }
            writeln!(out, "max_discrepancy={worst}")?;
            if worst > a.tolerance {
                return Err(CliError::Verification(format!("discrepancy {worst} exceeds {}", a.tolerance)));
            }
        }
        Command::Oracle(a) => {
            let ens = a.source.load()?;
            let (value, w) = brute_force_oracle_with_channel(&ens, a.rate, a.y_size, a.grid_step)?;
            writeln!(out, "rate_bits={}", a.rate)?;
            writeln!(out, "value_bits={value}")?;
            write!(out, "{}", io::format_channel(&w))?;
        }
        Command::Typicality(a) => {
            if let Some(path) = &a.state {
                let rho = io::parse_density_matrix(&read(path)?)?;
                let (rate, mass) = typical_subspace_stats(&rho, a.n, a.delta)?;
                writeln!(out, "rate_bits={rate}")?;
                writeln!(out, "mass={mass}")?;
                writeln!(out, "concentrated_purity_bits={}", (rho.dim() as f64).log2() - rate)?;
            } else {
                let spec = TypicalSetSpec::new(ProbabilityDistribution::new(a.p.clone())?, a.n, a.delta)?;
                match a.monte_carlo {
                    Some(samples) => {
                        let est = estimate_typical_probability(&spec, samples, a.seed)?;
                        writeln!(out, "probability={}", est.probability)?;
                        writeln!(out, "std_error={}", est.std_error)?;
                    }
                    None => writeln!(out, "probability={}", typical_probability(&spec)?)?,
                }
            }
        }
        Command::Ledger(a) => {
            let ens = a.source.load()?;
            let w = io::parse_channel(&read(&a.channel)?)?;
            let ledger = resource_ledger(&ens, &w, a.n, a.delta)?;
            emit(out, a.out.as_deref(), &ledger.to_string())?;
        }
    }
    Ok(())
}

/// Parses `args` (including the program name), runs, and returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            let _ = if e.exit_code() == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return e.exit_code();
        }
    };
    match run(&cfg, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["purity"];
        full.extend_from_slice(args);
        let code = main_with(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_syntax() {
        assert_eq!(parse_grid("0:1:3").unwrap(), Grid(vec![0.0, 0.5, 1.0]));
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:x").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn typicality_command() {
        let (code, out, _) = run_args(&["typicality", "--p", "0.3,0.7", "--n", "1000", "--delta", "0.05"]);
        assert_eq!(code, 0);
        let p: f64 = out.trim().strip_prefix("probability=").unwrap().parse().unwrap();
        assert!(p >= 0.999);
        let (code, _, _) = run_args(&["typicality", "--p", "0.3,0.6", "--n", "10", "--delta", "0.05"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn uniform_closed_form_to_stdout() {
        let (code, out, _) = run_args(&["uniform", "--closed-form", "--lambdas", "0.1:30:100"]);
        assert_eq!(code, 0);
        let rows = io::parse_uniform_csv(&out).unwrap();
        assert_eq!(rows.len(), 100);
        assert!(rows[0].1 < 1e-3 && rows[0].2 < 1e-3);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["bb84", "--theta", "2.0", "--restarts", "1"]).0, 2);
        assert_eq!(run_args(&["bb84"]).0, 2);
        assert_eq!(run_args(&["curve", "--mu-grid", "0:1:3"]).0, 2);
        assert_eq!(run_args(&["oracle", "--bb84", "0.3", "--rate", "1", "--y-size", "6"]).0, 1);
        assert_eq!(run_args(&["entropy", "--state", "/nonexistent/file"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }
}
