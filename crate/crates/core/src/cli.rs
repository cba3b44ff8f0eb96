//! Command-line driver: parses arguments, merges an optional JSON config,
//! runs one library operation and renders the result as CSV or JSON.
//!
//! Exit codes: 0 on success, 1 on usage or validation errors, 2 when a
//! verification subcommand's PASS criteria fail.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::betting::{kt_bettor, wealth_quadratic_lower};
use crate::bounds::{bound_report, AnalyticInequality, BoundConfig, BoundReport, SampleSummary};
use crate::distributions::{
    bernoulli_instance, gaussian_instance, multivariate_instance, DiscreteDistribution, DiscretePair, GaussianMixturePair,
};
use crate::divergences::{divergence_gaussian, little_kl, DivergenceKind, QuadratureConfig};
use crate::error::{invalid, Error, Result};
use crate::harness::{
    divergence_scaling_table, gaussian_instance_check, mean_zero_coins, run_coverage, self_check, ville_experiment,
    LearningInstance, PosteriorRule,
};

const DEFAULT_SEED: u64 = 1;
const SLOPE_TOLERANCE: f64 = 0.15;

#[derive(Debug, Parser)]
#[command(name = "zcp-paclab", version, about = "PAC-Bayes bounds with the ZCP divergence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one divergence on a discrete pair or on Gaussian mixture instances.
    Divergence(Wrapped<DivergenceArgs>),
    /// Divergence profile of an instance family.
    Instance(Wrapped<InstanceArgs>),
    /// Run the mixture bettor on a coin sequence.
    Betting(Wrapped<BettingArgs>),
    /// Evaluate every bound for a posterior-prior pair.
    Bound(Wrapped<BoundArgs>),
    /// Monte Carlo coverage of the bounds on a finite learning problem.
    Coverage(Wrapped<CoverageArgs>),
    /// Scaling of KL, TV and ZCP on the multivariate instance.
    Scaling(Wrapped<ScalingArgs>),
    /// Quadrature check of the Gaussian mixture inequalities.
    GaussianCheck(Wrapped<GaussianArgs>),
    /// Crossing frequency of the betting wealth through 1/δ.
    Ville(Wrapped<VilleArgs>),
    /// Deterministic self-check of the analytic inequalities and invariants.
    Inequalities(Wrapped<InequalityArgs>),
}

#[derive(Debug, Args)]
struct Wrapped<T: Args> {
    #[command(flatten)]
    args: T,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output to this path atomically instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON object of flag values; explicit flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum KindArg {
    Kl,
    Tv,
    Renyi,
    Zcp,
    LittleKl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum FamilyArg {
    Bernoulli,
    Multivariate,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum LossArg {
    Abs,
    Bernoulli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum FaultArg {
    Fan,
    MaxBeta,
    Fenchel,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DivergenceArgs {
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Weights of P (for little-kl, the single value p̂).
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Weights of Q (for little-kl, the single value q).
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// Mixture weights of Gaussian instances, used instead of --p/--q.
    #[arg(long, value_delimiter = ',')]
    mixture_p: Option<Vec<f64>>,
    #[arg(long)]
    sigma1: Option<f64>,
    #[arg(long)]
    exponent: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceArgs {
    #[arg(long, value_enum)]
    kind: Option<FamilyArg>,
    /// Bernoulli masses.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Log ratio of the Bernoulli instance; defaults to 1/p².
    #[arg(long)]
    ln_a: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<usize>>,
    #[arg(long)]
    u: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    mixture_p: Option<Vec<f64>>,
    #[arg(long)]
    sigma1: Option<f64>,
    #[arg(long)]
    exponent: Option<f64>,
    /// ZCP scale for the zcp column.
    #[arg(long)]
    c: Option<f64>,
    /// Rényi order for the renyi column.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BettingArgs {
    /// Coin outcomes in [-1, 1]; when absent, --n mean-zero coins are drawn.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coins: Option<Vec<f64>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<f64>>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Posterior weights.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Prior weights.
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
    /// Dimension of the multivariate instance, used instead of --p/--q.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    u: Option<f64>,
    /// Posterior-averaged sample variance for the empirical-Bernstein column.
    #[arg(long)]
    v_hat: Option<f64>,
    /// Posterior-averaged empirical mean for the little-kl column.
    #[arg(long)]
    p_hat: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverageArgs {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, value_enum)]
    loss: Option<LossArg>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<f64>>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalingArgs {
    #[arg(long)]
    u: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianArgs {
    #[arg(long, value_delimiter = ',')]
    mixture_p: Option<Vec<f64>>,
    #[arg(long)]
    exponent: Option<f64>,
    #[arg(long)]
    sigma1: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VilleArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    paths: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InequalityArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

/// One output value.
#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if v == 0.0 || (1e-4..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or_else(|| Value::String(format_number(*v)), Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

/// Tabular output with a trailing key-value summary.
#[derive(Debug, Default)]
struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    summary: Vec<(String, Cell)>,
}

impl Table {
    fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Self { columns: columns.iter().map(|c| c.as_ref().to_string()).collect(), ..Self::default() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn note(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_string(), value.into()));
    }

    fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::to_csv))?;
                }
                let mut buf = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                writeln!(buf, "# summary")?;
                for (k, v) in &self.summary {
                    writeln!(buf, "# {k}: {}", v.to_csv())?;
                }
                Ok(buf)
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| Value::Object(self.columns.iter().cloned().zip(row.iter().map(Cell::to_json)).collect()))
                    .collect();
                let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
                let mut doc = Map::new();
                doc.insert("rows".into(), Value::Array(rows));
                doc.insert("summary".into(), Value::Object(summary));
                let mut buf = serde_json::to_vec_pretty(&Value::Object(doc))?;
                buf.push(b'\n');
                Ok(buf)
            }
        }
    }
}

/// Result of one subcommand before rendering.
struct Outcome {
    table: Table,
    pass: bool,
    diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Self { table, pass: true, diagnostics: Vec::new() }
    }
}

/// Overlays explicitly given flags on the config file's values.
fn merge_config<T: Serialize + DeserializeOwned>(flags: T, config: Option<&Path>) -> Result<T> {
    let Some(path) = config else { return Ok(flags) };
    let mut base: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let Value::Object(map) = &mut base else {
        return Err(invalid(format!("config {} must hold a JSON object", path.display())));
    };
    if let Value::Object(given) = serde_json::to_value(&flags)? {
        for (k, v) in given.into_iter().filter(|(_, v)| !v.is_null()) {
            map.insert(k, v);
        }
    }
    Ok(serde_json::from_value(base)?)
}

fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(cli.command) {
        Ok((outcome, bytes, out)) => {
            let written = match out {
                Some(path) => write_atomically(&path, &bytes),
                None => stdout.write_all(&bytes).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 1;
            }
            for line in &outcome.diagnostics {
                let _ = writeln!(stderr, "{line}");
            }
            if outcome.pass { 0 } else { 2 }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn execute(command: Command) -> Result<(Outcome, Vec<u8>, Option<PathBuf>)> {
    fn go<T: Args + Serialize + DeserializeOwned>(
        w: Wrapped<T>,
        f: impl FnOnce(T) -> Result<Outcome>,
    ) -> Result<(Outcome, Vec<u8>, Option<PathBuf>)> {
        let args = merge_config(w.args, w.output.config.as_deref())?;
        let outcome = f(args)?;
        let bytes = outcome.table.render(w.output.format)?;
        Ok((outcome, bytes, w.output.out))
    }
    match command {
        Command::Divergence(w) => go(w, divergence_cmd),
        Command::Instance(w) => go(w, instance_cmd),
        Command::Betting(w) => go(w, betting_cmd),
        Command::Bound(w) => go(w, bound_cmd),
        Command::Coverage(w) => go(w, coverage_cmd),
        Command::Scaling(w) => go(w, scaling_cmd),
        Command::GaussianCheck(w) => go(w, gaussian_cmd),
        Command::Ville(w) => go(w, ville_cmd),
        Command::Inequalities(w) => go(w, inequalities_cmd),
    }
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| invalid(format!("missing required flag --{flag}")))
}

fn divergence_kind(kind: KindArg, alpha: Option<f64>, c: Option<f64>) -> Result<DivergenceKind> {
    Ok(match kind {
        KindArg::Kl => DivergenceKind::Kl,
        KindArg::Tv => DivergenceKind::Tv,
        KindArg::Renyi => DivergenceKind::Renyi { alpha: require(alpha, "alpha")? },
        KindArg::Zcp => DivergenceKind::Zcp { c: c.unwrap_or(1.0) },
        KindArg::LittleKl => DivergenceKind::LittleKl,
    })
}

fn discrete_pair(p: Vec<f64>, q: Vec<f64>) -> Result<DiscretePair> {
    DiscretePair::from_weights(DiscreteDistribution::new(p)?, DiscreteDistribution::new(q)?)
}

fn single(values: &[f64], flag: &str) -> Result<f64> {
    match values {
        [v] => Ok(*v),
        _ => Err(invalid(format!("--{flag} takes a single value for this kind"))),
    }
}

fn divergence_cmd(a: DivergenceArgs) -> Result<Outcome> {
    let kind = divergence_kind(require(a.kind, "kind")?, a.alpha, a.c)?;
    let param_cols = ["kind", "alpha", "c"];
    let param = |kind: &DivergenceKind| -> Vec<Cell> { vec![kind.name().into(), kind.alpha().into(), kind.c().into()] };

    if let Some(mixture) = a.mixture_p {
        if kind == DivergenceKind::LittleKl {
            return Err(invalid("little-kl takes --p and --q scalars, not a mixture"));
        }
        let sigma1 = a.sigma1.unwrap_or(1.0);
        let exponent = a.exponent.unwrap_or(1.0);
        let cfg = QuadratureConfig::default();
        let mut cols = vec!["mixture_p", "sigma1", "exponent"];
        cols.extend(param_cols);
        cols.extend(["value", "abs_error"]);
        let mut table = Table::new(&cols);
        for mp in mixture {
            let pair: GaussianMixturePair = gaussian_instance(mp, sigma1, exponent)?;
            let v = divergence_gaussian(&pair, kind, &cfg)?;
            let mut row = vec![mp.into(), sigma1.into(), exponent.into()];
            row.extend(param(&kind));
            row.extend([v.value.into(), v.abs_error.into()]);
            table.push(row);
        }
        table.note("rel_tol", cfg.rel_tol);
        return Ok(Outcome::ok(table));
    }

    let p = require(a.p, "p")?;
    let q = require(a.q, "q")?;
    let value = if kind == DivergenceKind::LittleKl {
        let (ph, qv) = (single(&p, "p")?, single(&q, "q")?);
        if !(0.0..=1.0).contains(&ph) || !(0.0..=1.0).contains(&qv) {
            return Err(invalid("little-kl arguments must lie in [0, 1]"));
        }
        little_kl(ph, qv)
    } else {
        discrete_pair(p.clone(), q)?.divergence(kind)?.value
    };
    let mut cols = param_cols.to_vec();
    cols.extend(["value", "abs_error"]);
    let mut table = Table::new(&cols);
    let mut row = param(&kind);
    row.extend([value.into(), 0.0.into()]);
    table.push(row);
    table.note("support", p.len());
    Ok(Outcome::ok(table))
}

fn instance_cmd(a: InstanceArgs) -> Result<Outcome> {
    let c = a.c.unwrap_or(1.0);
    let alpha = a.alpha.unwrap_or(2.0);
    let divergence_cols = ["kl", "tv", "zcp", "renyi"];
    let discrete_values = |pair: &DiscretePair| -> Result<Vec<Cell>> {
        Ok(vec![pair.kl().into(), pair.tv().into(), pair.zcp(c)?.into(), pair.renyi(alpha)?.into()])
    };
    let mut table;
    match require(a.kind, "kind")? {
        FamilyArg::Bernoulli => {
            let mut cols = vec!["p", "ln_a"];
            cols.extend(divergence_cols);
            cols.extend(["kl_lower", "kl_upper"]);
            table = Table::new(&cols);
            for p in require(a.p, "p")? {
                let ln_a = a.ln_a.unwrap_or(1.0 / (p * p));
                let pair = bernoulli_instance(p, ln_a)?;
                let mut row = vec![p.into(), ln_a.into()];
                row.extend(discrete_values(&pair)?);
                row.extend([(p * ln_a - (-1.0f64).exp()).into(), (p * ln_a).into()]);
                table.push(row);
            }
        }
        FamilyArg::Multivariate => {
            let u = a.u.unwrap_or(1.0);
            let mut cols = vec!["d", "u"];
            cols.extend(divergence_cols);
            table = Table::new(&cols);
            for d in require(a.d, "d")? {
                let pair = multivariate_instance(d, u)?;
                let mut row = vec![d.into(), u.into()];
                row.extend(discrete_values(&pair)?);
                table.push(row);
            }
        }
        FamilyArg::Gaussian => {
            let sigma1 = a.sigma1.unwrap_or(1.0);
            let exponent = a.exponent.unwrap_or(1.0);
            let cfg = QuadratureConfig::default();
            let mut cols = vec!["mixture_p", "sigma1", "sigma2", "exponent"];
            cols.extend(divergence_cols);
            table = Table::new(&cols);
            for mp in require(a.mixture_p, "mixture-p")? {
                let pair = gaussian_instance(mp, sigma1, exponent)?;
                let mut row = vec![mp.into(), sigma1.into(), pair.sigma2().into(), exponent.into()];
                for kind in [
                    DivergenceKind::Kl,
                    DivergenceKind::Tv,
                    DivergenceKind::Zcp { c },
                    DivergenceKind::Renyi { alpha },
                ] {
                    row.push(divergence_gaussian(&pair, kind, &cfg)?.value.into());
                }
                table.push(row);
            }
        }
    }
    table.note("c", c);
    table.note("alpha", alpha);
    Ok(Outcome::ok(table))
}

fn betting_cmd(a: BettingArgs) -> Result<Outcome> {
    let seed = a.seed.unwrap_or(DEFAULT_SEED);
    let coins = match a.coins {
        Some(c) => c,
        None => mean_zero_coins(require(a.n, "n")?, seed, 0, 1.0),
    };
    let trace = kt_bettor(&coins)?;
    let mut table = Table::new(&["t", "coin", "bet", "log_wealth"]);
    for (t, (c, b)) in coins.iter().zip(&trace.bets).enumerate() {
        table.push(vec![(t + 1).into(), (*c).into(), (*b).into(), trace.log_wealth[t + 1].into()]);
    }
    let n = coins.len() as f64;
    let regret_cap = (2.0 * n.sqrt()).ln();
    let quad = wealth_quadratic_lower(&coins);
    let regret_ok = trace.log_regret() <= regret_cap + 1e-12;
    let lemma_ok = trace.log_wealth_star >= quad - 1e-12;
    table.note("n", coins.len());
    table.note("final_log_wealth", trace.final_log_wealth());
    table.note("beta_star", trace.beta_star);
    table.note("log_wealth_star", trace.log_wealth_star);
    table.note("quadratic_lower", quad);
    table.note("log_regret", trace.log_regret());
    table.note("regret_ratio", trace.log_regret().exp());
    table.note("regret_cap_2sqrt_n", 2.0 * n.sqrt());
    table.note("reference_ratio_sqrt_2n_plus_2", (2.0 * (n + 1.0)).sqrt());
    table.note("regret_within_cap", regret_ok);
    table.note("quadratic_lower_holds", lemma_ok);
    Ok(Outcome { table, pass: regret_ok && lemma_ok, diagnostics: Vec::new() })
}

fn bound_cmd(a: BoundArgs) -> Result<Outcome> {
    let n = a.n.unwrap_or(1000);
    let alpha = a.alpha.unwrap_or(2.0);
    let deltas = a.delta.unwrap_or_else(|| vec![0.05]);
    let configs: Vec<BoundConfig> = deltas.iter().map(|&d| BoundConfig::new(n, d, alpha)).collect::<Result<_>>()?;
    let pair = match (a.p, a.q, a.d) {
        (Some(p), Some(q), None) => discrete_pair(p, q)?,
        (None, None, Some(d)) => multivariate_instance(d, a.u.unwrap_or(1.0))?,
        _ => return Err(invalid("give either --p and --q, or --d (with optional --u)")),
    };
    let v_hat = a.v_hat.unwrap_or(0.25);
    let p_hat = a.p_hat.unwrap_or(0.5);
    if !(0.0..=0.25).contains(&v_hat) {
        return Err(invalid(format!("--v-hat must lie in [0, 0.25], got {v_hat}")));
    }
    if !(0.0..=1.0).contains(&p_hat) {
        return Err(invalid(format!("--p-hat must lie in [0, 1], got {p_hat}")));
    }
    let sample = SampleSummary { realized_gap: f64::NAN, v_hat, p_hat_mean: p_hat, p_mean: f64::NAN };
    let kept = &BoundReport::FIELDS[..10];
    let mut cols = vec!["n", "delta", "alpha"];
    cols.extend(kept);
    let mut table = Table::new(&cols);
    for cfg in &configs {
        let r = bound_report(&pair, &sample, cfg)?;
        let mut row = vec![n.into(), cfg.delta.into(), alpha.into()];
        row.extend(r.values()[..10].iter().map(|&v| Cell::from(v)));
        table.push(row);
    }
    table.note("v_hat", v_hat);
    table.note("p_hat_mean", p_hat);
    Ok(Outcome::ok(table))
}

fn coverage_cmd(a: CoverageArgs) -> Result<Outcome> {
    let m = a.m.unwrap_or(50);
    let eta = a.eta.unwrap_or(5.0);
    let rule = PosteriorRule::Gibbs { eta };
    let inst = match a.loss.unwrap_or(LossArg::Abs) {
        LossArg::Abs => LearningInstance::abs_distance(m, rule)?,
        LossArg::Bernoulli => LearningInstance::bernoulli(m, rule)?,
    };
    let delta = match a.delta.as_deref() {
        None => 0.05,
        Some(d) => single(d, "delta")?,
    };
    let cfg = BoundConfig::new(a.n.unwrap_or(1000), delta, a.alpha.unwrap_or(2.0))?;
    let trials = a.trials.unwrap_or(2000);
    let seed = a.seed.unwrap_or(DEFAULT_SEED);
    let report = run_coverage(&inst, &cfg, trials, seed)?;

    let mut cols = vec!["trial"];
    cols.extend(BoundReport::FIELDS);
    let mut table = Table::new(&cols);
    for (t, r) in report.reports.iter().enumerate() {
        let mut row: Vec<Cell> = vec![t.into()];
        row.extend(r.values().iter().map(|&v| Cell::from(v)));
        table.push(row);
    }
    table.note("trials", trials);
    table.note("delta_budget", report.delta_budget);
    for l in &report.lines {
        let name = l.bound.name();
        table.note(&format!("{name}.failures"), l.failures);
        table.note(&format!("{name}.failure_rate"), l.empirical_failure_rate);
        table.note(&format!("{name}.wilson_upper_99"), l.wilson_upper_99);
        table.note(&format!("{name}.pass"), l.pass);
    }
    let diagnostics = report
        .failure_events
        .iter()
        .map(|e| {
            let fields = BoundReport::FIELDS
                .iter()
                .zip(e.report.values())
                .map(|(k, v)| format!("{k}={}", format_number(v)))
                .collect::<Vec<_>>()
                .join(" ");
            format!("failure trial={} bound={} {fields}", e.trial, e.bound.name())
        })
        .collect();
    Ok(Outcome { table, pass: report.passed(), diagnostics })
}

fn scaling_cmd(a: ScalingArgs) -> Result<Outcome> {
    let u = a.u.unwrap_or(1.0);
    let d = a.d.unwrap_or_else(|| (4..=12).map(|k| 1usize << k).collect());
    let t = divergence_scaling_table(u, &d)?;
    let mut table = Table::new(&["d", "kl", "tv", "zcp1", "kl_over_d_pow_u_half", "tv_over_d_pow_neg_u", "zcp1_over_d_pow_neg_u_quarter"]);
    for r in &t.rows {
        table.push(vec![r.d.into(), r.kl.into(), r.tv.into(), r.zcp1.into(), r.kl_ratio.into(), r.tv_ratio.into(), r.zcp_ratio.into()]);
    }
    let targets = [u / 2.0, -u, -u / 4.0];
    let mut pass = true;
    match t.slopes {
        Some(slopes) => {
            for ((name, s), target) in ["kl", "tv", "zcp1"].iter().zip(slopes).zip(targets) {
                let ok = (s - target).abs() <= SLOPE_TOLERANCE;
                pass &= ok;
                table.note(&format!("{name}.slope"), s);
                table.note(&format!("{name}.target"), target);
                table.note(&format!("{name}.pass"), ok);
            }
        }
        None => table.note("slopes", "undefined"),
    }
    table.note("slope_tolerance", SLOPE_TOLERANCE);
    Ok(Outcome { table, pass, diagnostics: Vec::new() })
}

fn gaussian_cmd(a: GaussianArgs) -> Result<Outcome> {
    let ps = a.mixture_p.unwrap_or_else(|| vec![0.2, 0.1, 0.05, 0.02]);
    let exponent = a.exponent.unwrap_or(1.0);
    if exponent != 1.0 && exponent != 0.75 {
        return Err(invalid(format!("--exponent must be 1 or 0.75, got {exponent}")));
    }
    let cfg = QuadratureConfig::default();
    let rows = gaussian_instance_check(&ps, a.sigma1.unwrap_or(1.0), exponent, &cfg)?;
    let mut table =
        Table::new(&["mixture_p", "exponent", "kl", "kl_abs_error", "tv", "tv_abs_error", "kl_lower", "product", "pass"]);
    for r in &rows {
        table.push(vec![
            r.p.into(),
            r.exponent.into(),
            r.kl.into(),
            r.kl_abs_error.into(),
            r.tv.into(),
            r.tv_abs_error.into(),
            r.kl_lower.into(),
            r.product.into(),
            r.pass.into(),
        ]);
    }
    let pass = rows.iter().all(|r| r.pass);
    table.note("rel_tol", cfg.rel_tol);
    table.note("pass", pass);
    Ok(Outcome { table, pass, diagnostics: Vec::new() })
}

fn ville_cmd(a: VilleArgs) -> Result<Outcome> {
    let deltas = a.delta.unwrap_or_else(|| vec![0.1, 0.05]);
    let rows = ville_experiment(a.n.unwrap_or(1000), &deltas, a.paths.unwrap_or(10_000), a.seed.unwrap_or(DEFAULT_SEED))?;
    let mut table = Table::new(&["delta", "paths", "crossings", "crossing_rate", "wilson_upper_99", "pass"]);
    for r in &rows {
        table.push(vec![
            r.delta.into(),
            r.paths.into(),
            r.crossings.into(),
            r.crossing_rate.into(),
            r.wilson_upper_99.into(),
            r.pass.into(),
        ]);
    }
    let pass = rows.iter().all(|r| r.pass);
    table.note("pass", pass);
    Ok(Outcome { table, pass, diagnostics: Vec::new() })
}

fn inequalities_cmd(a: InequalityArgs) -> Result<Outcome> {
    let fault = a.inject_fault.map(|f| match f {
        FaultArg::Fan => AnalyticInequality::Fan,
        FaultArg::MaxBeta => AnalyticInequality::MaxBeta,
        FaultArg::Fenchel => AnalyticInequality::Fenchel,
    });
    let lines = self_check(a.seed.unwrap_or(DEFAULT_SEED), fault)?;
    let mut table = Table::new(&["check", "draws", "violations", "worst_slack", "worst_inputs", "pass"]);
    let mut diagnostics = Vec::new();
    for l in &lines {
        table.push(vec![
            l.name.as_str().into(),
            l.draws.into(),
            l.violations.into(),
            l.worst_slack.into(),
            l.worst_inputs.as_str().into(),
            l.passed().into(),
        ]);
        if !l.passed() {
            diagnostics.push(format!(
                "violation check={} count={} worst_slack={} inputs={}",
                l.name,
                l.violations,
                format_number(l.worst_slack),
                l.worst_inputs
            ));
        }
    }
    let pass = lines.iter().all(|l| l.passed());
    table.note("pass", pass);
    Ok(Outcome { table, pass, diagnostics })
}
