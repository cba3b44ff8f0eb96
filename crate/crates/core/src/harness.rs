//! Experiments: Monte Carlo coverage of the bounds on finite learning
//! problems, the multivariate divergence-scaling and tightness tables, the
//! Gaussian mixture check, Ville crossing frequencies, and the deterministic
//! self-check.
//!
//! Every trial draws from its own ChaCha stream (master seed, stream = trial
//! index), and results are gathered in trial order, so output does not
//! depend on how rayon schedules the work.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::betting::{kt_bettor, max_log_wealth, mixture_bets, wealth_quadratic_lower};
use crate::bounds::{
    analytic_inequality_suite_with_fault, asymptotics_check_pair, bound_report, hoeffding_zcp_bound,
    mcallester_baseline, AnalyticInequality, BoundConfig, BoundReport, SampleSummary,
};
use crate::distributions::{
    gaussian_instance, make_discrete, multivariate_instance, multivariate_instance_with_ln_a, DiscreteDistribution,
    DiscretePair,
};
use crate::divergences::{divergence_gaussian, DivergenceKind, QuadratureConfig};
use crate::error::{invalid, Result};
use crate::numeric::log_sum_exp;
use crate::stats::{log_log_slope, wilson_upper_99};

/// Largest parameter set the harness accepts.
pub const MAX_THETA: usize = 10_000;

/// How the loss `f(θ, x) ∈ [0, 1]` and the data are generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LossKind {
    /// `f(θ, x) = |θ/m − x|` for `θ ∈ {1, …, m}` and `x ~ Uniform[0, 1]`.
    AbsDistance,
    /// `f(θ, x) = 1[x < μ_θ]` with `x ~ Uniform[0, 1]`, so each atom's loss is
    /// Bernoulli(`μ_θ`) and all atoms share the same draws.
    Bernoulli { means: Vec<f64> },
}

/// How the posterior is formed from the sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PosteriorRule {
    /// A data-independent posterior.
    Fixed { posterior: DiscreteDistribution },
    /// `dP_n ∝ dP₀ · exp(−η n μ̂_θ)`.
    Gibbs { eta: f64 },
}

/// A finite parameter set with prior, loss model and posterior rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningInstance {
    pub theta_count: usize,
    pub prior: DiscreteDistribution,
    pub loss: LossKind,
    pub posterior: PosteriorRule,
}

impl LearningInstance {
    pub fn new(prior: DiscreteDistribution, loss: LossKind, posterior: PosteriorRule) -> Result<Self> {
        let inst = Self { theta_count: prior.len(), prior, loss, posterior };
        inst.validate()?;
        Ok(inst)
    }

    /// Uniform prior over `m` atoms with the absolute-distance loss.
    pub fn abs_distance(m: usize, posterior: PosteriorRule) -> Result<Self> {
        Self::new(DiscreteDistribution::uniform(m)?, LossKind::AbsDistance, posterior)
    }

    /// Uniform prior over `m` Bernoulli atoms with means spread evenly over `[0.1, 0.9]`.
    pub fn bernoulli(m: usize, posterior: PosteriorRule) -> Result<Self> {
        let means = (0..m)
            .map(|i| if m == 1 { 0.5 } else { 0.1 + 0.8 * i as f64 / (m - 1) as f64 })
            .collect();
        Self::new(DiscreteDistribution::uniform(m)?, LossKind::Bernoulli { means }, posterior)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.theta_count;
        if m == 0 || m > MAX_THETA {
            return Err(invalid(format!("parameter set size must lie in [1, {MAX_THETA}], got {m}")));
        }
        if self.prior.len() != m {
            return Err(invalid(format!("prior has {} atoms, expected {m}", self.prior.len())));
        }
        if let LossKind::Bernoulli { means } = &self.loss {
            if means.len() != m {
                return Err(invalid(format!("{} Bernoulli means for {m} atoms", means.len())));
            }
            if let Some(mu) = means.iter().find(|mu| !(0.0..=1.0).contains(*mu)) {
                return Err(invalid(format!("Bernoulli mean {mu} outside [0, 1]")));
            }
        }
        match &self.posterior {
            PosteriorRule::Fixed { posterior } if posterior.len() != m => {
                Err(invalid(format!("posterior has {} atoms, expected {m}", posterior.len())))
            }
            PosteriorRule::Gibbs { eta } if !(*eta >= 0.0 && eta.is_finite()) => {
                Err(invalid(format!("Gibbs temperature must be finite and nonnegative, got {eta}")))
            }
            _ => Ok(()),
        }
    }

    /// `E f(θ, X₁)` per atom.
    pub fn true_means(&self) -> Vec<f64> {
        let m = self.theta_count as f64;
        match &self.loss {
            LossKind::AbsDistance => (1..=self.theta_count)
                .map(|t| {
                    let s = t as f64 / m;
                    s * s - s + 0.5
                })
                .collect(),
            LossKind::Bernoulli { means } => means.clone(),
        }
    }

    /// Loss of atom `theta` (0-based) on the uniform draw `x`.
    fn loss(&self, theta: usize, x: f64) -> f64 {
        match &self.loss {
            LossKind::AbsDistance => ((theta + 1) as f64 / self.theta_count as f64 - x).abs(),
            LossKind::Bernoulli { means } => {
                if x < means[theta] { 1.0 } else { 0.0 }
            }
        }
    }

    /// Posterior and its exact log-ratios against the prior, given empirical means.
    pub fn posterior_pair(&self, empirical_means: &[f64], n: u64) -> Result<DiscretePair> {
        match &self.posterior {
            PosteriorRule::Fixed { posterior } => DiscretePair::from_weights(posterior.clone(), self.prior.clone()),
            PosteriorRule::Gibbs { eta } if *eta == 0.0 => Ok(DiscretePair {
                p: self.prior.clone(),
                q: self.prior.clone(),
                ln_ratio: self.prior.weights().iter().map(|&w| if w > 0.0 { 0.0 } else { f64::NEG_INFINITY }).collect(),
            }),
            PosteriorRule::Gibbs { eta } => {
                let scale = eta * n as f64;
                let log_tilt: Vec<f64> = empirical_means.iter().map(|mu| -scale * mu).collect();
                let log_joint: Vec<f64> = self
                    .prior
                    .weights()
                    .iter()
                    .zip(&log_tilt)
                    .map(|(w, t)| if *w > 0.0 { w.ln() + t } else { f64::NEG_INFINITY })
                    .collect();
                let norm = log_sum_exp(&log_joint);
                let weights: Vec<f64> = log_joint.iter().map(|l| (l - norm).exp()).collect();
                let ln_ratio: Vec<f64> = self
                    .prior
                    .weights()
                    .iter()
                    .zip(&log_tilt)
                    .map(|(w, t)| if *w > 0.0 { t - norm } else { f64::NEG_INFINITY })
                    .collect();
                Ok(DiscretePair { p: make_discrete(&weights)?, q: self.prior.clone(), ln_ratio })
            }
        }
    }
}

/// Per-atom empirical means and sample variances of one drawn sample.
struct SampleStats {
    means: Vec<f64>,
    variances: Vec<f64>,
}

fn draw_sample(inst: &LearningInstance, n: u64, rng: &mut ChaCha8Rng) -> SampleStats {
    let m = inst.theta_count;
    let xs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let nf = n as f64;
    let mut means = Vec::with_capacity(m);
    let mut variances = Vec::with_capacity(m);
    for theta in 0..m {
        let shift = inst.loss(theta, xs[0]);
        let (s1, s2) = xs.iter().fold((0.0, 0.0), |(s1, s2), &x| {
            let d = inst.loss(theta, x) - shift;
            (s1 + d, s2 + d * d)
        });
        means.push(shift + s1 / nf);
        variances.push(if n > 1 { (s2 - s1 * s1 / nf).max(0.0) / (nf - 1.0) } else { 0.0 });
    }
    SampleStats { means, variances }
}

/// Runs one trial and returns its full report.
pub fn coverage_trial(inst: &LearningInstance, cfg: &BoundConfig, seed: u64, trial: u64) -> Result<BoundReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let stats = draw_sample(inst, cfg.n, &mut rng);
    let pair = inst.posterior_pair(&stats.means, cfg.n)?;
    let truth = inst.true_means();
    let post = &pair.p;
    let p_hat_mean = post.expect(|t| stats.means[t]);
    let p_mean = post.expect(|t| truth[t]);
    let sample = SampleSummary {
        realized_gap: post.expect(|t| stats.means[t] - truth[t]),
        v_hat: post.expect(|t| stats.variances[t]),
        p_hat_mean: p_hat_mean.clamp(0.0, 1.0),
        p_mean: p_mean.clamp(0.0, 1.0),
    };
    bound_report(&pair, &sample, cfg)
}

/// The bound checks tallied by [`run_coverage`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverageCheck {
    /// `∫Δ_n dP_n > hoeffding_zcp`.
    HoeffdingZcp,
    /// `−∫Δ_n dP_n > hoeffding_zcp`, the same bound applied to `1 − f`.
    HoeffdingZcpReverse,
    Mcallester,
    McallesterReverse,
    /// `|∫Δ_n dP_n| > emp_bernstein`.
    EmpBernstein,
    /// `∫p_θ dP_n > little_kl_bound`.
    LittleKl,
}

impl CoverageCheck {
    pub const ALL: [CoverageCheck; 6] = [
        Self::HoeffdingZcp,
        Self::HoeffdingZcpReverse,
        Self::Mcallester,
        Self::McallesterReverse,
        Self::EmpBernstein,
        Self::LittleKl,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::HoeffdingZcp => "hoeffding_zcp",
            Self::HoeffdingZcpReverse => "hoeffding_zcp_reverse",
            Self::Mcallester => "mcallester",
            Self::McallesterReverse => "mcallester_reverse",
            Self::EmpBernstein => "emp_bernstein",
            Self::LittleKl => "little_kl",
        }
    }

    pub fn fails(&self, r: &BoundReport) -> bool {
        match self {
            Self::HoeffdingZcp => r.realized_gap > r.hoeffding_zcp,
            Self::HoeffdingZcpReverse => -r.realized_gap > r.hoeffding_zcp,
            Self::Mcallester => r.realized_gap > r.mcallester,
            Self::McallesterReverse => -r.realized_gap > r.mcallester,
            Self::EmpBernstein => r.realized_gap.abs() > r.emp_bernstein,
            Self::LittleKl => r.p_mean > r.little_kl_bound,
        }
    }
}

/// Failure tally of one bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageLine {
    pub bound: CoverageCheck,
    pub failures: u64,
    pub empirical_failure_rate: f64,
    pub wilson_upper_99: f64,
    pub pass: bool,
}

/// A trial on which some bound failed, kept with its full report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureEvent {
    pub trial: u64,
    pub bound: CoverageCheck,
    pub report: BoundReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub trials: u64,
    pub delta_budget: f64,
    pub lines: Vec<CoverageLine>,
    pub failure_events: Vec<FailureEvent>,
    /// Per-trial reports in trial order.
    pub reports: Vec<BoundReport>,
}

impl CoverageReport {
    pub fn line(&self, bound: CoverageCheck) -> &CoverageLine {
        self.lines.iter().find(|l| l.bound == bound).expect("every check is tallied")
    }

    pub fn failures_per_bound(&self) -> std::collections::BTreeMap<&'static str, u64> {
        self.lines.iter().map(|l| (l.bound.name(), l.failures)).collect()
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

/// Monte Carlo coverage of every bound: each trial draws `n` points, forms
/// the posterior, and compares the exact realized gap with each bound.
///
/// A bound passes when the one-sided 99% Wilson upper limit of its failure
/// rate is at most `2δ`.
pub fn run_coverage(inst: &LearningInstance, cfg: &BoundConfig, trials: u64, seed: u64) -> Result<CoverageReport> {
    inst.validate()?;
    cfg.validate()?;
    if trials < 100 {
        return Err(invalid(format!("coverage needs at least 100 trials, got {trials}")));
    }
    let reports: Vec<BoundReport> =
        (0..trials).into_par_iter().map(|t| coverage_trial(inst, cfg, seed, t)).collect::<Result<_>>()?;

    let delta_budget = 2.0 * cfg.delta;
    let mut failure_events = Vec::new();
    let mut lines = Vec::new();
    for check in CoverageCheck::ALL {
        let mut failures = 0;
        for (t, r) in reports.iter().enumerate() {
            if check.fails(r) {
                failures += 1;
                failure_events.push(FailureEvent { trial: t as u64, bound: check, report: r.clone() });
            }
        }
        let wilson = wilson_upper_99(failures, trials)?;
        lines.push(CoverageLine {
            bound: check,
            failures,
            empirical_failure_rate: failures as f64 / trials as f64,
            wilson_upper_99: wilson,
            pass: wilson <= delta_budget,
        });
    }
    failure_events.sort_by_key(|e| e.trial);
    Ok(CoverageReport { trials, delta_budget, lines, failure_events, reports })
}

/// One row of the multivariate scaling table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub d: usize,
    pub kl: f64,
    pub tv: f64,
    pub zcp1: f64,
    /// `KL / d^{u/2}`.
    pub kl_ratio: f64,
    /// `TV / d^{−u}`.
    pub tv_ratio: f64,
    /// `ZCP(1) / d^{−u/4}`.
    pub zcp_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub u: f64,
    pub rows: Vec<ScalingRow>,
    /// Fitted log-log slopes of (KL, TV, ZCP(1)) over the upper half of the grid; `None` when undefined.
    pub slopes: Option<[f64; 3]>,
}

fn check_d_grid(d_values: &[usize]) -> Result<()> {
    if d_values.is_empty() {
        return Err(invalid("need at least one dimension"));
    }
    if let Some(d) = d_values.iter().find(|d| **d < 4 || *d % 2 != 0) {
        return Err(invalid(format!("dimensions must be even and at least 4, got {d}")));
    }
    if d_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("dimensions must be strictly increasing"));
    }
    Ok(())
}

/// Exact KL, TV and ZCP(1) on the multivariate instance across `d`, with the
/// fitted scaling exponents.
pub fn divergence_scaling_table(u: f64, d_values: &[usize]) -> Result<ScalingTable> {
    scaling_table_impl(u, d_values, None)
}

/// [`divergence_scaling_table`] with `ln a` forced to a fixed value.
pub fn divergence_scaling_table_with_ln_a(u: f64, d_values: &[usize], ln_a: f64) -> Result<ScalingTable> {
    scaling_table_impl(u, d_values, Some(ln_a))
}

fn scaling_table_impl(u: f64, d_values: &[usize], ln_a: Option<f64>) -> Result<ScalingTable> {
    check_d_grid(d_values)?;
    let mut rows = Vec::new();
    for &d in d_values {
        let pair = match ln_a {
            Some(l) => multivariate_instance_with_ln_a(d, u, l)?,
            None => multivariate_instance(d, u)?,
        };
        let (kl, tv, zcp1) = (pair.kl(), pair.tv(), pair.zcp(1.0)?);
        let df = d as f64;
        rows.push(ScalingRow {
            d,
            kl,
            tv,
            zcp1,
            kl_ratio: kl / df.powf(u / 2.0),
            tv_ratio: tv / df.powf(-u),
            zcp_ratio: zcp1 / df.powf(-u / 4.0),
        });
    }
    let top = &rows[rows.len() / 2..];
    let xs: Vec<f64> = top.iter().map(|r| r.d as f64).collect();
    let fit = |f: fn(&ScalingRow) -> f64| log_log_slope(&xs, &top.iter().map(f).collect::<Vec<_>>());
    let slopes = match (fit(|r| r.kl), fit(|r| r.tv), fit(|r| r.zcp1)) {
        (Ok(a), Ok(b), Ok(c)) => Some([a, b, c]),
        _ => None,
    };
    Ok(ScalingTable { u, rows, slopes })
}

/// One row of the Gaussian mixture check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianRow {
    pub p: f64,
    pub exponent: f64,
    pub kl: f64,
    pub kl_abs_error: f64,
    pub tv: f64,
    pub tv_abs_error: f64,
    /// `1/(2p) − 1.3` (exponent 1) or `1/(2√p) − 1.22` (exponent 3/4).
    pub kl_lower: f64,
    /// `TV·KL` (exponent 1) or `KL·√TV` (exponent 3/4); must not exceed 1/2.
    pub product: f64,
    pub pass: bool,
}

/// Quadrature KL and TV on the mixture instances and the two inequalities stated for them.
pub fn gaussian_instance_check(
    p_values: &[f64],
    sigma1: f64,
    exponent: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<GaussianRow>> {
    p_values
        .iter()
        .map(|&p| {
            if !(p > 0.005 && p <= 0.5) {
                return Err(invalid(format!("mixture weight must lie in (0.005, 0.5], got {p}")));
            }
            let pair = gaussian_instance(p, sigma1, exponent)?;
            let kl = divergence_gaussian(&pair, DivergenceKind::Kl, cfg)?;
            let tv = divergence_gaussian(&pair, DivergenceKind::Tv, cfg)?;
            let (kl_lower, product) = if exponent == 1.0 {
                (1.0 / (2.0 * p) - 1.3, tv.value * kl.value)
            } else {
                (1.0 / (2.0 * p.sqrt()) - 1.22, kl.value * tv.value.sqrt())
            };
            Ok(GaussianRow {
                p,
                exponent,
                kl: kl.value,
                kl_abs_error: kl.abs_error,
                tv: tv.value,
                tv_abs_error: tv.abs_error,
                kl_lower,
                product,
                pass: kl.value >= kl_lower && product <= 0.5,
            })
        })
        .collect()
}

/// Crossing frequency of `W_t ≥ 1/δ` for one δ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VilleRow {
    pub delta: f64,
    pub crossings: u64,
    pub paths: u64,
    pub crossing_rate: f64,
    pub wilson_upper_99: f64,
    pub pass: bool,
}

/// Simulates the mixture bettor on mean-zero coins `ε·s·U` (`ε` Rademacher,
/// `U ~ Uniform[0, 1]`, `s` the magnitude scale) and records how often the
/// wealth ever reaches `1/δ`.
pub fn ville_experiment(n: usize, delta_values: &[f64], paths: u64, seed: u64) -> Result<Vec<VilleRow>> {
    ville_experiment_scaled(n, delta_values, paths, seed, 1.0)
}

/// [`ville_experiment`] with coin magnitudes scaled by `scale ∈ [0, 1]`.
pub fn ville_experiment_scaled(n: usize, delta_values: &[f64], paths: u64, seed: u64, scale: f64) -> Result<Vec<VilleRow>> {
    if paths < 1000 {
        return Err(invalid(format!("Ville experiment needs at least 1000 paths, got {paths}")));
    }
    if n == 0 {
        return Err(invalid("Ville experiment needs n >= 1"));
    }
    if !(0.0..=1.0).contains(&scale) {
        return Err(invalid(format!("coin scale must lie in [0, 1], got {scale}")));
    }
    if let Some(d) = delta_values.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
        return Err(invalid(format!("delta must lie in (0, 1), got {d}")));
    }
    let peaks: Vec<f64> = (0..paths)
        .into_par_iter()
        .map(|path| {
            let coins = mean_zero_coins(n, seed, path, scale);
            let bets = mixture_bets(&coins);
            let mut lw = 0.0f64;
            let mut peak = 0.0f64;
            for (c, b) in coins.iter().zip(&bets) {
                lw += (b * c).ln_1p();
                peak = peak.max(lw);
            }
            peak
        })
        .collect();
    delta_values
        .iter()
        .map(|&delta| {
            let level = -delta.ln();
            let crossings = peaks.iter().filter(|&&p| p >= level).count() as u64;
            let wilson = wilson_upper_99(crossings, paths)?;
            Ok(VilleRow {
                delta,
                crossings,
                paths,
                crossing_rate: crossings as f64 / paths as f64,
                wilson_upper_99: wilson,
                pass: wilson <= delta,
            })
        })
        .collect()
}

/// Mean-zero coin path `path` of the stream family `seed`.
pub fn mean_zero_coins(n: usize, seed: u64, path: u64, scale: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    (0..n)
        .map(|_| {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            sign * scale * rng.gen::<f64>()
        })
        .collect()
}

/// Mean and standard error of `W_n` over independent mean-zero paths.
pub fn terminal_wealth_mean(n: usize, paths: u64, seed: u64) -> (f64, f64) {
    let ws: Vec<f64> = (0..paths)
        .into_par_iter()
        .map(|path| {
            let coins = mean_zero_coins(n, seed, path, 1.0);
            let bets = mixture_bets(&coins);
            coins.iter().zip(&bets).map(|(c, b)| (b * c).ln_1p()).sum::<f64>().exp()
        })
        .collect();
    let k = ws.len() as f64;
    let mean = ws.iter().sum::<f64>() / k;
    let var = ws.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// One row of the ZCP-versus-KL bound comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessRow {
    pub d: usize,
    pub hoeffding_zcp: f64,
    pub mcallester: f64,
    /// `hoeffding_zcp / mcallester`.
    pub ratio: f64,
}

/// Both bounds on the multivariate posterior-versus-prior pairs.
pub fn tightness_comparison(u: f64, d_values: &[usize], cfg: &BoundConfig) -> Result<Vec<TightnessRow>> {
    tightness_impl(u, d_values, cfg, None)
}

/// [`tightness_comparison`] with `ln a` forced to a fixed value (`0` gives `P = P₀`).
pub fn tightness_comparison_with_ln_a(u: f64, d_values: &[usize], cfg: &BoundConfig, ln_a: f64) -> Result<Vec<TightnessRow>> {
    tightness_impl(u, d_values, cfg, Some(ln_a))
}

fn tightness_impl(u: f64, d_values: &[usize], cfg: &BoundConfig, ln_a: Option<f64>) -> Result<Vec<TightnessRow>> {
    cfg.validate()?;
    check_d_grid(d_values)?;
    d_values
        .iter()
        .map(|&d| {
            let pair = match ln_a {
                Some(l) => multivariate_instance_with_ln_a(d, u, l)?,
                None => multivariate_instance(d, u)?,
            };
            let h = hoeffding_zcp_bound(pair.zcp(cfg.hoeffding_c())?, cfg);
            let m = mcallester_baseline(pair.kl(), cfg);
            Ok(TightnessRow { d, hoeffding_zcp: h, mcallester: m, ratio: h / m })
        })
        .collect()
}

/// Random pair of distributions on up to `max_support` atoms with heavy-tailed weights.
pub fn random_discrete_pair(rng: &mut ChaCha8Rng, max_support: usize) -> (DiscreteDistribution, DiscreteDistribution) {
    let m = rng.gen_range(2..=max_support.max(2));
    let mut draw = || -> Vec<f64> { (0..m).map(|_| rng.gen::<f64>().powi(3) + 1e-6).collect() };
    let p = draw();
    let q = draw();
    (make_discrete(&p).expect("positive weights"), make_discrete(&q).expect("positive weights"))
}

/// Uniform coins in `[−1, 1]`, with lengths uniform in `1..=max_len`.
pub fn random_coins(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<f64> {
    let n = rng.gen_range(1..=max_len);
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// Worst slack of one deterministic check in [`self_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub draws: u64,
    pub violations: u64,
    pub worst_slack: f64,
    pub worst_inputs: String,
}

impl CheckLine {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Runs the analytic lemma suite, the asymptotics inequality, and the
/// regret and max-wealth lemma invariants on fuzzed inputs.
pub fn self_check(seed: u64, fault: Option<AnalyticInequality>) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    let suite = analytic_inequality_suite_with_fault(100_000, seed, fault)?;
    for o in suite.outcomes {
        lines.push(CheckLine {
            name: o.inequality.name().to_string(),
            draws: o.draws,
            violations: o.violations,
            worst_slack: o.worst_slack,
            worst_inputs: format_inputs(&o.worst_inputs),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1 << 32);
    let mut asym = CheckLine::new("asymptotics");
    for _ in 0..1000 {
        let (p, q) = random_discrete_pair(&mut rng, 64);
        let pair = DiscretePair::from_weights(p, q)?;
        for n in [25u64, 100, 10_000] {
            let r = asymptotics_check_pair(&pair, n)?;
            asym.record(r.a_value - r.b_over_l, !r.holds, || format!("n={n} m={}", pair.p.len()));
        }
    }
    lines.push(asym);

    let mut regret = CheckLine::new("regret");
    let mut lemma = CheckLine::new("wealth_lemma");
    for i in 0..1000 {
        let coins = random_coins(&mut rng, 512);
        let trace = kt_bettor(&coins)?;
        let n = coins.len() as f64;
        let slack = (2.0 * n.sqrt()).ln() - trace.log_regret();
        regret.record(slack, slack < -1e-12, || format!("sequence={i} n={}", coins.len()));
        let (_, lw) = max_log_wealth(&coins)?;
        let slack = lw - wealth_quadratic_lower(&coins);
        lemma.record(slack, slack < -1e-12, || format!("sequence={i} n={}", coins.len()));
    }
    lines.push(regret);
    lines.push(lemma);
    Ok(lines)
}

impl CheckLine {
    fn new(name: &str) -> Self {
        Self { name: name.to_string(), draws: 0, violations: 0, worst_slack: f64::INFINITY, worst_inputs: String::new() }
    }

    fn record(&mut self, slack: f64, violated: bool, inputs: impl FnOnce() -> String) {
        self.draws += 1;
        if violated {
            self.violations += 1;
        }
        if slack < self.worst_slack {
            self.worst_slack = slack;
            self.worst_inputs = inputs();
        }
    }
}

fn format_inputs(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.17e}")).collect::<Vec<_>>().join(" ")
}
