//! PAC-Bayes bound formulas: the Hoeffding-type ZCP bound, the log-wealth
//! complexity term and its empirical-Bernstein and Bernoulli-kl relaxations,
//! the KL baseline, the finite-`n` asymptotics inequality, and the analytic
//! lemmas the bounds are built from.
//!
//! Bound values are clamped to `[0, 1]`; since losses lie in `[0, 1]`, a
//! value of exactly `1` means the bound is vacuous.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distributions::{DiscreteDistribution, DiscretePair};
use crate::divergences::little_kl_inverse_upper;
use crate::error::{invalid, Result};
use crate::numeric::positive_part;

/// Sample size, failure probability and Rényi order shared by every bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConfig {
    pub n: u64,
    pub delta: f64,
    pub alpha: f64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self { n: 1000, delta: 0.05, alpha: 2.0 }
    }
}

impl BoundConfig {
    pub fn new(n: u64, delta: f64, alpha: f64) -> Result<Self> {
        let cfg = Self { n, delta, alpha };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(invalid("sample size n must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.alpha > 1.0 && self.alpha.is_finite()) {
            return Err(invalid(format!("alpha must exceed 1, got {}", self.alpha)));
        }
        Ok(())
    }

    /// ZCP scale in the Hoeffding-type bound, `√(2n)/δ`.
    pub fn hoeffding_c(&self) -> f64 {
        (2.0 * self.n as f64).sqrt() / self.delta
    }

    /// ZCP scale in the log-wealth complexity term, `√2·n^2.5/δ`.
    pub fn log_wealth_c(&self) -> f64 {
        std::f64::consts::SQRT_2 * (self.n as f64).powf(2.5) / self.delta
    }
}

/// Every divergence, bound and realized quantity for one (sample, posterior) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub d_kl: f64,
    pub d_tv: f64,
    pub d_alpha: f64,
    pub d_zcp_thm1: f64,
    pub d_zcp_thm2: f64,
    pub comp_n: f64,
    pub hoeffding_zcp: f64,
    pub mcallester: f64,
    pub emp_bernstein: f64,
    pub little_kl_bound: f64,
    pub realized_gap: f64,
    pub v_hat: f64,
    pub p_hat_mean: f64,
    pub p_mean: f64,
}

impl BoundReport {
    /// Column names in serialization order.
    pub const FIELDS: [&'static str; 14] = [
        "d_kl",
        "d_tv",
        "d_alpha",
        "d_zcp_thm1",
        "d_zcp_thm2",
        "comp_n",
        "hoeffding_zcp",
        "mcallester",
        "emp_bernstein",
        "little_kl_bound",
        "realized_gap",
        "v_hat",
        "p_hat_mean",
        "p_mean",
    ];

    pub fn values(&self) -> [f64; 14] {
        [
            self.d_kl,
            self.d_tv,
            self.d_alpha,
            self.d_zcp_thm1,
            self.d_zcp_thm2,
            self.comp_n,
            self.hoeffding_zcp,
            self.mcallester,
            self.emp_bernstein,
            self.little_kl_bound,
            self.realized_gap,
            self.v_hat,
            self.p_hat_mean,
            self.p_mean,
        ]
    }
}

/// Data-side quantities a [`BoundReport`] needs besides the two distributions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    /// `∫Δ_n dP_n`, the normalized gap (empirical minus true mean).
    pub realized_gap: f64,
    pub v_hat: f64,
    pub p_hat_mean: f64,
    pub p_mean: f64,
}

/// Evaluates all divergences and bounds for a posterior against a prior.
pub fn bound_report(pair: &DiscretePair, sample: &SampleSummary, cfg: &BoundConfig) -> Result<BoundReport> {
    cfg.validate()?;
    if cfg.n < 2 {
        return Err(invalid("the log-wealth bounds need n >= 2"));
    }
    let d_kl = pair.kl();
    let d_tv = pair.tv();
    let d_alpha = pair.renyi(cfg.alpha)?;
    let d_zcp_thm1 = pair.zcp(cfg.hoeffding_c())?;
    let d_zcp_thm2 = pair.zcp(cfg.log_wealth_c())?;
    let comp = comp_n(d_alpha, d_zcp_thm2, cfg)?;
    Ok(BoundReport {
        d_kl,
        d_tv,
        d_alpha,
        d_zcp_thm1,
        d_zcp_thm2,
        comp_n: comp,
        hoeffding_zcp: hoeffding_zcp_bound(d_zcp_thm1, cfg),
        mcallester: mcallester_baseline(d_kl, cfg),
        emp_bernstein: empirical_bernstein_bound(comp, sample.v_hat, cfg.n),
        little_kl_bound: little_kl_mean_bound(sample.p_hat_mean, comp, cfg.n),
        realized_gap: sample.realized_gap,
        v_hat: sample.v_hat,
        p_hat_mean: sample.p_hat_mean,
        p_mean: sample.p_mean,
    })
}

fn clamp_unit(x: f64) -> f64 {
    if x.is_nan() { 1.0 } else { x.clamp(0.0, 1.0) }
}

/// `(√2·D_ZCP + 2 + √ln(2√n/δ))/√n` with `D_ZCP` taken at `c = √(2n)/δ`.
pub fn hoeffding_zcp_bound(d_zcp_at_c: f64, cfg: &BoundConfig) -> f64 {
    clamp_unit(hoeffding_zcp_raw(d_zcp_at_c, cfg))
}

/// [`hoeffding_zcp_bound`] before clamping to `[0, 1]`.
pub fn hoeffding_zcp_raw(d_zcp_at_c: f64, cfg: &BoundConfig) -> f64 {
    let n = cfg.n as f64;
    let log_term = (2.0 * n.sqrt() / cfg.delta).ln();
    (std::f64::consts::SQRT_2 * d_zcp_at_c + 2.0 + log_term.sqrt()) / n.sqrt()
}

/// `√((KL + ln(2√n/δ))/(2n))`, the classical KL-based baseline.
pub fn mcallester_baseline(d_kl: f64, cfg: &BoundConfig) -> f64 {
    clamp_unit(mcallester_raw(d_kl, cfg))
}

/// [`mcallester_baseline`] before clamping to `[0, 1]`.
pub fn mcallester_raw(d_kl: f64, cfg: &BoundConfig) -> f64 {
    let n = cfg.n as f64;
    ((d_kl + (2.0 * n.sqrt() / cfg.delta).ln()) / (2.0 * n)).sqrt()
}

/// The log-wealth complexity term
/// `(1/√2)·√(ln(4n²/δ) + (α/(α−1)) ln n + D_α)·D_ZCP + ln(2e²√n(1 + 4n²/δ)) + δ/(n(n+1))`
/// with `D_ZCP` taken at `c = √2·n^2.5/δ`.
pub fn comp_n(d_alpha: f64, d_zcp_at_c: f64, cfg: &BoundConfig) -> Result<f64> {
    if cfg.n < 2 {
        return Err(invalid(format!("complexity term needs n >= 2, got {}", cfg.n)));
    }
    if !(cfg.alpha > 1.0) {
        return Err(invalid(format!("alpha must exceed 1, got {}", cfg.alpha)));
    }
    let n = cfg.n as f64;
    let delta = cfg.delta;
    let four_n2_over_delta = 4.0 * n * n / delta;
    let radicand = four_n2_over_delta.ln() + cfg.alpha / (cfg.alpha - 1.0) * n.ln() + d_alpha;
    let lead = if d_zcp_at_c == 0.0 { 0.0 } else { radicand.sqrt() * d_zcp_at_c / std::f64::consts::SQRT_2 };
    let log_term = std::f64::consts::LN_2 + 2.0 + 0.5 * n.ln() + four_n2_over_delta.ln_1p();
    Ok(lead + log_term + delta / (n * (n + 1.0)))
}

/// `√(2·comp·V̂)/(√n − 2comp/√n)₊ + 2comp/(n − 2comp)₊`, with `x/0₊ = +∞`.
pub fn empirical_bernstein_bound(comp: f64, v_hat: f64, n: u64) -> f64 {
    clamp_unit(empirical_bernstein_raw(comp, v_hat, n))
}

/// [`empirical_bernstein_bound`] before clamping.
pub fn empirical_bernstein_raw(comp: f64, v_hat: f64, n: u64) -> f64 {
    if comp == 0.0 {
        return 0.0;
    }
    let n = n as f64;
    let ratio = |num: f64, den: f64| {
        let den = positive_part(den);
        if den == 0.0 { f64::INFINITY } else { num / den }
    };
    let slow = ratio((2.0 * comp * v_hat).sqrt(), n.sqrt() - 2.0 * comp / n.sqrt());
    let fast = ratio(2.0 * comp, n - 2.0 * comp);
    slow + fast
}

/// `V̂ = (1/(n(n−1))) Σ_{i<j} ∫(f(θ,X_i) − f(θ,X_j))² dP(θ)`.
///
/// `losses[i][θ]` is the loss of atom `θ` on example `i`. Uses
/// `Σ_{i<j}(a_i − a_j)² = n Σ (a_i − ā)²` per atom.
pub fn expected_sample_variance(losses: &[Vec<f64>], posterior: &DiscreteDistribution) -> Result<f64> {
    let n = losses.len();
    if n < 2 {
        return Err(invalid(format!("sample variance needs n >= 2, got {n}")));
    }
    let m = posterior.len();
    if let Some(row) = losses.iter().find(|row| row.len() != m) {
        return Err(invalid(format!("loss row has {} entries for {m} posterior atoms", row.len())));
    }
    let nf = n as f64;
    let per_atom = |theta: usize| {
        // shifted by the first loss so that constant columns give exactly 0
        let shift = losses[0][theta];
        let (s1, s2) = losses.iter().fold((0.0, 0.0), |(s1, s2), row| {
            let d = row[theta] - shift;
            (s1 + d, s2 + d * d)
        });
        (s2 - s1 * s1 / nf).max(0.0) / (nf - 1.0)
    };
    Ok(posterior.expect(per_atom))
}

/// Upper bound on `∫p_θ dP_n`: the largest `q` with `kl(p̂, q) ≤ comp/n`.
pub fn little_kl_mean_bound(p_hat_mean: f64, comp: f64, n: u64) -> f64 {
    little_kl_inverse_upper(p_hat_mean, comp / n as f64)
}

/// Both sides of the finite-`n` inequality `B_n/L(n) ≤ A_n` behind the asymptotic rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsCheck {
    pub n: u64,
    pub b_over_l: f64,
    pub a_value: f64,
    pub holds: bool,
}

/// `L(n) = √(2 ln n · ln(en) · ln(2 + 2√2·n^4.5))`.
pub fn dominating_log_term(n: f64) -> f64 {
    let inner = (2.0 + 2.0 * std::f64::consts::SQRT_2 * n.powf(4.5)).ln();
    (2.0 * n.ln() * (1.0 + n.ln()) * inner).sqrt()
}

/// Checks `B_n(P, P₀)/L(n) ≤ A_n(P, P₀)` where `B_n` is the complexity term at
/// `δ = 1/n²`, `α_n = 1 + 1/ln n`, and
/// `A_n = 2 + (2 + √D_{α_n})(D_ZCP(·;1) + D_TV)`.
pub fn asymptotics_inequality_check(
    p: &DiscreteDistribution,
    p0: &DiscreteDistribution,
    n: u64,
) -> Result<AsymptoticsCheck> {
    let pair = DiscretePair::from_weights(p.clone(), p0.clone())?;
    asymptotics_check_pair(&pair, n)
}

/// [`asymptotics_inequality_check`] on a pair with exact log-ratios.
pub fn asymptotics_check_pair(pair: &DiscretePair, n: u64) -> Result<AsymptoticsCheck> {
    if n < 25 {
        return Err(invalid(format!("asymptotics check needs n >= 25, got {n}")));
    }
    let nf = n as f64;
    let alpha_n = 1.0 + 1.0 / nf.ln();
    let d_alpha = pair.renyi(alpha_n)?;
    if d_alpha.is_infinite() || pair.kl().is_infinite() {
        return Ok(AsymptoticsCheck { n, b_over_l: f64::INFINITY, a_value: f64::INFINITY, holds: true });
    }
    let cfg = BoundConfig { n, delta: 1.0 / (nf * nf), alpha: alpha_n };
    let b_n = comp_n(d_alpha, pair.zcp(cfg.log_wealth_c())?, &cfg)?;
    let b_over_l = b_n / dominating_log_term(nf);
    let a_value = 2.0 + (2.0 + d_alpha.sqrt()) * (pair.zcp(1.0)? + pair.tv());
    Ok(AsymptoticsCheck { n, b_over_l, a_value, holds: b_over_l <= a_value })
}

/// `|y|·√(a ln(1 + a y²/b²)) − b`, an upper bound on the convex conjugate of `x ↦ b e^{x²/(2a)}` at `y`.
pub fn fenchel_dual_bound(a: f64, b: f64, y: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(invalid(format!("Fenchel bound needs a, b > 0, got a = {a}, b = {b}")));
    }
    if y == 0.0 {
        return Ok(-b);
    }
    Ok(y.abs() * (a * (a * y * y / (b * b)).ln_1p()).sqrt() - b)
}

/// `sup_x (x y − b e^{x²/(2a)})`, located by bisection on the stationarity
/// condition `y = (b x/a) e^{x²/(2a)}`.
pub fn fenchel_conjugate(a: f64, b: f64, y: f64) -> f64 {
    let target = y.abs();
    if target == 0.0 {
        return -b;
    }
    let stationarity = |x: f64| b * x / a * (x * x / (2.0 * a)).exp() - target;
    let mut hi = (a * target / b).min((2.0 * a * (1.0 + target)).sqrt()).max(1e-300);
    while stationarity(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if stationarity(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    [lo, hi]
        .iter()
        .map(|&x| x * target - b * (x * x / (2.0 * a)).exp())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `βx + (ln(1−|β|) + |β|) x²`, the lower bound on `ln(1 + βx)`.
pub fn fan_lower(beta: f64, x: f64) -> f64 {
    beta * x + ((-beta.abs()).ln_1p() + beta.abs()) * x * x
}

/// `max_{β∈[−1,1]} aβ + b(ln(1−|β|) + |β|) = |a| − b ln(1 + |a|/b)`, attained at `β = a/(|a| + b)`.
pub fn max_beta_objective(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        return a.abs();
    }
    b * x_minus_ln1p(a.abs() / b)
}

/// `x − ln(1 + x)` for `x ≥ 0`, by its alternating series where direct
/// subtraction would cancel.
fn x_minus_ln1p(x: f64) -> f64 {
    if x >= 0.5 {
        return x - x.ln_1p();
    }
    let (mut sum, mut power) = (0.0, x);
    for k in 2..200 {
        power *= -x;
        let term = -power / k as f64;
        sum += term;
        if term.abs() <= 1e-17 * sum {
            break;
        }
    }
    sum
}

/// `a²/((4/3)|a| + 2b)`, the lower bound on [`max_beta_objective`].
pub fn max_beta_lower(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    a * a / (4.0 / 3.0 * a.abs() + 2.0 * b)
}

/// The analytic inequalities checked by [`analytic_inequality_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticInequality {
    Fan,
    MaxBeta,
    Fenchel,
}

impl AnalyticInequality {
    pub const ALL: [AnalyticInequality; 3] = [Self::Fan, Self::MaxBeta, Self::Fenchel];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Fan => "fan",
            Self::MaxBeta => "max_beta",
            Self::Fenchel => "fenchel",
        }
    }

    /// Violation threshold on the slack.
    pub fn tolerance(&self) -> f64 {
        match self {
            Self::Fan | Self::MaxBeta => 1e-9,
            Self::Fenchel => 1e-6,
        }
    }
}

/// Worst slack and violation count for one inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityOutcome {
    pub inequality: AnalyticInequality,
    pub draws: u64,
    pub violations: u64,
    pub worst_slack: f64,
    /// Inputs at the worst slack.
    pub worst_inputs: Vec<f64>,
}

impl InequalityOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSuiteReport {
    pub outcomes: Vec<InequalityOutcome>,
}

impl AnalyticSuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(InequalityOutcome::passed)
    }
}

/// Fuzz-checks Fan's inequality, the max-β lemma and the Fenchel bound on
/// `trials` random draws each.
pub fn analytic_inequality_suite(trials: u64, seed: u64) -> Result<AnalyticSuiteReport> {
    analytic_inequality_suite_with_fault(trials, seed, None)
}

/// [`analytic_inequality_suite`] with the sign of one slack flipped, so
/// callers can confirm that violations are detected and reported.
pub fn analytic_inequality_suite_with_fault(
    trials: u64,
    seed: u64,
    flip: Option<AnalyticInequality>,
) -> Result<AnalyticSuiteReport> {
    if trials < 1 {
        return Err(invalid("analytic suite needs at least one trial"));
    }
    let mut outcomes = Vec::new();
    for (k, ineq) in AnalyticInequality::ALL.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let sign = if flip == Some(ineq) { -1.0 } else { 1.0 };
        let mut out = InequalityOutcome {
            inequality: ineq,
            draws: trials,
            violations: 0,
            worst_slack: f64::INFINITY,
            worst_inputs: Vec::new(),
        };
        for i in 0..trials {
            let (inputs, slack) = match ineq {
                AnalyticInequality::Fan => {
                    let (beta, x): (f64, f64) = if i == 0 { (0.0, rng.gen_range(-1.0..=1.0)) } else { (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..=1.0)) };
                    (vec![beta, x], (beta * x).ln_1p() - fan_lower(beta, x))
                }
                AnalyticInequality::MaxBeta => {
                    let a = if i == 0 { 0.0 } else { rng.gen_range(-10.0..10.0) };
                    let b = rng.gen_range(0.0..10.0);
                    (vec![a, b], max_beta_objective(a, b) - max_beta_lower(a, b))
                }
                AnalyticInequality::Fenchel => {
                    let a = 10f64.powf(rng.gen_range(-2.0..2.0));
                    let b = 10f64.powf(rng.gen_range(-2.0..2.0));
                    let y = if i == 0 { 0.0 } else { rng.gen_range(-50.0..50.0) };
                    (vec![a, b, y], fenchel_dual_bound(a, b, y)? - fenchel_conjugate(a, b, y))
                }
            };
            let slack = sign * slack + 0.0;
            if slack < -ineq.tolerance() || slack.is_nan() {
                out.violations += 1;
            }
            if slack < out.worst_slack || slack.is_nan() {
                out.worst_slack = slack;
                out.worst_inputs = inputs;
            }
        }
        outcomes.push(out);
    }
    Ok(AnalyticSuiteReport { outcomes })
}
