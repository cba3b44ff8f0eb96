//! Distribution families: finite-support distributions, the Bernoulli and
//! multivariate instance constructors, and the two-component Gaussian
//! mixture pair.
//!
//! Instance constructors return a [`DiscretePair`] that carries the exact
//! per-atom log-ratios `ln(p_i / q_i)` alongside the weights, because the
//! ratio parameter `a` is only ever handled through `ln a`: the instances use
//! `a = exp(1/p²)` and `a = exp(d^{1.5u})`, for which `p/a` underflows.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numeric::{ln_normal_pdf, log_add_exp};

/// Tolerance on `Σ w_i = 1` for a validated distribution.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Probability vector over a finite support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct DiscreteDistribution {
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawWeights {
    weights: Vec<f64>,
}

impl TryFrom<RawWeights> for DiscreteDistribution {
    type Error = crate::Error;

    fn try_from(raw: RawWeights) -> Result<Self> {
        DiscreteDistribution::new(raw.weights)
    }
}

impl From<DiscreteDistribution> for RawWeights {
    fn from(d: DiscreteDistribution) -> Self {
        RawWeights { weights: d.weights }
    }
}

impl DiscreteDistribution {
    /// Wraps weights that must already sum to one (within [`SUM_TOLERANCE`]).
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_entries(&weights)?;
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(invalid(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { weights })
    }

    /// Uniform distribution on `m` atoms.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(invalid("support size must be at least 1"));
        }
        Ok(Self { weights: vec![1.0 / m as f64; m] })
    }

    /// Point mass on atom `index` of an `m`-atom support.
    pub fn point_mass(m: usize, index: usize) -> Result<Self> {
        if index >= m {
            return Err(invalid(format!("atom {index} outside support of size {m}")));
        }
        let mut weights = vec![0.0; m];
        weights[index] = 1.0;
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ_i w_i g(i)`.
    pub fn expect(&self, mut g: impl FnMut(usize) -> f64) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, &w)| w * g(i))
            .sum()
    }
}

fn check_entries(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(invalid("weight vector is empty"));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(invalid(format!("weights must be finite and nonnegative, got {w}")));
    }
    Ok(())
}

/// Normalizes a nonnegative weight vector into a distribution.
pub fn make_discrete(weights: &[f64]) -> Result<DiscreteDistribution> {
    check_entries(weights)?;
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(invalid("weights are all zero"));
    }
    let mut normalized: Vec<f64> = weights.iter().map(|w| w / total).collect();
    // push the rounding residue onto the heaviest atom so the sum is 1 to a few ulps
    let residue = 1.0 - normalized.iter().sum::<f64>();
    if let Some(heaviest) = normalized
        .iter_mut()
        .max_by(|a, b| a.partial_cmp(b).expect("finite weights"))
    {
        *heaviest = (*heaviest + residue).max(0.0);
    }
    Ok(DiscreteDistribution { weights: normalized })
}

/// Two distributions on a common support with exact log-ratios `ln(p_i/q_i)`.
///
/// Atoms with `p_i = 0` carry `-∞`; atoms with `q_i = 0 < p_i` carry `+∞`
/// unless the constructor knows the exact finite ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePair {
    pub p: DiscreteDistribution,
    pub q: DiscreteDistribution,
    pub ln_ratio: Vec<f64>,
}

impl DiscretePair {
    /// Pairs two distributions, deriving log-ratios from their weights.
    pub fn from_weights(p: DiscreteDistribution, q: DiscreteDistribution) -> Result<Self> {
        if p.len() != q.len() {
            return Err(invalid(format!("support sizes differ: {} vs {}", p.len(), q.len())));
        }
        let ln_ratio = ln_ratios(&p, &q);
        Ok(Self { p, q, ln_ratio })
    }
}

/// `ln(p_i/q_i)` per atom, with `-∞` when `p_i = 0` and `+∞` when `q_i = 0 < p_i`.
pub fn ln_ratios(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Vec<f64> {
    p.weights()
        .iter()
        .zip(q.weights())
        .map(|(&pi, &qi)| {
            if pi == 0.0 {
                f64::NEG_INFINITY
            } else if qi == 0.0 {
                f64::INFINITY
            } else {
                pi.ln() - qi.ln()
            }
        })
        .collect()
}

/// `P = (p, 1−p)`, `Q = (p/a, 1−p/a)` with the ratio supplied as `ln a ≥ 0`.
pub fn bernoulli_instance(p: f64, ln_a: f64) -> Result<DiscretePair> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("bernoulli instance needs 0 < p < 1, got {p}")));
    }
    if !(ln_a >= 0.0 && ln_a.is_finite()) {
        return Err(invalid(format!("ln a must be finite and nonnegative, got {ln_a}")));
    }
    let q1 = p * (-ln_a).exp();
    let p_dist = DiscreteDistribution { weights: vec![p, 1.0 - p] };
    let q_dist = DiscreteDistribution { weights: vec![q1, 1.0 - q1] };
    // ln((1−p)/(1−p/a)); the denominator argument underflows gracefully
    let tail = (-p).ln_1p() - (-q1).ln_1p();
    Ok(DiscretePair { p: p_dist, q: q_dist, ln_ratio: vec![ln_a, tail] })
}

/// The `d`-atom instance with `p = d^{−1−u}` and `ln a = d^{1.5u}`.
pub fn multivariate_instance(d: usize, u: f64) -> Result<DiscretePair> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(invalid(format!("u must be positive, got {u}")));
    }
    let df = d as f64;
    multivariate_instance_with_ln_a(d, u, df.powf(1.5 * u))
}

/// [`multivariate_instance`] with an explicit `ln a` (`0` forces `P = Q`).
pub fn multivariate_instance_with_ln_a(d: usize, u: f64, ln_a: f64) -> Result<DiscretePair> {
    if d < 2 || !d.is_multiple_of(2) {
        return Err(invalid(format!("d must be even and at least 2, got {d}")));
    }
    if !(u > 0.0 && u.is_finite()) {
        return Err(invalid(format!("u must be positive, got {u}")));
    }
    if !(ln_a >= 0.0 && ln_a.is_finite()) {
        return Err(invalid(format!("ln a must be finite and nonnegative, got {ln_a}")));
    }
    let df = d as f64;
    let half = d / 2;
    let p = df.powf(-1.0 - u);
    let head_mass = p * df / 2.0;
    if head_mass >= 1.0 {
        return Err(invalid(format!("p·d/2 = {head_mass} must be below 1")));
    }
    let q = p * (-ln_a).exp();
    let q_head_mass = q * df / 2.0;

    let p_tail = (1.0 - head_mass) / half as f64;
    let q_tail = (1.0 - q_head_mass) / half as f64;
    let tail_ratio = (-head_mass).ln_1p() - (-q_head_mass).ln_1p();

    let mut pw = vec![p; half];
    pw.extend(std::iter::repeat_n(p_tail, half));
    let mut qw = vec![q; half];
    qw.extend(std::iter::repeat_n(q_tail, half));
    let mut ln_ratio = vec![ln_a; half];
    ln_ratio.extend(std::iter::repeat_n(tail_ratio, half));

    Ok(DiscretePair {
        p: DiscreteDistribution { weights: pw },
        q: DiscreteDistribution { weights: qw },
        ln_ratio,
    })
}

/// `P = p·N(mu, σ₁²) + (1−p)·N(mu, σ₂²)` against `Q = N(mu, σ₂²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMixture", into = "RawMixture")]
pub struct GaussianMixturePair {
    mu: f64,
    sigma1: f64,
    sigma2: f64,
    p: f64,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
struct RawMixture {
    mu: f64,
    sigma1: f64,
    sigma2: f64,
    p: f64,
}

impl TryFrom<RawMixture> for GaussianMixturePair {
    type Error = crate::Error;

    fn try_from(r: RawMixture) -> Result<Self> {
        GaussianMixturePair::new(r.mu, r.sigma1, r.sigma2, r.p)
    }
}

impl From<GaussianMixturePair> for RawMixture {
    fn from(g: GaussianMixturePair) -> Self {
        RawMixture { mu: g.mu, sigma1: g.sigma1, sigma2: g.sigma2, p: g.p }
    }
}

impl GaussianMixturePair {
    pub fn new(mu: f64, sigma1: f64, sigma2: f64, p: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(invalid(format!("mu must be finite, got {mu}")));
        }
        if !(sigma1 > 0.0 && sigma1.is_finite() && sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(invalid(format!("standard deviations must be positive, got {sigma1}, {sigma2}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("mixture weight must lie in [0, 1], got {p}")));
        }
        Ok(Self { mu, sigma1, sigma2, p })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Same pair with the narrow component widened to `sigma2` (tests use this to force `P = Q`).
    pub fn with_sigma2(&self, sigma2: f64) -> Result<Self> {
        Self::new(self.mu, self.sigma1, sigma2, self.p)
    }

    /// `ln dP/dx`.
    pub fn ln_p_density(&self, x: f64) -> f64 {
        let wide = if self.p > 0.0 {
            self.p.ln() + ln_normal_pdf(x, self.mu, self.sigma1)
        } else {
            f64::NEG_INFINITY
        };
        let narrow = if self.p < 1.0 {
            (-self.p).ln_1p() + ln_normal_pdf(x, self.mu, self.sigma2)
        } else {
            f64::NEG_INFINITY
        };
        log_add_exp(wide, narrow)
    }

    /// `ln dQ/dx`.
    pub fn ln_q_density(&self, x: f64) -> f64 {
        ln_normal_pdf(x, self.mu, self.sigma2)
    }
}

/// Builds the mixture pair with `σ₂ = σ₁ · p^exponent` and `mu = 0`.
///
/// `exponent` is `1` or `0.75`, the two scalings for which the KL/TV
/// trade-off inequalities are stated.
pub fn gaussian_instance(p: f64, sigma1: f64, exponent: f64) -> Result<GaussianMixturePair> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("gaussian instance needs 0 < p < 1, got {p}")));
    }
    if exponent != 1.0 && exponent != 0.75 {
        return Err(invalid(format!("exponent must be 1 or 0.75, got {exponent}")));
    }
    GaussianMixturePair::new(0.0, sigma1, sigma1 * p.powf(exponent), p)
}

/// `ln(dP/dQ)(x)` evaluated in log-space.
pub fn density_ratio_log(pair: &GaussianMixturePair, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(invalid(format!("density ratio needs a finite point, got {x}")));
    }
    Ok(pair.ln_p_density(x) - pair.ln_q_density(x))
}

/// Tagged JSON form: `{"type":"discrete","weights":[…]}` or
/// `{"type":"gaussian_mixture","mu":…,"sigma1":…,"sigma2":…,"p":…}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Distribution {
    Discrete(DiscreteDistribution),
    GaussianMixture(GaussianMixturePair),
}

/// Formats a weight with 17 significant digits, the CSV convention for weight vectors.
pub fn format_weight(w: f64) -> String {
    format!("{w:.16e}")
}
