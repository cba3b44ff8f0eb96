//! KL, total variation, Rényi and ZCP divergences on finite supports and on
//! the Gaussian mixture pair, Bernoulli little-kl with its upper inverse, and
//! the inequalities that bound ZCP by KL and TV.
//!
//! Every discrete routine works from per-atom log-ratios `l_i = ln(p_i/q_i)`
//! so that the instance families with ratios like `exp(d^{1.5u})` stay finite.

use serde::{Deserialize, Serialize};

use crate::distributions::{ln_ratios, DiscreteDistribution, DiscretePair, GaussianMixturePair};
use crate::error::{invalid, Result};
use crate::numeric::{ln_abs_expm1, log_sum_exp, zcp_log_factor};
use crate::quadrature::{adaptive_simpson, Integral};

/// Which divergence to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DivergenceKind {
    Kl,
    Tv,
    Renyi { alpha: f64 },
    Zcp { c: f64 },
    LittleKl,
}

impl DivergenceKind {
    pub fn name(&self) -> &'static str {
        match self {
            DivergenceKind::Kl => "kl",
            DivergenceKind::Tv => "tv",
            DivergenceKind::Renyi { .. } => "renyi",
            DivergenceKind::Zcp { .. } => "zcp",
            DivergenceKind::LittleKl => "little_kl",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            DivergenceKind::Renyi { alpha } => Some(*alpha),
            _ => None,
        }
    }

    pub fn c(&self) -> Option<f64> {
        match self {
            DivergenceKind::Zcp { c } => Some(*c),
            _ => None,
        }
    }
}

/// A computed divergence with its absolute error estimate (0 for exact sums).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceValue {
    pub kind: DivergenceKind,
    pub value: f64,
    pub abs_error: f64,
}

/// Integration domain and accuracy for the Gaussian mixture divergences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub half_width_in_sigma1: f64,
    pub rel_tol: f64,
    pub max_subdivisions: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { half_width_in_sigma1: 20.0, rel_tol: 1e-8, max_subdivisions: 60 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_width_in_sigma1 >= 8.0 && self.half_width_in_sigma1.is_finite()) {
            return Err(invalid(format!("half width must be at least 8 sigma1, got {}", self.half_width_in_sigma1)));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(invalid(format!("rel_tol must lie in (0, 1e-3], got {}", self.rel_tol)));
        }
        if self.max_subdivisions == 0 {
            return Err(invalid("max_subdivisions must be positive"));
        }
        Ok(())
    }
}

fn check_sizes(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<()> {
    if p.len() != q.len() {
        return Err(invalid(format!("support sizes differ: {} vs {}", p.len(), q.len())));
    }
    Ok(())
}

fn resolve_ratios<'a>(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    ln_ratio_override: Option<&'a [f64]>,
    owned: &'a mut Vec<f64>,
) -> Result<&'a [f64]> {
    check_sizes(p, q)?;
    match ln_ratio_override {
        Some(l) if l.len() != p.len() => {
            Err(invalid(format!("{} log-ratios supplied for {} atoms", l.len(), p.len())))
        }
        Some(l) => Ok(l),
        None => {
            *owned = ln_ratios(p, q);
            Ok(owned.as_slice())
        }
    }
}

/// `|p_i − q_i|` from whichever side keeps full relative precision.
fn abs_diff(pi: f64, qi: f64, l: f64) -> f64 {
    if l >= 0.0 {
        pi * -(-l).exp_m1()
    } else {
        qi * -l.exp_m1()
    }
}

/// `Σ p_i ln(p_i/q_i)`; `+∞` when `p_i > 0 = q_i` for some atom.
pub fn kl_discrete(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    kl_with_ratios(p, q, None)
}

/// [`kl_discrete`] with exact per-atom log-ratios supplied by the caller.
pub fn kl_with_ratios(p: &DiscreteDistribution, q: &DiscreteDistribution, ln_ratio: Option<&[f64]>) -> Result<f64> {
    let mut owned = Vec::new();
    let l = resolve_ratios(p, q, ln_ratio, &mut owned)?;
    let mut total = 0.0;
    for (&pi, &li) in p.weights().iter().zip(l) {
        if pi == 0.0 {
            continue;
        }
        if li == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        total += pi * li;
    }
    Ok(total.max(0.0))
}

/// `½ Σ |p_i − q_i|`.
pub fn tv_discrete(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    tv_with_ratios(p, q, None)
}

/// [`tv_discrete`] with exact per-atom log-ratios.
pub fn tv_with_ratios(p: &DiscreteDistribution, q: &DiscreteDistribution, ln_ratio: Option<&[f64]>) -> Result<f64> {
    let mut owned = Vec::new();
    let l = resolve_ratios(p, q, ln_ratio, &mut owned)?;
    let sum: f64 = p
        .weights()
        .iter()
        .zip(q.weights())
        .zip(l)
        .map(|((&pi, &qi), &li)| if pi == 0.0 && qi == 0.0 { 0.0 } else { abs_diff(pi, qi, li) })
        .sum();
    Ok((0.5 * sum).clamp(0.0, 1.0))
}

/// `(1/(α−1)) ln Σ p_i^α q_i^{1−α}`, evaluated as a log-sum-exp.
pub fn renyi_discrete(p: &DiscreteDistribution, q: &DiscreteDistribution, alpha: f64) -> Result<f64> {
    renyi_with_ratios(p, q, alpha, None)
}

/// [`renyi_discrete`] with exact per-atom log-ratios.
pub fn renyi_with_ratios(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    alpha: f64,
    ln_ratio: Option<&[f64]>,
) -> Result<f64> {
    if alpha == 1.0 {
        return Err(invalid("Rényi order 1 is the KL divergence; use kl_discrete"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("Rényi order must be positive and finite, got {alpha}")));
    }
    let mut owned = Vec::new();
    let l = resolve_ratios(p, q, ln_ratio, &mut owned)?;
    let terms: Vec<f64> = p
        .weights()
        .iter()
        .zip(l)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &li)| {
            if li == f64::INFINITY {
                if alpha > 1.0 { f64::INFINITY } else { f64::NEG_INFINITY }
            } else {
                pi.ln() + (alpha - 1.0) * li
            }
        })
        .collect();
    let ln_sum = log_sum_exp(&terms);
    Ok((ln_sum / (alpha - 1.0)).max(0.0))
}

/// `Σ q_i |r_i − 1| √ln(1 + c²(r_i − 1)²)` with `r_i = p_i/q_i`.
///
/// Pass `ln_ratio_override` when the weights alone lose the ratio (for
/// instance when `q_i = p_i/a` underflows).
pub fn zcp_discrete(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    c: f64,
    ln_ratio_override: Option<&[f64]>,
) -> Result<f64> {
    if !(c >= 0.0) {
        return Err(invalid(format!("ZCP scale c must be nonnegative, got {c}")));
    }
    let mut owned = Vec::new();
    let l = resolve_ratios(p, q, ln_ratio_override, &mut owned)?;
    if c == 0.0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for ((&pi, &qi), &li) in p.weights().iter().zip(q.weights()).zip(l) {
        if (pi == 0.0 && qi == 0.0) || li == 0.0 {
            continue;
        }
        if li == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        total += abs_diff(pi, qi, li) * zcp_log_factor(c, ln_abs_expm1(li)).sqrt();
    }
    Ok(total)
}

impl DiscretePair {
    pub fn kl(&self) -> f64 {
        kl_with_ratios(&self.p, &self.q, Some(&self.ln_ratio)).expect("pair is consistent")
    }

    pub fn tv(&self) -> f64 {
        tv_with_ratios(&self.p, &self.q, Some(&self.ln_ratio)).expect("pair is consistent")
    }

    pub fn renyi(&self, alpha: f64) -> Result<f64> {
        renyi_with_ratios(&self.p, &self.q, alpha, Some(&self.ln_ratio))
    }

    pub fn zcp(&self, c: f64) -> Result<f64> {
        zcp_discrete(&self.p, &self.q, c, Some(&self.ln_ratio))
    }

    /// Evaluates any discrete divergence kind.
    pub fn divergence(&self, kind: DivergenceKind) -> Result<DivergenceValue> {
        let value = match kind {
            DivergenceKind::Kl => self.kl(),
            DivergenceKind::Tv => self.tv(),
            DivergenceKind::Renyi { alpha } => self.renyi(alpha)?,
            DivergenceKind::Zcp { c } => self.zcp(c)?,
            DivergenceKind::LittleKl => {
                if self.p.len() != 2 {
                    return Err(invalid("little-kl needs two-atom distributions"));
                }
                little_kl(self.p.weights()[0], self.q.weights()[0])
            }
        };
        Ok(DivergenceValue { kind, value, abs_error: 0.0 })
    }
}

/// Per-point log-densities `(ln p(x), ln q(x))`.
fn log_densities(pair: &GaussianMixturePair, x: f64) -> (f64, f64) {
    (pair.ln_p_density(x), pair.ln_q_density(x))
}

fn breakpoints(pair: &GaussianMixturePair, half_width: f64) -> Vec<f64> {
    let limit = half_width * pair.sigma1();
    let mut pts = vec![-limit, 0.0, limit];
    for scale in [pair.sigma1(), pair.sigma2()] {
        let mut k = 0.5;
        while k * scale < limit {
            pts.push(k * scale);
            pts.push(-k * scale);
            k *= 2.0;
        }
    }
    pts.iter_mut().for_each(|x| *x += pair.mu());
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    pts.dedup();
    pts
}

/// Integrand of each kind in terms of `(ln p, ln q)`; Rényi integrates `p^α q^{1−α}`.
fn integrand(kind: DivergenceKind, lp: f64, lq: f64) -> f64 {
    if lp == f64::NEG_INFINITY && lq == f64::NEG_INFINITY {
        return 0.0;
    }
    let lr = lp - lq;
    match kind {
        DivergenceKind::Kl => {
            // q (r ln r − r + 1), nonnegative pointwise
            let p = lp.exp();
            let q = lq.exp();
            (p * lr - (p - q)).max(0.0)
        }
        DivergenceKind::Tv => 0.5 * abs_diff(lp.exp(), lq.exp(), lr),
        DivergenceKind::Zcp { c } => {
            if lr == 0.0 || c == 0.0 {
                0.0
            } else {
                abs_diff(lp.exp(), lq.exp(), lr) * zcp_log_factor(c, ln_abs_expm1(lr)).sqrt()
            }
        }
        DivergenceKind::Renyi { alpha } => (alpha * lp + (1.0 - alpha) * lq).exp(),
        DivergenceKind::LittleKl => f64::NAN,
    }
}

fn integrate(pair: &GaussianMixturePair, kind: DivergenceKind, cfg: &QuadratureConfig, abs_tol: f64) -> Result<Integral> {
    let bps = breakpoints(pair, cfg.half_width_in_sigma1);
    adaptive_simpson(
        |x| {
            let (lp, lq) = log_densities(pair, x);
            integrand(kind, lp, lq)
        },
        &bps,
        abs_tol,
        cfg.max_subdivisions,
    )
}

/// Quadrature evaluation of KL, TV, ZCP or Rényi for the mixture pair over
/// `[mu − Lσ₁, mu + Lσ₁]`.
///
/// A coarse pass sets the scale, then the final pass targets an absolute
/// error of `rel_tol·value + 1e−12`.
pub fn divergence_gaussian(
    pair: &GaussianMixturePair,
    kind: DivergenceKind,
    cfg: &QuadratureConfig,
) -> Result<DivergenceValue> {
    cfg.validate()?;
    match kind {
        DivergenceKind::LittleKl => return Err(invalid("little-kl is defined for Bernoulli means only")),
        DivergenceKind::Zcp { c } if !(c >= 0.0) => {
            return Err(invalid(format!("ZCP scale c must be nonnegative, got {c}")));
        }
        DivergenceKind::Renyi { alpha } => {
            if alpha == 1.0 {
                return Err(invalid("Rényi order 1 is the KL divergence; use kind kl"));
            }
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(invalid(format!("Rényi order must be positive and finite, got {alpha}")));
            }
            // the wide component's tail makes p^α q^{1−α} non-integrable
            let (s1, s2) = (pair.sigma1(), pair.sigma2());
            if alpha > 1.0 && pair.p() > 0.0 && (alpha - 1.0) / (s2 * s2) >= alpha / (s1 * s1) {
                return Ok(DivergenceValue { kind, value: f64::INFINITY, abs_error: 0.0 });
            }
        }
        _ => {}
    }

    let coarse = integrate(pair, kind, cfg, 1e-6)?;
    match kind {
        DivergenceKind::Renyi { alpha } => {
            let scale = (alpha - 1.0).abs();
            let d_coarse = (coarse.value.ln() / (alpha - 1.0)).max(0.0);
            let target = (cfg.rel_tol * d_coarse + 1e-12) * scale * coarse.value;
            let fine = integrate(pair, kind, cfg, 0.5 * target)?;
            let value = (fine.value.ln() / (alpha - 1.0)).max(0.0);
            let abs_error = fine.abs_error / (scale * fine.value);
            Ok(DivergenceValue { kind, value, abs_error })
        }
        _ => {
            let target = cfg.rel_tol * coarse.value.abs() + 1e-12;
            let fine = integrate(pair, kind, cfg, 0.5 * target)?;
            let mut value = fine.value.max(0.0);
            if kind == DivergenceKind::Tv {
                value = value.min(1.0);
            }
            Ok(DivergenceValue { kind, value, abs_error: fine.abs_error })
        }
    }
}

/// Bernoulli KL `p̂ ln(p̂/q) + (1−p̂) ln((1−p̂)/(1−q))`.
pub fn little_kl(p_hat: f64, q: f64) -> f64 {
    let head = if p_hat == 0.0 {
        0.0
    } else if q == 0.0 {
        return f64::INFINITY;
    } else {
        p_hat * (p_hat.ln() - q.ln())
    };
    let tail = if p_hat == 1.0 {
        0.0
    } else if q == 1.0 {
        return f64::INFINITY;
    } else {
        (1.0 - p_hat) * ((-p_hat).ln_1p() - (-q).ln_1p())
    };
    (head + tail).max(0.0)
}

/// Largest `q ∈ [p̂, 1]` with `kl(p̂, q) ≤ budget`.
///
/// Bisection runs until the bracket collapses to adjacent floating-point
/// values, which is finer than `1e−12` everywhere on `[0, 1]`.
pub fn little_kl_inverse_upper(p_hat: f64, budget: f64) -> f64 {
    let p_hat = p_hat.clamp(0.0, 1.0);
    if budget <= 0.0 || budget.is_nan() {
        return p_hat;
    }
    if p_hat == 1.0 || budget == f64::INFINITY {
        return 1.0;
    }
    if p_hat == 0.0 {
        return -(-budget).exp_m1();
    }
    let below_one = 1.0 - f64::EPSILON / 2.0;
    if little_kl(p_hat, below_one) < budget {
        return 1.0;
    }
    let (mut lo, mut hi) = (p_hat, 1.0);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if little_kl(p_hat, mid) <= budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn scaled_tv(tv: f64, coefficient: f64) -> f64 {
    if tv == 0.0 { 0.0 } else { coefficient * tv }
}

fn geometric_kl_tv(kl: f64, tv: f64) -> f64 {
    if tv == 0.0 || kl == 0.0 { 0.0 } else { (8.0 * tv * kl).sqrt() }
}

/// `2√(2·TV·KL) + √(2 ln(1+c))·TV`, the ZCP bound as stated in terms of KL and TV.
///
/// For large `c` this does not dominate the exact ZCP value; see
/// [`zcp_upper_bound_kl_tv_sq`] for the form that does.
pub fn zcp_upper_bound_kl_tv(kl: f64, tv: f64, c: f64) -> f64 {
    geometric_kl_tv(kl, tv) + scaled_tv(tv, (2.0 * c.ln_1p()).sqrt())
}

/// `D_ZCP(1) + 2√ln(2+2c)·TV`, the scale-shift bound as stated.
///
/// Valid for moderate `c`; it undershoots the exact ZCP value once `c` is in
/// the thousands. [`zcp_c_shift_bound_sq`] is the dominating variant.
pub fn zcp_c_shift_bound(zcp_at_1: f64, tv: f64, c: f64) -> f64 {
    zcp_at_1 + scaled_tv(tv, 2.0 * (2.0 + 2.0 * c).ln().sqrt())
}

/// `√(8·TV·KL)`, the bound on `D_ZCP(·;1)`.
pub fn zcp1_upper_bound_kl_tv(kl: f64, tv: f64) -> f64 {
    geometric_kl_tv(kl, tv)
}

/// `D_ZCP(1) + 2√ln(2+2c²)·TV`.
///
/// Follows from `ln(1 + c²x²) ≤ ln(1 + x²) + ln(2 + 2c²)`, which is the
/// scale-shift step with the ZCP's own `c²`.
pub fn zcp_c_shift_bound_sq(zcp_at_1: f64, tv: f64, c: f64) -> f64 {
    zcp_at_1 + scaled_tv(tv, 2.0 * (2.0 + 2.0 * c * c).ln().sqrt())
}

/// `√(8·TV·KL) + 2√ln(2+2c²)·TV`, combining [`zcp1_upper_bound_kl_tv`] with
/// [`zcp_c_shift_bound_sq`].
pub fn zcp_upper_bound_kl_tv_sq(kl: f64, tv: f64, c: f64) -> f64 {
    zcp_c_shift_bound_sq(zcp1_upper_bound_kl_tv(kl, tv), tv, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{bernoulli_instance, gaussian_instance, make_discrete};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn d(w: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::new(w.to_vec()).unwrap()
    }

    fn random_pair(rng: &mut ChaCha8Rng) -> (DiscreteDistribution, DiscreteDistribution) {
        let m = rng.gen_range(2..=64);
        let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..m).map(|_| rng.gen::<f64>().powi(3) + 1e-6).collect()
        };
        let p = draw(rng);
        let q = draw(rng);
        (make_discrete(&p).unwrap(), make_discrete(&q).unwrap())
    }

    #[test]
    fn kl_examples() {
        let p = d(&[0.3, 0.7]);
        assert_eq!(kl_discrete(&p, &p).unwrap(), 0.0);
        let pair = bernoulli_instance(0.1, 100.0).unwrap();
        let kl = pair.kl();
        assert!(kl >= 10.0 - (-1f64).exp() && kl <= 10.0, "{kl}");
        let v = kl_discrete(&d(&[1.0, 0.0]), &d(&[0.5, 0.5])).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-15);
        assert_eq!(kl_discrete(&d(&[0.5, 0.5]), &d(&[1.0, 0.0])).unwrap(), f64::INFINITY);
        assert!(kl_discrete(&d(&[1.0]), &d(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn kl_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let (p, q) = random_pair(&mut rng);
            let direct: f64 = p.weights().iter().zip(q.weights()).map(|(a, b)| a * (a / b).ln()).sum();
            let got = kl_discrete(&p, &q).unwrap();
            assert!((got - direct).abs() < 1e-12 * direct.max(1.0), "{got} vs {direct}");
        }
    }

    #[test]
    fn tv_examples() {
        let p = d(&[0.3, 0.7]);
        assert_eq!(tv_discrete(&p, &p).unwrap(), 0.0);
        let pair = bernoulli_instance(0.1, 100.0).unwrap();
        assert!((pair.tv() - 0.1 * (1.0 - (-100f64).exp())).abs() < 1e-15);
        assert_eq!(tv_discrete(&d(&[1.0, 0.0]), &d(&[0.0, 1.0])).unwrap(), 1.0);
    }

    #[test]
    fn renyi_examples() {
        let p = d(&[0.5, 0.5]);
        let q = d(&[0.25, 0.75]);
        assert_eq!(renyi_discrete(&p, &p, 3.0).unwrap(), 0.0);
        let v = renyi_discrete(&p, &q, 2.0).unwrap();
        assert!((v - (4.0f64 / 3.0).ln()).abs() < 1e-14);
        let chi2: f64 = p.weights().iter().zip(q.weights()).map(|(a, b)| (a - b).powi(2) / b).sum();
        assert!((v - chi2.ln_1p()).abs() < 1e-14);
        assert!(renyi_discrete(&p, &q, 1.0).is_err());
        assert!(renyi_discrete(&p, &q, 0.0).is_err());
    }

    #[test]
    fn renyi_approaches_kl() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = make_discrete(&(0..16).map(|_| rng.gen_range(0.5..1.5)).collect::<Vec<_>>()).unwrap();
        let q = make_discrete(&(0..16).map(|_| rng.gen_range(0.5..1.5)).collect::<Vec<_>>()).unwrap();
        let kl = kl_discrete(&p, &q).unwrap();
        let mut prev = f64::INFINITY;
        for n in [1e2f64, 1e4, 1e6] {
            let v = renyi_discrete(&p, &q, 1.0 + 1.0 / n.ln()).unwrap();
            assert!(v <= prev && v >= kl);
            prev = v;
        }
        // for nearby pairs D_α/KL tends to α itself, so the gap at α_n is about 1/ln n
        assert!((prev - kl) / kl < 0.1);
        let v = renyi_discrete(&p, &q, 1.0 + 1e-6).unwrap();
        assert!((v - kl) / kl < 1e-5);
    }

    #[test]
    fn zcp_examples() {
        let p = d(&[0.5, 0.5]);
        let q = d(&[0.25, 0.75]);
        assert_eq!(zcp_discrete(&p, &p, 7.0, None).unwrap(), 0.0);
        assert_eq!(zcp_discrete(&p, &q, 0.0, None).unwrap(), 0.0);
        let expected = 0.25 * 2f64.ln().sqrt() + 0.75 / 3.0 * (1.0f64 + 1.0 / 9.0).ln().sqrt();
        assert!((zcp_discrete(&p, &q, 1.0, None).unwrap() - expected).abs() < 1e-15);
        assert!(zcp_discrete(&p, &q, -1.0, None).is_err());
        assert_eq!(zcp_discrete(&d(&[0.5, 0.5]), &d(&[1.0, 0.0]), 1.0, None).unwrap(), f64::INFINITY);
    }

    #[test]
    fn zcp_uses_stable_log_factor_for_huge_ratios() {
        let pair = bernoulli_instance(0.05, 800.0).unwrap();
        assert_eq!(pair.q.weights()[0], 0.0);
        let v = pair.zcp(1.0).unwrap();
        // first atom: p·√(2·800) up to exponentially small terms
        let head = 0.05 * (2.0 * 800.0f64).sqrt();
        assert!(v.is_finite() && v > head && v < head + 0.1);
    }

    #[test]
    fn inequality_examples() {
        assert_eq!(zcp_upper_bound_kl_tv(0.0, 0.0, 5.0), 0.0);
        assert!((zcp_upper_bound_kl_tv(1.0, 1.0, 0.0) - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!((zcp_c_shift_bound(0.3, 0.2, 0.0) - (0.3 + 2.0 * 2f64.ln().sqrt() * 0.2)).abs() < 1e-15);
        assert_eq!(zcp_c_shift_bound(0.0, 0.0, 1e6), 0.0);
        assert_eq!(zcp1_upper_bound_kl_tv(0.0, 0.4), 0.0);
        assert_eq!(zcp1_upper_bound_kl_tv(3.0, 0.0), 0.0);
        assert!((zcp1_upper_bound_kl_tv(2.0, 0.5) - 8f64.sqrt()).abs() < 1e-15);
        assert_eq!(zcp_upper_bound_kl_tv(f64::INFINITY, 0.0, 1.0), 0.0);
    }

    #[test]
    fn stated_inequalities_hold_for_moderate_c() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let (p, q) = random_pair(&mut rng);
            let kl = kl_discrete(&p, &q).unwrap();
            let tv = tv_discrete(&p, &q).unwrap();
            let z1 = zcp_discrete(&p, &q, 1.0, None).unwrap();
            assert!(z1 <= zcp1_upper_bound_kl_tv(kl, tv) + 1e-9);
            for c in [0.0, 1.0] {
                let z = zcp_discrete(&p, &q, c, None).unwrap();
                assert!(z <= zcp_c_shift_bound(z1, tv, c) + 1e-9);
                assert!(z <= zcp_upper_bound_kl_tv(kl, tv, c) + 1e-9);
            }
        }
    }

    #[test]
    fn stated_shift_bound_fails_at_large_c() {
        // one atom carries almost all of P's mass where Q has little
        let p = d(&[0.5, 0.5]);
        let q = d(&[0.01, 0.99]);
        let c = 1e6;
        let z = zcp_discrete(&p, &q, c, None).unwrap();
        let z1 = zcp_discrete(&p, &q, 1.0, None).unwrap();
        let tv = tv_discrete(&p, &q).unwrap();
        let kl = kl_discrete(&p, &q).unwrap();
        assert!(z > zcp_c_shift_bound(z1, tv, c));
        assert!(z > zcp_upper_bound_kl_tv(kl, tv, c));
        assert!(z <= zcp_c_shift_bound_sq(z1, tv, c));
        assert!(z <= zcp_upper_bound_kl_tv_sq(kl, tv, c));
    }

    #[test]
    fn squared_inequalities_hold_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let (p, q) = random_pair(&mut rng);
            let kl = kl_discrete(&p, &q).unwrap();
            let tv = tv_discrete(&p, &q).unwrap();
            let z1 = zcp_discrete(&p, &q, 1.0, None).unwrap();
            for c in [0.0, 1.0, 10.0, 1e3, 1e6] {
                let z = zcp_discrete(&p, &q, c, None).unwrap();
                assert!(z <= zcp_c_shift_bound_sq(z1, tv, c) + 1e-9);
                assert!(z <= zcp_upper_bound_kl_tv_sq(kl, tv, c) + 1e-9);
            }
        }
    }

    #[test]
    fn little_kl_examples() {
        assert_eq!(little_kl(0.5, 0.5), 0.0);
        assert!((little_kl(0.0, 0.3) - (1.0f64 / 0.7).ln()).abs() < 1e-15);
        let v = little_kl(0.5, 0.25);
        assert!((v - (0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln())).abs() < 1e-15);
        assert!((v - 0.14384).abs() < 1e-5);
        assert_eq!(little_kl(0.5, 0.0), f64::INFINITY);
        assert_eq!(little_kl(0.5, 1.0), f64::INFINITY);
        assert_eq!(little_kl(1.0, 1.0), 0.0);
    }

    #[test]
    fn little_kl_inverse_examples() {
        assert_eq!(little_kl_inverse_upper(0.37, 0.0), 0.37);
        assert!((little_kl_inverse_upper(0.0, 2f64.ln()) - 0.5).abs() < 1e-15);
        assert_eq!(little_kl_inverse_upper(1.0, 0.3), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let b = rng.gen_range(1e-9..2.0);
            let q = little_kl_inverse_upper(0.3, b);
            assert!(q < 1.0);
            assert!((little_kl(0.3, q) - b).abs() < 1e-10, "b={b}");
        }
    }

    #[test]
    fn little_kl_inverse_is_float_optimal() {
        let next_up = |x: f64| f64::from_bits(x.to_bits() + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..5000 {
            let p: f64 = rng.gen();
            let b = rng.gen_range(0.0..2.0);
            let q = little_kl_inverse_upper(p, b);
            if q == 1.0 {
                assert!(little_kl(p, 1.0 - f64::EPSILON / 2.0) < b);
                continue;
            }
            let (here, above) = (little_kl(p, q), little_kl(p, next_up(q)));
            assert!(here <= b && above > b, "p={p} b={b}");
            assert!(b - here <= above - here);
        }
    }

    #[test]
    fn gaussian_identical_is_zero() {
        let pair = gaussian_instance(0.2, 1.0, 1.0).unwrap().with_sigma2(1.0).unwrap();
        let cfg = QuadratureConfig::default();
        for kind in [
            DivergenceKind::Kl,
            DivergenceKind::Tv,
            DivergenceKind::Zcp { c: 3.0 },
            DivergenceKind::Renyi { alpha: 2.0 },
        ] {
            let v = divergence_gaussian(&pair, kind, &cfg).unwrap();
            assert!(v.value.abs() < 1e-10, "{kind:?}: {}", v.value);
        }
    }

    #[test]
    fn gaussian_proposition_example() {
        let pair = gaussian_instance(0.1, 1.0, 1.0).unwrap();
        let cfg = QuadratureConfig::default();
        let kl = divergence_gaussian(&pair, DivergenceKind::Kl, &cfg).unwrap();
        let tv = divergence_gaussian(&pair, DivergenceKind::Tv, &cfg).unwrap();
        assert!(kl.value >= 3.7);
        assert!(tv.value <= 0.1);
        assert!(tv.value * kl.value <= 0.5);
        assert!(kl.abs_error <= 1e-8 * kl.value + 1e-12);
        assert!(tv.abs_error <= 1e-8 * tv.value + 1e-12);
    }

    #[test]
    fn gaussian_renyi_diverges_for_narrow_reference() {
        let pair = gaussian_instance(0.1, 1.0, 1.0).unwrap();
        let v = divergence_gaussian(&pair, DivergenceKind::Renyi { alpha: 2.0 }, &QuadratureConfig::default()).unwrap();
        assert_eq!(v.value, f64::INFINITY);
        let v = divergence_gaussian(&pair, DivergenceKind::Renyi { alpha: 0.5 }, &QuadratureConfig::default()).unwrap();
        assert!(v.value.is_finite() && v.value > 0.0);
    }

    #[test]
    fn quadrature_matches_fine_grid() {
        let pair = gaussian_instance(0.5, 1.0, 1.0).unwrap();
        let cfg = QuadratureConfig::default();
        let n = 100_000;
        let (lo, hi) = (-15.0, 15.0);
        let h = (hi - lo) / n as f64;
        let xs: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect();
        let pw: Vec<f64> = xs.iter().map(|&x| pair.ln_p_density(x).exp() * h).collect();
        let qw: Vec<f64> = xs.iter().map(|&x| pair.ln_q_density(x).exp() * h).collect();
        let p = make_discrete(&pw).unwrap();
        let q = make_discrete(&qw).unwrap();
        let checks = [
            (DivergenceKind::Kl, kl_discrete(&p, &q).unwrap()),
            (DivergenceKind::Tv, tv_discrete(&p, &q).unwrap()),
            (DivergenceKind::Zcp { c: 1.0 }, zcp_discrete(&p, &q, 1.0, None).unwrap()),
            (DivergenceKind::Renyi { alpha: 0.5 }, renyi_discrete(&p, &q, 0.5).unwrap()),
        ];
        for (kind, discrete) in checks {
            let quad = divergence_gaussian(&pair, kind, &cfg).unwrap().value;
            assert!(((quad - discrete) / quad).abs() < 1e-4, "{kind:?}: {quad} vs {discrete}");
        }
    }

    #[test]
    fn config_validation() {
        let bad = QuadratureConfig { half_width_in_sigma1: 4.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = QuadratureConfig { rel_tol: 0.1, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    proptest! {
        #[test]
        fn axioms_on_fuzzed_pairs(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (p, q) = random_pair(&mut rng);
            let values = [
                kl_discrete(&p, &q).unwrap(),
                tv_discrete(&p, &q).unwrap(),
                renyi_discrete(&p, &q, 0.5).unwrap(),
                renyi_discrete(&p, &q, 2.0).unwrap(),
                zcp_discrete(&p, &q, 1.0, None).unwrap(),
            ];
            prop_assert!(values.iter().all(|v| *v >= 0.0));
            prop_assert!(values[1] <= 1.0);
            let tv = values[1];
            prop_assert!(tv * tv <= values[0] / 2.0 + 1e-15);
            for v in [
                kl_discrete(&p, &p).unwrap(),
                tv_discrete(&p, &p).unwrap(),
                renyi_discrete(&p, &p, 2.0).unwrap(),
                zcp_discrete(&p, &p, 10.0, None).unwrap(),
            ] {
                prop_assert!(v < 1e-10);
            }
        }

        #[test]
        fn zcp_monotone_in_c(seed in any::<u64>(), c1 in 0.0f64..1e3, extra in 0.0f64..1e3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (p, q) = random_pair(&mut rng);
            let lo = zcp_discrete(&p, &q, c1, None).unwrap();
            let hi = zcp_discrete(&p, &q, c1 + extra, None).unwrap();
            prop_assert!(lo <= hi * (1.0 + 1e-14));
        }

        #[test]
        fn renyi_monotone_and_chi2(seed in any::<u64>(), a in 0.1f64..3.0, b in 0.1f64..3.0) {
            prop_assume!(a != 1.0 && b != 1.0 && a != b);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (p, q) = random_pair(&mut rng);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let v_lo = renyi_discrete(&p, &q, lo).unwrap();
            let v_hi = renyi_discrete(&p, &q, hi).unwrap();
            prop_assert!(v_lo <= v_hi * (1.0 + 1e-12) + 1e-15);
            let chi2: f64 = p.weights().iter().zip(q.weights()).map(|(x, y)| (x - y).powi(2) / y).sum();
            let d2 = renyi_discrete(&p, &q, 2.0).unwrap();
            prop_assert!((d2 - chi2.ln_1p()).abs() <= 1e-10 * d2.max(1.0));
        }
    }
}
