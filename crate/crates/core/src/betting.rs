//! Coin betting: constant-fraction wealth, the best constant bet in
//! hindsight, an online mixture bettor with a `2√n` wealth-ratio guarantee,
//! and Ville boundary crossings.
//!
//! All wealth is tracked as `ln W`, since products over thousands of rounds
//! leave the range of `f64`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Coins, bets and running log-wealth of one betting game.
///
/// `log_wealth[0] = 0` and `log_wealth[t] = log_wealth[t−1] + ln(1 + bets[t−1]·coins[t−1])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WealthTrace {
    pub coins: Vec<f64>,
    pub bets: Vec<f64>,
    pub log_wealth: Vec<f64>,
    pub beta_star: f64,
    pub log_wealth_star: f64,
}

impl WealthTrace {
    /// Replays a fixed bet sequence against the coins.
    pub fn from_bets(coins: &[f64], bets: &[f64]) -> Result<Self> {
        check_coins(coins)?;
        if bets.len() != coins.len() {
            return Err(invalid(format!("{} bets for {} coins", bets.len(), coins.len())));
        }
        if let Some(b) = bets.iter().find(|b| !(b.abs() <= 1.0)) {
            return Err(invalid(format!("bet {b} outside [-1, 1]")));
        }
        let mut log_wealth = Vec::with_capacity(coins.len() + 1);
        log_wealth.push(0.0);
        let mut lw = 0.0;
        for (&c, &b) in coins.iter().zip(bets) {
            lw += (b * c).ln_1p();
            log_wealth.push(lw);
        }
        let (beta_star, log_wealth_star) = if coins.is_empty() { (0.0, 0.0) } else { max_log_wealth(coins)? };
        Ok(Self { coins: coins.to_vec(), bets: bets.to_vec(), log_wealth, beta_star, log_wealth_star })
    }

    pub fn len(&self) -> usize {
        self.coins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coins.is_empty()
    }

    /// `ln W_n`.
    pub fn final_log_wealth(&self) -> f64 {
        *self.log_wealth.last().expect("log_wealth starts with W_0")
    }

    /// `W_t` (may overflow to `+∞` for long winning streaks).
    pub fn wealth(&self, t: usize) -> f64 {
        self.log_wealth[t].exp()
    }

    /// `ln W*_n − ln W_n`, the log of the wealth ratio.
    pub fn log_regret(&self) -> f64 {
        self.log_wealth_star - self.final_log_wealth()
    }
}

fn check_coins(coins: &[f64]) -> Result<()> {
    if let Some(c) = coins.iter().find(|c| !(c.abs() <= 1.0)) {
        return Err(invalid(format!("coin {c} outside [-1, 1]")));
    }
    Ok(())
}

/// `ln W_n(β) = Σ ln(1 + β c_t)`; `-∞` on ruin.
pub fn wealth_fixed(beta: f64, coins: &[f64]) -> Result<f64> {
    check_coins(coins)?;
    if !(beta.abs() <= 1.0) {
        return Err(invalid(format!("bet {beta} outside [-1, 1]")));
    }
    Ok(log_wealth_unchecked(beta, coins))
}

fn log_wealth_unchecked(beta: f64, coins: &[f64]) -> f64 {
    coins.iter().map(|&c| (beta * c).ln_1p()).sum()
}

fn log_wealth_slope(beta: f64, coins: &[f64]) -> f64 {
    coins.iter().map(|&c| c / (1.0 + beta * c)).sum()
}

/// Best constant bet in hindsight: `(β*, ln W*_n)` maximizing `Σ ln(1 + β c_t)` over `[-1, 1]`.
///
/// The objective is concave, so its slope is bisected to an interval of
/// width `1e−12` and the interior candidate is compared with both endpoints.
pub fn max_log_wealth(coins: &[f64]) -> Result<(f64, f64)> {
    check_coins(coins)?;
    if coins.is_empty() {
        return Err(invalid("need at least one coin"));
    }
    if coins.iter().all(|&c| c == 0.0) {
        return Ok((0.0, 0.0));
    }
    let beta = if log_wealth_slope(1.0, coins) >= 0.0 {
        1.0
    } else if log_wealth_slope(-1.0, coins) <= 0.0 {
        -1.0
    } else {
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if log_wealth_slope(mid, coins) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let best = [(beta, log_wealth_unchecked(beta, coins)), (-1.0, log_wealth_unchecked(-1.0, coins)), (1.0, log_wealth_unchecked(1.0, coins))]
        .into_iter()
        .fold((0.0, 0.0), |acc, cand| if cand.1 > acc.1 { cand } else { acc });
    Ok(best)
}

/// Online mixture bettor: wealth is the average of constant-bet wealths
/// under the arcsine prior on `β`, so each bet is the posterior mean of `β`.
///
/// The prior is represented by Gauss–Chebyshev nodes, which integrate the
/// degree-`n` wealth polynomial exactly. On ±1 coins this reproduces the
/// Krichevsky–Trofimov fractions `(Σ_{s<t} c_s)/t`; on every sequence it
/// guarantees `W*_n ≤ 2√n · W_n`.
pub fn kt_bettor(coins: &[f64]) -> Result<WealthTrace> {
    check_coins(coins)?;
    let bets = mixture_bets(coins);
    WealthTrace::from_bets(coins, &bets)
}

/// Bets only, without the hindsight optimum; the Monte Carlo hot path.
pub(crate) fn mixture_bets(coins: &[f64]) -> Vec<f64> {
    let n = coins.len();
    let k = n / 2 + 2;
    let nodes: Vec<f64> = (1..=k).map(|j| ((2 * j - 1) as f64 * PI / (2 * k) as f64).cos()).collect();
    let mut weights = vec![1.0; k];
    let mut bets = Vec::with_capacity(n);
    for &c in coins {
        let (mut mass, mut moment) = (0.0, 0.0);
        for (w, b) in weights.iter().zip(&nodes) {
            mass += w;
            moment += w * b;
        }
        bets.push((moment / mass).clamp(-1.0, 1.0));
        let mut top = 0.0f64;
        for (w, b) in weights.iter_mut().zip(&nodes) {
            *w *= 1.0 + b * c;
            top = top.max(*w);
        }
        if !(1e-100..=1e100).contains(&top) {
            weights.iter_mut().for_each(|w| *w /= top);
        }
    }
    bets
}

/// `(Σ c_t)² / (4n)`, a lower bound on `ln W*_n`; `0` for no coins.
pub fn wealth_quadratic_lower(coins: &[f64]) -> f64 {
    if coins.is_empty() {
        return 0.0;
    }
    let s: f64 = coins.iter().sum();
    s * s / (4.0 * coins.len() as f64)
}

/// First round `t ≥ 1` with `W_t ≥ 1/δ`, if any.
pub fn ville_first_crossing(trace: &WealthTrace, delta: f64) -> Result<Option<usize>> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    let level = -delta.ln();
    Ok(trace.log_wealth.iter().position(|&lw| lw >= level))
}
