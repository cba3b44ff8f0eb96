//! Numerical toolkit for PAC-Bayes generalization bounds built on the ZCP
//! divergence
//!
//! ```text
//! D_ZCP(P, Q; c) = ∫ |dP/dQ − 1| · sqrt(ln(1 + c² (dP/dQ − 1)²)) dQ
//! ```
//!
//! together with the coin-betting machinery used to prove them.
//!
//! The crate is organized by capability:
//!
//! - [`distributions`]: finite-support distributions, the Bernoulli and
//!   multivariate instance families, and the Gaussian-mixture pair.
//! - [`divergences`]: exact discrete and quadrature-based KL, TV, Rényi,
//!   ZCP and Bernoulli-kl, plus the inequalities that relate them.
//! - [`betting`]: wealth processes, optimal constant-bet log-wealth and a
//!   Krichevsky–Trofimov mixture bettor.
//! - [`bounds`]: the Hoeffding-type and log-wealth ZCP bounds, their
//!   empirical-Bernstein and Bernoulli-kl relaxations, the KL baseline, and
//!   the analytic lemmas behind them.
//! - [`harness`]: Monte Carlo coverage experiments and deterministic
//!   instance tables.
//! - [`cli`]: the `zcp-paclab` command-line driver.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod betting;
pub mod bounds;
pub mod cli;
pub mod distributions;
pub mod divergences;
mod error;
pub mod harness;
pub mod numeric;
pub mod quadrature;
pub mod stats;

pub use error::{Error, Result};
