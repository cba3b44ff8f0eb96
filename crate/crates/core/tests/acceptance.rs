//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line each.
//!
//! Two criteria cannot hold in floating point or as stated; they are listed
//! as expected failures with the reason, still print FAIL, and are paired
//! with a supplementary line checking the corrected property. The process
//! exits nonzero on any unexpected FAIL and on any expected failure that
//! starts passing.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zcp_paclab::betting::{kt_bettor, max_log_wealth};
use zcp_paclab::bounds::{analytic_inequality_suite, asymptotics_check_pair, BoundConfig};
use zcp_paclab::distributions::{bernoulli_instance, DiscretePair};
use zcp_paclab::divergences::{
    little_kl, little_kl_inverse_upper, zcp_c_shift_bound, zcp_c_shift_bound_sq, zcp_upper_bound_kl_tv,
    zcp_upper_bound_kl_tv_sq, QuadratureConfig,
};
use zcp_paclab::harness::{
    divergence_scaling_table, gaussian_instance_check, random_coins, random_discrete_pair, run_coverage,
    ville_experiment, CoverageCheck, LearningInstance, PosteriorRule,
};

type Verdict = Result<String, String>;

struct Criterion {
    id: &'static str,
    title: &'static str,
    budget: Duration,
    expected_failure: Option<&'static str>,
    run: fn() -> Verdict,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn fuzzed_pairs(seed: u64) -> Vec<DiscretePair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..1000)
        .map(|i| {
            let (p, q) = random_discrete_pair(&mut rng, 64);
            let q = if i % 10 == 0 { p.clone() } else { q };
            DiscretePair::from_weights(p, q).unwrap()
        })
        .collect()
}

fn divergence_axioms() -> Verdict {
    let mut checked = 0;
    for pair in fuzzed_pairs(101) {
        let same = pair.p == pair.q;
        let values = [
            ("kl", pair.kl()),
            ("tv", pair.tv()),
            ("renyi_0.5", pair.renyi(0.5).unwrap()),
            ("renyi_2", pair.renyi(2.0).unwrap()),
            ("zcp_1", pair.zcp(1.0).unwrap()),
            ("zcp_1e3", pair.zcp(1e3).unwrap()),
        ];
        for (name, v) in values {
            checked += 1;
            if v < 0.0 {
                return Err(format!("{name} = {v:e} < 0"));
            }
            if same && v > 1e-10 {
                return Err(format!("{name} = {v:e} on identical pair"));
            }
            if !same && v <= 1e-10 {
                return Err(format!("{name} = {v:e} on distinct pair"));
            }
        }
    }
    Ok(format!("{checked} values nonnegative, zero exactly on the 100 identical pairs"))
}

const CHAIN_C: [f64; 5] = [0.0, 1.0, 10.0, 1e3, 1e6];

fn inequality_chain() -> Verdict {
    let (mut shift, mut geometric, mut combined, mut total) = (0, 0, 0, 0);
    let mut worst: (f64, f64) = (0.0, 0.0);
    for pair in fuzzed_pairs(202) {
        let (kl, tv, z1) = (pair.kl(), pair.tv(), pair.zcp(1.0).unwrap());
        if z1 > (8.0 * tv * kl).sqrt() + 1e-9 {
            geometric += 1;
        }
        for c in CHAIN_C {
            total += 1;
            let zc = pair.zcp(c).unwrap();
            let excess = zc - zcp_c_shift_bound(z1, tv, c);
            if excess > 1e-9 {
                shift += 1;
                if excess > worst.0 {
                    worst = (excess, c);
                }
            }
            if zc > zcp_upper_bound_kl_tv(kl, tv, c) + 1e-9 {
                combined += 1;
            }
        }
    }
    let detail = format!(
        "c-shift violated {shift}/{total}, combined {combined}/{total}, geometric {geometric}/1000; worst excess {:.3e} at c = {:e}",
        worst.0, worst.1
    );
    if shift + geometric + combined == 0 { Ok(detail) } else { Err(detail) }
}

fn inequality_chain_corrected() -> Verdict {
    let mut total = 0;
    for pair in fuzzed_pairs(202) {
        let (kl, tv, z1) = (pair.kl(), pair.tv(), pair.zcp(1.0).unwrap());
        for c in CHAIN_C {
            total += 1;
            let zc = pair.zcp(c).unwrap();
            if zc > zcp_c_shift_bound_sq(z1, tv, c) + 1e-9 || zc > zcp_upper_bound_kl_tv_sq(kl, tv, c) + 1e-9 {
                return Err(format!("ln(2+2c²) chain violated at c = {c:e}, ZCP = {zc}"));
            }
        }
    }
    Ok(format!("ln(2+2c²) forms hold on all {total} (pair, c) cases"))
}

fn bernoulli_instance_claims() -> Verdict {
    let mut lines = Vec::new();
    for p in [0.2, 0.1, 0.05] {
        let ln_a = 1.0 / (p * p);
        let pair = bernoulli_instance(p, ln_a).map_err(|e| e.to_string())?;
        let tv_exact = p * (1.0 - (-ln_a).exp());
        let (tv, kl) = (pair.tv(), pair.kl());
        if (tv - tv_exact).abs() > 1e-12 {
            return Err(format!("p = {p}: TV {tv} vs {tv_exact}"));
        }
        let (lo, hi) = (p * ln_a - (-1.0f64).exp(), p * ln_a);
        if !(lo..=hi).contains(&kl) {
            return Err(format!("p = {p}: KL {kl} outside [{lo}, {hi}]"));
        }
        lines.push(format!("p={p}: KL={kl:.6}"));
    }
    Ok(lines.join(", "))
}

fn multivariate_scaling() -> Verdict {
    let d: Vec<usize> = (4..=12).map(|k| 1usize << k).collect();
    let t = divergence_scaling_table(1.0, &d).map_err(|e| e.to_string())?;
    let slopes = t.slopes.ok_or("slopes undefined")?;
    let targets = [0.5, -1.0, -0.25];
    let detail = format!("slopes (KL, TV, ZCP1) = ({:.4}, {:.4}, {:.4})", slopes[0], slopes[1], slopes[2]);
    if slopes.iter().zip(targets).all(|(s, t)| (s - t).abs() <= 0.15) { Ok(detail) } else { Err(detail) }
}

fn gaussian_mixture() -> Verdict {
    let cfg = QuadratureConfig { rel_tol: 1e-8, ..QuadratureConfig::default() };
    let ps = [0.2, 0.1, 0.05, 0.02];
    let mut worst_product: f64 = 0.0;
    for exponent in [1.0, 0.75] {
        let rows = gaussian_instance_check(&ps, 1.0, exponent, &cfg).map_err(|e| e.to_string())?;
        for r in rows {
            worst_product = worst_product.max(r.product);
            if r.kl < r.kl_lower || r.product > 0.5 {
                return Err(format!("exponent {exponent}, p = {}: KL {} (lower {}), product {}", r.p, r.kl, r.kl_lower, r.product));
            }
        }
    }
    Ok(format!("8 instances, largest product {worst_product:.4}"))
}

/// Maximum of the concave `β ↦ Σ ln(1 + βc)` by successively refined grids.
fn grid_max_log_wealth(coins: &[f64]) -> f64 {
    let lw = |b: f64| coins.iter().map(|c| (b * c).ln_1p()).sum::<f64>();
    let (mut center, mut half) = (0.0, 1.0);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..4 {
        let step = half / 100.0;
        let mut arg = center;
        for k in -100..=100 {
            let b = (center + k as f64 * step).clamp(-1.0, 1.0);
            let v = lw(b);
            if v > best {
                best = v;
                arg = b;
            }
        }
        center = arg;
        half = 2.0 * step;
    }
    best
}

fn betting() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (mut worst_grid, mut worst_ratio) = (0.0f64, 0.0f64);
    for i in 0..1000 {
        let coins = random_coins(&mut rng, 512);
        let n = coins.len() as f64;
        let (_, lw_star) = max_log_wealth(&coins).map_err(|e| e.to_string())?;
        let grid = grid_max_log_wealth(&coins);
        let gap = (lw_star - grid).abs();
        worst_grid = worst_grid.max(gap);
        if gap > 1e-5 || lw_star < grid - 1e-12 {
            return Err(format!("sequence {i}: max {lw_star} vs grid {grid}"));
        }
        let s: f64 = coins.iter().sum();
        if lw_star < s * s / (4.0 * n) - 1e-12 {
            return Err(format!("sequence {i}: ln W* {lw_star} below (Σc)²/(4n)"));
        }
        let trace = kt_bettor(&coins).map_err(|e| e.to_string())?;
        if trace.log_regret() > (2.0 * n.sqrt()).ln() + 1e-12 {
            return Err(format!("sequence {i}: regret {} exceeds ln(2√n)", trace.log_regret()));
        }
        worst_ratio = worst_ratio.max(trace.log_regret().exp() / (2.0 * (n + 1.0)).sqrt());
    }
    Ok(format!("grid gap ≤ {worst_grid:.2e}; max (W*/W)/√(2(n+1)) = {worst_ratio:.4} (reported only)"))
}

fn ville() -> Verdict {
    let rows = ville_experiment(1000, &[0.1, 0.05], 10_000, 707).map_err(|e| e.to_string())?;
    let detail = rows
        .iter()
        .map(|r| format!("δ={}: rate {:.4}, Wilson {:.4}", r.delta, r.crossing_rate, r.wilson_upper_99))
        .collect::<Vec<_>>()
        .join("; ");
    if rows.iter().all(|r| r.wilson_upper_99 <= r.delta) { Ok(detail) } else { Err(detail) }
}

fn coverage() -> Verdict {
    let cfg = BoundConfig::new(1000, 0.05, 2.0).map_err(|e| e.to_string())?;
    let gibbs = PosteriorRule::Gibbs { eta: 5.0 };
    let abs = LearningInstance::abs_distance(50, gibbs.clone()).map_err(|e| e.to_string())?;
    let bern = LearningInstance::bernoulli(50, gibbs).map_err(|e| e.to_string())?;
    let abs_report = run_coverage(&abs, &cfg, 2000, 808).map_err(|e| e.to_string())?;
    let bern_report = run_coverage(&bern, &cfg, 2000, 809).map_err(|e| e.to_string())?;
    let checked = [
        (&abs_report, CoverageCheck::HoeffdingZcp),
        (&abs_report, CoverageCheck::HoeffdingZcpReverse),
        (&abs_report, CoverageCheck::Mcallester),
        (&abs_report, CoverageCheck::McallesterReverse),
        (&abs_report, CoverageCheck::EmpBernstein),
        (&bern_report, CoverageCheck::LittleKl),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (report, check) in checked {
        let line = report.line(check);
        pass &= line.wilson_upper_99 <= 2.0 * cfg.delta;
        parts.push(format!("{} {}/{}", check.name(), line.failures, report.trials));
    }
    let detail = parts.join(", ");
    if pass { Ok(detail) } else { Err(detail) }
}

fn asymptotics() -> Verdict {
    let mut worst = f64::INFINITY;
    for pair in fuzzed_pairs(909) {
        for n in [25u64, 100, 10_000] {
            let r = asymptotics_check_pair(&pair, n).map_err(|e| e.to_string())?;
            if !r.holds {
                return Err(format!("n = {n}: B/L = {} > A = {}", r.b_over_l, r.a_value));
            }
            worst = worst.min(r.a_value - r.b_over_l);
        }
    }
    Ok(format!("3000 cases, smallest A - B/L = {worst:.4}"))
}

fn analytic_lemmas() -> Verdict {
    let report = analytic_inequality_suite(100_000, 1010).map_err(|e| e.to_string())?;
    let detail = report
        .outcomes
        .iter()
        .map(|o| format!("{}: {} violations, worst slack {:.2e}", o.inequality.name(), o.violations, o.worst_slack))
        .collect::<Vec<_>>()
        .join("; ");
    let strict = report.outcomes.iter().all(|o| o.violations == 0 && o.worst_slack >= -1e-6 && o.draws == 100_000);
    if strict { Ok(detail) } else { Err(detail) }
}

fn kl_draws() -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    (0..10_000).map(|_| (rng.gen::<f64>(), rng.gen_range(0.0..2.0))).collect()
}

fn kl_round_trip() -> Verdict {
    let (mut kept, mut misses, mut worst) = (0, 0, 0.0f64);
    for (p, b) in kl_draws() {
        let q = little_kl_inverse_upper(p, b);
        if q < 1.0 {
            kept += 1;
            let err = (little_kl(p, q) - b).abs();
            worst = worst.max(err);
            if err > 1e-10 {
                misses += 1;
            }
        }
    }
    let detail = format!("{misses}/{kept} draws miss 1e-10, worst {worst:.2e}");
    if misses == 0 { Ok(detail) } else { Err(detail) }
}

fn kl_round_trip_float_optimal() -> Verdict {
    let next_up = |x: f64| f64::from_bits(x.to_bits() + 1);
    let (mut resolvable, mut kept) = (0, 0);
    for (p, b) in kl_draws() {
        let q = little_kl_inverse_upper(p, b);
        if q == 1.0 {
            continue;
        }
        kept += 1;
        let (here, above) = (little_kl(p, q), little_kl(p, next_up(q)));
        if !(here <= b && above > b) {
            return Err(format!("p̂ = {p}, B = {b}: q = {q} is not the largest float with kl ≤ B"));
        }
        if above - here <= 1e-10 {
            resolvable += 1;
            if b - here > 1e-10 {
                return Err(format!("p̂ = {p}, B = {b}: miss {} where one ulp resolves 1e-10", b - here));
            }
        }
    }
    Ok(format!("all {kept} inverses are the largest float with kl ≤ B; {resolvable} resolvable draws within 1e-10"))
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: "1", title: "divergence axioms", budget: secs(5), expected_failure: None, run: divergence_axioms },
        Criterion {
            id: "2",
            title: "ZCP inequality chain as stated",
            budget: secs(10),
            expected_failure: Some("ln(2+2c) must be ln(2+2c²); the stated bounds fail for large c"),
            run: inequality_chain,
        },
        Criterion {
            id: "2*",
            title: "ZCP inequality chain with ln(2+2c²) (supplementary)",
            budget: secs(10),
            expected_failure: None,
            run: inequality_chain_corrected,
        },
        Criterion { id: "3", title: "Bernoulli instance", budget: secs(1), expected_failure: None, run: bernoulli_instance_claims },
        Criterion { id: "4", title: "multivariate scaling slopes", budget: secs(5), expected_failure: None, run: multivariate_scaling },
        Criterion { id: "5", title: "Gaussian mixture inequalities", budget: secs(30), expected_failure: None, run: gaussian_mixture },
        Criterion { id: "6", title: "coin betting", budget: secs(30), expected_failure: None, run: betting },
        Criterion { id: "7", title: "Ville crossing frequency", budget: secs(60), expected_failure: None, run: ville },
        Criterion { id: "8", title: "bound coverage", budget: secs(600), expected_failure: None, run: coverage },
        Criterion { id: "9", title: "asymptotics surrogate", budget: secs(30), expected_failure: None, run: asymptotics },
        Criterion { id: "10", title: "analytic lemmas", budget: secs(60), expected_failure: None, run: analytic_lemmas },
        Criterion {
            id: "11",
            title: "kl inversion round trip",
            budget: secs(5),
            expected_failure: Some("near q = 1 one ulp of q moves kl by more than 1e-10"),
            run: kl_round_trip,
        },
        Criterion {
            id: "11*",
            title: "kl inversion is float-optimal (supplementary)",
            budget: secs(5),
            expected_failure: None,
            run: kl_round_trip_float_optimal,
        },
    ]
}

fn main() {
    let mut unexpected = 0;
    for c in criteria() {
        let start = Instant::now();
        let verdict = (c.run)();
        let elapsed = start.elapsed();
        let (passed, detail) = match verdict {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} budget", c.budget)),
            Err(d) => (false, d),
        };
        let status = if passed { "PASS" } else { "FAIL" };
        let note = match (passed, c.expected_failure) {
            (false, Some(reason)) => format!(" [expected: {reason}]"),
            (true, Some(_)) => {
                unexpected += 1;
                " [unexpected pass]".to_string()
            }
            (false, None) => {
                unexpected += 1;
                String::new()
            }
            (true, None) => String::new(),
        };
        println!("{status} criterion {:<3} {} ({:.2}s): {detail}{note}", c.id, c.title, elapsed.as_secs_f64());
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criterion outcome(s) differ from expectation");
        std::process::exit(1);
    }
}
