//! Every bound for a concentrated posterior against a uniform prior, and the
//! ZCP versus KL comparison on the multivariate instance.

use zcp_paclab::bounds::{bound_report, BoundConfig, BoundReport, SampleSummary};
use zcp_paclab::distributions::{make_discrete, DiscreteDistribution, DiscretePair};
use zcp_paclab::harness::tightness_comparison;

fn main() -> zcp_paclab::Result<()> {
    let prior = DiscreteDistribution::uniform(20)?;
    let mut w = vec![0.002; 20];
    w[0] = 0.962;
    let pair = DiscretePair::from_weights(make_discrete(&w)?, prior)?;
    let sample = SampleSummary { realized_gap: 0.0, v_hat: 0.05, p_hat_mean: 0.1, p_mean: 0.1 };
    let cfg = BoundConfig::new(5000, 0.05, 2.0)?;
    let report = bound_report(&pair, &sample, &cfg)?;
    for (name, value) in BoundReport::FIELDS.iter().zip(report.values()).take(10) {
        println!("{name:>16} = {value:.6}");
    }

    println!("\nZCP (Hoeffding) vs KL (McAllester), n = 1e6, u = 2");
    let d: Vec<usize> = (6..=12).map(|k| 1usize << k).collect();
    for row in tightness_comparison(2.0, &d, &BoundConfig::new(1_000_000, 0.05, 2.0)?)? {
        println!("  d = {:>5}  zcp {:.5}  kl {:.5}  ratio {:.3}", row.d, row.hoeffding_zcp, row.mcallester, row.ratio);
    }
    Ok(())
}
