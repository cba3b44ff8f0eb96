//! Monte Carlo coverage of the bounds for a Gibbs posterior on a finite
//! parameter set.

use zcp_paclab::bounds::BoundConfig;
use zcp_paclab::harness::{run_coverage, LearningInstance, PosteriorRule};

fn main() -> zcp_paclab::Result<()> {
    let cfg = BoundConfig::new(1000, 0.05, 2.0)?;
    let instances = [
        ("absolute distance", LearningInstance::abs_distance(50, PosteriorRule::Gibbs { eta: 5.0 })?),
        ("Bernoulli", LearningInstance::bernoulli(50, PosteriorRule::Gibbs { eta: 5.0 })?),
    ];
    for (name, inst) in &instances {
        let report = run_coverage(inst, &cfg, 1000, 2024)?;
        let first = &report.reports[0];
        println!("{name}: KL = {:.3}, hoeffding_zcp = {:.4}, mcallester = {:.4}", first.d_kl, first.hoeffding_zcp, first.mcallester);
        for line in &report.lines {
            println!(
                "  {:<22} {:>4} failures  Wilson {:.4} <= {:.2}  {}",
                line.bound.name(),
                line.failures,
                line.wilson_upper_99,
                report.delta_budget,
                if line.pass { "pass" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
