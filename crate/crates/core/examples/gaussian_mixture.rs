//! Quadrature divergences between a two-component Gaussian mixture and a
//! single Gaussian, with the inequalities for both width exponents.

use zcp_paclab::distributions::gaussian_instance;
use zcp_paclab::divergences::{divergence_gaussian, DivergenceKind, QuadratureConfig};
use zcp_paclab::harness::gaussian_instance_check;

fn main() -> zcp_paclab::Result<()> {
    let cfg = QuadratureConfig::default();
    let pair = gaussian_instance(0.1, 1.0, 1.0)?;
    for kind in [DivergenceKind::Kl, DivergenceKind::Tv, DivergenceKind::Zcp { c: 1.0 }, DivergenceKind::Renyi { alpha: 2.0 }] {
        let v = divergence_gaussian(&pair, kind, &cfg)?;
        println!("{:>6}: {:.10} (± {:.1e})", kind.name(), v.value, v.abs_error);
    }

    for exponent in [1.0, 0.75] {
        println!("\nexponent {exponent}");
        for r in gaussian_instance_check(&[0.2, 0.1, 0.05, 0.02], 1.0, exponent, &cfg)? {
            println!(
                "  p = {:<5} KL = {:>8.4} >= {:>8.4}   product = {:.4} <= 0.5   {}",
                r.p,
                r.kl,
                r.kl_lower,
                r.product,
                if r.pass { "ok" } else { "FAILED" }
            );
        }
    }
    Ok(())
}
