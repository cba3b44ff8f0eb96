//! The Bernoulli and multivariate instance families, where KL grows while
//! TV and ZCP shrink.

use zcp_paclab::distributions::bernoulli_instance;
use zcp_paclab::harness::divergence_scaling_table;

fn main() -> zcp_paclab::Result<()> {
    println!("Bernoulli instance, ln a = 1/p^2");
    for p in [0.2, 0.1, 0.05, 0.01] {
        let pair = bernoulli_instance(p, 1.0 / (p * p))?;
        println!("  p = {p:<5} KL = {:>9.4}  TV = {:.6}  ZCP(1) = {:.6}", pair.kl(), pair.tv(), pair.zcp(1.0)?);
    }

    let d: Vec<usize> = (4..=12).map(|k| 1usize << k).collect();
    let table = divergence_scaling_table(1.0, &d)?;
    println!("\nmultivariate instance, u = 1");
    for r in &table.rows {
        println!("  d = {:>5}  KL = {:>8.4}  TV = {:.3e}  ZCP(1) = {:.5}", r.d, r.kl, r.tv, r.zcp1);
    }
    if let Some([kl, tv, zcp]) = table.slopes {
        println!("  fitted slopes: KL {kl:+.3}, TV {tv:+.3}, ZCP(1) {zcp:+.3}");
    }
    Ok(())
}
