//! The mixture bettor on a few coin sequences: wealth, the best constant
//! bet in hindsight, regret, and a Ville crossing experiment.

use zcp_paclab::betting::{kt_bettor, ville_first_crossing, wealth_quadratic_lower};
use zcp_paclab::harness::{mean_zero_coins, ville_experiment};

fn main() -> zcp_paclab::Result<()> {
    let sequences = [
        ("all ones", vec![1.0; 8]),
        ("biased", (0..200).map(|t| if t % 3 == 0 { -0.5 } else { 0.8 }).collect()),
        ("mean zero", mean_zero_coins(500, 3, 0, 1.0)),
    ];
    for (name, coins) in &sequences {
        let trace = kt_bettor(coins)?;
        let n = coins.len() as f64;
        println!(
            "{name:>9}: n = {:>3}  ln W = {:>8.4}  ln W* = {:>8.4} (beta* = {:+.3}, lower {:.4})  regret {:.4} <= {:.4}",
            coins.len(),
            trace.final_log_wealth(),
            trace.log_wealth_star,
            trace.beta_star,
            wealth_quadratic_lower(coins),
            trace.log_regret(),
            (2.0 * n.sqrt()).ln()
        );
        if let Some(t) = ville_first_crossing(&trace, 0.05)? {
            println!("           wealth first reaches 20 at t = {t}");
        }
    }

    println!();
    for row in ville_experiment(500, &[0.1, 0.05], 2000, 11)? {
        println!(
            "delta = {:<4} crossing rate {:.4}, Wilson upper {:.4}",
            row.delta, row.crossing_rate, row.wilson_upper_99
        );
    }
    Ok(())
}
