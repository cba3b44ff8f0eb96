//! The fuzzed analytic lemma suite and the full self-check.

use zcp_paclab::bounds::{fenchel_conjugate, fenchel_dual_bound, max_beta_lower, max_beta_objective};
use zcp_paclab::harness::self_check;

fn main() -> zcp_paclab::Result<()> {
    println!("max over beta: {:.6} >= {:.6}", max_beta_objective(3.0, 2.0), max_beta_lower(3.0, 2.0));
    println!("conjugate {:.6} <= dual bound {:.6}", fenchel_conjugate(1.0, 2.0, 4.0), fenchel_dual_bound(1.0, 2.0, 4.0)?);
    println!();
    for line in self_check(5, None)? {
        println!("{:<14} {:>7} draws  {} violations  worst slack {:.3e}", line.name, line.draws, line.violations, line.worst_slack);
    }
    Ok(())
}
