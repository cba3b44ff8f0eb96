//! Every divergence on one discrete pair, and the ZCP bounds in terms of KL
//! and TV across a range of scales `c`.

use zcp_paclab::distributions::{make_discrete, DiscretePair};
use zcp_paclab::divergences::{zcp_c_shift_bound, zcp_c_shift_bound_sq, zcp_upper_bound_kl_tv_sq};

fn main() -> zcp_paclab::Result<()> {
    let p = make_discrete(&[0.5, 0.3, 0.15, 0.05])?;
    let q = make_discrete(&[0.25, 0.25, 0.25, 0.25])?;
    let pair = DiscretePair::from_weights(p, q)?;

    let (kl, tv, z1) = (pair.kl(), pair.tv(), pair.zcp(1.0)?);
    println!("KL = {kl:.6}  TV = {tv:.6}  Renyi(2) = {:.6}  ZCP(1) = {z1:.6}", pair.renyi(2.0)?);
    println!("sqrt(8 TV KL) = {:.6}", (8.0 * tv * kl).sqrt());
    println!();
    println!("{:>10} {:>12} {:>14} {:>14} {:>14}", "c", "ZCP(c)", "shift (c)", "shift (c^2)", "KL-TV (c^2)");
    for c in [1.0, 10.0, 1e3, 1e6] {
        println!(
            "{c:>10.0e} {:>12.6} {:>14.6} {:>14.6} {:>14.6}",
            pair.zcp(c)?,
            zcp_c_shift_bound(z1, tv, c),
            zcp_c_shift_bound_sq(z1, tv, c),
            zcp_upper_bound_kl_tv_sq(kl, tv, c)
        );
    }
    Ok(())
}
