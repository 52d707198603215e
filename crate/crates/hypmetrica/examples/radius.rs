//! Radii of parabolic starlikeness and of the class U for the class S.

use hypmetrica::bounds::{radius_sp, radius_sp_second_coeff, radius_u, radius_u_residual};

fn main() -> hypmetrica::Result<()> {
    for (mu, alpha) in [(0.5, 0.0), (0.5, 0.5), (0.9, -0.5)] {
        let r = radius_sp(mu, alpha)?;
        println!("S_p  mu {mu} alpha {alpha:>4}: r0 = {:.12} (residual {:.1e}, routes agree to {:.1e})", r.r0, r.residual, r.cross_check);
    }
    for f2 in [0.0, 2.0, 4.0] {
        let r = radius_sp_second_coeff(0.0, f2)?;
        println!("S_p  |f''(0)| = {f2}: r0 = {:.12}", r.r0);
    }
    for (alpha, lambda) in [(0.0, 1.0), (0.5, 0.5)] {
        let r = radius_u(alpha, lambda)?;
        println!("U    alpha {alpha} lambda {lambda}: r = {r:.12} (residual {:.1e})", radius_u_residual(alpha, lambda, r));
    }
    Ok(())
}
