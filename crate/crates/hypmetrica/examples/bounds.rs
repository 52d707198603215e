//! Sharp norm bounds: closed forms next to their grid maximizations.

use hypmetrica::bounds::{
    bernardi_norm_bound, bound_dabgamma, bound_l_beta, bound_l_one, bound_mabbc, bound_nab, bound_strongly_starlike,
    delta_bernardi, delta_gamma,
};

fn main() -> hypmetrica::Result<()> {
    for (b, c) in [(1.0, 2.0), (2.0, 3.0)] {
        let grid = bound_l_beta(1.0, b, c)?;
        let closed = bound_l_one(b, c)?;
        println!("L(1,{b},{c})   grid {:.10} at x = {:.6}, closed {:.10}", grid.value, grid.extremizer, closed.value);
    }
    println!("L(0.9,1,2)   {:.10}", bound_l_beta(0.9, 1.0, 2.0)?.value);
    println!("N(1,-1)      {:.10}", bound_nab(1.0, -1.0)?);
    println!("M(0.5,-0.5,2,2) {:.10} vs N(0.5,-0.5) {:.10}", bound_mabbc(0.5, -0.5, 2.0, 2.0)?.value, bound_nab(0.5, -0.5)?);
    let d = bound_dabgamma(1.0, -1.0, 1.0)?;
    println!("D(1,-1,1)    {:.10} at x = {:.6}", d.value, d.extremizer);
    let ss = bound_strongly_starlike(0.5, 0.25)?;
    println!("SS(0.5,0.25) {:.10} with k = {:.6}", ss.value, ss.extremizer);
    println!("delta(1)     {:.10}", delta_gamma(1.0)?);
    println!("delta(0,1)   {:.10}", delta_bernardi(0.0, 1.0)?);
    println!("6 - 4 delta  {:.10}", bernardi_norm_bound(1.0)?);
    Ok(())
}
