//! Every distance of the library between two points of an annulus.

use hypmetrica::geometry::{DomainSpec, Point};
use hypmetrica::metrics::{
    apollonian_distance, apollonian_inner_distance, j_distance, lambda_apollonian_distance, quasihyperbolic_distance,
    seittenranta_distance, GeodesicOptions, JVariant,
};

fn main() -> hypmetrica::Result<()> {
    let d = DomainSpec::annulus(1.0, 4.0);
    let x = Point::new(2.0, 0.0);
    let y = Point::new(0.0, 2.5);
    let m = 512;
    let g = GeodesicOptions::default();

    let (alpha, params) = apollonian_distance(&d, x, y, m)?;
    println!("alpha         {:.6}  (+/- {:.1e})", alpha.value, alpha.error_estimate);
    if let Some((c, r)) = params.ball_x(x, y) {
        println!("  ball at x   center ({:.3}, {:.3}) radius {:.3}", c.x, c.y, r);
    }
    println!("j (min)       {:.6}", j_distance(&d, x, y, JVariant::Min)?.value);
    println!("j (product)   {:.6}", j_distance(&d, x, y, JVariant::Product)?.value);
    println!("seittenranta  {:.6}", seittenranta_distance(&d, x, y, m)?.value);
    println!("alpha_lambda  {:.6}", lambda_apollonian_distance(&d, x, y, m)?.value);
    let (k, path) = quasihyperbolic_distance(&d, x, y, &g)?;
    println!("k             {:.6}  ({} path vertices)", k.value, path.vertices.len());
    let (inner, _) = apollonian_inner_distance(&d, x, y, &g)?;
    println!("alpha_inner   {:.6}", inner.value);
    Ok(())
}
