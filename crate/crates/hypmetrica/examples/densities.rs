//! Ferrand, Kulkarni-Pinkall and quasihyperbolic densities along a ray of a
//! punctured disk, with the extremal disk at each point.

use hypmetrica::geometry::{DomainSpec, Point, Region};
use hypmetrica::metrics::{ferrand_density, kp_density};

fn main() -> hypmetrica::Result<()> {
    let d = DomainSpec::punctured_disk(Point::ORIGIN);
    println!("{:>6} {:>10} {:>10} {:>10} {:>8}  extremal", "r", "sigma", "mu", "1/delta", "mu/sigma");
    for r in [0.05, 0.1, 0.25, 0.5, 0.75, 0.9] {
        let z = Point::new(r, 0.0);
        let sigma = ferrand_density(&d, z, 1024)?.value;
        let (mu, ext) = kp_density(&d, z, 1024)?;
        let qh = 1.0 / d.dist_to_boundary(z)?;
        let shape = match ext.disk {
            Region::Disk(k) => format!("disk r = {:.3}", k.radius),
            Region::Halfplane(_) => "half-plane".to_string(),
        };
        println!("{r:>6.2} {sigma:>10.4} {:>10.4} {qh:>10.4} {:>8.4}  {shape}", mu.value, mu.value / sigma);
    }
    Ok(())
}
