//! Builds a domain from JSON, checks it and samples its boundary.

use hypmetrica::geometry::{sample_boundary, DomainSpec, Point};

const SPEC: &str = r#"{
  "base": { "type": "polygon", "vertices": [[0, 0], [4, 0], [4, 3], [0, 3]] },
  "holes": [ { "type": "disk", "center": [2, 1.5], "radius": 0.5 } ]
}"#;

fn main() -> hypmetrica::Result<()> {
    let d = DomainSpec::from_json(SPEC)?;
    d.validate()?;
    println!("convex: {}, scale: {}", d.is_convex(), d.scale());
    for z in [Point::new(1.0, 1.0), Point::new(2.0, 1.5), Point::new(3.5, 2.9)] {
        match d.dist_to_boundary(z) {
            Ok(delta) => println!("delta({:.1}, {:.1}) = {delta:.4}", z.x, z.y),
            Err(e) => println!("({:.1}, {:.1}): {e}", z.x, z.y),
        }
    }
    let s = sample_boundary(&d, 64)?;
    println!("{} boundary samples; first {:?}", s.len(), s.points[0]);
    println!("{}", d.to_json());
    Ok(())
}
