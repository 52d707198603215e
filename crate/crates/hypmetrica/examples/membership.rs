//! Coefficient and norm screens of a few series against several classes.

use hypmetrica::univalent::{class_screens, ClassSpec, PowerSeries};

fn main() -> hypmetrica::Result<()> {
    let n = 256;
    let series = [("koebe", PowerSeries::koebe(n)), ("ell", PowerSeries::ell(n)), ("z + z^2/4", PowerSeries::from_real(&[0.0, 1.0, 0.25])?)];
    let classes = [ClassSpec::Starlike { alpha: 0.0 }, ClassSpec::Convex { alpha: 0.0 }, ClassSpec::U { lambda: 1.0, mu: 1.0 }];
    for (name, f) in &series {
        for class in &classes {
            println!("{name} in {class:?}");
            match class_screens(f, class, 1.0) {
                Ok(reports) => {
                    for r in reports {
                        println!("  {:<28} {} (slack {:+.4e})", r.condition_id, if r.satisfied { "met" } else { "not met" }, r.slack);
                    }
                }
                Err(e) => println!("  not applicable: {e}"),
            }
        }
    }
    Ok(())
}
