//! Renders the Kulkarni-Pinkall density of an annulus with a geodesic and
//! medial-axis overlay; writes `annulus_mu.svg` and `annulus_mu.csv`.

use hypmetrica::cli::{emit_field_plot, FieldKind, PlotOptions};
use hypmetrica::geometry::{DomainSpec, Point};

fn main() -> hypmetrica::Result<()> {
    let d = DomainSpec::annulus(1.0, 4.0);
    let opts = PlotOptions { geodesic: Some((Point::new(2.0, 0.0), Point::new(-2.0, 0.5))), hma: true, ..PlotOptions::default() };
    let plot = emit_field_plot(&d, FieldKind::Mu, 48, &opts)?;
    let io = |e: std::io::Error| hypmetrica::Error::Io(e.to_string());
    std::fs::write("annulus_mu.svg", &plot.svg).map_err(io)?;
    std::fs::write("annulus_mu.csv", &plot.csv).map_err(io)?;
    println!("{} samples written to annulus_mu.svg and annulus_mu.csv", plot.data.samples.len());
    Ok(())
}
