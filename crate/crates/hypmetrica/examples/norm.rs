//! Pre-Schwarzian norms of the named families and of transformed series.

use hypmetrica::univalent::{bernardi, libera, norm, DiskSampler, PowerSeries};

fn main() -> hypmetrica::Result<()> {
    let n = 256;
    let sampler = DiskSampler::default();
    let cases = [
        ("koebe", PowerSeries::koebe(n)),
        ("ell", PowerSeries::ell(n)),
        ("g_beta(0.9)", PowerSeries::g_beta(0.9, n)),
        ("extremal_AB(1,-1)", PowerSeries::extremal_ab(1.0, -1.0, n)?),
        ("libera(koebe)", libera(&PowerSeries::koebe(n))?),
        ("bernardi(koebe, 2)", bernardi(&PowerSeries::koebe(n), 2.0)?),
    ];
    for (name, f) in cases {
        let e = norm(&f, &sampler)?;
        println!(
            "{name:<20} {:.6}  at |z| = {:.4}, arg z = {:.4}{}",
            e.value,
            e.argmax_radius,
            e.argmax_angle,
            if e.boundary_limit { " (boundary limit)" } else { "" }
        );
    }
    Ok(())
}
