//! Ratio sweep of two distances near a puncture and its verdict.

use hypmetrica::geometry::{DomainSpec, Point};
use hypmetrica::relations::{classify, estimate_relation, EvalConfig, MetricKind, PairSampler};

fn main() -> hypmetrica::Result<()> {
    let d = DomainSpec::punctured_disk(Point::ORIGIN);
    let sampler = PairSampler::Puncture { center: Point::ORIGIN, count: 50 };
    let scales = [0.1, 0.01, 0.001, 0.0001];
    let cfg = EvalConfig { samples: 512, ..EvalConfig::default() };
    for (a, b) in [(MetricKind::Alpha, MetricKind::JMin), (MetricKind::JMin, MetricKind::JProduct)] {
        let est = estimate_relation(&d, a, b, &sampler, &scales, &cfg)?;
        let verdict = classify(&est, &cfg.thresholds);
        println!("{} / {}: {}", a.name(), b.name(), verdict.class);
        for (s, hi, lo) in &est.refinement_history {
            println!("  scale {s:<8} sup {hi:.4} inf {lo:.4}");
        }
    }
    Ok(())
}
