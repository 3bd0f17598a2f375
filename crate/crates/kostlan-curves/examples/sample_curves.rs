//! Draw random curves and look at them through the component extractor:
//! counts, nesting, and lengths in a chart window around [1:0:0].

use kostlan_curves::kostlan::{sample_kostlan, SamplerConfig, VarianceConvention};
use kostlan_curves::projgeom::ProjectivePoint;
use kostlan_curves::topology::{component_length, extract_components, LengthMetric};

fn main() {
    let center = ProjectivePoint::e0();
    for d in [8, 20, 50] {
        let cfg = SamplerConfig::new(d, VarianceConvention::Half, 42).unwrap();
        // window a few wavelengths wide; the curve oscillates at scale 1/sqrt(d)
        let radius = (4.0 / (d as f64).sqrt()).min(1.0);
        println!("degree {d}, window radius {radius:.3}");
        for trial in 0..3 {
            let f = sample_kostlan(&cfg, trial);
            let set = extract_components(&f, &center, radius, 256).unwrap();
            let closed = set.closed_count();
            let open = set.open_count();
            let nested = set
                .components
                .iter()
                .filter(|c| c.parent.is_some())
                .count();
            let mut lengths: Vec<f64> = set
                .components
                .iter()
                .filter(|c| c.is_closed)
                .map(|c| component_length(c, LengthMetric::Euclidean).unwrap())
                .collect();
            lengths.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let longest = lengths.first().copied().unwrap_or(0.0);
            println!(
                "  trial {trial}: {closed} ovals ({nested} nested), {open} boundary arcs, \
                 longest oval {longest:.4}"
            );
        }
    }

    // the same polynomial, measured in both metrics: for small windows the
    // Fubini-Study length is slightly shorter than the Euclidean one
    let cfg = SamplerConfig::new(30, VarianceConvention::Half, 7).unwrap();
    let f = sample_kostlan(&cfg, 0);
    let set = extract_components(&f, &center, 0.6, 384).unwrap();
    println!("\nmetric comparison at d = 30:");
    for (i, c) in set.components.iter().enumerate().filter(|(_, c)| c.is_closed) {
        let e = component_length(c, LengthMetric::Euclidean).unwrap();
        let fs = component_length(c, LengthMetric::FubiniStudy).unwrap();
        println!("  oval {i}: euclidean {e:.4}, fubini-study {fs:.4}, ratio {:.4}", fs / e);
    }
}
