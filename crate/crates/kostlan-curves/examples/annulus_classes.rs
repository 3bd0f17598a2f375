//! Z_2 class of a curve inside an annulus, decided by ray crossing parity.
//! Every ray from the inner to the outer boundary must agree; disagreement
//! means the curve touches a boundary circle and the class is reported as
//! indeterminate rather than guessed.

use kostlan_curves::kostlan::{sample_kostlan, SamplerConfig, VarianceConvention};
use kostlan_curves::projgeom::ProjectivePoint;
use kostlan_curves::reference::{small_oval, Reference};
use kostlan_curves::topology::{annulus_class, ray_parity, AnnulusClass, AnnulusSpec, TopologyError};

fn main() {
    let d = 40;
    let oval = small_oval(d, 1.0).unwrap();

    // the guard annulus straddles the oval's zero circle, so the class is
    // nontrivial: every ray crosses the curve exactly once
    let guard = oval.annuli().into_iter().next().unwrap();
    println!("small oval at d = {d}, f = 1:");
    println!("  zero circle at r = {:.4}", oval.zero_radius);
    println!("  guard annulus   ({:.4}, {:.4})", guard.r1, guard.r2);
    for k in 0..4 {
        let th = std::f64::consts::PI * k as f64 / 4.0;
        let parity = ray_parity(&oval.poly, &guard, [th.cos(), th.sin()], 256).unwrap();
        println!("  ray at angle {th:.2}: parity {parity}");
    }
    let class = annulus_class(&oval.poly, &guard, 8, 256).unwrap();
    println!("  class: {class:?}");

    // an annulus strictly inside the oval misses the curve entirely
    let inside = AnnulusSpec::new(
        ProjectivePoint::new(1.0, 0.0, 0.0).unwrap(),
        0.2 * oval.zero_radius,
        0.5 * oval.zero_radius,
    )
    .unwrap();
    let class = annulus_class(&oval.poly, &inside, 8, 256).unwrap();
    println!("  annulus inside the oval: {class:?}");

    // random curves almost always cross the annulus boundary somewhere, so
    // most draws come back indeterminate; the rest are overwhelmingly trivial
    let cfg = SamplerConfig::new(d, VarianceConvention::Half, 42).unwrap();
    let annulus = guard;
    let mut counts = [0usize; 3];
    let trials = 400;
    for t in 0..trials {
        let q = sample_kostlan(&cfg, t);
        match annulus_class(&q, &annulus, 8, 256) {
            Ok(AnnulusClass::Trivial) => counts[0] += 1,
            Ok(AnnulusClass::Nontrivial) => counts[1] += 1,
            Err(TopologyError::Inconsistent { .. })
            | Err(TopologyError::BoundaryDegenerate { .. }) => counts[2] += 1,
            Err(e) => panic!("unexpected failure: {e}"),
        }
    }
    println!("\nrandom curves, {trials} draws in the same annulus:");
    println!("  trivial        {}", counts[0]);
    println!("  nontrivial     {}", counts[1]);
    println!("  indeterminate  {}", counts[2]);
}
