//! Count ovals nested around a point. The Chebyshev reference has a known
//! depth by construction; random curves at the same degrees almost never
//! nest at all, which is the contrast the depth statistic exists to measure.

use kostlan_curves::kostlan::{sample_kostlan, SamplerConfig, VarianceConvention};
use kostlan_curves::projgeom::ProjectivePoint;
use kostlan_curves::reference::chebyshev_nest;
use kostlan_curves::topology::nest_depth_at;

fn main() {
    let center = ProjectivePoint::new(1.0, 0.0, 0.0).unwrap();

    println!("deterministic nests (depth is n/2 by construction):");
    for (d, f) in [(40, 4.0), (80, 6.0), (160, 8.0)] {
        let nest = chebyshev_nest(d, f, 0.9).unwrap();
        let window = 1.3 * nest.extremal_radii[0];
        let res = ((16.0 * window * (d as f64).sqrt()).ceil() as usize).max(256);
        let depth = nest_depth_at(&nest.poly, &center, window, res).unwrap();
        println!(
            "  d = {d:>3}, f = {f}: n = {:>2}, measured depth {} (lower bound only: {})",
            nest.n, depth.depth, depth.is_lower_bound
        );
    }

    // random curves: depth around a fixed point across many draws
    println!("\nrandom curves, 300 draws each:");
    for d in [10usize, 20, 40] {
        let cfg = SamplerConfig::new(d, VarianceConvention::Half, 11).unwrap();
        let window = (6.0 / (d as f64)).sqrt().min(1.5);
        let res = ((16.0 * window * (d as f64).sqrt()).ceil() as usize).max(256);
        let mut hist = std::collections::BTreeMap::<usize, usize>::new();
        let mut indeterminate = 0usize;
        for t in 0..300u64 {
            let q = sample_kostlan(&cfg, t);
            match nest_depth_at(&q, &center, window, res) {
                Ok(nd) => *hist.entry(nd.depth).or_insert(0) += 1,
                Err(_) => indeterminate += 1,
            }
        }
        let mean: f64 = hist.iter().map(|(&k, &c)| (k * c) as f64).sum::<f64>()
            / hist.values().sum::<usize>() as f64;
        println!(
            "  d = {d:>2}: depth histogram {:?}, mean {mean:.4}, indeterminate {indeterminate}",
            hist
        );
    }
}
