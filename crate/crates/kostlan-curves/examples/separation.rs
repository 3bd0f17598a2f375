//! Which marked points does a curve separate from which? Two points are in
//! the same class when a path between them avoids the curve. The scattered
//! reference isolates each of its centers inside its own oval, so it splits
//! m points into m classes; a random curve of the same degree usually leaves
//! them all connected to each other.

use kostlan_curves::experiments::scattered_points;
use kostlan_curves::kostlan::{sample_unit_sphere, SamplerConfig, VarianceConvention};
use kostlan_curves::projgeom::SphereGrid;
use kostlan_curves::reference::scattered_ovals;
use kostlan_curves::topology::separation_classes;

fn main() {
    let d = 60;
    let m = 3;
    let points = scattered_points(d, 0.3, m).unwrap();
    let sc = scattered_ovals(d, &points, 0.3).unwrap();

    let res = ((6.0 * (d as f64).sqrt()).ceil() as usize).max(64);
    let grid = SphereGrid::new(res).unwrap();
    println!("grid resolution {res} ({} cells)", grid.num_cells());

    let classes = separation_classes(&sc.poly, &sc.points, &grid).unwrap();
    println!("\nscattered reference, d = {d}, m = {m}:");
    println!("  classes {classes:?} (each center fenced off by its own oval)");

    let cfg = SamplerConfig::new(d, VarianceConvention::Half, 2024).unwrap();
    let mut tally = std::collections::BTreeMap::<String, usize>::new();
    let mut indeterminate = 0usize;
    let trials = 60;
    for t in 0..trials {
        let q = sample_unit_sphere(&cfg, t);
        // a marked point can fall in a cell the curve passes through; retry
        // finer once, then give up on that draw
        let classes = match separation_classes(&q, &points, &grid) {
            Ok(c) => c,
            Err(_) => {
                let fine = SphereGrid::new(4 * res).unwrap();
                match separation_classes(&q, &points, &fine) {
                    Ok(c) => c,
                    Err(_) => {
                        indeterminate += 1;
                        continue;
                    }
                }
            }
        };
        let sig = classes
            .iter()
            .map(|g| g.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("+"))
            .collect::<Vec<_>>()
            .join("|");
        *tally.entry(sig).or_insert(0) += 1;
    }
    println!("\nrandom curves, {trials} draws, partition frequencies:");
    for (sig, count) in &tally {
        println!("  {sig:<8} {count}");
    }
    println!("  indeterminate {indeterminate}");
}
