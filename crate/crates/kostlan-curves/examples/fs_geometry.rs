//! A tour of the geometric layer: Fubini-Study distances, ball volumes,
//! deterministic ball packings, and the antipodal sphere grid.

use kostlan_curves::projgeom::{
    fs_ball_volume, fs_distance, pack_fs_balls, rotation_to, ProjectivePoint, SphereGrid,
};

fn main() {
    let e0 = ProjectivePoint::e0();
    let e1 = ProjectivePoint::e1();
    let diag = ProjectivePoint::new(1.0, 1.0, 0.0).unwrap();

    println!("distances from [1:0:0]:");
    println!("  to [0:1:0]      = {:.6} (max possible = pi/2)", fs_distance(&e0, &e1));
    println!("  to [1:1:0]      = {:.6} (pi/4)", fs_distance(&e0, &diag));
    println!("  to itself       = {:.6}", fs_distance(&e0, &e0));
    let anti = ProjectivePoint::new(-1.0, 0.0, 0.0).unwrap();
    println!("  to its negation = {:.6} (same projective point)", fs_distance(&e0, &anti));

    println!("\nball volumes (total volume of RP^2's double cover model = pi^2/2):");
    for rho in [0.1, 0.3, std::f64::consts::PI / 4.0, std::f64::consts::PI / 2.0] {
        println!("  vol(rho = {rho:.4}) = {:.6}", fs_ball_volume(rho).unwrap());
    }

    // how many disjoint balls of radius rho fit pairwise 2*rho apart
    println!("\ngreedy disjoint ball packings:");
    for rho in [0.4, 0.2, 0.1, 0.05] {
        let centers = pack_fs_balls(rho).unwrap();
        let mut min_sep = f64::INFINITY;
        for i in 0..centers.len().min(40) {
            for j in 0..i {
                min_sep = min_sep.min(fs_distance(&centers[i], &centers[j]));
            }
        }
        println!(
            "  rho = {rho:<5} -> {:4} centers, min pairwise distance {:.4} (needs {:.4})",
            centers.len(),
            min_sep,
            2.0 * rho
        );
    }

    // every chart computation happens after rotating the center to [1:0:0]
    let p = ProjectivePoint::new(0.3, -0.5, 0.8).unwrap();
    let r = rotation_to(&p);
    let moved = r.apply([1.0, 0.0, 0.0]);
    println!("\nrotation_to sends e0 to the target:");
    println!("  target         {:?}", p.representative());
    println!("  rotated e0     {moved:?}");

    let grid = SphereGrid::new(24).unwrap();
    println!("\nsphere grid at resolution 24:");
    println!("  {} cells, {} vertices", grid.num_cells(), grid.num_vertices());
    let c = grid.locate_cell([0.6, -0.64, 0.48]);
    let a = grid.cell_antipode(c);
    let cc = grid.cell_center(c);
    let ca = grid.cell_center(a);
    println!("  cell {c} center {cc:?}");
    println!("  its antipode {a} center {ca:?}");
    assert!((cc[0] + ca[0]).abs() + (cc[1] + ca[1]).abs() + (cc[2] + ca[2]).abs() < 1e-12);
}
