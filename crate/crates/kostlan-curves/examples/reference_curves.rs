//! The three deterministic reference curves: a small oval, a nest of
//! concentric circles with a Chebyshev radial profile, and a constellation of
//! far-apart rotated ovals.

use kostlan_curves::projgeom::fs_distance;
use kostlan_curves::reference::{
    chebyshev_nest, scattered_ovals, small_oval, Reference,
};
use kostlan_curves::experiments::scattered_points;

fn main() {
    let d = 120;

    let oval = small_oval(d, 2.0).unwrap();
    println!("small oval at d = {d}, f = 2:");
    println!("  zero circle radius  {:.6}", oval.zero_radius);
    println!("  guard annulus       ({:.6}, {:.6})", oval.inner_radius, oval.outer_radius);
    println!("  |P|_2^2 exact       {:.6e}", oval.l2_norm_sq_exact());
    println!("  |P|_2^2 from coeffs {:.6e}", oval.poly.l2_norm_sq());
    println!("  asymptotic 2f^2/d^4 {:.6e}", 2.0 * 4.0 / (d as f64).powi(4));

    let nest = chebyshev_nest(d, 6.0, 0.9).unwrap();
    println!("\nchebyshev nest at d = {d}, f = 6, alpha = 0.9 (n = {}):", nest.n);
    println!("  zero radii      {:?}", rounded(&nest.zero_radii));
    println!("  extremal radii  {:?}", rounded(&nest.extremal_radii));
    // the radial profile swings to +-1 at the extremal radii, so the sign
    // alternates strictly between consecutive circles
    let signs: Vec<i8> = nest
        .extremal_radii
        .iter()
        .map(|&r| nest.radial_value(r).signum() as i8)
        .collect();
    println!("  signs at extrema {signs:?}");
    println!("  annuli certified {:?}", nest.annuli().len());

    let points = scattered_points(d, 0.3, 3).unwrap();
    let sc = scattered_ovals(d, &points, 0.3).unwrap();
    println!("\nscattered ovals at d = {d}, m = 3, epsilon = 0.3:");
    for (i, p) in sc.points.iter().enumerate() {
        println!("  center {i} at {:?}", p.representative().map(|x| (x * 1e4).round() / 1e4));
    }
    let mut min_sep = f64::INFINITY;
    for i in 0..sc.points.len() {
        for j in 0..i {
            min_sep = min_sep.min(fs_distance(&sc.points[i], &sc.points[j]));
        }
    }
    println!("  min separation {:.4} (required {:.4})", min_sep, sc.min_separation);
    println!("  |P2|_2^2       {:.6e}", sc.poly.l2_norm_sq());
    println!("  10m/d^4        {:.6e}", sc.asymptotic_l2_norm_sq());
}

fn rounded(xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|x| (x * 1e4).round() / 1e4).collect()
}
