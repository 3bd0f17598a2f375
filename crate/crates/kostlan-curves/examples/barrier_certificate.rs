//! Certify a probability lower bound for curves near each reference: find
//! the smallest normalized value of the reference on its guard circles, turn
//! it into a coefficient budget m, and bound the chance that a Gaussian
//! perturbation stays within budget.

use kostlan_curves::barrier::{ball_average_norm_sq, bergman_diagonal, certify, BallSpec};
use kostlan_curves::experiments::scattered_points;
use kostlan_curves::kostlan::trial_rng;
use kostlan_curves::projgeom::ProjectivePoint;
use kostlan_curves::reference::{chebyshev_nest, scattered_ovals, small_oval, Reference};
use num_complex::Complex64;

fn main() {
    let d = 80;
    let g = 6.0;
    let angles = (4 * d).max(512);

    let refs: Vec<Box<dyn Reference>> = vec![
        Box::new(small_oval(d, 2.0).unwrap()),
        Box::new(chebyshev_nest(d, 5.0, 0.9).unwrap()),
        Box::new(scattered_ovals(d, &scattered_points(d, 0.3, 2).unwrap(), 0.3).unwrap()),
    ];

    println!("certificates at d = {d}, g = {g}:");
    for r in &refs {
        let cert = certify(r.as_ref(), g, angles).unwrap();
        println!("\n  {}", cert.kind.as_str());
        println!("    inf K over boundary (numeric) {:.4e}", cert.inf_k_numeric);
        println!("    inf K over boundary (bound)   {:.4e}", cert.inf_k_bound);
        println!("    coefficient budget m          {:.4}", cert.m);
        println!(
            "    P(perturbation within budget) >= 10^{:.2}",
            cert.prob_lower.log10
        );
        for c in &cert.circles {
            println!(
                "      circle {:<16} r = {:.4}  numeric inf {:.3e}  bound {:.3e}",
                c.label, c.radius, c.numeric_inf, c.bound
            );
        }
    }

    // the reproducing kernel diagonal is constant over C^2: sampling it at a
    // few points recovers the dimension count (d+2)(d+1)/2
    println!("\nbergman diagonal at d = 10 (should equal 66 everywhere):");
    for z in [
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.3, -0.2), Complex64::new(1.1, 0.4)],
        [Complex64::new(5.0, 0.0), Complex64::new(0.0, 7.0)],
    ] {
        println!("  z = ({}, {}) -> {:.9}", z[0], z[1], bergman_diagonal(10, z));
    }

    // Monte Carlo average of the normalized square over a small ball around
    // a point where the oval reference is far from zero
    let oval = small_oval(d, 2.0).unwrap();
    let ball = BallSpec::new(ProjectivePoint::new(1.0, 0.0, 0.0).unwrap(), g, d).unwrap();
    let mut rng = trial_rng(7, 0, 3);
    let avg = ball_average_norm_sq(&oval.poly, &ball, 4000, &mut rng).unwrap();
    println!(
        "\nball average of K around e0 (fs radius {:.4}): {:.4e} +- {:.1e}",
        ball.fs_radius(),
        avg.mean,
        avg.std_err
    );
    println!("value at the center itself: {:.4e}", oval.fs_norm_sq_at_sphere([1.0, 0.0, 0.0]));
}
