//! Real roots of univariate polynomials with binomially weighted Gaussian
//! coefficients. The expected count is exactly sqrt(d), one of the few
//! random-polynomial statistics with a closed form, which makes it a handy
//! end-to-end check of both the sampler and the root counter.

use kostlan_curves::kostlan::{count_real_roots, sample_univariate_kostlan, trial_rng};

fn main() {
    let trials = 4000u64;
    println!("mean real root counts over {trials} draws:");
    println!("{:>4} {:>9} {:>9} {:>8}", "d", "mean", "sqrt(d)", "z");

    for d in [4usize, 9, 16, 36, 64] {
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut flagged = 0usize;
        for t in 0..trials {
            let mut rng = trial_rng(99, t, 1);
            let p = sample_univariate_kostlan(d, &mut rng);
            let rc = count_real_roots(&p).unwrap();
            if rc.flagged {
                flagged += 1;
            }
            let k = rc.count as f64;
            sum += k;
            sumsq += k * k;
        }
        let n = trials as f64;
        let mean = sum / n;
        let se = ((sumsq / n - mean * mean) / n).sqrt();
        let z = (mean - (d as f64).sqrt()) / se;
        println!("{d:>4} {mean:>9.4} {:>9.4} {z:>8.2}", (d as f64).sqrt());
        if flagged > 0 {
            println!("     ({flagged} draws flagged as numerically borderline)");
        }
    }
}
