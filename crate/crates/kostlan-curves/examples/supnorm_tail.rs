//! Sup of the normalized curve magnitude over the real points, for the full
//! Gaussian ensemble and for the ensemble conditioned to a hyperplane. The
//! medians grow like sqrt(ln d) and conditioning on one linear constraint
//! barely moves them, because removing one direction out of (d+2)(d+1)/2
//! leaves the covariance diagonal essentially unchanged.

use kostlan_curves::barrier::{subspace_alpha, sup_norm_estimate};
use kostlan_curves::experiments::scattered_points;
use kostlan_curves::kostlan::{
    sample_in_hyperplane, sample_kostlan, SamplerConfig, VarianceConvention,
};
use kostlan_curves::projgeom::SphereGrid;
use kostlan_curves::reference::scattered_ovals;

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 { xs[n / 2] } else { 0.5 * (xs[n / 2 - 1] + xs[n / 2]) }
}

fn main() {
    let trials = 80u64;
    println!("sup-norm medians over {trials} draws (normalized to |Q|_2 = 1):");
    println!("{:>4} {:>12} {:>12} {:>10} {:>10}", "d", "full", "hyperplane", "ratio", "med/sqrt(ln d)");

    for d in [10usize, 20, 40] {
        let cfg = SamplerConfig::new(d, VarianceConvention::Half, 5).unwrap();
        let res = ((6.0 * (d as f64).sqrt()).ceil() as usize).max(48);

        // hyperplane direction: the scattered reference, L2-normalized
        let pts = scattered_points(d, 0.3, 2).unwrap();
        let v = scattered_ovals(d, &pts, 0.3).unwrap().poly.normalize_l2().unwrap();

        let mut full = Vec::new();
        let mut hyp = Vec::new();
        for t in 0..trials {
            let q = sample_kostlan(&cfg, t).normalize_l2().unwrap();
            full.push(sup_norm_estimate(&q, res).unwrap().sqrt());
            let q = sample_in_hyperplane(&cfg, &v, t).unwrap().normalize_l2().unwrap();
            hyp.push(sup_norm_estimate(&q, res).unwrap().sqrt());
        }
        let (mf, mh) = (median(&mut full), median(&mut hyp));
        println!(
            "{d:>4} {mf:>12.4} {mh:>12.4} {:>10.4} {:>10.4}",
            mh / mf,
            mf / (d as f64).ln().sqrt()
        );

        let diag = subspace_alpha(&v, &SphereGrid::new(res).unwrap()).unwrap();
        println!(
            "     conditioned covariance diagonal: sup over points / (N_d - 1) = {:.6}",
            diag.alpha
        );
    }
}
