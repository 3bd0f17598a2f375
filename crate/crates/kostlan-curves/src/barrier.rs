//! The quantitative layer behind perturbation-stability statements:
//! ball-average norms, the local sup-norm bound they imply, the threshold
//! m(d) and its probability lower bound, plus reproducing-kernel diagnostics
//! (Bergman diagonal, subspace diagonal, sup-norm estimation on a grid).
//!
//! The chain, for a reference P̃ with ‖P̃‖₂ = 1 that stays large on a
//! boundary set K ⊂ B(0, R/2), R = √(g/d):
//!
//!   sup_K ‖Q‖²_FS/‖P̃‖²_FS ≤ factor(g, d, inf_K) · ‖Q‖²_B     (mean value)
//!   m² = factor · 2N_d,  Pr[curve keeps the class] ≥ m/(2√(2π))·e^{−2m²}
//!
//! where ‖Q‖²_B is the average of ‖Q‖²_FS over the Fubini-Study ball of
//! radius arctan R.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::poly::{num_monomials, HomogeneousPoly, PolyError};
use crate::projgeom::{rotation_to, ProjGeomError, ProjectivePoint, SphereGrid};
use crate::reference::{
    boundary_fs_lower_bound, CircleAssessment, Reference, ReferenceError, ReferenceKind,
};

#[derive(Debug, Error)]
pub enum BarrierError {
    #[error("ball parameter g = {g} must satisfy 1 <= g <= d = {d}")]
    BadBallParameter { g: f64, d: usize },
    #[error("need at least {min} Monte Carlo samples, got {got}")]
    TooFewSamples { got: usize, min: usize },
    #[error("polynomial degree {0} does not match the ball's degree parameter {1}")]
    DegreeMismatch(usize, usize),
    #[error("vector must be L2-normalized, got squared norm {0}")]
    NotUnitNorm(f64),
    #[error(transparent)]
    Geom(#[from] ProjGeomError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Reference(#[from] ReferenceError),
}

/// The Fubini-Study ball B_FS(center, arctan √(g/d)); in the affine chart at
/// `center` it is the Euclidean ball of radius R = √(g/d).
#[derive(Debug, Clone)]
pub struct BallSpec {
    pub center: ProjectivePoint,
    pub g: f64,
    pub d: usize,
}

impl BallSpec {
    pub fn new(center: ProjectivePoint, g: f64, d: usize) -> Result<Self, BarrierError> {
        if !(g.is_finite() && g >= 1.0 && g <= d as f64) {
            return Err(BarrierError::BadBallParameter { g, d });
        }
        Ok(Self { center, g, d })
    }

    /// Chart radius R(d) = √(g/d).
    pub fn chart_radius(&self) -> f64 {
        (self.g / self.d as f64).sqrt()
    }

    /// FS radius ρ(d) = arctan R(d).
    pub fn fs_radius(&self) -> f64 {
        self.chart_radius().atan()
    }
}

/// Monte Carlo estimate of a ball-average with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct BallAverage {
    pub mean: f64,
    pub std_err: f64,
    pub n_samples: usize,
}

pub const MIN_BALL_SAMPLES: usize = 1000;

/// Average of ‖Q(t)‖²_FS over B_FS(center, ρ), estimated by FS-uniform
/// sampling: Lebesgue-uniform draws from the chart ball thinned with weight
/// (1+‖t‖²)⁻³. The acceptance rate is at least (1+g/d)⁻³ ≥ 1/8.
pub fn ball_average_norm_sq<R: Rng + ?Sized>(
    q: &HomogeneousPoly,
    ball: &BallSpec,
    n_samples: usize,
    rng: &mut R,
) -> Result<BallAverage, BarrierError> {
    if n_samples < MIN_BALL_SAMPLES {
        return Err(BarrierError::TooFewSamples { got: n_samples, min: MIN_BALL_SAMPLES });
    }
    if q.degree() != ball.d {
        return Err(BarrierError::DegreeMismatch(q.degree(), ball.d));
    }
    let dense = q.to_dense();
    let rot = rotation_to(&ball.center);
    let radius = ball.chart_radius();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        // Lebesgue-uniform point of the chart 4-ball, thinned to FS-uniform
        let t: [f64; 4] = loop {
            let mut v = [0.0f64; 4];
            let mut n2 = 0.0;
            for c in &mut v {
                *c = rng.sample(StandardNormal);
                n2 += *c * *c;
            }
            if n2 < 1e-30 {
                continue;
            }
            let r = radius * rng.gen::<f64>().powf(0.25) / n2.sqrt();
            for c in &mut v {
                *c *= r;
            }
            let norm2 = v.iter().map(|c| c * c).sum::<f64>();
            if rng.gen::<f64>() < (1.0 + norm2).powi(-3) {
                break v;
            }
        };
        let t_norm2 = t.iter().map(|c| c * c).sum::<f64>();
        let s = 1.0 / (1.0 + t_norm2).sqrt();
        // unit representative of [1 : t₁ : t₂] moved to the ball's chart
        let local_re = rot.apply([s, s * t[0], s * t[2]]);
        let local_im = rot.apply([0.0, s * t[1], s * t[3]]);
        let x = [
            Complex64::new(local_re[0], local_im[0]),
            Complex64::new(local_re[1], local_im[1]),
            Complex64::new(local_re[2], local_im[2]),
        ];
        let v = dense.evaluate_complex(x).norm_sqr();
        sum += v;
        sum_sq += v * v;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(BallAverage { mean, std_err: (var / n).sqrt(), n_samples })
}

/// 2⁴·exp(3g/4)·(1+g/d)³ / inf_K: multiplying the ball-average square of any
/// Q bounds sup_K ‖Q‖²_FS / ‖P‖²_FS, provided K ⊂ B(0, R/2) and
/// inf_K = inf ‖P‖²_FS.
pub fn local_sup_bound_factor(g: f64, d: usize, inf_k: f64) -> f64 {
    assert!(inf_k > 0.0, "inf_K must be positive");
    16.0 * (0.75 * g).exp() * (1.0 + g / d as f64).powi(3) / inf_k
}

/// m(d) = √(local_sup_bound_factor · 2N_d), the perturbation threshold for an
/// L²-normalized reference.
pub fn compute_m(d: usize, g: f64, inf_k: f64) -> f64 {
    (local_sup_bound_factor(g, d, inf_k) * 2.0 * num_monomials(d) as f64).sqrt()
}

/// A probability that may underflow f64: exact in log-space.
#[derive(Debug, Clone, Copy)]
pub struct ProbBound {
    /// e^ln_value, 0.0 once it underflows (roughly below 10⁻³⁰⁸).
    pub value: f64,
    pub ln_value: f64,
    pub log10: f64,
}

impl ProbBound {
    pub fn from_ln(ln_value: f64) -> Self {
        Self { value: ln_value.exp(), ln_value, log10: ln_value / std::f64::consts::LN_10 }
    }
}

/// m/(2√(2π))·e^{−2m²}, the probability lower bound attached to the
/// threshold m (computed under the unit-variance normalization).
pub fn barrier_probability_lower_bound(m: f64) -> ProbBound {
    assert!(m > 0.0, "threshold must be positive");
    let ln = m.ln() - (2.0 * (2.0 * std::f64::consts::PI).sqrt()).ln() - 2.0 * m * m;
    ProbBound::from_ln(ln)
}

/// Everything the barrier argument produces for one reference: the boundary
/// infimum (numeric, with the closed-form bound alongside), the threshold m,
/// and the probability bound.
#[derive(Debug, Clone)]
pub struct BarrierCertificate {
    pub kind: ReferenceKind,
    pub d: usize,
    pub g: f64,
    /// Sampled infimum of the normalized squared FS norm over the boundary
    /// circles; this is what m is computed from.
    pub inf_k_numeric: f64,
    /// Infimum of the closed-form circle bounds.
    pub inf_k_bound: f64,
    /// True when the numeric infimum undercuts the closed-form bound (degree
    /// below the asymptotic regime); m still stands, since it only relies on
    /// the numeric value.
    pub below_asymptotic: bool,
    pub m: f64,
    pub prob_lower: ProbBound,
    pub circles: Vec<CircleAssessment>,
}

/// Runs the full chain for a reference curve and ball parameter g.
pub fn certify(
    reference: &dyn Reference,
    g: f64,
    angles: usize,
) -> Result<BarrierCertificate, BarrierError> {
    let d = reference.degree();
    if !(g.is_finite() && g >= 1.0 && g <= d as f64) {
        return Err(BarrierError::BadBallParameter { g, d });
    }
    let (assessment, below) = match boundary_fs_lower_bound(reference, angles) {
        Ok(a) => (a, false),
        Err(ReferenceError::BelowAsymptoticRegime { assessment, .. }) => (assessment, true),
        Err(e) => return Err(e.into()),
    };
    let m = compute_m(d, g, assessment.numeric_inf);
    Ok(BarrierCertificate {
        kind: reference.kind(),
        d,
        g,
        inf_k_numeric: assessment.numeric_inf,
        inf_k_bound: assessment.bound_inf,
        below_asymptotic: below,
        m,
        prob_lower: barrier_probability_lower_bound(m),
        circles: assessment.circles,
    })
}

/// Σ_𝐢 ‖X^𝐢(z)‖²_FS/‖X^𝐢‖²₂ at the chart point z: the reproducing-kernel
/// diagonal, which unitary invariance forces to equal N_d everywhere. The sum
/// is evaluated term by term in log-space, so the constancy is a genuine
/// computation rather than an identity.
pub fn bergman_diagonal(d: usize, z: [Complex64; 2]) -> f64 {
    let norm2 = 1.0 + z[0].norm_sqr() + z[1].norm_sqr();
    let u = [1.0 / norm2, z[0].norm_sqr() / norm2, z[1].norm_sqr() / norm2];
    let ln_u = [u[0].ln(), u[1].ln(), u[2].ln()];
    let mut ln_fact = vec![0.0f64; d + 1];
    for k in 1..=d {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    let mut terms = Vec::with_capacity(num_monomials(d));
    let mut max_ln = f64::NEG_INFINITY;
    for i0 in 0..=d {
        for i1 in 0..=(d - i0) {
            let i2 = d - i0 - i1;
            let idx = [i0, i1, i2];
            if idx.iter().zip(&u).any(|(&i, &uj)| i > 0 && uj == 0.0) {
                continue;
            }
            let mut ln_t = ln_fact[d] - ln_fact[i0] - ln_fact[i1] - ln_fact[i2];
            for j in 0..3 {
                if idx[j] > 0 {
                    ln_t += idx[j] as f64 * ln_u[j];
                }
            }
            max_ln = max_ln.max(ln_t);
            terms.push(ln_t);
        }
    }
    let sum: f64 = terms.iter().map(|t| (t - max_ln).exp()).sum();
    num_monomials(d) as f64 * max_ln.exp() * sum
}

/// Diagnostics of the projection kernel onto the hyperplane v⊥: its diagonal
/// is N_d − ‖v(x)‖²_FS, and α = sup of that over the grid divided by
/// k = N_d − 1.
#[derive(Debug, Clone)]
pub struct SubspaceDiag {
    pub v: HomogeneousPoly,
    pub k: usize,
    pub alpha: f64,
    pub sup_diag: f64,
    pub min_diag: f64,
    /// Real point attaining the minimum (the peak of v, if it has one).
    pub min_point: [f64; 3],
    pub resolution: usize,
}

pub fn subspace_alpha(
    v: &HomogeneousPoly,
    grid: &SphereGrid,
) -> Result<SubspaceDiag, BarrierError> {
    let n2 = v.l2_norm_sq();
    if (n2 - 1.0).abs() > 1e-8 {
        return Err(BarrierError::NotUnitNorm(n2));
    }
    let n_d = num_monomials(v.degree()) as f64;
    let dense = v.to_dense();
    let mut sup = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    let mut min_point = [0.0; 3];
    let mut visit = |x: [f64; 3]| {
        let val = dense.evaluate(x);
        let diag = n_d - val * val;
        if diag > sup {
            sup = diag;
        }
        if diag < min {
            min = diag;
            min_point = x;
        }
    };
    for i in 0..grid.num_vertices() {
        visit(grid.vertex(i));
    }
    for c in 0..grid.num_cells() {
        visit(grid.cell_center(c));
    }
    let k = num_monomials(v.degree()) - 1;
    Ok(SubspaceDiag {
        v: v.clone(),
        k,
        alpha: sup / k as f64,
        sup_diag: sup,
        min_diag: min,
        min_point,
        resolution: grid.resolution(),
    })
}

/// Sup of the FS norm over the real points, from a grid sweep (vertices and
/// cell centers) refined twice around the argmax on a shrinking tangent-plane
/// window. The grid resolution should grow like √d, since FS norms of
/// degree-d polynomials vary on the scale d^{-1/2}.
pub fn sup_norm_estimate(p: &HomogeneousPoly, resolution: usize) -> Result<f64, BarrierError> {
    let grid = SphereGrid::new(resolution)?;
    let dense = p.to_dense();
    let mut best = f64::NEG_INFINITY;
    let mut argmax = [1.0, 0.0, 0.0];
    {
        let mut visit = |x: [f64; 3]| {
            let v = dense.evaluate(x);
            let v2 = v * v;
            if v2 > best {
                best = v2;
                argmax = x;
            }
        };
        for i in 0..grid.num_vertices() {
            visit(grid.vertex(i));
        }
        for c in 0..grid.num_cells() {
            visit(grid.cell_center(c));
        }
    }
    let mut h = 3.0 / resolution as f64;
    for _ in 0..2 {
        let x = argmax;
        // tangent frame at x
        let pick = if x[0].abs() <= x[1].abs() && x[0].abs() <= x[2].abs() {
            [1.0, 0.0, 0.0]
        } else if x[1].abs() <= x[2].abs() {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let mut u = [
            x[1] * pick[2] - x[2] * pick[1],
            x[2] * pick[0] - x[0] * pick[2],
            x[0] * pick[1] - x[1] * pick[0],
        ];
        let un = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
        for c in &mut u {
            *c /= un;
        }
        let w = [
            x[1] * u[2] - x[2] * u[1],
            x[2] * u[0] - x[0] * u[2],
            x[0] * u[1] - x[1] * u[0],
        ];
        for ia in 0..17 {
            let a = h * (ia as f64 / 8.0 - 1.0);
            for ib in 0..17 {
                let b = h * (ib as f64 / 8.0 - 1.0);
                let mut y = [
                    x[0] + a * u[0] + b * w[0],
                    x[1] + a * u[1] + b * w[1],
                    x[2] + a * u[2] + b * w[2],
                ];
                let n = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
                for c in &mut y {
                    *c /= n;
                }
                let v = dense.evaluate(y);
                let v2 = v * v;
                if v2 > best {
                    best = v2;
                    argmax = y;
                }
            }
        }
        h /= 4.0;
    }
    Ok(best.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kostlan::{
        sample_kostlan_with, SamplerConfig, VarianceConvention,
    };
    use crate::poly::{monomial_l2_norm, MultiIndex};
    use crate::projgeom::random_rotation;
    use crate::reference::{chebyshev_nest, small_oval};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + k as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn ball_spec_validation() {
        assert!(BallSpec::new(ProjectivePoint::e0(), 0.5, 10).is_err());
        assert!(BallSpec::new(ProjectivePoint::e0(), 11.0, 10).is_err());
        let b = BallSpec::new(ProjectivePoint::e0(), 4.0, 100).unwrap();
        assert!((b.chart_radius() - 0.2).abs() < 1e-15);
        assert!((b.fs_radius() - 0.2f64.atan()).abs() < 1e-15);
    }

    #[test]
    fn ball_average_zero_and_validation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ball = BallSpec::new(ProjectivePoint::e0(), 4.0, 12).unwrap();
        let zero = HomogeneousPoly::zero(12).unwrap();
        let avg = ball_average_norm_sq(&zero, &ball, 1000, &mut rng).unwrap();
        assert_eq!(avg.mean, 0.0);
        assert!(ball_average_norm_sq(&zero, &ball, 999, &mut rng).is_err());
        let wrong = HomogeneousPoly::zero(11).unwrap();
        assert!(ball_average_norm_sq(&wrong, &ball, 1000, &mut rng).is_err());
    }

    #[test]
    fn ball_average_monomial_matches_quadrature() {
        // ‖X̃₀^d‖²_FS averaged over B_FS(0, ρ):
        //   ∫ r³(1+r²)^{-d-3} dr / ∫ r³(1+r²)^{-3} dr / ‖X₀^d‖²₂
        let d = 24usize;
        let ball = BallSpec::new(ProjectivePoint::e0(), 3.0, d).unwrap();
        let r_max = ball.chart_radius();
        let num = simpson(&|r: f64| r.powi(3) * (1.0 + r * r).powi(-(d as i32) - 3), 0.0, r_max, 4000);
        let den = simpson(&|r: f64| r.powi(3) * (1.0 + r * r).powi(-3), 0.0, r_max, 4000);
        let norm = monomial_l2_norm(MultiIndex::new(d, 0, 0));
        let expect = num / den / (norm * norm);
        let p = HomogeneousPoly::monomial(MultiIndex::new(d, 0, 0), 1.0 / norm).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let avg = ball_average_norm_sq(&p, &ball, 40_000, &mut rng).unwrap();
        assert!(
            (avg.mean - expect).abs() <= 4.0 * avg.std_err,
            "MC {} ± {} vs quadrature {}",
            avg.mean,
            avg.std_err,
            expect
        );
        // the same ball moved elsewhere must see the rotated polynomial identically
        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        let ball2 = BallSpec::new(ProjectivePoint::e1(), 3.0, d).unwrap();
        let rot = rotation_to(&ProjectivePoint::e1());
        let p2 = p.rotate(&rot);
        let avg2 = ball_average_norm_sq(&p2, &ball2, 40_000, &mut rng2).unwrap();
        assert!((avg2.mean - avg.mean).abs() <= 1e-9 * avg.mean);
    }

    #[test]
    fn ball_average_expectation_is_dimension() {
        // E ‖F‖²_B = N_d under the unit convention, N_d/2 under half
        let d = 16usize;
        let n_d = num_monomials(d) as f64;
        let ball = BallSpec::new(ProjectivePoint::e0(), 4.0, d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (conv, want) in
            [(VarianceConvention::Unit, n_d), (VarianceConvention::Half, n_d / 2.0)]
        {
            let cfg = SamplerConfig::new(d, conv, 5).unwrap();
            let trials = 200;
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..trials {
                let f = sample_kostlan_with(&cfg, &mut rng);
                let avg = ball_average_norm_sq(&f, &ball, 1000, &mut rng).unwrap();
                sum += avg.mean;
                sum_sq += avg.mean * avg.mean;
            }
            let mean = sum / trials as f64;
            let se = ((sum_sq / trials as f64 - mean * mean).max(0.0) / trials as f64).sqrt();
            assert!(
                (mean - want).abs() <= 4.0 * se + 0.01 * want,
                "{conv:?}: {mean} ± {se} vs {want}"
            );
        }
    }

    #[test]
    fn direct_sum_decomposition_and_markov_fraction() {
        // E(Y²) = E(Y²_W) + E(Y²_{W⊥}) and μ(Y²_W ≤ 2N_d) ≥ ½
        let d = 12usize;
        let n_d = num_monomials(d) as f64;
        let cfg = SamplerConfig::new(d, VarianceConvention::Unit, 77).unwrap();
        let ball = BallSpec::new(ProjectivePoint::e0(), 3.0, d).unwrap();
        let v = small_oval(d, 2.0).unwrap().poly.normalize_l2().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 150;
        let (mut full, mut inside, mut ortho, mut below) = (0.0, 0.0, 0.0, 0usize);
        for _ in 0..trials {
            let f = sample_kostlan_with(&cfg, &mut rng);
            let c = f.l2_inner(&v).unwrap();
            let q_w = f.add_scaled(&v, -c).unwrap();
            let q_perp = v.scale(c);
            full += ball_average_norm_sq(&f, &ball, 1000, &mut rng).unwrap().mean;
            let w_avg = ball_average_norm_sq(&q_w, &ball, 1000, &mut rng).unwrap().mean;
            inside += w_avg;
            ortho += ball_average_norm_sq(&q_perp, &ball, 1000, &mut rng).unwrap().mean;
            if w_avg <= 2.0 * n_d {
                below += 1;
            }
        }
        let (full, inside, ortho) =
            (full / trials as f64, inside / trials as f64, ortho / trials as f64);
        assert!(
            (full - (inside + ortho)).abs() <= 0.05 * full,
            "decomposition: {full} vs {inside} + {ortho}"
        );
        assert!((full - n_d).abs() <= 0.05 * n_d);
        let frac = below as f64 / trials as f64;
        assert!(frac >= 0.5 - 3.0 * (0.25f64 / trials as f64).sqrt(), "fraction {frac}");
    }

    #[test]
    fn sup_bound_factor_and_m() {
        // degenerate limit: g → 0, d → ∞, inf_K = 16
        assert!((local_sup_bound_factor(0.0, 1_000_000_000, 16.0) - 1.0).abs() < 1e-6);
        let v = local_sup_bound_factor(4.0, 10_000, 1.0);
        let want = 16.0 * 3.0f64.exp() * 1.0004f64.powi(3);
        assert!((v - want).abs() <= 1e-12 * want);
        // algebraic inversion: m = 1
        let d = 37;
        let g = 3.0f64;
        let inf = 32.0 * num_monomials(d) as f64 * (0.75 * g).exp() * (1.0 + g / d as f64).powi(3);
        assert!((compute_m(d, g, inf) - 1.0).abs() <= 1e-12);
        // monotone in g, anti-monotone in inf_K
        assert!(compute_m(100, 5.0, 1.0) > compute_m(100, 4.0, 1.0));
        assert!(compute_m(100, 5.0, 2.0) < compute_m(100, 5.0, 1.0));
        // the regime of interest: d = 10⁴, f = 2, g = 6f, inf from the
        // closed-form boundary bound → m² ≤ 2¹⁰·e^{6f}
        let d = 10_000usize;
        let f = 2.0f64;
        let inf = (d as f64).powi(2) / 32.0 * (-1.5 * f).exp();
        let m = compute_m(d, 6.0 * f, inf);
        assert!(m * m <= 1024.0 * (6.0 * f).exp(), "m² = {}", m * m);
    }

    #[test]
    fn probability_bound_values() {
        let p = barrier_probability_lower_bound(1.0);
        let want = 1.0 / (2.0 * (2.0 * std::f64::consts::PI).sqrt()) * (-2.0f64).exp();
        assert!((p.value - want).abs() <= 1e-15);
        // monotone decreasing past m = 1/2 (in log-space, the values underflow)
        let mut prev = barrier_probability_lower_bound(0.5).ln_value;
        for k in 1..40 {
            let m = 0.5 + k as f64 * 0.5;
            let v = barrier_probability_lower_bound(m).ln_value;
            assert!(v < prev);
            prev = v;
        }
        let tiny = barrier_probability_lower_bound(50.0);
        assert_eq!(tiny.value, 0.0);
        assert!((tiny.log10 - (50.0f64.ln() - (2.0 * (2.0 * std::f64::consts::PI).sqrt()).ln() - 5000.0) / std::f64::consts::LN_10).abs() < 1e-9);
        // Asymptotic-regime sanity: with f = (1/6)·ln(ε·ln d / 2¹¹) and
        // m² ≤ 2¹⁰·e^{6f}, the bound is at least d^{-ε}. The regime only
        // opens up for ln d > 2¹¹, far beyond f64 as a plain number, so work
        // with ln d itself.
        let eps = 1.0;
        for ln_d in [3000.0f64, 5000.0, 1e6] {
            let f = (eps * ln_d / 2048.0).ln() / 6.0;
            assert!(f > 0.0);
            let m_sq = 1024.0 * (6.0 * f).exp();
            let ln_p =
                0.5 * m_sq.ln() - (2.0 * (2.0 * std::f64::consts::PI).sqrt()).ln() - 2.0 * m_sq;
            assert!(ln_p >= -eps * ln_d, "{ln_p} vs {}", -eps * ln_d);
        }
    }

    #[test]
    fn mean_value_certificate_holds_empirically() {
        // Prop-level check: sup_K ‖Q‖²/‖P‖²_FS ≤ factor · ball-average, for a
        // small-oval boundary with g = 6f. A violation is an implementation bug.
        let d = 30usize;
        let f = 2.0;
        let so = small_oval(d, f).unwrap();
        let p_norm = so.poly.normalize_l2().unwrap();
        let ball = BallSpec::new(ProjectivePoint::e0(), 6.0 * f, d).unwrap();
        let assess = boundary_fs_lower_bound(&so, 512);
        let inf_k = match assess {
            Ok(a) => a.numeric_inf,
            Err(ReferenceError::BelowAsymptoticRegime { assessment, .. }) => {
                assessment.numeric_inf
            }
            Err(e) => panic!("{e}"),
        };
        let factor = local_sup_bound_factor(6.0 * f, d, inf_k);
        let cfg = SamplerConfig::new(d, VarianceConvention::Unit, 99).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let angles = 128;
        for _ in 0..150 {
            let q = sample_kostlan_with(&cfg, &mut rng);
            let avg = ball_average_norm_sq(&q, &ball, 2000, &mut rng).unwrap();
            let qd = q.to_dense();
            let mut sup_ratio = 0.0f64;
            for &r in &[so.inner_radius, so.outer_radius] {
                let s = 1.0 / (1.0 + r * r).sqrt();
                for a in 0..angles {
                    let th = 2.0 * std::f64::consts::PI * a as f64 / angles as f64;
                    let x = [s, s * r * th.cos(), s * r * th.sin()];
                    let qv = qd.evaluate(x);
                    let ratio = qv * qv / p_norm.fs_norm_sq_at_sphere(x);
                    sup_ratio = sup_ratio.max(ratio);
                }
            }
            // the MC ball-average has noise; 3 standard errors of slack
            assert!(
                sup_ratio <= factor * (avg.mean + 3.0 * avg.std_err),
                "sup ratio {sup_ratio} vs factor·avg {}",
                factor * avg.mean
            );
        }
    }

    #[test]
    fn certify_produces_consistent_threshold() {
        let so = small_oval(600, 2.0).unwrap();
        let cert = certify(&so, 12.0, 512).unwrap();
        assert!(!cert.below_asymptotic);
        assert!(cert.inf_k_numeric >= cert.inf_k_bound);
        let m = compute_m(600, 12.0, cert.inf_k_numeric);
        assert_eq!(cert.m, m);
        assert!((cert.prob_lower.ln_value - barrier_probability_lower_bound(m).ln_value).abs() < 1e-12);
        // f = 1 small ovals sit below the asymptotic constant
        let low = small_oval(600, 1.0).unwrap();
        let cert = certify(&low, 6.0, 256).unwrap();
        assert!(cert.below_asymptotic);
        assert!(cert.m > 0.0);
        // nest variant goes through the same path
        let nest = chebyshev_nest(600, 5.0, 0.9).unwrap();
        let cert = certify(&nest, 20.0, 256).unwrap();
        assert_eq!(cert.circles.len(), 3);
        assert!(certify(&so, 0.2, 64).is_err());
    }

    #[test]
    fn bergman_diagonal_is_constant_dimension() {
        let zero = [Complex64::new(0.0, 0.0); 2];
        for d in [1usize, 2, 5, 20] {
            let v = bergman_diagonal(d, zero);
            let n_d = num_monomials(d) as f64;
            assert!((v - n_d).abs() <= 1e-11 * n_d, "d = {d}: {v}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let z = [
                Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
            ];
            let v = bergman_diagonal(20, z);
            let n_d = num_monomials(20) as f64;
            assert!((v - n_d).abs() <= 1e-9 * n_d, "z = {z:?}: {v}");
        }
    }

    #[test]
    fn subspace_diagnostics() {
        let d = 14usize;
        let grid = SphereGrid::new(24).unwrap();
        let n_d = num_monomials(d) as f64;
        // peaked direction: the diagonal dips to 0 exactly at the peak
        let norm = monomial_l2_norm(MultiIndex::new(d, 0, 0));
        let peak = HomogeneousPoly::monomial(MultiIndex::new(d, 0, 0), 1.0 / norm).unwrap();
        let diag = subspace_alpha(&peak, &grid).unwrap();
        assert!(diag.min_diag.abs() <= 1e-9 * n_d);
        assert!(diag.min_point[0].abs() > 0.999);
        assert_eq!(diag.k, num_monomials(d) - 1);
        assert!(diag.alpha >= 1.0 && diag.alpha <= n_d / (n_d - 1.0) + 1e-12);
        // a flat direction: alpha ≈ N_d/(N_d−1)
        let cfg = SamplerConfig::new(d, VarianceConvention::Unit, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = sample_kostlan_with(&cfg, &mut rng).normalize_l2().unwrap();
        let diag = subspace_alpha(&v, &grid).unwrap();
        assert!(diag.alpha <= n_d / (n_d - 1.0) + 1e-12);
        assert!(diag.alpha >= (n_d - 30.0) / (n_d - 1.0), "alpha {}", diag.alpha);
        // un-normalized input is rejected
        assert!(subspace_alpha(&v.scale(1.1), &grid).is_err());
    }

    #[test]
    fn sup_norm_grid_estimate() {
        let d = 24usize;
        let norm = monomial_l2_norm(MultiIndex::new(d, 0, 0));
        let peak = HomogeneousPoly::monomial(MultiIndex::new(d, 0, 0), 1.0 / norm).unwrap();
        let res = (6.0 * (d as f64).sqrt()).ceil() as usize;
        let est = sup_norm_estimate(&peak, res).unwrap();
        let exact = 1.0 / norm;
        // e0 is a grid vertex, so the peak is hit exactly
        assert!((est - exact).abs() <= 1e-12 * exact, "{est} vs {exact}");
        // rotation moves the peak off-grid; refinement must still find it
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let r = random_rotation(&mut rng);
            let est_r = sup_norm_estimate(&peak.rotate(&r), res).unwrap();
            assert!(
                (est_r - exact).abs() <= 5e-3 * exact,
                "rotated estimate {est_r} vs {exact}"
            );
        }
    }
}
