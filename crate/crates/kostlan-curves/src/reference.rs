//! Deterministic reference curves whose real zero sets have known topology,
//! together with certified lower bounds on their Fubini-Study norm along the
//! circles separating the certified regions.
//!
//! Three constructions:
//!
//! * a *small oval*: X₀^{d-2}(X₁²+X₂²) − (f/d)X₀^d, whose real curve in the
//!   affine chart is the circle ‖z‖ = √(f/d);
//! * a *Chebyshev nest*: the homogenization of T_n((d/f)‖z‖²), n = ⌊αf⌋
//!   rounded down to even, whose curve is n/2 concentric circles;
//! * *scattered ovals*: a sum of rotated small ovals (f = 1) centered at
//!   points of pairwise Fubini-Study distance ≥ 2d^{ε−1/2}.
//!
//! All three stay uniformly large (relative to their L² norm) on explicit
//! boundary circles, which is what makes their topology stable under
//! perturbations; `boundary_fs_lower_bound` measures that and cross-checks
//! the closed-form bounds.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{signed_ratio_to_f64, HomogeneousPoly, MultiIndex, PolyError};
use crate::projgeom::{fs_distance, rotation_to, ProjectivePoint, Rotation};
use crate::topology::AnnulusSpec;

#[derive(Debug, Error)]
pub enum ReferenceError {
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("⌊alpha·f⌋ rounded to even is {n} (f = {f}, alpha = {alpha}); need at least 2")]
    NestDegreeTooSmall { f: f64, alpha: f64, n: i64 },
    #[error(
        "centers {i} and {j} are {distance:.6} apart, below the required separation {required:.6}"
    )]
    SeparationViolated { i: usize, j: usize, distance: f64, required: f64 },
    #[error(
        "numeric infimum {numeric:.6e} on circle `{label}` is below the closed-form bound \
         {bound:.6e}; the degree is below the asymptotic regime for these parameters"
    )]
    BelowAsymptoticRegime {
        label: String,
        numeric: f64,
        bound: f64,
        assessment: BoundaryAssessment,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Chebyshev polynomial of the first kind, with exact integer coefficients
/// from the recurrence T_{k+1} = 2x·T_k − T_{k−1}.
#[derive(Debug, Clone)]
pub struct ChebyshevPoly {
    n: usize,
    coeffs: Vec<BigInt>,
}

impl ChebyshevPoly {
    pub fn new(n: usize) -> Self {
        let mut prev = vec![BigInt::one()];
        if n == 0 {
            return Self { n, coeffs: prev };
        }
        let mut cur = vec![BigInt::zero(), BigInt::one()];
        for _ in 1..n {
            let mut next = vec![BigInt::zero(); cur.len() + 1];
            for (j, c) in cur.iter().enumerate() {
                next[j + 1] += c * 2;
            }
            for (j, c) in prev.iter().enumerate() {
                next[j] -= c;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        Self { n, coeffs: cur }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficients in ascending powers; length n+1.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Horner evaluation of the coefficient form in exact rational
    /// arithmetic, rounded once at the end. The monomial basis is violently
    /// ill-conditioned on [−1, 1] (relative error ~3ⁿ in f64), so the exact
    /// route is the only trustworthy way to evaluate *these coefficients*.
    pub fn evaluate_via_coefficients(&self, x: f64) -> f64 {
        assert!(x.is_finite(), "evaluation point must be finite");
        let xr = BigRational::from_float(x).expect("finite");
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &xr + BigRational::from(c.clone());
        }
        signed_ratio_to_f64(acc.numer(), acc.denom())
    }
}

/// T_n(x) from the stable closed forms: cos(n·arccos x) on [−1, 1] and the
/// cosh analogue outside.
pub fn chebyshev_eval(n: usize, x: f64) -> f64 {
    if x.abs() <= 1.0 {
        (n as f64 * x.acos()).cos()
    } else {
        let ax = x.abs();
        let t = n as f64 * (ax + (ax * ax - 1.0).sqrt()).ln();
        let v = t.exp();
        let val = 0.5 * (v + 1.0 / v);
        if x < 0.0 && n % 2 == 1 {
            -val
        } else {
            val
        }
    }
}

/// The n roots cos((2k+1)π/2n), ascending.
pub fn chebyshev_roots(n: usize) -> Vec<f64> {
    (0..n).map(|k| ((2 * (n - 1 - k) + 1) as f64 * PI / (2.0 * n as f64)).cos()).collect()
}

/// The n+1 extremal points cos(kπ/n) of [−1, 1], ascending; T_n alternates
/// between ±1 on them.
pub fn chebyshev_extrema(n: usize) -> Vec<f64> {
    assert!(n >= 1);
    (0..=n).map(|k| ((n - k) as f64 * PI / n as f64).cos()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    SmallOval,
    Nest,
    Scattered,
}

impl ReferenceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReferenceKind::SmallOval => "small-oval",
            ReferenceKind::Nest => "nest",
            ReferenceKind::Scattered => "scattered",
        }
    }
}

impl std::fmt::Display for ReferenceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A chart circle ‖z‖ = radius (mapped by `rotation`) on which the normalized
/// squared FS norm of a reference stays above `bound`. Radius 0 degenerates
/// to the chart center.
#[derive(Debug, Clone)]
pub struct KCircle {
    pub label: String,
    pub rotation: Rotation,
    pub radius: f64,
    pub bound: f64,
}

/// Common interface of the three reference constructions.
pub trait Reference {
    fn kind(&self) -> ReferenceKind;
    fn degree(&self) -> usize;
    fn poly(&self) -> &HomogeneousPoly;
    fn l2_norm_sq(&self) -> f64;
    /// Boundary circles carrying closed-form FS lower bounds.
    fn k_circles(&self) -> Vec<KCircle>;
    /// Annuli, one per certified curve component class.
    fn annuli(&self) -> Vec<AnnulusSpec>;
    /// Squared FS norm at a unit representative, before L² normalization.
    fn fs_norm_sq_at_sphere(&self, x: [f64; 3]) -> f64 {
        self.poly().fs_norm_sq_at_sphere(x)
    }
}

/// X₀^{d−2}(X₁² + X₂²) − (f/d)·X₀^d. Its real curve in the standard chart is
/// the circle ‖z‖ = √(f/d).
#[derive(Debug, Clone)]
pub struct SmallOval {
    pub d: usize,
    pub f: f64,
    pub poly: HomogeneousPoly,
    /// √(f/d), where the curve lives.
    pub zero_radius: f64,
    /// √(f/2d), inner boundary of the certified annulus.
    pub inner_radius: f64,
    /// √(3f/2d), outer boundary.
    pub outer_radius: f64,
    norm_sq: f64,
}

pub fn small_oval(d: usize, f: f64) -> Result<SmallOval, ReferenceError> {
    if d < 2 {
        return Err(ReferenceError::BadParameters(format!("degree {d} must be at least 2")));
    }
    if !(f.is_finite() && f > 0.0 && f <= d as f64) {
        return Err(ReferenceError::BadParameters(format!(
            "frequency f = {f} must satisfy 0 < f <= d = {d}"
        )));
    }
    let df = d as f64;
    let mut poly = HomogeneousPoly::zero(d)?;
    poly.set_coeff(MultiIndex::new(d, 0, 0), -f / df)?;
    poly.set_coeff(MultiIndex::new(d - 2, 2, 0), 1.0)?;
    poly.set_coeff(MultiIndex::new(d - 2, 0, 2), 1.0)?;
    let norm_sq = small_oval_norm_sq(d, f);
    Ok(SmallOval {
        d,
        f,
        poly,
        zero_radius: (f / df).sqrt(),
        inner_radius: (f / (2.0 * df)).sqrt(),
        outer_radius: (3.0 * f / (2.0 * df)).sqrt(),
        norm_sq,
    })
}

fn small_oval_norm_sq(d: usize, f: f64) -> f64 {
    let df = d as f64;
    (f / df).powi(2) * 2.0 / ((df + 2.0) * (df + 1.0))
        + 8.0 / ((df + 2.0) * (df + 1.0) * df * (df - 1.0))
}

impl SmallOval {
    /// ‖P‖²₂ in closed form: (f/d)²·2/((d+2)(d+1)) + 8/((d+2)(d+1)d(d−1)).
    pub fn l2_norm_sq_exact(&self) -> f64 {
        self.norm_sq
    }

    /// |P(1,z)|²/(1+‖z‖²)^d on the circle ‖z‖ = r (the value only depends on
    /// r), from the radial closed form (r² − f/d)²(1+r²)^{−d}.
    pub fn fs_norm_sq_on_circle(&self, r: f64) -> f64 {
        let q = r * r - self.f / self.d as f64;
        q * q * (-(self.d as f64) * (r * r).ln_1p()).exp()
    }
}

impl Reference for SmallOval {
    fn kind(&self) -> ReferenceKind {
        ReferenceKind::SmallOval
    }
    fn degree(&self) -> usize {
        self.d
    }
    fn poly(&self) -> &HomogeneousPoly {
        &self.poly
    }
    fn l2_norm_sq(&self) -> f64 {
        self.norm_sq
    }
    fn k_circles(&self) -> Vec<KCircle> {
        let d2 = (self.d as f64).powi(2);
        vec![
            KCircle {
                label: "inner".into(),
                rotation: Rotation::identity(),
                radius: self.inner_radius,
                bound: d2 / 32.0 * (-self.f / 2.0).exp(),
            },
            KCircle {
                label: "outer".into(),
                rotation: Rotation::identity(),
                radius: self.outer_radius,
                bound: d2 / 32.0 * (-1.5 * self.f).exp(),
            },
        ]
    }
    fn annuli(&self) -> Vec<AnnulusSpec> {
        vec![AnnulusSpec::new(ProjectivePoint::e0(), self.inner_radius, self.outer_radius)
            .expect("valid radii")]
    }
}

/// Homogenization of T_n((d/f)‖z‖²): n/2 nested circles in the chart, with
/// the radial profile swinging to ±1 between them.
#[derive(Debug, Clone)]
pub struct ChebyshevNest {
    pub d: usize,
    pub f: f64,
    pub alpha: f64,
    /// Chebyshev degree actually used: ⌊αf⌋ rounded down to even, ≥ 2.
    pub n: usize,
    pub poly: HomogeneousPoly,
    /// Radii of the n/2 zero circles, descending.
    pub zero_radii: Vec<f64>,
    /// Radii where the radial profile is ±1: n/2 + 1 values, descending,
    /// ending at exactly 0.
    pub extremal_radii: Vec<f64>,
    norm_sq: f64,
}

pub fn chebyshev_nest(d: usize, f: f64, alpha: f64) -> Result<ChebyshevNest, ReferenceError> {
    if !(f.is_finite() && f > 0.0) || !(alpha > 0.0 && alpha <= 1.0) {
        return Err(ReferenceError::BadParameters(format!(
            "need f > 0 and 0 < alpha <= 1, got f = {f}, alpha = {alpha}"
        )));
    }
    let mut n = (alpha * f).floor() as i64;
    if n % 2 == 1 {
        n -= 1;
    }
    if n < 2 {
        return Err(ReferenceError::NestDegreeTooSmall { f, alpha, n });
    }
    let n = n as usize;
    if d < 2 * n {
        return Err(ReferenceError::BadParameters(format!(
            "degree {d} is too small for a chebyshev degree of {n} (need d >= {})",
            2 * n
        )));
    }
    if f > d as f64 {
        return Err(ReferenceError::BadParameters(format!("f = {f} exceeds the degree {d}")));
    }

    let cheb = ChebyshevPoly::new(n);
    let scale = d as f64 / f;
    let mut poly = HomogeneousPoly::zero(d)?;
    for (j, aj) in cheb.coefficients().iter().enumerate() {
        if aj.is_zero() {
            continue;
        }
        let c = aj.to_f64().expect("coefficient in f64 range") * scale.powi(j as i32);
        for l in 0..=j {
            let b = binomial(j as u64, l as u64).to_f64().expect("binomial in f64 range");
            poly.add_to_coeff(MultiIndex::new(d - 2 * j, 2 * l, 2 * (j - l)), c * b)?;
        }
    }

    let rad = |x: f64| (f / d as f64 * x).sqrt();
    // positive roots / extrema only; the radial variable is (d/f)r² ≥ 0
    let zero_radii: Vec<f64> =
        (0..n / 2).map(|k| rad(((2 * k + 1) as f64 * PI / (2.0 * n as f64)).cos())).collect();
    let extremal_radii: Vec<f64> = (0..=n / 2)
        .map(|k| if 2 * k == n { 0.0 } else { rad((k as f64 * PI / n as f64).cos()) })
        .collect();
    let norm_sq = poly.l2_norm_sq();
    Ok(ChebyshevNest { d, f, alpha, n, poly, zero_radii, extremal_radii, norm_sq })
}

impl ChebyshevNest {
    /// P(1, z) for ‖z‖ = r via the stable closed form T_n((d/f)r²); the
    /// expanded coefficients lose ~3ⁿ relative accuracy near the extrema.
    pub fn radial_value(&self, r: f64) -> f64 {
        chebyshev_eval(self.n, self.d as f64 / self.f * r * r)
    }

    /// f²·2^{10f}/d², a coarse closed-form upper bound for ‖P‖²₂.
    pub fn coarse_l2_norm_sq_bound(&self) -> f64 {
        self.f * self.f * (10.0 * self.f).exp2() / (self.d as f64).powi(2)
    }
}

impl Reference for ChebyshevNest {
    fn kind(&self) -> ReferenceKind {
        ReferenceKind::Nest
    }
    fn degree(&self) -> usize {
        self.d
    }
    fn poly(&self) -> &HomogeneousPoly {
        &self.poly
    }
    fn l2_norm_sq(&self) -> f64 {
        self.norm_sq
    }
    fn k_circles(&self) -> Vec<KCircle> {
        let bound = (self.d as f64 / self.f).powi(2) * (-9.0 * self.f).exp();
        self.extremal_radii
            .iter()
            .enumerate()
            .map(|(k, &r)| KCircle {
                label: format!("extremal {k}"),
                rotation: Rotation::identity(),
                radius: r,
                bound,
            })
            .collect()
    }
    fn annuli(&self) -> Vec<AnnulusSpec> {
        (0..self.n / 2)
            .map(|k| {
                AnnulusSpec::new(
                    ProjectivePoint::e0(),
                    self.extremal_radii[k + 1],
                    self.extremal_radii[k],
                )
                .expect("valid radii")
            })
            .collect()
    }
}

/// Σᵢ P∘Rᵢᵀ where P is the f = 1 small oval and Rᵢ carries the chart origin
/// to the i-th center. Centers must be pairwise ≥ 2d^{ε−1/2} apart, which
/// keeps the cross-interactions exponentially small.
#[derive(Debug, Clone)]
pub struct ScatteredOvals {
    pub d: usize,
    pub epsilon: f64,
    pub m: usize,
    pub points: Vec<ProjectivePoint>,
    pub rotations: Vec<Rotation>,
    /// The unrotated f = 1 small oval.
    pub base: HomogeneousPoly,
    /// One rotated copy per center.
    pub parts: Vec<HomogeneousPoly>,
    /// The expanded sum.
    pub poly: HomogeneousPoly,
    /// √(1/2d) and √(3/2d), the per-center certified annulus.
    pub inner_radius: f64,
    pub outer_radius: f64,
    /// 2d^{ε−1/2}, the required pairwise center separation.
    pub min_separation: f64,
    norm_sq: f64,
}

pub fn scattered_ovals(
    d: usize,
    points: &[ProjectivePoint],
    epsilon: f64,
) -> Result<ScatteredOvals, ReferenceError> {
    if points.is_empty() {
        return Err(ReferenceError::BadParameters("need at least one center".into()));
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(ReferenceError::BadParameters(format!(
            "epsilon = {epsilon} must lie in (0, 1/2)"
        )));
    }
    let min_separation = 2.0 * (d as f64).powf(epsilon - 0.5);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let dist = fs_distance(&points[i], &points[j]);
            if dist < min_separation * (1.0 - 1e-12) {
                return Err(ReferenceError::SeparationViolated {
                    i,
                    j,
                    distance: dist,
                    required: min_separation,
                });
            }
        }
    }
    let base = small_oval(d, 1.0)?.poly;
    let rotations: Vec<Rotation> = points.iter().map(rotation_to).collect();
    let parts: Vec<HomogeneousPoly> = rotations.iter().map(|r| base.rotate(r)).collect();
    let mut poly = parts[0].clone();
    for p in &parts[1..] {
        poly = poly.add_scaled(p, 1.0)?;
    }
    let norm_sq = poly.l2_norm_sq();
    let df = d as f64;
    Ok(ScatteredOvals {
        d,
        epsilon,
        m: points.len(),
        points: points.to_vec(),
        rotations,
        base,
        parts,
        poly,
        inner_radius: (0.5 / df).sqrt(),
        outer_radius: (1.5 / df).sqrt(),
        min_separation,
        norm_sq,
    })
}

impl ScatteredOvals {
    /// Σᵢ base(Rᵢᵀ x) without touching the expanded sum; O(m·d) per point.
    pub fn evaluate_sum_at_unit(&self, x: [f64; 3]) -> f64 {
        let fd = 1.0 / self.d as f64;
        self.rotations
            .iter()
            .map(|rot| {
                let y = rot.apply_transpose(x);
                let y0p = y[0].powi(self.d as i32 - 2);
                y0p * (y[1] * y[1] + y[2] * y[2] - fd * y[0] * y[0])
            })
            .sum()
    }

    /// 10m/d⁴, the leading term of ‖P‖²₂.
    pub fn asymptotic_l2_norm_sq(&self) -> f64 {
        10.0 * self.m as f64 / (self.d as f64).powi(4)
    }
}

impl Reference for ScatteredOvals {
    fn kind(&self) -> ReferenceKind {
        ReferenceKind::Scattered
    }
    fn degree(&self) -> usize {
        self.d
    }
    fn poly(&self) -> &HomogeneousPoly {
        &self.poly
    }
    fn l2_norm_sq(&self) -> f64 {
        self.norm_sq
    }
    fn k_circles(&self) -> Vec<KCircle> {
        let bound = (self.d as f64).powi(2) / (1000.0 * self.m as f64);
        let mut out = Vec::with_capacity(2 * self.m);
        for (i, rot) in self.rotations.iter().enumerate() {
            out.push(KCircle {
                label: format!("center {i} inner"),
                rotation: rot.clone(),
                radius: self.inner_radius,
                bound,
            });
            out.push(KCircle {
                label: format!("center {i} outer"),
                rotation: rot.clone(),
                radius: self.outer_radius,
                bound,
            });
        }
        out
    }
    fn annuli(&self) -> Vec<AnnulusSpec> {
        self.points
            .iter()
            .map(|p| {
                AnnulusSpec::new(p.clone(), self.inner_radius, self.outer_radius)
                    .expect("valid radii")
            })
            .collect()
    }
    fn fs_norm_sq_at_sphere(&self, x: [f64; 3]) -> f64 {
        let v = self.evaluate_sum_at_unit(x);
        v * v
    }
}

#[derive(Debug, Clone)]
pub struct CircleAssessment {
    pub label: String,
    pub radius: f64,
    /// Infimum over the sampled angles of ‖P̃‖²_FS, P̃ = P/‖P‖₂.
    pub numeric_inf: f64,
    /// The closed-form bound the circle is supposed to satisfy.
    pub bound: f64,
}

#[derive(Debug, Clone)]
pub struct BoundaryAssessment {
    pub circles: Vec<CircleAssessment>,
    pub numeric_inf: f64,
    pub bound_inf: f64,
}

/// Samples every boundary circle of `r` at `angles` points and compares the
/// numeric infimum of the normalized squared FS norm with the closed-form
/// bound. If any circle dips below its bound the full assessment is returned
/// inside the error, since the numbers are exactly what a caller needs to
/// report.
pub fn boundary_fs_lower_bound(
    r: &dyn Reference,
    angles: usize,
) -> Result<BoundaryAssessment, ReferenceError> {
    assert!(angles >= 8, "need at least 8 sample angles");
    let norm_sq = r.l2_norm_sq();
    assert!(norm_sq.is_finite() && norm_sq > 0.0);
    let mut circles = Vec::new();
    for kc in r.k_circles() {
        let mut inf = f64::INFINITY;
        if kc.radius == 0.0 {
            let x = kc.rotation.apply([1.0, 0.0, 0.0]);
            inf = r.fs_norm_sq_at_sphere(x) / norm_sq;
        } else {
            let s = 1.0 / (1.0 + kc.radius * kc.radius).sqrt();
            for a in 0..angles {
                let th = 2.0 * PI * a as f64 / angles as f64;
                let local = [s, s * kc.radius * th.cos(), s * kc.radius * th.sin()];
                let v = r.fs_norm_sq_at_sphere(kc.rotation.apply(local)) / norm_sq;
                if v < inf {
                    inf = v;
                }
            }
        }
        circles.push(CircleAssessment {
            label: kc.label,
            radius: kc.radius,
            numeric_inf: inf,
            bound: kc.bound,
        });
    }
    let numeric_inf = circles.iter().map(|c| c.numeric_inf).fold(f64::INFINITY, f64::min);
    let bound_inf = circles.iter().map(|c| c.bound).fold(f64::INFINITY, f64::min);
    let assessment = BoundaryAssessment { circles, numeric_inf, bound_inf };
    if let Some(bad) = assessment.circles.iter().find(|c| c.numeric_inf < c.bound) {
        return Err(ReferenceError::BelowAsymptoticRegime {
            label: bad.label.clone(),
            numeric: bad.numeric_inf,
            bound: bad.bound,
            assessment: assessment.clone(),
        });
    }
    Ok(assessment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chebyshev_small_coefficients() {
        let t0 = ChebyshevPoly::new(0);
        assert_eq!(t0.coefficients(), &[BigInt::from(1)]);
        let t2 = ChebyshevPoly::new(2);
        assert_eq!(t2.coefficients(), &[BigInt::from(-1), BigInt::from(0), BigInt::from(2)]);
        let t5 = ChebyshevPoly::new(5);
        let expected: Vec<BigInt> = [0, 5, 0, -20, 0, 16].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(t5.coefficients(), &expected[..]);
    }

    #[test]
    fn chebyshev_coefficient_bound_and_parity() {
        for n in 1..=40usize {
            let t = ChebyshevPoly::new(n);
            assert_eq!(t.coefficients().len(), n + 1);
            // leading coefficient 2^{n-1}
            assert_eq!(t.coefficients()[n], BigInt::from(1) << (n - 1));
            for (j, a) in t.coefficients().iter().enumerate() {
                if j % 2 != n % 2 {
                    assert!(a.is_zero(), "T_{n} has a nonzero coefficient at parity-violating {j}");
                } else {
                    let cap = binomial(n as u64, j as u64) << j;
                    assert!(a.abs() <= cap, "|a_{j}| of T_{n} exceeds 2^j·C(n,j)");
                }
            }
        }
    }

    #[test]
    fn chebyshev_exact_horner_matches_trig() {
        for &n in &[1usize, 2, 3, 5, 8, 13, 21, 34, 64] {
            let t = ChebyshevPoly::new(n);
            for k in 0..200 {
                let x = -1.0 + 2.0 * (k as f64 + 0.5) / 200.0;
                let exact = t.evaluate_via_coefficients(x);
                let trig = chebyshev_eval(n, x);
                assert!(
                    (exact - trig).abs() <= 1e-10,
                    "T_{n}({x}): coefficient form {exact} vs trig {trig}"
                );
            }
        }
        // outside [-1, 1] the cosh branch must agree with the exact form
        let t = ChebyshevPoly::new(17);
        for &x in &[1.0 + 1e-6, 1.3, 2.0, -1.5, -3.0] {
            let exact = t.evaluate_via_coefficients(x);
            let fast = chebyshev_eval(17, x);
            assert!((exact - fast).abs() <= 1e-9 * exact.abs().max(1.0), "{x}: {exact} vs {fast}");
        }
    }

    #[test]
    fn chebyshev_roots_and_extrema() {
        for &n in &[1usize, 2, 4, 7, 12] {
            let roots = chebyshev_roots(n);
            assert_eq!(roots.len(), n);
            assert!(roots.windows(2).all(|w| w[0] < w[1]));
            for &r in &roots {
                assert!(chebyshev_eval(n, r).abs() <= 1e-12 * n as f64 + 1e-14);
            }
            let ext = chebyshev_extrema(n);
            assert_eq!(ext.len(), n + 1);
            assert!(ext.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(ext[0], -1.0);
            assert_eq!(ext[n], 1.0);
            for (k, &e) in ext.iter().enumerate() {
                // ext is ascending, so ext[k] = cos((n-k)π/n) carries sign (−1)^{n−k}
                let want = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
                assert!((chebyshev_eval(n, e) - want).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn small_oval_shape_and_norm() {
        assert!(small_oval(1, 0.5).is_err());
        assert!(small_oval(10, 0.0).is_err());
        assert!(small_oval(10, 11.0).is_err());
        let so = small_oval(10, 2.0).unwrap();
        assert_eq!(so.poly.num_terms(), 3);
        assert_eq!(so.poly.degree(), 10);
        // the curve is the circle of radius √(f/d)
        let r = so.zero_radius;
        for th in [0.0f64, 0.7, 2.1] {
            let v = so.poly.evaluate_affine([r * th.cos(), r * th.sin()]);
            assert!(v.abs() <= 1e-14);
        }
        let exact = (2.0f64 / 10.0).powi(2) * 2.0 / (12.0 * 11.0) + 8.0 / (12.0 * 11.0 * 10.0 * 9.0);
        assert!((so.l2_norm_sq_exact() - exact).abs() <= 1e-16);
        let computed = so.poly.l2_norm_sq();
        assert!((computed - exact).abs() <= 1e-12 * exact);
    }

    #[test]
    fn small_oval_circle_closed_form() {
        let so = small_oval(64, 3.0).unwrap();
        for &r in &[0.05, so.inner_radius, so.zero_radius * 1.01, so.outer_radius, 0.9] {
            let closed = so.fs_norm_sq_on_circle(r);
            for th in [0.0f64, 1.0, 2.5, 4.0] {
                let direct = so.poly.fs_norm_sq_at([r * th.cos(), r * th.sin()]);
                assert!(
                    (closed - direct).abs() <= 1e-11 * (closed.abs() + direct.abs()),
                    "r = {r}, theta = {th}: {closed} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn nest_degree_rule() {
        assert_eq!(chebyshev_nest(40, 6.0, 0.9).unwrap().n, 4); // ⌊5.4⌋ = 5 → 4
        assert_eq!(chebyshev_nest(40, 5.0, 0.8).unwrap().n, 4); // ⌊4.0⌋ = 4
        assert_eq!(chebyshev_nest(40, 3.4, 1.0).unwrap().n, 2); // ⌊3.4⌋ = 3 → 2
        match chebyshev_nest(40, 2.0, 0.9) {
            Err(ReferenceError::NestDegreeTooSmall { n, .. }) => assert_eq!(n, 0), // ⌊1.8⌋ = 1 → 0
            other => panic!("expected NestDegreeTooSmall, got {other:?}"),
        }
        // d must allow degree 2n
        assert!(chebyshev_nest(6, 6.0, 0.9).is_err());
        assert!(chebyshev_nest(8, 6.0, 0.9).is_ok());
    }

    #[test]
    fn nest_radii_and_alternation() {
        let nest = chebyshev_nest(40, 6.0, 0.9).unwrap(); // n = 4
        assert_eq!(nest.zero_radii.len(), 2);
        assert_eq!(nest.extremal_radii.len(), 3);
        assert_eq!(*nest.extremal_radii.last().unwrap(), 0.0);
        // interleaving r_0 > R_0 > r_1 > R_1 > r_2 = 0
        let seq = [
            nest.extremal_radii[0],
            nest.zero_radii[0],
            nest.extremal_radii[1],
            nest.zero_radii[1],
            nest.extremal_radii[2],
        ];
        assert!(seq.windows(2).all(|w| w[0] > w[1]));
        // the radial profile alternates between ±1 on the extremal circles
        for (k, &r) in nest.extremal_radii.iter().enumerate() {
            let want = if k % 2 == 0 { 1.0 } else { -1.0 };
            for th in [0.0f64, 1.1] {
                let v = nest.poly.evaluate_affine([r * th.cos(), r * th.sin()]);
                assert!((v - want).abs() <= 1e-12, "extremal {k}: {v} vs {want}");
            }
        }
        for &r in &nest.zero_radii {
            assert!(nest.poly.evaluate_affine([r, 0.0]).abs() <= 1e-12);
        }
        // stable radial form agrees with the expanded polynomial at modest n
        for &r in &[0.0, 0.1, 0.23, 0.38] {
            let a = nest.radial_value(r);
            let b = nest.poly.evaluate_affine([r, 0.0]) * (1.0f64).powi(0);
            assert!((a - b).abs() <= 1e-11 * (a.abs() + 1.0));
        }
        assert!(nest.l2_norm_sq() <= nest.coarse_l2_norm_sq_bound());
        // annuli: one per zero circle, each containing its circle
        let annuli = nest.annuli();
        assert_eq!(annuli.len(), 2);
        for (k, a) in annuli.iter().enumerate() {
            assert!(a.r1 < nest.zero_radii[k] && nest.zero_radii[k] < a.r2);
        }
    }

    #[test]
    fn nest_coefficients_match_closed_form() {
        let d = 12;
        let nest = chebyshev_nest(d, 4.2, 1.0).unwrap(); // n = 4
        let cheb = ChebyshevPoly::new(4);
        let scale = d as f64 / 4.2;
        for (j, aj) in cheb.coefficients().iter().enumerate() {
            if aj.is_zero() {
                continue;
            }
            for l in 0..=j {
                let want = aj.to_f64().unwrap()
                    * scale.powi(j as i32)
                    * binomial(j as u64, l as u64).to_f64().unwrap();
                let got = nest.poly.coeff(MultiIndex::new(d - 2 * j, 2 * l, 2 * (j - l)));
                assert!((got - want).abs() <= 1e-12 * want.abs());
            }
        }
    }

    #[test]
    fn scattered_separation_enforced() {
        let d = 100;
        // required separation 2·100^{-0.2} ≈ 0.796
        let close = ProjectivePoint::from_affine([0.3, 0.0]); // distance arctan 0.3 ≈ 0.29
        match scattered_ovals(d, &[ProjectivePoint::e0(), close], 0.3) {
            Err(ReferenceError::SeparationViolated { i, j, distance, required }) => {
                assert_eq!((i, j), (0, 1));
                assert!(distance < required);
            }
            other => panic!("expected SeparationViolated, got {other:?}"),
        }
        assert!(scattered_ovals(d, &[ProjectivePoint::e0(), ProjectivePoint::e1()], 0.3).is_ok());
        assert!(scattered_ovals(d, &[], 0.3).is_err());
        assert!(scattered_ovals(d, &[ProjectivePoint::e0()], 0.7).is_err());
    }

    #[test]
    fn scattered_sum_matches_expansion() {
        let d = 60;
        let pts = [ProjectivePoint::e0(), ProjectivePoint::e1()];
        let sc = scattered_ovals(d, &pts, 0.3).unwrap();
        assert_eq!(sc.m, 2);
        assert_eq!(sc.poly.degree(), d);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut x = [0.0f64; 3];
            loop {
                for c in &mut x {
                    *c = rng.gen_range(-1.0..1.0);
                }
                let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                if n > 0.1 {
                    for c in &mut x {
                        *c /= n;
                    }
                    break;
                }
            }
            let fast = sc.evaluate_sum_at_unit(x);
            let slow = sc.poly.evaluate_homogeneous(x);
            assert!(
                (fast - slow).abs() <= 1e-9 * (fast.abs() + slow.abs() + 1e-12),
                "at {x:?}: {fast} vs {slow}"
            );
            let f2 = sc.fs_norm_sq_at_sphere(x);
            let s2 = sc.poly.fs_norm_sq_at_sphere(x);
            assert!((f2 - s2).abs() <= 1e-8 * (f2 + s2 + 1e-300));
        }
    }

    #[test]
    fn scattered_norm_close_to_asymptotic() {
        let d = 100;
        let sc =
            scattered_ovals(d, &[ProjectivePoint::e0(), ProjectivePoint::e1()], 0.3).unwrap();
        let ratio = sc.l2_norm_sq() / sc.asymptotic_l2_norm_sq();
        assert!((0.93..=1.02).contains(&ratio), "ratio {ratio}");
        // cross term between the two parts is negligible at this separation
        let cross = sc.parts[0].l2_inner(&sc.parts[1]).unwrap();
        assert!(cross.abs() <= 1e-6 * sc.l2_norm_sq());
    }

    #[test]
    fn boundary_assessment_small_oval() {
        let so = small_oval(2000, 2.0).unwrap();
        let a = boundary_fs_lower_bound(&so, 256).unwrap();
        assert_eq!(a.circles.len(), 2);
        for c in &a.circles {
            assert!(c.numeric_inf >= c.bound);
            // radially symmetric: the sampled infimum equals the closed form
            let closed = so.fs_norm_sq_on_circle(c.radius) / so.l2_norm_sq_exact();
            assert!((c.numeric_inf - closed).abs() <= 1e-9 * closed);
        }
        // f = 1 sits below the asymptotic constant at every degree
        let low = small_oval(500, 1.0).unwrap();
        match boundary_fs_lower_bound(&low, 64) {
            Err(ReferenceError::BelowAsymptoticRegime { numeric, bound, assessment, .. }) => {
                assert!(numeric < bound);
                assert_eq!(assessment.circles.len(), 2);
            }
            other => panic!("expected BelowAsymptoticRegime, got {other:?}"),
        }
    }

    #[test]
    fn boundary_assessment_nest_and_scattered() {
        let nest = chebyshev_nest(4000, 3.0, 0.9).unwrap(); // n = 2
        let a = boundary_fs_lower_bound(&nest, 128).unwrap();
        assert_eq!(a.circles.len(), 2); // one extremal circle plus the center point
        assert!(a.circles.iter().any(|c| c.radius == 0.0));
        assert!(a.numeric_inf >= a.bound_inf);

        let sc =
            scattered_ovals(300, &[ProjectivePoint::e0(), ProjectivePoint::e1()], 0.3).unwrap();
        let a = boundary_fs_lower_bound(&sc, 128).unwrap();
        assert_eq!(a.circles.len(), 4);
        for c in &a.circles {
            assert!(c.numeric_inf >= c.bound, "{}: {} < {}", c.label, c.numeric_inf, c.bound);
        }
    }
}
