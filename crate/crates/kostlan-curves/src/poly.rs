//! Homogeneous polynomials in X₀, X₁, X₂ with the Fubini-Study L² structure.
//!
//! The inner product is ⟨P,Q⟩₂ = (1/Vol) ∫ h(P,Q) dVol over ℂP², under which
//! distinct monomials are orthogonal with ‖X₀^i0 X₁^i1 X₂^i2‖²₂ equal to
//! i0! i1! i2! · 2/(d+2)!.
//!
//! Monomial norms are computed exactly with big integers; bulk operations
//! (inner products, sampling) use a log-factorial table whose relative error
//! is a few ulps. The pointwise Fubini-Study norm of P at a chart point z is
//! ‖P(z)‖²_FS = |P(1,z)|²/(1+‖z‖²)^d, evaluated here at the unit
//! representative so that large degrees neither overflow nor underflow
//! prematurely.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::projgeom::Rotation;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("degree must be at least 1")]
    InvalidDegree,
    #[error("multi-index ({0}, {1}, {2}) does not have the polynomial's degree {3}")]
    DegreeMismatch(usize, usize, usize, usize),
    #[error("polynomials have different degrees {0} and {1}")]
    MixedDegrees(usize, usize),
    #[error("cannot normalize the zero polynomial")]
    ZeroNorm,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("coefficient for ({0}, {1}, {2}) is not finite")]
    NonFiniteCoefficient(usize, usize, usize),
}

/// Exponents (i₀, i₁, i₂) of a monomial X₀^i0 X₁^i1 X₂^i2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    pub i0: u16,
    pub i1: u16,
    pub i2: u16,
}

impl MultiIndex {
    pub fn new(i0: usize, i1: usize, i2: usize) -> Self {
        Self { i0: i0 as u16, i1: i1 as u16, i2: i2 as u16 }
    }

    pub fn degree(&self) -> usize {
        self.i0 as usize + self.i1 as usize + self.i2 as usize
    }
}

/// Number of degree-d monomials in three variables: (d+1)(d+2)/2.
pub fn num_monomials(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// `‖X^𝐢‖²₂ = i0! i1! i2! · 2 / (d+2)!`, computed exactly in big integers and
/// rounded once to f64. Underflows to 0.0 only when the true value is below
/// the smallest subnormal.
pub fn monomial_l2_norm_sq(index: MultiIndex) -> f64 {
    let (mantissa, exp) = monomial_norm_sq_mantissa_exp(index);
    ldexp(mantissa, exp)
}

/// `‖X^𝐢‖₂`, with the square root taken in (mantissa, exponent) form so the
/// result is accurate even where the square would underflow.
pub fn monomial_l2_norm(index: MultiIndex) -> f64 {
    let (mantissa, exp) = monomial_norm_sq_mantissa_exp(index);
    if exp % 2 == 0 {
        ldexp(mantissa.sqrt(), exp / 2)
    } else {
        ldexp((mantissa * 2.0).sqrt(), (exp - 1) / 2)
    }
}

/// The exact ratio as m · 2^e with m holding ~96 significant bits.
fn monomial_norm_sq_mantissa_exp(index: MultiIndex) -> (f64, i64) {
    let d = index.degree();
    let mut idx = [index.i0 as u64, index.i1 as u64, index.i2 as u64];
    idx.sort_unstable();
    // num = 2 · small! · mid!,  den = (d+2)(d+1)···(largest+1)
    let mut num = BigUint::from(2u32);
    for k in 2..=idx[0] {
        num *= k;
    }
    for k in 2..=idx[1] {
        num *= k;
    }
    let mut den = BigUint::from(1u32);
    for k in (idx[2] + 1)..=(d as u64 + 2) {
        den *= k;
    }
    big_ratio_mantissa_exp(&num, &den)
}

/// num/den as (mantissa, exp) with the mantissa carrying ~96 bits.
fn big_ratio_mantissa_exp(num: &BigUint, den: &BigUint) -> (f64, i64) {
    if num.is_zero() {
        return (0.0, 0);
    }
    let shift = 96 - (num.bits() as i64 - den.bits() as i64);
    let q = if shift >= 0 { (num << shift as u64) / den } else { num / (den << (-shift) as u64) };
    (q.to_f64().expect("quotient fits f64 range"), -shift)
}

/// Signed exact rational to nearest-ish f64 (error ≤ a few ulps). Safe where
/// numerator and denominator separately overflow f64 but the ratio does not.
pub(crate) fn signed_ratio_to_f64(num: &num_bigint::BigInt, den: &num_bigint::BigInt) -> f64 {
    use num_bigint::Sign;
    if num.is_zero() {
        return 0.0;
    }
    assert!(!den.is_zero(), "division by zero");
    let (mantissa, exp) = big_ratio_mantissa_exp(num.magnitude(), den.magnitude());
    let sign = if (num.sign() == Sign::Minus) == (den.sign() == Sign::Minus) { 1.0 } else { -1.0 };
    sign * ldexp(mantissa, exp)
}

fn ldexp(x: f64, e: i64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if (-900..=900).contains(&e) {
        return x * 2f64.powi(e as i32);
    }
    let h = (e / 2) as i32;
    x * 2f64.powi(h) * 2f64.powi(e as i32 - h)
}

/// Log-factorial table for fast monomial norms at a fixed degree. Kahan
/// summation keeps ln k! accurate to a few ulps, so `norm` is good to ~1e-13
/// relative even at degrees in the thousands.
#[derive(Debug, Clone)]
pub(crate) struct NormTable {
    pub d: usize,
    ln_fact: Vec<f64>,
}

impl NormTable {
    pub fn new(d: usize) -> Self {
        let mut ln_fact = vec![0.0f64; d + 3];
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (k, slot) in ln_fact.iter_mut().enumerate().skip(2) {
            let term = (k as f64).ln();
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            *slot = sum;
        }
        Self { d, ln_fact }
    }

    pub fn ln_norm_sq(&self, i: MultiIndex) -> f64 {
        debug_assert_eq!(i.degree(), self.d);
        std::f64::consts::LN_2 + self.ln_fact[i.i0 as usize] + self.ln_fact[i.i1 as usize]
            + self.ln_fact[i.i2 as usize]
            - self.ln_fact[self.d + 2]
    }

    pub fn norm(&self, i: MultiIndex) -> f64 {
        (0.5 * self.ln_norm_sq(i)).exp()
    }
}

/// Sparse real homogeneous polynomial of fixed degree d ≥ 1. Zero
/// coefficients are never stored, so the zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoly {
    degree: usize,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl HomogeneousPoly {
    pub fn zero(degree: usize) -> Result<Self, PolyError> {
        if degree == 0 {
            return Err(PolyError::InvalidDegree);
        }
        Ok(Self { degree, coeffs: BTreeMap::new() })
    }

    /// The monomial c · X^𝐢 (degree taken from the index).
    pub fn monomial(index: MultiIndex, c: f64) -> Result<Self, PolyError> {
        let mut p = Self::zero(index.degree())?;
        p.set_coeff(index, c)?;
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, index: MultiIndex) -> f64 {
        self.coeffs.get(&index).copied().unwrap_or(0.0)
    }

    pub fn set_coeff(&mut self, index: MultiIndex, c: f64) -> Result<(), PolyError> {
        if index.degree() != self.degree {
            return Err(PolyError::DegreeMismatch(
                index.i0 as usize,
                index.i1 as usize,
                index.i2 as usize,
                self.degree,
            ));
        }
        if !c.is_finite() {
            return Err(PolyError::NonFiniteCoefficient(
                index.i0 as usize,
                index.i1 as usize,
                index.i2 as usize,
            ));
        }
        if c == 0.0 {
            self.coeffs.remove(&index);
        } else {
            self.coeffs.insert(index, c);
        }
        Ok(())
    }

    pub fn add_to_coeff(&mut self, index: MultiIndex, c: f64) -> Result<(), PolyError> {
        let cur = self.coeff(index);
        self.set_coeff(index, cur + c)
    }

    /// Terms in the canonical (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, f64)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        if s == 0.0 {
            out.coeffs.clear();
            return out;
        }
        for c in out.coeffs.values_mut() {
            *c *= s;
        }
        out
    }

    /// self + s · other; degrees must match.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Result<Self, PolyError> {
        if self.degree != other.degree {
            return Err(PolyError::MixedDegrees(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (&i, &c) in &other.coeffs {
            let v = out.coeff(i) + s * c;
            out.set_coeff(i, v)?;
        }
        Ok(out)
    }

    pub fn evaluate_homogeneous(&self, x: [f64; 3]) -> f64 {
        let d = self.degree;
        let mut p0 = Vec::with_capacity(d + 1);
        let mut p1 = Vec::with_capacity(d + 1);
        let mut p2 = Vec::with_capacity(d + 1);
        for (pows, xi) in [(&mut p0, x[0]), (&mut p1, x[1]), (&mut p2, x[2])] {
            let mut v = 1.0;
            pows.push(v);
            for _ in 0..d {
                v *= xi;
                pows.push(v);
            }
        }
        let mut acc = 0.0;
        for (&i, &c) in &self.coeffs {
            acc += c * p0[i.i0 as usize] * p1[i.i1 as usize] * p2[i.i2 as usize];
        }
        acc
    }

    pub fn evaluate_homogeneous_complex(&self, x: [Complex64; 3]) -> Complex64 {
        let d = self.degree;
        let mut pows = [Vec::with_capacity(d + 1), Vec::with_capacity(d + 1), Vec::with_capacity(d + 1)];
        for (k, pow) in pows.iter_mut().enumerate() {
            let mut v = Complex64::new(1.0, 0.0);
            pow.push(v);
            for _ in 0..d {
                v *= x[k];
                pow.push(v);
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (&i, &c) in &self.coeffs {
            acc += pows[0][i.i0 as usize] * pows[1][i.i1 as usize] * pows[2][i.i2 as usize] * c;
        }
        acc
    }

    /// P(1, z₁, z₂).
    pub fn evaluate_affine(&self, z: [f64; 2]) -> f64 {
        self.evaluate_homogeneous([1.0, z[0], z[1]])
    }

    /// Pointwise Fubini-Study norm squared |P(1,z)|²/(1+‖z‖²)^d at a chart
    /// point, evaluated at the unit representative so large degrees stay in
    /// f64 range.
    pub fn fs_norm_sq_at(&self, z: [f64; 2]) -> f64 {
        let s = (1.0 + z[0] * z[0] + z[1] * z[1]).sqrt();
        let v = self.evaluate_homogeneous([1.0 / s, z[0] / s, z[1] / s]);
        v * v
    }

    /// Pointwise FS norm squared at a point of the sphere (normalizes `x`).
    pub fn fs_norm_sq_at_sphere(&self, x: [f64; 3]) -> f64 {
        let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let v = self.evaluate_homogeneous([x[0] / n, x[1] / n, x[2] / n]);
        v * v
    }

    /// Pointwise FS norm squared at a complex chart point.
    pub fn fs_norm_sq_at_complex(&self, z: [Complex64; 2]) -> f64 {
        let s = (1.0 + z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
        let x = [Complex64::new(1.0 / s, 0.0), z[0] / s, z[1] / s];
        self.evaluate_homogeneous_complex(x).norm_sqr()
    }

    /// ⟨self, other⟩₂ via orthogonality of monomials.
    pub fn l2_inner(&self, other: &Self) -> Result<f64, PolyError> {
        if self.degree != other.degree {
            return Err(PolyError::MixedDegrees(self.degree, other.degree));
        }
        let table = NormTable::new(self.degree);
        let mut acc = 0.0;
        // iterate over the smaller support
        let (small, large) = if self.coeffs.len() <= other.coeffs.len() {
            (&self.coeffs, &other.coeffs)
        } else {
            (&other.coeffs, &self.coeffs)
        };
        for (&i, &a) in small {
            if let Some(&b) = large.get(&i) {
                let n = table.norm(i);
                acc += (a * n) * (b * n);
            }
        }
        Ok(acc)
    }

    pub fn l2_norm_sq(&self) -> f64 {
        let table = NormTable::new(self.degree);
        let mut acc = 0.0;
        for (&i, &a) in &self.coeffs {
            let an = a * table.norm(i);
            acc += an * an;
        }
        acc
    }

    pub fn normalize_l2(&self) -> Result<Self, PolyError> {
        let n2 = self.l2_norm_sq();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(PolyError::ZeroNorm);
        }
        Ok(self.scale(1.0 / n2.sqrt()))
    }

    /// P ∘ Rᵀ, i.e. the polynomial whose zero set is R applied to the zero
    /// set of P. Expands the linear substitution Xⱼ ← Σᵢ R[i][j] xᵢ by a
    /// Horner scheme over the X₀-exponent; exact degree bookkeeping, no
    /// truncation.
    pub fn rotate(&self, r: &Rotation) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let d = self.degree;
        let l0 = r.column(0);
        let l1 = r.column(1);
        let l2 = r.column(2);
        // group terms by i0: rows[i0] = list of (i1, coefficient)
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); d + 1];
        let mut max_bideg = 0usize;
        for (&i, &c) in &self.coeffs {
            rows[i.i0 as usize].push((i.i1 as usize, c));
            max_bideg = max_bideg.max(d - i.i0 as usize);
        }
        // cached powers of the linear form L₂
        let mut l2_pows: Vec<DensePoly> = Vec::with_capacity(max_bideg + 1);
        l2_pows.push(DensePoly::constant(1.0));
        for k in 1..=max_bideg {
            l2_pows.push(l2_pows[k - 1].mul_linear(l2));
        }
        let mut acc: Option<DensePoly> = None;
        for i0 in (0..=d).rev() {
            if let Some(a) = acc.take() {
                acc = Some(a.mul_linear(l0));
            }
            if rows[i0].is_empty() {
                if acc.is_none() && i0 < d {
                    continue;
                }
                if acc.is_none() {
                    continue;
                }
                continue;
            }
            let m = d - i0;
            // row = Σ c_{i1} L₁^{i1} L₂^{m-i1}, Horner in L₁
            let mut by_i1 = vec![0.0f64; m + 1];
            for &(i1, c) in &rows[i0] {
                by_i1[i1] = c;
            }
            let mut e: Option<DensePoly> = None;
            for i1 in (0..=m).rev() {
                if let Some(ep) = e.take() {
                    e = Some(ep.mul_linear(l1));
                }
                if by_i1[i1] != 0.0 {
                    let mut cur = e.take().unwrap_or_else(|| DensePoly::zero(m - i1));
                    cur.add_scaled_assign(&l2_pows[m - i1], by_i1[i1]);
                    e = Some(cur);
                }
            }
            let e = e.expect("nonempty row");
            match acc.take() {
                None => acc = Some(e),
                Some(mut a) => {
                    a.add_scaled_assign(&e, 1.0);
                    acc = Some(a);
                }
            }
        }
        acc.expect("nonzero polynomial").to_sparse()
    }

    /// Text form: a `degree d` header, then one `i0 i1 i2 coefficient` line
    /// per term in canonical order; round-trips bit-exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "degree {}", self.degree).unwrap();
        for (i, c) in self.terms() {
            writeln!(out, "{} {} {} {:e}", i.i0, i.i1, i.i2, c).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, PolyError> {
        let mut lines = text.lines().enumerate();
        let (first_no, first) = loop {
            match lines.next() {
                None => {
                    return Err(PolyError::Parse { line: 1, message: "empty input".into() });
                }
                Some((n, l)) if !l.trim().is_empty() => break (n + 1, l.trim()),
                Some(_) => continue,
            }
        };
        let degree = match first.strip_prefix("degree ") {
            Some(rest) => rest.trim().parse::<usize>().map_err(|e| PolyError::Parse {
                line: first_no,
                message: format!("bad degree: {e}"),
            })?,
            None => {
                return Err(PolyError::Parse {
                    line: first_no,
                    message: "expected `degree d` header".into(),
                })
            }
        };
        let mut poly = Self::zero(degree).map_err(|_| PolyError::Parse {
            line: first_no,
            message: "degree must be at least 1".into(),
        })?;
        for (n, line) in lines {
            let line_no = n + 1;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 4 {
                return Err(PolyError::Parse {
                    line: line_no,
                    message: format!("expected `i0 i1 i2 coefficient`, got {} fields", parts.len()),
                });
            }
            let parse_idx = |s: &str| {
                s.parse::<usize>().map_err(|e| PolyError::Parse {
                    line: line_no,
                    message: format!("bad exponent `{s}`: {e}"),
                })
            };
            let i0 = parse_idx(parts[0])?;
            let i1 = parse_idx(parts[1])?;
            let i2 = parse_idx(parts[2])?;
            let c = parts[3].parse::<f64>().map_err(|e| PolyError::Parse {
                line: line_no,
                message: format!("bad coefficient `{}`: {e}", parts[3]),
            })?;
            let idx = MultiIndex::new(i0, i1, i2);
            if idx.degree() != degree {
                return Err(PolyError::Parse {
                    line: line_no,
                    message: format!(
                        "index ({i0}, {i1}, {i2}) has degree {} but header says {degree}",
                        idx.degree()
                    ),
                });
            }
            if poly.coeffs.contains_key(&idx) {
                return Err(PolyError::Parse {
                    line: line_no,
                    message: format!("duplicate index ({i0}, {i1}, {i2})"),
                });
            }
            if !c.is_finite() {
                return Err(PolyError::Parse {
                    line: line_no,
                    message: "non-finite coefficient".into(),
                });
            }
            if c != 0.0 {
                poly.coeffs.insert(idx, c);
            }
        }
        Ok(poly)
    }

    pub(crate) fn to_dense(&self) -> DensePoly {
        let mut dense = DensePoly::zero(self.degree);
        for (&i, &c) in &self.coeffs {
            let k = dense.idx(i.i1 as usize, i.i2 as usize);
            dense.c[k] = c;
        }
        dense
    }
}

/// Dense triangular storage for a homogeneous polynomial: entry (i₁, i₂)
/// holds the coefficient of X₀^{d-i1-i2} X₁^{i1} X₂^{i2}.
#[derive(Debug, Clone)]
pub(crate) struct DensePoly {
    pub d: usize,
    pub c: Vec<f64>,
}

impl DensePoly {
    pub fn zero(d: usize) -> Self {
        Self { d, c: vec![0.0; num_monomials(d)] }
    }

    pub fn constant(v: f64) -> Self {
        Self { d: 0, c: vec![v] }
    }

    #[inline]
    pub fn idx(&self, i1: usize, i2: usize) -> usize {
        i1 * (2 * self.d + 3 - i1) / 2 + i2
    }

    /// Multiply by the linear form l₀X₀ + l₁X₁ + l₂X₂ (degree rises by one).
    pub fn mul_linear(&self, l: [f64; 3]) -> Self {
        let mut out = Self::zero(self.d + 1);
        for i1 in 0..=self.d {
            let src = self.idx(i1, 0);
            let dst0 = out.idx(i1, 0);
            let dst1 = out.idx(i1 + 1, 0);
            for i2 in 0..=(self.d - i1) {
                let v = self.c[src + i2];
                if v != 0.0 {
                    out.c[dst0 + i2] += v * l[0];
                    out.c[dst1 + i2] += v * l[1];
                    out.c[dst0 + i2 + 1] += v * l[2];
                }
            }
        }
        out
    }

    pub fn add_scaled_assign(&mut self, other: &Self, s: f64) {
        debug_assert_eq!(self.d, other.d);
        for (a, &b) in self.c.iter_mut().zip(&other.c) {
            *a += s * b;
        }
    }

    /// Flat evaluation at a real point; much faster than walking the sparse
    /// map when the support is dense.
    pub fn evaluate(&self, x: [f64; 3]) -> f64 {
        let d = self.d;
        let mut pows = vec![1.0f64; 3 * (d + 1)];
        for j in 0..3 {
            for k in 1..=d {
                pows[j * (d + 1) + k] = pows[j * (d + 1) + k - 1] * x[j];
            }
        }
        let (p0, rest) = pows.split_at(d + 1);
        let (p1, p2) = rest.split_at(d + 1);
        let mut acc = 0.0;
        let mut k = 0;
        for i1 in 0..=d {
            let mut row = 0.0;
            for i2 in 0..=(d - i1) {
                row += self.c[k] * p0[d - i1 - i2] * p2[i2];
                k += 1;
            }
            acc += row * p1[i1];
        }
        acc
    }

    /// Flat evaluation at a complex point.
    pub fn evaluate_complex(&self, x: [Complex64; 3]) -> Complex64 {
        let d = self.d;
        let one = Complex64::new(1.0, 0.0);
        let mut pows = vec![one; 3 * (d + 1)];
        for j in 0..3 {
            for k in 1..=d {
                pows[j * (d + 1) + k] = pows[j * (d + 1) + k - 1] * x[j];
            }
        }
        let (p0, rest) = pows.split_at(d + 1);
        let (p1, p2) = rest.split_at(d + 1);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut k = 0;
        for i1 in 0..=d {
            let mut row = Complex64::new(0.0, 0.0);
            for i2 in 0..=(d - i1) {
                row += self.c[k] * p0[d - i1 - i2] * p2[i2];
                k += 1;
            }
            acc += row * p1[i1];
        }
        acc
    }

    pub fn to_sparse(&self) -> HomogeneousPoly {
        let mut coeffs = BTreeMap::new();
        for i1 in 0..=self.d {
            let base = self.idx(i1, 0);
            for i2 in 0..=(self.d - i1) {
                let v = self.c[base + i2];
                if v != 0.0 {
                    coeffs.insert(MultiIndex::new(self.d - i1 - i2, i1, i2), v);
                }
            }
        }
        HomogeneousPoly { degree: self.d, coeffs }
    }

    /// Coefficients of s ↦ P(1, s·u₁, s·u₂) (degree-d univariate).
    pub fn ray_restriction(&self, u: [f64; 2]) -> Vec<f64> {
        let d = self.d;
        let mut p1 = Vec::with_capacity(d + 1);
        let mut p2 = Vec::with_capacity(d + 1);
        for (pows, x) in [(&mut p1, u[0]), (&mut p2, u[1])] {
            let mut v = 1.0;
            pows.push(v);
            for _ in 0..d {
                v *= x;
                pows.push(v);
            }
        }
        let mut out = vec![0.0f64; d + 1];
        for i1 in 0..=d {
            let base = self.idx(i1, 0);
            for i2 in 0..=(d - i1) {
                let v = self.c[base + i2];
                if v != 0.0 {
                    out[i1 + i2] += v * p1[i1] * p2[i2];
                }
            }
        }
        out
    }

    /// Coefficients of x ↦ P(1, x, b) (univariate of degree ≤ d).
    pub fn row_restriction(&self, b: f64) -> Vec<f64> {
        let d = self.d;
        let mut bpow = Vec::with_capacity(d + 1);
        let mut v = 1.0;
        bpow.push(v);
        for _ in 0..d {
            v *= b;
            bpow.push(v);
        }
        let mut out = vec![0.0f64; d + 1];
        for i1 in 0..=d {
            let base = self.idx(i1, 0);
            let mut acc = 0.0;
            for i2 in 0..=(d - i1) {
                acc += self.c[base + i2] * bpow[i2];
            }
            out[i1] = acc;
        }
        out
    }
}

/// Horner evaluation of univariate coefficients c[0] + c[1]x + … .
pub(crate) fn horner(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &ck in c.iter().rev() {
        acc = acc * x + ck;
    }
    acc
}
