//! Real projective plane ℝP² sitting inside ℂP², with the Fubini-Study metric.
//!
//! Points of ℝP² are stored as canonical unit representatives in ℝ³ (first
//! nonzero coordinate positive), so equality and hashing are exact. The
//! Fubini-Study distance between lines spanned by unit vectors p, q is
//! arccos |⟨p,q⟩| ∈ [0, π/2], and the volume of an FS ball in ℂP² reduces to
//! a one-dimensional radial integral. The module also provides rotations of
//! ℝ³ acting on points and charts, deterministic greedy ball packings, and a
//! triangulated sphere grid (subdivided octahedron) with an exact antipodal
//! involution, used by the flood-fill topology routines.

use std::collections::HashMap;
use std::f64::consts::PI;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProjGeomError {
    #[error("projective point needs a nonzero finite representative")]
    InvalidRepresentative,
    #[error("radius {radius} outside the valid range (0, {max}]")]
    RadiusOutOfRange { radius: f64, max: f64 },
    #[error("radial quadrature did not converge: error {achieved:e} > tolerance {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },
    #[error("matrix is not a rotation: {0}")]
    NotARotation(String),
    #[error("sphere grid resolution must be at least 1")]
    BadResolution,
}

/// A point of ℝP², stored as the unit representative whose first nonzero
/// coordinate is positive. Representing vectors that agree up to sign and
/// scale map to bit-identical canonical forms, so `Eq` and `Hash` are exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectivePoint {
    rep: [f64; 3],
}

impl Eq for ProjectivePoint {}

impl std::hash::Hash for ProjectivePoint {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for c in self.rep {
            c.to_bits().hash(state);
        }
    }
}

impl ProjectivePoint {
    pub fn new(x0: f64, x1: f64, x2: f64) -> Result<Self, ProjGeomError> {
        let n = (x0 * x0 + x1 * x1 + x2 * x2).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(ProjGeomError::InvalidRepresentative);
        }
        let mut rep = [x0 / n, x1 / n, x2 / n];
        // renormalize once more; fine at f64 precision
        let n2 = (rep[0] * rep[0] + rep[1] * rep[1] + rep[2] * rep[2]).sqrt();
        for c in &mut rep {
            *c /= n2;
        }
        let lead = rep.iter().copied().find(|c| *c != 0.0).unwrap();
        if lead < 0.0 {
            for c in &mut rep {
                if *c != 0.0 {
                    *c = -*c;
                } else {
                    *c = 0.0; // avoid -0.0 in canonical form
                }
            }
        } else {
            for c in &mut rep {
                if *c == 0.0 {
                    *c = 0.0;
                }
            }
        }
        Ok(Self { rep })
    }

    /// Point of the affine chart x₀ = 1 with coordinates z = (z₁, z₂).
    pub fn from_affine(z: [f64; 2]) -> Self {
        Self::new(1.0, z[0], z[1]).expect("affine lift is nonzero")
    }

    pub fn e0() -> Self {
        Self { rep: [1.0, 0.0, 0.0] }
    }

    pub fn e1() -> Self {
        Self { rep: [0.0, 1.0, 0.0] }
    }

    pub fn e2() -> Self {
        Self { rep: [0.0, 0.0, 1.0] }
    }

    /// Canonical unit representative.
    pub fn representative(&self) -> [f64; 3] {
        self.rep
    }

    /// Chart coordinates (x₁/x₀, x₂/x₀); `None` on the line at infinity.
    pub fn affine(&self) -> Option<[f64; 2]> {
        if self.rep[0] == 0.0 {
            None
        } else {
            Some([self.rep[1] / self.rep[0], self.rep[2] / self.rep[0]])
        }
    }
}

/// Fubini-Study distance arccos |⟨p,q⟩| ∈ [0, π/2].
pub fn fs_distance(p: &ProjectivePoint, q: &ProjectivePoint) -> f64 {
    let a = p.representative();
    let b = q.representative();
    let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).abs();
    dot.min(1.0).acos()
}

/// Volume of the Fubini-Study ball of radius `rho` in ℂP², for 0 < rho ≤ π/2.
///
/// In the chart the FS volume element is dVol/(1+‖t‖²)³, so the ball volume
/// is Vol(S³) ∫₀^tan(rho) r³/(1+r²)³ dr; substituting r = tan u turns this
/// into 2π² ∫₀^rho sin³u cos u du, integrated here by adaptive Simpson.
pub fn fs_ball_volume(rho: f64) -> Result<f64, ProjGeomError> {
    if !(rho > 0.0 && rho <= PI / 2.0) {
        return Err(ProjGeomError::RadiusOutOfRange { radius: rho, max: PI / 2.0 });
    }
    let f = |u: f64| {
        let s = u.sin();
        s * s * s * u.cos()
    };
    // relative tolerance: the integrand is positive, so a coarse Simpson pass
    // gives the right scale
    let coarse = (rho / 6.0) * (f(0.0) + 4.0 * f(rho / 2.0) + f(rho));
    let tol = (coarse.abs() * 1e-13).max(1e-300);
    let (integral, err) = adaptive_simpson(&f, 0.0, rho, tol, 40);
    if !(err <= tol.max(integral.abs() * 1e-12)) {
        return Err(ProjGeomError::QuadratureNonConvergence { achieved: err, requested: tol });
    }
    Ok(2.0 * PI * PI * integral)
}

/// Adaptive Simpson quadrature; returns (integral, error estimate).
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: u32) -> (f64, f64) {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> (f64, f64) {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            (left + right + delta / 15.0, delta.abs() / 15.0)
        } else {
            let (vl, el) = recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1);
            let (vr, er) = recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1);
            (vl + vr, el + er)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, max_depth)
}

/// Rotation of ℝ³, stored row-major: (R x)ᵢ = Σⱼ m[i][j] xⱼ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    m: [[f64; 3]; 3],
}

impl Rotation {
    pub fn identity() -> Self {
        Self { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Validates orthogonality (RᵀR = I within 1e-12 per entry) and det = +1.
    pub fn from_matrix(m: [[f64; 3]; 3]) -> Result<Self, ProjGeomError> {
        let r = Self { m };
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| m[k][i] * m[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).abs() > 1e-12 {
                    return Err(ProjGeomError::NotARotation(format!(
                        "column inner product ({i},{j}) = {dot} != {want}"
                    )));
                }
            }
        }
        if r.det() < 0.0 {
            return Err(ProjGeomError::NotARotation("determinant is negative".into()));
        }
        Ok(r)
    }

    fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn apply(&self, x: [f64; 3]) -> [f64; 3] {
        let m = &self.m;
        [
            m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
            m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
            m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2],
        ]
    }

    /// Applies R⁻¹ = Rᵀ.
    pub fn apply_transpose(&self, x: [f64; 3]) -> [f64; 3] {
        let m = &self.m;
        [
            m[0][0] * x[0] + m[1][0] * x[1] + m[2][0] * x[2],
            m[0][1] * x[0] + m[1][1] * x[1] + m[2][1] * x[2],
            m[0][2] * x[0] + m[1][2] * x[1] + m[2][2] * x[2],
        ]
    }

    pub fn apply_point(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let v = self.apply(p.representative());
        ProjectivePoint::new(v[0], v[1], v[2]).expect("rotation preserves nonzero vectors")
    }

    pub fn transpose(&self) -> Self {
        let m = &self.m;
        Self {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &Rotation) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Self { m }
    }

    /// Column j, i.e. the image of the j-th basis vector.
    pub fn column(&self, j: usize) -> [f64; 3] {
        [self.m[0][j], self.m[1][j], self.m[2][j]]
    }
}

/// Deterministic rotation mapping (1,0,0) to the canonical representative of
/// `p`: the rotation about the axis e₀ × p by the angle between them.
pub fn rotation_to(p: &ProjectivePoint) -> Rotation {
    let v = p.representative();
    let c = v[0];
    let s = (v[1] * v[1] + v[2] * v[2]).sqrt();
    if s < 1e-15 {
        // v = ±e0; canonical sign makes it +e0
        return Rotation::identity();
    }
    // unit axis a = e0 × v / s = (0, -v2, v1)/s; Rodrigues with cos = c, sin = s
    let a = [0.0, -v[2] / s, v[1] / s];
    let k = 1.0 - c;
    let m = [
        [
            c + k * a[0] * a[0],
            k * a[0] * a[1] - s * a[2],
            k * a[0] * a[2] + s * a[1],
        ],
        [
            k * a[1] * a[0] + s * a[2],
            c + k * a[1] * a[1],
            k * a[1] * a[2] - s * a[0],
        ],
        [
            k * a[2] * a[0] - s * a[1],
            k * a[2] * a[1] + s * a[0],
            c + k * a[2] * a[2],
        ],
    ];
    Rotation { m }
}

/// Uniform random rotation (via a uniform unit quaternion).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Rotation {
    use rand_distr::StandardNormal;
    let mut q = [0.0f64; 4];
    loop {
        for c in &mut q {
            *c = rng.sample(StandardNormal);
        }
        let n = (q.iter().map(|c| c * c).sum::<f64>()).sqrt();
        if n > 1e-6 {
            for c in &mut q {
                *c /= n;
            }
            break;
        }
    }
    let (w, x, y, z) = (q[0], q[1], q[2], q[3]);
    Rotation {
        m: [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ],
    }
}

/// Greedy packing of ℝP² by disjoint FS balls of radius `rho` (0 < rho ≤ π/4):
/// centers at pairwise FS distance ≥ 2 rho. Candidates come from a Fibonacci
/// sphere, so the result is deterministic. The accepted count is at least
/// 0.2/rho² for rho ≤ π/16 (saturated greedy packings of the hemisphere reach
/// roughly 0.5/rho²; the constant is checked by the tests).
pub fn pack_fs_balls(rho: f64) -> Result<Vec<ProjectivePoint>, ProjGeomError> {
    if !(rho > 0.0 && rho <= PI / 4.0) {
        return Err(ProjGeomError::RadiusOutOfRange { radius: rho, max: PI / 4.0 });
    }
    let n = ((40.0 / (rho * rho)).ceil() as usize).clamp(64, 4_000_000);
    let golden = PI * (3.0 - 5.0f64.sqrt());
    let min_dot = (2.0 * rho).cos(); // accept q when max |<q,c>| <= cos(2 rho)
    let mut accepted: Vec<[f64; 3]> = Vec::new();
    for i in 0..n {
        let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let phi = golden * i as f64;
        let cand = [r * phi.cos(), r * phi.sin(), z];
        let ok = accepted
            .iter()
            .all(|c| (c[0] * cand[0] + c[1] * cand[1] + c[2] * cand[2]).abs() <= min_dot);
        if ok {
            accepted.push(cand);
        }
    }
    Ok(accepted
        .into_iter()
        .map(|c| ProjectivePoint::new(c[0], c[1], c[2]).expect("unit candidate"))
        .collect())
}

/// Triangulated unit sphere: an octahedron whose 8 faces are each subdivided
/// into `resolution`² triangles. Vertices on octant boundaries are shared,
/// and the antipodal map is a combinatorial involution on cells and vertices,
/// which is what the ℝP² flood fill needs.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    resolution: usize,
    vertices: Vec<[f64; 3]>,
    cells: Vec<[usize; 3]>,
    centers: Vec<[f64; 3]>,
    neighbors: Vec<[usize; 3]>,
    vertex_antipode: Vec<usize>,
    cell_antipode: Vec<usize>,
    row_offsets: Vec<usize>,
}

const OCTANT_SIGNS: [[i64; 3]; 8] = [
    [1, 1, 1],
    [1, 1, -1],
    [1, -1, 1],
    [1, -1, -1],
    [-1, 1, 1],
    [-1, 1, -1],
    [-1, -1, 1],
    [-1, -1, -1],
];

fn octant_index(s: [i64; 3]) -> usize {
    let b0 = usize::from(s[0] < 0);
    let b1 = usize::from(s[1] < 0);
    let b2 = usize::from(s[2] < 0);
    b0 * 4 + b1 * 2 + b2
}

impl SphereGrid {
    pub fn new(resolution: usize) -> Result<Self, ProjGeomError> {
        if resolution == 0 {
            return Err(ProjGeomError::BadResolution);
        }
        let res = resolution;
        let resi = res as i64;
        // row u has (res - u) upward and (res - u - 1) downward triangles
        let mut row_offsets = vec![0usize; res + 1];
        for u in 0..res {
            row_offsets[u + 1] = row_offsets[u] + 2 * (res - u) - 1;
        }
        let cells_per_octant = row_offsets[res];

        let mut vertices: Vec<[f64; 3]> = Vec::new();
        let mut key_to_vertex: HashMap<[i64; 3], usize> = HashMap::new();
        let mut vertex_id = |key: [i64; 3], vertices: &mut Vec<[f64; 3]>| -> usize {
            *key_to_vertex.entry(key).or_insert_with(|| {
                let v = [key[0] as f64, key[1] as f64, key[2] as f64];
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                vertices.push([v[0] / n, v[1] / n, v[2] / n]);
                vertices.len() - 1
            })
        };

        let mut cells: Vec<[usize; 3]> = Vec::with_capacity(8 * cells_per_octant);
        for signs in OCTANT_SIGNS {
            // vertex (u, v) has barycentric (a, b, c) = (res-u-v, u, v)
            let key = |u: i64, v: i64| -> [i64; 3] {
                [signs[0] * (resi - u - v), signs[1] * u, signs[2] * v]
            };
            for u in 0..resi {
                for v in 0..(resi - u) {
                    let p00 = key(u, v);
                    let p10 = key(u + 1, v);
                    let p01 = key(u, v + 1);
                    let a = vertex_id(p00, &mut vertices);
                    let b = vertex_id(p10, &mut vertices);
                    let c = vertex_id(p01, &mut vertices);
                    cells.push([a, b, c]);
                    if v < resi - u - 1 {
                        let p11 = key(u + 1, v + 1);
                        let d = vertex_id(p11, &mut vertices);
                        cells.push([b, d, c]);
                    }
                }
            }
        }

        let centers: Vec<[f64; 3]> = cells
            .iter()
            .map(|&[a, b, c]| {
                let va = vertices[a];
                let vb = vertices[b];
                let vc = vertices[c];
                let s = [va[0] + vb[0] + vc[0], va[1] + vb[1] + vc[1], va[2] + vb[2] + vc[2]];
                let n = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
                [s[0] / n, s[1] / n, s[2] / n]
            })
            .collect();

        // adjacency across shared edges
        let mut edge_map: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        let mut neighbors = vec![[usize::MAX; 3]; cells.len()];
        for (ci, &[a, b, c]) in cells.iter().enumerate() {
            for (slot, (x, y)) in [(b, c), (c, a), (a, b)].into_iter().enumerate() {
                let e = (x.min(y), x.max(y));
                match edge_map.get(&e) {
                    None => {
                        edge_map.insert(e, (ci, slot));
                    }
                    Some(&(cj, slot_j)) => {
                        neighbors[ci][slot] = cj;
                        neighbors[cj][slot_j] = ci;
                    }
                }
            }
        }
        debug_assert!(neighbors.iter().all(|n| n.iter().all(|&x| x != usize::MAX)));

        // antipodes: negate the integer key / flip the octant
        let mut key_of_vertex = vec![[0i64; 3]; vertices.len()];
        for (k, &vi) in &key_to_vertex {
            key_of_vertex[vi] = *k;
        }
        let vertex_antipode: Vec<usize> = key_of_vertex
            .iter()
            .map(|k| key_to_vertex[&[-k[0], -k[1], -k[2]]])
            .collect();
        let cell_antipode: Vec<usize> = (0..cells.len())
            .map(|ci| {
                let oct = ci / cells_per_octant;
                let local = ci % cells_per_octant;
                let s = OCTANT_SIGNS[oct];
                let flipped = octant_index([-s[0], -s[1], -s[2]]);
                flipped * cells_per_octant + local
            })
            .collect();

        Ok(Self {
            resolution: res,
            vertices,
            cells,
            centers,
            neighbors,
            vertex_antipode,
            cell_antipode,
            row_offsets,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, i: usize) -> [f64; 3] {
        self.vertices[i]
    }

    pub fn cell_vertices(&self, ci: usize) -> [usize; 3] {
        self.cells[ci]
    }

    pub fn cell_center(&self, ci: usize) -> [f64; 3] {
        self.centers[ci]
    }

    /// The three cells sharing an edge with `ci`; slot k is opposite vertex k.
    pub fn cell_neighbors(&self, ci: usize) -> [usize; 3] {
        self.neighbors[ci]
    }

    /// Shared edge between a cell and its neighbor in `slot`: the two common
    /// vertex indices.
    pub fn shared_edge(&self, ci: usize, slot: usize) -> (usize, usize) {
        let [a, b, c] = self.cells[ci];
        match slot {
            0 => (b, c),
            1 => (c, a),
            _ => (a, b),
        }
    }

    pub fn vertex_antipode(&self, vi: usize) -> usize {
        self.vertex_antipode[vi]
    }

    pub fn cell_antipode(&self, ci: usize) -> usize {
        self.cell_antipode[ci]
    }

    /// Largest geodesic edge length over all cells; O(1/resolution).
    pub fn max_cell_diameter(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for &[a, b, c] in &self.cells {
            for (x, y) in [(a, b), (b, c), (c, a)] {
                let va = self.vertices[x];
                let vb = self.vertices[y];
                let dot = va[0] * vb[0] + va[1] * vb[1] + va[2] * vb[2];
                worst = worst.max(dot.clamp(-1.0, 1.0).acos());
            }
        }
        worst
    }

    /// Cell containing the direction of `x` (ties on cell boundaries resolved
    /// deterministically). `x` need not be normalized.
    pub fn locate_cell(&self, x: [f64; 3]) -> usize {
        let res = self.resolution as f64;
        let signs = [
            if x[0] < 0.0 { -1i64 } else { 1 },
            if x[1] < 0.0 { -1i64 } else { 1 },
            if x[2] < 0.0 { -1i64 } else { 1 },
        ];
        let ax = [x[0].abs(), x[1].abs(), x[2].abs()];
        let l1 = ax[0] + ax[1] + ax[2];
        debug_assert!(l1 > 0.0);
        // barycentric (a, b, c) with a + b + c = res; cell coords u = b, v = c
        let bu = ax[1] / l1 * res;
        let bv = ax[2] / l1 * res;
        let max_row = self.resolution - 1;
        let mut iu = (bu.floor() as usize).min(max_row);
        let mut iv = (bv.floor() as usize).min(max_row);
        if iu + iv > max_row {
            // numerical spill across the diagonal; pull back inside
            let over = iu + iv - max_row;
            if iv >= over {
                iv -= over;
            } else {
                iu -= over - iv;
                iv = 0;
            }
        }
        let fu = bu - iu as f64;
        let fv = bv - iv as f64;
        let up = fu + fv <= 1.0 || iu + iv == max_row;
        let local = self.row_offsets[iu] + 2 * iv + usize::from(!up);
        octant_index(signs) * self.row_offsets[self.resolution] + local
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng) -> ProjectivePoint {
        use rand_distr::StandardNormal;
        loop {
            let v: [f64; 3] = [
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            ];
            if let Ok(p) = ProjectivePoint::new(v[0], v[1], v[2]) {
                return p;
            }
        }
    }

    #[test]
    fn canonical_representatives() {
        let p = ProjectivePoint::new(-2.0, 0.0, 2.0).unwrap();
        let q = ProjectivePoint::new(1.0, 0.0, -1.0).unwrap();
        assert_eq!(p, q);
        let r = p.representative();
        assert!((r[0] - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);
        assert!(ProjectivePoint::new(0.0, 0.0, 0.0).is_err());
        assert!(ProjectivePoint::new(f64::NAN, 1.0, 0.0).is_err());
        // first nonzero coordinate positive, including when x0 = 0
        let s = ProjectivePoint::new(0.0, -3.0, 1.0).unwrap();
        assert!(s.representative()[1] > 0.0);
    }

    #[test]
    fn fs_distance_basic_values() {
        let e0 = ProjectivePoint::e0();
        let e1 = ProjectivePoint::e1();
        assert_eq!(fs_distance(&e0, &e0), 0.0);
        assert!((fs_distance(&e0, &e1) - PI / 2.0).abs() < 1e-15);
        // antipodal representatives are the same point
        let p = ProjectivePoint::new(0.3, -0.4, 0.5).unwrap();
        let q = ProjectivePoint::new(-0.3, 0.4, -0.5).unwrap();
        assert_eq!(fs_distance(&p, &q), 0.0);
        // tan(distance to origin of chart point z) = |z|
        let z = 0.37;
        let p = ProjectivePoint::from_affine([z, 0.0]);
        assert!((fs_distance(&e0, &p).tan() - z).abs() < 1e-14);
    }

    #[test]
    fn fs_distance_metric_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            let r = random_point(&mut rng);
            let dpq = fs_distance(&p, &q);
            let dqp = fs_distance(&q, &p);
            assert_eq!(dpq, dqp);
            assert!((0.0..=PI / 2.0 + 1e-15).contains(&dpq));
            assert!(fs_distance(&p, &r) <= dpq + fs_distance(&q, &r) + 1e-12);
            // rotation invariance
            let rot = random_rotation(&mut rng);
            let d2 = fs_distance(&rot.apply_point(&p), &rot.apply_point(&q));
            assert!((dpq - d2).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_volume_matches_closed_form() {
        // 2π² ∫₀^ρ sin³u cos u du = (π²/2) sin⁴ρ
        for rho in [0.01, 0.1, 0.5, 1.0, PI / 4.0, PI / 2.0] {
            let v = fs_ball_volume(rho).unwrap();
            let exact = PI * PI / 2.0 * rho.sin().powi(4);
            assert!((v - exact).abs() <= 1e-12 * exact.max(1e-300), "rho={rho}: {v} vs {exact}");
        }
        // total volume of ℂP²
        let total = fs_ball_volume(PI / 2.0).unwrap();
        assert!((total - PI * PI / 2.0).abs() < 1e-12);
        // small-radius asymptotics (π²/2) ρ⁴ (1 + O(ρ²))
        let rho = 0.01;
        let v = fs_ball_volume(rho).unwrap();
        let leading = PI * PI / 2.0 * rho.powi(4);
        assert!((v / leading - 1.0).abs() < 1e-3);
        assert!(fs_ball_volume(0.0).is_err());
        assert!(fs_ball_volume(2.0).is_err());
    }

    #[test]
    fn ball_volume_matches_monte_carlo() {
        // independent oracle: 4D Monte Carlo over the Euclidean ball of
        // radius tan(π/4) = 1 with density (1+‖t‖²)⁻³
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 2_000_000usize;
        let mut acc = 0.0f64;
        let mut hits = 0usize;
        while hits < n {
            let t: [f64; 4] = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let r2: f64 = t.iter().map(|c| c * c).sum();
            if r2 <= 1.0 {
                acc += 1.0 / (1.0 + r2).powi(3);
                hits += 1;
            }
        }
        let ball4_volume = PI * PI / 2.0; // radius-1 ball in R⁴
        let mc = acc / n as f64 * ball4_volume;
        let v = fs_ball_volume(PI / 4.0).unwrap();
        assert!((mc - v).abs() / v < 5e-3, "mc={mc} quadrature={v}");
    }

    #[test]
    fn rotation_to_maps_origin() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = random_point(&mut rng);
            let r = rotation_to(&p);
            let img = r.apply([1.0, 0.0, 0.0]);
            let rep = p.representative();
            for k in 0..3 {
                assert!((img[k] - rep[k]).abs() < 1e-12);
            }
            // orthogonality
            Rotation::from_matrix(r.matrix()).unwrap();
        }
        assert_eq!(rotation_to(&ProjectivePoint::e0()).matrix(), Rotation::identity().matrix());
    }

    #[test]
    fn rotation_compose_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_rotation(&mut rng);
        let b = random_rotation(&mut rng);
        let x = [0.3, -1.2, 0.5];
        let y1 = a.apply(b.apply(x));
        let y2 = a.compose(&b).apply(x);
        for k in 0..3 {
            assert!((y1[k] - y2[k]).abs() < 1e-12);
        }
        let z = a.transpose().apply(a.apply(x));
        for k in 0..3 {
            assert!((z[k] - x[k]).abs() < 1e-12);
        }
        let w = a.apply_transpose(a.apply(x));
        for k in 0..3 {
            assert!((w[k] - x[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn packing_counts_and_separation() {
        let rho = 0.1;
        let centers = pack_fs_balls(rho).unwrap();
        assert!(
            centers.len() as f64 >= 0.2 / (rho * rho),
            "count {} below 0.2/rho^2 = {}",
            centers.len(),
            0.2 / (rho * rho)
        );
        for i in 0..centers.len() {
            for j in 0..i {
                assert!(fs_distance(&centers[i], &centers[j]) >= 2.0 * rho - 1e-12);
            }
        }
        // halving rho roughly quadruples the count
        let fine = pack_fs_balls(0.05).unwrap();
        let ratio = fine.len() as f64 / (4.0 * centers.len() as f64);
        assert!((0.7..=1.3).contains(&ratio), "scaling ratio {ratio}");
        // maximal radius still packs at least one center
        assert!(!pack_fs_balls(PI / 4.0).unwrap().is_empty());
        assert!(pack_fs_balls(0.0).is_err());
        assert!(pack_fs_balls(1.0).is_err());
    }

    #[test]
    fn sphere_grid_combinatorics() {
        for res in [1usize, 2, 3, 8, 17] {
            let g = SphereGrid::new(res).unwrap();
            let f = g.num_cells();
            assert_eq!(f, 8 * res * res);
            // Euler characteristic V - E + F = 2 with E = 3F/2
            let e = 3 * f / 2;
            let v = g.num_vertices();
            assert_eq!(v as i64 - e as i64 + f as i64, 2);
            // antipodal involution, fixed-point free
            for ci in 0..f {
                let cj = g.cell_antipode(ci);
                assert_ne!(ci, cj);
                assert_eq!(g.cell_antipode(cj), ci);
                let a = g.cell_center(ci);
                let b = g.cell_center(cj);
                for k in 0..3 {
                    assert!((a[k] + b[k]).abs() < 1e-15);
                }
            }
            for vi in 0..v {
                let vj = g.vertex_antipode(vi);
                assert_eq!(g.vertex_antipode(vj), vi);
                let a = g.vertex(vi);
                let b = g.vertex(vj);
                for k in 0..3 {
                    assert!((a[k] + b[k]).abs() < 1e-15);
                }
            }
            // neighbors are mutual and share exactly two vertices
            for ci in 0..f {
                for (slot, &cj) in g.cell_neighbors(ci).iter().enumerate() {
                    assert!(g.cell_neighbors(cj).contains(&ci));
                    let (x, y) = g.shared_edge(ci, slot);
                    let vj = g.cell_vertices(cj);
                    assert!(vj.contains(&x) && vj.contains(&y));
                }
            }
        }
    }

    #[test]
    fn sphere_grid_diameter_scaling() {
        let d8 = SphereGrid::new(8).unwrap().max_cell_diameter();
        let d16 = SphereGrid::new(16).unwrap().max_cell_diameter();
        assert!(d8 <= 4.0 / 8.0);
        assert!(d16 <= 4.0 / 16.0);
        assert!(d8 / d16 > 1.8 && d8 / d16 < 2.2);
    }

    #[test]
    fn sphere_grid_locate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = SphereGrid::new(13).unwrap();
        for _ in 0..2000 {
            let p = random_point(&mut rng).representative();
            let ci = g.locate_cell(p);
            // the located cell's center is within one cell diameter
            let c = g.cell_center(ci);
            let dot = (c[0] * p[0] + c[1] * p[1] + c[2] * p[2]).clamp(-1.0, 1.0);
            assert!(
                dot.acos() <= g.max_cell_diameter() * 1.5,
                "point {:?} assigned to far cell (angle {})",
                p,
                dot.acos()
            );
        }
        // cell centers locate to themselves
        for ci in (0..g.num_cells()).step_by(7) {
            assert_eq!(g.locate_cell(g.cell_center(ci)), ci);
        }
    }
}
