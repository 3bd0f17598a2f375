//! Topological invariants of real plane curves: the ℤ₂ class of a zero set
//! inside an annulus (computed by ray-crossing parity, which is exactly the
//! quantity preserved under boundary-dominated perturbations), marching
//! squares extraction of curve components with nesting, nest depth at a
//! point, and complement-component separation on ℝP².
//!
//! Sign data along rays is tracked as (sign, log-magnitude) pairs with the
//! Fubini-Study normalization ln|F(1,z)| − (d/2)·ln(1+‖z‖²), so degeneracy
//! checks are scale-free and high degrees neither overflow nor underflow.

use std::collections::HashMap;

use thiserror::Error;

use crate::poly::{horner, num_monomials, DensePoly, HomogeneousPoly, PolyError};
use crate::projgeom::{rotation_to, ProjGeomError, ProjectivePoint, SphereGrid};

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("annulus radii must satisfy 0 <= r1 < r2 <= {max}, got ({r1}, {r2})")]
    BadAnnulus { r1: f64, r2: f64, max: f64 },
    #[error(
        "zero-set boundary hypothesis fails: |F| at the {place} is {rel:.2e} relative to the \
         local scale"
    )]
    BoundaryDegenerate { place: String, rel: f64 },
    #[error("sign structure near s = {s:.6} not resolved at maximum refinement")]
    Unresolved { s: f64 },
    #[error("ray parities disagree across directions: {parities:?}")]
    Inconsistent { parities: Vec<u8> },
    #[error("need at least 8 directions, got {0}")]
    TooFewDirections(usize),
    #[error("resolution {got} too coarse, need at least {min}")]
    BadResolution { got: usize, min: usize },
    #[error("|F| at the base point is {value:.3e}, below the degeneracy threshold {threshold:.3e}")]
    DegenerateAtPoint { value: f64, threshold: f64 },
    #[error("point {index} lies in a cell straddling the zero set")]
    PointOnZeroCell { index: usize },
    #[error("length is only defined for closed components")]
    OpenComponent,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] ProjGeomError),
}

/// A closed annulus r1 ≤ ‖z‖ ≤ r2 in the affine chart centered at `center`
/// (the standard chart rotated so its origin is `center`). r1 = 0 is allowed:
/// the annulus degenerates to a punctured disk whose inner boundary is the
/// center point, which is what the innermost region of a nest needs.
#[derive(Debug, Clone)]
pub struct AnnulusSpec {
    pub center: ProjectivePoint,
    pub r1: f64,
    pub r2: f64,
}

/// Keeps the annulus well inside one affine chart.
pub const MAX_ANNULUS_RADIUS: f64 = 10.0;

impl AnnulusSpec {
    pub fn new(center: ProjectivePoint, r1: f64, r2: f64) -> Result<Self, TopologyError> {
        if !(r1 >= 0.0 && r1 < r2 && r2 <= MAX_ANNULUS_RADIUS) {
            return Err(TopologyError::BadAnnulus { r1, r2, max: MAX_ANNULUS_RADIUS });
        }
        Ok(Self { center, r1, r2 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnulusClass {
    Trivial,
    Nontrivial,
}

/// F expressed in the affine chart whose origin is `center`.
fn chart_dense(f: &HomogeneousPoly, center: &ProjectivePoint) -> DensePoly {
    if center.representative() == [1.0, 0.0, 0.0] {
        f.to_dense()
    } else {
        let r = rotation_to(center);
        f.rotate(&r.transpose()).to_dense()
    }
}

// relative magnitude thresholds, in log-space
const LN_DEGENERATE: f64 = -27.631_021_115_928_547; // ln 1e-12
const LN_DIP: f64 = -13.815_510_557_964_274; // ln 1e-6
const MAX_REFINE_DEPTH: u8 = 3;

#[derive(Clone, Copy)]
struct RaySample {
    s: f64,
    sign: i8,
    lnmag: f64,
}

struct RayEval {
    coeffs: Vec<f64>,
    half_d: f64,
}

impl RayEval {
    fn new(dense: &DensePoly, u: [f64; 2]) -> Self {
        Self { coeffs: dense.ray_restriction(u), half_d: 0.5 * dense.d as f64 }
    }

    fn at(&self, s: f64) -> RaySample {
        let v = horner(&self.coeffs, s);
        let sign = if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        };
        RaySample { s, sign, lnmag: v.abs().ln() - self.half_d * (s * s).ln_1p() }
    }
}

/// Appends refined samples for (a, b] to `out`; `a` is already there.
/// Same-sign pairs whose magnitude dips near the local scale get subdivided;
/// a pair that still dips below the 1e-12 level at full depth is an
/// unresolvable tangency. Exact-zero samples are kept and judged later from
/// their nonzero neighbors.
fn refine_pair(
    ray: &RayEval,
    a: RaySample,
    b: RaySample,
    scale: f64,
    depth: u8,
    out: &mut Vec<RaySample>,
) -> Result<(), TopologyError> {
    let suspicious =
        a.sign == 0 || b.sign == 0 || (a.sign == b.sign && a.lnmag.min(b.lnmag) < scale + LN_DIP);
    if suspicious && depth < MAX_REFINE_DEPTH {
        let mut prev = a;
        for k in 1..=8 {
            let next = if k == 8 { b } else { ray.at(a.s + (b.s - a.s) * k as f64 / 8.0) };
            refine_pair(ray, prev, next, scale, depth + 1, out)?;
            prev = next;
        }
        return Ok(());
    }
    if a.sign != 0
        && a.sign == b.sign
        && a.lnmag.min(b.lnmag) < scale + LN_DEGENERATE
    {
        return Err(TopologyError::Unresolved { s: 0.5 * (a.s + b.s) });
    }
    out.push(b);
    Ok(())
}

/// Parity of sign flips across the refined sample sequence. A run of exact
/// zeros flanked by opposite signs is a transversal crossing; flanked by
/// equal signs it is a tangency the scan cannot certify.
fn flip_parity(samples: &[RaySample]) -> Result<u8, TopologyError> {
    let mut flips = 0u32;
    let mut last: Option<i8> = None;
    let mut pending_zero: Option<f64> = None;
    for smp in samples {
        if smp.sign == 0 {
            pending_zero = Some(smp.s);
            continue;
        }
        if let Some(ls) = last {
            if smp.sign != ls {
                flips += 1;
            } else if let Some(s) = pending_zero {
                return Err(TopologyError::Unresolved { s });
            }
        }
        pending_zero = None;
        last = Some(smp.sign);
    }
    Ok((flips % 2) as u8)
}

fn ray_parity_dense(
    dense: &DensePoly,
    annulus: &AnnulusSpec,
    direction: [f64; 2],
    resolution: usize,
) -> Result<u8, TopologyError> {
    if resolution < 16 {
        return Err(TopologyError::BadResolution { got: resolution, min: 16 });
    }
    let norm = (direction[0] * direction[0] + direction[1] * direction[1]).sqrt();
    assert!(norm > 1e-12, "direction must be a nonzero 2-vector");
    let u = [direction[0] / norm, direction[1] / norm];
    let ray = RayEval::new(dense, u);
    let samples: Vec<RaySample> = (0..=resolution)
        .map(|j| ray.at(annulus.r1 + (annulus.r2 - annulus.r1) * j as f64 / resolution as f64))
        .collect();
    let scale = samples.iter().map(|s| s.lnmag).fold(f64::NEG_INFINITY, f64::max);
    if !scale.is_finite() {
        return Err(TopologyError::BoundaryDegenerate { place: "whole ray".into(), rel: 0.0 });
    }
    for (place, idx) in [("inner endpoint", 0), ("outer endpoint", resolution)] {
        let rel = (samples[idx].lnmag - scale).exp();
        if samples[idx].sign == 0 || samples[idx].lnmag < scale + LN_DEGENERATE {
            return Err(TopologyError::BoundaryDegenerate { place: place.into(), rel });
        }
    }
    let mut refined = Vec::with_capacity(samples.len());
    refined.push(samples[0]);
    for j in 0..resolution {
        refine_pair(&ray, samples[j], samples[j + 1], scale, 0, &mut refined)?;
    }
    flip_parity(&refined)
}

/// Parity of the transversal crossings of {F = 0} along the radial segment
/// from r1 to r2 in `direction`. This is the invariant behind the ℤ₂ class:
/// tangencies contribute evenly and cancel, so for a boundary-nonvanishing F
/// the parity equals the endpoint sign disagreement.
pub fn ray_parity(
    f: &HomogeneousPoly,
    annulus: &AnnulusSpec,
    direction: [f64; 2],
    resolution: usize,
) -> Result<u8, TopologyError> {
    let dense = chart_dense(f, &annulus.center);
    ray_parity_dense(&dense, annulus, direction, resolution)
}

/// The ℤ₂ class of {F = 0} ∩ annulus: ray parities over `n_directions`
/// equally spaced directions, which must be unanimous. Boundary circles are
/// screened for zeros at 2·n_directions angles first.
pub fn annulus_class(
    f: &HomogeneousPoly,
    annulus: &AnnulusSpec,
    n_directions: usize,
    resolution: usize,
) -> Result<AnnulusClass, TopologyError> {
    if n_directions < 8 {
        return Err(TopologyError::TooFewDirections(n_directions));
    }
    let dense = chart_dense(f, &annulus.center);
    let d = dense.d;
    for (name, r) in [("inner circle", annulus.r1), ("outer circle", annulus.r2)] {
        if r == 0.0 {
            continue; // the center point is checked as a ray endpoint
        }
        let angles = 2 * n_directions;
        let mut lnmags = Vec::with_capacity(angles);
        for k in 0..angles {
            let th = 2.0 * std::f64::consts::PI * k as f64 / angles as f64;
            let v = dense.evaluate([1.0, r * th.cos(), r * th.sin()]);
            lnmags.push(v.abs().ln() - 0.5 * d as f64 * (r * r).ln_1p());
        }
        let max = lnmags.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if let Some(bad) = lnmags.iter().find(|&&l| !(l >= max + LN_DEGENERATE)) {
            return Err(TopologyError::BoundaryDegenerate {
                place: name.into(),
                rel: (bad - max).exp(),
            });
        }
    }
    let mut parities = Vec::with_capacity(n_directions);
    for i in 0..n_directions {
        let th = 2.0 * std::f64::consts::PI * i as f64 / n_directions as f64;
        parities.push(ray_parity_dense(&dense, annulus, [th.cos(), th.sin()], resolution)?);
    }
    if parities.iter().any(|&p| p != parities[0]) {
        return Err(TopologyError::Inconsistent { parities });
    }
    Ok(if parities[0] == 1 { AnnulusClass::Nontrivial } else { AnnulusClass::Trivial })
}

/// One polyline of the zero set in a chart window. Closed components are
/// loops; open ones end on the window boundary.
#[derive(Debug, Clone)]
pub struct CurveComponent {
    pub vertices: Vec<[f64; 2]>,
    pub is_closed: bool,
    /// All vertices within the inscribed disk of the window.
    pub within_disk: bool,
    /// Index of the smallest closed component strictly containing this one.
    pub parent: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ComponentSet {
    pub components: Vec<CurveComponent>,
    pub resolution: usize,
    pub radius: f64,
}

impl ComponentSet {
    pub fn closed_count(&self) -> usize {
        self.components.iter().filter(|c| c.is_closed).count()
    }

    pub fn open_count(&self) -> usize {
        self.components.len() - self.closed_count()
    }

    /// Number of closed components whose interior contains `p` (even-odd).
    pub fn depth_at(&self, p: [f64; 2]) -> usize {
        self.components
            .iter()
            .filter(|c| c.is_closed && point_in_polygon(p, &c.vertices))
            .count()
    }
}

fn point_in_polygon(p: [f64; 2], poly: &[[f64; 2]]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if x > p[0] {
                inside = !inside;
            }
        }
    }
    inside
}

/// Marching squares over the square window [−radius, radius]² of the chart at
/// `center`. Saddle cells are resolved by sampling the cell center. Each cut
/// grid edge carries one interpolated vertex; segments are linked into
/// polylines and closed ones get an even-odd containment tree.
pub fn extract_components(
    f: &HomogeneousPoly,
    center: &ProjectivePoint,
    radius: f64,
    resolution: usize,
) -> Result<ComponentSet, TopologyError> {
    if resolution < 64 {
        return Err(TopologyError::BadResolution { got: resolution, min: 64 });
    }
    if !(radius > 0.0 && radius <= MAX_ANNULUS_RADIUS) {
        return Err(TopologyError::BadAnnulus { r1: 0.0, r2: radius, max: MAX_ANNULUS_RADIUS });
    }
    let dense = chart_dense(f, center);
    let n = resolution;
    let coord = |k: usize| -radius + 2.0 * radius * k as f64 / n as f64;
    // corner values, row by row
    let mut vals = vec![0.0f64; (n + 1) * (n + 1)];
    for j in 0..=n {
        let row = dense.row_restriction(coord(j));
        for i in 0..=n {
            vals[j * (n + 1) + i] = horner(&row, coord(i));
        }
    }
    let neg = |v: f64| v < 0.0; // exact zeros count as positive

    // global edge keys: horizontal edge (i, j) joins corners (i,j)-(i+1,j),
    // vertical edge (i, j) joins (i,j)-(i,j+1)
    let hkey = |i: usize, j: usize| ((j * (n + 1) + i) as u64) << 1;
    let vkey = |i: usize, j: usize| (((j * (n + 1) + i) as u64) << 1) | 1;

    let mut edge_points: HashMap<u64, [f64; 2]> = HashMap::new();
    let mut segments: Vec<(u64, u64)> = Vec::new();
    let interp = |key: u64,
                      pa: [f64; 2],
                      va: f64,
                      pb: [f64; 2],
                      vb: f64,
                      pts: &mut HashMap<u64, [f64; 2]>| {
        pts.entry(key).or_insert_with(|| {
            let t = va / (va - vb);
            [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
        });
    };

    for j in 0..n {
        for i in 0..n {
            let c = [
                vals[j * (n + 1) + i],         // BL
                vals[j * (n + 1) + i + 1],     // BR
                vals[(j + 1) * (n + 1) + i + 1], // TR
                vals[(j + 1) * (n + 1) + i],   // TL
            ];
            let p = [
                [coord(i), coord(j)],
                [coord(i + 1), coord(j)],
                [coord(i + 1), coord(j + 1)],
                [coord(i), coord(j + 1)],
            ];
            // edges in corner order: S joins 0-1, E joins 1-2, N joins 3-2, W joins 0-3
            let edges = [
                (hkey(i, j), 0usize, 1usize),
                (vkey(i + 1, j), 1, 2),
                (hkey(i, j + 1), 3, 2),
                (vkey(i, j), 0, 3),
            ];
            let mut cut: Vec<usize> = Vec::with_capacity(4);
            for (e, &(key, a, b)) in edges.iter().enumerate() {
                if neg(c[a]) != neg(c[b]) {
                    interp(key, p[a], c[a], p[b], c[b], &mut edge_points);
                    cut.push(e);
                }
            }
            match cut.len() {
                0 => {}
                2 => segments.push((edges[cut[0]].0, edges[cut[1]].0)),
                4 => {
                    // saddle: the sign at the center decides the pairing; the
                    // two segments hug the corners on the minority side
                    let cx = 0.5 * (p[0][0] + p[2][0]);
                    let cy = 0.5 * (p[0][1] + p[2][1]);
                    let center_neg = neg(dense.evaluate([1.0, cx, cy]));
                    // corner k touches edges (k-1 mod 4) and k in the edge order S,E,N,W
                    let pair_around = |corner: usize| (edges[(corner + 3) % 4].0, edges[corner].0);
                    if center_neg == neg(c[0]) {
                        // BL region runs through the center: segments isolate BR and TL
                        segments.push(pair_around(1));
                        segments.push(pair_around(3));
                    } else {
                        segments.push(pair_around(0));
                        segments.push(pair_around(2));
                    }
                }
                _ => unreachable!("a square has an even number of cut edges"),
            }
        }
    }

    // link segments into polylines: every cut edge has 1 (window boundary) or
    // 2 incident segments
    let mut incident: HashMap<u64, Vec<usize>> = HashMap::new();
    for (si, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(si);
        incident.entry(b).or_default().push(si);
    }
    let mut used = vec![false; segments.len()];
    let mut components = Vec::new();
    let walk = |start_edge: u64, used: &mut Vec<bool>| -> (Vec<u64>, bool) {
        let mut path = vec![start_edge];
        let mut cur = start_edge;
        loop {
            let Some(&s) = incident[&cur].iter().find(|&&s| !used[s]) else {
                return (path, false);
            };
            used[s] = true;
            let (a, b) = segments[s];
            cur = if a == cur { b } else { a };
            if cur == start_edge {
                return (path, true);
            }
            path.push(cur);
        }
    };
    // open paths first (their endpoints have exactly one incident segment)
    let endpoints: Vec<u64> =
        incident.iter().filter(|(_, v)| v.len() == 1).map(|(&k, _)| k).collect();
    for &e in &endpoints {
        if incident[&e].iter().all(|&s| used[s]) {
            continue;
        }
        let (path, closed) = walk(e, &mut used);
        components.push((path, closed));
    }
    // remaining are cycles
    for si in 0..segments.len() {
        if used[si] {
            continue;
        }
        let (path, closed) = walk(segments[si].0, &mut used);
        components.push((path, closed));
    }

    let mut out: Vec<CurveComponent> = components
        .into_iter()
        .map(|(path, closed)| {
            let vertices: Vec<[f64; 2]> = path.iter().map(|k| edge_points[k]).collect();
            let within = vertices
                .iter()
                .all(|v| (v[0] * v[0] + v[1] * v[1]).sqrt() <= radius + 1e-12);
            CurveComponent { vertices, is_closed: closed, within_disk: within, parent: None }
        })
        .collect();

    // containment tree over the closed components
    let closed_idx: Vec<usize> =
        (0..out.len()).filter(|&k| out[k].is_closed && out[k].vertices.len() >= 3).collect();
    let mut contains = vec![Vec::new(); out.len()];
    for &l in &closed_idx {
        for &k in &closed_idx {
            if l != k && point_in_polygon(out[k].vertices[0], &out[l].vertices) {
                contains[k].push(l);
            }
        }
    }
    for &k in &closed_idx {
        let depth_k = contains[k].len();
        if depth_k > 0 {
            let parent =
                contains[k].iter().copied().find(|&l| contains[l].len() == depth_k - 1);
            out[k].parent = parent;
        }
    }
    Ok(ComponentSet { components: out, resolution, radius })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthMetric {
    Euclidean,
    FubiniStudy,
}

/// Polyline length of a closed component. The FS option weighs each segment
/// by the chart metric g = ((1+‖z‖²)·I − z·zᵀ)/(1+‖z‖²)² at its midpoint.
pub fn component_length(c: &CurveComponent, metric: LengthMetric) -> Result<f64, TopologyError> {
    if !c.is_closed {
        return Err(TopologyError::OpenComponent);
    }
    let n = c.vertices.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = c.vertices[i];
        let b = c.vertices[(i + 1) % n];
        let dx = [b[0] - a[0], b[1] - a[1]];
        match metric {
            LengthMetric::Euclidean => {
                total += (dx[0] * dx[0] + dx[1] * dx[1]).sqrt();
            }
            LengthMetric::FubiniStudy => {
                let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                let w = 1.0 + m[0] * m[0] + m[1] * m[1];
                let zd = m[0] * dx[0] + m[1] * dx[1];
                let q = (w * (dx[0] * dx[0] + dx[1] * dx[1]) - zd * zd) / (w * w);
                total += q.max(0.0).sqrt();
            }
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy)]
pub struct NestDepth {
    pub depth: usize,
    /// Set when open components reach the window boundary, in which case
    /// ovals through the window edge may be missing from the count.
    pub is_lower_bound: bool,
}

/// Number of closed zero-set components around `p` within the chart disk of
/// radius `r_max`, by extraction and even-odd counting at the origin.
pub fn nest_depth_at(
    f: &HomogeneousPoly,
    p: &ProjectivePoint,
    r_max: f64,
    resolution: usize,
) -> Result<NestDepth, TopologyError> {
    let fs_sq = f.fs_norm_sq_at_sphere(p.representative());
    let threshold = 1e-16 * num_monomials(f.degree()) as f64 * f.l2_norm_sq();
    if !(fs_sq >= threshold) {
        return Err(TopologyError::DegenerateAtPoint {
            value: fs_sq.sqrt(),
            threshold: threshold.sqrt(),
        });
    }
    let set = extract_components(f, p, r_max, resolution)?;
    Ok(NestDepth { depth: set.depth_at([0.0, 0.0]), is_lower_bound: set.open_count() > 0 })
}

/// Signs of F at the cell centers and vertices of a sphere grid. For odd d
/// the values on antipodal cells are exact negations of each other, so the
/// zero-complement components below are computed on S² and quotiented.
#[derive(Debug, Clone)]
pub struct SignField {
    pub degree: usize,
    pub center_values: Vec<f64>,
    pub vertex_values: Vec<f64>,
}

impl SignField {
    pub fn on_sphere(f: &HomogeneousPoly, grid: &SphereGrid) -> SignField {
        let dense = f.to_dense();
        let center_values =
            (0..grid.num_cells()).map(|c| dense.evaluate(grid.cell_center(c))).collect();
        let vertex_values =
            (0..grid.num_vertices()).map(|v| dense.evaluate(grid.vertex(v))).collect();
        SignField { degree: f.degree(), center_values, vertex_values }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Partition of `points` by connected component of {F ≠ 0} in ℝP². Cells of
/// the sphere grid join when their center signs agree and the shared edge
/// shows no sign change; antipodal cells are always identified. Points in
/// sign-ambiguous cells are an error, not a guess.
pub fn separation_classes(
    f: &HomogeneousPoly,
    points: &[ProjectivePoint],
    grid: &SphereGrid,
) -> Result<Vec<Vec<usize>>, TopologyError> {
    let field = SignField::on_sphere(f, grid);
    let sgn = |v: f64| -> i8 {
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    };
    let mut uf = UnionFind::new(grid.num_cells());
    for ci in 0..grid.num_cells() {
        uf.union(ci, grid.cell_antipode(ci));
        let sc = sgn(field.center_values[ci]);
        if sc == 0 {
            continue;
        }
        for slot in 0..3 {
            let cj = grid.cell_neighbors(ci)[slot];
            if sgn(field.center_values[cj]) != sc {
                continue;
            }
            let (va, vb) = grid.shared_edge(ci, slot);
            if sgn(field.vertex_values[va]) == sc && sgn(field.vertex_values[vb]) == sc {
                uf.union(ci, cj);
            }
        }
    }
    let dense = f.to_dense();
    let mut roots = Vec::with_capacity(points.len());
    for (idx, p) in points.iter().enumerate() {
        let rep = p.representative();
        let ci = grid.locate_cell(rep);
        let sc = sgn(field.center_values[ci]);
        let pure = sc != 0
            && grid
                .cell_vertices(ci)
                .iter()
                .all(|&v| sgn(field.vertex_values[v]) == sc)
            && sgn(dense.evaluate(rep)) == sc;
        if !pure {
            return Err(TopologyError::PointOnZeroCell { index: idx });
        }
        roots.push(uf.find(ci));
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (idx, &r) in roots.iter().enumerate() {
        match seen.get(&r) {
            Some(&g) => groups[g].push(idx),
            None => {
                seen.insert(r, groups.len());
                groups.push(vec![idx]);
            }
        }
    }
    Ok(groups)
}
