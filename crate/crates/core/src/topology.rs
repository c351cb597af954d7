//! Numeric workspace topology: cusps, nodes, aspects and the census of
//! inverse-kinematic solution counts over the cross-section.
//!
//! Cusps are found geometrically, as points where the image velocity of a
//! boundary loop vanishes and reverses, and are then certified by a triple
//! root of the inverse-kinematics quartic. Nodes are transversal crossings of
//! the boundary polylines, refined by Newton's method and certified by two
//! double roots.

use std::cmp::Ordering;
use std::collections::VecDeque;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{ik_polynomial, solution_count, CrossSectionPoint, DesignParams};
use crate::poly::{chordal_distance, Poly};
use crate::singularity::{
    count_aspects, isolated_points, trace_lines, trace_s2, Boundary, CurveLoop, IsolatedPoint, SingularBranch,
    MIN_ASPECT_GRID,
};

/// Point dedup distance in the normalized cross-section.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Crossings closer than this to a cusp are not nodes.
pub const CUSP_EXCLUSION: f64 = 1e-4;
/// Largest accepted root-cluster width (chordal metric).
pub const CLUSTER_WIDTH: f64 = 1e-4;
/// Smallest distance from a cusp's triple cluster to the fourth root.
pub const CUSP_RESIDUAL_GAP: f64 = 1e-2;
/// Smallest separation of a node's two double roots.
pub const NODE_PAIR_GAP: f64 = 1e-3;
/// Smallest tangent angle at a crossing, in radians.
pub const MIN_CROSSING_ANGLE: f64 = 1e-3;
/// Smallest accepted trace resolution for cusp and node extraction.
pub const MIN_TOPOLOGY_SAMPLES: usize = 1024;
/// Components with fewer cells are treated as sampling debris.
pub const MIN_REGION_CELLS: usize = 4;

pub const DEFAULT_TRACE_N: usize = 2048;
pub const DEFAULT_ASPECT_GRID: usize = MIN_ASPECT_GRID;
pub const DEFAULT_CENSUS_N: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CensusRegion {
    /// Cell farthest from the region's edge.
    pub representative: CrossSectionPoint,
    pub iks: usize,
    pub area: f64,
    /// Touches no side of the sampled box, the `ρ = 0` axis included.
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCensus {
    pub grid: usize,
    /// Half-width of the sampled box `[0, extent] × [-extent, extent]`.
    pub extent: f64,
    pub regions: Vec<CensusRegion>,
    pub has_hole: bool,
}

impl RegionCensus {
    pub fn count_with(&self, iks: usize) -> usize {
        self.regions.iter().filter(|r| r.iks == iks).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureOptions {
    pub trace_n: usize,
    pub aspect_grid: usize,
    /// `None` skips the census (and leaves `has_hole` false).
    pub census_n: Option<usize>,
}

impl Default for SignatureOptions {
    fn default() -> Self {
        SignatureOptions {
            trace_n: DEFAULT_TRACE_N,
            aspect_grid: DEFAULT_ASPECT_GRID,
            census_n: Some(DEFAULT_CENSUS_N),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySignature {
    pub cusps: Vec<CrossSectionPoint>,
    pub nodes: Vec<CrossSectionPoint>,
    pub isolated: Vec<IsolatedPoint>,
    pub aspect_count: Option<usize>,
    pub has_hole: bool,
    pub region_census: Option<RegionCensus>,
    /// Traced boundary loops, internal first.
    pub branches: Vec<SingularBranch>,
    /// Singular lines, for joint-space plots.
    pub lines: Vec<SingularBranch>,
    /// Checks that failed; empty for a complete signature.
    pub failed_checks: Vec<String>,
}

impl TopologySignature {
    pub fn is_complete(&self) -> bool {
        self.failed_checks.is_empty()
    }
}

fn sort_points(pts: &mut [CrossSectionPoint]) {
    pts.sort_by(|a, b| a.lex_cmp(b));
}

fn push_unique(out: &mut Vec<CrossSectionPoint>, q: CrossSectionPoint, tol: f64) -> bool {
    if out.iter().any(|o| o.distance(&q) < tol) {
        return false;
    }
    out.push(q);
    true
}

/// Complex roots of the inverse-kinematics quartic at `q`, computed in the
/// `tan(θ3/2)` or `cot(θ3/2)` chart, whichever keeps the leading coefficient
/// largest. Clustering uses the chordal metric, which is the same in both.
pub fn quartic_roots_at(p: &DesignParams, q: &CrossSectionPoint) -> Result<Vec<Complex64>> {
    let c = ik_polynomial(p, q)?;
    let mut coeffs = c.to_vec();
    if c[4].abs() < c[0].abs() {
        coeffs.reverse();
    }
    Ok(Poly::new(coeffs).complex_roots())
}

fn diameter(roots: &[Complex64]) -> f64 {
    let mut w = 0.0_f64;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            w = w.max(chordal_distance(roots[i], roots[j]));
        }
    }
    w
}

/// Width of the tightest triple among `roots` and the gap to the remaining root.
pub fn triple_cluster(roots: &[Complex64]) -> (f64, f64) {
    match roots.len() {
        3 => (diameter(roots), f64::INFINITY),
        4 => (0..4)
            .map(|k| {
                let triple: Vec<Complex64> = (0..4).filter(|&i| i != k).map(|i| roots[i]).collect();
                let gap = triple.iter().map(|t| chordal_distance(*t, roots[k])).fold(f64::INFINITY, f64::min);
                (diameter(&triple), gap)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap(),
        _ => (f64::INFINITY, 0.0),
    }
}

/// Widths of the best split of four roots into two pairs, and the pairs' gap.
pub fn double_pairs(roots: &[Complex64]) -> (f64, f64) {
    if roots.len() != 4 {
        return (f64::INFINITY, 0.0);
    }
    let splits = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    let mut best = (f64::INFINITY, 0.0);
    for [(a, b), (c, d)] in splits {
        let w = chordal_distance(roots[a], roots[b]).max(chordal_distance(roots[c], roots[d]));
        let gap = [(a, c), (a, d), (b, c), (b, d)]
            .iter()
            .map(|&(i, j)| chordal_distance(roots[i], roots[j]))
            .fold(f64::INFINITY, f64::min);
        if w < best.0 {
            best = (w, gap);
        }
    }
    best
}

fn cusp_certificate(p: &DesignParams, q: &CrossSectionPoint) -> Result<()> {
    let roots = quartic_roots_at(p, q)?;
    let (width, gap) = triple_cluster(&roots);
    if width < CLUSTER_WIDTH && gap > CUSP_RESIDUAL_GAP {
        Ok(())
    } else {
        Err(Error::CuspVerification { rho: q.rho, z: q.z, width })
    }
}

/// Cusps of the traced boundary loops.
pub fn find_cusps(p: &DesignParams, branches: &[SingularBranch]) -> Result<Vec<CrossSectionPoint>> {
    let mut cusps = Vec::new();
    for b in branches.iter().filter(|b| b.is_curve()) {
        let n = b.joint_polyline.len();
        if n < MIN_TOPOLOGY_SAMPLES {
            return Err(Error::InvalidArgument(format!(
                "cusp search needs at least {MIN_TOPOLOGY_SAMPLES} samples per loop, got {n}"
            )));
        }
        let lp = b.arc.expect("curve branches carry their arc");
        let w: Vec<[f64; 2]> = (0..n).map(|i| lp.image_velocity(p, b.param(i))).collect();
        let max_speed = w.iter().map(|v| v[0].hypot(v[1])).fold(0.0, f64::max);
        for i in 0..n {
            let (w0, w1) = (w[i], w[(i + 1) % n]);
            if w0[0] * w1[0] + w0[1] * w1[1] >= 0.0 {
                continue;
            }
            let s0 = b.param(i);
            let s1 = s0 + 2.0 / n as f64;
            let s = refine_reversal(p, &lp, s0, s1, w0);
            let v = lp.image_velocity(p, s);
            if v[0].hypot(v[1]) > 1e-6 * max_speed {
                // a sharp but regular turn
                continue;
            }
            let q = lp.image(p, s);
            cusp_certificate(p, &q)?;
            push_unique(&mut cusps, q, CLUSTER_TOL);
        }
    }
    sort_points(&mut cusps);
    Ok(cusps)
}

/// Bisection on `w(s) · w(s0)`, which changes sign where the velocity reverses.
fn refine_reversal(p: &DesignParams, lp: &CurveLoop, mut lo: f64, mut hi: f64, w0: [f64; 2]) -> f64 {
    let sigma = |s: f64| {
        let v = lp.image_velocity(p, s);
        v[0] * w0[0] + v[1] * w0[1]
    };
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sigma(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A refined crossing of two boundary loops (or of one loop with itself).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub point: CrossSectionPoint,
    pub first: Boundary,
    pub second: Boundary,
    pub s_first: f64,
    pub s_second: f64,
    /// Angle between the two image tangents, in `[0, π/2]`.
    pub angle: f64,
}

fn segment_hits(a: &[CrossSectionPoint], b: &[CrossSectionPoint], same: bool) -> Vec<(usize, f64, usize, f64)> {
    let (na, nb) = (a.len(), b.len());
    let bbox =
        |p: CrossSectionPoint, q: CrossSectionPoint| (p.rho.min(q.rho), p.rho.max(q.rho), p.z.min(q.z), p.z.max(q.z));
    let bb: Vec<_> = (0..nb).map(|j| bbox(b[j], b[(j + 1) % nb])).collect();
    let mut hits = Vec::new();
    for i in 0..na {
        let (p0, p1) = (a[i], a[(i + 1) % na]);
        let ba = bbox(p0, p1);
        let r = (p1.rho - p0.rho, p1.z - p0.z);
        let start = if same { i + 2 } else { 0 };
        for j in start..nb {
            if same && i == 0 && j == nb - 1 {
                continue;
            }
            let bj = bb[j];
            if bj.0 > ba.1 || bj.1 < ba.0 || bj.2 > ba.3 || bj.3 < ba.2 {
                continue;
            }
            let (q0, q1) = (b[j], b[(j + 1) % nb]);
            let s = (q1.rho - q0.rho, q1.z - q0.z);
            let denom = r.0 * s.1 - r.1 * s.0;
            if denom == 0.0 {
                continue;
            }
            let d = (q0.rho - p0.rho, q0.z - p0.z);
            let t = (d.0 * s.1 - d.1 * s.0) / denom;
            let u = (d.0 * r.1 - d.1 * r.0) / denom;
            if (0.0..1.0).contains(&t) && (0.0..1.0).contains(&u) {
                hits.push((i, t, j, u));
            }
        }
    }
    hits
}

/// Newton's method on `γa(sa) = γb(sb)` with a finite-difference Jacobian.
fn refine_crossing(p: &DesignParams, la: &CurveLoop, lb: &CurveLoop, mut sa: f64, mut sb: f64) -> (f64, f64) {
    let h = 1e-7;
    for _ in 0..40 {
        let (a, b) = (la.image(p, sa), lb.image(p, sb));
        let g = (a.rho - b.rho, a.z - b.z);
        if g.0.hypot(g.1) < 1e-15 {
            break;
        }
        let da = {
            let (x, y) = (la.image(p, sa + h), la.image(p, sa - h));
            ((x.rho - y.rho) / (2.0 * h), (x.z - y.z) / (2.0 * h))
        };
        let db = {
            let (x, y) = (lb.image(p, sb + h), lb.image(p, sb - h));
            ((x.rho - y.rho) / (2.0 * h), (x.z - y.z) / (2.0 * h))
        };
        // [da, -db] [δa, δb]ᵀ = -g
        let det = da.0 * (-db.1) - (-db.0) * da.1;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let step_a = (-g.0 * (-db.1) - (-db.0) * (-g.1)) / det;
        let step_b = (da.0 * (-g.1) - da.1 * (-g.0)) / det;
        if step_a.abs() > 0.05 || step_b.abs() > 0.05 {
            break;
        }
        sa += step_a;
        sb += step_b;
        if step_a.abs() < 1e-16 && step_b.abs() < 1e-16 {
            break;
        }
    }
    (sa.rem_euclid(2.0), sb.rem_euclid(2.0))
}

fn tangent_angle(u: [f64; 2], v: [f64; 2]) -> f64 {
    let cross = (u[0] * v[1] - u[1] * v[0]).abs();
    let dot = (u[0] * v[0] + u[1] * v[1]).abs();
    cross.atan2(dot)
}

/// All crossings among the boundary loops, refined and clustered.
pub fn boundary_crossings(p: &DesignParams, branches: &[SingularBranch]) -> Vec<Crossing> {
    let curves: Vec<&SingularBranch> = branches.iter().filter(|b| b.is_curve()).collect();
    let mut out: Vec<Crossing> = Vec::new();
    for (ia, a) in curves.iter().enumerate() {
        for b in curves.iter().skip(ia) {
            let same = std::ptr::eq(*a, *b);
            let (la, lb) = (a.arc.unwrap(), b.arc.unwrap());
            let (na, nb) = (a.workspace_polyline.len() as f64, b.workspace_polyline.len() as f64);
            for (i, t, j, u) in segment_hits(&a.workspace_polyline, &b.workspace_polyline, same) {
                let sa0 = 2.0 * (i as f64 + t) / na;
                let sb0 = 2.0 * (j as f64 + u) / nb;
                let (sa, sb) = refine_crossing(p, &la, &lb, sa0, sb0);
                let point = la.image(p, sa);
                if out.iter().any(|c| c.point.distance(&point) < CLUSTER_TOL) {
                    continue;
                }
                out.push(Crossing {
                    point,
                    first: a.boundary.unwrap_or(Boundary::Internal),
                    second: b.boundary.unwrap_or(Boundary::Internal),
                    s_first: sa,
                    s_second: sb,
                    angle: tangent_angle(la.image_velocity(p, sa), lb.image_velocity(p, sb)),
                });
            }
        }
    }
    out.sort_by(|x, y| x.point.lex_cmp(&y.point));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CrossingCounts {
    pub internal_self: usize,
    pub external_self: usize,
    pub mutual: usize,
}

/// Crossings of the boundary images by kind (no certificates).
pub fn crossing_counts(p: &DesignParams, trace_n: usize) -> Result<CrossingCounts> {
    let branches = trace_s2(p, trace_n)?;
    let mut c = CrossingCounts::default();
    for x in boundary_crossings(p, &branches) {
        match (x.first, x.second) {
            (Boundary::Internal, Boundary::Internal) => c.internal_self += 1,
            (Boundary::External, Boundary::External) => c.external_self += 1,
            _ => c.mutual += 1,
        }
    }
    Ok(c)
}

fn node_certificate(p: &DesignParams, q: &CrossSectionPoint, isolated: Option<&IsolatedPoint>) -> Result<()> {
    let roots = quartic_roots_at(p, q)?;
    let ok = match isolated {
        Some(ip) => {
            // The line's θ3 is a double root; the rest of the fibre is a circle.
            let half = 0.5 * ip.theta3;
            let c = ik_polynomial(p, q)?;
            let target = if c[4].abs() < c[0].abs() {
                Complex64::new(1.0 / half.tan(), 0.0)
            } else {
                Complex64::new(half.tan(), 0.0)
            };
            roots.iter().filter(|r| chordal_distance(**r, target) < CLUSTER_WIDTH).count() >= 2
        }
        None => {
            let (width, gap) = double_pairs(&roots);
            width < CLUSTER_WIDTH && gap > NODE_PAIR_GAP
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NodeVerification { rho: q.rho, z: q.z })
    }
}

/// Nodes of the workspace boundary. Isolated points lying on a crossing are
/// flagged via `coincides_with_node` and counted once, as that node.
pub fn find_nodes(
    p: &DesignParams,
    branches: &[SingularBranch],
    isolated: &mut [IsolatedPoint],
    cusps: &[CrossSectionPoint],
) -> Result<Vec<CrossSectionPoint>> {
    if let Some(b) = branches.iter().find(|b| b.is_curve() && b.joint_polyline.len() < MIN_TOPOLOGY_SAMPLES) {
        return Err(Error::InvalidArgument(format!(
            "node search needs at least {MIN_TOPOLOGY_SAMPLES} samples per loop, got {}",
            b.joint_polyline.len()
        )));
    }
    let mut nodes = Vec::new();
    for x in boundary_crossings(p, branches) {
        if cusps.iter().any(|c| c.distance(&x.point) < CUSP_EXCLUSION) {
            continue;
        }
        if x.angle < MIN_CROSSING_ANGLE {
            return Err(Error::TangentialContact { rho: x.point.rho, z: x.point.z, angle: x.angle });
        }
        let at = isolated.iter_mut().find(|ip| ip.point.distance(&x.point) < CLUSTER_TOL);
        let cert = match at {
            Some(ip) => {
                ip.coincides_with_node = true;
                node_certificate(p, &x.point, Some(ip))
            }
            None => node_certificate(p, &x.point, None),
        };
        cert?;
        push_unique(&mut nodes, x.point, CLUSTER_TOL);
    }
    sort_points(&mut nodes);
    Ok(nodes)
}

/// Raw census cells: the solution count at each cell centre, `None` for odd
/// counts and isolated points. Row-major with `ρ` varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusGrid {
    pub n: usize,
    pub extent: f64,
    pub labels: Vec<Option<u8>>,
}

impl CensusGrid {
    /// Samples `[0, extent] × [-extent, extent]` with `extent = 1.05 (1 + d3 + d4 + r2)`.
    /// Odd sizes are rounded up so that no row of centres lies on `z = 0`,
    /// where nodes sit.
    pub fn sample(p: &DesignParams, grid: usize) -> Result<Self> {
        if grid < 8 {
            return Err(Error::InvalidArgument(format!("census grid {grid} is below 8")));
        }
        let n = grid + grid % 2;
        let extent = 1.05 * p.reach_bound();
        let g = CensusGrid { n, extent, labels: Vec::new() };
        let labels = (0..n)
            .into_par_iter()
            .flat_map_iter(|j| {
                let g = &g;
                (0..n).map(move |i| match solution_count(p, &g.center(i, j)) {
                    Some(k) if k % 2 == 0 => Some(k as u8),
                    _ => None,
                })
            })
            .collect();
        Ok(CensusGrid { labels, ..g })
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (self.extent / self.n as f64, 2.0 * self.extent / self.n as f64)
    }

    pub fn center(&self, i: usize, j: usize) -> CrossSectionPoint {
        let (dr, dz) = self.cell_size();
        CrossSectionPoint::new((i as f64 + 0.5) * dr, -self.extent + (j as f64 + 0.5) * dz)
    }
}

/// Grid census of inverse-kinematic solution counts over the half-plane
/// `ρ ≥ 0`, with connected regions per count.
///
/// A hole is a 0-solution region touching no side of the box. Regions that
/// reach the axis are voids around it, not holes.
pub fn region_census(p: &DesignParams, grid: usize) -> Result<RegionCensus> {
    Ok(census_regions(&CensusGrid::sample(p, grid)?))
}

/// Connected regions of a sampled census.
pub fn census_regions(g: &CensusGrid) -> RegionCensus {
    let (n, extent, labels) = (g.n, g.extent, &g.labels);
    let (dr, dz) = g.cell_size();
    let center = |i: usize, j: usize| g.center(i, j);

    let neighbours = |c: usize| {
        let (i, j) = (c % n, c / n);
        let mut v = [None; 4];
        if i + 1 < n {
            v[0] = Some(c + 1);
        }
        if i > 0 {
            v[1] = Some(c - 1);
        }
        if j + 1 < n {
            v[2] = Some(c + n);
        }
        if j > 0 {
            v[3] = Some(c - n);
        }
        v
    };

    // distance to the nearest cell with a different label
    let mut depth = vec![usize::MAX; n * n];
    let mut queue = VecDeque::new();
    for c in 0..n * n {
        if neighbours(c).iter().flatten().any(|&nb| labels[nb] != labels[c]) {
            depth[c] = 0;
            queue.push_back(c);
        }
    }
    while let Some(c) = queue.pop_front() {
        for nb in neighbours(c).into_iter().flatten() {
            if depth[nb] == usize::MAX {
                depth[nb] = depth[c] + 1;
                queue.push_back(nb);
            }
        }
    }

    let mut seen = vec![false; n * n];
    let mut regions = Vec::new();
    let mut has_hole = false;
    for start in 0..n * n {
        let Some(label) = labels[start] else { continue };
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let (mut cells, mut outer, mut best) = (0usize, false, start);
        while let Some(c) = queue.pop_front() {
            cells += 1;
            let (i, j) = (c % n, c / n);
            outer |= i == 0 || i == n - 1 || j == 0 || j == n - 1;
            if depth[c] > depth[best] {
                best = c;
            }
            for nb in neighbours(c).into_iter().flatten() {
                if !seen[nb] && labels[nb] == Some(label) {
                    seen[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
        if cells < MIN_REGION_CELLS {
            continue;
        }
        if label == 0 && !outer {
            has_hole = true;
        }
        regions.push(CensusRegion {
            representative: center(best % n, best / n),
            iks: label as usize,
            area: cells as f64 * dr * dz,
            bounded: !outer,
        });
    }
    regions.sort_by(|a, b| a.iks.cmp(&b.iks).then(a.representative.lex_cmp(&b.representative)));
    RegionCensus { grid: n, extent, regions, has_hole }
}

/// The complete numeric signature. Fails on the first check that does not pass.
pub fn numeric_signature(p: &DesignParams, opts: &SignatureOptions) -> Result<TopologySignature> {
    let sig = signature_impl(p, opts, true)?;
    Ok(sig)
}

/// Like [`numeric_signature`], but records failing checks in
/// `failed_checks` and carries on with what it has.
pub fn partial_signature(p: &DesignParams, opts: &SignatureOptions) -> TopologySignature {
    match signature_impl(p, opts, false) {
        Ok(s) => s,
        Err(e) => TopologySignature {
            cusps: Vec::new(),
            nodes: Vec::new(),
            isolated: isolated_points(p),
            aspect_count: None,
            has_hole: false,
            region_census: None,
            branches: Vec::new(),
            lines: trace_lines(p, 64),
            failed_checks: vec![format!("trace: {e}")],
        },
    }
}

fn signature_impl(p: &DesignParams, opts: &SignatureOptions, strict: bool) -> Result<TopologySignature> {
    let branches = trace_s2(p, opts.trace_n)?;
    let mut failed = Vec::new();
    let mut check = |name: &str, e: Error| -> Result<()> {
        if strict {
            Err(e)
        } else {
            failed.push(format!("{name}: {e}"));
            Ok(())
        }
    };
    let mut isolated = isolated_points(p);
    let cusps = match find_cusps(p, &branches) {
        Ok(c) => c,
        Err(e) => {
            check("cusps", e)?;
            Vec::new()
        }
    };
    let nodes = match find_nodes(p, &branches, &mut isolated, &cusps) {
        Ok(n) => n,
        Err(e) => {
            check("nodes", e)?;
            Vec::new()
        }
    };
    let aspect_count = match count_aspects(p, opts.aspect_grid) {
        Ok(a) => Some(a.count),
        Err(e) => {
            check("aspects", e)?;
            None
        }
    };
    let region_census = match opts.census_n.map(|g| region_census(p, g)) {
        Some(Ok(c)) => Some(c),
        Some(Err(e)) => {
            check("census", e)?;
            None
        }
        None => None,
    };
    isolated.sort_by(|a, b| a.point.lex_cmp(&b.point));
    Ok(TopologySignature {
        cusps,
        nodes,
        isolated,
        aspect_count,
        has_hole: region_census.as_ref().is_some_and(|c| c.has_hole),
        region_census,
        lines: trace_lines(p, opts.trace_n.min(512)),
        branches,
        failed_checks: failed,
    })
}

/// Orders points lexicographically by `(ρ, z)`.
pub fn lex_order(a: &CrossSectionPoint, b: &CrossSectionPoint) -> Ordering {
    a.lex_cmp(b)
}

/// Nonzero winding number test against a closed polyline.
pub fn winding_number(poly: &[CrossSectionPoint], q: &CrossSectionPoint) -> i32 {
    let n = poly.len();
    let mut w = 0;
    for k in 0..n {
        let (a, b) = (poly[k], poly[(k + 1) % n]);
        let side = (b.rho - a.rho) * (q.z - a.z) - (q.rho - a.rho) * (b.z - a.z);
        if a.z <= q.z {
            if b.z > q.z && side > 0.0 {
                w += 1;
            }
        } else if b.z <= q.z && side < 0.0 {
            w -= 1;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(d3: f64, d4: f64, r2: f64) -> DesignParams {
        DesignParams::new(d3, d4, r2).unwrap()
    }

    fn counts(p: &DesignParams, n: usize) -> (usize, usize) {
        let b = trace_s2(p, n).unwrap();
        let mut iso = isolated_points(p);
        let c = find_cusps(p, &b).unwrap();
        let nodes = find_nodes(p, &b, &mut iso, &c).unwrap();
        (c.len(), nodes.len())
    }

    #[test]
    fn cuspidal_cusps_and_nodes() {
        assert_eq!(counts(&params(2.0, 1.5, 1.0), 2048), (4, 0));
    }

    #[test]
    fn noded_cusps_and_nodes() {
        let p = params(3.0, 4.0, 2.0);
        let b = trace_s2(&p, 2048).unwrap();
        let mut iso = isolated_points(&p);
        let c = find_cusps(&p, &b).unwrap();
        let nodes = find_nodes(&p, &b, &mut iso, &c).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(nodes.len(), 3);
        let on_axis: Vec<_> = nodes.iter().filter(|q| q.z.abs() < 1e-9).collect();
        assert_eq!(on_axis.len(), 1);
        assert_relative_eq!(on_axis[0].rho, 4.7522, epsilon = 1e-4);
        assert_eq!(iso.iter().filter(|i| i.coincides_with_node).count(), 1);
    }

    #[test]
    fn domain_one_and_wt2() {
        assert_eq!(counts(&params(2.0, 0.1, 1.0), 1024), (0, 0));
        assert_eq!(counts(&params(2.0, 0.5, 1.0), 2048), (4, 2));
    }

    #[test]
    fn resolution_stable() {
        let p = params(2.0, 3.0, 1.0);
        assert_eq!(counts(&p, 1024), counts(&p, 2048));
        assert_eq!(counts(&p, 2048), (4, 4));
    }

    #[test]
    fn coarse_trace_rejected() {
        let p = params(2.0, 1.5, 1.0);
        let b = trace_s2(&p, 512).unwrap();
        assert!(find_cusps(&p, &b).is_err());
    }

    #[test]
    fn cluster_helpers() {
        let r = |x: f64| Complex64::new(x, 0.0);
        let (w, gap) = triple_cluster(&[r(0.5), r(0.5 + 1e-6), r(0.5 - 1e-6), r(-0.3)]);
        assert!(w < 1e-5 && gap > 0.5);
        let (w, gap) = double_pairs(&[r(0.1), r(0.7), r(0.1 + 1e-7), r(0.7 - 1e-7)]);
        assert!(w < 1e-6 && gap > 0.4);
    }

    #[test]
    fn census_cuspidal() {
        let c = region_census(&params(2.0, 1.5, 1.0), 200).unwrap();
        assert_eq!(c.count_with(2), 1);
        assert_eq!(c.count_with(4), 1);
        assert!(!c.has_hole);
    }

    #[test]
    fn census_noded() {
        let c = region_census(&params(3.0, 4.0, 2.0), 200).unwrap();
        assert_eq!(c.count_with(2), 2);
        assert_eq!(c.count_with(4), 2);
        assert!(!c.has_hole);
    }

    #[test]
    fn census_hole() {
        let c = region_census(&params(2.0, 0.1, 1.0), 200).unwrap();
        assert!(c.has_hole);
        assert_eq!(c.count_with(4), 0);
        assert!(region_census(&params(2.0, 0.5, 1.0), 200).unwrap().has_hole);
    }

    #[test]
    fn winding() {
        let sq = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].map(|(r, z)| CrossSectionPoint::new(r, z));
        assert_eq!(winding_number(&sq, &CrossSectionPoint::new(0.5, 0.5)).abs(), 1);
        assert_eq!(winding_number(&sq, &CrossSectionPoint::new(1.5, 0.5)), 0);
    }
}
