//! Singular sets in the joint torus `(θ2, θ3)` and their workspace images.
//!
//! The determinant factors as `(d3 + c3 d4) · (s3 + c2 (s3 d3 - c3 r2))`. The
//! second factor vanishes on two closed curves, obtained in solved form
//! `cos θ2 = -s3 / (s3 d3 - c3 r2)`; their images are the internal boundary
//! WS1 and the external boundary WS2. The first factor vanishes on the
//! horizontal lines `θ3 = ±arccos(-d3/d4)` (only when `d3 ≤ d4`), each of
//! which collapses onto a single isolated point of the cross-section.

use std::collections::VecDeque;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{
    angle_distance, det_first_factor, det_second_factor, first_factor_angles, isolated_image, normalize_angle,
    reduced_fk, reduced_jacobian, CrossSectionPoint, DesignParams,
};

/// Smallest accepted number of samples per traced loop.
pub const MIN_TRACE_SAMPLES: usize = 256;
/// Smallest accepted aspect grid.
pub const MIN_ASPECT_GRID: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointPoint {
    pub theta2: f64,
    pub theta3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchKind {
    /// Zero set of the second determinant factor.
    Curve,
    /// `θ3 = +arccos(-d3/d4)`.
    LinePlus,
    /// `θ3 = -arccos(-d3/d4)`.
    LineMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// WS1, image of S1.
    Internal,
    /// WS2, image of S2.
    External,
}

/// One closed curve of the second-factor zero set.
///
/// It lives over the admissible `θ3` arc `[start, end]` (unwrapped, so
/// `end > start`). The loop parameter `s ∈ [0, 2)` runs along the branch
/// `θ2 = +arccos(c*)` for `s < 1` and back along `θ2 = -arccos(c*)`; `θ3` is
/// spaced with a cosine law so that `θ2` moves linearly near the arc ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveLoop {
    pub start: f64,
    pub end: f64,
}

impl CurveLoop {
    /// The two loops of the second-factor zero set. The arc ends are the
    /// solutions of `tan θ3 = r2/(d3 ± 1)`, where `cos θ2 = ±1`.
    pub fn pair(p: &DesignParams) -> [CurveLoop; 2] {
        let a_minus = p.r2().atan2(p.d3() - 1.0);
        let a_plus = p.r2().atan2(p.d3() + 1.0);
        [CurveLoop { start: a_minus, end: a_plus + PI }, CurveLoop { start: a_minus + PI, end: a_plus + 2.0 * PI }]
    }

    pub fn contains_theta3(&self, theta3: f64) -> bool {
        let mut t = theta3;
        while t < self.start {
            t += 2.0 * PI;
        }
        while t > self.start + 2.0 * PI {
            t -= 2.0 * PI;
        }
        t <= self.end
    }

    fn theta3_at(&self, s: f64) -> (f64, f64) {
        let span = self.end - self.start;
        if s < 1.0 {
            (self.start + span * 0.5 * (1.0 - (PI * s).cos()), 1.0)
        } else {
            (self.end - span * 0.5 * (1.0 - (PI * (s - 1.0)).cos()), -1.0)
        }
    }

    /// Joint-space point at loop parameter `s` (taken modulo 2).
    pub fn point(&self, p: &DesignParams, s: f64) -> JointPoint {
        let s = s.rem_euclid(2.0);
        let (theta3, branch) = self.theta3_at(s);
        let theta2 = branch * curve_cos_theta2(p, theta3).clamp(-1.0, 1.0).acos();
        JointPoint { theta2: normalize_angle(theta2), theta3: normalize_angle(theta3) }
    }

    pub fn image(&self, p: &DesignParams, s: f64) -> CrossSectionPoint {
        let j = self.point(p, s);
        reduced_fk(p, j.theta2, j.theta3)
    }

    /// Unit tangent of the loop in the torus, oriented with increasing `s`.
    pub fn tangent(&self, p: &DesignParams, s: f64) -> [f64; 2] {
        let j = self.point(p, s);
        let (s2, c2) = j.theta2.sin_cos();
        let (s3, c3) = j.theta3.sin_cos();
        let w = s3 * p.d3() - c3 * p.r2();
        let f_t2 = -s2 * w;
        let f_t3 = c3 + c2 * (c3 * p.d3() + s3 * p.r2());
        let mut t = [-f_t3, f_t2];
        let n = t[0].hypot(t[1]);
        if n > 0.0 {
            t = [t[0] / n, t[1] / n];
        }
        let h = 1e-6;
        let a = self.point(p, s - h);
        let b = self.point(p, s + h);
        let chord = [normalize_angle(b.theta2 - a.theta2), normalize_angle(b.theta3 - a.theta3)];
        if t[0] * chord[0] + t[1] * chord[1] < 0.0 {
            t = [-t[0], -t[1]];
        }
        t
    }

    /// Velocity of the workspace image along the unit torus tangent. It
    /// vanishes exactly at cusps, where it also reverses direction.
    pub fn image_velocity(&self, p: &DesignParams, s: f64) -> [f64; 2] {
        let j = self.point(p, s);
        let m = reduced_jacobian(p, j.theta2, j.theta3);
        let t = self.tangent(p, s);
        [m[0][0] * t[0] + m[0][1] * t[1], m[1][0] * t[0] + m[1][1] * t[1]]
    }
}

/// `c* = -s3 / (s3 d3 - c3 r2)`, the value of `cos θ2` on the second-factor set.
pub fn curve_cos_theta2(p: &DesignParams, theta3: f64) -> f64 {
    let (s3, c3) = theta3.sin_cos();
    -s3 / (s3 * p.d3() - c3 * p.r2())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularBranch {
    pub kind: BranchKind,
    /// Set for curves only.
    pub boundary: Option<Boundary>,
    /// Admissible `θ3` arc for curves.
    pub arc: Option<CurveLoop>,
    pub joint_polyline: Vec<JointPoint>,
    pub workspace_polyline: Vec<CrossSectionPoint>,
}

impl SingularBranch {
    /// Loop parameter of vertex `i` of a curve branch.
    pub fn param(&self, i: usize) -> f64 {
        2.0 * i as f64 / self.joint_polyline.len() as f64
    }

    pub fn is_curve(&self) -> bool {
        self.kind == BranchKind::Curve
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineSign {
    Plus,
    Minus,
    /// `d3 = d4`: both lines merge at `θ3 = π`.
    Merged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct S1Line {
    pub theta3: f64,
    pub sign: LineSign,
    pub nongeneric: bool,
}

/// Horizontal singular lines where the first determinant factor vanishes.
pub fn s1_lines(p: &DesignParams) -> Vec<S1Line> {
    let angles = first_factor_angles(p);
    if p.has_equal_lengths() {
        return vec![S1Line { theta3: angles[0], sign: LineSign::Merged, nongeneric: true }];
    }
    angles
        .into_iter()
        .zip([LineSign::Plus, LineSign::Minus])
        .map(|(theta3, sign)| S1Line { theta3, sign, nongeneric: false })
        .collect()
}

/// Traces both loops of the second-factor zero set with `n_samples` vertices
/// each (rounded up to even), labelled internal/external by maximal reach.
pub fn trace_s2(p: &DesignParams, n_samples: usize) -> Result<Vec<SingularBranch>> {
    if n_samples < MIN_TRACE_SAMPLES {
        return Err(Error::InvalidArgument(format!("trace resolution {n_samples} is below {MIN_TRACE_SAMPLES}")));
    }
    let n = n_samples + n_samples % 2;
    let mut branches: Vec<SingularBranch> = CurveLoop::pair(p)
        .into_iter()
        .map(|lp| {
            let joint: Vec<JointPoint> = (0..n).map(|i| lp.point(p, 2.0 * i as f64 / n as f64)).collect();
            let work = joint.iter().map(|j| reduced_fk(p, j.theta2, j.theta3)).collect();
            SingularBranch {
                kind: BranchKind::Curve,
                boundary: None,
                arc: Some(lp),
                joint_polyline: joint,
                workspace_polyline: work,
            }
        })
        .collect();
    let reach = |b: &SingularBranch| {
        b.workspace_polyline.iter().map(|c| c.rho * c.rho + c.z * c.z).fold(f64::NEG_INFINITY, f64::max)
    };
    let outer = if reach(&branches[0]) >= reach(&branches[1]) { 0 } else { 1 };
    branches[outer].boundary = Some(Boundary::External);
    branches[1 - outer].boundary = Some(Boundary::Internal);
    branches.sort_by_key(|b| b.boundary != Some(Boundary::Internal));
    Ok(branches)
}

/// The singular lines as joint-space polylines (for plotting).
pub fn trace_lines(p: &DesignParams, n_samples: usize) -> Vec<SingularBranch> {
    s1_lines(p)
        .into_iter()
        .map(|line| {
            let joint = (0..n_samples)
                .map(|i| JointPoint { theta2: -PI + 2.0 * PI * i as f64 / n_samples as f64, theta3: line.theta3 })
                .collect();
            SingularBranch {
                kind: if line.sign == LineSign::Minus { BranchKind::LineMinus } else { BranchKind::LinePlus },
                boundary: None,
                arc: None,
                joint_polyline: joint,
                workspace_polyline: vec![isolated_image(p, line.theta3)],
            }
        })
        .collect()
}

/// Points of the second-factor curves on the line `θ3 = theta3`, with the
/// boundary each belongs to.
pub fn line_curve_intersections(p: &DesignParams, theta3: f64) -> Vec<(Boundary, JointPoint)> {
    let c = curve_cos_theta2(p, theta3);
    if !c.is_finite() || c.abs() > 1.0 {
        return Vec::new();
    }
    let loops = CurveLoop::pair(p);
    let reach = |lp: &CurveLoop| {
        (0..64)
            .map(|i| {
                let q = lp.image(p, i as f64 / 32.0);
                q.rho * q.rho + q.z * q.z
            })
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let outer = if reach(&loops[0]) >= reach(&loops[1]) { 0 } else { 1 };
    let Some(k) = loops.iter().position(|lp| lp.contains_theta3(theta3)) else {
        return Vec::new();
    };
    let boundary = if k == outer { Boundary::External } else { Boundary::Internal };
    let a = c.acos();
    let mut out = vec![(boundary, JointPoint { theta2: a, theta3 })];
    if a > 0.0 && a < PI {
        out.push((boundary, JointPoint { theta2: -a, theta3 }));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsolatedPoint {
    pub point: CrossSectionPoint,
    pub theta3: f64,
    pub sign: LineSign,
    pub coincides_with_node: bool,
}

/// Workspace images of the singular lines. `coincides_with_node` is filled in
/// by the topology oracle.
pub fn isolated_points(p: &DesignParams) -> Vec<IsolatedPoint> {
    s1_lines(p)
        .into_iter()
        .map(|l| IsolatedPoint {
            point: isolated_image(p, l.theta3),
            theta3: l.theta3,
            sign: l.sign,
            coincides_with_node: false,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AspectCount {
    pub count: usize,
    pub component_seeds: Vec<JointPoint>,
}

/// Connected components of the singularity-free torus at one resolution.
///
/// Cells are labelled by the sign pattern of the two determinant factors, so
/// regions that only touch at a crossing of two singular curves stay apart
/// and thin regions are not erased by a magnitude threshold. Cells where
/// either factor is numerically zero are walls.
pub fn aspects_on_grid(p: &DesignParams, grid: usize) -> AspectCount {
    let n = grid;
    let step = 2.0 * PI / n as f64;
    let center = |i: usize| -PI + (i as f64 + 0.5) * step;
    let f1_tol = 1e-12 * (p.d3() + p.d4());
    let f2_tol = 1e-12 * (1.0 + p.d3() + p.r2());
    // label: 0 = wall, 1..=4 = sign pattern
    let mut label = vec![0u8; n * n];
    let mut det_abs = vec![0.0f64; n * n];
    for j in 0..n {
        let t3 = center(j);
        let f1 = det_first_factor(p, t3);
        for i in 0..n {
            let t2 = center(i);
            let f2 = det_second_factor(p, t2, t3);
            let idx = j * n + i;
            det_abs[idx] = (f1 * f2).abs();
            if f1.abs() > f1_tol && f2.abs() > f2_tol {
                label[idx] = 1 + u8::from(f1 > 0.0) * 2 + u8::from(f2 > 0.0);
            }
        }
    }
    let mut comp = vec![usize::MAX; n * n];
    let mut seeds = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n * n {
        if label[start] == 0 || comp[start] != usize::MAX {
            continue;
        }
        let id = seeds.len();
        comp[start] = id;
        queue.push_back(start);
        let mut best = start;
        while let Some(c) = queue.pop_front() {
            if det_abs[c] > det_abs[best] {
                best = c;
            }
            let (i, j) = (c % n, c / n);
            let neighbours =
                [j * n + (i + 1) % n, j * n + (i + n - 1) % n, ((j + 1) % n) * n + i, ((j + n - 1) % n) * n + i];
            for nb in neighbours {
                if comp[nb] == usize::MAX && label[nb] == label[c] {
                    comp[nb] = id;
                    queue.push_back(nb);
                }
            }
        }
        seeds.push(JointPoint { theta2: center(best % n), theta3: center(best / n) });
    }
    AspectCount { count: seeds.len(), component_seeds: seeds }
}

/// Aspect count, checked for agreement between `grid` and `2 × grid`.
pub fn count_aspects(p: &DesignParams, grid: usize) -> Result<AspectCount> {
    if grid < MIN_ASPECT_GRID {
        return Err(Error::InvalidArgument(format!("aspect grid {grid} is below {MIN_ASPECT_GRID}")));
    }
    let coarse = aspects_on_grid(p, grid);
    let fine = aspects_on_grid(p, 2 * grid);
    if coarse.count != fine.count {
        return Err(Error::ResolutionInstability { grid, coarse: coarse.count, fine: fine.count });
    }
    Ok(coarse)
}

/// `true` if `theta3` lies within `tol` of one of the singular lines.
pub fn near_line(p: &DesignParams, theta3: f64, tol: f64) -> bool {
    first_factor_angles(p).iter().any(|&a| angle_distance(a, theta3) < tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{jacobian_det, JointConfig};
    use approx::assert_relative_eq;

    fn cuspidal() -> DesignParams {
        DesignParams::new(2.0, 1.5, 1.0).unwrap()
    }

    fn noded() -> DesignParams {
        DesignParams::new(3.0, 4.0, 2.0).unwrap()
    }

    #[test]
    fn s1_lines_cases() {
        assert!(s1_lines(&cuspidal()).is_empty());
        let l = s1_lines(&noded());
        assert_eq!(l.len(), 2);
        assert_relative_eq!(l[0].theta3, 2.41886, epsilon = 1e-5);
        assert_relative_eq!(l[1].theta3, -2.41886, epsilon = 1e-5);
        let eq = s1_lines(&DesignParams::new(2.0, 2.0, 1.0).unwrap());
        assert_eq!(eq.len(), 1);
        assert!(eq[0].nongeneric);
        assert_relative_eq!(eq[0].theta3.abs(), PI);
    }

    #[test]
    fn loop_arcs_are_admissible() {
        for p in [cuspidal(), noded(), DesignParams::new(0.5, 1.2, 0.3).unwrap()] {
            for lp in CurveLoop::pair(&p) {
                for k in 1..50 {
                    let t3 = lp.start + (lp.end - lp.start) * k as f64 / 50.0;
                    assert!(curve_cos_theta2(&p, t3).abs() <= 1.0 + 1e-12);
                }
                assert_relative_eq!(curve_cos_theta2(&p, lp.start).abs(), 1.0, epsilon = 1e-9);
                assert_relative_eq!(curve_cos_theta2(&p, lp.end).abs(), 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn traced_vertices_are_singular() {
        for p in [cuspidal(), noded()] {
            let branches = trace_s2(&p, 1024).unwrap();
            assert_eq!(branches.len(), 2);
            for b in &branches {
                for j in &b.joint_polyline {
                    let d = jacobian_det(&p, &JointConfig::new(0.0, j.theta2, j.theta3));
                    assert!(d.abs() < 1e-9, "{d}");
                }
            }
        }
    }

    #[test]
    fn theta3_zero_gives_quarter_turns() {
        let p = cuspidal();
        assert_eq!(curve_cos_theta2(&p, 0.0), 0.0);
        let pts = line_curve_intersections(&p, 0.0);
        assert_eq!(pts.len(), 2);
        assert_relative_eq!(pts[0].1.theta2.abs(), PI / 2.0);
    }

    #[test]
    fn loops_close_on_the_torus() {
        let p = noded();
        for lp in CurveLoop::pair(&p) {
            let a = lp.point(&p, 0.0);
            let b = lp.point(&p, 2.0 - 1e-9);
            assert!(angle_distance(a.theta2, b.theta2) < 1e-3);
            assert!(angle_distance(a.theta3, b.theta3) < 1e-3);
        }
    }

    #[test]
    fn too_coarse_trace_rejected() {
        assert!(trace_s2(&cuspidal(), 100).is_err());
        assert!(count_aspects(&cuspidal(), 64).is_err());
    }

    #[test]
    fn isolated_points_noded() {
        let pts = isolated_points(&noded());
        assert_eq!(pts.len(), 2);
        assert_relative_eq!(pts[0].point.rho, 4.7522, epsilon = 1e-4);
        assert_relative_eq!(pts[1].point.rho, 1.1903759, epsilon = 1e-7);
        assert!(pts.iter().all(|q| q.point.z == 0.0));
        assert!(isolated_points(&cuspidal()).is_empty());
    }

    #[test]
    fn aspect_counts() {
        assert_eq!(count_aspects(&cuspidal(), 256).unwrap().count, 2);
        assert_eq!(count_aspects(&noded(), 256).unwrap().count, 5);
        // WT7 instance: one aspect is a thin sliver near a line/curve crossing
        let wt7 = DesignParams::new(2.0, 3.0, 1.0).unwrap();
        assert_eq!(count_aspects(&wt7, 256).unwrap().count, 6);
        let wt8 = DesignParams::new(0.5, 1.2, 1.0).unwrap();
        assert_eq!(count_aspects(&wt8, 256).unwrap().count, 4);
    }

    #[test]
    fn aspect_seeds_are_regular() {
        let a = count_aspects(&noded(), 256).unwrap();
        for s in &a.component_seeds {
            assert!(jacobian_det(&noded(), &JointConfig::new(0.0, s.theta2, s.theta3)).abs() > 1e-6);
        }
    }
}
