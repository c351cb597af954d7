//! Position kinematics of the 3R orthogonal family with zero last-joint offset.
//!
//! Lengths are normalized so that `d2 = 1`. The chain uses modified DH
//! parameters with twists `α2 = -90°`, `α3 = +90°`, `r3 = 0` and the operation
//! point at `(d4, 0, 0)` in frame 3, which gives
//!
//! ```text
//! u  = d3 + cos θ3 · d4          v  = sin θ3 · d4 + r2
//! px = 1 + cos θ2 · u            py = v
//! x  = cos θ1 · px - sin θ1 · py
//! y  = sin θ1 · px + cos θ1 · py
//! z  = -sin θ2 · u
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Twist between joint axes 1 and 2.
pub const ALPHA2: f64 = -PI / 2.0;
/// Twist between joint axes 2 and 3.
pub const ALPHA3: f64 = PI / 2.0;

/// Relative tolerance under which `d3` and `d4` are treated as equal.
pub const EQUAL_LENGTH_TOL: f64 = 1e-7;

/// Wraps an angle into `[-π, π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = a - two_pi * ((a + PI) / two_pi).floor();
    if r >= PI {
        r -= two_pi;
    }
    if r < -PI {
        r += two_pi;
    }
    r
}

/// Absolute difference of two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    normalize_angle(a - b).abs()
}

/// Normalized design parameters (`d2 = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignParams {
    d3: f64,
    d4: f64,
    r2: f64,
}

impl DesignParams {
    pub fn new(d3: f64, d4: f64, r2: f64) -> Result<Self> {
        for (name, v) in [("d3", d3), ("d4", d4), ("r2", r2)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(DesignParams { d3, d4, r2 })
    }

    /// Normalizes raw lengths by `d2`.
    pub fn from_raw(d2: f64, d3: f64, d4: f64, r2: f64) -> Result<Self> {
        if !d2.is_finite() || d2 <= 0.0 {
            return Err(Error::InvalidParams(format!("d2 must be finite and > 0, got {d2}")));
        }
        DesignParams::new(d3 / d2, d4 / d2, r2 / d2)
    }

    pub fn d3(&self) -> f64 {
        self.d3
    }

    pub fn d4(&self) -> f64 {
        self.d4
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    /// Upper bound on the distance of the operation point from the base axis
    /// and on `|z|`.
    pub fn reach_bound(&self) -> f64 {
        1.0 + self.d3 + self.d4 + self.r2
    }

    /// `true` when `d3` and `d4` coincide within [`EQUAL_LENGTH_TOL`].
    pub fn has_equal_lengths(&self) -> bool {
        (self.d3 - self.d4).abs() <= EQUAL_LENGTH_TOL * self.d3.max(self.d4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointConfig {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl JointConfig {
    /// Builds a configuration with every angle wrapped into `[-π, π)`.
    pub fn new(theta1: f64, theta2: f64, theta3: f64) -> Self {
        JointConfig {
            theta1: normalize_angle(theta1),
            theta2: normalize_angle(theta2),
            theta3: normalize_angle(theta3),
        }
    }

    pub fn normalized(&self) -> Self {
        JointConfig::new(self.theta1, self.theta2, self.theta3)
    }

    /// Largest per-joint angular distance.
    pub fn distance(&self, other: &JointConfig) -> f64 {
        angle_distance(self.theta1, other.theta1)
            .max(angle_distance(self.theta2, other.theta2))
            .max(angle_distance(self.theta3, other.theta3))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpatialPoint {
    pub fn cross_section(&self) -> CrossSectionPoint {
        CrossSectionPoint { rho: self.x.hypot(self.y), z: self.z }
    }
}

/// A point of the half cross-section of the workspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossSectionPoint {
    pub rho: f64,
    pub z: f64,
}

impl CrossSectionPoint {
    pub fn new(rho: f64, z: f64) -> Self {
        CrossSectionPoint { rho, z }
    }

    pub fn distance(&self, other: &CrossSectionPoint) -> f64 {
        (self.rho - other.rho).hypot(self.z - other.z)
    }

    /// The spatial point at `θ1`-angle zero of the section plane.
    pub fn to_spatial(&self) -> SpatialPoint {
        SpatialPoint { x: self.rho, y: 0.0, z: self.z }
    }

    pub(crate) fn lex_cmp(&self, other: &CrossSectionPoint) -> std::cmp::Ordering {
        self.rho.total_cmp(&other.rho).then(self.z.total_cmp(&other.z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplicity {
    Generic,
    /// The target lies on an isolated singular point: `θ2` is free.
    Infinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IkSolutionSet {
    pub solutions: Vec<JointConfig>,
    pub multiplicity: Multiplicity,
}

impl IkSolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        self.multiplicity == Multiplicity::Infinite
    }

    pub fn contains(&self, q: &JointConfig, tol: f64) -> bool {
        self.solutions.iter().any(|s| s.distance(q) <= tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IkTolerances {
    /// Joint-space deduplication radius (rad).
    pub dedup: f64,
    /// Bound on `|c2² + s2² - 1|` for accepting a candidate `θ3`.
    pub consistency: f64,
    /// `|u|` below which a root cannot determine `θ2`.
    pub u_zero: f64,
    /// Relative tolerance for matching a target with an isolated singular point.
    pub isolated_point: f64,
}

impl Default for IkTolerances {
    fn default() -> Self {
        IkTolerances { dedup: 1e-7, consistency: 1e-8, u_zero: 1e-10, isolated_point: 1e-9 }
    }
}

struct Trig {
    c2: f64,
    s2: f64,
    c3: f64,
    s3: f64,
}

impl Trig {
    fn new(theta2: f64, theta3: f64) -> Self {
        let (s2, c2) = theta2.sin_cos();
        let (s3, c3) = theta3.sin_cos();
        Trig { c2, s2, c3, s3 }
    }
}

/// Position of the operation point in the base frame.
pub fn forward_kinematics(p: &DesignParams, q: &JointConfig) -> SpatialPoint {
    let (s1, c1) = q.theta1.sin_cos();
    let t = Trig::new(q.theta2, q.theta3);
    let u = p.d3 + t.c3 * p.d4;
    let px = 1.0 + t.c2 * u;
    let py = t.s3 * p.d4 + p.r2;
    SpatialPoint { x: c1 * px - s1 * py, y: s1 * px + c1 * py, z: -t.s2 * u }
}

/// Image of `(θ2, θ3)` in the half cross-section; independent of `θ1`.
pub fn reduced_fk(p: &DesignParams, theta2: f64, theta3: f64) -> CrossSectionPoint {
    let t = Trig::new(theta2, theta3);
    let u = p.d3 + t.c3 * p.d4;
    let v = t.s3 * p.d4 + p.r2;
    CrossSectionPoint { rho: (1.0 + t.c2 * u).hypot(v), z: -t.s2 * u }
}

/// `∂(ρ, z)/∂(θ2, θ3)` as rows `[∂ρ/∂θ2, ∂ρ/∂θ3]`, `[∂z/∂θ2, ∂z/∂θ3]`.
pub fn reduced_jacobian(p: &DesignParams, theta2: f64, theta3: f64) -> [[f64; 2]; 2] {
    let t = Trig::new(theta2, theta3);
    let u = p.d3 + t.c3 * p.d4;
    let v = t.s3 * p.d4 + p.r2;
    let du = -t.s3 * p.d4;
    let dv = t.c3 * p.d4;
    let px = 1.0 + t.c2 * u;
    let rho = px.hypot(v);
    [[px * (-t.s2 * u) / rho, (px * t.c2 * du + v * dv) / rho], [-t.c2 * u, -t.s2 * du]]
}

/// First factor of the Jacobian determinant, `d3 + cos θ3 · d4`.
pub fn det_first_factor(p: &DesignParams, theta3: f64) -> f64 {
    p.d3 + theta3.cos() * p.d4
}

/// Second factor, `sin θ3 + cos θ2 · (sin θ3 · d3 - cos θ3 · r2)` (with `d2 = 1`).
pub fn det_second_factor(p: &DesignParams, theta2: f64, theta3: f64) -> f64 {
    let t = Trig::new(theta2, theta3);
    t.s3 + t.c2 * (t.s3 * p.d3 - t.c3 * p.r2)
}

/// Closed-form Jacobian determinant (independent of `θ1`).
pub fn jacobian_det(p: &DesignParams, q: &JointConfig) -> f64 {
    det_first_factor(p, q.theta3) * det_second_factor(p, q.theta2, q.theta3)
}

/// Central-difference determinant of `∂(x, y, z)/∂(θ1, θ2, θ3)`.
pub fn numeric_jacobian_det(p: &DesignParams, q: &JointConfig, h: f64) -> f64 {
    let base = [q.theta1, q.theta2, q.theta3];
    let mut cols = [[0.0; 3]; 3];
    for (j, col) in cols.iter_mut().enumerate() {
        let mut plus = base;
        let mut minus = base;
        plus[j] += h;
        minus[j] -= h;
        let fp = forward_kinematics(p, &JointConfig { theta1: plus[0], theta2: plus[1], theta3: plus[2] });
        let fm = forward_kinematics(p, &JointConfig { theta1: minus[0], theta2: minus[1], theta3: minus[2] });
        *col = [(fp.x - fm.x) / (2.0 * h), (fp.y - fm.y) / (2.0 * h), (fp.z - fm.z) / (2.0 * h)];
    }
    let [a, b, c] = cols;
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// `θ3` values where the first determinant factor vanishes, `±arccos(-d3/d4)`.
/// Empty when `d3 > d4`; a single `π` when the lengths are equal.
pub fn first_factor_angles(p: &DesignParams) -> Vec<f64> {
    if p.has_equal_lengths() {
        return vec![-PI];
    }
    if p.d3 > p.d4 {
        return Vec::new();
    }
    let a = (-p.d3 / p.d4).acos();
    vec![a, -a]
}

/// Workspace image of the line `θ3 = theta3` when the first factor vanishes.
pub fn isolated_image(p: &DesignParams, theta3: f64) -> CrossSectionPoint {
    let v = theta3.sin() * p.d4 + p.r2;
    CrossSectionPoint { rho: 1.0f64.hypot(v), z: 0.0 }
}

/// Trigonometric form of the inverse-kinematics condition at a target:
/// `G(θ3) = (K - 2 d4 (d3 c3 + r2 s3))² + 4 z² - 4 (d3 + d4 c3)²`.
fn ik_trig(p: &DesignParams, k: f64, z: f64, theta3: f64) -> (f64, f64) {
    let (s3, c3) = theta3.sin_cos();
    let a = k - 2.0 * p.d4 * (p.d3 * c3 + p.r2 * s3);
    let da = -2.0 * p.d4 * (-p.d3 * s3 + p.r2 * c3);
    let b = p.d3 + p.d4 * c3;
    let db = -p.d4 * s3;
    (a * a + 4.0 * z * z - 4.0 * b * b, 2.0 * a * da - 8.0 * b * db)
}

/// Coefficients (ascending powers of `t = tan(θ3/2)`) of the quartic whose real
/// roots are the `θ3` values of the inverse kinematic solutions at `target`.
///
/// A root at `θ3 = π` corresponds to a vanishing leading coefficient.
pub fn ik_polynomial(p: &DesignParams, target: &CrossSectionPoint) -> Result<[f64; 5]> {
    let (d3, d4, r2) = (p.d3, p.d4, p.r2);
    let r_sq = target.rho * target.rho + target.z * target.z;
    let k = r_sq - 1.0 - d3 * d3 - d4 * d4 - r2 * r2;
    let w = Poly::new(vec![1.0, 0.0, 1.0]);
    // (K - 2 d4 (d3 c3 + r2 s3)) (1 + t²)
    let a = Poly::new(vec![k - 2.0 * d4 * d3, -4.0 * d4 * r2, k + 2.0 * d4 * d3]);
    // (d3 + d4 c3) (1 + t²)
    let b = Poly::new(vec![d3 + d4, 0.0, d3 - d4]);
    let q = a.mul(&a).add(&w.mul(&w).scale(4.0 * target.z * target.z)).add(&b.mul(&b).scale(-4.0));
    let mut out = [0.0; 5];
    for (o, c) in out.iter_mut().zip(q.coeffs()) {
        *o = *c;
    }
    if out.iter().all(|&c| c == 0.0) {
        return Err(Error::DegenerateQuartic);
    }
    Ok(out)
}

/// Evaluates the quartic at `θ3` after scaling the coefficients to unit
/// maximum magnitude. Returns the residual in whichever of the `tan(θ3/2)` or
/// `cot(θ3/2)` charts keeps the variable bounded by one.
pub fn quartic_residual(coeffs: &[f64; 5], theta3: f64) -> f64 {
    let q = Poly::new(coeffs.to_vec()).normalized();
    let half = 0.5 * normalize_angle(theta3);
    if half.abs() <= PI / 4.0 {
        q.eval(half.tan())
    } else {
        let mut rev = q.coeffs().to_vec();
        rev.resize(5, 0.0);
        rev.reverse();
        Poly::new(rev).eval(1.0 / half.tan())
    }
}

/// Real roots `θ3 ∈ [-π, π)` of the inverse-kinematics quartic.
pub fn ik_theta3_roots(coeffs: &[f64; 5]) -> Vec<f64> {
    let q = Poly::new(coeffs.to_vec());
    let mut roots: Vec<f64> = q.real_roots_in(-1.0, 1.0).into_iter().map(|t| 2.0 * t.atan()).collect();
    let mut rev = coeffs.to_vec();
    rev.reverse();
    let qr = Poly::new(rev);
    roots.extend(qr.real_roots_in(-1.0, 1.0).into_iter().map(|s| normalize_angle(2.0 * 1f64.atan2(s))));
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| angle_distance(*a, *b) < 1e-12);
    roots
}

/// Inverse kinematics with default tolerances.
pub fn inverse_kinematics(p: &DesignParams, target: &SpatialPoint) -> IkSolutionSet {
    inverse_kinematics_with(p, target, &IkTolerances::default())
}

pub fn inverse_kinematics_with(p: &DesignParams, target: &SpatialPoint, tol: &IkTolerances) -> IkSolutionSet {
    let section = target.cross_section();
    let r_sq = section.rho * section.rho + section.z * section.z;
    let k = r_sq - 1.0 - p.d3 * p.d3 - p.d4 * p.d4 - p.r2 * p.r2;
    let scale = 1.0 + r_sq;

    let mut multiplicity = Multiplicity::Generic;
    let mut line_angles = Vec::new();
    for theta3 in first_factor_angles(p) {
        let img = isolated_image(p, theta3);
        let rho_eq = (section.rho * section.rho - img.rho * img.rho).abs();
        if section.z.abs() <= tol.isolated_point * scale && rho_eq <= tol.isolated_point * scale {
            multiplicity = Multiplicity::Infinite;
            line_angles.push(theta3);
        }
    }

    let coeffs = match ik_polynomial(p, &section) {
        Ok(c) => c,
        Err(_) => {
            return IkSolutionSet { solutions: Vec::new(), multiplicity: Multiplicity::Infinite };
        }
    };

    let mut solutions: Vec<JointConfig> = Vec::new();
    for root in ik_theta3_roots(&coeffs) {
        if line_angles.iter().any(|&a| angle_distance(a, root) < 1e-5) {
            continue;
        }
        let theta3 = polish_theta3(p, k, section.z, root);
        let (s3, c3) = theta3.sin_cos();
        let u = p.d3 + c3 * p.d4;
        if u.abs() <= tol.u_zero {
            continue;
        }
        let v = s3 * p.d4 + p.r2;
        let c2 = (r_sq - 1.0 - u * u - v * v) / (2.0 * u);
        let s2 = -section.z / u;
        if (c2 * c2 + s2 * s2 - 1.0).abs() >= tol.consistency {
            continue;
        }
        let theta2 = s2.atan2(c2);
        let px = 1.0 + theta2.cos() * u;
        let theta1 = target.y.atan2(target.x) - v.atan2(px);
        let q = JointConfig::new(theta1, theta2, theta3);
        if !solutions.iter().any(|s| s.distance(&q) <= tol.dedup) {
            solutions.push(q);
        }
    }
    IkSolutionSet { solutions, multiplicity }
}

/// A few Newton steps on the trigonometric form; kept only while they help.
fn polish_theta3(p: &DesignParams, k: f64, z: f64, theta3: f64) -> f64 {
    let mut best = theta3;
    let mut best_val = ik_trig(p, k, z, theta3).0.abs();
    let mut x = theta3;
    for _ in 0..4 {
        let (g, dg) = ik_trig(p, k, z, x);
        if dg == 0.0 || !dg.is_finite() {
            break;
        }
        let next = x - g / dg;
        if (next - x).abs() > 1e-6 {
            break;
        }
        let val = ik_trig(p, k, z, next).0.abs();
        if val < best_val {
            best = next;
            best_val = val;
        }
        x = next;
    }
    normalize_angle(best)
}

/// Number of inverse kinematic solutions at a cross-section point, or `None`
/// when the point is an isolated singular point (infinitely many).
pub fn solution_count(p: &DesignParams, target: &CrossSectionPoint) -> Option<usize> {
    let set = inverse_kinematics(p, &target.to_spatial());
    if set.is_infinite() {
        None
    } else {
        Some(set.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cuspidal() -> DesignParams {
        DesignParams::new(2.0, 1.5, 1.0).unwrap()
    }

    fn noded() -> DesignParams {
        DesignParams::new(3.0, 4.0, 2.0).unwrap()
    }

    #[test]
    fn rejects_nonpositive_lengths() {
        assert!(DesignParams::new(0.0, 1.0, 1.0).is_err());
        assert!(DesignParams::new(1.0, -1.0, 1.0).is_err());
        assert!(DesignParams::new(1.0, 1.0, f64::NAN).is_err());
        assert!(DesignParams::from_raw(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn raw_normalization() {
        let p = DesignParams::from_raw(2.0, 6.0, 8.0, 4.0).unwrap();
        assert_eq!(p, noded());
    }

    #[test]
    fn normalize_angle_range_and_idempotence() {
        for a in [-7.0, -PI, -1.0, 0.0, 3.0, PI, 12.5] {
            let n = normalize_angle(a);
            assert!((-PI..PI).contains(&n), "{a} -> {n}");
            assert_eq!(normalize_angle(n), n);
        }
        assert_eq!(normalize_angle(PI), -PI);
    }

    #[test]
    fn fk_zero_configuration() {
        let s = forward_kinematics(&cuspidal(), &JointConfig::new(0.0, 0.0, 0.0));
        assert_relative_eq!(s.x, 4.5, epsilon = 1e-15);
        assert_relative_eq!(s.y, 1.0, epsilon = 1e-15);
        assert_relative_eq!(s.z, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn fk_base_rotation_preserves_section() {
        let p = cuspidal();
        let q = JointConfig::new(0.3, -1.1, 2.2);
        let q2 = JointConfig::new(0.3 + PI, -1.1, 2.2);
        let a = forward_kinematics(&p, &q);
        let b = forward_kinematics(&p, &q2);
        assert_relative_eq!(a.x, -b.x, epsilon = 1e-12);
        assert_relative_eq!(a.y, -b.y, epsilon = 1e-12);
        assert_relative_eq!(a.cross_section().rho, b.cross_section().rho, epsilon = 1e-12);
        assert_relative_eq!(a.z, b.z, epsilon = 1e-12);
    }

    #[test]
    fn fk_on_first_factor_line() {
        let p = noded();
        let t3 = (-0.75f64).acos();
        let s = forward_kinematics(&p, &JointConfig::new(0.0, 0.0, t3));
        assert!(s.z.abs() < 1e-12);
        let expected = (1.0 + (t3.sin() * 4.0 + 2.0).powi(2)).sqrt();
        assert_relative_eq!(s.cross_section().rho, expected, epsilon = 1e-12);
        assert_relative_eq!(expected, 4.7522, epsilon = 1e-4);
    }

    #[test]
    fn reduced_fk_examples() {
        let c = reduced_fk(&cuspidal(), 0.0, 0.0);
        assert_relative_eq!(c.rho, 4.5f64.hypot(1.0), epsilon = 1e-14);
        assert_relative_eq!(c.rho, 4.6098, epsilon = 1e-4);
        let t3 = (-0.75f64).acos();
        for t2 in [-2.0, 0.1, 1.3] {
            assert!(reduced_fk(&noded(), t2, t3).z.abs() < 1e-12);
            assert!(reduced_fk(&noded(), t2, -t3).z.abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_fk_matches_fk_for_all_theta1() {
        let p = noded();
        for t1 in [-3.0, -0.5, 0.0, 2.0] {
            let s = forward_kinematics(&p, &JointConfig::new(t1, 0.7, -2.1));
            let c = reduced_fk(&p, 0.7, -2.1);
            assert_relative_eq!(s.cross_section().rho, c.rho, epsilon = 1e-12);
            assert_relative_eq!(s.z, c.z, epsilon = 1e-12);
        }
    }

    #[test]
    fn jacobian_det_examples() {
        let p = cuspidal();
        assert_relative_eq!(jacobian_det(&p, &JointConfig::new(0.0, 0.0, 0.0)), -3.5, epsilon = 1e-14);
        for t2 in [-2.0, 0.0, 1.0, 2.5] {
            let d = jacobian_det(&p, &JointConfig::new(0.0, t2, PI / 2.0));
            assert_relative_eq!(d, 2.0 * (1.0 + 2.0 * t2.cos()), epsilon = 1e-12);
        }
        let z = jacobian_det(&p, &JointConfig::new(0.0, 2.0 * PI / 3.0, PI / 2.0));
        assert!(z.abs() < 1e-12);
        let t3 = (-0.75f64).acos();
        assert!(jacobian_det(&noded(), &JointConfig::new(0.0, 1.234, t3)).abs() < 1e-12);
    }

    #[test]
    fn numeric_det_vanishes_on_first_factor_line() {
        let t3 = (-0.75f64).acos();
        let h = 1e-4;
        let d = numeric_jacobian_det(&noded(), &JointConfig::new(0.2, 0.9, t3), h);
        assert!(d.abs() < 100.0 * h * h, "{d}");
    }

    #[test]
    fn numeric_det_second_order_convergence() {
        let p = noded();
        let q = JointConfig::new(0.1, 0.8, 1.0);
        let exact = p.d4() * jacobian_det(&p, &q);
        let e1 = (numeric_jacobian_det(&p, &q, 1e-2) - exact).abs();
        let e2 = (numeric_jacobian_det(&p, &q, 5e-3) - exact).abs();
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn first_factor_angles_cases() {
        assert!(first_factor_angles(&cuspidal()).is_empty());
        let a = first_factor_angles(&noded());
        assert_eq!(a.len(), 2);
        assert_relative_eq!(a[0], 2.41886, epsilon = 1e-5);
        assert_relative_eq!(a[1], -2.41886, epsilon = 1e-5);
        let eq = DesignParams::new(2.0, 2.0, 1.0).unwrap();
        assert_eq!(first_factor_angles(&eq), vec![-PI]);
    }

    #[test]
    fn isolated_images_of_noded() {
        let p = noded();
        let a = first_factor_angles(&p);
        assert_relative_eq!(isolated_image(&p, a[0]).rho, 4.7522, epsilon = 1e-4);
        assert_relative_eq!(isolated_image(&p, a[1]).rho, 1.1903759, epsilon = 1e-7);
    }

    #[test]
    fn quartic_vanishes_at_known_solution() {
        let p = cuspidal();
        for (t2, t3) in [(0.4, 1.0), (-2.0, 0.3), (1.0, -2.9), (2.5, 3.0)] {
            let target = reduced_fk(&p, t2, t3);
            let c = ik_polynomial(&p, &target).unwrap();
            assert!(quartic_residual(&c, t3).abs() < 1e-12, "{t2} {t3}");
        }
    }

    #[test]
    fn theta3_pi_root_via_reciprocal_chart() {
        let p = cuspidal();
        let q = JointConfig::new(0.4, 0.7, PI);
        let set = inverse_kinematics(&p, &forward_kinematics(&p, &q));
        assert!(set.contains(&q, 1e-9), "{set:?}");
    }

    #[test]
    fn unreachable_target_is_empty() {
        let p = cuspidal();
        let far = SpatialPoint { x: 20.0, y: 0.0, z: 3.0 };
        assert!(inverse_kinematics(&p, &far).is_empty());
    }

    #[test]
    fn roundtrip_and_even_counts() {
        let p = cuspidal();
        for (t1, t2, t3) in [(0.0, 0.3, 0.2), (1.0, -1.0, 2.0), (-2.0, 2.8, -1.3), (0.5, 1.7, -0.4)] {
            let q = JointConfig::new(t1, t2, t3);
            let set = inverse_kinematics(&p, &forward_kinematics(&p, &q));
            assert!(set.contains(&q, 1e-8), "{q:?} {set:?}");
            assert!(set.len() == 2 || set.len() == 4, "{}", set.len());
        }
    }

    #[test]
    fn infinite_flag_at_isolated_point() {
        let p = noded();
        let t3 = (-0.75f64).acos();
        for t1 in [0.0, 1.2, -2.7] {
            let target = forward_kinematics(&p, &JointConfig::new(t1, 0.5, t3));
            let set = inverse_kinematics(&p, &target);
            assert!(set.is_infinite());
        }
        let generic = forward_kinematics(&p, &JointConfig::new(0.0, 0.5, 1.0));
        assert!(!inverse_kinematics(&p, &generic).is_infinite());
    }

    #[test]
    fn isolated_point_is_double_root_not_degenerate() {
        // The odd coefficients vanish together only if d3·d4 = 0, so the
        // quartic never degenerates for valid parameters; the line angle is a
        // double root instead.
        let p = noded();
        let t3 = (-0.75f64).acos();
        let c = ik_polynomial(&p, &isolated_image(&p, t3)).unwrap();
        let q = Poly::new(c.to_vec()).normalized();
        let t = (0.5 * t3).tan();
        assert!(q.eval(t).abs() < 1e-12);
        assert!(q.derivative().eval(t).abs() < 1e-10);
    }
}
