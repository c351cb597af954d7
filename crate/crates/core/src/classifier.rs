//! Analytic classification from the separating surfaces.
//!
//! Every surface is a graph `d4 = f(d3, r2)`, so a design is located by
//! comparing `d4` with the surface levels evaluated at its `(d3, r2)`.
//!
//! | level | expression                                   | separates |
//! |-------|----------------------------------------------|-----------|
//! | C1    | `sqrt(½(q - (q² - d3² + r2²)/(A B)))`, `q = d3² + r2²` | domains 1/2 |
//! | C2    | `d3 A / (1 + d3)`                            | domains 2/3 |
//! | C3    | `d3 B / (d3 - 1)`, `d3 > 1`                  | domains 3/4 |
//! | C4    | `d3 B / (1 - d3)`, `d3 < 1`                  | domains 3/5 |
//! | E1    | `(A - B)/2`                                  | WT2/WT3   |
//! | E2    | `d3`                                         | WT3/WT4   |
//! | E3    | `(A + B)/2`                                  | WT5/WT6, WT8/WT9 |
//!
//! with `A = sqrt((d3 + 1)² + r2²)` and `B = sqrt((d3 - 1)² + r2²)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::DesignParams;

/// Default relative genericity tolerance on `d4`.
pub const DEFAULT_EPS: f64 = 1e-7;

/// Agreement required between the two routes to C1.
const C1_AGREEMENT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "WT1")]
    Wt1,
    #[serde(rename = "WT2")]
    Wt2,
    #[serde(rename = "WT3")]
    Wt3,
    #[serde(rename = "WT4")]
    Wt4,
    #[serde(rename = "WT5")]
    Wt5,
    #[serde(rename = "WT6")]
    Wt6,
    #[serde(rename = "WT7")]
    Wt7,
    #[serde(rename = "WT8")]
    Wt8,
    #[serde(rename = "WT9")]
    Wt9,
    NonGeneric,
}

impl Label {
    pub const WORKSPACE_TYPES: [Label; 9] =
        [Label::Wt1, Label::Wt2, Label::Wt3, Label::Wt4, Label::Wt5, Label::Wt6, Label::Wt7, Label::Wt8, Label::Wt9];

    pub fn name(&self) -> &'static str {
        match self {
            Label::Wt1 => "WT1",
            Label::Wt2 => "WT2",
            Label::Wt3 => "WT3",
            Label::Wt4 => "WT4",
            Label::Wt5 => "WT5",
            Label::Wt6 => "WT6",
            Label::Wt7 => "WT7",
            Label::Wt8 => "WT8",
            Label::Wt9 => "WT9",
            Label::NonGeneric => "NonGeneric",
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        Label::WORKSPACE_TYPES
            .iter()
            .chain(std::iter::once(&Label::NonGeneric))
            .copied()
            .find(|l| l.name().eq_ignore_ascii_case(s))
    }

    pub fn is_generic(&self) -> bool {
        *self != Label::NonGeneric
    }

    /// Cusp-count domain (1–5).
    pub fn domain(&self) -> Option<u8> {
        match self {
            Label::Wt1 => Some(1),
            Label::Wt2 | Label::Wt3 | Label::Wt4 => Some(2),
            Label::Wt5 | Label::Wt6 => Some(3),
            Label::Wt7 => Some(4),
            Label::Wt8 | Label::Wt9 => Some(5),
            Label::NonGeneric => None,
        }
    }

    pub fn expected_cusps(&self) -> Option<usize> {
        match self.domain()? {
            1 | 5 => Some(0),
            2 | 4 => Some(4),
            _ => Some(2),
        }
    }

    /// Node count where it is known; WT8/WT9 only differ by two.
    pub fn expected_nodes(&self) -> Option<usize> {
        match self {
            Label::Wt1 | Label::Wt3 => Some(0),
            Label::Wt2 | Label::Wt4 => Some(2),
            Label::Wt5 => Some(1),
            Label::Wt6 => Some(3),
            Label::Wt7 => Some(4),
            _ => None,
        }
    }

    /// Aspect count from the classification tree. WT4's value is implied by
    /// its branch (`d3 < d4`, `d4 < C2`) rather than listed, see
    /// [`Label::aspects_stated`].
    pub fn expected_aspects(&self) -> Option<usize> {
        match self {
            Label::Wt1 | Label::Wt2 | Label::Wt3 => Some(2),
            Label::Wt4 | Label::Wt7 => Some(6),
            Label::Wt5 | Label::Wt6 => Some(5),
            Label::Wt8 | Label::Wt9 => Some(4),
            Label::NonGeneric => None,
        }
    }

    pub fn aspects_stated(&self) -> bool {
        self.is_generic() && *self != Label::Wt4
    }

    /// Whether the workspace has a hole (a bounded unreachable region).
    pub fn expected_hole(&self) -> Option<bool> {
        match self {
            Label::Wt1 | Label::Wt2 => Some(true),
            Label::NonGeneric => None,
            _ => Some(false),
        }
    }

    /// Maximal number of inverse kinematic solutions.
    pub fn max_solutions(&self) -> Option<usize> {
        match self {
            Label::Wt1 => Some(2),
            Label::NonGeneric => None,
            _ => Some(4),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Surface {
    C1,
    C2,
    C3,
    C4,
    E1,
    E2,
    E3,
    /// `d3 = 1`, where C3 and C4 diverge.
    #[serde(rename = "d3=1")]
    UnitD3,
    /// The stack `C1 < E1 < E2 < C2` does not hold.
    #[serde(rename = "ordering")]
    Ordering,
}

impl Surface {
    pub fn name(&self) -> &'static str {
        match self {
            Surface::C1 => "C1",
            Surface::C2 => "C2",
            Surface::C3 => "C3",
            Surface::C4 => "C4",
            Surface::E1 => "E1",
            Surface::E2 => "E2",
            Surface::E3 => "E3",
            Surface::UnitD3 => "d3=1",
            Surface::Ordering => "ordering",
        }
    }
}

/// Surface levels at one `(d3, r2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceValues {
    pub d3: f64,
    pub r2: f64,
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: Option<f64>,
    pub c4: Option<f64>,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
}

impl SurfaceValues {
    pub fn level(&self, s: Surface) -> Option<f64> {
        match s {
            Surface::C1 => Some(self.c1),
            Surface::C2 => Some(self.c2),
            Surface::C3 => self.c3,
            Surface::C4 => self.c4,
            Surface::E1 => Some(self.e1),
            Surface::E2 => Some(self.e2),
            Surface::E3 => Some(self.e3),
            Surface::UnitD3 | Surface::Ordering => None,
        }
    }

    /// All defined levels, in a fixed order.
    pub fn levels(&self) -> Vec<(Surface, f64)> {
        [Surface::C1, Surface::C2, Surface::C3, Surface::C4, Surface::E1, Surface::E2, Surface::E3]
            .into_iter()
            .filter_map(|s| self.level(s).map(|v| (s, v)))
            .collect()
    }

    /// `C1 < E1 < E2 < C2`.
    pub fn stack_ordered(&self) -> bool {
        self.c1 < self.e1 && self.e1 < self.e2 && self.e2 < self.c2
    }
}

/// C1 read directly off its closed form. Errors on a negative radicand.
pub fn c1_closed_form(d3: f64, r2: f64) -> Result<f64> {
    let a = (d3 + 1.0).hypot(r2);
    let b = (d3 - 1.0).hypot(r2);
    let q = d3 * d3 + r2 * r2;
    let radicand = 0.5 * (q - (q * q - d3 * d3 + r2 * r2) / (a * b));
    if radicand < 0.0 {
        if radicand > -1e-12 * q.max(1.0) {
            return Ok(0.0);
        }
        return Err(Error::SurfaceDomain { d3, r2, radicand });
    }
    Ok(radicand.sqrt())
}

/// Coefficients `[k0, k1, k2]` of the legacy quartic surface viewed as a
/// quadratic `k2 X² + k1 X + k0` in `X = d4²`, read off its monomials.
pub fn legacy_quartic_in_d4_squared(d3: f64, r2: f64) -> [f64; 3] {
    let (d3_2, r2_2) = (d3 * d3, r2 * r2);
    let (d3_4, r2_4) = (d3_2 * d3_2, r2_2 * r2_2);
    let k2 = -d3_4 + 2.0 * d3_2 - 2.0 * d3_2 * r2_2 - 2.0 * r2_2 - r2_4 - 1.0;
    let k1 = d3_4 * d3_2 + 3.0 * d3_4 * r2_2 - 2.0 * d3_4 + d3_2 + 3.0 * d3_2 * r2_4 + r2_4 * r2_2 + r2_2 + 2.0 * r2_4;
    let k0 = -d3_2 * r2_2;
    [k0, k1, k2]
}

/// Both positive roots in `d4` of the legacy quartic surface, smaller first.
pub fn legacy_quartic_branches(d3: f64, r2: f64) -> (f64, f64) {
    let [k0, k1, k2] = legacy_quartic_in_d4_squared(d3, r2);
    let disc = (k1 * k1 - 4.0 * k2 * k0).max(0.0).sqrt();
    // k2 < 0 and k0 < 0, so both roots are positive; cancellation-free forms.
    let big = (-k1 - disc) / (2.0 * k2);
    let small = k0 / (k2 * big);
    (small.sqrt(), big.sqrt())
}

/// C1 as a branch of the legacy quartic surface: the smaller root in `d4`
/// where `(d3² + r2²)² - d3² + r2² ≥ 0`, the larger one elsewhere (small
/// `d3` and `r2`), where the two branches swap roles.
pub fn c1_from_legacy(d3: f64, r2: f64) -> f64 {
    let (small, big) = legacy_quartic_branches(d3, r2);
    let q = d3 * d3 + r2 * r2;
    if q * q - d3 * d3 + r2 * r2 >= 0.0 {
        small
    } else {
        big
    }
}

/// Positive root in `d4` of the second legacy quadratic surface (no linear
/// term in `d4`), or `None` at `d3 = 1`.
pub fn legacy_c3_c4_branch(d3: f64, r2: f64) -> Option<f64> {
    let k2 = -1.0 + 2.0 * d3 - d3 * d3;
    let k0 = d3 * d3 * r2 * r2 + d3 * d3 - 2.0 * d3.powi(3) + d3.powi(4);
    if k2 == 0.0 {
        return None;
    }
    Some((-k0 / k2).sqrt())
}

/// Positive root in `d4` of the third legacy quadratic surface.
pub fn legacy_c2_branch(d3: f64, r2: f64) -> f64 {
    let k2 = -1.0 - 2.0 * d3 - d3 * d3;
    let k0 = d3 * d3 * r2 * r2 + d3 * d3 + 2.0 * d3.powi(3) + d3.powi(4);
    (-k0 / k2).sqrt()
}

/// Residuals of the five legacy algebraic surfaces at `(d3, d4, r2)`, in
/// their published order. Zero on the surface.
pub fn legacy_surfaces(d3: f64, d4: f64, r2: f64) -> [f64; 5] {
    let (d3_2, d4_2, r2_2) = (d3 * d3, d4 * d4, r2 * r2);
    let [k0, k1, k2] = legacy_quartic_in_d4_squared(d3, r2);
    [
        -d3 + d4 * r2_2 + d4,
        d3_2 - d4_2 + r2_2,
        k2 * d4_2 * d4_2 + k1 * d4_2 + k0,
        d3_2 * r2_2 + d3_2 - 2.0 * d3_2 * d3 + d3_2 * d3_2 - d4_2 + 2.0 * d3 * d4_2 - d3_2 * d4_2,
        d3_2 * r2_2 + d3_2 + 2.0 * d3_2 * d3 + d3_2 * d3_2 - d4_2 - 2.0 * d3 * d4_2 - d3_2 * d4_2,
    ]
}

/// Evaluates every separating surface at `(d3, r2)`.
///
/// C1 is computed from its closed form and from the legacy quartic; if the two
/// disagree beyond `1e-9` relative, the polynomial route is used.
pub fn surface_values(d3: f64, r2: f64) -> Result<SurfaceValues> {
    if !(d3 > 0.0 && r2 > 0.0 && d3.is_finite() && r2.is_finite()) {
        return Err(Error::InvalidParams(format!("surface levels need d3 > 0 and r2 > 0, got d3={d3}, r2={r2}")));
    }
    let a = (d3 + 1.0).hypot(r2);
    let b = (d3 - 1.0).hypot(r2);
    let closed = c1_closed_form(d3, r2)?;
    let legacy = c1_from_legacy(d3, r2);
    let c1 = if (closed - legacy).abs() <= C1_AGREEMENT * legacy.max(f64::MIN_POSITIVE) { closed } else { legacy };
    Ok(SurfaceValues {
        d3,
        r2,
        a,
        b,
        c1,
        c2: d3 * a / (1.0 + d3),
        c3: (d3 > 1.0).then(|| d3 * b / (d3 - 1.0)),
        c4: (d3 < 1.0).then(|| d3 * b / (1.0 - d3)),
        e1: 0.5 * (a - b),
        e2: d3,
        e3: 0.5 * (a + b),
    })
}

/// Label from the interval stack, with no genericity handling.
pub fn raw_label(sv: &SurfaceValues, d4: f64) -> Label {
    if d4 < sv.c1 {
        return Label::Wt1;
    }
    if d4 < sv.e1 {
        return Label::Wt2;
    }
    if d4 < sv.e2 {
        return Label::Wt3;
    }
    if d4 < sv.c2 {
        return Label::Wt4;
    }
    let lower = if d4 < sv.e3 { Label::Wt5 } else { Label::Wt6 };
    match (sv.c3, sv.c4) {
        (Some(c3), _) => {
            if d4 < c3 {
                lower
            } else {
                Label::Wt7
            }
        }
        (None, Some(c4)) => {
            if d4 < c4 {
                lower
            } else if d4 < sv.e3 {
                Label::Wt8
            } else {
                Label::Wt9
            }
        }
        (None, None) => Label::NonGeneric,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyLabel {
    pub label: Label,
    /// Surfaces within tolerance; empty unless the label is `NonGeneric`.
    pub near_surfaces: Vec<Surface>,
    pub domain: Option<u8>,
    /// Branches taken through the classification tree, root first.
    pub tree_path: Vec<String>,
}

impl TopologyLabel {
    pub fn is_generic(&self) -> bool {
        self.label.is_generic()
    }
}

/// Classifies a design. `eps` is the relative distance in `d4` under which a
/// separating surface counts as touched.
pub fn classify(p: &DesignParams, eps: f64) -> Result<TopologyLabel> {
    let sv = surface_values(p.d3(), p.r2())?;
    Ok(classify_with(p, &sv, eps))
}

pub fn classify_with(p: &DesignParams, sv: &SurfaceValues, eps: f64) -> TopologyLabel {
    let d4 = p.d4();
    let mut near = Vec::new();
    if !sv.stack_ordered() {
        near.push(Surface::Ordering);
    }
    for (s, level) in sv.levels() {
        if (d4 - level).abs() > eps * level {
            continue;
        }
        // Only surfaces that separate two labels at this (d3, r2) count.
        let below = raw_label(sv, level * (1.0 - 2.0 * eps));
        let above = raw_label(sv, level * (1.0 + 2.0 * eps));
        if below != above {
            near.push(s);
        }
    }
    if (p.d3() - 1.0).abs() <= eps && d4 > sv.c2 * (1.0 - eps) {
        near.push(Surface::UnitD3);
    }
    let label = if near.is_empty() { raw_label(sv, d4) } else { Label::NonGeneric };
    if label == Label::NonGeneric && near.is_empty() {
        near.push(Surface::UnitD3);
    }
    TopologyLabel { label, near_surfaces: near, domain: label.domain(), tree_path: tree_path(p, sv) }
}

/// Path through the classification tree for display.
pub fn tree_path(p: &DesignParams, sv: &SurfaceValues) -> Vec<String> {
    let d4 = p.d4();
    let mut path = vec!["all 3R orthogonal manipulators (r3 = 0)".to_string()];
    if p.d3() > d4 {
        path.push("d3 > d4: 2 aspects".into());
        if d4 < sv.c1 {
            path.push("d4 < C1: binary, 0 cusps, 0 nodes, hole (WT1)".into());
            return path;
        }
        path.push("d4 > C1: quaternary, 4 cusps".into());
        if d4 < sv.e1 {
            path.push("d4 < E1: 2 nodes, hole (WT2)".into());
        } else {
            path.push("d4 > E1: 0 nodes, no hole (WT3)".into());
        }
        return path;
    }
    path.push("d3 < d4: quaternary, no hole".into());
    if d4 < sv.c2 {
        path.push("d4 < C2: 4 cusps, 6 aspects".into());
        path.push("2 nodes at the isolated points (WT4)".into());
        return path;
    }
    match (sv.c3, sv.c4) {
        (Some(c3), _) if d4 > c3 => {
            path.push("d4 > C3: 4 cusps, 6 aspects".into());
            path.push("4 nodes (WT7)".into());
        }
        (_, Some(c4)) if d4 > c4 => {
            path.push("d4 > C4: 0 cusps, 4 aspects".into());
            if d4 < sv.e3 {
                path.push("d4 < E3: internal boundary inside external (WT8)".into());
            } else {
                path.push("d4 > E3: boundaries cross, 2 more nodes (WT9)".into());
            }
        }
        (None, None) => path.push("d3 = 1: C3/C4 undefined".into()),
        _ => {
            path.push("C2 < d4 < C3|C4: 2 cusps, 5 aspects".into());
            if d4 < sv.e3 {
                path.push("d4 < E3: 1 node (WT5)".into());
            } else {
                path.push("d4 > E3: 3 nodes (WT6)".into());
            }
        }
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn label_of(d3: f64, d4: f64, r2: f64) -> Label {
        classify(&DesignParams::new(d3, d4, r2).unwrap(), DEFAULT_EPS).unwrap().label
    }

    #[test]
    fn values_at_2_1() {
        let sv = surface_values(2.0, 1.0).unwrap();
        assert_relative_eq!(sv.a, 10f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(sv.b, 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(sv.c1, 0.20081, epsilon = 1e-5);
        assert_relative_eq!(sv.c2, 2.10819, epsilon = 1e-5);
        assert_relative_eq!(sv.c3.unwrap(), 2.82843, epsilon = 1e-5);
        assert!(sv.c4.is_none());
        assert_relative_eq!(sv.e1, 0.87403, epsilon = 1e-5);
        assert_eq!(sv.e2, 2.0);
        assert_relative_eq!(sv.e3, 2.28825, epsilon = 1e-5);
    }

    #[test]
    fn values_at_3_2() {
        let sv = surface_values(3.0, 2.0).unwrap();
        assert_relative_eq!(sv.c2, 3.35410, epsilon = 1e-5);
        assert_relative_eq!(sv.c3.unwrap(), 4.24264, epsilon = 1e-5);
        assert_relative_eq!(sv.e3, 3.65028, epsilon = 1e-5);
        assert!(sv.e3 < 4.0 && 4.0 < sv.c3.unwrap());
    }

    #[test]
    fn values_at_half_1() {
        let sv = surface_values(0.5, 1.0).unwrap();
        assert_relative_eq!(sv.c4.unwrap(), 1.11803, epsilon = 1e-5);
        assert_relative_eq!(sv.e3, 1.46040, epsilon = 1e-5);
        assert!(sv.c3.is_none());
    }

    #[test]
    fn e_product_identity() {
        for (d3, r2) in [(0.3, 0.2), (2.0, 1.0), (3.7, 2.5)] {
            let sv = surface_values(d3, r2).unwrap();
            assert_eq!(sv.e2, d3);
            assert_relative_eq!(sv.e1 * sv.e3, d3, max_relative = 1e-13);
        }
    }

    #[test]
    fn c1_routes_agree() {
        for (d3, r2) in [(0.2, 0.2), (2.0, 1.0), (1.0, 3.0), (4.0, 0.1), (0.49, 0.178), (0.256, 0.178)] {
            let a = c1_closed_form(d3, r2).unwrap();
            let b = c1_from_legacy(d3, r2);
            assert_relative_eq!(a, b, max_relative = 1e-9);
        }
    }

    #[test]
    fn legacy_residuals_vanish_on_their_branches() {
        let sv = surface_values(2.0, 1.0).unwrap();
        let r = legacy_surfaces(2.0, sv.c3.unwrap(), 1.0);
        assert!(r[3].abs() < 1e-9, "{r:?}");
        let r = legacy_surfaces(2.0, sv.c2, 1.0);
        assert!(r[4].abs() < 1e-9);
        let r = legacy_surfaces(2.0, sv.c1, 1.0);
        assert!(r[2].abs() < 1e-9);
        // first surface: d4 = d3 / (1 + r2²)
        assert!(legacy_surfaces(2.0, 1.0, 1.0)[0].abs() < 1e-15);
        assert!(legacy_surfaces(2.0, 1.1, 1.0)[0].abs() > 0.1);
    }

    #[test]
    fn labels_along_d3_2() {
        let expected = [
            (0.1, Label::Wt1),
            (0.5, Label::Wt2),
            (1.5, Label::Wt3),
            (2.05, Label::Wt4),
            (2.2, Label::Wt5),
            (2.5, Label::Wt6),
            (3.0, Label::Wt7),
        ];
        for (d4, l) in expected {
            assert_eq!(label_of(2.0, d4, 1.0), l, "d4 = {d4}");
        }
        assert_eq!(label_of(3.0, 4.0, 2.0), Label::Wt6);
        assert_eq!(label_of(0.5, 1.2, 1.0), Label::Wt8);
        assert_eq!(label_of(0.5, 1.6, 1.0), Label::Wt9);
    }

    #[test]
    fn nongeneric_on_surfaces() {
        let sv = surface_values(2.0, 1.0).unwrap();
        let on_c2 = classify(&DesignParams::new(2.0, sv.c2, 1.0).unwrap(), DEFAULT_EPS).unwrap();
        assert_eq!(on_c2.label, Label::NonGeneric);
        assert_eq!(on_c2.near_surfaces, vec![Surface::C2]);
        assert_eq!(on_c2.domain, None);
        let unit = classify(&DesignParams::new(1.0, 2.0, 1.0).unwrap(), DEFAULT_EPS).unwrap();
        assert_eq!(unit.label, Label::NonGeneric);
        assert!(unit.near_surfaces.contains(&Surface::UnitD3));
        let equal = classify(&DesignParams::new(2.0, 2.0, 1.0).unwrap(), DEFAULT_EPS).unwrap();
        assert_eq!(equal.near_surfaces, vec![Surface::E2]);
    }

    #[test]
    fn inactive_level_is_not_a_surface() {
        // E3 does not separate anything inside domain 4 at d3 > 1 if it lies
        // below C3; a design just above C3 near nothing else stays generic.
        let sv = surface_values(2.0, 1.0).unwrap();
        let tl = classify(&DesignParams::new(2.0, sv.c3.unwrap() * 1.01, 1.0).unwrap(), DEFAULT_EPS).unwrap();
        assert_eq!(tl.label, Label::Wt7);
    }

    #[test]
    fn c1_where_branches_swap() {
        // the oracle finds no cusps up to d4 = 0.46 here
        let sv = surface_values(0.49, 0.178).unwrap();
        assert_relative_eq!(sv.c1, 0.4678548, epsilon = 1e-6);
        assert_eq!(label_of(0.49, 0.3, 0.178), Label::Wt1);
        assert_eq!(label_of(0.49, 0.475, 0.178), Label::Wt2);
    }

    #[test]
    fn unit_d3_below_c2_is_fine() {
        assert_eq!(label_of(1.0, 0.5, 1.0), Label::Wt2);
    }

    #[test]
    fn scale_invariance() {
        let a = classify(&DesignParams::from_raw(1.0, 3.0, 4.0, 2.0).unwrap(), DEFAULT_EPS).unwrap();
        let b = classify(&DesignParams::from_raw(2.0, 6.0, 8.0, 4.0).unwrap(), DEFAULT_EPS).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tree_paths() {
        let p = DesignParams::new(2.0, 1.5, 1.0).unwrap();
        let t = classify(&p, DEFAULT_EPS).unwrap();
        assert_eq!(t.tree_path.len(), 4);
        assert!(t.tree_path[1].contains("2 aspects"));
        assert!(t.tree_path[3].contains("WT3"));
    }

    #[test]
    fn label_names_roundtrip() {
        for l in Label::WORKSPACE_TYPES {
            assert_eq!(Label::parse(l.name()), Some(l));
        }
        assert_eq!(Label::parse("nongeneric"), Some(Label::NonGeneric));
    }
}
