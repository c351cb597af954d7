//! Seeded self-verification suites, shared by the `verify` command and the
//! acceptance tests.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{
    c1_closed_form, c1_from_legacy, classify, legacy_c2_branch, legacy_c3_c4_branch, surface_values, Label, Surface,
    SurfaceValues,
};
use crate::kinematics::{
    angle_distance, forward_kinematics, inverse_kinematics, jacobian_det, numeric_jacobian_det, DesignParams,
    JointConfig,
};
use crate::singularity::{line_curve_intersections, s1_lines};
use crate::topology::{crossing_counts, numeric_signature, SignatureOptions, DEFAULT_TRACE_N};

/// Largest per-angle error allowed in FK/IK roundtrips.
pub const ROUNDTRIP_TOL: f64 = 1e-8;
/// Relative tolerance on the constant ratio of numeric to factored determinant.
pub const KAPPA_TOL: f64 = 1e-6;
/// Relative tolerance between surface branches and closed forms.
pub const SURFACE_TOL: f64 = 1e-9;
/// Offset on either side of a surface in the tangency suite.
pub const TANGENCY_OFFSET: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Designs per type, straddle pairs per surface, and so on.
    pub samples: usize,
    pub eps: f64,
    pub trace_n: usize,
    pub aspect_grid: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 1, samples: 30, eps: 1e-7, trace_n: DEFAULT_TRACE_N, aspect_grid: 256 }
    }
}

impl VerifyConfig {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }

    fn oracle(&self, scale: usize) -> SignatureOptions {
        SignatureOptions { trace_n: self.trace_n * scale, aspect_grid: self.aspect_grid * scale, census_n: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    /// Passes needed for the suite to succeed.
    pub required: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: impl Into<String>, total: usize, required: usize) -> Self {
        SuiteResult { name: name.into(), passed: 0, total, required, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else if self.failures.len() < 10 {
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.passed >= self.required
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

fn random_config(rng: &mut ChaCha8Rng) -> JointConfig {
    JointConfig::new(uniform(rng, -PI, PI), uniform(rng, -PI, PI), uniform(rng, -PI, PI))
}

fn random_design(rng: &mut ChaCha8Rng) -> DesignParams {
    DesignParams::new(uniform(rng, 0.2, 3.0), uniform(rng, 0.2, 3.0), uniform(rng, 0.2, 3.0)).unwrap()
}

fn config_error(a: &JointConfig, b: &JointConfig) -> f64 {
    angle_distance(a.theta1, b.theta1).max(angle_distance(a.theta2, b.theta2)).max(angle_distance(a.theta3, b.theta3))
}

/// FK then IK recovers the configuration.
pub fn suite_roundtrip(cfg: &VerifyConfig, n: usize) -> SuiteResult {
    let mut rng = cfg.rng(1);
    let cases: Vec<(DesignParams, JointConfig)> =
        (0..n).map(|_| (random_design(&mut rng), random_config(&mut rng))).collect();
    let errs: Vec<f64> = cases
        .par_iter()
        .map(|(p, q)| {
            let set = inverse_kinematics(p, &forward_kinematics(p, q));
            set.solutions.iter().map(|s| config_error(s, q)).fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut r = SuiteResult::new("fk-ik roundtrip", n, n);
    for (e, (p, q)) in errs.iter().zip(&cases) {
        r.record(*e < ROUNDTRIP_TOL, || format!("{p:?} {q:?}: error {e:.3e}"));
    }
    r
}

/// The finite-difference determinant is `d4` times the factored one.
pub fn suite_kappa(cfg: &VerifyConfig, n: usize) -> SuiteResult {
    let mut rng = cfg.rng(2);
    let mut r = SuiteResult::new("determinant constant", n, n);
    let mut done = 0;
    while done < n {
        let p = random_design(&mut rng);
        let q = random_config(&mut rng);
        let det = jacobian_det(&p, &q);
        if det.abs() < 1e-2 {
            continue;
        }
        done += 1;
        let kappa = numeric_jacobian_det(&p, &q, 1e-5) / det;
        let rel = (kappa - p.d4()).abs() / p.d4();
        r.record(rel < KAPPA_TOL, || format!("{p:?} {q:?}: ratio {kappa} vs d4 {}", p.d4()));
    }
    r
}

/// Legacy branches against closed forms on an `n × n` grid over `(0.1, 4]²`.
pub fn suite_surface_equivalence(n: usize) -> SuiteResult {
    let mut r = SuiteResult::new("surface equivalence", n * n, n * n);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in 0..n {
            let d3 = 0.1 + 3.9 * (i + 1) as f64 / n as f64;
            let r2 = 0.1 + 3.9 * (j + 1) as f64 / n as f64;
            let Ok(sv) = surface_values(d3, r2) else {
                r.record(false, || format!("({d3}, {r2}): surface domain"));
                continue;
            };
            let e9 = rel(c1_from_legacy(d3, r2), c1_closed_form(d3, r2).unwrap_or(f64::NAN));
            let e11 = rel(legacy_c2_branch(d3, r2), sv.c2);
            let e10 = match (legacy_c3_c4_branch(d3, r2), sv.c3.or(sv.c4)) {
                (Some(a), Some(b)) => rel(a, b),
                (None, None) => 0.0,
                _ => f64::INFINITY,
            };
            let worst = e9.max(e10).max(e11);
            r.record(worst < SURFACE_TOL, || format!("({d3}, {r2}): max relative gap {worst:.3e}"));
        }
    }
    r
}

fn clear_of_surfaces(sv: &SurfaceValues, d4: f64, margin: f64) -> bool {
    sv.levels().iter().all(|(_, l)| (d4 - l).abs() > margin * l) && (sv.d3 - 1.0).abs() > margin
}

/// Designs on either side of a legacy non-separating surface share a label.
pub fn suite_non_separation(cfg: &VerifyConfig, n: usize) -> SuiteResult {
    let mut rng = cfg.rng(3);
    let mut r = SuiteResult::new("non-separating surfaces", 2 * n, 2 * n);
    let delta = 1e-4;
    let margin = 10.0 * cfg.eps;
    for which in 0..2 {
        let mut done = 0;
        while done < n {
            let d3 = uniform(&mut rng, 0.1, 4.0);
            let r2 = uniform(&mut rng, 0.1, 4.0);
            let d4 = if which == 0 { d3 / (1.0 + r2 * r2) } else { d3.hypot(r2) };
            let (lo, hi) = (d4 * (1.0 - delta), d4 * (1.0 + delta));
            let sv = surface_values(d3, r2).unwrap();
            if !clear_of_surfaces(&sv, lo, margin) || !clear_of_surfaces(&sv, hi, margin) {
                continue;
            }
            // only pairs with no classifier surface between them test anything
            if sv.levels().iter().any(|(_, l)| *l > lo && *l < hi) {
                continue;
            }
            done += 1;
            let a = classify(&DesignParams::new(d3, lo, r2).unwrap(), cfg.eps).unwrap().label;
            let b = classify(&DesignParams::new(d3, hi, r2).unwrap(), cfg.eps).unwrap().label;
            r.record(a == b && a.is_generic(), || format!("surface {which} at ({d3}, {d4}, {r2}): {a} vs {b}"));
        }
    }
    r
}

/// `d4` interval of a label at one `(d3, r2)`; unbounded intervals are capped.
pub fn label_interval(sv: &SurfaceValues, label: Label) -> Option<(f64, f64)> {
    let cap = |lo: f64| 1.5 * lo;
    let outer = sv.c3.or(sv.c4)?;
    let (lo, hi) = match label {
        Label::Wt1 => (0.0, sv.c1),
        Label::Wt2 => (sv.c1, sv.e1),
        Label::Wt3 => (sv.e1, sv.e2),
        Label::Wt4 => (sv.e2, sv.c2),
        Label::Wt5 => (sv.c2, sv.e3.min(outer)),
        Label::Wt6 => (sv.c2.max(sv.e3), outer),
        Label::Wt7 => (sv.c3?, cap(sv.c3?)),
        Label::Wt8 => (sv.c4?, sv.e3),
        Label::Wt9 => {
            let lo = sv.c4?.max(sv.e3);
            (lo, cap(lo))
        }
        Label::NonGeneric => return None,
    };
    (hi > lo).then_some((lo, hi))
}

/// A design of the given type: `(d3, r2)` drawn uniformly, `d4` at the middle
/// of the label's interval, rejected until the interval is not too thin.
pub fn sample_design(label: Label, rng: &mut ChaCha8Rng, eps: f64) -> DesignParams {
    let d3_range = match label {
        Label::Wt8 | Label::Wt9 => (0.1, 0.9),
        _ => (0.2, 3.0),
    };
    loop {
        let d3 = uniform(rng, d3_range.0, d3_range.1);
        let r2 = uniform(rng, 0.2, 3.0);
        if (d3 - 1.0).abs() < 0.05 {
            continue;
        }
        let sv = surface_values(d3, r2).unwrap();
        let Some((lo, hi)) = label_interval(&sv, label) else { continue };
        if hi - lo < 0.02 * hi {
            continue;
        }
        let d4 = if lo == 0.0 { 0.5 * hi } else { 0.5 * (lo + hi) };
        let Ok(p) = DesignParams::new(d3, d4, r2) else { continue };
        if classify(&p, eps).map(|t| t.label) == Ok(label) {
            return p;
        }
    }
}

/// A WT8 design and a WT9 design sharing `(d3, r2)`.
pub fn sample_wt8_wt9_pair(rng: &mut ChaCha8Rng, eps: f64) -> (DesignParams, DesignParams) {
    loop {
        let p8 = sample_design(Label::Wt8, rng, eps);
        let sv = surface_values(p8.d3(), p8.r2()).unwrap();
        let Some((lo, hi)) = label_interval(&sv, Label::Wt9) else { continue };
        let p9 = DesignParams::new(p8.d3(), 0.5 * (lo + hi), p8.r2()).unwrap();
        if classify(&p9, eps).map(|t| t.label) == Ok(Label::Wt9) {
            return (p8, p9);
        }
    }
}

/// Oracle counts for one design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleCounts {
    pub cusps: usize,
    pub nodes: usize,
    pub aspects: usize,
}

/// Oracle counts at the configured resolution, retried once at double
/// resolution if the first attempt errors or disagrees with `expect`.
pub fn oracle_counts(
    p: &DesignParams,
    cfg: &VerifyConfig,
    expect: impl Fn(&OracleCounts) -> bool,
) -> Option<OracleCounts> {
    let run = |scale| {
        numeric_signature(p, &cfg.oracle(scale))
            .ok()
            .and_then(|s| Some(OracleCounts { cusps: s.cusps.len(), nodes: s.nodes.len(), aspects: s.aspect_count? }))
    };
    match run(1) {
        Some(c) if expect(&c) => Some(c),
        first => run(2).or(first),
    }
}

fn stated_counts(label: Label) -> (usize, Option<usize>) {
    (label.expected_cusps().unwrap(), label.expected_nodes())
}

/// Per-type samples: `(label, design, counts)`.
pub fn per_type_samples(cfg: &VerifyConfig) -> Vec<(Label, DesignParams, Option<OracleCounts>)> {
    let designs: Vec<(Label, DesignParams)> = Label::WORKSPACE_TYPES[..7]
        .iter()
        .enumerate()
        .flat_map(|(k, &l)| {
            let mut rng = cfg.rng(10 + k as u64);
            (0..cfg.samples).map(move |_| (l, sample_design(l, &mut rng, cfg.eps))).collect::<Vec<_>>()
        })
        .collect();
    designs
        .into_par_iter()
        .map(|(l, p)| {
            let (cusps, nodes) = stated_counts(l);
            let aspects = l.expected_aspects();
            let c = oracle_counts(&p, cfg, |c| {
                c.cusps == cusps && Some(c.nodes) == nodes && (!l.aspects_stated() || Some(c.aspects) == aspects)
            });
            (l, p, c)
        })
        .collect()
}

/// Matched WT8/WT9 pairs with their counts.
pub fn wt8_wt9_samples(
    cfg: &VerifyConfig,
) -> Vec<(DesignParams, DesignParams, Option<OracleCounts>, Option<OracleCounts>)> {
    let mut rng = cfg.rng(20);
    let pairs: Vec<_> = (0..cfg.samples).map(|_| sample_wt8_wt9_pair(&mut rng, cfg.eps)).collect();
    pairs
        .into_par_iter()
        .map(|(a, b)| {
            let ca = oracle_counts(&a, cfg, |c| c.cusps == 0 && c.aspects == 4);
            let cb =
                oracle_counts(&b, cfg, |c| c.cusps == 0 && c.aspects == 4 && Some(c.nodes) == ca.map(|x| x.nodes + 2));
            (a, b, ca, cb)
        })
        .collect()
}

/// Cusp/node concordance per type, allowing one miss per 30 samples.
pub fn suite_concordance(
    samples: &[(Label, DesignParams, Option<OracleCounts>)],
    pairs: &[(DesignParams, DesignParams, Option<OracleCounts>, Option<OracleCounts>)],
) -> Vec<SuiteResult> {
    let mut out = Vec::new();
    for l in &Label::WORKSPACE_TYPES[..7] {
        let (cusps, nodes) = stated_counts(*l);
        let mine: Vec<_> = samples.iter().filter(|s| s.0 == *l).collect();
        let mut r = SuiteResult::new(format!("oracle concordance {l}"), mine.len(), mine.len() - mine.len() / 30);
        for (_, p, c) in mine {
            let ok = c.is_some_and(|c| c.cusps == cusps && Some(c.nodes) == nodes);
            r.record(ok, || format!("{p:?}: {c:?}"));
        }
        out.push(r);
    }
    let mut r = SuiteResult::new("oracle concordance WT8/WT9", pairs.len(), pairs.len());
    for (a, b, ca, cb) in pairs {
        let ok = match (ca, cb) {
            (Some(x), Some(y)) => x.cusps == 0 && y.cusps == 0 && y.nodes == x.nodes + 2,
            _ => false,
        };
        r.record(ok, || format!("{a:?} / {b:?}: {ca:?} / {cb:?}"));
    }
    out.push(r);
    out
}

/// Aspect counts for every type whose count is stated.
pub fn suite_aspects(
    samples: &[(Label, DesignParams, Option<OracleCounts>)],
    pairs: &[(DesignParams, DesignParams, Option<OracleCounts>, Option<OracleCounts>)],
) -> SuiteResult {
    let gated: Vec<_> = samples.iter().filter(|s| s.0.aspects_stated()).collect();
    let total = gated.len() + 2 * pairs.len();
    let mut r = SuiteResult::new("aspect counts", total, total);
    for (l, p, c) in gated {
        let ok = c.is_some_and(|c| Some(c.aspects) == l.expected_aspects());
        r.record(ok, || format!("{l} {p:?}: {c:?}"));
    }
    for (a, b, ca, cb) in pairs {
        r.record(ca.is_some_and(|c| c.aspects == 4), || format!("WT8 {a:?}: {ca:?}"));
        r.record(cb.is_some_and(|c| c.aspects == 4), || format!("WT9 {b:?}: {cb:?}"));
    }
    r
}

/// Intersection counts of each singular line with the second-factor curves.
pub fn line_curve_counts(p: &DesignParams) -> Vec<usize> {
    s1_lines(p).iter().map(|l| line_curve_intersections(p, l.theta3).len()).collect()
}

fn line_jump(below: &[usize], above: &[usize]) -> bool {
    below.len() == 2
        && above.len() == 2
        && (0..2)
            .filter(|&k| below[k] != above[k])
            .map(|k| (below[k].min(above[k]), below[k].max(above[k])))
            .eq(std::iter::once((0, 2)))
}

/// Expected intersection-count changes across C2, C3/C4, E1, E2 and E3.
pub fn tangency_checks(d3: f64, r2: f64, trace_n: usize) -> Vec<(Surface, bool, String)> {
    let sv = surface_values(d3, r2).unwrap();
    let at = |d4: f64| DesignParams::new(d3, d4, r2).unwrap();
    let mut out = Vec::new();
    for s in [Surface::C2, Surface::C3, Surface::C4] {
        let Some(level) = sv.level(s) else { continue };
        let (b, a) = (line_curve_counts(&at(level - TANGENCY_OFFSET)), line_curve_counts(&at(level + TANGENCY_OFFSET)));
        out.push((s, line_jump(&b, &a), format!("line/curve counts {b:?} -> {a:?}")));
    }
    for s in [Surface::E1, Surface::E2, Surface::E3] {
        let level = sv.level(s).unwrap();
        let b = crossing_counts(&at(level - TANGENCY_OFFSET), trace_n);
        let a = crossing_counts(&at(level + TANGENCY_OFFSET), trace_n);
        let (ok, what) = match (b, a) {
            (Ok(b), Ok(a)) => {
                let ok = match s {
                    Surface::E1 => b.internal_self == 2 && a.internal_self == 0,
                    Surface::E2 => b.internal_self == 0 && a.internal_self == 2,
                    _ => b.mutual == 0 && a.mutual == 2,
                };
                (ok, format!("{b:?} -> {a:?}"))
            }
            (b, a) => (false, format!("{b:?} -> {a:?}")),
        };
        out.push((s, ok, what));
    }
    out
}

/// Tangency transitions at `(2, 1)` and at seeded `(d3, r2)` on both sides of
/// `d3 = 1`.
pub fn suite_tangency(cfg: &VerifyConfig, n: usize) -> SuiteResult {
    let mut rng = cfg.rng(4);
    let mut sites = vec![(2.0, 1.0)];
    while sites.len() < n.max(1) {
        let d3 = if sites.len() % 2 == 1 { uniform(&mut rng, 0.2, 0.9) } else { uniform(&mut rng, 1.2, 3.0) };
        let r2 = uniform(&mut rng, 0.3, 2.5);
        let sv = surface_values(d3, r2).unwrap();
        // the offsets must not reach a neighbouring surface
        let mut levels: Vec<f64> = sv.levels().iter().map(|l| l.1).collect();
        levels.sort_by(f64::total_cmp);
        if levels.windows(2).all(|w| w[1] - w[0] > 20.0 * TANGENCY_OFFSET) {
            sites.push((d3, r2));
        }
    }
    let checks: Vec<_> = sites.par_iter().map(|&(d3, r2)| (d3, r2, tangency_checks(d3, r2, cfg.trace_n))).collect();
    let total = checks.iter().map(|c| c.2.len()).sum();
    let mut r = SuiteResult::new("tangency transitions", total, total);
    for (d3, r2, cs) in checks {
        for (s, ok, what) in cs {
            r.record(ok, || format!("({d3}, {r2}) {}: {what}", s.name()));
        }
    }
    r
}

/// Every suite, in a fixed order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteResult> {
    let n = cfg.samples.max(1);
    let mut out = vec![
        suite_roundtrip(cfg, 1000.min(40 * n)),
        suite_kappa(cfg, 100.min(4 * n)),
        suite_surface_equivalence(50.min(2 * n).max(2)),
        suite_non_separation(cfg, 100.min(4 * n)),
    ];
    let samples = per_type_samples(cfg);
    let pairs = wt8_wt9_samples(cfg);
    out.extend(suite_concordance(&samples, &pairs));
    out.push(suite_aspects(&samples, &pairs));
    out.push(suite_tangency(cfg, 4.min(n + 1)));
    out
}
