//! Analysis reports, partition grids, serialization and SVG figures.

mod serialize;
mod svg;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{classify, classify_with, surface_values, Label, SurfaceValues, TopologyLabel};
use crate::error::{Error, Result};
use crate::kinematics::DesignParams;
use crate::topology::{partial_signature, SignatureOptions, TopologySignature};

pub use serialize::{partition_to_csv, report_from_json, report_to_csv, to_json, Format};
pub use svg::{label_color, render_joint_svg, render_partition_svg, render_workspace_svg, CANVAS, MARGIN};

/// Parameters as given and after normalization by `d2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub r2: f64,
    pub normalized: DesignParams,
}

impl ParamsRecord {
    pub fn new(d2: f64, d3: f64, d4: f64, r2: f64) -> Result<Self> {
        Ok(ParamsRecord { d2, d3, d4, r2, normalized: DesignParams::from_raw(d2, d3, d4, r2)? })
    }
}

/// One compared feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check<T> {
    /// What the label implies, if it implies anything.
    pub expected: Option<T>,
    pub observed: Option<T>,
    /// Whether a mismatch counts as discordance.
    pub gated: bool,
}

impl<T: PartialEq> Check<T> {
    pub fn agrees(&self) -> bool {
        match (&self.expected, &self.observed) {
            (Some(e), Some(o)) => e == o,
            _ => true,
        }
    }

    fn discordant(&self) -> bool {
        self.gated && !self.agrees()
    }
}

/// Analytic label against oracle counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub cusps: Check<usize>,
    pub nodes: Check<usize>,
    pub aspects: Check<usize>,
    pub hole: Check<bool>,
    /// `None` when the label is `NonGeneric`: no claim is made.
    pub concordant: Option<bool>,
}

impl Agreement {
    pub fn evaluate(label: Label, sig: &TopologySignature) -> Agreement {
        let complete = sig.is_complete();
        let cusps =
            Check { expected: label.expected_cusps(), observed: complete.then_some(sig.cusps.len()), gated: true };
        let nodes = Check {
            expected: label.expected_nodes(),
            observed: complete.then_some(sig.nodes.len()),
            gated: label.expected_nodes().is_some(),
        };
        let aspects =
            Check { expected: label.expected_aspects(), observed: sig.aspect_count, gated: label.aspects_stated() };
        let hole = Check {
            expected: label.expected_hole(),
            observed: sig.region_census.as_ref().map(|c| c.has_hole),
            gated: true,
        };
        let concordant = label.is_generic().then(|| {
            complete && !cusps.discordant() && !nodes.discordant() && !aspects.discordant() && !hole.discordant()
        });
        Agreement { cusps, nodes, aspects, hole, concordant }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub params: ParamsRecord,
    pub label: TopologyLabel,
    pub surfaces: SurfaceValues,
    pub signature: Option<TopologySignature>,
    pub agreement: Option<Agreement>,
}

impl AnalysisReport {
    /// Classification only.
    pub fn classify(params: ParamsRecord, eps: f64) -> Result<Self> {
        let p = params.normalized;
        let surfaces = surface_values(p.d3(), p.r2())?;
        let label = classify_with(&p, &surfaces, eps);
        Ok(AnalysisReport { params, label, surfaces, signature: None, agreement: None })
    }

    /// Classification plus the numeric oracle. Oracle failures are recorded in
    /// the signature's `failed_checks` rather than returned.
    pub fn analyze(params: ParamsRecord, eps: f64, opts: &SignatureOptions) -> Result<Self> {
        let mut r = Self::classify(params, eps)?;
        let sig = partial_signature(&params.normalized, opts);
        r.agreement = Some(Agreement::evaluate(r.label.label, &sig));
        r.signature = Some(sig);
        Ok(r)
    }

    pub fn is_concordant(&self) -> Option<bool> {
        self.agreement.as_ref().and_then(|a| a.concordant)
    }
}

/// Inclusive sampling `min:max:count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if count == 0 || !min.is_finite() || !max.is_finite() || max < min || (count > 1 && max == min) {
            return Err(Error::InvalidArgument(format!("bad axis {min}:{max}:{count}")));
        }
        Ok(Axis { min, max, count })
    }

    /// Parses `min:max:count`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidArgument(format!("range `{s}` is not min:max:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        Axis::new(min, max, count)
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }
}

/// Labels over a `(d3, d4)` grid at fixed `r2`, stored row-major with `d3`
/// varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionGrid {
    pub r2: f64,
    pub d3_axis: Axis,
    pub d4_axis: Axis,
    pub cells: Vec<Label>,
}

impl PartitionGrid {
    pub fn compute(r2: f64, d3_axis: Axis, d4_axis: Axis, eps: f64) -> Result<Self> {
        if !(r2 > 0.0 && r2.is_finite()) {
            return Err(Error::InvalidArgument(format!("r2 must be positive, got {r2}")));
        }
        if d3_axis.min <= 0.0 || d4_axis.min <= 0.0 {
            return Err(Error::InvalidArgument("sweep ranges must be positive".into()));
        }
        let cells = (0..d4_axis.count)
            .into_par_iter()
            .flat_map_iter(|j| {
                let d4 = d4_axis.value(j);
                (0..d3_axis.count).map(move |i| {
                    let d3 = d3_axis.value(i);
                    DesignParams::new(d3, d4, r2).and_then(|p| classify(&p, eps)).map_or(Label::NonGeneric, |t| t.label)
                })
            })
            .collect();
        Ok(PartitionGrid { r2, d3_axis, d4_axis, cells })
    }

    pub fn label_at(&self, i: usize, j: usize) -> Label {
        self.cells[j * self.d3_axis.count + i]
    }

    pub fn label_counts(&self) -> BTreeMap<Label, usize> {
        let mut m = BTreeMap::new();
        for l in &self.cells {
            *m.entry(*l).or_insert(0) += 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        let a = Axis::parse("0.05:4:200").unwrap();
        assert_eq!(a.count, 200);
        assert_eq!(a.value(0), 0.05);
        assert_eq!(a.value(199), 4.0);
        assert_eq!(Axis::parse("1:1:1").unwrap().value(0), 1.0);
        assert!(Axis::parse("1:2").is_err());
        assert!(Axis::parse("2:1:5").is_err());
        assert!(Axis::parse("1:2:0").is_err());
    }

    #[test]
    fn vertical_scan_at_d3_2() {
        let g = PartitionGrid::compute(1.0, Axis::new(2.0, 2.0, 1).unwrap(), Axis::new(0.01, 3.5, 700).unwrap(), 1e-7)
            .unwrap();
        let mut seq: Vec<Label> = Vec::new();
        for l in &g.cells {
            if l.is_generic() && seq.last() != Some(l) {
                seq.push(*l);
            }
        }
        use Label::*;
        assert_eq!(seq, vec![Wt1, Wt2, Wt3, Wt4, Wt5, Wt6, Wt7]);
    }

    #[test]
    fn classify_report_has_no_agreement() {
        let r = AnalysisReport::classify(ParamsRecord::new(1.0, 2.0, 1.5, 1.0).unwrap(), 1e-7).unwrap();
        assert!(r.signature.is_none() && r.agreement.is_none());
        assert_eq!(r.label.label, Label::Wt3);
    }
}
