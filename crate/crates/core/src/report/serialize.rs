use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

use super::{AnalysisReport, PartitionGrid};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Floats in scientific notation with 17 significant digits.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

struct Precise<F>(F);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl<F: Formatter> Formatter for Precise<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        end_object_key(),
        begin_object_value(),
        end_object_value(),
    );
}

/// JSON with a stable field order and round-trippable floats.
pub fn to_json<T: Serialize>(value: &T, pretty: bool) -> Vec<u8> {
    let mut out = Vec::new();
    let res = if pretty {
        let mut ser = serde_json::Serializer::with_formatter(&mut out, Precise(PrettyFormatter::with_indent(b"  ")));
        value.serialize(&mut ser)
    } else {
        let mut ser = serde_json::Serializer::with_formatter(&mut out, Precise(CompactFormatter));
        value.serialize(&mut ser)
    };
    res.expect("in-memory serialization does not fail");
    if pretty {
        out.push(b'\n');
    }
    out
}

pub fn report_from_json(bytes: &[u8]) -> Result<AnalysisReport> {
    serde_json::from_slice(bytes).map_err(|e| Error::InvalidArgument(format!("bad report JSON: {e}")))
}

/// Flattened point lists: one `kind,rho,z` row per cusp, node, isolated point
/// and census representative.
pub fn report_to_csv(r: &AnalysisReport) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["kind", "rho", "z"]).unwrap();
    if let Some(sig) = &r.signature {
        let mut row = |kind: &str, rho: f64, z: f64| w.write_record([kind, &fmt_f64(rho), &fmt_f64(z)]).unwrap();
        for c in &sig.cusps {
            row("cusp", c.rho, c.z);
        }
        for n in &sig.nodes {
            row("node", n.rho, n.z);
        }
        for i in &sig.isolated {
            row("isolated", i.point.rho, i.point.z);
        }
        if let Some(census) = &sig.region_census {
            for reg in &census.regions {
                row(&format!("region{}", reg.iks), reg.representative.rho, reg.representative.z);
            }
        }
    }
    w.into_inner().unwrap()
}

/// `d3,d4,r2,label,domain`, one row per cell.
pub fn partition_to_csv(g: &PartitionGrid) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["d3", "d4", "r2", "label", "domain"]).unwrap();
    for j in 0..g.d4_axis.count {
        for i in 0..g.d3_axis.count {
            let l = g.label_at(i, j);
            let domain = l.domain().map(|d| d.to_string()).unwrap_or_default();
            w.write_record([
                fmt_f64(g.d3_axis.value(i)),
                fmt_f64(g.d4_axis.value(j)),
                fmt_f64(g.r2),
                l.name().to_string(),
                domain,
            ])
            .unwrap();
        }
    }
    w.into_inner().unwrap()
}
