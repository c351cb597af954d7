use std::f64::consts::PI;
use std::fmt::Write;

use super::{AnalysisReport, PartitionGrid};
use crate::classifier::{surface_values, Label, Surface};
use crate::kinematics::CrossSectionPoint;
use crate::singularity::{Boundary, BranchKind, JointPoint};

pub const CANVAS: f64 = 800.0;
pub const MARGIN: f64 = 60.0;
const PLOT: f64 = CANVAS - 2.0 * MARGIN;

/// Fixed palette, WT1 to WT9, then gray for `NonGeneric`.
pub fn label_color(l: Label) -> &'static str {
    match l {
        Label::Wt1 => "#1f77b4",
        Label::Wt2 => "#ff7f0e",
        Label::Wt3 => "#2ca02c",
        Label::Wt4 => "#d62728",
        Label::Wt5 => "#9467bd",
        Label::Wt6 => "#8c564b",
        Label::Wt7 => "#e377c2",
        Label::Wt8 => "#bcbd22",
        Label::Wt9 => "#17becf",
        Label::NonGeneric => "#7f7f7f",
    }
}

fn header(out: &mut String) {
    let _ = write!(
        out,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{c}\" height=\"{c}\" viewBox=\"0 0 {c} {c}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect x=\"0\" y=\"0\" width=\"{c}\" height=\"{c}\" fill=\"#ffffff\"/>\n",
        c = CANVAS
    );
}

fn text(out: &mut String, x: f64, y: f64, anchor: &str, s: &str) {
    let _ = writeln!(out, "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\">{s}</text>");
}

/// Tick step from {1, 2, 5} × 10^k giving at most about eight ticks.
fn tick_step(span: f64) -> f64 {
    let raw = span / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag)
}

fn polyline(out: &mut String, class: &str, stroke: &str, width: f64, pts: &[(f64, f64)], closed: bool) {
    if pts.len() < 2 {
        return;
    }
    let _ =
        write!(out, "<polyline class=\"{class}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\" points=\"");
    for (k, (x, y)) in pts.iter().chain(closed.then(|| &pts[0])).enumerate() {
        let _ = write!(out, "{}{x:.2},{y:.2}", if k == 0 { "" } else { " " });
    }
    out.push_str("\"/>\n");
}

/// Half cross-section `ρ ≥ 0` with the boundaries, cusps (triangles), nodes
/// (circles), isolated points (crosses) and the census solution counts.
pub fn render_workspace_svg(r: &AnalysisReport) -> String {
    let p = r.params.normalized;
    let extent = 1.05 * p.reach_bound();
    let scale = PLOT / (2.0 * extent);
    let x0 = MARGIN;
    let y0 = CANVAS / 2.0;
    let map = |q: &CrossSectionPoint| (x0 + q.rho * scale, y0 - q.z * scale);

    let mut out = String::new();
    header(&mut out);
    out.push_str("<g id=\"axes\" stroke=\"#000000\" stroke-width=\"1\">\n");
    let _ = writeln!(out, "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{:.2}\" y2=\"{y0:.2}\"/>", x0 + extent * scale);
    let _ = writeln!(out, "<line x1=\"{x0:.2}\" y1=\"{MARGIN:.2}\" x2=\"{x0:.2}\" y2=\"{:.2}\"/>", CANVAS - MARGIN);
    let step = tick_step(extent);
    let mut k = 1;
    while k as f64 * step <= extent {
        let v = k as f64 * step;
        let x = x0 + v * scale;
        let _ = writeln!(out, "<line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\"/>", y0 + 4.0);
        for y in [y0 - v * scale, y0 + v * scale] {
            let _ = writeln!(out, "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{x0:.2}\" y2=\"{y:.2}\"/>", x0 - 4.0);
        }
        k += 1;
    }
    out.push_str("</g>\n<g id=\"axis-labels\">\n");
    let mut k = 1;
    while k as f64 * step <= extent {
        let v = k as f64 * step;
        text(&mut out, x0 + v * scale, y0 + 16.0, "middle", &format!("{v}"));
        text(&mut out, x0 - 6.0, y0 - v * scale + 4.0, "end", &format!("{v}"));
        text(&mut out, x0 - 6.0, y0 + v * scale + 4.0, "end", &format!("-{v}"));
        k += 1;
    }
    text(&mut out, x0 + extent * scale, y0 - 8.0, "end", "ρ");
    text(&mut out, x0 + 10.0, MARGIN + 4.0, "start", "z");
    out.push_str("</g>\n");

    if let Some(sig) = &r.signature {
        for b in sig.branches.iter().filter(|b| b.kind == BranchKind::Curve) {
            let pts: Vec<(f64, f64)> = b.workspace_polyline.iter().map(map).collect();
            let (class, stroke) = match b.boundary {
                Some(Boundary::Internal) => ("ws1", "#1f4e9c"),
                _ => ("ws2", "#000000"),
            };
            polyline(&mut out, class, stroke, 1.5, &pts, true);
        }
        if let Some(c) = &sig.region_census {
            for reg in &c.regions {
                if reg.iks == 0 {
                    continue;
                }
                let (x, y) = map(&reg.representative);
                let _ = writeln!(
                    out,
                    "<text class=\"iks\" x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
                    y + 5.0,
                    reg.iks
                );
            }
        }
        for c in &sig.cusps {
            let (x, y) = map(c);
            let _ = writeln!(
                out,
                "<polygon class=\"cusp\" fill=\"#000000\" points=\"{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\"/>",
                x,
                y - 6.0,
                x - 5.0,
                y + 4.0,
                x + 5.0,
                y + 4.0
            );
        }
        for n in &sig.nodes {
            let (x, y) = map(n);
            let _ = writeln!(
                out,
                "<circle class=\"node\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>"
            );
        }
        for i in &sig.isolated {
            let (x, y) = map(&i.point);
            let _ = writeln!(
                out,
                "<path class=\"isolated\" d=\"M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}\" stroke=\"#2ca02c\" stroke-width=\"1.5\"/>",
                x - 5.0,
                y - 5.0,
                x + 5.0,
                y + 5.0,
                x - 5.0,
                y + 5.0,
                x + 5.0,
                y - 5.0
            );
        }
    }

    // annotation panel
    let px = CANVAS / 2.0 + 40.0;
    let mut y = MARGIN + 10.0;
    let mut line = |out: &mut String, s: String| {
        text(out, px, y, "start", &s);
        y += 18.0;
    };
    line(&mut out, format!("d3 = {:.4}  d4 = {:.4}  r2 = {:.4}", p.d3(), p.d4(), p.r2()));
    line(&mut out, format!("label: {}", r.label.label));
    for (s, v) in r.surfaces.levels() {
        line(&mut out, format!("{} = {v:.6}", s.name()));
    }
    if let Some(sig) = &r.signature {
        line(&mut out, format!("cusps: {}  nodes: {}", sig.cusps.len(), sig.nodes.len()));
        if let Some(a) = sig.aspect_count {
            line(&mut out, format!("aspects: {a}"));
        }
        line(&mut out, format!("hole: {}", if sig.has_hole { "yes" } else { "no" }));
    }
    out.push_str("</svg>\n");
    out
}

/// Joint torus `(θ2, θ3) ∈ [-π, π)²` with the singular curves and lines.
pub fn render_joint_svg(r: &AnalysisReport) -> String {
    let map = |j: &JointPoint| {
        (MARGIN + (j.theta2 + PI) / (2.0 * PI) * PLOT, CANVAS - MARGIN - (j.theta3 + PI) / (2.0 * PI) * PLOT)
    };
    let mut out = String::new();
    header(&mut out);
    let _ = writeln!(
        out,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{PLOT}\" height=\"{PLOT}\" fill=\"none\" stroke=\"#000000\"/>"
    );
    for (k, lab) in ["-π", "0", "π"].iter().enumerate() {
        let f = k as f64 / 2.0;
        text(&mut out, MARGIN + f * PLOT, CANVAS - MARGIN + 16.0, "middle", lab);
        text(&mut out, MARGIN - 6.0, CANVAS - MARGIN - f * PLOT + 4.0, "end", lab);
    }
    text(&mut out, CANVAS / 2.0, CANVAS - MARGIN + 34.0, "middle", "θ2");
    text(&mut out, MARGIN - 30.0, CANVAS / 2.0, "middle", "θ3");
    if let Some(sig) = &r.signature {
        for b in &sig.branches {
            let stroke = if b.boundary == Some(Boundary::Internal) { "#1f4e9c" } else { "#000000" };
            let mut run: Vec<(f64, f64)> = Vec::new();
            let n = b.joint_polyline.len();
            for k in 0..=n {
                let j = &b.joint_polyline[k % n];
                if let Some(prev) = k.checked_sub(1).map(|i| &b.joint_polyline[i % n]) {
                    if (j.theta2 - prev.theta2).abs() > PI || (j.theta3 - prev.theta3).abs() > PI {
                        polyline(&mut out, "s2", stroke, 1.5, &run, false);
                        run.clear();
                    }
                }
                run.push(map(j));
            }
            polyline(&mut out, "s2", stroke, 1.5, &run, false);
        }
        for l in &sig.lines {
            let pts: Vec<(f64, f64)> = l.joint_polyline.iter().map(map).collect();
            polyline(&mut out, "s1", "#d62728", 1.5, &pts, false);
        }
    }
    text(&mut out, MARGIN, MARGIN - 20.0, "start", &format!("joint space, label {}", r.label.label));
    out.push_str("</svg>\n");
    out
}

/// Partition map over `(d3, d4)` with the analytic surfaces overlaid and a
/// legend of all ten labels.
pub fn render_partition_svg(g: &PartitionGrid) -> String {
    let plot_w = 540.0;
    let (nx, ny) = (g.d3_axis.count, g.d4_axis.count);
    let (cw, ch) = (plot_w / nx as f64, PLOT / ny as f64);
    let bottom = CANVAS - MARGIN;
    let mut out = String::new();
    header(&mut out);
    out.push_str("<g id=\"cells\" stroke=\"none\">\n");
    for j in 0..ny {
        for i in 0..nx {
            let _ = writeln!(
                out,
                "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"{}\"/>",
                MARGIN + i as f64 * cw,
                bottom - (j + 1) as f64 * ch,
                cw,
                ch,
                label_color(g.label_at(i, j))
            );
        }
    }
    out.push_str("</g>\n");
    let _ = writeln!(
        out,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{plot_w}\" height=\"{PLOT}\" fill=\"none\" stroke=\"#000000\"/>"
    );

    // analytic surfaces at the cell centres' coordinate frame
    let (a3, a4) = (g.d3_axis, g.d4_axis);
    if a3.max > a3.min && a4.max > a4.min {
        let to_x = |d3: f64| MARGIN + cw / 2.0 + (d3 - a3.min) / (a3.max - a3.min) * (plot_w - cw);
        let to_y = |d4: f64| bottom - ch / 2.0 - (d4 - a4.min) / (a4.max - a4.min) * (PLOT - ch);
        let steps = 400;
        for s in [Surface::C1, Surface::C2, Surface::C3, Surface::C4, Surface::E1, Surface::E2, Surface::E3] {
            let dash =
                if matches!(s, Surface::E1 | Surface::E2 | Surface::E3) { " stroke-dasharray=\"6,3\"" } else { "" };
            let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
            for k in 0..=steps {
                let d3 = a3.min + (a3.max - a3.min) * k as f64 / steps as f64;
                let v = surface_values(d3, g.r2).ok().and_then(|sv| sv.level(s));
                match v {
                    Some(d4) if d4 >= a4.min && d4 <= a4.max && (d3 - 1.0).abs() > 1e-9 => {
                        runs.last_mut().unwrap().push((to_x(d3), to_y(d4)))
                    }
                    _ => {
                        if !runs.last().unwrap().is_empty() {
                            runs.push(Vec::new());
                        }
                    }
                }
            }
            for run in runs.iter().filter(|r| r.len() > 1) {
                let _ = write!(out, "<polyline class=\"surface-{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"{dash} points=\"", s.name());
                for (k, (x, y)) in run.iter().enumerate() {
                    let _ = write!(out, "{}{x:.2},{y:.2}", if k == 0 { "" } else { " " });
                }
                out.push_str("\"/>\n");
                let (x, y) = run[run.len() - 1];
                text(&mut out, x + 3.0, y - 3.0, "start", s.name());
            }
        }
    }

    text(&mut out, MARGIN, bottom + 16.0, "middle", &format!("{}", a3.min));
    text(&mut out, MARGIN + plot_w, bottom + 16.0, "middle", &format!("{}", a3.max));
    text(&mut out, MARGIN + plot_w / 2.0, bottom + 34.0, "middle", "d3");
    text(&mut out, MARGIN - 6.0, bottom, "end", &format!("{}", a4.min));
    text(&mut out, MARGIN - 6.0, MARGIN + 4.0, "end", &format!("{}", a4.max));
    text(&mut out, MARGIN - 30.0, CANVAS / 2.0, "middle", "d4");
    text(&mut out, MARGIN, MARGIN - 20.0, "start", &format!("partition at r2 = {}", g.r2));

    let counts = g.label_counts();
    let lx = MARGIN + plot_w + 20.0;
    for (k, l) in Label::WORKSPACE_TYPES.iter().chain(std::iter::once(&Label::NonGeneric)).enumerate() {
        let y = MARGIN + 10.0 + 22.0 * k as f64;
        let _ = writeln!(
            out,
            "<rect class=\"legend-item\" x=\"{lx:.2}\" y=\"{y:.2}\" width=\"14\" height=\"14\" fill=\"{}\" stroke=\"#000000\"/>",
            label_color(*l)
        );
        text(
            &mut out,
            lx + 20.0,
            y + 12.0,
            "start",
            &format!("{} ({})", l.name(), counts.get(l).copied().unwrap_or(0)),
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{Axis, ParamsRecord};

    #[test]
    fn classification_only_workspace() {
        let r = AnalysisReport::classify(ParamsRecord::new(1.0, 2.0, 1.5, 1.0).unwrap(), 1e-7).unwrap();
        let s = render_workspace_svg(&r);
        assert!(s.contains("C1 = "));
        assert!(!s.contains("class=\"cusp\""));
        assert!(s.ends_with("</svg>\n"));
    }

    #[test]
    fn one_cell_partition() {
        let g = PartitionGrid::compute(1.0, Axis::new(2.0, 2.0, 1).unwrap(), Axis::new(1.5, 1.5, 1).unwrap(), 1e-7)
            .unwrap();
        let s = render_partition_svg(&g);
        assert_eq!(s.matches("class=\"legend-item\"").count(), 10);
        assert!(s.contains("WT3 (1)"));
    }

    #[test]
    fn tick_steps() {
        assert_eq!(tick_step(5.0), 1.0);
        assert_eq!(tick_step(11.0), 2.0);
        assert_eq!(tick_step(0.3), 0.05);
    }
}
