use orthokin::classifier::{Label, DEFAULT_EPS};
use orthokin::kinematics::DesignParams;
use orthokin::report::{
    partition_to_csv, render_partition_svg, render_workspace_svg, report_from_json, report_to_csv, to_json,
    AnalysisReport, Axis, ParamsRecord, PartitionGrid,
};
use orthokin::singularity::trace_s2;
use orthokin::topology::{census_regions, winding_number, CensusGrid, SignatureOptions};

fn analyzed(d3: f64, d4: f64, r2: f64) -> AnalysisReport {
    let opts = SignatureOptions { census_n: Some(200), ..Default::default() };
    AnalysisReport::analyze(ParamsRecord::new(1.0, d3, d4, r2).unwrap(), DEFAULT_EPS, &opts).unwrap()
}

fn markers(svg: &str, class: &str) -> usize {
    svg.matches(&format!("class=\"{class}\"")).count()
}

#[test]
fn json_roundtrip_is_identical() {
    let r = analyzed(3.0, 4.0, 2.0);
    let bytes = to_json(&r, true);
    let back = report_from_json(&bytes).unwrap();
    assert_eq!(back, r);
    assert_eq!(to_json(&back, true), bytes);
    assert_eq!(to_json(&r, false), to_json(&back, false));
}

#[test]
fn json_has_documented_top_level_keys() {
    let r = analyzed(2.0, 1.5, 1.0);
    let v: serde_json::Value = serde_json::from_slice(&to_json(&r, false)).unwrap();
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    for k in ["params", "label", "surfaces", "signature", "agreement"] {
        assert!(keys.iter().any(|x| x == k), "{k} missing");
    }
}

#[test]
fn outputs_are_deterministic() {
    let a = analyzed(2.0, 1.5, 1.0);
    let b = analyzed(2.0, 1.5, 1.0);
    assert_eq!(to_json(&a, true), to_json(&b, true));
    assert_eq!(report_to_csv(&a), report_to_csv(&b));
    assert_eq!(render_workspace_svg(&a), render_workspace_svg(&b));
}

#[test]
fn svg_markers_match_signature() {
    for (d3, d4, r2, cusps, nodes) in [(2.0, 1.5, 1.0, 4, 0), (3.0, 4.0, 2.0, 2, 3)] {
        let r = analyzed(d3, d4, r2);
        let sig = r.signature.as_ref().unwrap();
        assert_eq!((sig.cusps.len(), sig.nodes.len()), (cusps, nodes));
        let svg = render_workspace_svg(&r);
        assert_eq!(markers(&svg, "cusp"), sig.cusps.len());
        assert_eq!(markers(&svg, "node"), sig.nodes.len());
        assert_eq!(markers(&svg, "isolated"), sig.isolated.len());
        let census = sig.region_census.as_ref().unwrap();
        assert_eq!(markers(&svg, "iks"), census.regions.iter().filter(|r| r.iks > 0).count());
    }
}

#[test]
fn noded_isolated_points() {
    let r = analyzed(3.0, 4.0, 2.0);
    let sig = r.signature.unwrap();
    assert_eq!(sig.isolated.len(), 2);
    assert_eq!(sig.isolated.iter().filter(|i| i.coincides_with_node).count(), 1);
}

#[test]
fn nongeneric_report_names_surfaces() {
    let r = AnalysisReport::classify(ParamsRecord::new(1.0, 2.0, 0.25, 1.0).unwrap(), DEFAULT_EPS).unwrap();
    assert!(r.label.label.is_generic());
    let c2 = r.surfaces.c2;
    let r = AnalysisReport::classify(ParamsRecord::new(1.0, 2.0, c2, 1.0).unwrap(), DEFAULT_EPS).unwrap();
    assert_eq!(r.label.label, Label::NonGeneric);
    let v: serde_json::Value = serde_json::from_slice(&to_json(&r, false)).unwrap();
    let near = v["label"]["near_surfaces"].as_array().unwrap();
    assert!(!near.is_empty());
    assert!(near.iter().any(|s| s == "C2"));
}

#[test]
fn partition_legend_is_complete() {
    let d3 = Axis::new(0.05, 4.0, 60).unwrap();
    let d4 = Axis::new(0.05, 4.0, 60).unwrap();
    let g = PartitionGrid::compute(1.0, d3, d4, DEFAULT_EPS).unwrap();
    let svg = render_partition_svg(&g);
    for (l, n) in g.label_counts() {
        assert!(svg.contains(&format!(">{l} ({n})<")), "{l} missing from legend");
    }
    let csv = partition_to_csv(&g);
    assert_eq!(csv.iter().filter(|&&b| b == b'\n').count(), 1 + 3600);
}

// Every 4-solution cell away from singular images lies inside WS1.
#[test]
fn census_conservation() {
    for (d3, d4, r2, wide) in
        [(2.0, 1.5, 1.0, true), (3.0, 4.0, 2.0, true), (2.0, 0.5, 1.0, false), (2.0, 3.0, 1.0, true)]
    {
        let p = DesignParams::new(d3, d4, r2).unwrap();
        let g = CensusGrid::sample(&p, 200).unwrap();
        let (dr, dz) = g.cell_size();
        let branches = trace_s2(&p, 2048).unwrap();
        let mut band = vec![false; g.n * g.n];
        for b in &branches {
            let w = &b.workspace_polyline;
            for k in 0..w.len() {
                let (a, c) = (w[k], w[(k + 1) % w.len()]);
                for t in 0..4 {
                    let f = t as f64 / 4.0;
                    let (rho, z) = (a.rho + f * (c.rho - a.rho), a.z + f * (c.z - a.z));
                    let i = (rho / dr).floor() as i64;
                    let j = ((z + g.extent) / dz).floor() as i64;
                    for jj in j - 2..=j + 2 {
                        for ii in i - 2..=i + 2 {
                            if (0..g.n as i64).contains(&ii) && (0..g.n as i64).contains(&jj) {
                                band[jj as usize * g.n + ii as usize] = true;
                            }
                        }
                    }
                }
            }
        }
        let ws1 = &branches[0].workspace_polyline;
        let (mut inside, mut total) = (0usize, 0usize);
        for j in 0..g.n {
            for i in 0..g.n {
                let c = j * g.n + i;
                if g.labels[c] == Some(4) && !band[c] {
                    total += 1;
                    inside += usize::from(winding_number(ws1, &g.center(i, j)) != 0);
                }
            }
        }
        assert!(!wide || total > 100, "{p:?}: {total}");
        // Thin 4-regions may sit entirely inside the band.
        if census_regions(&g).count_with(4) == 0 {
            assert_eq!(total, 0, "{p:?}");
        }
        assert!(inside as f64 >= 0.999 * total as f64, "{p:?}: {inside}/{total}");
    }
}
