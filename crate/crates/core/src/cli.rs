//! Command-line front end.
//!
//! Exit codes: 0 success (generic), 1 usage or invalid input, 2 nongeneric
//! design, 3 classifier/oracle discordance, 4 verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::DEFAULT_EPS;
use crate::error::Error;
use crate::kinematics::DesignParams;
use crate::report::{
    partition_to_csv, render_joint_svg, render_partition_svg, render_workspace_svg, report_to_csv, to_json,
    AnalysisReport, Axis, ParamsRecord, PartitionGrid,
};
use crate::topology::{
    numeric_signature, SignatureOptions, DEFAULT_ASPECT_GRID, DEFAULT_CENSUS_N, DEFAULT_TRACE_N, MIN_TOPOLOGY_SAMPLES,
};
use crate::verify::{run_all, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NONGENERIC: i32 = 2;
pub const EXIT_DISCORDANT: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

/// Environment variable capping worker threads (0 or unset: automatic).
pub const THREADS_ENV: &str = "ORTHOKIN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "orthokin", version, about = "Workspace topology of 3R orthogonal manipulators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label a design from the separating surfaces.
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps_generic: f64,
        /// Print the JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Label a design and check it against the numeric oracle.
    Analyze {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps_generic: f64,
        #[arg(long, default_value_t = DEFAULT_TRACE_N)]
        trace_n: usize,
        #[arg(long, default_value_t = DEFAULT_CENSUS_N)]
        census_n: usize,
        #[arg(long, default_value_t = DEFAULT_ASPECT_GRID)]
        aspect_grid: usize,
        /// Directory for analysis.json, analysis.csv, workspace.svg and joint.svg.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Partition map over (d3, d4) at fixed r2.
    Sweep {
        #[arg(long)]
        r2: f64,
        /// min:max:count, endpoints included.
        #[arg(long)]
        d3: String,
        /// min:max:count, endpoints included.
        #[arg(long)]
        d4: String,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps_generic: f64,
        /// Directory for partition.csv and partition.svg.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Re-check this many random generic cells with the oracle.
        #[arg(long, default_value_t = 0)]
        oracle_sample: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the self-verification suites.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps_generic: f64,
        #[arg(long, default_value_t = DEFAULT_TRACE_N)]
        trace_n: usize,
    },
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 1.0)]
    d2: f64,
    #[arg(long, allow_hyphen_values = true)]
    d3: f64,
    #[arg(long, allow_hyphen_values = true)]
    d4: f64,
    #[arg(long, allow_hyphen_values = true)]
    r2: f64,
}

impl ParamArgs {
    fn record(&self) -> crate::Result<ParamsRecord> {
        ParamsRecord::new(self.d2, self.d3, self.d4, self.r2)
    }
}

fn configure_threads() {
    let n = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    if n > 0 {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let target: &mut dyn Write = if help { out } else { err };
            let _ = write!(target, "{}", e.render());
            return if help { EXIT_OK } else { EXIT_USAGE };
        }
    };
    configure_threads();
    let res = match cli.command {
        Command::Classify { params, eps_generic, json } => cmd_classify(&params, eps_generic, json, out),
        Command::Analyze { params, eps_generic, trace_n, census_n, aspect_grid, out_dir } => {
            let opts = SignatureOptions { trace_n, aspect_grid, census_n: Some(census_n) };
            cmd_analyze(&params, eps_generic, &opts, &out_dir, out)
        }
        Command::Sweep { r2, d3, d4, eps_generic, out_dir, oracle_sample, seed } => {
            cmd_sweep(r2, &d3, &d4, eps_generic, &out_dir, oracle_sample, seed, out)
        }
        Command::Verify { seed, samples, eps_generic, trace_n } => cmd_verify(seed, samples, eps_generic, trace_n, out),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

type CmdResult = std::result::Result<i32, Box<dyn std::error::Error>>;

fn check_eps(eps: f64) -> crate::Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("--eps-generic must lie in (0, 1), got {eps}")))
    }
}

fn print_label(r: &AnalysisReport, out: &mut dyn Write) -> std::io::Result<()> {
    let p = r.params.normalized;
    writeln!(out, "design: d3 = {}, d4 = {}, r2 = {} (normalized by d2 = {})", p.d3(), p.d4(), p.r2(), r.params.d2)?;
    writeln!(out, "label: {}", r.label.label)?;
    match r.label.domain {
        Some(d) => writeln!(out, "domain: {d}")?,
        None => writeln!(out, "domain: -")?,
    }
    if !r.label.near_surfaces.is_empty() {
        let names: Vec<&str> = r.label.near_surfaces.iter().map(|s| s.name()).collect();
        writeln!(out, "near surfaces: {}", names.join(", "))?;
    }
    writeln!(out, "surfaces:")?;
    for (s, v) in r.surfaces.levels() {
        writeln!(out, "  {:<3} = {v:.10}", s.name())?;
    }
    writeln!(out, "tree:")?;
    for (k, step) in r.label.tree_path.iter().enumerate() {
        writeln!(out, "  {}{step}", "  ".repeat(k))?;
    }
    Ok(())
}

fn cmd_classify(params: &ParamArgs, eps: f64, json: bool, out: &mut dyn Write) -> CmdResult {
    check_eps(eps)?;
    let r = AnalysisReport::classify(params.record()?, eps)?;
    if json {
        out.write_all(&to_json(&r, true))?;
    } else {
        print_label(&r, out)?;
    }
    Ok(if r.label.is_generic() { EXIT_OK } else { EXIT_NONGENERIC })
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, bytes)?;
    Ok(path)
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or("-".to_string(), |x| x.to_string())
}

fn cmd_analyze(params: &ParamArgs, eps: f64, opts: &SignatureOptions, dir: &Path, out: &mut dyn Write) -> CmdResult {
    check_eps(eps)?;
    let r = AnalysisReport::analyze(params.record()?, eps, opts)?;
    print_label(&r, out)?;
    let sig = r.signature.as_ref().expect("analyze fills the signature");
    let a = r.agreement.as_ref().expect("analyze fills the agreement");
    writeln!(out, "oracle:            expected  observed")?;
    writeln!(out, "  cusps            {:>8}  {:>8}", fmt_opt(&a.cusps.expected), fmt_opt(&a.cusps.observed))?;
    writeln!(out, "  nodes            {:>8}  {:>8}", fmt_opt(&a.nodes.expected), fmt_opt(&a.nodes.observed))?;
    writeln!(out, "  aspects          {:>8}  {:>8}", fmt_opt(&a.aspects.expected), fmt_opt(&a.aspects.observed))?;
    writeln!(out, "  hole             {:>8}  {:>8}", fmt_opt(&a.hole.expected), fmt_opt(&a.hole.observed))?;
    if let Some(c) = &sig.region_census {
        let counts: Vec<String> = [2, 4].iter().map(|k| format!("{} with {k} IKS", c.count_with(*k))).collect();
        writeln!(out, "  regions: {}", counts.join(", "))?;
    }
    for f in &sig.failed_checks {
        writeln!(out, "  failed check: {f}")?;
    }
    for (name, bytes) in [
        ("analysis.json", to_json(&r, true)),
        ("analysis.csv", report_to_csv(&r)),
        ("workspace.svg", render_workspace_svg(&r).into_bytes()),
        ("joint.svg", render_joint_svg(&r).into_bytes()),
    ] {
        let path = write_file(dir, name, &bytes)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(match r.is_concordant() {
        None => {
            writeln!(out, "concordance: not claimed (nongeneric design)")?;
            EXIT_NONGENERIC
        }
        Some(true) => {
            writeln!(out, "concordance: yes")?;
            EXIT_OK
        }
        Some(false) => {
            writeln!(out, "concordance: NO")?;
            EXIT_DISCORDANT
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    r2: f64,
    d3: &str,
    d4: &str,
    eps: f64,
    dir: &Path,
    oracle_sample: usize,
    seed: u64,
    out: &mut dyn Write,
) -> CmdResult {
    check_eps(eps)?;
    let grid = PartitionGrid::compute(r2, Axis::parse(d3)?, Axis::parse(d4)?, eps)?;
    writeln!(out, "r2 = {r2}, {} x {} cells", grid.d3_axis.count, grid.d4_axis.count)?;
    for (l, n) in grid.label_counts() {
        writeln!(out, "  {:<10} {n}", l.name())?;
    }
    for (name, bytes) in
        [("partition.csv", partition_to_csv(&grid)), ("partition.svg", render_partition_svg(&grid).into_bytes())]
    {
        let path = write_file(dir, name, &bytes)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    if oracle_sample > 0 {
        let generic: Vec<(usize, usize)> = (0..grid.d4_axis.count)
            .flat_map(|j| (0..grid.d3_axis.count).map(move |i| (i, j)))
            .filter(|&(i, j)| grid.label_at(i, j).is_generic())
            .collect();
        if !generic.is_empty() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let picks: Vec<(usize, usize)> =
                (0..oracle_sample).map(|_| generic[rng.gen_range(0..generic.len())]).collect();
            let opts = SignatureOptions { census_n: None, ..Default::default() };
            let mut agree = 0;
            for &(i, j) in &picks {
                let l = grid.label_at(i, j);
                let p = DesignParams::new(grid.d3_axis.value(i), grid.d4_axis.value(j), r2)?;
                let ok = numeric_signature(&p, &opts).is_ok_and(|s| {
                    Some(s.cusps.len()) == l.expected_cusps() && l.expected_nodes().is_none_or(|n| n == s.nodes.len())
                });
                agree += usize::from(ok);
            }
            writeln!(out, "oracle concordance: {agree}/{} sampled cells", picks.len())?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(seed: u64, samples: usize, eps: f64, trace_n: usize, out: &mut dyn Write) -> CmdResult {
    check_eps(eps)?;
    // Sampled designs sit mid-interval; a coarse eps would reject all of them.
    if eps > 1e-3 {
        return Err(Box::new(Error::InvalidArgument(format!(
            "--eps-generic must be at most 1e-3 for verify, got {eps}"
        ))));
    }
    if trace_n < MIN_TOPOLOGY_SAMPLES {
        return Err(Box::new(Error::InvalidArgument(format!(
            "--trace-n must be at least {MIN_TOPOLOGY_SAMPLES}, got {trace_n}"
        ))));
    }
    if samples == 0 {
        return Err(Box::new(Error::InvalidArgument("--samples must be at least 1".into())));
    }
    let cfg = VerifyConfig { seed, samples, eps, trace_n, ..Default::default() };
    let results = run_all(&cfg);
    let mut first_fail = None;
    for r in &results {
        writeln!(
            out,
            "{:<6} {:<32} {}/{} (need {})",
            if r.ok() { "PASS" } else { "FAIL" },
            r.name,
            r.passed,
            r.total,
            r.required
        )?;
        for f in &r.failures {
            writeln!(out, "         {f}")?;
        }
        if !r.ok() && first_fail.is_none() {
            first_fail = Some(r.name.clone());
        }
    }
    Ok(match first_fail {
        Some(name) => {
            writeln!(out, "verification failed: {name}")?;
            EXIT_VERIFY_FAILED
        }
        None => {
            writeln!(out, "all suites passed")?;
            EXIT_OK
        }
    })
}
