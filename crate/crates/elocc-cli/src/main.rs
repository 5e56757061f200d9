//! Command-line front end for the spin-chain convertibility pipeline.
//!
//! Exit codes: 0 success, 1 domain errors (no transition found, degenerate
//! ground state, ...), 2 usage errors. Outputs are written atomically.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};
use serde_json::json;

use elocc::io;
use elocc::{
    classify_pattern, elocc_verdict, gs_vs_excited, interception_table, locate_boundary,
    locc_convertible, normalize_descending, scaling_fit, sweep, tensor_product, verify_catalyst,
    AlphaGrid, ConversionVerdict, ModelSpec, PartitionKind, DEFAULT_TRUNC_TOL,
};

#[derive(Parser)]
#[command(
    name = "elocc",
    version,
    about = "Ground-state convertibility analysis for 1D spin-1/2 chains",
    after_help = "Config file: `key = value` lines using the long flag names; \
                  command-line flags win over config values."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep a model parameter and emit the ground-state Schmidt spectra
    Sweep(JobArgs),
    /// Pairwise interception table over a parameter sweep
    Table(JobArgs),
    /// Classify the interception-table block pattern
    Classify(JobArgs),
    /// Bracket a convertibility transition by step refinement
    Locate(JobArgs),
    /// Fit g_c(N) = a*exp(-N/b) + c to finite-size pseudo-critical points
    Scaling(ScalingArgs),
    /// Compare two Schmidt vectors read from CSV files
    Check(CheckArgs),
    /// Compare the first excited state against the ground state
    Excited(JobArgs),
    /// Run the two-qubit-catalyst worked example end to end
    DemoCatalyst(OutputArgs),
}

#[derive(Args, Clone, Default)]
struct OutputArgs {
    /// Output format: csv or json
    #[arg(long, global = false)]
    format: Option<String>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress the timestamp banner so reruns are byte-identical
    #[arg(long, action = ArgAction::SetTrue)]
    no_banner: bool,
}

#[derive(Args, Clone, Default)]
struct JobArgs {
    /// Model spec: ising[:g=..], xy[:gamma=..,h=..], xxz[:delta=..]
    #[arg(long)]
    model: Option<String>,
    /// Number of sites
    #[arg(long)]
    n: Option<usize>,
    /// Bipartition: half, comb, or sites=1,3,5
    #[arg(long)]
    cut: Option<String>,
    /// Name of the swept parameter (g, h, gamma, delta)
    #[arg(long)]
    param: Option<String>,
    /// Sweep/search range start
    #[arg(long)]
    from: Option<f64>,
    /// Sweep/search range end
    #[arg(long)]
    to: Option<f64>,
    /// Sweep step
    #[arg(long)]
    step: Option<f64>,
    /// Resolution target for locate
    #[arg(long)]
    target_step: Option<f64>,
    /// Label value starting the second block for classify
    #[arg(long)]
    split: Option<f64>,
    /// Nonconforming-cell tolerance for classify (default 0.1)
    #[arg(long)]
    tolerance: Option<f64>,
    /// Also compute first-excited-state spectra during sweeps
    #[arg(long, action = ArgAction::SetTrue)]
    excited: bool,
    #[command(flatten)]
    alpha: AlphaArgs,
    /// Schmidt-coefficient truncation threshold
    #[arg(long)]
    trunc_tol: Option<f64>,
    /// Round crossing values the way the published tables do
    #[arg(long, action = ArgAction::SetTrue)]
    round_paper: bool,
    /// Bound on concurrent sweep-point evaluation (default: ELOCC_WORKERS or all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Config file merged under the flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Clone, Default)]
struct AlphaArgs {
    #[arg(long)]
    alpha_min: Option<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    #[arg(long)]
    alpha_points: Option<usize>,
    #[arg(long)]
    refine_tol: Option<f64>,
}

#[derive(Args, Clone)]
struct ScalingArgs {
    /// Pseudo-critical points as N=gc pairs: --points 4=0.9940,6=0.9513,...
    #[arg(long)]
    points: Option<String>,
    /// Config file merged under the flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Clone)]
struct CheckArgs {
    /// First Schmidt-vector CSV
    #[arg(long)]
    a: Option<PathBuf>,
    /// Second Schmidt-vector CSV
    #[arg(long)]
    b: Option<PathBuf>,
    #[command(flatten)]
    alpha: AlphaArgs,
    #[arg(long)]
    trunc_tol: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

enum CliError {
    Usage(String),
    Domain(elocc::Error),
}

impl From<elocc::Error> for CliError {
    fn from(e: elocc::Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Fill unset options from a `key = value` config file; flags always win.
fn load_config(path: &Option<PathBuf>) -> CliResult<BTreeMap<String, String>> {
    match path {
        None => Ok(BTreeMap::new()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(elocc::Error::from)?;
            Ok(elocc::config::parse_config(&text)?)
        }
    }
}

fn merge<T: std::str::FromStr>(
    slot: &mut Option<T>,
    cfg: &BTreeMap<String, String>,
    key: &str,
) -> CliResult<()> {
    if slot.is_none() {
        if let Some(raw) = cfg.get(key) {
            let parsed = raw
                .parse::<T>()
                .map_err(|_| usage(format!("config field `{key}`: cannot parse {raw:?}")))?;
            *slot = Some(parsed);
        }
    }
    Ok(())
}

fn merge_flag(slot: &mut bool, cfg: &BTreeMap<String, String>, key: &str) -> CliResult<()> {
    if !*slot {
        if let Some(raw) = cfg.get(key) {
            *slot = match raw.to_ascii_lowercase().as_str() {
                "true" | "1" | "yes" => true,
                "false" | "0" | "no" => false,
                _ => return Err(usage(format!("config field `{key}`: expected a boolean"))),
            };
        }
    }
    Ok(())
}

fn require<T>(slot: Option<T>, name: &str) -> CliResult<T> {
    slot.ok_or_else(|| usage(format!("missing required option --{name}")))
}

impl JobArgs {
    fn merged(mut self) -> CliResult<Self> {
        let cfg = load_config(&self.config)?;
        merge(&mut self.model, &cfg, "model")?;
        merge(&mut self.n, &cfg, "n")?;
        merge(&mut self.cut, &cfg, "cut")?;
        merge(&mut self.param, &cfg, "param")?;
        merge(&mut self.from, &cfg, "from")?;
        merge(&mut self.to, &cfg, "to")?;
        merge(&mut self.step, &cfg, "step")?;
        merge(&mut self.target_step, &cfg, "target-step")?;
        merge(&mut self.split, &cfg, "split")?;
        merge(&mut self.tolerance, &cfg, "tolerance")?;
        merge_flag(&mut self.excited, &cfg, "excited")?;
        merge(&mut self.alpha.alpha_min, &cfg, "alpha-min")?;
        merge(&mut self.alpha.alpha_max, &cfg, "alpha-max")?;
        merge(&mut self.alpha.alpha_points, &cfg, "alpha-points")?;
        merge(&mut self.alpha.refine_tol, &cfg, "refine-tol")?;
        merge(&mut self.trunc_tol, &cfg, "trunc-tol")?;
        merge_flag(&mut self.round_paper, &cfg, "round-paper")?;
        merge(&mut self.workers, &cfg, "workers")?;
        merge(&mut self.output.format, &cfg, "format")?;
        merge(&mut self.output.out, &cfg, "out")?;
        merge_flag(&mut self.output.no_banner, &cfg, "no-banner")?;
        Ok(self)
    }

    fn model(&self) -> CliResult<ModelSpec> {
        Ok(ModelSpec::parse(require(self.model.clone(), "model")?.as_str())?)
    }

    fn n(&self) -> CliResult<usize> {
        require(self.n, "n")
    }

    fn partition(&self) -> CliResult<elocc::BipartitionSpec> {
        let kind = PartitionKind::parse(require(self.cut.clone(), "cut")?.as_str())?;
        Ok(kind.resolve(self.n()?)?)
    }

    fn trunc(&self) -> f64 {
        self.trunc_tol.unwrap_or(DEFAULT_TRUNC_TOL)
    }
}

impl AlphaArgs {
    fn grid(&self) -> CliResult<AlphaGrid> {
        let d = AlphaGrid::default();
        Ok(AlphaGrid::new(
            self.alpha_min.unwrap_or(d.alpha_min),
            self.alpha_max.unwrap_or(d.alpha_max),
            self.alpha_points.unwrap_or(d.points),
            self.refine_tol.unwrap_or(d.refine_tol),
        )?)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Csv,
    Json,
}

impl OutputArgs {
    fn format(&self) -> CliResult<Format> {
        match self.format.as_deref() {
            None | Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(other) => Err(usage(format!("--format must be csv or json, got {other:?}"))),
        }
    }

    fn banner(&self, what: &str) -> Option<String> {
        if self.no_banner {
            None
        } else {
            let ts = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            Some(format!(
                "elocc {} {what} generated at unix:{ts}",
                env!("CARGO_PKG_VERSION")
            ))
        }
    }

    fn emit(&self, content: String) -> CliResult<()> {
        match &self.out {
            None => {
                print!("{content}");
                if !content.ends_with('\n') {
                    println!();
                }
                Ok(())
            }
            Some(path) => Ok(io::write_atomic(path, &content)?),
        }
    }

    fn emit_json(&self, value: serde_json::Value) -> CliResult<()> {
        self.emit(format!("{:#}\n", value))
    }
}

fn init_workers(explicit: Option<usize>) {
    let from_env = std::env::var("ELOCC_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(w) = explicit.or(from_env) {
        if w > 0 {
            // Errors only if a global pool already exists, which is fine.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
        }
    }
}

fn kv_csv(pairs: &[(&str, String)], banner: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(b) = banner {
        out.push_str(&format!("# {b}\n"));
    }
    out.push_str("key,value\n");
    for (k, v) in pairs {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

fn verdict_name(v: &ConversionVerdict) -> &'static str {
    match v {
        ConversionVerdict::AtoB => "a-to-b",
        ConversionVerdict::BtoA => "b-to-a",
        ConversionVerdict::Equivalent => "equivalent",
        ConversionVerdict::Incomparable { .. } => "incomparable",
    }
}

fn run_sweep(args: JobArgs) -> CliResult<()> {
    let args = args.merged()?;
    init_workers(args.workers);
    let (from, to, step) = (
        require(args.from, "from")?,
        require(args.to, "to")?,
        require(args.step, "step")?,
    );
    let result = sweep(
        &args.model()?,
        require(args.param.clone(), "param")?.as_str(),
        (from, to, step),
        args.n()?,
        &args.partition()?,
        args.excited,
        args.trunc(),
    )?;
    let banner = args.output.banner("sweep");
    match args.output.format()? {
        Format::Csv => args.output.emit(io::sweep_to_csv(&result, banner.as_deref())),
        Format::Json => {
            let mut v = serde_json::to_value(&result).expect("sweep serializes");
            if let Some(b) = banner {
                v["banner"] = json!(b);
            }
            args.output.emit_json(v)
        }
    }
}

fn build_table(args: &JobArgs) -> CliResult<elocc::InterceptionTable> {
    let (from, to, step) = (
        require(args.from, "from")?,
        require(args.to, "to")?,
        require(args.step, "step")?,
    );
    let s = sweep(
        &args.model()?,
        require(args.param.clone(), "param")?.as_str(),
        (from, to, step),
        args.n()?,
        &args.partition()?,
        false,
        args.trunc(),
    )?;
    Ok(interception_table(&s, &args.alpha.grid()?))
}

fn run_table(args: JobArgs) -> CliResult<()> {
    let args = args.merged()?;
    init_workers(args.workers);
    let table = build_table(&args)?;
    let banner = args.output.banner("table");
    match args.output.format()? {
        Format::Csv => args
            .output
            .emit(io::table_to_csv(&table, args.round_paper, banner.as_deref())),
        Format::Json => args
            .output
            .emit_json(io::table_to_json(&table, args.round_paper, banner.as_deref())),
    }
}

fn run_classify(args: JobArgs) -> CliResult<()> {
    let args = args.merged()?;
    init_workers(args.workers);
    let split_value = require(args.split, "split")?;
    let table = build_table(&args)?;
    let split_idx = table
        .labels()
        .iter()
        .position(|&l| l >= split_value - 1e-12)
        .ok_or_else(|| usage("--split lies beyond the swept range"))?;
    let report = classify_pattern(&table, split_idx, args.tolerance.unwrap_or(0.1))?;
    let banner = args.output.banner("classify");
    match args.output.format()? {
        Format::Json => {
            let mut v = serde_json::to_value(&report).expect("report serializes");
            if let Some(b) = banner {
                v["banner"] = json!(b);
            }
            args.output.emit_json(v)
        }
        Format::Csv => args.output.emit(kv_csv(
            &[
                ("class", format!("{:?}", report.class)),
                (
                    "first_block_crossing_fraction",
                    format!("{}", report.first_block_crossing_fraction),
                ),
                (
                    "second_block_crossing_fraction",
                    format!("{}", report.second_block_crossing_fraction),
                ),
                (
                    "off_diagonal_crossing_fraction",
                    format!("{}", report.off_diagonal_crossing_fraction),
                ),
            ],
            banner.as_deref(),
        )),
    }
}

fn run_locate(args: JobArgs) -> CliResult<()> {
    let args = args.merged()?;
    init_workers(args.workers);
    let bracket = locate_boundary(
        &args.model()?,
        require(args.param.clone(), "param")?.as_str(),
        (require(args.from, "from")?, require(args.to, "to")?),
        args.n()?,
        &args.partition()?,
        require(args.target_step, "target-step")?,
        &args.alpha.grid()?,
        args.trunc(),
    )?;
    let banner = args.output.banner("locate");
    match args.output.format()? {
        Format::Json => args.output.emit_json(io::bracket_to_json(&bracket, banner.as_deref())),
        Format::Csv => args.output.emit(kv_csv(
            &[
                ("lower", format!("{}", bracket.lower)),
                ("upper", format!("{}", bracket.upper)),
                ("step", format!("{}", bracket.step)),
            ],
            banner.as_deref(),
        )),
    }
}

fn run_scaling(args: ScalingArgs) -> CliResult<()> {
    let mut args = args;
    let cfg = load_config(&args.config)?;
    merge(&mut args.points, &cfg, "points")?;
    merge(&mut args.output.format, &cfg, "format")?;
    merge(&mut args.output.out, &cfg, "out")?;
    merge_flag(&mut args.output.no_banner, &cfg, "no-banner")?;

    let spec = require(args.points.clone(), "points")?;
    let mut points = Vec::new();
    for piece in spec.split(',') {
        let (n, gc) = piece
            .split_once('=')
            .ok_or_else(|| usage(format!("--points entries are N=gc, got {piece:?}")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad size in --points entry {piece:?}")))?;
        let gc: f64 = gc
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad value in --points entry {piece:?}")))?;
        points.push((n, gc));
    }
    let fit = scaling_fit(&points)?;
    let banner = args.output.banner("scaling");
    match args.output.format()? {
        Format::Json => args.output.emit_json(io::fit_to_json(&fit, banner.as_deref())),
        Format::Csv => args.output.emit(kv_csv(
            &[
                ("a", format!("{}", fit.a)),
                ("b", format!("{}", fit.b)),
                ("c", format!("{}", fit.c)),
                ("rms_residual", format!("{}", fit.rms_residual)),
                ("degenerate", format!("{}", fit.degenerate)),
            ],
            banner.as_deref(),
        )),
    }
}

fn run_check(args: CheckArgs) -> CliResult<()> {
    let mut args = args;
    let cfg = load_config(&args.config)?;
    merge(&mut args.a, &cfg, "a")?;
    merge(&mut args.b, &cfg, "b")?;
    merge(&mut args.trunc_tol, &cfg, "trunc-tol")?;
    merge(&mut args.output.format, &cfg, "format")?;
    merge(&mut args.output.out, &cfg, "out")?;
    merge_flag(&mut args.output.no_banner, &cfg, "no-banner")?;

    let trunc = args.trunc_tol.unwrap_or(DEFAULT_TRUNC_TOL);
    let load = |path: &PathBuf| -> CliResult<elocc::SchmidtVector> {
        let text = std::fs::read_to_string(path).map_err(elocc::Error::from)?;
        Ok(normalize_descending(&io::read_schmidt_csv(&text)?, trunc)?)
    };
    let va = load(&require(args.a.clone(), "a")?)?;
    let vb = load(&require(args.b.clone(), "b")?)?;
    let verdict = elocc_verdict(&va, &vb, &args.alpha.grid()?);
    println!("verdict: {}", verdict_name(&verdict));
    if let ConversionVerdict::Incomparable { crossings } = &verdict {
        println!("crossings: {crossings:?}");
    }
    let banner = args.output.banner("check");
    if args.output.out.is_some() || args.output.format.is_some() {
        let crossings = match &verdict {
            ConversionVerdict::Incomparable { crossings } => crossings.clone(),
            _ => Vec::new(),
        };
        match args.output.format()? {
            Format::Json => {
                let mut v = json!({
                    "verdict": verdict_name(&verdict),
                    "crossings": crossings,
                });
                if let Some(b) = banner {
                    v["banner"] = json!(b);
                }
                args.output.emit_json(v)?;
            }
            Format::Csv => args.output.emit(kv_csv(
                &[
                    ("verdict", verdict_name(&verdict).to_string()),
                    (
                        "crossings",
                        crossings
                            .iter()
                            .map(|c| format!("{c:.4}"))
                            .collect::<Vec<_>>()
                            .join(";"),
                    ),
                ],
                banner.as_deref(),
            ))?,
        }
    }
    Ok(())
}

fn run_excited(args: JobArgs) -> CliResult<()> {
    let args = args.merged()?;
    init_workers(args.workers);
    let verdict = gs_vs_excited(
        &args.model()?,
        args.n()?,
        &args.partition()?,
        &args.alpha.grid()?,
        args.trunc(),
    )?;
    println!("excited vs ground: {}", verdict_name(&verdict));
    if let ConversionVerdict::Incomparable { crossings } = &verdict {
        println!("crossings: {crossings:?}");
    }
    if args.output.out.is_some() || args.output.format.is_some() {
        let crossings = match &verdict {
            ConversionVerdict::Incomparable { crossings } => crossings.clone(),
            _ => Vec::new(),
        };
        let banner = args.output.banner("excited");
        match args.output.format()? {
            Format::Json => {
                let mut v = json!({
                    "verdict": verdict_name(&verdict),
                    "crossings": crossings,
                });
                if let Some(b) = banner {
                    v["banner"] = json!(b);
                }
                args.output.emit_json(v)?;
            }
            Format::Csv => args.output.emit(kv_csv(
                &[("verdict", verdict_name(&verdict).to_string())],
                banner.as_deref(),
            ))?,
        }
    }
    Ok(())
}

fn fmt_probs(coeffs: &[f64]) -> String {
    let parts: Vec<String> = coeffs
        .iter()
        .map(|x| {
            let s = format!("{x:.6}");
            let s = s.trim_end_matches('0').trim_end_matches('.');
            if s.is_empty() { "0".to_string() } else { s.to_string() }
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

fn run_demo(args: OutputArgs) -> CliResult<()> {
    let p = normalize_descending(&[0.4, 0.4, 0.1, 0.1], 1e-12)?;
    let q = normalize_descending(&[0.5, 0.25, 0.25], 1e-12)?;
    let c = normalize_descending(&[0.6, 0.4], 1e-12)?;
    let p_to_q = locc_convertible(&p, &q);
    let q_to_p = locc_convertible(&q, &p);
    let catalyzed = verify_catalyst(&p, &q, &c);
    let pc = tensor_product(&p, &c);
    let qc = tensor_product(&q, &c);

    println!("|Psi>  spectrum: {}", fmt_probs(p.coeffs()));
    println!("|Psi'> spectrum: {}", fmt_probs(q.coeffs()));
    println!(
        "LOCC: {}",
        if !p_to_q && !q_to_p {
            "incomparable (majorization fails both ways)"
        } else {
            "convertible"
        }
    );
    println!(
        "with catalyst (0.6, 0.4): {}",
        if catalyzed { "convertible" } else { "not convertible" }
    );
    println!("|Psi  x phi> spectrum: {}", fmt_probs(pc.coeffs()));
    println!("|Psi' x phi> spectrum: {}", fmt_probs(qc.coeffs()));

    if args.out.is_some() || args.format.is_some() {
        let banner = args.banner("demo-catalyst");
        match args.format()? {
            Format::Json => {
                let mut v = json!({
                    "locc_p_to_q": p_to_q,
                    "locc_q_to_p": q_to_p,
                    "catalyst": [0.6, 0.4],
                    "catalyzed": catalyzed,
                    "product_spectrum_p": pc.coeffs(),
                    "product_spectrum_q": qc.coeffs(),
                });
                if let Some(b) = banner {
                    v["banner"] = json!(b);
                }
                args.emit_json(v)?;
            }
            Format::Csv => args.emit(kv_csv(
                &[
                    ("locc_p_to_q", p_to_q.to_string()),
                    ("locc_q_to_p", q_to_p.to_string()),
                    ("catalyzed", catalyzed.to_string()),
                ],
                banner.as_deref(),
            ))?,
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Sweep(a) => run_sweep(a),
        Cmd::Table(a) => run_table(a),
        Cmd::Classify(a) => run_classify(a),
        Cmd::Locate(a) => run_locate(a),
        Cmd::Scaling(a) => run_scaling(a),
        Cmd::Check(a) => run_check(a),
        Cmd::Excited(a) => run_excited(a),
        Cmd::DemoCatalyst(a) => run_demo(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
