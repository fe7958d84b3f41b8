//! c2dl: discretise continuous-time models by Loewner interpolation and
//! measure the result against classic discretisation rules.
//!
//! Four subcommands cover the workflow: `discretize` runs the pipeline end to
//! end and writes the discrete model with its error report, `compare` tables
//! several methods on one plant, `sweep` scans the truncation order, and
//! `respond` exports time-domain responses. Every output file embeds the
//! fully resolved configuration, and identical inputs produce byte-identical
//! outputs.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 numeric failure,
//! 4 unsupported combination.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use loewner_c2d::loewner::FrequencyDataSet;
use loewner_c2d::metrics::{
    eval_grid, freq_error, order_sweep, response_comparison, SweepRow, TestSignal,
};
use loewner_c2d::models::{
    load_model, save_discrete_model, ContinuousModel, DiscreteStateSpace, LoadedModel,
};
use loewner_c2d::pipeline::{self, DiscretizeOptions, Stabilization};
use loewner_c2d::{baselines, plants, Error as CoreError};

#[derive(Parser)]
#[command(
    name = "c2dl",
    version,
    about = "Discretise continuous-time LTI models by Loewner interpolation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the pipeline end to end; write the discrete model, an error
    /// report, and a run log
    Discretize(DiscretizeArgs),
    /// Tabulate frequency errors (optionally time-domain errors) across
    /// discretisation methods
    Compare(CompareArgs),
    /// Scan the truncation order; report errors before and after
    /// stabilization at each order
    Sweep(SweepArgs),
    /// Export time responses of discretised models next to the continuous
    /// reference
    Respond(RespondArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Model: a JSON file path or a built-in name (paper-ex1, paper-tds)
    #[arg(long)]
    model: Option<String>,
    /// Sampling period in seconds
    #[arg(long)]
    h: Option<f64>,
    /// Half the number of interpolation points; the dataset holds 2m
    #[arg(long)]
    m: Option<usize>,
    /// Upper bound on the discrete model order; defaults to the numerical
    /// rank of the data
    #[arg(long)]
    kbar: Option<usize>,
    /// Relative singular value cutoff for the numerical rank
    #[arg(long = "rank-tol")]
    rank_tol: Option<f64>,
    /// Number of evaluation frequencies for error measurements
    #[arg(long)]
    grid: Option<usize>,
    /// Unstable interpolant handling: nehari, l2, or none
    #[arg(long)]
    stabilize: Option<String>,
    /// Output directory for generated files
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file supplying any of the long options; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
    /// Recorded in output provenance only; the pipeline draws no randomness
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DiscretizeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Interpolate a measured frequency dataset (CSV) instead of sampling a
    /// model; mutually exclusive with --model
    #[arg(long)]
    dataset: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated methods: tustin, zoh, impulse, loewner
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
    /// Append a time-domain e2 column for this input signal (impulse or step)
    #[arg(long)]
    e2: Option<String>,
    /// Simulation horizon in seconds for the e2 column
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Simulation step for the e2 column; must evenly subdivide h
    #[arg(long)]
    dt: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// First truncation order of the sweep
    #[arg(long)]
    kmin: Option<usize>,
    /// Last truncation order of the sweep; defaults to the numerical rank
    #[arg(long)]
    kmax: Option<usize>,
}

#[derive(Args)]
struct RespondArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated methods to discretise with: tustin, zoh, impulse,
    /// loewner
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
    /// Input signal: impulse or step
    #[arg(long)]
    signal: Option<String>,
    /// Simulation horizon in seconds
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Simulation step; must evenly subdivide the sampling period
    #[arg(long)]
    dt: Option<f64>,
    /// Also simulate a discrete model loaded from this JSON file
    #[arg(long)]
    discrete: Option<PathBuf>,
}

/// Optional settings accepted from a --config file. Unknown keys are
/// rejected so a typo cannot silently fall back to a default.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<String>,
    dataset: Option<String>,
    h: Option<f64>,
    m: Option<usize>,
    k_bar: Option<usize>,
    rank_tol: Option<f64>,
    grid_points: Option<usize>,
    stabilize: Option<String>,
    methods: Option<Vec<String>>,
    signal: Option<String>,
    t_end: Option<f64>,
    dt: Option<f64>,
    k_min: Option<usize>,
    k_max: Option<usize>,
    seed: Option<u64>,
    out: Option<String>,
}

/// The fully resolved configuration, embedded verbatim in every output file.
/// Fields that do not apply to a command serialize as null.
#[derive(Clone, Serialize)]
struct Provenance {
    command: &'static str,
    model: Option<String>,
    dataset: Option<String>,
    discrete: Option<String>,
    h: f64,
    m: usize,
    k_bar: Option<usize>,
    rank_tol: f64,
    grid_points: usize,
    stabilize: String,
    methods: Option<Vec<String>>,
    signal: Option<String>,
    t_end: Option<f64>,
    dt: Option<f64>,
    k_min: Option<usize>,
    k_max: Option<usize>,
    seed: Option<u64>,
}

struct CliError {
    code: i32,
    msg: String,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError { code: 2, msg: msg.into() }
}

fn unsupported(msg: impl Into<String>) -> CliError {
    CliError { code: 4, msg: msg.into() }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::Io(_)
            | CoreError::Parse(_)
            | CoreError::InvalidInput(_)
            | CoreError::Dimension(_)
            | CoreError::NonFinite(_)
            | CoreError::NotSiso { .. } => 2,
            CoreError::Unsupported(_) | CoreError::NotStrictlyProper(_) => 4,
            _ => 3,
        };
        CliError { code, msg: e.to_string() }
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Discretize(a) => cmd_discretize(a),
        Cmd::Compare(a) => cmd_compare(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Respond(a) => cmd_respond(a),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.msg);
        std::process::exit(e.code);
    }
}

/// Settings shared by all commands after merging flags over the config file.
struct Base {
    model: Option<String>,
    h: Option<f64>,
    m: usize,
    k_bar: Option<usize>,
    rank_tol: f64,
    grid_points: usize,
    stabilize_name: String,
    stabilization: Stabilization,
    seed: Option<u64>,
    out: PathBuf,
}

fn parse_stabilize(name: &str) -> Result<Stabilization, CliError> {
    match name {
        "nehari" => Ok(Stabilization::Nehari),
        "l2" => Ok(Stabilization::L2Truncate),
        "none" => Ok(Stabilization::None),
        other => Err(usage(format!(
            "unknown stabilization '{other}'; expected nehari, l2, or none"
        ))),
    }
}

fn resolve_base(c: &CommonArgs) -> Result<(Base, FileConfig), CliError> {
    let file: FileConfig = match &c.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("config {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| usage(format!("config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };

    let h = c.h.or(file.h);
    if let Some(h) = h {
        if !(h > 0.0 && h.is_finite()) {
            return Err(usage(format!("sampling period h = {h} must be positive")));
        }
    }
    let m = c.m.or(file.m).unwrap_or(50);
    if m == 0 {
        return Err(usage("m must be at least 1"));
    }
    let k_bar = c.kbar.or(file.k_bar);
    if k_bar == Some(0) {
        return Err(usage("kbar must be at least 1"));
    }
    let rank_tol = c.rank_tol.or(file.rank_tol).unwrap_or(1e-10);
    if !(rank_tol > 0.0 && rank_tol < 1.0) {
        return Err(usage(format!("rank tolerance {rank_tol} must lie in (0, 1)")));
    }
    let grid_points = c.grid.or(file.grid_points).unwrap_or(5000);
    if grid_points < 2 {
        return Err(usage("the evaluation grid needs at least 2 points"));
    }
    let stabilize_name =
        c.stabilize.clone().or_else(|| file.stabilize.clone()).unwrap_or_else(|| "nehari".into());
    let stabilization = parse_stabilize(&stabilize_name)?;
    let out = c.out.clone().or_else(|| file.out.clone().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."));

    Ok((
        Base {
            model: c.model.clone().or_else(|| file.model.clone()),
            h,
            m,
            k_bar,
            rank_tol,
            grid_points,
            stabilize_name,
            stabilization,
            seed: c.seed.or(file.seed),
            out,
        },
        file,
    ))
}

impl Base {
    fn require_h(&self) -> Result<f64, CliError> {
        self.h.ok_or_else(|| usage("--h is required"))
    }

    fn require_model(&self) -> Result<&str, CliError> {
        self.model
            .as_deref()
            .ok_or_else(|| usage("--model is required (a path, paper-ex1, or paper-tds)"))
    }

    fn discretize_options(&self, h: f64) -> DiscretizeOptions {
        let mut o = DiscretizeOptions::new(h);
        o.m = self.m;
        o.k_bar = self.k_bar;
        o.rank_tol = self.rank_tol;
        o.eval_points = self.grid_points;
        o.stabilization = self.stabilization;
        o
    }

    fn provenance(&self, command: &'static str, h: f64) -> Provenance {
        Provenance {
            command,
            model: self.model.clone(),
            dataset: None,
            discrete: None,
            h,
            m: self.m,
            k_bar: self.k_bar,
            rank_tol: self.rank_tol,
            grid_points: self.grid_points,
            stabilize: self.stabilize_name.clone(),
            methods: None,
            signal: None,
            t_end: None,
            dt: None,
            k_min: None,
            k_max: None,
            seed: self.seed,
        }
    }
}

fn load_continuous(spec: &str) -> Result<ContinuousModel, CliError> {
    match spec {
        "paper-ex1" => Ok(ContinuousModel::StateSpace(plants::paper_ex1())),
        "paper-tds" => Ok(ContinuousModel::TimeDelay(plants::paper_tds())),
        path => match load_model(Path::new(path))? {
            LoadedModel::Continuous(g) => Ok(g),
            LoadedModel::Discrete(_) => Err(usage(format!(
                "{path} holds a discrete model; this command needs a continuous one"
            ))),
        },
    }
}

const METHODS: [&str; 4] = ["tustin", "zoh", "impulse", "loewner"];

fn validate_methods(methods: &[String]) -> Result<(), CliError> {
    if methods.is_empty() {
        return Err(usage("at least one --method is required (tustin, zoh, impulse, loewner)"));
    }
    for (i, m) in methods.iter().enumerate() {
        if !METHODS.contains(&m.as_str()) {
            return Err(usage(format!(
                "unknown method '{m}'; expected tustin, zoh, impulse, or loewner"
            )));
        }
        if methods[..i].contains(m) {
            return Err(usage(format!("method '{m}' given twice")));
        }
    }
    Ok(())
}

/// Builds the discrete model for one named method. The classic rules need a
/// finite state-space realization, which a delay network does not have.
fn build_method(
    g: &ContinuousModel,
    method: &str,
    base: &Base,
    h: f64,
) -> Result<DiscreteStateSpace, CliError> {
    if method == "loewner" {
        return Ok(pipeline::discretize(g, &base.discretize_options(h))?.model);
    }
    let ss = match g {
        ContinuousModel::StateSpace(ss) => ss,
        ContinuousModel::TimeDelay(_) => {
            return Err(unsupported(format!(
                "the {method} rule needs a finite state-space model and is not available \
                 for delay networks"
            )));
        }
    };
    Ok(match method {
        "tustin" => baselines::tustin(ss, h)?,
        "zoh" => baselines::zoh(ss, h)?,
        "impulse" => baselines::impulse_invariant(ss, h)?,
        other => return Err(usage(format!("unknown method '{other}'"))),
    })
}

fn parse_signal(name: &str) -> Result<TestSignal, CliError> {
    match name {
        "impulse" => Ok(TestSignal::Impulse),
        "step" => Ok(TestSignal::Step),
        other => Err(usage(format!("unknown signal '{other}'; expected impulse or step"))),
    }
}

/// 17 significant digits; NaN renders as a bare `nan` token.
fn fmt(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn config_comment(prov: &Provenance) -> Result<String, CliError> {
    let line = serde_json::to_string(prov)
        .map_err(|e| CliError { code: 2, msg: format!("serialize config: {e}") })?;
    Ok(format!("# config = {line}\n"))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(())
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError { code: 2, msg: format!("serialize {}: {e}", path.display()) })?;
    text.push('\n');
    write_text(path, &text)
}

fn ensure_out(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))
}

fn cmd_discretize(args: DiscretizeArgs) -> Result<(), CliError> {
    let (base, file) = resolve_base(&args.common)?;
    let dataset = args.dataset.or_else(|| file.dataset.as_ref().map(PathBuf::from));
    ensure_out(&base.out)?;

    let mut report = None;
    let (outcome, h) = if let Some(ds_path) = &dataset {
        if base.model.is_some() {
            return Err(usage("--model and --dataset are mutually exclusive"));
        }
        let text = fs::read_to_string(ds_path)
            .map_err(|e| usage(format!("{}: {e}", ds_path.display())))?;
        let ds = FrequencyDataSet::from_csv(&text)?;
        if let Some(h) = base.h {
            if (h - ds.h).abs() > 1e-12 * ds.h {
                return Err(usage(format!(
                    "--h = {h} disagrees with the dataset period {}",
                    ds.h
                )));
            }
        }
        (pipeline::discretize_dataset(&ds, &base.discretize_options(ds.h))?, ds.h)
    } else {
        let spec = base.require_model()?;
        let h = base.require_h()?;
        let g = load_continuous(spec)?;
        let opts = base.discretize_options(h);
        // Written before the pipeline runs so a later failure still leaves
        // the sampled data behind for inspection, and so a --dataset rerun
        // can reproduce the model without the symbolic plant.
        let ds = loewner_c2d::loewner::build_dataset(&g, h, opts.m, &opts.grid)?;
        write_text(&base.out.join("dataset.csv"), &ds.to_csv())?;
        let outcome = pipeline::discretize_dataset(&ds, &opts)?;
        let grid = eval_grid(h, base.grid_points);
        report = Some(freq_error(&g, &outcome.model, &grid)?);
        (outcome, h)
    };

    let mut prov = base.provenance("discretize", h);
    prov.dataset = dataset.as_ref().map(|p| p.display().to_string());
    let prov_value = serde_json::to_value(&prov)
        .map_err(|e| CliError { code: 2, msg: format!("serialize config: {e}") })?;

    let model_path = base.out.join("model.json");
    save_discrete_model(&outcome.model, Some(prov_value.clone()), &model_path)?;

    if let Some(rep) = &report {
        write_json(&base.out.join("report.json"), &json!({ "config": prov, "report": rep }))?;
    }
    write_json(
        &base.out.join("log.json"),
        &json!({
            "config": prov,
            "rank": outcome.rank,
            "k_target": outcome.k_target,
            "k_used": outcome.k_used,
            "stable": outcome.stable,
            "order": outcome.model.order(),
            "gap_to_exact": outcome.gap_to_exact,
            "attempts": outcome.attempts,
        }),
    )?;

    println!(
        "rank r = {} (tol {:.1e}); interpolant order k = {}; output order {} ({})",
        outcome.rank.r,
        outcome.rank.tol,
        outcome.k_used,
        outcome.model.order(),
        if outcome.stable { "stable" } else { "unstable" },
    );
    if let Some(rep) = &report {
        println!("relative frequency error {:.4}%", rep.e_inf_rel);
    }
    let files = if report.is_some() {
        "model.json, report.json, log.json, dataset.csv"
    } else {
        "model.json, log.json"
    };
    println!("wrote {files} in {}", base.out.display());
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<(), CliError> {
    let (base, file) = resolve_base(&args.common)?;
    let methods = if args.method.is_empty() {
        file.methods.clone().unwrap_or_default()
    } else {
        args.method.clone()
    };
    validate_methods(&methods)?;
    let e2_signal = match args.e2.as_deref() {
        Some(name) => Some(parse_signal(name)?),
        None => None,
    };
    let spec = base.require_model()?.to_string();
    let h = base.require_h()?;
    let g = load_continuous(&spec)?;
    let grid = eval_grid(h, base.grid_points);
    let t_end = args.t_end.or(file.t_end).unwrap_or(60.0);
    let dt = args.dt.or(file.dt).unwrap_or(h / 20.0);
    ensure_out(&base.out)?;

    let mut prov = base.provenance("compare", h);
    prov.methods = Some(methods.clone());
    if e2_signal.is_some() {
        prov.signal = args.e2.clone();
        prov.t_end = Some(t_end);
        prov.dt = Some(dt);
    }

    let mut csv = config_comment(&prov)?;
    csv.push_str("method,order,stable,e_inf,e_inf_rel,argmax_omega");
    if e2_signal.is_some() {
        csv.push_str(",e2_pct");
    }
    csv.push('\n');

    for method in &methods {
        let gd = build_method(&g, method, &base, h)?;
        let rep = freq_error(&g, &gd, &grid)?;
        let stable = gd.is_stable()?;
        csv.push_str(&format!(
            "{method},{},{},{},{},{}",
            gd.order(),
            stable,
            fmt(rep.e_inf),
            fmt(rep.e_inf_rel),
            fmt(rep.argmax_omega),
        ));
        if let Some(signal) = e2_signal {
            let cmp = response_comparison(&g, &gd, signal, t_end, dt)?;
            csv.push_str(&format!(",{}", fmt(cmp.e2_pct)));
            println!("{method}: e_inf_rel = {:.4}%, e2 = {:.4}%", rep.e_inf_rel, cmp.e2_pct);
        } else {
            println!("{method}: e_inf_rel = {:.4}%", rep.e_inf_rel);
        }
        csv.push('\n');
    }

    let path = base.out.join("compare.csv");
    write_text(&path, &csv)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn sweep_csv_row(row: &SweepRow) -> String {
    let stable = match (&row.failure, row.stable_unproj) {
        (Some(_), _) => "failed",
        (None, Some(true)) => "true",
        (None, Some(false)) => "false",
        (None, None) => "failed",
    };
    format!(
        "{},{},{},{stable},{},{}\n",
        row.k,
        fmt(row.e_rel_unproj),
        fmt(row.e_rel_proj),
        row.order_proj,
        fmt(row.gap_to_exact),
    )
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let (base, file) = resolve_base(&args.common)?;
    let spec = base.require_model()?.to_string();
    let h = base.require_h()?;
    let g = load_continuous(&spec)?;
    let k_min = args.kmin.or(file.k_min);
    let k_max = args.kmax.or(file.k_max);
    let range = match (k_min, k_max) {
        (None, None) => None,
        (Some(a), Some(b)) => {
            if a < 1 || a > b {
                return Err(usage(format!("sweep range [{a}, {b}] is empty or starts at 0")));
            }
            Some(a..=b)
        }
        (Some(_), None) => return Err(usage("--kmin requires --kmax")),
        (None, Some(b)) => {
            if b < 1 {
                return Err(usage("kmax must be at least 1"));
            }
            Some(1..=b)
        }
    };
    ensure_out(&base.out)?;

    let rows = order_sweep(&g, h, base.m, range)?;

    let mut prov = base.provenance("sweep", h);
    prov.k_min = k_min;
    prov.k_max = k_max;
    let mut csv = config_comment(&prov)?;
    csv.push_str("k,e_rel_unproj,e_rel_proj,stable_unproj,order_proj,gap_to_exact\n");
    let mut unstable = 0usize;
    let mut failed = 0usize;
    for row in &rows {
        csv.push_str(&sweep_csv_row(row));
        if row.stable_unproj == Some(false) {
            unstable += 1;
        }
        if let Some(why) = &row.failure {
            failed += 1;
            eprintln!("k = {}: {why}", row.k);
        }
    }

    let path = base.out.join("sweep.csv");
    write_text(&path, &csv)?;
    println!(
        "swept {} orders: {unstable} unstable before projection, {failed} failed",
        rows.len(),
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn respond_csv(
    prov: &Provenance,
    cmp: &loewner_c2d::metrics::ResponseComparison,
) -> Result<String, CliError> {
    let mut csv = config_comment(prov)?;
    csv.push_str("t,y_continuous,y_held_discrete,error\n");
    for i in 0..cmp.t.len() {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt(cmp.t[i]),
            fmt(cmp.y_ref[i]),
            fmt(cmp.y_held[i]),
            fmt(cmp.y_ref[i] - cmp.y_held[i]),
        ));
    }
    Ok(csv)
}

fn cmd_respond(args: RespondArgs) -> Result<(), CliError> {
    let (base, file) = resolve_base(&args.common)?;
    let methods = if args.method.is_empty() {
        file.methods.clone().unwrap_or_default()
    } else {
        args.method.clone()
    };
    if methods.is_empty() && args.discrete.is_none() {
        return Err(usage("at least one --method, or a --discrete model file, is required"));
    }
    if !methods.is_empty() {
        validate_methods(&methods)?;
    }
    let signal_name =
        args.signal.clone().or_else(|| file.signal.clone()).unwrap_or_else(|| "step".into());
    let signal = parse_signal(&signal_name)?;
    let spec = base.require_model()?.to_string();
    let g = load_continuous(&spec)?;

    // The discrete file brings its own period, so --h is only needed when
    // method models must be built.
    let discrete = match &args.discrete {
        Some(path) => match load_model(path)? {
            LoadedModel::Discrete(gd) => Some(gd),
            LoadedModel::Continuous(_) => {
                return Err(usage(format!(
                    "{} holds a continuous model; --discrete needs a discrete one",
                    path.display()
                )));
            }
        },
        None => None,
    };
    let h = match (base.h, &discrete) {
        (Some(h), Some(gd)) => {
            if (h - gd.h).abs() > 1e-12 * gd.h {
                return Err(usage(format!(
                    "--h = {h} disagrees with the discrete model period {}",
                    gd.h
                )));
            }
            h
        }
        (Some(h), None) => h,
        (None, Some(gd)) => gd.h,
        (None, None) => return Err(usage("--h is required")),
    };
    let t_end = args.t_end.or(file.t_end).unwrap_or(60.0);
    let dt = args.dt.or(file.dt).unwrap_or(h / 20.0);
    if !(t_end > 0.0 && t_end.is_finite() && dt > 0.0 && dt.is_finite()) {
        return Err(usage(format!("simulation window t_end = {t_end}, dt = {dt}")));
    }
    ensure_out(&base.out)?;

    let mut prov = base.provenance("respond", h);
    prov.methods = if methods.is_empty() { None } else { Some(methods.clone()) };
    prov.discrete = args.discrete.as_ref().map(|p| p.display().to_string());
    prov.signal = Some(signal_name.clone());
    prov.t_end = Some(t_end);
    prov.dt = Some(dt);

    let mut wrote = Vec::new();
    let mut simulate = |name: &str, gd: &DiscreteStateSpace| -> Result<(), CliError> {
        let cmp = response_comparison(&g, gd, signal, t_end, dt)?;
        let path = base.out.join(format!("respond_{name}.csv"));
        write_text(&path, &respond_csv(&prov, &cmp)?)?;
        println!("{name}: e2 = {:.4}%", cmp.e2_pct);
        wrote.push(path.display().to_string());
        Ok(())
    };

    for method in &methods {
        let gd = build_method(&g, method, &base, h)?;
        simulate(method, &gd)?;
    }
    if let Some(gd) = &discrete {
        simulate("file", gd)?;
    }

    println!("wrote {}", wrote.join(", "));
    Ok(())
}
