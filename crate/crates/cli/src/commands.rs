use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use crqa_core::benchmark::{run_benchmark, summarize, BenchConfig, BenchRecord, Engine};
use crqa_core::categorical::ct_tables;
use crqa_core::measures::WindowMeasures;
use crqa_core::series::{align_lengths, recode_nonevents};
use crqa_core::simulator::{benchmark_sizes, simulate_benchmark_set, SimulatedPair};
use crqa_core::{
    calcphi, crqa, crqa_from_plot, ctcrqa, drpdfromts, optimize_param, windowdrp, windowed_crqa, ContingencyTable,
    CrqaMeasures, CrqaParams, DyadParams, EmbeddingParams, Normalization, OptimizeConfig, RecurrenceProfile, Rescale,
    TimeSeries, WhiteLines,
};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::input::{parse_inputs, parse_plot, CodeEntry, Datatype, Source};
use crate::render::{render_plot, PlotFormat, RasterInfo};
use crate::report::{emit, to_json, write_json};

#[derive(Debug, Parser)]
#[command(name = "crqa", version, about = "Cross-recurrence quantification analysis of paired time series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Line-based measures of the cross-recurrence plot, optionally per sliding window
    Crqa(CrqaArgs),
    /// Diagonal-wise recurrence profile over lags -ws..=ws
    Profile(ProfileArgs),
    /// Recurrence over time from sliding-window profiles
    Window(WindowArgs),
    /// Contingency-table recurrence profile of categorical series
    Ct(CtArgs),
    /// Phi-coefficient profile for one state
    Phi(PhiArgs),
    /// Search delay, embedding dimension and radius
    Optimize(OptimizeArgs),
    /// Simulate coupled dichotomous dyads
    Simulate(SimulateArgs),
    /// Time the pipeline on simulated dyads of increasing size
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// CSV file with the first series
    pub file1: Option<PathBuf>,
    /// CSV file with the second series [default: another column of FILE1]
    pub file2: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub column1: usize,
    /// Column of the second series [default: 1 with FILE2, else 2]
    #[arg(long)]
    pub column2: Option<usize>,
    /// Skip the first CSV row
    #[arg(long)]
    pub header: bool,
    #[arg(long, value_enum)]
    pub datatype: Option<Datatype>,
    /// Largest tolerated length difference between the two series
    #[arg(long, default_value_t = 8)]
    pub thrshd: usize,
    /// Give each series' non-event code its own fresh code, so non-events never recur
    #[arg(long)]
    pub recode_nonevents: bool,
    /// Non-event code used by --recode-nonevents
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub nonevent: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RescaleArg {
    None,
    #[value(alias = "mean_distance")]
    Mean,
    #[value(alias = "max_distance")]
    Max,
}

impl From<RescaleArg> for Rescale {
    fn from(r: RescaleArg) -> Self {
        match r {
            RescaleArg::None => Rescale::None,
            RescaleArg::Mean => Rescale::MeanDistance,
            RescaleArg::Max => Rescale::MaxDistance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizeArg {
    None,
    #[value(alias = "unit_interval")]
    Unit,
    Zscore,
}

impl From<NormalizeArg> for Normalization {
    fn from(n: NormalizeArg) -> Self {
        match n {
            NormalizeArg::None => Normalization::None,
            NormalizeArg::Unit => Normalization::UnitInterval,
            NormalizeArg::Zscore => Normalization::Zscore,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CrqaArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 1)]
    pub delay: usize,
    #[arg(long, default_value_t = 1)]
    pub embed: usize,
    #[arg(long, value_enum, default_value_t = RescaleArg::None)]
    pub rescale: RescaleArg,
    #[arg(long, value_enum, default_value_t = NormalizeArg::None)]
    pub normalize: NormalizeArg,
    #[arg(long)]
    pub radius: f64,
    #[arg(long, default_value_t = 2)]
    pub mindiagline: usize,
    #[arg(long, default_value_t = 2)]
    pub minvertline: usize,
    /// Also report empty vertical lines
    #[arg(long)]
    pub whiteline: bool,
    /// Read a precomputed 0/1 recurrence matrix instead of two series
    #[arg(long, conflicts_with_all = ["window", "file1"])]
    pub recpt: Option<PathBuf>,
    /// Compute the measures on each sliding window
    #[arg(long, requires_all = ["step", "windowsize"])]
    pub window: bool,
    #[arg(long)]
    pub step: Option<usize>,
    #[arg(long)]
    pub windowsize: Option<usize>,
    /// Write the recurrence plot raster here
    #[arg(long, conflicts_with = "window")]
    pub plot: Option<PathBuf>,
    /// Raster format [default: from the file extension, else pgm]
    #[arg(long, value_enum)]
    pub plot_format: Option<PlotFormat>,
    /// Largest raster side in pixels; bigger plots are max-pooled
    #[arg(long, default_value_t = 1000)]
    pub plot_budget: usize,
    /// Report path [default: stdout]
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Largest lag in either direction
    #[arg(long)]
    pub ws: usize,
    #[arg(long, default_value_t = 0.001)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = ProfileFormat::Json)]
    pub format: ProfileFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub step: usize,
    #[arg(long)]
    pub windowsize: usize,
    #[arg(long)]
    pub lagwidth: usize,
    #[arg(long, default_value_t = 0.001)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = ProfileFormat::Json)]
    pub format: ProfileFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CtArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Profile lags -ws..=ws
    #[arg(long, required_unless_present = "lags", conflicts_with = "lags")]
    pub ws: Option<usize>,
    /// Explicit comma-separated profile lags
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub lags: Option<Vec<i64>>,
    /// Write one contingency table per lag as CSV into this directory
    #[arg(long)]
    pub tables: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ProfileFormat::Json)]
    pub format: ProfileFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PhiArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub ws: usize,
    /// State code, or its label when the input was label-coded
    #[arg(long, allow_hyphen_values = true)]
    pub state: String,
    #[arg(long, value_enum, default_value_t = ProfileFormat::Json)]
    pub format: ProfileFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// JSON file with search settings; flags below override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Largest lag of the mutual-information curve
    #[arg(long)]
    pub lgm: Option<usize>,
    /// A local minimum must hold against the next 1..=STEPS lags
    #[arg(long)]
    pub steps: Option<usize>,
    /// Candidate delays 1..=CUT_DEL
    #[arg(long)]
    pub cut_del: Option<usize>,
    #[arg(long)]
    pub rr_min: Option<f64>,
    #[arg(long)]
    pub rr_max: Option<f64>,
    #[arg(long)]
    pub max_embed: Option<usize>,
    #[arg(long)]
    pub radius_points: Option<usize>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long, value_enum)]
    pub rescale: Option<RescaleArg>,
    #[arg(long, value_enum)]
    pub normalize: Option<NormalizeArg>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    Low,
    High,
    Benchmark,
}

#[derive(Debug, Args)]
pub struct DyadArgs {
    #[arg(long)]
    pub p_c: Option<f64>,
    #[arg(long)]
    pub p_s: Option<f64>,
    #[arg(long)]
    pub p_cc: Option<f64>,
    #[arg(long)]
    pub p_ss: Option<f64>,
    #[arg(long)]
    pub p_sc: Option<f64>,
}

impl DyadArgs {
    fn apply(&self, mut p: DyadParams) -> DyadParams {
        p.p_c = self.p_c.unwrap_or(p.p_c);
        p.p_s = self.p_s.unwrap_or(p.p_s);
        p.p_cc = self.p_cc.unwrap_or(p.p_cc);
        p.p_ss = self.p_ss.unwrap_or(p.p_ss);
        p.p_sc = self.p_sc.unwrap_or(p.p_sc);
        p
    }
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("destination").required(true).args(["output", "out_dir"]))]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Condition::Low)]
    pub condition: Condition,
    #[command(flatten)]
    pub probabilities: DyadArgs,
    #[arg(long, default_value_t = 1000)]
    pub length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Runs per length
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Comma-separated lengths; overrides --length
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Write the single simulated pair to this CSV file
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write one CSV per run plus manifest.json into this directory
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated series lengths [default: 500..=3000 step 250]
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 20)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub probabilities: DyadArgs,
    #[arg(long, default_value_t = 0.0)]
    pub radius: f64,
    /// Also run the brute-force reference on every pair
    #[arg(long)]
    pub compare: bool,
    /// Run pairs concurrently (timings become unreliable)
    #[arg(long)]
    pub parallel: bool,
    /// Write records.csv, summary.json and timing.dat into this directory
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub files: Vec<String>,
    pub columns: Vec<usize>,
    pub header: bool,
    pub datatype: Datatype,
    pub thrshd: usize,
    pub recode_nonevents: bool,
    pub nonevent: i64,
    /// Series lengths as analysed.
    pub lengths: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codes: Option<Vec<CodeEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonevent_codes: Option<[i64; 2]>,
}

#[derive(Debug, Serialize)]
struct Report<'a, P: Serialize, R: Serialize> {
    command: &'static str,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<&'a InputEcho>,
    params: P,
    result: R,
    warnings: Vec<String>,
}

impl<'a, P: Serialize, R: Serialize> Report<'a, P, R> {
    fn new(command: &'static str, input: Option<&'a InputEcho>, params: P, result: R) -> Self {
        Report {
            command,
            version: env!("CARGO_PKG_VERSION"),
            input,
            params,
            result,
            warnings: Vec::new(),
        }
    }
}

struct Loaded {
    ts1: TimeSeries,
    ts2: TimeSeries,
    echo: InputEcho,
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

/// Reads both series. With `truncate`, series whose lengths differ by at most
/// `thrshd` are cut to the shorter length.
fn load(args: &InputArgs, default_type: Datatype, truncate: bool) -> Result<Loaded> {
    let file1 = args
        .file1
        .clone()
        .ok_or_else(|| CliError::usage("an input file is required"))?;
    let datatype = args.datatype.unwrap_or(default_type);
    let (file2, column2) = match &args.file2 {
        Some(f) => (f.clone(), args.column2.unwrap_or(1)),
        None => (file1.clone(), args.column2.unwrap_or(2)),
    };
    let sources = [
        Source {
            path: file1.clone(),
            column: args.column1,
        },
        Source {
            path: file2.clone(),
            column: column2,
        },
    ];
    let parsed = parse_inputs(&sources, args.header, datatype)?;
    let mut series = parsed.series.into_iter();
    let (mut ts1, mut ts2) = (series.next().unwrap(), series.next().unwrap());

    let mut nonevent_codes = None;
    if args.recode_nonevents {
        if datatype != Datatype::Categorical {
            return Err(CliError::usage("--recode-nonevents needs --datatype categorical"));
        }
        let (a, b, codes) = recode_nonevents(&ts1, &ts2, args.nonevent).map_err(|e| CliError::stage("input", e))?;
        ts1 = a;
        ts2 = b;
        nonevent_codes = Some(codes);
    }
    if truncate {
        let (a, b) = align_lengths(&ts1, &ts2, args.thrshd).map_err(|e| CliError::stage("input", e))?;
        ts1 = a;
        ts2 = b;
    }
    let echo = InputEcho {
        files: vec![path_string(&file1), path_string(&file2)],
        columns: vec![args.column1, column2],
        header: args.header,
        datatype,
        thrshd: args.thrshd,
        recode_nonevents: args.recode_nonevents,
        nonevent: args.nonevent,
        lengths: vec![ts1.len(), ts2.len()],
        codes: parsed.codes,
        nonevent_codes,
    };
    Ok(Loaded { ts1, ts2, echo })
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Crqa(a) => run_crqa(a),
        Command::Profile(a) => run_profile(a),
        Command::Window(a) => run_window(a),
        Command::Ct(a) => run_ct(a),
        Command::Phi(a) => run_phi(a),
        Command::Optimize(a) => run_optimize(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Bench(a) => run_bench(a),
    }
}

#[derive(Debug, Serialize)]
struct WindowEcho {
    step: usize,
    windowsize: usize,
}

#[derive(Debug, Serialize)]
struct PlotEcho {
    path: String,
    format: PlotFormat,
    budget: usize,
}

#[derive(Debug, Serialize)]
struct CrqaEcho {
    #[serde(flatten)]
    crqa: CrqaParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    recpt: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<WindowEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plot: Option<PlotEcho>,
}

#[derive(Debug, Serialize)]
struct CrqaResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    measures: Option<CrqaMeasures>,
    #[serde(skip_serializing_if = "Option::is_none")]
    windows: Option<Vec<WindowMeasures>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    white: Option<WhiteLines>,
    #[serde(skip_serializing_if = "Option::is_none")]
    raster: Option<RasterInfo>,
}

fn plot_format(path: &Path, explicit: Option<PlotFormat>) -> PlotFormat {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("txt") => PlotFormat::Txt,
        _ => PlotFormat::Pgm,
    })
}

fn run_crqa(a: CrqaArgs) -> Result<()> {
    let params = CrqaParams {
        embedding: EmbeddingParams {
            delay: a.delay,
            embed: a.embed,
            rescale: a.rescale.into(),
            normalize: a.normalize.into(),
            radius: a.radius,
        },
        mindiagline: a.mindiagline,
        minvertline: a.minvertline,
        whiteline: a.whiteline,
    };
    let plot_echo = a.plot.as_ref().map(|p| PlotEcho {
        path: path_string(p),
        format: plot_format(p, a.plot_format),
        budget: a.plot_budget,
    });
    let mut echo = CrqaEcho {
        crqa: params,
        recpt: a.recpt.as_deref().map(path_string),
        window: None,
        plot: plot_echo,
    };
    let mut result = CrqaResult {
        measures: None,
        windows: None,
        white: None,
        raster: None,
    };

    let input = if let Some(recpt) = &a.recpt {
        let rp = parse_plot(recpt, a.input.header)?;
        let out = crqa_from_plot(&rp, &params)?;
        result.measures = Some(out.measures);
        result.white = out.white;
        if let (Some(path), Some(pe)) = (&a.plot, &echo.plot) {
            result.raster = Some(write_plot(&rp, path, pe.format, pe.budget)?);
        }
        None
    } else if a.window {
        let (step, windowsize) = (a.step.unwrap_or(0), a.windowsize.unwrap_or(0));
        let loaded = load(&a.input, Datatype::Continuous, true)?;
        result.windows = Some(windowed_crqa(&loaded.ts1, &loaded.ts2, &params, step, windowsize)?);
        echo.window = Some(WindowEcho { step, windowsize });
        Some(loaded.echo)
    } else {
        let loaded = load(&a.input, Datatype::Continuous, false)?;
        let out = crqa(&loaded.ts1, &loaded.ts2, &params, a.plot.is_some())?;
        result.measures = Some(out.measures);
        result.white = out.white;
        if let (Some(path), Some(pe), Some(rp)) = (&a.plot, &echo.plot, &out.plot) {
            result.raster = Some(write_plot(rp, path, pe.format, pe.budget)?);
        }
        Some(loaded.echo)
    };
    write_json(&Report::new("crqa", input.as_ref(), echo, result), a.output.as_deref())
}

fn write_plot(rp: &crqa_core::RecurrencePlot, path: &Path, format: PlotFormat, budget: usize) -> Result<RasterInfo> {
    let (text, info) = render_plot(rp, format, budget);
    emit(&text, Some(path))?;
    Ok(info)
}

fn profile_csv(p: &RecurrenceProfile) -> String {
    let axis = match p.axis {
        crqa_core::ProfileAxis::Lag => "lag",
        crqa_core::ProfileAxis::WindowStart => "window_start",
    };
    let mut out = format!("{axis},value\n");
    for (pos, v) in p.positions.iter().zip(&p.values) {
        out.push_str(&format!("{pos},{v}\n"));
    }
    out
}

fn emit_profile<P: Serialize>(
    command: &'static str,
    input: &InputEcho,
    params: P,
    profile: RecurrenceProfile,
    format: ProfileFormat,
    output: Option<&Path>,
) -> Result<()> {
    match format {
        ProfileFormat::Csv => emit(&profile_csv(&profile), output),
        ProfileFormat::Json => write_json(&Report::new(command, Some(input), params, profile), output),
    }
}

#[derive(Debug, Serialize)]
struct ProfileEcho {
    ws: usize,
    radius: f64,
}

fn run_profile(a: ProfileArgs) -> Result<()> {
    let loaded = load(&a.input, Datatype::Continuous, true)?;
    let profile = drpdfromts(&loaded.ts1, &loaded.ts2, a.ws, a.radius)?;
    let params = ProfileEcho {
        ws: a.ws,
        radius: a.radius,
    };
    emit_profile("profile", &loaded.echo, params, profile, a.format, a.output.as_deref())
}

#[derive(Debug, Serialize)]
struct WindowProfileEcho {
    step: usize,
    windowsize: usize,
    lagwidth: usize,
    radius: f64,
}

fn run_window(a: WindowArgs) -> Result<()> {
    let loaded = load(&a.input, Datatype::Continuous, true)?;
    let profile = windowdrp(&loaded.ts1, &loaded.ts2, a.step, a.windowsize, a.lagwidth, a.radius)?;
    let params = WindowProfileEcho {
        step: a.step,
        windowsize: a.windowsize,
        lagwidth: a.lagwidth,
        radius: a.radius,
    };
    emit_profile("window", &loaded.echo, params, profile, a.format, a.output.as_deref())
}

#[derive(Debug, Serialize)]
struct CtEcho {
    lags: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tables: Option<String>,
}

fn table_csv(t: &ContingencyTable) -> String {
    let mut out = String::from("x\\y");
    for code in &t.alphabet {
        out.push_str(&format!(",{code}"));
    }
    out.push('\n');
    for (code, row) in t.alphabet.iter().zip(&t.counts) {
        out.push_str(&code.to_string());
        for c in row {
            out.push_str(&format!(",{c}"));
        }
        out.push('\n');
    }
    out
}

fn run_ct(a: CtArgs) -> Result<()> {
    let loaded = load(&a.input, Datatype::Categorical, false)?;
    let lags = match (&a.lags, a.ws) {
        (Some(l), _) => l.clone(),
        (None, Some(ws)) => (-(ws as i64)..=ws as i64).collect(),
        (None, None) => return Err(CliError::usage("either --ws or --lags is required")),
    };
    let profile = ctcrqa(&loaded.ts1, &loaded.ts2, &lags, a.input.thrshd)?;
    if let Some(dir) = &a.tables {
        fs::create_dir_all(dir).map_err(|e| CliError::stage("output", format!("{}: {e}", dir.display())))?;
        // profile lag d is the table built at lag -d
        for (d, table) in lags.iter().zip(ct_tables(&loaded.ts1, &loaded.ts2, &lags, a.input.thrshd)?) {
            emit(&table_csv(&table), Some(&dir.join(format!("ct_lag{d}.csv"))))?;
        }
    }
    let params = CtEcho {
        lags,
        tables: a.tables.as_deref().map(path_string),
    };
    emit_profile("ct", &loaded.echo, params, profile, a.format, a.output.as_deref())
}

#[derive(Debug, Serialize)]
struct PhiEcho {
    ws: usize,
    state: String,
    code: i64,
}

fn run_phi(a: PhiArgs) -> Result<()> {
    let loaded = load(&a.input, Datatype::Categorical, true)?;
    let code = match &loaded.echo.codes {
        Some(table) => table
            .iter()
            .find(|e| e.label == a.state)
            .map(|e| e.code)
            .ok_or_else(|| CliError::usage(format!("state {:?} does not occur in the input", a.state)))?,
        None => a
            .state
            .parse()
            .map_err(|_| CliError::usage(format!("state {:?} is not an integer code", a.state)))?,
    };
    let profile = calcphi(&loaded.ts1, &loaded.ts2, a.ws, code)?;
    let params = PhiEcho {
        ws: a.ws,
        state: a.state.clone(),
        code,
    };
    emit_profile("phi", &loaded.echo, params, profile, a.format, a.output.as_deref())
}

fn optimize_config(a: &OptimizeArgs) -> Result<OptimizeConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::stage("config", format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::stage("config", format!("{}: {e}", path.display())))?
        }
        None => OptimizeConfig::default(),
    };
    if let Some(v) = a.lgm {
        cfg.lgm = v;
    }
    if let Some(v) = a.steps {
        cfg.steps = (1..=v).collect();
    }
    if let Some(v) = a.cut_del {
        cfg.cut_del = (1..=v).collect();
    }
    if let Some(v) = a.rr_min {
        cfg.target_rr[0] = v;
    }
    if let Some(v) = a.rr_max {
        cfg.target_rr[1] = v;
    }
    if let Some(v) = a.max_embed {
        cfg.max_embed = v;
    }
    if let Some(v) = a.radius_points {
        cfg.radius_grid_points = v;
    }
    if a.bins.is_some() {
        cfg.bins = a.bins;
    }
    if let Some(v) = a.rescale {
        cfg.rescale = v.into();
    }
    if let Some(v) = a.normalize {
        cfg.normalize = v.into();
    }
    Ok(cfg)
}

fn run_optimize(a: OptimizeArgs) -> Result<()> {
    let cfg = optimize_config(&a)?;
    let loaded = load(&a.input, Datatype::Continuous, false)?;
    let report = optimize_param(&loaded.ts1, &loaded.ts2, &cfg)?;
    let warnings: Vec<String> = report.warnings().cloned().collect();
    let mut out = Report::new("optimize", Some(&loaded.echo), cfg, report);
    out.warnings = warnings;
    write_json(&out, a.output.as_deref())
}

#[derive(Debug, Serialize)]
struct SimulateEcho {
    condition: Condition,
    dyad: DyadParams,
    sizes: Vec<usize>,
    runs: usize,
}

#[derive(Debug, Serialize)]
struct ManifestEntry {
    file: String,
    size: usize,
    iteration: usize,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    params: &'a SimulateEcho,
    runs: Vec<ManifestEntry>,
}

fn pair_csv(pair: &SimulatedPair) -> String {
    let mut out = String::from("C,S\n");
    for (c, s) in pair.c.values().iter().zip(pair.s.values()) {
        out.push_str(&format!("{c},{s}\n"));
    }
    out
}

fn run_simulate(a: SimulateArgs) -> Result<()> {
    let base = match a.condition {
        Condition::Low => DyadParams::low(a.length, a.seed),
        Condition::High => DyadParams::high(a.length, a.seed),
        Condition::Benchmark => DyadParams::benchmark(a.length, a.seed),
    };
    let dyad = a.probabilities.apply(base);
    let sizes = a.sizes.clone().unwrap_or_else(|| vec![a.length]);
    if a.runs < 1 || sizes.is_empty() {
        return Err(CliError::usage("need at least one run and one size"));
    }
    let pairs = simulate_benchmark_set(&sizes, a.runs, &dyad)?;
    let echo = SimulateEcho {
        condition: a.condition,
        dyad,
        sizes,
        runs: a.runs,
    };
    let mut entries = Vec::with_capacity(pairs.len());
    if let Some(path) = &a.output {
        if pairs.len() != 1 {
            return Err(CliError::usage("--output takes a single pair; use --out-dir for several"));
        }
        emit(&pair_csv(&pairs[0]), Some(path))?;
        entries.push(ManifestEntry {
            file: path_string(path),
            size: pairs[0].size,
            iteration: 0,
            seed: pairs[0].seed,
        });
    } else if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::stage("output", format!("{}: {e}", dir.display())))?;
        for pair in &pairs {
            let name = format!("dyad_{}_{}.csv", pair.size, pair.iteration);
            emit(&pair_csv(pair), Some(&dir.join(&name)))?;
            entries.push(ManifestEntry {
                file: name,
                size: pair.size,
                iteration: pair.iteration,
                seed: pair.seed,
            });
        }
    }
    let manifest = Manifest {
        params: &echo,
        runs: entries,
    };
    let text = to_json(&manifest)?;
    if let Some(dir) = &a.out_dir {
        emit(&text, Some(&dir.join("manifest.json")))?;
    }
    emit(&text, None)
}

fn records_csv(records: &[BenchRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["size", "iteration", "seed", "engine", "elapsed_seconds"];
    header.extend(CrqaMeasures::NAMES);
    w.write_record(&header).map_err(|e| CliError::stage("output", e))?;
    for r in records {
        let engine = match r.engine {
            Engine::Optimized => "optimized",
            Engine::Oracle => "oracle",
        };
        let mut row = vec![
            r.size.to_string(),
            r.iteration.to_string(),
            r.seed.to_string(),
            engine.to_string(),
            r.elapsed_seconds.to_string(),
        ];
        row.extend(r.measures.to_array().iter().map(f64::to_string));
        w.write_record(&row).map_err(|e| CliError::stage("output", e))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::stage("output", e))?;
    String::from_utf8(bytes).map_err(|e| CliError::stage("output", e))
}

fn timing_dat(summary: &crqa_core::benchmark::BenchSummary) -> String {
    let mut out = String::new();
    for engine in [Engine::Optimized, Engine::Oracle] {
        let rows: Vec<_> = summary.timings.iter().filter(|t| t.engine == engine).collect();
        if rows.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push_str("\n\n");
        }
        out.push_str(&format!("# {engine:?}: size mean_elapsed_seconds\n"));
        for t in rows {
            out.push_str(&format!("{} {}\n", t.size, t.mean_elapsed_seconds));
        }
    }
    out
}

fn run_bench(a: BenchArgs) -> Result<()> {
    let sizes = a.sizes.clone().unwrap_or_else(benchmark_sizes);
    let mut cfg = BenchConfig::new(sizes, a.iterations, a.seed);
    cfg.dyad = a.probabilities.apply(cfg.dyad);
    cfg.crqa.embedding.radius = a.radius;
    cfg.compare = a.compare;
    cfg.parallel = a.parallel;
    let records = run_benchmark(&cfg)?;
    let summary = summarize(&records);
    let text = to_json(&Report::new("bench", None, &cfg, &summary))?;
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::stage("output", format!("{}: {e}", dir.display())))?;
        emit(&records_csv(&records)?, Some(&dir.join("records.csv")))?;
        emit(&text, Some(&dir.join("summary.json")))?;
        emit(&timing_dat(&summary), Some(&dir.join("timing.dat")))?;
    }
    emit(&text, a.output.as_deref())
}
