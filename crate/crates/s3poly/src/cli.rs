//! Command-line front end: solve polygons, run bending flows, apply
//! braid words, execute the verification suites, and export run
//! documents for plot tooling.
//!
//! Every run writes one self-describing document with a
//! `schema_version` field. Identical configuration and seed produce
//! byte-identical output files; JSON numbers are emitted with exact
//! round-trip encoding and the CSV variant flattens quaternions into
//! four columns each, printed with 17 significant digits.
//!
//! Exit codes: 0 ok, 1 config or parse error, 2 no solution,
//! 3 degenerate input, 4 verification failure.

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::bending::{f_val, FlowSpec};
use crate::braid::{apply_word, parse_word};
use crate::moduli::{
    closure_residual, diagonal_length, side_length, solve_closure, to_polygon, HolonomyTuple,
    SideLengths,
};
use crate::su2::GroupElement;
use crate::verify::{run_suite, Report, Suite};
use crate::{Error, Result};

/// Resolved run configuration: defaults, then the optional JSON config
/// file, then command-line flags, later sources winning.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub n: usize,
    pub side_lengths: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_tolerance() -> f64 {
    1e-10
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<OutputFormat> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Config(format!("unknown format {other:?}"))),
        }
    }
}

impl OutputFormat {
    fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "s3poly",
    about = "Closed polygons in the 3-sphere: closure solving, bending flows, braid moves, verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for a closed holonomy tuple with the given side lengths.
    Solve(CommonArgs),
    /// Bend a solved polygon along a fan diagonal, sampling the motion.
    Flow(FlowArgs),
    /// Apply a braid word to a solved polygon.
    Braid(BraidArgs),
    /// Run a verification suite and report every check.
    Verify(VerifyArgs),
    /// Re-emit a previously written JSON run document as json or csv.
    Export(ExportArgs),
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Optional JSON config file mirroring the run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of sides (defaults to the length of --sides).
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated side lengths in (0, pi).
    #[arg(long)]
    pub sides: Option<String>,
    /// Random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Solver tolerance on the closure residual.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: json or csv.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Fan diagonal index j (prefix length, 2..=n-2).
    #[arg(long)]
    pub j: usize,
    /// Total bending angle in radians.
    #[arg(long, default_value_t = std::f64::consts::TAU)]
    pub angle: f64,
    /// Number of samples along the motion (inclusive of both ends).
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct BraidArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Braid word, e.g. "R1 R'2 A13".
    #[arg(long)]
    pub word: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Which suite to run.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Random seed for the check inputs.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override every pinned tolerance (honesty probe).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Report file path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: json or csv.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Previously written JSON run document.
    #[arg(long)]
    pub input: PathBuf,
    /// Output file path.
    #[arg(long)]
    pub out: PathBuf,
    /// Output format: json or csv.
    #[arg(long, default_value = "csv")]
    pub format: String,
}

// ---------------------------------------------------------------------
// Output documents
// ---------------------------------------------------------------------

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuatDoc {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<&GroupElement> for QuatDoc {
    fn from(g: &GroupElement) -> QuatDoc {
        QuatDoc {
            w: g.w,
            x: g.x,
            y: g.y,
            z: g.z,
        }
    }
}

impl QuatDoc {
    pub fn to_group(&self) -> GroupElement {
        GroupElement::new(self.w, self.x, self.y, self.z)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagonalDoc {
    pub from: usize,
    pub to: usize,
    pub length: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveDoc {
    pub schema_version: u32,
    pub command: String,
    pub n: usize,
    pub sides: Vec<f64>,
    pub seed: u64,
    pub tolerance: f64,
    pub tuple: Vec<QuatDoc>,
    pub vertices: Vec<QuatDoc>,
    pub diagonals: Vec<DiagonalDoc>,
    pub closure_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowSampleDoc {
    pub angle: f64,
    pub vertices: Vec<QuatDoc>,
    pub lengths: Vec<f64>,
    pub drift: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowDoc {
    pub schema_version: u32,
    pub command: String,
    pub n: usize,
    pub sides: Vec<f64>,
    pub seed: u64,
    pub tolerance: f64,
    pub j: usize,
    pub samples: Vec<FlowSampleDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BraidReportDoc {
    pub sides: Vec<f64>,
    pub prefix_traces: Vec<f64>,
    pub closure_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BraidDoc {
    pub schema_version: u32,
    pub command: String,
    pub n: usize,
    pub sides: Vec<f64>,
    pub seed: u64,
    pub tolerance: f64,
    pub word: String,
    pub tuple: Vec<QuatDoc>,
    pub report: BraidReportDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub schema_version: u32,
    pub command: String,
    #[serde(flatten)]
    pub report: Report,
}

// ---------------------------------------------------------------------
// Configuration resolution
// ---------------------------------------------------------------------

fn parse_sides(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("bad side length {s:?}: {e}")))
        })
        .collect()
}

#[derive(Debug, Default, Deserialize)]
struct ConfigFile {
    n: Option<usize>,
    side_lengths: Option<Vec<f64>>,
    seed: Option<u64>,
    tolerance: Option<f64>,
    output_path: Option<String>,
    format: Option<OutputFormat>,
}

impl CommonArgs {
    /// Merge defaults, config file, and flags into a validated
    /// configuration.
    pub fn resolve(&self) -> Result<RunConfig> {
        let file: ConfigFile = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let sides = match (&self.sides, file.side_lengths) {
            (Some(text), _) => parse_sides(text)?,
            (None, Some(sides)) => sides,
            (None, None) => {
                return Err(Error::Config(
                    "missing --sides (or config side_lengths)".into(),
                ))
            }
        };
        let n = self.n.or(file.n).unwrap_or(sides.len());
        if n != sides.len() {
            return Err(Error::Config(format!(
                "--n {} does not match {} side lengths",
                n,
                sides.len()
            )));
        }
        let lengths = SideLengths::new(sides)?;
        let format = match &self.format {
            Some(text) => text.parse()?,
            None => file.format.unwrap_or_default(),
        };
        let tolerance = self
            .tol
            .or(file.tolerance)
            .unwrap_or_else(default_tolerance);
        if tolerance <= 0.0 || tolerance.is_nan() {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(RunConfig {
            n,
            side_lengths: lengths.values().to_vec(),
            seed: self.seed.or(file.seed).unwrap_or(0),
            tolerance,
            output_path: self
                .out
                .as_ref()
                .map(|p| p.display().to_string())
                .or(file.output_path),
            format,
        })
    }
}

fn output_path(config: &RunConfig, command: &str) -> PathBuf {
    match &config.output_path {
        Some(p) => PathBuf::from(p),
        None => PathBuf::from(format!("s3poly-{command}.{}", config.format.extension())),
    }
}

// ---------------------------------------------------------------------
// CSV rendering (17 significant digits, quaternions as four columns)
// ---------------------------------------------------------------------

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_quat_header(header: &mut Vec<String>, prefix: &str) {
    for c in ["w", "x", "y", "z"] {
        header.push(format!("{prefix}_{c}"));
    }
}

fn push_quat_row(row: &mut Vec<String>, q: &QuatDoc) {
    for v in [q.w, q.x, q.y, q.z] {
        row.push(fmt17(v));
    }
}

fn csv_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", header.join(","));
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

fn solve_csv(doc: &SolveDoc) -> String {
    let mut header = vec![
        "n".to_string(),
        "seed".to_string(),
        "closure_residual".to_string(),
    ];
    let mut row = vec![
        doc.n.to_string(),
        doc.seed.to_string(),
        fmt17(doc.closure_residual),
    ];
    for (i, q) in doc.tuple.iter().enumerate() {
        push_quat_header(&mut header, &format!("g{}", i + 1));
        push_quat_row(&mut row, q);
    }
    for (k, q) in doc.vertices.iter().enumerate() {
        push_quat_header(&mut header, &format!("v{}", k + 1));
        push_quat_row(&mut row, q);
    }
    for d in &doc.diagonals {
        header.push(format!("ell_{}_{}", d.from, d.to));
        row.push(fmt17(d.length));
    }
    csv_table(&header, &[row])
}

fn flow_csv(doc: &FlowDoc) -> String {
    let mut header = vec!["angle".to_string()];
    if let Some(first) = doc.samples.first() {
        for k in 0..first.vertices.len() {
            push_quat_header(&mut header, &format!("v{}", k + 1));
        }
        for j in 0..first.lengths.len() {
            header.push(format!("ell_1_{}", j + 2));
        }
    }
    header.push("drift".to_string());
    let rows: Vec<Vec<String>> = doc
        .samples
        .iter()
        .map(|s| {
            let mut row = vec![fmt17(s.angle)];
            for q in &s.vertices {
                push_quat_row(&mut row, q);
            }
            for l in &s.lengths {
                row.push(fmt17(*l));
            }
            row.push(fmt17(s.drift));
            row
        })
        .collect();
    csv_table(&header, &rows)
}

fn braid_csv(doc: &BraidDoc) -> String {
    let mut header = vec![
        "n".to_string(),
        "seed".to_string(),
        "word".to_string(),
        "closure_residual".to_string(),
    ];
    let mut row = vec![
        doc.n.to_string(),
        doc.seed.to_string(),
        format!("\"{}\"", doc.word),
        fmt17(doc.report.closure_residual),
    ];
    for (i, q) in doc.tuple.iter().enumerate() {
        push_quat_header(&mut header, &format!("g{}", i + 1));
        push_quat_row(&mut row, q);
    }
    for (i, s) in doc.report.sides.iter().enumerate() {
        header.push(format!("side_{}", i + 1));
        row.push(fmt17(*s));
    }
    for (j, f) in doc.report.prefix_traces.iter().enumerate() {
        header.push(format!("f_{}", j + 1));
        row.push(fmt17(*f));
    }
    csv_table(&header, &[row])
}

fn verify_csv(report: &Report) -> String {
    let header: Vec<String> = [
        "name",
        "criterion",
        "measured",
        "threshold",
        "sense",
        "passed",
        "trials",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let rows: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.criterion.map(|n| n.to_string()).unwrap_or_default(),
                fmt17(c.measured),
                fmt17(c.threshold),
                format!("{:?}", c.sense).to_lowercase(),
                c.passed.to_string(),
                c.trials.to_string(),
            ]
        })
        .collect();
    csv_table(&header, &rows)
}

fn write_output(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, contents)?;
    Ok(())
}

fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let mut text =
        serde_json::to_string_pretty(doc).map_err(|e| Error::Io(format!("serialize: {e}")))?;
    text.push('\n');
    Ok(text)
}

// ---------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------

fn fan_diagonals(t: &HolonomyTuple) -> Vec<DiagonalDoc> {
    (2..=t.len())
        .map(|j| DiagonalDoc {
            from: 1,
            to: j,
            length: diagonal_length(t, 1, j).expect("fan indices valid"),
        })
        .collect()
}

fn solve_from_config(config: &RunConfig) -> Result<HolonomyTuple> {
    let lengths = SideLengths::new(config.side_lengths.clone())?;
    solve_closure(&lengths, config.seed, config.tolerance)
}

fn build_solve_doc(config: &RunConfig) -> Result<SolveDoc> {
    let t = solve_from_config(config)?;
    let polygon = to_polygon(&t, &GroupElement::IDENTITY);
    Ok(SolveDoc {
        schema_version: SCHEMA_VERSION,
        command: "solve".into(),
        n: config.n,
        sides: config.side_lengths.clone(),
        seed: config.seed,
        tolerance: config.tolerance,
        tuple: t.entries().iter().map(QuatDoc::from).collect(),
        vertices: polygon.vertices.iter().map(QuatDoc::from).collect(),
        diagonals: fan_diagonals(&t),
        closure_residual: closure_residual(&t),
    })
}

/// `solve`: find a closed tuple and write the document. Returns the
/// output path.
pub fn cmd_solve(args: &CommonArgs) -> Result<PathBuf> {
    let config = args.resolve()?;
    let doc = build_solve_doc(&config)?;
    let path = output_path(&config, "solve");
    let contents = match config.format {
        OutputFormat::Json => to_json(&doc)?,
        OutputFormat::Csv => solve_csv(&doc),
    };
    write_output(&path, &contents)?;
    Ok(path)
}

/// `flow`: solve, then sample the unit-speed bending flow of fan
/// diagonal `j` at evenly spaced angles.
pub fn cmd_flow(args: &FlowArgs) -> Result<PathBuf> {
    let config = args.common.resolve()?;
    if args.samples == 0 {
        return Err(Error::Config("--samples must be at least 1".into()));
    }
    let t = solve_from_config(&config)?;
    let n = t.len();
    let reference: Vec<f64> = (1..=n)
        .map(|k| f_val(&t, k).expect("valid prefix"))
        .collect();
    let mut samples = Vec::with_capacity(args.samples);
    for step in 0..args.samples {
        let angle = if args.samples == 1 {
            0.0
        } else {
            args.angle * step as f64 / (args.samples - 1) as f64
        };
        let spec = FlowSpec {
            j: args.j,
            t: angle,
            normalized: true,
        };
        let moved = spec.apply(&t)?;
        let polygon = to_polygon(&moved, &GroupElement::IDENTITY);
        let lengths: Vec<f64> = (2..=n)
            .map(|j| diagonal_length(&moved, 1, j).expect("fan indices valid"))
            .collect();
        let drift = (1..=n)
            .map(|k| (f_val(&moved, k).expect("valid prefix") - reference[k - 1]).abs())
            .fold(0.0, f64::max);
        samples.push(FlowSampleDoc {
            angle,
            vertices: polygon.vertices.iter().map(QuatDoc::from).collect(),
            lengths,
            drift,
        });
    }
    let doc = FlowDoc {
        schema_version: SCHEMA_VERSION,
        command: "flow".into(),
        n: config.n,
        sides: config.side_lengths.clone(),
        seed: config.seed,
        tolerance: config.tolerance,
        j: args.j,
        samples,
    };
    let path = output_path(&config, "flow");
    let contents = match config.format {
        OutputFormat::Json => to_json(&doc)?,
        OutputFormat::Csv => flow_csv(&doc),
    };
    write_output(&path, &contents)?;
    Ok(path)
}

/// `braid`: solve, apply the braid word, write the resulting tuple and
/// its invariant report.
pub fn cmd_braid(args: &BraidArgs) -> Result<PathBuf> {
    let config = args.common.resolve()?;
    let word = parse_word(&args.word)?;
    let t = solve_from_config(&config)?;
    let moved = apply_word(&t, &word)?;
    let n = moved.len();
    let doc = BraidDoc {
        schema_version: SCHEMA_VERSION,
        command: "braid".into(),
        n: config.n,
        sides: config.side_lengths.clone(),
        seed: config.seed,
        tolerance: config.tolerance,
        word: args.word.clone(),
        tuple: moved.entries().iter().map(QuatDoc::from).collect(),
        report: BraidReportDoc {
            sides: moved.entries().iter().map(side_length).collect(),
            prefix_traces: (1..=n)
                .map(|j| f_val(&moved, j).expect("valid prefix"))
                .collect(),
            closure_residual: closure_residual(&moved),
        },
    };
    let path = output_path(&config, "braid");
    let contents = match config.format {
        OutputFormat::Json => to_json(&doc)?,
        OutputFormat::Csv => braid_csv(&doc),
    };
    write_output(&path, &contents)?;
    Ok(path)
}

/// `verify`: run a suite, print one line per check, write the report.
/// Returns the report (the caller maps failure to exit code 4).
pub fn cmd_verify(args: &VerifyArgs, out: &mut impl std::io::Write) -> Result<Report> {
    let suite: Suite = args.suite.parse()?;
    let report = run_suite(suite, args.seed, args.tol);
    for c in &report.checks {
        let cmp = match c.sense {
            crate::verify::Sense::Below => "<",
            crate::verify::Sense::Above => ">",
        };
        writeln!(
            out,
            "{} {:44} measured {:.3e} {} {:.3e}  [{} trials]{}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            cmp,
            c.threshold,
            c.trials,
            c.criterion
                .map(|n| format!("  (criterion {n})"))
                .unwrap_or_default(),
        )
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    let format: OutputFormat = match &args.format {
        Some(text) => text.parse()?,
        None => OutputFormat::Json,
    };
    let path = match &args.out {
        Some(p) => p.clone(),
        None => PathBuf::from(format!("s3poly-verify.{}", format.extension())),
    };
    let doc = VerifyDoc {
        schema_version: SCHEMA_VERSION,
        command: "verify".into(),
        report: report.clone(),
    };
    let contents = match format {
        OutputFormat::Json => to_json(&doc)?,
        OutputFormat::Csv => verify_csv(&report),
    };
    write_output(&path, &contents)?;
    Ok(report)
}

/// `export`: convert a previously written JSON document to the
/// requested format.
pub fn cmd_export(args: &ExportArgs) -> Result<PathBuf> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Error::Config(format!("input {}: {e}", args.input.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("input {}: {e}", args.input.display())))?;
    let command = value
        .get("command")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Config("document has no \"command\" field".into()))?
        .to_string();
    let format: OutputFormat = args.format.parse()?;
    let from_value =
        |e: serde_json::Error| Error::Config(format!("malformed {command} document: {e}"));
    let contents = match (command.as_str(), format) {
        ("solve", OutputFormat::Csv) => {
            solve_csv(&serde_json::from_value(value).map_err(from_value)?)
        }
        ("flow", OutputFormat::Csv) => {
            flow_csv(&serde_json::from_value(value).map_err(from_value)?)
        }
        ("braid", OutputFormat::Csv) => {
            braid_csv(&serde_json::from_value(value).map_err(from_value)?)
        }
        ("verify", OutputFormat::Csv) => {
            let doc: VerifyDoc = serde_json::from_value(value).map_err(from_value)?;
            verify_csv(&doc.report)
        }
        (_, OutputFormat::Json) => to_json(&value)?,
        (other, _) => return Err(Error::Config(format!("unknown document command {other:?}"))),
    };
    write_output(&args.out, &contents)?;
    Ok(args.out.clone())
}

/// Dispatch a parsed command line. Returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome: Result<()> = match &cli.command {
        Command::Solve(args) => cmd_solve(args).map(|path| {
            println!("wrote {}", path.display());
        }),
        Command::Flow(args) => cmd_flow(args).map(|path| {
            println!("wrote {}", path.display());
        }),
        Command::Braid(args) => cmd_braid(args).map(|path| {
            println!("wrote {}", path.display());
        }),
        Command::Verify(args) => {
            let mut stdout = std::io::stdout();
            match cmd_verify(args, &mut stdout) {
                Ok(report) if report.passed => Ok(()),
                Ok(_) => {
                    eprintln!(
                        "s3poly: error kind=verification_failed msg=\"one or more checks failed\""
                    );
                    return 4;
                }
                Err(e) => Err(e),
            }
        }
        Command::Export(args) => cmd_export(args).map(|path| {
            println!("wrote {}", path.display());
        }),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("s3poly: error kind={} msg=\"{}\"", e.kind(), e);
            e.exit_code()
        }
    }
}
