//! `ipi` command-line front end.
//!
//! Exit codes: 0 success, 1 unreadable input or bad usage, 2 parse or
//! validation failure, 3 degenerate sector (no IPI above zero).

pub mod render;

use std::ffi::OsString;
use std::fs::File;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ipi_core::engine::{self, EngineError};
use ipi_core::fixture::WORKED_EXAMPLE_CSV;
use ipi_core::ingest::{
    self, parse_dataset, validate, ParseOptions, ValidateOptions, ValidationReport,
};
use ipi_core::stats::{self, SdKind, StatsError};
use ipi_core::synth::{self, SynthConfig, SynthMode};
use ipi_core::{ExportMeasure, SectorDataset, Year, DEFAULT_SHARE_TOLERANCE};

pub use render::ReportFormat;
use render::{fixed, json_num, opt_fixed, opt_json, Table, JSON_SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

/// Set to any value to disable ANSI styling.
pub const NO_COLOR_ENV: &str = "IPI_NO_COLOR";

#[derive(Debug, Parser)]
#[command(name = "ipi", version, about = "Sectoral international priority index (IPI / NIPI)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute IPI, NIPI and the sectoral order.
    Compute(ComputeArgs),
    /// Check a dataset and list errors and warnings.
    Validate(CommonArgs),
    /// Per-zone means and standard deviations.
    Describe(DescribeArgs),
    /// Early-vs-late respondent ANOVA over every survey item.
    BiasCheck(BiasCheckArgs),
    /// Generate a synthetic sector in the ingest CSV format.
    Synth(SynthArgs),
    /// Print the embedded four-firm worked example as CSV.
    Example,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Dataset CSV; `-` reads stdin. Defaults to stdin.
    #[arg(long, conflicts_with = "example")]
    pub input: Option<PathBuf>,
    /// Use the embedded worked example instead of a file.
    #[arg(long)]
    pub example: bool,
    /// Year durations are measured against (overrides the file's metadata).
    #[arg(long)]
    pub reference_year: Option<Year>,
    /// Allowed deviation of a firm's share sum from 1.
    #[arg(long, default_value_t = DEFAULT_SHARE_TOLERANCE)]
    pub share_tolerance: f64,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    pub format: ReportFormat,
    /// Decimal places in rendered numbers.
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Include the per-dyad IPI breakdown.
    #[arg(long)]
    pub breakdown: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SdArg {
    Sample,
    Population,
}

#[derive(Debug, Args)]
pub struct DescribeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = SdArg::Sample)]
    pub sd: SdArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    /// Use the `wave` column.
    Wave,
    /// First half of the rows early, second half late.
    Median,
}

#[derive(Debug, Args)]
pub struct BiasCheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = SplitArg::Wave)]
    pub split: SplitArg,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Gradualist,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Share,
    Volume,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Gradualist)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 100)]
    pub firms: usize,
    #[arg(long, default_value_t = 4)]
    pub zones: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated planted order of zone ids (Z1..Zn), highest priority
    /// first. Drawn from the seed when omitted.
    #[arg(long, value_delimiter = ',')]
    pub planted: Option<Vec<String>>,
    #[arg(long, default_value_t = 0.0)]
    pub tie_probability: f64,
    #[arg(long, default_value_t = 0.0)]
    pub order_noise: f64,
    #[arg(long, default_value_t = 0.6)]
    pub depth_concentration: f64,
    #[arg(long, default_value_t = 1)]
    pub gap_min: u32,
    #[arg(long, default_value_t = 5)]
    pub gap_max: u32,
    /// Every firm serves every zone.
    #[arg(long)]
    pub serve_all: bool,
    #[arg(long, value_enum, default_value_t = MeasureArg::Share)]
    pub measure: MeasureArg,
    #[arg(long, default_value_t = 2013)]
    pub reference_year: Year,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Process streams handed to [`run`].
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    pub styled: bool,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() {
                &mut *io.stderr
            } else {
                &mut *io.stdout
            };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, io) {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(io.stderr, "error: {message}");
            code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_IO, format!("write failed: {e}"))
    }
}

fn execute(command: Command, io: &mut Io<'_>) -> Result<i32, Failure> {
    match command {
        Command::Compute(args) => cmd_compute(&args, io),
        Command::Validate(args) => cmd_validate(&args, io),
        Command::Describe(args) => cmd_describe(&args, io),
        Command::BiasCheck(args) => cmd_bias_check(&args, io),
        Command::Synth(args) => cmd_synth(&args, io),
        Command::Example => {
            io.stdout.write_all(WORKED_EXAMPLE_CSV.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn read_input(args: &InputArgs, io: &mut Io<'_>) -> Result<String, Failure> {
    if args.example {
        return Ok(WORKED_EXAMPLE_CSV.to_string());
    }
    let mut text = String::new();
    match &args.input {
        Some(path) if path.as_os_str() != "-" => {
            File::open(path)
                .and_then(|mut f| f.read_to_string(&mut text))
                .map_err(|e| {
                    Failure::new(EXIT_IO, format!("cannot read {}: {e}", path.display()))
                })?;
        }
        _ => {
            io.stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure::new(EXIT_IO, format!("cannot read stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn validate_options(args: &InputArgs) -> ValidateOptions {
    ValidateOptions {
        reference_year: args.reference_year,
        share_tolerance: args.share_tolerance,
    }
}

/// Reads, parses and validates; validation findings go to stderr on failure
/// and warnings always go to stderr.
fn load(args: &InputArgs, io: &mut Io<'_>) -> Result<SectorDataset, Failure> {
    let text = read_input(args, io)?;
    let raw = parse_dataset(text.as_bytes(), &ParseOptions::default())
        .map_err(|e| Failure::new(EXIT_INVALID, format!("parse error: {e}")))?;
    match validate(&raw, &validate_options(args)) {
        Ok((dataset, report)) => {
            for w in &report.warnings {
                writeln!(io.stderr, "warning: {w}")?;
            }
            Ok(dataset)
        }
        Err(report) => {
            for e in &report.errors {
                writeln!(io.stderr, "error: {e}")?;
            }
            Err(Failure::new(
                EXIT_INVALID,
                format!("validation failed: {}", summary_line(&report)),
            ))
        }
    }
}

fn summary_line(report: &ValidationReport) -> String {
    let plural = |n: usize, word: &str| format!("{n} {word}{}", if n == 1 { "" } else { "s" });
    format!(
        "{}, {}",
        plural(report.errors.len(), "error"),
        plural(report.warnings.len(), "warning")
    )
}

fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json serializes");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// compute

fn cmd_compute(args: &ComputeArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let dataset = load(&args.common.input, io)?;
    let report = match engine::priority_report(&dataset) {
        Ok(r) => r,
        Err(EngineError::DegenerateSector) => {
            return Err(Failure::new(
                EXIT_DEGENERATE,
                "degenerate sector: no firm entered one zone before another, every IPI is 0",
            ))
        }
        Err(e) => return Err(Failure::new(EXIT_INVALID, e.to_string())),
    };
    let out = render_priority_report(
        &report,
        args.common.format,
        args.common.precision.unwrap_or(2),
        args.breakdown,
        io.styled,
    );
    io.stdout.write_all(out.as_bytes())?;
    Ok(EXIT_OK)
}

/// Renders a priority report in the requested format.
pub fn render_priority_report(
    report: &ipi_core::PriorityReport,
    format: ReportFormat,
    precision: usize,
    breakdown: bool,
    styled: bool,
) -> String {
    let zones: Vec<&str> = report.zones.iter().map(|z| z.zone.as_str()).collect();
    let pct = |p: i64| format!("{p}%");
    let tie_mark = |tied: bool| if tied { "*" } else { "" };

    match format {
        ReportFormat::Json => {
            let mut map = Map::new();
            for z in &report.zones {
                let mut entry = Map::new();
                entry.insert("ipi".into(), json_num(z.ipi, precision));
                entry.insert("nipi".into(), json_num(z.nipi, precision));
                entry.insert("nipi_pct".into(), json!(z.nipi_pct));
                entry.insert("order".into(), json!(z.order));
                entry.insert("tied".into(), json!(z.tied));
                if breakdown {
                    let parts: Map<String, Value> = z
                        .breakdown
                        .iter()
                        .map(|(other, v)| (other.to_string(), json_num(*v, precision)))
                        .collect();
                    entry.insert("breakdown".into(), Value::Object(parts));
                }
                map.insert(z.zone.to_string(), Value::Object(entry));
            }
            let order: Vec<&str> = report.ranked().iter().map(|z| z.zone.as_str()).collect();
            json_text(&json!({
                "schema": format!("ipi.priority-report/v{JSON_SCHEMA_VERSION}"),
                "reference_year": report.reference_year,
                "precision": precision,
                "zones": map,
                "sectoral_order": order,
                "max_tie": report.max_tie,
            }))
        }
        ReportFormat::Csv => {
            let mut headers: Vec<String> =
                ["zone", "ipi", "nipi", "nipi_pct", "order", "tied"].map(String::from).to_vec();
            if breakdown {
                headers.extend(zones.iter().map(|z| format!("ipi_vs_{z}")));
            }
            let mut t = Table::new(headers);
            for z in &report.zones {
                let mut row = vec![
                    z.zone.to_string(),
                    fixed(z.ipi, precision),
                    fixed(z.nipi, precision),
                    z.nipi_pct.to_string(),
                    z.order.to_string(),
                    z.tied.to_string(),
                ];
                if breakdown {
                    for other in &zones {
                        row.push(
                            z.breakdown
                                .iter()
                                .find(|(o, _)| o.as_str() == *other)
                                .map_or_else(|| "-".to_string(), |(_, v)| fixed(*v, precision)),
                        );
                    }
                }
                t.push(row);
            }
            t.render(format, styled)
        }
        ReportFormat::Table | ReportFormat::Markdown => {
            let mut out = String::new();
            if breakdown {
                let mut t = Table::new(["Zone", "Dyad", "IPI disaggregated", "IPI total"]);
                for z in &report.zones {
                    for (k, (other, v)) in z.breakdown.iter().enumerate() {
                        t.push(vec![
                            if k == 0 { z.zone.to_string() } else { String::new() },
                            format!("{} - {}", z.zone, other),
                            fixed(*v, precision),
                            if k == 0 { fixed(z.ipi, precision) } else { String::new() },
                        ]);
                    }
                }
                out.push_str(&t.render(format, styled));
                out.push('\n');
            }
            let mut t = Table::new(["Zone", "IPI", "NIPI", "NIPI x 100%", "Order"]);
            for z in &report.zones {
                t.push(vec![
                    z.zone.to_string(),
                    fixed(z.ipi, precision),
                    fixed(z.nipi, precision),
                    pct(z.nipi_pct),
                    format!("{}{}", z.order, tie_mark(z.tied)),
                ]);
            }
            out.push_str(&t.render(format, styled));
            let ranked: Vec<&str> = report.ranked().iter().map(|z| z.zone.as_str()).collect();
            out.push_str(&format!("\nSectoral order: {}\n", ranked.join(" > ")));
            if report.zones.iter().any(|z| z.tied) {
                out.push_str("* tied NIPI; order among tied zones follows zone id\n");
            }
            out
        }
    }
}

// ---------------------------------------------------------------------------
// validate

fn cmd_validate(args: &CommonArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let text = read_input(&args.input, io)?;
    let raw = match parse_dataset(text.as_bytes(), &ParseOptions::default()) {
        Ok(raw) => raw,
        Err(e) => {
            writeln!(io.stderr, "error: parse error: {e}")?;
            return Ok(EXIT_INVALID);
        }
    };
    let report = match validate(&raw, &validate_options(&args.input)) {
        Ok((_, report)) => report,
        Err(report) => report,
    };
    let out = render_validation(&report, args.format, io.styled);
    io.stdout.write_all(out.as_bytes())?;
    Ok(if report.is_accepted() {
        EXIT_OK
    } else {
        EXIT_INVALID
    })
}

pub fn render_validation(report: &ValidationReport, format: ReportFormat, styled: bool) -> String {
    let findings = report
        .errors
        .iter()
        .map(|f| ("error", f))
        .chain(report.warnings.iter().map(|f| ("warning", f)));
    if format == ReportFormat::Json {
        let list: Vec<Value> = findings
            .map(|(severity, f)| {
                json!({
                    "severity": severity,
                    "line": f.line,
                    "firm_id": f.firm_id,
                    "rule": f.rule.code(),
                    "message": f.message,
                })
            })
            .collect();
        let ties: Vec<Value> = report
            .tie_counts
            .iter()
            .map(|t| json!({"from": t.from.as_str(), "to": t.to.as_str(), "count": t.count}))
            .collect();
        let coverage: Map<String, Value> = report
            .stats
            .zone_coverage
            .iter()
            .map(|(z, n)| (z.to_string(), json!(n)))
            .collect();
        return json_text(&json!({
            "schema": format!("ipi.validation-report/v{JSON_SCHEMA_VERSION}"),
            "accepted": report.is_accepted(),
            "reference_year": report.reference_year,
            "error_count": report.errors.len(),
            "warning_count": report.warnings.len(),
            "findings": list,
            "tie_counts": ties,
            "firm_count": report.stats.firm_count,
            "zone_coverage": coverage,
        }));
    }
    let mut out = String::new();
    let mut t = Table::new(["Severity", "Line", "Firm", "Rule", "Message"]);
    for (severity, f) in findings {
        t.push(vec![
            severity.to_string(),
            f.line.map_or_else(|| "-".into(), |l| l.to_string()),
            f.firm_id.clone().unwrap_or_else(|| "-".into()),
            f.rule.code().to_string(),
            f.message.clone(),
        ]);
    }
    if !t.rows.is_empty() {
        out.push_str(&t.render(format, styled));
        out.push('\n');
    }
    let ties: Vec<String> = report
        .tie_counts
        .iter()
        .filter(|t| t.count > 0)
        .map(|t| format!("({},{})={}", t.from, t.to, t.count))
        .collect();
    if !ties.is_empty() {
        out.push_str(&format!("Tied entries per dyad: {}\n", ties.join(", ")));
    }
    out.push_str(&summary_line(report));
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// describe

fn cmd_describe(args: &DescribeArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let dataset = load(&args.common.input, io)?;
    let kind = match args.sd {
        SdArg::Sample => SdKind::Sample,
        SdArg::Population => SdKind::Population,
    };
    let d = stats::zone_descriptives(&dataset, kind);
    let p = args.common.precision.unwrap_or(3);
    let out = if args.common.format == ReportFormat::Json {
        let summary = |s: &stats::Summary| json!({"n": s.n, "mean": opt_json(s.mean, p), "sd": opt_json(s.sd, p)});
        let zones: Map<String, Value> = d
            .zones
            .iter()
            .map(|z| {
                (
                    z.zone.to_string(),
                    json!({
                        "firms": z.firms,
                        "width": summary(&z.width),
                        "depth": summary(&z.depth),
                        "export_experience": summary(&z.export_experience),
                        "age": summary(&z.age),
                    }),
                )
            })
            .collect();
        json_text(&json!({
            "schema": format!("ipi.zone-descriptives/v{JSON_SCHEMA_VERSION}"),
            "sd": match kind { SdKind::Sample => "sample", SdKind::Population => "population" },
            "reference_year": dataset.reference_year(),
            "zones": zones,
        }))
    } else {
        let mut t = Table::new([
            "Zone",
            "Firms",
            "Width mean",
            "Width SD",
            "Depth mean",
            "Depth SD",
            "Experience mean",
            "Experience SD",
            "Age mean",
            "Age SD",
        ]);
        for z in &d.zones {
            t.push(vec![
                z.zone.to_string(),
                z.firms.to_string(),
                opt_fixed(z.width.mean, p),
                opt_fixed(z.width.sd, p),
                opt_fixed(z.depth.mean, p),
                opt_fixed(z.depth.sd, p),
                opt_fixed(z.export_experience.mean, p),
                opt_fixed(z.export_experience.sd, p),
                opt_fixed(z.age.mean, p),
                opt_fixed(z.age.sd, p),
            ]);
        }
        t.render(args.common.format, io.styled)
    };
    io.stdout.write_all(out.as_bytes())?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// bias-check

fn cmd_bias_check(args: &BiasCheckArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let mut dataset = load(&args.common.input, io)?;
    if args.split == SplitArg::Median {
        dataset = stats::median_split(&dataset)
            .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    }
    let check = match stats::bias_check(&dataset, args.alpha) {
        Ok(c) => c,
        Err(e @ StatsError::EmptyWave(_)) => {
            return Err(Failure::new(
                EXIT_INVALID,
                format!("{e}; add a `wave` column or pass --split median"),
            ))
        }
        Err(e) => return Err(Failure::new(EXIT_INVALID, e.to_string())),
    };
    let p = args.common.precision.unwrap_or(3);
    let verdict = if check.passed() { "PASS" } else { "FAIL" };
    let relation = if check.passed() { ">" } else { "<=" };
    let out = if args.common.format == ReportFormat::Json {
        let items: Vec<Value> = check
            .items
            .iter()
            .map(|c| match &c.result {
                Ok(r) => json!({
                    "item": c.item,
                    "f": json_num(r.f_statistic, p),
                    "df_between": r.df_between,
                    "df_within": r.df_within,
                    "p": json_num(r.p_value, p),
                }),
                Err(e) => json!({"item": c.item, "skipped": e.to_string()}),
            })
            .collect();
        json_text(&json!({
            "schema": format!("ipi.bias-check/v{JSON_SCHEMA_VERSION}"),
            "alpha": check.alpha,
            "min_p": json_num(check.min_p, p),
            "min_p_item": check.min_p_item,
            "tested_items": check.tested,
            "bonferroni_alpha": check.bonferroni_alpha,
            "passed": check.passed(),
            "items": items,
        }))
    } else {
        let mut t = Table::new(["Item", "F", "df1", "df2", "p"]);
        for c in &check.items {
            match &c.result {
                Ok(r) => t.push(vec![
                    c.item.clone(),
                    fixed(r.f_statistic, p),
                    r.df_between.to_string(),
                    r.df_within.to_string(),
                    fixed(r.p_value, p),
                ]),
                Err(e) => t.push(vec![
                    c.item.clone(),
                    format!("skipped: {e}"),
                    "-".into(),
                    "-".into(),
                    "-".into(),
                ]),
            }
        }
        let mut out = t.render(args.common.format, io.styled);
        out.push_str(&format!(
            "\np = {}, {verdict} ({relation} {})\nminimum over {} tested items ({}); Bonferroni threshold {}/{} = {:.4}\n",
            fixed(check.min_p, p),
            check.alpha,
            check.tested,
            check.min_p_item,
            check.alpha,
            check.tested,
            check.bonferroni_alpha,
        ));
        out
    };
    io.stdout.write_all(out.as_bytes())?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// synth

fn cmd_synth(args: &SynthArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let planted_order = match &args.planted {
        None => None,
        Some(names) => {
            let zones = synth::zone_names(args.zones);
            let order = names
                .iter()
                .map(|n| {
                    zones.iter().position(|z| z == n.trim()).ok_or_else(|| {
                        Failure::new(
                            EXIT_IO,
                            format!("unknown zone `{n}` in --planted (zones are Z1..Z{})", args.zones),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(order)
        }
    };
    let cfg = SynthConfig {
        n_firms: args.firms,
        zone_count: args.zones,
        mode: match args.mode {
            ModeArg::Gradualist => SynthMode::Gradualist,
            ModeArg::Random => SynthMode::Random,
        },
        planted_order,
        entry_gap: (args.gap_min, args.gap_max),
        depth_concentration: args.depth_concentration,
        tie_probability: args.tie_probability,
        order_noise: args.order_noise,
        serve_all: args.serve_all,
        measure: match args.measure {
            MeasureArg::Share => ExportMeasure::Share,
            MeasureArg::Volume => ExportMeasure::Volume,
        },
        reference_year: args.reference_year,
        seed: args.seed,
    };
    let sector = synth::generate_sector(&cfg).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    let planted: Vec<&str> = sector.planted_order.iter().map(|z| z.as_str()).collect();
    let mut text = format!("# planted_order: {}\n", planted.join(","));
    text.push_str(&ingest::dataset_to_csv(&sector.dataset));
    match &args.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_IO, format!("cannot write {}: {e}", path.display())))?,
        None => io.stdout.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}
