//! CSV ingest: parsing firm export tables, validating them into a
//! [`SectorDataset`], and writing datasets back out.
//!
//! Column grammar (header row required, zone order = header order):
//!
//! ```text
//! firm_id, founding_year?, wave?, entry_year_<ZONE>..., (volume_<ZONE>... | share_<ZONE>...)
//! ```
//!
//! Empty cells and `-` both mean "no exports to this zone". Lines starting
//! with `#` before the header carry metadata; `# reference_year: 2013` is
//! recognized, other keys are ignored.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{self, Read, Write};

use thiserror::Error;

use crate::domain::{
    DomainError, ExportMeasure, FirmExportRecord, Rule, SectorDataset, Severity, Wave, Year,
    ZoneId, ZoneSet, DEFAULT_SHARE_TOLERANCE,
};

const ENTRY_PREFIX: &str = "entry_year_";
const REFERENCE_YEAR_KEY: &str = "reference_year";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Io(String),
    NotUtf8,
    MissingHeader,
    EmptyDataset,
    UnknownColumn,
    DuplicateColumn,
    MixedMeasure,
    NoAmountColumns,
    MissingAmountColumn,
    AmountWithoutEntryColumn,
    Zones(String),
    RowLength { expected: u64, got: u64 },
    EmptyFirmId,
    DuplicateFirmId,
    UnparseableYear(String),
    UnparseableNumber(String),
    UnparseableWave(String),
    Metadata(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Io(e) => write!(f, "read failed: {e}"),
            ParseErrorKind::NotUtf8 => f.write_str("input is not valid UTF-8"),
            ParseErrorKind::MissingHeader => f.write_str("missing header row"),
            ParseErrorKind::EmptyDataset => f.write_str("dataset has no data rows"),
            ParseErrorKind::UnknownColumn => f.write_str("unknown column"),
            ParseErrorKind::DuplicateColumn => f.write_str("duplicate column"),
            ParseErrorKind::MixedMeasure => {
                f.write_str("volume_ and share_ columns cannot be mixed in one dataset")
            }
            ParseErrorKind::NoAmountColumns => {
                f.write_str("no volume_<ZONE> or share_<ZONE> columns")
            }
            ParseErrorKind::MissingAmountColumn => {
                f.write_str("zone has an entry year column but no amount column")
            }
            ParseErrorKind::AmountWithoutEntryColumn => {
                f.write_str("amount column has no matching entry_year_<ZONE> column")
            }
            ParseErrorKind::Zones(e) => write!(f, "invalid zone set: {e}"),
            ParseErrorKind::RowLength { expected, got } => {
                write!(f, "row has {got} fields, header has {expected}")
            }
            ParseErrorKind::EmptyFirmId => f.write_str("empty firm_id"),
            ParseErrorKind::DuplicateFirmId => f.write_str("duplicate firm_id"),
            ParseErrorKind::UnparseableYear(v) => write!(f, "unparseable year `{v}`"),
            ParseErrorKind::UnparseableNumber(v) => write!(f, "unparseable number `{v}`"),
            ParseErrorKind::UnparseableWave(v) => {
                write!(f, "unparseable wave `{v}` (expected early/late)")
            }
            ParseErrorKind::Metadata(e) => write!(f, "bad metadata line: {e}"),
        }
    }
}

/// Parse failure with its location in the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// 1-based line in the input.
    pub line: Option<u64>,
    pub column: Option<String>,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column `{c}`: {}", self.kind),
            (Some(l), None) => write!(f, "line {l}: {}", self.kind),
            (None, Some(c)) => write!(f, "column `{c}`: {}", self.kind),
            (None, None) => write!(f, "{}", self.kind),
        }
    }
}

impl ParseError {
    fn new(kind: ParseErrorKind) -> Self {
        Self {
            line: None,
            column: None,
            kind,
        }
    }

    fn at(mut self, line: u64) -> Self {
        self.line = Some(line);
        self
    }

    fn col(mut self, column: &str) -> Self {
        self.column = Some(column.to_string());
        self
    }
}

#[derive(Debug, Clone)]
pub struct ParseOptions {
    pub delimiter: u8,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self { delimiter: b',' }
    }
}

/// One data row as read, before validation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub line: u64,
    pub firm_id: String,
    pub founding_year: Option<Year>,
    pub wave: Option<Wave>,
    pub entry_years: Vec<Option<Year>>,
    pub amounts: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub zones: Vec<String>,
    pub measure: ExportMeasure,
    /// From a `# reference_year:` metadata line, if any.
    pub reference_year: Option<Year>,
    pub records: Vec<RawRecord>,
}

enum Column {
    FirmId,
    FoundingYear,
    Wave,
    Entry(usize),
    Amount(usize),
}

fn is_absent(cell: &str) -> bool {
    cell.is_empty() || cell == "-"
}

fn parse_year(cell: &str) -> Result<Option<Year>, ParseErrorKind> {
    if is_absent(cell) {
        return Ok(None);
    }
    cell.parse::<Year>()
        .map(Some)
        .map_err(|_| ParseErrorKind::UnparseableYear(cell.to_string()))
}

fn parse_amount(cell: &str) -> Result<Option<f64>, ParseErrorKind> {
    if is_absent(cell) {
        return Ok(None);
    }
    cell.parse::<f64>()
        .map(Some)
        .map_err(|_| ParseErrorKind::UnparseableNumber(cell.to_string()))
}

/// Splits off leading `#` metadata lines; returns (reference_year, body, lines consumed).
fn split_metadata(text: &str) -> Result<(Option<Year>, &str, u64), ParseError> {
    let mut reference_year = None;
    let mut offset = 0;
    let mut consumed = 0u64;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if !trimmed.starts_with('#') {
            break;
        }
        consumed += 1;
        offset += line.len();
        let body = trimmed.trim_start_matches('#').trim();
        if let Some((key, value)) = body.split_once(':').or_else(|| body.split_once('=')) {
            if key.trim() == REFERENCE_YEAR_KEY {
                let value = value.trim();
                let year = value.parse::<Year>().map_err(|_| {
                    ParseError::new(ParseErrorKind::Metadata(format!(
                        "reference_year `{value}` is not a year"
                    )))
                    .at(consumed)
                })?;
                reference_year = Some(year);
            }
        }
    }
    Ok((reference_year, &text[offset..], consumed))
}

/// Reads a delimiter-separated firm table.
pub fn parse_dataset<R: Read>(mut input: R, options: &ParseOptions) -> Result<RawDataset, ParseError> {
    let mut bytes = Vec::new();
    input
        .read_to_end(&mut bytes)
        .map_err(|e| ParseError::new(ParseErrorKind::Io(e.to_string())))?;
    let text = String::from_utf8(bytes).map_err(|_| ParseError::new(ParseErrorKind::NotUtf8))?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(&text);
    let (reference_year, body, offset) = split_metadata(text)?;

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(body.as_bytes());

    let header_line = offset + 1;
    let headers = reader
        .headers()
        .map_err(|e| csv_error(e, offset))?
        .clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(ParseError::new(ParseErrorKind::MissingHeader).at(header_line));
    }

    // classify header columns
    let mut columns = Vec::with_capacity(headers.len());
    let mut seen = HashSet::new();
    let mut zones: Vec<String> = Vec::new();
    let mut amount_cols: Vec<(String, ExportMeasure)> = Vec::new();
    for name in headers.iter() {
        if !seen.insert(name) {
            return Err(ParseError::new(ParseErrorKind::DuplicateColumn)
                .at(header_line)
                .col(name));
        }
        let column = if name == "firm_id" {
            Column::FirmId
        } else if name == "founding_year" {
            Column::FoundingYear
        } else if name == "wave" {
            Column::Wave
        } else if let Some(zone) = name.strip_prefix(ENTRY_PREFIX) {
            zones.push(zone.to_string());
            Column::Entry(zones.len() - 1)
        } else if let Some(zone) = name.strip_prefix(ExportMeasure::Volume.column_prefix()) {
            amount_cols.push((zone.to_string(), ExportMeasure::Volume));
            Column::Amount(usize::MAX)
        } else if let Some(zone) = name.strip_prefix(ExportMeasure::Share.column_prefix()) {
            amount_cols.push((zone.to_string(), ExportMeasure::Share));
            Column::Amount(usize::MAX)
        } else {
            return Err(ParseError::new(ParseErrorKind::UnknownColumn)
                .at(header_line)
                .col(name));
        };
        columns.push(column);
    }
    ZoneSet::new(zones.clone())
        .map_err(|e| ParseError::new(ParseErrorKind::Zones(e.to_string())).at(header_line))?;

    let measure = match amount_cols.first() {
        None => return Err(ParseError::new(ParseErrorKind::NoAmountColumns).at(header_line)),
        Some((_, m)) => *m,
    };
    if let Some((zone, other)) = amount_cols.iter().find(|(_, m)| *m != measure) {
        return Err(ParseError::new(ParseErrorKind::MixedMeasure)
            .at(header_line)
            .col(&format!("{}{zone}", other.column_prefix())));
    }
    let zone_index: HashMap<&str, usize> =
        zones.iter().enumerate().map(|(i, z)| (z.as_str(), i)).collect();
    let mut amount_iter = amount_cols.iter();
    for column in columns.iter_mut() {
        if let Column::Amount(slot) = column {
            let (zone, m) = amount_iter.next().expect("one entry per amount column");
            *slot = *zone_index.get(zone.as_str()).ok_or_else(|| {
                ParseError::new(ParseErrorKind::AmountWithoutEntryColumn)
                    .at(header_line)
                    .col(&format!("{}{zone}", m.column_prefix()))
            })?;
        }
    }
    for (i, zone) in zones.iter().enumerate() {
        if !columns.iter().any(|c| matches!(c, Column::Amount(j) if *j == i)) {
            return Err(ParseError::new(ParseErrorKind::MissingAmountColumn)
                .at(header_line)
                .col(&format!("{ENTRY_PREFIX}{zone}")));
        }
    }
    let has_firm_id = columns.iter().any(|c| matches!(c, Column::FirmId));

    let mut records = Vec::new();
    let mut ids = HashSet::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(e, offset))?;
        let line = row.position().map_or(0, |p| p.line()) + offset;
        if row.iter().all(str::is_empty) {
            continue;
        }
        let mut record = RawRecord {
            line,
            firm_id: format!("row-{line}"),
            founding_year: None,
            wave: None,
            entry_years: vec![None; zones.len()],
            amounts: vec![None; zones.len()],
        };
        for ((column, cell), name) in columns.iter().zip(row.iter()).zip(headers.iter()) {
            let locate = |kind| ParseError::new(kind).at(line).col(name);
            match column {
                Column::FirmId => {
                    if cell.is_empty() {
                        return Err(locate(ParseErrorKind::EmptyFirmId));
                    }
                    record.firm_id = cell.to_string();
                }
                Column::FoundingYear => record.founding_year = parse_year(cell).map_err(locate)?,
                Column::Wave => {
                    if !cell.is_empty() {
                        record.wave = Some(
                            cell.parse()
                                .map_err(|_| locate(ParseErrorKind::UnparseableWave(cell.into())))?,
                        );
                    }
                }
                Column::Entry(z) => record.entry_years[*z] = parse_year(cell).map_err(locate)?,
                Column::Amount(z) => record.amounts[*z] = parse_amount(cell).map_err(locate)?,
            }
        }
        if !ids.insert(record.firm_id.clone()) {
            let err = ParseError::new(ParseErrorKind::DuplicateFirmId).at(line);
            return Err(if has_firm_id { err.col("firm_id") } else { err });
        }
        records.push(record);
    }
    if records.is_empty() {
        return Err(ParseError::new(ParseErrorKind::EmptyDataset));
    }
    Ok(RawDataset {
        zones,
        measure,
        reference_year,
        records,
    })
}

fn csv_error(err: csv::Error, offset: u64) -> ParseError {
    let line = err.position().map(|p| p.line() + offset);
    let kind = match err.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => ParseErrorKind::RowLength {
            expected: *expected_len,
            got: *len,
        },
        csv::ErrorKind::Utf8 { .. } => ParseErrorKind::NotUtf8,
        _ => ParseErrorKind::Io(err.to_string()),
    };
    ParseError {
        line,
        column: None,
        kind,
    }
}

#[derive(Debug, Clone)]
pub struct ValidateOptions {
    /// Overrides any reference year carried by the input.
    pub reference_year: Option<Year>,
    pub share_tolerance: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            reference_year: None,
            share_tolerance: DEFAULT_SHARE_TOLERANCE,
        }
    }
}

/// A located validation error or warning.
#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub firm_id: Option<String>,
    pub line: Option<u64>,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(id) = &self.firm_id {
            write!(f, "firm `{id}`: ")?;
        }
        write!(f, "[{}] {}", self.rule, self.message)
    }
}

/// Number of firms whose entry years into `from` and `to` are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadTieCount {
    pub from: ZoneId,
    pub to: ZoneId,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DatasetStats {
    pub firm_count: usize,
    /// Firms serving each zone, in zone order.
    pub zone_coverage: Vec<(ZoneId, usize)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub reference_year: Option<Year>,
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
    /// Every ordered dyad, zone-major order.
    pub tie_counts: Vec<DyadTieCount>,
    pub stats: DatasetStats,
}

impl ValidationReport {
    pub fn is_accepted(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn tie_count(&self, from: &str, to: &str) -> Option<usize> {
        self.tie_counts
            .iter()
            .find(|t| t.from.as_str() == from && t.to.as_str() == to)
            .map(|t| t.count)
    }
}

/// Checks parsed rows and builds a dataset. Volumes become shares here.
///
/// The outcome is `Ok` iff no error-severity finding was raised; the
/// report is returned either way.
#[allow(clippy::result_large_err)]
pub fn validate(
    raw: &RawDataset,
    options: &ValidateOptions,
) -> Result<(SectorDataset, ValidationReport), ValidationReport> {
    let mut report = ValidationReport::default();
    let zone_set = match ZoneSet::new(raw.zones.clone()) {
        Ok(zs) => zs,
        Err(e) => {
            report.errors.push(Finding {
                firm_id: None,
                line: None,
                rule: Rule::NoExportZone,
                message: e.to_string(),
            });
            return Err(report);
        }
    };
    let n = zone_set.len();

    let observed_max = raw
        .records
        .iter()
        .flat_map(|r| r.entry_years.iter().flatten())
        .copied()
        .max();
    let reference_year = match options.reference_year.or(raw.reference_year) {
        Some(y) => Some(y),
        None => {
            if let Some(y) = observed_max {
                report.warnings.push(Finding {
                    firm_id: None,
                    line: None,
                    rule: Rule::DefaultReferenceYear,
                    message: format!(
                        "no reference year given; using the latest entry year {y}"
                    ),
                });
            }
            observed_max
        }
    };
    report.reference_year = reference_year;

    let records: Vec<FirmExportRecord> = raw
        .records
        .iter()
        .map(|r| {
            FirmExportRecord::new(
                r.firm_id.clone(),
                r.founding_year,
                r.wave,
                r.entry_years.clone(),
                r.amounts.iter().map(|a| a.unwrap_or(0.0)).collect(),
                raw.measure,
            )
        })
        .collect();

    let mut ties = vec![0usize; n * n];
    for (raw_rec, rec) in raw.records.iter().zip(&records) {
        // with no entry year anywhere, any reference year yields the same finding
        let year = reference_year.unwrap_or(Year::MAX);
        for v in rec.violations(zone_set.zones(), raw.measure, year, options.share_tolerance) {
            let finding = Finding {
                firm_id: Some(rec.firm_id().to_string()),
                line: Some(raw_rec.line),
                rule: v.rule,
                message: v.message,
            };
            match v.rule.severity() {
                Severity::Error => report.errors.push(finding),
                Severity::Warning => report.warnings.push(finding),
            }
        }
        for z in 0..n {
            for i in (z + 1)..n {
                match (rec.entry_year(z), rec.entry_year(i)) {
                    (Some(a), Some(b)) if a == b => {
                        ties[z * n + i] += 1;
                        ties[i * n + z] += 1;
                        report.warnings.push(Finding {
                            firm_id: Some(rec.firm_id().to_string()),
                            line: Some(raw_rec.line),
                            rule: Rule::TiedEntry,
                            message: format!(
                                "entered {} and {} in the same year {a}; counts for neither dyad ({0},{1}) nor ({1},{0})",
                                zone_set.zones()[z],
                                zone_set.zones()[i],
                            ),
                        });
                    }
                    _ => {}
                }
            }
        }
    }
    for z in 0..n {
        for i in 0..n {
            if z != i {
                report.tie_counts.push(DyadTieCount {
                    from: zone_set.zones()[z].clone(),
                    to: zone_set.zones()[i].clone(),
                    count: ties[z * n + i],
                });
            }
        }
    }
    report.stats = DatasetStats {
        firm_count: records.len(),
        zone_coverage: zone_set
            .zones()
            .iter()
            .enumerate()
            .map(|(z, id)| (id.clone(), records.iter().filter(|r| r.serves(z)).count()))
            .collect(),
    };

    let Some(reference_year) = reference_year else {
        return Err(report);
    };
    if !report.errors.is_empty() {
        return Err(report);
    }
    match SectorDataset::new(
        zone_set,
        raw.measure,
        records,
        reference_year,
        options.share_tolerance,
    ) {
        Ok(ds) => Ok((ds, report)),
        Err(e) => {
            let message = match &e {
                DomainError::Invalid(v) => v
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; "),
                other => other.to_string(),
            };
            report.errors.push(Finding {
                firm_id: None,
                line: None,
                rule: Rule::NoExportZone,
                message,
            });
            Err(report)
        }
    }
}

/// Parses and validates in one step.
pub fn read_dataset<R: Read>(
    input: R,
    parse: &ParseOptions,
    options: &ValidateOptions,
) -> Result<(SectorDataset, ValidationReport), LoadError> {
    let raw = parse_dataset(input, parse)?;
    validate(&raw, options).map_err(|r| LoadError::Invalid(Box::new(r)))
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("validation failed with {} error(s)", .0.errors.len())]
    Invalid(Box<ValidationReport>),
}

/// Writes a dataset in the ingest CSV format, including its reference year.
pub fn write_dataset<W: Write>(dataset: &SectorDataset, mut out: W) -> io::Result<()> {
    writeln!(out, "# {REFERENCE_YEAR_KEY}: {}", dataset.reference_year())?;
    let firms = dataset.firms();
    let with_founding = firms.iter().any(|f| f.founding_year().is_some());
    let with_wave = firms.iter().any(|f| f.wave().is_some());
    let prefix = dataset.measure().column_prefix();

    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["firm_id".to_string()];
    if with_founding {
        header.push("founding_year".into());
    }
    if with_wave {
        header.push("wave".into());
    }
    header.extend(dataset.zones().iter().map(|z| format!("{ENTRY_PREFIX}{z}")));
    header.extend(dataset.zones().iter().map(|z| format!("{prefix}{z}")));
    w.write_record(&header)?;

    for firm in firms {
        let mut row = vec![firm.firm_id().to_string()];
        if with_founding {
            row.push(firm.founding_year().map(|y| y.to_string()).unwrap_or_default());
        }
        if with_wave {
            row.push(firm.wave().map(|w| w.as_str().to_string()).unwrap_or_default());
        }
        row.extend(
            firm.entry_years()
                .iter()
                .map(|e| e.map_or_else(|| "-".to_string(), |y| y.to_string())),
        );
        row.extend(firm.entry_years().iter().zip(firm.amounts()).map(|(e, a)| {
            if e.is_none() && *a == 0.0 {
                "-".to_string()
            } else {
                a.to_string()
            }
        }));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn dataset_to_csv(dataset: &SectorDataset) -> String {
    let mut buf = Vec::new();
    write_dataset(dataset, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is UTF-8")
}
