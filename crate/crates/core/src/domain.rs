//! Core data model: zones, firm export records, validated sector datasets
//! and the priority report shape.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// Calendar year. Durations are plain integer differences.
pub type Year = i32;

/// Default tolerance on `|sum(shares) - 1|`.
pub const DEFAULT_SHARE_TOLERANCE: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("a zone set needs at least 2 zones, got {0}")]
    TooFewZones(usize),
    #[error("zone identifier must not be empty")]
    EmptyZoneId,
    #[error("duplicate zone identifier `{0}`")]
    DuplicateZone(String),
    #[error("unknown zone `{0}`")]
    UnknownZone(String),
    #[error("firm `{0}` has no entry year in any zone")]
    NoEntryYears(String),
    #[error("firm `{firm}`: reference year {reference_year} precedes its first entry year {first_entry}")]
    ReferenceBeforeEntry {
        firm: String,
        reference_year: Year,
        first_entry: Year,
    },
    #[error("firm `{firm}` has {got} zone cells, zone set has {expected}")]
    ZoneCountMismatch {
        firm: String,
        expected: usize,
        got: usize,
    },
    #[error("duplicate firm id `{0}`")]
    DuplicateFirm(String),
    #[error("dataset has {} invariant violation(s); first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
}

/// Identifier of an export zone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZoneId(String);

impl ZoneId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ZoneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for ZoneId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Ordered, non-empty set of at least two unique zones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZoneSet {
    zones: Vec<ZoneId>,
}

impl ZoneSet {
    pub fn new<I, S>(zones: I) -> Result<Self, DomainError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let zones: Vec<String> = zones.into_iter().map(Into::into).collect();
        if zones.len() < 2 {
            return Err(DomainError::TooFewZones(zones.len()));
        }
        let mut seen = HashSet::new();
        for z in &zones {
            if z.trim().is_empty() {
                return Err(DomainError::EmptyZoneId);
            }
            if !seen.insert(z.as_str()) {
                return Err(DomainError::DuplicateZone(z.clone()));
            }
        }
        Ok(Self {
            zones: zones.into_iter().map(ZoneId).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.zones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zones.is_empty()
    }

    pub fn zones(&self) -> &[ZoneId] {
        &self.zones
    }

    pub fn get(&self, index: usize) -> Option<&ZoneId> {
        self.zones.get(index)
    }

    pub fn index_of(&self, zone: &str) -> Option<usize> {
        self.zones.iter().position(|z| z.as_str() == zone)
    }

    pub fn require(&self, zone: &str) -> Result<usize, DomainError> {
        self.index_of(zone)
            .ok_or_else(|| DomainError::UnknownZone(zone.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &ZoneId> {
        self.zones.iter()
    }
}

/// Questionnaire receipt wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wave {
    Early,
    Late,
}

impl Wave {
    pub fn as_str(self) -> &'static str {
        match self {
            Wave::Early => "early",
            Wave::Late => "late",
        }
    }
}

impl std::str::FromStr for Wave {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "early" => Ok(Wave::Early),
            "late" => Ok(Wave::Late),
            other => Err(format!("expected `early` or `late`, got `{other}`")),
        }
    }
}

/// How per-zone export amounts are recorded in a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExportMeasure {
    /// Absolute amounts, normalized to shares on construction.
    Volume,
    /// Ratios in `[0, 1]` summing to one (within tolerance).
    Share,
}

impl ExportMeasure {
    pub fn column_prefix(self) -> &'static str {
        match self {
            ExportMeasure::Volume => "volume_",
            ExportMeasure::Share => "share_",
        }
    }
}

/// Rule identifiers for dataset findings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    NoExportZone,
    AmountWithoutEntry,
    NegativeAmount,
    NonFiniteAmount,
    ShareOutOfRange,
    ShareSum,
    ZeroTotalVolume,
    EntryAfterReference,
    EntryBeforeFounding,
    ZeroExportYears,
    ZeroAmountWithEntry,
    TiedEntry,
    DefaultReferenceYear,
}

impl Rule {
    pub fn severity(self) -> Severity {
        match self {
            Rule::ZeroAmountWithEntry | Rule::TiedEntry | Rule::DefaultReferenceYear => {
                Severity::Warning
            }
            _ => Severity::Error,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Rule::NoExportZone => "no-export-zone",
            Rule::AmountWithoutEntry => "amount-without-entry",
            Rule::NegativeAmount => "negative-amount",
            Rule::NonFiniteAmount => "non-finite-amount",
            Rule::ShareOutOfRange => "share-out-of-range",
            Rule::ShareSum => "share-sum",
            Rule::ZeroTotalVolume => "zero-total-volume",
            Rule::EntryAfterReference => "entry-after-reference",
            Rule::EntryBeforeFounding => "entry-before-founding",
            Rule::ZeroExportYears => "zero-export-years",
            Rule::ZeroAmountWithEntry => "zero-amount-with-entry",
            Rule::TiedEntry => "tied-entry",
            Rule::DefaultReferenceYear => "default-reference-year",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// One broken (or suspicious) record invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub rule: Rule,
    pub message: String,
}

impl Violation {
    pub fn severity(&self) -> Severity {
        self.rule.severity()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.message)
    }
}

/// One firm's per-zone entry years and export amounts.
///
/// Cells are aligned with the owning dataset's [`ZoneSet`]. `amounts` keeps
/// the values as recorded (volumes or shares); `depths` holds the shares the
/// engine consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct FirmExportRecord {
    firm_id: String,
    founding_year: Option<Year>,
    wave: Option<Wave>,
    entry_years: Vec<Option<Year>>,
    amounts: Vec<f64>,
    depths: Vec<f64>,
}

impl FirmExportRecord {
    /// Builds a record without checking invariants; see [`Self::violations`].
    pub fn new(
        firm_id: impl Into<String>,
        founding_year: Option<Year>,
        wave: Option<Wave>,
        entry_years: Vec<Option<Year>>,
        amounts: Vec<f64>,
        measure: ExportMeasure,
    ) -> Self {
        let depths = match measure {
            ExportMeasure::Share => amounts.clone(),
            ExportMeasure::Volume => {
                let total: f64 = amounts.iter().sum();
                if total > 0.0 {
                    amounts.iter().map(|v| v / total).collect()
                } else {
                    vec![0.0; amounts.len()]
                }
            }
        };
        Self {
            firm_id: firm_id.into(),
            founding_year,
            wave,
            entry_years,
            amounts,
            depths,
        }
    }

    pub fn firm_id(&self) -> &str {
        &self.firm_id
    }

    pub fn founding_year(&self) -> Option<Year> {
        self.founding_year
    }

    pub fn wave(&self) -> Option<Wave> {
        self.wave
    }

    pub fn entry_years(&self) -> &[Option<Year>] {
        &self.entry_years
    }

    pub fn entry_year(&self, zone: usize) -> Option<Year> {
        self.entry_years.get(zone).copied().flatten()
    }

    pub fn serves(&self, zone: usize) -> bool {
        self.entry_year(zone).is_some()
    }

    /// Recorded amount (volume or share) for a zone; 0 when not served.
    pub fn amounts(&self) -> &[f64] {
        &self.amounts
    }

    /// Export shares per zone.
    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    pub fn first_entry_year(&self) -> Option<Year> {
        self.entry_years.iter().flatten().copied().min()
    }

    pub fn served_zone_count(&self) -> usize {
        self.entry_years.iter().flatten().count()
    }

    pub fn with_wave(&self, wave: Option<Wave>) -> Self {
        Self {
            wave,
            ..self.clone()
        }
    }

    /// Checks every record invariant against a reference year.
    pub fn violations(
        &self,
        zones: &[ZoneId],
        measure: ExportMeasure,
        reference_year: Year,
        share_tolerance: f64,
    ) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |rule: Rule, message: String| out.push(Violation { rule, message });

        let Some(first) = self.first_entry_year() else {
            push(
                Rule::NoExportZone,
                "no zone has an entry year; only exporting firms are admitted".into(),
            );
            return out;
        };

        for (idx, (&entry, &amount)) in self.entry_years.iter().zip(&self.amounts).enumerate() {
            let zone = zones.get(idx).map_or("?", ZoneId::as_str);
            if !amount.is_finite() {
                push(
                    Rule::NonFiniteAmount,
                    format!("zone {zone}: amount {amount} is not finite"),
                );
                continue;
            }
            if amount < 0.0 {
                push(
                    Rule::NegativeAmount,
                    format!("zone {zone}: amount {amount} is negative"),
                );
            }
            if measure == ExportMeasure::Share && amount > 1.0 {
                push(
                    Rule::ShareOutOfRange,
                    format!("zone {zone}: share {amount} exceeds 1"),
                );
            }
            match entry {
                None if amount > 0.0 => push(
                    Rule::AmountWithoutEntry,
                    format!("zone {zone}: amount {amount} recorded without an entry year"),
                ),
                Some(year) => {
                    if year > reference_year {
                        push(
                            Rule::EntryAfterReference,
                            format!(
                                "zone {zone}: entry year {year} is after reference year {reference_year}"
                            ),
                        );
                    }
                    if let Some(founded) = self.founding_year {
                        if year < founded {
                            push(
                                Rule::EntryBeforeFounding,
                                format!(
                                    "zone {zone}: entry year {year} precedes founding year {founded}"
                                ),
                            );
                        }
                    }
                    if amount == 0.0 {
                        push(
                            Rule::ZeroAmountWithEntry,
                            format!("zone {zone}: entry year {year} but zero exports; depth is 0"),
                        );
                    }
                }
                None => {}
            }
        }

        if first == reference_year {
            push(
                Rule::ZeroExportYears,
                format!("first entry year equals reference year {reference_year}; total export years is 0"),
            );
        }

        let total: f64 = self.amounts.iter().sum();
        match measure {
            ExportMeasure::Volume => {
                if total.is_finite() && total <= 0.0 {
                    push(Rule::ZeroTotalVolume, "total export volume is zero".into());
                }
            }
            ExportMeasure::Share => {
                if total.is_finite() && (total - 1.0).abs() > share_tolerance {
                    push(
                        Rule::ShareSum,
                        format!("shares sum to {total}, outside 1 ± {share_tolerance}"),
                    );
                }
            }
        }
        out
    }
}

/// Years from a firm's first entry (any zone) to the reference year.
pub fn total_export_years(
    firm: &FirmExportRecord,
    reference_year: Year,
) -> Result<u32, DomainError> {
    let first = firm
        .first_entry_year()
        .ok_or_else(|| DomainError::NoEntryYears(firm.firm_id.clone()))?;
    if reference_year < first {
        return Err(DomainError::ReferenceBeforeEntry {
            firm: firm.firm_id.clone(),
            reference_year,
            first_entry: first,
        });
    }
    Ok((reference_year - first) as u32)
}

/// A validated collection of firm records over one zone set.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorDataset {
    zone_set: ZoneSet,
    measure: ExportMeasure,
    firms: Vec<FirmExportRecord>,
    reference_year: Year,
    share_tolerance: f64,
}

impl SectorDataset {
    /// Assembles a dataset, rejecting it if any record breaks an
    /// error-severity invariant. Warnings are tolerated.
    pub fn new(
        zone_set: ZoneSet,
        measure: ExportMeasure,
        firms: Vec<FirmExportRecord>,
        reference_year: Year,
        share_tolerance: f64,
    ) -> Result<Self, DomainError> {
        let mut seen = HashSet::new();
        for firm in &firms {
            if firm.entry_years.len() != zone_set.len() || firm.amounts.len() != zone_set.len() {
                return Err(DomainError::ZoneCountMismatch {
                    firm: firm.firm_id.clone(),
                    expected: zone_set.len(),
                    got: firm.entry_years.len().min(firm.amounts.len()),
                });
            }
            if !seen.insert(firm.firm_id.as_str()) {
                return Err(DomainError::DuplicateFirm(firm.firm_id.clone()));
            }
        }
        let dataset = Self {
            zone_set,
            measure,
            firms,
            reference_year,
            share_tolerance,
        };
        let errors: Vec<Violation> = dataset
            .violations()
            .into_iter()
            .filter(|(_, v)| v.severity() == Severity::Error)
            .map(|(firm, v)| Violation {
                rule: v.rule,
                message: format!("firm `{firm}`: {}", v.message),
            })
            .collect();
        if errors.is_empty() {
            Ok(dataset)
        } else {
            Err(DomainError::Invalid(errors))
        }
    }

    pub fn zone_set(&self) -> &ZoneSet {
        &self.zone_set
    }

    pub fn zones(&self) -> &[ZoneId] {
        self.zone_set.zones()
    }

    pub fn measure(&self) -> ExportMeasure {
        self.measure
    }

    pub fn firms(&self) -> &[FirmExportRecord] {
        &self.firms
    }

    pub fn reference_year(&self) -> Year {
        self.reference_year
    }

    pub fn share_tolerance(&self) -> f64 {
        self.share_tolerance
    }

    /// Re-checks every record, returning `(firm_id, violation)` pairs.
    pub fn violations(&self) -> Vec<(String, Violation)> {
        self.firms
            .iter()
            .flat_map(|f| {
                f.violations(self.zones(), self.measure, self.reference_year, self.share_tolerance)
                    .into_iter()
                    .map(move |v| (f.firm_id.clone(), v))
            })
            .collect()
    }

    /// Same dataset with the firms replaced (used for wave reassignment and
    /// reordering). Invariants are re-checked.
    pub fn with_firms(&self, firms: Vec<FirmExportRecord>) -> Result<Self, DomainError> {
        Self::new(
            self.zone_set.clone(),
            self.measure,
            firms,
            self.reference_year,
            self.share_tolerance,
        )
    }
}

/// One firm's width×depth contribution to an ordered zone pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadContribution {
    pub firm_id: String,
    pub zone_z: ZoneId,
    pub zone_i: ZoneId,
    pub width_z: f64,
    pub depth_z: f64,
    pub product: f64,
}

/// Per-zone row of a [`PriorityReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct ZonePriority {
    pub zone: ZoneId,
    pub ipi: f64,
    pub nipi: f64,
    pub nipi_pct: i64,
    /// 1 = highest priority.
    pub order: usize,
    /// Another zone shares this exact NIPI.
    pub tied: bool,
    /// Contribution of each dyad `(zone, other)`, in zone-set order.
    pub breakdown: Vec<(ZoneId, f64)>,
}

/// Per-zone IPI, NIPI and sectoral order, rows in zone-set order.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorityReport {
    pub reference_year: Year,
    pub zones: Vec<ZonePriority>,
    /// More than one zone reached the maximum IPI.
    pub max_tie: bool,
}

impl PriorityReport {
    pub fn zone(&self, zone: &str) -> Option<&ZonePriority> {
        self.zones.iter().find(|z| z.zone.as_str() == zone)
    }

    /// Zones sorted by rank.
    pub fn ranked(&self) -> Vec<&ZonePriority> {
        let mut rows: Vec<&ZonePriority> = self.zones.iter().collect();
        rows.sort_by_key(|z| z.order);
        rows
    }
}
