//! Per-zone descriptives and the early-vs-late respondent ANOVA used as a
//! non-response bias check.

use thiserror::Error;

use crate::domain::{DomainError, FirmExportRecord, SectorDataset, Wave, Year, ZoneId, ZoneSet};
use crate::engine::{export_depth, export_width};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("ANOVA needs at least 2 groups, got {0}")]
    TooFewGroups(usize),
    #[error("group {0} is empty")]
    EmptyGroup(usize),
    #[error("no within-group degrees of freedom ({observations} observations in {groups} groups)")]
    NoWithinDf { observations: usize, groups: usize },
    #[error("non-finite observation {0}")]
    NonFinite(f64),
    #[error("the {} wave has no usable observations", .0.as_str())]
    EmptyWave(Wave),
    #[error("no survey item could be tested")]
    NoTestableItems,
    #[error(transparent)]
    Domain(#[from] DomainError),
}

// ---------------------------------------------------------------------------
// special functions

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 10_000;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`, by modified Lentz continued
/// fraction on whichever side of the mean converges fastest.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "shape parameters must be positive");
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front =
        ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

/// Upper tail `P(X > f)` of the F distribution with `(d1, d2)` degrees of freedom.
pub fn f_upper_tail(f: f64, d1: f64, d2: f64) -> f64 {
    if f.is_nan() {
        return f64::NAN;
    }
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f)).clamp(0.0, 1.0)
}

// ---------------------------------------------------------------------------
// one-way ANOVA

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnovaResult {
    pub f_statistic: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub p_value: f64,
}

/// Sums of squares below this fraction of the total are treated as zero.
const RELATIVE_ZERO: f64 = 1e-14;

pub fn one_way_anova(groups: &[&[f64]]) -> Result<AnovaResult, StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::TooFewGroups(groups.len()));
    }
    if let Some(i) = groups.iter().position(|g| g.is_empty()) {
        return Err(StatsError::EmptyGroup(i));
    }
    if let Some(x) = groups.iter().flat_map(|g| g.iter()).find(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite(*x));
    }
    let k = groups.len();
    let n: usize = groups.iter().map(|g| g.len()).sum();
    if n <= k {
        return Err(StatsError::NoWithinDf {
            observations: n,
            groups: k,
        });
    }
    let grand = groups.iter().flat_map(|g| g.iter()).sum::<f64>() / n as f64;
    let means: Vec<f64> = groups
        .iter()
        .map(|g| g.iter().sum::<f64>() / g.len() as f64)
        .collect();
    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    let mut ss_total = 0.0;
    for (g, mean) in groups.iter().zip(&means) {
        ss_between += g.len() as f64 * (mean - grand).powi(2);
        for x in *g {
            ss_within += (x - mean).powi(2);
            ss_total += (x - grand).powi(2);
        }
    }
    // exact structure first, so rounding in the means cannot fake a signal
    let equal_means = means.iter().all(|m| *m == means[0]);
    let constant_groups = groups.iter().all(|g| g.iter().all(|x| *x == g[0]));
    if equal_means || ss_between <= RELATIVE_ZERO * ss_total {
        ss_between = 0.0;
    }
    if constant_groups || ss_within <= RELATIVE_ZERO * ss_total {
        ss_within = 0.0;
    }
    let df_between = k - 1;
    let df_within = n - k;
    let (f_statistic, p_value) = match (ss_between == 0.0, ss_within == 0.0) {
        (true, _) => (0.0, 1.0),
        (false, true) => (f64::INFINITY, 0.0),
        (false, false) => {
            let f = (ss_between / df_between as f64) / (ss_within / df_within as f64);
            (f, f_upper_tail(f, df_between as f64, df_within as f64))
        }
    };
    Ok(AnovaResult {
        f_statistic,
        df_between,
        df_within,
        p_value,
    })
}

/// Early-vs-late ANOVA on one numeric item. Firms without a wave, or for
/// which the extractor yields `None`, are skipped.
pub fn nonresponse_anova<F>(dataset: &SectorDataset, item: F) -> Result<AnovaResult, StatsError>
where
    F: Fn(&FirmExportRecord) -> Option<f64>,
{
    let mut early = Vec::new();
    let mut late = Vec::new();
    for firm in dataset.firms() {
        let (Some(wave), Some(value)) = (firm.wave(), item(firm)) else {
            continue;
        };
        match wave {
            Wave::Early => early.push(value),
            Wave::Late => late.push(value),
        }
    }
    if early.is_empty() {
        return Err(StatsError::EmptyWave(Wave::Early));
    }
    if late.is_empty() {
        return Err(StatsError::EmptyWave(Wave::Late));
    }
    one_way_anova(&[&early, &late])
}

/// Reassigns waves by row position: first half early, rest late.
pub fn median_split(dataset: &SectorDataset) -> Result<SectorDataset, StatsError> {
    let n = dataset.firms().len();
    let cut = n.div_ceil(2);
    let firms = dataset
        .firms()
        .iter()
        .enumerate()
        .map(|(i, f)| f.with_wave(Some(if i < cut { Wave::Early } else { Wave::Late })))
        .collect();
    Ok(dataset.with_firms(firms)?)
}

/// Questionnaire variables the bias check runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurveyItem {
    /// Years since founding.
    Age,
    TotalExportYears,
    EntryYear(usize),
    /// Share of exports; 0 for zones not served.
    Depth(usize),
}

impl SurveyItem {
    pub fn name(self, zones: &ZoneSet) -> String {
        let zone = |i: usize| zones.get(i).map_or("?", ZoneId::as_str).to_string();
        match self {
            SurveyItem::Age => "age".into(),
            SurveyItem::TotalExportYears => "total_export_years".into(),
            SurveyItem::EntryYear(z) => format!("entry_year_{}", zone(z)),
            SurveyItem::Depth(z) => format!("depth_{}", zone(z)),
        }
    }

    pub fn extract(self, firm: &FirmExportRecord, reference_year: Year) -> Option<f64> {
        match self {
            SurveyItem::Age => firm
                .founding_year()
                .map(|y| f64::from(reference_year - y)),
            SurveyItem::TotalExportYears => firm
                .first_entry_year()
                .map(|y| f64::from(reference_year - y)),
            SurveyItem::EntryYear(z) => firm.entry_year(z).map(f64::from),
            SurveyItem::Depth(z) => Some(export_depth(firm, z)),
        }
    }
}

/// Age, total export years, then entry year and depth per zone.
pub fn survey_items(zones: &ZoneSet) -> Vec<SurveyItem> {
    let mut items = vec![SurveyItem::Age, SurveyItem::TotalExportYears];
    items.extend((0..zones.len()).map(SurveyItem::EntryYear));
    items.extend((0..zones.len()).map(SurveyItem::Depth));
    items
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItemCheck {
    pub item: String,
    pub result: Result<AnovaResult, StatsError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiasCheck {
    pub items: Vec<ItemCheck>,
    pub alpha: f64,
    /// Smallest p over tested items.
    pub min_p: f64,
    pub min_p_item: String,
    pub tested: usize,
    /// `alpha / tested`, for reading `min_p` under multiple testing.
    pub bonferroni_alpha: f64,
}

impl BiasCheck {
    /// No item differs significantly between waves.
    pub fn passed(&self) -> bool {
        self.min_p > self.alpha
    }
}

/// Runs the early-vs-late ANOVA for every survey item.
pub fn bias_check(dataset: &SectorDataset, alpha: f64) -> Result<BiasCheck, StatsError> {
    for wave in [Wave::Early, Wave::Late] {
        if !dataset.firms().iter().any(|f| f.wave() == Some(wave)) {
            return Err(StatsError::EmptyWave(wave));
        }
    }
    let reference_year = dataset.reference_year();
    let items: Vec<ItemCheck> = survey_items(dataset.zone_set())
        .into_iter()
        .map(|item| ItemCheck {
            item: item.name(dataset.zone_set()),
            result: nonresponse_anova(dataset, |f| item.extract(f, reference_year)),
        })
        .collect();
    let tested: Vec<(&str, f64)> = items
        .iter()
        .filter_map(|c| c.result.as_ref().ok().map(|r| (c.item.as_str(), r.p_value)))
        .collect();
    let Some((min_item, min_p)) = tested
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
    else {
        return Err(StatsError::NoTestableItems);
    };
    Ok(BiasCheck {
        min_p_item: min_item.to_string(),
        min_p,
        alpha,
        tested: tested.len(),
        bonferroni_alpha: alpha / tested.len() as f64,
        items,
    })
}

// ---------------------------------------------------------------------------
// descriptives

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SdKind {
    #[default]
    Sample,
    Population,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
}

impl Summary {
    pub fn of(values: &[f64], kind: SdKind) -> Self {
        let n = values.len();
        if n == 0 {
            return Self {
                n,
                mean: None,
                sd: None,
            };
        }
        let constant = values.iter().all(|v| *v == values[0]);
        let mean = if constant {
            values[0]
        } else {
            values.iter().sum::<f64>() / n as f64
        };
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        let sd = match kind {
            SdKind::Sample if n < 2 => None,
            SdKind::Sample => Some((ss / (n - 1) as f64).sqrt()),
            SdKind::Population => Some((ss / n as f64).sqrt()),
        };
        Self {
            n,
            mean: Some(mean),
            sd,
        }
    }
}

/// Statistics over the firms serving one zone.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneStats {
    pub zone: ZoneId,
    pub firms: usize,
    pub width: Summary,
    pub depth: Summary,
    /// Years since first export to the zone.
    pub export_experience: Summary,
    /// Years since founding; firms without a founding year are skipped.
    pub age: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZoneDescriptives {
    pub sd_kind: SdKind,
    pub zones: Vec<ZoneStats>,
}

impl ZoneDescriptives {
    pub fn zone(&self, zone: &str) -> Option<&ZoneStats> {
        self.zones.iter().find(|z| z.zone.as_str() == zone)
    }
}

pub fn zone_descriptives(dataset: &SectorDataset, sd_kind: SdKind) -> ZoneDescriptives {
    let reference_year = dataset.reference_year();
    let zones = dataset
        .zones()
        .iter()
        .enumerate()
        .map(|(z, id)| {
            let serving: Vec<&FirmExportRecord> =
                dataset.firms().iter().filter(|f| f.serves(z)).collect();
            let collect = |g: &dyn Fn(&FirmExportRecord) -> Option<f64>| -> Summary {
                let values: Vec<f64> = serving.iter().filter_map(|f| g(f)).collect();
                Summary::of(&values, sd_kind)
            };
            ZoneStats {
                zone: id.clone(),
                firms: serving.len(),
                width: collect(&|f| Some(export_width(f, z, reference_year))),
                depth: collect(&|f| Some(export_depth(f, z))),
                export_experience: collect(&|f| {
                    f.entry_year(z).map(|y| f64::from(reference_year - y))
                }),
                age: collect(&|f| f.founding_year().map(|y| f64::from(reference_year - y))),
            }
        })
        .collect();
    ZoneDescriptives { sd_kind, zones }
}
