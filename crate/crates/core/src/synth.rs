//! Seeded synthetic sectors and a brute-force IPI oracle.
//!
//! Generation uses ChaCha8 (`rand_chacha`) seeded from a `u64`, which
//! produces the same stream on every platform. Zones are named `Z1..Zn`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::domain::{
    DomainError, ExportMeasure, FirmExportRecord, SectorDataset, Wave, Year, ZoneId, ZoneSet,
    DEFAULT_SHARE_TOLERANCE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("invalid synth config: {0}")]
    Config(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthMode {
    /// Firms enter zones following a planted order.
    Gradualist,
    /// Orders and depths drawn independently per firm.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_firms: usize,
    pub zone_count: usize,
    pub mode: SynthMode,
    /// Zone indices, most prioritized first. `None` draws one from the seed.
    pub planted_order: Option<Vec<usize>>,
    /// Inclusive range of years between consecutive entries; minimum >= 1.
    pub entry_gap: (u32, u32),
    /// Ratio of consecutive depth weights along a firm's entry sequence,
    /// in `(0, 1]`. Smaller is more concentrated on the first zone.
    pub depth_concentration: f64,
    /// Chance that a gap collapses to 0 (same-year entry).
    pub tie_probability: f64,
    /// Chance of swapping each adjacent pair of a firm's planted sequence.
    pub order_noise: f64,
    /// Every firm serves every zone instead of a random prefix.
    pub serve_all: bool,
    pub measure: ExportMeasure,
    pub reference_year: Year,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_firms: 100,
            zone_count: 4,
            mode: SynthMode::Gradualist,
            planted_order: None,
            entry_gap: (1, 5),
            depth_concentration: 0.6,
            tie_probability: 0.0,
            order_noise: 0.0,
            serve_all: false,
            measure: ExportMeasure::Share,
            reference_year: 2013,
            seed: 0,
        }
    }
}

impl SynthConfig {
    fn check(&self) -> Result<(), SynthError> {
        let fail = |m: String| Err(SynthError::Config(m));
        if self.n_firms < 1 {
            return fail("n_firms must be >= 1".into());
        }
        if self.zone_count < 2 {
            return fail("zone_count must be >= 2".into());
        }
        if !(0.0..=1.0).contains(&self.tie_probability) {
            return fail(format!("tie_probability {} outside [0, 1]", self.tie_probability));
        }
        if !(0.0..=1.0).contains(&self.order_noise) {
            return fail(format!("order_noise {} outside [0, 1]", self.order_noise));
        }
        if !(self.depth_concentration > 0.0 && self.depth_concentration <= 1.0) {
            return fail(format!(
                "depth_concentration {} outside (0, 1]",
                self.depth_concentration
            ));
        }
        let (lo, hi) = self.entry_gap;
        if lo < 1 || hi < lo {
            return fail(format!("entry_gap ({lo}, {hi}) must satisfy 1 <= min <= max"));
        }
        if let Some(order) = &self.planted_order {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != (0..self.zone_count).collect::<Vec<_>>() {
                return fail(format!(
                    "planted_order {order:?} is not a permutation of 0..{}",
                    self.zone_count
                ));
            }
        }
        Ok(())
    }
}

pub fn zone_names(count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("Z{i}")).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSector {
    pub dataset: SectorDataset,
    /// Planted priority order (gradualist mode; informational in random mode).
    pub planted_order: Vec<ZoneId>,
}

/// Non-decreasing entry years; the first one sits 1..=10 years before the reference.
fn entry_years<R: Rng>(rng: &mut R, cfg: &SynthConfig, len: usize) -> Vec<Year> {
    let gaps: Vec<Year> = (1..len)
        .map(|_| {
            if rng.random::<f64>() < cfg.tie_probability {
                0
            } else {
                rng.random_range(cfg.entry_gap.0..=cfg.entry_gap.1) as Year
            }
        })
        .collect();
    let span: Year = gaps.iter().sum();
    let lead: Year = rng.random_range(1..=10);
    let mut year = cfg.reference_year - lead - span;
    let mut out = Vec::with_capacity(len);
    out.push(year);
    for g in gaps {
        year += g;
        out.push(year);
    }
    out
}

/// Builds a dataset from the config; identical seeds give identical output.
pub fn generate_sector(cfg: &SynthConfig) -> Result<SyntheticSector, SynthError> {
    cfg.check()?;
    let n = cfg.zone_count;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let planted: Vec<usize> = match &cfg.planted_order {
        Some(order) => order.clone(),
        None => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            order
        }
    };

    let mut firms = Vec::with_capacity(cfg.n_firms);
    for f in 0..cfg.n_firms {
        let served = if cfg.serve_all {
            n
        } else {
            rng.random_range(1..=n)
        };
        let (sequence, weights): (Vec<usize>, Vec<f64>) = match cfg.mode {
            SynthMode::Gradualist => {
                let mut seq = planted.clone();
                for j in 0..n - 1 {
                    if rng.random::<f64>() < cfg.order_noise {
                        seq.swap(j, j + 1);
                    }
                }
                seq.truncate(served);
                let weights = (0..served)
                    .map(|k| cfg.depth_concentration.powi(k as i32))
                    .collect();
                (seq, weights)
            }
            SynthMode::Random => {
                let mut seq: Vec<usize> = (0..n).collect();
                seq.shuffle(&mut rng);
                seq.truncate(served);
                let weights = (0..served).map(|_| rng.random_range(0.05..1.0)).collect();
                (seq, weights)
            }
        };
        let years = entry_years(&mut rng, cfg, served);
        let weight_sum: f64 = weights.iter().sum();
        let scale = match cfg.measure {
            ExportMeasure::Share => 1.0 / weight_sum,
            ExportMeasure::Volume => rng.random_range(100.0..10_000.0) / weight_sum,
        };

        let mut entries = vec![None; n];
        let mut amounts = vec![0.0; n];
        for ((&zone, &year), &weight) in sequence.iter().zip(&years).zip(&weights) {
            entries[zone] = Some(year);
            amounts[zone] = weight * scale;
        }
        let founding = years[0] - rng.random_range(0..=20);
        let wave = if rng.random::<bool>() {
            Wave::Early
        } else {
            Wave::Late
        };
        firms.push(FirmExportRecord::new(
            format!("F{:04}", f + 1),
            Some(founding),
            Some(wave),
            entries,
            amounts,
            cfg.measure,
        ));
    }

    let zone_set = ZoneSet::new(zone_names(n))?;
    let planted_order = planted
        .iter()
        .map(|&i| zone_set.zones()[i].clone())
        .collect();
    let dataset = SectorDataset::new(
        zone_set,
        cfg.measure,
        firms,
        cfg.reference_year,
        DEFAULT_SHARE_TOLERANCE,
    )?;
    Ok(SyntheticSector {
        dataset,
        planted_order,
    })
}

/// Spearman correlation between two orderings of the same zones.
pub fn order_agreement(a: &[ZoneId], b: &[ZoneId]) -> f64 {
    assert_eq!(a.len(), b.len(), "orders must cover the same zones");
    let n = a.len() as f64;
    if a.len() < 2 {
        return 1.0;
    }
    let d2: f64 = a
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let j = b
                .iter()
                .position(|w| w == z)
                .expect("orders must cover the same zones");
            (i as f64 - j as f64).powi(2)
        })
        .sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("unknown zone `{0}`")]
    UnknownZone(String),
    #[error("degenerate sector: all IPI are 0")]
    Degenerate,
}

/// IPI of `zone` by direct enumeration: every other zone, every firm,
/// width and depth recomputed from the recorded years and amounts.
pub fn oracle_ipi(dataset: &SectorDataset, zone: &str) -> Result<f64, OracleError> {
    let zones = dataset.zones();
    let mut z = usize::MAX;
    for (k, id) in zones.iter().enumerate() {
        if id.as_str() == zone {
            z = k;
        }
    }
    if z == usize::MAX {
        return Err(OracleError::UnknownZone(zone.to_string()));
    }
    let reference = dataset.reference_year();
    let mut total = 0.0;
    for i in 0..zones.len() {
        if i == z {
            continue;
        }
        let mut dyad = 0.0;
        for firm in dataset.firms() {
            let years = firm.entry_years();
            let (Some(ez), Some(ei)) = (years[z], years[i]) else {
                continue;
            };
            if ez >= ei {
                continue;
            }
            let mut first = Year::MAX;
            for y in years.iter().flatten() {
                if *y < first {
                    first = *y;
                }
            }
            let width = f64::from(reference - ez) / f64::from((reference - first) as u32);
            let amounts = firm.amounts();
            let depth = match dataset.measure() {
                ExportMeasure::Share => amounts[z],
                ExportMeasure::Volume => {
                    let mut sum = 0.0;
                    for a in amounts {
                        sum += a;
                    }
                    amounts[z] / sum
                }
            };
            dyad += width * depth;
        }
        total += dyad;
    }
    Ok(total)
}

/// NIPI of every zone (zone order) via [`oracle_ipi`].
pub fn oracle_nipi(dataset: &SectorDataset) -> Result<Vec<f64>, OracleError> {
    let mut ipis = Vec::new();
    for id in dataset.zones() {
        ipis.push(oracle_ipi(dataset, id.as_str())?);
    }
    let mut max = 0.0;
    for v in &ipis {
        if *v > max {
            max = *v;
        }
    }
    if max <= 0.0 {
        return Err(OracleError::Degenerate);
    }
    Ok(ipis.iter().map(|v| v / max).collect())
}
