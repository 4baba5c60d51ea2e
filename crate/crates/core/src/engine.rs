//! Export width/depth, dyadic entry-order comparison, IPI, NIPI and the
//! sectoral order.
//!
//! For every ordered zone pair `(z, i)` the firms serving both zones that
//! entered `z` strictly before `i` are the dyad's winners. Each winner adds
//! `width_z * depth_z` to the pair, and the IPI of `z` is the sum over all
//! `i != z`. Firms that entered both zones in the same year count for
//! neither direction.

use std::cmp::Ordering;

use thiserror::Error;

use crate::domain::{
    total_export_years, DomainError, DyadContribution, FirmExportRecord, PriorityReport,
    SectorDataset, Year, ZoneId, ZonePriority,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("a dyad needs two distinct zones, got `{0}` twice")]
    SameZone(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("degenerate sector: every zone has IPI 0, normalization is undefined")]
    DegenerateSector,
    #[error("invalid NIPI table: {0}")]
    InvalidNipi(String),
}

/// Share of the firm's export years spent in `zone`; 0 if it does not serve it.
pub fn export_width(firm: &FirmExportRecord, zone: usize, reference_year: Year) -> f64 {
    let Some(entry) = firm.entry_year(zone) else {
        return 0.0;
    };
    match total_export_years(firm, reference_year) {
        Ok(total) if total > 0 => f64::from(reference_year - entry) / f64::from(total),
        _ => 0.0,
    }
}

/// Share of the firm's exports sent to `zone`; 0 if it does not serve it.
pub fn export_depth(firm: &FirmExportRecord, zone: usize) -> f64 {
    if firm.serves(zone) {
        firm.depths().get(zone).copied().unwrap_or(0.0)
    } else {
        0.0
    }
}

fn dyad_indices(dataset: &SectorDataset, z: &str, i: &str) -> Result<(usize, usize), EngineError> {
    let zs = dataset.zone_set();
    let zi = zs.require(z)?;
    let ii = zs.require(i)?;
    if zi == ii {
        return Err(EngineError::SameZone(z.to_string()));
    }
    Ok((zi, ii))
}

fn entered_first(firm: &FirmExportRecord, z: usize, i: usize) -> bool {
    matches!((firm.entry_year(z), firm.entry_year(i)), (Some(a), Some(b)) if a < b)
}

/// Firms that serve both zones and entered `z` strictly before `i`.
pub fn dyad_winners<'a>(
    dataset: &'a SectorDataset,
    z: &str,
    i: &str,
) -> Result<Vec<&'a str>, EngineError> {
    let (zi, ii) = dyad_indices(dataset, z, i)?;
    Ok(dataset
        .firms()
        .iter()
        .filter(|f| entered_first(f, zi, ii))
        .map(FirmExportRecord::firm_id)
        .collect())
}

/// Per-firm contributions to the ordered dyad `(z, i)`.
pub fn dyad_contributions(
    dataset: &SectorDataset,
    z: &str,
    i: &str,
) -> Result<Vec<DyadContribution>, EngineError> {
    let (zi, ii) = dyad_indices(dataset, z, i)?;
    let zone_z = dataset.zones()[zi].clone();
    let zone_i = dataset.zones()[ii].clone();
    Ok(dataset
        .firms()
        .iter()
        .filter(|f| entered_first(f, zi, ii))
        .map(|f| {
            let width_z = export_width(f, zi, dataset.reference_year());
            let depth_z = export_depth(f, zi);
            DyadContribution {
                firm_id: f.firm_id().to_string(),
                zone_z: zone_z.clone(),
                zone_i: zone_i.clone(),
                width_z,
                depth_z,
                product: width_z * depth_z,
            }
        })
        .collect())
}

/// IPI of one zone with its per-dyad breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneIpi {
    pub zone: ZoneId,
    pub total: f64,
    /// `(other_zone, contribution)` for every other zone, in zone-set order.
    pub breakdown: Vec<(ZoneId, f64)>,
}

impl ZoneIpi {
    pub fn dyad(&self, other: &str) -> Option<f64> {
        self.breakdown
            .iter()
            .find(|(z, _)| z.as_str() == other)
            .map(|(_, v)| *v)
    }
}

fn ipi_at(dataset: &SectorDataset, zi: usize) -> ZoneIpi {
    let n = dataset.zones().len();
    let reference_year = dataset.reference_year();
    let mut sums = vec![0.0_f64; n];
    for firm in dataset.firms() {
        let Some(entry_z) = firm.entry_year(zi) else {
            continue;
        };
        let weight = export_width(firm, zi, reference_year) * export_depth(firm, zi);
        for (ii, sum) in sums.iter_mut().enumerate() {
            if ii == zi {
                continue;
            }
            if let Some(entry_i) = firm.entry_year(ii) {
                if entry_z < entry_i {
                    *sum += weight;
                }
            }
        }
    }
    let breakdown: Vec<(ZoneId, f64)> = dataset
        .zones()
        .iter()
        .enumerate()
        .filter(|(ii, _)| *ii != zi)
        .map(|(ii, zone)| (zone.clone(), sums[ii]))
        .collect();
    let mut total = 0.0;
    for (_, v) in &breakdown {
        total += v;
    }
    ZoneIpi {
        zone: dataset.zones()[zi].clone(),
        total,
        breakdown,
    }
}

pub fn ipi(dataset: &SectorDataset, z: &str) -> Result<ZoneIpi, EngineError> {
    let zi = dataset.zone_set().require(z)?;
    Ok(ipi_at(dataset, zi))
}

/// IPI of every zone, in zone-set order.
pub fn ipi_all(dataset: &SectorDataset) -> Vec<ZoneIpi> {
    (0..dataset.zones().len())
        .map(|zi| ipi_at(dataset, zi))
        .collect()
}

/// Normalized priority per zone; the maximum is exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NipiTable {
    zones: Vec<ZoneId>,
    values: Vec<f64>,
}

impl NipiTable {
    /// Divides every IPI by the largest one.
    pub fn from_ipi(ipis: &[ZoneIpi]) -> Result<Self, EngineError> {
        let max = ipis.iter().map(|z| z.total).fold(0.0_f64, f64::max);
        if max <= 0.0 || !max.is_finite() {
            return Err(EngineError::DegenerateSector);
        }
        Ok(Self {
            zones: ipis.iter().map(|z| z.zone.clone()).collect(),
            values: ipis.iter().map(|z| z.total / max).collect(),
        })
    }

    /// Takes already-normalized values, e.g. a published table.
    pub fn from_values<S: Into<String>>(
        entries: impl IntoIterator<Item = (S, f64)>,
    ) -> Result<Self, EngineError> {
        let (names, values): (Vec<String>, Vec<f64>) =
            entries.into_iter().map(|(z, v)| (z.into(), v)).unzip();
        let zone_set = crate::domain::ZoneSet::new(names)?;
        if let Some(bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(EngineError::InvalidNipi(format!("value {bad} outside [0, 1]")));
        }
        let max = values.iter().copied().fold(0.0_f64, f64::max);
        if max != 1.0 {
            return Err(EngineError::InvalidNipi(format!(
                "maximum is {max}, expected 1"
            )));
        }
        Ok(Self {
            zones: zone_set.zones().to_vec(),
            values,
        })
    }

    pub fn zones(&self) -> &[ZoneId] {
        &self.zones
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, zone: &str) -> Option<f64> {
        self.zones
            .iter()
            .position(|z| z.as_str() == zone)
            .map(|i| self.values[i])
    }

    /// Rounded percentage, as printed in priority tables.
    pub fn pct(&self, zone: &str) -> Option<i64> {
        self.get(zone).map(nipi_pct)
    }

    /// Zones sitting at the maximum (more than one means a tie).
    pub fn at_max(&self) -> Vec<&ZoneId> {
        self.zones
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| **v == 1.0)
            .map(|(z, _)| z)
            .collect()
    }

    pub fn max_tie(&self) -> bool {
        self.at_max().len() > 1
    }
}

pub fn nipi_pct(nipi: f64) -> i64 {
    (nipi * 100.0).round() as i64
}

pub fn nipi(dataset: &SectorDataset) -> Result<NipiTable, EngineError> {
    NipiTable::from_ipi(&ipi_all(dataset))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedZone {
    pub zone: ZoneId,
    pub nipi: f64,
    /// 1-based.
    pub rank: usize,
    /// Shares its NIPI with another zone; rank decided by zone id.
    pub tied: bool,
}

/// Zones by descending NIPI; equal values fall back to zone id order.
pub fn sectoral_order(table: &NipiTable) -> Vec<RankedZone> {
    let mut idx: Vec<usize> = (0..table.zones.len()).collect();
    idx.sort_by(|&a, &b| {
        table.values[b]
            .total_cmp(&table.values[a])
            .then_with(|| table.zones[a].cmp(&table.zones[b]))
    });
    idx.iter()
        .enumerate()
        .map(|(pos, &i)| {
            let v = table.values[i];
            let tied = table
                .values
                .iter()
                .enumerate()
                .any(|(j, w)| j != i && w.total_cmp(&v) == Ordering::Equal);
            RankedZone {
                zone: table.zones[i].clone(),
                nipi: v,
                rank: pos + 1,
                tied,
            }
        })
        .collect()
}

/// Signed priority gap in percentage points: `(nipi[z1] - nipi[z2]) * 100`.
pub fn priority_delta(table: &NipiTable, z1: &str, z2: &str) -> Result<f64, EngineError> {
    let a = table
        .get(z1)
        .ok_or_else(|| DomainError::UnknownZone(z1.to_string()))?;
    let b = table
        .get(z2)
        .ok_or_else(|| DomainError::UnknownZone(z2.to_string()))?;
    Ok((a - b) * 100.0)
}

/// Full report: IPI with breakdown, NIPI, percentage and rank per zone.
pub fn priority_report(dataset: &SectorDataset) -> Result<PriorityReport, EngineError> {
    let ipis = ipi_all(dataset);
    let table = NipiTable::from_ipi(&ipis)?;
    let order = sectoral_order(&table);
    let zones = ipis
        .into_iter()
        .zip(table.values())
        .map(|(zi, &nipi)| {
            let ranked = order
                .iter()
                .find(|r| r.zone == zi.zone)
                .expect("every zone is ranked");
            ZonePriority {
                zone: zi.zone,
                ipi: zi.total,
                nipi,
                nipi_pct: nipi_pct(nipi),
                order: ranked.rank,
                tied: ranked.tied,
                breakdown: zi.breakdown,
            }
        })
        .collect();
    Ok(PriorityReport {
        reference_year: dataset.reference_year(),
        zones,
        max_tie: table.max_tie(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{ExportMeasure, ZoneSet};
    use crate::fixture;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected} ± {tol}, got {actual}"
        );
    }

    type Row<'a> = (&'a str, [Option<Year>; 2], [f64; 2]);

    fn two_zone(firms: Vec<Row<'_>>) -> SectorDataset {
        let records = firms
            .into_iter()
            .map(|(id, e, s)| {
                FirmExportRecord::new(id, None, None, e.to_vec(), s.to_vec(), ExportMeasure::Share)
            })
            .collect();
        SectorDataset::new(
            ZoneSet::new(["X", "Y"]).unwrap(),
            ExportMeasure::Share,
            records,
            2013,
            0.01,
        )
        .unwrap()
    }

    #[test]
    fn width_examples() {
        let ds = fixture::worked_example();
        let f1 = &ds.firms()[0];
        let f3 = &ds.firms()[2];
        assert_close(export_width(f1, 0, 2013), 23.0 / 28.0, 1e-15);
        assert_close(export_width(f1, 0, 2013), 0.82, 0.005);
        assert_eq!(export_width(f3, 3, 2013), 1.0);
        assert_eq!(export_width(f1, 3, 2013), 0.0);
    }

    #[test]
    fn depth_examples() {
        let ds = fixture::worked_example();
        assert_eq!(export_depth(&ds.firms()[1], 0), 0.20);
        assert_eq!(export_depth(&ds.firms()[0], 3), 0.0);
        let v = FirmExportRecord::new(
            "v",
            None,
            None,
            vec![Some(2000), Some(2001)],
            vec![300.0, 700.0],
            ExportMeasure::Volume,
        );
        assert_close(export_depth(&v, 1), 0.7, 1e-15);
        let single = FirmExportRecord::new(
            "s",
            None,
            None,
            vec![Some(2000), None],
            vec![42.0, 0.0],
            ExportMeasure::Volume,
        );
        assert_eq!(export_depth(&single, 0), 1.0);
    }

    #[test]
    fn winners() {
        let ds = fixture::worked_example();
        assert_eq!(dyad_winners(&ds, "A", "B").unwrap(), vec!["Firm 1", "Firm 3"]);
        assert!(dyad_winners(&ds, "C", "D").unwrap().is_empty());
        assert_eq!(
            dyad_winners(&ds, "A", "A"),
            Err(EngineError::SameZone("A".into()))
        );
        assert!(matches!(
            dyad_winners(&ds, "A", "Q"),
            Err(EngineError::Domain(DomainError::UnknownZone(_)))
        ));

        let tied = two_zone(vec![
            ("a", [Some(2000), Some(2000)], [0.5, 0.5]),
            ("b", [Some(2001), Some(2001)], [0.5, 0.5]),
        ]);
        assert!(dyad_winners(&tied, "X", "Y").unwrap().is_empty());
        assert!(dyad_winners(&tied, "Y", "X").unwrap().is_empty());
    }

    #[test]
    fn ipi_zone_a_and_c() {
        let ds = fixture::worked_example();
        let a = ipi(&ds, "A").unwrap();
        assert_close(a.dyad("B").unwrap(), 0.328, 0.0005);
        assert_close(a.dyad("C").unwrap(), 0.082, 0.0005);
        assert_close(a.dyad("D").unwrap(), 0.150, 0.0005);
        assert_close(a.total, 0.560, 0.0005);

        let c = ipi(&ds, "C").unwrap();
        assert_close(c.dyad("A").unwrap(), 0.70, 1e-12);
        // 0.5 + 0.2 * 20/33 + 0.2; printed as 0.82
        assert_close(c.dyad("B").unwrap(), 0.8212, 0.0005);
        assert_close(c.dyad("B").unwrap(), 0.82, 0.005);
        assert_eq!(c.dyad("D").unwrap(), 0.0);
        assert_close(c.total, 1.52, 0.005);
    }

    #[test]
    fn contributions_multiply_width_and_depth() {
        let ds = fixture::worked_example();
        let parts = dyad_contributions(&ds, "A", "B").unwrap();
        assert_eq!(parts.len(), 2);
        for p in &parts {
            assert_eq!(p.product, p.width_z * p.depth_z);
        }
        let sum: f64 = parts.iter().map(|p| p.product).sum();
        assert_close(sum, ipi(&ds, "A").unwrap().dyad("B").unwrap(), 1e-15);
    }

    #[test]
    fn single_zone_firm_gives_degenerate_sector() {
        let ds = two_zone(vec![("a", [Some(2000), None], [1.0, 0.0])]);
        assert!(ipi_all(&ds).iter().all(|z| z.total == 0.0));
        assert_eq!(nipi(&ds), Err(EngineError::DegenerateSector));
        assert_eq!(priority_report(&ds), Err(EngineError::DegenerateSector));
    }

    #[test]
    fn nipi_worked_example() {
        let table = nipi(&fixture::worked_example()).unwrap();
        for (zone, printed) in [("A", 0.37), ("B", 0.63), ("C", 1.00), ("D", 0.59)] {
            assert_close(table.get(zone).unwrap(), printed, 0.005);
        }
        assert_eq!(table.get("C"), Some(1.0));
        assert!(!table.max_tie());
    }

    #[test]
    fn nipi_tie_at_max() {
        let ds = two_zone(vec![
            ("a", [Some(2000), Some(2005)], [0.5, 0.5]),
            ("b", [Some(2005), Some(2000)], [0.5, 0.5]),
        ]);
        let table = nipi(&ds).unwrap();
        assert_eq!(table.values(), &[1.0, 1.0]);
        assert!(table.max_tie());
        let order = sectoral_order(&table);
        assert!(order.iter().all(|r| r.tied));
        assert_eq!(order[0].zone.as_str(), "X");
    }

    #[test]
    fn order_worked_example() {
        let table = nipi(&fixture::worked_example()).unwrap();
        let order: Vec<(String, usize)> = sectoral_order(&table)
            .into_iter()
            .map(|r| (r.zone.to_string(), r.rank))
            .collect();
        assert_eq!(
            order,
            vec![
                ("C".into(), 1),
                ("B".into(), 2),
                ("D".into(), 3),
                ("A".into(), 4)
            ]
        );
    }

    #[test]
    fn order_all_equal_is_lexicographic() {
        let table = NipiTable::from_values([("b", 1.0), ("c", 1.0), ("a", 1.0)]).unwrap();
        let order = sectoral_order(&table);
        let names: Vec<&str> = order.iter().map(|r| r.zone.as_str()).collect();
        assert_eq!(names, ["a", "b", "c"]);
        assert!(order.iter().all(|r| r.tied));
    }

    #[test]
    fn from_values_rejects_bad_tables() {
        assert!(NipiTable::from_values([("a", 0.5), ("b", 0.4)]).is_err());
        assert!(NipiTable::from_values([("a", 1.0), ("b", 1.4)]).is_err());
        assert!(NipiTable::from_values([("a", 1.0)]).is_err());
    }

    #[test]
    fn delta_examples() {
        let table = NipiTable::from_values(fixture::wine_sector_nipi()).unwrap();
        assert_close(priority_delta(&table, "EU", "USA and Canada").unwrap(), 69.0, 1e-9);
        assert_close(
            priority_delta(&table, "USA and Canada", "Rest of Europe").unwrap(),
            23.0,
            1e-9,
        );
        assert_eq!(priority_delta(&table, "Asia", "Asia").unwrap(), 0.0);
        assert!(priority_delta(&table, "EU", "Mars").is_err());
    }

    #[test]
    fn report_shape() {
        let report = priority_report(&fixture::worked_example()).unwrap();
        assert_eq!(report.reference_year, 2013);
        let c = report.zone("C").unwrap();
        assert_eq!((c.nipi_pct, c.order), (100, 1));
        let pcts: Vec<i64> = report.zones.iter().map(|z| z.nipi_pct).collect();
        assert_eq!(pcts, vec![37, 63, 100, 59]);
        for z in &report.zones {
            let sum: f64 = z.breakdown.iter().map(|(_, v)| v).fold(0.0, |a, b| a + b);
            assert_eq!(sum, z.ipi);
        }
    }
}
