//! Embedded reference data: the four-firm, four-zone worked example and the
//! published wine-sector NIPI values.

use crate::domain::{ExportMeasure, FirmExportRecord, SectorDataset, Year, ZoneSet};

pub const WORKED_EXAMPLE_REFERENCE_YEAR: Year = 2013;

/// The worked example in ingest CSV form.
pub const WORKED_EXAMPLE_CSV: &str = "\
# reference_year: 2013
firm_id,entry_year_A,entry_year_B,entry_year_C,entry_year_D,share_A,share_B,share_C,share_D
Firm 1,1990,2000,1985,-,0.3,0.2,0.5,-
Firm 2,2001,1997,-,2005,0.2,0.4,-,0.4
Firm 3,1986,2001,1993,1980,0.1,0.4,0.2,0.3
Firm 4,2005,2003,1994,-,0.5,0.3,0.2,-
";

type Row = (&'static str, [Option<Year>; 4], [f64; 4]);

const WORKED_EXAMPLE_ROWS: [Row; 4] = [
    (
        "Firm 1",
        [Some(1990), Some(2000), Some(1985), None],
        [0.3, 0.2, 0.5, 0.0],
    ),
    (
        "Firm 2",
        [Some(2001), Some(1997), None, Some(2005)],
        [0.2, 0.4, 0.0, 0.4],
    ),
    (
        "Firm 3",
        [Some(1986), Some(2001), Some(1993), Some(1980)],
        [0.1, 0.4, 0.2, 0.3],
    ),
    (
        "Firm 4",
        [Some(2005), Some(2003), Some(1994), None],
        [0.5, 0.3, 0.2, 0.0],
    ),
];

/// Four firms entering zones A–D, shares as recorded, reference year 2013.
pub fn worked_example() -> SectorDataset {
    let firms = WORKED_EXAMPLE_ROWS
        .iter()
        .map(|(id, entries, shares)| {
            FirmExportRecord::new(
                *id,
                None,
                None,
                entries.to_vec(),
                shares.to_vec(),
                ExportMeasure::Share,
            )
        })
        .collect();
    SectorDataset::new(
        ZoneSet::new(["A", "B", "C", "D"]).expect("static zones"),
        ExportMeasure::Share,
        firms,
        WORKED_EXAMPLE_REFERENCE_YEAR,
        crate::DEFAULT_SHARE_TOLERANCE,
    )
    .expect("worked example is valid")
}

/// Eight export zones of the wine-sector study, in table order.
pub const WINE_SECTOR_ZONES: [&str; 8] = [
    "EU",
    "Rest of Europe",
    "USA and Canada",
    "Mercosur",
    "Rest of LA",
    "Asia",
    "Australia",
    "Others",
];

/// Published two-decimal NIPI values of the wine sector.
pub fn wine_sector_nipi() -> Vec<(&'static str, f64)> {
    WINE_SECTOR_ZONES
        .iter()
        .copied()
        .zip([1.00, 0.08, 0.31, 0.01, 0.04, 0.06, 0.00, 0.07])
        .collect()
}

/// Published rank per zone for [`wine_sector_nipi`].
pub const WINE_SECTOR_ORDER: [(&str, usize); 8] = [
    ("EU", 1),
    ("Rest of Europe", 3),
    ("USA and Canada", 2),
    ("Mercosur", 7),
    ("Rest of LA", 6),
    ("Asia", 5),
    ("Australia", 8),
    ("Others", 4),
];
