//! Sectoral International Priority Index (IPI) toolkit.
//!
//! Firms are compared pairwise on the order in which they entered export
//! zones; each firm that reached zone `z` before zone `i` contributes its
//! export width times export depth in `z`. Summing over dyads gives the IPI
//! of `z`, and dividing by the sector maximum gives the NIPI.
//!
//! ```
//! use ipi_core::{engine, fixture};
//!
//! let dataset = fixture::worked_example();
//! let report = engine::priority_report(&dataset).unwrap();
//! assert_eq!(report.zone("C").unwrap().order, 1);
//! ```

pub mod domain;
pub mod engine;
pub mod fixture;
pub mod ingest;
pub mod stats;
pub mod synth;

pub use domain::{
    total_export_years, DomainError, DyadContribution, ExportMeasure, FirmExportRecord,
    PriorityReport, SectorDataset, Wave, Year, ZoneId, ZonePriority, ZoneSet,
    DEFAULT_SHARE_TOLERANCE,
};
pub use engine::{EngineError, NipiTable};
