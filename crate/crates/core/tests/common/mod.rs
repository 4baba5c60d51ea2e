//! Helpers shared by the property and acceptance suites: dataset
//! strategies, invariant checks and the definitional ANOVA oracle.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use ipi_core::engine::{self, NipiTable};
use ipi_core::ingest::{parse_dataset, validate, ValidateOptions};
use ipi_core::synth::{generate_sector, SynthConfig, SynthMode};
use ipi_core::{ExportMeasure, FirmExportRecord, SectorDataset, ZoneSet};

pub fn config_strategy(measure: Option<ExportMeasure>) -> impl Strategy<Value = SynthConfig> {
    (
        any::<u64>(),
        1usize..40,
        2usize..=8,
        prop_oneof![Just(SynthMode::Gradualist), Just(SynthMode::Random)],
        0.0f64..0.5,
        0.0f64..1.0,
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(
            move |(seed, n_firms, zone_count, mode, tie, noise, volume, serve_all)| SynthConfig {
                n_firms,
                zone_count,
                mode,
                tie_probability: tie,
                order_noise: noise,
                serve_all,
                measure: measure.unwrap_or(if volume {
                    ExportMeasure::Volume
                } else {
                    ExportMeasure::Share
                }),
                seed,
                ..SynthConfig::default()
            },
        )
}

pub fn sector_strategy(measure: Option<ExportMeasure>) -> impl Strategy<Value = SectorDataset> {
    config_strategy(measure).prop_map(|cfg| generate_sector(&cfg).expect("valid config").dataset)
}

fn rebuild(ds: &SectorDataset, zones: ZoneSet, firms: Vec<FirmExportRecord>) -> SectorDataset {
    SectorDataset::new(
        zones,
        ds.measure(),
        firms,
        ds.reference_year(),
        ds.share_tolerance(),
    )
    .expect("rebuilt dataset stays valid")
}

fn approx(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

pub fn check_antisymmetry(ds: &SectorDataset) -> Result<(), TestCaseError> {
    for z in ds.zones() {
        for i in ds.zones() {
            if z == i {
                continue;
            }
            let forward = engine::dyad_winners(ds, z.as_str(), i.as_str()).unwrap();
            let backward = engine::dyad_winners(ds, i.as_str(), z.as_str()).unwrap();
            prop_assert!(
                forward.iter().all(|f| !backward.contains(f)),
                "dyad ({z},{i}) shares winners with ({i},{z})"
            );
        }
    }
    Ok(())
}

pub fn check_scale_invariance(
    ds: &SectorDataset,
    firm: usize,
    factor: f64,
) -> Result<(), TestCaseError> {
    prop_assume!(ds.measure() == ExportMeasure::Volume);
    let firm = firm % ds.firms().len();
    let firms: Vec<FirmExportRecord> = ds
        .firms()
        .iter()
        .enumerate()
        .map(|(k, f)| {
            if k != firm {
                return f.clone();
            }
            FirmExportRecord::new(
                f.firm_id(),
                f.founding_year(),
                f.wave(),
                f.entry_years().to_vec(),
                f.amounts().iter().map(|a| a * factor).collect(),
                ExportMeasure::Volume,
            )
        })
        .collect();
    let scaled = rebuild(ds, ds.zone_set().clone(), firms);
    for (a, b) in ds.firms()[firm]
        .depths()
        .iter()
        .zip(scaled.firms()[firm].depths())
    {
        prop_assert!(approx(*a, *b), "depth {a} vs {b}");
    }
    let before = engine::ipi_all(ds);
    let after = engine::ipi_all(&scaled);
    for (a, b) in before.iter().zip(&after) {
        prop_assert!(approx(a.total, b.total), "IPI {} vs {}", a.total, b.total);
    }
    match (engine::nipi(ds), engine::nipi(&scaled)) {
        (Ok(a), Ok(b)) => {
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!(approx(*x, *y), "NIPI {x} vs {y}");
            }
        }
        (Err(_), Err(_)) => {}
        (a, b) => prop_assert!(false, "degeneracy changed: {a:?} vs {b:?}"),
    }
    Ok(())
}

/// Reorders firms and zones with the given permutations (taken modulo size).
pub fn permute(ds: &SectorDataset, firm_keys: &[u32], zone_keys: &[u32]) -> SectorDataset {
    let n = ds.zones().len();
    let mut zone_order: Vec<usize> = (0..n).collect();
    zone_order.sort_by_key(|&z| (zone_keys.get(z).copied().unwrap_or(0), z));
    let mut firm_order: Vec<usize> = (0..ds.firms().len()).collect();
    firm_order.sort_by_key(|&f| (firm_keys.get(f).copied().unwrap_or(0), f));

    let zones = ZoneSet::new(zone_order.iter().map(|&z| ds.zones()[z].to_string())).unwrap();
    let firms = firm_order
        .iter()
        .map(|&k| {
            let f = &ds.firms()[k];
            FirmExportRecord::new(
                f.firm_id(),
                f.founding_year(),
                f.wave(),
                zone_order.iter().map(|&z| f.entry_years()[z]).collect(),
                zone_order.iter().map(|&z| f.amounts()[z]).collect(),
                ds.measure(),
            )
        })
        .collect();
    rebuild(ds, zones, firms)
}

pub fn check_permutation_invariance(
    ds: &SectorDataset,
    firm_keys: &[u32],
    zone_keys: &[u32],
) -> Result<(), TestCaseError> {
    let shuffled = permute(ds, firm_keys, zone_keys);
    for zone in ds.zones() {
        let a = engine::ipi(ds, zone.as_str()).unwrap().total;
        let b = engine::ipi(&shuffled, zone.as_str()).unwrap().total;
        prop_assert!(approx(a, b), "IPI of {zone}: {a} vs {b}");
    }
    let (Ok(ta), Ok(tb)) = (engine::nipi(ds), engine::nipi(&shuffled)) else {
        prop_assert!(engine::nipi(ds).is_err() && engine::nipi(&shuffled).is_err());
        return Ok(());
    };
    let oa = engine::sectoral_order(&ta);
    let ob = engine::sectoral_order(&tb);
    for (ra, rb) in oa.iter().zip(&ob) {
        if ra.zone != rb.zone {
            // only near-equal NIPI values may swap places
            prop_assert!(
                (ra.nipi - rb.nipi).abs() <= 1e-9,
                "order differs at rank {}: {} vs {}",
                ra.rank,
                ra.zone,
                rb.zone
            );
        }
    }
    Ok(())
}

pub fn check_additivity(ds: &SectorDataset) -> Result<(), TestCaseError> {
    for zone in engine::ipi_all(ds) {
        let mut sum = 0.0;
        for (_, v) in &zone.breakdown {
            sum += v;
        }
        prop_assert_eq!(sum, zone.total);
        let bound: f64 = ds
            .firms()
            .iter()
            .map(|f| {
                let z = ds.zone_set().index_of(zone.zone.as_str()).unwrap();
                engine::export_width(f, z, ds.reference_year()) * engine::export_depth(f, z)
            })
            .sum::<f64>()
            * (ds.zones().len() - 1) as f64;
        prop_assert!(zone.total <= bound * (1.0 + 1e-12) + 1e-15);
    }
    Ok(())
}

fn with_entry(f: &FirmExportRecord, zone: usize, year: i32, measure: ExportMeasure) -> FirmExportRecord {
    let mut entries = f.entry_years().to_vec();
    entries[zone] = Some(year);
    FirmExportRecord::new(
        f.firm_id(),
        f.founding_year(),
        f.wave(),
        entries,
        f.amounts().to_vec(),
        measure,
    )
}

/// Turns one winner's precedence into a tie: the firm picked by `firm` has
/// its first strict dyad `(z, i)` rewritten to `entry[i] := entry[z]`.
pub fn check_tie_monotonicity(ds: &SectorDataset, firm: usize) -> Result<(), TestCaseError> {
    let n = ds.zones().len();
    let k = firm % ds.firms().len();
    let f = &ds.firms()[k];
    let mut strict = None;
    'outer: for z in 0..n {
        for i in 0..n {
            if let (Some(a), Some(b)) = (f.entry_year(z), f.entry_year(i)) {
                if a < b {
                    strict = Some((z, i, a));
                    break 'outer;
                }
            }
        }
    }
    let Some((z, i, year)) = strict else {
        return Ok(());
    };
    let mut firms = ds.firms().to_vec();
    firms[k] = with_entry(f, i, year, ds.measure());
    let changed = [(k, z, i, f.served_zone_count())];
    let tied = rebuild(ds, ds.zone_set().clone(), firms);
    let before = engine::ipi_all(ds);
    let after = engine::ipi_all(&tied);

    // the touched dyad loses (or keeps) mass in both directions
    for &(_, z, i, _) in &changed {
        let zi = ds.zones()[i].as_str();
        let zz = ds.zones()[z].as_str();
        prop_assert!(after[z].dyad(zi).unwrap() <= before[z].dyad(zi).unwrap());
        prop_assert!(after[i].dyad(zz).unwrap() <= before[i].dyad(zz).unwrap());
    }
    // a two-zone firm takes part in no other comparison
    if changed[0].3 == 2 {
        for (a, b) in after.iter().zip(&before) {
            prop_assert!(a.total <= b.total, "IPI of {} rose: {} > {}", a.zone, a.total, b.total);
        }
    }
    Ok(())
}

/// Builds a one-firm CSV with the given shares over `shares.len()` zones.
pub fn share_csv(shares: &[f64]) -> String {
    let zones: Vec<String> = (1..=shares.len()).map(|i| format!("Z{i}")).collect();
    let mut header = vec!["firm_id".to_string()];
    header.extend(zones.iter().map(|z| format!("entry_year_{z}")));
    header.extend(zones.iter().map(|z| format!("share_{z}")));
    let mut row = vec!["f".to_string()];
    row.extend((0..shares.len()).map(|k| (2000 + k as i32).to_string()));
    row.extend(shares.iter().map(|s| s.to_string()));
    format!("# reference_year: 2013\n{}\n{}\n", header.join(","), row.join(","))
}

pub fn check_share_sum(shares: &[f64], tolerance: f64) -> Result<(), TestCaseError> {
    let raw = parse_dataset(share_csv(shares).as_bytes(), &Default::default()).unwrap();
    let opts = ValidateOptions {
        reference_year: None,
        share_tolerance: tolerance,
    };
    let sum: f64 = shares.iter().sum();
    let expected = (sum - 1.0).abs() <= tolerance && shares.iter().all(|s| *s <= 1.0);
    let accepted = validate(&raw, &opts).is_ok();
    prop_assert_eq!(accepted, expected, "shares {:?} sum {} tol {}", shares, sum, tolerance);
    Ok(())
}

pub fn shares_strategy() -> impl Strategy<Value = (Vec<f64>, f64)> {
    (
        prop::collection::vec(0.01f64..1.0, 2..8),
        0.9f64..1.1,
        prop_oneof![Just(0.001), Just(0.01), Just(0.05)],
    )
        .prop_map(|(w, target, tol)| {
            let total: f64 = w.iter().sum();
            (w.iter().map(|x| x / total * target).collect(), tol)
        })
}

// ---------------------------------------------------------------------------
// ANOVA oracle: definitional sums of squares plus quadrature of the F density

/// `(F, df_between, df_within)` straight from the textbook definition.
pub fn textbook_anova(groups: &[Vec<f64>]) -> (f64, f64, f64) {
    let k = groups.len() as f64;
    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    let n = all.len() as f64;
    let grand = all.iter().sum::<f64>() / n;
    let mut msb = 0.0;
    let mut ssw = 0.0;
    for g in groups {
        let m = g.iter().sum::<f64>() / g.len() as f64;
        msb += g.len() as f64 * (m - grand) * (m - grand);
        ssw += g.iter().map(|x| (x - m) * (x - m)).sum::<f64>();
    }
    let df1 = k - 1.0;
    let df2 = n - k;
    ((msb / df1) / (ssw / df2), df1, df2)
}

fn f_density(x: f64, d1: f64, d2: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    if x <= 0.0 {
        return 0.0;
    }
    let ln_norm = ln_gamma((d1 + d2) / 2.0) - ln_gamma(d1 / 2.0) - ln_gamma(d2 / 2.0)
        + (d1 / 2.0) * (d1 / d2).ln();
    (ln_norm + (d1 / 2.0 - 1.0) * x.ln() - ((d1 + d2) / 2.0) * (1.0 + d1 * x / d2).ln()).exp()
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kronrod = GK_WEIGHTS[7] * f(c);
    let mut gauss = GAUSS_WEIGHTS[3] * f(c);
    for j in 0..7 {
        let dx = h * GK_NODES[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += GK_WEIGHTS[j] * pair;
        if j % 2 == 1 {
            gauss += GAUSS_WEIGHTS[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = gauss_kronrod(f, a, b);
    if err <= tol || depth == 0 {
        return value;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, tol / 2.0, depth - 1) + adaptive(f, m, b, tol / 2.0, depth - 1)
}

/// `P(X > f)` by integrating the F density over `[f, inf)` after mapping
/// `x = f + t / (1 - t)`.
pub fn f_tail_by_quadrature(f: f64, d1: f64, d2: f64) -> f64 {
    let g = |t: f64| {
        let one_minus = 1.0 - t;
        if one_minus <= 0.0 {
            return 0.0;
        }
        let x = f + t / one_minus;
        f_density(x, d1, d2) / (one_minus * one_minus)
    };
    // split at the image of the mode region so narrow peaks get resolved
    let cuts = [0.0, 0.05, 0.2, 0.4, 0.6, 0.8, 0.95, 0.99, 0.999, 1.0];
    cuts.windows(2)
        .map(|w| adaptive(&g, w[0], w[1], 1e-14, 40))
        .sum()
}

/// Deterministic ANOVA cases covering df_between 1..3 and df_within up to 200.
pub fn sample_anova_cases() -> Vec<Vec<Vec<f64>>> {
    let mut cases = Vec::new();
    for k in 0..20u32 {
        let groups = 2 + (k % 3) as usize;
        let base = [3usize, 5, 8, 12, 20, 35, 50, 67][(k % 8) as usize];
        let mut gs = Vec::new();
        for g in 0..groups {
            let size = base + g;
            let shift = 0.15 * f64::from(k % 5) * g as f64;
            let values = (0..size)
                .map(|j| {
                    let t = (j as f64 * 0.618_033_988_7 + f64::from(k) * 0.271 + g as f64 * 0.37)
                        .fract();
                    10.0 + 4.0 * t + shift
                })
                .collect();
            gs.push(values);
        }
        cases.push(gs);
    }
    cases
}

pub fn table_vs(table: &NipiTable, zone: &str) -> f64 {
    table.get(zone).expect("zone in table")
}
