//! Cheapest configuration reaching each fairness level.

use std::io::Write;

use crate::error::Result;
use crate::interference::Scheme;

use super::format::{fmt_cost, fmt_sig};
use super::SweepRecord;

#[derive(Clone, Debug, PartialEq)]
pub struct BestRow {
    pub scheme: Scheme,
    pub min_fairness: f64,
    /// Index of the cheapest qualifying record; `None` if no configuration
    /// of this scheme reaches the level.
    pub record: Option<usize>,
}

/// For every scheme present in `records` and every level, the record with
/// the lowest mean cost among those with mean fairness at or above the
/// level. Ties go to the earlier record.
pub fn best_per_fairness(records: &[SweepRecord], levels: &[f64]) -> Vec<BestRow> {
    let mut rows = Vec::new();
    for scheme in Scheme::ALL {
        if !records.iter().any(|r| r.coords.scheme == Some(scheme)) {
            continue;
        }
        for &level in levels {
            let mut best: Option<usize> = None;
            for (i, r) in records.iter().enumerate() {
                let fair = r.aggregate.mean_fairness;
                if r.coords.scheme != Some(scheme) || fair.is_nan() || fair < level {
                    continue;
                }
                if best.is_none_or(|b| r.aggregate.mean_cost < records[b].aggregate.mean_cost) {
                    best = Some(i);
                }
            }
            rows.push(BestRow {
                scheme,
                min_fairness: level,
                record: best,
            });
        }
    }
    rows
}

/// Writes the table; levels no configuration reaches are omitted.
pub fn write_best_csv<W: Write>(
    mut out: W,
    header: &str,
    records: &[SweepRecord],
    rows: &[BestRow],
) -> Result<()> {
    out.write_all(header.as_bytes())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "scheme",
        "min_fairness",
        "target",
        "threshold",
        "theta",
        "cost_mean",
        "cost_se",
    ])?;
    for row in rows {
        let Some(i) = row.record else { continue };
        let r = &records[i];
        w.write_record([
            row.scheme.name().to_string(),
            fmt_sig(row.min_fairness),
            r.coords.target_name().to_string(),
            fmt_sig(r.coords.threshold),
            fmt_sig(r.coords.theta),
            fmt_cost(r.aggregate.mean_cost),
            fmt_cost(r.aggregate.se_cost),
        ])?;
    }
    w.flush()?;
    Ok(())
}
