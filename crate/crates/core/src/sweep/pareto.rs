//! Cost / unfairness trade-off fronts.

use std::io::Write;

use crate::error::Result;
use crate::interference::Scheme;

use super::format::{fmt_cost, fmt_sig};
use super::SweepRecord;

/// Indices of the points not dominated under minimisation of both
/// coordinates, ordered by the first coordinate.
///
/// `a` dominates `b` when it is no worse in both and strictly better in at
/// least one, so exact duplicates of a front point are all kept. Points with
/// a NaN coordinate are never on the front.
pub fn pareto_front(points: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len())
        .filter(|&i| !points[i].0.is_nan() && !points[i].1.is_nan())
        .collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (points[a], points[b]);
        pa.0.total_cmp(&pb.0)
            .then(pa.1.total_cmp(&pb.1))
            .then(a.cmp(&b))
    });

    let mut front = Vec::new();
    let mut best = f64::INFINITY;
    let mut i = 0;
    while i < order.len() {
        let x = points[order[i]].0;
        let y_min = points[order[i]].1;
        let mut j = i;
        while j < order.len() && points[order[j]].0 == x {
            if y_min < best && points[order[j]].1 == y_min {
                front.push(order[j]);
            }
            j += 1;
        }
        best = best.min(y_min);
        i = j;
    }
    front
}

/// A front member, referring back to its sweep record.
#[derive(Clone, Debug, PartialEq)]
pub struct ParetoPoint {
    pub scheme: Scheme,
    pub record: usize,
    pub mean_cost: f64,
    pub mean_unfair: f64,
}

/// One front per scheme over (mean cost, mean unfair share). Baseline
/// records carry no scheme and are skipped.
pub fn pareto_front_by_group(records: &[SweepRecord]) -> Vec<ParetoPoint> {
    let mut out = Vec::new();
    for scheme in Scheme::ALL {
        let members: Vec<usize> = (0..records.len())
            .filter(|&i| records[i].coords.scheme == Some(scheme))
            .collect();
        let pts: Vec<(f64, f64)> = members
            .iter()
            .map(|&i| (records[i].aggregate.mean_cost, records[i].unfair_share()))
            .collect();
        for k in pareto_front(&pts) {
            out.push(ParetoPoint {
                scheme,
                record: members[k],
                mean_cost: pts[k].0,
                mean_unfair: pts[k].1,
            });
        }
    }
    out
}

pub fn write_pareto_csv<W: Write>(
    mut out: W,
    header: &str,
    records: &[SweepRecord],
    front: &[ParetoPoint],
) -> Result<()> {
    out.write_all(header.as_bytes())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "scheme",
        "target",
        "threshold",
        "theta",
        "mean_cost",
        "se_cost",
        "mean_unfair",
        "mean_fairness",
        "se_fairness",
    ])?;
    for p in front {
        let r = &records[p.record];
        w.write_record([
            p.scheme.name().to_string(),
            r.coords.target_name().to_string(),
            fmt_sig(r.coords.threshold),
            fmt_sig(r.coords.theta),
            fmt_cost(r.aggregate.mean_cost),
            fmt_cost(r.aggregate.se_cost),
            fmt_sig(p.mean_unfair),
            fmt_sig(r.aggregate.mean_fairness),
            fmt_sig(r.aggregate.se_fairness),
        ])?;
    }
    w.flush()?;
    Ok(())
}
