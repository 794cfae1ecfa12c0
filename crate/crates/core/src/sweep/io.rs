//! CSV output for sweeps and the reader used by the post-processing commands.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::metrics::{self, Aggregate};
use crate::rng::RNG_ALGORITHM;

use super::format::{fmt_cost, fmt_sig};
use super::{Coordinates, ReplicateRow, SweepRecord};

pub const RESULTS_COLUMNS: [&str; 20] = [
    "model",
    "network_seed",
    "replicate_seed",
    "scheme",
    "target",
    "threshold",
    "theta",
    "l",
    "h",
    "K",
    "generations",
    "window",
    "freq_hh",
    "freq_hl",
    "freq_lh",
    "freq_ll",
    "fairness",
    "unfair",
    "total_cost",
    "endowment_events",
];

pub const AGGREGATE_COLUMNS: [&str; 20] = [
    "model",
    "scheme",
    "target",
    "threshold",
    "theta",
    "l",
    "h",
    "K",
    "generations",
    "window",
    "replicates",
    "mean_freq_hh",
    "mean_freq_hl",
    "mean_freq_lh",
    "mean_freq_ll",
    "mean_fairness",
    "se_fairness",
    "mean_unfair",
    "mean_cost",
    "se_cost",
];

/// `#`-prefixed provenance block: version, RNG, master seed and the config
/// that produced the file.
pub fn metadata_header(seed: u64, config: &str) -> String {
    let mut out = format!(
        "# fairnet {}\n# rng: {RNG_ALGORITHM}\n# master_seed: {seed}\n# config:\n",
        crate::VERSION
    );
    for line in config.lines() {
        out.push_str("#   ");
        out.push_str(line);
        out.push('\n');
    }
    out
}

fn coordinate_fields(c: &Coordinates) -> [String; 9] {
    [
        c.scheme_name().to_string(),
        c.target_name().to_string(),
        fmt_sig(c.threshold),
        fmt_sig(c.theta),
        fmt_sig(c.l),
        fmt_sig(c.h),
        fmt_sig(c.noise),
        c.generations.to_string(),
        c.window.to_string(),
    ]
}

/// One row per replicate.
pub fn write_results_csv<W: Write>(
    mut out: W,
    header: &str,
    records: &[SweepRecord],
) -> Result<()> {
    out.write_all(header.as_bytes())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_COLUMNS)?;
    for rec in records {
        let coords = coordinate_fields(&rec.coords);
        for row in &rec.raw {
            let mut fields = vec![
                rec.coords.model.name().to_string(),
                row.network_seed.to_string(),
                row.replicate_seed.to_string(),
            ];
            fields.extend(coords.iter().cloned());
            fields.extend(row.window_freq.iter().map(|&v| fmt_sig(v)));
            let fair = metrics::fairness(&row.window_freq);
            fields.push(fmt_sig(fair));
            fields.push(fmt_sig(1.0 - fair));
            fields.push(fmt_cost(row.total_cost));
            fields.push(row.endowment_events.to_string());
            w.write_record(&fields)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One row per grid point.
pub fn write_aggregate_csv<W: Write>(
    mut out: W,
    header: &str,
    records: &[SweepRecord],
) -> Result<()> {
    out.write_all(header.as_bytes())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(AGGREGATE_COLUMNS)?;
    for rec in records {
        let a = &rec.aggregate;
        let mut fields = vec![rec.coords.model.name().to_string()];
        fields.extend(coordinate_fields(&rec.coords));
        fields.push(a.replicate_count.to_string());
        fields.extend(a.mean_freqs.iter().map(|&v| fmt_sig(v)));
        fields.push(fmt_sig(a.mean_fairness));
        fields.push(fmt_sig(a.se_fairness));
        fields.push(fmt_sig(1.0 - a.mean_fairness));
        fields.push(fmt_cost(a.mean_cost));
        fields.push(fmt_cost(a.se_cost));
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

struct Columns {
    index: HashMap<String, usize>,
}

impl Columns {
    fn get<'r>(&self, rec: &'r csv::StringRecord, name: &str, line: usize) -> Result<&'r str> {
        let i = self.index[name];
        rec.get(i)
            .map(str::trim)
            .ok_or_else(|| Error::format(line, format!("missing field `{name}`")))
    }

    fn parse<T: std::str::FromStr>(
        &self,
        rec: &csv::StringRecord,
        name: &str,
        line: usize,
    ) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.get(rec, name, line)?;
        raw.parse()
            .map_err(|e| Error::format(line, format!("bad `{name}` value `{raw}`: {e}")))
    }

    fn coords(&self, rec: &csv::StringRecord, line: usize) -> Result<Coordinates> {
        let opt = |name: &str| -> Result<Option<&str>> {
            let v = self.get(rec, name, line)?;
            Ok((v != "none").then_some(v))
        };
        let parse_err = |e: Error| Error::format(line, e.to_string());
        Ok(Coordinates {
            model: self.get(rec, "model", line)?.parse().map_err(parse_err)?,
            scheme: opt("scheme")?
                .map(str::parse)
                .transpose()
                .map_err(parse_err)?,
            target: opt("target")?
                .map(str::parse)
                .transpose()
                .map_err(parse_err)?,
            threshold: self.parse(rec, "threshold", line)?,
            theta: self.parse(rec, "theta", line)?,
            l: self.parse(rec, "l", line)?,
            h: self.parse(rec, "h", line)?,
            noise: self.parse(rec, "K", line)?,
            generations: self.parse(rec, "generations", line)?,
            window: self.parse(rec, "window", line)?,
        })
    }
}

/// Reads either an aggregate CSV or a per-replicate results CSV (detected
/// from the header). Results are grouped by coordinates, in order of first
/// appearance, and aggregated.
pub fn read_summary_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers()?.clone();
    let index: HashMap<String, usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| (h.to_string(), i))
        .collect();
    let is_raw = index.contains_key("replicate_seed");
    let required: &[&str] = if is_raw {
        &RESULTS_COLUMNS
    } else {
        &AGGREGATE_COLUMNS
    };
    if let Some(missing) = required.iter().find(|c| !index.contains_key(**c)) {
        return Err(Error::format(1, format!("missing column `{missing}`")));
    }
    let cols = Columns { index };

    let mut records: Vec<SweepRecord> = Vec::new();
    let mut groups: HashMap<String, usize> = HashMap::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != headers.len() {
            return Err(Error::format(
                line,
                format!("expected {} fields, found {}", headers.len(), rec.len()),
            ));
        }
        let coords = cols.coords(&rec, line)?;
        if is_raw {
            let freqs = [
                cols.parse(&rec, "freq_hh", line)?,
                cols.parse(&rec, "freq_hl", line)?,
                cols.parse(&rec, "freq_lh", line)?,
                cols.parse(&rec, "freq_ll", line)?,
            ];
            let key = format!("{coords:?}");
            let slot = *groups.entry(key).or_insert_with(|| {
                records.push(SweepRecord {
                    coords,
                    aggregate: empty_aggregate(),
                    raw: Vec::new(),
                });
                records.len() - 1
            });
            let raw = &mut records[slot].raw;
            raw.push(ReplicateRow {
                network_seed: cols.parse(&rec, "network_seed", line)?,
                replicate: raw.len(),
                replicate_seed: cols.parse(&rec, "replicate_seed", line)?,
                window_freq: freqs,
                total_cost: cols.parse(&rec, "total_cost", line)?,
                endowment_events: cols.parse(&rec, "endowment_events", line)?,
            });
        } else {
            let aggregate: Aggregate<f64> = Aggregate {
                mean_fairness: cols.parse(&rec, "mean_fairness", line)?,
                se_fairness: cols.parse(&rec, "se_fairness", line)?,
                mean_cost: cols.parse(&rec, "mean_cost", line)?,
                se_cost: cols.parse(&rec, "se_cost", line)?,
                mean_freqs: [
                    cols.parse(&rec, "mean_freq_hh", line)?,
                    cols.parse(&rec, "mean_freq_hl", line)?,
                    cols.parse(&rec, "mean_freq_lh", line)?,
                    cols.parse(&rec, "mean_freq_ll", line)?,
                ],
                replicate_count: cols.parse(&rec, "replicates", line)?,
            };
            for (name, v) in [
                ("mean_fairness", aggregate.mean_fairness),
                ("mean_cost", aggregate.mean_cost),
            ] {
                if !v.is_finite() {
                    return Err(Error::format(line, format!("`{name}` is not finite")));
                }
            }
            records.push(SweepRecord {
                coords,
                aggregate,
                raw: Vec::new(),
            });
        }
    }
    if is_raw {
        for rec in &mut records {
            rec.aggregate = rec.recompute_aggregate()?;
        }
    }
    Ok(records)
}

fn empty_aggregate() -> Aggregate<f64> {
    Aggregate {
        mean_fairness: 0.0,
        se_fairness: 0.0,
        mean_cost: 0.0,
        se_cost: 0.0,
        mean_freqs: [0.0; 4],
        replicate_count: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interference::{Scheme, TargetSet};
    use crate::netgen::Model;

    fn record() -> SweepRecord {
        let raw = vec![
            ReplicateRow {
                network_seed: 1,
                replicate: 0,
                replicate_seed: 11,
                window_freq: [0.5, 0.25, 0.125, 0.125],
                total_cost: 56.23 * 4.0,
                endowment_events: 4,
            },
            ReplicateRow {
                network_seed: 2,
                replicate: 1,
                replicate_seed: 12,
                window_freq: [0.25, 0.25, 0.25, 0.25],
                total_cost: 56.23 * 2.0,
                endowment_events: 2,
            },
        ];
        let mut rec = SweepRecord {
            coords: Coordinates {
                model: Model::Ba,
                scheme: Some(Scheme::Neb),
                target: Some(TargetSet::FairResponders),
                threshold: 0.7,
                theta: 56.23,
                l: 0.1,
                h: 0.6,
                noise: 0.1,
                generations: 1000,
                window: 100,
            },
            aggregate: empty_aggregate(),
            raw,
        };
        rec.aggregate = rec.recompute_aggregate().unwrap();
        rec
    }

    #[test]
    fn results_header_and_round_trip() {
        let rec = record();
        let mut buf = Vec::new();
        write_results_csv(
            &mut buf,
            &metadata_header(3, "seed = 3"),
            std::slice::from_ref(&rec),
        )
        .unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let first_data = text.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(first_data, RESULTS_COLUMNS.join(","));
        assert!(text.contains("ba,1,11,neb,hh+lh,0.7,56.23,0.1,0.6,0.1,1000,100,0.5,0.25,0.125,0.125,0.75,0.25,224.92,4"));
        let back = read_summary_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].coords, rec.coords);
        assert_eq!(back[0].raw.len(), 2);
        assert!((back[0].aggregate.mean_fairness - rec.aggregate.mean_fairness).abs() < 1e-12);
    }

    #[test]
    fn aggregate_round_trip() {
        let rec = record();
        let mut buf = Vec::new();
        write_aggregate_csv(&mut buf, "", std::slice::from_ref(&rec)).unwrap();
        let back = read_summary_csv(buf.as_slice()).unwrap();
        assert_eq!(back[0].coords, rec.coords);
        assert_eq!(back[0].aggregate.replicate_count, 2);
        assert!((back[0].aggregate.mean_fairness - 0.625).abs() < 1e-12);
        assert!((back[0].aggregate.mean_cost - 168.69).abs() < 1e-9);
    }

    #[test]
    fn malformed_rows_report_line() {
        let mut buf = Vec::new();
        write_aggregate_csv(&mut buf, "", &[record()]).unwrap();
        let text = String::from_utf8(buf).unwrap().replace("0.625", "abc");
        match read_summary_csv(text.as_bytes()) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected format error, got {other:?}"),
        }
        let missing = "model,scheme\nba,neb\n";
        assert!(read_summary_csv(missing.as_bytes()).is_err());
    }

    #[test]
    fn baseline_rows_use_none() {
        let mut rec = record();
        rec.coords.scheme = None;
        rec.coords.target = None;
        rec.coords.threshold = 0.0;
        rec.coords.theta = 0.0;
        let mut buf = Vec::new();
        write_aggregate_csv(&mut buf, "", &[rec.clone()]).unwrap();
        assert!(String::from_utf8(buf.clone())
            .unwrap()
            .contains("ba,none,none,0,0,"));
        let back = read_summary_csv(buf.as_slice()).unwrap();
        assert_eq!(back[0].coords.scheme, None);
    }
}
