//! No-interference scan over the (l, h) plane.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{self, Aggregate};
use crate::rng::derive_seed;

use super::format::fmt_sig;
use super::{prepare_network, run_unit, with_pool, GameSection, GridSection, SweepSpec};

/// Scan description: network and simulation settings are taken from `base`
/// (its game and grid sections are ignored).
#[derive(Clone, Debug)]
pub struct BaselineScan {
    pub base: SweepSpec,
    pub l_values: Vec<f64>,
    pub h_values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaselinePoint {
    pub l: f64,
    pub h: f64,
    /// `None` where the game is undefined (`l >= h`); such points are not
    /// simulated.
    pub aggregate: Option<Aggregate<f64>>,
}

/// Runs every defined (l, h) pair over all network seeds and replicates,
/// in l-major order.
pub fn baseline_scan(scan: &BaselineScan, jobs: usize) -> Result<Vec<BaselinePoint>> {
    let mut spec = scan.base.clone();
    spec.grid = GridSection {
        schemes: Vec::new(),
        include_baseline: true,
        ..GridSection::default()
    };
    spec.game = GameSection::default();
    spec.validate()?;
    for &v in scan.l_values.iter().chain(&scan.h_values) {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Config(format!("offer level {v} outside [0, 1]")));
        }
    }

    let pairs: Vec<(f64, f64)> = scan
        .l_values
        .iter()
        .flat_map(|&l| scan.h_values.iter().map(move |&h| (l, h)))
        .collect();

    with_pool(jobs, || {
        let networks = spec
            .network
            .seeds
            .par_iter()
            .map(|&seed| prepare_network(&spec, seed, false, false))
            .collect::<Result<Vec<_>>>()?;
        let reps = spec.sim.replicates;
        let defined: Vec<usize> = (0..pairs.len())
            .filter(|&i| pairs[i].0 < pairs[i].1)
            .collect();
        let units: Vec<(usize, usize, usize)> = defined
            .iter()
            .flat_map(|&p| (0..networks.len()).flat_map(move |n| (0..reps).map(move |r| (p, n, r))))
            .collect();
        let results = units
            .par_iter()
            .map(|&(p, n, r)| {
                let (l, h) = pairs[p];
                let game = crate::game::GameParams::new(l, h)?;
                let seed = derive_seed(&[spec.seed, networks[n].seed, r as u64]);
                run_unit(&spec, &game, None, &networks[n], seed).map(|(f, c, _)| (f, c))
            })
            .collect::<Result<Vec<_>>>()?;

        let per_point = networks.len() * reps;
        let mut chunks = results.chunks(per_point);
        pairs
            .iter()
            .map(|&(l, h)| {
                let aggregate = if l < h {
                    Some(metrics::aggregate_values(
                        chunks.next().expect("chunk per defined point"),
                    )?)
                } else {
                    None
                };
                Ok(BaselinePoint { l, h, aggregate })
            })
            .collect()
    })?
}

pub fn write_baseline_csv<W: Write>(
    mut out: W,
    header: &str,
    points: &[BaselinePoint],
) -> Result<()> {
    out.write_all(header.as_bytes())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "l",
        "h",
        "defined",
        "freq_hh",
        "freq_hl",
        "freq_lh",
        "freq_ll",
        "fairness",
        "se_fairness",
    ])?;
    for p in points {
        let mut fields = vec![fmt_sig(p.l), fmt_sig(p.h)];
        match &p.aggregate {
            Some(a) => {
                fields.push("true".into());
                fields.extend(a.mean_freqs.iter().map(|&v| fmt_sig(v)));
                fields.push(fmt_sig(a.mean_fairness));
                fields.push(fmt_sig(a.se_fairness));
            }
            None => {
                fields.push("false".into());
                fields.extend(std::iter::repeat_n(String::new(), 6));
            }
        }
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BaselineScan {
        let mut base = SweepSpec::default();
        base.network.n = 60;
        base.network.seeds = vec![1];
        base.sim.generations = 200;
        base.sim.window = 50;
        base.sim.replicates = 2;
        BaselineScan {
            base,
            l_values: vec![0.1, 0.6],
            h_values: vec![0.6, 0.9],
        }
    }

    #[test]
    fn undefined_points_are_skipped() {
        let points = baseline_scan(&small(), 2).unwrap();
        assert_eq!(points.len(), 4);
        let defined: Vec<bool> = points.iter().map(|p| p.aggregate.is_some()).collect();
        assert_eq!(defined, vec![true, true, false, true]);
        for p in points.iter().filter_map(|p| p.aggregate.as_ref()) {
            assert_eq!(p.replicate_count, 2);
            assert_eq!(p.mean_cost, 0.0);
        }
        let mut buf = Vec::new();
        write_baseline_csv(&mut buf, "", &points).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("0.6,0.6,false,,,,,,"));
    }

    #[test]
    fn scan_is_deterministic_across_thread_counts() {
        let a = baseline_scan(&small(), 1).unwrap();
        let b = baseline_scan(&small(), 3).unwrap();
        assert_eq!(a, b);
    }
}
