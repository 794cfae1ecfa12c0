//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use fairnet::dynamics::{fermi_probability, Simulation};
use fairnet::game::{one_shot_payoffs, payoff_entry, PayoffMatrix, Strategy};
use fairnet::interference::Interferer;
use fairnet::metrics::fairness;
use fairnet::netgen::{
    degree_centrality, eigenvector_centrality, fit_power_law_exponent, generate, global_clustering,
    GenParams,
};
use fairnet::rng::{derive_seed, rng_from_seed};
use fairnet::sweep::{
    metadata_header, pareto_front, run_sweep, write_aggregate_csv, write_results_csv, SweepOutcome,
    SweepRecord, SweepSpec,
};
use fairnet::{GameParams, InterferenceConfig, Rational, Scheme, TargetSet};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn payoff_oracle() -> Outcome {
    let mut rng = rng_from_seed(11);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (a, b): (f64, f64) = (rng.random(), rng.random());
        let (l, h) = if a < b { (a, b) } else { (b, a) };
        let params = GameParams::new(l, h).map_err(|e| e.to_string())?;
        for row in Strategy::ALL {
            for col in Strategy::ALL {
                let got = payoff_entry(row, col, &params);
                let by_roles = 0.5 * one_shot_payoffs(row, col, &params).0
                    + 0.5 * one_shot_payoffs(col, row, &params).1;
                let direct = common::brute_force_payoff(row, col, l, h);
                worst = worst.max((got - by_roles).abs()).max((got - direct).abs());
            }
        }
    }
    ensure(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    Ok(format!("800 entries, max deviation {worst:e}"))
}

fn matrix_closed_forms() -> Outcome {
    use Strategy::*;
    let r = |n: i64, d: i64| Rational::new(n, d);
    let params = GameParams::new(r(1, 10), r(3, 5)).map_err(|e| e.to_string())?;
    let m = PayoffMatrix::new(&params);
    // row player: fair share 1 - h = 2/5, h = 3/5, 1 - l = 9/10, l = 1/10
    let expected = [
        (HH, [r(1, 2), r(1, 2), r(1, 5), r(1, 5)]),
        (HL, [r(1, 2), r(1, 2), r(1, 4), r(1, 4)]),
        (LH, [r(3, 10), r(3, 4), r(0, 1), r(9, 20)]),
        (LL, [r(3, 10), r(3, 4), r(1, 20), r(1, 2)]),
    ];
    for (row, cols) in expected {
        for (col, want) in Strategy::ALL.into_iter().zip(cols) {
            ensure(
                m.get(row, col) == want,
                format!("({row},{col}) = {} expected {want}", m.get(row, col)),
            )?;
        }
    }
    let f = PayoffMatrix::new(&GameParams::new(0.1, 0.6).unwrap());
    ensure(
        f.get(LH, HL) == 0.75 && f.get(HH, LH) == 0.2 && f.get(LL, LH) == 0.05,
        "f64 spot values",
    )?;
    Ok("16 entries exact over rationals; (LH,HL)=0.75 (HH,LH)=0.2 (LL,LH)=0.05".into())
}

fn network_suite() -> Outcome {
    let mut dms_wins = 0;
    let mut worst_z = 0.0f64;
    for seed in 1..=10 {
        let ba = generate(&GenParams::ba(2000, 2, seed)).map_err(|e| e.to_string())?;
        let dms = generate(&GenParams::dms(2000, 2, seed)).map_err(|e| e.to_string())?;
        let z = 2.0 * ba.edge_count() as f64 / ba.node_count() as f64;
        worst_z = worst_z.max((z - 4.0).abs() / 4.0);
        if global_clustering(&dms) > global_clustering(&ba) {
            dms_wins += 1;
        }
    }
    ensure(
        worst_z <= 0.01,
        format!("BA mean degree off by {:.3}%", 100.0 * worst_z),
    )?;
    ensure(
        dms_wins >= 9,
        format!("DMS clustering higher in only {dms_wins}/10 seeds"),
    )?;
    let mut gammas = Vec::new();
    for seed in 1..=10 {
        let big = generate(&GenParams::ba(10_000, 2, seed)).map_err(|e| e.to_string())?;
        gammas.push(fit_power_law_exponent(&big.degrees(), 4));
    }
    let (lo, hi) = gammas
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &g| {
            (a.min(g), b.max(g))
        });
    ensure(
        (2.5..=3.5).contains(&lo) && (2.5..=3.5).contains(&hi),
        format!("gamma range [{lo:.3}, {hi:.3}]"),
    )?;
    Ok(format!(
        "max |z-4|/4 = {:.3}%, DMS clustering higher {dms_wins}/10, BA 1e4 gamma in [{lo:.3}, {hi:.3}] over 10 seeds",
        100.0 * worst_z
    ))
}

fn centrality_oracle() -> Outcome {
    let mut rng = rng_from_seed(2024);
    let mut worst = 0.0f64;
    for g in 0..100 {
        let n = rng.random_range(2..=50);
        let p = rng.random_range(0.0..0.3);
        let net = common::random_connected_graph(&mut rng, n, p);

        let sol =
            eigenvector_centrality::<f64>(&net, 1e-13, 1_000_000).map_err(|e| e.to_string())?;
        let ours = common::l2_normalised(&sol.ranking.values);
        let (lambda, oracle) = common::dense_principal_eigenvector(&net);
        for i in 0..n {
            worst = worst.max((ours[i] - oracle[i]).abs());
        }
        ensure(
            (sol.eigenvalue - lambda).abs() < 1e-6,
            format!("graph {g}: eigenvalue {} vs {lambda}", sol.eigenvalue),
        )?;
        let pos = position(&sol.ranking.order);
        for i in 0..n {
            for j in 0..n {
                if oracle[i] + 1e-9 < oracle[j] && pos[i] > pos[j] {
                    return Err(format!(
                        "graph {g}: nodes {i}, {j} ranked against the oracle"
                    ));
                }
            }
        }

        let deg = degree_centrality::<f64>(&net).map_err(|e| e.to_string())?;
        for i in 0..n {
            let k = net.neighbors(i).len();
            ensure(
                deg.values[i] == k as f64 / (n - 1) as f64,
                format!("graph {g}: degree centrality of node {i}"),
            )?;
        }
        let dpos = position(&deg.order);
        for i in 0..n {
            for j in 0..n {
                let (ki, kj) = (net.neighbors(i).len(), net.neighbors(j).len());
                if ki < kj && dpos[i] > dpos[j] {
                    return Err(format!("graph {g}: degree order of {i}, {j}"));
                }
            }
        }
    }
    ensure(
        worst <= 1e-6,
        format!("max eigenvector deviation {worst:e}"),
    )?;
    Ok(format!(
        "100 graphs, max eigenvector deviation {worst:e}, degree exact"
    ))
}

fn position(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (rank, &i) in order.iter().enumerate() {
        pos[i] = rank;
    }
    pos
}

fn fermi_properties() -> Outcome {
    let mut rng = rng_from_seed(7);
    let mut worst = 0.0f64;
    for i in 0..1_000_000 {
        let scale = if i % 2 == 0 { 2.0 } else { 200.0 };
        let a = rng.random_range(-scale..scale);
        let b = rng.random_range(-scale..scale);
        let k = if i % 3 == 0 { 1.0 } else { 0.1 };
        let s: f64 = fermi_probability(a, b, k) + fermi_probability(b, a, k);
        worst = worst.max((s - 1.0).abs());
        if fermi_probability(a, a, k) != 0.5 {
            return Err(format!("W({a}, {a}) != 0.5"));
        }
    }
    ensure(worst <= 1e-12, format!("complementarity error {worst:e}"))?;
    for gap in [1.0f64, 10.0, 100.0, 709.0, 710.0, 1e3, 1e4] {
        for k in [0.1f64, 1.0] {
            for w in [
                fermi_probability(gap * k, 0.0, k),
                fermi_probability(0.0, gap * k, k),
            ] {
                ensure(
                    w.is_finite() && (0.0..=1.0).contains(&w),
                    format!("gap {gap}: W = {w}"),
                )?;
            }
        }
    }
    ensure(
        fermi_probability(1e4, 0.0, 1.0) == 0.0 && fermi_probability(0.0, 1e4, 1.0) == 1.0,
        "saturation",
    )?;
    Ok(format!(
        "1e6 pairs, max |W(a,b)+W(b,a)-1| = {worst:e}, finite up to gap/K = 1e4"
    ))
}

fn cost_exactness() -> Outcome {
    let game = GameParams::new(0.1, 0.6).unwrap();
    let mut checked = 0;
    let mut events_total = 0u64;
    for (i, (scheme, threshold)) in [
        (Scheme::Pop, 0.6),
        (Scheme::Neb, 0.7),
        (Scheme::NiDeg, 0.05),
        (Scheme::NiEig, 0.05),
    ]
    .into_iter()
    .enumerate()
    {
        for &theta in &[10.0, 17.78, 23.71, 56.23, 0.1 + 0.2] {
            let net = generate(&GenParams::ba(200, 2, i as u64 + 1)).unwrap();
            let cfg = InterferenceConfig::new(scheme, TargetSet::FairResponders, threshold, theta)
                .unwrap();
            let interferer = Interferer::new(cfg, &net).map_err(|e| e.to_string())?;
            let mut sim = SweepSpec::default().sim_config(derive_seed(&[3, i as u64]));
            sim.generations = 3000;
            sim.window = 300;
            sim.log_decisions = true;
            let run = Simulation::new(&net, &game, Some(&interferer), sim)
                .unwrap()
                .run();
            let log = run.decision_log.as_ref().ok_or("no decision log")?;
            let events: u64 = log.iter().map(|&c| c as u64).sum();
            ensure(
                events == run.endowment_events,
                format!("{scheme}: events mismatch"),
            )?;
            let recomputed = theta * events as f64;
            ensure(
                run.total_cost.to_bits() == recomputed.to_bits(),
                format!("{scheme} theta {theta}: {} != {recomputed}", run.total_cost),
            )?;
            checked += 1;
            events_total += events;
        }
    }
    Ok(format!(
        "{checked} logged runs over 4 schemes, {events_total} endowments, bit-exact"
    ))
}

fn desk_spec() -> SweepSpec {
    SweepSpec::from_toml(
        r#"
        seed = 1
        [network]
        model = "ba"
        n = 500
        m = 2
        seeds = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10]
        [game]
        l = 0.1
        h = 0.6
        [sim]
        generations = 50000
        window = 5000
        replicates = 1
        [grid]
        schemes = ["neb"]
        targets = ["hh,lh"]
        thresholds = [0.3, 0.7]
        thetas = [10.0, 56.23]
        include_baseline = true
        "#,
    )
    .unwrap()
}

fn csv_bytes(spec: &SweepSpec, outcome: &SweepOutcome) -> Vec<u8> {
    let header = metadata_header(spec.seed, &spec.to_toml());
    let mut buf = Vec::new();
    write_results_csv(&mut buf, &header, &outcome.records).unwrap();
    write_aggregate_csv(&mut buf, &header, &outcome.records).unwrap();
    buf
}

fn find(
    records: &[SweepRecord],
    scheme: Option<Scheme>,
    threshold: f64,
    theta: f64,
) -> &SweepRecord {
    records
        .iter()
        .find(|r| {
            r.coords.scheme == scheme && r.coords.threshold == threshold && r.coords.theta == theta
        })
        .expect("grid point present")
}

fn main() {
    let start = Instant::now();
    let mut failures = 0;
    let mut report = |name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    };

    report("payoff matrix oracle", &mut payoff_oracle);
    report("matrix closed forms", &mut matrix_closed_forms);
    report("network suite", &mut network_suite);
    report("centrality oracle", &mut centrality_oracle);
    report("fermi properties", &mut fermi_properties);
    report("cost exactness", &mut cost_exactness);

    let spec = desk_spec();
    let first = run_sweep(&spec, 2);
    let mut desk: Option<SweepOutcome> = None;
    report("determinism", &mut || {
        let a = first.as_ref().map_err(|e| e.to_string())?;
        ensure(
            a.failures.is_empty(),
            format!("{} failed units", a.failures.len()),
        )?;
        for rec in &a.records {
            rec.audit().map_err(|e| e.to_string())?;
        }
        let b = run_sweep(&spec, 1).map_err(|e| e.to_string())?;
        let (x, y) = (csv_bytes(&spec, a), csv_bytes(&spec, &b));
        ensure(x == y, "CSV output differs between runs")?;
        desk = Some(b);
        Ok(format!(
            "desk sweep ({} grid points x 10) twice, {} identical bytes, audits clean",
            a.records.len(),
            x.len()
        ))
    });

    let desk_records = desk.map(|d| d.records).unwrap_or_default();
    report("baseline qualitative", &mut || {
        ensure(!desk_records.is_empty(), "desk sweep unavailable")?;
        let base = find(&desk_records, None, 0.0, 0.0);
        let mean = base.aggregate.mean_fairness;
        ensure(base.raw.len() == 10, "expected 10 replicates")?;
        ensure(
            mean < 0.5,
            format!(
                "mean fairness {mean:.4} (se {:.4})",
                base.aggregate.se_fairness
            ),
        )?;
        Ok(format!(
            "mean fairness {mean:.4} (se {:.4}) over 10 replicates",
            base.aggregate.se_fairness
        ))
    });

    report("interference efficacy", &mut || {
        ensure(!desk_records.is_empty(), "desk sweep unavailable")?;
        let base = find(&desk_records, None, 0.0, 0.0).aggregate.mean_fairness;
        let neb = find(&desk_records, Some(Scheme::Neb), 0.7, 56.23);
        let gain = neb.aggregate.mean_fairness - base;
        let high = neb.raw.iter().filter(|r| r.fairness() >= 0.9).count();
        let detail = format!(
            "NEB fairness {:.4} vs baseline {base:.4} (gain {gain:.4}), {high}/10 replicates >= 0.9",
            neb.aggregate.mean_fairness
        );
        ensure(gain >= 0.3 && high >= 7, detail.clone())?;
        Ok(detail)
    });

    report("polarisation", &mut || polarisation(&spec, &desk_records));

    report("pareto oracle", &mut || {
        let mut rng = rng_from_seed(5);
        let pts: Vec<(f64, f64)> = (0..1000)
            .map(|i| {
                // a noisy trade-off curve keeps the front large; the coarse
                // share forces ties and exact duplicates
                let x: f64 = rng.random_range(0.0..20.0);
                let y = (20.0 - x) * rng.random_range(0.9..1.1);
                if i % 4 == 0 {
                    (x.round(), y.round())
                } else {
                    (x, y)
                }
            })
            .collect();
        let fast = pareto_front(&pts);
        let slow = common::brute_force_front(&pts);
        ensure(
            fast == slow,
            format!("front sizes {} vs {}", fast.len(), slow.len()),
        )?;
        Ok(format!(
            "1000 points, front of {} identical to brute force",
            fast.len()
        ))
    });

    println!(
        "acceptance: {} failed, total {:.1}s",
        failures,
        start.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}

fn polarisation(spec: &SweepSpec, desk: &[SweepRecord]) -> Outcome {
    ensure(!desk.is_empty(), "desk sweep unavailable")?;
    let low = find(desk, Some(Scheme::Neb), 0.7, 10.0)
        .aggregate
        .mean_fairness;
    let game = spec.game_params().unwrap();
    let theta = 74.98;
    let cfg = InterferenceConfig::new(Scheme::Neb, TargetSet::FairResponders, 0.7, theta).unwrap();
    let (gens, window) = (spec.sim.generations, spec.sim.window);

    let mut fair_sum = 0.0;
    let mut absorbed: Option<(u64, usize, f64, f64)> = None;
    for &net_seed in &spec.network.seeds {
        let net = generate(&spec.gen_params(net_seed)).unwrap();
        let interferer = Interferer::new(cfg, &net).unwrap();
        let mut sim = spec.sim_config(derive_seed(&[spec.seed, net_seed, 0]));
        sim.record_full_trajectory = true;
        sim.log_decisions = true;
        let run = Simulation::new(&net, &game, Some(&interferer), sim)
            .unwrap()
            .run();
        fair_sum += run.fairness;
        if absorbed.is_some() {
            continue;
        }
        let traj = &run.freq_trajectory;
        if fairness(&traj[gens - window]) <= 0.99 {
            continue;
        }
        let log = run.decision_log.as_ref().unwrap();
        let g_abs = traj.iter().position(|f| fairness(f) > 0.99).unwrap();
        let pre: u64 = log[..=g_abs].iter().map(|&c| c as u64).sum();
        let within: u64 = log[gens - window..].iter().map(|&c| c as u64).sum();
        let pre_rate = theta * pre as f64 / (g_abs + 1) as f64;
        let window_rate = theta * within as f64 / window as f64;
        absorbed = Some((net_seed, g_abs, pre_rate, window_rate));
    }
    let high = fair_sum / spec.network.seeds.len() as f64;
    ensure(
        high >= low,
        format!("fairness at theta 74.98 {high:.4} < theta 10 {low:.4}"),
    )?;
    let (seed, g_abs, pre_rate, window_rate) =
        absorbed.ok_or("no replicate was near-absorbed at window start")?;
    let ratio = if pre_rate > 0.0 {
        window_rate / pre_rate
    } else {
        window_rate
    };
    ensure(
        ratio < 0.05,
        format!(
            "network {seed}: window cost rate {window_rate:.3} vs pre-absorption {pre_rate:.3}"
        ),
    )?;
    Ok(format!(
        "fairness {high:.4} (theta 74.98) >= {low:.4} (theta 10); network {seed} absorbed at generation {g_abs}, \
         cost rate {pre_rate:.2}/gen before vs {window_rate:.4}/gen in window ({:.2}%)",
        100.0 * ratio
    ))
}
