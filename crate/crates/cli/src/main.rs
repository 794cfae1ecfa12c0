use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fairnet::dynamics::Simulation;
use fairnet::interference::Interferer;
use fairnet::netgen::{self, generate, network_stats, read_edgelist_file, write_edgelist_file};
use fairnet::rng::derive_seed;
use fairnet::sweep::{self, BaselineScan, ReplicateRow, SweepRecord, SweepSpec};
use fairnet::{Error, GameParams, InterferenceConfig, Model, Network, Scheme, TargetSet};

#[derive(Parser)]
#[command(
    name = "fairnet",
    version,
    about = "Ultimatum game dynamics on scale-free networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a network, write its edge list and print summary statistics.
    Netgen(NetgenArgs),
    /// Simulate one configuration.
    Run(RunArgs),
    /// Run a parameter sweep described by a TOML file.
    Sweep(SweepArgs),
    /// Extract per-scheme cost/unfairness fronts from sweep output.
    Pareto(PostArgs),
    /// Cheapest configuration per scheme reaching each fairness level.
    Best(BestArgs),
    /// No-interference scan over the (l, h) plane.
    Baseline(BaselineArgs),
}

#[derive(Args, Clone)]
struct NetworkArgs {
    /// Growth model: ba or dms.
    #[arg(long, default_value = "ba")]
    model: Model,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Links added per new node.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// BA core size (defaults to m + 1).
    #[arg(long)]
    m0: Option<usize>,
}

#[derive(Args)]
struct NetgenArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[arg(long)]
    seed: u64,
    /// Edge list destination.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Lower degree cutoff for the power-law fit.
    #[arg(long, default_value_t = netgen::DEFAULT_XMIN)]
    xmin: usize,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    network: NetworkArgs,
    /// Master seed for the replicate streams.
    #[arg(long)]
    seed: u64,
    /// Network seed (defaults to --seed). Ignored with --network-file.
    #[arg(long)]
    network_seed: Option<u64>,
    /// Load the network from an edge list instead of generating it.
    #[arg(long)]
    network_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    l: f64,
    #[arg(long, default_value_t = 0.6)]
    h: f64,
    #[arg(long, default_value_t = 500_000)]
    generations: usize,
    #[arg(long, default_value_t = 25_000)]
    window: usize,
    /// Imitation noise K.
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    #[arg(long, default_value_t = 1)]
    replicates: usize,
    #[arg(long)]
    asynchronous: bool,
    /// none, pop, neb, ni-deg or ni-eig.
    #[arg(long, default_value = "none")]
    scheme: String,
    /// Targeted strategies: hh, hh,hl or hh,lh.
    #[arg(long, default_value = "hh")]
    target: TargetSet,
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Endowment per invested node.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Per-replicate results CSV (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-generation investment log of the first replicate.
    #[arg(long)]
    log_decisions: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Master seed; overrides the config file.
    #[arg(long)]
    seed: u64,
    /// Per-replicate results CSV.
    #[arg(long)]
    out: PathBuf,
    /// Aggregated CSV, one row per grid point.
    #[arg(long)]
    aggregate: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct PostArgs {
    /// Aggregate or per-replicate sweep CSV.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BestArgs {
    #[command(flatten)]
    post: PostArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [0.8, 0.85, 0.9, 0.95, 0.99])]
    levels: Vec<f64>,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [1u64])]
    network_seeds: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = default_grid())]
    l_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = default_grid())]
    h_grid: Vec<f64>,
    #[arg(long, default_value_t = 500_000)]
    generations: usize,
    #[arg(long, default_value_t = 25_000)]
    window: usize,
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    #[arg(long, default_value_t = 10)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// Failure classes, mapped to exit codes.
enum Failure {
    /// Bad arguments or configuration (exit 2).
    Usage(String),
    /// Runtime failure or partial results (exit 1).
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) | Error::Config(_) | Error::Format { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Netgen(a) => netgen_cmd(a),
        Command::Run(a) => run_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Pareto(a) => pareto_cmd(a),
        Command::Best(a) => best_cmd(a),
        Command::Baseline(a) => baseline_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn sink(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn base_spec(net: &NetworkArgs, seed: u64) -> SweepSpec {
    let mut spec = SweepSpec {
        seed,
        ..SweepSpec::default()
    };
    spec.network.model = net.model;
    spec.network.n = net.n;
    spec.network.m = net.m;
    spec.network.m0 = net.m0;
    spec
}

fn netgen_cmd(a: NetgenArgs) -> CliResult {
    let spec = base_spec(&a.network, a.seed);
    let params = spec.gen_params(a.seed);
    let net = generate(&params)?;
    if let Some(path) = &a.out {
        write_edgelist_file(&net, path)?;
    }
    let stats = network_stats(&net, a.xmin);
    let mut out = io::stdout().lock();
    writeln!(out, "n,m,model,seed,mean_degree,clustering,gamma")?;
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        params.n,
        params.m,
        params.model,
        a.seed,
        sweep::fmt_sig(stats.mean_degree),
        sweep::fmt_sig(stats.global_clustering),
        sweep::fmt_sig(stats.fitted_exponent),
    )?;
    Ok(())
}

fn parse_scheme(name: &str) -> Result<Option<Scheme>, Failure> {
    if name.trim().eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    Ok(Some(name.parse()?))
}

fn run_cmd(a: RunArgs) -> CliResult {
    let scheme = parse_scheme(&a.scheme)?;
    let interference = match scheme {
        None => None,
        Some(s) => {
            if a.theta <= 0.0 {
                return Err(Failure::Usage(
                    "--theta must be positive when a scheme is set".into(),
                ));
            }
            Some(InterferenceConfig::new(s, a.target, a.threshold, a.theta)?)
        }
    };
    if a.replicates == 0 {
        return Err(Failure::Usage("--replicates must be positive".into()));
    }

    let mut spec = base_spec(&a.network, a.seed);
    spec.game.l = a.l;
    spec.game.h = a.h;
    spec.sim.generations = a.generations;
    spec.sim.window = a.window;
    spec.sim.noise = a.noise;
    spec.sim.replicates = a.replicates;
    spec.sim.asynchronous = a.asynchronous;
    spec.grid.schemes = scheme.into_iter().collect();
    spec.grid.targets = vec![a.target];
    spec.grid.thresholds = vec![a.threshold];
    spec.grid.ni_thresholds = vec![a.threshold];
    spec.grid.thetas = vec![a.theta];
    spec.grid.include_baseline = scheme.is_none();

    let (net, network_seed): (Network, u64) = match &a.network_file {
        Some(path) => (read_edgelist_file(path)?, 0),
        None => {
            let seed = a.network_seed.unwrap_or(a.seed);
            (generate(&spec.gen_params(seed))?, seed)
        }
    };
    spec.network.seeds = vec![network_seed];
    spec.validate()?;
    let game = GameParams::new(a.l, a.h)?;
    let interferer = interference.map(|c| Interferer::new(c, &net)).transpose()?;

    let mut raw = Vec::with_capacity(a.replicates);
    let mut log = None;
    for r in 0..a.replicates {
        let replicate_seed = derive_seed(&[a.seed, network_seed, r as u64]);
        let mut cfg = spec.sim_config(replicate_seed);
        cfg.log_decisions = r == 0 && a.log_decisions.is_some();
        let result = Simulation::new(&net, &game, interferer.as_ref(), cfg)?.run();
        if r == 0 {
            log = result.decision_log.clone();
        }
        raw.push(ReplicateRow {
            network_seed,
            replicate: r,
            replicate_seed,
            window_freq: result.window_freq,
            total_cost: result.total_cost,
            endowment_events: result.endowment_events,
        });
    }
    let mut record = SweepRecord {
        coords: sweep::coordinates(&spec, interference.as_ref()),
        aggregate: fairnet::metrics::aggregate_values(&[(raw[0].window_freq, raw[0].total_cost)])?,
        raw,
    };
    record.aggregate = record.recompute_aggregate()?;

    let mut config = spec.to_toml();
    if let Some(path) = &a.network_file {
        config = format!("network_file = {:?}\n{config}", path.display().to_string());
    }
    let header = sweep::metadata_header(a.seed, &config);
    sweep::write_results_csv(
        sink(a.out.as_ref())?,
        &header,
        std::slice::from_ref(&record),
    )?;

    if let (Some(path), Some(log)) = (&a.log_decisions, log) {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(header.as_bytes())?;
        writeln!(w, "generation,scheme,invested_count,cost_delta")?;
        let name = record.coords.scheme_name();
        for (g, &count) in log.iter().enumerate() {
            writeln!(
                w,
                "{g},{name},{count},{}",
                sweep::fmt_cost(a.theta * count as f64)
            )?;
        }
        w.flush()?;
    }
    Ok(())
}

fn sweep_cmd(a: SweepArgs) -> CliResult {
    let text = std::fs::read_to_string(&a.config)?;
    let mut spec = SweepSpec::from_toml(&text)?;
    spec.seed = a.seed;
    let outcome = sweep::run_sweep(&spec, a.jobs)?;
    for rec in &outcome.records {
        rec.audit()?;
    }
    let header = sweep::metadata_header(spec.seed, &spec.to_toml());
    sweep::write_results_csv(
        BufWriter::new(File::create(&a.out)?),
        &header,
        &outcome.records,
    )?;
    if let Some(path) = &a.aggregate {
        sweep::write_aggregate_csv(
            BufWriter::new(File::create(path)?),
            &header,
            &outcome.records,
        )?;
    }
    if !outcome.failures.is_empty() {
        for f in &outcome.failures {
            eprintln!(
                "failed: grid point {} network seed {} replicate {}: {}",
                f.grid_index, f.network_seed, f.replicate, f.message
            );
        }
        return Err(Failure::Runtime(format!(
            "{} work units failed; partial results written",
            outcome.failures.len()
        )));
    }
    Ok(())
}

fn read_records(path: &PathBuf) -> Result<Vec<SweepRecord>, Failure> {
    let records = sweep::read_summary_csv(File::open(path)?)?;
    if records.is_empty() {
        return Err(Failure::Usage(format!(
            "{} contains no data rows",
            path.display()
        )));
    }
    Ok(records)
}

fn pareto_cmd(a: PostArgs) -> CliResult {
    let records = read_records(&a.input)?;
    let front = sweep::pareto_front_by_group(&records);
    let header = format!(
        "# fairnet {}\n# source: {}\n",
        fairnet::VERSION,
        a.input.display()
    );
    sweep::write_pareto_csv(sink(a.out.as_ref())?, &header, &records, &front)?;
    Ok(())
}

fn best_cmd(a: BestArgs) -> CliResult {
    let records = read_records(&a.post.input)?;
    let rows = sweep::best_per_fairness(&records, &a.levels);
    let header = format!(
        "# fairnet {}\n# source: {}\n",
        fairnet::VERSION,
        a.post.input.display()
    );
    sweep::write_best_csv(sink(a.post.out.as_ref())?, &header, &records, &rows)?;
    Ok(())
}

fn baseline_cmd(a: BaselineArgs) -> CliResult {
    let mut base = base_spec(&a.network, a.seed);
    base.network.seeds = a.network_seeds.clone();
    base.sim.generations = a.generations;
    base.sim.window = a.window;
    base.sim.noise = a.noise;
    base.sim.replicates = a.replicates;
    let scan = BaselineScan {
        base,
        l_values: a.l_grid.clone(),
        h_values: a.h_grid.clone(),
    };
    let points = sweep::baseline_scan(&scan, a.jobs)?;
    let fmt_list = |v: &[f64]| {
        v.iter()
            .map(|x| sweep::fmt_sig(*x))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let config = format!(
        "l_grid = [{}]\nh_grid = [{}]\n{}",
        fmt_list(&scan.l_values),
        fmt_list(&scan.h_values),
        scan.base.to_toml()
    );
    let header = sweep::metadata_header(a.seed, &config);
    sweep::write_baseline_csv(sink(a.out.as_ref())?, &header, &points)?;
    Ok(())
}
