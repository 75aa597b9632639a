use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use bloomrf::workloads::{read_queries, read_u64s, write_queries, write_u64s};
use bloomrf::{advise, build_config, BloomRf, KeyDistribution, WorkloadSpec};
use bloomrf_cli::artifact::{build_filter, gen_artifacts, probe_all, BuildOptions};
use bloomrf_cli::bench::{run_cells, thread_budget, BenchCell, FilterKind, Layout};
use bloomrf_cli::model_table::{model_table, render};
use bloomrf_cli::online::{run_mixed, MixedResult};
use bloomrf_cli::record::csv_header;
use bloomrf_cli::scatter::{self, matching_bloom, scatter_of};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bloomrf", version, about = "bloomRF point-range filter tooling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pick an exact level, Δ vector and memory split for a bit budget.
    Advise(AdviseArgs),
    /// Run benchmark cells and print one CSV row per cell.
    Bench(BenchArgs),
    /// Bits-per-key table: bloomRF bound, Rosetta first cut, lower bound.
    Model(ModelArgs),
    /// Zero-run histograms of a bloomRF and a classic Bloom filter.
    Scatter(ScatterArgs),
    /// Build a filter file from little-endian u64 keys.
    Build(BuildArgs),
    /// Answer a query file against a filter file, one line per query.
    Probe(ProbeArgs),
    /// Write a key file and a mixed query file.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Dist {
    Uniform,
    Normal,
    Zipfian,
}

impl Dist {
    fn resolve(self, n: u64) -> KeyDistribution {
        match self {
            Dist::Uniform => KeyDistribution::Uniform,
            Dist::Normal => KeyDistribution::normal_default(),
            Dist::Zipfian => KeyDistribution::zipfian_default(n),
        }
    }
}

#[derive(Args)]
struct AdviseArgs {
    #[arg(long, default_value_t = 64)]
    d: u32,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    bits_per_key: f64,
    /// Largest range size the layout is tuned for.
    #[arg(long, default_value_t = 1e10)]
    range: f64,
    /// Weight C of the point FPR against the range FPR.
    #[arg(long, default_value_t = 1.0)]
    point_weight: f64,
    /// Print `key=value` lines readable by `build --layout`.
    #[arg(long)]
    kv: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "bloomrf")]
    filter: Vec<FilterKind>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "uniform")]
    dist: Vec<Dist>,
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    #[arg(long, default_value_t = 100_000)]
    queries: u64,
    /// Range sizes; 1 measures point queries.
    #[arg(long, value_delimiter = ',', default_value = "16384")]
    range: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "16")]
    bits_per_key: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    d: u32,
    /// Worker threads (capped by BRF_THREADS).
    #[arg(long)]
    threads: Option<usize>,
    /// Switches to mixed insert/lookup runs on one bloomRF, one row per ratio and thread count.
    #[arg(long, value_delimiter = ',')]
    insert_ratio: Vec<f64>,
    #[arg(long)]
    delta: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Use the advisor layout for each cell's range size.
    #[arg(long)]
    advised: bool,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 64)]
    d: u32,
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    #[arg(long, value_delimiter = ',', default_value = "64,1024,16384")]
    range: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.001,0.005,0.01,0.02,0.05")]
    fpr_grid: Vec<f64>,
    /// Fixed Δ; by default log2 R clamped to 1..=7.
    #[arg(long)]
    delta: Option<u32>,
}

#[derive(Args)]
struct ScatterArgs {
    /// Existing filter file; without it a uniform workload is generated.
    #[arg(long)]
    filter: Option<PathBuf>,
    /// Keys of the filter file, needed for the Bloom comparison.
    #[arg(long)]
    keys: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    #[arg(long, default_value_t = 10.0)]
    bits_per_key: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct BuildArgs {
    /// Key file, or `-` for stdin.
    #[arg(long)]
    keys: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 64)]
    d: u32,
    #[arg(long, default_value_t = 16.0)]
    bits_per_key: f64,
    #[arg(long)]
    delta: Option<u32>,
    /// Layout file written by `advise --kv`.
    #[arg(long)]
    layout: Option<PathBuf>,
    #[arg(long)]
    mitigate: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long)]
    filter: PathBuf,
    /// Query file, or `-` for stdin.
    #[arg(long)]
    queries: String,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 64)]
    d: u32,
    #[arg(long, default_value_t = 10_000)]
    n: u64,
    #[arg(long, value_enum, default_value = "uniform")]
    dist: Dist,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    keys_out: PathBuf,
    #[arg(long)]
    queries_out: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    queries: u64,
    #[arg(long, default_value_t = 1 << 16)]
    max_range: u64,
}

fn open_input(path: &str) -> Result<Box<dyn Read>> {
    Ok(if path == "-" {
        Box::new(io::stdin().lock())
    } else {
        Box::new(BufReader::new(File::open(path).with_context(|| format!("opening {path}"))?))
    })
}

fn cmd_advise(a: &AdviseArgs) -> Result<()> {
    let budget = (a.n as f64 * a.bits_per_key).ceil() as u64;
    let start = Instant::now();
    let adv = advise(a.d, a.n, budget, a.range, a.point_weight)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    if a.kv {
        print!("{}", adv.render_kv());
    } else {
        print!("{}", adv.render_table());
        println!("advisor time  {ms:.2} ms");
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs) -> Result<bool> {
    let threads = thread_budget(a.threads);
    if !a.insert_ratio.is_empty() {
        let bpk = a.bits_per_key[0];
        println!("{}", MixedResult::CSV_HEADER);
        let mut counts = vec![1];
        if threads > 1 {
            counts.push(threads);
        }
        for &ratio in &a.insert_ratio {
            if !(0.0..=1.0).contains(&ratio) {
                bail!("insert ratio {ratio} outside [0, 1]");
            }
            for &t in &counts {
                let filter = BloomRf::new(build_config(a.d, a.n + a.queries, bpk, a.delta, None)?)?;
                let res = run_mixed(&filter, a.queries, ratio, t, a.seed);
                println!("{}", res.csv_row());
            }
        }
        return Ok(true);
    }
    let layout = match (a.advised, a.delta) {
        (true, _) => Layout::Advised,
        (false, Some(delta)) => Layout::Uniform { delta, k: a.k },
        (false, None) if a.k.is_some() => Layout::Uniform { delta: bloomrf::filter::DEFAULT_DELTA, k: a.k },
        _ => Layout::Basic,
    };
    let mut cells = Vec::new();
    for &filter in &a.filter {
        for &dist in &a.dist {
            for &range in &a.range {
                for &bpk in &a.bits_per_key {
                    cells.push(BenchCell {
                        filter,
                        distribution: dist.resolve(a.n),
                        d: a.d,
                        n: a.n,
                        queries: a.queries,
                        range_size: range,
                        bits_per_key: bpk,
                        seed: a.seed,
                        layout,
                    });
                }
            }
        }
    }
    println!("{}", csv_header());
    let mut ok = true;
    for (cell, res) in cells.iter().zip(run_cells(&cells, threads)?) {
        match res {
            Ok(rec) => println!("{}", rec.csv_row()),
            Err(e) => {
                ok = false;
                eprintln!("cell {} range={} bpk={}: {e:#}", cell.filter.name(), cell.range_size, cell.bits_per_key);
            }
        }
    }
    Ok(ok)
}

fn cmd_model(a: &ModelArgs) -> Result<()> {
    print!("{}", render(&model_table(a.d, a.n, &a.range, &a.fpr_grid, a.delta)?));
    Ok(())
}

fn cmd_scatter(a: &ScatterArgs) -> Result<()> {
    let (filter, keys) = match &a.filter {
        Some(path) => {
            let f = BloomRf::read_from(BufReader::new(File::open(path)?))?;
            let keys = match &a.keys {
                Some(k) => Some(read_u64s(BufReader::new(File::open(k)?))?),
                None => None,
            };
            (f, keys)
        }
        None => {
            let mut spec = WorkloadSpec::new(KeyDistribution::Uniform, 64, a.n);
            spec.seed = a.seed;
            let keys = bloomrf::workloads::gen_keys(&spec)?;
            let f = BloomRf::new(build_config(64, a.n, a.bits_per_key, None, None)?)?;
            keys.iter().for_each(|&k| f.insert(k));
            (f, Some(keys))
        }
    };
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(out, "{}", scatter::CSV_HEADER)?;
    write!(out, "{}", scatter::csv_rows("bloomrf", &scatter_of(filter.store())?))?;
    if let Some(keys) = keys {
        let bloom = matching_bloom(&filter, &keys)?;
        write!(out, "{}", scatter::csv_rows("bloom", &scatter_of(bloom.store())?))?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_build(a: &BuildArgs) -> Result<()> {
    let keys = read_u64s(open_input(&a.keys)?)?;
    let layout = match &a.layout {
        Some(p) => Some(std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
        None => None,
    };
    let opts = BuildOptions {
        d: a.d,
        bits_per_key: a.bits_per_key,
        delta: a.delta,
        layout,
        reverse_mitigation: a.mitigate,
        seed: a.seed,
    };
    let filter = build_filter(&keys, &opts)?;
    let mut out = BufWriter::new(File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?);
    filter.write_to(&mut out)?;
    out.flush()?;
    eprintln!("{} keys, {} bits -> {}", keys.len(), filter.config().total_bits(), a.out.display());
    Ok(())
}

fn cmd_probe(a: &ProbeArgs) -> Result<bool> {
    let filter = BloomRf::read_from(BufReader::new(
        File::open(&a.filter).with_context(|| format!("opening {}", a.filter.display()))?,
    ))?;
    let queries = read_queries(open_input(&a.queries)?)?;
    let mut out = BufWriter::new(io::stdout().lock());
    let errors = probe_all(&filter, &queries, &mut out)?;
    out.flush()?;
    if errors > 0 {
        eprintln!("{errors} of {} queries failed", queries.len());
    }
    Ok(errors == 0)
}

fn cmd_gen(a: &GenArgs) -> Result<()> {
    let mut spec = WorkloadSpec::new(a.dist.resolve(a.n), a.d, a.n);
    spec.seed = a.seed;
    let (keys, queries) = gen_artifacts(&spec, a.queries, a.max_range)?;
    write_u64s(BufWriter::new(File::create(&a.keys_out)?), &keys)?;
    if let Some(q) = &a.queries_out {
        write_queries(BufWriter::new(File::create(q)?), &queries)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Advise(a) => cmd_advise(a).map(|()| true),
        Command::Bench(a) => cmd_bench(a),
        Command::Model(a) => cmd_model(a).map(|()| true),
        Command::Scatter(a) => cmd_scatter(a).map(|()| true),
        Command::Build(a) => cmd_build(a).map(|()| true),
        Command::Probe(a) => cmd_probe(a),
        Command::Gen(a) => cmd_gen(a).map(|()| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
