//! Command-line front end: solve one instance, run a seeded batch, compute
//! the exhaustive optimum of a small instance, or evaluate the buy-none bound.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use stochastic_steiner::evfw::{buy_none, evfw_run};
use stochastic_steiner::io::batch::{run_batch, BatchOptions, CSV_HEADER};
use stochastic_steiner::io::{read_instance_file, write_batch_csv, write_solution, BatchRow};
use stochastic_steiner::oracle::exact_sstp;
use stochastic_steiner::steiner::MstApprox;
use stochastic_steiner::{BrkgaParams, EdgeSet, EvfwParams, StochasticSolution};

#[derive(Parser)]
#[command(name = "sstp", version, about = "Two-stage stochastic Steiner tree solver")]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance with one seed.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Solution listing destination; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Writes the run record as CSV.
        #[arg(long)]
        record: Option<PathBuf>,
        /// Known optimum, enables the gap column.
        #[arg(long)]
        opt: Option<f64>,
        /// Record wall time as 0.
        #[arg(long)]
        no_timing: bool,
    },
    /// Run every `.sstp` file of a directory over a list of seeds.
    Batch {
        dir: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Seed list such as `1-20` or `1,4,9`.
        #[arg(long, default_value = "1-20")]
        seeds: String,
        #[arg(long)]
        output: PathBuf,
        /// CSV file with `instance_id,opt` rows.
        #[arg(long)]
        optima: Option<PathBuf>,
        /// Record wall times as 0.
        #[arg(long)]
        no_timing: bool,
    },
    /// Exhaustive optimum of a small instance.
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cost of buying nothing in the first stage.
    Buynone {
        instance: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Perturbation intensity.
    #[arg(long, default_value_t = 0.7)]
    alpha: f64,
    /// Population size.
    #[arg(long, default_value_t = 25)]
    pop: usize,
    /// Generations per scenario run.
    #[arg(long, default_value_t = 25)]
    gens: usize,
    #[arg(long, default_value_t = 0.1)]
    elite_frac: f64,
    #[arg(long, default_value_t = 0.2)]
    mutant_frac: f64,
    /// Probability of inheriting from the elite parent.
    #[arg(long, default_value_t = 0.4)]
    rho_e: f64,
    /// Relative improvement that resets the convergence counters.
    #[arg(long, default_value_t = 0.001)]
    min_improve: f64,
    #[arg(long, default_value_t = 3)]
    max_since_best: u32,
    #[arg(long, default_value_t = 2)]
    max_since_improve: u32,
    /// Generation multiplier of the final pass.
    #[arg(long, default_value_t = 3)]
    tail_factor: u32,
    /// Seconds; checked between iterations.
    #[arg(long)]
    time_limit: Option<f64>,
}

impl ParamArgs {
    fn build(&self) -> Result<(EvfwParams, BrkgaParams)> {
        let time_limit = match self.time_limit {
            Some(t) if !(t.is_finite() && t >= 0.0) => bail!("--time-limit must be a non-negative number of seconds"),
            t => t.map(Duration::from_secs_f64),
        };
        let evfw = EvfwParams {
            alpha: self.alpha,
            min_improve: self.min_improve,
            max_since_best: self.max_since_best,
            max_since_improve: self.max_since_improve,
            tail_factor: self.tail_factor,
            time_limit,
        };
        let brkga = BrkgaParams::from_fractions(self.pop, self.elite_frac, self.mutant_frac, self.rho_e, self.gens);
        evfw.validate()?;
        brkga.validate()?;
        Ok((evfw, brkga))
    }
}

fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
                if a > b {
                    bail!("empty seed range {part}");
                }
                seeds.extend(a..=b);
            }
            None => seeds.push(part.parse().with_context(|| format!("invalid seed '{part}'"))?),
        }
    }
    Ok(seeds)
}

fn read_optima(path: &Path) -> Result<BTreeMap<String, f64>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_path(path)?;
    let mut optima = BTreeMap::new();
    for row in reader.records() {
        let row = row?;
        let (Some(id), Some(value)) = (row.get(0), row.get(1)) else {
            bail!("optima rows need two fields");
        };
        if id == "instance_id" {
            continue;
        }
        optima.insert(id.to_string(), value.trim().parse()?);
    }
    Ok(optima)
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "sstp") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Solve {
            instance,
            params,
            seed,
            output,
            record,
            opt,
            no_timing,
        } => {
            let (evfw, brkga) = params.build()?;
            let inst = read_instance_file(&instance).with_context(|| format!("loading {}", instance.display()))?;
            let outcome = evfw_run(&inst, &evfw, &brkga, seed)?;
            let mut out = sink(output.as_deref())?;
            write_solution(&outcome.solution, &inst, &mut out)?;
            out.flush()?;
            let mut rec = outcome.record(&stochastic_steiner::io::batch::instance_id(&instance), seed, opt)?;
            if no_timing {
                rec.wall_seconds = 0.0;
            }
            if let Some(path) = record {
                write_batch_csv(&[BatchRow::Run(rec.clone())], BufWriter::new(File::create(&path)?))?;
            }
            eprintln!(
                "cost {:.4}, buy_none {:.4}, delta_c {:.4}%, {} iterations, {} heuristic calls",
                rec.cost, rec.buy_none_cost, rec.delta_c_percent, rec.iterations, rec.heuristic_calls
            );
        }
        Command::Batch {
            dir,
            params,
            seeds,
            output,
            optima,
            no_timing,
        } => {
            let (evfw, brkga) = params.build()?;
            let seeds = parse_seeds(&seeds)?;
            let files = instance_files(&dir)?;
            let options = BatchOptions {
                optima: optima.as_deref().map(read_optima).transpose()?.unwrap_or_default(),
                no_timing,
            };
            let rows = run_batch(&files, &seeds, &evfw, &brkga, &options, &output)?;
            let failures = rows.iter().filter(|r| matches!(r, BatchRow::Failure { .. })).count();
            eprintln!(
                "{} instances, {} seeds, {} failures; columns: {}",
                files.len(),
                seeds.len(),
                failures,
                CSV_HEADER.join(",")
            );
        }
        Command::Oracle { instance, output } => {
            let inst = read_instance_file(&instance).with_context(|| format!("loading {}", instance.display()))?;
            let sol = exact_sstp(&inst)?;
            let mut out = sink(output.as_deref())?;
            write_solution(&sol, &inst, &mut out)?;
            out.flush()?;
        }
        Command::Buynone { instance, output } => {
            let inst = read_instance_file(&instance).with_context(|| format!("loading {}", instance.display()))?;
            let none = buy_none(&inst, &MstApprox)?;
            let sol = StochasticSolution::new(&inst, EdgeSet::new(), none.per_scenario)?;
            let mut out = sink(output.as_deref())?;
            write_solution(&sol, &inst, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be >= 1");
        }
        pool = pool.num_threads(n);
    }
    pool.build()?.install(|| run(cli.command))
}
