//! The five subcommands: solve, exact, gen, verify, bench.
//!
//! Each command reads its inputs through [`Run`] so hashes land in the
//! manifest, writes its primary artifact (stdout by default), and
//! returns a process exit code:
//!
//! * 0 — success (solve: certified local optimum; verify: all checks pass)
//! * 1 — invalid input, flag, or failed verification
//! * 2 — solve finished without a certificate (iteration cap, or
//!   first-improvement mode, which never certifies)
//! * 3 — exact oracle refused (subset cap exceeded)

use anyhow::{Context, Result};
use clap::{Args, Subcommand};

use mfl_core::analysis::verify_all;
use mfl_core::exact;
use mfl_core::generators::{
    gen_kmedian_reduction, gen_locality_gap, gen_random, RandomConfig, RandomModel,
};
use mfl_core::instance::Instance;
use mfl_core::search::{self, InitMode, SearchConfig, SearchOutcome};
use mfl_core::solution::Solution;

use crate::runio::{parse_fraction, parse_range, ratio_string, Run};

/// Resolve the worker count: explicit flag, else `MFL_JOBS`, else 1.
fn resolve_jobs(flag: Option<usize>) -> Result<usize> {
    if let Some(j) = flag {
        return Ok(j);
    }
    match std::env::var("MFL_JOBS") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("MFL_JOBS must be a positive integer, got {v:?}")),
        Err(_) => Ok(1),
    }
}

fn parse_init(s: &str) -> Result<InitMode> {
    match s {
        "at-initial" => Ok(InitMode::AtInitial),
        "random-k" => Ok(InitMode::RandomK),
        "greedy" => Ok(InitMode::Greedy),
        _ => {
            let list = s.strip_prefix("list:").ok_or_else(|| {
                anyhow::anyhow!(
                    "init must be at-initial, random-k, greedy, or list:<loc,loc,...>, got {s:?}"
                )
            })?;
            let locs: Result<Vec<usize>> = list
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<usize>()
                        .with_context(|| format!("bad location {tok:?} in init list"))
                })
                .collect();
            Ok(InitMode::Explicit(locs?))
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance JSON file (- for stdin)
    #[arg(long = "in", value_name = "PATH", default_value = "-")]
    pub input: String,
    /// Maximum swap size ρ (≥ 1; clamped to min(k, n−k) with a warning)
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub swaps: usize,
    /// Improvement threshold as NUM/DEN: accept a move only if it removes
    /// at least NUM/DEN of the current total (0/1 = any strict improvement)
    #[arg(long, value_name = "NUM/DEN", default_value = "0/1")]
    pub eps: String,
    /// Initial destinations: at-initial | random-k | greedy | list:a,b,c
    #[arg(long, value_name = "MODE", default_value = "at-initial")]
    pub init: String,
    /// Seed for random-k initialization
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    pub seed: u64,
    /// Iteration cap; hitting it exits 2 (uncertified)
    #[arg(long, value_name = "N", default_value_t = 10_000)]
    pub max_iters: u64,
    /// Worker threads for neighborhood scans (default: $MFL_JOBS, else 1)
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
    /// Solution JSON destination (- for stdout)
    #[arg(long, value_name = "PATH", default_value = "-")]
    pub out: String,
    /// Optional iteration-trace CSV (timing column; not byte-reproducible)
    #[arg(long, value_name = "PATH")]
    pub trace: Option<String>,
    /// Apply the first improving move found instead of the best one;
    /// results are never certified (exit 2)
    #[arg(long)]
    pub first_improvement: bool,
}

fn trace_csv(outcome: &SearchOutcome) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "iter",
        "delta",
        "total_before",
        "total_after",
        "X",
        "Y",
        "candidates",
        "millis",
    ])?;
    let join = |locs: &[usize]| {
        locs.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(";")
    };
    for rec in &outcome.trace {
        w.write_record([
            rec.iter.to_string(),
            rec.delta.to_string(),
            rec.total_before.to_string(),
            rec.total_after.to_string(),
            join(&rec.swap_out),
            join(&rec.swap_in),
            rec.candidates.to_string(),
            rec.millis.to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    let mut run = Run::new("solve");
    let instance = Instance::from_json_str(&run.input(&args.input)?)?;
    let (eps_num, eps_den) = parse_fraction(&args.eps)?;
    let config = SearchConfig {
        rho: args.swaps,
        eps_num,
        eps_den,
        init: parse_init(&args.init)?,
        seed: args.seed,
        max_iters: args.max_iters,
        jobs: resolve_jobs(args.jobs)?,
        first_improvement: args.first_improvement,
    };
    if args.swaps > 0 && search::clamp_rho(&instance, args.swaps) < args.swaps {
        eprintln!(
            "warning: swap size {} clamped to {} (instance has k = {}, n − k = {})",
            args.swaps,
            search::clamp_rho(&instance, args.swaps),
            instance.k(),
            instance.n() - instance.k()
        );
    }
    let outcome = search::run(&instance, &config)?;

    let body = outcome.solution.to_json_string();
    run.output(&args.out, body.as_bytes())?;
    if let Some(trace_path) = &args.trace {
        run.timing_output(trace_path, &trace_csv(&outcome)?)?;
    }
    run.finish(&args.out)?;

    if outcome.certified {
        Ok(0)
    } else {
        if outcome.hit_iteration_cap {
            eprintln!(
                "not certified: iteration cap {} reached after {} moves",
                args.max_iters, outcome.iterations
            );
        } else {
            eprintln!("not certified: first-improvement runs skip the final full scan");
        }
        Ok(2)
    }
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    /// Instance JSON file (- for stdin)
    #[arg(long = "in", value_name = "PATH", default_value = "-")]
    pub input: String,
    /// Refuse instances with more than this many k-subsets (exit 3)
    #[arg(long, value_name = "N", default_value_t = exact::DEFAULT_SUBSET_CAP)]
    pub max_subsets: u64,
    /// Worker threads (default: $MFL_JOBS, else 1)
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
    /// Solution JSON destination (- for stdout)
    #[arg(long, value_name = "PATH", default_value = "-")]
    pub out: String,
}

pub fn cmd_exact(args: &ExactArgs) -> Result<i32> {
    let mut run = Run::new("exact");
    let instance = Instance::from_json_str(&run.input(&args.input)?)?;
    let jobs = resolve_jobs(args.jobs)?;
    let result = match exact::brute_force_opt(&instance, args.max_subsets, jobs) {
        Ok(r) => r,
        Err(e @ mfl_core::Error::SubsetCapExceeded { .. }) => {
            eprintln!("refused: {e}");
            return Ok(3);
        }
        Err(e) => return Err(e.into()),
    };
    let body = result.solution.to_json_string();
    run.output(&args.out, body.as_bytes())?;
    run.finish(&args.out)?;
    Ok(0)
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Random instance with rounded-Euclidean distances on a grid
    RandomEuclidean {
        /// Number of locations
        #[arg(long)]
        n: usize,
        /// Number of facilities
        #[arg(long)]
        k: usize,
        /// Number of clients (≤ n, sampled without replacement)
        #[arg(long)]
        clients: usize,
        /// Maximum coordinate per axis
        #[arg(long, default_value_t = 1_000)]
        coord_range: u64,
        /// Facility weights, inclusive LO,HI
        #[arg(long, value_name = "LO,HI", default_value = "1,1")]
        weights: String,
        /// Client demands, inclusive LO,HI
        #[arg(long, value_name = "LO,HI", default_value = "1,1")]
        demands: String,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance JSON destination (- for stdout)
        #[arg(long, value_name = "PATH", default_value = "-")]
        out: String,
    },
    /// Random instance from a random graph's shortest-path closure
    RandomGraph {
        /// Number of locations
        #[arg(long)]
        n: usize,
        /// Number of facilities
        #[arg(long)]
        k: usize,
        /// Number of clients (≤ n, sampled without replacement)
        #[arg(long)]
        clients: usize,
        /// Probability of each potential edge, in [0, 1]
        #[arg(long, default_value_t = 0.7)]
        density: f64,
        /// Edge costs are uniform in 1..=this
        #[arg(long, default_value_t = 20)]
        max_edge_cost: u64,
        /// Facility weights, inclusive LO,HI
        #[arg(long, value_name = "LO,HI", default_value = "1,1")]
        weights: String,
        /// Client demands, inclusive LO,HI
        #[arg(long, value_name = "LO,HI", default_value = "1,1")]
        demands: String,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance JSON destination (- for stdout)
        #[arg(long, value_name = "PATH", default_value = "-")]
        out: String,
    },
    /// Embed a k-median input as a mobile-facility instance: facilities
    /// move to the first k locations at weight 1, demands are multiplied
    Kmedian {
        /// Carrier instance JSON: its assignment metric and clients are
        /// the k-median input (- for stdin)
        #[arg(long = "in", value_name = "PATH", default_value = "-")]
        input: String,
        /// Demand multiplier
        #[arg(long = "D", value_name = "N", default_value_t = 1_000_000)]
        multiplier: u64,
        /// Number of facilities (default: the carrier's k)
        #[arg(long)]
        k: Option<usize>,
        /// Instance JSON destination (- for stdout)
        #[arg(long, value_name = "PATH", default_value = "-")]
        out: String,
    },
    /// Two-metric trap family whose local optima are d-cost times worse
    /// than the optimum yet admit no improving swap of size ≤ p
    LocalityGap {
        /// Number of facility/client pairs minus one (p ≥ 1)
        #[arg(long)]
        p: usize,
        /// Movement cost of the trap edges (the local-to-global ratio)
        #[arg(long = "D", value_name = "N", default_value_t = 1_000)]
        d_cost: u64,
        /// Large finite distance standing in for unreachable
        #[arg(long = "M", value_name = "N", default_value_t = 10_000_000_000)]
        m_cost: u64,
        /// Instance JSON destination (- for stdout)
        #[arg(long, value_name = "PATH", default_value = "-")]
        out: String,
    },
}

pub fn cmd_gen(cmd: &GenCommand) -> Result<i32> {
    let mut run = Run::new("gen");
    let (instance, out) = match cmd {
        GenCommand::RandomEuclidean {
            n,
            k,
            clients,
            coord_range,
            weights,
            demands,
            seed,
            out,
        } => {
            let config = RandomConfig {
                n: *n,
                k: *k,
                num_clients: *clients,
                model: RandomModel::Euclidean { coord_range: *coord_range },
                weight_range: parse_range(weights)?,
                demand_range: parse_range(demands)?,
                seed: *seed,
            };
            (gen_random(&config)?, out)
        }
        GenCommand::RandomGraph {
            n,
            k,
            clients,
            density,
            max_edge_cost,
            weights,
            demands,
            seed,
            out,
        } => {
            let config = RandomConfig {
                n: *n,
                k: *k,
                num_clients: *clients,
                model: RandomModel::Graph {
                    edge_density: *density,
                    max_edge_cost: *max_edge_cost,
                },
                weight_range: parse_range(weights)?,
                demand_range: parse_range(demands)?,
                seed: *seed,
            };
            (gen_random(&config)?, out)
        }
        GenCommand::Kmedian { input, multiplier, k, out } => {
            let carrier = Instance::from_json_str(&run.input(input)?)?;
            let k = k.unwrap_or_else(|| carrier.k());
            let reduced = gen_kmedian_reduction(
                carrier.assign_metric().clone(),
                carrier.clients(),
                k,
                *multiplier,
            )?;
            (reduced, out)
        }
        GenCommand::LocalityGap { p, d_cost, m_cost, out } => {
            (gen_locality_gap(*p, *d_cost, *m_cost)?, out)
        }
    };
    let body = instance.to_json_string();
    run.output(out, body.as_bytes())?;
    run.finish(out)?;
    Ok(0)
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Instance JSON file (- for stdin)
    #[arg(long = "in", value_name = "PATH", default_value = "-")]
    pub input: String,
    /// Local solution JSON (the solution under test)
    #[arg(long, value_name = "PATH")]
    pub local: String,
    /// Reference solution JSON (typically an exact optimum)
    #[arg(long, value_name = "PATH")]
    pub reference: String,
    /// Classification threshold t (≥ 2)
    #[arg(long, value_name = "N", default_value_t = 2)]
    pub t: u64,
    /// Swap size the local solution is claimed to be optimal for; gates
    /// only the swap lower bounds, which fail if the claim is false
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub swaps: usize,
    /// Assert that the reference attains the exact optimum, enabling the
    /// end-to-end ratio check
    #[arg(long)]
    pub reference_optimal: bool,
    /// Report JSON destination (- for stdout)
    #[arg(long, value_name = "PATH", default_value = "-")]
    pub out: String,
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let mut run = Run::new("verify");
    let instance = Instance::from_json_str(&run.input(&args.input)?)?;
    let local = Solution::from_json_str(&instance, &run.input(&args.local)?)?;
    let reference = Solution::from_json_str(&instance, &run.input(&args.reference)?)?;
    let report = verify_all(
        &instance,
        &local,
        &reference,
        args.t,
        args.swaps,
        args.reference_optimal,
    )?;
    let body = report.to_json_string();
    run.output(&args.out, body.as_bytes())?;
    run.finish(&args.out)?;
    if report.pass {
        Ok(0)
    } else {
        eprintln!(
            "verification failed: {} of {} checks did not hold",
            report.checks.iter().filter(|c| !c.pass).count(),
            report.checks.len()
        );
        Ok(1)
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Number of random instances
    #[arg(long, value_name = "N", default_value_t = 30)]
    pub count: u64,
    /// Locations per instance
    #[arg(long, default_value_t = 12)]
    pub n: usize,
    /// Facilities per instance
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Clients per instance
    #[arg(long, default_value_t = 6)]
    pub clients: usize,
    /// Facility weights, inclusive LO,HI
    #[arg(long, value_name = "LO,HI", default_value = "1,3")]
    pub weights: String,
    /// Client demands, inclusive LO,HI
    #[arg(long, value_name = "LO,HI", default_value = "1,3")]
    pub demands: String,
    /// Swap sizes to benchmark, comma-separated
    #[arg(long, value_name = "R,R,...", default_value = "1,2")]
    pub rhos: String,
    /// Base RNG seed; instance i uses seed + i
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Subset cap passed to the exact oracle
    #[arg(long, value_name = "N", default_value_t = exact::DEFAULT_SUBSET_CAP)]
    pub max_subsets: u64,
    /// Worker threads (default: $MFL_JOBS, else 1)
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
    /// Results CSV destination (- for stdout)
    #[arg(long, value_name = "PATH", default_value = "-")]
    pub out: String,
}

pub fn cmd_bench(args: &BenchArgs) -> Result<i32> {
    let mut run = Run::new("bench");
    let jobs = resolve_jobs(args.jobs)?;
    let rhos: Result<Vec<usize>> = args
        .rhos
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .with_context(|| format!("bad swap size {tok:?} in --rhos"))
        })
        .collect();
    let rhos = rhos?;
    anyhow::ensure!(!rhos.is_empty(), "--rhos must name at least one swap size");

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "instance",
        "rho",
        "local_total",
        "exact_total",
        "ratio",
        "iterations",
        "wall_ms",
    ])?;
    for i in 0..args.count {
        let seed = args.seed + i;
        let config = RandomConfig {
            n: args.n,
            k: args.k,
            num_clients: args.clients,
            model: RandomModel::Graph { edge_density: 0.7, max_edge_cost: 20 },
            weight_range: parse_range(&args.weights)?,
            demand_range: parse_range(&args.demands)?,
            seed,
        };
        let instance = gen_random(&config)?;
        let exact_result = exact::brute_force_opt(&instance, args.max_subsets, jobs)?;
        for &rho in &rhos {
            let started = std::time::Instant::now();
            let outcome = search::run(
                &instance,
                &SearchConfig { rho, jobs, ..SearchConfig::default() },
            )?;
            let wall_ms = started.elapsed().as_millis();
            w.write_record([
                format!("graph-n{}-k{}-seed{}", args.n, args.k, seed),
                rho.to_string(),
                outcome.solution.total.to_string(),
                exact_result.solution.total.to_string(),
                ratio_string(
                    outcome.solution.total as u128,
                    exact_result.solution.total as u128,
                ),
                outcome.iterations.to_string(),
                wall_ms.to_string(),
            ])?;
        }
    }
    run.timing_output(&args.out, &w.into_inner()?)?;
    run.finish(&args.out)?;
    Ok(0)
}
