use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Result;
use clap::{Parser, Subcommand};

use csg::{Algorithm, GraphModel, GraphSpec};
use csg_cli::bench::{BenchConfig, NRange};
use csg_cli::io::ValuesSpec;
use csg_cli::verify::VerifyConfig;

#[derive(Parser)]
#[command(name = "csg", version, about = "Optimal coalition structures on synergy graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated synergy graph as an edge list.
    Gen {
        /// tree | btree:<d> | ba:<k> | complete | path
        #[arg(long)]
        model: GraphModel,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one instance and print the optimal structure.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        /// seed:<s> | edgesum:<path> | table:<path>
        #[arg(long, default_value = "seed:0")]
        values: ValuesSpec,
        /// dype | dp | idp | dyce | bruteforce
        #[arg(long, default_value = "dype")]
        alg: Algorithm,
        /// Pseudotree root for dype.
        #[arg(long)]
        root: Option<usize>,
        /// Seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// JSON result document.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark grid and write raw and median CSVs.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "tree")]
        models: Vec<GraphModel>,
        /// Inclusive, e.g. 5..20
        #[arg(long)]
        n: NRange,
        /// Instances per (model, n) point.
        #[arg(long, default_value_t = 50)]
        seeds: u64,
        /// First instance seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "dype,idp,dyce")]
        algs: Vec<Algorithm>,
        /// Per-run limit in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value = "bench.csv")]
        out: PathBuf,
    },
    /// Export the coalition-structure graph of a small instance as DOT.
    Hcs {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        root: Option<usize>,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check all solvers against the exhaustive oracle.
    Verify {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn secs(t: Option<f64>) -> Result<Option<Duration>> {
    t.map(|s| Duration::try_from_secs_f64(s).map_err(|e| anyhow::anyhow!("bad timeout {s}: {e}")))
        .transpose()
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen { model, n, seed, out } => {
            let text = csg_cli::cmd_gen(&GraphSpec::new(model, n, seed), out.as_deref())?;
            if out.is_none() {
                print!("{text}");
            }
        }
        Cmd::Solve {
            graph,
            values,
            alg,
            root,
            timeout,
            out,
        } => {
            let doc = csg_cli::cmd_solve(&graph, &values, alg, root, secs(timeout)?, out.as_deref())?;
            let cs: Vec<String> = doc
                .optimal_cs
                .iter()
                .map(|p| format!("{{{}}}", p.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            println!("value {}", doc.optimal_value);
            println!("cs {}", cs.join(" "));
            println!(
                "subproblems {} subspaces {} elapsed {:.3} ms",
                doc.counters.subproblems_stored, doc.counters.subspaces_evaluated, doc.elapsed_ms
            );
        }
        Cmd::Bench {
            models,
            n,
            seeds,
            seed,
            algs,
            timeout,
            jobs,
            out,
        } => {
            let cfg = BenchConfig {
                models,
                sizes: n,
                seeds,
                base_seed: seed,
                algs,
                timeout: secs(timeout)?,
                jobs,
            };
            let rows = csg_cli::cmd_bench(&cfg, &out)?;
            let timeouts = rows.iter().filter(|r| r.timeout).count();
            println!(
                "{} runs ({timeouts} timed out) written to {}",
                rows.len(),
                out.display()
            );
        }
        Cmd::Hcs { graph, root, out } => {
            let dot = csg_cli::cmd_hcs(&graph, root, out.as_deref())?;
            if out.is_none() {
                print!("{dot}");
            }
        }
        Cmd::Verify { n, instances, seed } => {
            let report = csg_cli::cmd_verify(&VerifyConfig {
                n_max: n,
                instances,
                seed,
            })?;
            print!("{}", report.render());
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
