mod output;
mod tables;
mod verify;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use polygas::criteria::{Criterion, CriterionKind, FixedPointConfig};
use polygas::models::ModelDescriptor;
use polygas::ursell::{css_signed_sum, penrose_tree_count, ursell_coefficient};
use polygas::{Error, InteractionGraph, PolymerId};

use output::{emit, Format};

#[derive(Parser)]
#[command(
    name = "polygas",
    version,
    about = "Exact computations for abstract polymer gases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Relative tolerance for fixed-point iteration.
    #[arg(long, default_value_t = 1e-12, global = true)]
    tol: f64,

    #[arg(long, default_value_t = 100_000, global = true)]
    max_iter: usize,

    /// Divergence cap for fixed-point iteration.
    #[arg(long, default_value_t = 1e12, global = true)]
    cap: f64,

    /// Largest volume enumerated exactly.
    #[arg(long, default_value_t = polygas::gas::DEFAULT_ENUMERATION_CAP, global = true)]
    enum_cap: usize,

    /// Seed for randomized sweeps.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check `ρ φ(μ) ≤ μ`, or run the fixed-point iteration when `--mu` is absent.
    Criteria(CriteriaArgs),
    /// Run the fixed-point iteration from `ρ`.
    Fixpoint(CriteriaArgs),
    /// Homogeneous radius `sup μ/φ(μ)` of a builtin model.
    Radius {
        model: ModelDescriptor,
        kind: CriterionKind,
    },
    /// Ursell coefficient of a polymer sequence, with its Penrose count and
    /// connected-subgraph sum.
    Ursell {
        /// Graph file or model descriptor.
        target: String,
        /// Comma-separated polymer indices.
        sequence: String,
    },
    /// Run an invariant sweep; exits 1 on the first counterexample.
    Verify(verify::VerifyArgs),
    /// Print the reference radius tables.
    Tables,
}

#[derive(clap::Args)]
struct CriteriaArgs {
    /// Graph file or model descriptor.
    target: String,
    kind: CriterionKind,
    /// Activity: one value for all polymers, or a comma-separated list.
    #[arg(long)]
    rho: String,
    /// Certificate to check instead of iterating.
    #[arg(long)]
    mu: Option<String>,
}

/// A loaded interaction graph with a display name.
struct Target {
    graph: InteractionGraph,
    name: String,
}

fn load_target(spec: &str) -> Result<Target, Error> {
    if let Ok(model) = spec.parse::<ModelDescriptor>() {
        let inst = model
            .instance()?
            .ok_or_else(|| Error::InvalidModel(format!("{model} has no concrete graph")))?;
        return Ok(Target {
            graph: inst.graph,
            name: model.to_string(),
        });
    }
    let text = std::fs::read_to_string(Path::new(spec))
        .map_err(|e| Error::InvalidModel(format!("{spec}: {e}")))?;
    Ok(Target {
        graph: InteractionGraph::parse(&text)?,
        name: spec.to_string(),
    })
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

fn activity(s: &str, n: usize) -> Result<Vec<f64>, Error> {
    let v: Vec<f64> = parse_list(s, "activity")?;
    match v.len() {
        1 => Ok(vec![v[0]; n]),
        _ => Ok(v),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let config = FixedPointConfig {
        tol: cli.tol,
        max_iter: cli.max_iter,
        cap: cli.cap,
        record_chain: false,
    };
    if !(cli.tol > 0.0 && cli.cap > 0.0 && cli.max_iter > 0 && cli.enum_cap > 0) {
        return Err(Error::InvalidArgument(
            "tolerances, caps and limits must be positive".into(),
        ));
    }
    match cli.command {
        Command::Criteria(args) | Command::Fixpoint(args) => {
            let t = load_target(&args.target)?;
            let c = Criterion::with_cap(args.kind, &t.graph, cli.enum_cap)?;
            let rho = activity(&args.rho, t.graph.n_polymers())?;
            let value = match args.mu {
                Some(mu) => {
                    let mu = activity(&mu, t.graph.n_polymers())?;
                    json!({
                        "model": t.name,
                        "kind": args.kind,
                        "condition_holds": c.condition_holds(&rho, &mu)?,
                        "t_map": c.t_map(&rho, &mu)?,
                    })
                }
                None => {
                    let r = c.fixed_point(&rho, &config)?;
                    let mut v = serde_json::to_value(&r)?;
                    v["model"] = json!(t.name);
                    v["kind"] = json!(args.kind);
                    v
                }
            };
            emit(&value, cli.format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Radius { model, kind } => {
            let r = model.radius(kind)?;
            let value = json!({
                "model": model.to_string(),
                "kind": kind,
                "radius": r.radius,
                "radius_10": format!("{:.10}", r.radius),
                "attained": r.attained,
                "maximizer": r.maximizer,
                "numeric": r.numeric,
            });
            emit(&value, cli.format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Ursell { target, sequence } => {
            let t = load_target(&target)?;
            let seq: Vec<PolymerId> = parse_list(&sequence, "polymer")?;
            let phi = ursell_coefficient(&t.graph, &seq)?.0;
            let cg = t.graph.cluster_graph(&seq)?;
            let (penrose, css) = if cg.is_connected() {
                (penrose_tree_count(&cg)?, css_signed_sum(&cg)?)
            } else {
                (0, 0)
            };
            let sign = if seq.len() % 2 == 1 { 1 } else { -1 };
            let identity = phi == css && phi == sign * penrose as i64;
            let value = json!({
                "sequence": seq,
                "phiT": phi,
                "penrose_count": penrose,
                "css_sum": css,
                "identity_holds": identity,
            });
            emit(&value, cli.format);
            Ok(if identity {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Verify(args) => {
            let report = verify::run(&args, cli.seed, &config)?;
            let ok = report.passed;
            emit(&serde_json::to_value(&report)?, cli.format);
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Tables => {
            emit(&tables::tables()?, cli.format);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
