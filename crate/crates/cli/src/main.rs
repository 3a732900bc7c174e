use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use symsets::cycles::{
    brute_force_fillers, construct_degenerate_filler, cycle_from_json, cycle_json_spec, cycle_stats,
    reduction_graph, FillerSearch,
};
use symsets::error::Error;
use symsets::ez::ez_decompose;
use symsets::levels::{graph_skeleton, verify_aufhebung, verify_lower_bound_with, Guards};
use symsets::propagraph::{
    is_propagative, min_degree, non_propagating_pair, phi_trace, phi_trace_dot, PuzzleSearch, UGraph, VertexSet,
};
use symsets::symset::{
    discrete_symset, eq_exact_symset, eq_leq_symset, eq_symset, graph_symset, representable_symset, InstanceSpec,
    StructureCodec,
};
use symsets::finset::FinSet;

#[derive(Parser)]
#[command(name = "symsets", version, about = "Experiments on finite symmetric sets")]
struct Cli {
    /// Log every check the filling algorithm performs.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Read JSON from this file instead of standard input.
    #[arg(short, long)]
    input: Option<PathBuf>,

    /// Write output to this file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Out {
    /// Write output to this file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// EZ-decomposition of a structure.
    EzDecompose(Io),

    /// Whether a graph is propagative, with a Φ-trace.
    CheckPropagative {
        #[command(flatten)]
        io: Io,
        /// Two start vertices for the trace, e.g. `3,5`.
        #[arg(long, value_delimiter = ',')]
        start: Option<Vec<usize>>,
    },

    /// Exhaustive minimum-degree threshold for propagativity.
    Puzzle {
        #[arg(long)]
        n: usize,
        /// Only examine degree-sorted labellings.
        #[arg(long)]
        up_to_iso: bool,
        /// Print the full search report as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: Out,
    },

    /// Unfillable cycle of Eq_{=l+1} and its certificate.
    LowerBound {
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 3)]
        max_level: usize,
        #[command(flatten)]
        out: Out,
    },

    /// Degenerate filler of a cycle.
    FillCycle {
        #[command(flatten)]
        io: Io,
        /// Cross-check against exhaustive filler search.
        #[arg(long)]
        oracle: bool,
    },

    /// Desk-scale check of the claimed Aufhebung of a level.
    VerifyAufhebung {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        max_k: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = Guards::default().graph_carrier)]
        graph_carrier: usize,
        #[arg(long, default_value_t = Guards::default().eq_carrier)]
        eq_carrier: usize,
        #[arg(long, default_value_t = Guards::default().exhaustive_limit)]
        exhaustive_limit: u64,
        #[arg(long, default_value_t = Guards::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = Guards::default().oracle_samples)]
        oracle_samples: usize,
        #[arg(long, default_value_t = Guards::default().seed)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },

    /// Graphviz output for a graph or for the reduction graph of a cycle.
    ExportDot {
        #[command(flatten)]
        io: Io,
        /// For graphs: draw the Φ-iteration from these two vertices.
        #[arg(long, value_delimiter = ',')]
        phi_start: Option<Vec<usize>>,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    Usage(String),
    /// Printed report plus a one-line reason.
    Domain(Value, String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

macro_rules! with_instance {
    ($spec:expr, |$m:ident| $body:expr) => {
        match $spec {
            InstanceSpec::Graph => {
                let $m = graph_symset();
                $body
            }
            InstanceSpec::Eq => {
                let $m = eq_symset();
                $body
            }
            InstanceSpec::EqLeq { l } => {
                let $m = eq_leq_symset(l)?;
                $body
            }
            InstanceSpec::EqExact { l } => {
                let $m = eq_exact_symset(l)?;
                $body
            }
            InstanceSpec::Representable { size } => {
                let $m = representable_symset(FinSet::new(size)?);
                $body
            }
            InstanceSpec::Discrete { labels } => {
                let $m = discrete_symset(labels)?;
                $body
            }
            InstanceSpec::GraphSkeleton { l } => {
                let $m = graph_skeleton(l);
                $body
            }
        }
    };
}

fn read_input(path: &Option<PathBuf>) -> CliResult<Value> {
    let text = match path {
        Some(p) => fs::read_to_string(p)?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure::Lib(e.into()))
}

fn write_text(path: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_json(path: &Option<PathBuf>, v: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(v).expect("values serialize");
    text.push('\n');
    write_text(path, &text)
}

fn is_graph_json(v: &Value) -> bool {
    v.get("n").is_some() && v.get("edges").is_some()
}

/// Accepts `{"symset", "carrier"?, "structure"}` or a bare graph.
fn structure_envelope(v: &Value) -> CliResult<(InstanceSpec, Option<usize>, Value)> {
    if is_graph_json(v) && v.get("symset").is_none() {
        return Ok((InstanceSpec::Graph, None, v.clone()));
    }
    let spec = v
        .get("symset")
        .ok_or_else(|| Error::Json("expected a \"symset\" field or a graph".into()))?;
    let spec: InstanceSpec = serde_json::from_value(spec.clone()).map_err(Error::from)?;
    let structure = v
        .get("structure")
        .cloned()
        .ok_or_else(|| Error::Json("expected a \"structure\" field".into()))?;
    let carrier = match v.get("carrier") {
        None => None,
        Some(c) => Some(c.as_u64().ok_or_else(|| Error::Json("\"carrier\" must be a natural number".into()))? as usize),
    };
    Ok((spec, carrier, structure))
}

/// Unwraps the output of `lower-bound`, which nests the cycle.
fn cycle_value(v: &Value) -> &Value {
    match v.get("cycle") {
        Some(c) if c.get("faces").is_some() => c,
        _ => v,
    }
}

fn vertex_list(s: VertexSet) -> Vec<usize> {
    s.iter().collect()
}

fn parse_graph(v: &Value) -> CliResult<UGraph> {
    let g = if v.get("symset").is_some() {
        let (spec, carrier, structure) = structure_envelope(v)?;
        if !matches!(spec, InstanceSpec::Graph | InstanceSpec::GraphSkeleton { .. }) {
            return Err(Failure::Lib(Error::InvalidArgument("expected a graph".into())));
        }
        graph_symset().decode(&structure, carrier)?
    } else {
        graph_symset().decode(v, None)?
    };
    Ok(g)
}

fn start_pair(g: &UGraph, start: &Option<Vec<usize>>) -> CliResult<VertexSet> {
    let pair = start.as_deref().unwrap_or(&[0, 1]);
    if pair.len() != 2 || pair[0] == pair[1] || pair.iter().any(|&u| u >= g.num_vertices()) {
        return Err(Failure::Usage(format!("start vertices must be two distinct vertices of the graph, got {pair:?}")));
    }
    Ok(pair.iter().copied().collect())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::EzDecompose(io) => {
            let v = read_input(&io.input)?;
            let (spec, carrier, raw) = structure_envelope(&v)?;
            let out = with_instance!(spec, |m| {
                let x = m.decode(&raw, carrier)?;
                ez_decompose(&m, &x)?.to_json(&m)
            });
            write_json(&io.output, &out)
        }
        Command::CheckPropagative { io, start } => {
            let g = parse_graph(&read_input(&io.input)?)?;
            let witness = non_propagating_pair(&g)?;
            let s = match (&start, witness) {
                (None, Some((u, v))) => [u, v].into_iter().collect(),
                _ => start_pair(&g, &start)?,
            };
            let trace: Vec<Vec<usize>> = phi_trace(&g, s).into_iter().map(vertex_list).collect();
            let out = json!({
                "propagative": is_propagative(&g)?,
                "min_degree": min_degree(&g),
                "witness_pair": witness.map(|(u, v)| vec![u, v]),
                "start": vertex_list(s),
                "trace": trace,
            });
            write_json(&io.output, &out)
        }
        Command::Puzzle { n, up_to_iso, json, out } => {
            let report = PuzzleSearch { up_to_iso, ..PuzzleSearch::default() }.run(n)?;
            if json {
                write_json(&out.output, &serde_json::to_value(&report).map_err(Error::from)?)
            } else {
                write_text(&out.output, &format!("{}\n", report.threshold))
            }
        }
        Command::LowerBound { level, max_level, out } => {
            let cert = verify_lower_bound_with(level, max_level)?;
            let v = serde_json::to_value(&cert).map_err(Error::from)?;
            write_json(&out.output, &v)?;
            if !cert.holds() {
                return Err(Failure::Check(format!("lower-bound cycle for level {level} has {} fillers", cert.fillers)));
            }
            Ok(())
        }
        Command::FillCycle { io, oracle } => {
            let input = read_input(&io.input)?;
            let v = cycle_value(&input);
            let spec = cycle_json_spec(v)?;
            let out = with_instance!(spec.clone(), |m| {
                let cycle = cycle_from_json(&m, v)?;
                let stats = cycle_stats(&m, &cycle)?;
                let stats_json = serde_json::to_value(&stats).map_err(Error::from)?;
                let built = match construct_degenerate_filler(&m, &cycle) {
                    Ok(f) => f,
                    Err(Error::Precondition(why)) => {
                        let report = json!({
                            "status": "precondition",
                            "reason": why,
                            "stats": stats_json,
                        });
                        return Err(Failure::Domain(report, format!("precondition violated: {why}")));
                    }
                    Err(e) => return Err(e.into()),
                };
                let mut out = json!({
                    "status": "filled",
                    "symset": serde_json::to_value(&spec).map_err(Error::from)?,
                    "carrier": cycle.size(),
                    "structure": m.encode(&built),
                    "stats": stats_json,
                });
                if oracle {
                    let all = brute_force_fillers(&m, &cycle, &FillerSearch::default())?;
                    let agrees = all.len() == 1 && all[0] == built;
                    out["oracle"] = json!({"fillers": all.len(), "agrees": agrees});
                    if !agrees {
                        write_json(&io.output, &out)?;
                        return Err(Failure::Check(format!(
                            "oracle found {} fillers, constructed filler {}",
                            all.len(),
                            if all.contains(&built) { "among them" } else { "not among them" }
                        )));
                    }
                }
                out
            });
            write_json(&io.output, &out)
        }
        Command::VerifyAufhebung {
            level,
            max_k,
            json,
            graph_carrier,
            eq_carrier,
            exhaustive_limit,
            samples,
            oracle_samples,
            seed,
            out,
        } => {
            let guards = Guards {
                graph_carrier,
                eq_carrier,
                exhaustive_limit,
                samples,
                oracle_samples,
                seed,
                ..Guards::default()
            };
            let report = verify_aufhebung(level, max_k, &guards)?;
            if json {
                write_json(&out.output, &serde_json::to_value(&report).map_err(Error::from)?)?;
            } else {
                write_text(&out.output, &report.table())?;
            }
            if !report.passed() {
                return Err(Failure::Check(format!("verification of level {level} failed")));
            }
            Ok(())
        }
        Command::ExportDot { io, phi_start } => {
            let input = read_input(&io.input)?;
            let v = cycle_value(&input);
            let dot = if v.get("faces").is_some() {
                let spec = cycle_json_spec(v)?;
                with_instance!(spec, |m| {
                    let cycle = cycle_from_json(&m, v)?;
                    reduction_graph(&m, &cycle)?.to_dot(cycle.carrier())
                })
            } else {
                let g = parse_graph(v)?;
                match &phi_start {
                    Some(_) => phi_trace_dot(&g, start_pair(&g, &phi_start)?),
                    None => g.to_dot("G", VertexSet::empty()),
                }
            };
            write_text(&io.output, &dot)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    env_logger::Builder::new()
        .filter_level(if cli.verbose { log::LevelFilter::Debug } else { log::LevelFilter::Warn })
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, kind, msg) = match f {
                Failure::Lib(e) if e.is_internal() => (3, "internal", e.to_string()),
                Failure::Lib(e) => (1, "domain", e.to_string()),
                Failure::Io(msg) => (1, "io", msg),
                Failure::Usage(msg) => (2, "usage", msg),
                Failure::Domain(report, msg) => {
                    let _ = write_json(&None, &report);
                    (1, "domain", msg)
                }
                Failure::Check(msg) => (3, "internal", msg),
            };
            eprintln!("error[{kind}]: {}", msg.replace('\n', " "));
            ExitCode::from(code)
        }
    }
}
