//! The `sparsecount` command line. Every run prints one JSON report.
//!
//! Exit codes: 0 success, 1 check failed, 2 refused (scale limit, failed
//! precondition, infeasible parameters), 3 usage or malformed input.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::calculators::{erdos_rogers_shape, geometry_graph_params, no_sparse_host_params};
use crate::container::{fingerprint, rebuild_fingerprint};
use crate::counting::{count_sparse_sets, enumerate_sparse_sets, verify_count_bound, SparsityQuery};
use crate::density::{is_locally_dense_exact, DensityParams};
use crate::error::Error;
use crate::generators::GeneratorSpec;
use crate::graph::{Graph, VertexSet};
use crate::limits::ScaleLimits;
use crate::ratio::parse_big_ratio;
use crate::sparsifier::{sample_sparsifier, VerifyMode};
use crate::suites::{container_step_exhaustive, run_suite, Sweep};

pub const SCHEMA_ID: &str = "sparsecount-report/1";

pub const ENV_EXHAUSTIVE_N: &str = "SPARSECOUNT_MAX_EXHAUSTIVE_N";
pub const ENV_COUNT_SUBSETS: &str = "SPARSECOUNT_MAX_COUNT_SUBSETS";
pub const ENV_BAD_SET_SUBSETS: &str = "SPARSECOUNT_MAX_BAD_SET_SUBSETS";

#[derive(Parser, Debug)]
#[command(name = "sparsecount", version, about = "Sparse induced subgraph counting in locally dense graphs")]
struct Cli {
    /// Leave wall time out of the report so output is byte-reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Edge-list file: header `n m`, then `m` lines `u v`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generator spec, e.g. `gnp:10:0.5:7`, `multipartite:3:3:3`, `blowup:2:cycle:5`.
    #[arg(long)]
    gen: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct Density {
    /// Size fraction ζ, as `1/4` or `0.25`.
    #[arg(long)]
    zeta: String,
    /// Edge density d, as `1/2` or `0.5`.
    #[arg(long)]
    d: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide (ζ, d)-density exhaustively.
    CheckDensity {
        #[command(flatten)]
        graph: GraphSource,
        #[command(flatten)]
        density: Density,
    },
    /// Brute-force count of sparse s-sets checked against the container bound.
    VerifyCountBound {
        #[command(flatten)]
        graph: GraphSource,
        #[command(flatten)]
        density: Density,
        /// Degree bound D: sets with maximum induced degree below D are sparse.
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        s: usize,
    },
    /// Sample a vertex subset with no sparse large sets.
    Sparsify {
        #[command(flatten)]
        graph: GraphSource,
        #[command(flatten)]
        density: Density,
        #[arg(long)]
        bound: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        max_attempts: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        verify_mode: ModeArg,
        /// Trials for spot-check mode.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Evaluate closed-form parameter chains.
    Params {
        #[command(subcommand)]
        which: ParamsCommand,
    },
    /// Run a property suite over a G(n, p) sweep.
    Suite {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(crate::suites::SUITE_NAMES))]
        suite: String,
        /// `n=8..12,p=0.5:0.7,seeds=0..49`.
        #[arg(long, required_unless_present = "exhaustive")]
        sweep: Option<String>,
        /// Every graph up to isomorphism on at most this many vertices
        /// (container-step only).
        #[arg(long, conflicts_with = "sweep")]
        exhaustive: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count (or list) sparse s-sets.
    Count {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        s: usize,
        /// Include the sets themselves.
        #[arg(long)]
        list: bool,
    },
    /// Fingerprint and container of one sparse set, with a rebuild check.
    Fingerprint {
        #[command(flatten)]
        graph: GraphSource,
        #[command(flatten)]
        density: Density,
        #[arg(long)]
        bound: usize,
        /// Comma-separated vertex ids.
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum ParamsCommand {
    /// Vertex count and density of the finite-geometry host graph.
    Geometry {
        #[arg(long)]
        q: String,
    },
    /// Host-graph parameters fed through the sampling chain.
    NoSparse {
        #[arg(long)]
        q: String,
        #[arg(long)]
        bound: String,
    },
    /// Exponents and shape values of the Erdős–Rogers upper bound.
    ErdosRogers {
        #[arg(long)]
        n: String,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "1")]
        c: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModeArg {
    Auto,
    Exact,
    BadSet,
    SpotCheck,
}

/// What a finished command hands back to the report writer.
struct Outcome {
    input: Value,
    parameters: Value,
    seed: Option<u64>,
    result: Value,
    exit_code: i32,
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        e if e.is_refusal() => 2,
        Error::Structural(_) => 1,
        _ => 3,
    }
}

fn status_for(code: i32) -> &'static str {
    match code {
        0 => "ok",
        1 => "fail",
        2 => "refused",
        _ => "error",
    }
}

fn conventions() -> Value {
    json!({
        "logarithms": "base 2",
        "size_threshold": "ceil(zeta*n), at least 1",
        "degree_threshold": "ceil(|C|*d/2)",
        "step_length": "ceil(2*|C|*D/delta)",
        "f_target": "ceil(4D/d)*ceil(log2(1/zeta))",
        "sparsifier_f": "ceil(8D/d)*ceil(log2(1/zeta))",
        "sparsifier_s": "2*f*ceil(log2 n)",
        "tie_break": "smallest vertex id",
    })
}

struct LimitsEcho {
    limits: ScaleLimits,
    sources: Vec<(&'static str, &'static str)>,
}

fn limits_from_env() -> Result<LimitsEcho, String> {
    let mut limits = ScaleLimits::default();
    let mut sources = Vec::new();
    let mut read = |var: &'static str, slot: &mut u128| -> Result<(), String> {
        match std::env::var(var) {
            Ok(text) => {
                *slot = text
                    .trim()
                    .parse::<u64>()
                    .map(u128::from)
                    .map_err(|_| format!("{var}={text:?} is not a non-negative integer"))?;
                sources.push((var, "env"));
            }
            Err(_) => sources.push((var, "default")),
        }
        Ok(())
    };
    let mut exhaustive = limits.exhaustive_max_n as u128;
    read(ENV_EXHAUSTIVE_N, &mut exhaustive)?;
    limits.exhaustive_max_n = exhaustive.min(usize::MAX as u128) as usize;
    read(ENV_COUNT_SUBSETS, &mut limits.count_max_subsets)?;
    read(ENV_BAD_SET_SUBSETS, &mut limits.bad_set_max_subsets)?;
    Ok(LimitsEcho { limits, sources })
}

impl LimitsEcho {
    fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(&self.limits).expect("limits serialize");
        let sources: serde_json::Map<String, Value> = self
            .sources
            .iter()
            .map(|(k, s)| (k.to_string(), Value::from(*s)))
            .collect();
        v["source"] = Value::Object(sources);
        v
    }
}

fn load_graph(src: &GraphSource) -> Result<(Graph, Value), Error> {
    if let Some(path) = &src.input {
        let file = File::open(path)
            .map_err(|e| Error::Malformed(format!("cannot open {}: {e}", path.display())))?;
        let g = Graph::read_edge_list(BufReader::new(file))?;
        let input = json!({"file": path.display().to_string(), "n": g.n(), "m": g.edge_count()});
        Ok((g, input))
    } else {
        let text = src.gen.as_deref().expect("clap enforces one source");
        let spec: GeneratorSpec = text.parse()?;
        let g = spec.build()?;
        let input = json!({"gen": spec.to_string(), "n": g.n(), "m": g.edge_count()});
        Ok((g, input))
    }
}

fn density_of(d: &Density) -> Result<DensityParams, Error> {
    DensityParams::parse(&d.zeta, &d.d)
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report payloads serialize")
}

fn parse_big_uint(name: &str, text: &str) -> Result<BigUint, Error> {
    text.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("--{name} {text:?} is not a non-negative integer")))
}

#[allow(clippy::result_large_err)]
fn run_command(cmd: &Command, limits: &ScaleLimits) -> Result<Outcome, (Value, Value, Error)> {
    let none = || (Value::Null, Value::Null);
    match cmd {
        Command::CheckDensity { graph, density } => {
            let (g, input) = load_graph(graph).map_err(|e| (Value::Null, Value::Null, e))?;
            let p = density_of(density).map_err(|e| (input.clone(), Value::Null, e))?;
            let parameters = json!({"density": p, "size_threshold": p.size_threshold(g.n())});
            let verdict = is_locally_dense_exact(&g, &p, limits)
                .map_err(|e| (input.clone(), parameters.clone(), e))?;
            let mut result = to_json(&verdict);
            if let Some(w) = &verdict.witness {
                result["witness_edges"] = json!(g.edge_count_in(w));
            }
            Ok(Outcome {
                exit_code: if verdict.holds { 0 } else { 1 },
                input,
                parameters,
                seed: None,
                result,
            })
        }
        Command::VerifyCountBound { graph, density, bound, s } => {
            let (g, input) = load_graph(graph).map_err(|e| (Value::Null, Value::Null, e))?;
            let p = density_of(density).map_err(|e| (input.clone(), Value::Null, e))?;
            let parameters = json!({"density": p, "bound": bound, "s": s});
            let cert = verify_count_bound(&g, &p, *bound, *s, limits)
                .map_err(|e| (input.clone(), parameters.clone(), e))?;
            Ok(Outcome {
                exit_code: if cert.holds { 0 } else { 1 },
                input,
                parameters,
                seed: None,
                result: to_json(&cert),
            })
        }
        Command::Sparsify {
            graph,
            density,
            bound,
            seed,
            max_attempts,
            verify_mode,
            trials,
        } => {
            let (g, input) = load_graph(graph).map_err(|e| (Value::Null, Value::Null, e))?;
            let p = density_of(density).map_err(|e| (input.clone(), Value::Null, e))?;
            let mode = match verify_mode {
                ModeArg::Auto => None,
                ModeArg::Exact => Some(VerifyMode::Exact),
                ModeArg::BadSet => Some(VerifyMode::BadSet),
                ModeArg::SpotCheck => Some(VerifyMode::SpotCheck {
                    trials: *trials,
                    seed: *seed,
                }),
            };
            let parameters = json!({
                "density": p,
                "bound": bound,
                "max_attempts": max_attempts,
                "verify_mode": format!("{verify_mode:?}"),
                "trials": trials,
            });
            let r = sample_sparsifier(&g, &p, *bound, *seed, *max_attempts, mode, limits)
                .map_err(|e| (input.clone(), parameters.clone(), e))?;
            Ok(Outcome {
                exit_code: if r.accepted { 0 } else { 1 },
                input,
                parameters,
                seed: Some(*seed),
                result: to_json(&r),
            })
        }
        Command::Params { which } => {
            let wrap = |e| {
                let (a, b) = none();
                (a, b, e)
            };
            let (parameters, result) = match which {
                ParamsCommand::Geometry { q } => {
                    let q = parse_big_uint("q", q).map_err(wrap)?;
                    (json!({"q": q.to_string()}), to_json(&geometry_graph_params(&q).map_err(wrap)?))
                }
                ParamsCommand::NoSparse { q, bound } => {
                    let q = parse_big_uint("q", q).map_err(wrap)?;
                    let bound = parse_big_uint("bound", bound).map_err(wrap)?;
                    (
                        json!({"q": q.to_string(), "bound": bound.to_string()}),
                        to_json(&no_sparse_host_params(&q, &bound).map_err(wrap)?),
                    )
                }
                ParamsCommand::ErdosRogers { n, alpha, c } => {
                    let n = parse_big_uint("n", n).map_err(wrap)?;
                    let alpha = parse_big_ratio(alpha).map_err(wrap)?;
                    let c = parse_big_ratio(c).map_err(wrap)?;
                    let shape = erdos_rogers_shape(&n, &alpha, &c).map_err(wrap)?;
                    (
                        json!({"n": shape.n, "alpha": shape.alpha, "c": shape.c}),
                        to_json(&shape),
                    )
                }
            };
            Ok(Outcome {
                input: Value::Null,
                parameters,
                seed: None,
                result,
                exit_code: 0,
            })
        }
        Command::Suite { suite, sweep, exhaustive, seed } => {
            let wrap = |e| {
                let (a, b) = none();
                (a, b, e)
            };
            let (report, input) = match (sweep, exhaustive) {
                (_, Some(max_n)) => {
                    if suite != "container-step" {
                        return Err(wrap(Error::InvalidParameter(
                            "--exhaustive is only available for the container-step suite".into(),
                        )));
                    }
                    if *max_n > 8 {
                        return Err(wrap(Error::ScaleLimit {
                            what: "exhaustive graph enumeration",
                            requested: format!("n <= {max_n}"),
                            limit: "n <= 8".into(),
                        }));
                    }
                    (container_step_exhaustive(*max_n), json!({"exhaustive": max_n}))
                }
                (Some(text), None) => {
                    let sw: Sweep = text.parse().map_err(wrap)?;
                    let instances = sw.instances().map_err(wrap)?;
                    let report = run_suite(suite, &instances, *seed, limits).map_err(wrap)?;
                    (report, json!({"sweep": text, "expanded": sw}))
                }
                (None, None) => unreachable!("clap requires one of --sweep and --exhaustive"),
            };
            Ok(Outcome {
                exit_code: if report.passed() { 0 } else { 1 },
                input,
                parameters: json!({"suite": suite}),
                seed: Some(*seed),
                result: to_json(&report),
            })
        }
        Command::Count { graph, bound, s, list } => {
            let (g, input) = load_graph(graph).map_err(|e| (Value::Null, Value::Null, e))?;
            let parameters = json!({"bound": bound, "s": s, "list": list});
            let fail = |e| (input.clone(), parameters.clone(), e);
            let q = SparsityQuery::new(*s, *bound).map_err(fail)?;
            let result = if *list {
                let sets: Vec<VertexSet> = enumerate_sparse_sets(&g, &q, limits).map_err(fail)?.collect();
                json!({"count": sets.len().to_string(), "sets": sets})
            } else {
                json!({"count": count_sparse_sets(&g, &q, limits).map_err(fail)?.to_string()})
            };
            Ok(Outcome {
                input,
                parameters,
                seed: None,
                result,
                exit_code: 0,
            })
        }
        Command::Fingerprint { graph, density, bound, set } => {
            let (g, input) = load_graph(graph).map_err(|e| (Value::Null, Value::Null, e))?;
            let p = density_of(density).map_err(|e| (input.clone(), Value::Null, e))?;
            let parameters = json!({"density": p, "bound": bound, "set": set});
            let fail = |e| (input.clone(), parameters.clone(), e);
            let u = VertexSet::from_ids(g.n(), set.iter().copied()).map_err(fail)?;
            let fp = fingerprint(&g, &u, &p, *bound).map_err(fail)?;
            let rebuilt = rebuild_fingerprint(&g, &fp, &p, *bound).map_err(fail)?;
            let rebuild_ok = rebuilt == fp.container;
            let mut result = to_json(&fp);
            result["rebuild_matches"] = json!(rebuild_ok);
            Ok(Outcome {
                exit_code: if rebuild_ok && fp.covers_u { 0 } else { 1 },
                input,
                parameters,
                seed: None,
                result,
            })
        }
    }
}

fn quote(arg: &str) -> String {
    if !arg.is_empty() && arg.chars().all(|c| c.is_ascii_alphanumeric() || "-_=.,:/+".contains(c)) {
        arg.to_string()
    } else {
        format!("'{}'", arg.replace('\'', r"'\''"))
    }
}

/// Result of one CLI invocation: text for stdout and stderr plus the exit code.
pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Run { stdout: text, stderr: String::new(), exit_code: 0 }
            } else {
                Run { stdout: String::new(), stderr: text, exit_code: 3 }
            };
        }
    };
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| quote(&a.to_string_lossy()))
        .collect();
    let start = Instant::now();
    let limits = match limits_from_env() {
        Ok(l) => l,
        Err(msg) => {
            return Run {
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
                exit_code: 3,
            }
        }
    };
    let (input, parameters, seed, result, error, exit_code) = match run_command(&cli.command, &limits.limits) {
        Ok(o) => (o.input, o.parameters, o.seed, o.result, None, o.exit_code),
        Err((input, parameters, e)) => {
            let code = exit_code_for(&e);
            (input, parameters, None, Value::Null, Some(e.to_string()), code)
        }
    };
    let mut report = json!({
        "schema": SCHEMA_ID,
        "version": env!("CARGO_PKG_VERSION"),
        "command": echo.join(" "),
        "input": input,
        "conventions": conventions(),
        "limits": limits.to_json(),
        "parameters": parameters,
        "seed": seed,
        "result": result,
        "error": error,
        "status": status_for(exit_code),
        "exit_code": exit_code,
    });
    if !cli.no_timing {
        report["wall_time_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    let stderr = match report["error"].as_str() {
        Some(msg) => format!("error: {msg}\n"),
        None => String::new(),
    };
    Run {
        stdout: serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        stderr,
        exit_code,
    }
}
