//! `qclique` — synthesize, simulate, and solve Grover clique-search circuits.
//!
//! Four subcommands cover the pipeline end to end: `synth` builds the circuit
//! for a (graph, k) instance and emits OpenQASM 2.0 with a cost report,
//! `simulate` runs it on the exact statevector simulator and ranks the
//! measured input states, `solve` drives the descending-k maximum-clique
//! search, and `classical` exposes the brute-force enumerator used as ground
//! truth.
//!
//! Results are single-line JSON on stdout (`--pretty` renders tables
//! instead); identical inputs and seeds produce byte-identical output. Exit
//! codes: 0 success, 2 input error, 3 resource error.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qclique_core::{
    bits_per_vertex, build_grover, emit_qasm, encode_combination, enumerate_cliques,
    max_clique_classical, measure_inputs, parse_graph, run_with_cap, solve_max_clique_with,
    CostReport, DecompositionPolicy, Graph, GraphFormat, KAttempt, KOutcome, MeasurementReport,
    SimError, SolveOptions, DEFAULT_QUBIT_CAP,
};

/// Environment variable overriding the default qubit cap.
const QUBIT_CAP_ENV: &str = "QCLIQUE_QUBIT_CAP";

#[derive(Parser)]
#[command(name = "qclique", version, about = "Grover-search circuits for k-clique and maximum clique")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the Grover circuit for a k-clique search and emit OpenQASM 2.0.
    Synth(SynthArgs),
    /// Run the circuit on the exact simulator and rank measured input states.
    Simulate(SimulateArgs),
    /// Find a maximum clique by trying k from n downward.
    Solve(SolveArgs),
    /// Enumerate cliques classically (ground truth for the quantum pipeline).
    Classical(ClassicalArgs),
}

/// Graph-file argument shared by every subcommand.
#[derive(Args)]
struct GraphArg {
    /// Path to the graph file.
    graph_file: PathBuf,
    /// Graph format; default is inferred from the file extension.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// `n;` header then comma-separated `u-v` pairs.
    EdgeList,
    /// 0/1 adjacency matrix, one row per line.
    Matrix,
    /// DIMACS: `p edge n m` header and 1-based `e u v` lines.
    Dimacs,
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::EdgeList => GraphFormat::EdgeList,
            FormatArg::Matrix => GraphFormat::AdjacencyMatrix,
            FormatArg::Dimacs => GraphFormat::Dimacs,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    /// Expand each multi-controlled gate into ccx v-chains in place.
    Inline,
    /// Declare one composite `mcxN` gate per arity and invoke it.
    Macro,
}

impl From<PolicyArg> for DecompositionPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Inline => DecompositionPolicy::Inline,
            PolicyArg::Macro => DecompositionPolicy::Macro,
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Clique size to search for (2 ≤ k ≤ n).
    k: usize,
    /// How multi-controlled gates appear in the emitted QASM.
    #[arg(long, value_enum, default_value = "inline")]
    policy: PolicyArg,
    /// Write the QASM here instead of inlining it in the JSON output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Render a table instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Clique size to search for (2 ≤ k ≤ n).
    k: usize,
    /// Grover iteration count; default is the floor(π/4·√(N/M)) optimum.
    #[arg(long)]
    iterations: Option<u64>,
    /// Also draw this many samples from the exact distribution.
    #[arg(long)]
    shots: Option<u64>,
    /// Seed for sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest statevector to allocate, in qubits.
    #[arg(long)]
    qubit_cap: Option<usize>,
    /// Render a table instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Evaluate candidate sizes on worker threads (same result, less wall time).
    #[arg(long)]
    parallel: bool,
    /// Largest statevector to allocate, in qubits.
    #[arg(long)]
    qubit_cap: Option<usize>,
    /// Render a table instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct ClassicalArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// List all k-cliques; omit to report the maximum clique.
    k: Option<usize>,
    /// Render a table instead of JSON.
    #[arg(long)]
    pretty: bool,
}

/// Failure carrying the process exit code: 2 input, 3 resource, 1 internal.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn resource(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Synth(args) => cmd_synth(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Classical(args) => cmd_classical(args),
    }
}

fn load_graph(arg: &GraphArg) -> Result<Graph, CliError> {
    let format = match arg.format {
        Some(f) => f.into(),
        None => {
            let ext = arg.graph_file.extension().and_then(|e| e.to_str()).unwrap_or("");
            GraphFormat::from_extension(ext).ok_or_else(|| {
                CliError::input(format!(
                    "cannot infer a graph format from '{}'; pass --format",
                    arg.graph_file.display()
                ))
            })?
        }
    };
    let text = fs::read_to_string(&arg.graph_file)
        .map_err(|e| CliError::input(format!("{}: {e}", arg.graph_file.display())))?;
    parse_graph(&text, format)
        .map_err(|e| CliError::input(format!("{}: {e}", arg.graph_file.display())))
}

/// Cap precedence: `--qubit-cap` flag, then the environment, then the default.
fn resolve_qubit_cap(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(QUBIT_CAP_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::input(format!("{QUBIT_CAP_ENV} must be a qubit count, got {text:?}"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_QUBIT_CAP),
        Err(e) => Err(CliError::input(format!("{QUBIT_CAP_ENV}: {e}"))),
    }
}

fn sim_error(e: SimError) -> CliError {
    match e {
        SimError::QubitCapExceeded { .. } => CliError::resource(e.to_string()),
        SimError::BrokenOracle(_) => CliError::internal(e.to_string()),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string(value).map_err(|e| CliError::internal(e.to_string()))?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct SynthOutput<'a> {
    graph_hash: String,
    marked_count: usize,
    cost_report: &'a CostReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    qasm: Option<&'a str>,
}

fn cmd_synth(args: SynthArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.graph)?;
    let circuit =
        build_grover(&graph, args.k, None).map_err(|e| CliError::input(e.to_string()))?;
    let qasm = emit_qasm(&circuit, args.policy.into());
    let cost = circuit.cost_report().map_err(|e| CliError::internal(e.to_string()))?;
    let meta = circuit.metadata().expect("synthesized circuits carry metadata");

    let out_path = match &args.out {
        Some(path) => {
            fs::write(path, &qasm)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            Some(path.display().to_string())
        }
        None => None,
    };

    if args.pretty {
        let mut t = String::new();
        let _ = writeln!(t, "{:<22}{}", "vertices (n)", cost.n);
        let _ = writeln!(t, "{:<22}{}", "clique size (k)", cost.k);
        let _ = writeln!(t, "{:<22}{}", "graph hash", meta.graph_hash);
        let _ = writeln!(t, "{:<22}{}", "qubits", cost.qubit_total);
        let _ = writeln!(t, "{:<22}{}", "ancillas", cost.ancilla_count);
        let _ = writeln!(t, "{:<22}{}", "edge-MCT controls", cost.edge_mct_controls);
        let _ = writeln!(t, "{:<22}{}", "clique-MCT controls", cost.clique_mct_controls);
        let _ = writeln!(t, "{:<22}{}", "marked states", meta.marked_count);
        let _ = writeln!(
            t,
            "{:<22}{}",
            "iterations",
            cost.grover_iterations.map_or_else(|| "-".into(), |i| i.to_string())
        );
        let _ = writeln!(
            t,
            "{:<22}h={} x={} cx={} mct={}",
            "gates", cost.gate_counts.h, cost.gate_counts.x, cost.gate_counts.cx,
            cost.gate_counts.mct
        );
        let _ = writeln!(t, "{:<22}{}", "depth", cost.depth);
        let _ = writeln!(
            t,
            "{:<22}{} (saving {} gates)",
            "pruned combinations", cost.pruned_combinations, cost.gates_saved_by_pruning
        );
        print!("{t}");
        match out_path {
            Some(path) => println!("{:<22}{path}", "qasm written to"),
            None => print!("\n{qasm}"),
        }
        return Ok(());
    }

    print_json(&SynthOutput {
        graph_hash: meta.graph_hash.clone(),
        marked_count: meta.marked_count,
        cost_report: &cost,
        out: out_path.clone(),
        qasm: out_path.is_none().then_some(qasm.as_str()),
    })
}

#[derive(Serialize)]
struct SimulateOutput<'a> {
    n: usize,
    k: usize,
    iterations: Option<u64>,
    marked_probability: f64,
    #[serde(flatten)]
    report: &'a MeasurementReport,
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.graph)?;
    let circuit = build_grover(&graph, args.k, args.iterations)
        .map_err(|e| CliError::input(e.to_string()))?;
    let cap = resolve_qubit_cap(args.qubit_cap)?;
    let state = run_with_cap(&circuit, cap).map_err(sim_error)?;
    let mut report = measure_inputs(&state, args.shots, args.seed);

    // Marked rows are the classically verified clique encodings, so the
    // report never over- or under-claims solutions.
    let bits = bits_per_vertex(graph.n());
    let cliques: BTreeSet<String> = enumerate_cliques(&graph, args.k)
        .iter()
        .map(|w| encode_combination(&w.combination, bits))
        .collect();
    report.flag_marked(|s| cliques.contains(s));

    let iterations = circuit.metadata().and_then(|m| m.iterations);
    if args.pretty {
        println!(
            "n={} k={} iterations={} marked probability {:.6}",
            graph.n(),
            args.k,
            iterations.map_or_else(|| "-".into(), |i| i.to_string()),
            report.marked_probability()
        );
        let counts = report.shots.is_some();
        println!("{:<12}{:<14}{}marked", "state", "probability", if counts { "count   " } else { "" });
        for row in &report.rows {
            let count = match row.count {
                Some(c) if counts => format!("{c:<8}"),
                _ => String::new(),
            };
            println!(
                "{:<12}{:<14.9}{}{}",
                row.state,
                row.probability,
                count,
                if row.marked { "*" } else { "" }
            );
        }
        return Ok(());
    }

    print_json(&SimulateOutput {
        n: graph.n(),
        k: args.k,
        iterations,
        marked_probability: report.marked_probability(),
        report: &report,
    })
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    n: usize,
    size: usize,
    vertices: &'a [usize],
    partial: bool,
    attempts: &'a [KAttempt],
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.graph)?;
    if graph.n() == 0 {
        return Err(CliError::input("the graph has no vertices"));
    }
    let cap = resolve_qubit_cap(args.qubit_cap)?;
    let result =
        solve_max_clique_with(&graph, SolveOptions { qubit_cap: cap, parallel: args.parallel });

    if args.pretty {
        println!(
            "maximum clique {:?} size {}{}",
            result.witness.combination.vertices(),
            result.size,
            if result.partial { " (partial: larger sizes skipped)" } else { "" }
        );
        for attempt in &result.attempts {
            match &attempt.outcome {
                KOutcome::SkippedResource { qubits_needed, qubit_cap } => println!(
                    "  k={:<3}skipped: needs {qubits_needed} qubits, cap {qubit_cap}",
                    attempt.k
                ),
                KOutcome::NoWitness { top_state } => {
                    println!("  k={:<3}no witness; top state {top_state}", attempt.k)
                }
                KOutcome::Found { witness, probability } => println!(
                    "  k={:<3}found {:?} with probability {probability:.6}",
                    attempt.k,
                    witness.combination.vertices()
                ),
            }
        }
        return Ok(());
    }

    print_json(&SolveOutput {
        n: graph.n(),
        size: result.size,
        vertices: result.witness.combination.vertices(),
        partial: result.partial,
        attempts: &result.attempts,
    })
}

#[derive(Serialize)]
struct ClassicalListOutput {
    n: usize,
    k: usize,
    count: usize,
    cliques: Vec<Vec<usize>>,
    encodings: Vec<String>,
}

#[derive(Serialize)]
struct ClassicalMaxOutput<'a> {
    n: usize,
    size: usize,
    vertices: &'a [usize],
}

fn cmd_classical(args: ClassicalArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.graph)?;
    if graph.n() == 0 {
        return Err(CliError::input("the graph has no vertices"));
    }

    match args.k {
        Some(k) => {
            if k == 0 || k > graph.n() {
                return Err(CliError::input(format!(
                    "k must be between 1 and the vertex count ({}), got {k}",
                    graph.n()
                )));
            }
            let bits = bits_per_vertex(graph.n());
            let cliques = enumerate_cliques(&graph, k);
            if args.pretty {
                println!("{} {k}-clique(s) in a graph on {} vertices", cliques.len(), graph.n());
                for w in &cliques {
                    println!(
                        "  {:?}  {}",
                        w.combination.vertices(),
                        encode_combination(&w.combination, bits)
                    );
                }
                return Ok(());
            }
            print_json(&ClassicalListOutput {
                n: graph.n(),
                k,
                count: cliques.len(),
                encodings: cliques
                    .iter()
                    .map(|w| encode_combination(&w.combination, bits))
                    .collect(),
                cliques: cliques
                    .into_iter()
                    .map(|w| w.combination.vertices().to_vec())
                    .collect(),
            })
        }
        None => {
            let witness = max_clique_classical(&graph);
            if args.pretty {
                println!(
                    "maximum clique {:?} size {}",
                    witness.combination.vertices(),
                    witness.size()
                );
                return Ok(());
            }
            print_json(&ClassicalMaxOutput {
                n: graph.n(),
                size: witness.size(),
                vertices: witness.combination.vertices(),
            })
        }
    }
}
