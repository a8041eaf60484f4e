//! Grover-circuit synthesis and exact verification for k-clique and
//! maximum-clique search on undirected graphs.
//!
//! The pipeline: parse a graph ([`graph`]), synthesize a phase oracle and
//! diffusion rounds over an explicit qubit layout ([`synth`], [`circuit`]),
//! check the circuit against a dense statevector simulation and the
//! classical clique census ([`sim`]), and exchange circuits as OpenQASM 2.0
//! ([`qasm`]).

pub mod circuit;
pub mod graph;
pub mod qasm;
pub mod sim;
pub mod synth;

pub use circuit::{
    Circuit, CircuitError, CircuitMeta, CostReport, Gate, GateCounts, GateKind, QubitLayout,
};
pub use graph::{
    bits_per_vertex, combinations, decode_input_state, encode_combination, enumerate_cliques,
    is_clique, max_clique_classical, parse_graph, serialize_graph, CliqueWitness, Graph,
    GraphError, GraphFormat, VertexCombination,
};
pub use qasm::{emit_qasm, parse_qasm, DecompositionPolicy, QasmError};
pub use sim::{
    init_state, measure_inputs, phase_flip_report, phase_flip_report_with_cap, phase_flip_set,
    run, run_with_cap, uniform_prelude, MeasurementReport, MeasurementRow, PhaseFlipReport,
    SimError, Statevector, DEFAULT_QUBIT_CAP,
};
pub use synth::{
    build_activation, build_clique_detector, build_diffusion, build_grover, build_oracle,
    iteration_count, solve_max_clique, solve_max_clique_with, KAttempt, KOutcome, SolveOptions,
    SolveResult,
};
