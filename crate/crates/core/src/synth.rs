//! Circuit synthesis: clique oracles, the diffusion operator, full Grover
//! circuits, and the hybrid maximum-clique driver.
//!
//! The oracle walks every k-combination that is a clique. Per combination it
//! activates the encoding (X on its zero bits), detects all vertex pairs into
//! edge ancillas, folds those into the clique flag, then uncomputes; one CX
//! from the flag kicks the phase onto the |-> output qubit, and a mirrored
//! copy of the compute half restores every ancilla. Non-clique combinations
//! are pruned at synthesis time and tallied in the circuit metadata.

use std::f64::consts::FRAC_PI_4;
use std::thread;

use serde::Serialize;

use crate::circuit::{Circuit, CircuitError, CircuitMeta, Gate, QubitLayout};
use crate::graph::{
    bits_per_vertex, combinations, decode_input_state, encode_combination, is_clique,
    CliqueWitness, Graph, VertexCombination,
};
use crate::sim::{self, measure_inputs, DEFAULT_QUBIT_CAP};

/// X gates that map `combination`'s encoding to the all-ones input pattern.
///
/// Applied before a detector so its MCTs fire exactly on this combination;
/// applied again afterwards to restore the register.
pub fn build_activation(combination: &VertexCombination, n: usize) -> Vec<Gate> {
    let bits = bits_per_vertex(n);
    encode_combination(combination, bits)
        .bytes()
        .enumerate()
        .filter(|&(_, bit)| bit == b'0')
        .map(|(qubit, _)| Gate::x(qubit))
        .collect()
}

/// Pair detector for an activated combination, shared by every clique block.
///
/// One MCT per slot pair (i, j), i < j in lexicographic order, controlled on
/// both slots' input qubits and targeting the edge ancilla of that pair's
/// rank; then one MCT from all edge ancillas onto the clique flag; then the
/// pair MCTs again in reverse to clear the ancillas.
pub fn build_clique_detector(layout: QubitLayout, k: usize) -> Vec<Gate> {
    let bits = layout.inputs() / k;
    let mut pair_mcts = Vec::with_capacity(layout.edge_ancillas());
    let mut rank = 0;
    for i in 0..k {
        for j in i + 1..k {
            let controls: Vec<usize> =
                (i * bits..(i + 1) * bits).chain(j * bits..(j + 1) * bits).collect();
            pair_mcts.push(Gate::mct(controls, layout.edge_ancilla(rank)));
            rank += 1;
        }
    }
    let flag_controls: Vec<usize> =
        (0..layout.edge_ancillas()).map(|x| layout.edge_ancilla(x)).collect();
    let mut gates = pair_mcts.clone();
    gates.push(Gate::mct(flag_controls, layout.clique_flag()));
    gates.extend(pair_mcts.into_iter().rev());
    gates
}

/// Phase oracle marking the k-cliques of `g`.
///
/// Layout: [activation + detector + deactivation] per clique combination,
/// one CX from the clique flag onto the output qubit, then the whole compute
/// half reversed. Every gate is self-inverse, so the reversed half is the
/// exact uncompute and the oracle returns all ancillas to zero.
pub fn build_oracle(g: &Graph, k: usize) -> Result<Circuit, CircuitError> {
    let n = g.n();
    let mut circuit = Circuit::new(n, k)?;
    let layout = circuit.layout();
    let detector = build_clique_detector(layout, k);

    let mut compute: Vec<Gate> = Vec::new();
    let mut marked = 0usize;
    let mut pruned = 0usize;
    let mut gates_saved = 0usize;
    for combination in &combinations(n, k).expect("layout admits only k >= 2") {
        let activation = build_activation(combination, n);
        if is_clique(g, combination) {
            marked += 1;
            compute.extend(activation.iter().cloned());
            compute.extend(detector.iter().cloned());
            compute.extend(activation);
        } else {
            // A naive emission would still wrap the block in activations and
            // detect the pairs that are edges; the missing pair keeps the
            // flag MCT from ever firing, so the whole block is dead weight.
            pruned += 1;
            let vs = combination.vertices();
            let present = vs
                .iter()
                .enumerate()
                .flat_map(|(i, &u)| vs[i + 1..].iter().map(move |&v| (u, v)))
                .filter(|&(u, v)| g.has_edge(u, v))
                .count();
            gates_saved += 2 * (2 * activation.len() + 2 * present + 1);
        }
    }

    let mut gates = compute.clone();
    gates.push(Gate::cx(layout.clique_flag(), layout.output()));
    gates.extend(compute.into_iter().rev());
    circuit.extend(gates)?;
    circuit.set_metadata(CircuitMeta {
        n,
        k,
        graph_hash: g.hash_hex(),
        marked_count: marked,
        iterations: None,
        no_solutions: marked == 0,
        pruned_combinations: pruned,
        gates_saved_by_pruning: gates_saved,
    });
    Ok(circuit)
}

/// Inversion about the mean over the input register.
///
/// H and X on every input sandwiching a multi-controlled Z built as
/// H - MCT - H on the last input. Realizes -(2|s><s| - I); the global phase
/// is unobservable.
pub fn build_diffusion(layout: QubitLayout) -> Vec<Gate> {
    let m = layout.inputs();
    let mut gates: Vec<Gate> = (0..m).map(Gate::h).collect();
    gates.extend((0..m).map(Gate::x));
    gates.push(Gate::h(m - 1));
    gates.push(Gate::mct((0..m - 1).collect(), m - 1));
    gates.push(Gate::h(m - 1));
    gates.extend((0..m).map(Gate::x));
    gates.extend((0..m).map(Gate::h));
    gates
}

/// Grover repetitions for a search space of `states` with `marked` solutions:
/// floor(pi/4 * sqrt(states/marked)), at least 1 while anything is marked,
/// and 0 when nothing is.
pub fn iteration_count(states: u64, marked: u64) -> u64 {
    if marked == 0 {
        return 0;
    }
    let t = (FRAC_PI_4 * (states as f64 / marked as f64).sqrt()).floor();
    if t < 1.0 {
        1
    } else {
        t as u64
    }
}

/// Auto repetition count from the input-register width, so widths past 63
/// qubits cannot overflow a shift. Saturates at u64::MAX; a circuit that
/// long is unbuildable anyway.
fn auto_iterations(input_qubits: usize, marked: usize) -> u64 {
    if marked == 0 {
        // One full pass keeps the circuit honest: simulation can confirm it
        // amplifies nothing.
        return 1;
    }
    let t = (FRAC_PI_4 * ((input_qubits as f64).exp2() / marked as f64).sqrt()).floor();
    if t < 1.0 {
        1
    } else {
        t as u64
    }
}

/// Complete Grover circuit: initialization, then `iterations` rounds of
/// oracle + diffusion. `None` picks the count from the clique census the
/// oracle synthesis already performed.
pub fn build_grover(g: &Graph, k: usize, iterations: Option<u64>) -> Result<Circuit, CircuitError> {
    let oracle = build_oracle(g, k)?;
    let layout = oracle.layout();
    let meta = oracle.metadata().expect("oracle synthesis always attaches metadata").clone();
    let t = iterations.unwrap_or_else(|| auto_iterations(layout.inputs(), meta.marked_count));

    let mut circuit = Circuit::with_layout(layout);
    circuit.extend(sim::uniform_prelude(layout))?;
    let diffusion = build_diffusion(layout);
    for _ in 0..t {
        circuit.extend(oracle.gates().iter().cloned())?;
        circuit.extend(diffusion.iter().cloned())?;
    }
    circuit.set_metadata(CircuitMeta { iterations: Some(t), ..meta });
    Ok(circuit)
}

/// Knobs for [`solve_max_clique_with`].
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Largest register the per-k simulations may allocate.
    pub qubit_cap: usize,
    /// Evaluate all candidate sizes on worker threads. The reported trace is
    /// identical to a sequential run; only wall time changes.
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { qubit_cap: DEFAULT_QUBIT_CAP, parallel: false }
    }
}

/// What happened at one candidate clique size.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum KOutcome {
    /// The register would not fit under the qubit cap; size not searched.
    SkippedResource { qubits_needed: usize, qubit_cap: usize },
    /// Searched, but the most probable measurement is not a k-clique.
    NoWitness { top_state: String },
    /// The most probable measurement decoded to a verified clique.
    Found { witness: CliqueWitness, probability: f64 },
}

/// One entry of a solve trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KAttempt {
    pub k: usize,
    #[serde(flatten)]
    pub outcome: KOutcome,
}

/// Result of the hybrid maximum-clique search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub witness: CliqueWitness,
    pub size: usize,
    /// True when a larger size was skipped for resources, so a bigger clique
    /// may exist beyond what was searched.
    pub partial: bool,
    /// Descending-k trace, ending at the size that produced the witness.
    pub attempts: Vec<KAttempt>,
}

/// Search one clique size: synthesize, simulate, measure, verify classically.
fn attempt_k(g: &Graph, k: usize, qubit_cap: usize) -> KAttempt {
    let layout = QubitLayout::for_problem(g.n(), k).expect("2 <= k <= n in the solve loop");
    if layout.total() > qubit_cap {
        return KAttempt {
            k,
            outcome: KOutcome::SkippedResource { qubits_needed: layout.total(), qubit_cap },
        };
    }
    let circuit = build_grover(g, k, None).expect("layout already validated");
    let state = sim::run_with_cap(&circuit, qubit_cap).expect("cap checked before building");
    let report = measure_inputs(&state, None, 0);
    let top = &report.rows[0];
    let decoded = decode_input_state(&top.state, k, bits_per_vertex(g.n()), g.n());
    let outcome = match decoded {
        Some(combination) if is_clique(g, &combination) => KOutcome::Found {
            witness: CliqueWitness { combination },
            probability: top.probability,
        },
        _ => KOutcome::NoWitness { top_state: top.state.clone() },
    };
    KAttempt { k, outcome }
}

/// Hybrid maximum-clique search with default options.
pub fn solve_max_clique(g: &Graph) -> SolveResult {
    solve_max_clique_with(g, SolveOptions::default())
}

/// Try k = n down to 2; the first verified witness wins. Sizes whose register
/// exceeds the cap are skipped and flag the result as partial. When nothing
/// verifies, a single vertex is still a clique.
pub fn solve_max_clique_with(g: &Graph, options: SolveOptions) -> SolveResult {
    let ks: Vec<usize> = (2..=g.n()).rev().collect();
    let mut attempts: Vec<KAttempt> = if options.parallel {
        thread::scope(|scope| {
            let handles: Vec<_> = ks
                .iter()
                .map(|&k| scope.spawn(move || attempt_k(g, k, options.qubit_cap)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("search thread panicked")).collect()
        })
    } else {
        let mut out = Vec::new();
        for &k in &ks {
            let attempt = attempt_k(g, k, options.qubit_cap);
            let found = matches!(attempt.outcome, KOutcome::Found { .. });
            out.push(attempt);
            if found {
                break;
            }
        }
        out
    };
    // The parallel path evaluated every size; cut after the largest find so
    // both paths report the same trace.
    if let Some(pos) = attempts.iter().position(|a| matches!(a.outcome, KOutcome::Found { .. })) {
        attempts.truncate(pos + 1);
    }

    let witness = match attempts.last() {
        Some(KAttempt { outcome: KOutcome::Found { witness, .. }, .. }) => witness.clone(),
        _ => CliqueWitness {
            combination: VertexCombination::new(vec![0]).expect("singleton tuple is valid"),
        },
    };
    let partial =
        attempts.iter().any(|a| matches!(a.outcome, KOutcome::SkippedResource { .. }));
    SolveResult { size: witness.size(), witness, partial, attempts }
}
