//! Gate-level intermediate representation: qubit layout, validated gate
//! lists, cost reporting, and a stable JSON form for tooling.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::bits_per_vertex;

/// Errors from layout construction and gate validation.
#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("k must be at least 2: a {0}-clique leaves no vertex pair to check")]
    CliqueSizeTooSmall(usize),
    #[error("k exceeds vertex count: k={k}, n={n}")]
    CliqueSizeExceedsVertices { k: usize, n: usize },
    #[error("graph needs at least one vertex")]
    EmptyGraph,
    #[error("qubit {qubit} out of range for a {total}-qubit circuit")]
    QubitOutOfRange { qubit: usize, total: usize },
    #[error("control {0} listed twice on one gate")]
    DuplicateControl(usize),
    #[error("qubit {0} is both control and target")]
    TargetIsControl(usize),
    #[error("{kind:?} gate cannot take {controls} controls")]
    ControlArity { kind: GateKind, controls: usize },
    #[error("cost report needs synthesis metadata, which this circuit lacks")]
    MissingMetadata,
    #[error("invalid circuit JSON: {0}")]
    Json(String),
}

/// Fixed qubit partition for an (n, k) instance.
///
/// Inputs occupy `[0, inputs)`, edge ancillas `[inputs, inputs + edge_ancillas)`,
/// then the clique flag and the phase-kick output qubit. Qubit `i` is character
/// `i` of a rendered ket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitLayout {
    inputs: usize,
    edge_ancillas: usize,
}

impl QubitLayout {
    /// Layout for deciding k-cliques on an n-vertex graph:
    /// `k * ceil(log2 n)` inputs and `C(k,2)` edge ancillas.
    pub fn for_problem(n: usize, k: usize) -> Result<Self, CircuitError> {
        if n == 0 {
            return Err(CircuitError::EmptyGraph);
        }
        if k < 2 {
            return Err(CircuitError::CliqueSizeTooSmall(k));
        }
        if k > n {
            return Err(CircuitError::CliqueSizeExceedsVertices { k, n });
        }
        Ok(Self { inputs: k * bits_per_vertex(n), edge_ancillas: k * (k - 1) / 2 })
    }

    /// Layout with explicit register sizes (parsed circuits).
    pub fn from_parts(inputs: usize, edge_ancillas: usize) -> Self {
        Self { inputs, edge_ancillas }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn edge_ancillas(&self) -> usize {
        self.edge_ancillas
    }

    /// Edge ancilla for pair rank `x` in canonical pair order.
    pub fn edge_ancilla(&self, x: usize) -> usize {
        debug_assert!(x < self.edge_ancillas);
        self.inputs + x
    }

    /// The clique-flag qubit, toggled when all edge ancillas are set.
    pub fn clique_flag(&self) -> usize {
        self.inputs + self.edge_ancillas
    }

    /// The phase-kick output qubit.
    pub fn output(&self) -> usize {
        self.inputs + self.edge_ancillas + 1
    }

    pub fn total(&self) -> usize {
        self.inputs + self.edge_ancillas + 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    Cx,
    Mct,
}

/// One gate: kind, control qubits (ascending), target qubit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub controls: Vec<usize>,
    pub target: usize,
}

impl Gate {
    pub fn h(target: usize) -> Self {
        Self { kind: GateKind::H, controls: Vec::new(), target }
    }

    pub fn x(target: usize) -> Self {
        Self { kind: GateKind::X, controls: Vec::new(), target }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cx, controls: vec![control], target }
    }

    /// Multi-controlled X; degenerate control counts collapse to X / CX.
    pub fn mct(mut controls: Vec<usize>, target: usize) -> Self {
        controls.sort_unstable();
        match controls.len() {
            0 => Self::x(target),
            1 => Self::cx(controls[0], target),
            _ => Self { kind: GateKind::Mct, controls, target },
        }
    }

    /// Every qubit the gate touches: controls then target.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().copied().chain(std::iter::once(self.target))
    }

    fn validate(&self, total: usize) -> Result<(), CircuitError> {
        let arity_ok = match self.kind {
            GateKind::H | GateKind::X => self.controls.is_empty(),
            GateKind::Cx => self.controls.len() == 1,
            GateKind::Mct => self.controls.len() >= 2,
        };
        if !arity_ok {
            return Err(CircuitError::ControlArity { kind: self.kind, controls: self.controls.len() });
        }
        for q in self.qubits() {
            if q >= total {
                return Err(CircuitError::QubitOutOfRange { qubit: q, total });
            }
        }
        for (i, &c) in self.controls.iter().enumerate() {
            if c == self.target {
                return Err(CircuitError::TargetIsControl(c));
            }
            if self.controls[..i].contains(&c) {
                return Err(CircuitError::DuplicateControl(c));
            }
        }
        Ok(())
    }
}

/// Synthesis provenance carried by generated circuits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitMeta {
    pub n: usize,
    pub k: usize,
    pub graph_hash: String,
    /// Number of k-cliques the oracle marks.
    pub marked_count: usize,
    /// Grover repetitions, present once iterations are appended.
    pub iterations: Option<u64>,
    /// True when the oracle marks nothing; the auto iteration count then
    /// falls back to a single pass so the circuit is still exercised.
    pub no_solutions: bool,
    /// Combinations skipped because some pair is non-adjacent.
    pub pruned_combinations: usize,
    /// Gates avoided versus emitting partial detector blocks for those
    /// combinations (counting both oracle halves).
    pub gates_saved_by_pruning: usize,
}

/// Validated gate list over a fixed layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    layout: QubitLayout,
    gates: Vec<Gate>,
    metadata: Option<CircuitMeta>,
}

/// Gate tally by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub h: usize,
    pub x: usize,
    pub cx: usize,
    pub mct: usize,
}

/// Resource summary of a synthesized circuit.
///
/// `ancilla_count` counts every non-input qubit: the C(k,2) edge ancillas,
/// the clique flag, and the output qubit. Accountings that treat the output
/// separately quote C(k,2) + 1 ancillas plus one output; the physical set is
/// the same either way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub n: usize,
    pub k: usize,
    pub qubit_total: usize,
    pub ancilla_count: usize,
    pub edge_mct_controls: usize,
    pub clique_mct_controls: usize,
    pub gate_counts: GateCounts,
    pub depth: usize,
    pub grover_iterations: Option<u64>,
    /// Exponent e in the O(sqrt(2^e)) query bound: e = k * ceil(log2 n).
    pub query_complexity_exponent: usize,
    pub pruned_combinations: usize,
    pub gates_saved_by_pruning: usize,
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    layout: QubitLayout,
    metadata: Option<CircuitMeta>,
    gates: Vec<Gate>,
}

impl Circuit {
    /// Empty circuit laid out for an (n, k) instance.
    pub fn new(n: usize, k: usize) -> Result<Self, CircuitError> {
        Ok(Self { layout: QubitLayout::for_problem(n, k)?, gates: Vec::new(), metadata: None })
    }

    /// Empty circuit over an explicit layout (parsed circuits).
    pub fn with_layout(layout: QubitLayout) -> Self {
        Self { layout, gates: Vec::new(), metadata: None }
    }

    pub fn layout(&self) -> QubitLayout {
        self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn metadata(&self) -> Option<&CircuitMeta> {
        self.metadata.as_ref()
    }

    pub fn set_metadata(&mut self, meta: CircuitMeta) {
        self.metadata = Some(meta);
    }

    /// Append one gate after validating it against the layout.
    pub fn append(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.layout.total())?;
        self.gates.push(gate);
        Ok(())
    }

    /// Append a gate sequence, validating each element.
    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<(), CircuitError> {
        for g in gates {
            self.append(g)?;
        }
        Ok(())
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for g in &self.gates {
            match g.kind {
                GateKind::H => counts.h += 1,
                GateKind::X => counts.x += 1,
                GateKind::Cx => counts.cx += 1,
                GateKind::Mct => counts.mct += 1,
            }
        }
        counts
    }

    /// Depth under greedy layering: a gate lands one past the deepest layer
    /// among the qubits it touches.
    pub fn depth(&self) -> usize {
        let mut per_qubit = vec![0usize; self.layout.total()];
        let mut depth = 0;
        for g in &self.gates {
            let layer = g.qubits().map(|q| per_qubit[q]).max().unwrap_or(0) + 1;
            for q in g.qubits() {
                per_qubit[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// Resource summary; requires synthesis metadata.
    pub fn cost_report(&self) -> Result<CostReport, CircuitError> {
        let meta = self.metadata.as_ref().ok_or(CircuitError::MissingMetadata)?;
        let b = bits_per_vertex(meta.n);
        let pairs = meta.k * (meta.k - 1) / 2;
        Ok(CostReport {
            n: meta.n,
            k: meta.k,
            qubit_total: self.layout.total(),
            ancilla_count: pairs + 2,
            edge_mct_controls: 2 * b,
            clique_mct_controls: pairs,
            gate_counts: self.gate_counts(),
            depth: self.depth(),
            grover_iterations: meta.iterations,
            query_complexity_exponent: meta.k * b,
            pruned_combinations: meta.pruned_combinations,
            gates_saved_by_pruning: meta.gates_saved_by_pruning,
        })
    }

    /// Basis index rendered as a ket string, qubit `i` at character `i`.
    pub fn ket(&self, index: usize) -> String {
        render_ket(index, self.layout.total())
    }

    /// Stable JSON form: layout, metadata, gate array.
    pub fn to_json(&self) -> String {
        let doc = CircuitJson {
            layout: self.layout,
            metadata: self.metadata.clone(),
            gates: self.gates.clone(),
        };
        serde_json::to_string(&doc).expect("circuit serialization cannot fail")
    }

    /// Parse and re-validate a circuit from its JSON form.
    pub fn from_json(text: &str) -> Result<Self, CircuitError> {
        let doc: CircuitJson =
            serde_json::from_str(text).map_err(|e| CircuitError::Json(e.to_string()))?;
        let mut c = Circuit::with_layout(doc.layout);
        c.extend(doc.gates)?;
        c.metadata = doc.metadata;
        Ok(c)
    }
}

/// Basis index as a ket string of `width` characters, qubit `i` at
/// character `i` (inputs, then ancillas, then output).
pub fn render_ket(index: usize, width: usize) -> String {
    (0..width)
        .map(|q| if (index >> (width - 1 - q)) & 1 == 1 { '1' } else { '0' })
        .collect()
}
