//! OpenQASM 2.0 emission and parsing for the h/x/cx/ccx subset.
//!
//! Multi-controlled X gates do not exist in QASM 2.0, so emission lowers
//! them to Toffoli v-chains over a scratch register `w`, either inline or
//! behind per-arity `mcxN` gate macros. The parser recognizes both forms and
//! folds them back into single MCT gates, so `parse(emit(c)) == c` and
//! re-emission is byte-identical. Circuit metadata rides along in a
//! `// meta:` comment.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, CircuitMeta, Gate, GateKind, QubitLayout};

/// How multi-controlled X gates are lowered to QASM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecompositionPolicy {
    /// Write every v-chain as plain `ccx` statements in place.
    #[default]
    Inline,
    /// Declare one `mcxN` gate per control arity and invoke it.
    Macro,
}

#[derive(Debug, Error)]
pub enum QasmError {
    #[error("line {line}: expected `{expected}`, found `{found}`")]
    Unexpected { line: usize, expected: &'static str, found: String },
    #[error("line {line}, col {col}: unsupported gate `{gate}`; the subset is h, x, cx, ccx, and mcxN macros")]
    UnsupportedGate { line: usize, col: usize, gate: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: broken v-chain: {message}")]
    VChain { line: usize, message: String },
    #[error("metadata describes a {expected}-qubit circuit but qreg q holds {found}")]
    LayoutMismatch { expected: usize, found: usize },
    #[error("invalid metadata comment: {0}")]
    Meta(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

fn malformed(line: usize, message: impl Into<String>) -> QasmError {
    QasmError::Malformed { line, message: message.into() }
}

/// Gate-local parameter list of the `mcxN` macro: controls, work, target.
fn macro_params(arity: usize) -> String {
    let mut names: Vec<String> = (0..arity).map(|i| format!("c{i}")).collect();
    names.extend((0..arity - 2).map(|i| format!("w{i}")));
    names.push("t".into());
    names.join(",")
}

/// Body statements of the `mcxN` macro, without indentation or semicolons.
fn macro_body_statements(arity: usize) -> Vec<String> {
    let mut compute = vec!["ccx c0,c1,w0".to_string()];
    for i in 1..arity - 2 {
        compute.push(format!("ccx c{},w{},w{}", i + 1, i - 1, i));
    }
    let mut body = compute.clone();
    body.push(format!("ccx c{},w{},t", arity - 1, arity - 3));
    body.extend(compute.into_iter().rev());
    body
}

fn macro_declaration_lines(arity: usize) -> Vec<String> {
    let mut lines = vec![format!("gate mcx{arity} {} {{", macro_params(arity))];
    lines.extend(macro_body_statements(arity).into_iter().map(|s| format!("  {s};")));
    lines.push("}".into());
    lines
}

/// Inline v-chain over registers: compute the AND ladder into `w`, hit the
/// target, then uncompute. 2(c-2)+1 Toffolis for c controls.
fn v_chain_lines(controls: &[usize], target: usize) -> Vec<String> {
    let c = controls.len();
    let mut compute = vec![format!("ccx q[{}],q[{}],w[0];", controls[0], controls[1])];
    for i in 1..c - 2 {
        compute.push(format!("ccx q[{}],w[{}],w[{}];", controls[i + 1], i - 1, i));
    }
    let mut lines = compute.clone();
    lines.push(format!("ccx q[{}],w[{}],q[{}];", controls[c - 1], c - 3, target));
    lines.extend(compute.into_iter().rev());
    lines
}

/// Render a circuit as OpenQASM 2.0. Deterministic: equal circuits yield
/// byte-identical text.
pub fn emit_qasm(circuit: &Circuit, policy: DecompositionPolicy) -> String {
    let layout = circuit.layout();
    let max_controls = circuit
        .gates()
        .iter()
        .filter(|g| g.kind == GateKind::Mct)
        .map(|g| g.controls.len())
        .max()
        .unwrap_or(0);
    let work = max_controls.saturating_sub(2);

    let mut lines: Vec<String> =
        vec!["OPENQASM 2.0;".into(), "include \"qelib1.inc\";".into()];
    if let Some(meta) = circuit.metadata() {
        let json = serde_json::to_string(meta).expect("metadata serializes");
        lines.push(format!("// meta: {json}"));
    }
    lines.push(format!("qreg q[{}];", layout.total()));
    if work > 0 {
        lines.push(format!("qreg w[{work}];"));
    }
    if layout.inputs() > 0 {
        lines.push(format!("creg c[{}];", layout.inputs()));
    }
    if policy == DecompositionPolicy::Macro {
        let arities: BTreeSet<usize> = circuit
            .gates()
            .iter()
            .filter(|g| g.kind == GateKind::Mct && g.controls.len() >= 3)
            .map(|g| g.controls.len())
            .collect();
        for arity in arities {
            lines.extend(macro_declaration_lines(arity));
        }
    }

    for gate in circuit.gates() {
        match (gate.kind, gate.controls.len()) {
            (GateKind::H, _) => lines.push(format!("h q[{}];", gate.target)),
            (GateKind::X, _) => lines.push(format!("x q[{}];", gate.target)),
            (GateKind::Cx, _) => {
                lines.push(format!("cx q[{}],q[{}];", gate.controls[0], gate.target));
            }
            (GateKind::Mct, 2) => lines.push(format!(
                "ccx q[{}],q[{}],q[{}];",
                gate.controls[0], gate.controls[1], gate.target
            )),
            (GateKind::Mct, c) => match policy {
                DecompositionPolicy::Inline => {
                    lines.extend(v_chain_lines(&gate.controls, gate.target));
                }
                DecompositionPolicy::Macro => {
                    let mut args: Vec<String> =
                        gate.controls.iter().map(|q| format!("q[{q}]")).collect();
                    args.extend((0..c - 2).map(|i| format!("w[{i}]")));
                    args.push(format!("q[{}]", gate.target));
                    lines.push(format!("mcx{c} {};", args.join(",")));
                }
            },
        }
    }

    for i in 0..layout.inputs() {
        lines.push(format!("measure q[{i}] -> c[{i}];"));
    }
    lines.join("\n") + "\n"
}

/// One operand of a statement, e.g. `q[3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ref {
    Q(usize),
    W(usize),
    C(usize),
}

fn parse_ref(token: &str, line: usize) -> Result<Ref, QasmError> {
    let token = token.trim();
    let inner = token
        .split_once('[')
        .and_then(|(name, rest)| rest.strip_suffix(']').map(|idx| (name, idx)));
    let Some((name, idx)) = inner else {
        return Err(malformed(line, format!("expected a register reference, found `{token}`")));
    };
    let idx: usize = idx
        .parse()
        .map_err(|_| malformed(line, format!("bad register index in `{token}`")))?;
    match name {
        "q" => Ok(Ref::Q(idx)),
        "w" => Ok(Ref::W(idx)),
        "c" => Ok(Ref::C(idx)),
        _ => Err(malformed(line, format!("unknown register `{name}`"))),
    }
}

/// One cleaned source statement.
struct Stmt {
    line: usize,
    col: usize,
    text: String,
}

impl Stmt {
    /// Opcode and the remaining argument text (no trailing semicolon).
    fn split(&self) -> Result<(&str, &str), QasmError> {
        let text = self.text.as_str();
        let op_end = text.find(char::is_whitespace).unwrap_or(text.len());
        let (op, rest) = text.split_at(op_end);
        let rest = rest
            .trim()
            .strip_suffix(';')
            .ok_or_else(|| malformed(self.line, format!("missing `;` after `{text}`")))?;
        Ok((op, rest.trim()))
    }

    fn args(&self) -> Result<Vec<Ref>, QasmError> {
        let (_, rest) = self.split()?;
        rest.split(',').map(|t| parse_ref(t, self.line)).collect()
    }
}

/// Parse the QASM subset this tool emits back into a circuit.
///
/// Inline v-chains and `mcxN` macro invocations both reconstruct as single
/// MCT gates. The layout comes from the `// meta:` comment when present
/// (cross-checked against `qreg q`), otherwise from the register sizes:
/// `creg c` counts the inputs and the last two qubits are flag and output.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut meta: Option<CircuitMeta> = None;
    let mut stmts: Vec<Stmt> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if let Some(json) = raw.trim_start().strip_prefix("// meta:") {
            if meta.is_none() {
                meta =
                    Some(serde_json::from_str(json.trim()).map_err(|e| QasmError::Meta(e.to_string()))?);
            }
            continue;
        }
        let code = match raw.find("//") {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = code.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = code.len() - code.trim_start().len() + 1;
        stmts.push(Stmt { line, col, text: trimmed.to_string() });
    }

    let mut i = 0;
    for expected in ["OPENQASM 2.0;", "include \"qelib1.inc\";"] {
        match stmts.get(i) {
            Some(s) if s.text == expected => i += 1,
            Some(s) => {
                return Err(QasmError::Unexpected {
                    line: s.line,
                    expected,
                    found: s.text.clone(),
                })
            }
            None => {
                return Err(QasmError::Unexpected {
                    line: stmts.last().map_or(1, |s| s.line + 1),
                    expected,
                    found: "end of file".into(),
                })
            }
        }
    }

    let mut q_size: Option<usize> = None;
    let mut w_size: Option<usize> = None;
    let mut c_size: Option<usize> = None;
    let mut declared: BTreeSet<usize> = BTreeSet::new();
    let mut gates: Vec<Gate> = Vec::new();

    while i < stmts.len() {
        let stmt = &stmts[i];
        let line = stmt.line;
        let op = stmt.text.split_whitespace().next().unwrap_or_default();
        match op {
            "qreg" | "creg" => {
                let refs = stmt.args()?;
                let slot = match (op, refs.as_slice()) {
                    ("qreg", [Ref::Q(n)]) => (&mut q_size, *n),
                    ("qreg", [Ref::W(n)]) => (&mut w_size, *n),
                    ("creg", [Ref::C(n)]) => (&mut c_size, *n),
                    _ => {
                        return Err(malformed(
                            line,
                            format!("this tool only uses `qreg q`, `qreg w`, and `creg c`, found `{}`", stmt.text),
                        ))
                    }
                };
                if slot.0.replace(slot.1).is_some() {
                    return Err(malformed(line, format!("register declared twice in `{}`", stmt.text)));
                }
                i += 1;
            }
            "gate" => {
                i = parse_macro_declaration(&stmts, i, &mut declared)?;
            }
            "measure" => {
                let (_, rest) = stmt.split()?;
                let parts: Vec<&str> = rest.split("->").map(str::trim).collect();
                let refs: Option<(Ref, Ref)> = match parts.as_slice() {
                    [l, r] => Some((parse_ref(l, line)?, parse_ref(r, line)?)),
                    _ => None,
                };
                match refs {
                    Some((Ref::Q(a), Ref::C(b))) if a == b && b < c_size.unwrap_or(0) => {}
                    _ => {
                        return Err(malformed(
                            line,
                            format!("expected `measure q[i] -> c[i]` within creg c, found `{}`", stmt.text),
                        ))
                    }
                }
                i += 1;
            }
            "barrier" => i += 1,
            "h" | "x" => {
                let refs = stmt.args()?;
                let target = match refs.as_slice() {
                    [Ref::Q(t)] => *t,
                    _ => {
                        return Err(malformed(
                            line,
                            "h/x take a single main-register qubit; work qubits appear only inside multi-control expansions",
                        ))
                    }
                };
                require_qreg(q_size, line)?;
                gates.push(if op == "h" { Gate::h(target) } else { Gate::x(target) });
                i += 1;
            }
            "cx" => {
                let refs = stmt.args()?;
                let (c, t) = match refs.as_slice() {
                    [Ref::Q(c), Ref::Q(t)] => (*c, *t),
                    _ => return Err(malformed(line, "cx expects two main-register qubits")),
                };
                require_qreg(q_size, line)?;
                gates.push(Gate::cx(c, t));
                i += 1;
            }
            "ccx" => {
                require_qreg(q_size, line)?;
                i = parse_ccx(&stmts, i, w_size, &mut gates)?;
            }
            _ if op.starts_with("mcx") => {
                require_qreg(q_size, line)?;
                parse_macro_call(stmt, op, &declared, w_size, &mut gates)?;
                i += 1;
            }
            _ => {
                let gate = op.split('(').next().unwrap_or(op).to_string();
                return Err(QasmError::UnsupportedGate { line, col: stmt.col, gate });
            }
        }
    }

    let layout = match &meta {
        Some(m) => {
            let layout = QubitLayout::for_problem(m.n, m.k)?;
            let found = q_size.unwrap_or(0);
            if layout.total() != found {
                return Err(QasmError::LayoutMismatch { expected: layout.total(), found });
            }
            if let Some(c) = c_size.filter(|&c| c != layout.inputs()) {
                return Err(malformed(
                    1,
                    format!("metadata implies {} input qubits but creg c holds {c}", layout.inputs()),
                ));
            }
            layout
        }
        None => match (q_size, c_size) {
            (None, _) => QubitLayout::from_parts(0, 0),
            (Some(n), arity) => {
                let inputs = arity.unwrap_or(n.saturating_sub(2));
                if n < inputs + 2 {
                    return Err(malformed(
                        1,
                        format!("qreg q[{n}] cannot hold {inputs} inputs plus flag and output"),
                    ));
                }
                QubitLayout::from_parts(inputs, n - inputs - 2)
            }
        },
    };
    let mut circuit = Circuit::with_layout(layout);
    circuit.extend(gates)?;
    if let Some(m) = meta {
        circuit.set_metadata(m);
    }
    Ok(circuit)
}

fn require_qreg(q_size: Option<usize>, line: usize) -> Result<(), QasmError> {
    if q_size.is_none() {
        return Err(malformed(line, "gate statement before `qreg q` declaration"));
    }
    Ok(())
}

/// Consume a `gate mcxN ... { ... }` block and record its arity, insisting
/// the body is exactly the v-chain this tool emits.
fn parse_macro_declaration(
    stmts: &[Stmt],
    start: usize,
    declared: &mut BTreeSet<usize>,
) -> Result<usize, QasmError> {
    let header = &stmts[start];
    let line = header.line;
    let text = header
        .text
        .strip_suffix('{')
        .ok_or_else(|| malformed(line, "gate declaration must end its first line with `{`"))?
        .trim();
    let mut words = text.split_whitespace();
    let _gate = words.next();
    let name = words.next().unwrap_or_default();
    let params = words.collect::<Vec<_>>().join("");
    let arity: usize = name
        .strip_prefix("mcx")
        .and_then(|a| a.parse().ok())
        .filter(|&a| a >= 3)
        .ok_or_else(|| QasmError::UnsupportedGate {
            line,
            col: header.col,
            gate: name.to_string(),
        })?;
    if params != macro_params(arity) {
        return Err(malformed(line, format!("mcx{arity} must take parameters {}", macro_params(arity))));
    }

    let mut body: Vec<String> = Vec::new();
    let mut i = start + 1;
    loop {
        let Some(stmt) = stmts.get(i) else {
            return Err(malformed(line, format!("gate mcx{arity} is never closed with `}}`")));
        };
        if stmt.text == "}" {
            i += 1;
            break;
        }
        let inner = stmt
            .text
            .strip_suffix(';')
            .ok_or_else(|| malformed(stmt.line, "gate body statements end with `;`"))?;
        body.push(inner.split_whitespace().collect::<Vec<_>>().join(" "));
        i += 1;
    }
    if body != macro_body_statements(arity) {
        return Err(malformed(
            line,
            format!("gate mcx{arity} body differs from the v-chain this tool emits"),
        ));
    }
    declared.insert(arity);
    Ok(i)
}

/// Handle one `ccx`: a plain double-control stays a gate; a chain touching
/// the work register is folded back into the MCT it encodes.
fn parse_ccx(
    stmts: &[Stmt],
    start: usize,
    w_size: Option<usize>,
    gates: &mut Vec<Gate>,
) -> Result<usize, QasmError> {
    let first = ccx_args(&stmts[start])?;
    match first {
        [Ref::Q(a), Ref::Q(b), Ref::Q(t)] => {
            gates.push(Gate::mct(vec![a, b], t));
            Ok(start + 1)
        }
        [Ref::Q(x0), Ref::Q(x1), Ref::W(0)] => {
            check_w(w_size, 0, stmts[start].line)?;
            let mut controls = vec![x0, x1];
            let mut compute: Vec<[Ref; 3]> = vec![first];
            let mut i = start + 1;
            let target;
            // Climb the AND ladder until the Toffoli that hits the target.
            loop {
                let stmt = chain_stmt(stmts, i)?;
                let refs = ccx_args(stmt)?;
                let depth = compute.len();
                match refs {
                    [Ref::Q(x), Ref::W(a), Ref::W(b)] if a + 1 == depth && b == depth => {
                        check_w(w_size, b, stmt.line)?;
                        controls.push(x);
                        compute.push(refs);
                        i += 1;
                    }
                    [Ref::Q(x), Ref::W(a), Ref::Q(t)] if a + 1 == depth => {
                        controls.push(x);
                        target = t;
                        i += 1;
                        break;
                    }
                    _ => {
                        return Err(QasmError::VChain {
                            line: stmt.line,
                            message: format!("unexpected ladder statement `{}`", stmt.text),
                        })
                    }
                }
            }
            // The uncompute half must mirror the ladder exactly.
            for expected in compute.iter().rev() {
                let stmt = chain_stmt(stmts, i)?;
                if ccx_args(stmt)? != *expected {
                    return Err(QasmError::VChain {
                        line: stmt.line,
                        message: format!("uncompute half must mirror the ladder, found `{}`", stmt.text),
                    });
                }
                i += 1;
            }
            gates.push(Gate::mct(controls, target));
            Ok(i)
        }
        _ => Err(QasmError::VChain {
            line: stmts[start].line,
            message: format!("a chain must open with `ccx q,q,w[0]`, found `{}`", stmts[start].text),
        }),
    }
}

fn chain_stmt(stmts: &[Stmt], i: usize) -> Result<&Stmt, QasmError> {
    match stmts.get(i) {
        Some(s) if s.text.split_whitespace().next() == Some("ccx") => Ok(s),
        Some(s) => Err(QasmError::VChain {
            line: s.line,
            message: format!("expected the chain to continue with ccx, found `{}`", s.text),
        }),
        None => Err(QasmError::VChain {
            line: stmts.last().map_or(1, |s| s.line),
            message: "file ends in the middle of a chain".into(),
        }),
    }
}

fn ccx_args(stmt: &Stmt) -> Result<[Ref; 3], QasmError> {
    let refs = stmt.args()?;
    <[Ref; 3]>::try_from(refs)
        .map_err(|_| malformed(stmt.line, "ccx takes exactly three qubits"))
}

fn check_w(w_size: Option<usize>, index: usize, line: usize) -> Result<(), QasmError> {
    match w_size {
        Some(n) if index < n => Ok(()),
        Some(n) => Err(malformed(line, format!("w[{index}] is out of range for qreg w[{n}]"))),
        None => Err(malformed(line, "work qubits used without a `qreg w` declaration")),
    }
}

fn parse_macro_call(
    stmt: &Stmt,
    op: &str,
    declared: &BTreeSet<usize>,
    w_size: Option<usize>,
    gates: &mut Vec<Gate>,
) -> Result<(), QasmError> {
    let line = stmt.line;
    let arity: usize = op
        .strip_prefix("mcx")
        .and_then(|a| a.parse().ok())
        .filter(|&a| a >= 3)
        .ok_or_else(|| QasmError::UnsupportedGate { line, col: stmt.col, gate: op.to_string() })?;
    if !declared.contains(&arity) {
        return Err(malformed(line, format!("mcx{arity} invoked without its gate declaration")));
    }
    let refs = stmt.args()?;
    if refs.len() != 2 * arity - 1 {
        return Err(malformed(
            line,
            format!("mcx{arity} takes {} arguments, found {}", 2 * arity - 1, refs.len()),
        ));
    }
    let mut controls = Vec::with_capacity(arity);
    for r in &refs[..arity] {
        match r {
            Ref::Q(q) => controls.push(*q),
            _ => return Err(malformed(line, "mcx controls must come from the main register")),
        }
    }
    for (slot, r) in refs[arity..2 * arity - 2].iter().enumerate() {
        match r {
            Ref::W(w) if *w == slot => check_w(w_size, *w, line)?,
            _ => {
                return Err(malformed(
                    line,
                    format!("mcx{arity} must pass work qubits w[0]..w[{}] in order", arity - 3),
                ))
            }
        }
    }
    let target = match refs[2 * arity - 2] {
        Ref::Q(t) => t,
        _ => return Err(malformed(line, "mcx target must be a main-register qubit")),
    };
    gates.push(Gate::mct(controls, target));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::synth::{build_grover, build_oracle};

    fn single_edge_oracle() -> Circuit {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        build_oracle(&g, 2).unwrap()
    }

    fn mct4_circuit() -> Circuit {
        let mut c = Circuit::with_layout(QubitLayout::from_parts(6, 0));
        c.append(Gate::mct(vec![0, 1, 2, 3], 5)).unwrap();
        c
    }

    #[test]
    fn emission_is_frozen_for_a_single_edge_oracle() {
        let oracle = single_edge_oracle();
        let hash = oracle.metadata().unwrap().graph_hash.clone();
        let expected = format!(
            "OPENQASM 2.0;\n\
             include \"qelib1.inc\";\n\
             // meta: {{\"n\":2,\"k\":2,\"graph_hash\":\"{hash}\",\"marked_count\":1,\"iterations\":null,\"no_solutions\":false,\"pruned_combinations\":0,\"gates_saved_by_pruning\":0}}\n\
             qreg q[5];\n\
             creg c[2];\n\
             x q[0];\n\
             ccx q[0],q[1],q[2];\n\
             cx q[2],q[3];\n\
             ccx q[0],q[1],q[2];\n\
             x q[0];\n\
             cx q[3],q[4];\n\
             x q[0];\n\
             ccx q[0],q[1],q[2];\n\
             cx q[2],q[3];\n\
             ccx q[0],q[1],q[2];\n\
             x q[0];\n\
             measure q[0] -> c[0];\n\
             measure q[1] -> c[1];\n"
        );
        assert_eq!(emit_qasm(&oracle, DecompositionPolicy::Inline), expected);
    }

    #[test]
    fn four_controls_become_a_five_toffoli_chain() {
        let text = emit_qasm(&mct4_circuit(), DecompositionPolicy::Inline);
        assert!(text.contains("qreg q[8];\n"), "{text}");
        assert!(text.contains("qreg w[2];\n"), "{text}");
        let chain = "ccx q[0],q[1],w[0];\n\
                     ccx q[2],w[0],w[1];\n\
                     ccx q[3],w[1],q[5];\n\
                     ccx q[2],w[0],w[1];\n\
                     ccx q[0],q[1],w[0];\n";
        assert!(text.contains(chain), "{text}");
        assert_eq!(text.matches("ccx").count(), 5);
    }

    #[test]
    fn macro_policy_declares_once_and_invokes() {
        let text = emit_qasm(&mct4_circuit(), DecompositionPolicy::Macro);
        let declaration = "gate mcx4 c0,c1,c2,c3,w0,w1,t {\n\
             \x20 ccx c0,c1,w0;\n\
             \x20 ccx c2,w0,w1;\n\
             \x20 ccx c3,w1,t;\n\
             \x20 ccx c2,w0,w1;\n\
             \x20 ccx c0,c1,w0;\n\
             }";
        assert!(text.contains(declaration), "{text}");
        assert!(text.contains("mcx4 q[0],q[1],q[2],q[3],w[0],w[1],q[5];\n"), "{text}");
        assert_eq!(text.matches("gate mcx4").count(), 1);
    }

    #[test]
    fn both_policies_round_trip_a_full_grover_circuit() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]).unwrap();
        let circuit = build_grover(&g, 3, None).unwrap();
        for policy in [DecompositionPolicy::Inline, DecompositionPolicy::Macro] {
            let text = emit_qasm(&circuit, policy);
            let parsed = parse_qasm(&text).unwrap();
            assert_eq!(parsed, circuit, "{policy:?}");
            assert_eq!(emit_qasm(&parsed, policy), text, "{policy:?}");
        }
    }

    #[test]
    fn parser_folds_chains_back_into_one_gate() {
        let original = mct4_circuit();
        for policy in [DecompositionPolicy::Inline, DecompositionPolicy::Macro] {
            let parsed = parse_qasm(&emit_qasm(&original, policy)).unwrap();
            assert_eq!(parsed.gates(), &[Gate::mct(vec![0, 1, 2, 3], 5)], "{policy:?}");
            assert_eq!(parsed.layout(), original.layout(), "{policy:?}");
        }
    }

    #[test]
    fn header_only_input_is_an_empty_circuit() {
        let c = parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n").unwrap();
        assert!(c.gates().is_empty());
        assert_eq!(c.layout().total(), 2);
        assert!(c.metadata().is_none());
    }

    #[test]
    fn missing_version_header_is_rejected() {
        let err = parse_qasm("qreg q[3];\n").unwrap_err();
        assert!(matches!(
            err,
            QasmError::Unexpected { line: 1, expected: "OPENQASM 2.0;", .. }
        ));
    }

    #[test]
    fn unsupported_gates_error_with_their_position() {
        let text = "OPENQASM 2.0;\n\
                    include \"qelib1.inc\";\n\
                    qreg q[3];\n\
                    creg c[1];\n\
                    u3(0.1,0.2,0.3) q[0];\n";
        match parse_qasm(text).unwrap_err() {
            QasmError::UnsupportedGate { line, col, gate } => {
                assert_eq!((line, col), (5, 1));
                assert_eq!(gate, "u3");
            }
            other => panic!("expected an unsupported-gate error, got {other}"),
        }
    }

    #[test]
    fn a_truncated_chain_is_reported_as_broken() {
        let mut text = emit_qasm(&mct4_circuit(), DecompositionPolicy::Inline);
        // Drop the final uncompute line (last gate statement block ends
        // before the measures; this circuit has 6 inputs, so 6 measures).
        let lines: Vec<&str> = text.lines().collect();
        let cut: Vec<&str> =
            lines.iter().enumerate().filter(|&(i, _)| i != lines.len() - 7).map(|(_, &l)| l).collect();
        text = cut.join("\n");
        assert!(matches!(parse_qasm(&text).unwrap_err(), QasmError::VChain { .. }));
    }

    #[test]
    fn a_tampered_macro_body_is_rejected() {
        let text = emit_qasm(&mct4_circuit(), DecompositionPolicy::Macro)
            .replace("ccx c3,w1,t;", "ccx c3,w0,t;");
        match parse_qasm(&text).unwrap_err() {
            QasmError::Malformed { message, .. } => {
                assert!(message.contains("differs from the v-chain"), "{message}");
            }
            other => panic!("expected a malformed-declaration error, got {other}"),
        }
    }

    #[test]
    fn metadata_must_agree_with_the_register() {
        let good = emit_qasm(&single_edge_oracle(), DecompositionPolicy::Inline);
        let bad = good.replace("qreg q[5];", "qreg q[7];");
        assert!(matches!(
            parse_qasm(&bad).unwrap_err(),
            QasmError::LayoutMismatch { expected: 5, found: 7 }
        ));
    }

    #[test]
    fn crooked_measures_and_stray_work_qubits_are_rejected() {
        let good = emit_qasm(&single_edge_oracle(), DecompositionPolicy::Inline);
        let crossed = good.replace("measure q[0] -> c[0];", "measure q[0] -> c[1];");
        assert!(matches!(parse_qasm(&crossed).unwrap_err(), QasmError::Malformed { .. }));

        let stray = "OPENQASM 2.0;\n\
                     include \"qelib1.inc\";\n\
                     qreg q[3];\n\
                     qreg w[1];\n\
                     h w[0];\n";
        assert!(matches!(parse_qasm(stray).unwrap_err(), QasmError::Malformed { line: 5, .. }));
    }

    #[test]
    fn layout_without_metadata_comes_from_the_registers() {
        let text = "OPENQASM 2.0;\n\
                    include \"qelib1.inc\";\n\
                    qreg q[11];\n\
                    creg c[6];\n\
                    h q[0];\n";
        let c = parse_qasm(text).unwrap();
        assert_eq!(c.layout().inputs(), 6);
        assert_eq!(c.layout().edge_ancillas(), 3);
        assert_eq!(c.layout().total(), 11);
    }
}
