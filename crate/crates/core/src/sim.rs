//! Exact dense statevector simulation.
//!
//! Amplitudes are `Complex64` over all `2^total` basis states. H is the only
//! gate that mixes amplitudes; X, CX, and MCT are pure index permutations and
//! introduce no floating-point error. Basis index bit `total - 1 - q` holds
//! qubit `q`, so a rendered ket reads left to right as qubit 0, 1, ...

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{render_ket, Circuit, Gate, GateKind, QubitLayout};

/// Default ceiling on simulated qubits (2^26 amplitudes = 1 GiB).
pub const DEFAULT_QUBIT_CAP: usize = 26;

/// Oracle amplitudes must sit within this distance of the ideal
/// +-1/sqrt(2^(m+1)) pattern, or the oracle is reported broken.
pub const ORACLE_AMPLITUDE_TOLERANCE: f64 = 1e-10;

/// A state is flagged in a measurement report once it carries at least this
/// multiple of the uniform 1/2^m share.
pub const MARKED_THRESHOLD_FACTOR: f64 = 2.0;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(
        "{total} qubits need 2^{total} amplitudes ({bytes} bytes), over the {cap}-qubit cap"
    )]
    QubitCapExceeded { total: usize, cap: usize, bytes: u128 },
    #[error("oracle structure broken: {0}")]
    BrokenOracle(String),
}

/// Dense state over a layout's full register.
#[derive(Debug, Clone)]
pub struct Statevector {
    layout: QubitLayout,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// All-zeros ground state |0...0>, the state a circuit runs from.
    pub fn ground(layout: QubitLayout) -> Result<Self, SimError> {
        Self::ground_with_cap(layout, DEFAULT_QUBIT_CAP)
    }

    pub fn ground_with_cap(layout: QubitLayout, cap: usize) -> Result<Self, SimError> {
        let total = layout.total();
        if total > cap {
            return Err(SimError::QubitCapExceeded {
                total,
                cap,
                bytes: (16u128) << total,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << total];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { layout, amps })
    }

    pub fn layout(&self) -> QubitLayout {
        self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Index mask for one qubit; qubit 0 is the most significant bit.
    fn mask(&self, q: usize) -> usize {
        1 << (self.layout.total() - 1 - q)
    }

    /// Apply one gate in place. Gates are assumed layout-validated.
    pub fn apply_gate(&mut self, gate: &Gate) {
        match gate.kind {
            GateKind::H => self.apply_h(gate.target),
            GateKind::X => self.apply_x(gate.target),
            GateKind::Cx | GateKind::Mct => {
                let cmask = gate.controls.iter().fold(0usize, |m, &q| m | self.mask(q));
                self.apply_controlled_x(cmask, gate.target);
            }
        }
    }

    fn apply_h(&mut self, target: usize) {
        let stride = self.mask(target);
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for i in base..base + stride {
                let j = i + stride;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                self.amps[j] = (a - b) * FRAC_1_SQRT_2;
            }
            base += stride * 2;
        }
    }

    fn apply_x(&mut self, target: usize) {
        self.apply_controlled_x(0, target);
    }

    /// Swap the target-bit pair wherever every control bit is set. A zero
    /// control mask is an unconditional X. Pure permutation, no FP error.
    fn apply_controlled_x(&mut self, cmask: usize, target: usize) {
        let stride = self.mask(target);
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for i in base..base + stride {
                if i & cmask == cmask {
                    self.amps.swap(i, i + stride);
                }
            }
            base += stride * 2;
        }
    }

    /// Exact marginal probability of each input basis state. Index `e` of the
    /// result is the input register read as a big-endian integer.
    pub fn input_marginals(&self) -> Vec<f64> {
        let m = self.layout.inputs();
        let low = self.layout.total() - m;
        let mut probs = vec![0.0f64; 1 << m];
        for (e, p) in probs.iter_mut().enumerate() {
            *p = self.amps[e << low..(e + 1) << low].iter().map(|a| a.norm_sqr()).sum();
        }
        probs
    }
}

/// The textbook kickback-ready state: inputs and ancillas |0>, output |1>.
///
/// Circuits built here start from [`Statevector::ground`] instead and excite
/// the output qubit themselves with the X of their initialization prelude;
/// applying that prelude to the ground state passes through this state.
pub fn init_state(layout: QubitLayout) -> Result<Statevector, SimError> {
    init_state_with_cap(layout, DEFAULT_QUBIT_CAP)
}

pub fn init_state_with_cap(layout: QubitLayout, cap: usize) -> Result<Statevector, SimError> {
    let mut s = Statevector::ground_with_cap(layout, cap)?;
    // The output qubit is index bit 0.
    s.amps[0] = Complex64::new(0.0, 0.0);
    s.amps[1] = Complex64::new(1.0, 0.0);
    Ok(s)
}

/// Initialization gates shared by Grover circuits and oracle analysis:
/// H on every input, X then H on the output qubit.
pub fn uniform_prelude(layout: QubitLayout) -> Vec<Gate> {
    let mut gates: Vec<Gate> = (0..layout.inputs()).map(Gate::h).collect();
    gates.push(Gate::x(layout.output()));
    gates.push(Gate::h(layout.output()));
    gates
}

/// Run a circuit from the ground state.
pub fn run(c: &Circuit) -> Result<Statevector, SimError> {
    run_with_cap(c, DEFAULT_QUBIT_CAP)
}

pub fn run_with_cap(c: &Circuit, cap: usize) -> Result<Statevector, SimError> {
    let mut s = Statevector::ground_with_cap(c.layout(), cap)?;
    for g in c.gates() {
        s.apply_gate(g);
    }
    Ok(s)
}

/// Which input states an oracle phase-flips, plus the leaked ancilla mass.
#[derive(Debug, Clone)]
pub struct PhaseFlipReport {
    /// Input bitstrings whose amplitude came back with phase -1.
    pub flipped: BTreeSet<String>,
    /// Total probability mass left on states with any ancilla nonzero.
    pub off_ancilla_mass: f64,
}

/// Input basis states an oracle circuit phase-flips.
///
/// The circuit is simulated from the uniform-superposition prelude. Every
/// amplitude must come back as +-1/sqrt(2^m) times the output-qubit factor
/// within [`ORACLE_AMPLITUDE_TOLERANCE`]; anything else reports a broken
/// oracle rather than guessing phases.
pub fn phase_flip_set(c: &Circuit) -> Result<BTreeSet<String>, SimError> {
    Ok(phase_flip_report_with_cap(c, DEFAULT_QUBIT_CAP)?.flipped)
}

pub fn phase_flip_report(c: &Circuit) -> Result<PhaseFlipReport, SimError> {
    phase_flip_report_with_cap(c, DEFAULT_QUBIT_CAP)
}

pub fn phase_flip_report_with_cap(c: &Circuit, cap: usize) -> Result<PhaseFlipReport, SimError> {
    let layout = c.layout();
    let mut s = Statevector::ground_with_cap(layout, cap)?;
    for g in uniform_prelude(layout) {
        s.apply_gate(&g);
    }
    for g in c.gates() {
        s.apply_gate(g);
    }

    let m = layout.inputs();
    let low = layout.total() - m;
    // |-> on the output splits each amplitude as r on O=0 and -r on O=1.
    let r = 1.0 / ((1u64 << (m + 1)) as f64).sqrt();
    let mut flipped = BTreeSet::new();
    let mut off_ancilla_mass = 0.0f64;
    for e in 0..1usize << m {
        let block = &s.amps[e << low..(e + 1) << low];
        // Block index bits: edge ancillas, clique flag, then output (bit 0).
        off_ancilla_mass += block[2..].iter().map(|a| a.norm_sqr()).sum::<f64>();
        let a0 = block[0];
        let a1 = block[1];
        let ket = render_ket(e, m);
        if a0.im.abs() > ORACLE_AMPLITUDE_TOLERANCE
            || (a0.re.abs() - r).abs() > ORACLE_AMPLITUDE_TOLERANCE
            || (a1 + a0).norm() > ORACLE_AMPLITUDE_TOLERANCE
        {
            return Err(SimError::BrokenOracle(format!(
                "input |{ket}> has amplitude {a0} against expected +-{r:.3e}"
            )));
        }
        if a0.re < 0.0 {
            flipped.insert(ket);
        }
    }
    Ok(PhaseFlipReport { flipped, off_ancilla_mass })
}

/// One ranked measurement outcome over the input register.
#[derive(Debug, Clone, Serialize)]
pub struct MeasurementRow {
    pub state: String,
    pub probability: f64,
    pub marked: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
}

/// Exact input-register distribution, optionally with sampled shot counts.
#[derive(Debug, Clone, Serialize)]
pub struct MeasurementReport {
    /// Input register width in qubits.
    pub qubits: usize,
    /// Probability above which a state is flagged as marked.
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Sorted by probability descending, ties by bitstring ascending.
    pub rows: Vec<MeasurementRow>,
}

impl MeasurementReport {
    /// Replace the marked flags, e.g. with classically verified cliques.
    pub fn flag_marked<F: Fn(&str) -> bool>(&mut self, is_marked: F) {
        for row in &mut self.rows {
            row.marked = is_marked(&row.state);
        }
    }

    /// Total probability of the marked states.
    pub fn marked_probability(&self) -> f64 {
        self.rows.iter().filter(|r| r.marked).map(|r| r.probability).sum()
    }
}

/// Measure the input register: exact marginals, ranked; with `shots`, also a
/// multinomial sample drawn from a generator seeded with `seed`.
///
/// Ranking quantizes probabilities to 1e-12 before comparing, so outcomes
/// that are equal up to floating-point dust order by bitstring instead of
/// by noise; reported probabilities stay exact.
pub fn measure_inputs(s: &Statevector, shots: Option<u64>, seed: u64) -> MeasurementReport {
    let m = s.layout().inputs();
    let probs = s.input_marginals();
    let mut counts = vec![0u64; probs.len()];
    if let Some(shots) = shots {
        let dist = WeightedIndex::new(&probs).expect("marginals sum to 1");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..shots {
            counts[dist.sample(&mut rng)] += 1;
        }
    }
    let threshold = MARKED_THRESHOLD_FACTOR / (1u64 << m) as f64;
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by_key(|&e| (std::cmp::Reverse((probs[e] * 1e12).round() as u64), e));
    let rows = order
        .into_iter()
        .map(|e| MeasurementRow {
            state: render_ket(e, m),
            probability: probs[e],
            marked: probs[e] > threshold,
            count: shots.map(|_| counts[e]),
        })
        .collect();
    MeasurementReport { qubits: m, threshold, shots, seed: shots.map(|_| seed), rows }
}
