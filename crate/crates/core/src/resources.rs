//! Gate counts and depth estimates for the four circuits.
//!
//! Counts are closed-form. Multi-controlled gates are reported as primitives
//! keyed by control count (`MCX(k)`, `MCP(k)`), not decomposed. The depth is
//! an ASAP layering of a modeled gate sequence with disjoint-qubit gates in
//! parallel; layers are not overlapped across QAOA repetitions, so the total
//! is `prep + p * layer`.
//!
//! Qubit layout of the model: work qubits `0..n`, clause ancillas
//! `n..n+m`, result ancilla `n+m`.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::ansatz::{MixerKind, VariantKind, VariantSpec};
use crate::error::{Error, Result};
use crate::formula::Formula;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub struct GateCount {
    pub h: u64,
    pub x: u64,
    /// Single-qubit phase gate.
    pub p: u64,
    /// Single-qubit X rotation (transverse-field mixer).
    pub rx: u64,
    pub rz: u64,
    pub rzz: u64,
    pub rzzz: u64,
    /// Multi-controlled X keyed by number of controls.
    pub mcx: BTreeMap<usize, u64>,
    /// Multi-controlled phase keyed by number of controls.
    pub mcp: BTreeMap<usize, u64>,
    #[serde(rename = "ancilla_qubits")]
    pub ancilla_qubits: usize,
    #[serde(rename = "depth")]
    pub depth: u64,
}

impl GateCount {
    pub fn mcx(&self, controls: usize) -> u64 {
        self.mcx.get(&controls).copied().unwrap_or(0)
    }

    pub fn mcp(&self, controls: usize) -> u64 {
        self.mcp.get(&controls).copied().unwrap_or(0)
    }

    pub fn total_gates(&self) -> u64 {
        self.h
            + self.x
            + self.p
            + self.rx
            + self.rz
            + self.rzz
            + self.rzzz
            + self.mcx.values().sum::<u64>()
            + self.mcp.values().sum::<u64>()
    }

    /// Gate counts and depth multiplied by `k`; ancillas unchanged.
    pub fn repeated(&self, k: u64) -> GateCount {
        GateCount {
            h: self.h * k,
            x: self.x * k,
            p: self.p * k,
            rx: self.rx * k,
            rz: self.rz * k,
            rzz: self.rzz * k,
            rzzz: self.rzzz * k,
            mcx: self.mcx.iter().map(|(&c, &v)| (c, v * k)).collect(),
            mcp: self.mcp.iter().map(|(&c, &v)| (c, v * k)).collect(),
            ancilla_qubits: self.ancilla_qubits,
            depth: self.depth * k,
        }
    }

    fn zero_depth(mut self) -> Self {
        self.depth = 0;
        self
    }
}

impl AddAssign<&GateCount> for GateCount {
    /// Sums gates and depth; ancillas are reused, so the maximum is kept.
    fn add_assign(&mut self, o: &GateCount) {
        self.h += o.h;
        self.x += o.x;
        self.p += o.p;
        self.rx += o.rx;
        self.rz += o.rz;
        self.rzz += o.rzz;
        self.rzzz += o.rzzz;
        for (&c, &v) in &o.mcx {
            *self.mcx.entry(c).or_insert(0) += v;
        }
        for (&c, &v) in &o.mcp {
            *self.mcp.entry(c).or_insert(0) += v;
        }
        self.ancilla_qubits = self.ancilla_qubits.max(o.ancilla_qubits);
        self.depth += o.depth;
    }
}

impl Add<&GateCount> for GateCount {
    type Output = GateCount;

    fn add(mut self, o: &GateCount) -> GateCount {
        self += o;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateFamily {
    H,
    X,
    P,
    Rx,
    Rz,
    Rzz,
    Rzzz,
    Mcx(usize),
    Mcp(usize),
}

/// A gate in the cost model: family plus the qubits it touches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelGate {
    pub family: GateFamily,
    pub qubits: Vec<usize>,
}

impl ModelGate {
    fn new(family: GateFamily, qubits: &[usize]) -> Self {
        let mut qubits = qubits.to_vec();
        qubits.sort_unstable();
        qubits.dedup();
        ModelGate { family, qubits }
    }
}

/// Count gates by family.
pub fn tally(gates: &[ModelGate], ancilla_qubits: usize) -> GateCount {
    let mut c = GateCount {
        ancilla_qubits,
        depth: asap_depth(gates),
        ..Default::default()
    };
    for g in gates {
        match g.family {
            GateFamily::H => c.h += 1,
            GateFamily::X => c.x += 1,
            GateFamily::P => c.p += 1,
            GateFamily::Rx => c.rx += 1,
            GateFamily::Rz => c.rz += 1,
            GateFamily::Rzz => c.rzz += 1,
            GateFamily::Rzzz => c.rzzz += 1,
            GateFamily::Mcx(k) => *c.mcx.entry(k).or_insert(0) += 1,
            GateFamily::Mcp(k) => *c.mcp.entry(k).or_insert(0) += 1,
        }
    }
    c
}

/// Number of layers when each gate starts right after the last gate on any
/// of its qubits.
pub fn asap_depth(gates: &[ModelGate]) -> u64 {
    let mut level: BTreeMap<usize, u64> = BTreeMap::new();
    let mut depth = 0;
    for g in gates {
        let start = g
            .qubits
            .iter()
            .map(|q| level.get(q).copied().unwrap_or(0))
            .max()
            .unwrap_or(0);
        let end = start + 1;
        for &q in &g.qubits {
            level.insert(q, end);
        }
        depth = depth.max(end);
    }
    depth
}

/// Rotation decomposition of `exp(-i gamma H_phi)`: per clause three `RZ`,
/// three `RZZ` and one `RZZZ`.
pub fn baseline_phase_gates(f: &Formula) -> Vec<ModelGate> {
    let mut gates = Vec::with_capacity(7 * f.num_clauses());
    for c in f.clauses() {
        let q = c.literals().map(|l| l.var);
        for k in 0..3 {
            gates.push(ModelGate::new(GateFamily::Rz, &[q[k]]));
            for l in 0..k {
                gates.push(ModelGate::new(GateFamily::Rzz, &[q[l], q[k]]));
            }
        }
        gates.push(ModelGate::new(GateFamily::Rzzz, &q));
    }
    gates
}

/// Ancilla oracle plus phase kickback: clause ancillas computed by `MCX(3)`
/// with `X` conjugation on negative literals, the result ancilla by `MCX(m)`
/// and negated, `P(-gamma)` on the result, then everything uncomputed.
pub fn oracle_phase_gates(f: &Formula) -> Vec<ModelGate> {
    let n = f.num_vars();
    let m = f.num_clauses();
    let result = n + m;
    let clause_anc: Vec<usize> = (n..n + m).collect();

    let mut compute = Vec::new();
    for (j, c) in f.clauses().iter().enumerate() {
        let lits = c.literals();
        let negs: Vec<usize> = lits.iter().filter(|l| l.is_negative()).map(|l| l.var).collect();
        for &q in &negs {
            compute.push(ModelGate::new(GateFamily::X, &[q]));
        }
        let mut qs: Vec<usize> = lits.iter().map(|l| l.var).collect();
        qs.push(n + j);
        compute.push(ModelGate::new(GateFamily::Mcx(3), &qs));
        for &q in &negs {
            compute.push(ModelGate::new(GateFamily::X, &[q]));
        }
    }
    let mut qs = clause_anc.clone();
    qs.push(result);
    compute.push(ModelGate::new(GateFamily::Mcx(m), &qs));
    compute.push(ModelGate::new(GateFamily::X, &[result]));

    let mut gates = compute.clone();
    gates.push(ModelGate::new(GateFamily::P, &[result]));
    gates.extend(compute.into_iter().rev());
    gates
}

pub fn transverse_mixer_gates(n: usize) -> Vec<ModelGate> {
    (0..n).map(|q| ModelGate::new(GateFamily::Rx, &[q])).collect()
}

/// `H^n X^n CP(-beta) X^n H^n`.
pub fn grover_mixer_gates(n: usize) -> Vec<ModelGate> {
    let all: Vec<usize> = (0..n).collect();
    let mut gates = Vec::with_capacity(4 * n + 1);
    gates.extend(all.iter().map(|&q| ModelGate::new(GateFamily::H, &[q])));
    gates.extend(all.iter().map(|&q| ModelGate::new(GateFamily::X, &[q])));
    gates.push(ModelGate::new(GateFamily::Mcp(n.saturating_sub(1)), &all));
    gates.extend(all.iter().map(|&q| ModelGate::new(GateFamily::X, &[q])));
    gates.extend(all.iter().map(|&q| ModelGate::new(GateFamily::H, &[q])));
    gates
}

/// `m * (RZ: 3, RZZ: 3, RZZZ: 1)`, no ancillas.
pub fn count_baseline_phase(f: &Formula) -> GateCount {
    let m = f.num_clauses() as u64;
    GateCount {
        rz: 3 * m,
        rzz: 3 * m,
        rzzz: m,
        depth: asap_depth(&baseline_phase_gates(f)),
        ..Default::default()
    }
}

/// See [`oracle_phase_gates`] for the modeled construction.
pub fn count_oracle_phase(f: &Formula) -> GateCount {
    let m = f.num_clauses();
    let negatives = f
        .clauses()
        .iter()
        .flat_map(|c| c.literals())
        .filter(|l| l.is_negative())
        .count() as u64;
    let mut mcx = BTreeMap::new();
    if m > 0 {
        mcx.insert(3, 2 * m as u64);
    }
    *mcx.entry(m).or_insert(0) += 2;
    GateCount {
        x: 4 * negatives + 2,
        p: 1,
        mcx,
        ancilla_qubits: m + 1,
        depth: asap_depth(&oracle_phase_gates(f)),
        ..Default::default()
    }
}

pub fn count_mixer(kind: MixerKind, n: usize) -> Result<GateCount> {
    if n == 0 {
        return Err(Error::invalid("mixer needs at least one qubit"));
    }
    let n64 = n as u64;
    Ok(match kind {
        MixerKind::Transverse => GateCount {
            rx: n64,
            depth: 1,
            ..Default::default()
        },
        MixerKind::Grover => GateCount {
            h: 2 * n64,
            x: 2 * n64,
            mcp: BTreeMap::from([(n - 1, 1)]),
            depth: 5,
            ..Default::default()
        },
    })
}

fn phase_count(f: &Formula, kind: VariantKind) -> GateCount {
    match kind {
        VariantKind::Baseline => count_baseline_phase(f),
        _ => count_oracle_phase(f),
    }
}

fn phase_gates(f: &Formula, kind: VariantKind) -> Vec<ModelGate> {
    match kind {
        VariantKind::Baseline => baseline_phase_gates(f),
        _ => oracle_phase_gates(f),
    }
}

fn mixer_gates(kind: MixerKind, n: usize) -> Vec<ModelGate> {
    match kind {
        MixerKind::Transverse => transverse_mixer_gates(n),
        MixerKind::Grover => grover_mixer_gates(n),
    }
}

/// Depth of one phase + mixer layer.
pub fn layer_depth(f: &Formula, kind: VariantKind) -> u64 {
    let mut gates = phase_gates(f, kind);
    gates.extend(mixer_gates(kind.mixer(), f.num_vars()));
    asap_depth(&gates)
}

/// `n` Hadamards, then `p` layers of phase separator and mixer.
pub fn count_ansatz(f: &Formula, v: &VariantSpec) -> GateCount {
    let n = f.num_vars();
    let prep = GateCount {
        h: n as u64,
        depth: 1,
        ..Default::default()
    };
    let mixer = count_mixer(v.kind.mixer(), n).expect("formula has n >= 1");
    let mut layer = phase_count(f, v.kind).zero_depth() + &mixer.zero_depth();
    layer.depth = layer_depth(f, v.kind);
    prep + &layer.repeated(v.p as u64)
}

/// JSON-serializable report for one `(formula, variant, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub variant: VariantKind,
    pub p: usize,
    pub n: usize,
    pub m: usize,
    pub phase: GateCount,
    pub mixer: GateCount,
    pub total: GateCount,
}

impl ResourceReport {
    pub fn new(f: &Formula, v: &VariantSpec) -> Self {
        ResourceReport {
            variant: v.kind,
            p: v.p,
            n: f.num_vars(),
            m: f.num_clauses(),
            phase: phase_count(f, v.kind),
            mixer: count_mixer(v.kind.mixer(), f.num_vars()).expect("formula has n >= 1"),
            total: count_ansatz(f, v),
        }
    }
}
