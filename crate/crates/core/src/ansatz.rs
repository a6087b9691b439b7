//! The four circuits: the MAX-3SAT baseline and the three
//! amplitude-amplification-inspired variants.
//!
//! | kind     | phase cost        | gammas    | mixer            |
//! |----------|-------------------|-----------|------------------|
//! | Baseline | violated clauses  | free      | transverse field |
//! | V1       | binary (0 = SAT)  | free      | transverse field |
//! | V2       | binary            | fixed = pi| transverse field |
//! | V3       | binary            | fixed = pi| Grover           |
//!
//! Each layer applies the phase separator with `gamma_i` and then the mixer
//! with `beta_i`, starting from `|+>^n`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, Polarity};
use crate::statevector::{CostKind, CostTable, Counts, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantKind {
    Baseline,
    V1,
    V2,
    V3,
}

impl VariantKind {
    pub const ALL: [VariantKind; 4] = [VariantKind::Baseline, VariantKind::V1, VariantKind::V2, VariantKind::V3];

    /// Cost imprinted by the phase separator and minimized by the optimizer.
    pub fn phase_cost(self) -> CostKind {
        match self {
            VariantKind::Baseline => CostKind::MaxSat,
            _ => CostKind::Binary,
        }
    }

    pub fn fixed_gamma(self) -> bool {
        matches!(self, VariantKind::V2 | VariantKind::V3)
    }

    pub fn mixer(self) -> MixerKind {
        match self {
            VariantKind::V3 => MixerKind::Grover,
            _ => MixerKind::Transverse,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VariantKind::Baseline => "baseline",
            VariantKind::V1 => "v1",
            VariantKind::V2 => "v2",
            VariantKind::V3 => "v3",
        }
    }
}

impl fmt::Display for VariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VariantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "baseline" | "base" | "qaoa" => Ok(VariantKind::Baseline),
            "v1" | "variant1" => Ok(VariantKind::V1),
            "v2" | "variant2" => Ok(VariantKind::V2),
            "v3" | "variant3" => Ok(VariantKind::V3),
            other => Err(Error::invalid(format!("unknown variant `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixerKind {
    Transverse,
    Grover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VariantSpec {
    pub kind: VariantKind,
    pub p: usize,
}

impl VariantSpec {
    pub fn new(kind: VariantKind, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("QAOA depth p must be at least 1"));
        }
        Ok(VariantSpec { kind, p })
    }

    /// `2p` with free gammas, `p` otherwise.
    pub fn free_parameter_count(&self) -> usize {
        if self.kind.fixed_gamma() {
            self.p
        } else {
            2 * self.p
        }
    }
}

/// Layer angles in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl ParamVector {
    /// Expand the optimizer's free vector. Layout is `[gammas.., betas..]`
    /// for free-gamma variants and `[betas..]` otherwise.
    pub fn from_free(v: &VariantSpec, free: &[f64]) -> Result<Self> {
        if free.len() != v.free_parameter_count() {
            return Err(Error::invalid(format!(
                "{} expects {} free parameters at p = {}, got {}",
                v.kind,
                v.free_parameter_count(),
                v.p,
                free.len()
            )));
        }
        if v.kind.fixed_gamma() {
            Ok(ParamVector {
                gammas: vec![PI; v.p],
                betas: free.to_vec(),
            })
        } else {
            Ok(ParamVector {
                gammas: free[..v.p].to_vec(),
                betas: free[v.p..].to_vec(),
            })
        }
    }

    /// Inverse of [`ParamVector::from_free`].
    pub fn free(&self, v: &VariantSpec) -> Vec<f64> {
        if v.kind.fixed_gamma() {
            self.betas.clone()
        } else {
            self.gammas.iter().chain(&self.betas).copied().collect()
        }
    }

    pub fn check(&self, v: &VariantSpec) -> Result<()> {
        if self.gammas.len() != v.p || self.betas.len() != v.p {
            return Err(Error::invalid(format!(
                "parameter vector has {} gammas and {} betas, depth is {}",
                self.gammas.len(),
                self.betas.len(),
                v.p
            )));
        }
        if v.kind.fixed_gamma() && self.gammas.iter().any(|&g| g != PI) {
            return Err(Error::invalid(format!("{} requires every gamma = pi", v.kind)));
        }
        Ok(())
    }
}

/// Formula-bound circuit with its cost tables built once.
#[derive(Debug, Clone)]
pub struct Ansatz {
    spec: VariantSpec,
    phase: CostTable,
    /// Present only when it differs from `phase` (the baseline).
    binary: Option<CostTable>,
}

impl Ansatz {
    pub fn new(f: &Formula, spec: VariantSpec) -> Result<Self> {
        let phase = CostTable::from_formula(f, spec.kind.phase_cost())?;
        let binary = match spec.kind.phase_cost() {
            CostKind::Binary => None,
            CostKind::MaxSat => Some(CostTable::from_formula(f, CostKind::Binary)?),
        };
        Ok(Ansatz { spec, phase, binary })
    }

    pub fn spec(&self) -> VariantSpec {
        self.spec
    }

    pub fn phase_table(&self) -> &CostTable {
        &self.phase
    }

    pub fn binary_table(&self) -> &CostTable {
        self.binary.as_ref().unwrap_or(&self.phase)
    }

    pub fn prepare_state(&self, theta: &ParamVector) -> Result<StateVector> {
        theta.check(&self.spec)?;
        let mut psi = StateVector::uniform(self.phase.num_qubits())?;
        let mixer = self.spec.kind.mixer();
        for (&gamma, &beta) in theta.gammas.iter().zip(&theta.betas) {
            psi.apply_diagonal_phase(&self.phase, gamma)?;
            match mixer {
                MixerKind::Transverse => psi.apply_transverse_mixer(beta),
                MixerKind::Grover => psi.apply_grover_mixer(beta),
            }
        }
        Ok(psi)
    }

    /// Exact expectation of the optimization cost.
    pub fn expected_cost(&self, theta: &ParamVector) -> Result<f64> {
        self.prepare_state(theta)?.expectation(&self.phase)
    }

    /// Objective over the free parameter vector.
    pub fn objective(&self, free: &[f64]) -> Result<f64> {
        self.expected_cost(&ParamVector::from_free(&self.spec, free)?)
    }
}

pub fn prepare_state(f: &Formula, v: VariantSpec, theta: &ParamVector) -> Result<StateVector> {
    Ansatz::new(f, v)?.prepare_state(theta)
}

pub fn expected_cost(f: &Formula, v: VariantSpec, theta: &ParamVector) -> Result<f64> {
    Ansatz::new(f, v)?.expected_cost(theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Satisfiable,
    Unsatisfiable,
}

impl Decision {
    pub fn from_bool(sat: bool) -> Self {
        if sat {
            Decision::Satisfiable
        } else {
            Decision::Unsatisfiable
        }
    }

    pub fn is_sat(self) -> bool {
        self == Decision::Satisfiable
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Satisfiable => "satisfiable",
            Decision::Unsatisfiable => "unsatisfiable",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Decision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "satisfiable" | "sat" => Ok(Decision::Satisfiable),
            "unsatisfiable" | "unsat" => Ok(Decision::Unsatisfiable),
            other => Err(Error::invalid(format!("unknown decision `{other}`"))),
        }
    }
}

/// How sampled shots turn into a decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum DecisionRule {
    /// Satisfiable iff any shot satisfies the formula.
    #[default]
    AtLeastOne,
    /// Satisfiable iff the satisfying fraction is at least `T`, `0 < T <= 1`.
    Threshold(f64),
}

impl DecisionRule {
    pub fn threshold(t: f64) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::invalid(format!("threshold must lie in (0, 1], got {t}")));
        }
        Ok(DecisionRule::Threshold(t))
    }

    pub fn from_option(t: Option<f64>) -> Result<Self> {
        t.map_or(Ok(DecisionRule::AtLeastOne), DecisionRule::threshold)
    }

    /// Decide from the satisfying-shot fraction `s`.
    pub fn apply(self, s: f64) -> Decision {
        Decision::from_bool(match self {
            DecisionRule::AtLeastOne => s > 0.0,
            DecisionRule::Threshold(t) => s >= t,
        })
    }
}

/// Fraction of shots whose assignment satisfies `f`.
pub fn satisfying_fraction(f: &Formula, counts: &Counts) -> Result<f64> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::invalid("no measurement shots to decide from"));
    }
    if counts.num_qubits() != f.num_vars() {
        return Err(Error::invalid(format!(
            "counts over {} qubits, formula over {} variables",
            counts.num_qubits(),
            f.num_vars()
        )));
    }
    let masks = f.clause_masks()?;
    let sat: u64 = counts
        .iter()
        .filter(|&(x, _)| !masks.iter().any(|c| c.violated_by(x)))
        .map(|(_, c)| c)
        .sum();
    Ok(sat as f64 / total as f64)
}

pub fn decide(f: &Formula, counts: &Counts, rule: DecisionRule) -> Result<Decision> {
    Ok(rule.apply(satisfying_fraction(f, counts)?))
}

/// One term `coeff * Z^{mask}` of a diagonal Pauli expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZTerm {
    pub coeff: f64,
    pub mask: u64,
}

/// Expand `sum_j 1/8 prod_i (I + p_ij Z_{a_ij})` into Z-strings, merging
/// like terms. Repeated variables collapse through `Z^2 = I`.
pub fn max3sat_z_expansion(f: &Formula) -> Result<Vec<ZTerm>> {
    if f.num_vars() > 63 {
        return Err(Error::ResourceLimit("Z expansion supports at most 63 qubits".into()));
    }
    let mut terms: BTreeMap<u64, f64> = BTreeMap::new();
    for c in f.clauses() {
        let lits = c.literals();
        for subset in 0u8..8 {
            let mut coeff = 0.125;
            let mut mask = 0u64;
            for (i, l) in lits.iter().enumerate() {
                if subset >> i & 1 == 1 {
                    if l.polarity == Polarity::Negative {
                        coeff = -coeff;
                    }
                    mask ^= 1 << l.var;
                }
            }
            *terms.entry(mask).or_insert(0.0) += coeff;
        }
    }
    Ok(terms
        .into_iter()
        .filter(|&(_, c)| c != 0.0)
        .map(|(mask, coeff)| ZTerm { coeff, mask })
        .collect())
}

/// Diagonal of `sum coeff * Z^{mask}`: entry `x` is
/// `sum coeff * (-1)^{popcount(x & mask)}`.
pub fn z_diagonal(terms: &[ZTerm], n: usize) -> Vec<f64> {
    (0..1u64 << n)
        .map(|x| {
            terms
                .iter()
                .map(|t| {
                    if (x & t.mask).count_ones() % 2 == 0 {
                        t.coeff
                    } else {
                        -t.coeff
                    }
                })
                .sum()
        })
        .collect()
}
