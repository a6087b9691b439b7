//! Dense statevector kernels for the QAOA layers used here.
//!
//! Basis state `|x>` lives at index `x`; bit `k` of `x` is qubit `k`, which
//! carries variable `k`. No operation renormalizes: norm drift is a bug and
//! the tests are written to catch it.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{count_violated, Assignment, Formula};
use crate::seed::rng_from_seed;

pub const MAX_QUBITS: usize = 26;

static STATES_PREPARED: AtomicU64 = AtomicU64::new(0);

/// Number of simulator states created in this process so far.
pub fn states_prepared() -> u64 {
    STATES_PREPARED.load(Ordering::Relaxed)
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "qubit count must be in 1..={MAX_QUBITS}, got {n}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|+>^n`.
    pub fn uniform(n: usize) -> Result<Self> {
        check_qubits(n)?;
        STATES_PREPARED.fetch_add(1, Ordering::Relaxed);
        let dim = 1usize << n;
        let a = (dim as f64).sqrt().recip();
        Ok(StateVector {
            n,
            amps: vec![Complex64::new(a, 0.0); dim],
        })
    }

    pub fn basis(n: usize, index: u64) -> Result<Self> {
        check_qubits(n)?;
        STATES_PREPARED.fetch_add(1, Ordering::Relaxed);
        let dim = 1usize << n;
        if index as usize >= dim {
            return Err(Error::invalid(format!("basis index {index} out of range")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Wrap raw amplitudes. The length must be a power of two; the norm is
    /// not checked.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        let n = dim.trailing_zeros() as usize;
        check_qubits(n)?;
        STATES_PREPARED.fetch_add(1, Ordering::Relaxed);
        Ok(StateVector { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn probability(&self, index: u64) -> f64 {
        self.amps[index as usize].norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `sum_x |psi_x|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_table(&self, c: &CostTable) -> Result<()> {
        if c.values.len() != self.amps.len() {
            return Err(Error::invalid(format!(
                "cost table has {} entries, state has {}",
                c.values.len(),
                self.amps.len()
            )));
        }
        Ok(())
    }

    /// `psi_x <- exp(-i gamma c(x)) psi_x`.
    pub fn apply_diagonal_phase(&mut self, c: &CostTable, gamma: f64) -> Result<()> {
        self.check_table(c)?;
        for (a, &v) in self.amps.iter_mut().zip(&c.values) {
            if v != 0.0 {
                let (s, co) = (gamma * v).sin_cos();
                *a *= Complex64::new(co, -s);
            }
        }
        Ok(())
    }

    /// `exp(-i beta sum_k X_k)`, applied as `cos(beta) I - i sin(beta) X` on
    /// each qubit in turn.
    pub fn apply_transverse_mixer(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        let mis = Complex64::new(0.0, -s);
        for k in 0..self.n {
            let stride = 1usize << k;
            for block in self.amps.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = x0 * c + x1 * mis;
                    *a1 = x0 * mis + x1 * c;
                }
            }
        }
    }

    /// `exp(-i beta |+><+|) = I + (exp(-i beta) - 1) |+><+|`.
    pub fn apply_grover_mixer(&mut self, beta: f64) {
        let scale = (self.amps.len() as f64).recip();
        let sum: Complex64 = self.amps.iter().sum();
        let (s, c) = beta.sin_cos();
        // (e^{-i beta} - 1) <+|psi> 2^{-n/2}
        let shift = (Complex64::new(c, -s) - 1.0) * sum * scale;
        for a in &mut self.amps {
            *a += shift;
        }
    }

    /// `sum_x |psi_x|^2 c(x)`, summed in index order.
    pub fn expectation(&self, c: &CostTable) -> Result<f64> {
        self.check_table(c)?;
        Ok(self.amps.iter().zip(&c.values).map(|(a, &v)| a.norm_sqr() * v).sum())
    }

    /// Draw `shots` basis states from `|psi_x|^2`.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<Counts> {
        if shots == 0 {
            return Err(Error::invalid("shots must be positive"));
        }
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        let mut rng = rng_from_seed(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u = rng.random::<f64>() * total;
            let idx = cdf.partition_point(|&p| p <= u).min(cdf.len() - 1);
            *counts.entry(idx as u64).or_insert(0u64) += 1;
        }
        Ok(Counts { n: self.n, counts })
    }

    /// Debug dump: `index,re,im` per amplitude.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,re,im")?;
        for (i, a) in self.amps.iter().enumerate() {
            writeln!(w, "{i},{},{}", a.re, a.im)?;
        }
        Ok(())
    }
}

/// Which diagonal to build from a formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    /// Number of violated clauses.
    MaxSat,
    /// 0 on satisfying assignments, 1 otherwise.
    Binary,
}

/// Diagonal of a cost Hamiltonian, indexed like the statevector.
#[derive(Debug, Clone, PartialEq)]
pub struct CostTable {
    values: Vec<f64>,
}

impl CostTable {
    pub fn from_formula(f: &Formula, kind: CostKind) -> Result<Self> {
        check_qubits(f.num_vars())?;
        let masks = f.clause_masks()?;
        let dim = 1usize << f.num_vars();
        let mut values = vec![0.0; dim];
        values.par_iter_mut().enumerate().for_each(|(x, v)| {
            let violated = count_violated(&masks, x as u64);
            *v = match kind {
                CostKind::MaxSat => violated as f64,
                CostKind::Binary => f64::from(u8::from(violated > 0)),
            };
        });
        Ok(CostTable { values })
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let dim = values.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "cost table length {dim} is not a power of two >= 2"
            )));
        }
        check_qubits(dim.trailing_zeros() as usize)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("cost table entries must be finite"));
        }
        Ok(CostTable { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_qubits(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Measurement histogram keyed by basis index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    n: usize,
    counts: BTreeMap<u64, u64>,
}

impl Counts {
    pub fn from_map(n: usize, counts: BTreeMap<u64, u64>) -> Self {
        Counts { n, counts }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    pub fn get(&self, index: u64) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn assignments(&self) -> impl Iterator<Item = (Assignment, u64)> + '_ {
        self.iter().map(|(k, v)| (Assignment::from_index(self.n, k), v))
    }

    /// Most frequent outcome, lowest index on ties.
    pub fn mode(&self) -> Option<(u64, u64)> {
        self.iter().fold(None, |best: Option<(u64, u64)>, (k, v)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((k, v)),
        })
    }
}
