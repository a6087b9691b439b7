//! Classical ground truth: satisfiability and the MAX-3SAT optimum.
//!
//! Exhaustive enumeration is the reference. A small DPLL solver with unit
//! propagation covers formulas above the enumeration limit and is checked
//! against enumeration in the tests.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{count_violated, Assignment, Formula, Polarity};

/// Largest `n` handled by exhaustive enumeration.
pub const ENUMERATION_LIMIT: usize = 24;

/// Assignments per parallel chunk; results are independent of chunking.
const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub satisfiable: bool,
    /// Maximum number of simultaneously satisfiable clauses.
    pub m_opt: usize,
    /// Lowest-index assignment attaining `m_opt`.
    pub witness: Option<Assignment>,
}

fn check_limit(f: &Formula) -> Result<()> {
    if f.num_vars() > ENUMERATION_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "enumeration limited to n <= {ENUMERATION_LIMIT}, got n = {}",
            f.num_vars()
        )));
    }
    Ok(())
}

/// Exhaustive search over all `2^n` assignments.
pub fn enumerate(f: &Formula) -> Result<GroundTruth> {
    check_limit(f)?;
    let n = f.num_vars();
    let m = f.num_clauses();
    let masks = f.clause_masks()?;
    let total = 1u64 << n;
    let chunks = total.div_ceil(CHUNK);

    // (fewest violations, lowest index) per chunk, then the same reduction
    // across chunks.
    let (best_violated, best_x) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let mut best = (usize::MAX, u64::MAX);
            for x in lo..hi {
                let v = count_violated(&masks, x);
                if v < best.0 {
                    best = (v, x);
                    if v == 0 {
                        break;
                    }
                }
            }
            best
        })
        .reduce(|| (usize::MAX, u64::MAX), |a, b| a.min(b));

    Ok(GroundTruth {
        satisfiable: best_violated == 0,
        m_opt: m - best_violated,
        witness: Some(Assignment::from_index(n, best_x)),
    })
}

/// Satisfiability with a witness when one exists. Uses enumeration up to
/// [`ENUMERATION_LIMIT`] variables and DPLL above.
pub fn is_satisfiable(f: &Formula) -> (bool, Option<Assignment>) {
    if f.num_vars() <= ENUMERATION_LIMIT {
        let gt = enumerate(f).expect("within enumeration limit");
        if gt.satisfiable {
            (true, gt.witness)
        } else {
            (false, None)
        }
    } else {
        match dpll(f) {
            Some(x) => (true, Some(x)),
            None => (false, None),
        }
    }
}

pub fn max_sat_optimum(f: &Formula) -> Result<usize> {
    Ok(enumerate(f)?.m_opt)
}

/// `(m - C(x)) / m_opt`.
pub fn approximation_ratio(f: &Formula, x: &Assignment) -> Result<f64> {
    let m_opt = max_sat_optimum(f)?;
    if m_opt == 0 {
        return Err(Error::UndefinedRatio);
    }
    let satisfied = f.num_clauses() - f.count_unsatisfied(x)?;
    Ok(satisfied as f64 / m_opt as f64)
}

/// DPLL with unit propagation. Returns a satisfying assignment (unassigned
/// variables set to false) or `None`.
pub fn dpll(f: &Formula) -> Option<Assignment> {
    // Deduplicated clauses, tautologies dropped. Literal encoding: 2*var + neg.
    let mut clauses: Vec<Vec<usize>> = Vec::with_capacity(f.num_clauses());
    for c in f.clauses() {
        let mut lits: Vec<usize> = c
            .literals()
            .iter()
            .map(|l| 2 * l.var + usize::from(l.polarity == Polarity::Negative))
            .collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            continue;
        }
        clauses.push(lits);
    }
    let mut values: Vec<Option<bool>> = vec![None; f.num_vars()];
    if dpll_rec(&clauses, &mut values) {
        Some(Assignment::new(
            values.into_iter().map(|v| v.unwrap_or(false)).collect(),
        ))
    } else {
        None
    }
}

fn lit_value(lit: usize, values: &[Option<bool>]) -> Option<bool> {
    values[lit / 2].map(|v| if lit & 1 == 1 { !v } else { v })
}

fn dpll_rec(clauses: &[Vec<usize>], values: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    // Unit propagation to fixpoint.
    loop {
        let mut changed = false;
        for c in clauses {
            let mut unassigned = None;
            let mut free = 0;
            let mut sat = false;
            for &l in c {
                match lit_value(l, values) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        free += 1;
                        unassigned = Some(l);
                    }
                }
            }
            if sat {
                continue;
            }
            match (free, unassigned) {
                (0, _) => {
                    for v in trail {
                        values[v] = None;
                    }
                    return false;
                }
                (1, Some(l)) => {
                    values[l / 2] = Some(l & 1 == 0);
                    trail.push(l / 2);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }

    // Branch on the first variable of the first open clause.
    let open = clauses
        .iter()
        .find(|c| !c.iter().any(|&l| lit_value(l, values) == Some(true)));
    let Some(c) = open else {
        return true;
    };
    let var = c
        .iter()
        .find(|&&l| lit_value(l, values).is_none())
        .map(|&l| l / 2)
        .expect("open clause without free literal after propagation");
    for choice in [true, false] {
        values[var] = Some(choice);
        if dpll_rec(clauses, values) {
            return true;
        }
    }
    values[var] = None;
    for v in trail {
        values[v] = None;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Clause, Literal};

    fn unit(l: Literal) -> Clause {
        Clause::new(l, l, l)
    }

    #[test]
    fn contradiction_is_unsat() {
        let f = Formula::new(1, vec![unit(Literal::pos(0)), unit(Literal::neg(0))]).unwrap();
        assert_eq!(is_satisfiable(&f), (false, None));
        assert!(dpll(&f).is_none());
        assert_eq!(max_sat_optimum(&f).unwrap(), 1);
    }

    #[test]
    fn single_clause_witness() {
        let f = Formula::new(3, vec![Clause::new(Literal::pos(0), Literal::pos(1), Literal::pos(2))]).unwrap();
        let (sat, w) = is_satisfiable(&f);
        assert!(sat);
        let w = w.unwrap();
        assert!(f.evaluate(&w).unwrap());
        // Lowest satisfying index is x = 1, i.e. a0 = 1.
        assert!(w.get(0));
    }

    #[test]
    fn empty_formula() {
        let f = Formula::new(3, vec![]).unwrap();
        assert!(is_satisfiable(&f).0);
        assert_eq!(max_sat_optimum(&f).unwrap(), 0);
        assert!(matches!(
            approximation_ratio(&f, &Assignment::all_false(3)),
            Err(Error::UndefinedRatio)
        ));
    }

    #[test]
    fn approximation_ratio_examples() {
        let f = Formula::new(1, vec![unit(Literal::pos(0)), unit(Literal::neg(0))]).unwrap();
        for x in 0..2 {
            let r = approximation_ratio(&f, &Assignment::from_index(1, x)).unwrap();
            assert_eq!(r, 1.0);
        }

        let g = Formula::new(2, vec![unit(Literal::pos(0)), unit(Literal::pos(1))]).unwrap();
        assert_eq!(approximation_ratio(&g, &Assignment::from_index(2, 3)).unwrap(), 1.0);
        assert_eq!(approximation_ratio(&g, &Assignment::from_index(2, 0)).unwrap(), 0.0);
    }

    #[test]
    fn over_limit_is_resource_error() {
        let f = Formula::generate_random(ENUMERATION_LIMIT + 1, 4, 0).unwrap();
        assert!(matches!(max_sat_optimum(&f), Err(Error::ResourceLimit(_))));
        // Decision still available through DPLL.
        let (sat, w) = is_satisfiable(&f);
        assert!(sat);
        assert!(f.evaluate(&w.unwrap()).unwrap());
    }

    #[test]
    fn high_ratio_is_mostly_unsat() {
        let unsat = (0..100u64)
            .filter(|&s| !is_satisfiable(&Formula::generate_random(10, 80, s).unwrap()).0)
            .count();
        assert!(unsat >= 95, "only {unsat}/100 unsatisfiable at ratio 8");
    }

    #[test]
    fn ground_truth_invariants() {
        for s in 0..200u64 {
            let f = Formula::generate_random(8, 20 + (s % 30) as usize, s).unwrap();
            let gt = enumerate(&f).unwrap();
            assert_eq!(gt.satisfiable, gt.m_opt == f.num_clauses());
            let w = gt.witness.unwrap();
            assert_eq!(f.count_unsatisfied(&w).unwrap(), f.num_clauses() - gt.m_opt);
        }
    }

    #[test]
    fn dpll_agrees_with_enumeration() {
        for s in 0..600u64 {
            let n = 3 + (s % 10) as usize;
            let m = ((3.0 + (s % 7) as f64 * 0.5) * n as f64).round() as usize;
            let f = Formula::generate_random(n, m, 1000 + s).unwrap();
            let by_enum = enumerate(&f).unwrap().satisfiable;
            let by_dpll = dpll(&f);
            assert_eq!(by_enum, by_dpll.is_some(), "seed {s}");
            if let Some(x) = by_dpll {
                assert!(f.evaluate(&x).unwrap());
            }
        }
    }
}
