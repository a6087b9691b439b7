//! 3SAT formulas: representation, random generation, evaluation and DIMACS I/O.
//!
//! Variables are 0-based here and 1-based in DIMACS. An assignment maps bit `k`
//! to variable `k`; the same convention is used for basis-state indices in the
//! simulator, so `Assignment::from_index(n, x)` is the assignment measured as
//! basis state `|x>`.

use std::fmt;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    /// `+1` or `-1`.
    pub fn sign(self) -> i8 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub polarity: Polarity,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            polarity: Polarity::Positive,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            polarity: Polarity::Negative,
        }
    }

    pub fn is_negative(self) -> bool {
        self.polarity == Polarity::Negative
    }

    #[inline]
    pub fn satisfied_by(self, value: bool) -> bool {
        match self.polarity {
            Polarity::Positive => value,
            Polarity::Negative => !value,
        }
    }

    fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        match self.polarity {
            Polarity::Positive => v,
            Polarity::Negative => -v,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Positive => write!(f, "a{}", self.var),
            Polarity::Negative => write!(f, "~a{}", self.var),
        }
    }
}

/// Disjunction of exactly three literals. Repeated variables and
/// complementary pairs are both allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clause(pub [Literal; 3]);

impl Clause {
    pub fn new(a: Literal, b: Literal, c: Literal) -> Self {
        Clause([a, b, c])
    }

    pub fn literals(&self) -> &[Literal; 3] {
        &self.0
    }

    pub fn satisfied_by(&self, x: &Assignment) -> bool {
        self.0.iter().any(|l| l.satisfied_by(x.get(l.var)))
    }
}

/// Truth assignment `x in {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment(bits)
    }

    pub fn all_false(n: usize) -> Self {
        Assignment(vec![false; n])
    }

    /// Assignment whose bit `k` is bit `k` of `index`.
    pub fn from_index(n: usize, index: u64) -> Self {
        Assignment((0..n).map(|k| k < 64 && (index >> k) & 1 == 1).collect())
    }

    /// Inverse of [`Assignment::from_index`]; `None` above 64 variables.
    pub fn to_index(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(
            self.0
                .iter()
                .enumerate()
                .fold(0u64, |acc, (k, &b)| acc | (u64::from(b) << k)),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, var: usize) -> bool {
        self.0[var]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

impl fmt::Display for Assignment {
    /// Variable 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Conjunction of `m` three-literal clauses over `n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Formula {
    n: usize,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("formula needs at least one variable"));
        }
        for (j, c) in clauses.iter().enumerate() {
            for l in c.literals() {
                if l.var >= n {
                    return Err(Error::invalid(format!(
                        "clause {j} references variable {} but n = {n}",
                        l.var
                    )));
                }
            }
        }
        Ok(Formula { n, clauses })
    }

    /// Uniform random 3SAT: every literal picks its variable uniformly from
    /// `0..n` (with repetition) and its polarity by a fair coin.
    pub fn generate_random(n: usize, m: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cannot generate a formula with n = 0"));
        }
        let mut rng = rng_from_seed(seed);
        let mut lit = || Literal {
            var: rng.random_range(0..n),
            polarity: if rng.random_bool(0.5) {
                Polarity::Negative
            } else {
                Polarity::Positive
            },
        };
        let clauses = (0..m).map(|_| Clause::new(lit(), lit(), lit())).collect();
        Ok(Formula { n, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// `m / n`.
    pub fn ratio(&self) -> f64 {
        self.clauses.len() as f64 / self.n as f64
    }

    fn check_len(&self, x: &Assignment) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::invalid(format!(
                "assignment has {} bits, formula has {} variables",
                x.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// `phi(x)`: true iff every clause has a satisfied literal.
    pub fn evaluate(&self, x: &Assignment) -> Result<bool> {
        self.check_len(x)?;
        Ok(self.clauses.iter().all(|c| c.satisfied_by(x)))
    }

    /// MAX-3SAT cost: number of violated clauses.
    pub fn count_unsatisfied(&self, x: &Assignment) -> Result<usize> {
        self.check_len(x)?;
        Ok(self.clauses.iter().filter(|c| !c.satisfied_by(x)).count())
    }

    /// Decision cost: 0 on satisfying assignments, 1 otherwise.
    pub fn binary_cost(&self, x: &Assignment) -> Result<u8> {
        Ok(u8::from(!self.evaluate(x)?))
    }

    /// Bitmask form used by the enumerating kernels.
    pub fn clause_masks(&self) -> Result<Vec<ClauseMask>> {
        if self.n > 63 {
            return Err(Error::ResourceLimit(format!(
                "bitmask evaluation supports at most 63 variables, got {}",
                self.n
            )));
        }
        Ok(self.clauses.iter().map(ClauseMask::from_clause).collect())
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.n, self.clauses.len());
        for c in &self.clauses {
            let [a, b, d] = c.0;
            out.push_str(&format!("{} {} {} 0\n", a.to_dimacs(), b.to_dimacs(), d.to_dimacs()));
        }
        out
    }

    /// Parse DIMACS CNF. Clauses shorter than three literals are padded by
    /// repeating their last literal; longer clauses are rejected.
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current: Vec<Literal> = Vec::new();
        let mut clause_start = 0;
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('%') {
                break;
            }
            if line.starts_with('p') {
                if header.is_some() {
                    return Err(Error::parse(line_no, "duplicate problem line"));
                }
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                    return Err(Error::parse(line_no, "expected `p cnf <vars> <clauses>`"));
                }
                let n: usize = parts[2]
                    .parse()
                    .map_err(|_| Error::parse(line_no, "bad variable count"))?;
                let m: usize = parts[3]
                    .parse()
                    .map_err(|_| Error::parse(line_no, "bad clause count"))?;
                if n == 0 {
                    return Err(Error::parse(line_no, "variable count must be positive"));
                }
                header = Some((n, m));
                continue;
            }
            let Some((n, _)) = header else {
                return Err(Error::parse(line_no, "clause before problem line"));
            };
            for tok in line.split_whitespace() {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad literal `{tok}`")))?;
                if current.is_empty() {
                    clause_start = line_no;
                }
                if v == 0 {
                    let Some(&last) = current.last() else {
                        return Err(Error::parse(line_no, "empty clause"));
                    };
                    while current.len() < 3 {
                        current.push(last);
                    }
                    clauses.push(Clause::new(current[0], current[1], current[2]));
                    current.clear();
                    continue;
                }
                let var = v.unsigned_abs() as usize;
                if var > n {
                    return Err(Error::parse(line_no, format!("variable {var} out of range 1..={n}")));
                }
                if current.len() == 3 {
                    return Err(Error::parse(line_no, "clause wider than 3 literals"));
                }
                current.push(if v > 0 {
                    Literal::pos(var - 1)
                } else {
                    Literal::neg(var - 1)
                });
            }
        }

        let Some((n, m)) = header else {
            return Err(Error::parse(last_line.max(1), "missing problem line"));
        };
        if !current.is_empty() {
            return Err(Error::parse(clause_start, "clause not terminated by 0"));
        }
        if clauses.len() != m {
            return Err(Error::parse(
                last_line.max(1),
                format!("header declares {m} clauses, found {}", clauses.len()),
            ));
        }
        Ok(Formula { n, clauses })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("T");
        }
        for (j, c) in self.clauses.iter().enumerate() {
            if j > 0 {
                f.write_str(" & ")?;
            }
            let [a, b, d] = c.0;
            write!(f, "({a} | {b} | {d})")?;
        }
        Ok(())
    }
}

/// A clause as two bitmasks: it is violated by `x` iff every positive
/// literal's bit is 0 and every negative literal's bit is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClauseMask {
    pos: u64,
    neg: u64,
}

impl ClauseMask {
    fn from_clause(c: &Clause) -> Self {
        let mut pos = 0u64;
        let mut neg = 0u64;
        for l in c.literals() {
            match l.polarity {
                Polarity::Positive => pos |= 1 << l.var,
                Polarity::Negative => neg |= 1 << l.var,
            }
        }
        ClauseMask { pos, neg }
    }

    #[inline]
    pub fn violated_by(self, x: u64) -> bool {
        x & self.pos == 0 && !x & self.neg == 0
    }
}

#[inline]
pub fn count_violated(masks: &[ClauseMask], x: u64) -> usize {
    masks.iter().filter(|c| c.violated_by(x)).count()
}
