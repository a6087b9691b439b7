//! Test-only reference implementations, independent of the library kernels.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use satqaoa::formula::{Assignment, Formula};
use satqaoa::oracle;

/// Dense row-major square matrix.
#[derive(Clone, Debug)]
pub struct Dense {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Dense {
    pub fn zeros(dim: usize) -> Self {
        Dense {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.data[i * values.len() + i] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Dense {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, o: &Dense) -> Self {
        Dense {
            dim: self.dim,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, o: &Dense) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * o.data[k * d + j];
                }
            }
        }
        out
    }

    pub fn kron(&self, o: &Dense) -> Self {
        let (a, b) = (self.dim, o.dim);
        let mut out = Self::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * (a * b) + j * b + l] = self.get(i, j) * o.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    fn norm1(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `exp(A)` by scaling and squaring with a 30-term Taylor series.
    pub fn expm(&self) -> Self {
        let mut s = 0;
        while self.norm1() / f64::from(1u32 << s) > 0.25 {
            s += 1;
        }
        let a = self.scale(Complex64::new(1.0 / f64::from(1u32 << s), 0.0));
        let mut result = Self::identity(self.dim);
        let mut term = Self::identity(self.dim);
        for k in 1..=30 {
            term = term.mul(&a).scale(Complex64::new(1.0 / k as f64, 0.0));
            result = result.add(&term);
        }
        for _ in 0..s {
            result = result.mul(&result);
        }
        result
    }
}

pub fn pauli_x() -> Dense {
    let mut m = Dense::zeros(2);
    m.data[1] = Complex64::new(1.0, 0.0);
    m.data[2] = Complex64::new(1.0, 0.0);
    m
}

/// `X` on qubit `k` of `n`. Qubit `k` is bit `k` of the basis index, so it
/// is the `k`-th factor from the right in the Kronecker product.
pub fn x_on(k: usize, n: usize) -> Dense {
    let mut m = Dense::identity(1);
    for q in (0..n).rev() {
        m = m.kron(&if q == k { pauli_x() } else { Dense::identity(2) });
    }
    m
}

/// `sum_k X_k` on `n` qubits.
pub fn transverse_hamiltonian(n: usize) -> Dense {
    (0..n).fold(Dense::zeros(1 << n), |acc, k| acc.add(&x_on(k, n)))
}

/// `|+><+|` on `n` qubits.
pub fn plus_projector(n: usize) -> Dense {
    let dim = 1 << n;
    Dense {
        dim,
        data: vec![Complex64::new(1.0 / dim as f64, 0.0); dim * dim],
    }
}

/// `exp(-i t H)`.
pub fn evolve(h: &Dense, t: f64) -> Dense {
    h.scale(Complex64::new(0.0, -t)).expm()
}

pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn count_solutions(f: &Formula) -> usize {
    (0..1u64 << f.num_vars())
        .filter(|&x| f.evaluate(&Assignment::from_index(f.num_vars(), x)).unwrap())
        .count()
}

/// First random formula (scanning seeds from 0) with exactly one solution.
pub fn unique_solution_formula(n: usize, m: usize) -> (Formula, u64) {
    (0u64..)
        .find_map(|seed| {
            let f = Formula::generate_random(n, m, seed).unwrap();
            (count_solutions(&f) == 1).then_some(f)
        })
        .map(|f| {
            let w = oracle::is_satisfiable(&f).1.unwrap();
            (f, w.to_index().unwrap())
        })
        .unwrap()
}
