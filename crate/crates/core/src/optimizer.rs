//! Classical optimizers for the variational loop.
//!
//! All three methods run against a shared evaluation budget and report the
//! best point they actually evaluated, so `best_value == objective(best_params)`
//! holds exactly for deterministic objectives.

use std::f64::consts::TAU;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::ansatz::VariantSpec;
use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_from_seed, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Spsa,
    /// Nelder-Mead simplex.
    Simplex,
    /// BFGS on central-difference gradients.
    QuasiNewton,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Simplex, Method::QuasiNewton, Method::Spsa];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Spsa => "spsa",
            Method::Simplex => "simplex",
            Method::QuasiNewton => "quasi-newton",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spsa" => Ok(Method::Spsa),
            "simplex" | "nelder-mead" | "neldermead" | "cobyla" => Ok(Method::Simplex),
            "quasi-newton" | "quasinewton" | "bfgs" | "l-bfgs" => Ok(Method::QuasiNewton),
            other => Err(Error::invalid(format!("unknown optimizer `{other}`"))),
        }
    }
}

/// Gains `a_k = a / (k + 1 + A)^alpha`, `c_k = c / (k + 1)^gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpsaParams {
    pub a: f64,
    pub c: f64,
    pub stability: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for SpsaParams {
    fn default() -> Self {
        SpsaParams {
            a: 0.2,
            c: 0.1,
            stability: 10.0,
            alpha: 0.602,
            gamma: 0.101,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimplexParams {
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop once the value spread and the simplex diameter are both below these.
    pub ftol: f64,
    pub xtol: f64,
}

impl Default for SimplexParams {
    fn default() -> Self {
        SimplexParams {
            initial_step: 0.5,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            ftol: 1e-10,
            xtol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuasiNewtonParams {
    /// Central-difference step.
    pub fd_step: f64,
    /// Gradient-norm convergence tolerance.
    pub gtol: f64,
}

impl Default for QuasiNewtonParams {
    fn default() -> Self {
        QuasiNewtonParams {
            fd_step: 1e-5,
            gtol: 1e-7,
        }
    }
}

pub const DEFAULT_BUDGET: usize = 250;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub method: Method,
    pub max_evaluations: usize,
    pub seed: u64,
    pub spsa: SpsaParams,
    pub simplex: SimplexParams,
    pub quasi_newton: QuasiNewtonParams,
    pub record_trace: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            method: Method::Simplex,
            max_evaluations: DEFAULT_BUDGET,
            seed: 0,
            spsa: SpsaParams::default(),
            simplex: SimplexParams::default(),
            quasi_newton: QuasiNewtonParams::default(),
            record_trace: false,
        }
    }
}

impl OptimizerConfig {
    pub fn new(method: Method) -> Self {
        OptimizerConfig {
            method,
            ..Default::default()
        }
    }

    pub fn with_budget(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_evaluations == 0 {
            return Err(Error::invalid("max_evaluations must be at least 1"));
        }
        let s = &self.spsa;
        let nm = &self.simplex;
        let qn = &self.quasi_newton;
        let positive = [
            ("spsa.a", s.a),
            ("spsa.c", s.c),
            ("spsa.alpha", s.alpha),
            ("spsa.gamma", s.gamma),
            ("simplex.initial_step", nm.initial_step),
            ("simplex.reflection", nm.reflection),
            ("simplex.contraction", nm.contraction),
            ("simplex.shrink", nm.shrink),
            ("quasi_newton.fd_step", qn.fd_step),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if s.stability < 0.0 || nm.expansion <= nm.reflection || nm.contraction >= 1.0 || nm.shrink >= 1.0 {
            return Err(Error::invalid("inconsistent optimizer coefficients"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evaluation: usize,
    pub best_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub evaluations_used: usize,
    pub trace: Vec<TracePoint>,
}

impl OptimizationResult {
    /// `iteration,best_value` rows.
    pub fn write_trace_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "iteration,best_value")?;
        for t in &self.trace {
            writeln!(w, "{},{}", t.evaluation, t.best_value)?;
        }
        Ok(())
    }
}

/// Budgeted objective wrapper that remembers the best evaluated point.
struct Evaluator<'a, F> {
    f: &'a mut F,
    budget: usize,
    used: usize,
    best_x: Vec<f64>,
    best_f: f64,
    trace: Option<Vec<TracePoint>>,
}

impl<'a, F: FnMut(&[f64]) -> f64> Evaluator<'a, F> {
    fn new(f: &'a mut F, budget: usize, record: bool) -> Self {
        Evaluator {
            f,
            budget,
            used: 0,
            best_x: Vec::new(),
            best_f: f64::INFINITY,
            trace: record.then(Vec::new),
        }
    }

    fn remaining(&self) -> usize {
        self.budget - self.used
    }

    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.used >= self.budget {
            return None;
        }
        let v = (self.f)(x);
        self.used += 1;
        // NaN never replaces a finite best.
        if v < self.best_f || self.best_x.is_empty() {
            self.best_f = v;
            self.best_x = x.to_vec();
        }
        if let Some(t) = &mut self.trace {
            t.push(TracePoint {
                evaluation: self.used,
                best_value: self.best_f,
            });
        }
        Some(v)
    }

    fn finish(self) -> OptimizationResult {
        OptimizationResult {
            best_params: self.best_x,
            best_value: self.best_f,
            evaluations_used: self.used,
            trace: self.trace.unwrap_or_default(),
        }
    }
}

/// Minimize `objective` from `x0`.
pub fn minimize<F>(mut objective: F, x0: &[f64], cfg: &OptimizerConfig) -> Result<OptimizationResult>
where
    F: FnMut(&[f64]) -> f64,
{
    if x0.is_empty() {
        return Err(Error::invalid("cannot optimize over zero parameters"));
    }
    cfg.validate()?;
    let mut ev = Evaluator::new(&mut objective, cfg.max_evaluations, cfg.record_trace);
    ev.eval(x0);
    match cfg.method {
        Method::Spsa => spsa(&mut ev, x0, &cfg.spsa, cfg.seed),
        Method::Simplex => nelder_mead(&mut ev, x0, &cfg.simplex),
        Method::QuasiNewton => bfgs(&mut ev, x0, &cfg.quasi_newton),
    }
    Ok(ev.finish())
}

fn rademacher(rng: &mut Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect()
}

/// One simultaneous-perturbation gradient estimate at `x` with step `c`.
pub fn spsa_gradient<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &[f64], c: f64, rng: &mut Rng) -> Vec<f64> {
    let delta = rademacher(rng, x.len());
    let plus: Vec<f64> = x.iter().zip(&delta).map(|(xi, di)| xi + c * di).collect();
    let minus: Vec<f64> = x.iter().zip(&delta).map(|(xi, di)| xi - c * di).collect();
    let diff = f(&plus) - f(&minus);
    delta.iter().map(|di| diff / (2.0 * c * di)).collect()
}

fn spsa<F: FnMut(&[f64]) -> f64>(ev: &mut Evaluator<'_, F>, x0: &[f64], p: &SpsaParams, seed: u64) {
    let mut rng = rng_from_seed(seed);
    let mut x = x0.to_vec();
    let mut k = 0u32;
    // Each step costs two evaluations; keep one back for the final iterate.
    while ev.remaining() >= 3 {
        let kf = f64::from(k);
        let ak = p.a / (kf + 1.0 + p.stability).powf(p.alpha);
        let ck = p.c / (kf + 1.0).powf(p.gamma);
        let delta = rademacher(&mut rng, x.len());
        let plus: Vec<f64> = x.iter().zip(&delta).map(|(xi, di)| xi + ck * di).collect();
        let minus: Vec<f64> = x.iter().zip(&delta).map(|(xi, di)| xi - ck * di).collect();
        let (Some(yp), Some(ym)) = (ev.eval(&plus), ev.eval(&minus)) else {
            return;
        };
        let diff = yp - ym;
        for (xi, di) in x.iter_mut().zip(&delta) {
            *xi -= ak * diff / (2.0 * ck * di);
        }
        k += 1;
    }
    if k > 0 {
        ev.eval(&x);
    }
}

fn nelder_mead<F: FnMut(&[f64]) -> f64>(ev: &mut Evaluator<'_, F>, x0: &[f64], p: &SimplexParams) {
    let d = x0.len();
    let Some(f0) = (ev.used > 0).then_some(ev.best_f) else {
        return;
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f0)];
    for i in 0..d {
        let mut xi = x0.to_vec();
        xi[i] += p.initial_step;
        let Some(fi) = ev.eval(&xi) else {
            return;
        };
        simplex.push((xi, fi));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[d].1 - simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= p.ftol && diameter <= p.xtol {
            return;
        }

        let centroid: Vec<f64> = (0..d)
            .map(|j| simplex[..d].iter().map(|(x, _)| x[j]).sum::<f64>() / d as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[d].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(p.reflection);
        let Some(fr) = ev.eval(&xr) else { return };
        if fr < simplex[0].1 {
            let xe = along(p.reflection * p.expansion);
            let Some(fe) = ev.eval(&xe) else { return };
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[d].1 {
            let xc = along(p.reflection * p.contraction);
            let Some(fc) = ev.eval(&xc) else { return };
            (xc, fc)
        } else {
            let xc = along(-p.contraction);
            let Some(fc) = ev.eval(&xc) else { return };
            (xc, fc)
        };
        if fc < simplex[d].1.min(fr) {
            simplex[d] = (xc, fc);
            continue;
        }
        // Shrink toward the best vertex.
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + p.shrink * (v - b))
                .collect();
            let Some(fx) = ev.eval(&x) else { return };
            *vertex = (x, fx);
        }
    }
}

/// Central differences, `2 d` evaluations.
pub fn central_difference<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let fp = f(&probe);
            probe[i] = x[i] - h;
            let fm = f(&probe);
            probe[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

fn budgeted_gradient<F: FnMut(&[f64]) -> f64>(ev: &mut Evaluator<'_, F>, x: &[f64], h: f64) -> Option<Vec<f64>> {
    if ev.remaining() < 2 * x.len() {
        return None;
    }
    let mut f = |y: &[f64]| ev.eval(y).expect("budget checked");
    Some(central_difference(&mut f, x, h))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn bfgs<F: FnMut(&[f64]) -> f64>(ev: &mut Evaluator<'_, F>, x0: &[f64], p: &QuasiNewtonParams) {
    let d = x0.len();
    let mut x = x0.to_vec();
    let Some(mut fx) = (ev.used > 0).then_some(ev.best_f) else {
        return;
    };
    let Some(mut g) = budgeted_gradient(ev, &x, p.fd_step) else {
        return;
    };
    // Inverse Hessian approximation, row-major.
    let identity = |scale: f64| -> Vec<f64> {
        let mut h = vec![0.0; d * d];
        for i in 0..d {
            h[i * d + i] = scale;
        }
        h
    };
    let mut hinv = identity(1.0);
    let mut first = true;

    loop {
        if dot(&g, &g).sqrt() <= p.gtol {
            return;
        }
        let mut dir: Vec<f64> = (0..d)
            .map(|i| -(0..d).map(|j| hinv[i * d + j] * g[j]).sum::<f64>())
            .collect();
        let mut slope = dot(&g, &dir);
        if slope >= 0.0 {
            hinv = identity(1.0);
            dir = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }

        // Backtracking Armijo search.
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let xn: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + t * b).collect();
            let Some(fn_) = ev.eval(&xn) else { return };
            if fn_ <= fx + 1e-4 * t * slope {
                accepted = Some((xn, fn_));
                break;
            }
            t *= 0.5;
        }
        let Some((xn, fn_)) = accepted else { return };
        let Some(gn) = budgeted_gradient(ev, &xn, p.fd_step) else {
            return;
        };

        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let ys = dot(&y, &s);
        if ys > 1e-12 {
            if first {
                hinv = identity(ys / dot(&y, &y));
                first = false;
            }
            let rho = 1.0 / ys;
            let hy: Vec<f64> = (0..d).map(|i| (0..d).map(|j| hinv[i * d + j] * y[j]).sum()).collect();
            let yhy = dot(&y, &hy);
            for i in 0..d {
                for j in 0..d {
                    hinv[i * d + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        if (fx - fn_).abs() <= 1e-15 * fx.abs().max(1.0) && dot(&s, &s).sqrt() < 1e-12 {
            return;
        }
        x = xn;
        fx = fn_;
        g = gn;
    }
}

/// `k` start points drawn uniformly from `[0, 2pi)^dimension`.
pub fn start_points(dimension: usize, k: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng_from_seed(seed);
    (0..k)
        .map(|_| (0..dimension).map(|_| rng.random::<f64>() * TAU).collect())
        .collect()
}

/// Initial free parameters for a variant: the first of [`start_points`].
pub fn initial_parameters(v: &VariantSpec, seed: u64) -> Vec<f64> {
    start_points(v.free_parameter_count(), 1, seed)
        .pop()
        .expect("one point requested")
}

/// Seed used for restart `i` of [`multi_start`].
pub fn restart_seed(cfg: &OptimizerConfig, i: usize) -> u64 {
    derive_seed(cfg.seed, &[i as u64])
}

/// Run [`minimize`] from `k` random start points and keep the lowest
/// `best_value` (earliest restart on ties). `evaluations_used` of the
/// returned result is the total over all restarts.
pub fn multi_start<F>(
    mut objective: F,
    dimension: usize,
    k: usize,
    cfg: &OptimizerConfig,
    seed: u64,
) -> Result<OptimizationResult>
where
    F: FnMut(&[f64]) -> f64,
{
    if k == 0 {
        return Err(Error::invalid("multi-start needs at least one restart"));
    }
    if dimension == 0 {
        return Err(Error::invalid("cannot optimize over zero parameters"));
    }
    let mut best: Option<OptimizationResult> = None;
    let mut total = 0;
    for (i, x0) in start_points(dimension, k, seed).into_iter().enumerate() {
        let run_cfg = cfg.clone().with_seed(restart_seed(cfg, i));
        let r = minimize(&mut objective, &x0, &run_cfg)?;
        total += r.evaluations_used;
        if best.as_ref().is_none_or(|b| r.best_value < b.best_value) {
            best = Some(r);
        }
    }
    let mut best = best.expect("k >= 1");
    best.evaluations_used = total;
    Ok(best)
}
