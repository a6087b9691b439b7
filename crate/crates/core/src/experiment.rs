//! Experiment pipeline and sweeps.
//!
//! One run: optimize the variant's expected cost (with restarts), prepare the
//! state at the best parameters, sample shots, decide satisfiability from the
//! samples, and score the decision against classical ground truth.
//!
//! Seeds. For grid cell `(variant, p, m)` and instance `i` under master seed
//! `s`:
//!
//! * formula seed `derive_seed(s, [FORMULA_TAG, n, m, i])`, shared by all
//!   variants and depths so every variant sees the same formulas;
//! * run seed `derive_seed(s, [variant, p, n, m, i])`, from which the
//!   optimizer start points (`[0]`), optimizer noise (`[1]`) and measurement
//!   (`[2]`) seeds are derived.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ansatz::{satisfying_fraction, Ansatz, Decision, DecisionRule, ParamVector, VariantKind, VariantSpec};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::optimizer::{multi_start, Method, OptimizerConfig};
use crate::oracle;
use crate::seed::derive_seed;
use crate::statevector::Counts;

const FORMULA_TAG: u64 = 0xF0F0_0001;

/// 97.5% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub optimizer: OptimizerConfig,
    pub restarts: usize,
    pub shots: u64,
    /// `None` decides satisfiable on any satisfying shot.
    pub threshold: Option<f64>,
    /// Fill `wall_ms`; off by default so outputs are reproducible.
    pub record_timing: bool,
    /// Keep measurement histograms in the records.
    pub keep_samples: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            optimizer: OptimizerConfig::default(),
            restarts: 1,
            shots: 1000,
            threshold: None,
            record_timing: false,
            keep_samples: false,
        }
    }
}

impl RunConfig {
    pub fn rule(&self) -> Result<DecisionRule> {
        DecisionRule::from_option(self.threshold)
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::invalid("restarts must be at least 1"));
        }
        if self.shots == 0 {
            return Err(Error::invalid("shots must be at least 1"));
        }
        self.rule()?;
        self.optimizer.validate()
    }
}

/// Outcome of one pipeline execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Formula seed; 0 for formulas read from files.
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub variant: VariantKind,
    pub p: usize,
    pub optimizer: Method,
    pub restarts: usize,
    pub shots: u64,
    pub params: Option<ParamVector>,
    /// Best value of the optimized cost.
    pub objective: Option<f64>,
    /// Exact `<H~>` (binary cost) at the optimized parameters.
    pub expectation: f64,
    /// Fraction of shots that satisfy the formula.
    pub sat_proportion: f64,
    /// `None` if the run failed.
    pub decision: Option<Decision>,
    pub ground_truth: bool,
    pub success: bool,
    pub wall_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Counts>,
}

impl RunRecord {
    /// Re-decide from the stored satisfying fraction.
    pub fn redecide(&self, rule: DecisionRule) -> RunRecord {
        let mut r = self.clone();
        if r.error.is_none() {
            let d = rule.apply(r.sat_proportion);
            r.decision = Some(d);
            r.success = d.is_sat() == r.ground_truth;
        }
        r
    }

    fn cell(&self) -> CellKey {
        CellKey {
            variant: self.variant,
            p: self.p,
            alpha: AlphaKey(self.alpha.to_bits()),
        }
    }
}

/// Execute the pipeline on one formula. Failures are recorded, not raised.
pub fn run_instance(f: &Formula, formula_seed: u64, v: VariantSpec, cfg: &RunConfig, run_seed: u64) -> RunRecord {
    let start = Instant::now();
    let mut rec = RunRecord {
        seed: formula_seed,
        n: f.num_vars(),
        m: f.num_clauses(),
        alpha: f.ratio(),
        variant: v.kind,
        p: v.p,
        optimizer: cfg.optimizer.method,
        restarts: cfg.restarts,
        shots: cfg.shots,
        params: None,
        objective: None,
        expectation: f64::NAN,
        sat_proportion: 0.0,
        decision: None,
        ground_truth: false,
        success: false,
        wall_ms: 0,
        error: None,
        samples: None,
    };
    if let Err(e) = run_pipeline(f, v, cfg, run_seed, &mut rec) {
        rec.error = Some(e.to_string());
        rec.decision = None;
        rec.success = false;
    }
    if cfg.record_timing {
        rec.wall_ms = start.elapsed().as_millis() as u64;
    }
    rec
}

fn run_pipeline(f: &Formula, v: VariantSpec, cfg: &RunConfig, run_seed: u64, rec: &mut RunRecord) -> Result<()> {
    cfg.validate()?;
    let rule = cfg.rule()?;
    rec.ground_truth = oracle::is_satisfiable(f).0;

    let ansatz = Ansatz::new(f, v)?;
    let objective = |x: &[f64]| ansatz.objective(x).expect("optimizer keeps the free-parameter length");
    let opt_cfg = cfg.optimizer.clone().with_seed(derive_seed(run_seed, &[1]));
    let best = multi_start(
        objective,
        v.free_parameter_count(),
        cfg.restarts,
        &opt_cfg,
        derive_seed(run_seed, &[0]),
    )?;
    let theta = ParamVector::from_free(&v, &best.best_params)?;

    let psi = ansatz.prepare_state(&theta)?;
    rec.expectation = psi.expectation(ansatz.binary_table())?;
    let counts = psi.sample(cfg.shots, derive_seed(run_seed, &[2]))?;
    let s = satisfying_fraction(f, &counts)?;
    let decision = rule.apply(s);

    rec.params = Some(theta);
    rec.objective = Some(best.best_value);
    rec.sat_proportion = s;
    rec.decision = Some(decision);
    rec.success = decision.is_sat() == rec.ground_truth;
    if cfg.keep_samples {
        rec.samples = Some(counts);
    }
    Ok(())
}

fn default_alphas() -> Vec<f64> {
    (0..14).map(|i| 1.5 + 0.5 * f64::from(i)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub n: usize,
    pub alphas: Vec<f64>,
    pub instances: usize,
    pub depths: Vec<usize>,
    pub variants: Vec<VariantKind>,
    pub run: RunConfig,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n: 10,
            alphas: default_alphas(),
            instances: 50,
            depths: vec![2, 4, 6, 8, 10],
            variants: VariantKind::ALL.to_vec(),
            run: RunConfig::default(),
            seed: 0,
        }
    }
}

/// One grid cell of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub variant: VariantKind,
    pub p: usize,
    pub alpha: f64,
    pub m: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if self.instances == 0 {
            return Err(Error::invalid("instances must be at least 1"));
        }
        if self.alphas.is_empty() || self.depths.is_empty() || self.variants.is_empty() {
            return Err(Error::invalid("alphas, depths and variants must be non-empty"));
        }
        if self.alphas.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::invalid("alphas must be finite and non-negative"));
        }
        if self.depths.contains(&0) {
            return Err(Error::invalid("depths must be at least 1"));
        }
        self.run.validate()
    }

    /// `round(alpha * n)`.
    pub fn clauses_for(&self, alpha: f64) -> usize {
        (alpha * self.n as f64).round() as usize
    }

    /// Cells in output order: variant, then depth, then alpha.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &variant in &self.variants {
            for &p in &self.depths {
                for &alpha in &self.alphas {
                    out.push(Cell {
                        variant,
                        p,
                        alpha,
                        m: self.clauses_for(alpha),
                    });
                }
            }
        }
        out
    }

    pub fn formula_seed(&self, m: usize, instance: usize) -> u64 {
        derive_seed(self.seed, &[FORMULA_TAG, self.n as u64, m as u64, instance as u64])
    }

    pub fn run_seed(&self, variant: VariantKind, p: usize, m: usize, instance: usize) -> u64 {
        derive_seed(
            self.seed,
            &[variant as u64, p as u64, self.n as u64, m as u64, instance as u64],
        )
    }

    /// All records of one cell, in instance order.
    pub fn run_cell(&self, cell: &Cell) -> Vec<RunRecord> {
        let spec = VariantSpec {
            kind: cell.variant,
            p: cell.p,
        };
        (0..self.instances)
            .into_par_iter()
            .map(|i| {
                let fseed = self.formula_seed(cell.m, i);
                let run_seed = self.run_seed(cell.variant, cell.p, cell.m, i);
                let mut rec = match Formula::generate_random(self.n, cell.m, fseed) {
                    Ok(f) => run_instance(&f, fseed, spec, &self.run, run_seed),
                    Err(e) => failed_record(self, cell, fseed, e),
                };
                rec.alpha = cell.alpha;
                rec
            })
            .collect()
    }
}

fn failed_record(cfg: &SweepConfig, cell: &Cell, seed: u64, e: Error) -> RunRecord {
    RunRecord {
        seed,
        n: cfg.n,
        m: cell.m,
        alpha: cell.alpha,
        variant: cell.variant,
        p: cell.p,
        optimizer: cfg.run.optimizer.method,
        restarts: cfg.run.restarts,
        shots: cfg.run.shots,
        params: None,
        objective: None,
        expectation: f64::NAN,
        sat_proportion: 0.0,
        decision: None,
        ground_truth: false,
        success: false,
        wall_ms: 0,
        error: Some(e.to_string()),
        samples: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct AlphaKey(u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct CellKey {
    variant: VariantKind,
    p: usize,
    alpha: AlphaKey,
}

/// Success statistics of one `(variant, p, alpha)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub variant: VariantKind,
    pub p: usize,
    pub alpha: f64,
    pub instances: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Group records by cell. Rows are ordered by variant, depth, alpha
/// regardless of record order.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut cells: BTreeMap<CellKey, (usize, usize)> = BTreeMap::new();
    for r in records {
        let e = cells.entry(r.cell()).or_insert((0, 0));
        e.0 += 1;
        e.1 += usize::from(r.success);
    }
    cells
        .into_iter()
        .map(|(k, (instances, successes))| {
            let (ci_low, ci_high) = wilson_interval(successes, instances);
            SummaryRow {
                variant: k.variant,
                p: k.p,
                alpha: f64::from_bits(k.alpha.0),
                instances,
                successes,
                success_rate: successes as f64 / instances as f64,
                ci_low,
                ci_high,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub records: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
}

/// Run every cell with `jobs` worker threads (0 = rayon default). Output is
/// identical for any `jobs`.
pub fn success_sweep(cfg: &SweepConfig, jobs: usize) -> Result<SweepResult> {
    success_sweep_with(cfg, jobs, |_, _| Ok(()))
}

/// As [`success_sweep`], calling `on_cell` after each finished cell.
pub fn success_sweep_with<F>(cfg: &SweepConfig, jobs: usize, mut on_cell: F) -> Result<SweepResult>
where
    F: FnMut(&Cell, &[RunRecord]) -> Result<()>,
{
    cfg.validate()?;
    let pool = thread_pool(jobs)?;
    let mut records = Vec::new();
    for cell in cfg.cells() {
        let recs = pool.install(|| cfg.run_cell(&cell));
        on_cell(&cell, &recs)?;
        records.extend(recs);
    }
    let summary = summarize(&records);
    Ok(SweepResult { records, summary })
}

pub fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::invalid(format!("cannot build thread pool: {e}")))
}

/// Re-decide every record with `rule` without touching the simulator.
pub fn threshold_reevaluate(records: &[RunRecord], rule: DecisionRule) -> (Vec<RunRecord>, Vec<SummaryRow>) {
    let redecided: Vec<RunRecord> = records.iter().map(|r| r.redecide(rule)).collect();
    let summary = summarize(&redecided);
    (redecided, summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub method: Method,
    pub variant: VariantKind,
    pub p: usize,
    pub alpha: f64,
    pub instances: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

pub const COMPARISON_ALPHA: f64 = 4.5;

/// Success sweep per optimizer with the ratio fixed at 4.5.
pub fn compare_optimizers(
    cfg: &SweepConfig,
    methods: &[Method],
    jobs: usize,
) -> Result<(Vec<RunRecord>, Vec<ComparisonRow>)> {
    if methods.is_empty() {
        return Err(Error::invalid("no optimizers to compare"));
    }
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for &method in methods {
        let mut c = cfg.clone();
        c.alphas = vec![COMPARISON_ALPHA];
        c.run.optimizer.method = method;
        let res = success_sweep(&c, jobs)?;
        rows.extend(res.summary.into_iter().map(|s| ComparisonRow {
            method,
            variant: s.variant,
            p: s.p,
            alpha: s.alpha,
            instances: s.instances,
            successes: s.successes,
            success_rate: s.success_rate,
            ci_low: s.ci_low,
            ci_high: s.ci_high,
        }));
        records.extend(res.records);
    }
    Ok((records, rows))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub n: usize,
    pub alpha: f64,
    pub m: usize,
    pub instances: usize,
    pub satisfiable: usize,
    pub proportion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub n: usize,
    /// Interpolated ratio where the satisfiable proportion falls through 0.5.
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTransition {
    pub cells: Vec<PhaseCell>,
    pub crossings: Vec<Crossing>,
}

/// Classical satisfiable fraction over a `(n, alpha)` grid.
pub fn phase_transition_curve(
    ns: &[usize],
    alphas: &[f64],
    instances: usize,
    seed: u64,
    jobs: usize,
) -> Result<PhaseTransition> {
    if instances == 0 {
        return Err(Error::invalid("instances must be at least 1"));
    }
    if ns.contains(&0) {
        return Err(Error::invalid("n must be at least 1"));
    }
    let mut sorted = alphas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pool = thread_pool(jobs)?;
    let mut cells = Vec::new();
    let mut crossings = Vec::new();
    for &n in ns {
        let row: Vec<PhaseCell> = sorted
            .iter()
            .map(|&alpha| {
                let m = (alpha * n as f64).round() as usize;
                let sat = pool.install(|| {
                    (0..instances)
                        .into_par_iter()
                        .filter(|&i| {
                            let s = derive_seed(seed, &[FORMULA_TAG, n as u64, m as u64, i as u64]);
                            let f = Formula::generate_random(n, m, s).expect("n >= 1");
                            oracle::is_satisfiable(&f).0
                        })
                        .count()
                });
                PhaseCell {
                    n,
                    alpha,
                    m,
                    instances,
                    satisfiable: sat,
                    proportion: sat as f64 / instances as f64,
                }
            })
            .collect();
        crossings.push(Crossing {
            n,
            alpha: half_crossing(&row),
        });
        cells.extend(row);
    }
    Ok(PhaseTransition { cells, crossings })
}

/// Linear interpolation across the first bracketing pair with
/// `prop[i] >= 0.5 > prop[i+1]`.
pub fn half_crossing(row: &[PhaseCell]) -> Option<f64> {
    row.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        (a.proportion >= 0.5 && b.proportion < 0.5).then(|| {
            let t = (a.proportion - 0.5) / (a.proportion - b.proportion);
            a.alpha + t * (b.alpha - a.alpha)
        })
    })
}

/// Flat CSV row of a [`RunRecord`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub variant: VariantKind,
    pub p: usize,
    pub optimizer: Method,
    pub restarts: usize,
    pub shots: u64,
    pub expectation: f64,
    pub sat_proportion: f64,
    pub decision: String,
    pub ground_truth: String,
    pub success: bool,
    pub wall_ms: u64,
}

pub const RECORD_COLUMNS: [&str; 15] = [
    "seed",
    "n",
    "m",
    "alpha",
    "variant",
    "p",
    "optimizer",
    "restarts",
    "shots",
    "expectation",
    "sat_proportion",
    "decision",
    "ground_truth",
    "success",
    "wall_ms",
];

pub const SUMMARY_COLUMNS: [&str; 8] = [
    "variant",
    "p",
    "alpha",
    "instances",
    "successes",
    "success_rate",
    "ci_low",
    "ci_high",
];

impl From<&RunRecord> for RecordRow {
    fn from(r: &RunRecord) -> Self {
        RecordRow {
            seed: r.seed,
            n: r.n,
            m: r.m,
            alpha: r.alpha,
            variant: r.variant,
            p: r.p,
            optimizer: r.optimizer,
            restarts: r.restarts,
            shots: r.shots,
            expectation: r.expectation,
            sat_proportion: r.sat_proportion,
            decision: r.decision.map_or("error", Decision::as_str).to_string(),
            ground_truth: Decision::from_bool(r.ground_truth).as_str().to_string(),
            success: r.success,
            wall_ms: r.wall_ms,
        }
    }
}

impl RecordRow {
    fn into_record(self, line: usize) -> Result<RunRecord> {
        let decision = match self.decision.as_str() {
            "error" => None,
            d => Some(
                d.parse()
                    .map_err(|_| Error::parse(line, format!("bad decision `{d}`")))?,
            ),
        };
        let gt: Decision = self
            .ground_truth
            .parse()
            .map_err(|_| Error::parse(line, format!("bad ground truth `{}`", self.ground_truth)))?;
        Ok(RunRecord {
            seed: self.seed,
            n: self.n,
            m: self.m,
            alpha: self.alpha,
            variant: self.variant,
            p: self.p,
            optimizer: self.optimizer,
            restarts: self.restarts,
            shots: self.shots,
            params: None,
            objective: None,
            expectation: self.expectation,
            sat_proportion: self.sat_proportion,
            error: decision.is_none().then(|| "failed run".to_string()),
            decision,
            ground_truth: gt.is_sat(),
            success: self.success,
            wall_ms: self.wall_ms,
            samples: None,
        })
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Format {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    }
}

/// Write rows with an explicit header, so empty tables still get one.
fn write_csv_rows<T: Serialize>(path: &Path, header: &[&str], rows: &[T], append: bool) -> Result<()> {
    let fresh = !append || std::fs::metadata(path).map_or(true, |m| m.len() == 0);
    let file = if append {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map(BufWriter::new)
            .map_err(|e| Error::io(path, e))?
    } else {
        create(path)?
    };
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if fresh {
        w.write_record(header).map_err(|e| csv_err(path, e))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_records_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let rows: Vec<RecordRow> = records.iter().map(RecordRow::from).collect();
    write_csv_rows(path, &RECORD_COLUMNS, &rows, false)
}

/// Append rows, writing the header only into an empty or new file.
pub fn append_records_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let rows: Vec<RecordRow> = records.iter().map(RecordRow::from).collect();
    write_csv_rows(path, &RECORD_COLUMNS, &rows, true)
}

pub fn read_records_csv(path: &Path) -> Result<Vec<RunRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    if headers.iter().ne(RECORD_COLUMNS.iter().copied()) {
        return Err(Error::parse(1, format!("unexpected columns in {}", path.display())));
    }
    rdr.deserialize::<RecordRow>()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| csv_err(path, e))?.into_record(i + 2))
        .collect()
}

pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    write_csv_rows(path, &SUMMARY_COLUMNS, rows, false)
}

pub fn write_comparison_csv(path: &Path, rows: &[ComparisonRow]) -> Result<()> {
    let header = [
        "method",
        "variant",
        "p",
        "alpha",
        "instances",
        "successes",
        "success_rate",
        "ci_low",
        "ci_high",
    ];
    write_csv_rows(path, &header, rows, false)
}

pub fn write_phase_csv(path: &Path, pt: &PhaseTransition) -> Result<()> {
    let header = ["n", "alpha", "m", "instances", "satisfiable", "proportion"];
    write_csv_rows(path, &header, &pt.cells, false)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Clause, Literal};
    use std::f64::consts::PI;

    fn small_cfg() -> RunConfig {
        RunConfig {
            optimizer: OptimizerConfig::new(Method::Simplex).with_budget(40),
            ..Default::default()
        }
    }

    #[test]
    fn unsatisfiable_formula_is_always_decided_correctly() {
        let l = Literal::pos(0);
        let nl = Literal::neg(0);
        let f = Formula::new(4, vec![Clause::new(l, l, l), Clause::new(nl, nl, nl)]).unwrap();
        for kind in [VariantKind::V1, VariantKind::V2, VariantKind::V3] {
            let r = run_instance(&f, 0, VariantSpec::new(kind, 2).unwrap(), &small_cfg(), 5);
            assert_eq!(r.decision, Some(Decision::Unsatisfiable));
            assert!(!r.ground_truth);
            assert!(r.success);
            assert_eq!(r.sat_proportion, 0.0);
            assert!((r.expectation - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_formula_is_satisfiable() {
        let f = Formula::new(3, vec![]).unwrap();
        for kind in VariantKind::ALL {
            let r = run_instance(&f, 0, VariantSpec::new(kind, 1).unwrap(), &small_cfg(), 1);
            assert_eq!(r.sat_proportion, 1.0);
            assert_eq!(r.decision, Some(Decision::Satisfiable));
            assert!(r.success);
        }
    }

    #[test]
    fn bad_config_marks_record_failed() {
        let f = Formula::generate_random(3, 5, 0).unwrap();
        let cfg = RunConfig {
            restarts: 0,
            ..small_cfg()
        };
        let r = run_instance(&f, 0, VariantSpec::new(VariantKind::V1, 1).unwrap(), &cfg, 0);
        assert!(r.error.is_some());
        assert!(!r.success);
        assert_eq!(RecordRow::from(&r).decision, "error");
    }

    #[test]
    fn v2_record_has_p_free_parameters() {
        let f = Formula::generate_random(5, 20, 2).unwrap();
        let v = VariantSpec::new(VariantKind::V2, 3).unwrap();
        let r = run_instance(&f, 0, v, &small_cfg(), 9);
        let params = r.params.unwrap();
        assert_eq!(params.free(&v).len(), 3);
        assert!(params.gammas.iter().all(|&g| g == PI));
    }

    #[test]
    fn wilson_interval_reference_values() {
        // Reference: statsmodels proportion_confint(8, 10, method="wilson").
        let (lo, hi) = wilson_interval(8, 10);
        assert!((lo - 0.490_162_4).abs() < 1e-6, "{lo}");
        assert!((hi - 0.943_317_1).abs() < 1e-6, "{hi}");
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
        let (lo, hi) = wilson_interval(5, 5);
        assert!(hi == 1.0 && lo > 0.5);
    }

    #[test]
    fn single_instance_cells_are_zero_or_one() {
        let cfg = SweepConfig {
            n: 4,
            alphas: vec![2.0, 6.0],
            instances: 1,
            depths: vec![1],
            variants: vec![VariantKind::V2],
            run: small_cfg(),
            seed: 3,
        };
        let res = success_sweep(&cfg, 1).unwrap();
        assert_eq!(res.summary.len(), 2);
        for row in &res.summary {
            assert!(row.success_rate == 0.0 || row.success_rate == 1.0);
        }
    }

    #[test]
    fn crossing_interpolates() {
        let mk = |alpha, proportion| PhaseCell {
            n: 5,
            alpha,
            m: 0,
            instances: 10,
            satisfiable: 0,
            proportion,
        };
        let row = vec![mk(3.0, 0.9), mk(4.0, 0.7), mk(5.0, 0.3), mk(6.0, 0.1)];
        assert!((half_crossing(&row).unwrap() - 4.5).abs() < 1e-12);
        assert_eq!(half_crossing(&[mk(1.0, 0.9), mk(2.0, 0.8)]), None);
    }

    #[test]
    fn empty_table_writes_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("raw.csv");
        write_records_csv(&p, &[]).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap(),
            format!("{}\n", RECORD_COLUMNS.join(","))
        );
        let s = dir.path().join("summary.csv");
        write_summary_csv(&s, &[]).unwrap();
        assert_eq!(
            std::fs::read_to_string(&s).unwrap(),
            format!("{}\n", SUMMARY_COLUMNS.join(","))
        );
    }
}
