//! Command-line front end for the QAOA 3SAT experiments.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use satqaoa::experiment::{
    self, read_records_csv, run_instance, threshold_reevaluate, write_json, write_records_csv, write_summary_csv,
    RunConfig, SweepConfig,
};
use satqaoa::optimizer::Method;
use satqaoa::resources::ResourceReport;
use satqaoa::{DecisionRule, Error, Formula, Result, VariantKind, VariantSpec};

#[derive(Parser)]
#[command(
    name = "satqaoa",
    version,
    about = "QAOA variants for 3SAT on an exact statevector simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random 3SAT formula in DIMACS CNF format.
    Generate(GenerateArgs),
    /// Run the full pipeline on one formula and print the decision.
    Solve(SolveArgs),
    /// Success-probability sweep over variants, depths and clause ratios.
    Sweep(SweepArgs),
    /// Classical satisfiable fraction of random formulas versus clause ratio.
    PhaseTransition(PhaseArgs),
    /// Success sweep at ratio 4.5 repeated for several optimizers.
    CompareOptimizers(CompareArgs),
    /// Re-decide a stored raw CSV under a threshold, without simulation.
    Reevaluate(ReevaluateArgs),
    /// Gate counts and depth estimate of an ansatz circuit, as JSON.
    Resources(ResourcesArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Master seed [default: 0, or the config file's seed].
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (generate, solve, resources) or directory (sweeps).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output file format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads; 0 uses all cores. Output does not depend on this.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Record per-run wall-clock time (makes outputs non-reproducible).
    #[arg(long)]
    record_timing: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of variables.
    #[arg(long)]
    n: usize,
    /// Number of clauses.
    #[arg(long)]
    m: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RunArgs {
    /// Classical optimizer: simplex, quasi-newton or spsa.
    #[arg(long)]
    optimizer: Option<Method>,
    /// Objective evaluations per restart.
    #[arg(long)]
    budget: Option<usize>,
    /// Optimizer restarts from random start points.
    #[arg(long)]
    restarts: Option<usize>,
    /// Measurement shots.
    #[arg(long)]
    shots: Option<u64>,
    /// Declare satisfiable when the satisfying fraction is at least this;
    /// default is any satisfying shot.
    #[arg(long)]
    threshold: Option<f64>,
}

impl Common {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

impl RunArgs {
    fn apply(&self, run: &mut RunConfig) {
        if let Some(m) = self.optimizer {
            run.optimizer.method = m;
        }
        if let Some(b) = self.budget {
            run.optimizer.max_evaluations = b;
        }
        if let Some(r) = self.restarts {
            run.restarts = r;
        }
        if let Some(s) = self.shots {
            run.shots = s;
        }
        if self.threshold.is_some() {
            run.threshold = self.threshold;
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS CNF input file.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    cnf: Option<PathBuf>,
    /// Random formula given as `n,m,seed`.
    #[arg(long, value_parser = parse_random)]
    random: Option<(usize, usize, u64)>,
    /// Ansatz variant: baseline, v1, v2 or v3.
    #[arg(long, default_value = "v3")]
    variant: VariantKind,
    /// Circuit depth.
    #[arg(long, default_value_t = 4)]
    p: usize,
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct GridArgs {
    /// TOML file with sweep settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of variables.
    #[arg(long)]
    n: Option<usize>,
    /// Clause-to-variable ratios, comma separated.
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// Random formulas per cell.
    #[arg(long)]
    instances: Option<usize>,
    /// Circuit depths, comma separated.
    #[arg(long, value_delimiter = ',')]
    depths: Option<Vec<usize>>,
    /// Variants, comma separated.
    #[arg(long, value_delimiter = ',')]
    variants: Option<Vec<VariantKind>>,
    #[command(flatten)]
    run: RunArgs,
}

impl GridArgs {
    fn config(&self, common: &Common) -> Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                    path: path.clone(),
                    source: e,
                })?;
                toml::from_str(&text).map_err(|e| Error::Format {
                    path: path.clone(),
                    message: e.to_string(),
                })?
            }
            None => SweepConfig::default(),
        };
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(a) = &self.alphas {
            cfg.alphas = a.clone();
        }
        if let Some(i) = self.instances {
            cfg.instances = i;
        }
        if let Some(d) = &self.depths {
            cfg.depths = d.clone();
        }
        if let Some(v) = &self.variants {
            cfg.variants = v.clone();
        }
        if let Some(seed) = common.seed {
            cfg.seed = seed;
        }
        self.run.apply(&mut cfg.run);
        cfg.run.record_timing |= common.record_timing;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct PhaseArgs {
    /// Variable counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    n: Vec<usize>,
    /// Clause-to-variable ratios, comma separated; default 1.5 to 8.0 in steps of 0.5.
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// Random formulas per ratio.
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CompareArgs {
    /// Optimizers to compare, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "simplex,quasi-newton,spsa")]
    methods: Vec<Method>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ReevaluateArgs {
    /// Raw records CSV written by `sweep` or `compare-optimizers`.
    #[arg(long)]
    input: PathBuf,
    /// Threshold in (0, 1].
    #[arg(long = "t")]
    t: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ResourcesArgs {
    /// Ansatz variant: baseline, v1, v2 or v3.
    #[arg(long)]
    variant: VariantKind,
    /// Circuit depth.
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// Formula file; otherwise a random formula with --n, --m and --seed.
    #[arg(long, conflicts_with_all = ["n", "m"])]
    cnf: Option<PathBuf>,
    /// Number of variables of the random formula.
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Number of clauses of the random formula.
    #[arg(long, required_unless_present = "cnf")]
    m: Option<usize>,
    #[command(flatten)]
    common: Common,
}

fn parse_random(s: &str) -> std::result::Result<(usize, usize, u64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, m, seed] = parts.as_slice() else {
        return Err(format!("expected n,m,seed, got `{s}`"));
    };
    let bad = |what: &str| format!("bad {what} in `{s}`");
    Ok((
        n.parse().map_err(|_| bad("n"))?,
        m.parse().map_err(|_| bad("m"))?,
        seed.parse().map_err(|_| bad("seed"))?,
    ))
}

fn read_cnf(path: &Path) -> Result<Formula> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Formula::from_dimacs(&text)
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn out_dir(common: &Common) -> Result<PathBuf> {
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    Ok(dir)
}

fn ext(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn write_sweep_outputs(
    dir: &Path,
    format: Format,
    records: &[experiment::RunRecord],
    summary: &[experiment::SummaryRow],
) -> Result<()> {
    let raw = dir.join(format!("raw.{}", ext(format)));
    let sum = dir.join(format!("summary.{}", ext(format)));
    match format {
        Format::Csv => {
            write_records_csv(&raw, records)?;
            write_summary_csv(&sum, summary)?;
        }
        Format::Json => {
            write_json(&raw, &records)?;
            write_json(&sum, &summary)?;
        }
    }
    eprintln!("wrote {} and {}", raw.display(), sum.display());
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<()> {
    let f = Formula::generate_random(a.n, a.m, a.common.seed())?;
    write_text(a.common.out.as_deref(), &f.to_dimacs())
}

fn solve(a: SolveArgs) -> Result<()> {
    let (f, formula_seed) = match (&a.cnf, a.random) {
        (Some(path), _) => (read_cnf(path)?, 0),
        (None, Some((n, m, seed))) => (Formula::generate_random(n, m, seed)?, seed),
        (None, None) => unreachable!("clap requires --cnf or --random"),
    };
    let v = VariantSpec::new(a.variant, a.p)?;
    let mut cfg = RunConfig {
        record_timing: a.common.record_timing,
        ..Default::default()
    };
    a.run.apply(&mut cfg);
    cfg.validate()?;
    let rec = run_instance(&f, formula_seed, v, &cfg, a.common.seed());
    if let Some(e) = &rec.error {
        return Err(Error::InvalidArgument(e.clone()));
    }
    let decision = rec.decision.expect("successful run has a decision");
    println!("decision: {}", decision.as_str());
    println!("satisfying proportion: {}", rec.sat_proportion);
    println!("expectation: {}", rec.expectation);
    let truth = satqaoa::Decision::from_bool(rec.ground_truth);
    println!("ground truth: {}", truth.as_str());
    println!("success: {}", rec.success);
    if let Some(params) = &rec.params {
        println!("free parameters: {:?}", params.free(&v));
    }
    if let Some(path) = &a.common.out {
        match a.common.format {
            Format::Csv => write_records_csv(path, std::slice::from_ref(&rec))?,
            Format::Json => write_json(path, &rec)?,
        }
    }
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<()> {
    let cfg = a.grid.config(&a.common)?;
    let dir = out_dir(&a.common)?;
    let res = experiment::success_sweep_with(&cfg, a.common.jobs, |cell, recs| {
        let ok = recs.iter().filter(|r| r.success).count();
        eprintln!(
            "{} p={} alpha={} m={}: {ok}/{} successful",
            cell.variant.as_str(),
            cell.p,
            cell.alpha,
            cell.m,
            recs.len()
        );
        Ok(())
    })?;
    write_sweep_outputs(&dir, a.common.format, &res.records, &res.summary)
}

fn phase_transition(a: PhaseArgs) -> Result<()> {
    let alphas = a
        .alphas
        .unwrap_or_else(|| (0..14).map(|i| 1.5 + 0.5 * f64::from(i)).collect());
    let pt = experiment::phase_transition_curve(&a.n, &alphas, a.instances, a.common.seed(), a.common.jobs)?;
    for c in &pt.cells {
        eprintln!(
            "n={} alpha={} m={}: {}/{} satisfiable",
            c.n, c.alpha, c.m, c.satisfiable, c.instances
        );
    }
    for c in &pt.crossings {
        match c.alpha {
            Some(x) => eprintln!("n={}: 50% crossing at alpha={x:.3}", c.n),
            None => eprintln!("n={}: no 50% crossing in range", c.n),
        }
    }
    let dir = out_dir(&a.common)?;
    let path = dir.join(format!("phase_transition.{}", ext(a.common.format)));
    match a.common.format {
        Format::Csv => experiment::write_phase_csv(&path, &pt)?,
        Format::Json => write_json(&path, &pt)?,
    }
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn compare(a: CompareArgs) -> Result<()> {
    let cfg = a.grid.config(&a.common)?;
    let (records, rows) = experiment::compare_optimizers(&cfg, &a.methods, a.common.jobs)?;
    for r in &rows {
        eprintln!(
            "{} {} p={}: {}/{} successful",
            r.method.as_str(),
            r.variant.as_str(),
            r.p,
            r.successes,
            r.instances
        );
    }
    let dir = out_dir(&a.common)?;
    let raw = dir.join(format!("raw.{}", ext(a.common.format)));
    let sum = dir.join(format!("comparison.{}", ext(a.common.format)));
    match a.common.format {
        Format::Csv => {
            write_records_csv(&raw, &records)?;
            experiment::write_comparison_csv(&sum, &rows)?;
        }
        Format::Json => {
            write_json(&raw, &records)?;
            write_json(&sum, &rows)?;
        }
    }
    eprintln!("wrote {} and {}", raw.display(), sum.display());
    Ok(())
}

fn reevaluate(a: ReevaluateArgs) -> Result<()> {
    let rule = DecisionRule::threshold(a.t)?;
    let records = read_records_csv(&a.input)?;
    let (redecided, summary) = threshold_reevaluate(&records, rule);
    for s in &summary {
        eprintln!(
            "{} p={} alpha={}: {}/{} successful",
            s.variant.as_str(),
            s.p,
            s.alpha,
            s.successes,
            s.instances
        );
    }
    let dir = out_dir(&a.common)?;
    write_sweep_outputs(&dir, a.common.format, &redecided, &summary)
}

fn resources(a: ResourcesArgs) -> Result<()> {
    let f = match (&a.cnf, a.m) {
        (Some(path), _) => read_cnf(path)?,
        (None, Some(m)) => Formula::generate_random(a.n, m, a.common.seed())?,
        (None, None) => unreachable!("clap requires --cnf or --m"),
    };
    let report = ResourceReport::new(&f, &VariantSpec::new(a.variant, a.p)?);
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    write_text(a.common.out.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a),
        Command::PhaseTransition(a) => phase_transition(a),
        Command::CompareOptimizers(a) => compare(a),
        Command::Reevaluate(a) => reevaluate(a),
        Command::Resources(a) => resources(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
