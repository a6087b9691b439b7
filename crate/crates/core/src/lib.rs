//! QAOA for 3SAT with amplitude-amplification-inspired variants, simulated
//! exactly on a dense statevector.
//!
//! * [`formula`]: 3SAT formulas, random generation, DIMACS I/O.
//! * [`oracle`]: classical satisfiability and MAX-3SAT optimum.
//! * [`statevector`]: phase, mixer, expectation and sampling kernels.
//! * [`ansatz`]: the baseline and variants V1-V3, decision rules.
//! * [`optimizer`]: SPSA, Nelder-Mead, finite-difference BFGS, multi-start.
//! * [`resources`]: gate counts and depth estimates.
//! * [`experiment`]: run pipeline, sweeps, phase transition, exports.

pub mod ansatz;
pub mod error;
pub mod experiment;
pub mod formula;
pub mod optimizer;
pub mod oracle;
pub mod resources;
pub mod seed;
pub mod statevector;

pub use ansatz::{Ansatz, Decision, DecisionRule, MixerKind, ParamVector, VariantKind, VariantSpec};
pub use error::{Error, Result};
pub use formula::{Assignment, Clause, Formula, Literal, Polarity};
pub use optimizer::{Method, OptimizationResult, OptimizerConfig};
pub use statevector::{CostKind, CostTable, Counts, StateVector};
