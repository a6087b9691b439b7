mod common;

use std::f64::consts::{PI, TAU};

use common::*;
use proptest::prelude::*;
use satqaoa::ansatz::{max3sat_z_expansion, z_diagonal, DecisionRule};
use satqaoa::experiment::{summarize, threshold_reevaluate, RunConfig};
use satqaoa::formula::Assignment;
use satqaoa::optimizer::{multi_start, Method, OptimizerConfig};
use satqaoa::resources::count_ansatz;
use satqaoa::{oracle, Ansatz, CostKind, CostTable, Formula, ParamVector, VariantKind, VariantSpec};

fn formula_strategy(max_n: usize, max_m: usize) -> impl Strategy<Value = Formula> {
    (1..=max_n, 0..=max_m, any::<u64>()).prop_map(|(n, m, seed)| Formula::generate_random(n, m, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cost_views_agree(f in formula_strategy(8, 40), x in any::<u64>()) {
        let a = Assignment::from_index(f.num_vars(), x);
        let c = f.count_unsatisfied(&a).unwrap();
        let sat = f.evaluate(&a).unwrap();
        let bin = f.binary_cost(&a).unwrap();
        prop_assert_eq!(c == 0, sat);
        prop_assert_eq!(sat, bin == 0);
    }

    #[test]
    fn dimacs_round_trip_preserves_semantics(f in formula_strategy(8, 30)) {
        let g = Formula::from_dimacs(&f.to_dimacs()).unwrap();
        prop_assert_eq!(&g, &f);
    }

    #[test]
    fn ground_truth_consistency(f in formula_strategy(10, 60)) {
        let (sat, w) = oracle::is_satisfiable(&f);
        let m_opt = oracle::max_sat_optimum(&f).unwrap();
        prop_assert_eq!(sat, m_opt == f.num_clauses());
        prop_assert_eq!(sat, oracle::dpll(&f).is_some());
        if let Some(w) = w {
            prop_assert!(f.evaluate(&w).unwrap());
        }
    }

    #[test]
    fn z_expansion_equals_violation_count(f in formula_strategy(4, 12)) {
        let diag = z_diagonal(&max3sat_z_expansion(&f).unwrap(), f.num_vars());
        let table = CostTable::from_formula(&f, CostKind::MaxSat).unwrap();
        prop_assert_eq!(diag.as_slice(), table.values());
    }

    #[test]
    fn gamma_shift_by_two_pi_leaves_cost_unchanged(
        f in formula_strategy(5, 25),
        kind_idx in 0usize..2,
        p in 1usize..4,
        seed in any::<u64>(),
    ) {
        // Only the free-gamma variants have gammas to shift.
        let kind = [VariantKind::Baseline, VariantKind::V1][kind_idx];
        let v = VariantSpec::new(kind, p).unwrap();
        let ansatz = Ansatz::new(&f, v).unwrap();
        let free = satqaoa::optimizer::initial_parameters(&v, seed);
        let theta = ParamVector::from_free(&v, &free).unwrap();
        let mut shifted = theta.clone();
        for g in &mut shifted.gammas {
            *g += TAU;
        }
        let a = ansatz.expected_cost(&theta).unwrap();
        let b = ansatz.expected_cost(&shifted).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn v1_at_pi_is_bitwise_v2(f in formula_strategy(6, 30), betas in prop::collection::vec(-PI..PI, 1..5)) {
        let p = betas.len();
        let v1 = Ansatz::new(&f, VariantSpec::new(VariantKind::V1, p).unwrap()).unwrap();
        let v2 = Ansatz::new(&f, VariantSpec::new(VariantKind::V2, p).unwrap()).unwrap();
        let theta = ParamVector { gammas: vec![PI; p], betas };
        prop_assert_eq!(v1.prepare_state(&theta).unwrap(), v2.prepare_state(&theta).unwrap());
    }

    #[test]
    fn resource_counts_are_affine_in_p(f in formula_strategy(8, 40), kind_idx in 0usize..4) {
        let kind = VariantKind::ALL[kind_idx];
        let c = |p| count_ansatz(&f, &VariantSpec::new(kind, p).unwrap());
        let (c1, c2, c3) = (c(1), c(2), c(3));
        prop_assert_eq!(c2.total_gates() - c1.total_gates(), c3.total_gates() - c2.total_gates());
        prop_assert_eq!(c2.depth - c1.depth, c3.depth - c2.depth);
        prop_assert_eq!(c2.h - c1.h, c3.h - c2.h);
        prop_assert_eq!(c2.x - c1.x, c3.x - c2.x);
        prop_assert_eq!(c2.rz - c1.rz, c3.rz - c2.rz);
        prop_assert_eq!(c1.ancilla_qubits, c3.ancilla_qubits);
    }

    #[test]
    fn decisions_are_monotone_in_threshold(s_k in 0u64..=1000, t1 in 0.001f64..1.0, dt in 0.0f64..0.5) {
        let s = s_k as f64 / 1000.0;
        let t2 = (t1 + dt).min(1.0);
        let lo = DecisionRule::threshold(t1).unwrap().apply(s).is_sat();
        let hi = DecisionRule::threshold(t2).unwrap().apply(s).is_sat();
        prop_assert!(lo || !hi);
        prop_assert!(DecisionRule::AtLeastOne.apply(s).is_sat() || !lo);
    }
}

#[test]
fn every_assignment_satisfying_gives_zero_cost() {
    // Each clause contains a complementary pair.
    let f = Formula::from_dimacs("p cnf 3 2\n1 -1 2 0\n-3 3 1 0\n").unwrap();
    assert_eq!(count_solutions(&f), 8);
    for kind in [VariantKind::V1, VariantKind::V2, VariantKind::V3] {
        for p in 1..=3 {
            let v = VariantSpec::new(kind, p).unwrap();
            let a = Ansatz::new(&f, v).unwrap();
            for seed in 0..5 {
                let free = satqaoa::optimizer::initial_parameters(&v, seed);
                assert_eq!(a.objective(&free).unwrap(), 0.0);
            }
        }
    }
}

#[test]
fn multi_start_finds_global_minimum_of_multimodal_function() {
    // Global minimum 0 at pi, local minimum 2 at 0.
    let f = |x: &[f64]| {
        let u = x[0] - PI;
        1.0 - u.cos() + 0.5 * (1.0 - (2.0 * u).cos())
    };
    let cfg = OptimizerConfig::new(Method::Simplex);
    let hits = (0..100u64)
        .filter(|&seed| multi_start(f, 1, 5, &cfg, seed).unwrap().best_value < 1e-2)
        .count();
    assert!(hits >= 95, "{hits}/100");
}

#[test]
fn summary_is_independent_of_record_order() {
    let cfg = satqaoa::experiment::SweepConfig {
        n: 4,
        alphas: vec![2.0, 5.0],
        instances: 6,
        depths: vec![1, 2],
        variants: vec![VariantKind::V1, VariantKind::V3],
        run: RunConfig {
            optimizer: OptimizerConfig::new(Method::Spsa).with_budget(20),
            shots: 20,
            ..Default::default()
        },
        seed: 77,
    };
    let res = satqaoa::experiment::success_sweep(&cfg, 2).unwrap();
    let mut shuffled = res.records.clone();
    shuffled.reverse();
    shuffled.rotate_left(7);
    assert_eq!(summarize(&shuffled), res.summary);

    // Threshold replays only move decisions in one direction.
    let (t10, _) = threshold_reevaluate(&res.records, DecisionRule::threshold(0.10).unwrap());
    let (t25, _) = threshold_reevaluate(&res.records, DecisionRule::threshold(0.25).unwrap());
    for ((d, a), b) in res.records.iter().zip(&t10).zip(&t25) {
        assert!(!b.decision.unwrap().is_sat() || a.decision.unwrap().is_sat());
        assert!(!a.decision.unwrap().is_sat() || d.decision.unwrap().is_sat());
        if !d.ground_truth {
            assert!(d.success <= a.success && a.success <= b.success);
        }
    }
}

#[test]
fn failed_satisfiable_runs_sampled_no_solution() {
    let cfg = RunConfig {
        optimizer: OptimizerConfig::new(Method::Simplex).with_budget(15),
        shots: 4,
        keep_samples: true,
        ..Default::default()
    };
    let mut checked = 0;
    for seed in 0..60u64 {
        let f = Formula::generate_random(6, 26, seed).unwrap();
        for kind in [VariantKind::V1, VariantKind::V2, VariantKind::V3] {
            let r = satqaoa::experiment::run_instance(&f, seed, VariantSpec::new(kind, 1).unwrap(), &cfg, seed);
            if r.ground_truth && !r.success {
                checked += 1;
                let samples = r.samples.as_ref().unwrap();
                for (x, _) in samples.assignments() {
                    assert!(!f.evaluate(&x).unwrap());
                }
            }
        }
    }
    assert!(checked > 0, "no failed satisfiable runs to inspect");
}
