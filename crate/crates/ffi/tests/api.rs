use std::ffi::{CStr, CString};
use std::ptr;

use satqaoa_ffi::*;

fn last_error() -> String {
    let p = satqaoa_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn generate(n: usize, m: usize, seed: u64) -> *mut SatqaoaFormula {
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { satqaoa_formula_generate(n, m, seed, &mut f) },
        SatqaoaStatus::Ok
    );
    f
}

#[test]
fn formula_round_trip() {
    let f = generate(6, 20, 3);
    unsafe {
        assert_eq!(satqaoa_formula_num_vars(f), 6);
        assert_eq!(satqaoa_formula_num_clauses(f), 20);
        let mut text = ptr::null_mut();
        assert_eq!(satqaoa_formula_to_dimacs(f, &mut text), SatqaoaStatus::Ok);
        let mut g = ptr::null_mut();
        assert_eq!(satqaoa_formula_from_dimacs(text, &mut g), SatqaoaStatus::Ok);
        assert_eq!(satqaoa_formula_num_clauses(g), 20);
        let (mut a, mut b) = (false, false);
        satqaoa_formula_is_satisfiable(f, &mut a);
        satqaoa_formula_is_satisfiable(g, &mut b);
        assert_eq!(a, b);
        satqaoa_string_free(text);
        satqaoa_formula_free(f);
        satqaoa_formula_free(g);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(
            satqaoa_formula_generate(0, 1, 1, &mut f),
            SatqaoaStatus::InvalidArgument
        );
        assert!(f.is_null());
        let bad = CString::new("p cnf 2 1\n1 7 2 0\n").unwrap();
        assert_eq!(
            satqaoa_formula_from_dimacs(bad.as_ptr(), &mut f),
            SatqaoaStatus::ParseError
        );
        assert!(last_error().contains("line 2"));
        assert_eq!(
            satqaoa_formula_generate(30, 1, 1, ptr::null_mut()),
            SatqaoaStatus::NullPointer
        );
        let mut sat = false;
        assert_eq!(
            satqaoa_formula_is_satisfiable(ptr::null(), &mut sat),
            SatqaoaStatus::NullPointer
        );
        assert_eq!(satqaoa_formula_num_vars(ptr::null()), 0);
        satqaoa_formula_free(ptr::null_mut());
        satqaoa_string_free(ptr::null_mut());
    }
    let f = generate(3, 4, 1);
    unsafe {
        // Baseline at p = 1 needs two free parameters.
        let mut e = 0.0;
        let one = [0.5];
        assert_eq!(
            satqaoa_expected_cost(f, SatqaoaVariant::Baseline, 1, one.as_ptr(), 1, &mut e),
            SatqaoaStatus::InvalidArgument
        );
        let mut buf = [0.0; 4];
        let betas = [0.3];
        assert_eq!(
            satqaoa_probabilities(f, SatqaoaVariant::V3, 1, betas.as_ptr(), 1, buf.as_mut_ptr(), 4),
            SatqaoaStatus::BufferTooSmall
        );
        // A successful call clears the message.
        assert_eq!(
            satqaoa_expected_cost(f, SatqaoaVariant::V3, 1, betas.as_ptr(), 1, &mut e),
            SatqaoaStatus::Ok
        );
        assert!(satqaoa_last_error_message().is_null());
        satqaoa_formula_free(f);
    }
}

#[test]
fn probabilities_match_core_and_expectation() {
    let f = generate(4, 12, 9);
    let params = [0.4, 1.1, 0.2, 0.9];
    let mut buf = vec![0.0; 16];
    let mut e = 0.0;
    unsafe {
        assert_eq!(
            satqaoa_probabilities(f, SatqaoaVariant::V1, 2, params.as_ptr(), 4, buf.as_mut_ptr(), 16),
            SatqaoaStatus::Ok
        );
        assert_eq!(
            satqaoa_expected_cost(f, SatqaoaVariant::V1, 2, params.as_ptr(), 4, &mut e),
            SatqaoaStatus::Ok
        );
    }
    let core = satqaoa::Formula::generate_random(4, 12, 9).unwrap();
    let v = satqaoa::VariantSpec::new(satqaoa::VariantKind::V1, 2).unwrap();
    let theta = satqaoa::ParamVector::from_free(&v, &params).unwrap();
    let want = satqaoa::ansatz::prepare_state(&core, v, &theta)
        .unwrap()
        .probabilities();
    assert_eq!(buf, want);
    let unsat_mass: f64 = (0..16u64)
        .filter(|&x| !core.evaluate(&satqaoa::Assignment::from_index(4, x)).unwrap())
        .map(|x| buf[x as usize])
        .sum();
    assert!((unsat_mass - e).abs() < 1e-12);
    unsafe { satqaoa_formula_free(f) };
}

#[test]
fn run_instance_is_deterministic() {
    let f = generate(6, 26, 11);
    let mut opts = satqaoa_run_options_default();
    opts.optimizer = SatqaoaOptimizer::Spsa;
    opts.max_evaluations = 40;
    opts.shots = 200;
    let (mut a, mut b) = (SatqaoaRunResult::default(), SatqaoaRunResult::default());
    unsafe {
        assert_eq!(
            satqaoa_run_instance(f, SatqaoaVariant::V3, 2, &opts, 5, &mut a),
            SatqaoaStatus::Ok
        );
        assert_eq!(
            satqaoa_run_instance(f, SatqaoaVariant::V3, 2, &opts, 5, &mut b),
            SatqaoaStatus::Ok
        );
    }
    assert_eq!(a.sat_proportion.to_bits(), b.sat_proportion.to_bits());
    assert_eq!(a.success, a.decided_satisfiable == a.ground_truth_satisfiable);
    opts.threshold = 1.5;
    unsafe {
        assert_eq!(
            satqaoa_run_instance(f, SatqaoaVariant::V3, 2, &opts, 5, &mut a),
            SatqaoaStatus::InvalidArgument
        );
        assert_eq!(
            satqaoa_run_instance(f, SatqaoaVariant::V3, 0, ptr::null(), 5, &mut a),
            SatqaoaStatus::InvalidArgument
        );
        satqaoa_formula_free(f);
    }
}

#[test]
fn resources_json_has_counts() {
    let f = generate(10, 45, 1);
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(
            satqaoa_resources_json(f, SatqaoaVariant::Baseline, 1, &mut s),
            SatqaoaStatus::Ok
        );
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        satqaoa_string_free(s);
        satqaoa_formula_free(f);
        assert!(text.contains("\"RZ\":135"), "{text}");
        assert!(text.contains("\"RZZZ\":45"));
    }
}
