//! Acceptance suite: one test per criterion. Each prints its statistics
//! line (visible with `--nocapture`) and asserts the criterion passed.

use hermitia_core::acceptance::{run_criterion, CriterionOutcome};

fn check(index: usize) {
    let CriterionOutcome {
        name,
        passed,
        detail,
        ..
    } = run_criterion(index);
    println!(
        "criterion {index} ({name}): {} :: {detail}",
        if passed { "pass" } else { "FAIL" }
    );
    assert!(passed, "criterion {index} ({name}) failed: {detail}");
}

#[test]
fn criterion_1_boundedness_and_extremality() {
    check(1);
}

#[test]
fn criterion_2_tube_type_quantization() {
    check(2);
}

#[test]
fn criterion_3_cocycle_identity_and_invariance() {
    check(3);
}

#[test]
fn criterion_4_maslov_model_agreement() {
    check(4);
}

#[test]
fn criterion_5_strict_extension() {
    check(5);
}

#[test]
fn criterion_6_tightness() {
    check(6);
}

#[test]
fn criterion_7_root_data() {
    check(7);
}

#[test]
fn criterion_8_toledo_invariants() {
    check(8);
}

#[test]
fn criterion_9_jordan_calculus() {
    check(9);
}
