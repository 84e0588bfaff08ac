//! One test per acceptance criterion. Run with `--nocapture` to see the logs.

use ringcount::counting::Options;
use ringcount::verify::run;

fn criterion(id: u8) {
    let outcome =
        run(id, &Options::default()).unwrap_or_else(|e| panic!("criterion {id} errored: {e}"));
    let status = if outcome.passed { "PASS" } else { "FAIL" };
    println!(
        "criterion {id}: {status} {} ({:.2}s)",
        outcome.title, outcome.seconds
    );
    for line in &outcome.log {
        println!("    {line}");
    }
    assert!(outcome.passed, "criterion {id} failed");
}

#[test]
fn criterion_1_counterexample() {
    criterion(1);
}

#[test]
fn criterion_2_subcode_count() {
    criterion(2);
}

#[test]
fn criterion_3_delsarte_identity() {
    criterion(3);
}

#[test]
fn criterion_4_minimality() {
    criterion(4);
}

#[test]
fn criterion_5_decomposition() {
    criterion(5);
}

#[test]
fn criterion_6_histogram_partition() {
    criterion(6);
}

#[test]
fn criterion_7_lyle_mismatch() {
    criterion(7);
}

#[test]
fn criterion_8_report_matrix() {
    criterion(8);
}

#[test]
fn criterion_9_crt_layer() {
    criterion(9);
}
