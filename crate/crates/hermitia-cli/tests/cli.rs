//! End-to-end tests of the `hermitia` binary: exact output for the
//! documented examples, exit codes 0/2/3, and byte-stable reruns.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

fn hermitia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermitia"))
        .args(args)
        .output()
        .expect("failed to spawn hermitia")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8(out.stdout.clone()).expect("stdout is not UTF-8");
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("bad JSON {text:?}: {e}"))
}

fn data(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name]
        .iter()
        .collect();
    path.to_str().expect("non-UTF-8 path").to_string()
}

#[test]
fn classify_prints_the_documented_example_bytes() {
    let out = hermitia(&["classify", "--family", "su", "--p", "2", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"rank\":2,\"tube\":false,\"shilov_dim\":8}\n"
    );
}

#[test]
fn unknown_flag_exits_2_with_error_object() {
    let out = hermitia(&[
        "classify", "--family", "su", "--p", "2", "--q", "3", "--bogus",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["error"], "validation");
    assert!(v["detail"].as_str().unwrap().contains("--bogus"));
}

#[test]
fn missing_and_malformed_inputs_exit_2() {
    let out = hermitia(&["point-test", "--point", "/nonexistent/p.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "validation");

    let out = hermitia(&["classify", "--family", "so2", "--p", "2", "--q", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let out = hermitia(&["irrep", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn beta_probe_is_quantized_seeded_and_byte_stable() {
    let args = [
        "beta-probe",
        "--family",
        "sp",
        "--n",
        "2",
        "--samples",
        "100",
        "--seed",
        "7",
    ];
    let out = hermitia(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["samples"], 100);
    assert_eq!(v["family"], "sp");
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 100);
    for val in values {
        let b = val.as_f64().unwrap();
        let dist = [-2.0 * PI, 0.0, 2.0 * PI]
            .iter()
            .map(|t| (b - t).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(
            dist < 1e-6,
            "probe value {b} is {dist:.3e} from the quantized set"
        );
    }
    let again = hermitia(&args);
    assert_eq!(
        out.stdout, again.stdout,
        "identical argv and seed must give identical bytes"
    );
}

#[test]
fn point_test_locates_interior_and_shilov() {
    let out = hermitia(&["point-test", "--point", &data("point-interior-sp1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["location"], "Interior");
    assert_eq!(v["shilov"], false);

    let out = hermitia(&["point-test", "--point", &data("point-interior-su12.json")]);
    assert_eq!(stdout_json(&out)["location"], "Interior");
}

#[test]
fn beta_and_maslov_agree_on_the_flat_triple() {
    let out = hermitia(&["beta", "--triple", &data("triple-flat-sp1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - PI).abs() < 1e-9);
    assert!((v["abs_over_pi"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    for model in ["subspace", "matrix"] {
        let out = hermitia(&[
            "maslov",
            "--triple",
            &data("triple-flat-sp1.json"),
            "--model",
            model,
        ]);
        assert_eq!(out.status.code(), Some(0), "model {model}");
        let v = stdout_json(&out);
        assert_eq!(v["value"], 1, "model {model}");
        assert_eq!(v["model"], model);
    }
}

#[test]
fn family_flag_must_match_the_file() {
    let out = hermitia(&[
        "beta",
        "--family",
        "sp",
        "--n",
        "2",
        "--triple",
        &data("triple-flat-sp1.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "validation");
}

#[test]
fn degenerate_triple_exits_3_with_margins() {
    let out = hermitia(&["maslov", "--triple", &data("triple-degenerate-sp1.json")]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["error"], "non_transverse");
    assert!(v["detail"].as_str().unwrap().contains("pair margins"));
}

#[test]
fn cayley_image_has_positive_imaginary_spectrum() {
    let out = hermitia(&["cayley", "--point", &data("point-interior-sp1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    for e in v["im_spectrum"].as_array().unwrap() {
        assert!(e.as_f64().unwrap() > 0.0);
    }
    // no tube model for non-square su(1,2) points
    let out = hermitia(&["cayley", "--point", &data("point-interior-su12.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["error"], "unsupported_family");
}

#[test]
fn fixture_pipes_into_toledo_with_winding() {
    let dir = std::env::temp_dir().join(format!("hermitia-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let rep = dir.join("fuchsian.json");

    let out = hermitia(&["fixture", "--name", "fuchsian-g2"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&rep, &out.stdout).unwrap();

    let out = hermitia(&["toledo", "--rep", rep.to_str().unwrap(), "--winding"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 4.0 * PI).abs() < 1e-4);
    assert_eq!(v["maximal"], true);
    assert_eq!(v["winding"], 2);

    let out = hermitia(&["toledo", "--rep", rep.to_str().unwrap()]);
    assert_eq!(stdout_json(&out)["winding"], serde_json::Value::Null);

    let out = hermitia(&[
        "fixture",
        "--name",
        "fuchsian-g2",
        "--target",
        "sp4-diagonal",
    ]);
    std::fs::write(&rep, &out.stdout).unwrap();
    let out = hermitia(&["toledo", "--rep", rep.to_str().unwrap(), "--winding"]);
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 8.0 * PI).abs() < 1e-4);
    assert_eq!(v["winding"], 4);

    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn irrep_chains_into_tight_check() {
    let dir = std::env::temp_dir().join(format!("hermitia-hom-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let hom = dir.join("hom.json");

    for (n, lambda, h2) in [(1usize, 1.0f64, true), (2, -1.0, false), (3, 1.0, false)] {
        let out = hermitia(&["irrep", "--n", &n.to_string()]);
        assert_eq!(out.status.code(), Some(0), "irrep --n {n}");
        std::fs::write(&hom, &out.stdout).unwrap();
        let out = hermitia(&["tight-check", "--hom", hom.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "tight-check n = {n}");
        let v = stdout_json(&out);
        assert_eq!(v["verdict"], "tight", "n = {n}");
        assert!(
            (v["lambda"].as_f64().unwrap() - lambda).abs() < 1e-9,
            "n = {n}"
        );
        assert_eq!(v["h2"], h2, "n = {n}");
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn rootdata_reports_the_multiplicity_triple() {
    let out = hermitia(&["rootdata", "--family", "sostar", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["r"], 2);
    assert_eq!(v["a"], 4);
    assert_eq!(v["b"], 2);
    assert_eq!(v["tube"], false);
}
