//! End-to-end tests of the grasspole binary: output formats, exit codes,
//! file round trips, and determinism under a fixed seed.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_grasspole"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("grasspole-cli-{name}"));
    std::fs::write(&path, contents).expect("temp file");
    path
}

const MONOMIAL_2X2_F5: &str = r#"{"field":"5","kind":"factored",
"N":[[["1"],["0","1"]],[[],["1"]]],
"D":[[["0","1"],["0","0","1"]],[["2"],["0","3"]]]}"#;

const BINARY_2X4: &str = r#"{"field":"2","kind":"factored",
"N":[[[],["0","1"]],[["1"],["1","0","1"]]],
"D":[[["1","1"],["0","0","1"]],[["1"],["0","1"]]]}"#;

#[test]
fn schubert_emits_exact_json() {
    let out = run(&["schubert", "--m", "3", "--p", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{\n  \"d\": \"42\"\n}\n");
}

#[test]
fn schubert_is_symmetric_in_m_and_p() {
    let a = run(&["schubert", "--m", "2", "--p", "4"]);
    let b = run(&["schubert", "--m", "4", "--p", "2"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("\"14\""));
}

#[test]
fn usage_errors_exit_2_on_stderr() {
    let out = run(&["field-info", "--field", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("prime"));
    assert!(stdout(&out).is_empty());

    let out = run(&["no-such-subcommand"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["schubert", "--m", "2", "--p", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("csv output is limited"));
}

#[test]
fn field_info_reports_extension_structure() {
    let out = run(&["field-info", "--field", "2^2:modulus=1,1,1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["characteristic"], 2);
    assert_eq!(v["extension_degree"], 2);
    assert_eq!(v["order"], "4");
}

#[test]
fn degeneracy_example_emits_witness_and_respects_expect() {
    let sys = write_temp("mdsdeg.json", MONOMIAL_2X2_F5);
    let path = sys.to_str().unwrap();

    let out = run(&[
        "degeneracy",
        "--field",
        "5",
        "--system",
        path,
        "--method",
        "enumerate",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "degenerate");
    assert!(v["witness"].is_array(), "witness compensator emitted");

    let out = run(&[
        "degeneracy",
        "--system",
        path,
        "--method",
        "exact",
        "--expect",
        "nondegenerate",
    ]);
    assert_eq!(out.status.code(), Some(1), "finding contradicts --expect");

    let out = run(&[
        "degeneracy",
        "--field",
        "7",
        "--system",
        path,
        "--method",
        "exact",
    ]);
    assert_eq!(out.status.code(), Some(2), "field flag mismatch is usage");
}

#[test]
fn minors_csv_is_frozen() {
    let sys = write_temp("binary.json", BINARY_2X4);
    let out = run(&[
        "minors",
        "--system",
        sys.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "columns,minor\n\
         1 2,\"s\"\n\
         1 3,\"s + 1\"\n\
         1 4,\"s^2\"\n\
         2 3,\"s^3 + s^2 + 1\"\n\
         2 4,\"s^4\"\n\
         3 4,\"s\"\n"
    );
}

#[test]
fn census_csv_is_frozen() {
    let sys = write_temp("binary-census.json", BINARY_2X4);
    let out = run(&[
        "census",
        "--system",
        sys.to_str().unwrap(),
        "--mode",
        "projective",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "fiber_size,image_points\n1,15\n2,10\n");
}

#[test]
fn fiber_solves_a_binary_target() {
    let sys = write_temp("binary-fiber.json", BINARY_2X4);
    let out = run(&[
        "fiber",
        "--system",
        sys.to_str().unwrap(),
        "--target",
        "1,1,0,0,1",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["total_multiplicity"], 2);
}

#[test]
fn factorize_round_trips_through_minors() {
    let ss = write_temp(
        "ss.json",
        r#"{"field":"QQ","kind":"state_space",
            "A":[["0","1"],["0","0"]],"B":[["0"],["1"]],"C":[["1","0"]]}"#,
    );
    let out = run(&["factorize", "--system", ss.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["degree"], 2);
    assert_eq!(v["coprime"], true);
    assert_eq!(v["system"]["kind"], "factored");

    let factored = write_temp("ss-factored.json", &v["system"].to_string());
    let out = run(&["minors", "--system", factored.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn monomial_builder_reads_coefficients_and_degrees() {
    let input = write_temp(
        "mono.json",
        r#"{"field":"5","coeffs":[["1","1","1","1"],["0","1","2","3"]],
            "degrees":[[0,1,1,2],[0,0,0,1]]}"#,
    );
    let out = run(&["monomial", "--system", input.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["degree"], 2);
    assert_eq!(v["minor_monomials"].as_array().unwrap().len(), 6);
}

#[test]
fn mds_check_reads_a_matrix_file() {
    let good = write_temp(
        "mds-good.json",
        r#"{"field":"5","matrix":[["1","1","1","1"],["0","1","2","3"]]}"#,
    );
    let out = run(&["mds-check", "--matrix", good.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mds"], true);

    let bad = write_temp(
        "mds-bad.json",
        r#"{"field":"2","matrix":[["1","0"],["0","0"]]}"#,
    );
    let out = run(&["mds-check", "--matrix", bad.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mds"], false);
    assert_eq!(v["zero_minor"], serde_json::json!([1, 2]));
}

#[test]
fn cauchy_system_reports_provenance() {
    let out = run(&["cauchy-system", "--field", "5", "--p", "2", "--m", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["degree"], 4);
    assert_eq!(v["provenance"]["construction"], "cauchy");
    assert_eq!(v["provenance"]["x"].as_array().unwrap().len(), 2);

    let out = run(&["cauchy-system", "--field", "2", "--p", "2", "--m", "2"]);
    assert_eq!(out.status.code(), Some(1), "field too small is a finding");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["error"].is_string());
}

#[test]
fn onc_flags_the_zero_minor_for_small_fields() {
    let out = run(&["onc", "--field", "2", "--p", "2", "--m", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mds"], false);
    assert_eq!(v["zero_minor"], serde_json::json!([1, 3]));

    let out = run(&["onc", "--field", "7", "--p", "2", "--m", "2", "--hasse"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mds"], true);
}

#[test]
fn verify_f2_passes() {
    let out = run(&["verify-f2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["off_quadric_points"], 28);
    assert_eq!(v["all_nonsurjective"], true);
}

#[test]
fn identities_are_deterministic_under_a_seed() {
    let args = [
        "identities",
        "--field",
        "7",
        "--n",
        "3",
        "--m",
        "2",
        "--p",
        "2",
        "--seed",
        "11",
        "--trials",
        "5",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["all_passed"], true);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let path = std::env::temp_dir().join("grasspole-cli-out.json");
    let _ = std::fs::remove_file(&path);
    let out = run(&[
        "schubert",
        "--m",
        "2",
        "--p",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["d"], "5");
}
