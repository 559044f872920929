use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn chowd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chowd")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    fixtures().join(name).to_str().unwrap().to_owned()
}

#[test]
fn uniqueness_scan_on_four_variables() {
    let o = chowd(&["verify", "--suite", "chow-uniqueness", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["report"]["functions_scanned"], 65536);
    assert_eq!(v["report"]["ltf_count"], 1882);
    assert_eq!(v["config"]["command"], "verify");
}

#[test]
fn majority_spectrum() {
    let o = chowd(&["spectrum", &fixture("maj3.tt"), "--d", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "3,1");
    let coefs: Vec<f64> = rows[1..]
        .iter()
        .map(|r| r.split(';').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(coefs, vec![0.0, 0.5, 0.5, 0.5]);
    // The hex encoding reads to the same table.
    let hex = chowd(&["spectrum", &fixture("maj3.hex.tt"), "--d", "1"]);
    let strip = |s: String| s.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(stdout(&hex)), strip(text));
}

#[test]
fn dictator_reconstruction() {
    let o = chowd(&[
        "reconstruct",
        "--alpha",
        &fixture("dictator_n6_x1.chow.csv"),
        "--xi",
        "0.1",
        "--reference",
        &fixture("dictator_n6_x1.tt"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["residual_l2"].as_f64().unwrap() <= 0.4);
    assert_eq!(v["dist_exact"].as_f64().unwrap(), 0.0);
    assert_eq!(v["factor_two_holds"], true);
    assert!(v["H"].as_array().unwrap().iter().all(|h| h.is_i64()));
}

#[test]
fn malformed_table_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tt");
    fs::write(&bad, "n=3\n++x-\n").unwrap();
    let o = chowd(&["spectrum", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn sampled_oracle_needs_a_seed() {
    let o = chowd(&[
        "reconstruct",
        "--alpha",
        &fixture("maj3.chow.csv"),
        "--xi",
        "0.1",
        "--oracle",
        "sampled",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn outputs_carry_their_configuration() {
    let csv = stdout(&chowd(&[
        "experiment",
        "--kind",
        "rounding",
        "--n",
        "6",
        "--d",
        "2",
        "--trials",
        "3",
        "--seed",
        "5",
    ]));
    let config = csv.lines().find_map(|l| l.strip_prefix("# config: ")).unwrap();
    let v: Value = serde_json::from_str(config).unwrap();
    assert_eq!(v["command"], "experiment");
    assert_eq!(v["args"]["seed"], 5);

    let json: Value = serde_json::from_str(&stdout(&chowd(&[
        "learn-rfa",
        "--target",
        &fixture("corpus/ptf_000.json"),
        "--d",
        "2",
        "--eps",
        "0.3",
        "--delta",
        "0.1",
        "--seed",
        "1",
    ])))
    .unwrap();
    assert_eq!(json["config"]["command"], "learn-rfa");
    assert_eq!(json["config"]["args"]["eps"], 0.3);
}

#[test]
fn out_flag_writes_the_same_text() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("maj.csv");
    let o = chowd(&[
        "spectrum",
        &fixture("maj3.tt"),
        "--d",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = fs::read_to_string(&path).unwrap();
    assert!(written.ends_with(&fs::read_to_string(fixtures().join("maj3.chow.csv")).unwrap()));
}

#[test]
fn oversized_search_is_an_error() {
    let o = chowd(&["verify", "--suite", "diophantine", "--dim", "7", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bundled_fixtures_are_current() {
    for (name, body) in chowd_cli::fixtures::render().unwrap() {
        let on_disk = fs::read_to_string(fixtures().join(&name)).unwrap_or_default();
        assert!(on_disk == body, "{name} is stale; run scripts/gen-fixtures.sh");
    }
}
