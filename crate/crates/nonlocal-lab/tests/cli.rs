//! Command-line contract: exit codes, report schemas, and input errors.

use std::process::Command;

use nonlocal_lab::corpus;
use nonlocal_lab::strategy::correlation_from_tensor;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nonlocal-lab"))
}

struct Fixtures {
    dir: tempfile::TempDir,
}

impl Fixtures {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let out = bin()
            .args(["corpus", "--dir", &dir.path().display().to_string()])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        Fixtures { dir }
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).display().to_string()
    }

    fn write(&self, name: &str, value: serde_json::Value) -> String {
        let path = self.path(name);
        std::fs::write(&path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
        path
    }
}

fn json_of(stdout: &[u8]) -> serde_json::Value {
    serde_json::from_slice(stdout).expect("report must be valid JSON")
}

#[test]
fn classify_copy_game_exits_zero() {
    let f = Fixtures::new();
    let out = bin()
        .args(["game", "classify", &f.path("copy.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out.stdout);
    assert_eq!(report["is_imitation"], serde_json::json!(true));
}

#[test]
fn classify_all_ones_game_exits_one_with_witnesses() {
    let f = Fixtures::new();
    let out = bin()
        .args(["game", "classify", &f.path("all.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out.stdout);
    assert_eq!(report["is_imitation"], serde_json::json!(false));
    assert_eq!(report["a_violations"].as_array().unwrap().len(), 2);
}

#[test]
fn ns_infeasible_game_exits_one() {
    let f = Fixtures::new();
    let out = bin()
        .args(["member", "ns", &f.path("none.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out.stdout);
    assert_eq!(report["feasible"], serde_json::json!(false));
}

#[test]
fn witness_report_on_perfect_strategy_exits_zero_with_tiny_residuals() {
    let f = Fixtures::new();
    let strategy = f.write(
        "strategy.json",
        corpus::copy_max_entangled_strategy().to_json(),
    );
    let out = bin()
        .args(["witness", "report", &strategy, &f.path("copy.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out.stdout);
    for key in ["r1", "r2", "r3", "r4", "r5", "commutator_defect"] {
        let value = report[key].as_f64().unwrap();
        assert!(value <= 1e-9, "{key} = {value}");
    }
    assert!(report["measured_constants"]["r1"].is_null());
    assert!(report["witnesses"].is_object());
}

#[test]
fn witness_report_refuses_non_imitation_games() {
    let f = Fixtures::new();
    let strategy = f.write(
        "strategy.json",
        nonlocal_lab::strategy::random_tensor_strategy(&corpus::all_game(), 2, 2, 0)
            .unwrap()
            .to_json(),
    );
    let out = bin()
        .args(["witness", "report", &strategy, &f.path("all.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out.stdout);
    assert!(report["error"]
        .as_str()
        .unwrap()
        .contains("not an imitation game"));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = bin()
        .args(["game", "validate", "/nonexistent/game.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let report = json_of(&out.stdout);
    assert!(report["error"].as_str().unwrap().contains("game.json"));
}

#[test]
fn malformed_game_is_an_input_error() {
    let f = Fixtures::new();
    let bad = f.write(
        "bad.json",
        serde_json::json!({"x": 1, "y": 1, "a": 2, "b": 2, "win": [[0, 0, 5, 0]]}),
    );
    let out = bin().args(["game", "validate", &bad]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corr_check_flags_signalling() {
    let f = Fixtures::new();
    // p(a,b|x,y) = [a=y][b=0]: Alice's marginal depends on Bob's question
    let mut p = vec![0.0; 16];
    for x in 0..2 {
        for y in 0..2 {
            p[((x * 2 + y) * 2 + y) * 2] = 1.0;
        }
    }
    let corr = f.write(
        "signalling.json",
        serde_json::json!({"x": 2, "y": 2, "a": 2, "b": 2, "p": p, "tol": 1e-9}),
    );
    let out = bin().args(["corr", "check", &corr]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out.stdout);
    assert_eq!(report["nonsignalling"]["pass"], serde_json::json!(false));
}

#[test]
fn corr_from_strategy_matches_library() {
    let f = Fixtures::new();
    let strategy = corpus::copy_max_entangled_strategy();
    let path = f.write("strategy.json", strategy.to_json());
    let out = bin()
        .args(["corr", "from-strategy", &path, &f.path("copy.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out.stdout);
    let expected = correlation_from_tensor(&strategy, &corpus::copy_game()).unwrap();
    let got = report["correlation"]["p"].as_array().unwrap();
    for (g, e) in got.iter().zip(expected.entries().iter()) {
        assert_eq!(g.as_f64().unwrap(), *e);
    }
}

#[test]
fn out_flag_writes_the_report_file() {
    let f = Fixtures::new();
    let target = f.path("report.json");
    let out = bin()
        .args(["game", "classify", &f.path("chsh.json"), "--out", &target])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&target).unwrap();
    let report: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(report["is_imitation"], serde_json::json!(true));
}

#[test]
fn seesaw_report_embeds_seed_and_history() {
    let f = Fixtures::new();
    let out = bin()
        .args([
            "member",
            "seesaw",
            &f.path("chsh.json"),
            "--dim",
            "2",
            "--iters",
            "5",
            "--seed",
            "7",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out.stdout);
    assert_eq!(report["seed"], serde_json::json!(7));
    let values = report["values"].as_array().unwrap();
    assert_eq!(values.len(), 5);
    // monotone within tolerance
    for w in values.windows(2) {
        assert!(w[1].as_f64().unwrap() >= w[0].as_f64().unwrap() - 1e-12);
    }
}

#[test]
fn scan_requires_at_least_one_strategy() {
    let f = Fixtures::new();
    let out = bin()
        .args(["witness", "scan", &f.path("copy.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out.stdout);
    assert!(report["error"].as_str().unwrap().contains("empty"));
}
