use std::process::{Command, Output};

use serde_json::Value;

fn solver(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solver")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn search_text_and_json_agree() {
    let text = solver(&["search", "--max-n", "100"]);
    let json = solver(&["search", "--max-n", "100", "--json"]);
    assert!(text.status.success() && json.status.success());
    assert!(stdout(&text).contains("P(8) = 10"));
    let ns: Vec<u64> = stdout(&json)
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["n"].as_u64().unwrap())
        .collect();
    assert_eq!(ns, [8, 9, 10, 12, 13, 14, 15, 16, 17, 20, 23]);
    assert_eq!(stdout(&text).lines().count(), ns.len());
}

#[test]
fn cf_count_and_until_q() {
    let o = solver(&["cf", "--target", "tau", "--count", "5"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["quotients"], serde_json::json!(["8", "5", "3", "3", "1"]));
    assert_eq!(v["convergents"][1]["q"], "5");

    let o = solver(&["cf", "--until-q", "3.6e48"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let last = v["convergents"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["q"], "21695574963444524513646677911090250505443859600601");
}

#[test]
fn cf_requires_a_stop_rule() {
    let o = solver(&["cf"]);
    assert!(!o.status.success());
}

#[test]
fn precision_escalates_up_to_the_cap() {
    let o = solver(&["cf", "--count", "200", "--precision", "20"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["precision_used"].as_u64().unwrap() > 20);

    let o = Command::new(env!("CARGO_BIN_EXE_solver"))
        .args(["cf", "--count", "200", "--precision", "20"])
        .env("SOLVER_MAX_PRECISION", "40")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precision"));
}

#[test]
fn bound_modes() {
    let o = solver(&["bound", "--mode", "fidelity"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let chain = &v[0];
    assert_eq!(chain["mode"], "fidelity");
    assert_eq!(chain["n_bound"], format!("46{}", "0".repeat(47)));
    assert!(chain["links"].as_array().unwrap().iter().all(|l| l["dominated"] == true));

    let o = solver(&["bound"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["mode"], "audit");
}

#[test]
fn reduce_single_instances() {
    let o = solver(&["reduce", "--stage", "1", "--d1", "9"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["method"], "legendre");
    assert_eq!(v["k_bound"], 53);

    let o = solver(&["reduce", "--stage", "2", "--d1", "9", "--d2", "5", "--ell", "53"]);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 1);
    let v: Value = serde_json::from_str(&lines[0]).unwrap();
    assert_eq!(v["k_bound"], 450);

    assert!(!solver(&["reduce", "--stage", "3"]).status.success());
}

#[test]
fn pipeline_writes_report_file() {
    let dir = std::env::temp_dir().join(format!("solver-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.txt");
    let o = solver(&[
        "pipeline",
        "--precision",
        "128",
        "--mode",
        "audit",
        "--format",
        "text",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("audit"));
    std::fs::remove_dir_all(&dir).unwrap();
}
