use basiclocus::coxeter_weyl::{kr_tables, CaseTag};
use basiclocus_cli::verify::{
    check_lengths_with, mutated_w_r, run_verify, Budget, Status, Target, VerifyPlan, FAULT_ENV,
};
use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_basiclocus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn empty_plan_passes() {
    let r = run_verify(&VerifyPlan {
        targets: vec![],
        budget: Budget::default(),
        seed: 0,
        force: false,
    })
    .unwrap();
    assert!(r.passed && r.checks.is_empty());
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["checks"], Value::Array(vec![]));
}

#[test]
fn length_sweep_passes_at_t14() {
    let out = run(&["verify", "--target", "lengths", "--budget", "t=14"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["checks"][0]["status"], "pass");
    assert!(v["checks"][0]["counts"]["elements"].as_u64().unwrap() > 1000);
}

#[test]
fn mutated_w_r_builder_fails_with_reproducer() {
    let c = check_lengths_with(&Budget::default(), &mutated_w_r);
    assert_eq!(c.status, Status::Fail);
    let rep = c.reproducer.expect("reproducer");
    assert_eq!(rep["element"], "w_r");
    assert!(rep["t"].is_u64() && rep["h"].is_u64() && rep["r"].is_u64());
}

#[test]
fn injected_fault_exits_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_basiclocus"))
        .args(["verify", "--target", "symbols,lengths"])
        .env(FAULT_ENV, "w_r")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["checks"][0]["status"], "pass");
    assert_eq!(v["checks"][1]["status"], "fail");
    assert!(v["checks"][1]["reproducer"].is_object());
}

#[test]
fn budget_outside_envelope_needs_force() {
    let out = run(&["verify", "--target", "lengths", "--budget", "t=16"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));
    let forced = run(&[
        "verify", "--target", "lengths", "--budget", "t=15", "--force",
    ]);
    assert_eq!(forced.status.code(), Some(0));
    let strata = run(&["strata", "--t", "4", "--h", "2", "--m", "4"]);
    assert_eq!(strata.status.code(), Some(2));
}

#[test]
fn malformed_input_is_usage_error() {
    for args in [
        vec!["weyl", "--t", "4"],
        vec!["classify", "--diag", "1,x"],
        vec!["adm", "--case", "4", "--n", "2"],
        vec!["verify", "--target", "nonsense"],
        vec!["special", "--v", "3,1", "--h", "1"],
        vec!["verify", "--budget", "q=3"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn classify_rank_one() {
    let v = json_of(&run(&["classify", "--diag", "1"]));
    assert_eq!(v["invariants"]["dim"], 1);
    assert_eq!(v["invariants"]["chi"], 1);
    assert_eq!(v["invariants"]["hasse"], 1);
    assert_eq!(v["type"], 0);
    let g = json_of(&run(&["classify", "--gram", "[[2,1],[1,2]]"]));
    assert_eq!(g["invariants"]["dim"], 2);
}

#[test]
fn strata_totals_partition() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fine.csv");
    let out = run(&[
        "strata",
        "--t",
        "4",
        "--h",
        "2",
        "--m",
        "1",
        "--series-m",
        "2",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let (tot, heart, dagger, phi) = (
        v["total"].as_u64().unwrap(),
        v["heart"].as_u64().unwrap(),
        v["dagger"].as_u64().unwrap(),
        v["phi"].as_u64().unwrap(),
    );
    assert_eq!(heart + dagger + phi, tot);
    let fine: u64 = v["fine"]
        .as_object()
        .unwrap()
        .values()
        .map(|x| x.as_u64().unwrap())
        .sum();
    assert_eq!(fine, tot);
    assert_eq!(v["duality_check"], true);
    let table = std::fs::read_to_string(&csv).unwrap();
    let rows: u64 = table
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(rows, tot);
}

#[test]
fn adm_matches_kr_tables() {
    let v = json_of(&run(&["adm", "--case", "2a", "--n", "2", "--s", "1"]));
    let (ta, tz) = kr_tables(CaseTag::C2a, 2, 1).unwrap();
    let lvl = &v["levels"][0];
    assert_eq!(
        lvl["kr_table"]["maximal"],
        serde_json::to_value(&ta).unwrap()
    );
    assert_eq!(lvl["kr_table"]["z_k"], serde_json::to_value(&tz).unwrap());
    assert_eq!(lvl["tables_match"], true);
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["verify", "--target", "symbols,lattices", "--seed", "11"],
        vec!["special", "--v", "3,1,0,1", "--h", "2", "--m", "2"],
        vec![
            "strata",
            "--t",
            "3",
            "--h",
            "1",
            "--m",
            "2",
            "--series-m",
            "0",
        ],
    ] {
        let paths: Vec<_> = (0..2)
            .map(|i| dir.path().join(format!("r{i}.json")))
            .collect();
        for p in &paths {
            let mut a = args.clone();
            a.extend(["--json", p.to_str().unwrap()]);
            assert!(run(&a).status.code().unwrap() <= 1, "{a:?}");
        }
        assert_eq!(
            std::fs::read(&paths[0]).unwrap(),
            std::fs::read(&paths[1]).unwrap(),
            "{args:?}"
        );
    }
}

#[test]
fn special_report_passes() {
    let out = run(&["special", "--v", "3,0,1,1", "--h", "1", "--m", "3"]);
    let v = json_of(&out);
    assert_eq!(out.status.code(), Some(0), "{v}");
    assert_eq!(v["passed"], true);
    assert!(v["count"].as_u64().unwrap() > 0);
}

#[test]
fn targets_round_trip() {
    for t in Target::all() {
        assert_eq!(Target::parse(t.name()).unwrap(), t);
    }
    assert_eq!(Target::Stability.criterion(), Some(11));
    assert_eq!(Target::Lattices.criterion(), None);
}
