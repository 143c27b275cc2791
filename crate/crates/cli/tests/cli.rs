use std::process::{Command, Output};

use serde_json::Value;
use virasoro_core::family::SubalgebraDescriptor;
use virasoro_core::solver::SolutionSet;
use virasoro_core::virasoro::FiniteSubalgebraDescriptor;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_virasoro"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn classify_zm3() {
    let v = json(&run(&["classify", "--span", "samples/zm3.json"]));
    assert_eq!(v["kind"], "Zm");
    assert_eq!(v["m"], 3);
    let d: SubalgebraDescriptor = serde_json::from_value(v).unwrap();
    assert_eq!(d, SubalgebraDescriptor::Zm { m: 3 });
}

#[test]
fn solve_vr_one_one() {
    let v = json(&run(&["solve-vr", "--r", "1,1"]));
    assert_eq!(v["count"], 1);
    assert_eq!(v["seed"], 42);
    let set: SolutionSet = serde_json::from_value(v).unwrap();
    let a = set.solutions[0].coordinates();
    assert!((a[0].re + 1.0).abs() < 1e-9 && a[0].im.abs() < 1e-9);
    assert!((a[1].re - 1.0).abs() < 1e-9);
}

#[test]
fn solve_vr_closed_form_exact() {
    let v = json(&run(&["solve-vr", "--r", "2,1,-1", "--closed"]));
    assert_eq!(v["solutions"][0]["a"], serde_json::json!(["2/3", "-1/3", "1"]));
    assert!(v.get("seed").is_none());
}

#[test]
fn catalog_dim4() {
    let v = json(&run(&["catalog", "--dim", "4"]));
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["span"], "span{L_0, L_-m, L_m, K}");
    let out = run(&["catalog", "--dim", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn construct_roundtrip_and_out_file() {
    let path = std::env::temp_dir().join(format!("virasoro-cli-{}.json", std::process::id()));
    let out = run(&["construct", "--mu", "samples/mu_2_1_m1.json", "--out", path.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v["c"], "-4/9");
    assert_eq!(v["certificate"]["residual"], 0.0);
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.as_bytes(), out.stdout.as_slice());
    std::fs::remove_file(&path).unwrap();
    let d: SubalgebraDescriptor = serde_json::from_value(v.clone()).unwrap();
    let mut again = serde_json::to_value(&d).unwrap();
    again["certificate"] = v["certificate"].clone();
    assert_eq!(again, v);
}

#[test]
fn construct_inline() {
    let v = json(&run(&["construct", "--mu", r#"{"n":2,"k":2,"r":[1,1],"a":["-1","1"]}"#]));
    assert_eq!(v["kind"], "Smu");
    let out = run(&["construct", "--mu", r#"{"n":2,"k":2,"r":[1,1],"a":["1","1"]}"#]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn virasoro_lifts() {
    let v = json(&run(&["virasoro", "--mu", "samples/mu_2_1_m1.json", "--alpha", "1/2"]));
    assert_eq!(v["beta0"], "-4/81");
    let lift: FiniteSubalgebraDescriptor = serde_json::from_value(v["lift"].clone()).unwrap();
    assert!(lift.verify_closure().unwrap());
    let v = json(&run(&["virasoro", "--m", "2"]));
    assert_eq!(v["beta"], "1/8");
    assert_eq!(v["dim"], 3);
}

#[test]
fn same_seed_same_bytes() {
    for args in [
        &["solve-vr", "--r", "2,2,-1,-1", "--seed", "7"][..],
        &["sweep", "--n", "4..5", "--seed", "3", "--starts", "300"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn sweep_table_lists_cases() {
    let out = run(&["sweep", "--n", "4", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("seed 42\n"));
    assert!(text.contains("0 empty"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["solve-vr", "--r", "1,1", "--bogus"]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    // not in V(r)
    let bad = r#"{"n":3,"k":2,"r":[2,1,-1],"a":["1","2","3"]}"#;
    assert_eq!(run(&["construct", "--mu", bad]).status.code(), Some(1));
    assert_eq!(run(&["construct", "--mu", "no-such-file.json"]).status.code(), Some(1));
    assert_eq!(run(&["solve-vr", "--r=1,-1"]).status.code(), Some(1));
    let open = r#"{"A":{"terms":[[0,"1"]]},"B":{"terms":[[3,"1"],[5,"1"]]}}"#;
    assert_eq!(run(&["verify", "--span", open]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--span", open]).status.code(), Some(2));
    // a perturbed float point admitted by a loose tolerance fails the bracket certificate
    let loose = r#"{"n":3,"k":2,"r":[2,1,-1],"a":[[0.6667,0],[-0.3333,0],[1,0]]}"#;
    assert_eq!(run(&["construct", "--mu", loose, "--tol", "1e-2"]).status.code(), Some(3));
    assert_eq!(run(&["construct", "--mu", loose]).status.code(), Some(1));
}

#[test]
fn verify_reports_structure_constants() {
    let v = json(&run(&["verify", "--span", "samples/zm3.json"]));
    assert_eq!(v["closed"], true);
    assert_eq!(v["beta"], "3");
}
