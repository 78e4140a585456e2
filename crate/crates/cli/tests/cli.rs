use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BILEX: &str = r#"{"blocks":[5,5],"generators":["x[1][0]","x[1][2]","x[1][3]","x[2][0]","x[2][2]","x[2][3]",
    "x[1][1]^2","x[1][1]*x[1][4]","x[2][1]^2","x[2][1]*x[2][4]"]}"#;
const POINTS: &str = r#"{"blocks":[1,1],"generators":["x[1][0]^2","x[2][0]"]}"#;
const HYPERPLANE: &str = r#"{"blocks":[1,1],"generators":["x[1][0]"]}"#;
const ZERO_55: &str = r#"{"blocks":[5,5],"generators":[]}"#;
const ZERO_11: &str = r#"{"blocks":[1,1]}"#;
const ZERO_1: &str = r#"{"blocks":[1]}"#;
const GRASSMANNIAN: &str = r#"{"blocks":[5,5],
    "relations":[
      {"terms":[{"coeff":"1","exps":[1,0,0,0,0,1,0,0,0,0,0,0]},{"coeff":"-1","exps":[0,1,0,0,1,0,0,0,0,0,0,0]},{"coeff":"1","exps":[0,0,1,1,0,0,0,0,0,0,0,0]}]},
      {"terms":[{"coeff":"1","exps":[0,0,0,0,0,0,1,0,0,0,0,1]},{"coeff":"-1","exps":[0,0,0,0,0,0,0,1,0,0,1,0]},{"coeff":"1","exps":[0,0,0,0,0,0,0,0,1,1,0,0]}]}],
    "generators":[]}"#;
const BILEX_POLY: &str = r#"{"vars":2,"terms":[{"exps":[1,1],"coeff":"1"},{"exps":[1,0],"coeff":"2"},{"exps":[0,1],"coeff":"2"},{"exps":[0,0],"coeff":"4"}]}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: TempDir::new().unwrap() }
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let path: PathBuf = self.dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path.to_string_lossy().into_owned()
    }
}

fn multihilb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multihilb"))
        .args(args)
        .env_remove("MULTIHILB_BUDGET")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn hilbert_eval_examples() {
    let ws = Workspace::new();
    let out = multihilb(&["hilbert-eval", &ws.file("i.json", BILEX), "--degree", "2,3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["value"], 20);
    assert_eq!(json(&out)["verified"], true);

    let out = multihilb(&["hilbert-eval", &ws.file("z.json", ZERO_55), "--degree", "1,0", "--format", "plain"]);
    assert_eq!(stdout(&out), "6");

    let gr = ws.file("gr.json", GRASSMANNIAN);
    let out = multihilb(&["hilbert-eval", &gr, "--degree", "2,0", "--format", "plain"]);
    assert_eq!(stdout(&out), "20");

    let out = multihilb(&["hilbert-eval", &gr, "--degree", "2,0", "--allow-probabilistic"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verified"], false);
    assert_eq!(json(&out)["value"], 20);
}

#[test]
fn certify_exit_codes() {
    let ws = Workspace::new();
    let points = ws.file("p.json", POINTS);
    let out = multihilb(&["certify", &points, "--d", "2,2", "--m", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out), serde_json::json!({"status": "certified"}));

    let hyper = ws.file("h.json", HYPERPLANE);
    let out = multihilb(&["certify", &hyper, "--d", "1,1", "--m", "1"]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        json(&out),
        serde_json::json!({"status": "failed_at_vertex", "vertex": [1, 1], "observed": 2, "expected": 1})
    );

    let out = multihilb(&["certify", &hyper, "--d", "1,1", "--m", "2"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["reason"], "degree_bound_too_low");
}

#[test]
fn gotzmann_and_growth() {
    for (poly, r) in [("2,1", "2"), ("4,3", "7"), ("18,9", "54")] {
        let out = multihilb(&["gotzmann", "--poly", poly, "--format", "plain"]);
        assert_eq!((code(&out), stdout(&out).as_str()), (0, r));
    }
    let out = multihilb(&["gotzmann", "--poly", "18,9"]);
    assert_eq!(json(&out)["gotzmann_number"], 54);
    let out = multihilb(&["gotzmann", "--poly", "-1"]);
    assert_eq!(code(&out), 2);

    let out = multihilb(&["macaulay-growth", "--alpha", "5", "--d", "2"]);
    assert_eq!(json(&out)["growth"], "7");
    assert_eq!(json(&out)["kappas"], serde_json::json!([3, 2]));
    let out = multihilb(&["macaulay-growth", "--alpha", "5", "--d", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn hilbert_poly_examples_round_trip() {
    let ws = Workspace::new();
    let out = multihilb(&["hilbert-poly", &ws.file("i.json", BILEX)]);
    assert_eq!(code(&out), 0);
    let p = json(&out);
    assert_eq!(p["display"], "t1*t2+2*t1+2*t2+4");

    // the emitted polynomial feeds min-point and verify unchanged
    let poly_file = ws.file("p.json", &stdout(&out));
    let out = multihilb(&["min-point", "--poly", &poly_file, "--d1", "7"]);
    assert_eq!(json(&out)["point"], serde_json::json!([7, 54]));
    let out = multihilb(&["verify", &ws.file("i2.json", BILEX), "--d", "1,1", "--poly", &poly_file, "--horizon", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["holds"], true);

    let out = multihilb(&["hilbert-poly", &ws.file("z.json", ZERO_11), "--format", "plain"]);
    assert_eq!(stdout(&out).lines().next(), Some("t1*t2+t1+t2+1"));
    let out = multihilb(&["hilbert-poly", &ws.file("q.json", POINTS), "--format", "plain"]);
    assert_eq!(stdout(&out).lines().next(), Some("2"));
}

#[test]
fn min_point_inline() {
    let out = multihilb(&["min-point", "--poly", BILEX_POLY, "--d1", "7", "--format", "plain"]);
    assert_eq!(stdout(&out), "(7,54)");
}

#[test]
fn grid_and_verify_examples() {
    let ws = Workspace::new();
    let points = ws.file("p.json", POINTS);
    let out = multihilb(&["grid", &points, "--lower", "0,0", "--upper", "3,3", "--format", "plain"]);
    let csv = stdout(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t1,t2,H"));
    let values: Vec<&str> = lines.map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(values, ["1", "1", "1", "1", "2", "2", "2", "2", "2", "2", "2", "2", "2", "2", "2", "2"]);

    let out = multihilb(&["grid", &ws.file("z.json", ZERO_1), "--lower", "0", "--upper", "4"]);
    assert_eq!(json(&out)["values"], serde_json::json!([1, 2, 3, 4, 5]));

    let out = multihilb(&["grid", &ws.file("b.json", BILEX), "--lower", "1,1", "--upper", "3,3"]);
    let g = json(&out);
    let expected: Vec<u64> = (1..=3u64).flat_map(|a| (1..=3u64).map(move |b| (a + 2) * (b + 2))).collect();
    assert_eq!(g["values"], serde_json::json!(expected));

    let out = multihilb(&["verify", &points, "--d", "2,2", "--constant", "2", "--horizon", "6"]);
    assert_eq!((code(&out), json(&out)["holds"].clone()), (0, Value::Bool(true)));

    let out = multihilb(&["verify", &ws.file("h.json", HYPERPLANE), "--d", "1,1", "--constant", "1", "--horizon", "3"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["witness"]["point"], serde_json::json!([1, 1]));

    let zero_poly = r#"{"vars":2,"terms":[{"exps":[1,1],"coeff":"1"},{"exps":[1,0],"coeff":"1"},{"exps":[0,1],"coeff":"1"},{"exps":[0,0],"coeff":"1"}]}"#;
    let out = multihilb(&["verify", &ws.file("z2.json", ZERO_11), "--d", "0,0", "--poly", zero_poly, "--horizon", "4"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn slice_round_trips_into_gasharov() {
    let ws = Workspace::new();
    let out = multihilb(&["slice", &ws.file("b.json", BILEX), "--prefix", "2", "--u-max", "5"]);
    assert_eq!(code(&out), 0);
    let slice = json(&out);
    assert_eq!(slice["v"], 21);
    assert_eq!(slice["generator_degree_bound"], 2);
    for u in 1..=5u64 {
        assert_eq!(slice["hf"][u.to_string()], 4 * u + 8);
    }

    let points = ws.file("p.json", POINTS);
    let out = multihilb(&["slice", &points, "--prefix", "2", "--u-max", "4"]);
    let slice_file = ws.file("s.json", &stdout(&out));
    let out = multihilb(&["gasharov", &slice_file, "--d", "2"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["outcome"], "maximal_growth_persists");
    assert_eq!(report["persistence"], "confirmed");

    let out = multihilb(&["slice", &ws.file("z.json", ZERO_11), "--prefix", "1", "--u-max", "3"]);
    let zero_slice = ws.file("zs.json", &stdout(&out));
    let out = multihilb(&["gasharov", &zero_slice, "--d", "1"]);
    assert_eq!(json(&out)["outcome"], "growth_strict");
    assert_eq!(json(&out)["bound"], "10");

    let synthetic = ws.file("syn.json", r#"{"generator_degree_bound":0,"l":0,"hf":{"3":1,"4":5}}"#);
    let out = multihilb(&["gasharov", &synthetic, "--d", "3"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["outcome"], "bound_violated");
    assert_eq!(json(&out)["provenance"], "external");

    let out = multihilb(&["slice", &ws.file("f.json", r#"{"blocks":[1,1],"generators":["x[1][0]","x[1][1]"]}"#), "--prefix", "1", "--u-max", "2", "--format", "plain"]);
    assert_eq!(stdout(&out), "0\t0\n1\t0\n2\t0");
}

#[test]
fn input_and_budget_errors() {
    let ws = Workspace::new();
    let out = multihilb(&["hilbert-eval", &ws.file("bad.json", "{"), "--degree", "1"]);
    assert_eq!(code(&out), 2);
    let out = multihilb(&["hilbert-eval", "/nonexistent/ideal.json", "--degree", "1"]);
    assert_eq!(code(&out), 2);
    let out = multihilb(&["hilbert-eval", &ws.file("z.json", ZERO_11), "--degree", "1"]);
    assert_eq!(code(&out), 2);
    let out = multihilb(&["hilbert-eval", &ws.file("z2.json", ZERO_11), "--degree", "1,1", "--bogus"]);
    assert_eq!(code(&out), 2);

    let gr = ws.file("gr.json", GRASSMANNIAN);
    let out = multihilb(&["hilbert-eval", &gr, "--degree", "7,54"]);
    assert_eq!(code(&out), 3);
    let out = Command::new(env!("CARGO_BIN_EXE_multihilb"))
        .args(["hilbert-eval", &gr, "--degree", "2,2"])
        .env("MULTIHILB_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    let out = multihilb(&["grid", &ws.file("z3.json", ZERO_11), "--lower", "0,0", "--upper", "9,9", "--budget", "50"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn threads_flag() {
    let ws = Workspace::new();
    let out = multihilb(&["--threads", "2", "grid", &ws.file("p.json", POINTS), "--lower", "0,0", "--upper", "2,2"]);
    assert_eq!(code(&out), 0);
}
