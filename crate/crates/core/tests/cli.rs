use serde_json::Value;
use std::io::Write;
use std::process::Command;

const SQUARE: &str = "1 + x1^2 + x2^2 + x1^2*x2^2 - x1*x2";
const SQUARED: &str = "1 + x1^4*x2^2 + x1^2*x2^4 + 900*x1^2*x2^2 + 2*x1^2*x2 + 2*x1*x2^2 + 2*x1^3*x2^3 \
                       - 60*x1*x2 - 60*x1^3*x2^2 - 60*x1^2*x2^3";

fn past_threshold(eps: f64) -> String {
    let d = (10.0f64 / 9.0).powf(0.9) * 40f64.powf(0.1) + eps;
    format!("1 + x1^40 + x2^40 + x3^40 + x4^40 - {d:e}*x1*x2*x3*x4")
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_copositive")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, s) = run(args);
    (code, serde_json::from_str(&s).unwrap_or_else(|e| panic!("{e}: {s}")))
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &Value) {
    let errors: Vec<String> = schema().iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{v:#}");
}

#[test]
fn exit_codes_follow_verdicts() {
    assert_eq!(run(&["check", SQUARE]).0, 0);
    assert_eq!(run(&["check", &past_threshold(1e-7)]).0, 1);
    assert_eq!(run(&["check", "x1 - 1"]).0, 1);
    assert_eq!(run(&["check", "1 + x1 + x2"]).0, 0);
    assert_eq!(run(&["check", SQUARED]).0, 2);
    assert_eq!(run(&["check", "1 + x1^2 +"]).0, 64);
    assert_eq!(run(&["check", "--bogus", SQUARE]).0, 64);
    assert_eq!(run(&["check"]).0, 64);
}

#[test]
fn reports_validate_against_schema() {
    for input in [SQUARE, &past_threshold(1e-7), "x1 - 1", "1 + x1", SQUARED, "1 + x1^2 +", "1 + 2*x1 - x1"] {
        let (code, v) = json(&["check", "--json", input]);
        assert_valid(&v);
        assert_eq!(v["exit_code"], code);
    }
    let (_, v) = json(&["check", "--json", "--sonc", SQUARE]);
    assert_valid(&v);
    assert_eq!(v["sonc"]["verification"]["pass"], true);
}

#[test]
fn parse_errors_carry_position() {
    let (code, v) = json(&["check", "--json", "1 + x1^2\n + 3*y2"]);
    assert_eq!(code, 64);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["line"], 2);
    assert_eq!(v["error"]["column"], 6);
}

#[test]
fn square_report() {
    let (_, v) = json(&["check", "--json", SQUARE]);
    assert_eq!(v["verdict"], "Copositive");
    assert_eq!(v["certified"], true);
    assert_eq!(v["method"], "single-path");
    assert_eq!(v["classification"], "nonseparable");
    assert!((v["t_star"].as_f64().unwrap() - 4.0).abs() < 1e-8);
    let lo = v["t_interval"]["lo"].as_f64().unwrap();
    assert!(lo > 1.0);
}

#[test]
fn json_input_and_stdin() {
    let poly = r#"{"n": 1, "terms": [{"e": [0], "c": 1}, {"e": [2], "c": "1/1"}, {"e": [1], "c": -3}]}"#;
    assert_eq!(run(&["check", poly]).0, 1);
    let mut child = Command::new(env!("CARGO_BIN_EXE_copositive"))
        .args(["check", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(SQUARE.as_bytes()).unwrap();
    assert_eq!(child.wait_with_output().unwrap().status.code(), Some(0));
}

#[test]
fn heights_change_tstar_not_verdict() {
    let (_, a) = json(&["check", "--json", SQUARE]);
    let (_, b) = json(&["check", "--json", "--h", "2", SQUARE]);
    assert_eq!(a["verdict"], b["verdict"]);
    assert!((b["t_star"].as_f64().unwrap() - 2.0).abs() < 1e-8);
}

#[test]
fn no_certify_is_marked() {
    let (code, v) = json(&["check", "--json", "--no-certify", SQUARE]);
    assert_eq!(code, 0);
    assert_eq!(v["certified"], false);
    assert_eq!(v["t_interval"], Value::Null);
}

#[test]
fn guardrails() {
    let big = (1..=9).map(|i| format!("x{i}^2")).collect::<Vec<_>>().join(" + ") + " + 1 - x1*x2";
    assert_eq!(run(&["check", &big]).0, 64);
    assert_ne!(run(&["check", "--allow-large", &big]).0, 64);
}

#[test]
fn trace_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    assert_eq!(run(&["check", "--trace", path.to_str().unwrap(), SQUARE]).0, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "s,tau,y1,y2,step,newton_iters");
    assert!(lines.count() > 3);
}

#[test]
fn sonc_command() {
    let c: [f64; 4] = [0.7, 2.5, 1.3, 0.4];
    let c4 = 0.9 * (4.0 * (c[0] * c[3] + c[1] * c[2]) + 8.0 * (c[0] * c[1] * c[2] * c[3]).sqrt()).sqrt();
    let f = format!("{} + {}*x1^2 + {}*x2^2 + {}*x1^2*x2^2 - {c4}*x1*x2", c[0], c[1], c[2], c[3]);
    let (code, v) = json(&["sonc", &f]);
    assert_eq!(code, 0, "{v:#}");
    assert_eq!(v["verification"]["pass"], true);
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);

    let (code, v) = json(&["sonc", "1 + x1^3 + x2^3 - 2*x1*x2"]);
    assert_eq!(code, 0);
    assert_eq!(v["circuits"].as_array().unwrap().len(), 1);

    let (code, v) = json(&["sonc", SQUARED]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["message"], "unsupported: separable support");

    let (code, v) = json(&["sonc", "1 + x1^2 + x2^2 + x1^2*x2^2 - 5*x1*x2"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "not_copositive");

    assert_eq!(json(&["sonc", "1 + x1^2 - 2*x1"]).0, 2);
    let (code, v) = json(&["sonc", "--force", "1 + x1^2 - 2*x1"]);
    assert_eq!(code, 2);
    assert!(v["warnings"][0].as_str().unwrap().starts_with("NEAR-BOUNDARY"));
}

#[test]
fn support_command() {
    let (code, v) = json(&["support", SQUARE]);
    assert_eq!(code, 0);
    assert_eq!(v["nonseparable"], true);
    assert_eq!(v["lambda_size"], 2);

    let (_, v) = json(&["support", "1 + x1^4 + x2^4 + x1^4*x2^4 - x1*x2 - x1^3*x2^3"]);
    assert_eq!(v["classification"], "separable");
    let hp = &v["diagnostic"]["violating_hyperplane"];
    assert_eq!(hp["spanning"], serde_json::json!([[0, 4], [4, 0]]));

    let (_, v) = json(&["support", "1 + x1 + x2"]);
    assert_eq!(v["classification"], "trivially copositive support");
}

fn batch(jobs: &str, file: &std::path::Path) -> Vec<Value> {
    let (code, s) = run(&["batch", "--jobs", jobs, file.to_str().unwrap()]);
    assert_eq!(code, 0);
    s.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn batch_mode() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.ndjson");
    let lines = [
        serde_json::to_string(SQUARE).unwrap(),
        serde_json::to_string(&past_threshold(1e-7)).unwrap(),
        "not json".to_string(),
        String::new(),
        r#"{"n": 1, "terms": [{"e": [0], "c": 1}, {"e": [1], "c": 1}]}"#.to_string(),
        serde_json::to_string(SQUARED).unwrap(),
    ];
    std::fs::write(&path, lines.join("\n")).unwrap();
    let one = batch("1", &path);
    assert_eq!(one.len(), 5);
    let verdicts: Vec<&Value> = one.iter().map(|r| &r["verdict"]).collect();
    assert_eq!(verdicts[0], "Copositive");
    assert_eq!(verdicts[1], "NotCopositive");
    assert_eq!(one[2]["error"]["kind"], "parse");
    assert_eq!(verdicts[3], "TriviallyCopositive");
    assert_eq!(verdicts[4], "Inconclusive");
    let numbers: Vec<u64> = one.iter().map(|r| r["line"].as_u64().unwrap()).collect();
    assert_eq!(numbers, vec![1, 2, 3, 5, 6]);
    for r in &one {
        assert_valid(r);
    }
    let strip = |mut v: Vec<Value>| {
        for r in &mut v {
            r["timing"] = Value::Null;
        }
        v
    };
    assert_eq!(strip(one), strip(batch("4", &path)));
}
