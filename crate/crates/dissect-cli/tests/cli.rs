use std::io::Write;
use std::process::{Command, Output, Stdio};

fn dissect(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dissect"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const X3: &str = r#"{"degree":3,"parent":{"1":0,"2":0,"3":0}}"#;

#[test]
fn enumerate_degree_three() {
    let o = dissect(&["enumerate", "3"], "");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "12\n");
    let o = dissect(&["enumerate", "3", "--list"], "");
    assert_eq!(stdout(&o).lines().count(), 13);
}

#[test]
fn coproduct_of_x3() {
    let o = dissect(&["coproduct", "--x=-1", "-"], X3);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "(1) 1 ⊗ X3 + (3) X1 ⊗ X2 + (1) X1*X1 ⊗ X1 + (2) X2 ⊗ X1 + (1) X3 ⊗ 1\n");
    // the corolla has no flipped chords; a chain of chords does
    let chain = r#"{"degree":3,"parent":{"1":0,"2":1,"3":2}}"#;
    assert!(!stdout(&dissect(&["coproduct", "--x", "formal", "-"], X3)).contains('x'));
    assert!(stdout(&dissect(&["coproduct", "--x", "formal", "-"], chain)).contains("x^2"));
}

#[test]
fn verify_signs_passes() {
    let o = dissect(&["verify", "signs", "--max-degree", "5"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("signs: pass"));
}

#[test]
fn exit_codes() {
    assert_eq!(dissect(&["coproduct", "-"], "{not json").status.code(), Some(2));
    assert_eq!(dissect(&["verify", "nonsense"], "").status.code(), Some(2));
    assert_eq!(dissect(&["reduce", "-"], X3).status.code(), Some(2), "undecorated input is not generic");
    assert_eq!(dissect(&["frobnicate"], "").status.code(), Some(2));
    assert_eq!(dissect(&["eval", "--tol", "0", "-"], X3).status.code(), Some(2));
}

#[test]
fn reduce_prints_symbols() {
    let y2 = r#"{"degree":2,"parent":{"1":0,"2":1},
        "a":[{"mode":"formal","value":{"a1":"1"}},{"mode":"formal","value":{"a2":"1"}}],
        "b":[{"mode":"formal","value":{"b0":"1"}},{"mode":"formal","value":{"b1":"1"}},{"mode":"formal","value":{"b2":"1"}}]}"#;
    let o = dissect(&["reduce", "-"], y2);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("I("));
    let j = dissect(&["reduce", "--format", "json", "-"], y2);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|t| t["coeff"].is_i64()));
}

#[test]
fn eval_records_the_path() {
    let d = r#"{"degree":1,"parent":{"1":0},
        "a":[{"mode":"gaussian","value":["1/3","2"]}],
        "b":[{"mode":"gaussian","value":["1","0"]},{"mode":"gaussian","value":["5/2","1/2"]}]}"#;
    let o = dissect(&["eval", "--tol", "1e-12", "--clearance", "0.5", "-"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let p = &v["terms"][0]["path"];
    assert_eq!(p["clearance"], 0.5);
    assert_eq!(p["waypoints"][0], serde_json::json!([-1.0, 0.0]));
    assert_eq!(v["value"].as_array().unwrap().len(), 2);
}

#[test]
fn export_round_trips_and_is_deterministic() {
    let a = dissect(&["export", "-"], X3);
    let b = dissect(&["export", "-"], &stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    let dot = dissect(&["export", "--format", "dot", "-"], X3);
    assert!(stdout(&dot).starts_with("digraph"));
    let tikz = dissect(&["export", "--format", "tikz", "-"], X3);
    assert!(stdout(&tikz).contains("tikzpicture"));
    let arr = dissect(&["export", "--format", "arrangement", "-"], X3);
    assert!(stdout(&arr).contains("\"L\""));
}
