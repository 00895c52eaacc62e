use std::process::{Command, Output};

fn cluster_ty(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster-ty")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_cartan_reports_symmetrizer() {
    let o = cluster_ty(&["check-cartan", "--matrix", "[[2,-1],[-5,2]]"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["summary"], "tamely laced, D=diag(5,1), t=5");
    assert_eq!(doc["t"], 5);
    assert_eq!(doc["d"], serde_json::json!([5, 1]));
}

#[test]
fn affine_rank_two_is_rejected() {
    let o = cluster_ty(&["check-cartan", "--matrix", "[[2,-2],[-2,2]]", "--format", "text"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not tamely laced"));
}

#[test]
fn malformed_input_exits_with_two() {
    let o = cluster_ty(&["check-cartan", "--matrix", "[[2,-1],[oops]]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = cluster_ty(&["build-quiver", "--matrix", "[[2,-1],[-1,2]]", "--level", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn periodicity_passes_for_b2_like_rank_two() {
    let o = cluster_ty(&["verify-periodicity", "--matrix", "[[2,-1],[-4,2]]", "--level", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["summary"]["failed"], 0);
}

#[test]
fn relations_pass_through_the_binary() {
    let t = cluster_ty(&["verify-t", "--matrix", "[[2,-1],[-2,2]]", "--level", "3"]);
    assert_eq!(t.status.code(), Some(0));
    let y = cluster_ty(&["verify-y", "--matrix", "[[2,-1],[-3,2]]", "--window", "-3:3"]);
    assert_eq!(y.status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["export", "--matrix", "[[2,-1,0],[-1,2,-2],[0,-1,2]]", "--level", "2"];
    let a = cluster_ty(&args);
    let b = cluster_ty(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let dot = cluster_ty(&["build-quiver", "--matrix", "[[2,-1],[-2,2]]", "--format", "dot"]);
    assert!(stdout(&dot).starts_with("digraph"));
}

#[test]
fn wrong_mode_for_check_is_invalid_input() {
    let o = cluster_ty(&["verify-t", "--matrix", "[[2,-1],[-2,2]]", "--mode", "semifield"]);
    assert_eq!(o.status.code(), Some(2));
}
