use std::process::{Command, Output};

fn csp_comm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csp-comm")).args(args).output().expect("the binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on standard output")
}

const K2: &str = r#"{"signature":[{"name":"E","arity":2}],"domain":2,"relations":{"E":[[0,1],[1,0]]}}"#;

#[test]
fn homomorphism_found_and_missing() {
    let out = csp_comm(&["hom", "find", "clique:3", "clique:4"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_json(&out)["homomorphism"].is_array());
    let out = csp_comm(&["hom", "find", "clique:3", K2]);
    assert_eq!(code(&out), 1);
    assert!(stdout_json(&out)["homomorphism"].is_null());
}

#[test]
fn homomorphism_check_reads_a_map() {
    assert_eq!(code(&csp_comm(&["hom", "check", K2, "clique:3", "--map", "[0,2]"])), 0);
    assert_eq!(code(&csp_comm(&["hom", "check", K2, "clique:3", "--map", "[1,1]"])), 1);
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(code(&csp_comm(&["hom", "find", "clique:3"])), 2);
    assert_eq!(code(&csp_comm(&["core", "clique:3", "--no-such-flag"])), 2);
    assert_eq!(code(&csp_comm(&["core", "no_such_structure"])), 2);
    let bad = r#"{"signature":[{"name":"E","arity":2}],"domain":2,"relations":{"E":[[0,2]]}}"#;
    assert_eq!(code(&csp_comm(&["core", bad])), 2);
    assert_eq!(code(&csp_comm(&["demo", "no-such-demo"])), 2);
}

#[test]
fn caps_exit_three() {
    let out = csp_comm(&["power", "alice", "--k", "40", "clique:3"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn power_accepts_positional_and_flag_modes() {
    let a = csp_comm(&["power", "alice", "--k", "2", "clique:2"]);
    let b = csp_comm(&["power", "--mode", "alice", "--k", "2", "clique:2"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["domain"], 4);
    let bob = csp_comm(&["power", "bob", "--k", "2", "clique:3"]);
    assert_eq!(stdout_json(&bob)["domain"], 6);
}

#[test]
fn isomorphism_of_a_power() {
    let dir = std::env::temp_dir().join(format!("csp-comm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("power.json");
    let path = path.to_str().unwrap();
    assert_eq!(code(&csp_comm(&["power", "alice", "--k", "2", "clique:2", "-o", path])), 0);
    assert_eq!(code(&csp_comm(&["iso", path, "clique:4"])), 0);
    assert_eq!(code(&csp_comm(&["iso", path, "clique:3"])), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn pattern_queries() {
    let out = csp_comm(&["pattern", "chromatic", "directed_cycle:5"]);
    assert_eq!(stdout_json(&out)["chromatic_number"], 3);
    let out = csp_comm(&["pattern", "central", "directed_edge"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["central"], serde_json::json!([]));
    let out = csp_comm(&["pattern", "covering", "--n", "6", "--r", "2", "--q", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().all(|l| l.split(',').all(|v| v == "0" || v == "1")));
}

#[test]
fn embeddings() {
    let out = csp_comm(&["embed", "clique-alice-digraph", "directed_edge", "--m", "4"]);
    assert_eq!(stdout_json(&out)["k"], 5);
    assert_eq!(code(&csp_comm(&["embed", "complete-bob", "clique:3", "--n", "2"])), 0);
    assert_eq!(code(&csp_comm(&["embed", "complete-bob", "directed_edge", "--n", "2"])), 1);
}

#[test]
fn strategies_round_trip_through_files() {
    let out = csp_comm(&["game", "brute", "clique:2", "directed_edge", "--k", "2", "--direction", "alice"]);
    assert_eq!(code(&out), 0);
    let strategy = stdout_json(&out)["strategy"].to_string();
    assert_eq!(code(&csp_comm(&["game", "verify", "clique:2", "directed_edge", "--strategy", &strategy])), 0);
    let out = csp_comm(&["game", "brute", "clique:2", "directed_edge", "--k", "2", "--direction", "bob"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["space"], "4096");

    let out = csp_comm(&["game", "synth", "clique:3", "clique:3", "--from-hom", "[1,2,0]"]);
    assert_eq!(code(&out), 0);
    let strategy = String::from_utf8(out.stdout).unwrap();
    assert_eq!(code(&csp_comm(&["game", "verify", "clique:3", "clique:3", "--strategy", &strategy])), 0);
    assert_eq!(code(&csp_comm(&["game", "verify", "clique:3", "clique:2", "--strategy", &strategy])), 2);
}

#[test]
fn quantum_commands() {
    let pvm = r#"[[[[1,0],[0,0]],[[0,0],[0,0]]],[[[0,0],[0,0]],[[0,0],[1,0]]]]"#;
    let out = csp_comm(&["quantum", "validate", pvm]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = csp_comm(&["quantum", "close-equality", "--d", "3", "--trials", "40"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["disagreements"], 0);
}

#[test]
fn geometry_commands() {
    let out = csp_comm(&["geom", "color-sphere", "--dim", "3", "--audit", "2000"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["audit_violations"], 0);
    let out = csp_comm(&["geom", "frames", "--n", "2", "--d", "1", "--seed", "4", "--audit"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["adjacent"], true);
}

#[test]
fn demo_listing_and_single_run() {
    let out = csp_comm(&["demo", "--list"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("edge-vs-arc"));
    let out = csp_comm(&["demo", "edge-vs-arc", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)[0]["passed"], true);
}
