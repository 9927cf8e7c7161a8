use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quantmet")).args(args).env_remove("QUANTMET_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn passing_laws_exit_zero() {
    let o = run(&["laws", "--quantale", "extreal", "--budget", "500"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("report: laws\ntoolkit: quantmet "));
    assert!(out.contains("command: laws --quantale extreal --budget 500 --seed 0\n"));
    assert!(out.ends_with("verdict: pass\n"));
}

#[test]
fn failing_space_exits_one_with_witness_triple() {
    let o = run(&["space", "check", &data("bad_triangle.toml")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: (a,c,b) d(a,c)=3 > d(a,b)=1 + d(b,c)=1"));
}

#[test]
fn load_errors_exit_two_and_name_the_file() {
    let o = run(&["space", "check", "no-such-file.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-file.toml"));
}

#[test]
fn unknown_builtin_class_is_a_usage_error() {
    let o = run(&["class", "ap", "builtin:nothing"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tameness_needs_eps_and_delta() {
    let o = run(&["class", "tame", "builtin:discrete3", "--kappa", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["class", "tame", "builtin:discrete3", "--kappa", "1", "--eps", "inf", "--delta", "inf"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("tameness: strongly tame"));
}

#[test]
fn seed_comes_from_environment_unless_given() {
    let env = Command::new(env!("CARGO_BIN_EXE_quantmet"))
        .args(["laws", "--quantale", "unit", "--budget", "300"])
        .env("QUANTMET_SEED", "42")
        .output()
        .unwrap();
    assert!(stdout(&env).contains("--seed 42"));
    let flag = run(&["laws", "--quantale", "unit", "--budget", "300", "--seed", "42"]);
    assert_eq!(stdout(&env), stdout(&flag));
    let other = run(&["laws", "--quantale", "unit", "--budget", "300", "--seed", "43"]);
    assert_ne!(stdout(&flag), stdout(&other));
}

#[test]
fn report_written_to_out_path_as_json() {
    let dir = std::env::temp_dir().join(format!("quantmet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out: PathBuf = dir.join("report.json");
    let o = run(&["omega", "check", &data("omega_asym.toml"), "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["passed"], false);
    let sym = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "symmetry").unwrap();
    assert_eq!(sym["witnesses"][0], "E(x,y)=a E(y,x)=b");
}

#[test]
fn timing_is_opt_in() {
    let plain = stdout(&run(&["space", "check", &data("triangle.toml")]));
    assert!(!plain.contains("elapsed"));
    let timed = stdout(&run(&["space", "check", &data("triangle.toml"), "--timing"]));
    assert!(timed.contains("elapsed: "));
}

#[test]
fn ball_and_sequence_diagnostics() {
    let o = run(&["space", "ball", &data("triangle.toml"), "--center", "a", "--radius", "1.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("members: a, b\n"));
    let o = run(&["space", "cauchy", &data("triangle.toml"), "--seq", "a b (c)", "--limit", "c", "--eps", "0.5"]);
    let out = stdout(&o);
    assert!(out.contains("cauchy at 0.5: from index 2"), "{out}");
    assert!(out.contains("converges to c at 0.5: from index 2"), "{out}");
}

#[test]
fn structures_and_embeddings() {
    let o = run(&["struct", "check", &data("cycle.toml")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("check nonexpanding:s: pass"));
    let o = run(&["struct", "embed", &data("pair.toml"), &data("triangle.toml"), "--map", "p=a,q=b"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn class_commands_on_files() {
    let o = run(&["class", "types", &data("discrete2.toml"), "--base", "Q"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Q.types: 2\n"));
    let o = run(&["class", "dist", &data("ext_pair.toml")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["class", "ctp", &data("glued.toml"), "--base", "P"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("check P.separation: FAIL"));
}

#[test]
fn partial_space_dualizes() {
    let o = run(&["omega", "check", &data("partial.toml")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("check round-trip: pass"));
    assert!(out.contains("partial.axioms: symmetry, subadditivity, small self-distance"));
}

#[test]
fn lattice_file_laws() {
    let o = run(&["laws", &data("frame8.toml")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mode: exhaustive"));
    let o = run(&["laws", &data("bad_add.toml")]);
    assert_eq!(o.status.code(), Some(1));
}
