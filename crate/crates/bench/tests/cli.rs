use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn pamo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pamo"))
        .args(args)
        .current_dir(repo())
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn solve_detour_front() {
    let o = pamo(&["solve", "--instance", "maps/detour.toml", "--mode", "mo"]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["schema"], "pamo.result/1");
    let costs: Vec<_> = doc["solutions"].as_array().unwrap().iter().map(|s| s["cost"].clone()).collect();
    assert_eq!(costs, [serde_json::json!([4.0, 1.0]), serde_json::json!([12.0, 0.0])]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.map"), "type octile\nheight 1\nwidth 6\nmap\n......\n").unwrap();
    let inst = dir.path().join("c.toml");
    fs::write(&inst, "goal = [4, 0]\nmap = \"c.map\"\nobjects = [[2, 0]]\nstart = [0, 0]\n").unwrap();
    let inst = inst.to_str().unwrap();
    assert_eq!(code(&pamo(&["solve", "--instance", inst, "--mode", "rc", "--k-push", "3"])), 0);
    assert_eq!(code(&pamo(&["solve", "--instance", inst, "--mode", "rc", "--k-push", "0"])), 2);
    let tiny = ["solve", "--instance", inst, "--mode", "mo", "--time-limit", "0.000000001"];
    assert_eq!(code(&pamo(&tiny)), 3);
    assert_eq!(code(&pamo(&["solve", "--mode", "mo"])), 1);
    assert_eq!(code(&pamo(&["solve", "--instance", "nope.toml", "--mode", "mo"])), 1);
    assert_eq!(code(&pamo(&["oracle", "--instance", inst, "--k-push", "2"])), 2);
    assert_eq!(code(&pamo(&["--help"])), 0);
}

#[test]
fn gen_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("e.map");
    fs::copy(repo().join("maps/empty-8-8.map"), &map).unwrap();
    let out = dir.path().join("i.toml");
    let args = [
        "gen", "--map", map.to_str().unwrap(), "--fraction", "0.1", "--seed", "7", "--start", "0,0", "--goal", "7,7",
        "--out", out.to_str().unwrap(),
    ];
    assert_eq!(code(&pamo(&args)), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("map = \"e.map\""), "{text}");
    assert!(text.ends_with('\n'));
    // same seed, same document
    let again = dir.path().join("j.toml");
    let mut args2 = args;
    args2[12] = again.to_str().unwrap();
    pamo(&args2);
    assert_eq!(text, fs::read_to_string(&again).unwrap());
    let o = pamo(&["solve", "--instance", out.to_str().unwrap(), "--mode", "rc"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn hybrid_writes_trajectory_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = pamo(&["hybrid", "--scenario", "scenarios/corridor.toml", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "step,time,v,omega,robot_x,robot_y,robot_theta,obj0_x,obj0_y,obj0_theta"
    );
    assert!(lines.next().unwrap().starts_with("0,0,,,2,1,0,2,4,0"));
    assert!(lines.count() >= 1);
}

#[test]
fn bench_writes_records_and_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("s.toml");
    let map = repo().join("maps/empty-8-8.map");
    fs::write(
        &suite,
        format!(
            "mode = \"rc\"\nfractions = [0.1]\nseeds = [0, 1]\noutput = \"r.csv\"\n[[maps]]\npath = \"{}\"\n",
            map.display()
        ),
    )
    .unwrap();
    let o = pamo(&["bench", "--suite", suite.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let recs = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(recs.starts_with("instance,map,mode,fraction,seed,objects,outcome,"));
    assert_eq!(recs.lines().count(), 3);
    let agg = fs::read_to_string(dir.path().join("r.summary.csv")).unwrap();
    assert_eq!(agg.lines().count(), 2);
    let o = pamo(&["report", "--records", dir.path().join("r.csv").to_str().unwrap()]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), agg);
}
