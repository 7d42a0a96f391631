use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn frepkit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frepkit"))
        .current_dir(dir)
        .env_remove("FREPKIT_BUDGET")
        .args(args)
        .output()
        .expect("run frepkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let o = frepkit(dir, args);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    stdout(&o)
}

#[test]
fn construct_prints_parameters() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert!(ok(p, &["construct", "turan", "--n", "6", "--r", "2", "--out", "k33.frc"]).contains("(6,9,3,2)"));
    assert!(ok(p, &["construct", "td", "--rho", "3", "--alpha", "4", "--out", "td.frc"]).contains("(12,16,4,3)"));
    assert!(ok(p, &["construct", "cage", "--name", "petersen", "--out", "p.frc"]).contains("(10,15,3,2)"));
    assert!(ok(p, &["construct", "plane", "--q", "2", "--out", "fano.frc"]).contains("(7,7,3,3)"));
    assert!(fs::read_to_string(p.join("k33.frc")).unwrap().starts_with("FRC 6 9 3 2\n"));
    assert_eq!(ok(p, &["construct", "complete", "--n", "3"]), "FRC 3 3 2 2\n1 2\n1 3\n2 3\n");

    fs::write(p.join("c4.graph"), "GRAPH 4 4\n1 2\n2 3\n3 4\n1 4\n").unwrap();
    assert!(ok(p, &["construct", "graph", "--input", "c4.graph", "--out", "c4.frc"]).contains("(4,4,2,2)"));

    let bad = frepkit(p, &["construct", "turan", "--n", "7", "--r", "2"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("divide") || stderr(&bad).contains("r = 2"), "{}", stderr(&bad));
    let bad = frepkit(p, &["construct", "cage", "--name", "nope"]);
    assert_ne!(bad.status.code(), Some(0));
}

#[test]
fn analyze_tables_and_json() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    ok(p, &["construct", "td", "--rho", "3", "--alpha", "4", "--out", "td.frc"]);
    let text = ok(p, &["analyze", "td.frc"]);
    let ms: Vec<(usize, usize)> = text
        .lines()
        .filter_map(|l| {
            let w: Vec<&str> = l.split_whitespace().collect();
            Some((w.first()?.parse().ok()?, w.get(1)?.parse().ok()?))
        })
        .collect();
    assert_eq!(ms, [(1, 4), (2, 7), (3, 9), (4, 11)]);
    assert!(text.contains("optimal: yes"), "{text}");

    let json = ok(p, &["analyze", "td.frc", "--format", "json", "--frb", "4"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["schema"], "frepkit-report/1");
    assert_eq!(v["rows"][3]["M"], 11);
    assert_eq!(v["optimal"], true);
    assert_eq!(v["frb"]["tuple"], "3-(12,11,4,4,11)");
    assert_eq!(json, ok(p, &["--jobs", "1", "analyze", "td.frc", "--format", "json", "--frb", "4"]));

    ok(p, &["construct", "complete", "--n", "3", "--out", "k3.frc"]);
    assert!(ok(p, &["analyze", "k3.frc"]).contains("universally good: yes"));

    ok(p, &["construct", "cage", "--name", "petersen", "--out", "p.frc"]);
    let pj: serde_json::Value = serde_json::from_str(&ok(p, &["analyze", "p.frc", "--k-max", "6", "--format", "json"])).unwrap();
    let ms: Vec<u64> = pj["rows"].as_array().unwrap().iter().map(|r| r["M"].as_u64().unwrap()).collect();
    assert_eq!(ms, [3, 5, 7, 9, 10, 12]);
    let girth_checks = pj["checks"].as_array().unwrap().iter().filter(|c| c["name"] == "girth_formula").count();
    assert_eq!(girth_checks, 6);
}

#[test]
fn budget_refusal() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    ok(p, &["construct", "td", "--rho", "3", "--alpha", "4", "--out", "td.frc"]);
    let o = frepkit(p, &["--budget", "100", "analyze", "td.frc"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("budget"), "{}", stderr(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_frepkit"))
        .current_dir(p)
        .env("FREPKIT_BUDGET", "100")
        .args(["analyze", "td.frc"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn td_lifecycle() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    ok(p, &["construct", "td", "--rho", "3", "--alpha", "4", "--out", "td.frc"]);
    let out = ok(p, &["store", "td.frc", "--k", "4", "--dir", "sys", "--seed", "42"]);
    assert!(out.contains("M=11") && out.contains("GF(16)"), "{out}");
    let original = ok(p, &["reconstruct", "--dir", "sys", "--nodes", "5,6,7,8"]);
    assert_eq!(original.lines().count(), 11);
    let node7 = fs::read(p.join("sys/node_7.dat")).unwrap();

    fs::remove_file(p.join("sys/node_7.dat")).unwrap();
    let plan = ok(p, &["repair", "--dir", "sys", "--node", "7"]);
    assert_eq!(plan.lines().filter(|l| l.contains(" -> node ")).count(), 4);
    assert!(plan.contains("bandwidth = 4 symbols"), "{plan}");
    assert_eq!(fs::read(p.join("sys/node_7.dat")).unwrap(), node7);
    assert_eq!(ok(p, &["reconstruct", "--dir", "sys", "--nodes", "1,2,3,4"]), original);
    assert_eq!(ok(p, &["reconstruct", "--dir", "sys", "--nodes", "7,1,2,3"]), original);

    let short = frepkit(p, &["reconstruct", "--dir", "sys", "--nodes", "1,2,3"]);
    assert_eq!(short.status.code(), Some(1));
    assert!(stderr(&short).contains("k = 4"));

    // same seed, same bytes
    ok(p, &["store", "td.frc", "--k", "4", "--dir", "sys2", "--seed", "42"]);
    for f in ["manifest.json", "node_1.dat", "node_12.dat", "code.frc"] {
        assert_eq!(fs::read(p.join("sys").join(f)).unwrap(), fs::read(p.join("sys2").join(f)).unwrap(), "{f}");
    }
}

#[test]
fn repair_after_losing_both_replicas_fails() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    ok(p, &["construct", "complete", "--n", "4", "--out", "k4.frc"]);
    ok(p, &["store", "k4.frc", "--k", "2", "--dir", "sys"]);
    fs::remove_file(p.join("sys/node_1.dat")).unwrap();
    fs::remove_file(p.join("sys/node_2.dat")).unwrap();
    let o = frepkit(p, &["repair", "--dir", "sys", "--node", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("irreparable"), "{}", stderr(&o));
}

#[test]
fn store_from_input_file() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    ok(p, &["construct", "complete", "--n", "3", "--out", "k3.frc"]);
    fs::write(p.join("f.txt"), "1 2\n3\n").unwrap();
    ok(p, &["store", "k3.frc", "--k", "2", "--dir", "s", "--input", "f.txt"]);
    assert_eq!(ok(p, &["reconstruct", "--dir", "s", "--nodes", "2,3"]), "1\n2\n3\n");
    fs::write(p.join("g.txt"), "1 2\n").unwrap();
    let o = frepkit(p, &["store", "k3.frc", "--k", "2", "--dir", "s2", "--input", "g.txt"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn batch_and_certify() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    ok(p, &["construct", "turan", "--n", "6", "--r", "2", "--out", "k33.frc"]);
    ok(p, &["construct", "td", "--rho", "3", "--alpha", "4", "--out", "td34.frc"]);
    ok(p, &["construct", "cage", "--name", "petersen", "--out", "petersen.frc"]);
    assert!(ok(p, &["batch", "k33.frc", "--max-t"]).starts_with("t = 5\n"));
    assert!(ok(p, &["batch", "td34.frc", "--max-t"]).starts_with("t = 11\n"));
    assert!(ok(p, &["batch", "petersen.frc", "--t", "7"]).contains("certified"));
    let o = frepkit(p, &["batch", "k33.frc", "--t", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness"));
    assert!(ok(p, &["certify-frb", "k33.frc", "--k", "3"]).contains("2-(6,7,3,3,5)"));
    let j: serde_json::Value = serde_json::from_str(&ok(p, &["certify-frb", "td34.frc", "--k", "4", "--format", "json"])).unwrap();
    assert_eq!(j["tuple"], "3-(12,11,4,4,11)");
    assert_eq!(frepkit(p, &["certify-frb", "k33.frc", "--k", "4"]).status.code(), Some(1));
}
