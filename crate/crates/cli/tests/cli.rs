use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn maghom(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maghom"))
        .args(args)
        .env("MAGHOM_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

#[test]
fn discrete_graph_has_one_cell() {
    let dir = tempfile::tempdir().unwrap();
    let o = maghom(dir.path(), &["homology", "E(3)", "--lmax", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "l\\k,0,1,2\r\n0,3,,\r\n1,,,\r\n2,,,\r\n");
}

#[test]
fn chain_counts_of_small_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let o = maghom(dir.path(), &["chains", "K(2)", "--lmax", "3", "--format", "csv"]);
    assert_eq!(
        stdout(&o),
        "l\\k,0,1,2,3\r\n0,2,,,\r\n1,,2,,\r\n2,,,2,\r\n3,,,,2\r\n"
    );
    let o = maghom(dir.path(), &["chains", "E(2)", "--lmax", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "l\\k,0,1,2,3\r\n0,2,,,\r\n1,,,,\r\n2,,,,\r\n3,,,,\r\n");
}

#[test]
fn magnitude_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = maghom(dir.path(), &["magnitude", "E(7)", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines().skip(1) {
        assert!(line.ends_with(",7,0,0,0,0,0,0"), "{line}");
    }
    let o = maghom(
        dir.path(),
        &["magnitude", "K(3)", "--lmax", "4", "--method", "counting", "--format", "json"],
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "maghom.magnitude/1");
    assert_eq!(v["series"]["counting"], serde_json::json!([3, -6, 12, -24, 48]));
    assert!(v["series"]["inverse"].is_null());
    assert!(v["agree"].is_null());
}

#[test]
fn json_schema_and_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["homology", "C(5)", "--lmax", "5", "--torsion", "--format", "json"];
    let first = maghom(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    let cached: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert!(!cached.is_empty());
    let second = maghom(dir.path(), &args);
    assert_eq!(stdout(&first), stdout(&second));
    let fresh = maghom(dir.path(), &[&args[..], &["--no-cache"]].concat());
    assert_eq!(stdout(&first), stdout(&fresh));

    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["schema"], "maghom.homology/1");
    assert_eq!(v["graph"]["n"], 5);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 5);
    assert_eq!(v["lmax"], 5);
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 21);
    let c = cells.iter().find(|c| c["k"] == 3 && c["l"] == 4).unwrap();
    assert_eq!(c["rank"], 30);
    assert_eq!(c["torsion"], serde_json::json!([]));
    assert!(c["method"].is_string());
    let m = serde_json::json!([5, -10, 10, 0, -20, 40]);
    assert_eq!(v["series"]["counting"], m);
    assert_eq!(v["series"]["inverse"], m);
    assert_eq!(v["series"]["euler"], m);
}

#[test]
fn cached_csv_matches_fresh_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = maghom(dir.path(), &["homology", "petersen", "--lmax", "5", "--format", "csv"]);
    let b = maghom(dir.path(), &["homology", "petersen", "--lmax", "4", "--format", "csv"]);
    let c = maghom(
        dir.path(),
        &["homology", "petersen", "--lmax", "4", "--format", "csv", "--no-cache"],
    );
    assert_eq!(stdout(&b), stdout(&c));
    assert!(stdout(&a).starts_with("l\\k,0,1,2,3,4,5\r\n0,10,"));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = maghom(dir.path(), &["verify", "join-diagonal", "E(2)", "E(3)", "--lmax", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = maghom(dir.path(), &["verify", "diagonal", "C(5)", "--lmax", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(2, 3): expected 0, found 10"));

    let fixture = corpus("two_pentagons.txt");
    let o = maghom(
        dir.path(),
        &["verify", "mayer-vietoris", fixture.to_str().unwrap(), "--lmax", "4"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("does not project"));

    let o = maghom(
        dir.path(),
        &["verify", "mayer-vietoris", "wedge(C(5),0,C(5),0)", "--gset", "0,1,2,3,4", "--hset", "0,5,6,7,8"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = maghom(
        dir.path(),
        &["verify", "kunneth", "K(2)", "K(2)", "--lmax", "6", "--format", "json"],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "maghom.check/1");
    assert_eq!(v["verdict"]["verdict"], "pass");
}

#[test]
fn usage_and_guard_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(maghom(dir.path(), &["homology", "C("]).status.code(), Some(3));
    assert_eq!(maghom(dir.path(), &["homology", "foo(3)"]).status.code(), Some(3));
    assert_eq!(maghom(dir.path(), &["frobnicate"]).status.code(), Some(3));
    assert_eq!(maghom(dir.path(), &["homology", "C(5)", "--lmax", "x"]).status.code(), Some(3));
    assert_eq!(maghom(dir.path(), &["verify", "diagonal"]).status.code(), Some(3));
    assert_eq!(
        maghom(dir.path(), &["verify", "mayer-vietoris", "C(6)"]).status.code(),
        Some(3)
    );
    assert_eq!(maghom(dir.path(), &["--help"]).status.code(), Some(0));

    let o = maghom(
        dir.path(),
        &["homology", "C(5)", "--lmax", "8", "--max-trails", "1000", "--format", "csv"],
    );
    assert_eq!(o.status.code(), Some(4));
    let text = stdout(&o);
    assert!(text.contains("6,?,?,?,?,?,?,?,,"), "{text}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("--max-trails"));

    let o = maghom(
        dir.path(),
        &["verify", "diagonal", "petersen", "--lmax", "6", "--max-trails", "100"],
    );
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn edge_list_files_are_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = maghom(
        dir.path(),
        &["verify", "tree", corpus("spider.txt").to_str().unwrap(), "--lmax", "4"],
    );
    assert_eq!(o.status.code(), Some(0));
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 1\n1 1\n").unwrap();
    let o = maghom(dir.path(), &["chains", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let o = maghom(dir.path(), &["sweep", "--max-vertices", "6", "--lmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("no torsion found"));

    let o = maghom(
        dir.path(),
        &["sweep", "--max-vertices", "6", "--lmax", "4", "--report", "diagonal", "--format", "json"],
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let graphs = v["graphs"].as_array().unwrap();
    let diag = |name: &str| {
        graphs.iter().find(|g| g["name"] == name).unwrap()["diagonal"]
            .as_bool()
            .unwrap()
    };
    assert!(diag("K4") && diag("K2,3") && diag("octahedron") && diag("P5"));
    assert!(!diag("C5"));

    let o = maghom(
        dir.path(),
        &["sweep", "--corpus", corpus("").to_str().unwrap(), "--lmax", "3", "--format", "csv"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("two_pentagons,8,9,ok"));
}
