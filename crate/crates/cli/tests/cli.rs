use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lie-proper"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn orbits_row_counts() {
    for (t, rows) in [("A1", 1), ("A2", 2), ("G2", 4), ("B3", 6)] {
        let o = run(&["orbits", "--type", t]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o).lines().count(), rows, "{t}");
    }
    assert_eq!(stdout(&run(&["orbits", "--type", "A1"])).trim(), "(2)");
}

#[test]
fn orbits_rejects_bad_type() {
    let o = run(&["orbits", "--type", "A12"]);
    assert_eq!(code(&o), 64);
}

#[test]
fn ahyp_prints_both_values_for_split_forms() {
    let o = run(&["ahyp", "--name", "sl(6,R)"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("a-hyperbolic rank 3"), "{out}");
    assert!(out.contains("computed from -w0 on the split Cartan: 3"), "{out}");
    assert_eq!(code(&run(&["ahyp", "--name", "sl(99,R)"])), 3);
}

#[test]
fn check_exit_codes() {
    let o = run(&["check", "--g", "sl(6,R)", "--h", "sl(2,R)+sl(3,R)", "--embedding", "tensor"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("L3"));

    let emb = data("sl5-sl4.emb");
    let o = run(&["check", "--g", "sl(5,R)", "--h", "sl(4,R)", "--embedding", "matrix-file", emb.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("L1"));

    let o = run(&["check", "--g", "su*(8)", "--h", "sl(3,R)", "--embedding", "tensor"]);
    assert!(code(&o) > 2);

    let o = run(&["check", "--bogus"]);
    assert!(code(&o) > 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));

    let o = run(&["check", "--g", "sl(6,R)", "--h", "sl(4,R)", "--embedding", "sideways"]);
    assert!(code(&o) > 2);
}

#[test]
fn certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (h, kind, expected) in [("sl(2,R)+sl(3,R)", "tensor", 0), ("sl(4,R)", "lambda2", 1)] {
        let cert = dir.path().join(format!("{kind}.json"));
        let o =
            run(&["check", "--g", "sl(6,R)", "--h", h, "--embedding", kind, "--certificate", cert.to_str().unwrap()]);
        assert_eq!(code(&o), expected);
        let text = std::fs::read_to_string(&cert).unwrap();
        assert!(text.contains("\"schema\": \"lie-proper/certificate/v1\""));
        let o = run(&["check", "--verify-certificate", cert.to_str().unwrap()]);
        assert_eq!(code(&o), expected, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("certificate replays"));

        let tampered = text.replacen("\"admits\": true", "\"admits\": false", 1).replacen(
            "\"admits\": false",
            "\"admits\": true",
            usize::from(expected == 1),
        );
        std::fs::write(&cert, tampered).unwrap();
        assert_eq!(code(&run(&["check", "--verify-certificate", cert.to_str().unwrap()])), 3);
    }
}

fn strip_timing(json: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn classify_bundled_database() {
    let dir = tempfile::tempdir().unwrap();
    let db = data("pairs.toml");
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let o = run(&["classify", db.to_str().unwrap(), "-o", a.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o2 = run(&["--threads", "1", "classify", db.to_str().unwrap(), "-o", b.to_str().unwrap()]);
    assert_eq!(code(&o2), 0);
    assert_eq!(stdout(&o), stdout(&o2));
    let (ra, rb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(strip_timing(&ra), strip_timing(&rb));

    let report = strip_timing(&ra);
    assert_eq!(report["schema"], "lie-proper/report/v1");
    assert_eq!(report["input_digest"].as_str().unwrap().len(), 64);
    let verdicts = report["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 9);
    let admits: Vec<&str> =
        verdicts.iter().filter(|v| v["admits_nonabelian"] == true).map(|v| v["id"].as_str().unwrap()).collect();
    assert_eq!(admits, ["sl6-sl2+sl3", "sl8-sl2+sl4", "sl9-sl3+sl3", "e6-sl3+g2", "sl6-sl4-block"]);
}

#[test]
fn classify_empty_database() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("empty.toml");
    std::fs::write(&db, "").unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["classify", db.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = strip_timing(&std::fs::read_to_string(&out).unwrap());
    assert!(r["verdicts"].as_array().unwrap().is_empty());
    assert!(r["errors"].as_array().unwrap().is_empty());
}

#[test]
fn classify_reports_an_unknown_name_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db.toml");
    std::fs::write(
        &db,
        "schema = \"lie-proper/pairs/v1\"\n\n\
         [[pair]]\nid = \"a\"\ng = \"sl(3,R)\"\nh = [\"sl(3,R)\"]\nembedding = \"matrix\"\nmatrix = [[1, 0], [0, 1]]\n\n\
         [[pair]]\nid = \"b\"\ng = \"sl(3,Q)\"\nh = [\"sl(2,R)\"]\nembedding = \"matrix\"\nmatrix = [[1], [1]]\n\n\
         [[pair]]\nid = \"c\"\ng = \"sl(6,R)\"\nh = [\"sl(2,R)\", \"sl(3,R)\"]\nembedding = \"tensor\"\n",
    )
    .unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["classify", db.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = strip_timing(&std::fs::read_to_string(&out).unwrap());
    let errors = r["errors"].as_array().unwrap();
    assert_eq!(errors.len(), 1);
    assert_eq!(errors[0]["id"], "b");
    assert_eq!(errors[0]["line"], 10);
    let ids: Vec<&str> = r["verdicts"].as_array().unwrap().iter().map(|v| v["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["a", "c"]);
}

#[test]
fn classify_rejects_wrong_schema() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db.toml");
    std::fs::write(&db, "schema = \"something/else\"\n").unwrap();
    assert_eq!(code(&run(&["classify", db.to_str().unwrap()])), 3);
}

#[test]
fn validate_db_lists_every_record() {
    let o = run(&["validate-db", data("pairs.toml").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("9 records loaded, 0 rejected"), "{out}");
    assert!(
        out.contains("e6-sl3+g2: sl(3,R)+g2(2) in e6(6) [matrix] ok, 18 roots of h found, 56 module weights (2 zero)")
    );
}

#[test]
fn seed_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db.toml");
    std::fs::write(&db, "schema = \"lie-proper/pairs/v1\"\n").unwrap();
    let out = dir.path().join("r.json");
    run(&["classify", db.to_str().unwrap(), "-o", out.to_str().unwrap(), "--seed", "42"]);
    assert_eq!(strip_timing(&std::fs::read_to_string(&out).unwrap())["seed"], 42);
}
