use std::path::Path;
use std::process::{Command, Output};

fn pkl(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pkl")).current_dir(dir).env_remove("PKL_CACHE_DIR").args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(pkl(d.path(), &["check", "--datum", "GL2", "--p", "5"]).status.code(), Some(0));
    let b2 = pkl(d.path(), &["check", "--datum", "B2-sc", "--p", "2"]);
    assert_eq!(b2.status.code(), Some(1));
    assert!(stdout(&b2).contains("bounds on p: FAIL"));
    let forced = pkl(d.path(), &["check", "--datum", "B2-sc", "--p", "2", "--override-assumptions"]);
    assert_eq!(forced.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&forced.stderr).contains("warning"));
    assert_eq!(pkl(d.path(), &["check", "--datum", "Q7", "--p", "5"]).status.code(), Some(2));
    assert_eq!(pkl(d.path(), &["check", "--datum", "GL2", "--p", "4"]).status.code(), Some(2));
}

#[test]
fn pkl_small_elements() {
    let d = tempfile::tempdir().unwrap();
    let o = pkl(d.path(), &["pkl", "--datum", "GL2", "--p", "2", "--w", "s0", "--no-cache"]);
    assert_eq!(stdout(&o), "H_{s0} + v·H_e\n");
    let kl = pkl(d.path(), &["kl", "--datum", "GL2", "--w", "s0 s1 s0"]);
    let p0 = pkl(d.path(), &["pkl", "--datum", "GL2", "--p", "0", "--w", "s0 s1 s0", "--no-cache"]);
    assert_eq!(stdout(&kl), stdout(&p0));
    let h = pkl(d.path(), &["pkl", "--datum", "GL2", "--p", "2", "--w", "s0 s1 s0", "--y", "e", "--no-cache"]);
    assert_eq!(stdout(&h), "v + v^3\n");
    assert_eq!(pkl(d.path(), &["pkl", "--datum", "GL2", "--p", "2", "--w", "s7"]).status.code(), Some(2));
}

#[test]
fn repeated_pkl_hits_cache() {
    let d = tempfile::tempdir().unwrap();
    let args = ["pkl", "--datum", "GL2", "--p", "3", "--w", "s1.s0.s1.s0", "--stats", "--cache", "c.json"];
    let first = pkl(d.path(), &args);
    let second = pkl(d.path(), &args);
    assert_eq!(stdout(&first), stdout(&second));
    assert!(String::from_utf8_lossy(&first.stderr).contains("computed=4"));
    assert!(String::from_utf8_lossy(&second.stderr).contains("computed=0"));
    assert!(!d.path().join("c.json.lock").exists());
}

#[test]
fn tilt_tables() {
    let d = tempfile::tempdir().unwrap();
    let o = pkl(d.path(), &["tilt", "--datum", "GL2", "--p", "2", "--max-len", "4", "--format", "csv", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').collect()).collect();
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[i + 1], "1");
        assert!(row[i + 2..].iter().all(|v| *v == "0"));
    }
    let k = pkl(d.path(), &["tilt", "--datum", "GL2", "--p", "2", "--K", "s1", "--max-len", "4", "--no-cache"]);
    let header = stdout(&k).lines().find(|l| l.starts_with("w\\y")).unwrap().to_string();
    assert_eq!(header.split_whitespace().collect::<Vec<_>>(), ["w\\y", "e", "s0", "s1.s0", "s0.s1.s0", "s1.s0.s1.s0"]);
    let bad = pkl(d.path(), &["tilt", "--datum", "GL2", "--p", "2", "--K", "s0 s1"]);
    assert_eq!(bad.status.code(), Some(4));
    let gated = pkl(d.path(), &["tilt", "--datum", "A1-sc", "--p", "3", "--max-len", "1"]);
    assert_eq!(gated.status.code(), Some(1));
}

#[test]
fn cache_commands() {
    let d = tempfile::tempdir().unwrap();
    let base = ["--datum", "GL2", "--p", "2", "--cache", "c.json"];
    let run = |cmd: &[&str]| pkl(d.path(), &[cmd, &base[..]].concat());
    assert_eq!(run(&["cache", "inspect"]).status.code(), Some(5));
    run(&["tilt", "--max-len", "3"]);
    let inspect = stdout(&run(&["cache", "inspect"]));
    assert!(inspect.contains("7 entries, 0 stale"), "{inspect}");
    assert_eq!(run(&["cache", "verify"]).status.code(), Some(0));
    assert_eq!(run(&["cache", "gc"]).status.code(), Some(0));

    let path = d.path().join("c.json");
    std::fs::write(d.path().join("c.json.lock"), "").unwrap();
    assert_eq!(run(&["cache", "verify"]).status.code(), Some(5));
    std::fs::remove_file(d.path().join("c.json.lock")).unwrap();

    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["entries"][3]["pcan"][0][1] = serde_json::json!({"0": 7});
    let key = doc["entries"][3]["key"].as_str().unwrap().to_string();
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let v = run(&["cache", "verify"]);
    assert_eq!(v.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&v.stderr).contains(&key));
}

#[test]
fn enumerate_lists_lengths() {
    let d = tempfile::tempdir().unwrap();
    let o = stdout(&pkl(d.path(), &["enumerate", "--datum", "GL2", "--max-len", "1", "--omega-bound", "1"]));
    let lines: Vec<&str> = o.lines().collect();
    assert_eq!(lines.len(), 15);
    assert_eq!(lines[0], "0\te");
    assert_eq!(lines.iter().filter(|l| l.starts_with("0\t")).count(), 5);
}
