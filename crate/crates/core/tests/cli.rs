use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equivarium")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn build_examples() {
    let out = run(&["build", "c-cat", "--group", "C2", "--presheaf", "family:e"]);
    assert_eq!(out.status.code(), Some(0));
    let c = json(&out);
    assert_eq!(c["category"]["objects"].as_array().unwrap().len(), 2);

    let out = run(&["build", "milnor", "--group", "C2", "--presheaf", "family:e", "--depth", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let m = json(&out);
    assert_eq!(m["elements"].as_array().unwrap().len(), 2);

    let out = run(&["build", "orbit-cat", "--group", "S3"]);
    assert_eq!(json(&out)["category"]["objects"].as_array().unwrap().len(), 6);
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["build", "c-cat", "--group", "Q9"][..],
        &["build", "c-cat", "--group", "C2", "--presheaf", "family:7"],
        &["build", "c-cat"],
        &["verify", "thomason", "--group", "C2", "--presheaf", "bogus"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(json(&out)["error"]["kind"], "invalid-input");
    }
}

#[test]
fn size_guard_exits_3() {
    let out = run(&["build", "milnor", "--group", "S3", "--presheaf", "family:all", "--depth", "5000"]);
    assert_eq!(out.status.code(), Some(3));
    let e = json(&out);
    assert_eq!(e["error"]["kind"], "size-guard");
    assert_eq!(e["error"]["exit_code"], 3);
}

#[test]
fn verify_single_group_and_determinism() {
    let args = ["verify", "pos-theorem", "--group", "C3", "--presheaf", "family:all"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["passed"], true);
    assert!(r.get("timing_ms").is_none());
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["verdict"] == "pass"));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("equivarium-cli-{}.json", std::process::id()));
    let out = run(&["build", "quotient", "--group", "C2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["quotient"]["elements"].as_array().unwrap().len(), 1);
    std::fs::remove_file(path).unwrap();
}
