use std::process::{Command, Output};

fn qdouble(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdouble")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn s3_table_csv_is_exact() {
    let o = qdouble(&["multiplicities", "--transversal", "s3/standard", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "xi\\dg,e/0,e/1,e/2,u/0,u/1,uv/0,uv/1,uv/2\n\
         e/0,1,0,1,1,0,0,0,0\n\
         e/1,0,1,1,0,1,0,0,0\n\
         uv/0,0,0,0,1,1,1,1,1\n"
    );
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "quasibialgebra", "--transversal", "s3/t2"][..],
        &["verify", "twist", "--from", "s3/standard", "--to", "s3/t3"],
        &["verify", "antipode", "--transversal", "s3/t3", "--via-twist", "s3/standard"],
        &["verify", "star", "--transversal", "sn/cyclic/4"],
        &["verify", "matched-pair", "--group", "s4", "--subgroup", "(12),(123)"],
        &["verify-lattice", "--transversal", "s3/t4"],
        &["condense", "--transversal", "s3/t2"],
    ] {
        let o = qdouble(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| qdouble(args).status.code();
    assert_eq!(code(&["verify", "antipode", "--transversal", "s3/t3"]), Some(2));
    assert_eq!(code(&["verify", "star", "--transversal", "s3/t4"]), Some(2));
    assert_eq!(code(&["surgery", "run", "--group", "s4", "--op", "smooth-merge", "--size", "3x3"]), Some(3));
    assert_eq!(code(&["ribbon-demo", "--size", "3x3"]), Some(3));
    assert_eq!(code(&["multiplicities", "--transversal", "s3/t9"]), Some(4));
    assert_eq!(code(&["surgery", "table", "--op", "teleport"]), Some(4));
    assert_eq!(code(&["verify", "twist", "--from", "s3/standard"]), Some(4));
}

#[test]
fn smooth_split_table_is_coproduct() {
    let o = qdouble(&["surgery", "table", "--group", "z2", "--op", "smooth-split", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "out\\in,0,1\n0⊗0,1,0\n0⊗1,0,0\n1⊗0,0,0\n1⊗1,0,1\n");
}

#[test]
fn rough_merge_table_has_36_columns() {
    let o = qdouble(&["surgery", "table", "--group", "s3", "--op", "rough-merge", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["cols"].as_array().unwrap().len(), 36);
    let re = v["result"]["re"].as_array().unwrap();
    let ones: usize = re.iter().map(|row| row.as_array().unwrap().iter().filter(|x| x.as_f64() == Some(1.0)).count()).sum();
    assert_eq!(ones, 36);
}

#[test]
fn runs_are_reproducible_and_replayable() {
    let args = ["surgery", "run", "--group", "s3", "--op", "rough-split", "--input", "h=u", "--seed", "42", "--format", "json"];
    let (a, b) = (qdouble(&args), qdouble(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let dir = std::env::temp_dir().join(format!("qdouble-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let rec = dir.join("record.json");
    std::fs::write(&rec, &a.stdout).unwrap();
    let r = qdouble(&["surgery", "replay", rec.to_str().unwrap(), "--format", "json"]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(r.stdout, a.stdout);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn ribbon_demo_excites_endpoints_only() {
    let o = qdouble(&["ribbon-demo", "--group", "s3", "--label", "uv/2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["localized_at_endpoints"], true);
    assert!(!v["result"]["excitations"].as_array().unwrap().is_empty());
}
