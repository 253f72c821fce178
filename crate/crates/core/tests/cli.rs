use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_transport-moments"));
    c.env_remove("TRANSPORT_MOMENTS_CACHE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bases_count_and_list() {
    let o = run(&["bases", "--genus2", "2", "--symmetry", "orthogonal", "--count"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "m=2: 5, m=3: 7\n");
    let o = run(&["bases", "--genus2", "2", "--symmetry", "unitary", "--list"]);
    let mut lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    lines.sort();
    assert_eq!(lines, vec!["1:3,2:4", "1:4,2:5,3:6"]);
    let o = run(&["bases", "--genus2", "3", "--symmetry", "unitary", "--count"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "");
    let o = run(&["--format", "json", "bases", "--genus2", "3", "--symmetry", "orthogonal", "--count"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["counts"]["6"], 128);
}

#[test]
fn cache_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "bases", "--genus2", "3", "--symmetry", "orthogonal", "--list"];
    let a = run(&args);
    let b = run(&args);
    let c = run(&args[2..]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 4);
    // env var is honoured and the flag overrides it
    let env_dir = tempfile::tempdir().unwrap();
    let o = bin().env("TRANSPORT_MOMENTS_CACHE", env_dir.path()).args(&args[2..]).output().unwrap();
    assert_eq!(o.stdout, a.stdout);
    assert!(std::fs::read_dir(env_dir.path()).unwrap().count() >= 4);
    let other = tempfile::tempdir().unwrap();
    bin().env("TRANSPORT_MOMENTS_CACHE", other.path()).args(&args).output().unwrap();
    assert_eq!(std::fs::read_dir(other.path()).unwrap().count(), 0);
}

#[test]
fn moments_json() {
    let o = run(&["moments", "--quantity", "reflection", "--symmetry", "orthogonal", "--genus2", "1", "-K", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["basis"], "xi");
    // R₁ = ξs/(1−4ξs): coefficient of s^n is 4^{n−1} ξ^n
    for n in 1..=10usize {
        let row = &v["coefficients"][n];
        assert_eq!(row[0], n);
        assert_eq!(row[1][n], format!("{}/1", 4u64.pow(n as u32 - 1)));
    }
    assert_eq!(v["conjecture"]["status"], "polynomial");

    let o = run(&["moments", "--quantity", "transmission", "--symmetry", "unitary", "--genus2", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["coefficients"].as_array().unwrap().iter().all(|r| r[1].as_array().unwrap().is_empty()));
    assert_eq!(v["conjecture"]["status"], "zero");
}

#[test]
fn moments_csv_and_threads_are_deterministic() {
    let base = ["moments", "--quantity", "transmission", "--symmetry", "orthogonal", "--genus2", "3", "-K", "6"];
    let a = run(&[&["--threads", "1"], &base[..]].concat());
    let b = run(&[&["--threads", "3"], &base[..]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let o = run(&[&["--format", "csv"], &base[..]].concat());
    let text = stdout(&o);
    assert!(text.starts_with("power,basis,index,value\n"));
    // T₃ᴼ starts with −ξs
    assert!(text.lines().any(|l| l == "1,xi,1,-1/1"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["bases", "--genus2", "5", "--symmetry", "unitary", "--count"]).status.code(), Some(1));
    assert_eq!(run(&["bases", "--genus2", "2", "--symmetry", "unitary"]).status.code(), Some(1));
    assert_eq!(run(&["moments", "--quantity", "transmission", "--symmetry", "unitary", "--genus2", "2", "-K", "1"]).status.code(), Some(1));
    assert_eq!(run(&["--format", "csv", "verify", "--genus2", "1"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bases-g2-orthogonal-m2.txt");
    std::fs::write(&file, "# bases version=1 m=2 symmetry=orthogonal genus2=2\n1:2,3:4\n").unwrap();
    let o = run(&["--cache-dir", dir.path().to_str().unwrap(), "bases", "--genus2", "2", "--symmetry", "orthogonal", "--count"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_genus_one() {
    let o = run(&["verify", "--genus2", "2", "-K", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.starts_with("PASS [")));
    let o = run(&["--format", "json", "verify", "--genus2", "2", "-K", "4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}
