use std::path::Path;
use std::process::{Command, Output};

fn frobcensus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobcensus"))
        .args(args)
        .env_remove("FROBCENSUS_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap()
}

#[test]
fn census_files_are_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (out, threads) in [(&a, "1"), (&b, "3")] {
        let o = frobcensus(&["census", "--x", "1500", "--threads", threads, "--out", out.to_str().unwrap()]);
        let v = json(&o);
        assert_eq!(v["schema"], 1);
    }
    for f in ["census.jsonl", "census.csv", "summary.json"] {
        assert_eq!(read(&a, f), read(&b, f), "{f}");
    }
}

#[test]
fn tiny_census_runs() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&frobcensus(&["census", "--curve", "1,0,0,2,-3,1", "--x", "10", "--out", dir.path().to_str().unwrap()]));
    assert_eq!(v["primes"], 4);
    assert_eq!(v["max_pi_K"], 0);
    let lines = String::from_utf8(read(dir.path(), "census.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 4);
}

#[test]
fn env_and_config_thread_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "threads = 0\nx = 50\n").unwrap();
    let out = dir.path().join("o");
    // config alone: zero threads is rejected
    let o = frobcensus(&["--config", cfg.to_str().unwrap(), "census", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    // the environment overrides the config
    let o = Command::new(env!("CARGO_BIN_EXE_frobcensus"))
        .args(["--config", cfg.to_str().unwrap(), "census", "--out", out.to_str().unwrap()])
        .env("FROBCENSUS_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(json(&o)["X"], 50);
    // and the flag overrides the environment
    let o = Command::new(env!("CARGO_BIN_EXE_frobcensus"))
        .args(["--threads", "1", "--config", cfg.to_str().unwrap(), "census", "--out", out.to_str().unwrap()])
        .env("FROBCENSUS_THREADS", "0")
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn gsp_genus_two_over_three() {
    let v = json(&frobcensus(&["gsp", "--g", "2", "--l", "3"]));
    assert_eq!(v["order_sp"], 51840);
    assert_eq!(v["order_gsp"], 103680);
    assert_eq!(v["bound_violations"], 0);
    assert_eq!(v["schema"], 1);
}

#[test]
fn exponents_table() {
    let v = json(&frobcensus(&["exponents", "--g", "2"]));
    let rows = v["rows"].as_array().unwrap();
    let grh = rows.iter().find(|r| r["regime"] == "GRH").unwrap();
    assert_eq!(grh["theta"], "1/46");
    let pcc = rows.iter().find(|r| r["regime"] == "GRH_AHC_PCC").unwrap();
    assert_eq!((pcc["theta"].as_str(), pcc["paper_value"].as_str()), (Some("1/22"), Some("1/23")));
    let one = json(&frobcensus(&["exponents", "--g", "3", "--regime", "GRH", "--log-x", "1e6"]));
    assert_eq!(one["rows"][0]["theta"], "1/90");
    assert_eq!(one["unconditional_at"]["gate"], true);
}

#[test]
fn sieve_fuzz_and_census_sequence() {
    let v = json(&frobcensus(&["sieve", "--fuzz", "300", "--seed", "5"]));
    assert_eq!(v["holds"], true);
    let again = json(&frobcensus(&["sieve", "--fuzz", "300", "--seed", "5"]));
    assert_eq!(v, again);
    let s = json(&frobcensus(&["sieve", "--x", "3000"]));
    assert_eq!(s["holds"], true);
    assert_eq!(s["s_exact_ge_pi_F"], true);
}

#[test]
fn charsum_modes() {
    let v = json(&frobcensus(&["charsum", "--l", "11"]));
    assert_eq!(v["holds"], true);
    let one = json(&frobcensus(&["charsum", "--l", "5", "--a", "1", "--b", "0", "--c", "1"]));
    assert_eq!(one["sum_closed_form"], -1);
    assert_eq!(one["conic_points"], 6);
}

#[test]
fn selftest_passes() {
    let v = json(&frobcensus(&["selftest", "--seed", "1"]));
    assert_eq!(v["pass"], true);
}

#[test]
fn exit_codes() {
    // invalid input
    assert_eq!(frobcensus(&["census", "--curve", "1,2,3"]).status.code(), Some(2));
    assert_eq!(frobcensus(&["charsum", "--l", "9"]).status.code(), Some(2));
    assert_eq!(frobcensus(&["exponents", "--regime", "RH"]).status.code(), Some(2));
    assert_eq!(frobcensus(&["census", "--x", "1"]).status.code(), Some(2));
    // argument parsing
    assert_eq!(frobcensus(&["gsp", "--g", "x", "--l", "3"]).status.code(), Some(2));
    // capacity
    assert_eq!(frobcensus(&["gsp", "--g", "2", "--l", "7"]).status.code(), Some(3));
    assert_eq!(frobcensus(&["census", "--x", "200000"]).status.code(), Some(3));
}
