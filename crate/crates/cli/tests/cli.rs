use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topvertex"))
        .args(args)
        .output()
        .expect("spawn topvertex")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn tmp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("topvertex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn vertex_one_box() {
    let o = run(&["vertex", "--mu", "[[1],[],[]]", "--check", "theorem1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["command"], "vertex");
    assert_eq!(v["status"], "pass");
    // C_{(1),0,0} = q^{1/2} / (1 - q), exponents in units of q^{1/2}
    let c = &v["result"]["C"];
    assert_eq!(c["lattice_denom"], 1);
    assert_eq!(c["min_exp"], 1);
    let coeffs = c["coeffs"].as_array().unwrap();
    assert_eq!(coeffs[0], "1/1");
    assert_eq!(coeffs[1], "0/1");
    assert_eq!(coeffs[2], "1/1");
}

#[test]
fn vertex_via_fock_matches() {
    let o = run(&["--tau", "1/2", "vertex", "--mu", "[[2],[1],[]]", "--check", "theorem1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["result"]["C_via_fock"].is_array() || v["result"]["C_via_fock"].is_object());
}

#[test]
fn verify_exit_codes() {
    assert_eq!(run(&["verify", "theorem1", "--weight", "2"]).status.code(), Some(0));
    assert_eq!(run(&["--mutate", "drop-sign", "verify", "theorem1", "--weight", "2"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(3));
    assert_eq!(run(&["vertex", "--mu", "[[1],[2]"]).status.code(), Some(3));
    assert_eq!(run(&["--mutate", "nonsense", "verify", "cyclic"]).status.code(), Some(3));
}

#[test]
fn off_lattice_tau_is_a_usage_error() {
    let o = run(&["--tau", "1/3", "--lattice-denom", "1", "series", "expG", "--weight", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lattice-denom"));
}

#[test]
fn output_is_deterministic() {
    let args = ["--tau", "1", "series", "W", "--weight", "2"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let args = ["--jobs", "1", "verify", "cyclic", "--weight", "3"];
    let c = run(&args);
    let d = run(&["--jobs", "4", "verify", "cyclic", "--weight", "3"]);
    assert_eq!(json(&c)["result"], json(&d)["result"]);
}

#[test]
fn flags_override_config_file() {
    let cfg = tmp("run.toml");
    std::fs::write(&cfg, "window = 24\nmin_width = 12\nformat = \"json\"\n").unwrap();
    let p = cfg.to_str().unwrap();
    let v = json(&run(&["--config", p, "verify", "cyclic", "--weight", "2"]));
    assert_eq!(v["config"]["window"], 24);
    assert_eq!(v["config"]["min_width"], 12);
    let v = json(&run(&["--config", p, "--window", "32", "verify", "cyclic", "--weight", "2"]));
    assert_eq!(v["config"]["window"], 32);
    assert_eq!(v["config"]["min_width"], 12);

    std::fs::write(&cfg, "windw = 24\n").unwrap();
    assert_eq!(run(&["--config", p, "verify", "cyclic"]).status.code(), Some(3));
    std::fs::write(&cfg, "window = 10\nmin_width = 20\n").unwrap();
    assert_eq!(run(&["--config", p, "verify", "cyclic"]).status.code(), Some(3));
}

#[test]
fn csv_and_out_file() {
    let out = tmp("cyclic.csv");
    let o = run(&["--format", "csv", "--out", out.to_str().unwrap(), "verify", "cyclic", "--weight", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("identity,status,checked,failing"));
    assert!(lines.any(|l| l.starts_with("cyclic,pass,")));
}

#[test]
fn oracle_scope_selection() {
    let v = json(&run(&["oracles", "--scope", "characters,lr"]));
    assert_eq!(v["status"], "pass");
    let o = run(&["oracles", "--scope", "z"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn tau_series_with_formal_p2() {
    let o = run(&["--N", "1", "--degree", "3", "series", "tau", "--p2-weight", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["result"]["kind"], "tau");
}
