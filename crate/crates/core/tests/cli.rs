use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lattice-llt"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_suites_names_every_suite() {
    let o = run(&["list-suites"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for s in ["aud", "llt-rate", "theta-rate", "bernoulli-part", "divisor-regions", "rozanov", "mukhin", "rate-fit"] {
        assert!(text.lines().any(|l| l.starts_with(s)), "{s} missing from\n{text}");
    }
}

#[test]
fn passing_run_exits_zero_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "coin.toml", "suite = \"llt-rate\"\nmodel = [\"bernoulli 1/2\"]\nn = [64, 256]\n");
    let out = dir.path().join("coin-out.csv");
    let o = run(&["run", cfg.to_str().unwrap(), "--mode", "float", "--workers", "2", "--seed", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("suite,check,model,n,h,d,u,eps,alpha,alpha_prime,rho,hypothesis_ok,measured,bound,margin,pass\n"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(json["exit_status"], 0);
    assert_eq!(json["config"]["mode"], "float");
    assert_eq!(json["config"]["seed"], 7);

    let s = run(&["summary", out.to_str().unwrap()]);
    assert_eq!(s.status.code(), Some(0));
    assert!(stdout(&s).contains("fitted slopes"), "{}", stdout(&s));
}

#[test]
fn failing_bound_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // An envelope far below the true local-limit error.
    let cfg = write_config(
        dir.path(),
        "tight.toml",
        "suite = \"llt-rate\"\nmodel = [\"bernoulli 1/2\"]\nn = [64, 256]\nmode = \"float\"\n[constants]\nenvelope = 1e-6\n",
    );
    let out = dir.path().join("tight.csv");
    let o = run(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(std::fs::read_to_string(&out).unwrap().contains(",false\n"));
    let s = run(&["summary", out.to_str().unwrap()]);
    assert_eq!(s.status.code(), Some(0));
    assert!(stdout(&s).contains("failing rows"));
}

#[test]
fn config_errors_exit_three_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("negative.toml", "suite = \"aud\"\nmodel = [\"bernoulli 1/2\"]\nn = [-4]\n"),
        ("unknown.toml", "suite = \"nope\"\nmodel = [\"bernoulli 1/2\"]\nn = [4]\n"),
        ("badpmf.toml", "suite = \"aud\"\nmodel = [\"bernoulli 3/2\"]\nn = [4]\n"),
        ("extra.toml", "suite = \"aud\"\nmodel = [\"bernoulli 1/2\"]\nn = [4]\ncolour = 1\n"),
        ("unpaired.toml", "suite = \"divisor-regions\"\nmodel = [\"bernoulli 1/2\"]\nn = [64]\nalpha = [2.0]\n"),
    ];
    for (name, body) in cases {
        let cfg = write_config(dir.path(), name, body);
        let out = dir.path().join(format!("{name}.csv"));
        let o = run(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(3), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!out.exists(), "{name} wrote output");
    }
    let missing = dir.path().join("absent.toml");
    assert_eq!(run(&["run", missing.to_str().unwrap()]).status.code(), Some(3));
    let ok = write_config(dir.path(), "ok.toml", "suite = \"mukhin\"\nmodel = [\"bernoulli 1/2\"]\n");
    assert_eq!(run(&["run", ok.to_str().unwrap(), "--workers", "0"]).status.code(), Some(3));
}

#[test]
fn summary_of_missing_file_exits_three() {
    let o = run(&["summary", "/nonexistent/report.csv"]);
    assert_eq!(o.status.code(), Some(3));
}
