use std::path::Path;
use std::process::{Command, Output};

fn lagmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagmult")).args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (Output, String) {
    let out = dir.join(name);
    let mut all = args.to_vec();
    let s = out.to_str().unwrap().to_string();
    all.extend(["--out", &s]);
    let o = lagmult(&all);
    let csv = std::fs::read_to_string(&out).unwrap_or_default();
    (o, csv)
}

#[test]
fn verify_passes_with_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (o, csv) = run_to(dir.path(), "v.csv", &["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(csv.starts_with("# schema: lagmult-csv/1 verify\n"));
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("v.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
    assert!(summary["checks"].as_array().unwrap().iter().any(|c| c["name"] == "parseval"));
}

#[test]
fn sabotage_flags_parseval() {
    let o = lagmult(&["verify", "--sabotage", "parseval"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("FAIL parseval"), "{err}");
    assert_eq!(err.matches("FAIL").count(), 1);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("parseval,") && l.ends_with(",false")));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let bank = format!("file:{}", empty.display());
    for args in [
        vec!["hardy", "--bank", bank.as_str()],
        vec!["hardy", "--no-such-flag"],
        vec!["hardy", "--N", "ten"],
        vec!["hardy", "--p", "0.5"],
        vec!["hardy", "--workers", "0"],
        vec!["hardy", "--config", "/nonexistent/lagmult.conf"],
    ] {
        let o = lagmult(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn hypotheses_are_rejected_by_name() {
    let cases: [(&[&str], &str); 4] = [
        (&["wbv-eq", "--alpha", "0"], "alpha != 0"),
        (&["mpinf-embed", "--alpha", "2", "--beta", "2"], "0 <= beta < alpha"),
        (&["mpinf-embed", "--beta", "-0.5"], "0 <= beta < alpha"),
        (&["charex", "--alpha", "1"], "excludes alpha in {0, 1}"),
    ];
    for (args, needle) in cases {
        let o = lagmult(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(needle), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn hardy_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (o1, a) = run_to(dir.path(), "a.csv", &["hardy", "--seed", "7"]);
    let (o2, b) = run_to(dir.path(), "b.csv", &["hardy", "--seed", "7", "--workers", "2"]);
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(o2.status.code(), Some(0));
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let (_, c) = run_to(dir.path(), "c.csv", &["hardy", "--seed", "8"]);
    assert_ne!(a, c);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# small run\nalpha = 0.5\nbank = constant:1,char:4\nN = 16\n").unwrap();
    let c = conf.to_str().unwrap();
    let (o, csv) = run_to(dir.path(), "w.csv", &["wbv-eq", "--config", c, "--alpha", "2.7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(csv.contains("# config: alpha = 2.7\n"));
    assert!(csv.contains("# config: N = 16\n"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 3);

    std::fs::write(&conf, "experiment = hardy\n").unwrap();
    assert_eq!(lagmult(&["wbv-eq", "--config", c]).status.code(), Some(2));
    std::fs::write(&conf, "colour = blue\n").unwrap();
    assert_eq!(lagmult(&["wbv-eq", "--config", c]).status.code(), Some(2));
}

#[test]
fn negative_alpha_and_infinite_exponent() {
    let o = lagmult(&["wbv-eq", "--alpha", "-0.5", "--bank", "constant:1,abel:0.9", "--N", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("# config: alpha = -0.5"));
    let o = lagmult(&["mpinf-embed", "--p", "inf", "--bank", "abel:0.9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("# config: p = inf"));
}

#[test]
fn sequence_file_bank() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("m.txt");
    std::fs::write(&f, "1.0\n0.5\n0.25\n").unwrap();
    let bank = format!("file:{}", f.display());
    let o = lagmult(&["charex", "--bank", &bank, "--N", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
