use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn jseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jseq"))
        .args(args)
        .env_remove("JSEQ_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn strip_timestamp(json: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn compute_prints_known_coefficients() {
    let o = jseq(&["compute", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "21493760");
    let o = jseq(&["compute", "--n", "0"]);
    assert_eq!(stdout(&o).trim(), "744");
    let o = jseq(&["compute", "--n", "-1"]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn compute_reuses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("j.cache");
    let c = cache.to_str().unwrap();
    let first = jseq(&["--cache", c, "compute", "--n-max", "300"]);
    assert_eq!(first.status.code(), Some(0));
    assert!(stderr(&first).contains("computed"));
    let second = jseq(&["--cache", c, "compute", "--n-max", "300"]);
    assert!(stderr(&second).contains("from cache"), "{}", stderr(&second));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(stdout(&first).lines().count(), 301);

    let env = Command::new(env!("CARGO_BIN_EXE_jseq"))
        .args(["compute", "--n", "250"])
        .env("JSEQ_CACHE", c)
        .output()
        .unwrap();
    assert!(stderr(&env).contains("from cache"));
    assert_eq!(stdout(&env).trim(), stdout(&first).lines().nth(250).unwrap().split('\t').nth(1).unwrap());
}

#[test]
fn corrupted_cache_is_replaced() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("j.cache");
    let c = cache.to_str().unwrap();
    jseq(&["--cache", c, "compute", "--n-max", "20"]);
    let text = fs::read_to_string(&cache).unwrap().replace("21493760", "21493761");
    fs::write(&cache, text).unwrap();
    let o = jseq(&["--cache", c, "compute", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("cache rejected"));
    assert_eq!(stdout(&o).trim(), "21493760");
    let again = jseq(&["--cache", c, "compute", "--n", "2"]);
    assert!(stderr(&again).contains("from cache"));
}

#[test]
fn usage_errors_exit_two() {
    let o = jseq(&["verify", "--check", "sandwich-ab", "--n-max", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("valid_from 6") || stderr(&o).contains("n >= 6"), "{}", stderr(&o));
    assert_eq!(jseq(&["verify", "--check", "no-such-check"]).status.code(), Some(2));
    assert_eq!(jseq(&["verify", "--precision-start", "512", "--precision-max", "256"]).status.code(), Some(2));
    assert_eq!(jseq(&["verify", "--n-max", "0"]).status.code(), Some(2));
    assert_eq!(jseq(&["verify", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(jseq(&["compute"]).status.code(), Some(2));
}

#[test]
fn theorem_run_passes() {
    let o = jseq(&["verify", "--check", "theorem-4.2", "--n-max", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "jseq-report/1");
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(v["summary"]["unresolved"], 0);
    let entries = v["checks"][0]["entries"].as_array().unwrap();
    let ns: Vec<i64> = entries.iter().map(|e| e["n"].as_i64().unwrap()).collect();
    assert_eq!(ns, (2..=100).collect::<Vec<_>>());
}

#[test]
fn failing_check_exits_one() {
    let o = jseq(&["verify", "--check", "brackets", "--n-max", "10", "--format", "text"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("turan-qp"));
}

#[test]
fn all_checks_emit_well_formed_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = jseq(&["verify", "--check", "all", "--n-max", "200", "--format", "json", "--output", out.to_str().unwrap()]);
    assert!(matches!(o.status.code(), Some(0) | Some(1)));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(fs::read_to_string(&out).unwrap(), stdout(&o));
    for key in ["schema", "tool_version", "command", "parameters", "checks", "summary", "timestamp"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let mut total = 0;
    for c in v["checks"].as_array().unwrap() {
        let entries = c["entries"].as_array().unwrap();
        let mut keys = std::collections::BTreeSet::new();
        for e in entries {
            let key = format!("{}|{}|{}", e["n"], e["range"], e["item"]);
            assert!(keys.insert(key), "duplicate entry in {}", c["check"]);
            assert!(["pass", "fail", "unresolved"].contains(&e["outcome"].as_str().unwrap()));
        }
        assert_eq!(c["summary"]["entries"].as_u64().unwrap() as usize, entries.len());
        total += entries.len();
    }
    assert_eq!(v["summary"]["entries"].as_u64().unwrap() as usize, total);
}

fn run_to(path: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["verify", "--check", "theorem-4.4,ratio-fg,criterion-laguerre-2", "--n-max", "60"];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["--output", path.to_str().unwrap()]);
    jseq(&args)
}

#[test]
fn reports_are_deterministic_and_diffable() {
    let dir = tempfile::tempdir().unwrap();
    let p = |s: &str| dir.path().join(s);
    run_to(&p("a.json"), &[]);
    run_to(&p("b.json"), &[]);
    let (a, b) = (fs::read_to_string(p("a.json")).unwrap(), fs::read_to_string(p("b.json")).unwrap());
    assert_eq!(strip_timestamp(&a), strip_timestamp(&b));

    let same = jseq(&["report-diff", p("a.json").to_str().unwrap(), p("b.json").to_str().unwrap()]);
    assert_eq!(same.status.code(), Some(0));
    assert!(stdout(&same).is_empty());

    run_to(&p("serial.json"), &["--jobs", "1"]);
    let d = jseq(&["report-diff", p("a.json").to_str().unwrap(), p("serial.json").to_str().unwrap()]);
    assert_eq!(d.status.code(), Some(0));

    run_to(&p("p64.json"), &["--precision-start", "64"]);
    run_to(&p("p256.json"), &["--precision-start", "256"]);
    let d = jseq(&["report-diff", p("p64.json").to_str().unwrap(), p("p256.json").to_str().unwrap()]);
    assert_eq!(d.status.code(), Some(0));
    let text = stdout(&d);
    assert!(!text.is_empty() && text.lines().all(|l| l.starts_with("precision ")), "{text}");

    let tampered = a.replacen("\"outcome\": \"pass\"", "\"outcome\": \"fail\"", 1);
    fs::write(p("t.json"), tampered).unwrap();
    let d = jseq(&["report-diff", p("a.json").to_str().unwrap(), p("t.json").to_str().unwrap()]);
    assert_eq!(d.status.code(), Some(1));
    assert!(stdout(&d).contains("outcome theorem-4.4 n=1: pass -> fail"), "{}", stdout(&d));

    fs::write(p("bad.json"), a.replace("jseq-report/1", "jseq-report/9")).unwrap();
    let d = jseq(&["report-diff", p("a.json").to_str().unwrap(), p("bad.json").to_str().unwrap()]);
    assert_eq!(d.status.code(), Some(2));
}
