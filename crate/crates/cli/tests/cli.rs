use std::path::PathBuf;
use std::process::Command;

use syncdelay_cli::run;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn call(args: &[&str]) -> syncdelay_cli::Outcome {
    let mut v = vec!["syncdelay".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    run(&v)
}

fn keys_text(s: &str) -> Vec<String> {
    s.lines().filter_map(|l| l.split_once(": ").map(|(k, _)| k.to_string())).collect()
}

#[test]
fn parity_is_abelian() {
    let o = call(&["analyze", "--dfa", &data("parity.dfa"), "--variety", "abelian"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("subgroup_orders: [2]"));
    assert!(o.stdout.contains("hbar_abelian: yes"));
}

#[test]
fn parity_is_not_trivial() {
    let o = call(&["analyze", "--dfa", &data("parity.dfa"), "--variety", "trivial"]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("hbar_trivial: no"));
}

#[test]
fn abab_has_no_bounded_delay() {
    let o = call(&["check-code", "--dfa", &data("abab.dfa"), "--dmax", "5"]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("prefix_code: yes"));
    assert!(o.stdout.contains("delay: none<=5"));
    assert!(o.stdout.contains("counterexample: "));
}

#[test]
fn demo_runs_end_to_end() {
    let o = call(&["demo-example14"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    for line in ["monoid_size: 15", "s3_subgroups: 1", "hbar_solvable: yes", "hbar_abelian: no", "synthesis_equivalent: yes", "synthesis_valid: yes"] {
        assert!(o.stdout.contains(line), "missing {line}");
    }
}

#[test]
fn json_keys_match_text_keys() {
    let cases: Vec<Vec<String>> = vec![
        vec!["analyze".into(), "--dfa".into(), data("parity.dfa")],
        vec!["check-code".into(), "--dfa".into(), data("ab_star.dfa")],
        vec!["decompose".into(), "--monoid".into(), data("flipflop.mon")],
    ];
    for c in cases {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        let text = call(&args);
        let mut with_json = vec!["--json"];
        with_json.extend(&args);
        let json = call(&with_json);
        assert_eq!(text.code, json.code);
        let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
        let jk: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(jk, keys_text(&text.stdout));
    }
}

#[test]
fn parse_error_exits_two() {
    let dir = std::env::temp_dir().join(format!("syncdelay-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.dfa");
    std::fs::write(&bad, "dfa\nalphabet a\nstates x\n").unwrap();
    let o = call(&["analyze", "--dfa", bad.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.starts_with("error:"));
    let o = call(&["analyze", "--dfa", dir.join("missing.dfa").to_str().unwrap()]);
    assert_eq!(o.code, 2);
    let o = call(&["no-such-command"]);
    assert_eq!(o.code, 2);
}

#[test]
fn verify_and_validate_sample_expressions() {
    let o = call(&["verify-expr", "--expr", &data("parity.sexp"), "--dfa", &data("parity.dfa")]);
    assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.contains("equivalent: yes"));
    let o = call(&["validate-expr", "--expr", &data("abab_star.sexp"), "--variety", "trivial"]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("valid: no"));
}

#[test]
fn seed_variable_overrides_flag() {
    let bin = env!("CARGO_BIN_EXE_syncdelay");
    let args = ["--seed", "3", "product", "--left", &data("ab_star.dfa"), "--right", &data("parity.dfa")];
    let a = Command::new(bin).args(args).env("SYNCDELAY_SEED", "11").output().unwrap();
    let b = Command::new(bin).args(&args[2..]).env("SYNCDELAY_SEED", "11").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(bin).args(args).env("SYNCDELAY_SEED", "not-a-number").output().unwrap();
    assert_eq!(c.status.code(), Some(2));
}
