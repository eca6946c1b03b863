use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regret")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("regret-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn value_prints_strategy_lines() {
    let o = run(&["value", "--variant", "any", "--payoff", "mp-inf", &fixture("g0.arena")]);
    assert!(o.status.success());
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("value 1"));
    let rest: Vec<&str> = lines.collect();
    assert!(rest.iter().any(|l| l.starts_with("strategy eve v1 0 -> v2 ")), "{s}");
    for l in rest {
        let t: Vec<&str> = l.split_whitespace().collect();
        assert_eq!((t.len(), t[0], t[1], t[4]), (7, "strategy", "eve", "->"), "{l}");
    }
}

#[test]
fn threshold_examples() {
    let a0 = fixture("a0.aut");
    let g0 = fixture("g0.arena");
    let first = |args: &[&str]| stdout(&run(args)).lines().next().unwrap_or("").to_string();
    assert_eq!(first(&["threshold", "--variant", "word", "--payoff", "liminf", "--bound", "3/2", "--strict", &a0]), "result YES");
    assert_eq!(first(&["threshold", "--variant", "any", "--payoff", "mp-inf", "--bound", "1", "--strict", &g0]), "result NO");
    assert_eq!(first(&["threshold", "--variant", "any", "--payoff", "mp-inf", "--bound", "1", &g0]), "result YES");
    let no = stdout(&run(&["threshold", "--variant", "word", "--payoff", "liminf", "--bound", "1/2", "--strict", &a0]));
    assert!(no.starts_with("result NO\nspoiler "), "{no}");
    assert!(no.contains("\nbest ") && no.contains("\nachieved "));
}

#[test]
fn value_and_threshold_agree() {
    let g0 = fixture("g0.arena");
    for variant in ["any", "memoryless"] {
        for payoff in ["inf", "sup", "liminf", "limsup", "mp-inf", "mp-sup"] {
            let v = stdout(&run(&["value", "--variant", variant, "--payoff", payoff, &g0]));
            let v = v.lines().next().unwrap().strip_prefix("value ").unwrap().to_string();
            for (bound, strict, want) in [(v.as_str(), false, "YES"), (v.as_str(), true, "NO")] {
                let mut args = vec!["threshold", "--variant", variant, "--payoff", payoff, "--bound", bound, &g0];
                if strict {
                    args.push("--strict");
                }
                let out = stdout(&run(&args));
                assert_eq!(out.lines().next(), Some(format!("result {want}").as_str()), "{variant} {payoff} {bound} {strict}");
            }
        }
    }
}

#[test]
fn classic_prints_both_strategies() {
    let s = stdout(&run(&["classic", "--what", "aval", "--payoff", "mp-inf", &fixture("g0.arena")]));
    assert!(s.starts_with("value 1/2\n"));
    assert!(s.contains("strategy eve ") && s.contains("strategy adam "));
}

#[test]
fn lemma4_roundtrip_through_files() {
    let out = tmp("g1prime.arena");
    let o = run(&["gen", "lemma4", "--payoff", "mp-inf", &fixture("g1.arena"), "-o", &out]);
    assert!(o.status.success());
    // W = 6 and aVal(G1) = 1
    let s = stdout(&run(&["value", "--variant", "any", "--payoff", "mp-inf", &out]));
    assert_eq!(s.lines().next(), Some("value 6"));
}

#[test]
fn sat_pipeline() {
    let cnf = tmp("f.cnf");
    std::fs::write(&cnf, "p cnf 2 2\n1 2 0\n-1 0\n").unwrap();
    assert_eq!(stdout(&run(&["oracle", "sat", &cnf])), "result SAT\n");
    let aut = tmp("f.aut");
    assert!(run(&["gen", "sat", "--payoff", "liminf", &cnf, "-o", &aut]).status.success());
    let s = stdout(&run(&["value", "--variant", "word", "--payoff", "liminf", "--memory", "1", &aut]));
    assert_eq!(s.lines().next(), Some("value 1/2"));
}

#[test]
fn gen_random_is_deterministic() {
    for kind in ["arena", "automaton", "cnf"] {
        let a = run(&["gen", "random", "--kind", kind, "--size", "3", "--seed", "9"]);
        let b = run(&["gen", "random", "--kind", kind, "--size", "3", "--seed", "9"]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn oracles_match_solvers_on_g0() {
    let g0 = fixture("g0.arena");
    assert_eq!(stdout(&run(&["oracle", "regret-any", "--payoff", "mp-inf", &g0])), "value 1\n");
    assert_eq!(stdout(&run(&["oracle", "cycle-forming", "--payoff", "mp-inf", &g0])), "value 1/2\n");
    let b = stdout(&run(&["oracle", "regret-word", "--payoff", "limsup", "--max-len", "5", &fixture("a0.aut")]));
    assert_eq!(b, "upper 0\nlower 0\n");
}

#[test]
fn exit_codes() {
    let bad = tmp("bad.arena");
    std::fs::write(&bad, "arena\nvertex a eve\nedge a b 1\n").unwrap();
    assert_eq!(run(&["value", "--variant", "any", "--payoff", "mp-inf", &bad]).status.code(), Some(2));
    assert_eq!(run(&["value", "--variant", "any", "--payoff", "nope", &bad]).status.code(), Some(2));
    assert_eq!(run(&["value", "--variant", "any", "--payoff", "mp-inf", "/nonexistent"]).status.code(), Some(2));
    let o = run(&["value", "--variant", "word", "--payoff", "mp-sup", &fixture("a0.aut")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("UNDECIDABLE_REQUEST"));
    let o = run(&["value", "--variant", "word", "--payoff", "mp-inf", "--memory", "2", "--budget", "10", &fixture("a0.aut")]);
    assert_eq!(o.status.code(), Some(4));
}
