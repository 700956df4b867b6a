use std::process::{Command, Output};

fn lmcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmcalc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn reduce_prints_a_trace() {
    let o = lmcalc(&["reduce", r"(\x. (x z) \y. y)", "--rules", "beta"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some(r"0: (\x. (x z) \y. y)"));
    assert!(out.contains("1: beta@root -> (\\y. y z)"), "{out}");
    assert!(out.trim_end().ends_with("lg=2 lg_bm=2"), "{out}");
}

#[test]
fn reduce_in_lines_format() {
    let o = lmcalc(&["reduce", "(<x, y> p2)", "--rules", "full", "--format", "lines"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines, ["start\t(<x, y> p2)", "step\t1\tpair-proj\troot\ty", "length\t1\t0"]);
}

#[test]
fn sn_reports_loops_with_exit_code_one() {
    let o = lmcalc(&["sn", r"(\x. (x x) \x. (x x))", "--rules", "beta"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("LOOP after 1 steps"));
    let o = lmcalc(&["sn", r"(\x. x y)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "SN eta=1");
}

#[test]
fn out_of_fuel_is_inconclusive() {
    // every reduct of this term is larger than the last
    let o = lmcalc(&["sn", r"(\x. (x x x) \x. (x x x))", "--rules", "beta", "--fuel", "50"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn eta_prints_the_longest_reduction() {
    let o = lmcalc(&["eta", r"(\x. (x x) (\y. y z))", "--rules", "beta"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn typing_commands() {
    let o = lmcalc(&["check", r"\x:A. x", "A -> A", "--mode", "church"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("ok"));
    let o = lmcalc(&["check", r"\x:A. x", "A -> B", "--mode", "church"]);
    assert_eq!(o.status.code(), Some(1));
    let o = lmcalc(&["infer", r"\f:~A. \x:A. (f x)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "~A -> ~A");
    let o = lmcalc(&["check", "(M <y, M>)", "B", "--ctx", "y : A", "--eqs", r"X = A /\ (X -> B)"]);
    assert_eq!(o.status.code(), Some(1), "free M is not in the context");
}

#[test]
fn translations() {
    let o = lmcalc(&["translate", "--map", "diamond", r"mu a:~X. [a] x", "--ctx", "x : X", "--mode", "church"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().next(), Some(r"(c[X] \x_a:~X. (x_a x))"));
    let o = lmcalc(&["translate", "--map", "circle", "(<x, y> p1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[phi]"));
}

#[test]
fn equations() {
    let o = lmcalc(&["good", "--eqs", r"X = A /\ (B -> X)"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "good"));
    let o = lmcalc(&["good", "--eqs", r"X = A \/ (X -> B)"]);
    assert_eq!(o.status.code(), Some(1));
    let o = lmcalc(&["congruent", "X", r"A /\ (B -> X)", "--eqs", r"X = A /\ (B -> X)"]);
    assert_eq!(o.status.code(), Some(0));
    let o = lmcalc(&["congruent", "X", "A", "--eqs", r"X = A /\ (B -> X)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn inputs_may_be_files() {
    let dir = std::env::temp_dir().join(format!("lmcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let eqs = dir.join("eqs.txt");
    std::fs::write(&eqs, "# the first counterexample\nX = A /\\ (X -> B)\n").unwrap();
    let o = lmcalc(&["good", "--eqs", eqs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("negative"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_and_corpus() {
    let o = lmcalc(&["verify", "mendler-counter"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("mendler-counter: tried 3, passed 3, failed 0"));
    let o = lmcalc(&["verify", "sn-sweep", "--sort", "lambda", "--max-size", "5", "--format", "lines"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("report\tsn-sweep\t"));
    let o = lmcalc(&["corpus", "--sort", "lambda", "--max-size", "3", "--mode", "curry"]);
    let out = stdout(&o);
    assert_eq!(out.lines().last(), Some("count=3"));
    assert!(out.contains(r"|- \x0. x0 : A -> A"), "{out}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(lmcalc(&["verify", "no-such-lemma"]).status.code(), Some(2));
    assert_eq!(lmcalc(&["reduce", "(x"]).status.code(), Some(2));
    assert_eq!(lmcalc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lmcalc(&["check", r"\x. x", "A -> A", "--mode", "church"]).status.code(), Some(2));
}
