use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const EXAMPLE: &str = "\
.model example
.inputs 1 2 3 4 5
.outputs 10 11
.names 1 3 6
0- 1
-0 1
.names 3 4 7
0- 1
-0 1
.names 2 7 8
0- 1
-0 1
.names 4 5 9
01 1
10 1
.names 6 7 10
11 1
.names 8 9 11
1- 1
-1 1
.end
";

const PATTERNS: &str = "0111001011\n1010011011\n1110011000\n0000011111\n1010000101\n";

/// Two copies of a cone, the second complemented, plus an unrelated AND.
const DUPLICATED: &str = "\
.model dup
.inputs a b c d
.outputs y z w
.names a b c t1
1-1 1
01- 1
.names t1 d y
10 1
01 1
.names a b c u1
1-1 1
01- 1
.names u1 d z
11 1
00 1
.names a d w
11 1
.end
";

const AND2: &str = ".model g\n.inputs a b\n.outputs y\n.names a b y\n11 1\n.end\n";
const OR2: &str = ".model g\n.inputs a b\n.outputs y\n.names a b y\n1- 1\n-1 1\n.end\n";

const INVERTER_CHAIN: &str = "\
.model chain
.inputs x
.outputs c
.names x a
0 1
.names a b
0 1
.names b c
0 1
.end
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stpsweep"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sim_worked_example_targets() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "ex.blif", EXAMPLE);
    let pats = write(&dir, "ex.pat", PATTERNS);
    let o = run(&["sim", path(&net), "--pattern-file", path(&pats), "--targets", "7,8", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "7\t1110\n8\t11110001\n");

    // Pattern simulation of the targets agrees with full simulation.
    let t = run(&["sim", path(&net), "--pattern-file", path(&pats), "--targets", "7,8"]);
    let all = run(&["sim", path(&net), "--pattern-file", path(&pats), "--mode", "all"]);
    let all = stdout(&all);
    for line in stdout(&t).lines() {
        assert!(all.lines().any(|l| l == line), "{line}");
    }
    // NAND of PI rows 3 and 4.
    assert!(stdout(&t).starts_with("7\t1111100111\n"));
}

#[test]
fn sim_inverter_chain_alternates() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "chain.blif", INVERTER_CHAIN);
    let pats = write(&dir, "p.txt", "0110\n");
    let o = run(&["sim", path(&net), "--pattern-file", path(&pats), "--mode", "all"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x\t0110\na\t1001\nb\t0110\nc\t1001\n");

    let inv = write(&dir, "inv.aag", "aag 1 1 0 1 0\n2\n3\n");
    let o = run(&["sim", path(&inv), "--pattern-file", path(&pats)]);
    assert_eq!(stdout(&o), "i0\t0110\n");
}

#[test]
fn sim_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "ex.blif", EXAMPLE);
    let a = run(&["sim", path(&net), "--patterns", "200", "--seed", "7"]);
    let b = run(&["sim", path(&net), "--patterns", "200", "--seed", "7"]);
    let c = run(&["sim", path(&net), "--patterns", "200", "--seed", "8"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn sweep_then_cec() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "dup.blif", DUPLICATED);
    let out = dir.path().join("out.blif");
    let o = run(&["sweep", path(&net), path(&out), "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("gate,result,sat_calls,total_sat_calls,sim_time_s,total_time_s")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let gate: usize = row[0].parse().unwrap();
    let result: usize = row[1].parse().unwrap();
    assert!(result < gate, "{text}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("merges="));

    let c = run(&["cec", path(&net), path(&out)]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(stdout(&c), "equivalent\n");
}

#[test]
fn sweep_keeps_irredundant_net() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "ex.blif", EXAMPLE);
    let out = dir.path().join("out.blif");
    let o = run(&["sweep", path(&net), path(&out), "--base-patterns", "256"]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("6,6,"), "{row}");
    assert_eq!(stdout(&run(&["cec", path(&net), path(&out)])), "equivalent\n");
}

#[test]
fn cec_reports_counterexample() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "and.blif", AND2);
    let b = write(&dir, "or.blif", OR2);
    let o = run(&["cec", path(&a), path(&b)]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("inequivalent at y:"), "{out}");
    assert!(out.contains("a=1 b=0") || out.contains("a=0 b=1"), "{out}");
    assert_eq!(run(&["cec", path(&a), path(&a)]).status.code(), Some(0));
}

#[test]
fn prove_identities() {
    let o = run(&["prove", "a->b", "~a|b"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "proved\n".into()));
    let o = run(&["prove", "a&b", "a|b"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "refuted at a=1,b=0\n".into()));
    assert_eq!(run(&["prove", "a", "a"]).status.code(), Some(0));
    assert_eq!(run(&["prove", "a &", "a"]).status.code(), Some(3));
}

#[test]
fn stats_counts() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "ex.blif", EXAMPLE);
    let out = stdout(&run(&["stats", path(&net)]));
    assert!(out.contains("pis=5\n") && out.contains("luts=6\n") && out.contains("depth=3\n"), "{out}");
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.blif", ".model x\n.bogus\n");
    assert_eq!(run(&["stats", path(&bad)]).status.code(), Some(3));
    assert_eq!(run(&["stats", "/nonexistent.blif"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let net = write(&dir, "ex.blif", EXAMPLE);
    assert_eq!(run(&["sim", path(&net), "--targets", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["sim", path(&net), "--mode", "targets"]).status.code(), Some(2));
    let pats = write(&dir, "short.pat", "01\n");
    assert_eq!(
        run(&["sim", path(&net), "--pattern-file", path(&pats)]).status.code(),
        Some(3)
    );
}
