use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use autocap::automata::{AutomaticRelation, Word};
use autocap::bundle::{load_asm, save_asm};
use autocap::groups::IntLayout;

fn autocap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autocap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn last_line(o: &Output) -> String {
    stdout(o).lines().last().unwrap_or("").to_string()
}

#[test]
fn build_forbidden_prints_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f00");
    let o = autocap(&["asm", "build-forbidden", "00", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "asm forbidden-word w=00 n=2 q=4/3 k=3 scale=27 root=32");
    let o = autocap(&["asm", "build-forbidden", "1", "--out", p(&dir.path().join("f1"))]);
    assert!(stdout(&o).contains("n=1 q=2 k=1"), "{}", stdout(&o));
    let o = autocap(&["asm", "build-forbidden", "", "--out", p(&dir.path().join("fe"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_trace_and_success() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f00");
    assert_eq!(code(&autocap(&["asm", "build-forbidden", "00", "--out", p(&f)])), 0);
    let v = autocap(&["asm", "verify", p(&f)]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
    assert!(stdout(&v).contains("fairness: holds (automaton)"));

    assert_eq!(last_line(&autocap(&["asm", "trace", p(&f), "periodic:,1", "6"])), "64");
    assert_eq!(last_line(&autocap(&["asm", "trace", p(&f), "periodic:,00", "6"])), "0");

    assert_eq!(code(&autocap(&["asm", "succeeds", p(&f), "", "1"])), 0);
    assert_eq!(code(&autocap(&["asm", "succeeds", p(&f), "", "00"])), 1);
}

#[test]
fn corrupted_bundle_reports_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f00");
    assert_eq!(code(&autocap(&["asm", "build-forbidden", "00", "--out", p(&f)])), 0);
    let d = load_asm(&f).unwrap();
    let lay = IntLayout::separated(6);
    let root = AutomaticRelation::singleton(&[Word::new(), lay.encode(&32.into())]);
    let low = AutomaticRelation::singleton(&[Word::new(), lay.encode(&20.into())]);
    let graph = d.graph().difference(&root).unwrap().union(&low).unwrap();
    let bad = autocap::asm::Asm::new(d.acg().clone(), graph, None).unwrap();
    save_asm(&f, &bad).unwrap();
    let v = autocap(&["asm", "verify", p(&f)]);
    assert_eq!(code(&v), 1);
    assert!(stdout(&v).contains("violated (automaton) at sigma=ε"), "{}", stdout(&v));
}

#[test]
fn constant_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c");
    assert_eq!(code(&autocap(&["asm", "build-constant", "5", "--out", p(&c)])), 0);
    assert_eq!(code(&autocap(&["asm", "verify", p(&c)])), 0);
    let t = autocap(&["asm", "trace", p(&c), "champernowne", "4"]);
    assert_eq!(stdout(&t), "5\n5\n5\n5\n5\n");
    assert_eq!(code(&autocap(&["asm", "succeeds", p(&c), "", "1"])), 1);
    let neg = dir.path().join("n");
    assert_eq!(code(&autocap(&["asm", "build-constant", "-1", "--out", p(&neg)])), 0);
    assert_eq!(code(&autocap(&["asm", "verify", p(&neg)])), 1);
}

#[test]
fn sum_of_bundles() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, s) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("s"));
    autocap(&["asm", "build-forbidden", "0", "--out", p(&a)]);
    autocap(&["asm", "build-forbidden", "1", "--out", p(&b)]);
    let o = autocap(&["asm", "sum", p(&a), p(&b), "--out", p(&s)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    // 2^|x| on both runs of zeros and ones before the first mixed prefix
    let t = autocap(&["asm", "trace", p(&s), "periodic:,1", "3"]);
    assert_eq!(stdout(&t), "2\n2\n4\n8\n");
    assert_eq!(code(&autocap(&["asm", "verify", p(&s), "--bound", "6"])), 0);
}

const FAIR: &str = "state q bet 1/2\ntrans q 0 q\ntrans q 1 q\ninitial q\ncapital 3/2\n";
const BOLD: &str = "state q bet 1\ntrans q 0 q\ntrans q 1 q\ninitial q\ncapital 1\n";
const MIXED: &str = "state a bet 1/3\nstate b bet 2/3\nstate c bet 1/2\n\
                     trans a 0 b\ntrans a 1 c\ntrans b 0 c\ntrans b 1 a\ntrans c 0 a\ntrans c 1 b\n\
                     initial a\ncapital 1\n";

#[test]
fn fsg_run() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let path = dir.path().join(name);
        fs::write(&path, text).unwrap();
        path
    };
    let (fair, bold, mixed) = (write("fair", FAIR), write("bold", BOLD), write("mixed", MIXED));
    assert_eq!(stdout(&autocap(&["fsg", "run", p(&fair), "0110"])), "3/2\n".repeat(5));
    assert_eq!(stdout(&autocap(&["fsg", "run", p(&bold), "1111"])), "1\n2\n4\n8\n16\n");
    let o = autocap(&["fsg", "run", p(&bold), "--seq", "periodic:,1", "--len", "2"]);
    assert_eq!(stdout(&o), "1\n2\n4\n");
    let o = autocap(&["fsg", "run", p(&mixed), "0110100110", "--check"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(last_line(&o).starts_with("step function agrees on 11 prefixes over madic(6)"));
    let bad = write("bad", "state q bet 1/2\ntrans q 2 q\n");
    let o = autocap(&["fsg", "run", p(&bad), "0"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn seq_disjunctive() {
    let o = autocap(&["seq", "disjunctive", "periodic:,01", "2", "100"]);
    assert_eq!((code(&o), stdout(&o)), (1, "missing 2 of 4 words of length 2:\n00\n11\n".to_string()));
    assert_eq!(code(&autocap(&["seq", "disjunctive", "champernowne", "3", "64"])), 0);
    assert_eq!(stdout(&autocap(&["seq", "prefix", "champernowne", "10"])), "0100011011\n");
    let o = autocap(&["seq", "disjunctive", "morphic:0->01;1->10@0", "3", "1000"]);
    assert!(stdout(&o).contains("000\n") && stdout(&o).contains("111\n"));
}

#[test]
fn relation_files() {
    let dir = tempfile::tempdir().unwrap();
    let eq = dir.path().join("eq.aut");
    assert_eq!(code(&autocap(&["rel", "builtin", "equality", "--out", p(&eq)])), 0);
    let e = autocap(&["rel", "enumerate", p(&eq), "--bound", "1"]);
    assert_eq!(stdout(&e).lines().count(), 3);

    let c1 = dir.path().join("c1.aut");
    let c2 = dir.path().join("c2.aut");
    autocap(&["rel", "complement", p(&eq), "--out", p(&c1)]);
    autocap(&["rel", "complement", p(&c1), "--out", p(&c2)]);
    assert_eq!(fs::read(&eq).unwrap(), fs::read(&c2).unwrap());

    let empty = dir.path().join("empty.aut");
    autocap(&["rel", "builtin", "empty:2", "--out", p(&empty)]);
    assert_eq!(code(&autocap(&["rel", "empty", p(&empty)])), 0);
    assert_eq!(code(&autocap(&["rel", "empty", p(&eq)])), 1);
    let both = autocap(&["rel", "intersect", p(&eq), p(&c1)]);
    fs::write(dir.path().join("both.aut"), stdout(&both)).unwrap();
    assert_eq!(code(&autocap(&["rel", "empty", p(&dir.path().join("both.aut"))])), 0);

    let proj = autocap(&["rel", "project", p(&eq), "--track", "1"]);
    assert!(stdout(&proj).starts_with("arity 1 "));
    assert!(stdout(&autocap(&["export", "dot", p(&eq)])).starts_with("digraph"));

    fs::write(dir.path().join("junk.aut"), "arity 2 states 1 initial 0\nbogus\n").unwrap();
    let o = autocap(&["rel", "complement", p(&dir.path().join("junk.aut"))]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn groups_and_acgs() {
    let dir = tempfile::tempdir().unwrap();
    let zz = dir.path().join("zz");
    assert_eq!(code(&autocap(&["acg", "linear", "product(int,int)", "--coefs", "1,1", "--out", p(&zz)])), 0);
    assert_eq!(code(&autocap(&["acg", "validate", p(&zz), "--bound", "3"])), 0);
    let q = dir.path().join("q");
    let o = autocap(&["acg", "quotient", p(&zz), "--out", p(&q)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("trivial-kernel=true"));
    assert_eq!(code(&autocap(&["group", "verify", p(&q), "--bound", "3"])), 0);
    let g = dir.path().join("g");
    assert_eq!(code(&autocap(&["group", "build", "madic(2)", "--out", p(&g)])), 0);
    assert_eq!(code(&autocap(&["group", "verify", p(&g), "--bound", "3"])), 0);
}

#[test]
fn exit_codes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let o = autocap(&["asm", "build-forbidden", "000", "--budget", "50", "--out", p(&dir.path().join("x"))]);
    assert_eq!(code(&o), 3);
    assert_eq!(code(&autocap(&["frobnicate"])), 2);
    assert_eq!(code(&autocap(&["asm", "build-forbidden", "00"])), 2);
    let a = autocap(&["seq", "prefix", "prng:9", "64"]);
    let b = autocap(&["seq", "prefix", "prng:9", "64"]);
    assert_eq!(a.stdout, b.stdout);
}
