use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pdfa::io::{format_model, Model};
use pdfa_core::{Pdfa, Word};
use tempfile::TempDir;

fn pdfa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdfa")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_model(dir: &Path, words: &[(&[usize], usize)], alphabet: usize) -> String {
    let mut ws = Vec::new();
    for &(w, n) in words {
        ws.extend(std::iter::repeat_n(Word::from(w), n));
    }
    let model = Model { pdfa: Pdfa::learn(alphabet, &ws).unwrap(), goals: Vec::new() };
    let path = dir.join("model.toml");
    fs::write(&path, format_model(&model)).unwrap();
    p(&path).to_string()
}

fn generated(dir: &Path, preset: &str) {
    let o = pdfa(&["generate", "--preset", preset, "--enumerate", "--out-dir", p(dir)]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn infer_reports_all_orderings() {
    let dir = TempDir::new().unwrap();
    generated(dir.path(), "language-24");
    let out = dir.path().join("out");
    let o = pdfa(&["infer", "--demos", p(&dir.path().join("demos.csv")), "--out-dir", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    for line in ["|G| = 4", "|Q| = 16", "|F| = 1", "|L| = 24"] {
        assert!(s.contains(line), "{s}");
    }
    for f in ["subgoals.toml", "words.txt", "model.toml"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
}

#[test]
fn infer_rejects_an_empty_corpus() {
    let dir = TempDir::new().unwrap();
    let demos = dir.path().join("demos.csv");
    fs::write(&demos, "# nothing here\n").unwrap();
    let o = pdfa(&["infer", "--demos", p(&demos), "--out-dir", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error"));
    assert!(!dir.path().join("model.toml").exists());
}

#[test]
fn infer_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let gen = dir.path().join(name);
        let o = pdfa(&[
            "generate",
            "--preset",
            "two-stacks",
            "--count",
            "30",
            "--seed",
            "9",
            "--sigma",
            "0.003",
            "--dropout",
            "0.01",
            "--out-dir",
            p(&gen),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let o = pdfa(&["infer", "--demos", p(&gen.join("demos.csv")), "--out-dir", p(&gen)]);
        assert!(o.status.success(), "{}", stderr(&o));
        ["demos.csv", "subgoals.toml", "words.txt", "model.toml"].map(|f| fs::read(gen.join(f)).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn flags_override_the_sidecar() {
    let dir = TempDir::new().unwrap();
    generated(dir.path(), "language-6");
    let demos = dir.path().join("demos.csv");
    // nothing is dense enough: every demonstration is the empty word
    let o = pdfa(&["infer", "--demos", p(&demos), "--out-dir", p(dir.path()), "--min-pts", "100000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("|G| = 0"));
    assert!(stdout(&o).contains("|L| = 1"));
    let o = pdfa(&["infer", "--demos", p(&demos), "--out-dir", p(dir.path()), "--eps", "-1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn plan_follows_the_likelier_branch() {
    let dir = TempDir::new().unwrap();
    let model = write_model(dir.path(), &[(&[0, 1], 3), (&[1, 0], 1)], 2);
    let o = pdfa(&["plan", "--pdfa", &model]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("symbols = [0, 1]"), "{s}");
    assert!(s.contains("probability = 0.75"), "{s}");
}

#[test]
fn accepting_start_gives_an_empty_plan() {
    let dir = TempDir::new().unwrap();
    let model = write_model(dir.path(), &[(&[], 2)], 1);
    let o = pdfa(&["plan", "--pdfa", &model]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("symbols = []"));
}

#[test]
fn blocking_everything_is_stuck() {
    let dir = TempDir::new().unwrap();
    let model = write_model(dir.path(), &[(&[0, 1], 3), (&[1, 0], 1)], 2);
    let schedule = dir.path().join("schedule.toml");
    fs::write(&schedule, "[[schedule]]\nfrom = 0\nto = 1000\nabsent = [0, 1]\n").unwrap();
    let trace = dir.path().join("trace.tsv");
    let o = pdfa(&["plan", "--pdfa", &model, "--simulate", p(&schedule), "--trace", p(&trace)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let t = fs::read_to_string(&trace).unwrap();
    assert!(t.lines().last().unwrap().starts_with("stuck"), "{t}");
}

#[test]
fn a_passing_outage_is_replanned_around() {
    let dir = TempDir::new().unwrap();
    let model = write_model(dir.path(), &[(&[0, 1, 2], 3), (&[0, 2, 1], 1)], 3);
    let schedule = dir.path().join("schedule.toml");
    fs::write(&schedule, "[[schedule]]\nfrom = 1\nto = 2\nabsent = [1]\n").unwrap();
    let o = pdfa(&["plan", "--pdfa", &model, "--schedule", p(&schedule), "--out-dir", p(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("achieved = \"0 2 1\""), "{s}");
    assert!(s.contains("replans = 1"), "{s}");
    assert!(dir.path().join("trace.tsv").is_file());
}

#[test]
fn export_matches_golden() {
    let dir = TempDir::new().unwrap();
    let model = write_model(dir.path(), &[(&[0, 1], 3), (&[1, 0], 1)], 2);
    let o = pdfa(&["export", "--pdfa", &model]);
    assert!(o.status.success());
    let expected = "digraph pdfa {
    rankdir=LR;
    node [shape=circle];
    start [shape=point];
    start -> q0;
    q0 [label=\"{}\"];
    q1 [label=\"{0}\"];
    q2 [label=\"{0,1}\\nF_P=1.0000\", shape=doublecircle];
    q3 [label=\"{1}\"];
    q0 -> q1 [label=\"g0 : 0.7500\"];
    q0 -> q3 [label=\"g1 : 0.2500\"];
    q1 -> q2 [label=\"g1 : 1.0000\"];
    q3 -> q2 [label=\"g0 : 1.0000\"];
}
";
    assert_eq!(stdout(&o), expected);

    let out = dir.path().join("graph.dot");
    let o = pdfa(&["export", "--pdfa", &model, "--probabilities", "off", "--out", p(&out)]);
    assert!(o.status.success());
    let bare = fs::read_to_string(out).unwrap();
    assert!(bare.contains("    q0 -> q1;\n"));
    assert!(!bare.contains("label=\"g"));
    assert!(!bare.contains("F_P"));
}

#[test]
fn export_of_a_missing_file_fails() {
    let dir = TempDir::new().unwrap();
    let o = pdfa(&["export", "--pdfa", p(&dir.path().join("nope.toml"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nope.toml"));

    let garbage = dir.path().join("garbage.toml");
    fs::write(&garbage, "[header]\nstates = 1\n").unwrap();
    let o = pdfa(&["export", "--pdfa", p(&garbage)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_rejects_an_unknown_axis() {
    let o = pdfa(&["bench", "--axis", "colour"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("colour"));
}

#[test]
fn bench_times_grow_with_demonstrations() {
    let dir = TempDir::new().unwrap();
    let o = pdfa(&[
        "bench",
        "--axis",
        "demos",
        "--levels",
        "100,800",
        "--stages",
        "pdfa",
        "--reps",
        "3",
        "--out-dir",
        p(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let tsv = fs::read_to_string(dir.path().join("bench-demos.tsv")).unwrap();
    let medians: Vec<f64> = tsv.lines().skip(1).map(|l| l.split('\t').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(medians.len(), 2, "{tsv}");
    assert!(medians[0] <= medians[1], "{tsv}");
}

#[test]
fn single_repetition_warns() {
    let o = pdfa(&["bench", "--axis", "demos", "--levels", "100", "--stages", "pdfa", "--reps", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"));
    assert!(stdout(&o).contains("100"));
}

#[test]
fn help_and_bad_usage() {
    assert_eq!(pdfa(&["--help"]).status.code(), Some(0));
    assert_eq!(pdfa(&[]).status.code(), Some(1));
    assert_eq!(pdfa(&["infer"]).status.code(), Some(1));
    assert_eq!(pdfa(&["generate", "--preset", "four-blocks"]).status.code(), Some(1));
    assert_eq!(pdfa(&["bench", "--axis", "demos", "--levels", "800,100"]).status.code(), Some(1));
}
