use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn cdetect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdetect"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_fork_join_gmec_fails_with_pw_only() {
    let o = cdetect(&[
        "check",
        &fixture("fork_join.net"),
        "--crucial",
        &fixture("fork_join_p1.mc"),
        "--property",
        "all",
        "--oracle",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("reachable markings: 6"));
    assert!(out.contains("basis markings: 2"));
    assert!(out.contains("strong               false"));
    assert!(out.contains("weak                 false"));
    assert!(out.contains("periodically strong  false"));
    assert!(out.contains("periodically weak    true"));
}

#[test]
fn check_single_property_exit_codes() {
    let net = fixture("fork_join.net");
    let mc = fixture("fork_join_p1.mc");
    assert_eq!(
        cdetect(&["check", &net, "--crucial", &mc, "--property", "pw"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        cdetect(&["check", &net, "--crucial", &mc, "--property", "ps"])
            .status
            .code(),
        Some(1)
    );
    let relay = fixture("relay.net");
    assert_eq!(
        cdetect(&[
            "check",
            &relay,
            "--crucial",
            &fixture("relay_m0.mc"),
            "--property",
            "strong"
        ])
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn consistent_both_methods_agree_on_b() {
    let o = cdetect(&["consistent", &fixture("relay.net"), "--word", "b", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "basis:  {[0,0,1],[0,1,0]}\noracle: {[0,0,1],[0,1,0]}\n");
}

#[test]
fn consistent_outside_language_is_empty() {
    let o = cdetect(&[
        "consistent",
        &fixture("alternator.net"),
        "--word",
        "b,b",
        "--method",
        "both",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "basis:  {}\noracle: {}\n");
    let o = cdetect(&["consistent", &fixture("relay.net"), "--word", "z"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tu_cyclic_net_is_a_precondition_violation() {
    let o = cdetect(&["check", &fixture("tu_cyclic.net"), "--crucial", &fixture("relay_m0.mc")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("directed cycle"));
}

#[test]
fn unbounded_and_parse_errors_exit_2() {
    let dir = tempdir();
    let empty = dir.join("empty.mc");
    std::fs::write(&empty, "kind = \"explicit\"\nmarkings = []\n").unwrap();
    let o = cdetect(&["check", &fixture("unbounded.net"), "--crucial", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unbounded"));

    let bad = dir.join("bad.net");
    std::fs::write(
        &bad,
        "places = [\"p\"]\n[[transition]]\nname = \"t\"\npre = { q = 1 }\n",
    )
    .unwrap();
    let o = cdetect(&["check", bad.to_str().unwrap(), "--crucial", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4: undeclared place `q`"), "{}", stderr(&o));
}

#[test]
fn budget_exceeded_exits_3() {
    let o = cdetect(&[
        "check",
        &fixture("relay.net"),
        "--crucial",
        &fixture("relay_m0.mc"),
        "--max-states",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn explain_prints_minimal_explanations() {
    let o = cdetect(&[
        "explain",
        &fixture("merge.net"),
        "--marking",
        "{p1:1,p2:1}",
        "--transition",
        "t",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("y = [0,1]  sequence: [u2]"));
    assert!(out.contains("y = [1,0]  sequence: [u1]"));
    let o = cdetect(&[
        "explain",
        &fixture("relay.net"),
        "--marking",
        "[0,1,0]",
        "--transition",
        "t4",
    ]);
    assert!(stdout(&o).contains("y = [1]  sequence: [t3]  then t4: {p2:1}"));
}

#[test]
fn graph_exports() {
    let o = cdetect(&["graph", &fixture("fork_join.net"), "--kind", "brg", "--dot", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("digraph brg {"));
    assert_eq!(out.matches(" -> ").count(), 3);

    let o = cdetect(&["graph", &fixture("relay.net"), "--kind", "rg", "--dot", "-"]);
    assert_eq!(stdout(&o).matches(" -> ").count(), 4);

    let dir = tempdir();
    let path = dir.join("obs.dot");
    let o = cdetect(&[
        "graph",
        &fixture("relay.net"),
        "--kind",
        "rg-observer",
        "--crucial",
        &fixture("relay_m0.mc"),
        "--dot",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = std::fs::read_to_string(path).unwrap();
    assert!(doc.starts_with("digraph observer {"));
    assert!(doc.contains("doublecircle"));
}

#[test]
fn reports_are_deterministic_without_timings() {
    let dir = tempdir();
    let run = |name: &str| {
        let path = dir.join(name);
        let o = cdetect(&[
            "check",
            &fixture("fork_join.net"),
            "--crucial",
            &fixture("fork_join_p1.mc"),
            "--oracle",
            "--no-timings",
            "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(1));
        std::fs::read(path).unwrap()
    };
    let a = run("a.json");
    assert_eq!(a, run("b.json"));
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("\"oracle_agrees\": true"));
    assert!(!text.contains("timings"));
}

fn tempdir() -> PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!(
        "cdetect-cli-{}-{}",
        std::process::id(),
        NEXT.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
