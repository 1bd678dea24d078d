use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn orthonet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orthonet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const P1_ROW: &str = "taxa: x y z\nsymbols: D S\nx y D\nx z D\ny z D\nx y z S\n";

#[test]
fn gen_induce_pop_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.nwk");
    let delta = dir.path().join("delta.txt");
    let popped = dir.path().join("popped.nwk");
    let canon = dir.path().join("canon.nwk");
    let dot = dir.path().join("popped.dot");

    let out = orthonet(&[
        "gen",
        "--n",
        "12",
        "--m",
        "3",
        "--cycles",
        "3",
        "--seed",
        "5",
        "-o",
        p(&net),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(orthonet(&["induce", "-i", p(&net), "-o", p(&delta)])
        .status
        .success());
    let out = orthonet(&["pop", "-i", p(&delta), "-o", p(&popped), "--dot", p(&dot)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(fs::read_to_string(&dot).unwrap().starts_with("digraph"));

    assert!(orthonet(&["transform", "-i", p(&net), "-o", p(&canon)])
        .status
        .success());
    assert_eq!(
        orthonet(&["iso", p(&popped), p(&canon)]).status.code(),
        Some(0)
    );
}

#[test]
fn iso_reports_difference() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.nwk");
    let b = dir.path().join("b.nwk");
    fs::write(&a, "((a,b)X,c)Y;\n").unwrap();
    fs::write(&b, "((a,c)X,b)Y;\n").unwrap();
    assert_eq!(orthonet(&["iso", p(&a), p(&b)]).status.code(), Some(4));
}

#[test]
fn check_flags_helly_violation() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p1.txt");
    fs::write(&input, P1_ROW).unwrap();
    let out = orthonet(&["check", "-i", p(&input)]);
    assert_eq!(out.status.code(), Some(2));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(
        table
            .lines()
            .any(|l| l.starts_with("P1") && l.contains("FAIL")),
        "{table}"
    );

    let out = orthonet(&["check", "--format", "json", "-i", p(&input)]);
    let json = String::from_utf8(out.stdout).unwrap();
    assert!(json.contains("\"P1\""));
}

#[test]
fn pop_rejects_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p1.txt");
    fs::write(&input, P1_ROW).unwrap();
    let out = orthonet(&["pop", "-i", p(&input)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("P1"));
    assert!(orthonet(&["pop", "-q", "-i", p(&input)]).stderr.is_empty());
}

#[test]
fn pop_on_a_tree() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tree.txt");
    fs::write(
        &input,
        "taxa: a b c\nsymbols: R X\na b X\na c R\nb c R\na b c R\n",
    )
    .unwrap();
    let out = orthonet(&["pop", "-i", p(&input)]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "((a,b)X,c)R;"
    );
}

#[test]
fn restrict_detects_file_kind() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.nwk");
    fs::write(&net, "((((a,c)D)#H1,b)B,(#H1,d)C)A;\n").unwrap();
    let out = orthonet(&["restrict", "-i", p(&net), "--taxa", "a,b,d"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let sub = String::from_utf8(out.stdout).unwrap();
    assert!(sub.trim().ends_with(';'));

    let delta = dir.path().join("delta.txt");
    assert!(orthonet(&["induce", "-i", p(&net), "-o", p(&delta)])
        .status
        .success());
    let out = orthonet(&["restrict", "-i", p(&delta), "--taxa", "a,b,d"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("taxa: a b d"), "{text}");

    assert_eq!(
        orthonet(&["restrict", "-i", p(&delta), "--taxa", "a,zz"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn syntax_and_io_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "taxa: a b\nnonsense\n").unwrap();
    assert_eq!(orthonet(&["pop", "-i", p(&bad)]).status.code(), Some(1));
    assert_eq!(
        orthonet(&["pop", "-i", "/nonexistent/file"]).status.code(),
        Some(1)
    );
}

#[test]
fn gen_precondition_exit_three() {
    assert_eq!(orthonet(&["gen", "--n", "1"]).status.code(), Some(3));
}
