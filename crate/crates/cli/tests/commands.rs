use std::fs;
use std::process::{Command, Output};

fn ornlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ornlat")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn tree_validate() {
    let out = ornlat(&["tree", "validate", "(()(()))"]);
    assert_eq!(stdout(&out), "(()(()))\n");
    let out = ornlat(&["tree", "validate", "(()"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset"));
    assert_eq!(ornlat(&["tree", "validate", "C_x"]).status.code(), Some(2));
}

#[test]
fn pop_and_orbit() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "a.json", r#"{"g":[3,2,3]}"#);
    assert_eq!(stdout(&ornlat(&["pop", "--input", &f])), "{\"tree\":\"((()))\",\"g\":[2,2,3]}\n");
    assert_eq!(stdout(&ornlat(&["pop", "--input", &f, "--times", "2"])), "{\"tree\":\"((()))\",\"g\":[1,2,3]}\n");
    let orbit = stdout(&ornlat(&["orbit", "--input", &f]));
    assert_eq!(orbit.lines().last(), Some("3"));
    assert_eq!(orbit.lines().count(), 4);

    let bad = write(&dir, "b.json", r#"{"g":[2,3,3]}"#);
    assert_eq!(ornlat(&["pop", "--input", &bad]).status.code(), Some(2));
    assert_eq!(ornlat(&["pop", "--input", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn enumerate_dot() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("l.dot");
    let out = ornlat(&["enumerate", "--tree", "((()))", "--dot", p.to_str().unwrap()]);
    assert!(out.status.success());
    let dot = fs::read_to_string(&p).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 5);
    assert_eq!(stdout(&ornlat(&["enumerate", "--tree", "(()())"])).lines().count(), 4);
}

#[test]
fn max_orbit_and_dagger() {
    let out = ornlat(&["max-orbit", "--tree", "((()()))", "--oracle"]);
    assert_eq!(stdout(&out), "4\n4\n");
    let out = ornlat(&["dagger", "--tree", "((()()))"]);
    assert_eq!(stdout(&out).lines().last(), Some("4"));
}

#[test]
fn image_modes() {
    let dir = tempfile::tempdir().unwrap();
    let chain = write(&dir, "c.json", r#"{"g":[2,2,3]}"#);
    let out = ornlat(&["image", "--input", &chain, "--k", "1", "--preimage"]);
    assert_eq!(stdout(&out), "member\n{\"tree\":\"((()))\",\"g\":[3,2,3]}\n");
    let out = ornlat(&["image", "--input", &chain, "--k", "2"]);
    assert_eq!(out.status.code(), Some(3));

    let min = write(&dir, "m.json", r#"{"tree":"(()(()))","ornaments":[[0],[1],[2],[3]]}"#);
    assert_eq!(stdout(&ornlat(&["image", "--input", &min, "--k", "2"])), "inconclusive\n");
    let out = ornlat(&["image", "--input", &min, "--k", "2", "--preimage"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("member\n"));

    let top = write(&dir, "t.json", r#"{"tree":"(()(()))","ornaments":[[0,1,2,3],[1],[2,3],[3]]}"#);
    let out = ornlat(&["image", "--input", &top, "--k", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank"));
}

#[test]
fn count_methods_agree() {
    for k in ["0", "1", "2"] {
        let r = stdout(&ornlat(&["count", "--chain", "7", "--k", k, "--series"]));
        let g = stdout(&ornlat(&["count", "--chain", "7", "--k", k, "--series", "--method", "gf"]));
        let b = stdout(&ornlat(&["count", "--chain", "7", "--k", k, "--series", "--method", "brute"]));
        assert_eq!(r, g);
        assert_eq!(r, b);
    }
    assert_eq!(ornlat(&["count", "--chain", "5", "--k", "x"]).status.code(), Some(2));
}

#[test]
fn verify_reports_and_rejects_unknown_suite() {
    let out = ornlat(&["--threads", "2", "verify", "--max-nodes", "4", "--suite", "pop-image"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("PASS pop-image"));
    assert_eq!(ornlat(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = ornlat(&["enumerate", "--tree", "((()())())", "--dot", "-"]);
    let b = ornlat(&["--threads", "1", "enumerate", "--tree", "((()())())", "--dot", "-"]);
    assert_eq!(a.stdout, b.stdout);
}
