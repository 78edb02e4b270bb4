use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use riordan_cli::format::{read_matrix, CertificateDoc, CommutatorDoc, MatrixDoc};
use riordan_core::{RiordanMatrix, Series};
use tempfile::TempDir;

fn riordan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riordan"))
        .args(args)
        .stdin(Stdio::null())
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = riordan(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> (i32, String) {
    let out = riordan(args);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn save(dir: &TempDir, name: &str, m: &RiordanMatrix) -> String {
    let path: PathBuf = dir.path().join(name);
    let doc = serde_json::to_string(&MatrixDoc::new(m)).unwrap();
    std::fs::write(&path, doc).unwrap();
    path.to_str().unwrap().to_owned()
}

fn matrix(text: &str) -> RiordanMatrix {
    read_matrix(text).unwrap()
}

fn dh(d: &str, h: &str, n: usize) -> RiordanMatrix {
    let e = |s| riordan_core::gfparse::eval_str(s, n).unwrap();
    RiordanMatrix::from_dh(e(d), e(h)).unwrap()
}

#[test]
fn build_pascal_triangle() {
    let out = ok(&[
        "build", "--d", "1/(1-x)", "--h", "x/(1-x)", "-n", "4", "--format", "triangle",
    ]);
    assert_eq!(out, "1\n1 1\n1 2 1\n1 3 3 1\n1 4 6 4 1\n");
}

#[test]
fn build_identity_and_bad_d0() {
    let m = matrix(&ok(&["build", "--d", "1", "--h", "x", "-n", "2"]));
    assert_eq!(m, RiordanMatrix::identity(2));
    let (c, err) = code(&["build", "--d", "0", "--h", "x", "-n", "2"]);
    assert_eq!(c, 3);
    assert!(err.contains("d0 = 0"), "{err}");
}

#[test]
fn build_parse_errors_exit_two() {
    assert_eq!(
        code(&["build", "--d", "1/(1-x", "--h", "x", "-n", "2"]).0,
        2
    );
    assert_eq!(code(&["build", "--d", "1,q", "--h", "x", "-n", "2"]).0, 2);
    assert_eq!(code(&["build", "--d", "1", "-n", "2"]).0, 2);
    assert_eq!(code(&["frobnicate"]).0, 2);
}

#[test]
fn build_accepts_coefficient_lists() {
    let out = ok(&[
        "build", "--d", "1,1,1", "--h", "0,1,1", "-n", "2", "--format", "triangle",
    ]);
    assert_eq!(out, "1\n1 1\n1 2 1\n");
    let csv = ok(&[
        "build", "--d", "-1/2", "--h", "0,1", "-n", "1", "--format", "csv",
    ]);
    assert_eq!(csv, "row,col,value\n0,0,-1/2\n1,0,0\n1,1,-1/2\n");
}

#[test]
fn mul_pascal_squared() {
    let dir = TempDir::new().unwrap();
    let p = save(&dir, "p.json", &RiordanMatrix::pascal(6));
    let sq = matrix(&ok(&["mul", &p, &p]));
    assert_eq!(sq, dh("1/(1-2*x)", "x/(1-2*x)", 6));
    let cube = matrix(&ok(&["mul", &p, &p, &p]));
    assert_eq!(cube, dh("1/(1-3*x)", "x/(1-3*x)", 6));
}

#[test]
fn mul_order_mismatch_is_domain_error() {
    let dir = TempDir::new().unwrap();
    let a = save(&dir, "a.json", &RiordanMatrix::pascal(3));
    let b = save(&dir, "b.json", &RiordanMatrix::pascal(4));
    assert_eq!(code(&["mul", &a, &b]).0, 3);
}

#[test]
fn inv_and_project() {
    let dir = TempDir::new().unwrap();
    let id = save(&dir, "id.json", &RiordanMatrix::identity(5));
    assert!(matrix(&ok(&["inv", &id])).is_identity());
    let p = save(&dir, "p.json", &RiordanMatrix::pascal(5));
    assert_eq!(matrix(&ok(&["inv", &p])), dh("1/(1+x)", "x/(1+x)", 5));
    assert_eq!(matrix(&ok(&["project", &p])), RiordanMatrix::pascal(4));
    assert_eq!(
        matrix(&ok(&["project", &p, "--to", "2"])),
        RiordanMatrix::pascal(2)
    );
    assert_eq!(code(&["project", &p, "--to", "6"]).0, 3);
    let zero = save(&dir, "zero.json", &RiordanMatrix::identity(0));
    assert_eq!(code(&["project", &zero]).0, 3);
}

#[test]
fn check_predicates() {
    let dir = TempDir::new().unwrap();
    let p = save(&dir, "p.json", &RiordanMatrix::pascal(5));
    assert_eq!(ok(&["check", "--membership", &p]), "true\n");
    assert_eq!(ok(&["check", "--involution", &p]), "false\n");
    assert_eq!(ok(&["check", "--omega0", &p]), "true\n");
    let cubic = save(&dir, "c.json", &dh("1", "x+x^3", 3));
    assert_eq!(ok(&["check", "--omega0", &cubic]), "false\n");
    assert_eq!(ok(&["check", "--membership", &cubic]), "false\n");
    assert_eq!(code(&["check", &p]).0, 2);
    assert_eq!(code(&["check", "--omega0", "--involution", &p]).0, 2);
}

#[test]
fn involution_examples() {
    let out = ok(&[
        "involution",
        "--sign",
        "+",
        "--alpha",
        "0",
        "-n",
        "3",
        "--format",
        "triangle",
    ]);
    assert_eq!(out, "1\n0 -1\n0 0 1\n0 0 0 -1\n");
    let out = ok(&[
        "involution",
        "--sign",
        "+",
        "--alpha",
        "1,0,0",
        "-n",
        "3",
        "--format",
        "triangle",
    ]);
    assert_eq!(out, "1\n1 -1\n0 0 1\n0 0 -1 -1\n");
    let out = ok(&[
        "involution",
        "--sign",
        "-",
        "--alpha",
        "0",
        "-n",
        "2",
        "--format",
        "triangle",
    ]);
    assert_eq!(out, "-1\n0 1\n0 0 -1\n");
    assert_eq!(
        code(&["involution", "--sign", "2", "--alpha", "0", "-n", "2"]).0,
        2
    );
}

#[test]
fn involution_output_is_an_involution() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("inv.json");
    let p = path.to_str().unwrap();
    ok(&[
        "involution",
        "--sign",
        "-",
        "--alpha",
        "1/2,-3,2/7,1,5",
        "-n",
        "5",
        "-o",
        p,
    ]);
    assert_eq!(ok(&["check", "--involution", p]), "true\n");
    assert_eq!(ok(&["check", "--membership", p]), "true\n");
    let cert: CertificateDoc = serde_json::from_str(&ok(&["factor", p])).unwrap();
    assert_eq!(cert.widths, 1);
}

#[test]
fn commutator_examples() {
    let dir = TempDir::new().unwrap();
    let p = save(&dir, "p.json", &RiordanMatrix::pascal(8));
    let doc: CommutatorDoc = serde_json::from_str(&ok(&["commutator", &p, "--r", "2"])).unwrap();
    assert!(doc.verified);
    assert_eq!(doc.b.to_matrix().unwrap(), RiordanMatrix::pascal(8));
    assert_eq!(doc.a.to_matrix().unwrap(), dh("1", "2*x", 8));

    let id = save(&dir, "id.json", &RiordanMatrix::identity(4));
    let doc: CommutatorDoc = serde_json::from_str(&ok(&["commutator", &id, "--r", "2"])).unwrap();
    assert!(doc.b.to_matrix().unwrap().is_identity());

    let (c, err) = code(&["commutator", &p, "--r", "1"]);
    assert_eq!(c, 3);
    assert!(err.contains("root of unity"), "{err}");
    assert_eq!(code(&["commutator", &p, "--r", "-1"]).0, 3);
    assert_eq!(code(&["commutator", &p, "--r", "two"]).0, 2);
}

#[test]
fn commutator_json_keys() {
    let dir = TempDir::new().unwrap();
    let p = save(&dir, "p.json", &RiordanMatrix::pascal(2));
    let v: serde_json::Value = serde_json::from_str(&ok(&["commutator", &p, "--r", "3"])).unwrap();
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, ["A", "B", "verified"]);
}

#[test]
fn factor_examples() {
    let dir = TempDir::new().unwrap();
    let p = save(&dir, "p.json", &RiordanMatrix::pascal(6));
    let cert: CertificateDoc = serde_json::from_str(&ok(&["factor", &p])).unwrap();
    assert!(cert.verified);
    assert_eq!(cert.widths, 4);
    assert_eq!(cert.factors.len(), 4);
    let product = cert
        .factors
        .iter()
        .map(|f| f.to_matrix().unwrap())
        .fold(RiordanMatrix::identity(6), |acc, f| acc.mul(&f).unwrap());
    assert_eq!(product, RiordanMatrix::pascal(6));

    let k = save(&dir, "k.json", &dh("1", "-x", 4));
    let cert: CertificateDoc = serde_json::from_str(&ok(&["factor", &k])).unwrap();
    assert_eq!(cert.widths, 1);

    let two = save(&dir, "two.json", &dh("2", "x", 3));
    let (c, err) = code(&["factor", &two]);
    assert_eq!(c, 3);
    assert!(
        err.contains("not in the group generated by involutions"),
        "{err}"
    );
}

#[test]
fn named_examples() {
    assert_eq!(
        ok(&["named", "pascal", "-n", "3", "--format", "triangle"]),
        "1\n1 1\n1 2 1\n1 3 3 1\n"
    );
    assert_eq!(
        ok(&["named", "klein:IPLUS0", "-n", "2", "--format", "triangle"]),
        "1\n0 -1\n0 0 1\n"
    );
    let doc: MatrixDoc = serde_json::from_str(&ok(&["named", "identity", "-n", "0"])).unwrap();
    assert_eq!(doc.rows, [["1"]]);
    assert_eq!(code(&["named", "klein:J", "-n", "2"]).0, 2);
}

#[test]
fn apply_examples() {
    let dir = TempDir::new().unwrap();
    let p = save(&dir, "p.json", &RiordanMatrix::pascal(7));
    assert_eq!(
        ok(&["apply", &p, "--series", "1/(1-x)"]),
        "1,2,4,8,16,32,64,128\n"
    );
    let id = save(&dir, "id.json", &RiordanMatrix::identity(3));
    assert_eq!(
        ok(&["apply", &id, "--series", "1,-1/2,3,0"]),
        "1,-1/2,3,0\n"
    );
    let s = "1/(1-x-x^2)";
    let expected = riordan_core::gfparse::eval_str(s, 3).unwrap();
    assert_eq!(ok(&["apply", &id, "--series", s]), format!("{expected}\n"));
    assert_eq!(code(&["apply", &p, "--series", "1,2,3"]).0, 3);
}

#[test]
fn json_output_feeds_every_consumer() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let at = |name: &str| d.join(name).to_str().unwrap().to_owned();
    ok(&[
        "build",
        "--d",
        "1/(1-x)^2",
        "--h",
        "x/(1-x)",
        "-n",
        "5",
        "-o",
        &at("m.json"),
    ]);
    ok(&["named", "klein:IMINUS0", "-n", "5", "-o", &at("k.json")]);
    ok(&["mul", &at("m.json"), &at("k.json"), "-o", &at("mk.json")]);
    ok(&["inv", &at("mk.json"), "-o", &at("inv.json")]);
    ok(&["project", &at("inv.json"), "-o", &at("proj.json")]);
    ok(&["commutator", &at("m.json"), "--r", "3"]);
    let cert: CertificateDoc = serde_json::from_str(&ok(&["factor", &at("mk.json")])).unwrap();
    assert!(cert.verified && cert.widths <= 4);
    for f in &cert.factors {
        let path = d.join("f.json");
        std::fs::write(&path, serde_json::to_string(f).unwrap()).unwrap();
        assert_eq!(
            ok(&["check", "--involution", path.to_str().unwrap()]),
            "true\n"
        );
    }
    let target = d.join("t.json");
    std::fs::write(&target, serde_json::to_string(&cert.target).unwrap()).unwrap();
    assert_eq!(std::fs::read(&target).unwrap(), {
        let doc = matrix(&std::fs::read_to_string(at("mk.json")).unwrap());
        serde_json::to_vec(&MatrixDoc::new(&doc)).unwrap()
    });
    ok(&["apply", &at("proj.json"), "--series", "1/(1+x)"]);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = save(&dir, "p.json", &RiordanMatrix::pascal(7));
    for args in [
        vec!["factor", p.as_str()],
        vec!["commutator", p.as_str(), "--r", "-1/2"],
        vec![
            "build",
            "--d",
            "1/(1-x-x^2)",
            "--h",
            "x*(1+x)",
            "-n",
            "6",
            "--format",
            "csv",
        ],
    ] {
        assert_eq!(riordan(&args).stdout, riordan(&args).stdout);
    }
}

#[test]
fn reads_standard_input() {
    let doc = serde_json::to_string(&MatrixDoc::new(&RiordanMatrix::pascal(3))).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_riordan"))
        .args(["inv", "-", "--format", "triangle"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child
        .stdin
        .take()
        .unwrap()
        .write_all(doc.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "1\n-1 1\n1 -2 1\n-1 3 -3 1\n"
    );
}

#[test]
fn io_and_document_errors() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&["inv", missing.to_str().unwrap()]).0, 2);
    let bad: &Path = &dir.path().join("bad.json");
    std::fs::write(
        bad,
        r#"{"order": 1, "d": ["1", "0"], "h": ["0", "1"], "rows": [["1"], ["0", "2"]]}"#,
    )
    .unwrap();
    assert_eq!(code(&["inv", bad.to_str().unwrap()]).0, 2);
    std::fs::write(
        bad,
        r#"{"order": 1, "d": ["0", "0"], "h": ["0", "1"], "rows": [["0"], ["0", "0"]]}"#,
    )
    .unwrap();
    assert_eq!(code(&["inv", bad.to_str().unwrap()]).0, 3);
    std::fs::write(
        bad,
        r#"{"order": 0, "d": [1], "h": ["0"], "rows": [["1"]]}"#,
    )
    .unwrap();
    assert_eq!(code(&["inv", bad.to_str().unwrap()]).0, 2);
}

#[test]
fn series_in_documents_match_rows() {
    let m = matrix(&ok(&["build", "--d", "1+x", "--h", "x-x^2/3", "-n", "3"]));
    assert_eq!(m.h(), &"0,1,-1/3,0".parse::<Series>().unwrap());
}
