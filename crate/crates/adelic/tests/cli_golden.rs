//! Criterion 10: every CLI golden file reproduces byte-identically across
//! two runs, and matches the committed fixture.

use std::path::PathBuf;
use std::process::Command;

fn run_cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_adelic"))
        .args(args)
        .env_remove("ADELIC_PRECISION")
        .output()
        .expect("failed to run adelic");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn golden(name: &str, args: &[&str]) {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.extend(["tests", "golden", name]);
    let expected = std::fs::read(&path)
        .unwrap_or_else(|_| panic!("missing golden fixture {:?}", path));
    let (first, code1) = run_cli(args);
    let (second, code2) = run_cli(args);
    assert_eq!(code1, 0, "{}: nonzero exit", name);
    assert_eq!(code2, 0);
    assert_eq!(first, second, "{}: two runs differ", name);
    assert_eq!(
        first,
        expected,
        "{}: output drifted from the golden fixture",
        name
    );
}

#[test]
fn criterion_10_determinism() {
    golden(
        "decompose_gaussian_5.json",
        &["decompose", "--field", "x^2+1", "--prime", "5"],
    );
    golden("fertile_gl2.json", &["fertile", "--group", "GL2"]);
    golden(
        "equiv_cubics.json",
        &[
            "equiv", "--fieldK", "x^3-2", "--fieldL", "x^3-3", "--bound", "100",
        ],
    );
    golden(
        "root_sqrt6.json",
        &[
            "root",
            "--prime",
            "5",
            "--x",
            "6",
            "--n",
            "2",
            "--precision",
            "6",
        ],
    );
    golden(
        "compare_cubics.json",
        &[
            "compare", "--group", "GL2", "--fieldK", "x^3-2", "--fieldL", "x^3-3", "--bound",
            "50",
        ],
    );
    golden("siegel_6_3.json", &["siegel", "--z", "6", "--n", "3"]);
    golden(
        "units_q2i.json",
        &[
            "units",
            "--prime",
            "2",
            "--field",
            "x^2+1",
            "--precision",
            "24",
        ],
    );
    golden(
        "torsion_sqrtm5.json",
        &["torsion", "--field", "x^2+5", "--bound", "10"],
    );
    golden(
        "divisible_diag21.json",
        &["divisible", "--prime", "5", "--matrix", "[[2,0],[0,1]]"],
    );
    golden(
        "reconstruct_gl3_q.json",
        &[
            "reconstruct", "--group", "GL3", "--field", "x-1", "--bound", "5",
        ],
    );
    println!("acceptance 10 (CLI determinism): PASS (10 golden files, 2 runs each)");
}

#[test]
fn domain_errors_exit_one_with_error_object() {
    let (out, code) = run_cli(&["decompose", "--field", "x^2-1", "--prime", "5"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["error"]["name"], "Reducible");

    let (out, code) = run_cli(&["decompose", "--field", "x^2+1", "--prime", "4"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["error"]["name"], "NotPrime");
}

#[test]
fn usage_errors_exit_two() {
    let (_, code) = run_cli(&["decompose", "--field", "x^2+1"]); // missing --prime
    assert_eq!(code, 2);
    let (_, code) = run_cli(&["no-such-command"]);
    assert_eq!(code, 2);
}

#[test]
fn env_var_precision_fallback() {
    let out = Command::new(env!("CARGO_BIN_EXE_adelic"))
        .args(["root", "--prime", "5", "--x", "6", "--n", "2"])
        .env("ADELIC_PRECISION", "6")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["root"]["N"], 6);
    assert_eq!(v["root"]["u"], "4891");
}
