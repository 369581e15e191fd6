//! End-to-end tests of the `ruled` binary: subcommand behavior, exit
//! codes, and file outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ruled() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ruled"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ruled-cli-test-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_examples(dir: &Path) {
    let out = ruled()
        .args(["examples", "--out"])
        .arg(dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn examples_lists_three_families() {
    let out = ruled().arg("examples").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("3 example families"), "{text}");
    for name in ["coset-su2", "biquotient-su4", "exceptional-su4"] {
        assert!(text.contains(name), "{text}");
    }
}

#[test]
fn verify_bundled_examples_good() {
    let dir = tmpdir("verify");
    write_examples(&dir);
    for name in ["coset-su2", "biquotient-su4", "exceptional-su4"] {
        let out = ruled()
            .arg("verify")
            .arg(dir.join(format!("{name}.json")))
            .arg("--json")
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{name}");
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report["good"], true, "{name}");
        assert_eq!(report["methods_agree"], true, "{name}");
        assert!(report["config_hash"].as_str().unwrap().len() == 16);
        assert_eq!(report["verdicts"].as_array().unwrap().len(), 4);
    }
}

#[test]
fn verify_not_good_triple() {
    // x = E2, v = E3, a = 0 in su(2): all methods must say not good,
    // which is still a consistent run (exit 0).
    let dir = tmpdir("notgood");
    let triple = serde_json::json!({
        "algebra": {"family": "su", "n": 2},
        "X": {"matrix": [[[0,0],[1,0]],[[-1,0],[0,0]]]},
        "V": {"matrix": [[[0,0],[0,1]],[[0,1],[0,0]]]},
        "A": {"coords": [0.0, 0.0, 0.0]},
    });
    let path = dir.join("notgood.json");
    std::fs::write(&path, triple.to_string()).unwrap();
    let out = ruled().arg("verify").arg(&path).arg("--json").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["good"], false);
    assert_eq!(report["methods_agree"], true);
}

#[test]
fn verify_rejects_bad_input() {
    let dir = tmpdir("badinput");
    let path = dir.join("broken.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = ruled().arg("verify").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let missing = ruled().arg("verify").arg(dir.join("nope.json")).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn search_biquotient_and_refusal() {
    let dir = tmpdir("search");
    let diag = |ims: [f64; 4]| {
        serde_json::json!({"matrix": (0..4).map(|i| (0..4).map(|j| {
            if i == j { vec![0.0, ims[i]] } else { vec![0.0, 0.0] }
        }).collect::<Vec<_>>()).collect::<Vec<_>>()})
    };
    let x_path = dir.join("x.json");
    std::fs::write(&x_path, diag([1.0, -1.0, 2.0, -2.0]).to_string()).unwrap();
    // v = E12 - E34
    let mut v = vec![vec![vec![0.0, 0.0]; 4]; 4];
    v[0][1] = vec![1.0, 0.0];
    v[1][0] = vec![-1.0, 0.0];
    v[2][3] = vec![-1.0, 0.0];
    v[3][2] = vec![1.0, 0.0];
    let v_path = dir.join("v.json");
    std::fs::write(&v_path, serde_json::json!({"matrix": v}).to_string()).unwrap();
    let out = ruled()
        .arg("search")
        .arg(&x_path)
        .arg(&v_path)
        .args(["--algebra", "su:4", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["candidates"].as_array().unwrap().len(), 4);

    // non-weakly-regular direction: refusal with witness, exit 2
    let bad_path = dir.join("xbad.json");
    std::fs::write(&bad_path, diag([-1.0, 0.0, 1.0, 0.0]).to_string()).unwrap();
    let out = ruled()
        .arg("search")
        .arg(&bad_path)
        .arg(&v_path)
        .args(["--algebra", "su:4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("weakly regular"), "{err}");
}

#[test]
fn surface_export_grid_combinatorics() {
    let dir = tmpdir("surface");
    write_examples(&dir);
    let mesh = dir.join("mesh.obj");
    let out = ruled()
        .arg("surface")
        .arg(dir.join("exceptional-su4.json"))
        .arg("--out")
        .arg(&mesh)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let obj = std::fs::read_to_string(&mesh).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 441);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 400);
    // deviations CSV: all below 1e-8 for the good triple
    let csv = std::fs::read_to_string(dir.join("mesh.deviations.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let dev: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(dev < 1e-8, "{line}");
    }
    // projection sidecar exists and parses
    let proj: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("mesh.projection.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(proj["axes"].as_array().unwrap().len(), 3);
}

#[test]
fn jacobi_emits_csv() {
    let dir = tmpdir("jacobi");
    write_examples(&dir);
    let out = ruled()
        .arg("jacobi")
        .arg(dir.join("coset-su2.json"))
        .args(["--grid", "9x9", "--range", "0:2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10); // header + 9 samples
    assert!(lines[0].starts_with("s,"));
    assert!(lines[0].ends_with("norm"));
}

#[test]
fn decompose_su4_exceptional_axis() {
    let dir = tmpdir("decompose");
    let x = serde_json::json!({"matrix": [
        [[0.0,-1.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]],
        [[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]],
        [[0.0,0.0],[0.0,0.0],[0.0,1.0],[0.0,0.0]],
        [[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]
    ]});
    let path = dir.join("x.json");
    std::fs::write(&path, x.to_string()).unwrap();
    let out = ruled()
        .arg("decompose")
        .arg(&path)
        .args(["--algebra", "su:4", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // the frequency-1 eigenspace of ad_X^2 is 8-dimensional
    let clusters = report["eigenvalue_clusters"].as_array().unwrap();
    let eight = clusters
        .iter()
        .any(|c| (c["lambda"].as_f64().unwrap() - 1.0).abs() < 1e-9
            && c["multiplicity"].as_u64() == Some(8));
    assert!(eight, "{report}");
    assert_eq!(report["weakly_regular"], false);
    assert!(report["witness"].is_object());

    // zero vector is an input error
    let zero = dir.join("zero.json");
    std::fs::write(&zero, serde_json::json!({"coords": vec![0.0; 15]}).to_string()).unwrap();
    let out = ruled()
        .arg("decompose")
        .arg(&zero)
        .args(["--algebra", "su:4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flags_are_input_errors() {
    let dir = tmpdir("flags");
    write_examples(&dir);
    let triple = dir.join("coset-su2.json");
    for args in [
        vec!["--grid", "1x5"],
        vec!["--grid", "banana"],
        vec!["--range", "2:-2"],
        vec!["--tol-surface", "-1.0"],
    ] {
        let out = ruled().arg("verify").arg(&triple).args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}
