//! The `heatfield` binary: argument handling and exit statuses.

use std::fs;
use std::process::Command;

use tempfile::TempDir;

fn heatfield(args: &[&str], dir: &TempDir) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_heatfield"))
        .args(args)
        .current_dir(dir.path())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn success_is_zero_and_writes_default_output() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c.cfg"), "alpha = 0.5\ntau.max = 2\n").unwrap();
    let (code, _) = heatfield(&["onepoint", "--config", "c.cfg"], &dir);
    assert_eq!(code, 0);
    assert!(dir.path().join("onepoint.csv").exists());
    assert!(dir.path().join("onepoint.csv.manifest.json").exists());
}

#[test]
fn validation_and_parse_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.cfg"), "alpha = 1.5\n").unwrap();
    let (code, stderr) = heatfield(
        &["extinction", "--config", "bad.cfg", "--out", "e.csv"],
        &dir,
    );
    assert_eq!(code, 1);
    assert!(stderr.contains("alpha ∈ [0,1]"), "{stderr}");
    assert!(dir.path().join("e.csv.manifest.json").exists());

    let (code, stderr) = heatfield(&["kernel", "--config", "absent.cfg"], &dir);
    assert_eq!(code, 1);
    assert!(stderr.contains("absent.cfg"), "{stderr}");

    fs::write(dir.path().join("syntax.cfg"), "t 1\n").unwrap();
    let (code, stderr) = heatfield(&["kernel", "--config", "syntax.cfg"], &dir);
    assert_eq!(code, 1);
    assert!(stderr.contains("syntax.cfg:1"), "{stderr}");
}

#[test]
fn bad_arguments_exit_one() {
    let dir = TempDir::new().unwrap();
    assert_eq!(heatfield(&["nonsense", "--config", "x.cfg"], &dir).0, 1);
    assert_eq!(heatfield(&["kernel"], &dir).0, 1);
    assert_eq!(heatfield(&["--help"], &dir).0, 0);
}

#[test]
fn runtime_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("n.cfg"), "grid.half_width = 3\nt = 4\n").unwrap();
    let (code, stderr) = heatfield(&["semigroup", "--config", "n.cfg"], &dir);
    assert_eq!(code, 2);
    assert!(stderr.contains("grid too narrow"), "{stderr}");
    let manifest = fs::read_to_string(dir.path().join("semigroup.csv.manifest.json")).unwrap();
    assert!(manifest.contains("\"status\": \"error\""));
}
