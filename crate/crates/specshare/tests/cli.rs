use std::process::Command;

use tempfile::tempdir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_specshare"))
}

#[test]
fn solve_writes_csv_and_is_byte_stable() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "delta = -0.5\nl0 = 0.3\n").unwrap();
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let out = dir.path().join(name);
        let st = bin().args(["solve", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
        assert!(st.success());
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    assert!(text.starts_with("point_index,mode,gamma"));
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("base_interior"));
}

#[test]
fn sweep_to_stdout() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "l0 = 0.3\n").unwrap();
    let out = bin()
        .args(["sweep", "--param", "delta", "--lo", "-0.5", "--hi", "0.5", "--steps", "3", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // Δ = 0 yields two solution rows
    assert_eq!(text.lines().count(), 1 + 1 + 2 + 1);
}

#[test]
fn bad_input_exits_2() {
    let st = bin().args(["figure", "--dataset", "nope"]).status().unwrap();
    assert_eq!(st.code(), Some(2));
    let st = bin().args(["solve", "--config", "/definitely/missing.toml"]).status().unwrap();
    assert_eq!(st.code(), Some(2));
    let st = bin().args(["sweep", "--param", "zeta", "--lo", "0", "--hi", "1", "--steps", "3"]).status().unwrap();
    assert_eq!(st.code(), Some(2));
    let st = bin().args(["sweep", "--param", "w", "--lo", "0.1", "--hi", "0.9", "--steps", "1"]).status().unwrap();
    assert_eq!(st.code(), Some(2));
    let st = bin().args(["frobnicate"]).status().unwrap();
    assert_eq!(st.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let out = bin().args(["verify", "--grid-points", "50"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("0 failed"));

    let dir = tempdir().unwrap();
    let cfg = dir.path().join("unbounded.toml");
    std::fs::write(&cfg, "mode = \"outside\"\ngamma = 0.3\n").unwrap();
    let out = bin().args(["verify", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("unbounded objective"));

    // outside-option fees fail the global deviation scan
    std::fs::write(&cfg, "mode = \"outside\"\n").unwrap();
    let out = bin().args(["verify", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
