use std::fs;
use std::process::{Command, Output};

fn xfemctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xfemctl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn study_prints_csv() {
    let o = xfemctl(&["study", "--case", "example1", "--levels", "9,11"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "level,e_y_h1,ord_y_h1,e_y_l2,ord_y_l2,e_p_h1,ord_p_h1,e_p_l2,ord_p_l2,e_u_l2,ord_u_l2,dofs,ssn_iters"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("9,"));
    assert_eq!(lines[2].split(',').count(), 13);
}

#[test]
fn study_writes_file_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, format!("# small run\ncase = example2\nmethod = classic\nlevels = 9, 11\nout = {}\n", out.display()))
        .unwrap();
    let o = xfemctl(&["study", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).is_empty());
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 3);
}

#[test]
fn configuration_errors_exit_with_2() {
    for args in [
        &["study", "--case", "example9", "--levels", "9"][..],
        &["study", "--case", "example1", "--levels", "11,9"],
        &["study", "--case", "example1", "--levels", "10"],
        &["case", "--case", "example1", "--levels", "9,11"],
        &["study", "--method", "p1", "--fitted", "false", "--levels", "9"],
    ] {
        let o = xfemctl(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"), "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "levles = 9\n").unwrap();
    let o = xfemctl(&["study", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("levles"));
    let o = xfemctl(&["study", "--config", dir.path().join("missing.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn case_reports_errors_and_iterations() {
    let o = xfemctl(&["case", "--case", "example2", "--levels", "19"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    for key in ["case ", "nodes ", "e_y_h1 ", "e_u_l2 ", "ssn_iters ", "objective ", "time_s "] {
        assert!(text.lines().any(|l| l.starts_with(key)), "missing {key}");
    }
}

#[test]
fn mesh_emit_then_import_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("square.mesh");
    let o = xfemctl(&["mesh", "emit", "--case", "example1", "--level", "9", "--out", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = xfemctl(&["mesh", "import", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    assert!(line.starts_with("nodes 100 triangles 162 "), "{line}");
    assert!(line.trim_end().ends_with("area 4.000000000000"), "{line}");

    let o = xfemctl(&["case", "--case", "example1", "--mesh", file.to_str().unwrap(), "--levels", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("nodes 100"));

    fs::write(&file, "not a mesh\n").unwrap();
    let o = xfemctl(&["mesh", "import", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
