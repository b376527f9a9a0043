use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dirac-time"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn dirac-time")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn help_lists_commands() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for c in ["eigen", "evolve", "uncertainty", "velocities", "limits", "shift", "zbw", "emrate", "check"] {
        assert!(s.contains(c), "missing {c} in help:\n{s}");
    }
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eigen_rows_match_closed_form() {
    // r = 3, tau0 = 4: tau_r = 5, eigenvalues +-5, each twofold.
    let o = run(&["eigen", "--r", "3", "--tau0", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    let mut lines = s.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("tau,spin,u1_re,u1_im"));
    let rows: Vec<Vec<f64>> = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    let mut taus: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    taus.sort_by(f64::total_cmp);
    for (t, want) in taus.iter().zip([-5.0, -5.0, 5.0, 5.0]) {
        assert!((t - want).abs() < 1e-12, "{taus:?}");
    }
    for r in &rows {
        let norm: f64 = r[2..].iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }
    assert!(s.contains("9.48683298050514e-1"));
    assert!(s.contains("3.16227766016838e-1"));
    assert!(stderr(&o).contains("tau_r = 5"));
}

#[test]
fn negative_radius_rejected() {
    let o = run(&["eigen", "--r", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("radius"), "{}", stderr(&o));
}

#[test]
fn vector_flag_needs_three_components() {
    let o = run(&["evolve", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[model]\ntau0 = 1\nfoo\n").unwrap();
    let o = run(&["eigen", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("config line 3"), "{}", stderr(&o));

    let unknown = dir.path().join("unknown.toml");
    std::fs::write(&unknown, "[model]\nzzz = 1\n").unwrap();
    let o = run(&["eigen", "--config", unknown.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("config line 2") && e.contains("zzz"), "{e}");

    let missing = dir.path().join("nope.toml");
    let o = run(&["eigen", "--config", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "# radius only\n[eigen]\nr = 3\n").unwrap();
    let o = run(&["eigen", "--config", cfg.to_str().unwrap(), "--tau0", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("tau_r = 5"));
}

#[test]
fn evolve_writes_csv_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.csv");
    let o = run(&[
        "evolve",
        "--sigma",
        "0.08",
        "--samples",
        "3",
        "--t-end",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "t");
    let ti = header.iter().position(|h| *h == "T").unwrap();
    let zi = header.iter().position(|h| *h == "z").unwrap();
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert_eq!(r.len(), header.len());
        assert!(r.iter().all(|x| x.is_finite()));
    }
    // The packet drifts forward along z and <T> grows with t.
    assert!(rows[2][zi] > rows[0][zi]);
    assert!(rows[2][ti] > rows[0][ti]);
}
