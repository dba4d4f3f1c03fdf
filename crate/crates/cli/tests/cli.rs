use std::path::Path;
use std::process::{Command, Output};

use pennycdv::penny::generate_realization;
use pennycdv::{verify_theorem, Family, TolerancePolicy, VerifyOptions};

fn pennycdv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pennycdv"))
        .args(args)
        .env_remove("PENNYCDV_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path, file: &str, args: &[&str]) -> String {
    let path = dir.join(file);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", path_str(&path)]);
    let o = pennycdv(&all);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    path.to_str().unwrap().to_string()
}

#[test]
fn hexagon_file_has_unit_circumradius() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "hex.json", &["--family", "cycle", "--n", "6"]);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let points = json["points"].as_array().unwrap();
    assert_eq!(points.len(), 6);
    let (cx, cy) = points.iter().fold((0.0, 0.0), |(x, y), p| {
        (
            x + p[0].as_f64().unwrap() / 6.0,
            y + p[1].as_f64().unwrap() / 6.0,
        )
    });
    for p in points {
        let r = (p[0].as_f64().unwrap() - cx).hypot(p[1].as_f64().unwrap() - cy);
        assert!((r - 1.0).abs() < 1e-12);
    }
}

#[test]
fn wheel_from_petal_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(
        dir.path(),
        "wheel.json",
        &["--family", "flower", "--k", "6"],
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(json["points"].as_array().unwrap().len(), 7);
}

#[test]
fn bad_generate_parameters_exit_2() {
    let o = pennycdv(&["generate", "--family", "cycle", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error[parameter]"));
    let o = pennycdv(&["generate", "--family", "path", "--k", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pennycdv(&["generate", "--family", "nonsense", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_hexagon() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "hex.json", &["--family", "cycle", "--n", "6"]);
    let o = pennycdv(&["verify", &path]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("corank 3 = n−3; M1 ✓ M2 ✓ M3 ✓; μ(Ḡ) ≥ 3"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn verify_strip_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(
        dir.path(),
        "strip5.json",
        &["--family", "strip", "--n", "5"],
    );
    let o = pennycdv(&["verify", &path, "--exact"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("rank(D) 4 (exact); corank 1 = n−4"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn overlapping_disks_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("overlapping.json");
    std::fs::write(
        &path,
        r#"{"name":"overlapping","points":[[0,0],[0.5,0],[3,0],[5,0],[7,0]]}"#,
    )
    .unwrap();
    let o = pennycdv(&["verify", path_str(&path)]);
    assert_ne!(o.status.code(), Some(0));
    assert!(
        stderr(&o).contains("packing violation pair (0,1)"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn small_instances_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.json");
    std::fs::write(
        &path,
        r#"{"name":"square","points":[[0,0],[1,0],[1,1],[0,1]]}"#,
    )
    .unwrap();
    let o = pennycdv(&["verify", path_str(&path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error[hypothesis]"));
    // diagnostics still work below the theorem's range
    let o = pennycdv(&["edm-info", path_str(&path), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let info: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(info["nullspace"]["dim_null_d"], 1);
    assert_eq!(info["nullspace"]["dim_null_m"], 2);
}

#[test]
fn missing_and_malformed_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = pennycdv(&["verify", path_str(&dir.path().join("absent.json"))]);
    assert_eq!(o.status.code(), Some(2));
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"points\": [[0, 0], [1]]}").unwrap();
    let o = pennycdv(&["verify", path_str(&path)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tolerance_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "hex.json", &["--family", "cycle", "--n", "6"]);
    let run = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_pennycdv"))
            .args(["verify", &path])
            .env("PENNYCDV_TOL", tol)
            .output()
            .unwrap()
    };
    assert_eq!(run("1e-10").status.code(), Some(0));
    assert_eq!(run("abc").status.code(), Some(2));
    assert_eq!(run("-1").status.code(), Some(2));
}

#[test]
fn sweep_small_orders_refused() {
    let o = pennycdv(&[
        "sweep",
        "--families",
        "path",
        "--n-min",
        "3",
        "--n-max",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n_min"));
}

#[test]
fn sweep_path_and_cycle() {
    let o = pennycdv(&[
        "sweep",
        "--families",
        "path,cycle",
        "--n-min",
        "5",
        "--n-max",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 12);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        let n: usize = cols[1].parse().unwrap();
        assert_eq!(cols[4], (n - 3).to_string());
    }
    assert!(stderr(&o).contains("12 rows: 12 passed, 0 failed"));
}

#[test]
fn sweep_strip_to_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = pennycdv(&[
            "sweep",
            "--families",
            "strip",
            "--n-max",
            "10",
            "-o",
            path_str(p),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert_eq!(text.lines().count(), 7);
    for row in text.lines().skip(1) {
        let cols: Vec<&str> = row.split(',').collect();
        let n: usize = cols[1].parse().unwrap();
        assert_eq!(cols[4], (n - 4).to_string());
    }
}

#[test]
fn file_round_trip_gives_identical_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let policy = TolerancePolicy::default();
    let cases = [
        (Family::CyclePolygon, "cycle", 9, false),
        (Family::LatticeStrip, "strip", 8, true),
        (Family::PathCollinear, "collinear", 7, true),
        (Family::UnionPathsArc, "union", 10, false),
        (Family::Flower, "flower", 6, false),
    ];
    for (family, name, n, exact) in cases {
        let n_str = n.to_string();
        let path = generate(
            dir.path(),
            &format!("{name}.json"),
            &["--family", name, "--n", &n_str],
        );
        let mut args = vec!["verify", path.as_str(), "--format", "json"];
        if exact {
            args.push("--exact");
        }
        let o = pennycdv(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let opts = VerifyOptions {
            exact,
            ..Default::default()
        };
        let in_memory = verify_theorem(&generate_realization(family, n).unwrap(), &policy, opts)
            .unwrap()
            .to_json()
            .unwrap();
        assert_eq!(stdout(&o).trim_end(), in_memory, "{name}");
    }
}

#[test]
fn perturbed_generation_is_seeded() {
    let args = [
        "generate",
        "--family",
        "strip",
        "--n",
        "8",
        "--perturb",
        "0.05",
        "--seed",
        "7",
    ];
    let a = pennycdv(&args);
    let b = pennycdv(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = pennycdv(&[
        "generate",
        "--family",
        "strip",
        "--n",
        "8",
        "--perturb",
        "0.05",
        "--seed",
        "8",
    ]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn edm_info_text() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(
        dir.path(),
        "pentagon.json",
        &["--family", "cycle", "--n", "5"],
    );
    let o = pennycdv(&["edm-info", &path]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("ρ² = 0.72360679"), "{out}");
    assert!(out.contains("eᵀw = 0.69098300"), "{out}");
    assert!(out.contains("verdicts agree: true"));
}
