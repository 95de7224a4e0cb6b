use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn extcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extcalc")).args(args).output().expect("binary runs")
}

fn read_report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn without_wall_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_s");
    v
}

#[test]
fn stokes_on_hemisphere_passes_with_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = extcalc(&["verify", "--suite", "stokes", "--geometry", "hemisphere", "--order", "16", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["pass"], true);
    assert_eq!(r["config"]["geometry"], "hemisphere");
    let ez = r["checks"].as_array().unwrap().iter().find(|c| c["id"] == "stokes.hemisphere.ez_total").unwrap();
    assert!(ez["abs"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn curl_suite_contains_the_plane_example() {
    let o = extcalc(&["verify", "--suite", "curl", "--geometry", "plane_disk"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = r["checks"].as_array().unwrap().iter().find(|c| c["id"] == "curl.plane_disk.rotation_curl").unwrap();
    assert_eq!(c["rhs"][0], 2.0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS curl.plane_disk.rotation_curl"));
}

#[test]
fn config_errors_exit_two_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = out.to_str().unwrap();
    for args in [
        vec!["verify", "--geometry", "klein_bottle", "--out", o],
        vec!["verify", "--suite", "nope", "--out", o],
        vec!["verify", "--order", "0", "--out", o],
        vec!["verify", "--hx", "-1e-5", "--out", o],
        vec!["verify", "--geometry", "sphere", "--geom-params", "R=-1", "--out", o],
        vec!["verify", "--geometry", "sphere", "--geom-params", "q=1", "--out", o],
        vec!["verify", "--geometry", "torus", "--geom-params", "R=1,r=2", "--out", o],
        vec!["verify", "--geometry", "torus_patch", "--geom-params", "a1=9", "--out", o],
        vec!["verify", "--tol", "nothing.here=1", "--out", o],
        vec!["verify", "--suite", "curl", "--geometry", "helix_segment", "--out", o],
        vec!["verify", "--fd", "fd3", "--out", o],
        vec!["verify", "--bogus-flag"],
    ] {
        let r = extcalc(&args);
        assert_eq!(r.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&r.stderr));
        assert!(!out.exists(), "{args:?} wrote a report");
    }
}

#[test]
fn numerical_failure_exits_one_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = extcalc(&["verify", "--suite", "stokes", "--tol", "stokes.hemisphere.ez_total=1e-15", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = read_report(&out);
    assert_eq!(r["pass"], false);
    assert_eq!(r["summary"]["failed"], 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL stokes.hemisphere.ez_total"));
}

#[test]
fn reports_are_deterministic_apart_from_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for (p, threads) in [(&a, "1"), (&b, "4")] {
        let s = Command::new(env!("CARGO_BIN_EXE_extcalc"))
            .args(["verify", "--suite", "differential-identities", "--seed", "9", "--out", p.to_str().unwrap()])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert!(s.status.success());
    }
    assert_eq!(without_wall_time(read_report(&a)), without_wall_time(read_report(&b)));
    let strip = |p: &Path| std::fs::read_to_string(p).unwrap().lines().filter(|l| !l.contains("wall_time_s")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("r.json");
    std::fs::write(
        &cfg,
        "suite = \"laplacian\"\ngeometry = \"sphere\"\ngeom-params = \"R=2\"\norder = 12\nseed = 4\n[tol]\n\"laplacian.sphere.coordinates\" = 1e-3\n",
    )
    .unwrap();
    let o = extcalc(&["verify", "--config", cfg.to_str().unwrap(), "--order", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_report(&out);
    assert_eq!(r["config"]["suite"], "laplacian");
    assert_eq!(r["config"]["geom_params"]["R"], 2.0);
    assert_eq!(r["config"]["quadrature"]["order"], 20);
    assert_eq!(r["config"]["seed"], 4);
    let c = r["checks"].as_array().unwrap().iter().find(|c| c["id"] == "laplacian.sphere.coordinates").unwrap();
    assert_eq!(c["tolerance"], 1e-3);

    std::fs::write(&cfg, "suite = \"laplacian\"\nunknown-key = 3\n").unwrap();
    assert_eq!(extcalc(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(extcalc(&["verify", "--config", dir.path().join("missing.toml").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn convergence_tables() {
    let o = extcalc(&["convergence", "--geometry", "sphere", "--orders", "4,8,16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), ["study", "geometry", "check", "parameter", "residual", "rate", "monotone"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let errs: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert!(errs[1] < errs[0]);
    assert!(errs[2] < errs[1] || errs[2] <= 1e-12);
    assert!(rows.iter().all(|r| &r[6] == "true"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fd.csv");
    let o = extcalc(&["convergence", "--hx", "1e-2,5e-3,2.5e-3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    for r in rdr.records().skip(1) {
        let rate: f64 = r.unwrap()[5].parse().unwrap();
        assert!((rate - 2.0).abs() < 0.05, "{rate}");
    }

    let o = extcalc(&["convergence", "--fd", "analytic", "--hx", "1e-4,1e-5,1e-6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for r in csv::Reader::from_reader(text.as_bytes()).records() {
        assert!(r.unwrap()[4].parse::<f64>().unwrap() <= 1e-9);
    }

    assert_eq!(extcalc(&["convergence", "--orders", "8"]).status.code(), Some(2));
    assert_eq!(extcalc(&["convergence"]).status.code(), Some(2));
    assert_eq!(extcalc(&["convergence", "--study", "fd", "--geometry", "torus", "--hx", "1e-3,1e-4"]).status.code(), Some(2));
}

#[test]
fn listings_are_stable() {
    let g1 = extcalc(&["list", "geometries"]);
    let g2 = extcalc(&["list", "geometries"]);
    assert!(g1.status.success());
    assert_eq!(g1.stdout, g2.stdout);
    let g = String::from_utf8(g1.stdout).unwrap();
    assert!(g.contains("sphere") && g.contains("radius"));
    let s = String::from_utf8(extcalc(&["list", "suites"]).stdout).unwrap();
    assert!(s.contains("evolving"));
    let c = String::from_utf8(extcalc(&["list", "checks", "--suite", "euler"]).stdout).unwrap();
    assert!(c.lines().all(|l| l.starts_with("euler.")));
    assert_eq!(extcalc(&["list", "checks", "--suite", "x"]).status.code(), Some(2));
}
