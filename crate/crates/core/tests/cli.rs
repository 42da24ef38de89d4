use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn harmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn single_pixel_all_fatou_image() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let img = dir.path().join("one.ppm");
    fs::write(
        &cfg,
        r#"{"map": {"h": "z", "g": "z"},
            "window": {"re_min": -1, "re_max": 1, "im_min": -1, "im_max": 1, "width": 1, "height": 1}}"#,
    )
    .unwrap();
    let o = harmap(&["render", "--config", path(&cfg), "--out", path(&img)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = fs::read(&img).unwrap();
    let header = b"P6\n1 1\n255\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 3);
}

#[test]
fn render_is_repeatable_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"map": "strict-containment",
            "window": {"re_min": -3, "re_max": 3, "im_min": -3, "im_max": 3, "width": 48, "height": 48}}"#,
    )
    .unwrap();
    let mut images = Vec::new();
    for (k, threads) in ["1", "2", "8", "2"].iter().enumerate() {
        let img = dir.path().join(format!("{k}.ppm"));
        let o = harmap(&[
            "render",
            "--config",
            path(&cfg),
            "--out",
            path(&img),
            "--threads",
            threads,
        ]);
        assert!(o.status.success());
        images.push(fs::read(&img).unwrap());
    }
    assert!(images.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn effective_config_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let img = dir.path().join("a.ppm");
    let rep = dir.path().join("a.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"map": {{"h": "z^2", "g": "z^2/2"}},
                "window": {{"re_min": -2, "re_max": 2, "im_min": -2, "im_max": 2, "width": 32, "height": 20}},
                "budget": {{"max_iter": 128}},
                "outputs": [{{"kind": "image", "path": {:?}}}, {{"kind": "report", "path": {:?}}}]}}"#,
            path(&img),
            path(&rep)
        ),
    )
    .unwrap();
    assert!(harmap(&["render", "--config", path(&cfg)]).status.success());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert!(report["components"].as_array().is_some_and(|c| !c.is_empty()));
    let mut effective = report["config"].clone();
    let img2 = dir.path().join("b.ppm");
    effective["outputs"] = serde_json::json!([{"kind": "image", "path": path(&img2)}]);
    let cfg2 = dir.path().join("effective.json");
    fs::write(&cfg2, effective.to_string()).unwrap();
    let o = harmap(&["render", "--config", path(&cfg2)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read(&img).unwrap(), fs::read(&img2).unwrap());
}

#[test]
fn classify_point_verdicts() {
    let o = harmap(&[
        "classify-point",
        "--preset",
        "strict-containment",
        "--seed-point",
        "1,0",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("membership: JuliaLike"), "{}", stdout(&o));
    let o = harmap(&[
        "classify-point",
        "--preset",
        "strict-containment",
        "--seed-point",
        "1.5,0",
    ]);
    assert!(stdout(&o).contains("membership: FatouLike"), "{}", stdout(&o));
    let o = harmap(&[
        "classify-point",
        "--preset",
        "strict-containment",
        "--seed-point",
        "-2,0",
    ]);
    assert!(stdout(&o).contains("orbit_class: Escaping"), "{}", stdout(&o));
}

#[test]
fn wandering_orbit_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("o.csv");
    let o = harmap(&[
        "classify-point",
        "--preset",
        "wandering",
        "--seed-point",
        "0,0",
        "--out",
        path(&csv),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("orbit_class: Escaping"));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,re_f,im_f,re_h,im_h,re_g,im_g,abs_f"));
    for (n, line) in lines.take(21).enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 8);
        assert_eq!(cols[0].parse::<usize>().unwrap(), n);
        let re: f64 = cols[1].parse().unwrap();
        let im: f64 = cols[2].parse().unwrap();
        assert!(
            re.abs() < 1e-6 && (im - 2.0 * PI * n as f64).abs() < 1e-6,
            "row {n}: {line}"
        );
    }
    assert!(!text.contains('\r'));
}

#[test]
fn verify_exit_codes() {
    let o = harmap(&["verify", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let o = harmap(&["verify", "permutable"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["suite"], "permutable");
    let checks = report["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for key in ["name", "passed", "measured", "threshold", "paper_ref"] {
            assert!(c.get(key).is_some(), "{key} missing");
        }
    }
}

#[test]
fn polynomial_suite_records_the_origin_discrepancy() {
    let o = harmap(&["verify", "polynomial"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let d = report["discrepancies"].as_array().unwrap();
    assert!(d.iter().any(|d| d["name"] == "empty_julia_origin"));
}

#[test]
fn growth_profiles() {
    let o = harmap(&["growth", "--h", "exp(z)", "--radii", "10,1.5,12"]);
    assert!(o.status.success());
    let p: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let order = p["order_estimate"].as_f64().unwrap();
    assert!((order - 1.0).abs() <= 0.05, "{order}");
    let o = harmap(&["growth", "--h", "z^3", "--radii", "10,10,12"]);
    let p: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(p["order_estimate"].as_f64().unwrap() < 0.25);
    assert_eq!(
        harmap(&["growth", "--h", "exp(z)", "--radii", "0,1.5,12"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        harmap(&["growth", "--h", "exp(z", "--radii", "1,1.5,12"]).status.code(),
        Some(2)
    );
}

#[test]
fn config_errors_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, "{\n  \"map\": \"strict-containment\",\n  \"colour\": 1\n}").unwrap();
    let o = harmap(&[
        "render",
        "--config",
        path(&cfg),
        "--out",
        path(&dir.path().join("x.ppm")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(harmap(&["render", "--preset", "nope"]).status.code(), Some(2));
}
