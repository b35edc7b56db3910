use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn polyarc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyarc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_v(path: &Path) {
    let mut text = String::from("x,y\n");
    for j in 0..=20 {
        text += &format!("{},{}\n", 3 * j.min(10), 3 * (j - 10).max(0));
    }
    std::fs::write(path, text).unwrap();
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn compress_v_shape_both_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("v.csv");
    write_v(&input);
    for algo in ["jump", "dp"] {
        let out = dir.path().join(format!("{algo}.json"));
        let svg = dir.path().join(format!("{algo}.svg"));
        let o = polyarc(&[
            "compress",
            "--input",
            input.to_str().unwrap(),
            "--tolerance",
            "2",
            "--algorithm",
            algo,
            "--output",
            out.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
            "--stats",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let doc = read_json(&out);
        assert_eq!(doc["totals"]["penalty"], 4);
        let prims = doc["primitives"].as_array().unwrap();
        assert_eq!(prims.len(), 2);
        assert_eq!(prims[0]["type"], "segment");
        assert_eq!(prims[0]["end_index"], 10);
        assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
        assert!(String::from_utf8_lossy(&o.stderr).contains("segment fits"));
    }
}

#[test]
fn compress_geojson_arc_with_tables() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.geojson");
    let coords: Vec<String> = (0..=18)
        .map(|j| {
            let a = std::f64::consts::PI - (j as f64) * 5f64.to_radians();
            format!("[{},{}]", a.cos(), a.sin())
        })
        .collect();
    std::fs::write(
        &input,
        format!(
            r#"{{"type":"LineString","coordinates":[{}]}}"#,
            coords.join(",")
        ),
    )
    .unwrap();
    let out = dir.path().join("c.json");
    let tables = dir.path().join("t.csv");
    let o = polyarc(&[
        "compress",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "geojson",
        "--tolerance",
        "0.01",
        "--output",
        out.to_str().unwrap(),
        "--tables",
        tables.to_str().unwrap(),
        "--trace",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc = read_json(&out);
    let prims = doc["primitives"].as_array().unwrap();
    assert_eq!(prims.len(), 1);
    assert_eq!(prims[0]["type"], "arc");
    assert!((prims[0]["radius"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    let t = std::fs::read_to_string(&tables).unwrap();
    assert!(t.starts_with("vertex,fw_seg,fw_arc,bw_seg,bw_arc"));
    assert_eq!(t.lines().count(), 20);
    assert!(String::from_utf8_lossy(&o.stderr).contains("level"));
}

#[test]
fn loose_tables_and_no_monotone_check_agree() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.csv");
    let g = polyarc(&[
        "generate",
        "arcs",
        "--count",
        "5",
        "--points",
        "16",
        "--output",
        input.to_str().unwrap(),
    ]);
    assert!(g.status.success());
    let run = |extra: &[&str]| {
        let mut args = vec![
            "compress",
            "--input",
            input.to_str().unwrap(),
            "--tolerance",
            "0.06",
        ];
        args.extend_from_slice(extra);
        let o = polyarc(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
        doc["totals"]["penalty"].as_u64().unwrap()
    };
    let base = run(&[]);
    assert_eq!(run(&["--loose-tables"]), base);
    assert_eq!(run(&["--algorithm", "dp", "--loose-tables"]), base);
    assert!(run(&["--monotone-arc-check", "off"]) <= base);
}

#[test]
fn generate_is_deterministic() {
    let a = polyarc(&[
        "generate", "zigzag", "--count", "4", "--points", "8", "--seed", "7",
    ]);
    let b = polyarc(&[
        "generate", "zigzag", "--count", "4", "--points", "8", "--seed", "7",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(
        text.lines().filter(|l| !l.starts_with('x')).count(),
        4 * 8 + 1
    );
}

#[test]
fn bench_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let svg = dir.path().join("b.svg");
    let o = polyarc(&[
        "bench",
        "zigzag",
        "--sizes",
        "8,10",
        "--repeats",
        "1",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 5);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
}

#[test]
fn verify_passes() {
    let o = polyarc(&["verify", "--seed", "3", "--count", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("0 failures"));
}

#[test]
fn input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "x,y\n0,0\n1,oops\n").unwrap();
    let o = polyarc(&[
        "compress",
        "--input",
        bad.to_str().unwrap(),
        "--tolerance",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let missing = dir.path().join("missing.csv");
    let o = polyarc(&[
        "compress",
        "--input",
        missing.to_str().unwrap(),
        "--tolerance",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));

    let good = dir.path().join("v.csv");
    write_v(&good);
    let o = polyarc(&[
        "compress",
        "--input",
        good.to_str().unwrap(),
        "--tolerance",
        "-1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = polyarc(&[
        "compress",
        "--input",
        good.to_str().unwrap(),
        "--tolerance",
        "1",
        "--min-arc-vertices",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = polyarc(&["generate", "arcs", "--points", "1"]);
    assert_eq!(o.status.code(), Some(1));
}
