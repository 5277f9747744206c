//! End-to-end checks of the command-line surface: file formats, exit codes,
//! and the documented example values.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qace"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmpdir() -> tempfile::TempDir {
    tempfile::tempdir().expect("tempdir")
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).expect("write test input");
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).expect("read output")
}

fn parse_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = read(path);
    let mut header = Vec::new();
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if header.is_empty() {
            header = line.split(',').map(str::to_string).collect();
        } else {
            rows.push(line.split(',').map(|v| v.parse::<f64>().unwrap()).collect());
        }
    }
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("column {name}"))
}

const UNIFORM_PROBS: &str = r#"{"pabx": [[[0.25,0.25],[0.25,0.25]],[[0.25,0.25],[0.25,0.25]]]}"#;

#[test]
fn sweep_ms1_has_metadata_and_expected_columns() {
    let dir = tmpdir();
    let out = dir.path().join("curve.csv");
    let st = run(&[
        "sweep",
        "--family",
        "ms1",
        "--alpha-start",
        "0.1",
        "--alpha-end",
        "1.4",
        "--steps",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let text = read(&out);
    assert!(text.contains("# artifact-version:"));
    assert!(text.contains("# family: ms1"));
    assert!(text.contains("# clamp:"));
    let (header, rows) = parse_csv(&out);
    assert_eq!(
        header,
        [
            "alpha",
            "cace_lb_raw",
            "cace_lb",
            "qace",
            "qace_lb_raw",
            "qace_lb",
            "gap"
        ]
    );
    assert_eq!(rows.len(), 7);
    let qace = col(&header, "qace");
    for row in &rows {
        assert!(row[qace].abs() < 1e-12);
    }
}

#[test]
fn sweep_ms1_with_noise_clamps_quantum_bound_rows() {
    let dir = tmpdir();
    let out = dir.path().join("noisy.csv");
    let delta = format!("{}", 0.802 * std::f64::consts::PI);
    let st = run(&[
        "sweep",
        "--family",
        "ms1",
        "--alpha-start",
        "0.1",
        "--alpha-end",
        "1.4",
        "--steps",
        "12",
        "--v",
        "0.81",
        "--lambda",
        "0.93",
        "--delta",
        &delta,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let (header, rows) = parse_csv(&out);
    let raw = col(&header, "qace_lb_raw");
    let clamped = col(&header, "qace_lb");
    for row in &rows {
        assert!(
            row[raw] < 0.0,
            "raw quantum bound should be negative, got {}",
            row[raw]
        );
        assert_eq!(row[clamped], 0.0);
    }
}

#[test]
fn sweep_emit_probs_roundtrips_through_bounds() {
    let dir = tmpdir();
    let out = dir.path().join("curve.csv");
    let st = run(&[
        "sweep",
        "--family",
        "ms2",
        "--alpha-start",
        "0.3927",
        "--alpha-end",
        "0.785",
        "--steps",
        "4",
        "--emit-probs",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let (header, rows) = parse_csv(&out);
    for row in &rows {
        let mut pabx = [[[0.0_f64; 2]; 2]; 2];
        for x in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    pabx[x][a][b] = row[col(&header, &format!("p{x}{a}{b}"))];
                }
            }
        }
        let probs_path = dir.path().join("row.json");
        write(
            &probs_path,
            &serde_json::json!({ "pabx": pabx }).to_string(),
        );
        let report_path = dir.path().join("report.json");
        let st = run(&[
            "bounds",
            "--input",
            probs_path.to_str().unwrap(),
            "--format",
            "probs",
            "--out",
            report_path.to_str().unwrap(),
        ]);
        assert!(st.status.success());
        let report: serde_json::Value = serde_json::from_str(&read(&report_path)).unwrap();
        let back_c = report["cace_lb_raw"].as_f64().unwrap();
        let back_q = report["qace_lb_raw"].as_f64().unwrap();
        assert!((back_c - row[col(&header, "cace_lb_raw")]).abs() < 1e-9);
        assert!((back_q - row[col(&header, "qace_lb_raw")]).abs() < 1e-9);
    }
}

#[test]
fn bounds_uniform_probs() {
    let dir = tmpdir();
    let input = dir.path().join("uniform.json");
    write(&input, UNIFORM_PROBS);
    let out = dir.path().join("report.json");
    let st = run(&[
        "bounds",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "probs",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let report: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert!((report["cace_lb_raw"].as_f64().unwrap() + 0.75).abs() < 1e-12);
    assert_eq!(report["cace_lb"].as_f64().unwrap(), 0.0);
    assert!((report["qace_lb_raw"].as_f64().unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn bounds_ms2_endpoint_counts() {
    // ideal swap-family table at alpha = pi/8, scaled to 1e8 counts
    let c2 = (std::f64::consts::PI / 8.0).cos().powi(2);
    let n00 = (c2 * 1e8).round() as u64;
    let n10 = 100_000_000 - n00;
    let dir = tmpdir();
    let input = dir.path().join("counts.csv");
    write(
        &input,
        &format!("x,a,b,count\n0,0,0,{n00}\n0,1,0,{n10}\n1,0,1,{n10}\n1,1,1,{n00}\n"),
    );
    let out = dir.path().join("report.json");
    let st = run(&[
        "bounds",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "counts",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let report: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    let expect = std::f64::consts::SQRT_2 / 2.0;
    assert!((report["cace_lb_raw"].as_f64().unwrap() - expect).abs() < 1e-6);
    assert!((report["qace_lb_raw"].as_f64().unwrap() - expect).abs() < 1e-6);
}

#[test]
fn bounds_zero_column_names_the_setting() {
    let dir = tmpdir();
    let input = dir.path().join("counts.csv");
    write(&input, "x,a,b,count\n0,0,0,100\n");
    let out = dir.path().join("report.json");
    let result = run(&[
        "bounds",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "counts",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("x=1"), "stderr: {stderr}");
}

#[test]
fn exit_codes_for_input_errors() {
    let dir = tmpdir();
    let missing = run(&[
        "bounds",
        "--input",
        "/nonexistent/f.csv",
        "--format",
        "counts",
        "--out",
        dir.path().join("o.json").to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(2));

    let input = dir.path().join("counts.csv");
    write(&input, "x,a,b,count\n0,0,0,10\n1,0,0,10\n");
    let low_samples = run(&[
        "mc",
        "--input",
        input.to_str().unwrap(),
        "--samples",
        "10",
        "--seed",
        "1",
        "--out",
        dir.path().join("o.json").to_str().unwrap(),
    ]);
    assert_eq!(low_samples.status.code(), Some(2));

    let bad_range = run(&[
        "sweep",
        "--family",
        "ms2",
        "--alpha-start",
        "0.01",
        "--alpha-end",
        "0.2",
        "--steps",
        "3",
        "--out",
        dir.path().join("o.csv").to_str().unwrap(),
    ]);
    assert_eq!(bad_range.status.code(), Some(2));

    let half_noise = run(&[
        "sweep",
        "--family",
        "ms1",
        "--alpha-start",
        "0.1",
        "--alpha-end",
        "0.2",
        "--steps",
        "2",
        "--v",
        "0.9",
        "--out",
        dir.path().join("o.csv").to_str().unwrap(),
    ]);
    assert_eq!(half_noise.status.code(), Some(2));
}

#[test]
fn oracle_on_point_mass_and_uniform() {
    let dir = tmpdir();
    let pm = dir.path().join("pm.json");
    // f(x)=x, g(a)=a wiring
    write(
        &pm,
        r#"{"pabx": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,1.0]]]}"#,
    );
    let out = dir.path().join("cert.json");
    let st = run(&[
        "oracle",
        "--input",
        pm.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let cert: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert!(cert["feasible"].as_bool().unwrap());
    assert!((cert["min_ace"].as_f64().unwrap() - 1.0).abs() < 1e-7);
    assert!(cert["dominance_ok"].as_bool().unwrap());

    let uni = dir.path().join("uniform.json");
    write(&uni, UNIFORM_PROBS);
    let st = run(&[
        "oracle",
        "--input",
        uni.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let cert: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert!(cert["min_ace"].as_f64().unwrap().abs() < 1e-7);
    let weights: Vec<f64> = cert["witness_weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(weights.len(), 16);
    assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-6);
}

#[test]
fn mc_fixed_seed_is_bit_identical() {
    let dir = tmpdir();
    let input = dir.path().join("counts.csv");
    write(
        &input,
        "x,a,b,count\n0,0,0,400\n0,0,1,30\n0,1,0,80\n0,1,1,490\n1,0,0,210\n1,0,1,180\n1,1,0,350\n1,1,1,260\n",
    );
    let out1 = dir.path().join("mc1.json");
    let out2 = dir.path().join("mc2.json");
    for out in [&out1, &out2] {
        let st = run(&[
            "mc",
            "--input",
            input.to_str().unwrap(),
            "--samples",
            "300",
            "--seed",
            "42",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(st.status.success());
    }
    assert_eq!(read(&out1), read(&out2));
    // different seed changes the report
    let out3 = dir.path().join("mc3.json");
    let st = run(&[
        "mc",
        "--input",
        input.to_str().unwrap(),
        "--samples",
        "300",
        "--seed",
        "43",
        "--out",
        out3.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    assert_ne!(read(&out1), read(&out3));
}

fn synthetic_dataset_file(dir: &Path, family: &str, v: f64, lambda: f64, delta: f64) -> PathBuf {
    // exact model probabilities via sweep --emit-probs, scaled to 1e9 counts
    let alphas: &[f64] = match family {
        "ms1" => &[0.209, 0.393, 0.523, 0.698, 0.785],
        _ => &[0.45, 0.55, 0.65, 0.75],
    };
    let mut points = Vec::new();
    for &alpha in alphas {
        let row = dir.join(format!("row_{alpha}.csv"));
        let st = run(&[
            "sweep",
            "--family",
            family,
            "--alpha-start",
            &alpha.to_string(),
            "--alpha-end",
            &alpha.to_string(),
            "--steps",
            "1",
            "--v",
            &v.to_string(),
            "--lambda",
            &lambda.to_string(),
            "--delta",
            &delta.to_string(),
            "--emit-probs",
            "--out",
            row.to_str().unwrap(),
        ]);
        assert!(
            st.status.success(),
            "{}",
            String::from_utf8_lossy(&st.stderr)
        );
        let (header, rows) = parse_csv(&row);
        let mut counts = [[[0u64; 2]; 2]; 2];
        for x in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let p = rows[0][col(&header, &format!("p{x}{a}{b}"))];
                    counts[x][a][b] = (p * 1e9).round() as u64;
                }
            }
        }
        points.push(serde_json::json!({ "alpha": alpha, "counts": counts }));
    }
    let path = dir.join(format!("dataset_{family}.json"));
    write(&path, &serde_json::json!({ "points": points }).to_string());
    path
}

#[test]
fn fit_same_seedless_inputs_reproduce_file() {
    let dir = tmpdir();
    let delta = 0.802 * std::f64::consts::PI;
    let dataset = synthetic_dataset_file(dir.path(), "ms1", 0.81, 0.93, delta);
    let out1 = dir.path().join("fit1.json");
    let out2 = dir.path().join("fit2.json");
    for out in [&out1, &out2] {
        let st = run(&[
            "fit",
            "--dataset",
            dataset.to_str().unwrap(),
            "--family",
            "ms1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(
            st.status.success(),
            "{}",
            String::from_utf8_lossy(&st.stderr)
        );
    }
    assert_eq!(read(&out1), read(&out2));
    let fit: serde_json::Value = serde_json::from_str(&read(&out1)).unwrap();
    assert!((fit["v"].as_f64().unwrap() - 0.81).abs() < 1e-3);
    assert!((fit["lambda"].as_f64().unwrap() - 0.93).abs() < 1e-3);
    assert!((fit["delta"].as_f64().unwrap() - delta).abs() < 1e-3);
}

#[test]
fn sweep_output_independent_of_worker_count() {
    let dir = tmpdir();
    let args = |out: &Path| {
        vec![
            "sweep".to_string(),
            "--family".into(),
            "ms2".into(),
            "--alpha-start".into(),
            "0.3927".into(),
            "--alpha-end".into(),
            "0.785".into(),
            "--steps".into(),
            "9".into(),
            "--emit-probs".into(),
            "--out".into(),
            out.to_str().unwrap().to_string(),
        ]
    };
    let out1 = dir.path().join("w1.csv");
    let st = bin()
        .args(args(&out1))
        .env("RAYON_NUM_THREADS", "1")
        .status()
        .unwrap();
    assert!(st.success());
    let out4 = dir.path().join("w4.csv");
    let st = bin()
        .args(args(&out4))
        .env("RAYON_NUM_THREADS", "4")
        .status()
        .unwrap();
    assert!(st.success());
    assert_eq!(read(&out1), read(&out4));
}

#[test]
fn single_step_sweep_ignores_end() {
    let dir = tmpdir();
    let out = dir.path().join("one.csv");
    let st = run(&[
        "sweep",
        "--family",
        "ms1",
        "--alpha-start",
        "0.5",
        "--alpha-end",
        "0.5",
        "--steps",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let (_, rows) = parse_csv(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], 0.5);
}
