//! Runs the `dppln` binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dppln(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dppln"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, json: serde_json::Value) -> String {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(&json).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn base_config() -> serde_json::Value {
    serde_json::json!({
        "interaction": {"lambda_p_nm": 519.0, "lambda_s_nm": 780.0, "lambda_i_nm": 1551.0,
                        "temperature_c": 25.0, "length_mm": 10.0},
        "geometry": {"single": {"width_um": 10.0, "depth_um": 10.0}}
    })
}

/// Data rows of a CSV with `#` comments and a header line.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn header_value(csv: &str, key: &str) -> f64 {
    csv.lines()
        .filter(|l| l.starts_with('#'))
        .flat_map(|l| l.trim_start_matches('#').split_whitespace())
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing"))
        .parse()
        .unwrap()
}

#[test]
fn design_reports_reference_values() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&dppln(&["design"]))).unwrap();
    let gamma = v["report"]["gamma"].as_f64().unwrap();
    let l1 = v["grating"]["Lambda1_um"].as_f64().unwrap();
    assert!((gamma - 0.9957).abs() < 0.02, "{gamma}");
    assert!((l1 - 4.580).abs() < 0.02 * 4.580, "{l1}");
    assert_eq!(v["report"]["below_cutoff"].as_array().unwrap().len(), 0);
}

#[test]
fn zeroed_increments_are_a_physics_failure() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = serde_json::json!([
        {"wavelength_nm": 519.0, "delta_n_o": 0.0, "delta_n_e": 0.0},
        {"wavelength_nm": 1550.0, "delta_n_o": 0.0, "delta_n_e": 0.0}
    ]);
    fs::write(dir.path().join("zero.json"), zeros.to_string()).unwrap();
    let mut cfg = base_config();
    cfg["material"] = serde_json::json!({"increments_path": "zero.json"});
    let path = write_config(dir.path(), "cfg.json", cfg);
    let o = dppln(&["design", "--config", &path]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("no guided") && err.contains("nm"), "{err}");
}

#[test]
fn energy_violation_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config();
    cfg["interaction"]["lambda_i_nm"] = serde_json::json!(1560.0);
    let path = write_config(dir.path(), "cfg.json", cfg);
    let o = dppln(&["design", "--config", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("energy conservation"));
}

#[test]
fn bad_invocations_exit_one() {
    assert_eq!(dppln(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(dppln(&[]).status.code(), Some(1));
    assert_eq!(
        dppln(&["design", "--config", "/nonexistent.json"])
            .status
            .code(),
        Some(1)
    );

    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config();
    cfg["geometry"] =
        serde_json::json!({"sweep": {"depths_um": [], "widths_um": [10.0], "mode": "grid"}});
    let path = write_config(dir.path(), "empty.json", cfg);
    assert_eq!(dppln(&["sweep", "--config", &path]).status.code(), Some(1));

    // sweep configs are rejected by single-geometry commands
    let mut cfg = base_config();
    cfg["geometry"] =
        serde_json::json!({"sweep": {"depths_um": [8.0], "widths_um": [10.0], "mode": "grid"}});
    let path = write_config(dir.path(), "sweep.json", cfg);
    assert_eq!(dppln(&["design", "--config", &path]).status.code(), Some(1));
}

#[test]
fn paired_sweep_reproduces_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config();
    cfg["geometry"] = serde_json::json!({"sweep": {
        "depths_um": [6.5, 8.0, 10.0, 12.0], "widths_um": [6.0, 8.0, 10.0, 12.0], "mode": "paired"}});
    let path = write_config(dir.path(), "cfg.json", cfg);
    let csv = stdout(&dppln(&["sweep", "--config", &path]));
    assert!(csv
        .lines()
        .any(|l| l == "depth_um,width_um,gamma,Lambda1_um,Lambda2_um,status"));
    let r = rows(&csv);
    let expected = [0.9294, 0.9884, 0.9957, 0.9982];
    assert_eq!(r.len(), 4);
    for (row, want) in r.iter().zip(expected) {
        let g: f64 = row[2].parse().unwrap();
        assert!((g - want).abs() < 0.02, "{row:?}");
    }
    assert_eq!(r[0][0], "6.5");
    assert_eq!(r[0][5], "below_cutoff:idler_o+idler_e");
    assert_eq!(r[2][5], "ok");
}

#[test]
fn gamma_grows_with_depth_at_fixed_width() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config();
    cfg["geometry"] = serde_json::json!({"sweep": {
        "depths_um": [6.5, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0], "widths_um": [10.0], "mode": "grid"}});
    let path = write_config(dir.path(), "cfg.json", cfg);
    let gammas: Vec<f64> = rows(&stdout(&dppln(&["sweep", "--config", &path])))
        .iter()
        .map(|r| r[2].parse().unwrap())
        .collect();
    assert_eq!(gammas.len(), 7);
    assert!(gammas.windows(2).all(|w| w[1] >= w[0]), "{gammas:?}");
}

#[test]
fn infeasible_sweep_rows_do_not_abort() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config();
    cfg["geometry"] =
        serde_json::json!({"sweep": {"depths_um": [10.0], "widths_um": [10.0], "mode": "grid"}});
    cfg["solver"] = serde_json::json!({"cutoff": "strict"});
    cfg["geometry"]["sweep"]["depths_um"] = serde_json::json!([6.5, 10.0]);
    cfg["geometry"]["sweep"]["widths_um"] = serde_json::json!([6.0, 10.0]);
    cfg["geometry"]["sweep"]["mode"] = serde_json::json!("paired");
    let path = write_config(dir.path(), "cfg.json", cfg);
    let r = rows(&stdout(&dppln(&["sweep", "--config", &path])));
    assert_eq!(r.len(), 2);
    assert_eq!(&r[0][2..5], &["", "", ""]);
    assert!(r[0][5].starts_with("failed: no guided"), "{:?}", r[0]);
    assert_eq!(r[1][5], "ok");
}

#[test]
fn single_point_sweep_matches_design() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config();
    cfg["geometry"] =
        serde_json::json!({"sweep": {"depths_um": [10.0], "widths_um": [10.0], "mode": "grid"}});
    let path = write_config(dir.path(), "cfg.json", cfg);
    let row = rows(&stdout(&dppln(&["sweep", "--config", &path]))).remove(0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&dppln(&["design"]))).unwrap();
    let sig6 = dppln_core::export::sig6;
    assert_eq!(row[2], sig6(v["report"]["gamma"].as_f64().unwrap()));
    assert_eq!(row[3], sig6(v["grating"]["Lambda1_um"].as_f64().unwrap()));
    assert_eq!(row[4], sig6(v["grating"]["Lambda2_um"].as_f64().unwrap()));
}

#[test]
fn spectrum_header_and_convergence() {
    let csv = stdout(&dppln(&["spectrum"]));
    let (oe, eo) = (
        header_value(&csv, "fwhm_oe_nm"),
        header_value(&csv, "fwhm_eo_nm"),
    );
    assert!(
        (0.22..=0.36).contains(&oe) && (4.8..=7.9).contains(&eo),
        "{oe} {eo}"
    );
    let r = rows(&csv);
    assert_eq!(r.len(), 2001);
    let centre = r.iter().find(|row| row[0] == "780").unwrap();
    assert_eq!(&centre[1..], &["1", "1"]);

    let coarse = stdout(&dppln(&["spectrum", "--samples", "1001"]));
    assert!((header_value(&coarse, "fwhm_oe_nm") - oe).abs() < 0.01 * oe);
    assert!((header_value(&coarse, "fwhm_eo_nm") - eo).abs() < 0.01 * eo);

    let taylor = stdout(&dppln(&["spectrum", "--taylor", "--half-range-nm", "5"]));
    assert!((header_value(&taylor, "fwhm_oe_nm") - oe).abs() < 0.01 * oe);
}

#[test]
fn grating_writes_pattern_and_fourier_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("artifacts");
    let o = dppln(&["grating", "--out", out.to_str().unwrap()]);
    stdout(&o);
    let csv = fs::read_to_string(out.join("poling_pattern.csv")).unwrap();
    assert!((header_value(&csv, "Lambda0_um") - 4.064).abs() < 0.01);
    assert!((header_value(&csv, "Lambdap_um") - 36.1).abs() < 0.5);
    let xs: Vec<f64> = rows(&csv).iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(xs.windows(2).all(|w| w[1] > w[0]));
    let check: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("fourier_check.json")).unwrap()).unwrap();
    for key in ["c_k1", "c_k2"] {
        let dev = check[key]["relative_deviation"].as_f64().unwrap();
        assert!(dev.abs() < 1e-3, "{key} {dev}");
    }
    assert!(check["c_k1"]["re"].as_f64().unwrap() * check["c_k2"]["re"].as_f64().unwrap() < 0.0);
}

#[test]
fn field_maps_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config();
    cfg["outputs"] = serde_json::json!({"directory": "out", "field_maps": true});
    let path = write_config(dir.path(), "cfg.json", cfg);
    stdout(&dppln(&["design", "--config", &path]));
    for m in ["pump_o", "signal_o", "signal_e", "idler_o", "idler_e"] {
        let text =
            fs::read_to_string(dir.path().join("out").join(format!("field_{m}.csv"))).unwrap();
        assert_eq!(rows(&text).len(), 201 * 201);
    }
    assert!(dir.path().join("out/design.json").exists());
}

#[test]
fn outputs_are_deterministic() {
    for cmd in ["design", "sweep", "spectrum", "grating"] {
        let a = dppln(&[cmd]);
        let b = dppln(&[cmd]);
        assert_eq!(stdout(&a), stdout(&b), "{cmd}");
    }
}

#[test]
fn dumped_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let flags = ["--temperature", "40", "--length-mm", "15"];
    let dumped = stdout(&dppln(&[&["--dump-config"][..], &flags].concat()));
    let path = dir.path().join("dumped.json");
    fs::write(&path, &dumped).unwrap();

    let direct = stdout(&dppln(&[&["design"][..], &flags].concat()));
    let replayed = stdout(&dppln(&["design", "--config", path.to_str().unwrap()]));
    assert_eq!(direct, replayed);
    let again = stdout(&dppln(&[
        "--dump-config",
        "--config",
        path.to_str().unwrap(),
    ]));
    assert_eq!(dumped, again);
    let v: serde_json::Value = serde_json::from_str(&direct).unwrap();
    assert_eq!(v["report"]["interaction"]["temperature_c"], 40.0);
}
