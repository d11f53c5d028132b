use std::path::Path;
use std::process::{Command, Output};

use blaschke::norms::{lp_norm, Exponent};
use blaschke::params::BlaschkeParams;
use blaschke::series::{CoefficientSeries, Engine};

fn blaschke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blaschke"))
        .args(args)
        .env_remove("BLASCHKE_MAX_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn footer<'a>(csv: &'a str, key: &str) -> &'a str {
    csv.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .flat_map(|l| l.split(','))
        .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no footer key {key}"))
}

#[test]
fn coefficients_of_the_square() {
    let csv = stdout(&blaschke(&["coeffs", "--lambda", "1/2", "--n", "2", "--kmax", "2"]));
    assert_eq!(csv.lines().next(), Some("k,value,abs_error,engine"));
    let rows = data_rows(&csv);
    let values: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(values, vec![0.25, -0.75, 0.1875]);
    assert!(rows.iter().all(|r| r[3] == "exact"));
}

#[test]
fn two_norm_is_one() {
    let csv = stdout(&blaschke(&["norms", "--lambda", "1/2", "--n", "64", "--p", "2"]));
    let v: f64 = data_rows(&csv)[0][1].parse().unwrap();
    assert!((v - 1.0).abs() <= 1e-8);
}

#[test]
fn sup_norm_scaling_slope() {
    let csv = stdout(&blaschke(&[
        "scaling", "--lambda", "1/2", "--p", "inf", "--grid", "128:8192",
    ]));
    assert_eq!(csv.lines().next(), Some("n,norm,log_n,log_norm"));
    assert_eq!(data_rows(&csv).len(), 7);
    let slope: f64 = footer(&csv, "slope").parse().unwrap();
    let theory: f64 = footer(&csv, "theory").parse().unwrap();
    assert!((slope + 1.0 / 3.0).abs() <= 0.03);
    assert_eq!(theory, -1.0 / 3.0);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let dir = d.path().to_str().unwrap();
        for args in [
            vec!["coeffs", "--lambda", "3/4", "--n", "40", "--engine", "fft"],
            vec!["regions", "--lambda", "1/2", "--n", "300", "--p", "3/2"],
            vec!["weyl", "--lambda", "1/2", "--n", "4096"],
        ] {
            let mut a = args.clone();
            a.extend(["--output-dir", dir, "--svg"]);
            stdout(&blaschke(&a));
        }
    }
    for name in [
        "coeffs.csv",
        "coeffs.svg",
        "regions.csv",
        "regions.svg",
        "weyl.csv",
        "weyl.svg",
    ] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name}");
    }
}

fn read_series(path: &Path, params: BlaschkeParams) -> CoefficientSeries {
    let text = std::fs::read_to_string(path).unwrap();
    let values = data_rows(&text).iter().map(|r| r[1].parse().unwrap()).collect();
    CoefficientSeries {
        params,
        engine: Engine::Fft,
        values,
        achieved_abs_error: 0.0,
        wide: None,
        max_imag: 0.0,
    }
}

#[test]
fn csv_round_trip_reproduces_norms() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    stdout(&blaschke(&[
        "coeffs",
        "--lambda",
        "1/3",
        "--n",
        "200",
        "--output-dir",
        d,
    ]));
    let params = BlaschkeParams::from_fraction(1, 3, 200).unwrap();
    let reread = read_series(&dir.path().join("coeffs.csv"), params.clone());
    let memory = blaschke::engines::coeff_series_auto(&params, params.default_kmax()).unwrap();
    for p in ["1", "3/2", "2", "6", "inf"] {
        let p: Exponent = p.parse().unwrap();
        let a = lp_norm(&reread, &p).unwrap().value;
        let b = lp_norm(&memory, &p).unwrap().value;
        assert!((a - b).abs() <= 1e-12, "p = {p}: {a} vs {b}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "command = \"coeffs\"\nlambda = \"1/2\"\nn = 2\nkmax = 5\n").unwrap();
    let csv = stdout(&blaschke(&["--config", cfg.to_str().unwrap()]));
    assert_eq!(data_rows(&csv).len(), 6);
    let csv = stdout(&blaschke(&["--config", cfg.to_str().unwrap(), "coeffs", "--kmax", "2"]));
    assert_eq!(data_rows(&csv).len(), 3);
}

#[test]
fn predict_and_regions_tables() {
    let csv = stdout(&blaschke(&[
        "predict",
        "--lambda",
        "1/2",
        "--n",
        "512",
        "--k",
        "1500,1536",
    ]));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][6], "1");
    let csv = stdout(&blaschke(&["regions", "--lambda", "1/2", "--n", "729"]));
    assert_eq!(footer(&csv, "boundaries"), "121 234 252 2178 2196 4374");
    let mass: f64 = data_rows(&csv).iter().map(|r| r[4].parse::<f64>().unwrap()).sum();
    assert!((mass - 1.0).abs() <= 1e-8);
}

#[test]
fn exit_codes() {
    let code = |out: Output| out.status.code().unwrap();
    assert_eq!(code(blaschke(&["coeffs", "--lambda", "5/4", "--n", "3"])), 2);
    assert_eq!(code(blaschke(&["coeffs", "--n", "3"])), 2);
    assert_eq!(code(blaschke(&["scaling", "--lambda", "1/2", "--grid", "8:64"])), 3);
    assert_eq!(
        code(blaschke(&["weyl", "--lambda", "1/2", "--n", "4096", "--j", "0"])),
        3
    );
    assert_eq!(code(blaschke(&["coeffs", "--lambda", "1/2", "--n", "3", "--svg"])), 2);
    let file = tempfile::NamedTempFile::new().unwrap();
    let under_file = file.path().join("sub");
    assert_eq!(
        code(blaschke(&[
            "coeffs",
            "--lambda",
            "1/2",
            "--n",
            "3",
            "--output-dir",
            under_file.to_str().unwrap()
        ])),
        4
    );
    assert_eq!(code(blaschke(&["--config", "/nonexistent/run.toml"])), 4);

    let out = Command::new(env!("CARGO_BIN_EXE_blaschke"))
        .args(["coeffs", "--lambda", "1/2", "--n", "3"])
        .env("BLASCHKE_MAX_BITS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("BLASCHKE_MAX_BITS"));
}
