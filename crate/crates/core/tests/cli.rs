use std::path::Path;
use std::process::{Command, Output};

fn icrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icrc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/ldc")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn rates_row() {
    let out = stdout(&icrc(&["rates", "--snr-db", "20", "--inr-db", "10", "--cb", "1", "--phases", "0,0,0,0"]));
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), icrc::sweep::RunRecord::COLUMNS);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    let field = |name: &str| -> f64 { rows[0][headers.iter().position(|h| h == name).unwrap()].parse().unwrap() };
    assert!((field("r_sym") - 3.392).abs() < 1e-3);
    assert!((field("c_bar") - 5.328).abs() < 1e-3);
    assert!((field("gap") - 1.936).abs() < 1e-3);
}

#[test]
fn rates_without_cooperation_is_within_contract() {
    let out = stdout(&icrc(&["rates", "--snr-db", "20", "--inr-db", "10", "--cb", "0", "--phases", "0,0,0,0", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let gap = v[0]["gap"].as_f64().unwrap();
    assert!((0.0..=3.0).contains(&gap));
}

#[test]
fn usage_and_input_errors_exit_nonzero() {
    let missing = icrc(&["rates", "--snr-db", "20", "--cb", "1"]);
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--inr-db"));
    let bad = icrc(&["rates", "--snr-db", "0", "--inr-db", "10", "--cb", "1"]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("snr"));
    assert!(!icrc(&["ldc", "search", "--n", "5", "--m", "2", "--k", "1"]).status.success());
}

#[test]
fn single_point_sweep_matches_rates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = icrc(&[
        "gap-sweep", "--snr-db", "20", "--inr-db", "10", "--cb", "1", "--phases", "0,0,0,0", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let rates = stdout(&icrc(&["rates", "--snr-db", "20", "--inr-db", "10", "--cb", "1", "--phases", "0,0,0,0"]));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), rates);
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["points"], 1);
    assert_eq!(summary["within_contract"], true);
}

#[test]
fn corrupted_outer_bound_fails_the_sweep() {
    let o = icrc(&[
        "gap-sweep", "--snr-db", "10:20:10", "--inr-db", "10", "--cb", "0", "--phase-samples", "2",
        "--corrupt-outer-bound", "4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(summary["violation"].is_object());
}

#[test]
fn gdof_csv_and_plot_files() {
    let out = stdout(&icrc(&["gdof", "--alpha", "0.6667", "--kappa", "0.3333"]));
    let row = out.lines().nth(1).unwrap();
    let d: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((d - 5.0 / 6.0).abs() < 1e-3);

    let out = stdout(&icrc(&["gdof", "--alpha", "1", "--kappa", "0:0.5:0.25"]));
    assert!(out.lines().skip(1).all(|l| l.contains(",true,")));

    let dir = tempfile::tempdir().unwrap();
    stdout(&icrc(&[
        "gdof", "--alpha", "0.5,2", "--kappa", "0:1:0.05", "--plot-dir", dir.path().to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(dir.path().join("gdof_alpha_0.5.dat")).unwrap();
    let pts: Vec<(f64, f64)> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split_whitespace().map(|x| x.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    assert_eq!(pts.len(), 21);
    // kink at kappa = 1/2
    assert_eq!(pts[0].1, 0.5);
    assert_eq!(pts[10].1, 1.0);
    assert_eq!(pts[20].1, 1.0);
    assert!(dir.path().join("gdof_alpha_2.dat").exists());
}

#[test]
fn ldc_commands() {
    let run: serde_json::Value =
        serde_json::from_str(&stdout(&icrc(&["ldc", "run", &fixture("fig2_optimal.json")]))).unwrap();
    assert_eq!(run["report"]["sum_rate"], 5);
    assert_eq!(run["report"]["decode_errors"], serde_json::json!([0, 0]));

    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let search: serde_json::Value = serde_json::from_str(&stdout(&icrc(&[
        "ldc", "search", "--n", "3", "--m", "2", "--k", "1", "--out", w.to_str().unwrap(),
    ])))
    .unwrap();
    assert_eq!(search["best_sum"], 5);
    assert_eq!(search["best_sym"], 2.5);
    let scheme = icrc::ldc::SchemeFile::load(&w).unwrap().to_scheme().unwrap();
    assert!(icrc::ldc::check_decodable(&scheme));
    assert_eq!(scheme.r1() + scheme.r2(), 5);

    let r1 = |mode: &str| -> u64 {
        let v: serde_json::Value =
            serde_json::from_str(&stdout(&icrc(&["ldc", "scenario", "--mode", mode]))).unwrap();
        v["r1"].as_u64().unwrap()
    };
    assert_eq!(r1("one_round_quantize"), 2);
    assert_eq!(r1("decode_forward"), 3);
}
