use std::process::{Command, Output};

const SQUARE: &str = r#"{"family":"square","params":{"V0":1,"x0":1}}"#;
const DELTA: &str = r#"{"family":"delta","params":{"v0":2}}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scatter1d")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn amplitudes_square_csv() {
    let o = run(&["amplitudes", "--potential", SQUARE, "--kappa", "1:3:3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, rows) = csv_rows(&stdout(&o));
    assert_eq!(h[0], "kappa_re");
    assert_eq!(h.last().unwrap(), "unitarity_defect");
    assert_eq!(rows.len(), 3);
    for (t, r) in column(&h, &rows, "T").into_iter().zip(column(&h, &rows, "R")) {
        assert!((t + r - 1.0).abs() < 1e-10);
    }
}

#[test]
fn amplitudes_delta_half_transmission() {
    let o = run(&["amplitudes", "--potential", DELTA, "--kappa", "1:1:1"]);
    let (h, rows) = csv_rows(&stdout(&o));
    assert!((column(&h, &rows, "T")[0] - 0.5).abs() < 1e-12);
}

#[test]
fn configuration_errors_exit_2() {
    assert_eq!(run(&["amplitudes", "--potential", SQUARE, "--kappa", "1:3:0"]).status.code(), Some(2));
    assert_eq!(run(&["amplitudes", "--potential", "{\"family\":\"nope\"}", "--kappa", "1:2:2"]).status.code(), Some(2));
    assert_eq!(run(&["amplitudes", "--kappa", "1:2:2"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--potential", SQUARE, "--rect", "1:0:-1:0"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn solver_failure_lists_kappa() {
    let o = run(&["amplitudes", "--potential", SQUARE, "--kappa", "0:1:2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("kappa = 0"), "{}", stderr(&o));
}

#[test]
fn scan_delta_and_free() {
    let o = run(&["scan", "--potential", DELTA, "--rect", "-1:1:-3:-0.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let zeros = j["zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 1);
    assert!(zeros[0]["re"].as_f64().unwrap().abs() < 1e-8);
    assert!((zeros[0]["im"].as_f64().unwrap() + 1.0).abs() < 1e-8);
    assert_eq!(j["total_winding"], 1);

    let o = run(&["scan", "--potential", r#"{"family":"free"}"#, "--rect", "-1:1:-3:-0.1"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(j["zeros"].as_array().unwrap().is_empty());
}

#[test]
fn scan_beyond_strip_needs_oracle() {
    let pt = r#"{"family":"poschl_teller","params":{"V0":1,"x0":1}}"#;
    let o = run(&["scan", "--potential", pt, "--rect", "-1:1:-3:-0.1"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("Im kappa > -1"), "{}", stderr(&o));
    let o = run(&["scan", "--potential", pt, "--rect", "-1.5:1.5:-2.8:-0.2", "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ims: Vec<f64> = j["zeros"].as_array().unwrap().iter().map(|z| z["im"].as_f64().unwrap()).collect();
    assert_eq!(ims.len(), 6);
    // ordered by imaginary part
    assert!(ims.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn verify_passes_fails_and_is_deterministic() {
    let good = run(&["verify", "--samples", "4", "--seed", "3"]);
    assert_eq!(good.status.code(), Some(0), "{}", stdout(&good));
    assert_eq!(stdout(&good).lines().count(), 7);
    assert!(stdout(&good).lines().all(|l| l.starts_with("PASS")));
    let again = run(&["verify", "--samples", "4", "--seed", "3"]);
    assert_eq!(stdout(&good), stdout(&again));

    let bad = run(&["verify", "--samples", "4", "--seed", "3", "--fault", "corrupt-oracle"]);
    assert_eq!(bad.status.code(), Some(1));
    let failed: Vec<_> = stdout(&bad).lines().filter(|l| l.starts_with("FAIL")).map(str::to_string).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].contains("oracle_vs_solver"));
}

#[test]
fn compare_methods() {
    let o = run(&["compare", "--potential", SQUARE, "--kappa", "5:5:1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, rows) = csv_rows(&stdout(&o));
    assert!(column(&h, &rows, "err_wkb")[0] <= 1e-12);

    let born1 = |v0: f64| {
        let p = format!(r#"{{"family":"square","params":{{"V0":{v0},"x0":1}}}}"#);
        let o = run(&["compare", "--potential", &p, "--kappa", "2:2:1"]);
        let (h, rows) = csv_rows(&stdout(&o));
        column(&h, &rows, "err_born1")[0]
    };
    let ratio = born1(0.02) / born1(0.01);
    assert!((ratio - 4.0).abs() < 0.4, "{ratio}");

    let gauss = r#"{"family":"gaussian","params":{"V0":1,"x0":1}}"#;
    let o = run(&["compare", "--potential", gauss, "--kappa", "10:10:1"]);
    let (h, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows[0][2], "solver");
    assert!(column(&h, &rows, "err_wkb")[0] < 1e-2);

    let shifted_exp = r#"{"family":"exponential","params":{"V0":1,"x0":1},"displacement":0.5}"#;
    assert_eq!(run(&["compare", "--potential", shifted_exp, "--kappa", "1:2:2"]).status.code(), Some(5));
}

#[test]
fn compose_matches_direct() {
    let pair = r#"{"family":"composite","parts":[
        {"family":"square","params":{"V0":1,"x0":0.5},"displacement":-1.5},
        {"family":"square","params":{"V0":1,"x0":0.5},"displacement":1.5}]}"#;
    let o = run(&["compose", "--potential", pair, "--kappa", "0.5:4:5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, rows) = csv_rows(&stdout(&o));
    assert!(column(&h, &rows, "max_error").iter().all(|&e| e < 1e-8));
    assert_eq!(run(&["compose", "--potential", SQUARE, "--kappa", "1:2:2"]).status.code(), Some(2));
}

#[test]
fn output_files_round_trip_and_json_keys_ordered() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("square.json");
    std::fs::write(&cfg, SQUARE).unwrap();
    let csv_path = dir.path().join("a.csv");
    let json_path = dir.path().join("a.json");
    let cfg = cfg.to_str().unwrap();
    let base = ["amplitudes", "--potential", cfg, "--kappa", "0.7-0.2i:2.9+0.1i:4", "--oracle"];
    let o = run(&[&base[..], &["--out", csv_path.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    run(&[&base[..], &["--format", "json", "--out", json_path.to_str().unwrap()]].concat());

    let (h, rows) = csv_rows(&std::fs::read_to_string(&csv_path).unwrap());
    let text = std::fs::read_to_string(&json_path).unwrap();
    let j: serde_json::Value = serde_json::from_str(&text).unwrap();
    for (i, row) in rows.iter().enumerate() {
        for (k, cell) in h.iter().zip(row) {
            // bit-exact agreement between the two formats
            assert_eq!(cell.parse::<f64>().unwrap().to_bits(), j[i][k].as_f64().unwrap().to_bits(), "{k}");
        }
    }
    let first = text.lines().nth(1).unwrap();
    let pos: Vec<usize> = h.iter().map(|k| first.find(&format!("\"{k}\"")).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    // repeated runs are identical
    let again = dir.path().join("b.csv");
    run(&[&base[..], &["--out", again.to_str().unwrap()]].concat());
    assert_eq!(std::fs::read(&csv_path).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn jobs_do_not_change_output() {
    let g = r#"{"family":"gaussian","params":{"V0":1,"x0":1}}"#;
    let one = run(&["amplitudes", "--potential", g, "--kappa", "0.5:5:9", "--jobs", "1"]);
    let four = run(&["amplitudes", "--potential", g, "--kappa", "0.5:5:9", "--jobs", "4"]);
    assert_eq!(stdout(&one), stdout(&four));
}
