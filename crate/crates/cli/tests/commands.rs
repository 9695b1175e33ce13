use std::process::Command as Process;

use clap::Parser;
use hbspace::csvfmt::{parse_complex, parse_complex_list};
use hbspace_cli::{execute, Cli};

fn run(args: &[&str]) -> (String, String) {
    let cli = Cli::try_parse_from(std::iter::once("hbspace").chain(args.iter().copied())).unwrap();
    let (mut out, mut notes) = (Vec::new(), Vec::new());
    execute(&cli, &mut out, &mut notes).unwrap();
    (String::from_utf8(out).unwrap(), String::from_utf8(notes).unwrap())
}

fn table(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    (header, lines.map(|l| l.split(',').map(str::to_string).collect()).collect())
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let (header, rows) = table(csv);
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn norms_local_dirichlet_and_trivial() {
    let (csv, _) = run(&["norms", "--trunc", "2000"]);
    let norms = column(&csv, "norm");
    assert_eq!(norms.len(), 2001);
    for (n, v) in norms.iter().enumerate() {
        assert!((v - ((n + 1) as f64).sqrt()).abs() <= 1e-12 * v);
    }
    let (csv, _) = run(&["norms", "--phi", "zero", "--trunc", "50"]);
    assert!(column(&csv, "norm").iter().all(|&v| v == 1.0));
}

#[test]
fn norms_pole_slope() {
    let (csv, _) = run(&["norms", "--phi", "pole:0,3", "--trunc", "10000"]);
    let norms = column(&csv, "norm");
    let slope = (norms[10000].ln() - norms[1000].ln()) / 10f64.ln();
    assert!((slope - 2.5).abs() < 0.05, "{slope}");
}

#[test]
fn reals_round_trip_bit_exact() {
    let (csv, _) = run(&["norms", "--phi", "exp:1,0.5", "--trunc", "300"]);
    let ctx = hbspace::space::HbContext::from_phi(&"exp:1,0.5".parse().unwrap(), 300).unwrap();
    let parsed = column(&csv, "norm");
    assert_eq!(parsed, ctx.monomial_norms());
}

#[test]
fn opnorm_examples() {
    let (csv, _) = run(&["opnorm", "--n", "4,16,64", "--trunc", "256"]);
    let lemma = column(&csv, "lemma_bound");
    let norm = column(&csv, "truncated_norm");
    assert_eq!(column(&csv, "N"), vec![16.0, 64.0, 256.0]);
    for (l, v) in lemma.iter().zip(&norm) {
        assert!(v >= &(l - 1e-6));
    }

    let (csv, _) = run(&["opnorm", "--alpha", "1", "--n", "4,16,64,256", "--trunc", "1024"]);
    let lemma = column(&csv, "lemma_bound");
    assert!(lemma.windows(2).all(|w| w[1] < w[0]));
    assert!(lemma[3] < 0.05);

    let (csv, _) = run(&["opnorm", "--phi", "zero", "--n", "1,5,20", "--trunc", "100"]);
    for v in column(&csv, "lemma_bound").into_iter().chain(column(&csv, "truncated_norm")) {
        assert!((v - 1.0).abs() < 1e-12);
    }
}

#[test]
fn opnorm_custom_matrix_matches_cesaro() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c1.txt");
    let mut text = String::from("# Cesaro order 1\n");
    for n in 0..=16 {
        let row = hbspace::summability::cesaro_row(1.0, n).unwrap();
        let line: Vec<String> = row.weights.iter().map(|w| format!("{:e}", w.re)).collect();
        text.push_str(&line.join(" "));
        text.push('\n');
    }
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let (custom, _) = run(&["opnorm", "--n", "4,16", "--matrix", p, "--trunc", "64"]);
    let (cesaro, _) = run(&["opnorm", "--n", "4,16", "--alpha", "1", "--trunc", "64"]);
    for (a, b) in column(&custom, "truncated_norm").iter().zip(column(&cesaro, "truncated_norm")) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn classify_examples() {
    let (csv, notes) = run(&["classify"]);
    let (header, rows) = table(&csv);
    assert_eq!(header[..5], ["phi", "alpha", "case_i", "case_ii", "case_iii"]);
    assert_eq!(rows[0][2..5], ["true", "false", "false"]);
    assert!(notes.contains("case i only"));

    let (csv, _) = run(&["classify", "--phi", "pole:0,2"]);
    assert!(csv.lines().nth(1).unwrap().starts_with("\"pole:0,2\","));
    assert!(csv.contains(",true,true,"));

    let (csv, notes) = run(&["classify", "--phi", "exp:1,0.5", "--alpha", "3"]);
    assert!(csv.contains(",true,true,true,stretched,"));
    assert!(notes.contains("cases i, ii and iii"));
}

#[test]
fn hayman_table() {
    let (csv, _) = run(&["hayman", "--n", "0,500,5000"]);
    let (header, rows) = table(&csv);
    assert_eq!(header.len(), 6);
    assert_eq!(rows[0][0], "0");
    assert!(rows[0][2..].iter().all(String::is_empty));
    let ratios = column(&csv.lines().filter(|l| !l.starts_with("0,")).collect::<Vec<_>>().join("\n"), "ratio_estimate");
    assert!((ratios[1] - 1.0).abs() < (ratios[0] - 1.0).abs());
    assert!((ratios[1] - 1.0).abs() < 0.2);
}

#[test]
fn cesaro_demo_examples() {
    let dir = tempfile::tempdir().unwrap();
    let sample = dir.path().join("p.txt");
    std::fs::write(&sample, "1, -2+0.5i, 3\n0.25\n").unwrap();
    let s = sample.to_str().unwrap();
    let (csv, _) = run(&["cesaro-demo", "--sample", s, "--nmax", "10"]);
    let d = column(&csv, "distance");
    assert!(d[..3].iter().all(|&x| x > 0.0));
    assert!(d[3..].iter().all(|&x| x == 0.0));

    let (csv, _) = run(&["cesaro-demo", "--alpha", "1", "--degree", "50", "--nmax", "200", "--seed", "7"]);
    let d = column(&csv, "distance");
    assert!(d[200] < d[60]);

    let empty = dir.path().join("zero.txt");
    std::fs::write(&empty, "\n").unwrap();
    let (csv, _) = run(&["cesaro-demo", "--sample", empty.to_str().unwrap(), "--alpha", "2", "--nmax", "5"]);
    assert!(column(&csv, "distance").iter().all(|&x| x == 0.0));
}

#[test]
fn pair_coefficients() {
    let (csv, _) = run(&["pair", "--trunc", "100"]);
    let (header, rows) = table(&csv);
    assert_eq!(header, ["k", "a_k", "b_k"]);
    let tau = (3.0 - 5f64.sqrt()) / 2.0;
    for (k, row) in rows.iter().enumerate().skip(1) {
        let b = parse_complex(&row[2]).unwrap();
        assert!((b.re - (1.0 - tau) * tau.powi(k as i32 - 1)).abs() < 1e-5);
    }
    let a0 = parse_complex(&rows[0][1]).unwrap();
    assert!((a0.re - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-6);
    assert!(parse_complex_list(&rows[0][1]).is_some());
}

#[test]
fn deterministic_for_fixed_seed() {
    let args = ["cesaro-demo", "--alpha", "0.5", "--degree", "20", "--nmax", "30", "--seed", "42"];
    assert_eq!(run(&args), run(&args));
    let other = run(&["cesaro-demo", "--alpha", "0.5", "--degree", "20", "--nmax", "30", "--seed", "43"]);
    assert_ne!(run(&args).0, other.0);
}

#[test]
fn binary_writes_out_file_and_reports_errors() {
    let bin = env!("CARGO_BIN_EXE_hbspace");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("norms.csv");
    let status = Process::new(bin)
        .args(["norms", "--trunc", "10", "--out", path.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 12);

    let out = Process::new(bin)
        .args(["norms", "--out", dir.path().join("missing/x.csv").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));

    let out = Process::new(bin).args(["norms", "--phi", "pole:x"]).output().unwrap();
    assert!(!out.status.success());

    let out = Process::new(bin).args(["opnorm", "--n", "100", "--trunc", "50"]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds --trunc"));
}
