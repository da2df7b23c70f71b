use std::fs;
use std::path::Path;
use std::process::Command;

use mincomp_cli::doc::{OrbitCountDoc, SeriesDoc, StatsDoc, WeylDoc};
use mincomp_cli::{exit, read_samples_csv, run, stats_from_values};
use sha2::{Digest, Sha256};

struct Outcome {
    code: i32,
    stdout: Vec<u8>,
    stderr: String,
}

impl Outcome {
    fn text(&self) -> String {
        String::from_utf8(self.stdout.clone()).unwrap()
    }
}

fn mincomp(args: &[&str]) -> Outcome {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let argv = std::iter::once("mincomp").chain(args.iter().copied());
    let code = run(argv, &mut stdout, &mut stderr);
    Outcome { code, stdout, stderr: String::from_utf8(stderr).unwrap() }
}

fn ok(args: &[&str]) -> Outcome {
    let out = mincomp(args);
    assert_eq!(out.code, exit::OK, "{args:?}: {}", out.stderr);
    out
}

fn sha(bytes: &[u8]) -> [u8; 32] {
    Sha256::digest(bytes).into()
}

#[test]
fn enumerate_unit_radius_rows() {
    let out = ok(&["enumerate", "--z", "0,1", "--max-norm", "1"]);
    assert_eq!(out.text(), "c,d,a,b,norm_sq,sk,rho,im\n0,1,1,0,1,0,1,1\n1,0,0,-1,1,0,1,1\n");
}

#[test]
fn epsilon_rows_match_max_norm_up_to_the_boundary() {
    // ε = 1 is strict and drops both unit vectors, which sit exactly at Im = 1
    let strict = ok(&["enumerate", "--z", "0,1", "--epsilon", "1"]);
    assert_eq!(strict.text(), "c,d,a,b,norm_sq,sk,rho,im\n");
    let inside = ok(&["enumerate", "--z", "0,1", "--epsilon", "0.999"]);
    let by_norm = ok(&["enumerate", "--z", "0,1", "--max-norm", "1"]);
    assert_eq!(inside.stdout, by_norm.stdout);
    // every point with |v| = 50 at z = i is imprimitive, so the bounds agree
    let e = ok(&["enumerate", "--z", "0,1", "--epsilon", "0.0004"]);
    let t = ok(&["enumerate", "--z", "0,1", "--max-norm", "50"]);
    assert_eq!(e.stdout, t.stdout);
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["enumerate", "--z", "0,1", "--max-norm", "-1"], exit::CONFIG),
        (&["enumerate", "--z", "0,1"], exit::CONFIG),
        (&["enumerate", "--z", "0,1", "--max-norm", "2", "--epsilon", "0.1"], exit::CONFIG),
        (&["enumerate", "--z", "0,-1", "--max-norm", "2"], exit::CONFIG),
        (&["enumerate", "--z", "0;1", "--max-norm", "2"], exit::CONFIG),
        (&["enumerate", "--max-norm", "2", "--workers", "0"], exit::CONFIG),
        (&["enumerate", "--max-norm", "3e9"], exit::OVERFLOW),
        (&["stats", "--max-norm", "0.5"], exit::EMPTY),
        (&["stats", "--max-norm", "10", "--m-list", "0,1"], exit::CONFIG),
        (&["stats", "--max-norm", "10", "--bins", "1"], exit::CONFIG),
        (&["series", "--s", "0.5"], exit::DOMAIN),
        (&["series", "--s", "1,3"], exit::DOMAIN),
        (&["series", "--s", "2,1", "--laplacian-check", "--trunc", "20"], exit::CONFIG),
        (&["report", "--bins", "1"], exit::CONFIG),
        (&["enumerate", "--max-norm", "2", "--out", "/nonexistent-dir/rows.csv"], exit::OUTPUT),
        (&["orbit-count", "--eps-grid", "0.01,0.02"], exit::CONFIG),
        (&["frobnicate"], exit::CONFIG),
    ];
    for (args, code) in cases {
        let out = mincomp(args);
        assert_eq!(out.code, *code, "{args:?}: {}", out.stderr);
        assert!(!out.stderr.is_empty(), "{args:?} printed no message");
    }
    assert_eq!(mincomp(&["--help"]).code, exit::OK);
}

#[test]
fn report_path_must_be_writable() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, b"x").unwrap();
    let out = mincomp(&["report", "--max-norm", "20", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.code, exit::OUTPUT, "{}", out.stderr);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mincomp");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let good = status(&["enumerate", "--max-norm", "1"]);
    assert_eq!(good.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&good.stdout).starts_with("c,d,a,b,"));
    assert_eq!(status(&["enumerate", "--max-norm", "-1"]).status.code(), Some(2));
    assert_eq!(status(&["enumerate", "--max-norm", "3e9"]).status.code(), Some(3));
    assert_eq!(status(&["stats", "--max-norm", "0.5"]).status.code(), Some(4));
    assert_eq!(status(&["series", "--s", "0.5"]).status.code(), Some(5));
    assert_eq!(status(&["enumerate", "--max-norm", "1", "--out", "/nonexistent-dir/x"]).status.code(), Some(6));
}

#[test]
fn csv_feeds_stats_back_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let csv_arg = csv.to_str().unwrap();
    for z in ["0,1", "0.5,0.8660254", "-0.3,1.7"] {
        ok(&["enumerate", "--z", z, "--max-norm", "120", "--out", csv_arg]);
        let direct: StatsDoc = serde_json::from_slice(&ok(&["stats", "--z", z, "--max-norm", "120"]).stdout).unwrap();
        let replay: StatsDoc =
            serde_json::from_slice(&ok(&["stats", "--z", z, "--max-norm", "120", "--input", csv_arg]).stdout).unwrap();
        assert_eq!(direct.n, replay.n);
        assert_eq!(direct.histogram, replay.histogram);
        assert_eq!(direct.count_prediction, replay.count_prediction);
        assert!((direct.discrepancy_sk - replay.discrepancy_sk).abs() <= 1e-12);
        assert!((direct.discrepancy_rho - replay.discrepancy_rho).abs() <= 1e-12);
        for (a, b) in direct.weyl.iter().zip(&replay.weyl) {
            assert_eq!(a.m, b.m);
            assert!((a.re - b.re).abs() <= 1e-12 && (a.im - b.im).abs() <= 1e-12);
            assert!((a.normalized - b.normalized).abs() <= 1e-12);
        }

        // and through the library, from parsed rows
        let rows = read_samples_csv(fs::read(&csv).unwrap().as_slice()).unwrap();
        let sk: Vec<f64> = rows.iter().map(|r| r.sk).collect();
        let rho: Vec<f64> = rows.iter().map(|r| r.rho).collect();
        let y: f64 = z.split(',').nth(1).unwrap().parse().unwrap();
        let lib = stats_from_values(&sk, &rho, y, 120.0 * 120.0, &[1, 2, 3, 4, 5], 50).unwrap();
        assert!((lib.discrepancy_sk - direct.discrepancy_sk).abs() <= 1e-12);
    }
}

#[test]
fn csv_reader_tolerates_missing_final_newline() {
    let text = "c,d,a,b,norm_sq,sk,rho,im\n0,1,1,0,1,0,1,1\n1,0,0,-1,1,0,1,1";
    assert_eq!(read_samples_csv(text.as_bytes()).unwrap().len(), 2);
    assert!(read_samples_csv("c,d\n1,2\n".as_bytes()).is_err());
}

#[test]
fn json_enumeration_matches_csv() {
    let csv = ok(&["enumerate", "--z", "0.25,0.75", "--max-norm", "15"]).stdout;
    let json = ok(&["enumerate", "--z", "0.25,0.75", "--max-norm", "15", "--format", "json"]).stdout;
    let doc: serde_json::Value = serde_json::from_slice(&json).unwrap();
    assert_eq!(doc["schema"], 1);
    let rows = read_samples_csv(csv.as_slice()).unwrap();
    let samples = doc["samples"].as_array().unwrap();
    assert_eq!(rows.len(), samples.len());
    for (row, s) in rows.iter().zip(samples) {
        let parsed: mincomp_cli::doc::SampleRow = serde_json::from_value(s.clone()).unwrap();
        assert_eq!(&parsed, row);
    }
}

#[test]
fn stats_shape_and_hexagonal_trend() {
    let at = |t: &str| -> StatsDoc {
        serde_json::from_slice(&ok(&["stats", "--z", "0.5,0.8660254", "--max-norm", t]).stdout).unwrap()
    };
    let small = at("200");
    let large = at("500");
    assert!(large.discrepancy_sk < small.discrepancy_sk);
    assert_eq!(large.schema, 1);
    assert_eq!(large.weyl.len(), 5);
    assert_eq!(large.histogram.bins, 50);
    assert_eq!(large.histogram.counts.iter().sum::<u64>() as usize, large.n);
    assert_eq!(large.count_prediction.count, 2 * large.n as u64);
    let value: serde_json::Value = serde_json::from_slice(&ok(&["stats", "--max-norm", "30"]).stdout).unwrap();
    let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
    let mut expected = vec![
        "schema",
        "n",
        "discrepancy_sk",
        "discrepancy_rho",
        "weyl",
        "histogram",
        "count_prediction",
    ];
    expected.sort();
    let mut keys = keys;
    keys.sort();
    assert_eq!(keys, expected);
}

#[test]
fn weyl_alias_agrees_with_stats() {
    let stats: StatsDoc = serde_json::from_slice(&ok(&["stats", "--max-norm", "80", "--m-list", "1..3,7"]).stdout).unwrap();
    let weyl: WeylDoc = serde_json::from_slice(&ok(&["weyl", "--max-norm", "80", "--m-list", "1..3,7"]).stdout).unwrap();
    assert_eq!(stats.weyl, weyl.weyl);
    assert_eq!(weyl.weyl.iter().map(|w| w.m).collect::<Vec<_>>(), vec![1, 2, 3, 7]);
    let csv = ok(&["weyl", "--max-norm", "80", "--format", "csv"]).text();
    assert!(csv.starts_with("m,re,im,normalized\n1,"));
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn series_document() {
    let doc: SeriesDoc = serde_json::from_slice(&ok(&["series", "--m", "0", "--s", "2", "--trunc", "300"]).stdout).unwrap();
    let reference = doc.reference.expect("reference at z = i");
    assert!((reference - 2.784201545330791).abs() < 1e-12);
    assert!(doc.value[0] < reference && reference - doc.value[0] < 1e-3);
    assert!(doc.laplacian_check.is_none());
    // no reference off z = i or for complex s
    let off: SeriesDoc = serde_json::from_slice(&ok(&["series", "--z", "0,2", "--s", "2", "--trunc", "100"]).stdout).unwrap();
    assert!(off.reference.is_none());
    let complex: SeriesDoc = serde_json::from_slice(&ok(&["series", "--s", "2,1", "--trunc", "100"]).stdout).unwrap();
    assert!(complex.reference.is_none());
    assert_eq!(complex.s, [2.0, 1.0]);

    let checked: SeriesDoc = serde_json::from_slice(
        &ok(&["series", "--m", "1", "--s", "3", "--trunc", "200", "--laplacian-check", "--h", "1e-3"]).stdout,
    )
    .unwrap();
    let lap = checked.laplacian_check.unwrap();
    assert!(lap.rel_err < 1e-2, "{lap:?}");
    assert_eq!(lap.h, 1e-3);
}

#[test]
fn orbit_count_rows() {
    let doc: OrbitCountDoc =
        serde_json::from_slice(&ok(&["orbit-count", "--eps-grid", "0.01,0.001", "--format", "json"]).stdout).unwrap();
    assert_eq!(doc.rows.len(), 2);
    assert!((doc.limit - 3.0 / std::f64::consts::PI).abs() < 1e-15);
    for r in &doc.rows {
        assert!((r.scaled - r.epsilon * r.count as f64).abs() < 1e-12);
    }
    let csv = ok(&["orbit-count", "--eps-grid", "0.01,0.001"]).text();
    assert_eq!(csv.lines().next(), Some("epsilon,count,scaled"));
}

fn report_hashes(dir: &Path, workers: &str) -> Vec<[u8; 32]> {
    let out = ok(&["report", "--max-norm", "150", "--workers", workers, "--out", dir.to_str().unwrap()]);
    let printed: Vec<String> = out.text().lines().map(String::from).collect();
    assert_eq!(printed.len(), 3);
    printed.iter().map(|p| sha(&fs::read(p).unwrap())).collect()
}

#[test]
fn report_files_are_well_formed_and_reproducible() {
    let root = tempfile::tempdir().unwrap();
    let first = root.path().join("a");
    let hashes = report_hashes(&first, "1");
    for name in ["histogram.svg", "discrepancy.csv", "summary.md"] {
        assert!(first.join(name).is_file());
    }
    let svg = fs::read_to_string(first.join("histogram.svg")).unwrap();
    let tree = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(tree.root_element().tag_name().name(), "svg");
    let rects = tree.descendants().filter(|n| n.has_tag_name("rect")).count();
    assert_eq!(rects, 50 + 1);
    assert!(tree.descendants().any(|n| n.attribute("stroke") == Some("crimson")));

    let csv = fs::read_to_string(first.join("discrepancy.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,n,discrepancy_sk,discrepancy_rho"));
    let last: Vec<&str> = lines.last().unwrap().split(',').collect();
    assert_eq!(last[0], "150");

    assert_eq!(report_hashes(&first, "1"), hashes);
    assert_eq!(report_hashes(&root.path().join("b"), "4"), hashes);
}

#[test]
fn outputs_do_not_depend_on_workers() {
    let commands: &[&[&str]] = &[
        &["enumerate", "--z", "0.3,0.9", "--max-norm", "60", "--chunk", "3"],
        &["enumerate", "--z", "0,1", "--epsilon", "0.001", "--format", "json"],
        &["stats", "--z", "0.5,0.8660254", "--max-norm", "90"],
        &["weyl", "--max-norm", "70"],
        &["orbit-count", "--eps-grid", "0.01,0.002"],
        &["series", "--m", "2", "--s", "2.5,0.5", "--trunc", "60"],
    ];
    for args in commands {
        let reference = sha(&ok(&[args, &["--workers", "1"][..]].concat()).stdout);
        for w in ["2", "4", "8"] {
            assert_eq!(sha(&ok(&[args, &["--workers", w][..]].concat()).stdout), reference, "{args:?} workers {w}");
        }
    }
}
