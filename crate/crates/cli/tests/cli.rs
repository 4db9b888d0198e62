use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use admire_core::{read_pgm, write_pgm, GrayImage};

fn admire(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_admire"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn fixture() -> GrayImage {
    GrayImage::from_fn(48, 40, |r, c| ((r * 5 + c * 3 + (r * c) % 7) % 256) as u8).unwrap()
}

fn save(dir: &Path, name: &str, img: &GrayImage) -> PathBuf {
    let p = dir.join(name);
    write_pgm(img, &p).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn evaluate_against_itself_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let p = save(dir.path(), "a.pgm", &fixture());
    let out = admire(&["evaluate", s(&p), s(&p)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rmse=0.0000"), "{text}");
    assert!(text.contains("rmse_ci=0.0000"), "{text}");
}

#[test]
fn evaluate_csv_has_header() {
    let dir = tempfile::tempdir().unwrap();
    let p = save(dir.path(), "a.pgm", &fixture());
    let out = admire(&["evaluate", s(&p), s(&p), "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rmse,rmse_ci,tv_before,tv_after"));
    assert!(lines.next().unwrap().starts_with("0.0000,0.0000,"));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let p = save(dir.path(), "a.pgm", &fixture());
    let a = dir.path().join("a1.pgm");
    let b = dir.path().join("a2.pgm");
    for o in [&a, &b] {
        let out = admire(&["simulate", s(&p), s(o), "--seed", "1"]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_ne!(read_pgm(&a).unwrap(), fixture());
}

#[test]
fn correct_without_denoise_writes_output_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = save(dir.path(), "a.pgm", &fixture());
    let o = dir.path().join("o.pgm");
    let map = dir.path().join("s.csv");
    let out = admire(&["correct", s(&p), s(&o), "--no-denoise", "--s-map", s(&map)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.starts_with("# admire correct"), "{text}");
    assert!(text.contains("s_max=8") && text.contains("stride=4") && text.contains("denoise=off"));
    assert!(text.contains("s_histogram="));
    let img = read_pgm(&o).unwrap();
    assert_eq!((img.width(), img.height()), (48, 40));
    let csv = std::fs::read_to_string(&map).unwrap();
    assert!(csv.starts_with("row,col,s\n"));
    // 11 x 9 patch origins
    assert_eq!(csv.lines().count(), 1 + 11 * 9);
}

#[test]
fn correct_with_denoise_prints_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let p = save(dir.path(), "a.pgm", &fixture());
    let o = dir.path().join("o.pgm");
    let out = admire(&[
        "correct",
        s(&p),
        s(&o),
        "--ti",
        "5",
        "--tj",
        "20",
        "--orientation",
        "rows",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(
        text.contains("ti=5 tj=20") && text.contains("orientation=rows"),
        "{text}"
    );
}

#[test]
fn correct_requires_thresholds_when_denoising() {
    let dir = tempfile::tempdir().unwrap();
    let p = save(dir.path(), "a.pgm", &fixture());
    let o = dir.path().join("o.pgm");
    let out = admire(&["correct", s(&p), s(&o), "--ti", "5"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("--tj"));
    assert!(!o.exists());
}

#[test]
fn baseline_reports_clipping() {
    let dir = tempfile::tempdir().unwrap();
    let p = save(dir.path(), "a.pgm", &fixture());
    let o = dir.path().join("o.pgm");
    let out = admire(&["baseline", s(&p), s(&o)]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("clipped_pixels="));
    assert!(o.exists());
}

#[test]
fn missing_and_malformed_inputs_fail_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("o.pgm");
    let missing = dir.path().join("nope.pgm");
    let out = admire(&["baseline", s(&missing), s(&o)]);
    assert!(!out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);

    let bad = dir.path().join("bad.pgm");
    std::fs::write(&bad, b"P5\n4 4\n65535\n").unwrap();
    let out = admire(&["baseline", s(&bad), s(&o)]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("admire: error:"), "{err}");
}

#[test]
fn invalid_parameters_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = save(dir.path(), "a.pgm", &fixture());
    let o = dir.path().join("o.pgm");
    let out = admire(&["correct", s(&p), s(&o), "--no-denoise", "--s-step", "0"]);
    assert!(!out.status.success());
    let out = admire(&["simulate", s(&p), s(&o), "--alpha", "1.5"]);
    assert!(!out.status.success());
}

#[test]
fn bench_emits_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = save(dir.path(), "toy.pgm", &fixture());
    let out = admire(&[
        "bench",
        s(&p),
        "--seed-from",
        "1",
        "--seed-to",
        "2",
        "--ti",
        "5",
        "--tj",
        "20",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "image,method,rmse,rmse_ci,tv_before,tv_after,s_histogram,wall_ms"
    );
    assert_eq!(lines.len(), 1 + 2 * 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha=0.1"));
}
