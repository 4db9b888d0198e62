//! Shared fixtures for the criterion benchmarks.

use std::path::PathBuf;

use admire_core::{read_pgm, GrayImage};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/testdata")
}

/// Loads a bundled 256x256 test image by stem (`camera`, `astronaut`).
pub fn fixture(name: &str) -> GrayImage {
    let path = fixture_dir().join(format!("{name}.pgm"));
    read_pgm(&path).unwrap_or_else(|e| panic!("loading fixture: {e}"))
}
