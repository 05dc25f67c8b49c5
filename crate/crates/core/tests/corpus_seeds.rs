//! The fuzz corpus seeds are valid inputs for their decoders.

use std::fs;
use std::path::{Path, PathBuf};

use vtqg::circuit::{parse_circuit, CouplingMap};
use vtqg::harness::{read_results, ExperimentConfig};
use vtqg::noise::NoiseModel;
use vtqg::qpd::FragmentManifest;

fn seeds(target: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| {
            p.file_name()
                .unwrap()
                .to_string_lossy()
                .starts_with("seed_")
        })
        .collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds for {target}");
    files
}

fn text(p: &Path) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn circuit_seeds_parse() {
    for p in seeds("circuit_text") {
        parse_circuit(&text(&p)).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
}

#[test]
fn coupling_seeds_parse() {
    for p in seeds("coupling_json") {
        CouplingMap::from_json(&text(&p)).unwrap();
    }
}

#[test]
fn noise_seeds_parse() {
    for p in seeds("noise_json") {
        NoiseModel::from_json(&text(&p)).unwrap();
    }
}

#[test]
fn config_seeds_parse() {
    for p in seeds("config_json") {
        ExperimentConfig::from_json(&text(&p)).unwrap();
    }
}

#[test]
fn manifest_seeds_parse() {
    for p in seeds("manifest_json") {
        let m = FragmentManifest::from_json(&text(&p)).unwrap();
        assert_eq!(m.circuits().unwrap().len(), m.fragments.len());
    }
}

#[test]
fn results_seeds_parse() {
    for p in seeds("results") {
        read_results(&p).unwrap();
    }
}
