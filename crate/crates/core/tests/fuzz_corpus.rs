// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Replays the checked-in fuzz corpus through the parsers and throws random
//! input at them, with the same assertions as the fuzz targets.

use std::fs;
use std::path::{Path, PathBuf};

use driven_ising::config::parse_config;
use driven_ising::observable::{parse_observables, Observable};
use proptest::prelude::*;

fn corpus(target: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut files: Vec<PathBuf> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(!files.is_empty(), "empty corpus in {}", dir.display());
    files
}

fn check_config(text: &str) -> bool {
    match parse_config(text) {
        Ok(cfg) => {
            assert_eq!(cfg.state.n_sites(), cfg.model.n_sites());
            assert!(cfg.model.jumps().iter().all(|j| j.rate >= 0.0 && j.site < cfg.model.n_sites()));
            assert_eq!(cfg.run.times().len(), cfg.run.n_times);
            true
        }
        Err(e) => {
            assert!(!e.to_string().is_empty());
            false
        }
    }
}

fn check_observables(text: &str) {
    if let Ok(list) = parse_observables(text) {
        for o in list {
            let again: Observable = o.to_string().parse().expect("display output parses");
            assert_eq!(again, o);
        }
    }
}

#[test]
fn config_corpus() {
    let mut accepted = 0;
    for path in corpus("config_parse") {
        let ok = check_config(&fs::read_to_string(&path).unwrap());
        let name = path.file_name().unwrap().to_str().unwrap();
        if name == "malformed.toml" || name == "negative_rate.toml" {
            assert!(!ok, "{name} should be rejected");
        } else {
            assert!(ok, "{name} should parse");
            accepted += 1;
        }
    }
    assert!(accepted >= 5);
}

#[test]
fn observable_corpus() {
    for path in corpus("observable_parse") {
        check_observables(&String::from_utf8_lossy(&fs::read(&path).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn random_config_text(text in "[\\[\\]a-z_=\"0-9., \\n#-]{0,200}") {
        check_config(&text);
    }

    #[test]
    fn mutated_config(pos in 0usize..400, byte in any::<u8>()) {
        let base = include_str!("../../../configs/noisy_ring.toml");
        let mut bytes = base.as_bytes().to_vec();
        let pos = pos % bytes.len();
        bytes[pos] = byte;
        if let Ok(text) = std::str::from_utf8(&bytes) {
            check_config(text);
        }
    }

    #[test]
    fn random_observable_text(text in "[xyzXYZq@0-9,; \\t-]{0,40}") {
        check_observables(&text);
    }
}
