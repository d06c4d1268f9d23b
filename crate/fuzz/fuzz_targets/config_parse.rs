// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use driven_ising::config::parse_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = parse_config(text) {
        // accepted configs must be internally consistent
        assert_eq!(cfg.state.n_sites(), cfg.model.n_sites());
        assert!(cfg.model.jumps().iter().all(|j| j.rate >= 0.0 && j.site < cfg.model.n_sites()));
        assert_eq!(cfg.run.times().len(), cfg.run.n_times);
    }
});
