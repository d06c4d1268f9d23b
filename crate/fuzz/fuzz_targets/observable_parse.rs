// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use driven_ising::observable::{parse_observables, Observable};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(list) = parse_observables(text) {
        for o in list {
            let again: Observable = o.to_string().parse().expect("display output parses");
            assert_eq!(again, o);
        }
    }
});
