// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::f64::consts::PI;

use driven_ising::model::{Coupling, InitialProductState, Jump, JumpPreset, SpinModel};
use driven_ising::pauli::{Pauli, PauliString};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nearest-neighbour chain with couplings drawn from `[-1, 1]`.
pub fn random_chain_couplings(rng: &mut ChaCha8Rng, n: usize, periodic: bool) -> Vec<Coupling> {
    let bonds = if periodic && n > 2 { n } else { n - 1 };
    (0..bonds).map(|j| Coupling { j, k: (j + 1) % n, h: rng.random_range(-1.0..1.0) }).collect()
}

/// One random preset per site, all at rate `gamma`.
pub fn random_preset_jumps(rng: &mut ChaCha8Rng, n: usize, gamma: f64) -> Vec<Jump> {
    (0..n)
        .map(|j| {
            let preset = JumpPreset::ALL[rng.random_range(0..JumpPreset::ALL.len())];
            Jump::preset(j, preset, rng.random_range(0.0..2.0 * PI), gamma)
        })
        .collect()
}

/// Jumps meeting both gap conditions: emission along an in-plane axis or the
/// rotated TFIM jump, optionally with extra z dephasing.
pub fn random_gapped_jumps(rng: &mut ChaCha8Rng, n: usize) -> Vec<Jump> {
    let mut out = Vec::new();
    for j in 0..n {
        let preset = if rng.random_bool(0.5) { JumpPreset::EmissionXy } else { JumpPreset::RotatedTfim };
        out.push(Jump::preset(j, preset, rng.random_range(0.0..2.0 * PI), rng.random_range(0.2..1.0)));
        if rng.random_bool(0.3) {
            out.push(Jump::preset(j, JumpPreset::DephasingZ, 0.0, rng.random_range(0.1..0.5)));
        }
    }
    out
}

pub fn random_fields(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-0.5..0.5)).collect()
}

/// Random product state; roughly half the sites are mixed.
pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> InitialProductState {
    let bloch = (0..n)
        .map(|_| {
            let z: f64 = rng.random_range(-1.0..1.0);
            let phi: f64 = rng.random_range(0.0..2.0 * PI);
            let r = if rng.random_bool(0.5) { 1.0 } else { rng.random_range(0.3..1.0) };
            let s = (1.0 - z * z).sqrt();
            [r * s * phi.cos(), r * s * phi.sin(), r * z]
        })
        .collect();
    InitialProductState::new(bloch).unwrap()
}

pub fn random_pure_state(rng: &mut ChaCha8Rng, n: usize) -> InitialProductState {
    let bloch = (0..n)
        .map(|_| {
            let z: f64 = rng.random_range(-1.0..1.0);
            let phi: f64 = rng.random_range(0.0..2.0 * PI);
            let s = (1.0 - z * z).sqrt();
            [s * phi.cos(), s * phi.sin(), z]
        })
        .collect();
    InitialProductState::new(bloch).unwrap()
}

/// Random solvable chain model with common jump rate `gamma`.
pub fn random_solvable_chain(seed: u64, n: usize, gamma: f64) -> SpinModel {
    let mut r = rng(seed);
    let couplings = random_chain_couplings(&mut r, n, false);
    let fields = random_fields(&mut r, n);
    let jumps = random_preset_jumps(&mut r, n, gamma);
    SpinModel::new(n, couplings, fields, jumps).unwrap()
}

pub fn random_gapped_chain(seed: u64, n: usize) -> SpinModel {
    let mut r = rng(seed);
    let couplings = random_chain_couplings(&mut r, n, false);
    let fields = random_fields(&mut r, n);
    let jumps = random_gapped_jumps(&mut r, n);
    SpinModel::new(n, couplings, fields, jumps).unwrap()
}

/// `(σ^x + σ^z)/√2`, which violates the solvability condition.
pub fn tilted_jump() -> driven_ising::model::JumpMatrix {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    driven_ising::model::JumpMatrix::new(s, s, s, -s)
}

pub const AXES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

/// Every single-site Pauli observable and every adjacent two-site product.
pub fn local_observables(n: usize) -> Vec<PauliString> {
    let mut out = Vec::new();
    for j in 0..n {
        for a in AXES {
            out.push(PauliString::single(n, j, a));
        }
    }
    for j in 0..n - 1 {
        for a in AXES {
            for b in AXES {
                let mut p = PauliString::identity(n);
                p.set(j, a);
                p.set(j + 1, b);
                out.push(p);
            }
        }
    }
    out
}

pub fn linspace(t_max: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
}

pub fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
