// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

pub mod config;
pub mod dense;
pub mod fullsolver;
pub mod integrate;
pub mod io;
pub mod liouville;
pub mod model;
pub mod observable;
pub mod pauli;
pub mod reduction;
pub mod solvability;
pub mod spectral;
pub mod trajectories;
