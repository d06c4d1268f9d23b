// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Membership test for the solvable family and the single-site gap
//! conditions.
//!
//! A model is solvable when no site's dissipator feeds coherences into
//! populations: `Tr(σ^z_j D_j(σ^±_j)) = 0` for every site. In the 4×4
//! Pauli-basis matrix (order `1, z, x, y`) this is the vanishing of the
//! upper-right 2×2 block. The gap conditions additionally require a unique
//! single-site steady state with a finite gap, `D_z1 = 0` and `D_xy = D_yx`.

use std::collections::BTreeSet;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{
    adjoint_liouvillian_action, channels_on, dissipator_action, sigma_minus, sigma_plus, site_dissipator_matrix,
    JumpMatrix, SpinModel,
};
use crate::pauli::{OperatorVector, PauliString};

/// Relative tolerance of the algebraic checks, in units of the largest rate.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// 4×4 Pauli-basis dissipator of all channels on one site.
pub fn single_site_dissipator_matrix(channels: &[(JumpMatrix, f64)]) -> Matrix4<f64> {
    site_dissipator_matrix(channels)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteReport {
    pub site: usize,
    /// Row-major 4×4 matrix in the order `1, z, x, y`.
    pub matrix: [f64; 16],
    /// `|Tr(σ^z D(σ^+))|` and `|Tr(σ^z D(σ^-))|`.
    pub residual_plus: f64,
    pub residual_minus: f64,
    /// Frobenius norm of the upper-right 2×2 block.
    pub upper_block_norm: f64,
    pub solvable: bool,
    pub d_z1: f64,
    pub xy_asymmetry: f64,
    /// `{0, ε⁰}` from the upper-left block.
    pub populations_eigs: [f64; 2],
    /// `{ε¹_a, ε¹_b}` from the lower-right block, as (re, im) pairs.
    pub coherences_eigs: [[f64; 2]; 2],
    /// Eigenvalues of the full 4×4 matrix, as (re, im) pairs.
    pub eigenvalues: Vec<[f64; 2]>,
    pub unique_zero: bool,
    pub site_gap: Option<f64>,
    pub condition1: bool,
    pub condition2: bool,
}

impl SiteReport {
    pub fn matrix4(&self) -> Matrix4<f64> {
        Matrix4::from_row_slice(&self.matrix)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolvabilityReport {
    pub pass: bool,
    /// Absolute tolerance used (relative tolerance times the largest rate).
    pub tolerance: f64,
    pub sites: Vec<SiteReport>,
    pub condition1: bool,
    pub condition2: bool,
    /// `min_j Γ_j`, present only when every site passes all conditions.
    pub gap: Option<f64>,
}

impl SolvabilityReport {
    pub fn gap_conditions_hold(&self) -> bool {
        self.gap.is_some()
    }

    pub fn failing_sites(&self) -> Vec<usize> {
        self.sites.iter().filter(|s| !s.solvable).map(|s| s.site).collect()
    }
}

fn trace_z(m: &Matrix2<Complex64>) -> Complex64 {
    m[(0, 0)] - m[(1, 1)]
}

fn site_report(site: usize, channels: &[(JumpMatrix, f64)], tol: f64) -> SiteReport {
    let d = single_site_dissipator_matrix(channels);
    let residual_plus = trace_z(&dissipator_action(channels, &sigma_plus())).norm();
    let residual_minus = trace_z(&dissipator_action(channels, &sigma_minus())).norm();
    let upper_block_norm = (d[(0, 2)].powi(2) + d[(0, 3)].powi(2) + d[(1, 2)].powi(2) + d[(1, 3)].powi(2)).sqrt();
    let solvable = residual_plus < tol && residual_minus < tol;

    let d_z1 = d[(1, 0)];
    let xy_asymmetry = (d[(2, 3)] - d[(3, 2)]).abs();
    let condition2 = d_z1.abs() < tol && xy_asymmetry < tol;

    let populations_eigs = [0.0, d[(1, 1)]];
    let lower = Matrix2::new(d[(2, 2)], d[(2, 3)], d[(3, 2)], d[(3, 3)]);
    let le = lower.complex_eigenvalues();
    let coherences_eigs = [[le[0].re, le[0].im], [le[1].re, le[1].im]];

    let full = d.complex_eigenvalues();
    let mut eigenvalues: Vec<[f64; 2]> = full.iter().map(|c| [c.re, c.im]).collect();
    eigenvalues.sort_by(|a, b| b[0].total_cmp(&a[0]).then(a[1].total_cmp(&b[1])));
    let zeros = full.iter().filter(|c| c.norm() < tol).count();
    let unique_zero = zeros == 1;
    let site_gap = if unique_zero {
        let top = full
            .iter()
            .filter(|c| c.norm() >= tol)
            .map(|c| c.re)
            .fold(f64::NEG_INFINITY, f64::max);
        if top < -tol {
            Some(-top)
        } else {
            None
        }
    } else {
        None
    };
    let condition1 = site_gap.is_some();

    let mut matrix = [0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            matrix[4 * i + j] = d[(i, j)];
        }
    }
    SiteReport {
        site,
        matrix,
        residual_plus,
        residual_minus,
        upper_block_norm,
        solvable,
        d_z1,
        xy_asymmetry,
        populations_eigs,
        coherences_eigs,
        eigenvalues,
        unique_zero,
        site_gap,
        condition1,
        condition2,
    }
}

fn absolute_tol(model: &SpinModel) -> f64 {
    RESIDUAL_TOL * model.max_rate().max(f64::MIN_POSITIVE)
}

/// Verdict on membership in the solvable family, with per-site detail.
pub fn check_solvable(model: &SpinModel) -> SolvabilityReport {
    let tol = absolute_tol(model);
    let sites: Vec<SiteReport> = (0..model.n_sites())
        .map(|j| site_report(j, &channels_on(model, j), tol))
        .collect();
    let pass = sites.iter().all(|s| s.solvable);
    let condition1 = sites.iter().all(|s| s.condition1);
    let condition2 = sites.iter().all(|s| s.condition2);
    let gap = if pass && condition1 && condition2 {
        sites
            .iter()
            .filter_map(|s| s.site_gap)
            .min_by(|a, b| a.total_cmp(b))
    } else {
        None
    };
    SolvabilityReport {
        pass,
        tolerance: tol,
        sites,
        condition1,
        condition2,
        gap,
    }
}

/// Same report; the gap fields are the point of interest here.
pub fn check_gap_conditions(model: &SpinModel) -> SolvabilityReport {
    check_solvable(model)
}

/// Applies `L‡` to random operators that commute with every `σ^z_j`,
/// `j ∈ support`, and returns the largest coefficient that appears on a
/// string with an X or Y letter inside `support`.
pub fn diagonality_closure_test(model: &SpinModel, support: &[usize], trials: usize, seed: u64) -> f64 {
    let set: BTreeSet<usize> = support.iter().copied().collect();
    if set.is_empty() {
        return 0.0;
    }
    let n = model.n_sites();
    let all_sites: Vec<usize> = (0..n).collect();
    let diagonal_on_set = |idx: usize| {
        let s = PauliString::from_index(n, idx);
        set.iter().all(|&j| !s.letter(j).is_transverse())
    };
    let allowed: Vec<usize> = (0..1usize << (2 * n)).filter(|&i| diagonal_on_set(i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let mut op = OperatorVector::zeros(n);
        for &i in &allowed {
            op.coeffs_mut()[i] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        }
        let image = adjoint_liouvillian_action(model, &op, &all_sites).expect("full support");
        for (i, c) in image.coeffs().iter().enumerate() {
            if !diagonal_on_set(i) {
                worst = worst.max(c.norm());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{pauli_matrix, Coupling, Jump, JumpPreset, LatticeSpec};
    use crate::pauli::Pauli;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tilted() -> JumpMatrix {
        (pauli_matrix(Pauli::X) + pauli_matrix(Pauli::Z)) * Complex64::from(FRAC_1_SQRT_2)
    }

    fn one_site(matrix: JumpMatrix, rate: f64) -> SpinModel {
        SpinModel::new(1, vec![], vec![], vec![Jump::new(0, matrix, rate)]).unwrap()
    }

    #[test]
    fn dephasing_matrix() {
        let g = 0.4;
        let d = single_site_dissipator_matrix(&[(JumpPreset::DephasingZ.matrix(0.0), g)]);
        let expected = Matrix4::from_diagonal(&nalgebra::Vector4::new(0.0, 0.0, -2.0 * g, -2.0 * g));
        assert!((d - expected).norm() < 1e-14);
    }

    #[test]
    fn emission_matrix() {
        let g = 0.9;
        let d = single_site_dissipator_matrix(&[(JumpPreset::EmissionZ.matrix(0.0), g)]);
        assert!(d.row(0).norm() < 1e-15);
        assert!((d[(1, 0)] + g).abs() < 1e-14);
        assert!((d[(1, 1)] + g).abs() < 1e-14);
        assert!((d[(2, 2)] + g / 2.0).abs() < 1e-14);
        assert!((d[(3, 3)] + g / 2.0).abs() < 1e-14);
        assert!(d[(2, 3)].abs() < 1e-14 && d[(3, 2)].abs() < 1e-14);
    }

    #[test]
    fn rotated_tfim_satisfies_both_conditions() {
        let report = check_gap_conditions(&one_site(JumpPreset::RotatedTfim.matrix(0.0), 1.0));
        assert!(report.pass && report.condition1 && report.condition2);
        let s = &report.sites[0];
        assert!(s.d_z1.abs() < 1e-14);
        assert!(s.xy_asymmetry < 1e-14);
        assert!(report.gap.unwrap() > 0.0);
    }

    #[test]
    fn all_presets_are_solvable() {
        for preset in JumpPreset::ALL {
            for theta in [0.0, 0.3, 1.2, 2.9] {
                let report = check_solvable(&one_site(preset.matrix(theta), 0.8));
                assert!(report.pass, "{preset} at θ={theta}");
            }
        }
    }

    #[test]
    fn tilted_jump_fails_with_residual_gamma() {
        let g = 0.35;
        let report = check_solvable(&one_site(tilted(), g));
        assert!(!report.pass);
        let s = &report.sites[0];
        assert!((s.residual_plus - g).abs() < 1e-14);
        assert!((s.residual_minus - g).abs() < 1e-14);
        assert_eq!(report.failing_sites(), vec![0]);
    }

    #[test]
    fn no_jumps_is_vacuously_solvable() {
        let model = SpinModel::new(2, vec![Coupling { j: 0, k: 1, h: 1.0 }], vec![], vec![]).unwrap();
        let report = check_solvable(&model);
        assert!(report.pass);
        assert!(!report.condition1);
        assert!(report.gap.is_none());
    }

    #[test]
    fn dephasing_fails_condition1() {
        let report = check_gap_conditions(&one_site(JumpPreset::DephasingZ.matrix(0.0), 1.0));
        assert!(report.pass && report.condition2);
        assert!(!report.condition1);
        assert!(!report.sites[0].unique_zero);
        let mut re: Vec<f64> = report.sites[0].eigenvalues.iter().map(|e| e[0]).collect();
        re.sort_by(f64::total_cmp);
        assert_eq!(re, vec![-2.0, -2.0, 0.0, 0.0]);
    }

    #[test]
    fn emission_fails_condition2() {
        let report = check_gap_conditions(&one_site(JumpPreset::EmissionZ.matrix(0.0), 1.0));
        assert!(report.pass);
        assert!(report.condition1);
        assert!(!report.condition2);
        assert!((report.sites[0].d_z1 + 1.0).abs() < 1e-14);
        assert!(report.gap.is_none());
    }

    fn chain(n: usize, jumps: Vec<Jump>) -> SpinModel {
        let lattice = LatticeSpec::chain(n, false, vec![0.7]);
        SpinModel::new(n, lattice.couplings(), vec![0.2; n], jumps).unwrap()
    }

    #[test]
    fn closure_on_solvable_chain() {
        let jumps = (0..4).map(|j| Jump::preset(j, JumpPreset::EmissionXy, 0.3 * j as f64, 0.5)).collect();
        let model = chain(4, jumps);
        assert!(diagonality_closure_test(&model, &[1, 2], 3, 11) < 1e-12);
        assert_eq!(diagonality_closure_test(&model, &[], 3, 11), 0.0);
    }

    #[test]
    fn closure_fails_for_tilted_jump() {
        let g = 0.6;
        let model = chain(3, vec![Jump::new(1, tilted(), g)]);
        assert!(diagonality_closure_test(&model, &[1], 2, 5) >= g / 2.0);
    }

    #[test]
    fn three_routes_agree_on_singletons() {
        let cases = [
            (JumpPreset::RotatedTfim.matrix(0.0), true),
            (JumpPreset::EmissionXy.matrix(0.8), true),
            (tilted(), false),
        ];
        for (matrix, expected) in cases {
            let model = chain(2, vec![Jump::new(0, matrix, 0.7), Jump::preset(1, JumpPreset::PumpZ, 0.0, 0.3)]);
            let report = check_solvable(&model);
            let block_zero = report.sites.iter().all(|s| s.upper_block_norm < 1e-12);
            let closure = (0..2).all(|j| diagonality_closure_test(&model, &[j], 2, 3) < 1e-12);
            assert_eq!(report.pass, expected);
            assert_eq!(block_zero, expected);
            assert_eq!(closure, expected);
        }
    }

    fn arb_jump() -> impl Strategy<Value = JumpMatrix> {
        proptest::collection::vec(-1.0f64..1.0, 8).prop_map(|v| {
            Matrix2::new(
                Complex64::new(v[0], v[1]),
                Complex64::new(v[2], v[3]),
                Complex64::new(v[4], v[5]),
                Complex64::new(v[6], v[7]),
            )
        })
    }

    proptest! {
        #[test]
        fn z_rotation_preserves_verdict(j in arb_jump(), angle in 0.0f64..6.3, structured in any::<bool>()) {
            // half of the cases mix σ^z, a transverse axis and the identity
            let j = if structured {
                let z = pauli_matrix(Pauli::Z);
                let t = JumpPreset::DephasingXy.matrix(angle * 0.7);
                z * j[(0, 0)] + t * j[(1, 0)] + Matrix2::identity() * j[(1, 1)]
            } else {
                j
            };
            let u = Matrix2::new(
                Complex64::from_polar(1.0, -angle / 2.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::from_polar(1.0, angle / 2.0),
            );
            let rotated = u * j * u.adjoint();
            let a = check_solvable(&one_site(j, 0.9)).pass;
            let b = check_solvable(&one_site(rotated, 0.9)).pass;
            prop_assert_eq!(a, b);
        }

        #[test]
        fn symmetric_blocks_have_real_eigenvalues(theta in 0.0f64..6.3, rate in 0.1f64..2.0) {
            for preset in [JumpPreset::RotatedTfim, JumpPreset::DephasingXy] {
                let report = check_gap_conditions(&one_site(preset.matrix(theta), rate));
                let s = &report.sites[0];
                if s.condition2 {
                    prop_assert!(s.eigenvalues.iter().all(|e| e[1].abs() < 1e-12));
                }
            }
        }
    }
}
