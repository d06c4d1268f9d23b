// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Ising-type spin models with single-site Lindblad dissipation.
//!
//! The Hamiltonian is `H = Σ_{j<k} h_jk Z_j Z_k + Σ_j Δ_j Z_j`. Each stored
//! coupling is the total coefficient of `Z_j Z_k` for its unordered pair.
//! The dissipator is
//! `D(ρ) = Σ γ/2 (2 J ρ J† − {J†J, ρ})` summed over all jump channels.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::liouville::{Picture, PauliGenerator};
use crate::pauli::{superop_to_pauli_basis, OperatorVector, Pauli, PauliString, C0, C1, CI};

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("site {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("coupling ({0}, {0}) couples a site to itself")]
    SelfCoupling(usize),
    #[error("duplicate coupling for pair ({0}, {1})")]
    DuplicateCoupling(usize, usize),
    #[error("negative rate {rate} on site {site}")]
    NegativeRate { site: usize, rate: f64 },
    #[error("non-finite {0}")]
    NonFinite(&'static str),
    #[error("Bloch vector {0:?} has norm above 1")]
    BlochNorm([f64; 3]),
    #[error("unknown jump preset {0:?}")]
    UnknownPreset(String),
    #[error("operator on {got} sites does not match support of {expected} sites")]
    SupportMismatch { expected: usize, got: usize },
    #[error("model has no sites")]
    Empty,
}

pub type JumpMatrix = Matrix2<Complex64>;

pub fn pauli_matrix(p: Pauli) -> JumpMatrix {
    let m = p.matrix();
    Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
}

/// Lowering operator `|↓⟩⟨↑|`, with `↑` the `σ^z = +1` state.
pub fn sigma_minus() -> JumpMatrix {
    Matrix2::new(C0, C0, C1, C0)
}

pub fn sigma_plus() -> JumpMatrix {
    Matrix2::new(C0, C1, C0, C0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpPreset {
    DephasingZ,
    DephasingXy,
    EmissionZ,
    PumpZ,
    EmissionXy,
    RotatedTfim,
}

impl JumpPreset {
    pub const ALL: [JumpPreset; 6] = [
        JumpPreset::DephasingZ,
        JumpPreset::DephasingXy,
        JumpPreset::EmissionZ,
        JumpPreset::PumpZ,
        JumpPreset::EmissionXy,
        JumpPreset::RotatedTfim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            JumpPreset::DephasingZ => "dephasing_z",
            JumpPreset::DephasingXy => "dephasing_xy",
            JumpPreset::EmissionZ => "emission_z",
            JumpPreset::PumpZ => "pump_z",
            JumpPreset::EmissionXy => "emission_xy",
            JumpPreset::RotatedTfim => "rotated_tfim",
        }
    }

    pub fn uses_theta(self) -> bool {
        matches!(self, JumpPreset::DephasingXy | JumpPreset::EmissionXy)
    }

    pub fn matrix(self, theta: f64) -> JumpMatrix {
        let x = pauli_matrix(Pauli::X);
        let y = pauli_matrix(Pauli::Y);
        let z = pauli_matrix(Pauli::Z);
        let transverse = x * Complex64::from(theta.cos()) + y * Complex64::from(theta.sin());
        match self {
            JumpPreset::DephasingZ => z,
            JumpPreset::DephasingXy => transverse,
            JumpPreset::EmissionZ => sigma_minus(),
            JumpPreset::PumpZ => sigma_plus(),
            JumpPreset::EmissionXy => z + transverse * CI,
            JumpPreset::RotatedTfim => y - z * CI,
        }
    }
}

impl FromStr for JumpPreset {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        JumpPreset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ModelError::UnknownPreset(s.to_string()))
    }
}

impl fmt::Display for JumpPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Preset jump matrix by name; `theta` only matters for the xy families.
pub fn jump_preset(name: &str, theta: f64) -> Result<JumpMatrix, ModelError> {
    Ok(name.parse::<JumpPreset>()?.matrix(theta))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Jump {
    pub site: usize,
    pub matrix: JumpMatrix,
    pub rate: f64,
}

impl Jump {
    pub fn new(site: usize, matrix: JumpMatrix, rate: f64) -> Self {
        Self { site, matrix, rate }
    }

    pub fn preset(site: usize, preset: JumpPreset, theta: f64, rate: f64) -> Self {
        Self::new(site, preset.matrix(theta), rate)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub j: usize,
    pub k: usize,
    pub h: f64,
}

/// Ising model with z-diagonal couplings and fields plus single-site jumps.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinModel {
    n_sites: usize,
    couplings: Vec<Coupling>,
    fields: Vec<f64>,
    jumps: Vec<Jump>,
}

impl SpinModel {
    pub fn new(
        n_sites: usize,
        couplings: Vec<Coupling>,
        fields: Vec<f64>,
        jumps: Vec<Jump>,
    ) -> Result<Self, ModelError> {
        if n_sites == 0 {
            return Err(ModelError::Empty);
        }
        let check = |site: usize| {
            if site >= n_sites {
                Err(ModelError::SiteOutOfRange { site, n_sites })
            } else {
                Ok(())
            }
        };
        let mut seen = BTreeSet::new();
        let mut couplings = couplings;
        for c in couplings.iter_mut() {
            check(c.j)?;
            check(c.k)?;
            if c.j == c.k {
                return Err(ModelError::SelfCoupling(c.j));
            }
            if !c.h.is_finite() {
                return Err(ModelError::NonFinite("coupling"));
            }
            if c.j > c.k {
                std::mem::swap(&mut c.j, &mut c.k);
            }
            if !seen.insert((c.j, c.k)) {
                return Err(ModelError::DuplicateCoupling(c.j, c.k));
            }
        }
        let fields = if fields.is_empty() { vec![0.0; n_sites] } else { fields };
        if fields.len() != n_sites {
            return Err(ModelError::SupportMismatch {
                expected: n_sites,
                got: fields.len(),
            });
        }
        if fields.iter().any(|d| !d.is_finite()) {
            return Err(ModelError::NonFinite("field"));
        }
        for jump in &jumps {
            check(jump.site)?;
            if !jump.rate.is_finite() || jump.matrix.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(ModelError::NonFinite("jump"));
            }
            if jump.rate < 0.0 {
                return Err(ModelError::NegativeRate {
                    site: jump.site,
                    rate: jump.rate,
                });
            }
        }
        Ok(Self {
            n_sites,
            couplings,
            fields,
            jumps,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn jumps_on(&self, site: usize) -> impl Iterator<Item = &Jump> {
        self.jumps.iter().filter(move |j| j.site == site)
    }

    pub fn max_rate(&self) -> f64 {
        self.jumps.iter().map(|j| j.rate).fold(0.0, f64::max)
    }

    pub fn max_coupling(&self) -> f64 {
        self.couplings.iter().map(|c| c.h.abs()).fold(0.0, f64::max)
    }

    /// Same couplings and fields, different jumps.
    pub fn with_jumps(&self, jumps: Vec<Jump>) -> Result<Self, ModelError> {
        Self::new(self.n_sites, self.couplings.clone(), self.fields.clone(), jumps)
    }

    /// Couplings scaled by `factor`.
    pub fn scaled_couplings(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.couplings.iter_mut().for_each(|c| c.h *= factor);
        out
    }

    /// Hamiltonian as a list of Pauli terms on all sites.
    pub fn hamiltonian_terms(&self) -> Vec<(PauliString, f64)> {
        let n = self.n_sites;
        let mut terms: Vec<(PauliString, f64)> = self
            .couplings
            .iter()
            .filter(|c| c.h != 0.0)
            .map(|c| {
                let mut s = PauliString::identity(n);
                s.set(c.j, Pauli::Z);
                s.set(c.k, Pauli::Z);
                (s, c.h)
            })
            .collect();
        terms.extend(
            self.fields
                .iter()
                .enumerate()
                .filter(|(_, d)| **d != 0.0)
                .map(|(j, d)| (PauliString::single(n, j, Pauli::Z), *d)),
        );
        terms
    }

    /// Energies of the computational basis states (the Hamiltonian is diagonal).
    pub fn diagonal_energies(&self) -> Vec<f64> {
        let n = self.n_sites;
        let spin = |state: usize, site: usize| -> f64 {
            if state >> (n - 1 - site) & 1 == 0 {
                1.0
            } else {
                -1.0
            }
        };
        (0..1usize << n)
            .map(|b| {
                let ising: f64 = self.couplings.iter().map(|c| c.h * spin(b, c.j) * spin(b, c.k)).sum();
                let field: f64 = self.fields.iter().enumerate().map(|(j, d)| d * spin(b, j)).sum();
                ising + field
            })
            .collect()
    }
}

/// Dense Hamiltonian in the computational basis.
pub fn build_hamiltonian(model: &SpinModel) -> DMatrix<Complex64> {
    let energies = model.diagonal_energies();
    DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        energies.len(),
        energies.into_iter().map(Complex64::from),
    ))
}

/// Single-site Lindblad dissipator summed over `channels`.
pub fn dissipator_action(channels: &[(JumpMatrix, f64)], rho: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    channels.iter().fold(Matrix2::zeros(), |acc, (j, rate)| {
        let jd = j.adjoint();
        let jdj = jd * j;
        let term = j * rho * jd * Complex64::from(2.0) - jdj * rho - rho * jdj;
        acc + term * Complex64::from(rate / 2.0)
    })
}

/// Heisenberg-picture dissipator `Σ γ/2 (2 J† O J − {J†J, O})`.
pub fn adjoint_dissipator_action(channels: &[(JumpMatrix, f64)], op: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    channels.iter().fold(Matrix2::zeros(), |acc, (j, rate)| {
        let jd = j.adjoint();
        let jdj = jd * j;
        let term = jd * op * j * Complex64::from(2.0) - jdj * op - op * jdj;
        acc + term * Complex64::from(rate / 2.0)
    })
}

fn four_by_four<F>(action: F) -> Matrix4<f64>
where
    F: Fn(&Matrix2<Complex64>) -> Matrix2<Complex64>,
{
    let s = superop_to_pauli_basis(1, |m| {
        let local = Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let out = action(&local);
        DMatrix::from_row_slice(2, 2, &[out[(0, 0)], out[(0, 1)], out[(1, 0)], out[(1, 1)]])
    })
    .expect("single-site dissipator is linear");
    let r = s.real();
    Matrix4::from_fn(|i, j| r[(i, j)])
}

/// 4×4 Pauli-basis matrix (order `1, z, x, y`) of a site's dissipator.
pub fn site_dissipator_matrix(channels: &[(JumpMatrix, f64)]) -> Matrix4<f64> {
    four_by_four(|rho| dissipator_action(channels, rho))
}

/// 4×4 Pauli-basis matrix of a site's adjoint dissipator.
pub fn site_adjoint_dissipator_matrix(channels: &[(JumpMatrix, f64)]) -> Matrix4<f64> {
    four_by_four(|op| adjoint_dissipator_action(channels, op))
}

pub(crate) fn channels_on(model: &SpinModel, site: usize) -> Vec<(JumpMatrix, f64)> {
    model.jumps_on(site).map(|j| (j.matrix, j.rate)).collect()
}

fn check_support(model: &SpinModel, op: &OperatorVector, support: &[usize]) -> Result<(), ModelError> {
    if op.n_sites() != support.len() {
        return Err(ModelError::SupportMismatch {
            expected: support.len(),
            got: op.n_sites(),
        });
    }
    if let Some(&site) = support.iter().find(|&&s| s >= model.n_sites()) {
        return Err(ModelError::SiteOutOfRange {
            site,
            n_sites: model.n_sites(),
        });
    }
    Ok(())
}

fn apply_generator(generator: &PauliGenerator, op: &OperatorVector) -> OperatorVector {
    let re: Vec<f64> = op.coeffs().iter().map(|c| c.re).collect();
    let im: Vec<f64> = op.coeffs().iter().map(|c| c.im).collect();
    let mut out_re = vec![0.0; re.len()];
    let mut out_im = vec![0.0; im.len()];
    generator.apply(&re, &mut out_re);
    generator.apply(&im, &mut out_im);
    let coeffs = out_re
        .into_iter()
        .zip(out_im)
        .map(|(r, i)| Complex64::new(r, i))
        .collect();
    OperatorVector::from_coeffs(op.n_sites(), coeffs).expect("dimension preserved")
}

/// `L(ρ) = −i[H, ρ] + D(ρ)` restricted to `support`: Hamiltonian terms lying
/// entirely inside the support and jumps on it.
pub fn liouvillian_action(
    model: &SpinModel,
    rho: &OperatorVector,
    support: &[usize],
) -> Result<OperatorVector, ModelError> {
    check_support(model, rho, support)?;
    let generator = PauliGenerator::for_support(model, support, Picture::Schrodinger);
    Ok(apply_generator(&generator, rho))
}

/// `L‡(O) = i[H, O] + D‡(O)` on `support`.
pub fn adjoint_liouvillian_action(
    model: &SpinModel,
    op: &OperatorVector,
    support: &[usize],
) -> Result<OperatorVector, ModelError> {
    check_support(model, op, support)?;
    let generator = PauliGenerator::for_support(model, support, Picture::Heisenberg);
    Ok(apply_generator(&generator, op))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Chain,
    Square,
}

/// Regular lattice with couplings up to graph distance `range`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    pub extent: Vec<usize>,
    pub periodic: bool,
    pub range: usize,
    /// `coupling[d - 1]` is `h` for pairs at distance `d`.
    pub coupling: Vec<f64>,
}

impl LatticeSpec {
    pub fn chain(length: usize, periodic: bool, coupling: Vec<f64>) -> Self {
        Self {
            kind: LatticeKind::Chain,
            extent: vec![length],
            range: coupling.len(),
            periodic,
            coupling,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.extent.iter().product()
    }

    fn coords(&self, site: usize) -> Vec<usize> {
        let mut rest = site;
        let mut out = vec![0; self.extent.len()];
        for (axis, len) in self.extent.iter().enumerate().rev() {
            out[axis] = rest % len;
            rest /= len;
        }
        out
    }

    /// Graph distance between two sites.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.coords(a)
            .into_iter()
            .zip(self.coords(b))
            .zip(&self.extent)
            .map(|((x, y), len)| {
                let d = x.abs_diff(y);
                if self.periodic {
                    d.min(len - d)
                } else {
                    d
                }
            })
            .sum()
    }

    pub fn couplings(&self) -> Vec<Coupling> {
        let n = self.n_sites();
        let mut out = Vec::new();
        for j in 0..n {
            for k in j + 1..n {
                let d = self.distance(j, k);
                if d >= 1 && d <= self.range {
                    let h = self.coupling.get(d - 1).copied().unwrap_or(0.0);
                    if h != 0.0 {
                        out.push(Coupling { j, k, h });
                    }
                }
            }
        }
        out
    }

    /// Largest distance among generated couplings.
    pub fn interaction_range(&self) -> usize {
        self.couplings()
            .iter()
            .map(|c| self.distance(c.j, c.k))
            .max()
            .unwrap_or(0)
    }
}

/// Product state given by one Bloch vector per site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialProductState {
    pub bloch: Vec<[f64; 3]>,
}

impl InitialProductState {
    pub fn new(bloch: Vec<[f64; 3]>) -> Result<Self, ModelError> {
        for b in &bloch {
            if b.iter().any(|v| !v.is_finite()) {
                return Err(ModelError::NonFinite("Bloch vector"));
            }
            if b.iter().map(|v| v * v).sum::<f64>() > 1.0 + 1e-12 {
                return Err(ModelError::BlochNorm(*b));
            }
        }
        Ok(Self { bloch })
    }

    pub fn uniform(n: usize, bloch: [f64; 3]) -> Self {
        Self::new(vec![bloch; n]).expect("valid Bloch vector")
    }

    pub fn n_sites(&self) -> usize {
        self.bloch.len()
    }

    /// Named polarization such as `+x` or `-z`.
    pub fn named(label: &str) -> Option<[f64; 3]> {
        let label = label.replace('−', "-");
        let (sign, axis) = match label.as_bytes() {
            [b'+', a] => (1.0, *a),
            [b'-', a] => (-1.0, *a),
            [a] => (1.0, *a),
            _ => return None,
        };
        match axis {
            b'x' | b'X' => Some([sign, 0.0, 0.0]),
            b'y' | b'Y' => Some([0.0, sign, 0.0]),
            b'z' | b'Z' => Some([0.0, 0.0, sign]),
            _ => None,
        }
    }

    pub fn is_pure(&self) -> bool {
        self.bloch
            .iter()
            .all(|b| (b.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-10)
    }

    /// `Tr(σ^p ρ_site)`; 1 for the identity.
    pub fn component(&self, site: usize, p: Pauli) -> f64 {
        let b = self.bloch[site];
        match p {
            Pauli::I => 1.0,
            Pauli::X => b[0],
            Pauli::Y => b[1],
            Pauli::Z => b[2],
        }
    }

    pub fn site_density(&self, site: usize) -> Matrix2<Complex64> {
        let b = self.bloch[site];
        let half = Complex64::from(0.5);
        (Matrix2::identity() + pauli_matrix(Pauli::X) * Complex64::from(b[0])
            + pauli_matrix(Pauli::Y) * Complex64::from(b[1])
            + pauli_matrix(Pauli::Z) * Complex64::from(b[2]))
            * half
    }

    /// Dense density matrix restricted to `sites` (in the given order).
    pub fn density_matrix(&self, sites: &[usize]) -> DMatrix<Complex64> {
        sites.iter().fold(DMatrix::from_element(1, 1, C1), |acc, &s| {
            let local = self.site_density(s);
            let local = DMatrix::from_row_slice(2, 2, &[local[(0, 0)], local[(0, 1)], local[(1, 0)], local[(1, 1)]]);
            crate::dense::kron(&acc, &local)
        })
    }

    /// Single-site state vector for a pure Bloch vector.
    pub fn site_amplitudes(&self, site: usize) -> [Complex64; 2] {
        let [x, y, z] = self.bloch[site];
        let theta = z.clamp(-1.0, 1.0).acos();
        let phi = y.atan2(x);
        [
            Complex64::from((theta / 2.0).cos()),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ]
    }

    /// Full state vector (pure states only).
    pub fn state_vector(&self) -> Vec<Complex64> {
        let mut psi = vec![C1];
        for site in 0..self.n_sites() {
            let amp = self.site_amplitudes(site);
            psi = psi.iter().flat_map(|a| [a * amp[0], a * amp[1]]).collect();
        }
        psi
    }
}

/// Bloch vector after the frame change `X → −Z, Z → X` (a quarter turn
/// about `y`), which takes an `x-x` Ising coupling into the `z-z` form and
/// `σ^-` into a multiple of the `rotated_tfim` jump.
pub fn rotate_bloch_about_y(b: [f64; 3]) -> [f64; 3] {
    [b[2], b[1], -b[0]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::inner_product;
    use std::f64::consts::FRAC_PI_2;

    fn approx_eq(a: &JumpMatrix, b: &JumpMatrix) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn preset_matrices() {
        assert!(approx_eq(&jump_preset("dephasing_xy", 0.0).unwrap(), &pauli_matrix(Pauli::X)));
        let expected = pauli_matrix(Pauli::Z) + pauli_matrix(Pauli::Y) * CI;
        assert!(approx_eq(&jump_preset("emission_xy", FRAC_PI_2).unwrap(), &expected));
        let expected = pauli_matrix(Pauli::Y) - pauli_matrix(Pauli::Z) * CI;
        assert!(approx_eq(&jump_preset("rotated_tfim", 0.3).unwrap(), &expected));
        assert_eq!(
            jump_preset("thermal", 0.0),
            Err(ModelError::UnknownPreset("thermal".into()))
        );
    }

    #[test]
    fn sigma_minus_lowers() {
        let m = sigma_minus();
        // |↑⟩ = (1, 0) maps to |↓⟩ = (0, 1)
        assert_eq!(m[(1, 0)], C1);
        assert_eq!(m[(0, 1)], C0);
    }

    #[test]
    fn two_site_zz_spectrum() {
        let model = SpinModel::new(2, vec![Coupling { j: 0, k: 1, h: 1.0 }], vec![], vec![]).unwrap();
        assert_eq!(model.diagonal_energies(), vec![1.0, -1.0, -1.0, 1.0]);
        let single = SpinModel::new(1, vec![], vec![0.5], vec![]).unwrap();
        assert_eq!(single.diagonal_energies(), vec![0.5, -0.5]);
    }

    #[test]
    fn x_polarized_energy_vanishes() {
        let lattice = LatticeSpec::chain(3, false, vec![0.8]);
        let model = SpinModel::new(3, lattice.couplings(), vec![], vec![]).unwrap();
        let psi = InitialProductState::uniform(3, [1.0, 0.0, 0.0]).state_vector();
        let h = build_hamiltonian(&model);
        let v = nalgebra::DVector::from_vec(psi);
        let e = (v.adjoint() * &h * &v)[(0, 0)];
        assert!(e.norm() < 1e-14);
    }

    #[test]
    fn validation() {
        let bad = |c: Vec<Coupling>, j: Vec<Jump>| SpinModel::new(3, c, vec![], j).unwrap_err();
        assert_eq!(
            bad(vec![Coupling { j: 0, k: 3, h: 1.0 }], vec![]),
            ModelError::SiteOutOfRange { site: 3, n_sites: 3 }
        );
        assert_eq!(bad(vec![Coupling { j: 1, k: 1, h: 1.0 }], vec![]), ModelError::SelfCoupling(1));
        assert_eq!(
            bad(
                vec![Coupling { j: 0, k: 1, h: 1.0 }, Coupling { j: 1, k: 0, h: 2.0 }],
                vec![]
            ),
            ModelError::DuplicateCoupling(0, 1)
        );
        assert_eq!(
            bad(vec![], vec![Jump::preset(0, JumpPreset::EmissionZ, 0.0, -1.0)]),
            ModelError::NegativeRate { site: 0, rate: -1.0 }
        );
        assert!(InitialProductState::new(vec![[1.0, 1.0, 0.0]]).is_err());
    }

    #[test]
    fn adjoint_dissipator_of_emission_on_sz() {
        // L‡(σ^z) = −γ(1 + σ^z) for σ^-.
        let gamma = 0.6;
        let d = site_adjoint_dissipator_matrix(&[(sigma_minus(), gamma)]);
        let col = d.column(1);
        assert!((col[0] + gamma).abs() < 1e-14);
        assert!((col[1] + gamma).abs() < 1e-14);
        assert!(col[2].abs() < 1e-14 && col[3].abs() < 1e-14);
    }

    #[test]
    fn adjoint_matrix_is_transpose() {
        let channels = [(JumpPreset::EmissionXy.matrix(0.4), 0.7), (JumpPreset::DephasingZ.matrix(0.0), 0.2)];
        let d = site_dissipator_matrix(&channels);
        let da = site_adjoint_dissipator_matrix(&channels);
        assert!((d.transpose() - da).norm() < 1e-13);
    }

    #[test]
    fn pure_commutator_without_jumps() {
        let model = SpinModel::new(2, vec![Coupling { j: 0, k: 1, h: 0.9 }], vec![0.3, 0.0], vec![]).unwrap();
        let rho = InitialProductState::uniform(2, [0.6, 0.0, 0.8]).density_matrix(&[0, 1]);
        let v = OperatorVector::from_matrix(&rho).unwrap();
        let out = liouvillian_action(&model, &v, &[0, 1]).unwrap().to_matrix();
        let h = build_hamiltonian(&model);
        let expected = (&h * &rho - &rho * &h) * (-CI);
        assert!((out - expected).norm() < 1e-13);
    }

    #[test]
    fn adjointness_on_random_operators() {
        let model = SpinModel::new(
            2,
            vec![Coupling { j: 0, k: 1, h: 0.7 }],
            vec![0.2, -0.4],
            vec![
                Jump::preset(0, JumpPreset::EmissionXy, 0.3, 0.5),
                Jump::preset(1, JumpPreset::RotatedTfim, 0.0, 0.8),
            ],
        )
        .unwrap();
        let coeffs = |seed: u64| -> Vec<Complex64> {
            (0..16)
                .map(|i| {
                    let t = (seed * 31 + i * 17) as f64;
                    Complex64::new((t * 0.37).sin(), (t * 0.91).cos())
                })
                .collect()
        };
        let rho = OperatorVector::from_coeffs(2, coeffs(1)).unwrap();
        let op = OperatorVector::from_coeffs(2, coeffs(2)).unwrap();
        let lhs = inner_product(&op, &liouvillian_action(&model, &rho, &[0, 1]).unwrap()).unwrap();
        let rhs = inner_product(&adjoint_liouvillian_action(&model, &op, &[0, 1]).unwrap(), &rho).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn support_mismatch() {
        let model = SpinModel::new(2, vec![], vec![], vec![]).unwrap();
        let v = OperatorVector::zeros(1);
        assert!(matches!(
            liouvillian_action(&model, &v, &[0, 1]),
            Err(ModelError::SupportMismatch { .. })
        ));
    }

    #[test]
    fn lattice_generation() {
        let ring = LatticeSpec::chain(6, true, vec![1.0]);
        assert_eq!(ring.couplings().len(), 6);
        assert_eq!(ring.distance(0, 5), 1);
        let open = LatticeSpec::chain(6, false, vec![1.0, 0.5]);
        assert_eq!(open.couplings().len(), 5 + 4);
        assert_eq!(open.interaction_range(), 2);
        let square = LatticeSpec {
            kind: LatticeKind::Square,
            extent: vec![3, 3],
            periodic: false,
            range: 1,
            coupling: vec![1.0],
        };
        assert_eq!(square.couplings().len(), 12);
    }

    #[test]
    fn named_states() {
        assert_eq!(InitialProductState::named("+y"), Some([0.0, 1.0, 0.0]));
        assert_eq!(InitialProductState::named("−x"), Some([-1.0, 0.0, 0.0]));
        assert_eq!(InitialProductState::named("w"), None);
        let s = InitialProductState::uniform(1, [0.0, 1.0, 0.0]);
        let amp = s.site_amplitudes(0);
        let psi = nalgebra::Vector2::new(amp[0], amp[1]);
        let y = pauli_matrix(Pauli::Y);
        assert!(((psi.adjoint() * y * psi)[(0, 0)] - C1).norm() < 1e-14);
    }
}
