// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force master-equation solver on the full `2^n`-dimensional space.
//!
//! Density matrices are vectorized by column stacking: entry `(r, c)` sits at
//! index `r + c·2^n`, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`. The matrix-free
//! [`Lindbladian::apply`] and the dense [`liouvillian_matrix`] follow the same
//! convention and are tested against each other.

use nalgebra::{DMatrix, Matrix4, Schur};
use num_complex::Complex64;
use thiserror::Error;

use crate::dense::kron;
use crate::integrate::{Dopri5, IntegrateError, LinearOp, Tolerance};
use crate::model::{InitialProductState, JumpMatrix, SpinModel};
use crate::pauli::{PauliString, C0, C1, CI};

/// Largest system evolved with the matrix-free action.
pub const MAX_SITES_MATRIX_FREE: usize = 10;
/// Largest system for dense Liouvillian matrices (evolution, steady state).
pub const MAX_SITES_DENSE: usize = 6;
/// Largest system for the full nonsymmetric eigenproblem.
pub const MAX_SITES_SPECTRUM: usize = 4;

#[derive(Debug, Error, PartialEq)]
pub enum FullSolverError {
    #[error("{what} limited to {cap} sites, got {n}")]
    ResourceCap { what: &'static str, n: usize, cap: usize },
    #[error("expected a {expected}x{expected} density matrix, got {rows}x{cols}")]
    Dimension { expected: usize, rows: usize, cols: usize },
    #[error("site {site} out of range for {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("Liouvillian has no null vector")]
    NoSteadyState,
}

fn cap(what: &'static str, n: usize, cap: usize) -> Result<(), FullSolverError> {
    if n > cap {
        Err(FullSolverError::ResourceCap { what, n, cap })
    } else {
        Ok(())
    }
}

/// A Pauli string stored as bit masks for fast action on basis states.
#[derive(Clone, Debug)]
struct MaskedTerm {
    x: usize,
    z: usize,
    // i^{#Y}
    phase: Complex64,
    h: f64,
}

impl MaskedTerm {
    fn new(s: &PauliString, h: f64) -> Self {
        let (x, z) = s.masks();
        let phase = CI.powu(s.count_y() as u32);
        Self { x, z, phase, h }
    }

    /// `P|b⟩ = sign(b)·|b ^ x⟩`.
    fn sign(&self, b: usize) -> Complex64 {
        if (b & self.z).count_ones().is_multiple_of(2) {
            self.phase
        } else {
            -self.phase
        }
    }
}

/// Lindblad generator on `n` qubits.
#[derive(Clone, Debug)]
pub struct Lindbladian {
    n: usize,
    energies: Vec<f64>,
    off_diagonal: Vec<MaskedTerm>,
    jumps: Vec<(usize, JumpMatrix, f64)>,
    // per-site 4x4 action on the block (ρ00, ρ01, ρ10, ρ11)
    site_blocks: Vec<(usize, Matrix4<Complex64>)>,
}

impl Lindbladian {
    /// General constructor from Hamiltonian Pauli terms and jumps `(site, J, γ)`.
    pub fn from_parts(
        n: usize,
        terms: &[(PauliString, f64)],
        jumps: Vec<(usize, JumpMatrix, f64)>,
    ) -> Result<Self, FullSolverError> {
        cap("matrix-free evolution", n, MAX_SITES_MATRIX_FREE)?;
        if let Some(&(site, _, _)) = jumps.iter().find(|(s, _, _)| *s >= n) {
            return Err(FullSolverError::SiteOutOfRange { site, n });
        }
        let dim = 1usize << n;
        let mut energies = vec![0.0; dim];
        let mut off_diagonal = Vec::new();
        for (s, h) in terms {
            let t = MaskedTerm::new(s, *h);
            if t.x == 0 {
                for (b, e) in energies.iter_mut().enumerate() {
                    *e += h * t.sign(b).re;
                }
            } else {
                off_diagonal.push(t);
            }
        }
        let mut site_blocks: Vec<(usize, Matrix4<Complex64>)> = Vec::new();
        for &(site, j, rate) in &jumps {
            let block = jump_block(&j, rate);
            match site_blocks.iter_mut().find(|(s, _)| *s == site) {
                Some((_, b)) => *b += block,
                None => site_blocks.push((site, block)),
            }
        }
        Ok(Self { n, energies, off_diagonal, jumps, site_blocks })
    }

    pub fn from_model(model: &SpinModel) -> Result<Self, FullSolverError> {
        let n = model.n_sites();
        cap("matrix-free evolution", n, MAX_SITES_MATRIX_FREE)?;
        let jumps = model.jumps().iter().map(|j| (j.site, j.matrix, j.rate)).collect();
        let mut lind = Self::from_parts(n, &[], jumps)?;
        lind.energies = model.diagonal_energies();
        Ok(lind)
    }

    /// Unrotated dissipative transverse-field Ising chain:
    /// `H = J Σ σ^x_j σ^x_{j+1} + Δ Σ σ^z_j`, jumps `σ^-` with rate `γ`.
    pub fn transverse_ising(
        n: usize,
        periodic: bool,
        coupling: f64,
        delta: f64,
        gamma: f64,
    ) -> Result<Self, FullSolverError> {
        use crate::pauli::Pauli;
        let mut terms = Vec::new();
        let bonds = if periodic && n > 2 { n } else { n.saturating_sub(1) };
        for j in 0..bonds {
            let mut s = PauliString::identity(n);
            s.set(j, Pauli::X);
            s.set((j + 1) % n, Pauli::X);
            terms.push((s, coupling));
        }
        for j in 0..n {
            terms.push((PauliString::single(n, j, Pauli::Z), delta));
        }
        let jumps = (0..n).map(|j| (j, crate::model::sigma_minus(), gamma)).collect();
        Self::from_parts(n, &terms, jumps)
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    /// Hilbert-space dimension `2^n`.
    pub fn hilbert_dim(&self) -> usize {
        1 << self.n
    }

    pub fn jumps(&self) -> &[(usize, JumpMatrix, f64)] {
        &self.jumps
    }

    /// `y = L(x)` on a column-stacked density matrix.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let d = self.hilbert_dim();
        for c in 0..d {
            let ec = self.energies[c];
            for r in 0..d {
                let i = r + c * d;
                y[i] = Complex64::new(0.0, -(self.energies[r] - ec)) * x[i];
            }
        }
        for t in &self.off_diagonal {
            let f = Complex64::new(0.0, -t.h);
            for c in 0..d {
                let cx = c ^ t.x;
                let right = t.sign(c);
                for r in 0..d {
                    let rx = r ^ t.x;
                    let left = t.sign(rx) * x[rx + c * d];
                    y[r + c * d] += f * (left - x[r + cx * d] * right);
                }
            }
        }
        for (site, block) in &self.site_blocks {
            let bit = 1usize << (self.n - 1 - site);
            for c0 in (0..d).filter(|c| c & bit == 0) {
                let c1 = c0 | bit;
                for r0 in (0..d).filter(|r| r & bit == 0) {
                    let r1 = r0 | bit;
                    let idx = [r0 + c0 * d, r0 + c1 * d, r1 + c0 * d, r1 + c1 * d];
                    let v = [x[idx[0]], x[idx[1]], x[idx[2]], x[idx[3]]];
                    for (a, &i) in idx.iter().enumerate() {
                        y[i] += block[(a, 0)] * v[0] + block[(a, 1)] * v[1] + block[(a, 2)] * v[2] + block[(a, 3)] * v[3];
                    }
                }
            }
        }
    }
}

impl LinearOp<Complex64> for Lindbladian {
    fn dim(&self) -> usize {
        1 << (2 * self.n)
    }
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        Lindbladian::apply(self, x, y)
    }
}

/// Action of `γ(JρJ† − ½{J†J, ρ})` on `(ρ00, ρ01, ρ10, ρ11)`.
fn jump_block(j: &JumpMatrix, rate: f64) -> Matrix4<Complex64> {
    let k = j.adjoint() * j;
    let mut m = Matrix4::from_element(C0);
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let mut v = j[(a, a2)] * j[(b, b2)].conj();
                    if b == b2 {
                        v -= 0.5 * k[(a, a2)];
                    }
                    if a == a2 {
                        v -= 0.5 * k[(b2, b)];
                    }
                    m[(2 * a + b, 2 * a2 + b2)] = v * rate;
                }
            }
        }
    }
    m
}

/// Dense Liouvillian in the column-stacked basis, built from Kronecker products.
pub fn liouvillian_matrix(lind: &Lindbladian) -> Result<DMatrix<Complex64>, FullSolverError> {
    cap("dense Liouvillian", lind.n, MAX_SITES_DENSE)?;
    let d = lind.hilbert_dim();
    let id = DMatrix::<Complex64>::identity(d, d);
    let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        d,
        lind.energies.iter().map(|e| Complex64::new(*e, 0.0)),
    ));
    for t in &lind.off_diagonal {
        for b in 0..d {
            h[(b ^ t.x, b)] += t.sign(b) * t.h;
        }
    }
    let mut l = (kron(&id, &h) - kron(&h.transpose(), &id)) * Complex64::new(0.0, -1.0);
    for (site, j, rate) in &lind.jumps {
        let jf = crate::dense::embed(j, *site, lind.n);
        let k = jf.adjoint() * &jf;
        l += (kron(&jf.map(|v| v.conj()), &jf) - (kron(&id, &k) + kron(&k.transpose(), &id)) * Complex64::new(0.5, 0.0)) * Complex64::new(*rate, 0.0);
    }
    Ok(l)
}

/// A `2^n × 2^n` density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(DMatrix<Complex64>);

impl DensityMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self, FullSolverError> {
        let (rows, cols) = m.shape();
        if rows != cols || !rows.is_power_of_two() {
            return Err(FullSolverError::Dimension { expected: rows.next_power_of_two(), rows, cols });
        }
        Ok(Self(m))
    }

    pub fn from_product_state(state: &InitialProductState) -> Self {
        let sites: Vec<usize> = (0..state.n_sites()).collect();
        Self(state.density_matrix(&sites))
    }

    fn from_vec(d: usize, v: &[Complex64]) -> Self {
        Self(DMatrix::from_column_slice(d, d, v))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn n_sites(&self) -> usize {
        self.0.nrows().trailing_zeros() as usize
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        crate::dense::max_abs(&(&self.0 - self.0.adjoint()))
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    /// `Tr(ρ P)` for a Pauli string.
    pub fn expectation(&self, p: &PauliString) -> Complex64 {
        let t = MaskedTerm::new(p, 1.0);
        (0..self.0.nrows()).map(|r| self.0[(r, r ^ t.x)] * t.sign(r)).sum()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvolveMethod {
    Adaptive(Tolerance),
    /// Matrix exponential of the dense Liouvillian.
    Dense,
}

impl Default for EvolveMethod {
    fn default() -> Self {
        Self::Adaptive(Tolerance::default())
    }
}

/// Integrates `dρ/dt = L(ρ)` from `t = 0` and returns `ρ` at every time.
pub fn evolve_full(
    lind: &Lindbladian,
    rho0: &DensityMatrix,
    times: &[f64],
    method: EvolveMethod,
) -> Result<Vec<DensityMatrix>, FullSolverError> {
    let d = lind.hilbert_dim();
    let (rows, cols) = rho0.0.shape();
    if rows != d || cols != d {
        return Err(FullSolverError::Dimension { expected: d, rows, cols });
    }
    let y0: Vec<Complex64> = rho0.0.as_slice().to_vec();
    let states = match method {
        EvolveMethod::Adaptive(tol) => Dopri5::new(lind, tol).integrate(&y0, 0.0, times)?,
        EvolveMethod::Dense => {
            let l = liouvillian_matrix(lind)?;
            let x0 = nalgebra::DVector::from_vec(y0);
            if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|t| *t < 0.0) {
                return Err(IntegrateError::BadTimes.into());
            }
            times
                .iter()
                .map(|t| (&l * Complex64::new(*t, 0.0)).exp() * &x0)
                .map(|v| v.as_slice().to_vec())
                .collect()
        }
    };
    Ok(states.iter().map(|v| DensityMatrix::from_vec(d, v)).collect())
}

/// Expectation series of Pauli observables, one row per time.
pub fn evolve_expectations(
    lind: &Lindbladian,
    rho0: &DensityMatrix,
    times: &[f64],
    observables: &[PauliString],
    method: EvolveMethod,
) -> Result<Vec<Vec<f64>>, FullSolverError> {
    let states = evolve_full(lind, rho0, times, method)?;
    Ok(states
        .iter()
        .map(|rho| observables.iter().map(|o| rho.expectation(o).re).collect())
        .collect())
}

#[derive(Clone, Debug)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    /// Dimension of the Liouvillian null space; above 1 the state is one representative.
    pub nullity: usize,
    /// `max |L(ρ)|` for the returned state.
    pub residual: f64,
}

/// Null vector of the Liouvillian via full-pivoting LU, normalized to unit trace.
pub fn steady_state(lind: &Lindbladian) -> Result<SteadyState, FullSolverError> {
    let l = liouvillian_matrix(lind)?;
    let dim = l.nrows();
    let lu = l.clone().full_piv_lu();
    let u = lu.u();
    let scale = u[(0, 0)].norm().max(f64::MIN_POSITIVE);
    let rank = (0..dim).take_while(|&k| u[(k, k)].norm() > 1e-9 * scale).count();
    let nullity = dim - rank;
    if nullity == 0 {
        return Err(FullSolverError::NoSteadyState);
    }
    let d = lind.hilbert_dim();
    let mut best: Option<DMatrix<Complex64>> = None;
    for free in rank..dim {
        // back-substitute U[..rank, ..rank] y = −U[..rank, free]
        let mut y = nalgebra::DVector::from_element(dim, C0);
        y[free] = C1;
        for i in (0..rank).rev() {
            let mut acc = u[(i, free)];
            for k in i + 1..rank {
                acc += u[(i, k)] * y[k];
            }
            y[i] = -acc / u[(i, i)];
        }
        lu.q().inv_permute_rows(&mut y);
        let m = DMatrix::from_column_slice(d, d, y.as_slice());
        if best.as_ref().is_none_or(|b| m.trace().norm() > b.trace().norm()) {
            best = Some(m);
        }
    }
    let m = best.expect("nullity is positive");
    let tr = m.trace();
    if tr.norm() < 1e-12 {
        return Err(FullSolverError::NoSteadyState);
    }
    let m = m / tr;
    let rho = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let v = nalgebra::DVector::from_column_slice(rho.as_slice());
    let residual = (&l * v).iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(SteadyState { rho: DensityMatrix(rho), nullity, residual })
}

/// All `4^n` eigenvalues of the Liouvillian from a complex Schur form.
pub fn liouvillian_spectrum(lind: &Lindbladian) -> Result<Vec<Complex64>, FullSolverError> {
    cap("dense spectrum", lind.n, MAX_SITES_SPECTRUM)?;
    let l = liouvillian_matrix(lind)?;
    let schur = Schur::try_new(l, 1e-14, 100_000).ok_or(FullSolverError::NoConvergence)?;
    let eig = schur.eigenvalues().ok_or(FullSolverError::NoConvergence)?;
    Ok(eig.iter().copied().collect())
}

/// Sorts eigenvalues by `(re, im)`, treating real parts within `tol` of
/// each other as equal so that clusters are ordered by imaginary part.
pub fn sort_spectrum(eigs: &mut [Complex64], tol: f64) {
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut start = 0;
    while start < eigs.len() {
        let mut end = start + 1;
        while end < eigs.len() && eigs[end].re - eigs[end - 1].re <= tol {
            end += 1;
        }
        eigs[start..end].sort_by(|a, b| a.im.total_cmp(&b.im));
        start = end;
    }
}

/// Largest pairwise distance between two spectra after [`sort_spectrum`].
pub fn spectrum_distance(a: &[Complex64], b: &[Complex64], tol: f64) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    sort_spectrum(&mut a, tol);
    sort_spectrum(&mut b, tol);
    a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Number of eigenvalues within `tol` of zero and the largest real part among the rest.
pub fn spectral_gap(eigs: &[Complex64], tol: f64) -> (usize, Option<f64>) {
    let zeros = eigs.iter().filter(|e| e.norm() < tol).count();
    let gap = eigs.iter().filter(|e| e.norm() >= tol).map(|e| -e.re).fold(None, |acc: Option<f64>, g| {
        Some(acc.map_or(g, |a| a.min(g)))
    });
    (zeros, gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Coupling, Jump, JumpPreset};
    use crate::pauli::Pauli;

    fn single(preset: JumpPreset, theta: f64, gamma: f64) -> SpinModel {
        SpinModel::new(1, vec![], vec![], vec![Jump::preset(0, preset, theta, gamma)]).unwrap()
    }

    fn chain(n: usize) -> SpinModel {
        let couplings = (0..n - 1).map(|j| Coupling { j, k: j + 1, h: 0.3 + 0.2 * j as f64 }).collect();
        let jumps = (0..n)
            .map(|j| Jump::preset(j, JumpPreset::ALL[j % 6], 0.4 * j as f64, 0.2 + 0.1 * j as f64))
            .collect();
        SpinModel::new(n, couplings, vec![0.1; n], jumps).unwrap()
    }

    fn random_state(n: usize, seed: u64) -> Vec<Complex64> {
        let mut s = seed;
        (0..1usize << (2 * n))
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                Complex64::new(a, b)
            })
            .collect()
    }

    #[test]
    fn matrix_free_matches_kronecker_matrix() {
        for lind in [Lindbladian::from_model(&chain(3)).unwrap(), Lindbladian::transverse_ising(3, true, 0.7, 0.3, 0.2).unwrap()] {
            let l = liouvillian_matrix(&lind).unwrap();
            let x = random_state(3, 9);
            let mut y = vec![C0; x.len()];
            lind.apply(&x, &mut y);
            let expect = &l * nalgebra::DVector::from_vec(x);
            let err = y.iter().zip(expect.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "{err}");
        }
    }

    #[test]
    fn matches_pauli_basis_liouvillian() {
        let model = chain(2);
        let lind = Lindbladian::from_model(&model).unwrap();
        let rho0 = DensityMatrix::from_product_state(&InitialProductState::uniform(2, [0.6, 0.0, 0.8]));
        let mut y = vec![C0; 16];
        lind.apply(rho0.matrix().as_slice(), &mut y);
        let ly = DMatrix::from_column_slice(4, 4, &y);
        let pauli = crate::pauli::OperatorVector::from_matrix(rho0.matrix()).unwrap();
        let lp = crate::model::liouvillian_action(&model, &pauli, &[0, 1]).unwrap();
        assert!(crate::dense::max_abs(&(lp.to_matrix() - ly)) < 1e-12);
    }

    #[test]
    fn dephasing_decay() {
        let gamma = 0.3;
        let lind = Lindbladian::from_model(&single(JumpPreset::DephasingZ, 0.0, gamma)).unwrap();
        let rho0 = DensityMatrix::from_product_state(&InitialProductState::uniform(1, [1.0, 0.0, 0.0]));
        let times: Vec<f64> = (0..=20).map(|k| 0.5 * k as f64).collect();
        let x = PauliString::single(1, 0, Pauli::X);
        let series = evolve_expectations(&lind, &rho0, &times, &[x], EvolveMethod::default()).unwrap();
        for (t, v) in times.iter().zip(&series) {
            assert!((v[0] - (-2.0 * gamma * t).exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn emission_relaxation() {
        let gamma = 0.7;
        let z0 = 0.4;
        let lind = Lindbladian::from_model(&single(JumpPreset::EmissionZ, 0.0, gamma)).unwrap();
        let rho0 = DensityMatrix::from_product_state(&InitialProductState::uniform(1, [0.0, (1.0f64 - z0 * z0).sqrt(), z0]));
        let times: Vec<f64> = (0..=10).map(|k| 0.7 * k as f64).collect();
        let z = PauliString::single(1, 0, Pauli::Z);
        for method in [EvolveMethod::default(), EvolveMethod::Dense] {
            let series = evolve_expectations(&lind, &rho0, &times, std::slice::from_ref(&z), method).unwrap();
            for (t, v) in times.iter().zip(&series) {
                assert!((v[0] - (-1.0 + (z0 + 1.0) * (-gamma * t).exp())).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn trace_hermiticity_positivity() {
        let lind = Lindbladian::from_model(&chain(4)).unwrap();
        let rho0 = DensityMatrix::from_product_state(&InitialProductState::uniform(4, [0.0, 1.0, 0.0]));
        let times: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        for rho in evolve_full(&lind, &rho0, &times, EvolveMethod::default()).unwrap() {
            assert!((rho.trace() - C1).norm() < 1e-10);
            assert!(rho.hermiticity_error() < 1e-12);
            assert!(rho.min_eigenvalue() > -1e-8);
        }
    }

    #[test]
    fn unitary_purity_conserved() {
        let model = SpinModel::new(3, vec![Coupling { j: 0, k: 1, h: 1.0 }, Coupling { j: 1, k: 2, h: -0.4 }], vec![0.2; 3], vec![]).unwrap();
        let lind = Lindbladian::from_model(&model).unwrap();
        let rho0 = DensityMatrix::from_product_state(&InitialProductState::uniform(3, [0.0, 1.0, 0.0]));
        let tight = EvolveMethod::Adaptive(Tolerance { rtol: 1e-12, atol: 1e-14 });
        for rho in evolve_full(&lind, &rho0, &[0.0, 1.0, 5.0], tight).unwrap() {
            assert!((rho.purity() - 1.0).abs() < 1e-10, "{}", rho.purity() - 1.0);
        }
    }

    #[test]
    fn emission_dark_state() {
        let ss = steady_state(&Lindbladian::from_model(&single(JumpPreset::EmissionZ, 0.0, 1.0)).unwrap()).unwrap();
        assert_eq!(ss.nullity, 1);
        assert!((ss.rho.matrix()[(1, 1)] - C1).norm() < 1e-12);
        assert!(ss.residual < 1e-10);
    }

    #[test]
    fn transverse_emission_steady_state_is_pure_and_in_plane() {
        let theta = 0.9;
        let ss = steady_state(&Lindbladian::from_model(&single(JumpPreset::EmissionXy, theta, 1.0)).unwrap()).unwrap();
        assert_eq!(ss.nullity, 1);
        assert!((ss.rho.purity() - 1.0).abs() < 1e-10);
        let z = ss.rho.expectation(&PauliString::single(1, 0, Pauli::Z)).re;
        assert!(z.abs() < 1e-10);
    }

    #[test]
    fn dephasing_reports_degenerate_null_space() {
        let ss = steady_state(&Lindbladian::from_model(&single(JumpPreset::DephasingZ, 0.0, 1.0)).unwrap()).unwrap();
        assert_eq!(ss.nullity, 2);
        assert!(ss.residual < 1e-10);
    }

    #[test]
    fn dephasing_spectrum() {
        let mut eigs = liouvillian_spectrum(&Lindbladian::from_model(&single(JumpPreset::DephasingZ, 0.0, 0.5)).unwrap()).unwrap();
        sort_spectrum(&mut eigs, 1e-8);
        let expect = [-1.0, -1.0, 0.0, 0.0];
        for (e, x) in eigs.iter().zip(expect) {
            assert!((e - Complex64::new(x, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn spectrum_conjugation_closed_and_stable() {
        let eigs = liouvillian_spectrum(&Lindbladian::from_model(&chain(3)).unwrap()).unwrap();
        assert_eq!(eigs.len(), 64);
        for e in &eigs {
            assert!(e.re < 1e-10);
            assert!(eigs.iter().any(|f| (f - e.conj()).norm() < 1e-8));
        }
    }

    #[test]
    fn rotated_frame_matches_transverse_ising() {
        // σ^- becomes (σ^y − iσ^z)/2 up to a phase, so the printed jump at γ/4
        let (n, j, gamma) = (3, 0.8, 0.4);
        let plain = Lindbladian::transverse_ising(n, false, j, 0.0, gamma).unwrap();
        let couplings = (0..n - 1).map(|k| Coupling { j: k, k: k + 1, h: j }).collect();
        let jumps = (0..n).map(|k| Jump::preset(k, JumpPreset::RotatedTfim, 0.0, gamma / 4.0)).collect();
        let rotated = Lindbladian::from_model(&SpinModel::new(n, couplings, vec![], jumps).unwrap()).unwrap();
        let a = liouvillian_spectrum(&plain).unwrap();
        let b = liouvillian_spectrum(&rotated).unwrap();
        // uniform couplings leave defective eigenvalues, resolved only to ~sqrt(eps)
        assert!(spectrum_distance(&a, &b, 1e-6) < 1e-7);
    }

    #[test]
    fn caps_are_enforced() {
        let lind = Lindbladian::transverse_ising(5, false, 1.0, 0.0, 0.1).unwrap();
        assert!(matches!(liouvillian_spectrum(&lind), Err(FullSolverError::ResourceCap { .. })));
        assert!(matches!(
            Lindbladian::transverse_ising(11, false, 1.0, 0.0, 0.1),
            Err(FullSolverError::ResourceCap { .. })
        ));
    }
}
