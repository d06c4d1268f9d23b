// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Graded structure of the Liouvillian and certified dissipative gaps.
//!
//! Grading Pauli strings by their number `d` of `X`/`Y` letters makes the
//! Liouvillian of a solvable model block-lower-triangular: the Hamiltonian
//! preserves `d`, and a dissipator can raise `d` by one but never lower it.
//! The spectrum is then the union of the spectra of the diagonal blocks, and
//! each Hamiltonian-free diagonal block is a sum of single-site terms.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fullsolver::{spectral_gap, spectrum_distance};
use crate::liouville::{site_matrices, Picture, PauliGenerator};
use crate::model::SpinModel;
use crate::pauli::index_weight;
use crate::solvability::{check_gap_conditions, SolvabilityReport};

/// Largest system for dense graded analysis.
pub const MAX_GRADED_SITES: usize = 4;
/// Bound on norms that must vanish structurally.
pub const STRUCTURE_TOL: f64 = 1e-10;
/// Slack in the gap inequalities.
pub const GAP_TOL: f64 = 1e-8;
/// Eigenvalues below this modulus count as zero.
pub const ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("graded analysis limited to {cap} sites, got {n}")]
    ResourceCap { n: usize, cap: usize },
    #[error("block {part}^({row},{col}) has norm {norm:e}, expected zero")]
    Structure { part: char, row: usize, col: usize, norm: f64 },
    #[error("gap conditions fail on sites {sites:?}: {reason}")]
    Conditions { sites: Vec<usize>, reason: String },
    #[error("gap check failed: {0}")]
    Assertion(String),
    #[error("eigenvalue computation did not converge")]
    NoConvergence,
}

/// Pauli-basis dissipator and Hamiltonian parts, permuted by grade.
#[derive(Clone, Debug)]
pub struct GradedBlocks {
    n: usize,
    /// Pauli indices sorted by grade (stable within a grade).
    pub permutation: Vec<usize>,
    /// Start offset of each grade in `permutation`; length `n + 2`.
    pub offsets: Vec<usize>,
    /// Matrix of `D` in the permuted basis.
    pub dissipator: DMatrix<f64>,
    /// Matrix of `−i[H, ·]` in the permuted basis.
    pub hamiltonian: DMatrix<f64>,
}

/// One structural-zero requirement and its measured norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockNorm {
    pub part: char,
    pub row: usize,
    pub col: usize,
    pub norm: f64,
}

impl GradedBlocks {
    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn grade_size(&self, d: usize) -> usize {
        self.offsets[d + 1] - self.offsets[d]
    }

    fn slice(&self, m: &DMatrix<f64>, d: usize, e: usize) -> DMatrix<f64> {
        m.view((self.offsets[d], self.offsets[e]), (self.grade_size(d), self.grade_size(e))).into_owned()
    }

    /// `D^{de}`: maps grade `e` into grade `d`.
    pub fn d_block(&self, d: usize, e: usize) -> DMatrix<f64> {
        self.slice(&self.dissipator, d, e)
    }

    pub fn h_block(&self, d: usize, e: usize) -> DMatrix<f64> {
        self.slice(&self.hamiltonian, d, e)
    }

    pub fn l_block(&self, d: usize, e: usize) -> DMatrix<f64> {
        self.d_block(d, e) + self.h_block(d, e)
    }

    /// Norms of every block that vanishes for a solvable model.
    pub fn structural_norms(&self) -> Vec<BlockNorm> {
        let mut out = Vec::new();
        for d in 0..=self.n {
            for e in 0..=self.n {
                if d < e {
                    out.push(BlockNorm { part: 'L', row: d, col: e, norm: self.l_block(d, e).norm() });
                }
                if d != e && d != e + 1 {
                    out.push(BlockNorm { part: 'D', row: d, col: e, norm: self.d_block(d, e).norm() });
                }
                if d != e || d == 0 {
                    out.push(BlockNorm { part: 'H', row: d, col: e, norm: self.h_block(d, e).norm() });
                }
            }
        }
        out
    }

    /// Largest structural norm, if any exceeds [`STRUCTURE_TOL`].
    pub fn worst_violation(&self) -> Option<BlockNorm> {
        self.structural_norms()
            .into_iter()
            .filter(|b| b.norm > STRUCTURE_TOL)
            .max_by(|a, b| a.norm.total_cmp(&b.norm))
    }

    /// Largest `‖A − Aᵀ‖` over the diagonal dissipator blocks.
    pub fn dissipator_asymmetry(&self) -> f64 {
        (0..=self.n)
            .map(|d| {
                let b = self.d_block(d, d);
                (&b - b.transpose()).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Largest `‖A + Aᵀ‖` over the diagonal Hamiltonian blocks.
    pub fn hamiltonian_symmetric_part(&self) -> f64 {
        (0..=self.n)
            .map(|d| {
                let b = self.h_block(d, d);
                (&b + b.transpose()).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Graded blocks without checking the structural zeros.
pub fn graded_blocks(model: &SpinModel) -> Result<GradedBlocks, SpectralError> {
    let n = model.n_sites();
    if n > MAX_GRADED_SITES {
        return Err(SpectralError::ResourceCap { n, cap: MAX_GRADED_SITES });
    }
    let support: Vec<usize> = (0..n).collect();
    let d_gen = PauliGenerator::from_parts(n, vec![], site_matrices(model, &support, Picture::Schrodinger), Picture::Schrodinger);
    let h_gen = PauliGenerator::from_parts(n, model.hamiltonian_terms(), vec![], Picture::Schrodinger);
    let dim = 1usize << (2 * n);
    let mut permutation: Vec<usize> = (0..dim).collect();
    permutation.sort_by_key(|&mu| index_weight(n, mu));
    let mut offsets = vec![0; n + 2];
    for &mu in &permutation {
        offsets[index_weight(n, mu) + 1] += 1;
    }
    for d in 0..=n {
        offsets[d + 1] += offsets[d];
    }
    let permute = |m: DMatrix<f64>| DMatrix::from_fn(dim, dim, |i, j| m[(permutation[i], permutation[j])]);
    Ok(GradedBlocks {
        n,
        dissipator: permute(d_gen.to_dense()),
        hamiltonian: permute(h_gen.to_dense()),
        permutation: permutation.clone(),
        offsets,
    })
}

/// Graded blocks, failing on the largest structural-zero violation.
pub fn graded_decompose(model: &SpinModel) -> Result<GradedBlocks, SpectralError> {
    let blocks = graded_blocks(model)?;
    if let Some(v) = blocks.worst_violation() {
        return Err(SpectralError::Structure { part: v.part, row: v.row, col: v.col, norm: v.norm });
    }
    Ok(blocks)
}

fn eigenvalues(m: DMatrix<f64>) -> Result<Vec<Complex64>, SpectralError> {
    if m.is_empty() {
        return Ok(vec![]);
    }
    let schur = nalgebra::Schur::try_new(m, 1e-15, 100_000).ok_or(SpectralError::NoConvergence)?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Eigenvalues of the diagonal block `L^{dd}`.
pub fn block_spectrum(blocks: &GradedBlocks, d: usize) -> Result<Vec<Complex64>, SpectralError> {
    eigenvalues(blocks.l_block(d, d))
}

/// Union over grades of the diagonal-block spectra.
pub fn spectrum_via_blocks(blocks: &GradedBlocks) -> Result<Vec<Complex64>, SpectralError> {
    let mut out = Vec::with_capacity(blocks.permutation.len());
    for d in 0..=blocks.n {
        out.extend(block_spectrum(blocks, d)?);
    }
    Ok(out)
}

/// Single-site eigenvalue sets `E⁰ = {0, ε⁰}` and `E¹ = {ε¹_a, ε¹_b}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteEigenvalues {
    pub populations: [f64; 2],
    pub coherences: [f64; 2],
}

/// Eigenvalues of the Hamiltonian-free block `D^{dd}` assembled from
/// single-site sets: for every `d`-subset `J` of sites, all sums choosing
/// one element of `E¹_j` for `j ∈ J` and of `E⁰_j` otherwise.
pub fn assemble_projected_eigs(sites: &[SiteEigenvalues], d: usize) -> Vec<f64> {
    let n = sites.len();
    let mut out = Vec::new();
    for subset in (0usize..1 << n).filter(|s| s.count_ones() as usize == d) {
        let mut sums = vec![0.0];
        for (j, site) in sites.iter().enumerate() {
            let set = if subset >> (n - 1 - j) & 1 == 1 { site.coherences } else { site.populations };
            sums = sums.iter().flat_map(|s| set.iter().map(move |e| s + e)).collect();
        }
        out.extend(sums);
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Sorted eigenvalues of a symmetric block.
pub fn symmetric_eigs(m: DMatrix<f64>) -> Vec<f64> {
    if m.is_empty() {
        return vec![];
    }
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Direct spectrum checks performed for small systems.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapVerification {
    /// `min −Re λ` over the nonzero eigenvalues.
    pub true_gap: f64,
    pub zero_count: usize,
    pub spectrum_size: usize,
    /// `(d, largest eigenvalue of D^{dd})`.
    pub rayleigh: Vec<(usize, f64)>,
    /// Second-largest eigenvalue of `D^{00}`.
    pub populations_second: Option<f64>,
    pub max_structural_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapCertificate {
    /// Proven bound `Γ = min_j Γ_j`.
    pub gamma: f64,
    pub sites: Vec<SiteEigenvalues>,
    /// Single-site 4×4 matrices, row-major in the order `1, z, x, y`.
    pub site_matrices: Vec<[f64; 16]>,
    pub condition1: bool,
    pub condition2: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<GapVerification>,
}

fn condition_failure(report: &SolvabilityReport) -> SpectralError {
    if !report.pass {
        return SpectralError::Conditions {
            sites: report.failing_sites(),
            reason: "not solvable: coherences feed populations".into(),
        };
    }
    let bad1: Vec<usize> = report.sites.iter().filter(|s| !s.condition1).map(|s| s.site).collect();
    if !bad1.is_empty() {
        let degenerate = report.sites.iter().any(|s| !s.condition1 && !s.unique_zero);
        let reason = if degenerate {
            "condition (1) fails: degenerate steady state"
        } else {
            "condition (1) fails: no finite single-site gap"
        };
        return SpectralError::Conditions { sites: bad1, reason: reason.into() };
    }
    let bad2 = report.sites.iter().filter(|s| !s.condition2).map(|s| s.site).collect();
    SpectralError::Conditions { sites: bad2, reason: "condition (2) fails: D_z1 != 0 or D_xy != D_yx".into() }
}

/// Issues a gap certificate; for `n ≤ 4` the bound is also checked against
/// the directly computed spectrum.
pub fn certify_gap(model: &SpinModel) -> Result<GapCertificate, SpectralError> {
    let report = check_gap_conditions(model);
    let Some(gamma) = report.gap else {
        return Err(condition_failure(&report));
    };
    if report.sites.len() != model.n_sites() {
        let covered: Vec<usize> = report.sites.iter().map(|s| s.site).collect();
        let missing = (0..model.n_sites()).filter(|s| !covered.contains(s)).collect();
        return Err(SpectralError::Conditions { sites: missing, reason: "condition (1) fails: site has no jumps".into() });
    }
    let sites: Vec<SiteEigenvalues> = report
        .sites
        .iter()
        .map(|s| SiteEigenvalues {
            populations: s.populations_eigs,
            coherences: [s.coherences_eigs[0][0], s.coherences_eigs[1][0]],
        })
        .collect();
    let mut cert = GapCertificate {
        gamma,
        sites,
        site_matrices: report.sites.iter().map(|s| s.matrix).collect(),
        condition1: report.condition1,
        condition2: report.condition2,
        verified: None,
    };
    if model.n_sites() <= MAX_GRADED_SITES {
        cert.verified = Some(verify(model, gamma)?);
    }
    Ok(cert)
}

fn verify(model: &SpinModel, gamma: f64) -> Result<GapVerification, SpectralError> {
    let blocks = graded_decompose(model)?;
    let max_structural_norm = blocks.structural_norms().iter().map(|b| b.norm).fold(0.0, f64::max);
    let spectrum = spectrum_via_blocks(&blocks)?;
    let (zero_count, gap) = spectral_gap(&spectrum, ZERO_TOL);
    let true_gap = gap.unwrap_or(f64::INFINITY);
    if zero_count != 1 {
        return Err(SpectralError::Assertion(format!("{zero_count} zero eigenvalues")));
    }
    if true_gap < gamma - GAP_TOL {
        return Err(SpectralError::Assertion(format!("true gap {true_gap} below bound {gamma}")));
    }
    if blocks.dissipator_asymmetry() > STRUCTURE_TOL {
        return Err(SpectralError::Assertion("diagonal dissipator blocks are not symmetric".into()));
    }
    let mut rayleigh = Vec::new();
    let mut populations_second = None;
    for d in 0..=blocks.n {
        let eigs = symmetric_eigs(blocks.d_block(d, d));
        let top = *eigs.last().expect("nonempty grade");
        if d == 0 {
            populations_second = eigs.iter().rev().nth(1).copied();
            if populations_second.is_some_and(|e| e > -gamma + GAP_TOL) {
                return Err(SpectralError::Assertion("second population eigenvalue above -Γ".into()));
            }
        } else if top > -(d as f64) * gamma + GAP_TOL {
            return Err(SpectralError::Assertion(format!("D^({d},{d}) eigenvalue {top} above -{d}Γ")));
        }
        rayleigh.push((d, top));
    }
    Ok(GapVerification {
        true_gap,
        zero_count,
        spectrum_size: spectrum.len(),
        rayleigh,
        populations_second,
        max_structural_norm,
    })
}

/// Distance between the block-union spectrum and a reference spectrum.
pub fn compare_spectra(blocks: &[Complex64], reference: &[Complex64]) -> f64 {
    spectrum_distance(blocks, reference, 1e-6)
}
