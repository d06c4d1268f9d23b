// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Liouvillians as real matrices in the Pauli basis, built directly from
//! Pauli-string algebra instead of dense `2^n` matrices.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix4};

use crate::integrate::LinearOp;
use crate::model::{channels_on, site_adjoint_dissipator_matrix, site_dissipator_matrix, SpinModel};
use crate::pauli::{multiply_indices, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Picture {
    /// Generator of `dρ/dt = L(ρ)`.
    Schrodinger,
    /// Generator of `dO/dt = L‡(O)`.
    Heisenberg,
}

/// Real compressed-column sparse matrix.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    nrows: usize,
    col_ptr: Vec<usize>,
    rows: Vec<u32>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn from_columns(nrows: usize, columns: Vec<Vec<(usize, f64)>>) -> Self {
        let mut col_ptr = Vec::with_capacity(columns.len() + 1);
        let mut rows = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for col in columns {
            for (r, v) in col {
                rows.push(r as u32);
                values.push(v);
            }
            col_ptr.push(rows.len());
        }
        Self {
            nrows,
            col_ptr,
            rows,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.col_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_ptr[c]..self.col_ptr[c + 1];
        self.rows[range.clone()]
            .iter()
            .zip(&self.values[range])
            .map(|(r, v)| (*r as usize, *v))
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (c, xc) in x.iter().enumerate() {
            if *xc == 0.0 {
                continue;
            }
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                y[self.rows[k] as usize] += self.values[k] * xc;
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols());
        for c in 0..self.ncols() {
            for (r, v) in self.column(c) {
                m[(r, c)] += v;
            }
        }
        m
    }
}

impl LinearOp<f64> for SparseMatrix {
    fn dim(&self) -> usize {
        self.nrows
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec(x, y)
    }
}

/// Pauli-basis generator on a patch of `m` sites.
#[derive(Clone, Debug)]
pub struct PauliGenerator {
    m: usize,
    picture: Picture,
    /// Hamiltonian terms as (patch-local string index, coefficient).
    terms: Vec<(usize, f64)>,
    /// (patch-local site, 4×4 dissipator in the chosen picture).
    dissipators: Vec<(usize, Matrix4<f64>)>,
}

impl PauliGenerator {
    pub fn from_parts(
        m: usize,
        terms: Vec<(PauliString, f64)>,
        site_matrices: Vec<(usize, Matrix4<f64>)>,
        picture: Picture,
    ) -> Self {
        let terms = terms.into_iter().map(|(s, h)| (s.index(), h)).collect();
        Self {
            m,
            picture,
            terms,
            dissipators: site_matrices,
        }
    }

    /// Generator for `support` (model site list, in patch order): Hamiltonian
    /// terms contained in the support and every jump on it.
    pub fn for_support(model: &SpinModel, support: &[usize], picture: Picture) -> Self {
        let local: BTreeMap<usize, usize> = support.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let terms = model
            .hamiltonian_terms()
            .into_iter()
            .filter(|(s, _)| s.support().iter().all(|j| local.contains_key(j)))
            .map(|(s, h)| (restrict_string(&s, support), h))
            .collect();
        Self::from_parts(support.len(), terms, site_matrices(model, support, picture), picture)
    }

    pub fn n_sites(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        1 << (2 * self.m)
    }

    pub fn picture(&self) -> Picture {
        self.picture
    }

    /// Appends the image of basis element `mu` to `out` (duplicates allowed).
    pub fn column_into(&self, mu: usize, out: &mut Vec<(usize, f64)>) {
        let sign = match self.picture {
            Picture::Schrodinger => 1.0,
            Picture::Heisenberg => -1.0,
        };
        for &(p, h) in &self.terms {
            let (phase, nu) = multiply_indices(self.m, p, mu);
            if phase.is_real() {
                continue;
            }
            // −i h [P, μ] = −2i h (P μ) with P μ = ±i ν
            let v = if phase.power() == 1 { 2.0 * h } else { -2.0 * h };
            out.push((nu, sign * v));
        }
        for (site, d) in &self.dissipators {
            let shift = 2 * (self.m - 1 - site);
            let a = (mu >> shift) & 3;
            let base = mu & !(3 << shift);
            for b in 0..4 {
                let v = d[(b, a)];
                if v != 0.0 {
                    out.push((base | (b << shift), v));
                }
            }
        }
    }

    /// `y = G x` on the full Pauli space of the patch.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        let mut col = Vec::new();
        for (mu, xm) in x.iter().enumerate() {
            if *xm == 0.0 {
                continue;
            }
            col.clear();
            self.column_into(mu, &mut col);
            for (nu, v) in &col {
                y[*nu] += v * xm;
            }
        }
    }

    fn merged_column(&self, mu: usize, scratch: &mut Vec<(usize, f64)>) -> Vec<(usize, f64)> {
        scratch.clear();
        self.column_into(mu, scratch);
        scratch.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(scratch.len());
        for &(r, v) in scratch.iter() {
            match merged.last_mut() {
                Some(last) if last.0 == r => last.1 += v,
                _ => merged.push((r, v)),
            }
        }
        merged.retain(|e| e.1 != 0.0);
        merged
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut scratch = Vec::new();
        let columns = (0..self.dim()).map(|mu| self.merged_column(mu, &mut scratch)).collect();
        SparseMatrix::from_columns(self.dim(), columns)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        self.to_sparse().to_dense()
    }

    /// Restriction to the span of `basis` (sorted patch indices). Returns the
    /// generator inside the subspace and the map onto everything outside it,
    /// whose rows are listed in the third element.
    pub fn restrict(&self, basis: &[usize]) -> (SparseMatrix, SparseMatrix, Vec<usize>) {
        let mut position = BTreeMap::new();
        for (i, b) in basis.iter().enumerate() {
            position.insert(*b, i);
        }
        let mut outside: BTreeMap<usize, usize> = BTreeMap::new();
        let mut inner_cols = Vec::with_capacity(basis.len());
        let mut leak_raw = Vec::with_capacity(basis.len());
        let mut scratch = Vec::new();
        for &mu in basis {
            let col = self.merged_column(mu, &mut scratch);
            let mut inner = Vec::new();
            let mut leak = Vec::new();
            for (nu, v) in col {
                match position.get(&nu) {
                    Some(&i) => inner.push((i, v)),
                    None => {
                        let next = outside.len();
                        let k = *outside.entry(nu).or_insert(next);
                        leak.push((k, v));
                    }
                }
            }
            inner_cols.push(inner);
            leak_raw.push(leak);
        }
        let mut leak_rows = vec![0; outside.len()];
        for (nu, k) in outside {
            leak_rows[k] = nu;
        }
        (
            SparseMatrix::from_columns(basis.len(), inner_cols),
            SparseMatrix::from_columns(leak_rows.len(), leak_raw),
            leak_rows,
        )
    }
}

impl LinearOp<f64> for PauliGenerator {
    fn dim(&self) -> usize {
        PauliGenerator::dim(self)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        PauliGenerator::apply(self, x, y)
    }
}

/// Re-indexes a model-wide string onto the patch `support`.
pub fn restrict_string(s: &PauliString, support: &[usize]) -> PauliString {
    PauliString::new(support.iter().map(|&j| s.letter(j)).collect())
}

/// Per-site 4×4 dissipators for the jumps on `support`, keyed by patch position.
pub fn site_matrices(model: &SpinModel, support: &[usize], picture: Picture) -> Vec<(usize, Matrix4<f64>)> {
    support
        .iter()
        .enumerate()
        .filter_map(|(i, &site)| {
            let channels = channels_on(model, site);
            if channels.is_empty() {
                return None;
            }
            let d = match picture {
                Picture::Schrodinger => site_dissipator_matrix(&channels),
                Picture::Heisenberg => site_adjoint_dissipator_matrix(&channels),
            };
            Some((i, d))
        })
        .collect()
}
