// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact observables from a finite patch.
//!
//! For an observable supported on `A`, let `B` be the sites coupled to `A`.
//! In a solvable model the Heisenberg-picture observable stays supported on
//! `A ∪ B` and diagonal on `B`, so its expectation value only needs the
//! couplings touching `A`, the jumps on `A ∪ B` and the initial state
//! restricted to the patch.
//!
//! Patch states are stored as `r_μ = Tr(μ̂ ρ)`, which obey the same linear
//! equations as the Pauli coefficients of `ρ`, so `⟨μ̂⟩` is read off directly.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fullsolver::{self, EvolveMethod, FullSolverError, Lindbladian};
use crate::integrate::{DensePropagator, Dopri5, IntegrateError, Tolerance};
use crate::liouville::{restrict_string, Picture, PauliGenerator};
use crate::model::{Coupling, InitialProductState, Jump, ModelError, SpinModel};
use crate::pauli::{Pauli, PauliString};
use crate::solvability::check_solvable;

/// Largest patch evolved on the full Pauli space.
pub const MAX_PATCH_SITES: usize = 7;
/// Largest Heisenberg invariant subspace.
pub const MAX_INVARIANT_DIM: usize = 1 << 24;
/// Largest operator space handled by dense exponentials.
pub const MAX_DENSE_DIM: usize = 1024;
/// Bound on coefficients leaving the invariant subspace.
pub const LEAK_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum ReductionError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("support set is empty")]
    EmptySupport,
    #[error("site {site} out of range for {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("observable acts on site {0}, which is outside A")]
    ObservableOutsideSupport(usize),
    #[error("observable has {got} sites, model has {expected}")]
    ObservableLength { expected: usize, got: usize },
    #[error("initial state has {got} sites, model has {expected}")]
    StateLength { expected: usize, got: usize },
    #[error("jumps on sites {0:?} violate the solvability condition")]
    NotSolvable(Vec<usize>),
    #[error("patch of {sites} sites needs operator dimension {dim}, above the cap {cap}")]
    ResourceCap { sites: usize, dim: usize, cap: usize },
    #[error("{magnitude:e} of the operator left the invariant subspace at t = {time}")]
    Leak { time: f64, magnitude: f64 },
    #[error("the correlator needs two distinct sites")]
    SameSite,
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error(transparent)]
    FullSolver(#[from] FullSolverError),
}

/// Sorted, duplicate-free list of sites.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    pub fn new(sites: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = sites.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn sites(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.0.binary_search(&site).is_ok()
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        SupportSet::new(self.0.iter().chain(&other.0).copied())
    }

    fn check(&self, n: usize) -> Result<(), ReductionError> {
        match self.0.iter().find(|&&s| s >= n) {
            Some(&site) => Err(ReductionError::SiteOutOfRange { site, n }),
            None => Ok(()),
        }
    }
}

/// Sites outside `a` that share a nonzero coupling with a site of `a`.
pub fn neighbor_set(model: &SpinModel, a: &SupportSet) -> Result<SupportSet, ReductionError> {
    if a.is_empty() {
        return Err(ReductionError::EmptySupport);
    }
    a.check(model.n_sites())?;
    let mut b = Vec::new();
    for c in model.couplings().iter().filter(|c| c.h != 0.0) {
        if a.contains(c.j) && !a.contains(c.k) {
            b.push(c.k);
        }
        if a.contains(c.k) && !a.contains(c.j) {
            b.push(c.j);
        }
    }
    Ok(SupportSet::new(b))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionMethod {
    /// Dense exponential when the operator space is small, adaptive otherwise.
    #[default]
    Auto,
    SchrodingerDense,
    SchrodingerAdaptive,
    HeisenbergDense,
    HeisenbergAdaptive,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReductionOptions {
    pub method: ReductionMethod,
    pub tol: Tolerance,
    /// Evolve even when a patch jump violates the solvability condition.
    pub allow_unsolvable: bool,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        Self { method: ReductionMethod::Auto, tol: Tolerance::default(), allow_unsolvable: false }
    }
}

/// The patch model and initial state for an observable on `A`.
#[derive(Clone, Debug)]
pub struct ReducedProblem {
    a: SupportSet,
    b: SupportSet,
    /// Model sites of the patch, in patch order.
    patch: Vec<usize>,
    /// `H_AB` and the jumps on the patch, re-indexed onto `0..m`.
    local: SpinModel,
    bloch: Vec<[f64; 3]>,
    exact: bool,
}

impl ReducedProblem {
    pub fn a(&self) -> &SupportSet {
        &self.a
    }

    pub fn b(&self) -> &SupportSet {
        &self.b
    }

    pub fn patch(&self) -> &[usize] {
        &self.patch
    }

    pub fn patch_size(&self) -> usize {
        self.patch.len()
    }

    pub fn local_model(&self) -> &SpinModel {
        &self.local
    }

    /// False when built with a non-solvable jump on the patch.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Patch initial state as a density matrix.
    pub fn rho(&self) -> fullsolver::DensityMatrix {
        let state = InitialProductState::new(self.bloch.clone()).expect("validated Bloch vectors");
        fullsolver::DensityMatrix::from_product_state(&state)
    }

    /// Dimension of the Heisenberg invariant subspace, `4^|A|·2^|B|`.
    pub fn invariant_dim(&self) -> usize {
        (1usize << (2 * self.a.len())) << (self.patch.len() - self.a.len())
    }

    /// `r_μ(0) = Π_j Tr(σ^{μ_j} ρ_j)` for a patch-local index.
    fn initial_component(&self, mu: usize) -> f64 {
        let m = self.patch.len();
        (0..m)
            .map(|j| match Pauli::from_code(((mu >> (2 * (m - 1 - j))) & 3) as u8) {
                Pauli::I => 1.0,
                Pauli::X => self.bloch[j][0],
                Pauli::Y => self.bloch[j][1],
                Pauli::Z => self.bloch[j][2],
            })
            .product()
    }

    /// Patch-local indices of strings arbitrary on `A` and `I`/`Z` on `B`.
    pub fn invariant_basis(&self) -> Vec<usize> {
        let m = self.patch.len();
        let on_a: Vec<bool> = self.patch.iter().map(|&s| self.a.contains(s)).collect();
        let mut basis = vec![0usize];
        for (j, a) in on_a.iter().enumerate() {
            let shift = 2 * (m - 1 - j);
            let letters: &[usize] = if *a { &[0, 1, 2, 3] } else { &[0, 1] };
            basis = basis.iter().flat_map(|b| letters.iter().map(move |l| b | (l << shift))).collect();
        }
        basis.sort_unstable();
        basis
    }

    fn local_observable(&self, obs: &PauliString, n: usize) -> Result<PauliString, ReductionError> {
        if obs.len() != n {
            return Err(ReductionError::ObservableLength { expected: n, got: obs.len() });
        }
        if let Some(&site) = obs.support().iter().find(|&&s| !self.a.contains(s)) {
            return Err(ReductionError::ObservableOutsideSupport(site));
        }
        Ok(restrict_string(obs, &self.patch))
    }
}

fn check_state(model: &SpinModel, psi0: &InitialProductState) -> Result<(), ReductionError> {
    if psi0.n_sites() != model.n_sites() {
        return Err(ReductionError::StateLength { expected: model.n_sites(), got: psi0.n_sites() });
    }
    Ok(())
}

fn assemble(
    model: &SpinModel,
    a: SupportSet,
    b: SupportSet,
    keep_coupling: impl Fn(&Coupling) -> bool,
    keep_field: impl Fn(usize) -> bool,
    psi0: &InitialProductState,
    allow_unsolvable: bool,
) -> Result<ReducedProblem, ReductionError> {
    let patch: Vec<usize> = a.union(&b).sites().to_vec();
    let index: BTreeMap<usize, usize> = patch.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let couplings = model
        .couplings()
        .iter()
        .filter(|c| keep_coupling(c))
        .map(|c| Coupling { j: index[&c.j], k: index[&c.k], h: c.h })
        .collect();
    let fields = patch.iter().map(|&s| if keep_field(s) { model.fields()[s] } else { 0.0 }).collect();
    let jumps = model
        .jumps()
        .iter()
        .filter_map(|j| index.get(&j.site).map(|&i| Jump::new(i, j.matrix, j.rate)))
        .collect();
    let local = SpinModel::new(patch.len(), couplings, fields, jumps)?;
    let report = check_solvable(&local);
    if !report.pass && !allow_unsolvable {
        return Err(ReductionError::NotSolvable(report.failing_sites().iter().map(|&i| patch[i]).collect()));
    }
    let bloch = patch
        .iter()
        .map(|&s| [psi0.component(s, Pauli::X), psi0.component(s, Pauli::Y), psi0.component(s, Pauli::Z)])
        .collect();
    Ok(ReducedProblem { a, b, patch, local, bloch, exact: report.pass })
}

/// Patch problem for `A`: couplings touching `A`, fields on `A`, jumps on `A ∪ B`.
///
/// When `A ∪ B` is the whole system every term is kept, so the problem is the
/// full model.
pub fn build_reduced(
    model: &SpinModel,
    a: &SupportSet,
    psi0: &InitialProductState,
    allow_unsolvable: bool,
) -> Result<ReducedProblem, ReductionError> {
    check_state(model, psi0)?;
    let b = neighbor_set(model, a)?;
    if a.len() + b.len() == model.n_sites() {
        return assemble(model, a.clone(), b, |_| true, |_| true, psi0, allow_unsolvable);
    }
    assemble(
        model,
        a.clone(),
        b,
        |c| a.contains(c.j) || a.contains(c.k),
        |s| a.contains(s),
        psi0,
        allow_unsolvable,
    )
}

/// Patch problem on an arbitrary `region ⊇ A` keeping every term inside it.
/// Used to check that sites beyond `A ∪ B` do not change the result.
pub fn build_region(
    model: &SpinModel,
    a: &SupportSet,
    region: &SupportSet,
    psi0: &InitialProductState,
    allow_unsolvable: bool,
) -> Result<ReducedProblem, ReductionError> {
    check_state(model, psi0)?;
    if a.is_empty() {
        return Err(ReductionError::EmptySupport);
    }
    let region = region.union(a);
    region.check(model.n_sites())?;
    let b = SupportSet::new(region.sites().iter().copied().filter(|&s| !a.contains(s)));
    assemble(
        model,
        a.clone(),
        b,
        |c| region.contains(c.j) && region.contains(c.k),
        |s| region.contains(s),
        psi0,
        allow_unsolvable,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub label: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Vec<f64>>,
    pub exact: bool,
    pub patch_size: usize,
    pub method: ReductionMethod,
}

fn resolve(problem: &ReducedProblem, method: ReductionMethod) -> Result<ReductionMethod, ReductionError> {
    let m = problem.patch_size();
    let full = 1usize << (2 * m);
    let inv = problem.invariant_dim();
    let cap = |dim, cap| ReductionError::ResourceCap { sites: m, dim, cap };
    Ok(match method {
        ReductionMethod::Auto if full <= MAX_DENSE_DIM => ReductionMethod::SchrodingerDense,
        ReductionMethod::Auto if inv <= MAX_DENSE_DIM => ReductionMethod::HeisenbergDense,
        ReductionMethod::Auto if m <= MAX_PATCH_SITES => ReductionMethod::SchrodingerAdaptive,
        ReductionMethod::Auto if inv <= MAX_INVARIANT_DIM => ReductionMethod::HeisenbergAdaptive,
        ReductionMethod::Auto => return Err(cap(inv, MAX_INVARIANT_DIM)),
        ReductionMethod::SchrodingerDense if full > 4 * MAX_DENSE_DIM => return Err(cap(full, 4 * MAX_DENSE_DIM)),
        ReductionMethod::HeisenbergDense if inv > 4 * MAX_DENSE_DIM => return Err(cap(inv, 4 * MAX_DENSE_DIM)),
        ReductionMethod::SchrodingerAdaptive if m > MAX_PATCH_SITES => return Err(cap(full, 1 << (2 * MAX_PATCH_SITES))),
        ReductionMethod::HeisenbergAdaptive if inv > MAX_INVARIANT_DIM => return Err(cap(inv, MAX_INVARIANT_DIM)),
        other => other,
    })
}

/// `⟨O(t)⟩` for a Pauli string `obs` (model-wide, supported on `A`).
pub fn evolve_observable(
    problem: &ReducedProblem,
    obs: &PauliString,
    times: &[f64],
    opts: &ReductionOptions,
) -> Result<ObservableSeries, ReductionError> {
    let n = obs.len();
    let local = problem.local_observable(obs, n)?;
    let method = resolve(problem, opts.method)?;
    let values = match method {
        ReductionMethod::SchrodingerDense | ReductionMethod::SchrodingerAdaptive => {
            schrodinger(problem, local.index(), times, method, opts.tol)?
        }
        _ => heisenberg(problem, local.index(), times, method, opts.tol)?,
    };
    Ok(ObservableSeries {
        label: obs.to_string(),
        times: times.to_vec(),
        values,
        stderr: None,
        exact: problem.exact,
        patch_size: problem.patch_size(),
        method,
    })
}

/// Evolution of `O` inside the invariant subspace of the adjoint generator.
pub fn heisenberg_invariant_evolve(
    problem: &ReducedProblem,
    obs: &PauliString,
    times: &[f64],
    opts: &ReductionOptions,
) -> Result<ObservableSeries, ReductionError> {
    let method = match opts.method {
        ReductionMethod::HeisenbergAdaptive => ReductionMethod::HeisenbergAdaptive,
        _ if problem.invariant_dim() <= 4 * MAX_DENSE_DIM => ReductionMethod::HeisenbergDense,
        _ => ReductionMethod::HeisenbergAdaptive,
    };
    evolve_observable(problem, obs, times, &ReductionOptions { method, ..*opts })
}

fn schrodinger(
    problem: &ReducedProblem,
    obs: usize,
    times: &[f64],
    method: ReductionMethod,
    tol: Tolerance,
) -> Result<Vec<f64>, ReductionError> {
    let m = problem.patch_size();
    let support: Vec<usize> = (0..m).collect();
    let generator = PauliGenerator::for_support(&problem.local, &support, Picture::Schrodinger);
    let r0: Vec<f64> = (0..generator.dim()).map(|mu| problem.initial_component(mu)).collect();
    let states = if method == ReductionMethod::SchrodingerDense {
        DensePropagator::new(generator.to_dense()).integrate(&r0, 0.0, times)?
    } else {
        let sparse = generator.to_sparse();
        Dopri5::new(&sparse, tol).integrate(&r0, 0.0, times)?
    };
    Ok(states.iter().map(|r| r[obs]).collect())
}

fn heisenberg(
    problem: &ReducedProblem,
    obs: usize,
    times: &[f64],
    method: ReductionMethod,
    tol: Tolerance,
) -> Result<Vec<f64>, ReductionError> {
    let m = problem.patch_size();
    let support: Vec<usize> = (0..m).collect();
    let generator = PauliGenerator::for_support(&problem.local, &support, Picture::Heisenberg);
    let basis = problem.invariant_basis();
    let (inner, leak, _) = generator.restrict(&basis);
    let mut o0 = vec![0.0; basis.len()];
    let start = basis.binary_search(&obs).expect("observable lies in the invariant subspace");
    o0[start] = 1.0;
    let states = if method == ReductionMethod::HeisenbergDense {
        DensePropagator::new(inner.to_dense()).integrate(&o0, 0.0, times)?
    } else {
        Dopri5::new(&inner, tol).integrate(&o0, 0.0, times)?
    };
    let weights: Vec<f64> = basis.iter().map(|&mu| problem.initial_component(mu)).collect();
    let mut out = vec![0.0; leak.nrows()];
    let mut values = Vec::with_capacity(times.len());
    for (t, o) in times.iter().zip(&states) {
        leak.matvec(o, &mut out);
        let magnitude = out.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if magnitude > LEAK_TOL {
            return Err(ReductionError::Leak { time: *t, magnitude });
        }
        values.push(o.iter().zip(&weights).map(|(a, b)| a * b).sum());
    }
    Ok(values)
}

/// Convenience wrapper: `A` is the support of `obs`.
pub fn expectation_series(
    model: &SpinModel,
    psi0: &InitialProductState,
    obs: &PauliString,
    times: &[f64],
    opts: &ReductionOptions,
) -> Result<ObservableSeries, ReductionError> {
    let a = SupportSet::new(obs.support());
    if a.is_empty() {
        // the identity has expectation one at all times
        return Ok(ObservableSeries {
            label: obs.to_string(),
            times: times.to_vec(),
            values: vec![1.0; times.len()],
            stderr: None,
            exact: true,
            patch_size: 0,
            method: opts.method,
        });
    }
    let problem = build_reduced(model, &a, psi0, opts.allow_unsolvable)?;
    evolve_observable(&problem, obs, times, opts)
}

/// Evaluates many observables in parallel; results keep the input order.
pub fn evolve_batch(
    model: &SpinModel,
    psi0: &InitialProductState,
    observables: &[PauliString],
    times: &[f64],
    opts: &ReductionOptions,
) -> Vec<Result<ObservableSeries, ReductionError>> {
    observables.par_iter().map(|o| expectation_series(model, psi0, o, times, opts)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorSeries {
    pub full: ObservableSeries,
    pub first: ObservableSeries,
    pub second: ObservableSeries,
    /// `⟨σ_j σ_k⟩ − ⟨σ_j⟩⟨σ_k⟩`.
    pub connected: Vec<f64>,
}

/// Equal-time two-point function `⟨σ^μ_j σ^ν_k⟩` and its connected part.
pub fn correlator(
    model: &SpinModel,
    (j, mu): (usize, Pauli),
    (k, nu): (usize, Pauli),
    psi0: &InitialProductState,
    times: &[f64],
    opts: &ReductionOptions,
) -> Result<CorrelatorSeries, ReductionError> {
    let n = model.n_sites();
    if j == k {
        return Err(ReductionError::SameSite);
    }
    for s in [j, k] {
        if s >= n {
            return Err(ReductionError::SiteOutOfRange { site: s, n });
        }
    }
    let mut pair = PauliString::identity(n);
    pair.set(j, mu);
    pair.set(k, nu);
    let full = expectation_series(model, psi0, &pair, times, opts)?;
    let first = expectation_series(model, psi0, &PauliString::single(n, j, mu), times, opts)?;
    let second = expectation_series(model, psi0, &PauliString::single(n, k, nu), times, opts)?;
    let connected = (0..times.len()).map(|i| full.values[i] - first.values[i] * second.values[i]).collect();
    Ok(CorrelatorSeries { full, first, second, connected })
}

/// Evolves the whole model with the brute-force solver, for comparison.
pub fn full_series(
    model: &SpinModel,
    psi0: &InitialProductState,
    observables: &[PauliString],
    times: &[f64],
    tol: Tolerance,
) -> Result<Vec<ObservableSeries>, ReductionError> {
    let lind = Lindbladian::from_model(model)?;
    let rho0 = fullsolver::DensityMatrix::from_product_state(psi0);
    let rows = fullsolver::evolve_expectations(&lind, &rho0, times, observables, EvolveMethod::Adaptive(tol))?;
    Ok(observables
        .iter()
        .enumerate()
        .map(|(i, o)| ObservableSeries {
            label: o.to_string(),
            times: times.to_vec(),
            values: rows.iter().map(|r| r[i]).collect(),
            stderr: None,
            exact: true,
            patch_size: model.n_sites(),
            method: ReductionMethod::SchrodingerAdaptive,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{JumpPreset, LatticeSpec};

    fn chain(n: usize, periodic: bool) -> SpinModel {
        let spec = LatticeSpec::chain(n, periodic, vec![1.0]);
        SpinModel::new(n, spec.couplings(), vec![], vec![]).unwrap()
    }

    fn dephasing_chain(n: usize) -> SpinModel {
        let couplings = (0..n - 1).map(|j| Coupling { j, k: j + 1, h: 0.9 - 0.35 * j as f64 }).collect();
        let jumps = (0..n).map(|j| Jump::preset(j, JumpPreset::DephasingXy, 0.7, 0.3)).collect();
        SpinModel::new(n, couplings, vec![], jumps).unwrap()
    }

    fn grid(k: usize, t_max: f64) -> Vec<f64> {
        (0..=k).map(|i| t_max * i as f64 / k as f64).collect()
    }

    #[test]
    fn neighbor_sets() {
        let open = chain(6, false);
        assert_eq!(neighbor_set(&open, &SupportSet::new([3])).unwrap().sites(), &[2, 4]);
        assert_eq!(neighbor_set(&chain(6, true), &SupportSet::new([0])).unwrap().sites(), &[1, 5]);
        assert_eq!(neighbor_set(&open, &SupportSet::new([2, 5])).unwrap().sites(), &[1, 3, 4]);
        assert_eq!(neighbor_set(&open, &SupportSet::new([])), Err(ReductionError::EmptySupport));
        assert!(matches!(neighbor_set(&open, &SupportSet::new([6])), Err(ReductionError::SiteOutOfRange { .. })));
    }

    #[test]
    fn reduced_hamiltonian_terms() {
        let mut model = dephasing_chain(6);
        model = SpinModel::new(6, model.couplings().to_vec(), vec![0.5; 6], model.jumps().to_vec()).unwrap();
        let psi = InitialProductState::uniform(6, [0.0, 1.0, 0.0]);
        let p = build_reduced(&model, &SupportSet::new([3]), &psi, false).unwrap();
        assert_eq!(p.patch(), &[2, 3, 4]);
        // couplings 2-3 and 3-4 only; field only on site 3
        assert_eq!(p.local_model().couplings().len(), 2);
        assert_eq!(p.local_model().fields(), &[0.0, 0.5, 0.0]);
        assert_eq!(p.local_model().jumps().len(), 3);
        let rho = p.rho();
        let y = crate::model::pauli_matrix(Pauli::Y);
        let one = nalgebra::Matrix2::identity();
        let site = (one + y) * num_complex::Complex64::new(0.5, 0.0);
        let site = nalgebra::DMatrix::from_row_slice(2, 2, &[site[(0, 0)], site[(0, 1)], site[(1, 0)], site[(1, 1)]]);
        let expect = crate::dense::kron(&crate::dense::kron(&site, &site), &site);
        assert!(crate::dense::max_abs(&(rho.matrix() - expect)) < 1e-15);
    }

    #[test]
    fn invariant_dimension() {
        let psi = InitialProductState::uniform(5, [1.0, 0.0, 0.0]);
        let p = build_reduced(&dephasing_chain(5), &SupportSet::new([2]), &psi, false).unwrap();
        assert_eq!(p.invariant_dim(), 16);
        assert_eq!(p.invariant_basis().len(), 16);
    }

    #[test]
    fn pure_ising_z_is_constant() {
        let model = chain(5, false);
        let psi = InitialProductState::uniform(5, [0.6, 0.0, 0.8]);
        let z = PauliString::single(5, 2, Pauli::Z);
        let s = expectation_series(&model, &psi, &z, &grid(10, 3.0), &ReductionOptions::default()).unwrap();
        assert!(s.values.iter().all(|v| (v - 0.8).abs() < 1e-12));
    }

    #[test]
    fn matches_full_solver_on_five_sites() {
        let model = dephasing_chain(5);
        let psi = InitialProductState::new(vec![[0.0, 1.0, 0.0], [0.6, 0.0, 0.8], [1.0, 0.0, 0.0], [0.0, -0.6, 0.8], [0.0, 0.0, 1.0]]).unwrap();
        let times = grid(40, 5.0);
        let obs: Vec<PauliString> = ["IIXII", "IXIII", "IIYZI", "XYIII"].iter().map(|s| s.parse().unwrap()).collect();
        let exact = full_series(&model, &psi, &obs, &times, Tolerance::default()).unwrap();
        for (o, e) in obs.iter().zip(&exact) {
            let reduced = expectation_series(&model, &psi, o, &times, &ReductionOptions::default()).unwrap();
            let a = SupportSet::new(o.support());
            let problem = build_reduced(&model, &a, &psi, false).unwrap();
            let heis = heisenberg_invariant_evolve(&problem, o, &times, &ReductionOptions::default()).unwrap();
            for i in 0..times.len() {
                assert!((reduced.values[i] - e.values[i]).abs() < 1e-6);
                assert!((reduced.values[i] - heis.values[i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn patch_independent_of_chain_length() {
        let times = grid(20, 4.0);
        let series: Vec<Vec<f64>> = [5, 7, 9]
            .iter()
            .map(|&n| {
                let spec = LatticeSpec::chain(n, true, vec![1.0]);
                let jumps = (0..n).map(|j| Jump::preset(j, JumpPreset::RotatedTfim, 0.0, 0.25)).collect();
                let model = SpinModel::new(n, spec.couplings(), vec![], jumps).unwrap();
                let psi = InitialProductState::uniform(n, [0.0, 1.0, 0.0]);
                expectation_series(&model, &psi, &PauliString::single(n, 2, Pauli::Y), &times, &ReductionOptions::default())
                    .unwrap()
                    .values
            })
            .collect();
        for s in &series[1..] {
            for (a, b) in s.iter().zip(&series[0]) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn region_enlargement_does_not_change_result() {
        let model = dephasing_chain(6);
        let psi = InitialProductState::new((0..6).map(|j| [0.1 * j as f64, 0.5, 0.3]).collect()).unwrap();
        let times = grid(15, 3.0);
        let obs = PauliString::single(6, 2, Pauli::X);
        let a = SupportSet::new([2]);
        let base = evolve_observable(&build_reduced(&model, &a, &psi, false).unwrap(), &obs, &times, &Default::default()).unwrap();
        let big = build_region(&model, &a, &SupportSet::new([0, 1, 3, 4]), &psi, false).unwrap();
        let wide = evolve_observable(&big, &obs, &times, &Default::default()).unwrap();
        for (x, y) in base.values.iter().zip(&wide.values) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn distant_correlator_factorizes_and_near_one_does_not() {
        let model = dephasing_chain(8);
        let psi = InitialProductState::uniform(8, [0.6, 0.0, 0.8]);
        let times = grid(30, 6.0);
        let far = correlator(&model, (1, Pauli::X), (5, Pauli::Y), &psi, &times, &Default::default()).unwrap();
        assert!(far.connected.iter().all(|c| c.abs() < 1e-10));
        let near = correlator(&model, (2, Pauli::X), (3, Pauli::X), &psi, &times, &Default::default()).unwrap();
        assert!(near.connected.iter().any(|c| c.abs() > 1e-3));
        assert!((near.full.values[0] - 0.36).abs() < 1e-12);
    }

    #[test]
    fn unsolvable_patch_is_rejected_or_leaks() {
        let bad = crate::model::JumpMatrix::new(
            crate::pauli::C1,
            crate::pauli::C1,
            crate::pauli::C1,
            -crate::pauli::C1,
        ) * num_complex::Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut jumps: Vec<Jump> = dephasing_chain(5).jumps().to_vec();
        jumps.push(Jump::new(3, bad, 0.5));
        let model = dephasing_chain(5).with_jumps(jumps).unwrap();
        let psi = InitialProductState::uniform(5, [1.0, 0.0, 0.0]);
        let a = SupportSet::new([2]);
        assert_eq!(build_reduced(&model, &a, &psi, false).unwrap_err(), ReductionError::NotSolvable(vec![3]));
        let p = build_reduced(&model, &a, &psi, true).unwrap();
        assert!(!p.is_exact());
        let obs = PauliString::single(5, 2, Pauli::X);
        let err = heisenberg_invariant_evolve(&p, &obs, &grid(5, 1.0), &Default::default()).unwrap_err();
        assert!(matches!(err, ReductionError::Leak { .. }));
    }

    #[test]
    fn whole_system_patch_keeps_every_term() {
        let model = dephasing_chain(3);
        let psi = InitialProductState::uniform(3, [0.0, 1.0, 0.0]);
        let obs = PauliString::single(3, 1, Pauli::Y);
        let p = build_reduced(&model, &SupportSet::new([1]), &psi, false).unwrap();
        assert_eq!(p.local_model().couplings().len(), 2);
        let times = grid(10, 2.0);
        let r = evolve_observable(&p, &obs, &times, &Default::default()).unwrap();
        let f = full_series(&model, &psi, &[obs], &times, Tolerance::default()).unwrap();
        for (x, y) in r.values.iter().zip(&f[0].values) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn batch_preserves_order() {
        let model = dephasing_chain(5);
        let psi = InitialProductState::uniform(5, [0.0, 1.0, 0.0]);
        let obs: Vec<PauliString> = (0..5).map(|j| PauliString::single(5, j, Pauli::Y)).collect();
        let out = evolve_batch(&model, &psi, &obs, &grid(4, 1.0), &Default::default());
        for (o, r) in obs.iter().zip(out) {
            assert_eq!(r.unwrap().label, o.to_string());
        }
    }
}
