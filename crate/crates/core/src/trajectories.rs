// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Ising dynamics under fluctuating transverse fields, averaged over noise.
//!
//! Each trajectory is a pure state evolved by Strang splitting: half an Ising
//! step, a noise step `exp(−i W_j σ_j)` with `W_j ~ N(0, γ dt)` on every site,
//! then the other half. The noise phase is integrated exactly over the step,
//! so the ensemble average reproduces dephasing with rate `γ`.
//!
//! Trajectory `k` draws from the ChaCha stream `k` of the master seed, and
//! ensemble sums use a fixed pairwise tree over trajectory indices. Results
//! are therefore independent of the number of worker threads.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{rotate_bloch_about_y, Coupling, InitialProductState, Jump, JumpPreset, ModelError, SpinModel};
use crate::pauli::{Pauli, PauliString};
use crate::reduction::{expectation_series, ObservableSeries, ReductionError, ReductionOptions};

/// Largest system simulated as a state vector.
pub const MAX_TRAJECTORY_SITES: usize = 14;
/// Largest allowed `γ·dt` and `J·dt`.
pub const MAX_STEP_PRODUCT: f64 = 0.1;

#[derive(Debug, Error, PartialEq)]
pub enum TrajectoryError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("state-vector simulation limited to {cap} sites, got {n}")]
    ResourceCap { n: usize, cap: usize },
    #[error("time step too large: {which}·dt = {value} exceeds {MAX_STEP_PRODUCT}")]
    StepTooLarge { which: &'static str, value: f64 },
    #[error("time step must be positive and finite")]
    BadStep,
    #[error("t_max = {t_max} is not a whole number of steps of {dt}")]
    GridMismatch { t_max: f64, dt: f64 },
    #[error("trajectories need a pure initial product state")]
    MixedState,
    #[error("initial state has {got} sites, model has {expected}")]
    StateLength { expected: usize, got: usize },
    #[error("at least one trajectory is required")]
    NoTrajectories,
    #[error("observable has {got} sites, model has {expected}")]
    ObservableLength { expected: usize, got: usize },
    #[error("time grids or observables of the ensemble and reference differ")]
    ReferenceMismatch,
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Z,
}

/// Ising couplings along one axis plus white-noise fields along another.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryModel {
    pub n_sites: usize,
    /// Total coefficient of `σ^a_j σ^a_k` per unordered pair.
    pub couplings: Vec<Coupling>,
    pub ising_axis: Axis,
    pub noise_axis: Axis,
    /// Noise strength: `⟨Δ_j(t) Δ_k(t')⟩ = γ δ_jk δ(t − t')`.
    pub gamma: f64,
}

impl TrajectoryModel {
    pub fn new(
        n_sites: usize,
        couplings: Vec<Coupling>,
        ising_axis: Axis,
        noise_axis: Axis,
        gamma: f64,
    ) -> Result<Self, TrajectoryError> {
        if n_sites > MAX_TRAJECTORY_SITES {
            return Err(TrajectoryError::ResourceCap { n: n_sites, cap: MAX_TRAJECTORY_SITES });
        }
        if !gamma.is_finite() {
            return Err(ModelError::NonFinite("noise strength").into());
        }
        if gamma < 0.0 {
            return Err(ModelError::NegativeRate { site: 0, rate: gamma }.into());
        }
        // reuse the coupling validation of the spin model
        let checked = SpinModel::new(n_sites, couplings, vec![], vec![])?;
        Ok(Self { n_sites, couplings: checked.couplings().to_vec(), ising_axis, noise_axis, gamma })
    }

    /// `x-x` ring with `z` noise.
    pub fn fluctuating_field_ring(n: usize, coupling: f64, gamma: f64) -> Result<Self, TrajectoryError> {
        let couplings = (0..n).map(|j| Coupling { j, k: (j + 1) % n, h: coupling }).collect();
        Self::new(n, couplings, Axis::X, Axis::Z, gamma)
    }

    pub fn max_coupling(&self) -> f64 {
        self.couplings.iter().map(|c| c.h.abs()).fold(0.0, f64::max)
    }

    pub fn default_dt(&self) -> f64 {
        let scale = self.max_coupling().max(self.gamma);
        if scale > 0.0 {
            0.01 / scale
        } else {
            0.01
        }
    }

    /// Whether the solvable form needs the frame change `X → −Z, Z → X`.
    fn needs_rotation(&self) -> bool {
        self.ising_axis == Axis::X
    }

    /// The averaged dynamics as a solvable spin model (z-z Ising plus dephasing).
    pub fn averaged_model(&self) -> Result<SpinModel, TrajectoryError> {
        let noise = match (self.needs_rotation(), self.noise_axis) {
            (false, Axis::Z) | (true, Axis::X) => JumpPreset::DephasingZ,
            (false, Axis::X) | (true, Axis::Z) => JumpPreset::DephasingXy,
        };
        let jumps = if self.gamma > 0.0 {
            (0..self.n_sites).map(|j| Jump::preset(j, noise, 0.0, self.gamma)).collect()
        } else {
            vec![]
        };
        Ok(SpinModel::new(self.n_sites, self.couplings.clone(), vec![], jumps)?)
    }

    /// Maps an observable and state into the frame of [`Self::averaged_model`].
    /// Returns the sign picked up by the observable.
    pub fn to_averaged_frame(&self, obs: &PauliString, psi0: &InitialProductState) -> (f64, PauliString, InitialProductState) {
        if !self.needs_rotation() {
            return (1.0, obs.clone(), psi0.clone());
        }
        let mut sign = 1.0;
        let letters = obs
            .letters()
            .iter()
            .map(|p| match p {
                Pauli::X => {
                    sign = -sign;
                    Pauli::Z
                }
                Pauli::Z => Pauli::X,
                other => *other,
            })
            .collect();
        let bloch = (0..psi0.n_sites())
            .map(|s| rotate_bloch_about_y([psi0.component(s, Pauli::X), psi0.component(s, Pauli::Y), psi0.component(s, Pauli::Z)]))
            .collect();
        (sign, PauliString::new(letters), InitialProductState::new(bloch).expect("rotation preserves the norm"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub t_max: f64,
    /// Step size; `None` selects `0.01 / max(J, γ)`.
    pub dt: Option<f64>,
    /// Record every `sample_every` steps.
    pub sample_every: usize,
    pub trajectories: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEnsemble {
    pub trajectories: usize,
    pub dt: f64,
    pub seed: u64,
    pub times: Vec<f64>,
    pub labels: Vec<String>,
    /// `mean[o][t]` for observable `o` at sample `t`.
    pub mean: Vec<Vec<f64>>,
    /// Sample standard deviation over `√M`; zero when `M = 1`.
    pub stderr: Vec<Vec<f64>>,
}

/// Precomputed step operators.
struct Stepper {
    n: usize,
    ising_axis: Axis,
    noise_axis: Axis,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
    noise: Normal<f64>,
}

fn bit(n: usize, site: usize) -> usize {
    1 << (n - 1 - site)
}

fn spin(b: usize, mask: usize) -> f64 {
    if b & mask == 0 {
        1.0
    } else {
        -1.0
    }
}

fn parity(b: usize) -> f64 {
    if b.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl Stepper {
    fn new(model: &TrajectoryModel, dt: f64) -> Self {
        let n = model.n_sites;
        let energies: Vec<f64> = (0..1usize << n)
            .map(|b| model.couplings.iter().map(|c| c.h * spin(b, bit(n, c.j)) * spin(b, bit(n, c.k))).sum())
            .collect();
        let phases = |tau: f64| energies.iter().map(|e| Complex64::from_polar(1.0, -e * tau)).collect();
        Self {
            n,
            ising_axis: model.ising_axis,
            noise_axis: model.noise_axis,
            half: phases(0.5 * dt),
            full: phases(dt),
            noise: Normal::new(0.0, (model.gamma * dt).sqrt()).expect("finite noise width"),
        }
    }

    fn hadamard_layer(&self, psi: &mut [Complex64]) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for site in 0..self.n {
            let m = bit(self.n, site);
            for b0 in (0..psi.len()).filter(|b| b & m == 0) {
                let (a, c) = (psi[b0], psi[b0 | m]);
                psi[b0] = (a + c) * s;
                psi[b0 | m] = (a - c) * s;
            }
        }
    }

    fn ising(&self, psi: &mut [Complex64], phases: &[Complex64]) {
        if self.ising_axis == Axis::X {
            self.hadamard_layer(psi);
        }
        psi.iter_mut().zip(phases).for_each(|(a, p)| *a *= p);
        if self.ising_axis == Axis::X {
            self.hadamard_layer(psi);
        }
    }

    /// `Π_j exp(−i W_j σ_j)`.
    fn noise_step(&self, psi: &mut [Complex64], rng: &mut ChaCha8Rng) {
        for site in 0..self.n {
            let w = self.noise.sample(rng);
            let m = bit(self.n, site);
            match self.noise_axis {
                Axis::Z => {
                    let up = Complex64::from_polar(1.0, -w);
                    let down = up.conj();
                    psi.iter_mut().enumerate().for_each(|(b, a)| *a *= if b & m == 0 { up } else { down });
                }
                Axis::X => {
                    let (c, s) = (Complex64::from(w.cos()), Complex64::new(0.0, -w.sin()));
                    for b0 in (0..psi.len()).filter(|b| b & m == 0) {
                        let (a, d) = (psi[b0], psi[b0 | m]);
                        psi[b0] = c * a + s * d;
                        psi[b0 | m] = s * a + c * d;
                    }
                }
            }
        }
    }
}

/// `⟨ψ|P|ψ⟩` for a Pauli string.
pub fn pauli_expectation(psi: &[Complex64], p: &PauliString) -> f64 {
    let (x, z) = p.masks();
    let phase = crate::pauli::CI.powu(p.count_y() as u32);
    let total: Complex64 = (0..psi.len())
        .map(|b| psi[b ^ x].conj() * psi[b] * parity(b & z) * phase)
        .sum();
    total.re
}

fn validate(
    model: &TrajectoryModel,
    psi0: &InitialProductState,
    observables: &[PauliString],
    cfg: &EnsembleConfig,
) -> Result<(f64, usize), TrajectoryError> {
    let n = model.n_sites;
    if psi0.n_sites() != n {
        return Err(TrajectoryError::StateLength { expected: n, got: psi0.n_sites() });
    }
    if !psi0.is_pure() {
        return Err(TrajectoryError::MixedState);
    }
    if let Some(o) = observables.iter().find(|o| o.len() != n) {
        return Err(TrajectoryError::ObservableLength { expected: n, got: o.len() });
    }
    if cfg.trajectories == 0 {
        return Err(TrajectoryError::NoTrajectories);
    }
    let dt = cfg.dt.unwrap_or_else(|| model.default_dt());
    if !(dt > 0.0 && dt.is_finite()) || cfg.sample_every == 0 {
        return Err(TrajectoryError::BadStep);
    }
    for (which, value) in [("γ", model.gamma * dt), ("J", model.max_coupling() * dt)] {
        if value > MAX_STEP_PRODUCT {
            return Err(TrajectoryError::StepTooLarge { which, value });
        }
    }
    let steps = (cfg.t_max / dt).round();
    if (steps * dt - cfg.t_max).abs() > 1e-9 * cfg.t_max.max(1.0) || steps < 0.0 {
        return Err(TrajectoryError::GridMismatch { t_max: cfg.t_max, dt });
    }
    Ok((dt, steps as usize))
}

/// Observable values of one trajectory, laid out as `[sample][observable]`.
pub fn run_trajectory(
    model: &TrajectoryModel,
    psi0: &InitialProductState,
    observables: &[PauliString],
    cfg: &EnsembleConfig,
    index: u64,
) -> Result<Vec<f64>, TrajectoryError> {
    let (dt, steps) = validate(model, psi0, observables, cfg)?;
    let stepper = Stepper::new(model, dt);
    Ok(trajectory(&stepper, psi0, observables, steps, cfg.sample_every, cfg.seed, index))
}

fn trajectory(
    stepper: &Stepper,
    psi0: &InitialProductState,
    observables: &[PauliString],
    steps: usize,
    every: usize,
    seed: u64,
    index: u64,
) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut psi = psi0.state_vector();
    let mut out = Vec::with_capacity((steps / every + 1) * observables.len());
    let record = |psi: &[Complex64], out: &mut Vec<f64>| out.extend(observables.iter().map(|o| pauli_expectation(psi, o)));
    record(&psi, &mut out);
    if steps == 0 {
        return out;
    }
    // consecutive half steps are merged unless a sample sits between them
    stepper.ising(&mut psi, &stepper.half);
    for step in 1..=steps {
        stepper.noise_step(&mut psi, &mut rng);
        let sample = step % every == 0;
        if sample || step == steps {
            stepper.ising(&mut psi, &stepper.half);
            if sample {
                record(&psi, &mut out);
            }
            if step < steps {
                stepper.ising(&mut psi, &stepper.half);
            }
        } else {
            stepper.ising(&mut psi, &stepper.full);
        }
    }
    out
}

/// Sum over rows with a fixed binary tree.
fn pairwise_sum(rows: &[Vec<f64>]) -> Vec<f64> {
    match rows.len() {
        0 => vec![],
        1 => rows[0].clone(),
        len => {
            let (a, b) = rows.split_at(len / 2);
            let mut left = pairwise_sum(a);
            left.iter_mut().zip(pairwise_sum(b)).for_each(|(x, y)| *x += y);
            left
        }
    }
}

pub fn run_ensemble(
    model: &TrajectoryModel,
    psi0: &InitialProductState,
    observables: &[PauliString],
    cfg: &EnsembleConfig,
) -> Result<TrajectoryEnsemble, TrajectoryError> {
    let (dt, steps) = validate(model, psi0, observables, cfg)?;
    let stepper = Stepper::new(model, dt);
    let rows: Vec<Vec<f64>> = (0..cfg.trajectories as u64)
        .into_par_iter()
        .map(|k| trajectory(&stepper, psi0, observables, steps, cfg.sample_every, cfg.seed, k))
        .collect();
    let m = rows.len() as f64;
    // deviations from the first trajectory keep identical ensembles exactly zero
    let shifted: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().zip(&rows[0]).map(|(v, c)| v - c).collect()).collect();
    let squares: Vec<Vec<f64>> = shifted.iter().map(|r| r.iter().map(|v| v * v).collect()).collect();
    let sum = pairwise_sum(&shifted);
    let mean: Vec<f64> = sum.iter().zip(&rows[0]).map(|(s, c)| c + s / m).collect();
    let stderr: Vec<f64> = if rows.len() > 1 {
        pairwise_sum(&squares)
            .iter()
            .zip(&sum)
            .map(|(q, s)| ((q - s * s / m).max(0.0) / (m - 1.0)).sqrt() / m.sqrt())
            .collect()
    } else {
        vec![0.0; mean.len()]
    };
    let n_obs = observables.len();
    let samples = steps / cfg.sample_every + 1;
    let column = |v: &[f64], o: usize| (0..samples).map(|t| v[t * n_obs + o]).collect();
    Ok(TrajectoryEnsemble {
        trajectories: cfg.trajectories,
        dt,
        seed: cfg.seed,
        times: (0..samples).map(|t| (t * cfg.sample_every) as f64 * dt).collect(),
        labels: observables.iter().map(|o| o.to_string()).collect(),
        mean: (0..n_obs).map(|o| column(&mean, o)).collect(),
        stderr: (0..n_obs).map(|o| column(&stderr, o)).collect(),
    })
}

/// Exact noise-averaged series from the patch reduction.
pub fn exact_reference(
    model: &TrajectoryModel,
    psi0: &InitialProductState,
    observables: &[PauliString],
    times: &[f64],
) -> Result<Vec<ObservableSeries>, TrajectoryError> {
    let averaged = model.averaged_model()?;
    observables
        .iter()
        .map(|o| {
            let (sign, obs, state) = model.to_averaged_frame(o, psi0);
            let mut s = expectation_series(&averaged, &state, &obs, times, &ReductionOptions::default())?;
            s.values.iter_mut().for_each(|v| *v *= sign);
            s.label = o.to_string();
            Ok(s)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub trajectories: usize,
    /// `(mean − exact) / stderr`, per observable and sample.
    pub z_scores: Vec<Vec<f64>>,
    pub fraction_within_3: f64,
    /// Root-mean-square of `mean − exact` over all observables and samples.
    pub rms: f64,
    pub max_abs_z: f64,
}

/// Compares an ensemble with exact series on the same grid.
pub fn convergence_report(ensemble: &TrajectoryEnsemble, exact: &[ObservableSeries]) -> Result<ConvergenceReport, TrajectoryError> {
    if exact.len() != ensemble.mean.len() {
        return Err(TrajectoryError::ReferenceMismatch);
    }
    let mut z_scores = Vec::new();
    let (mut within, mut count, mut sq) = (0usize, 0usize, 0.0);
    for (o, reference) in exact.iter().enumerate() {
        let same_grid = reference.times.len() == ensemble.times.len()
            && reference.times.iter().zip(&ensemble.times).all(|(a, b)| (a - b).abs() <= 1e-9 * b.abs().max(1.0));
        if !same_grid {
            return Err(TrajectoryError::ReferenceMismatch);
        }
        let z: Vec<f64> = (0..ensemble.times.len())
            .map(|t| {
                let diff = ensemble.mean[o][t] - reference.values[t];
                sq += diff * diff;
                let se = ensemble.stderr[o][t];
                if se > 0.0 {
                    diff / se
                } else if diff.abs() < 1e-12 {
                    0.0
                } else {
                    diff.signum() * f64::INFINITY
                }
            })
            .collect();
        within += z.iter().filter(|v| v.abs() <= 3.0).count();
        count += z.len();
        z_scores.push(z);
    }
    let max_abs_z = z_scores.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(ConvergenceReport {
        trajectories: ensemble.trajectories,
        z_scores,
        fraction_within_3: if count == 0 { 1.0 } else { within as f64 / count as f64 },
        rms: if count == 0 { 0.0 } else { (sq / count as f64).sqrt() },
        max_abs_z,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    /// `(M, rms)` pairs in increasing `M`.
    pub points: Vec<(usize, f64)>,
    /// `rms(M_first) / rms(M_last)`.
    pub ratio: f64,
    /// `√(M_last / M_first)`.
    pub expected: f64,
    pub within_factor: bool,
}

/// Checks `rms ∝ M^{−1/2}` between the smallest and largest ensembles.
pub fn scaling_check(reports: &[ConvergenceReport], factor: f64) -> ScalingReport {
    let mut points: Vec<(usize, f64)> = reports.iter().map(|r| (r.trajectories, r.rms)).collect();
    points.sort_by_key(|p| p.0);
    let (first, last) = (points[0], points[points.len() - 1]);
    let ratio = first.1 / last.1;
    let expected = (last.0 as f64 / first.0 as f64).sqrt();
    ScalingReport { within_factor: ratio >= expected / factor && ratio <= expected * factor, points, ratio, expected }
}

/// Norm drift of a single trajectory's state after `steps` steps.
pub fn norm_after(model: &TrajectoryModel, psi0: &InitialProductState, dt: f64, steps: usize, seed: u64) -> f64 {
    let stepper = Stepper::new(model, dt);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut psi = psi0.state_vector();
    for _ in 0..steps {
        stepper.ising(&mut psi, &stepper.half);
        stepper.noise_step(&mut psi, &mut rng);
        stepper.ising(&mut psi, &stepper.half);
    }
    psi.iter().map(|a| a.norm_sqr()).sum::<f64>()
}
