// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Time integration of linear ODEs `dx/dt = A x`.
//!
//! [`Dopri5`] is an embedded Runge-Kutta 5(4) pair with error control. The
//! integrator is never restarted at output times: a step is shortened to hit
//! an output exactly and the controller's proposal carries over.
//! [`DensePropagator`] uses the matrix exponential for small systems.

use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IntegrateError {
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("output times must be non-decreasing and start at or after t0")]
    BadTimes,
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
}

pub trait Scalar: Copy + Send + Sync + Default + Add<Output = Self> + Mul<f64, Output = Self> {
    fn modulus(self) -> f64;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Matrix-free linear map.
pub trait LinearOp<T> {
    fn dim(&self) -> usize;
    /// Overwrites `y` with `A x`.
    fn apply(&self, x: &[T], y: &mut [T]);
}

impl<T, F> LinearOp<T> for (usize, F)
where
    F: Fn(&[T], &mut [T]),
{
    fn dim(&self) -> usize {
        self.0
    }
    fn apply(&self, x: &[T], y: &mut [T]) {
        (self.1)(x, y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-12 }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

// Dormand–Prince coefficients.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive Dormand–Prince integrator for autonomous linear systems.
pub struct Dopri5<'a, T, A: LinearOp<T>> {
    op: &'a A,
    tol: Tolerance,
    stats: StepStats,
    k: [Vec<T>; 7],
    tmp: Vec<T>,
    y_new: Vec<T>,
}

impl<'a, T: Scalar, A: LinearOp<T>> Dopri5<'a, T, A> {
    pub fn new(op: &'a A, tol: Tolerance) -> Self {
        let n = op.dim();
        let zero = || vec![T::default(); n];
        Self {
            op,
            tol,
            stats: StepStats::default(),
            k: [zero(), zero(), zero(), zero(), zero(), zero(), zero()],
            tmp: zero(),
            y_new: zero(),
        }
    }

    pub fn stats(&self) -> &StepStats {
        &self.stats
    }

    fn combine(&mut self, y: &[T], h: f64, coeffs: &[(usize, f64)]) {
        for (i, out) in self.tmp.iter_mut().enumerate() {
            let mut acc = y[i];
            for &(s, c) in coeffs {
                acc = acc + self.k[s][i] * (h * c);
            }
            *out = acc;
        }
    }

    fn stage(&mut self, y: &[T], h: f64, coeffs: &[(usize, f64)], target: usize) {
        self.combine(y, h, coeffs);
        let (tmp, k) = (&self.tmp, &mut self.k[target]);
        self.op.apply(tmp, k);
    }

    fn error_norm(&self, y: &[T], h: f64) -> f64 {
        let n = y.len().max(1);
        let sum: f64 = (0..y.len())
            .map(|i| {
                let e = self.k[0][i] * E1
                    + self.k[2][i] * E3
                    + self.k[3][i] * E4
                    + self.k[4][i] * E5
                    + self.k[5][i] * E6
                    + self.k[6][i] * E7;
                let scale = self.tol.atol + self.tol.rtol * y[i].modulus().max(self.y_new[i].modulus());
                let r = (e * h).modulus() / scale;
                r * r
            })
            .sum();
        (sum / n as f64).sqrt()
    }

    fn initial_step(&mut self, y: &[T]) -> f64 {
        let scale = |v: T, yi: T| v.modulus() / (self.tol.atol + self.tol.rtol * yi.modulus());
        let d0 = rms(y.iter().map(|v| scale(*v, *v)));
        let d1 = rms(self.k[0].iter().zip(y).map(|(f, yi)| scale(*f, *yi)));
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        // second derivative estimate from one Euler step
        for (t, (yi, fi)) in self.tmp.iter_mut().zip(y.iter().zip(&self.k[0])) {
            *t = *yi + *fi * h0;
        }
        let (tmp, k1) = (&self.tmp, &mut self.k[1]);
        self.op.apply(tmp, k1);
        let d2 = rms(
            self.k[1]
                .iter()
                .zip(&self.k[0])
                .zip(y)
                .map(|((a, b), yi)| scale(*a + *b * -1.0, *yi)),
        ) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1)
    }

    /// Integrates from `t0` and records the state at every time in `times`.
    pub fn integrate(&mut self, y0: &[T], t0: f64, times: &[f64]) -> Result<Vec<Vec<T>>, IntegrateError> {
        if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|t| *t < t0) {
            return Err(IntegrateError::BadTimes);
        }
        let mut y = y0.to_vec();
        let mut t = t0;
        let mut out = Vec::with_capacity(times.len());
        let (k0, op) = (&mut self.k[0], self.op);
        op.apply(&y, k0);
        let mut h = self.initial_step(&y);
        for &target in times {
            while t < target {
                let remaining = target - t;
                let clipped = h >= remaining;
                let step = if clipped { remaining } else { h };
                let err = self.try_step(&y, step);
                if !err.is_finite() {
                    return Err(IntegrateError::NonFinite(t));
                }
                if err <= 1.0 {
                    t = if clipped { target } else { t + step };
                    std::mem::swap(&mut y, &mut self.y_new);
                    // FSAL: the last stage is the derivative at the new point
                    self.k.swap(0, 6);
                    self.stats.accepted += 1;
                    let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    let proposal = step * factor;
                    // a step shortened to land on an output does not shrink h
                    h = if clipped { h.max(proposal) } else { proposal };
                } else {
                    self.stats.rejected += 1;
                    h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                }
                if h < 1e-14 * t.abs().max(1.0) {
                    return Err(IntegrateError::StepUnderflow(t));
                }
            }
            out.push(y.clone());
        }
        Ok(out)
    }

    fn try_step(&mut self, y: &[T], h: f64) -> f64 {
        self.stage(y, h, &[(0, A21)], 1);
        self.stage(y, h, &[(0, A31), (1, A32)], 2);
        self.stage(y, h, &[(0, A41), (1, A42), (2, A43)], 3);
        self.stage(y, h, &[(0, A51), (1, A52), (2, A53), (3, A54)], 4);
        self.stage(y, h, &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], 5);
        self.combine(y, h, &[(0, B1), (2, B3), (3, B4), (4, B5), (5, B6)]);
        std::mem::swap(&mut self.tmp, &mut self.y_new);
        let (y_new, k6) = (&self.y_new, &mut self.k[6]);
        self.op.apply(y_new, k6);
        if self.y_new.iter().any(|v| !v.is_finite()) {
            return f64::NAN;
        }
        self.error_norm(y, h)
    }
}

fn rms(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v * v, n + 1));
    if n == 0 {
        0.0
    } else {
        (sum / n as f64).sqrt()
    }
}

/// Propagation by dense matrix exponentials, cached per distinct step.
pub struct DensePropagator {
    generator: DMatrix<f64>,
    cache: Vec<(f64, DMatrix<f64>)>,
}

impl DensePropagator {
    pub fn new(generator: DMatrix<f64>) -> Self {
        Self {
            generator,
            cache: Vec::new(),
        }
    }

    fn exp_for(&mut self, dt: f64) -> &DMatrix<f64> {
        let pos = self
            .cache
            .iter()
            .position(|(h, _)| (h - dt).abs() <= 1e-14 * dt.abs().max(1.0));
        let idx = match pos {
            Some(i) => i,
            None => {
                let m = (&self.generator * dt).exp();
                self.cache.push((dt, m));
                self.cache.len() - 1
            }
        };
        &self.cache[idx].1
    }

    pub fn integrate(&mut self, y0: &[f64], t0: f64, times: &[f64]) -> Result<Vec<Vec<f64>>, IntegrateError> {
        if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|t| *t < t0) {
            return Err(IntegrateError::BadTimes);
        }
        let mut y = nalgebra::DVector::from_column_slice(y0);
        let mut t = t0;
        let mut out = Vec::with_capacity(times.len());
        for &target in times {
            let dt = target - t;
            if dt > 0.0 {
                y = self.exp_for(dt) * y;
                t = target;
            }
            out.push(y.as_slice().to_vec());
        }
        Ok(out)
    }
}
