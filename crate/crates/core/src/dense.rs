// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Small dense helpers for operators on `n` qubits (site 0 is the MSB).

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::pauli::C0;

/// `op` acting on `site`, identity elsewhere.
pub fn embed(op: &Matrix2<Complex64>, site: usize, n: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let bit = 1usize << (n - 1 - site);
    let mut m = DMatrix::from_element(dim, dim, C0);
    for col in 0..dim {
        let b = usize::from(col & bit != 0);
        for a in 0..2 {
            let v = op[(a, b)];
            if v != C0 {
                let row = if a == 1 { col | bit } else { col & !bit };
                m[(row, col)] += v;
            }
        }
    }
    m
}

/// `op_site · m` without forming the embedded operator.
pub fn apply_left(op: &Matrix2<Complex64>, site: usize, n: usize, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let bit = 1usize << (n - 1 - site);
    let mut out = DMatrix::from_element(dim, m.ncols(), C0);
    for r0 in (0..dim).filter(|r| r & bit == 0) {
        let r1 = r0 | bit;
        for c in 0..m.ncols() {
            let a = m[(r0, c)];
            let b = m[(r1, c)];
            out[(r0, c)] = op[(0, 0)] * a + op[(0, 1)] * b;
            out[(r1, c)] = op[(1, 0)] * a + op[(1, 1)] * b;
        }
    }
    out
}

/// `m · op_site`.
pub fn apply_right(m: &DMatrix<Complex64>, op: &Matrix2<Complex64>, site: usize, n: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let bit = 1usize << (n - 1 - site);
    let mut out = DMatrix::from_element(m.nrows(), dim, C0);
    for c0 in (0..dim).filter(|c| c & bit == 0) {
        let c1 = c0 | bit;
        for r in 0..m.nrows() {
            let a = m[(r, c0)];
            let b = m[(r, c1)];
            out[(r, c0)] = a * op[(0, 0)] + b * op[(1, 0)];
            out[(r, c1)] = a * op[(0, 1)] + b * op[(1, 1)];
        }
    }
    out
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::from_element(ar * br, ac * bc, C0);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == C0 {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{Pauli, PauliString};

    fn pauli2(p: Pauli) -> Matrix2<Complex64> {
        let m = p.matrix();
        Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    #[test]
    fn embedding_matches_pauli_strings() {
        let e = embed(&pauli2(Pauli::Y), 1, 3);
        let s = PauliString::single(3, 1, Pauli::Y).to_matrix();
        assert!((e - s).norm() < 1e-15);
    }

    #[test]
    fn local_application_matches_embedding() {
        let n = 3;
        let m = PauliString::from_index(n, 27).to_matrix() + PauliString::from_index(n, 41).to_matrix();
        let op = Matrix2::new(
            Complex64::new(0.3, 0.1),
            Complex64::new(-1.0, 0.2),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.7),
        );
        for site in 0..n {
            let e = embed(&op, site, n);
            assert!((apply_left(&op, site, n, &m) - &e * &m).norm() < 1e-13);
            assert!((apply_right(&m, &op, site, n) - &m * &e).norm() < 1e-13);
        }
    }
}
