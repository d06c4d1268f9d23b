// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Pauli-string algebra and the operator-vector (Liouville space) picture.
//!
//! Operators on `n` spin-1/2 sites are expanded in the Hermitian basis of
//! Pauli strings. Within one site the letters are ordered `(1, z, x, y)`;
//! multi-site indices are base-4 numbers with site 0 as the most significant
//! digit. The digit of a letter doubles as its symplectic encoding: bit 0 is
//! the `z` component and bit 1 the `x` component, so `Y = X | Z`.
//!
//! Computational basis states use the same convention: site 0 is the most
//! significant bit, and bit value 0 is the `σ^z = +1` state.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub const C0: Complex64 = Complex64::new(0.0, 0.0);
pub const C1: Complex64 = Complex64::new(1.0, 0.0);
pub const CI: Complex64 = Complex64::new(0.0, 1.0);

/// Threshold below which imaginary parts of hermiticity-preserving maps are
/// dropped.
pub const IMAG_DUST: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum PauliError {
    #[error("length mismatch: {0} vs {1} sites")]
    LengthMismatch(usize, usize),
    #[error("invalid Pauli letter {0:?}")]
    InvalidLetter(char),
    #[error("superoperator is not linear: residual {residual:.3e} on basis pair ({mu}, {nu})")]
    Nonlinear { mu: usize, nu: usize, residual: f64 },
    #[error("operator dimension {got} does not match {expected}")]
    Dimension { expected: usize, got: usize },
}

/// A single-site Pauli letter. The discriminant is the basis position in
/// the `(1, z, x, y)` ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Pauli {
    I = 0,
    Z = 1,
    X = 2,
    Y = 3,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::Z, Pauli::X, Pauli::Y];

    pub fn from_code(code: u8) -> Pauli {
        Self::ALL[(code & 3) as usize]
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn has_x(self) -> bool {
        self.code() & 2 != 0
    }

    pub fn has_z(self) -> bool {
        self.code() & 1 != 0
    }

    pub fn is_transverse(self) -> bool {
        self.has_x()
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::Z => 'Z',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        match self {
            Pauli::I => [[C1, C0], [C0, C1]],
            Pauli::Z => [[C1, C0], [C0, -C1]],
            Pauli::X => [[C0, C1], [C1, C0]],
            Pauli::Y => [[C0, -CI], [CI, C0]],
        }
    }

    /// Single-site product `a·b = i^k · c`, returned as `(k, c)`.
    pub fn times(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        let product = Pauli::from_code(self.code() ^ other.code());
        let k = match (self, other) {
            (X, Y) | (Y, Z) | (Z, X) => 1,
            (Y, X) | (Z, Y) | (X, Z) => 3,
            _ => 0,
        };
        (k, product)
    }
}

impl TryFrom<char> for Pauli {
    type Error = PauliError;

    fn try_from(c: char) -> Result<Self, Self::Error> {
        match c {
            'I' | 'i' | '1' => Ok(Pauli::I),
            'X' | 'x' => Ok(Pauli::X),
            'Y' | 'y' => Ok(Pauli::Y),
            'Z' | 'z' => Ok(Pauli::Z),
            other => Err(PauliError::InvalidLetter(other)),
        }
    }
}

/// A power of `i`: one of `1, i, -1, -i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u8) -> Phase {
        Phase(k & 3)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => C1,
            1 => CI,
            2 => -C1,
            _ => -CI,
        }
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_power((self.0 + rhs.0) & 3)
    }
}

/// A word over `{I, X, Y, Z}`, one letter per site.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters }
    }

    pub fn identity(n: usize) -> Self {
        Self { letters: vec![Pauli::I; n] }
    }

    /// `letter` on `site`, identity elsewhere.
    pub fn single(n: usize, site: usize, letter: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.letters[site] = letter;
        s
    }

    pub fn from_index(n: usize, index: usize) -> Self {
        let letters = (0..n)
            .map(|j| Pauli::from_code(((index >> (2 * (n - 1 - j))) & 3) as u8))
            .collect();
        Self { letters }
    }

    pub fn index(&self) -> usize {
        self.letters
            .iter()
            .fold(0usize, |acc, p| (acc << 2) | p.code() as usize)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn letter(&self, site: usize) -> Pauli {
        self.letters[site]
    }

    pub fn set(&mut self, site: usize, letter: Pauli) {
        self.letters[site] = letter;
    }

    /// Sites carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Bit masks `(x, z)` over computational-basis bits (site 0 is the MSB).
    pub fn masks(&self) -> (usize, usize) {
        let n = self.len();
        let mut x = 0usize;
        let mut z = 0usize;
        for (j, p) in self.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - j);
            if p.has_x() {
                x |= bit;
            }
            if p.has_z() {
                z |= bit;
            }
        }
        (x, z)
    }

    pub fn count_y(&self) -> usize {
        self.letters.iter().filter(|p| **p == Pauli::Y).count()
    }

    /// Dense `2^n × 2^n` matrix.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.len();
        let (xm, zm) = self.masks();
        let y_phase = Phase::from_power(self.count_y() as u8).to_complex();
        let mut m = DMatrix::from_element(dim, dim, C0);
        for col in 0..dim {
            let row = col ^ xm;
            let sign = if (col & zm).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(row, col)] = y_phase * sign;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = s
            .chars()
            .map(Pauli::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { letters })
    }
}

/// Product of two Pauli strings: `a·b = phase · product`.
pub fn multiply_paulis(
    a: &PauliString,
    b: &PauliString,
) -> Result<(Phase, PauliString), PauliError> {
    if a.len() != b.len() {
        return Err(PauliError::LengthMismatch(a.len(), b.len()));
    }
    let mut k = 0u8;
    let letters = a
        .letters
        .iter()
        .zip(&b.letters)
        .map(|(x, y)| {
            let (p, c) = x.times(*y);
            k += p;
            c
        })
        .collect();
    Ok((Phase::from_power(k), PauliString { letters }))
}

/// Product of two basis indices on `n` sites, without allocating strings.
pub fn multiply_indices(n: usize, a: usize, b: usize) -> (Phase, usize) {
    let mut k = 0u8;
    for j in 0..n {
        let shift = 2 * j;
        let pa = Pauli::from_code(((a >> shift) & 3) as u8);
        let pb = Pauli::from_code(((b >> shift) & 3) as u8);
        k += pa.times(pb).0;
    }
    (Phase::from_power(k), a ^ b)
}

/// Number of X and Y letters.
pub fn xy_weight(mu: &PauliString) -> usize {
    mu.letters.iter().filter(|p| p.is_transverse()).count()
}

/// Grade of a basis index on `n` sites.
pub fn index_weight(n: usize, index: usize) -> usize {
    (0..n).filter(|j| (index >> (2 * j)) & 2 != 0).count()
}

/// Operator `Σ_μ c_μ μ̂` stored by its Pauli coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorVector {
    n_sites: usize,
    coeffs: Vec<Complex64>,
}

impl OperatorVector {
    pub fn zeros(n_sites: usize) -> Self {
        Self {
            n_sites,
            coeffs: vec![C0; 1 << (2 * n_sites)],
        }
    }

    pub fn from_coeffs(n_sites: usize, coeffs: Vec<Complex64>) -> Result<Self, PauliError> {
        let expected = 1 << (2 * n_sites);
        if coeffs.len() != expected {
            return Err(PauliError::Dimension {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self { n_sites, coeffs })
    }

    pub fn basis(n_sites: usize, mu: &PauliString) -> Self {
        let mut v = Self::zeros(n_sites);
        v.coeffs[mu.index()] = C1;
        v
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, mu: &PauliString) -> Complex64 {
        self.coeffs[mu.index()]
    }

    /// True when every coefficient is real to `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= tol)
    }

    /// Expansion of a dense `2^n × 2^n` matrix: `c_μ = 2^{-n} Tr(μ̂ M)`.
    pub fn from_matrix(m: &DMatrix<Complex64>) -> Result<Self, PauliError> {
        let dim = m.nrows();
        if dim != m.ncols() || !dim.is_power_of_two() {
            return Err(PauliError::Dimension {
                expected: dim.next_power_of_two(),
                got: m.ncols(),
            });
        }
        let n = dim.trailing_zeros() as usize;
        let norm = 1.0 / dim as f64;
        let coeffs = (0..1usize << (2 * n))
            .map(|idx| {
                let mu = PauliString::from_index(n, idx);
                let (xm, zm) = mu.masks();
                let y_phase = Phase::from_power(mu.count_y() as u8).to_complex();
                // Tr(μ̂ M) = Σ_c ⟨c⊕x| μ̂ |c⟩ M[c, c⊕x]
                let mut acc = C0;
                for c in 0..dim {
                    let sign = if (c & zm).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    acc += m[(c, c ^ xm)] * sign;
                }
                acc * y_phase * norm
            })
            .collect();
        Ok(Self { n_sites: n, coeffs })
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let n = self.n_sites;
        let dim = 1usize << n;
        let mut m = DMatrix::from_element(dim, dim, C0);
        for (idx, c) in self.coeffs.iter().enumerate() {
            if *c == C0 {
                continue;
            }
            let mu = PauliString::from_index(n, idx);
            let (xm, zm) = mu.masks();
            let y_phase = Phase::from_power(mu.count_y() as u8).to_complex();
            for col in 0..dim {
                let sign = if (col & zm).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                m[(col ^ xm, col)] += c * y_phase * sign;
            }
        }
        m
    }
}

/// `⟨⟨A|B⟩⟩ = 2^{-N} Tr(A† B) = Σ_μ conj(A_μ) B_μ`.
pub fn inner_product(a: &OperatorVector, b: &OperatorVector) -> Result<Complex64, PauliError> {
    if a.n_sites != b.n_sites {
        return Err(PauliError::LengthMismatch(a.n_sites, b.n_sites));
    }
    Ok(a.coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Matrix of a linear map on operator space in the Pauli basis,
/// `S_{μν} = ⟨⟨μ|S|ν⟩⟩`.
#[derive(Clone, Debug)]
pub struct SuperoperatorMatrix {
    n_sites: usize,
    entries: DMatrix<Complex64>,
}

impl SuperoperatorMatrix {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, mu: usize, nu: usize) -> Complex64 {
        self.entries[(mu, nu)]
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|c| c.im == 0.0)
    }

    /// Real part as an `f64` matrix.
    pub fn real(&self) -> DMatrix<f64> {
        self.entries.map(|c| c.re)
    }

    pub fn apply(&self, v: &OperatorVector) -> Result<OperatorVector, PauliError> {
        if v.n_sites != self.n_sites {
            return Err(PauliError::LengthMismatch(self.n_sites, v.n_sites));
        }
        let x = nalgebra::DVector::from_column_slice(&v.coeffs);
        let y = &self.entries * x;
        Ok(OperatorVector {
            n_sites: self.n_sites,
            coeffs: y.as_slice().to_vec(),
        })
    }
}

/// Builds the Pauli-basis matrix of `action` on `n` sites by applying it to
/// every basis string. Linearity is spot-checked on a handful of basis pairs.
/// Imaginary parts below [`IMAG_DUST`] are zeroed when all of them are.
pub fn superop_to_pauli_basis<F>(n: usize, action: F) -> Result<SuperoperatorMatrix, PauliError>
where
    F: Fn(&DMatrix<Complex64>) -> DMatrix<Complex64>,
{
    let dim = 1usize << (2 * n);
    let mut entries = DMatrix::from_element(dim, dim, C0);
    let mut images = Vec::with_capacity(dim);
    for nu in 0..dim {
        let basis = PauliString::from_index(n, nu).to_matrix();
        let image = action(&basis);
        let coeffs = OperatorVector::from_matrix(&image)?;
        for (mu, c) in coeffs.coeffs.iter().enumerate() {
            entries[(mu, nu)] = *c;
        }
        images.push(image);
    }

    let probes = dim.min(8);
    let pairs = (0..probes).flat_map(|k| [(k, (k * 7 + 3) % dim), (k, k)]);
    for (mu, nu) in pairs {
        let sum = PauliString::from_index(n, mu).to_matrix() + PauliString::from_index(n, nu).to_matrix();
        let joint = action(&sum);
        let split = &images[mu] + &images[nu];
        let residual = (joint - &split).iter().map(|c| c.norm()).fold(0.0, f64::max);
        let scale = split.iter().map(|c| c.norm()).fold(1.0, f64::max);
        if residual > 1e-9 * scale {
            return Err(PauliError::Nonlinear { mu, nu, residual });
        }
    }

    if entries.iter().all(|c| c.im.abs() < IMAG_DUST) {
        entries.iter_mut().for_each(|c| c.im = 0.0);
    }
    Ok(SuperoperatorMatrix { n_sites: n, entries })
}
