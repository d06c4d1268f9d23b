// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Observable mini-language.
//!
//! An observable is written `<axes>@<sites>`: one Pauli letter per site
//! followed by zero-based site indices, e.g. `z@3` or `xy@2,7`. Lists of
//! observables are separated by `;` or whitespace.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pauli::{Pauli, PauliString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObservableError {
    #[error("empty observable")]
    Empty,
    #[error("missing '@' in {0:?}")]
    MissingAt(String),
    #[error("invalid axis {0:?} (expected x, y or z)")]
    Axis(char),
    #[error("invalid site index {0:?}")]
    Site(String),
    #[error("{axes} axes but {sites} sites")]
    Arity { axes: usize, sites: usize },
    #[error("site {0} repeated")]
    Repeated(usize),
    #[error("site {site} out of range for {n} sites")]
    OutOfRange { site: usize, n: usize },
}

/// A Pauli product on distinct sites.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Observable {
    axes: Vec<Pauli>,
    sites: Vec<usize>,
}

impl Observable {
    pub fn new(axes: Vec<Pauli>, sites: Vec<usize>) -> Result<Self, ObservableError> {
        if axes.is_empty() && sites.is_empty() {
            return Err(ObservableError::Empty);
        }
        if axes.len() != sites.len() {
            return Err(ObservableError::Arity { axes: axes.len(), sites: sites.len() });
        }
        if axes.contains(&Pauli::I) {
            return Err(ObservableError::Axis('i'));
        }
        for (i, s) in sites.iter().enumerate() {
            if sites[..i].contains(s) {
                return Err(ObservableError::Repeated(*s));
            }
        }
        Ok(Self { axes, sites })
    }

    pub fn single(site: usize, axis: Pauli) -> Self {
        Self::new(vec![axis], vec![site]).expect("valid single-site observable")
    }

    pub fn axes(&self) -> &[Pauli] {
        &self.axes
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn to_pauli_string(&self, n: usize) -> Result<PauliString, ObservableError> {
        let mut p = PauliString::identity(n);
        for (&a, &s) in self.axes.iter().zip(&self.sites) {
            if s >= n {
                return Err(ObservableError::OutOfRange { site: s, n });
            }
            p.set(s, a);
        }
        Ok(p)
    }
}

fn axis(c: char) -> Result<Pauli, ObservableError> {
    match c.to_ascii_lowercase() {
        'x' => Ok(Pauli::X),
        'y' => Ok(Pauli::Y),
        'z' => Ok(Pauli::Z),
        _ => Err(ObservableError::Axis(c)),
    }
}

impl FromStr for Observable {
    type Err = ObservableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ObservableError::Empty);
        }
        let (lhs, rhs) = s.split_once('@').ok_or_else(|| ObservableError::MissingAt(s.to_string()))?;
        let axes = lhs.trim().chars().map(axis).collect::<Result<Vec<_>, _>>()?;
        let sites = rhs
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<usize>().map_err(|_| ObservableError::Site(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(axes, sites)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axes {
            let c = match a {
                Pauli::X => 'x',
                Pauli::Y => 'y',
                Pauli::Z => 'z',
                Pauli::I => 'i',
            };
            write!(f, "{c}")?;
        }
        write!(f, "@")?;
        for (i, s) in self.sites.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl TryFrom<String> for Observable {
    type Error = ObservableError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Observable> for String {
    fn from(o: Observable) -> String {
        o.to_string()
    }
}

/// Parses a `;`- or whitespace-separated list of observables.
pub fn parse_observables(s: &str) -> Result<Vec<Observable>, ObservableError> {
    let out = s
        .split(|c: char| c == ';' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>, _>>()?;
    if out.is_empty() {
        return Err(ObservableError::Empty);
    }
    Ok(out)
}
