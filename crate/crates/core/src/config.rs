// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! TOML run configuration.
//!
//! ```toml
//! [units]
//! J = 1.0                  # base coupling; energies and rates below are multiples of J
//!
//! [lattice]
//! kind = "chain"           # or "square"
//! extent = [10]            # sites per dimension
//! periodic = true
//! range = 1
//! coupling = [1.0]         # h at graph distance 1, 2, ..., range
//!
//! [[couplings]]            # optional; replaces the lattice value for this pair
//! sites = [0, 3]
//! h = 0.5                  # or [re, im] with im = 0
//!
//! [fields]
//! delta = 0.0              # or one value per site
//!
//! [[jumps]]
//! site = "all"             # or an index, or a list of indices
//! preset = "emission_xy"   # or matrix = [re00, im00, re01, im01, re10, im10, re11, im11]
//! theta = 0.0
//! rate = 0.25
//!
//! [initial_state]
//! state = "+y"             # or sites = ["+x", [0.0, 0.0, 1.0], ...]
//!
//! [run]
//! t_max = 5.0
//! n_times = 101
//! rtol = 1e-9
//! atol = 1e-12
//! seed = 0
//! method = "auto"
//!
//! [trajectories]           # optional, for the stochastic-field unraveling
//! ising_axis = "x"
//! noise_axis = "z"
//! gamma = 0.25
//! dt = 0.01
//! count = 1000
//! sample_every = 5
//! ```
//!
//! Each coupling `h` is the total coefficient of `σ^z_j σ^z_k` in `H` for
//! its unordered pair. Sites are zero-based; on a square lattice site
//! `(r, c)` has index `r * extent[1] + c`.

use std::collections::BTreeMap;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::integrate::Tolerance;
use crate::model::{Coupling, InitialProductState, Jump, JumpPreset, LatticeKind, LatticeSpec, SpinModel};
use crate::reduction::{ReductionMethod, ReductionOptions};
use crate::trajectories::{Axis, EnsembleConfig, TrajectoryError, TrajectoryModel};

/// Hard limit on the number of sites a config may declare.
pub const MAX_CONFIG_SITES: usize = 4096;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

impl ConfigError {
    fn invalid(field: impl Into<String>, reason: impl ToString) -> Self {
        Self::Invalid { field: field.into(), reason: reason.to_string() }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    units: RawUnits,
    lattice: RawLattice,
    #[serde(default)]
    couplings: Vec<RawCoupling>,
    #[serde(default)]
    fields: Option<RawFields>,
    #[serde(default)]
    jumps: Vec<RawJump>,
    initial_state: RawInitial,
    #[serde(default)]
    run: RawRun,
    #[serde(default)]
    trajectories: Option<RawTrajectories>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUnits {
    #[serde(rename = "J")]
    j: f64,
}

impl Default for RawUnits {
    fn default() -> Self {
        Self { j: 1.0 }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    kind: LatticeKind,
    extent: Vec<usize>,
    #[serde(default)]
    periodic: bool,
    #[serde(default)]
    range: Option<usize>,
    #[serde(default)]
    coupling: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawScalar {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoupling {
    sites: [usize; 2],
    h: RawScalar,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawPerSite {
    Uniform(f64),
    PerSite(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFields {
    delta: RawPerSite,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawSites {
    One(usize),
    Many(Vec<usize>),
    Word(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJump {
    site: RawSites,
    #[serde(default)]
    preset: Option<String>,
    #[serde(default)]
    matrix: Option<Vec<f64>>,
    #[serde(default)]
    theta: f64,
    rate: f64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawStateEntry {
    Named(String),
    Bloch([f64; 3]),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    #[serde(default)]
    state: Option<RawStateEntry>,
    #[serde(default)]
    sites: Option<Vec<RawStateEntry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawRun {
    t_max: f64,
    n_times: usize,
    rtol: f64,
    atol: f64,
    seed: u64,
    method: ReductionMethod,
}

impl Default for RawRun {
    fn default() -> Self {
        let tol = Tolerance::default();
        Self { t_max: 5.0, n_times: 101, rtol: tol.rtol, atol: tol.atol, seed: 0, method: ReductionMethod::Auto }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrajectories {
    #[serde(default = "default_ising_axis")]
    ising_axis: Axis,
    #[serde(default = "default_noise_axis")]
    noise_axis: Axis,
    gamma: f64,
    #[serde(default)]
    dt: Option<f64>,
    #[serde(default = "default_count")]
    count: usize,
    #[serde(default = "default_sample_every")]
    sample_every: usize,
    #[serde(default)]
    seed: Option<u64>,
}

fn default_ising_axis() -> Axis {
    Axis::X
}

fn default_noise_axis() -> Axis {
    Axis::Z
}

fn default_count() -> usize {
    1000
}

fn default_sample_every() -> usize {
    1
}

/// Integration and sampling parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub t_max: f64,
    pub n_times: usize,
    pub rtol: f64,
    pub atol: f64,
    pub seed: u64,
    pub method: ReductionMethod,
}

impl RunParams {
    /// `n_times` equally spaced times on `[0, t_max]`.
    pub fn times(&self) -> Vec<f64> {
        match self.n_times {
            0 => vec![],
            1 => vec![0.0],
            n => (0..n).map(|i| self.t_max * i as f64 / (n - 1) as f64).collect(),
        }
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance { rtol: self.rtol, atol: self.atol }
    }

    pub fn reduction_options(&self, allow_unsolvable: bool) -> ReductionOptions {
        ReductionOptions { method: self.method, tol: self.tolerance(), allow_unsolvable }
    }
}

/// Stochastic-field simulation settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySettings {
    pub ising_axis: Axis,
    pub noise_axis: Axis,
    pub gamma: f64,
    pub dt: Option<f64>,
    pub count: usize,
    pub sample_every: usize,
    pub seed: u64,
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct Config {
    pub base_coupling: f64,
    pub lattice: LatticeSpec,
    pub model: SpinModel,
    pub state: InitialProductState,
    pub run: RunParams,
    pub trajectories: Option<TrajectorySettings>,
}

impl Config {
    /// Trajectory model whose Ising couplings are the config couplings placed
    /// on `ising_axis`.
    pub fn trajectory_model(&self, t: &TrajectorySettings) -> Result<TrajectoryModel, TrajectoryError> {
        TrajectoryModel::new(self.model.n_sites(), self.model.couplings().to_vec(), t.ising_axis, t.noise_axis, t.gamma)
    }

    pub fn ensemble_config(&self) -> Option<EnsembleConfig> {
        self.trajectories.as_ref().map(|t| EnsembleConfig {
            t_max: self.run.t_max,
            dt: t.dt,
            sample_every: t.sample_every,
            trajectories: t.count,
            seed: t.seed,
        })
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn finite(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::invalid(field, "must be finite"))
    }
}

fn jump_matrix(field: &str, raw: &[f64]) -> Result<Matrix2<Complex64>, ConfigError> {
    if raw.len() != 8 {
        return Err(ConfigError::invalid(field, format!("expected 8 reals, got {}", raw.len())));
    }
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(ConfigError::invalid(field, "must be finite"));
    }
    let c = |i: usize| Complex64::new(raw[2 * i], raw[2 * i + 1]);
    Ok(Matrix2::new(c(0), c(1), c(2), c(3)))
}

fn state_entry(field: &str, e: &RawStateEntry) -> Result<[f64; 3], ConfigError> {
    match e {
        RawStateEntry::Named(s) => InitialProductState::named(s)
            .ok_or_else(|| ConfigError::invalid(field, format!("unknown state {s:?} (expected ±x, ±y or ±z)"))),
        RawStateEntry::Bloch(b) => {
            if b.iter().any(|v| !v.is_finite()) {
                return Err(ConfigError::invalid(field, "must be finite"));
            }
            if b.iter().map(|v| v * v).sum::<f64>() > 1.0 + 1e-12 {
                return Err(ConfigError::invalid(field, format!("Bloch vector {b:?} has length > 1")));
            }
            Ok(*b)
        }
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        ConfigError::Parse { line, column, message: e.message().trim().to_string() }
    })?;

    let j_unit = finite("units.J", raw.units.j)?;
    if j_unit <= 0.0 {
        return Err(ConfigError::invalid("units.J", "must be positive"));
    }

    let l = &raw.lattice;
    let dims = match l.kind {
        LatticeKind::Chain => 1,
        LatticeKind::Square => 2,
    };
    if l.extent.len() != dims {
        return Err(ConfigError::invalid(
            "lattice.extent",
            format!("{:?} lattice needs {dims} extent value(s), got {}", l.kind, l.extent.len()),
        ));
    }
    if l.extent.contains(&0) {
        return Err(ConfigError::invalid("lattice.extent", "extents must be positive"));
    }
    let n = l
        .extent
        .iter()
        .try_fold(1usize, |acc, &e| acc.checked_mul(e))
        .filter(|&n| n <= MAX_CONFIG_SITES)
        .ok_or_else(|| ConfigError::invalid("lattice.extent", format!("more than {MAX_CONFIG_SITES} sites")))?;
    let range = l.range.unwrap_or(l.coupling.len());
    if l.coupling.len() > range {
        return Err(ConfigError::invalid(
            "lattice.coupling",
            format!("{} values given for range {range}", l.coupling.len()),
        ));
    }
    for v in &l.coupling {
        finite("lattice.coupling", *v)?;
    }
    let lattice = LatticeSpec {
        kind: l.kind,
        extent: l.extent.clone(),
        periodic: l.periodic,
        range,
        coupling: l.coupling.iter().map(|h| h * j_unit).collect(),
    };

    let mut pairs: BTreeMap<(usize, usize), f64> =
        lattice.couplings().into_iter().map(|c| ((c.j, c.k), c.h)).collect();
    let mut explicit = std::collections::BTreeSet::new();
    for (i, c) in raw.couplings.iter().enumerate() {
        let field = format!("couplings[{i}]");
        let [a, b] = c.sites;
        if a >= n || b >= n {
            return Err(ConfigError::invalid(format!("{field}.sites"), format!("site index out of range for {n} sites")));
        }
        if a == b {
            return Err(ConfigError::invalid(format!("{field}.sites"), "a coupling needs two distinct sites"));
        }
        let key = (a.min(b), a.max(b));
        if !explicit.insert(key) {
            return Err(ConfigError::invalid(format!("{field}.sites"), format!("pair {key:?} listed twice")));
        }
        let h = match c.h {
            RawScalar::Real(h) => h,
            RawScalar::Complex([re, im]) => {
                if im != 0.0 {
                    return Err(ConfigError::invalid(
                        format!("{field}.h"),
                        "imaginary coupling makes the Hamiltonian non-Hermitian",
                    ));
                }
                re
            }
        };
        pairs.insert(key, finite(&format!("{field}.h"), h)? * j_unit);
    }
    let couplings = pairs
        .into_iter()
        .filter(|&(_, h)| h != 0.0)
        .map(|((j, k), h)| Coupling { j, k, h })
        .collect();

    let fields = match &raw.fields {
        None => vec![0.0; n],
        Some(RawFields { delta: RawPerSite::Uniform(d) }) => vec![finite("fields.delta", *d)? * j_unit; n],
        Some(RawFields { delta: RawPerSite::PerSite(v) }) => {
            if v.len() != n {
                return Err(ConfigError::invalid("fields.delta", format!("expected {n} values, got {}", v.len())));
            }
            v.iter().map(|d| Ok(finite("fields.delta", *d)? * j_unit)).collect::<Result<_, ConfigError>>()?
        }
    };

    let mut jumps = Vec::new();
    for (i, jr) in raw.jumps.iter().enumerate() {
        let field = format!("jumps[{i}]");
        let sites: Vec<usize> = match &jr.site {
            RawSites::One(s) => vec![*s],
            RawSites::Many(v) => v.clone(),
            RawSites::Word(w) if w == "all" => (0..n).collect(),
            RawSites::Word(w) => {
                return Err(ConfigError::invalid(format!("{field}.site"), format!("expected an index, a list or \"all\", got {w:?}")))
            }
        };
        if let Some(s) = sites.iter().find(|&&s| s >= n) {
            return Err(ConfigError::invalid(format!("{field}.site"), format!("site {s} out of range for {n} sites")));
        }
        let rate = finite(&format!("{field}.rate"), jr.rate)?;
        if rate < 0.0 {
            return Err(ConfigError::invalid(format!("{field}.rate"), format!("rates must be non-negative, got {rate}")));
        }
        let theta = finite(&format!("{field}.theta"), jr.theta)?;
        let matrix = match (&jr.preset, &jr.matrix) {
            (Some(p), None) => p
                .parse::<JumpPreset>()
                .map_err(|e| ConfigError::invalid(format!("{field}.preset"), e))?
                .matrix(theta),
            (None, Some(m)) => jump_matrix(&format!("{field}.matrix"), m)?,
            _ => return Err(ConfigError::invalid(field, "give exactly one of `preset` or `matrix`")),
        };
        jumps.extend(sites.into_iter().map(|s| Jump::new(s, matrix, rate * j_unit)));
    }

    let model = SpinModel::new(n, couplings, fields, jumps).map_err(|e| ConfigError::invalid("model", e))?;

    let bloch = match (&raw.initial_state.state, &raw.initial_state.sites) {
        (Some(e), None) => vec![state_entry("initial_state.state", e)?; n],
        (None, Some(v)) => {
            if v.len() != n {
                return Err(ConfigError::invalid("initial_state.sites", format!("expected {n} entries, got {}", v.len())));
            }
            v.iter()
                .enumerate()
                .map(|(i, e)| state_entry(&format!("initial_state.sites[{i}]"), e))
                .collect::<Result<_, _>>()?
        }
        _ => return Err(ConfigError::invalid("initial_state", "give exactly one of `state` or `sites`")),
    };
    let state = InitialProductState::new(bloch).map_err(|e| ConfigError::invalid("initial_state", e))?;

    let r = &raw.run;
    let t_max = finite("run.t_max", r.t_max)?;
    if t_max < 0.0 {
        return Err(ConfigError::invalid("run.t_max", "must be non-negative"));
    }
    if r.n_times == 0 {
        return Err(ConfigError::invalid("run.n_times", "must be positive"));
    }
    for (name, v) in [("run.rtol", r.rtol), ("run.atol", r.atol)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(ConfigError::invalid(name, "must be positive"));
        }
    }
    let run = RunParams { t_max, n_times: r.n_times, rtol: r.rtol, atol: r.atol, seed: r.seed, method: r.method };

    let trajectories = match &raw.trajectories {
        None => None,
        Some(t) => {
            let gamma = finite("trajectories.gamma", t.gamma)?;
            if gamma < 0.0 {
                return Err(ConfigError::invalid("trajectories.gamma", "must be non-negative"));
            }
            if let Some(dt) = t.dt {
                if !(dt.is_finite() && dt > 0.0) {
                    return Err(ConfigError::invalid("trajectories.dt", "must be positive"));
                }
            }
            if t.count == 0 {
                return Err(ConfigError::invalid("trajectories.count", "must be positive"));
            }
            if t.sample_every == 0 {
                return Err(ConfigError::invalid("trajectories.sample_every", "must be positive"));
            }
            Some(TrajectorySettings {
                ising_axis: t.ising_axis,
                noise_axis: t.noise_axis,
                gamma: gamma * j_unit,
                dt: t.dt,
                count: t.count,
                sample_every: t.sample_every,
                seed: t.seed.unwrap_or(run.seed),
            })
        }
    };

    Ok(Config { base_coupling: j_unit, lattice, model, state, run, trajectories })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sigma_minus;

    const RING: &str = r#"
[lattice]
kind = "chain"
extent = [10]
periodic = true
range = 1
coupling = [1.0]

[[jumps]]
site = "all"
preset = "dephasing_xy"
theta = 0.0
rate = 0.25

[initial_state]
state = "+y"

[run]
t_max = 5.0
n_times = 101

[trajectories]
ising_axis = "x"
noise_axis = "z"
gamma = 0.25
dt = 0.01
count = 4000
sample_every = 5
"#;

    fn invalid_field(text: &str) -> String {
        match parse_config(text) {
            Err(ConfigError::Invalid { field, .. }) => field,
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_emission() {
        let c = parse_config(
            "[lattice]\nkind = \"chain\"\nextent = [1]\n[[jumps]]\nsite = 0\npreset = \"emission_z\"\nrate = 0.5\n[initial_state]\nstate = \"+z\"\n",
        )
        .unwrap();
        assert_eq!(c.model.n_sites(), 1);
        assert_eq!(c.model.jumps().len(), 1);
        assert_eq!(c.model.jumps()[0].matrix, sigma_minus());
        assert_eq!(c.model.jumps()[0].rate, 0.5);
        assert_eq!(c.run.times().len(), 101);
    }

    #[test]
    fn ring_of_ten() {
        let c = parse_config(RING).unwrap();
        assert_eq!(c.model.n_sites(), 10);
        assert_eq!(c.model.couplings().len(), 10);
        assert!(c.model.couplings().iter().any(|cp| (cp.j, cp.k) == (0, 9)));
        assert_eq!(c.model.jumps().len(), 10);
        let t = c.trajectories.as_ref().unwrap();
        assert_eq!((t.count, t.sample_every, t.seed), (4000, 5, 0));
        let tm = c.trajectory_model(t).unwrap();
        assert_eq!(tm.averaged_model().unwrap(), c.model);
    }

    #[test]
    fn negative_rate() {
        let text = RING.replace("rate = 0.25", "rate = -1");
        assert_eq!(invalid_field(&text), "jumps[0].rate");
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_config("[lattice]\nkind = \"chain\"\nextent = [1\n") {
            Err(ConfigError::Parse { line, .. }) => assert!(line >= 3),
            other => panic!("{other:?}"),
        }
        match parse_config("[lattice]\nkind = \"ring\"\nextent = [1]\n[initial_state]\nstate=\"+z\"\n") {
            Err(ConfigError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 8)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation_names_field() {
        let base = "[lattice]\nkind = \"chain\"\nextent = [3]\ncoupling = [1.0]\n[initial_state]\nstate = \"+x\"\n";
        assert_eq!(invalid_field(&format!("{base}[[couplings]]\nsites = [0, 5]\nh = 1.0\n")), "couplings[0].sites");
        assert_eq!(invalid_field(&format!("{base}[[couplings]]\nsites = [0, 2]\nh = [1.0, 0.5]\n")), "couplings[0].h");
        assert_eq!(invalid_field(&format!("{base}[[jumps]]\nsite = 4\npreset = \"emission_z\"\nrate = 1\n")), "jumps[0].site");
        assert_eq!(invalid_field(&format!("{base}[[jumps]]\nsite = 0\npreset = \"laser\"\nrate = 1\n")), "jumps[0].preset");
        assert_eq!(invalid_field(&format!("{base}[[jumps]]\nsite = 0\nmatrix = [1, 0]\nrate = 1\n")), "jumps[0].matrix");
        assert_eq!(invalid_field(&format!("{base}[fields]\ndelta = [1.0]\n")), "fields.delta");
        assert_eq!(invalid_field(&base.replace("state = \"+x\"", "sites = [\"+x\", \"+y\"]")), "initial_state.sites");
        assert_eq!(invalid_field(&base.replace("\"+x\"", "[1.0, 1.0, 0.0]")), "initial_state.state");
        assert_eq!(invalid_field(&base.replace("extent = [3]", "extent = [3, 3]")), "lattice.extent");
    }

    #[test]
    fn explicit_couplings_and_units() {
        let text = "[units]\nJ = 2.0\n[lattice]\nkind = \"chain\"\nextent = [4]\ncoupling = [1.0]\n\
            [[couplings]]\nsites = [3, 0]\nh = [0.5, 0.0]\n[[couplings]]\nsites = [1, 2]\nh = 0.0\n\
            [fields]\ndelta = [0.1, 0.2, 0.3, 0.4]\n\
            [[jumps]]\nsite = [1, 2]\nmatrix = [0, 0, 1, 0, 0, 0, 0, 0]\nrate = 0.5\n\
            [initial_state]\nsites = [\"+x\", \"-y\", [0.0, 0.0, 0.5], \"z\"]\n";
        let c = parse_config(text).unwrap();
        let pairs: Vec<_> = c.model.couplings().iter().map(|cp| (cp.j, cp.k, cp.h)).collect();
        assert_eq!(pairs, vec![(0, 1, 2.0), (0, 3, 1.0), (2, 3, 2.0)]);
        assert_eq!(c.model.fields(), &[0.2, 0.4, 0.6, 0.8]);
        assert_eq!(c.model.jumps().iter().map(|j| (j.site, j.rate)).collect::<Vec<_>>(), vec![(1, 1.0), (2, 1.0)]);
        assert_eq!(c.model.jumps()[0].matrix[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(c.state.bloch[1], [0.0, -1.0, 0.0]);
        assert!(!c.state.is_pure());
    }

    #[test]
    fn square_lattice() {
        let c = parse_config(
            "[lattice]\nkind = \"square\"\nextent = [3, 3]\nperiodic = true\nrange = 2\ncoupling = [1.0, 0.5]\n[initial_state]\nstate = \"+x\"\n",
        )
        .unwrap();
        // each site has 4 neighbours at distance 1 and 4 at distance 2 on a 3x3 torus
        assert_eq!(c.model.couplings().len(), 9 * 8 / 2);
        assert_eq!(c.lattice.interaction_range(), 2);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(
            parse_config("[lattice]\nkind = \"chain\"\nextent = [1]\nspin = 1\n[initial_state]\nstate = \"+z\"\n"),
            Err(ConfigError::Parse { .. })
        ));
    }
}
