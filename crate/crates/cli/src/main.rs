// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input error, 2 domain failure (not solvable,
//! gap conditions fail), 3 resource cap.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use driven_ising::config::{parse_config, Config, ConfigError};
use driven_ising::fullsolver::{liouvillian_spectrum, sort_spectrum, FullSolverError, Lindbladian};
use driven_ising::io::{format_number, write_ensemble_csv, write_series_csv, RunManifest};
use driven_ising::observable::{parse_observables, Observable, ObservableError};
use driven_ising::pauli::PauliString;
use driven_ising::reduction::{correlator, expectation_series, ObservableSeries, ReductionError};
use driven_ising::solvability::check_solvable;
use driven_ising::spectral::{certify_gap, graded_decompose, spectrum_via_blocks, SpectralError};
use driven_ising::trajectories::{convergence_report, exact_reference, run_ensemble, TrajectoryError};
use serde_json::json;

#[derive(Parser)]
#[command(name = "driven-ising", version, about = "Exact dynamics and gap certificates for driven-dissipative Ising models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the solvability condition and the gap conditions site by site.
    Check {
        #[command(flatten)]
        common: Common,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Evolve observables exactly through finite-patch reduction.
    Evolve {
        #[command(flatten)]
        common: Common,
        /// Observables such as `z@3` or `xx@2,5`, separated by `;` or spaces.
        #[arg(long, required = true, num_args = 1..)]
        observables: Vec<String>,
        /// Also emit connected parts of two-site observables.
        #[arg(long)]
        connected: bool,
        /// Evolve even if the model is not solvable; output is marked inexact.
        #[arg(long)]
        force: bool,
    },
    /// Average stochastic-field trajectories.
    Trajectories {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "y@0", num_args = 1..)]
        observables: Vec<String>,
        /// Number of trajectories (overrides the config).
        #[arg(long = "M")]
        m: Option<usize>,
        /// Time step (overrides the config).
        #[arg(long)]
        dt: Option<f64>,
        /// Master seed (overrides the config).
        #[arg(long)]
        seed: Option<u64>,
        /// Compare with the exact averaged dynamics and write a convergence report.
        #[arg(long)]
        exact_reference: bool,
        /// Path of the convergence JSON; defaults to `<out>.convergence.json`.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Certify the dissipative gap.
    Gap {
        #[command(flatten)]
        common: Common,
    },
    /// Full Liouvillian spectrum of a small model.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Assemble the spectrum from the graded blocks instead of the dense matrix.
        #[arg(long)]
        via_blocks: bool,
    },
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Self { code: 1, message: message.to_string() }
    }

    fn domain(message: impl ToString) -> Self {
        Self { code: 2, message: message.to_string() }
    }

    fn cap(message: impl ToString) -> Self {
        Self { code: 3, message: message.to_string() }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::input(e)
    }
}

impl From<ObservableError> for Failure {
    fn from(e: ObservableError) -> Self {
        Self::input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::input(e)
    }
}

impl From<FullSolverError> for Failure {
    fn from(e: FullSolverError) -> Self {
        match e {
            FullSolverError::ResourceCap { .. } => Self::cap(e),
            FullSolverError::SiteOutOfRange { .. } | FullSolverError::Dimension { .. } => Self::input(e),
            _ => Self::domain(e),
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::ResourceCap { .. } => Self::cap(e),
            ReductionError::FullSolver(inner) => inner.into(),
            ReductionError::Model(_)
            | ReductionError::SiteOutOfRange { .. }
            | ReductionError::ObservableLength { .. }
            | ReductionError::StateLength { .. }
            | ReductionError::SameSite => Self::input(e),
            _ => Self::domain(e),
        }
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::ResourceCap { .. } => Self::cap(e),
            _ => Self::domain(e),
        }
    }
}

impl From<TrajectoryError> for Failure {
    fn from(e: TrajectoryError) -> Self {
        match e {
            TrajectoryError::ResourceCap { .. } => Self::cap(e),
            TrajectoryError::Reduction(inner) => inner.into(),
            _ => Self::input(e),
        }
    }
}

struct Loaded {
    path: String,
    text: String,
    config: Config,
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let config = parse_config(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(Loaded { path: path.display().to_string(), text, config })
}

fn parse_observable_args(args: &[String]) -> Result<Vec<Observable>, Failure> {
    let mut out = Vec::new();
    for a in args {
        out.extend(parse_observables(a)?);
    }
    Ok(out)
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes `body` to `out` (or stdout) and the manifest next to it.
fn emit(out: Option<&Path>, mut manifest: RunManifest, body: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, body)?;
            manifest.outputs.push(path.display().to_string());
            let mpath = sidecar(path, ".manifest.json");
            fs::write(&mpath, serde_json::to_vec_pretty(&manifest).expect("manifest serializes"))?;
        }
        None => io::stdout().write_all(body)?,
    }
    Ok(())
}

fn cmd_check(common: &Common, as_json: bool) -> Result<(), Failure> {
    let l = load(&common.config)?;
    let report = check_solvable(&l.config.model);
    let mut body = Vec::new();
    if as_json {
        serde_json::to_writer_pretty(&mut body, &report).expect("report serializes");
        body.push(b'\n');
    } else {
        writeln!(body, "site  residual(+)  residual(-)  solvable  cond1  cond2  gap")?;
        for s in &report.sites {
            let gap = s.site_gap.map_or("-".to_string(), |g| format!("{g:.6}"));
            writeln!(
                body,
                "{:<4}  {:<11.3e}  {:<11.3e}  {:<8}  {:<5}  {:<5}  {gap}",
                s.site, s.residual_plus, s.residual_minus, s.solvable, s.condition1, s.condition2
            )?;
        }
        writeln!(body, "solvable: {}", if report.pass { "yes" } else { "no" })?;
        match report.gap {
            Some(g) => writeln!(body, "gap bound: {g}")?,
            None => writeln!(body, "gap bound: none")?,
        }
    }
    let manifest = RunManifest::new("check", &l.path, &l.text, json!({}), &l.config.model);
    emit(common.out.as_deref(), manifest, &body)?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::domain(format!("not solvable: jumps on sites {:?} violate the condition", report.failing_sites())))
    }
}

fn cmd_evolve(common: &Common, observables: &[String], connected: bool, force: bool) -> Result<(), Failure> {
    let l = load(&common.config)?;
    let observables = parse_observable_args(observables)?;
    let cfg = &l.config;
    let n = cfg.model.n_sites();
    let report = check_solvable(&cfg.model);
    if !report.pass && !force {
        return Err(Failure::domain(format!(
            "not solvable: jumps on sites {:?} violate the condition (use --force for an inexact run)",
            report.failing_sites()
        )));
    }
    let opts = cfg.run.reduction_options(force);
    let times = cfg.run.times();
    let mut series: Vec<ObservableSeries> = Vec::new();
    let mut exact = true;
    for o in &observables {
        let p = o.to_pauli_string(n)?;
        let (mut s, conn) = if connected && o.len() == 2 {
            let c = correlator(&cfg.model, (o.sites()[0], o.axes()[0]), (o.sites()[1], o.axes()[1]), &cfg.state, &times, &opts)?;
            let conn = ObservableSeries {
                label: format!("connected:{o}"),
                values: c.connected,
                exact: c.full.exact && c.first.exact && c.second.exact,
                ..c.full.clone()
            };
            (c.full, Some(conn))
        } else {
            (expectation_series(&cfg.model, &cfg.state, &p, &times, &opts)?, None)
        };
        s.label = o.to_string();
        eprintln!("{o}: patch of {} sites, {:?}, {}", s.patch_size, s.method, if s.exact { "exact" } else { "not exact" });
        exact &= s.exact && conn.as_ref().is_none_or(|c| c.exact);
        series.push(s);
        series.extend(conn);
    }
    let params = json!({
        "run": cfg.run,
        "observables": observables.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
        "connected": connected,
        "force": force,
    });
    let manifest = RunManifest::new("evolve", &l.path, &l.text, params, &cfg.model);
    let mut body = Vec::new();
    write_series_csv(&mut body, &series, &manifest.hash())?;
    if !exact {
        body.extend_from_slice(b"# exact=false\n");
    }
    emit(common.out.as_deref(), manifest, &body)
}

#[allow(clippy::too_many_arguments)]
fn cmd_trajectories(
    common: &Common,
    observables: &[String],
    m: Option<usize>,
    dt: Option<f64>,
    seed: Option<u64>,
    exact: bool,
    report_path: Option<&Path>,
) -> Result<(), Failure> {
    let l = load(&common.config)?;
    let cfg = &l.config;
    let mut settings = cfg
        .trajectories
        .clone()
        .ok_or_else(|| Failure::input("config has no [trajectories] table"))?;
    if let Some(m) = m {
        settings.count = m;
    }
    if dt.is_some() {
        settings.dt = dt;
    }
    if let Some(seed) = seed {
        settings.seed = seed;
    }
    let observables = parse_observable_args(observables)?;
    let n = cfg.model.n_sites();
    let paulis = observables.iter().map(|o| o.to_pauli_string(n)).collect::<Result<Vec<PauliString>, _>>()?;
    let model = cfg.trajectory_model(&settings)?;
    let ens_cfg = driven_ising::trajectories::EnsembleConfig {
        t_max: cfg.run.t_max,
        dt: settings.dt,
        sample_every: settings.sample_every,
        trajectories: settings.count,
        seed: settings.seed,
    };
    let mut ens = run_ensemble(&model, &cfg.state, &paulis, &ens_cfg)?;
    ens.labels = observables.iter().map(|o| o.to_string()).collect();
    let params = json!({ "run": cfg.run, "trajectories": settings, "observables": ens.labels });
    let manifest = RunManifest::new("trajectories", &l.path, &l.text, params, &cfg.model);
    let hash = manifest.hash();
    let mut body = Vec::new();
    write_ensemble_csv(&mut body, &ens, &hash)?;
    emit(common.out.as_deref(), manifest, &body)?;
    if exact {
        let reference = exact_reference(&model, &cfg.state, &paulis, &ens.times)?;
        let report = convergence_report(&ens, &reference)?;
        let doc = json!({
            "schema": 1,
            "manifest": hash,
            "M": ens.trajectories,
            "dt": ens.dt,
            "seed": ens.seed,
            "observables": ens.labels,
            "fraction_within_3": report.fraction_within_3,
            "rms": report.rms,
            "max_abs_z": report.max_abs_z,
            "z_scores": report.z_scores,
        });
        let text = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
        match (report_path, common.out.as_deref()) {
            (Some(p), _) => fs::write(p, text)?,
            (None, Some(out)) => fs::write(sidecar(out, ".convergence.json"), text)?,
            (None, None) => io::stderr().write_all(text.as_bytes())?,
        }
    }
    Ok(())
}

fn cmd_gap(common: &Common) -> Result<(), Failure> {
    let l = load(&common.config)?;
    let cert = certify_gap(&l.config.model)?;
    let manifest = RunManifest::new("gap", &l.path, &l.text, json!({}), &l.config.model);
    let doc = json!({ "schema": 1, "manifest": manifest.hash(), "certificate": cert });
    let body = serde_json::to_string_pretty(&doc).expect("certificate serializes") + "\n";
    emit(common.out.as_deref(), manifest, body.as_bytes())
}

fn cmd_spectrum(common: &Common, via_blocks: bool) -> Result<(), Failure> {
    let l = load(&common.config)?;
    let mut eigs = if via_blocks {
        spectrum_via_blocks(&graded_decompose(&l.config.model)?)?
    } else {
        liouvillian_spectrum(&Lindbladian::from_model(&l.config.model)?)?
    };
    sort_spectrum(&mut eigs, 1e-9);
    let manifest = RunManifest::new("spectrum", &l.path, &l.text, json!({ "via_blocks": via_blocks }), &l.config.model);
    let mut body = Vec::new();
    writeln!(body, "# manifest={}", manifest.hash())?;
    writeln!(body, "index,re,im")?;
    for (i, z) in eigs.iter().enumerate() {
        writeln!(body, "{i},{},{}", format_number(z.re), format_number(z.im))?;
    }
    emit(common.out.as_deref(), manifest, &body)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Check { common, json } => cmd_check(common, *json),
        Command::Evolve { common, observables, connected, force } => cmd_evolve(common, observables, *connected, *force),
        Command::Trajectories { common, observables, m, dt, seed, exact_reference, report } => {
            cmd_trajectories(common, observables, *m, *dt, *seed, *exact_reference, report.as_deref())
        }
        Command::Gap { common } => cmd_gap(common),
        Command::Spectrum { common, via_blocks } => cmd_spectrum(common, *via_blocks),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
