// Copyright 2026 The driven-ising Authors
// SPDX-License-Identifier: Apache-2.0

//! Output formats and run manifests.
//!
//! Series CSV columns are `time,observable,value`; ensemble CSV columns are
//! `time,observable,mean,stderr,M`. Every file starts with a
//! `# manifest=<sha256>` line naming the manifest that produced it. Numbers
//! use the shortest representation that round-trips.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::model::SpinModel;
use crate::reduction::ObservableSeries;
use crate::trajectories::TrajectoryEnsemble;

pub const MANIFEST_SCHEMA: u32 = 1;
pub const SERIES_HEADER: &str = "time,observable,value";
pub const ENSEMBLE_HEADER: &str = "time,observable,mean,stderr,M";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the model content: sites, couplings, fields and jumps.
pub fn model_hash(model: &SpinModel) -> String {
    let mut s = format!("n={}\n", model.n_sites());
    for c in model.couplings() {
        let _ = writeln!(s, "c {} {} {:e}", c.j, c.k, c.h);
    }
    for (j, d) in model.fields().iter().enumerate() {
        let _ = writeln!(s, "f {j} {d:e}");
    }
    for jump in model.jumps() {
        let _ = write!(s, "j {} {:e}", jump.site, jump.rate);
        for z in jump.matrix.iter() {
            let _ = write!(s, " {:e} {:e}", z.re, z.im);
        }
        s.push('\n');
    }
    sha256_hex(s.as_bytes())
}

/// Provenance record for one CLI invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: u32,
    pub command: String,
    pub config_path: String,
    pub config_sha256: String,
    pub parameters: serde_json::Value,
    pub model_hash: String,
    pub tool_version: String,
    /// Seconds since the Unix epoch; not part of [`RunManifest::hash`].
    pub wall_clock: u64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config_path: &str, config_text: &str, parameters: serde_json::Value, model: &SpinModel) -> Self {
        Self {
            schema: MANIFEST_SCHEMA,
            command: command.to_string(),
            config_path: config_path.to_string(),
            config_sha256: sha256_hex(config_text.as_bytes()),
            parameters,
            model_hash: model_hash(model),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            outputs: vec![],
        }
    }

    /// Content hash over everything except the wall clock and output paths.
    pub fn hash(&self) -> String {
        let mut stable = self.clone();
        stable.wall_clock = 0;
        stable.outputs.clear();
        let bytes = serde_json::to_vec(&stable).expect("manifest serializes");
        sha256_hex(&bytes)
    }
}

/// Shortest round-trip formatting, switching to exponent notation for very
/// small or very large magnitudes.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn csv_error(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

pub fn write_series_csv<W: Write>(mut w: W, series: &[ObservableSeries], manifest_hash: &str) -> io::Result<()> {
    writeln!(w, "# manifest={manifest_hash}")?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SERIES_HEADER.split(',')).map_err(csv_error)?;
    for s in series {
        for (t, v) in s.times.iter().zip(&s.values) {
            out.write_record([format_number(*t), s.label.clone(), format_number(*v)]).map_err(csv_error)?;
        }
    }
    out.flush()
}

/// Writes the ensemble table. The `stderr` field is left empty when `M = 1`.
pub fn write_ensemble_csv<W: Write>(mut w: W, ens: &TrajectoryEnsemble, manifest_hash: &str) -> io::Result<()> {
    writeln!(w, "# manifest={manifest_hash}")?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(ENSEMBLE_HEADER.split(',')).map_err(csv_error)?;
    let m = ens.trajectories;
    for (o, label) in ens.labels.iter().enumerate() {
        for (i, t) in ens.times.iter().enumerate() {
            let stderr = if m > 1 { format_number(ens.stderr[o][i]) } else { String::new() };
            out.write_record([format_number(*t), label.clone(), format_number(ens.mean[o][i]), stderr, m.to_string()])
                .map_err(csv_error)?;
        }
    }
    out.flush()
}

/// One parsed row of a series CSV.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct SeriesRow {
    pub time: f64,
    pub observable: String,
    pub value: f64,
}

/// Reads back a series CSV, returning the manifest hash and the rows.
pub fn read_series_csv(text: &str) -> Result<(Option<String>, Vec<SeriesRow>), csv::Error> {
    let hash = text.lines().find_map(|l| l.strip_prefix("# manifest=")).map(str::to_string);
    let rows = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<Vec<SeriesRow>, _>>()?;
    Ok((hash, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Coupling, Jump, JumpPreset};
    use crate::reduction::ReductionMethod;

    fn model(h: f64) -> SpinModel {
        SpinModel::new(
            2,
            vec![Coupling { j: 0, k: 1, h }],
            vec![],
            vec![Jump::preset(0, JumpPreset::EmissionZ, 0.0, 0.5)],
        )
        .unwrap()
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, -0.0, 1.0, 0.1, -2.5e-17, 1e-4, 9.99e-5, 3e20, 123456.789, f64::MIN_POSITIVE] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(format_number(2.5e-17), "2.5e-17");
        assert_eq!(format_number(0.25), "0.25");
    }

    #[test]
    fn model_hash_tracks_content() {
        assert_eq!(model_hash(&model(1.0)), model_hash(&model(1.0)));
        assert_ne!(model_hash(&model(1.0)), model_hash(&model(1.0 + 1e-15)));
        assert_eq!(model_hash(&model(1.0)).len(), 64);
    }

    #[test]
    fn manifest_hash_ignores_wall_clock() {
        let m = model(1.0);
        let mut a = RunManifest::new("evolve", "a.toml", "x", serde_json::json!({"n": 1}), &m);
        let mut b = a.clone();
        a.wall_clock = 1;
        b.wall_clock = 2;
        b.outputs.push("out.csv".into());
        assert_eq!(a.hash(), b.hash());
        b.config_sha256 = sha256_hex(b"y");
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn series_round_trip() {
        let s = ObservableSeries {
            label: "xx@2,5".into(),
            times: vec![0.0, 0.5],
            values: vec![1.0, -0.123456789012345],
            stderr: None,
            exact: true,
            patch_size: 4,
            method: ReductionMethod::Auto,
        };
        let mut buf = Vec::new();
        write_series_csv(&mut buf, std::slice::from_ref(&s), "abc").unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# manifest=abc\ntime,observable,value\n0,\"xx@2,5\",1\n"));
        let (hash, rows) = read_series_csv(&text).unwrap();
        assert_eq!(hash.as_deref(), Some("abc"));
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].observable, "xx@2,5");
        assert_eq!(rows[1].value, s.values[1]);
    }

    #[test]
    fn ensemble_single_trajectory_has_empty_stderr() {
        let ens = TrajectoryEnsemble {
            trajectories: 1,
            dt: 0.1,
            seed: 0,
            times: vec![0.0],
            labels: vec!["y@0".into()],
            mean: vec![vec![1.0]],
            stderr: vec![vec![0.0]],
        };
        let mut buf = Vec::new();
        write_ensemble_csv(&mut buf, &ens, "h").unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# manifest=h\ntime,observable,mean,stderr,M\n0,y@0,1,,1\n");
    }
}
