//! Machine-readable outputs: the trajectory CSV (fixed header, 17
//! significant digits, `\n` line endings, embedded config) and JSON-lines
//! reports.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use liepoisson_core::dynamics::Sample;
use liepoisson_core::mat::{Complex64, FourVector, Mat2, Mat2c};

use crate::config::RunConfig;

pub const CSV_HEADER: &str =
    "tau,t,x0,x1,x2,x3,p0,p1,p2,p3,j00re,j00im,j01re,j01im,j10re,j10im,j11re,j11im,detp";

/// 17 significant digits, locale-independent.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trajectory_csv(path: &Path, cfg: &RunConfig, samples: &[Sample]) -> Result<()> {
    let mut out = String::new();
    for line in cfg.embed_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in samples {
        let mut row: Vec<String> = vec![fmt_f64(s.tau), fmt_f64(s.t)];
        row.extend(s.x.c.iter().map(|v| fmt_f64(*v)));
        row.extend(s.p.c.iter().map(|v| fmt_f64(*v)));
        for i in 0..2 {
            for j in 0..2 {
                row.push(fmt_f64(s.j.e[i][j].re));
                row.push(fmt_f64(s.j.e[i][j].im));
            }
        }
        row.push(fmt_f64(s.det_p));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn read_trajectory_csv(path: &Path) -> Result<(RunConfig, Vec<Sample>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut config_lines = Vec::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for line in text.lines() {
        if line.starts_with('#') {
            config_lines.push(line.to_string());
        } else if !seen_header {
            if line != CSV_HEADER {
                bail!("unexpected CSV header in {}", path.display());
            }
            seen_header = true;
        } else if !line.trim().is_empty() {
            rows.push(line.to_string());
        }
    }
    if !seen_header {
        bail!("{} carries no trajectory header", path.display());
    }
    let cfg = RunConfig::from_embedded(&config_lines)?;
    let mut samples = Vec::with_capacity(rows.len());
    for row in rows {
        let vals: Vec<f64> = row
            .split(',')
            .map(|v| v.parse::<f64>().context("CSV field"))
            .collect::<Result<_>>()?;
        if vals.len() != 19 {
            bail!("expected 19 CSV fields, got {}", vals.len());
        }
        let j: Mat2c = Mat2::new([
            [
                Complex64::new(vals[10], vals[11]),
                Complex64::new(vals[12], vals[13]),
            ],
            [
                Complex64::new(vals[14], vals[15]),
                Complex64::new(vals[16], vals[17]),
            ],
        ]);
        samples.push(Sample {
            tau: vals[0],
            t: vals[1],
            x: FourVector::new(vals[2], vals[3], vals[4], vals[5]),
            p: FourVector::new(vals[6], vals[7], vals[8], vals[9]),
            j,
            det_p: vals[18],
        });
    }
    Ok((cfg, samples))
}

/// Sidecar path for a run summary: `foo.csv` → `foo.summary.jsonl`.
pub fn summary_path(output: &Path) -> PathBuf {
    output.with_extension("summary.jsonl")
}

pub fn write_jsonl(path: Option<&Path>, records: &[serde_json::Value]) -> Result<()> {
    let mut body = String::new();
    for r in records {
        body.push_str(&serde_json::to_string(r)?);
        body.push('\n');
    }
    match path {
        Some(p) => {
            std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
        }
    }
    Ok(())
}
