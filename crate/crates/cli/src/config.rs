//! Run configuration with layered precedence: built-in defaults, then a
//! `key=value` config file, then command-line flags, and finally the
//! `LIEPOISSON_SEED` environment variable (seed only). Every output file
//! embeds the full effective configuration, so a run is reproducible from
//! its own output.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use liepoisson_core::scalar::{rat, Rat};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub lambda: f64,
    pub mass: f64,
    pub alpha: f64,
    pub x: [f64; 4],
    pub p: [f64; 4],
    pub truncation: u8,
    pub tau_min: f64,
    pub tau_max: f64,
    pub steps: u32,
    pub samples: u32,
    pub trials: u32,
    pub seed: u64,
    /// exact rationals for the covariance suites, e.g. "1/3,1,5"
    pub lambdas: String,
    pub sector: Option<String>,
    pub project_shell: bool,
    pub tolerance: f64,
    pub output: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: String::new(),
            lambda: 0.1,
            mass: 1.0,
            alpha: 1.0,
            x: [0.0; 4],
            p: [1.0, 0.0, 0.0, 0.0],
            truncation: 6,
            tau_min: 0.0,
            tau_max: 10.0,
            steps: 10_000,
            samples: 201,
            trials: 20,
            seed: 7,
            lambdas: "1/3,1,5".into(),
            sector: None,
            project_shell: false,
            tolerance: 1e-6,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn parse_lambdas(&self) -> Result<Vec<Rat>> {
        self.lambdas
            .split(',')
            .map(|s| parse_rat(s.trim()))
            .collect()
    }

    /// Apply one `key=value` pair (config-file syntax).
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "lambda" => self.lambda = value.parse().context("lambda")?,
            "mass" => self.mass = value.parse().context("mass")?,
            "alpha" => self.alpha = value.parse().context("alpha")?,
            "x" => self.x = parse_vec4(value)?,
            "p" => self.p = parse_vec4(value)?,
            "truncation" => self.truncation = value.parse().context("truncation")?,
            "tau-min" | "tau_min" => self.tau_min = value.parse().context("tau-min")?,
            "tau-max" | "tau_max" => self.tau_max = value.parse().context("tau-max")?,
            "steps" => self.steps = value.parse().context("steps")?,
            "samples" => self.samples = value.parse().context("samples")?,
            "trials" => self.trials = value.parse().context("trials")?,
            "seed" => self.seed = value.parse().context("seed")?,
            "lambdas" => self.lambdas = value.to_string(),
            "sector" => self.sector = Some(value.to_string()),
            "project-shell" | "project_shell" => {
                self.project_shell = value.parse().context("project-shell")?
            }
            "tolerance" => self.tolerance = value.parse().context("tolerance")?,
            "output" => self.output = Some(value.to_string()),
            other => bail!("unknown configuration key `{other}`"),
        }
        Ok(())
    }

    /// Load overrides from a `key=value` file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("{}:{}: expected key=value", path.display(), lineno + 1))?;
            self.apply_kv(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(())
    }

    /// The environment can override the seed, and only the seed.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var("LIEPOISSON_SEED") {
            self.seed = v.parse().context("LIEPOISSON_SEED")?;
        }
        Ok(())
    }

    /// Sorted `key=value` lines for embedding into output files.
    pub fn embed_lines(&self) -> Vec<String> {
        let value = serde_json::to_value(self).expect("config serializes");
        let obj = value.as_object().expect("config is an object");
        obj.iter()
            .map(|(k, v)| format!("# {k}={}", serde_json::to_string(v).unwrap()))
            .collect()
    }

    /// Reconstruct a config from the `# key=json` lines of an output file.
    pub fn from_embedded(lines: &[String]) -> Result<Self> {
        let mut map = serde_json::Map::new();
        for line in lines {
            let body = line.trim_start_matches('#').trim();
            let (k, v) = body
                .split_once('=')
                .context("malformed embedded config line")?;
            map.insert(
                k.trim().to_string(),
                serde_json::from_str(v.trim()).context("embedded config value")?,
            );
        }
        serde_json::from_value(serde_json::Value::Object(map)).context("embedded config")
    }
}

pub fn parse_vec4(s: &str) -> Result<[f64; 4]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        bail!("expected four comma-separated components, got `{s}`");
    }
    let mut out = [0.0; 4];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p.parse().with_context(|| format!("component {i} of `{s}`"))?;
    }
    Ok(out)
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().context("rational numerator")?;
        let d: i128 = d.trim().parse().context("rational denominator")?;
        if d == 0 {
            bail!("zero denominator in `{s}`");
        }
        Ok(rat(n, d))
    } else {
        let n: i128 = s.parse().with_context(|| format!("rational `{s}`"))?;
        Ok(rat(n, 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.apply_kv("lambda", "0.25").unwrap();
        cfg.apply_kv("p", "1.25, 0.75, 0, 0").unwrap();
        cfg.apply_kv("lambdas", "1/3,2").unwrap();
        assert_eq!(cfg.lambda, 0.25);
        assert_eq!(cfg.p, [1.25, 0.75, 0.0, 0.0]);
        assert_eq!(cfg.parse_lambdas().unwrap(), vec![rat(1, 3), rat(2, 1)]);
        assert!(cfg.apply_kv("bogus", "1").is_err());

        let lines = cfg.embed_lines();
        let back = RunConfig::from_embedded(&lines).unwrap();
        assert_eq!(back, cfg);
    }
}
