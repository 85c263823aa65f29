//! Run configuration: defaults, flat key = value config files, CLI
//! overrides, and the effective-config echo written into every output.

use anyhow::{anyhow, bail, Context, Result};
use estc_core::dispersion::SolverParams;
use estc_core::superposition::Mode;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

/// Quasimomentum grid: log-scale powers of a base times omega, or an
/// explicit list. Power grids are kept as (base, m_min, m_max) so each
/// point is one exponentiation and one multiplication.
#[derive(Debug, Clone, PartialEq)]
pub enum Q1Grid {
    Power { base: f64, m_min: i32, m_max: i32 },
    List(Vec<f64>),
}

impl Q1Grid {
    pub fn parse(text: &str) -> Result<Self> {
        if let Some(rest) = text.strip_prefix("pow:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                bail!("power grid must be pow:BASE:M_MIN:M_MAX, got `{text}`");
            }
            let base: f64 = parts[0].parse().context("grid base")?;
            let m_min: i32 = parts[1].parse().context("grid m_min")?;
            let m_max: i32 = parts[2].parse().context("grid m_max")?;
            if !(base > 0.0) || m_min > m_max {
                bail!("invalid power grid `{text}`");
            }
            Ok(Q1Grid::Power { base, m_min, m_max })
        } else if let Some(rest) = text.strip_prefix("list:") {
            let values: Vec<f64> = rest
                .split(',')
                .map(|v| v.trim().parse::<f64>().context("grid value"))
                .collect::<Result<_>>()?;
            if values.is_empty() {
                bail!("empty grid list");
            }
            Ok(Q1Grid::List(values))
        } else {
            bail!("grid must start with pow: or list:, got `{text}`");
        }
    }

    pub fn values(&self, omega: f64) -> Vec<f64> {
        match self {
            Q1Grid::Power { base, m_min, m_max } => (*m_min..=*m_max)
                .map(|m| base.powi(m) * omega)
                .collect(),
            Q1Grid::List(values) => values.clone(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Q1Grid::Power { base, m_min, m_max } => format!("pow:{base}:{m_min}:{m_max}"),
            Q1Grid::List(values) => {
                let items: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
                format!("list:{}", items.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => bail!("unknown format `{other}` (csv | json)"),
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub omega: f64,
    pub am: f64,
    pub g_max: usize,
    pub q1_grid: Q1Grid,
    pub qm: f64,
    pub alpha: f64,
    pub delta: f64,
    pub grid: (usize, usize),
    pub mode: Mode,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub cache_dir: Option<PathBuf>,
    /// Named tolerance overrides for the check suite.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            omega: 0.01,
            am: 2.0_f64.sqrt() / 200.0,
            g_max: 12,
            q1_grid: Q1Grid::Power {
                base: 2.0,
                m_min: -10,
                m_max: 15,
            },
            qm: 1.0,
            alpha: FRAC_PI_4,
            delta: 0.0,
            grid: (64, 64),
            mode: Mode::Bi1,
            format: OutputFormat::Csv,
            out: None,
            jobs: 0,
            cache_dir: None,
            tolerances: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    /// Applies one key = value setting (config file or flag plumbing).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "omega" => self.omega = value.parse().context("omega")?,
            "am" => self.am = value.parse().context("am")?,
            "gmax" => self.g_max = value.parse().context("gmax")?,
            "q1_grid" => self.q1_grid = Q1Grid::parse(value)?,
            "qm" => self.qm = value.parse().context("qm")?,
            "alpha" => self.alpha = value.parse().context("alpha")?,
            "delta" => self.delta = value.parse().context("delta")?,
            "grid" => self.grid = parse_grid(value)?,
            "mode" => {
                self.mode = Mode::parse(value)
                    .ok_or_else(|| anyhow!("unknown mode `{value}` (uni+ | uni- | bi1 | bi2)"))?
            }
            "format" => self.format = OutputFormat::parse(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "jobs" => self.jobs = value.parse().context("jobs")?,
            "cache_dir" => self.cache_dir = Some(PathBuf::from(value)),
            other if other.starts_with("tol.") => {
                let name = other.trim_start_matches("tol.").to_string();
                self.tolerances.insert(name, value.parse().context("tolerance")?);
            }
            other => bail!("unknown configuration key `{other}`"),
        }
        Ok(())
    }

    /// Loads a flat key = value file; '#' starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected key = value", path.display(), lineno + 1))?;
            self.set(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.g_max < 4 || self.g_max % 2 != 0 {
            bail!("gmax = {} must be even and at least 4", self.g_max);
        }
        if !(self.am >= 0.0) {
            bail!("am = {} must be nonnegative", self.am);
        }
        if !(self.omega > 0.0) {
            bail!("omega = {} must be positive", self.omega);
        }
        if self.q1_grid.values(self.omega).is_empty() {
            bail!("empty quasimomentum grid");
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&self.alpha) {
            bail!("alpha = {} outside [0, pi/2]", self.alpha);
        }
        if !(0.0..std::f64::consts::TAU).contains(&self.delta) {
            bail!("delta = {} outside [0, 2 pi)", self.delta);
        }
        if !(self.qm >= 0.0) {
            bail!("qm = {} must be nonnegative", self.qm);
        }
        if self.grid.0 == 0 || self.grid.1 == 0 {
            bail!("grid must be positive, got {}x{}", self.grid.0, self.grid.1);
        }
        Ok(())
    }

    pub fn solver_params(&self) -> Result<SolverParams> {
        SolverParams::new(self.omega, self.am, self.g_max).map_err(|e| anyhow!(e))
    }

    /// Effective cache directory: flag/config first, then the environment.
    pub fn effective_cache_dir(&self) -> Option<PathBuf> {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os("ESTC_CACHE_DIR").map(PathBuf::from))
    }

    /// Key = value echo of the effective configuration, stable order.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut kv = vec![
            ("omega".to_string(), format!("{}", self.omega)),
            ("am".to_string(), format!("{}", self.am)),
            ("gmax".to_string(), format!("{}", self.g_max)),
            ("q1_grid".to_string(), self.q1_grid.describe()),
            ("qm".to_string(), format!("{}", self.qm)),
            ("alpha".to_string(), format!("{}", self.alpha)),
            ("delta".to_string(), format!("{}", self.delta)),
            (
                "grid".to_string(),
                format!("{}x{}", self.grid.0, self.grid.1),
            ),
            ("mode".to_string(), self.mode.label().to_string()),
            (
                "format".to_string(),
                match self.format {
                    OutputFormat::Csv => "csv".to_string(),
                    OutputFormat::Json => "json".to_string(),
                },
            ),
            ("jobs".to_string(), format!("{}", self.jobs)),
        ];
        if let Some(dir) = self.effective_cache_dir() {
            kv.push(("cache_dir".to_string(), dir.display().to_string()));
        }
        for (name, value) in &self.tolerances {
            kv.push((format!("tol.{name}"), format!("{value}")));
        }
        kv
    }
}

pub fn parse_grid(text: &str) -> Result<(usize, usize)> {
    let (a, b) = text
        .split_once('x')
        .ok_or_else(|| anyhow!("grid must be N1xN4, got `{text}`"))?;
    Ok((a.parse().context("grid n1")?, b.parse().context("grid n4")?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_grid_roundtrip() {
        let g = Q1Grid::parse("pow:2:-10:15").unwrap();
        let v = g.values(0.01);
        assert_eq!(v.len(), 26);
        assert_eq!(v[0], 2.0_f64.powi(-10) * 0.01);
        assert_eq!(g.describe(), "pow:2:-10:15");
    }

    #[test]
    fn list_grid() {
        let g = Q1Grid::parse("list:0.01, 0.02").unwrap();
        assert_eq!(g.values(1.0), vec![0.01, 0.02]);
    }

    #[test]
    fn validation_rejects_odd_gmax() {
        let mut cfg = RunConfig::default();
        cfg.g_max = 7;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_file_parsing() {
        let dir = std::env::temp_dir().join("estc-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "omega = 0.02 # comment\n# full comment\ngmax = 8\n").unwrap();
        let mut cfg = RunConfig::default();
        cfg.apply_file(&path).unwrap();
        assert_eq!(cfg.omega, 0.02);
        assert_eq!(cfg.g_max, 8);
    }
}
