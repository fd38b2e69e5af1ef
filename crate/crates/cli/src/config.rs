//! Flat `key = value` configuration, merged with command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use tailsum_core::asymptotics::BoundaryPolicy;
use tailsum_core::copulas::Copula;
use tailsum_core::marginals::ParetoMarginal;

use crate::error::{CliError, Result};

pub const KEYS: &[&str] = &[
    "marginal.alpha",
    "marginal.scale",
    "copula.family",
    "copula.phi",
    "copula.sigma",
    "mc.n",
    "mc.seed",
    "mc.enabled",
    "grid.t",
    "grid.q",
    "grid.count",
    "grid.tail_min",
    "grid.tail_max",
    "var.boundary",
    "check.tolerance",
    "out.csv",
    "out.svg",
    "out.dir",
];

pub const DEFAULT_N: usize = 100_000;
pub const MIN_N: usize = 1_000;
pub const DEFAULT_Q_GRID: [f64; 5] = [0.99, 0.995, 0.999, 0.9995, 0.9999];

/// Raw key/value pairs, later sources overriding earlier ones.
#[derive(Clone, Debug, Default)]
pub struct RawConfig(BTreeMap<String, String>);

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected key = value", i + 1))
            })?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(CliError::Config(format!("line {}: unknown key {k}", i + 1)));
            }
            map.insert(k.to_string(), v.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        debug_assert!(KEYS.contains(&key), "{key}");
        self.0.insert(key.to_string(), value.to_string());
    }

    pub fn merge(mut self, over: RawConfig) -> Self {
        self.0.extend(over.0);
        self
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn num<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Config(format!("{key}: cannot parse {v:?}")))
            })
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|_| CliError::Config(format!("{key}: cannot parse {s:?}")))
                    })
                    .collect()
            })
            .transpose()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Independence,
    Gumbel,
    Comonotone,
    GumbelBarnett,
}

#[derive(Clone, Debug)]
pub struct Settings {
    pub alpha: Option<f64>,
    pub scale: f64,
    pub family: Family,
    pub phi: Option<f64>,
    pub sigma: f64,
    pub n: usize,
    pub seed: Option<u64>,
    pub mc: bool,
    pub t_grid: Option<Vec<f64>>,
    pub q_grid: Vec<f64>,
    pub count: usize,
    pub tail_min: f64,
    pub tail_max: f64,
    pub boundary: BoundaryPolicy,
    pub tolerance: f64,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub out_dir: PathBuf,
}

impl Settings {
    pub fn resolve(raw: &RawConfig) -> Result<Self> {
        let family = match raw.get("copula.family").unwrap_or("gumbel") {
            "independence" => Family::Independence,
            "gumbel" => Family::Gumbel,
            "comonotone" => Family::Comonotone,
            "gumbel-barnett" => Family::GumbelBarnett,
            other => return Err(CliError::Config(format!("unknown copula family {other:?}"))),
        };
        let boundary = match raw.get("var.boundary").unwrap_or("combine") {
            "combine" => BoundaryPolicy::Combine,
            "reject" => BoundaryPolicy::Reject,
            other => return Err(CliError::Config(format!("var.boundary: {other:?}"))),
        };
        let mc = match raw.get("mc.enabled").unwrap_or("true") {
            "true" => true,
            "false" => false,
            other => return Err(CliError::Config(format!("mc.enabled: {other:?}"))),
        };
        let s = Self {
            alpha: raw.num("marginal.alpha")?,
            scale: raw.num("marginal.scale")?.unwrap_or(1.0),
            family,
            phi: raw.num("copula.phi")?,
            sigma: raw.num("copula.sigma")?.unwrap_or(0.5),
            n: raw.num("mc.n")?.unwrap_or(DEFAULT_N),
            seed: raw.num("mc.seed")?,
            mc,
            t_grid: raw.list("grid.t")?,
            q_grid: raw.list("grid.q")?.unwrap_or_else(|| DEFAULT_Q_GRID.to_vec()),
            count: raw.num("grid.count")?.unwrap_or(20),
            tail_min: raw.num("grid.tail_min")?.unwrap_or(1e-5),
            tail_max: raw.num("grid.tail_max")?.unwrap_or(1e-2),
            boundary,
            tolerance: raw.num("check.tolerance")?.unwrap_or(1e-3),
            csv: raw.get("out.csv").map(PathBuf::from),
            svg: raw.get("out.svg").map(PathBuf::from),
            out_dir: raw.get("out.dir").map_or_else(|| PathBuf::from("."), PathBuf::from),
        };
        if let Some(t) = &s.t_grid {
            check_grid("grid.t", t)?;
        }
        check_grid("grid.q", &s.q_grid)?;
        if !(s.tail_min > 0.0 && s.tail_min < s.tail_max && s.tail_max < 0.5) {
            return Err(CliError::Config(
                "need 0 < grid.tail_min < grid.tail_max < 0.5".into(),
            ));
        }
        if s.count < 2 {
            return Err(CliError::Config("grid.count must be at least 2".into()));
        }
        Ok(s)
    }

    pub fn marginal(&self) -> Result<ParetoMarginal> {
        let alpha = self
            .alpha
            .ok_or_else(|| CliError::Config("marginal.alpha (--alpha) is required".into()))?;
        Ok(ParetoMarginal::new(alpha, self.scale)?)
    }

    pub fn copula(&self) -> Result<Copula> {
        Ok(match self.family {
            Family::Independence => Copula::Independence,
            Family::Gumbel => {
                let phi = self.phi.ok_or_else(|| {
                    CliError::Config("copula.phi (--phi) is required for gumbel".into())
                })?;
                Copula::gumbel(phi)?
            }
            Family::Comonotone => Copula::comonotone(),
            Family::GumbelBarnett => {
                tailsum_core::copulas::gumbel_barnett(self.sigma)?;
                Copula::GumbelBarnett { sigma: self.sigma }
            }
        })
    }

    /// Sample size and seed for the Monte Carlo columns, if enabled.
    pub fn mc_params(&self) -> Result<Option<(usize, u64)>> {
        if !self.mc {
            return Ok(None);
        }
        let seed = self.seed.ok_or_else(|| {
            CliError::Config("mc.seed (--seed) is required when Monte Carlo is enabled".into())
        })?;
        if self.n < MIN_N {
            return Err(CliError::Config(format!("mc.n must be at least {MIN_N}")));
        }
        Ok(Some((self.n, seed)))
    }
}

fn check_grid(key: &str, g: &[f64]) -> Result<()> {
    if g.is_empty() {
        return Err(CliError::Config(format!("{key} is empty")));
    }
    if !g.windows(2).all(|w| w[0] < w[1]) {
        return Err(CliError::Config(format!("{key} must be strictly increasing")));
    }
    Ok(())
}
