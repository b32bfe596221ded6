//! The seven interval procedures behind one entry point.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::bootstrap::{bootstrap_interval, BootstrapConfig, Estimator};
use crate::confidence::{ConfidenceSet, DEFAULT_GRID_POINTS};
use crate::dist::RngSeed;
use crate::error::{Error, Result};
use crate::lrt_inequality::{default_grid, lrt1_confidence_set, lrt1b_confidence_set};
use crate::lrt_polynomial::{lrt2_confidence_set, Lrt2Options};
use crate::model::{center_and_covariance, Dataset};
use crate::split_lrt::{
    est_slrt_confidence_set, slrt_confidence_set, slrt_numeric_confidence_set_d3, SplitConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "LRT1")]
    Lrt1,
    #[serde(rename = "LRT1b")]
    Lrt1b,
    #[serde(rename = "LRT2")]
    Lrt2,
    #[serde(rename = "SLRT")]
    Slrt,
    #[serde(rename = "estSLRT")]
    EstSlrt,
    Bootstrap1,
    Bootstrap2,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Lrt1,
        Method::Lrt1b,
        Method::Lrt2,
        Method::Slrt,
        Method::EstSlrt,
        Method::Bootstrap1,
        Method::Bootstrap2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Lrt1 => "LRT1",
            Method::Lrt1b => "LRT1b",
            Method::Lrt2 => "LRT2",
            Method::Slrt => "SLRT",
            Method::EstSlrt => "estSLRT",
            Method::Bootstrap1 => "Bootstrap1",
            Method::Bootstrap2 => "Bootstrap2",
        }
    }

    pub fn supports_dim(&self, d: usize) -> bool {
        d == 2 || (d == 3 && matches!(self, Method::Slrt | Method::EstSlrt))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown method {s:?}")))
    }
}

/// Tuning shared by all methods.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodConfig {
    pub alpha: f64,
    pub grid_points: usize,
    pub lrt2: Lrt2Options,
    /// `k` and split rule; the seed is taken from the replication seed.
    pub split: SplitConfig,
    pub bootstrap_resamples: usize,
    pub gds_penalty: f64,
}

impl Default for MethodConfig {
    fn default() -> Self {
        let b = BootstrapConfig::default();
        MethodConfig {
            alpha: 0.05,
            grid_points: DEFAULT_GRID_POINTS,
            lrt2: Lrt2Options::default(),
            split: SplitConfig::default(),
            bootstrap_resamples: b.resamples,
            gds_penalty: b.gds_penalty,
        }
    }
}

/// Runs `method` on `data` at level `cfg.alpha`. `seed` drives the split
/// and the bootstrap resampling.
pub fn run_method(method: Method, data: &Dataset, cfg: &MethodConfig, seed: RngSeed) -> Result<ConfidenceSet> {
    if !method.supports_dim(data.d()) {
        return Err(Error::UnsupportedDimension(data.d()));
    }
    let split = SplitConfig { seed, ..cfg.split };
    let boot = |estimator| {
        let bc = BootstrapConfig {
            resamples: cfg.bootstrap_resamples,
            alpha: cfg.alpha,
            seed,
            gds_penalty: cfg.gds_penalty,
        };
        bootstrap_interval(data, estimator, &bc)
    };
    match method {
        Method::Lrt1 | Method::Lrt1b | Method::Lrt2 => {
            let s = center_and_covariance(data)?;
            let n = data.n();
            match method {
                Method::Lrt1 => lrt1_confidence_set(&s, n, cfg.alpha, &default_grid(&s, n, cfg.grid_points)),
                Method::Lrt1b => lrt1b_confidence_set(&s, n, cfg.alpha, &default_grid(&s, n, cfg.grid_points)),
                _ => Ok(lrt2_confidence_set(&s, n, cfg.alpha, cfg.lrt2)?.to_set()),
            }
        }
        Method::Slrt if data.d() == 3 => slrt_numeric_confidence_set_d3(data, cfg.alpha, &split, cfg.grid_points),
        Method::Slrt => slrt_confidence_set(data, cfg.alpha, &split),
        Method::EstSlrt => est_slrt_confidence_set(data, cfg.alpha, &split, cfg.grid_points),
        Method::Bootstrap1 => boot(Estimator::VarianceOrdering),
        Method::Bootstrap2 => boot(Estimator::Gds),
    }
}
