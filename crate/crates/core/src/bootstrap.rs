//! Percentile bootstrap intervals around two plug-in estimators of the
//! effect of `X₁` on `X₂`: variance ordering, and greedy search over the
//! equal-variance graphs with a BIC penalty.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::confidence::ConfidenceSet;
use crate::dist::{Purpose, RngSeed};
use crate::error::{Error, Result};
use crate::model::{center_and_covariance, profiled_loglik, total_effect, CovarianceMatrix, Dataset};

pub const MIN_RESAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub alpha: f64,
    pub seed: RngSeed,
    /// Multiplier on the BIC penalty `½ log n` per edge.
    pub gds_penalty: f64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig { resamples: 1000, alpha: 0.05, seed: RngSeed::new(0, 0), gds_penalty: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Estimator {
    /// Orient `1 → 2` iff `S₁₁ ≤ S₂₂`.
    VarianceOrdering,
    /// Best scoring graph among empty, `1 → 2` and `1 ← 2`.
    Gds,
}

/// Effect estimate from the variance ordering rule.
pub fn effect_estimate_varorder(s: &CovarianceMatrix) -> f64 {
    total_effect(s)
}

/// Effect estimate from penalized likelihood search over the three
/// equal-variance graphs on two nodes. Ties prefer `1 → 2`.
pub fn effect_estimate_gds(s: &CovarianceMatrix, n: usize, penalty: f64) -> f64 {
    let (s11, s12, s22) = (s.get(0, 0), s.get(0, 1), s.get(1, 1));
    let per_edge = penalty * 0.5 * (n as f64).ln();
    let score = |trace: f64, edges: f64| profiled_loglik(trace, n, 2) - per_edge * edges;
    let forward = score(s11 + s22 - s12 * s12 / s11, 1.0);
    let backward = score(s11 + s22 - s12 * s12 / s22, 1.0);
    let empty = score(s11 + s22, 0.0);
    if forward >= backward && forward >= empty {
        s12 / s11
    } else {
        0.0
    }
}

/// Type-7 sample quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Covariance of the rows `idx` of a two-column dataset, without copying.
fn resample_cov(data: &Dataset, idx: &[usize]) -> Option<CovarianceMatrix> {
    let n = idx.len() as f64;
    let (mut m1, mut m2) = (0.0, 0.0);
    for &i in idx {
        let r = data.row(i);
        m1 += r[0];
        m2 += r[1];
    }
    m1 /= n;
    m2 /= n;
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for &i in idx {
        let r = data.row(i);
        let (x, y) = (r[0] - m1, r[1] - m2);
        a += x * x;
        b += x * y;
        c += y * y;
    }
    CovarianceMatrix::sym2(a / n, b / n, c / n).ok()
}

/// Replicate effect estimates, one per nondegenerate resample.
pub fn bootstrap_replicates(data: &Dataset, estimator: Estimator, cfg: &BootstrapConfig) -> Result<Vec<f64>> {
    if data.d() != 2 {
        return Err(Error::UnsupportedDimension(data.d()));
    }
    if cfg.resamples < MIN_RESAMPLES {
        return Err(Error::Config(format!("need at least {MIN_RESAMPLES} resamples, got {}", cfg.resamples)));
    }
    center_and_covariance(data)?;
    let n = data.n();
    let mut rng = cfg.seed.for_purpose(Purpose::Bootstrap).rng();
    let mut idx = vec![0usize; n];
    let mut out = Vec::with_capacity(cfg.resamples);
    for _ in 0..cfg.resamples {
        for slot in idx.iter_mut() {
            *slot = rng.random_range(0..n);
        }
        // a resample with repeated rows can be singular; it is dropped
        if let Some(s) = resample_cov(data, &idx) {
            out.push(match estimator {
                Estimator::VarianceOrdering => effect_estimate_varorder(&s),
                Estimator::Gds => effect_estimate_gds(&s, n, cfg.gds_penalty),
            });
        }
    }
    if out.len() < cfg.resamples / 2 {
        return Err(Error::Domain(format!("only {} usable resamples", out.len())));
    }
    Ok(out)
}

pub fn bootstrap_interval(data: &Dataset, estimator: Estimator, cfg: &BootstrapConfig) -> Result<ConfidenceSet> {
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {} outside (0, 1)", cfg.alpha)));
    }
    let mut reps = bootstrap_replicates(data, estimator, cfg)?;
    reps.sort_by(f64::total_cmp);
    let lo = quantile_sorted(&reps, cfg.alpha / 2.0);
    let hi = quantile_sorted(&reps, 1.0 - cfg.alpha / 2.0);
    Ok(ConfidenceSet::new(Some((lo, hi)), lo <= 0.0 && 0.0 <= hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type7_quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile_sorted(&v, 0.0), 1.0);
        assert_eq!(quantile_sorted(&v, 1.0), 5.0);
        assert_eq!(quantile_sorted(&v, 0.5), 3.0);
        assert!((quantile_sorted(&v, 0.1) - 1.4).abs() < 1e-12);
        assert!((quantile_sorted(&[0.0, 10.0], 0.025) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn varorder_examples() {
        assert_eq!(effect_estimate_varorder(&CovarianceMatrix::sym2(1.0, 0.5, 1.25).unwrap()), 0.5);
        assert_eq!(effect_estimate_varorder(&CovarianceMatrix::sym2(1.25, 0.5, 1.0).unwrap()), 0.0);
    }

    #[test]
    fn gds_prefers_empty_for_weak_dependence() {
        let s = CovarianceMatrix::sym2(1.0, 0.01, 1.0).unwrap();
        assert_eq!(effect_estimate_gds(&s, 100, 1.0), 0.0);
        // without a penalty the comparison reduces to the variance ordering
        let s = CovarianceMatrix::sym2(1.0, 0.01, 1.01).unwrap();
        assert_eq!(effect_estimate_gds(&s, 100, 0.0), 0.01);
        let s = CovarianceMatrix::sym2(1.0, 0.5, 1.25).unwrap();
        assert_eq!(effect_estimate_gds(&s, 100, 1.0), 0.5);
    }

    #[test]
    fn deterministic_given_seed() {
        let p = crate::model::LsemParams::m1(0.3, 1.0).unwrap();
        let data = crate::dist::sample_lsem(&p, 80, RngSeed::new(5, 0));
        let cfg = BootstrapConfig { resamples: 300, seed: RngSeed::new(9, 2), ..Default::default() };
        let a = bootstrap_interval(&data, Estimator::VarianceOrdering, &cfg).unwrap();
        let b = bootstrap_interval(&data, Estimator::VarianceOrdering, &cfg).unwrap();
        assert_eq!(a, b);
        let bad = BootstrapConfig { resamples: 100, ..cfg };
        assert!(bootstrap_interval(&data, Estimator::Gds, &bad).is_err());
    }
}
