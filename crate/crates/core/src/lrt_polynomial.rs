//! Likelihood ratio tests against the polynomial constraint sets of the
//! equal-variance models (`LRT2`), and the closed-form confidence set they
//! induce.

use serde::{Deserialize, Serialize};

use crate::confidence::{ConfidenceSet, SetWarning};
use crate::dist::chisq_quantile;
use crate::error::{Error, Result};
use crate::model::CovarianceMatrix;

/// `λ^{(ψ)} = 2n log{ tr[Q_ψ S] / (2 det(S)^{1/2}) }` with
/// `Q_ψ = [[1+ψ², −ψ], [−ψ, 1]]`; reference `χ²₂`.
pub fn lrt2_statistic_nonzero(s: &CovarianceMatrix, n: usize, psi: f64) -> f64 {
    let (s11, s12, s22) = (s.get(0, 0), s.get(0, 1), s.get(1, 1));
    let tr = (1.0 + psi * psi) * s11 - 2.0 * psi * s12 + s22;
    2.0 * n as f64 * (tr / (2.0 * s.det().sqrt())).ln()
}

/// `λ^{(0)} = 2n log{ (S₁₁ − S₁₂²/S₂₂ + S₂₂) / (2 det(S)^{1/2}) }`;
/// reference `χ²₁`.
pub fn lrt2_statistic_zero(s: &CovarianceMatrix, n: usize) -> f64 {
    let (s11, s12, s22) = (s.get(0, 0), s.get(0, 1), s.get(1, 1));
    let num = s11 - s12 * s12 / s22 + s22;
    2.0 * n as f64 * (num / (2.0 * s.det().sqrt())).ln()
}

/// Closed-form `LRT2` confidence set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lrt2Interval {
    /// Discriminant `K`; the nonzero part exists iff `K ≥ 0`.
    pub k: f64,
    /// `[(S₁₂ − √K)/S₁₁, (S₁₂ + √K)/S₁₁]` when `K ≥ 0`.
    pub interval: Option<(f64, f64)>,
    /// Outcome of the `ψ = 0` test alone.
    pub zero_accepted: bool,
    /// Zero is rejected but lies inside the nonzero interval.
    pub torn: bool,
    pub zero_included: bool,
    pub empty: bool,
}

/// Options for [`lrt2_confidence_set`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lrt2Options {
    /// Add zero when it is rejected but sits inside the nonzero interval.
    pub fill_zero_gap: bool,
}

impl Default for Lrt2Options {
    fn default() -> Self {
        Lrt2Options { fill_zero_gap: true }
    }
}

pub fn lrt2_confidence_set(
    s: &CovarianceMatrix,
    n: usize,
    alpha: f64,
    opts: Lrt2Options,
) -> Result<Lrt2Interval> {
    if s.dim() != 2 {
        return Err(Error::UnsupportedDimension(s.dim()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, 1)")));
    }
    let q2 = chisq_quantile(1.0 - alpha, 2)?;
    let q1 = chisq_quantile(1.0 - alpha, 1)?;
    let (s11, s12) = (s.get(0, 0), s.get(0, 1));
    let det = s.det();
    let k = 2.0 * s11 * det.sqrt() * (q2 / (2.0 * n as f64)).exp() - s11 * s11 - det;
    let interval = (k >= 0.0).then(|| {
        let r = k.sqrt();
        ((s12 - r) / s11, (s12 + r) / s11)
    });
    let zero_accepted = lrt2_statistic_zero(s, n) <= q1;
    let torn = !zero_accepted && interval.is_some_and(|(l, u)| l <= 0.0 && 0.0 <= u);
    let zero_included = zero_accepted || (torn && opts.fill_zero_gap);
    Ok(Lrt2Interval {
        k,
        interval,
        zero_accepted,
        torn,
        zero_included,
        empty: interval.is_none() && !zero_included,
    })
}

impl Lrt2Interval {
    pub fn to_set(&self) -> ConfidenceSet {
        let mut set = ConfidenceSet::new(self.interval, self.zero_included);
        if self.torn && self.zero_included {
            set.warn(SetWarning::ZeroGapFilled);
        }
        if self.empty {
            set.warn(SetWarning::EmptyMisspecification);
        }
        set
    }
}
