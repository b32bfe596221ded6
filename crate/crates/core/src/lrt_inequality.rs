//! Likelihood ratio tests that encode the effect hypothesis through the
//! ordering of variances (`LRT1`), and the heuristic variant whose null and
//! alternative are both restricted to the equal-variance models (`LRT1b`).
//!
//! For `LRT1` every constrained optimum has a closed form. Writing a
//! covariance with `Σ₁₂ = ψΣ₁₁` as `X₁` with variance `a` plus an
//! independent residual `X₂ − ψX₁` with variance `w`, the likelihood
//! factorizes and is maximized by `a = S₁₁`, `w = var(X₂ − ψX₁)`. The extra
//! constraint `Σ₁₁ ≤ Σ₂₂` is linear in the precisions `(1/a, 1/w)`, so
//! when the unconstrained optimum violates it the optimum lies on the
//! boundary `Σ = a·[[1, ψ], [ψ, 1]]`.

use serde::{Deserialize, Serialize};

use crate::confidence::{invert_to_confidence_set, ConfidenceSet, PsiGrid, Reference, TestOutcome};
use crate::dist::{mixture_quantile, MixtureSpec};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::model::{total_effect, CovarianceMatrix};

/// Critical values of the three reference distributions at one level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    pub alpha: f64,
    /// `0.5χ²₀ + 0.5χ²₁`, used at `ψ = 0`.
    pub chibar_01: f64,
    /// `0.5χ²₁ + 0.5χ²₂`, used for `0 < |ψ| < 1`.
    pub chibar_12: f64,
    /// `χ²₁`, used for `|ψ| ≥ 1`.
    pub chisq_1: f64,
}

impl CriticalValues {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!("alpha {alpha} outside (0, 1)")));
        }
        let p = 1.0 - alpha;
        Ok(CriticalValues {
            alpha,
            chibar_01: mixture_quantile(p, &MixtureSpec::chibar_01())?,
            chibar_12: mixture_quantile(p, &MixtureSpec::chibar_12())?,
            chisq_1: mixture_quantile(p, &MixtureSpec::chisq(1))?,
        })
    }

    fn for_psi(&self, psi: f64) -> (MixtureSpec, f64) {
        if psi == 0.0 {
            (MixtureSpec::chibar_01(), self.chibar_01)
        } else if psi.abs() < 1.0 {
            (MixtureSpec::chibar_12(), self.chibar_12)
        } else {
            (MixtureSpec::chisq(1), self.chisq_1)
        }
    }
}

fn require_bivariate(s: &CovarianceMatrix) -> Result<()> {
    if s.dim() == 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(s.dim()))
    }
}

/// Maximizer of the likelihood under the `LRT1` null for `psi`.
pub fn lrt1_null_optimum(s: &CovarianceMatrix, psi: f64) -> Mat {
    let (s11, s12, s22) = (s.get(0, 0), s.get(0, 1), s.get(1, 1));
    if psi == 0.0 {
        if s11 >= s22 {
            return *s.mat();
        }
        let m = 0.5 * (s11 + s22);
        return Mat::sym2(m, s12, m);
    }
    let resid = s22 - 2.0 * psi * s12 + psi * psi * s11;
    let c = resid + psi * psi * s11;
    if psi.abs() >= 1.0 || c >= s11 {
        return Mat::sym2(s11, psi * s11, c);
    }
    let a = boundary_scale(s11, s12, s22, psi);
    Mat::sym2(a, psi * a, a)
}

/// `tr(Q⁻¹S)/2` for `Q = [[1, ψ], [ψ, 1]]`.
fn boundary_scale(s11: f64, s12: f64, s22: f64, psi: f64) -> f64 {
    0.5 * (s11 - 2.0 * psi * s12 + s22) / (1.0 - psi * psi)
}

/// `LRT1` statistic `2(sup ℓ − sup_{H₀} ℓ)` with its reference distribution.
pub fn lrt1_statistic(
    s: &CovarianceMatrix,
    n: usize,
    psi: f64,
    crit: &CriticalValues,
) -> Result<TestOutcome> {
    require_bivariate(s)?;
    let (s11, s12, s22) = (s.get(0, 0), s.get(0, 1), s.get(1, 1));
    let det = s.det();
    let nf = n as f64;
    let lambda = if psi == 0.0 {
        if s11 >= s22 {
            0.0
        } else {
            // (m² − S₁₂²)/det S = 1 + ((S₁₁ − S₂₂)/2)²/det S
            nf * (0.25 * (s11 - s22).powi(2) / det).ln_1p()
        }
    } else {
        let resid = s22 - 2.0 * psi * s12 + psi * psi * s11;
        let on_equality = psi.abs() >= 1.0 || resid + psi * psi * s11 >= s11;
        if on_equality {
            nf * ((psi * s11 - s12).powi(2) / det).ln_1p()
        } else {
            let a = boundary_scale(s11, s12, s22, psi);
            nf * (a * a * (1.0 - psi * psi) / det).ln()
        }
    };
    let (spec, critical) = crit.for_psi(psi);
    Ok(TestOutcome::new(psi, lambda.max(0.0), Reference::Mixture(spec), critical))
}

/// `LRT1b` statistic: both hypotheses restricted to the two equal-variance
/// models, critical values as for `LRT1`. The null for `ψ ≠ 0` is model
/// `1 → 2` with coefficient `ψ`; for `ψ = 0` it is model `1 ← 2`.
pub fn lrt1b_statistic(
    s: &CovarianceMatrix,
    n: usize,
    psi: f64,
    crit: &CriticalValues,
) -> Result<TestOutcome> {
    require_bivariate(s)?;
    let (s11, s12, s22) = (s.get(0, 0), s.get(0, 1), s.get(1, 1));
    let t_m1 = s11 + s22 - s12 * s12 / s11;
    let t_m2 = s11 + s22 - s12 * s12 / s22;
    let t_alt = t_m1.min(t_m2);
    let t_null = if psi == 0.0 { t_m2 } else { (1.0 + psi * psi) * s11 - 2.0 * psi * s12 + s22 };
    // with σ² profiled, ℓ = −n log(π T) − n
    let lambda = 2.0 * n as f64 * (t_null / t_alt).ln();
    let (spec, critical) = crit.for_psi(psi);
    Ok(TestOutcome::new(psi, lambda.max(0.0), Reference::Mixture(spec), critical))
}

/// Default grid for the inequality tests: covers zero, the regression
/// slope `S₁₂/S₁₁` and the point estimate, each by six standard errors.
pub fn default_grid(s: &CovarianceMatrix, n: usize, count: usize) -> PsiGrid {
    PsiGrid::around(s, n, &[s.get(0, 1) / s.get(0, 0), total_effect(s)], count)
}

pub fn lrt1_confidence_set(
    s: &CovarianceMatrix,
    n: usize,
    alpha: f64,
    grid: &PsiGrid,
) -> Result<ConfidenceSet> {
    let crit = CriticalValues::new(alpha)?;
    invert_to_confidence_set(|psi| lrt1_statistic(s, n, psi, &crit), grid)
}

pub fn lrt1b_confidence_set(
    s: &CovarianceMatrix,
    n: usize,
    alpha: f64,
    grid: &PsiGrid,
) -> Result<ConfidenceSet> {
    let crit = CriticalValues::new(alpha)?;
    invert_to_confidence_set(|psi| lrt1b_statistic(s, n, psi, &crit), grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{gaussian_loglik, saturated_loglik};

    fn crit() -> CriticalValues {
        CriticalValues::new(0.05).unwrap()
    }

    fn sym(a: f64, b: f64, c: f64) -> CovarianceMatrix {
        CovarianceMatrix::sym2(a, b, c).unwrap()
    }

    #[test]
    fn zero_hypothesis_cases() {
        let t = lrt1_statistic(&sym(1.25, 0.5, 1.0), 100, 0.0, &crit()).unwrap();
        assert_eq!(t.statistic, 0.0);
        assert!(t.accepted);
        assert_eq!(t.reference, Reference::Mixture(MixtureSpec::chibar_01()));
        let t = lrt1_statistic(&sym(1.0, 0.0, 1.0), 100, 0.0, &crit()).unwrap();
        assert_eq!(t.statistic, 0.0);
    }

    #[test]
    fn exact_model_point_has_zero_statistic() {
        let t = lrt1_statistic(&sym(1.0, 0.5, 1.25), 500, 0.5, &crit()).unwrap();
        assert!(t.statistic.abs() < 1e-12);
        let t = lrt1b_statistic(&sym(1.0, 0.5, 1.25), 500, 0.5, &crit()).unwrap();
        assert!(t.statistic.abs() < 1e-12);
        let t = lrt1b_statistic(&sym(1.0, 0.0, 1.0), 500, 0.0, &crit()).unwrap();
        assert_eq!(t.statistic, 0.0);
    }

    #[test]
    fn statistic_matches_likelihood_at_null_optimum() {
        let s = sym(1.3, 0.4, 1.1);
        for &psi in &[-2.0, -0.7, 0.0, 0.2, 0.3, 0.9, 1.0, 1.5] {
            let t = lrt1_statistic(&s, 300, psi, &crit()).unwrap();
            let sigma0 = lrt1_null_optimum(&s, psi);
            let direct = 2.0 * (saturated_loglik(&s, 300) - gaussian_loglik(&sigma0, &s, 300).unwrap());
            assert!((t.statistic - direct).abs() < 1e-9, "psi {psi}: {} vs {direct}", t.statistic);
            // null constraints hold at the optimum
            if psi != 0.0 {
                assert!((sigma0.get(0, 1) - psi * sigma0.get(0, 0)).abs() < 1e-14);
                assert!(sigma0.get(0, 0) <= sigma0.get(1, 1) + 1e-14);
            } else {
                assert!(sigma0.get(0, 0) >= sigma0.get(1, 1) - 1e-14);
            }
        }
    }

    #[test]
    fn lrt1b_two_point_evaluation() {
        let s = sym(1.0, 0.5, 1.25);
        let n = 100;
        let t = lrt1b_statistic(&s, n, 0.2, &crit()).unwrap();
        let sigma_alt = crate::model::LsemParams::m1(0.5, 1.0).unwrap().implied_covariance();
        let sigma_null = crate::model::LsemParams::m1(0.2, (1.04 - 0.2 + 1.25) / 2.0)
            .unwrap()
            .implied_covariance();
        let expected = 2.0
            * (gaussian_loglik(sigma_alt.mat(), &s, n).unwrap()
                - gaussian_loglik(sigma_null.mat(), &s, n).unwrap());
        assert!((t.statistic - expected).abs() < 1e-9);
    }

    #[test]
    fn reference_by_case() {
        let s = sym(1.0, 0.3, 2.0);
        let spec = |psi| match lrt1_statistic(&s, 50, psi, &crit()).unwrap().reference {
            Reference::Mixture(m) => m,
            _ => unreachable!(),
        };
        assert_eq!(spec(0.5), MixtureSpec::chibar_12());
        assert_eq!(spec(-1.0), MixtureSpec::chisq(1));
        assert_eq!(spec(1.0), MixtureSpec::chisq(1));
    }

    #[test]
    fn confidence_set_covers_truth_at_model_point() {
        let s = sym(1.0, 0.5, 1.25);
        let grid = default_grid(&s, 1000, 2001);
        let set = lrt1_confidence_set(&s, 1000, 0.05, &grid).unwrap();
        assert!(set.contains(0.5));
        assert!(!set.contains(0.0));
    }

    #[test]
    fn rejects_three_dimensions() {
        let s = CovarianceMatrix::new(Mat::identity(3)).unwrap();
        assert!(lrt1_statistic(&s, 10, 0.1, &crit()).is_err());
    }
}
