//! Split likelihood ratio confidence sets (universal inference).
//!
//! The data are split into `D₀` (size `k`) and `D₁`. A hypothesized effect
//! `ψ` is kept when `ℓ₀(Σ̃¹) − ℓ†(ψ) ≤ log(1/α)`, where `ℓ₀` is the
//! log-likelihood on `D₀`, `Σ̃¹` any estimate computed from `D₁`, and `ℓ†`
//! the profile of `ℓ₀` over equal-variance models with the given effect.
//! Markov's inequality makes the set valid for every sample size.
//!
//! Three variants are provided: the exact closed form for two variables,
//! the moment-estimator heuristic (two or three variables) and a numerical
//! profile for three variables.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use std::cell::Cell;
use std::f64::consts::PI;

use crate::confidence::{
    invert_to_confidence_set, ConfidenceSet, PsiGrid, Reference, SetWarning, TestOutcome,
};
use crate::dist::{Purpose, RngSeed};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::model::{
    center_and_covariance, gaussian_loglik, ols_along, profiled_loglik, regress,
    restricted_mle_union, total_effect, CovarianceMatrix, Dataset, LsemParams, ModelBranch,
};

/// How observations are assigned to `D₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitRule {
    /// The first `k` rows in file order.
    FirstK,
    /// The first `k` rows after a seeded shuffle.
    SeededPermutation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitConfig {
    /// Size of `D₀`; `None` means `⌊n/2⌋`.
    pub k: Option<usize>,
    pub rule: SplitRule,
    pub seed: RngSeed,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig { k: None, rule: SplitRule::SeededPermutation, seed: RngSeed::new(0, 0) }
    }
}

impl SplitConfig {
    pub fn seeded(seed: RngSeed) -> Self {
        SplitConfig { seed, ..SplitConfig::default() }
    }
}

/// Sample covariances of the two halves, each centered separately.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitHalves {
    pub s0: CovarianceMatrix,
    pub k: usize,
    pub s1: CovarianceMatrix,
    pub n1: usize,
}

pub fn split_indices(n: usize, cfg: &SplitConfig) -> Result<(Vec<usize>, Vec<usize>)> {
    let k = cfg.k.unwrap_or(n / 2);
    if k < 2 || k + 2 > n {
        return Err(Error::DegenerateSplit(format!("k = {k} with n = {n}; need 2 ≤ k ≤ n − 2")));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    if cfg.rule == SplitRule::SeededPermutation {
        idx.shuffle(&mut cfg.seed.for_purpose(Purpose::Split).rng());
    }
    let d1 = idx.split_off(k);
    Ok((idx, d1))
}

pub fn split_halves(data: &Dataset, cfg: &SplitConfig) -> Result<SplitHalves> {
    let (i0, i1) = split_indices(data.n(), cfg)?;
    let cov = |idx: &[usize], name: &str| {
        center_and_covariance(&data.select(idx))
            .map_err(|e| Error::DegenerateSplit(format!("{name}: {e}")))
    };
    Ok(SplitHalves { s0: cov(&i0, "D0")?, k: i0.len(), s1: cov(&i1, "D1")?, n1: i1.len() })
}

fn require_dim(s: &CovarianceMatrix, d: usize) -> Result<()> {
    if s.dim() == d {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(s.dim()))
    }
}

/// Profile log-likelihood `ℓ†(ψ)` on `D₀` for two variables.
pub fn profile_loglik_d2(s0: &CovarianceMatrix, k: usize, psi: f64) -> f64 {
    let (s11, s12, s22) = (s0.get(0, 0), s0.get(0, 1), s0.get(1, 1));
    let trace = if psi != 0.0 {
        (1.0 + psi * psi) * s11 - 2.0 * psi * s12 + s22
    } else {
        s11 - s12 * s12 / s22 + s22
    };
    let kf = k as f64;
    -kf * (PI * trace).ln() - kf
}

/// Discriminants of the closed-form split set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlrtDiscriminants {
    pub g1: f64,
    pub g2: f64,
    /// `[(S⁰₁₂ − √G₁)/S⁰₁₁, (S⁰₁₂ + √G₁)/S⁰₁₁]` when `G₁ ≥ 0`.
    pub interval: Option<(f64, f64)>,
}

impl SlrtDiscriminants {
    pub fn zero_included(&self) -> bool {
        self.g2 >= 0.0
    }

    pub fn to_set(&self) -> ConfidenceSet {
        let mut set = ConfidenceSet::new(self.interval, self.zero_included());
        if set.is_empty() {
            set.warn(SetWarning::EmptyMisspecification);
        }
        set
    }
}

/// `G_a = 2 S⁰_aa α^{−1/k} det(Σ̃¹)^{1/2} exp(½ tr[(Σ̃¹)⁻¹S⁰] − 1) − (S⁰_aa)² − det S⁰`.
pub fn slrt_discriminants(
    s0: &CovarianceMatrix,
    k: usize,
    sigma1: &Mat,
    alpha: f64,
) -> Result<SlrtDiscriminants> {
    require_dim(s0, 2)?;
    let inv = sigma1.inverse().ok_or(Error::NotPositiveDefinite)?;
    let det1 = sigma1.det();
    if det1 <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    let bound = 2.0
        * alpha.powf(-1.0 / k as f64)
        * det1.sqrt()
        * (0.5 * inv.trace_of_product(s0.mat()) - 1.0).exp();
    let det0 = s0.det();
    let g = |a: usize| {
        let saa = s0.get(a, a);
        saa * bound - saa * saa - det0
    };
    let (g1, g2) = (g(0), g(1));
    let interval = (g1 >= 0.0).then(|| {
        let r = g1.sqrt();
        let (s11, s12) = (s0.get(0, 0), s0.get(0, 1));
        ((s12 - r) / s11, (s12 + r) / s11)
    });
    Ok(SlrtDiscriminants { g1, g2, interval })
}

/// Exact split set for two variables with `Σ̃¹` the equal-variance
/// maximum likelihood estimate on `D₁`.
pub fn slrt_from_halves(h: &SplitHalves, alpha: f64) -> Result<SlrtDiscriminants> {
    check_alpha(alpha)?;
    let sigma1 = restricted_mle_union(&h.s1, h.n1)?.sigma_hat;
    slrt_discriminants(&h.s0, h.k, sigma1.mat(), alpha)
}

pub fn slrt_confidence_set(data: &Dataset, alpha: f64, split: &SplitConfig) -> Result<ConfidenceSet> {
    if data.d() != 2 {
        return Err(Error::UnsupportedDimension(data.d()));
    }
    Ok(slrt_from_halves(&split_halves(data, split)?, alpha)?.to_set())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha {alpha} outside (0, 1)")))
    }
}

/// Log-likelihood of `σ²(I − B)⁻¹(I − B)⁻ᵀ` on a sample with covariance `s`.
fn lsem_loglik(b: &Mat, sigma2: f64, s: &Mat, n: usize) -> f64 {
    let d = b.dim();
    let i_b = Mat::identity(d).sub(b);
    let trace = i_b.transpose().mul(&i_b).trace_of_product(s);
    0.5 * n as f64 * (-(d as f64) * (2.0 * PI * sigma2).ln() - trace / sigma2)
}

/// Equal-variance completion of the sample moments under `branch` with
/// total effect `C(i → j) = psi`.
///
/// Coefficients are least squares fits of each node on its predecessors;
/// the direct `i → j` coefficient is then solved so that the total effect
/// equals `psi`, and the common error variance is the sample variance of
/// the first variable in the ordering.
pub fn moment_estimator(
    s0: &CovarianceMatrix,
    branch: ModelBranch,
    i: usize,
    j: usize,
    psi: f64,
) -> Result<LsemParams> {
    let d = s0.dim();
    if branch.dim() != d || i >= d || j >= d || i == j {
        return Err(Error::Domain("ordering or indices do not match the covariance".into()));
    }
    if branch.precedes(j, i) && psi != 0.0 {
        return Err(Error::InfeasibleMoment(format!("{branch} with effect {psi}")));
    }
    let (mut b, _) = ols_along(s0.mat(), &branch);
    if branch.precedes(i, j) {
        // total effect is the direct edge plus the path through a middle node
        let mut indirect = 0.0;
        for m in 0..d {
            if m != i && m != j && branch.precedes(i, m) && branch.precedes(m, j) {
                indirect += b.get(j, m) * b.get(m, i);
            }
        }
        b.set(j, i, psi - indirect);
    }
    let sigma2 = s0.get(branch.order()[0], branch.order()[0]);
    LsemParams::new(branch, b, sigma2)
        .map_err(|_| Error::InfeasibleMoment(branch.label()))
}

/// `ℓ̃(ψ)`: largest `D₀` log-likelihood over the moment completions of all
/// orderings that permit `C(i → j) = psi`.
pub fn moment_profile_loglik(s0: &CovarianceMatrix, k: usize, i: usize, j: usize, psi: f64) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for branch in ModelBranch::all(s0.dim()) {
        let params = match moment_estimator(s0, branch, i, j, psi) {
            Ok(p) => p,
            Err(Error::InfeasibleMoment(_)) => continue,
            Err(e) => return Err(e),
        };
        best = best.max(lsem_loglik(&params.b, params.sigma2, s0.mat(), k));
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::InfeasibleMoment(format!("no ordering permits effect {psi}")))
    }
}

/// Grid centered on the `D₀` estimates of the effect of `X₁` on `X₂`.
pub fn split_grid(h: &SplitHalves, count: usize) -> Result<PsiGrid> {
    let s0 = &h.s0;
    let pair = CovarianceMatrix::sym2(s0.get(0, 0), s0.get(0, 1), s0.get(1, 1))?;
    let slope = s0.get(0, 1) / s0.get(0, 0);
    let estimate = if s0.dim() == 2 {
        total_effect(s0)
    } else {
        restricted_mle_union(s0, h.k)?.fit.params.total_effect(0, 1)
    };
    Ok(PsiGrid::around(&pair, h.k, &[slope, estimate], count))
}

/// Moment-estimator heuristic (`estSLRT`) for the effect of `X₁` on `X₂`,
/// with `Σ̃¹` the unrestricted sample covariance of `D₁`.
pub fn est_slrt_from_halves(h: &SplitHalves, alpha: f64, grid: &PsiGrid) -> Result<ConfidenceSet> {
    check_alpha(alpha)?;
    let l1 = gaussian_loglik(h.s1.mat(), &h.s0, h.k)?;
    let critical = (1.0 / alpha).ln();
    invert_to_confidence_set(
        |psi| {
            let stat = l1 - moment_profile_loglik(&h.s0, h.k, 0, 1, psi)?;
            Ok(TestOutcome::new(psi, stat, Reference::Universal, critical))
        },
        grid,
    )
}

pub fn est_slrt_confidence_set(
    data: &Dataset,
    alpha: f64,
    split: &SplitConfig,
    grid_points: usize,
) -> Result<ConfidenceSet> {
    let h = split_halves(data, split)?;
    est_slrt_from_halves(&h, alpha, &split_grid(&h, grid_points)?)
}

/// Profile optimum for three variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileFit {
    pub branch: ModelBranch,
    pub b: Mat,
    /// Minimal residual trace `tr[(I − B)ᵀ(I − B)S⁰]`.
    pub trace: f64,
    pub loglik: f64,
}

const SCAN_POINTS: usize = 256;

/// Minimizes `g(u) = z(u) + E[y²] − N(u)²/z(u)` with
/// `z(u) = s_mm − 2u s_im + u² s_ii`, `N(u) = s_ym − u s_yi`.
///
/// Since `N²/z ≤ E[y²]`, any minimizer satisfies
/// `s_ii (u − s_im/s_ii)² ≤ E[y²]`, which gives a finite bracket. Stationary
/// points are located by scanning `g'` for sign changes and bisecting.
fn minimize_path_objective(
    s_ii: f64,
    s_im: f64,
    s_mm: f64,
    s_yi: f64,
    s_ym: f64,
    e_y2: f64,
) -> Result<(f64, f64)> {
    let g = |u: f64| {
        let z = s_mm - 2.0 * u * s_im + u * u * s_ii;
        let nn = s_ym - u * s_yi;
        z + e_y2 - nn * nn / z
    };
    let dg = |u: f64| {
        let z = s_mm - 2.0 * u * s_im + u * u * s_ii;
        let dz = 2.0 * (u * s_ii - s_im);
        let nn = s_ym - u * s_yi;
        dz - (-2.0 * nn * s_yi * z - nn * nn * dz) / (z * z)
    };
    let center = s_im / s_ii;
    let radius = (e_y2.max(0.0) / s_ii).sqrt() + 1e-12 * (1.0 + center.abs());
    let (lo, hi) = (center - radius, center + radius);

    let mut best = (g(lo), lo);
    let hi_val = g(hi);
    if hi_val < best.0 {
        best = (hi_val, hi);
    }
    let step = (hi - lo) / SCAN_POINTS as f64;
    let mut prev_u = lo;
    let mut prev_d = dg(lo);
    for t in 1..=SCAN_POINTS {
        let u = lo + step * t as f64;
        let d = dg(u);
        if !d.is_finite() {
            return Err(Error::OptimizerFailure(format!("non-finite gradient at u = {u}")));
        }
        if prev_d < 0.0 && d >= 0.0 {
            let (mut a, mut b) = (prev_u, u);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid == a || mid == b {
                    break;
                }
                if dg(mid) < 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let u_star = 0.5 * (a + b);
            let val = g(u_star);
            let scale = s_mm.max(e_y2).max(s_ii);
            if dg(u_star).abs() > 1e-8 * scale && (b - a) > 1e-12 * (1.0 + u_star.abs()) {
                return Err(Error::OptimizerFailure(format!("gradient did not vanish at u = {u_star}")));
            }
            if val < best.0 {
                best = (val, u_star);
            }
        }
        prev_u = u;
        prev_d = d;
    }
    if !best.0.is_finite() {
        return Err(Error::OptimizerFailure("non-finite profile value".into()));
    }
    Ok(best)
}

/// Exact profile `ℓ†(ψ)` for `C(i → j) = psi` among three variables: the
/// best equal-variance model over all six orderings, with `σ²` profiled.
pub fn profile_d3(s0: &CovarianceMatrix, k: usize, i: usize, j: usize, psi: f64) -> Result<ProfileFit> {
    require_dim(s0, 3)?;
    let s = s0.mat();
    let m = 3 - i - j;
    let e_y2 = s.get(j, j) - 2.0 * psi * s.get(i, j) + psi * psi * s.get(i, i);
    let s_yi = s.get(j, i) - psi * s.get(i, i);
    let s_ym = s.get(j, m) - psi * s.get(i, m);

    let mut best: Option<(f64, ModelBranch, Mat)> = None;
    for branch in ModelBranch::all(3) {
        let mut b = Mat::zeros(3);
        let trace = if branch.precedes(j, i) {
            if psi != 0.0 {
                continue;
            }
            let (bb, t) = ols_along(s, &branch);
            b = bb;
            t
        } else if branch.precedes(m, i) {
            // m, i, j: i regressed on m; residual of j − ψ i regressed on m
            let (ci, ri) = regress(s, i, &[m]);
            let v = s_ym / s.get(m, m);
            b.set(i, m, ci[0]);
            b.set(j, i, psi);
            b.set(j, m, v);
            s.get(m, m) + ri + e_y2 - s_ym * s_ym / s.get(m, m)
        } else if branch.precedes(j, m) {
            // i, j, m: m regressed on (i, j)
            let (cm, rm) = regress(s, m, &[i, j]);
            b.set(j, i, psi);
            b.set(m, i, cm[0]);
            b.set(m, j, cm[1]);
            s.get(i, i) + e_y2 + rm
        } else {
            // i, m, j: effect splits into a direct edge and a path through m
            let (g, u) = minimize_path_objective(s.get(i, i), s.get(i, m), s.get(m, m), s_yi, s_ym, e_y2)?;
            let z = s.get(m, m) - 2.0 * u * s.get(i, m) + u * u * s.get(i, i);
            let v = (s_ym - u * s_yi) / z;
            b.set(m, i, u);
            b.set(j, m, v);
            b.set(j, i, psi - u * v);
            s.get(i, i) + g
        };
        if best.as_ref().is_none_or(|(t, _, _)| trace < *t) {
            best = Some((trace, branch, b));
        }
    }
    let (trace, branch, b) = best.expect("an ordering permits every effect");
    Ok(ProfileFit { branch, b, trace, loglik: profiled_loglik(trace, k, 3) })
}

/// Split set for three variables with the numerical profile; `Σ̃¹` is the
/// equal-variance maximum likelihood estimate on `D₁`. Hypotheses whose
/// profile fails are accepted.
pub fn slrt_numeric_from_halves(h: &SplitHalves, alpha: f64, grid: &PsiGrid) -> Result<ConfidenceSet> {
    check_alpha(alpha)?;
    require_dim(&h.s0, 3)?;
    let sigma1 = restricted_mle_union(&h.s1, h.n1)?.sigma_hat;
    let l1 = gaussian_loglik(sigma1.mat(), &h.s0, h.k)?;
    let critical = (1.0 / alpha).ln();
    let failures = Cell::new(0usize);
    let mut set = invert_to_confidence_set(
        |psi| match profile_d3(&h.s0, h.k, 0, 1, psi) {
            Ok(fit) => Ok(TestOutcome::new(psi, l1 - fit.loglik, Reference::Universal, critical)),
            Err(Error::OptimizerFailure(_)) => {
                failures.set(failures.get() + 1);
                Ok(TestOutcome::new(psi, f64::NEG_INFINITY, Reference::Universal, critical))
            }
            Err(e) => Err(e),
        },
        grid,
    )?;
    if failures.get() > 0 {
        set.warn(SetWarning::OptimizerFailuresAccepted { count: failures.get() });
    }
    Ok(set)
}

pub fn slrt_numeric_confidence_set_d3(
    data: &Dataset,
    alpha: f64,
    split: &SplitConfig,
    grid_points: usize,
) -> Result<ConfidenceSet> {
    if data.d() != 3 {
        return Err(Error::UnsupportedDimension(data.d()));
    }
    let h = split_halves(data, split)?;
    slrt_numeric_from_halves(&h, alpha, &split_grid(&h, grid_points)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(a: f64, b: f64, c: f64) -> CovarianceMatrix {
        CovarianceMatrix::sym2(a, b, c).unwrap()
    }

    #[test]
    fn profile_d2_closed_forms() {
        let k = 37;
        let base = -(k as f64) * (2.0 * PI).ln() - k as f64;
        assert!((profile_loglik_d2(&sym(1.0, 0.0, 1.0), k, 0.0) - base).abs() < 1e-10);
        assert!((profile_loglik_d2(&sym(1.0, 0.5, 1.25), k, 0.5) - base).abs() < 1e-10);
    }

    #[test]
    fn profile_d2_matches_branch_likelihood() {
        let s = sym(1.4, 0.3, 0.9);
        for &psi in &[-0.4, 0.2, 1.3] {
            let p = LsemParams::m1(psi, 1.0).unwrap();
            let trace = (1.0 + psi * psi) * 1.4 - 2.0 * psi * 0.3 + 0.9;
            let p = LsemParams { sigma2: trace / 2.0, ..p };
            let l = gaussian_loglik(p.implied_covariance().mat(), &s, 20).unwrap();
            assert!((profile_loglik_d2(&s, 20, psi) - l).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_split_discriminants() {
        let k = 40;
        let out = slrt_discriminants(&sym(1.0, 0.0, 1.0), k, &Mat::identity(2), 0.05).unwrap();
        let g = 2.0 * (0.05f64.powf(-1.0 / k as f64) - 1.0);
        assert!((out.g1 - g).abs() < 1e-12 && (out.g2 - g).abs() < 1e-12);
        let (l, u) = out.interval.unwrap();
        assert!((l + u).abs() < 1e-15);
        assert!(out.zero_included());
    }

    #[test]
    fn moment_estimator_two_variable_forms() {
        let s = sym(1.3, 0.4, 0.8);
        let p = moment_estimator(&s, ModelBranch::M1, 0, 1, 0.7).unwrap();
        let c = p.implied_covariance();
        assert!(c.mat().max_abs_diff(&Mat::sym2(1.3, 0.7 * 1.3, 1.49 * 1.3)) < 1e-14);
        assert!((c.get(0, 0).powi(2) - c.det()).abs() < 1e-12);
        let p = moment_estimator(&s, ModelBranch::M2, 0, 1, 0.0).unwrap();
        let bt = 0.4 / 0.8;
        let c = p.implied_covariance();
        assert!(c.mat().max_abs_diff(&Mat::sym2(0.8 * (1.0 + bt * bt), bt * 0.8, 0.8)) < 1e-14);
        assert_eq!(p.total_effect(0, 1), 0.0);
        assert!(matches!(
            moment_estimator(&s, ModelBranch::M2, 0, 1, 0.3),
            Err(Error::InfeasibleMoment(_))
        ));
    }

    #[test]
    fn moment_estimator_three_variable_effect() {
        let s = CovarianceMatrix::new(Mat::from_rows(&[
            &[1.0, 0.4, 0.3],
            &[0.4, 1.5, 0.6],
            &[0.3, 0.6, 1.2],
        ]))
        .unwrap();
        for branch in ModelBranch::all(3) {
            for &psi in &[0.0, 0.35, -1.2] {
                match moment_estimator(&s, branch, 0, 1, psi) {
                    Ok(p) => {
                        assert!((p.total_effect(0, 1) - psi).abs() < 1e-12);
                        assert_eq!(p.sigma2, s.get(branch.order()[0], branch.order()[0]));
                    }
                    Err(Error::InfeasibleMoment(_)) => assert!(branch.precedes(1, 0) && psi != 0.0),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn lsem_loglik_matches_generic() {
        let s = sym(1.3, 0.4, 0.8);
        let p = moment_estimator(&s, ModelBranch::M1, 0, 1, 0.7).unwrap();
        let a = lsem_loglik(&p.b, p.sigma2, s.mat(), 15);
        let b = gaussian_loglik(p.implied_covariance().mat(), &s, 15).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn profile_d3_satisfies_constraint() {
        let s = CovarianceMatrix::new(Mat::from_rows(&[
            &[1.0, 0.4, 0.3],
            &[0.4, 1.5, 0.6],
            &[0.3, 0.6, 1.2],
        ]))
        .unwrap();
        for &psi in &[0.0, 0.2, 0.4, 0.9, -0.5] {
            let fit = profile_d3(&s, 50, 0, 1, psi).unwrap();
            let p = LsemParams::new(fit.branch, fit.b, fit.trace / 3.0).unwrap();
            assert!((p.total_effect(0, 1) - psi).abs() < 1e-12);
            let i_b = Mat::identity(3).sub(&fit.b);
            let tr = i_b.transpose().mul(&i_b).trace_of_product(s.mat());
            assert!((tr - fit.trace).abs() < 1e-10);
            // never beats the unrestricted equal-variance optimum
            let free = restricted_mle_union(&s, 50).unwrap();
            assert!(fit.trace >= free.fit.trace - 1e-12);
        }
    }

    #[test]
    fn split_sizes_and_determinism() {
        let cfg = SplitConfig::seeded(RngSeed::new(3, 1));
        let (a0, a1) = split_indices(11, &cfg).unwrap();
        let (b0, b1) = split_indices(11, &cfg).unwrap();
        assert_eq!((a0.len(), a1.len()), (5, 6));
        assert_eq!((a0.clone(), a1.clone()), (b0, b1));
        let mut all: Vec<usize> = a0.into_iter().chain(a1).collect();
        all.sort();
        assert_eq!(all, (0..11).collect::<Vec<_>>());
        let first = SplitConfig { k: Some(3), rule: SplitRule::FirstK, ..cfg };
        assert_eq!(split_indices(8, &first).unwrap().0, vec![0, 1, 2]);
        assert!(split_indices(8, &SplitConfig { k: Some(7), ..first }).is_err());
    }

    #[test]
    fn degenerate_half_is_reported() {
        let rows: Vec<Vec<f64>> = (0..8)
            .map(|i| if i < 4 { vec![i as f64, 2.0 * i as f64] } else { vec![i as f64, (i * i) as f64] })
            .collect();
        let data = Dataset::from_rows(&rows).unwrap();
        let cfg = SplitConfig { k: Some(4), rule: SplitRule::FirstK, seed: RngSeed::new(0, 0) };
        assert!(matches!(split_halves(&data, &cfg), Err(Error::DegenerateSplit(_))));
    }
}
