//! Data containers, the Gaussian likelihood and maximum likelihood fits for
//! equal-variance linear structural equation models with two or three
//! variables.
//!
//! A model with causal ordering `π` and coefficient matrix `B` (with `B[j][i]`
//! the direct effect of `i` on `j`, nonzero only when `i` precedes `j`)
//! implies the covariance `σ² (I − B)⁻¹ (I − B)⁻ᵀ`. Because `det(I − B) = 1`,
//! profiling out `σ²` leaves a likelihood that depends on `B` only through
//! `tr[(I − B)ᵀ (I − B) S]`, which is the sum of the per-node residual
//! second moments. Everything below is built on that identity.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{solve_small, Mat, MAX_DIM};

/// Relative tolerance for the leading-minor positive definiteness check.
pub const PD_RELATIVE_TOL: f64 = 1e-12;

/// `n` observations of a `d`-variate vector, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    d: usize,
    values: Vec<f64>,
    centered: bool,
}

impl Dataset {
    pub fn new(d: usize, values: Vec<f64>) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
        if !values.len().is_multiple_of(d) {
            return Err(Error::LengthMismatch(format!(
                "{} values do not form rows of length {d}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite value in row {}", pos / d)));
        }
        Ok(Dataset { d, values, centered: false })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::LengthMismatch("ragged rows".into()));
        }
        Dataset::new(d, rows.iter().flatten().copied().collect())
    }

    pub fn from_columns(cols: &[&[f64]]) -> Result<Self> {
        let n = cols.first().map_or(0, |c| c.len());
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::LengthMismatch("columns differ in length".into()));
        }
        let d = cols.len();
        let mut values = Vec::with_capacity(n * d);
        for i in 0..n {
            values.extend(cols.iter().map(|c| c[i]));
        }
        Dataset::new(d, values)
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.values.len() / self.d
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n()).map(|i| self.values[i * self.d + j]).collect()
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn means(&self) -> [f64; MAX_DIM] {
        let mut m = [0.0; MAX_DIM];
        for i in 0..self.n() {
            for (j, x) in self.row(i).iter().enumerate() {
                m[j] += x;
            }
        }
        let n = self.n().max(1) as f64;
        m.iter_mut().for_each(|x| *x /= n);
        m
    }

    /// Copy with every column shifted to mean zero.
    pub fn centered(&self) -> Dataset {
        let m = self.means();
        let mut values = self.values.clone();
        for row in values.chunks_mut(self.d) {
            for (j, x) in row.iter_mut().enumerate() {
                *x -= m[j];
            }
        }
        Dataset { d: self.d, values, centered: true }
    }

    /// Rows at `idx`, in that order. The result is not marked centered.
    pub fn select(&self, idx: &[usize]) -> Dataset {
        let mut values = Vec::with_capacity(idx.len() * self.d);
        for &i in idx {
            values.extend_from_slice(self.row(i));
        }
        Dataset { d: self.d, values, centered: false }
    }

    /// Copy with columns `a` and `b` exchanged.
    pub fn swap_columns(&self, a: usize, b: usize) -> Dataset {
        let mut values = self.values.clone();
        for row in values.chunks_mut(self.d) {
            row.swap(a, b);
        }
        Dataset { d: self.d, values, centered: self.centered }
    }

    /// Copy with every column divided by its standard deviation.
    pub fn standardized(&self) -> Dataset {
        let c = self.centered();
        let n = c.n() as f64;
        let mut sd = [1.0; MAX_DIM];
        for (j, s) in sd.iter_mut().enumerate().take(self.d) {
            let ss: f64 = (0..c.n()).map(|i| c.row(i)[j].powi(2)).sum();
            if ss > 0.0 {
                *s = (ss / n).sqrt();
            }
        }
        let mut values = c.values;
        for row in values.chunks_mut(self.d) {
            for (j, x) in row.iter_mut().enumerate() {
                *x /= sd[j];
            }
        }
        Dataset { d: self.d, values, centered: true }
    }
}

/// A symmetric positive definite covariance matrix, optionally tagged with
/// the number of observations it was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrix {
    m: Mat,
    n: Option<usize>,
}

impl CovarianceMatrix {
    /// Symmetrizes `m` and checks every leading minor against
    /// `PD_RELATIVE_TOL` times the product of the matching diagonal entries.
    pub fn new(m: Mat) -> Result<Self> {
        let m = m.symmetrized();
        check_positive_definite(&m).map_err(|_| Error::NotPositiveDefinite)?;
        Ok(CovarianceMatrix { m, n: None })
    }

    pub fn sym2(s11: f64, s12: f64, s22: f64) -> Result<Self> {
        CovarianceMatrix::new(Mat::sym2(s11, s12, s22))
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m.get(i, j)
    }

    #[inline]
    pub fn mat(&self) -> &Mat {
        &self.m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn n(&self) -> Option<usize> {
        self.n
    }

    pub fn det(&self) -> f64 {
        self.m.det()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        let mut out = CovarianceMatrix::new(self.m.scale(c))?;
        out.n = self.n;
        Ok(out)
    }
}

/// Returns the order and value of the first leading minor failing the test.
fn check_positive_definite(m: &Mat) -> std::result::Result<(), (usize, f64)> {
    if !m.is_finite() {
        return Err((0, f64::NAN));
    }
    let mut diag_prod = 1.0;
    for k in 1..=m.dim() {
        let dkk = m.get(k - 1, k - 1);
        if dkk <= 0.0 {
            return Err((k, dkk));
        }
        diag_prod *= dkk;
        let minor = m.leading_minor(k);
        if minor <= PD_RELATIVE_TOL * diag_prod {
            return Err((k, minor));
        }
    }
    Ok(())
}

/// Centers the data (a no-op when already centered) and returns the
/// divisor-`n` sample covariance.
pub fn center_and_covariance(data: &Dataset) -> Result<CovarianceMatrix> {
    let (n, d) = (data.n(), data.d());
    if n < d + 1 {
        return Err(Error::TooFewRows { n, d, need: d + 1 });
    }
    let means = if data.is_centered() { [0.0; MAX_DIM] } else { data.means() };
    let mut m = Mat::zeros(d);
    for i in 0..n {
        let r = data.row(i);
        for a in 0..d {
            let xa = r[a] - means[a];
            for b in 0..=a {
                m.set(a, b, m.get(a, b) + xa * (r[b] - means[b]));
            }
        }
    }
    let inv_n = 1.0 / n as f64;
    for a in 0..d {
        for b in 0..=a {
            let v = m.get(a, b) * inv_n;
            m.set(a, b, v);
            m.set(b, a, v);
        }
    }
    check_positive_definite(&m)
        .map_err(|(order, minor)| Error::SingularCovariance { order, minor })?;
    Ok(CovarianceMatrix { m, n: Some(n) })
}

/// `(n/2)·(−log det(2πΣ) − tr(Σ⁻¹S))`.
pub fn gaussian_loglik(sigma: &Mat, s: &CovarianceMatrix, n: usize) -> Result<f64> {
    if sigma.dim() != s.dim() {
        return Err(Error::Domain("dimension mismatch".into()));
    }
    check_positive_definite(sigma).map_err(|_| Error::NotPositiveDefinite)?;
    let inv = sigma.inverse().ok_or(Error::NotPositiveDefinite)?;
    let d = sigma.dim() as f64;
    let log_det = d * (2.0 * PI).ln() + sigma.det().ln();
    Ok(0.5 * n as f64 * (-log_det - inv.trace_of_product(s.mat())))
}

/// Log-likelihood of an equal-variance model with `σ²` profiled out, as a
/// function of the residual trace `tr[(I − B)ᵀ(I − B)S]`.
pub fn profiled_loglik(trace: f64, n: usize, d: usize) -> f64 {
    let nd = (n * d) as f64;
    -0.5 * nd * (2.0 * PI * trace / d as f64).ln() - 0.5 * nd
}

/// Unrestricted maximum of the Gaussian log-likelihood, attained at `Σ = S`.
pub fn saturated_loglik(s: &CovarianceMatrix, n: usize) -> f64 {
    let d = s.dim() as f64;
    -0.5 * n as f64 * (d * (2.0 * PI).ln() + s.det().ln() + d)
}

/// A causal ordering of the variables; for two variables `M1` is `1 → 2`
/// and `M2` is `1 ← 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelBranch {
    order: [usize; MAX_DIM],
    dim: usize,
}

impl ModelBranch {
    pub const M1: ModelBranch = ModelBranch { order: [0, 1, 2], dim: 2 };
    pub const M2: ModelBranch = ModelBranch { order: [1, 0, 2], dim: 2 };

    /// Ordering from a zero-based permutation.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let dim = order.len();
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut seen = [false; MAX_DIM];
        for &v in order {
            if v >= dim || seen[v] {
                return Err(Error::Config(format!("{order:?} is not a permutation")));
            }
            seen[v] = true;
        }
        let mut o = [0, 1, 2];
        o[..dim].copy_from_slice(order);
        Ok(ModelBranch { order: o, dim })
    }

    /// Parses labels such as `1->2`, `2->1`, `1-3-2` or `132` (one-based).
    pub fn parse(label: &str) -> Result<Self> {
        let digits: Vec<usize> = label
            .chars()
            .filter(|c| c.is_ascii_digit())
            .map(|c| c.to_digit(10).unwrap() as usize)
            .collect();
        if digits.contains(&0) {
            return Err(Error::Config(format!("bad ordering label {label:?}")));
        }
        let order: Vec<usize> = digits.iter().map(|v| v - 1).collect();
        ModelBranch::from_order(&order)
            .map_err(|_| Error::Config(format!("bad ordering label {label:?}")))
    }

    /// Every ordering of `dim` variables in lexicographic order, so the
    /// first entry is the identity ordering.
    pub fn all(dim: usize) -> Vec<ModelBranch> {
        match dim {
            2 => vec![ModelBranch::M1, ModelBranch::M2],
            3 => [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
                .iter()
                .map(|o| ModelBranch { order: *o, dim: 3 })
                .collect(),
            _ => panic!("dimension {dim} unsupported"),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> &[usize] {
        &self.order[..self.dim]
    }

    pub fn position(&self, node: usize) -> usize {
        self.order().iter().position(|&v| v == node).expect("node in ordering")
    }

    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.position(a) < self.position(b)
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.order().iter().map(|v| (v + 1).to_string()).collect();
        parts.join("->")
    }
}

impl fmt::Display for ModelBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parameters of an equal-variance LSEM.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LsemParams {
    pub branch: ModelBranch,
    /// `b[j][i]` is the direct effect of variable `i` on variable `j`.
    pub b: Mat,
    pub sigma2: f64,
}

impl LsemParams {
    pub fn new(branch: ModelBranch, b: Mat, sigma2: f64) -> Result<Self> {
        if b.dim() != branch.dim() {
            return Err(Error::Domain("coefficient matrix dimension mismatch".into()));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::Domain(format!("error variance {sigma2} must be positive")));
        }
        for j in 0..b.dim() {
            for i in 0..b.dim() {
                let v = b.get(j, i);
                if !v.is_finite() {
                    return Err(Error::Domain("non-finite coefficient".into()));
                }
                if v != 0.0 && !branch.precedes(i, j) {
                    return Err(Error::Domain(format!(
                        "edge {}->{} conflicts with ordering {branch}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(LsemParams { branch, b, sigma2 })
    }

    /// Two-variable model `X₂ = β X₁ + ε₂`.
    pub fn m1(beta: f64, sigma2: f64) -> Result<Self> {
        LsemParams::new(ModelBranch::M1, Mat::from_2x2(0.0, 0.0, beta, 0.0), sigma2)
    }

    /// Two-variable model `X₁ = β X₂ + ε₁`.
    pub fn m2(beta: f64, sigma2: f64) -> Result<Self> {
        LsemParams::new(ModelBranch::M2, Mat::from_2x2(0.0, beta, 0.0, 0.0), sigma2)
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    /// `(I − B)⁻¹`, computed by forward substitution along the ordering.
    pub fn mixing(&self) -> Mat {
        let d = self.dim();
        let mut out = Mat::zeros(d);
        // column c of (I - B)^{-1}: response of every node to a unit shock at c
        for c in 0..d {
            let mut x = [0.0; MAX_DIM];
            for &j in self.branch.order() {
                let mut v = if j == c { 1.0 } else { 0.0 };
                for (i, xi) in x.iter().enumerate().take(d) {
                    v += self.b.get(j, i) * xi;
                }
                x[j] = v;
            }
            for (r, xr) in x.iter().enumerate().take(d) {
                out.set(r, c, *xr);
            }
        }
        out
    }

    pub fn implied_covariance(&self) -> CovarianceMatrix {
        let a = self.mixing();
        let m = a.mul(&a.transpose()).scale(self.sigma2).symmetrized();
        CovarianceMatrix { m, n: None }
    }

    /// Total causal effect of variable `i` on variable `j`, `(I − B)⁻¹[j][i]`.
    pub fn total_effect(&self, i: usize, j: usize) -> f64 {
        self.mixing().get(j, i)
    }
}

/// Maximum likelihood fit within one ordering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchFit {
    pub params: LsemParams,
    /// `tr[(I − B̂)ᵀ(I − B̂)S]`.
    pub trace: f64,
    pub loglik: f64,
}

/// Regression of `node` on `preds` using the moments in `s`; returns the
/// coefficients and the residual second moment.
pub(crate) fn regress(s: &Mat, node: usize, preds: &[usize]) -> ([f64; 2], f64) {
    let k = preds.len();
    debug_assert!(k <= 2);
    let mut spp = [[0.0; 2]; 2];
    let mut spj = [0.0; 2];
    for (a, &pa) in preds.iter().enumerate() {
        spj[a] = s.get(pa, node);
        for (b, &pb) in preds.iter().enumerate() {
            spp[a][b] = s.get(pa, pb);
        }
    }
    let coef = solve_small(&spp, spj, k).unwrap_or([0.0, 0.0]);
    let explained: f64 = (0..k).map(|a| coef[a] * spj[a]).sum();
    (coef, s.get(node, node) - explained)
}

/// Per-node least squares along `branch`; returns `B̂` and the residual trace.
pub(crate) fn ols_along(s: &Mat, branch: &ModelBranch) -> (Mat, f64) {
    let d = branch.dim();
    let mut b = Mat::zeros(d);
    let mut trace = 0.0;
    let order = branch.order();
    for (pos, &node) in order.iter().enumerate() {
        let preds = &order[..pos];
        let (coef, resid) = regress(s, node, preds);
        for (a, &p) in preds.iter().enumerate() {
            b.set(node, p, coef[a]);
        }
        trace += resid;
    }
    (b, trace)
}

/// Closed-form maximum likelihood estimate within a single ordering.
pub fn mle_for_branch(s: &CovarianceMatrix, branch: ModelBranch, n: usize) -> Result<BranchFit> {
    if s.dim() != branch.dim() {
        return Err(Error::Domain("branch and covariance dimensions differ".into()));
    }
    let (b, trace) = ols_along(s.mat(), &branch);
    let d = s.dim();
    let params = LsemParams::new(branch, b, trace / d as f64)?;
    Ok(BranchFit { params, trace, loglik: profiled_loglik(trace, n, d) })
}

/// Maximum likelihood estimate over the union of all orderings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnionFit {
    pub sigma_hat: CovarianceMatrix,
    pub branch: ModelBranch,
    pub fit: BranchFit,
}

/// Best ordering by likelihood; ties go to the earliest ordering in
/// lexicographic order (`M1` for two variables).
pub fn restricted_mle_union(s: &CovarianceMatrix, n: usize) -> Result<UnionFit> {
    let mut best: Option<BranchFit> = None;
    for branch in ModelBranch::all(s.dim()) {
        let fit = mle_for_branch(s, branch, n)?;
        if best.as_ref().is_none_or(|b| fit.trace < b.trace) {
            best = Some(fit);
        }
    }
    let fit = best.expect("at least one ordering");
    Ok(UnionFit {
        sigma_hat: fit.params.implied_covariance(),
        branch: fit.params.branch,
        fit,
    })
}

/// Effect of `X₁` on `X₂` for a 2×2 covariance: `Σ₁₂/Σ₁₁` when
/// `Σ₁₁ ≤ Σ₂₂`, else zero. On the model set this is the total causal
/// effect; elsewhere it is the variance-ordering extension.
pub fn total_effect(sigma: &CovarianceMatrix) -> f64 {
    debug_assert_eq!(sigma.dim(), 2);
    if sigma.get(0, 0) <= sigma.get(1, 1) {
        sigma.get(0, 1) / sigma.get(0, 0)
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s_m1() -> CovarianceMatrix {
        CovarianceMatrix::sym2(1.0, 0.5, 1.25).unwrap()
    }

    fn s_m2() -> CovarianceMatrix {
        CovarianceMatrix::sym2(1.25, 0.5, 1.0).unwrap()
    }

    #[test]
    fn covariance_of_diamond_is_half_identity() {
        let data =
            Dataset::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]])
                .unwrap();
        let s = center_and_covariance(&data).unwrap();
        assert!(s.mat().max_abs_diff(&Mat::identity(2).scale(0.5)) < 1e-15);
        assert_eq!(s.n(), Some(4));
    }

    #[test]
    fn rank_one_data_is_singular() {
        let data = Dataset::from_rows(&[vec![1.0, 1.0], vec![-1.0, -1.0], vec![2.0, 2.0]]).unwrap();
        assert!(matches!(center_and_covariance(&data), Err(Error::SingularCovariance { .. })));
    }

    #[test]
    fn too_few_rows() {
        let data = Dataset::from_rows(&[vec![1.0, 1.0], vec![-1.0, 2.0]]).unwrap();
        assert!(matches!(center_and_covariance(&data), Err(Error::TooFewRows { .. })));
    }

    #[test]
    fn centering_zeroes_column_sums() {
        let data = Dataset::from_rows(&[
            vec![1.0, 10.0],
            vec![2.0, 20.5],
            vec![3.5, 31.0],
            vec![7.0, 12.0],
        ])
        .unwrap()
        .centered();
        for j in 0..2 {
            let col = data.column(j);
            let scale = col.iter().map(|x| x.abs()).fold(0.0, f64::max);
            let sum: f64 = col.iter().sum();
            assert!(sum.abs() <= 1e-9 * 4.0 * scale);
        }
    }

    #[test]
    fn loglik_identity() {
        let s = CovarianceMatrix::new(Mat::identity(2)).unwrap();
        let l = gaussian_loglik(&Mat::identity(2), &s, 2).unwrap();
        assert!((l - (-2.0 * (2.0 * PI).ln() - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn loglik_scaled_identity() {
        let s = CovarianceMatrix::new(Mat::identity(2)).unwrap();
        let l = gaussian_loglik(&Mat::identity(2).scale(2.0), &s, 10).unwrap();
        assert!((l - (-5.0 * (2.0 * (4.0 * PI).ln() + 1.0))).abs() < 1e-12);
    }

    #[test]
    fn loglik_rejects_indefinite() {
        let s = CovarianceMatrix::new(Mat::identity(2)).unwrap();
        assert!(matches!(
            gaussian_loglik(&Mat::sym2(1.0, 2.0, 1.0), &s, 5),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn branch_mle_exact_point() {
        let fit = mle_for_branch(&s_m1(), ModelBranch::M1, 50).unwrap();
        assert!((fit.params.b.get(1, 0) - 0.5).abs() < 1e-15);
        assert!((fit.params.sigma2 - 1.0).abs() < 1e-15);
        let fit = mle_for_branch(&CovarianceMatrix::new(Mat::identity(2)).unwrap(), ModelBranch::M1, 5)
            .unwrap();
        assert_eq!(fit.params.b.get(1, 0), 0.0);
        assert!((fit.params.sigma2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn branch_mle_mirror_point() {
        let m1 = mle_for_branch(&s_m2(), ModelBranch::M1, 50).unwrap();
        assert!((m1.params.b.get(1, 0) - 0.4).abs() < 1e-15);
        assert!((m1.params.sigma2 - 1.025).abs() < 1e-12);
        let m2 = mle_for_branch(&s_m2(), ModelBranch::M2, 50).unwrap();
        assert!(m1.loglik < m2.loglik);
        // profiled value agrees with the generic likelihood
        let l = gaussian_loglik(m1.params.implied_covariance().mat(), &s_m2(), 50).unwrap();
        assert!((l - m1.loglik).abs() < 1e-10);
    }

    #[test]
    fn union_mle_picks_generating_branch() {
        let u = restricted_mle_union(&s_m1(), 100).unwrap();
        assert_eq!(u.branch, ModelBranch::M1);
        assert!(u.sigma_hat.mat().max_abs_diff(s_m1().mat()) < 1e-14);
        let u = restricted_mle_union(&s_m2(), 100).unwrap();
        assert_eq!(u.branch, ModelBranch::M2);
        assert!(u.sigma_hat.mat().max_abs_diff(s_m2().mat()) < 1e-14);
        let u = restricted_mle_union(&CovarianceMatrix::new(Mat::identity(2)).unwrap(), 100).unwrap();
        assert_eq!(u.branch, ModelBranch::M1);
        assert!(u.sigma_hat.mat().max_abs_diff(&Mat::identity(2)) < 1e-15);
    }

    #[test]
    fn total_effect_cases() {
        assert_eq!(total_effect(&s_m1()), 0.5);
        assert_eq!(total_effect(&s_m2()), 0.0);
        assert_eq!(total_effect(&CovarianceMatrix::new(Mat::identity(2)).unwrap()), 0.0);
    }

    #[test]
    fn implied_covariance_m1() {
        let p = LsemParams::m1(0.5, 1.0).unwrap();
        assert!(p.implied_covariance().mat().max_abs_diff(s_m1().mat()) < 1e-15);
        assert_eq!(p.total_effect(0, 1), 0.5);
        assert_eq!(p.total_effect(1, 0), 0.0);
    }

    #[test]
    fn total_effect_through_path() {
        // 1 -> 3 -> 2 plus direct 1 -> 2
        let mut b = Mat::zeros(3);
        b.set(2, 0, 0.5);
        b.set(1, 2, 0.5);
        b.set(1, 0, 0.25);
        let p = LsemParams::new(ModelBranch::parse("1-3-2").unwrap(), b, 1.0).unwrap();
        assert!((p.total_effect(0, 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn edge_against_ordering_rejected() {
        let b = Mat::from_2x2(0.0, 0.3, 0.0, 0.0);
        assert!(LsemParams::new(ModelBranch::M1, b, 1.0).is_err());
    }

    #[test]
    fn branch_labels() {
        assert_eq!(ModelBranch::parse("2->1").unwrap(), ModelBranch::M2);
        assert_eq!(ModelBranch::parse("132").unwrap().label(), "1->3->2");
        assert!(ModelBranch::parse("1-1").is_err());
    }
}
