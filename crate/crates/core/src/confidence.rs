//! Confidence sets for a scalar effect and their construction by inverting
//! a family of tests over a grid of hypothesized values.

use serde::{Deserialize, Serialize};

use crate::dist::MixtureSpec;
use crate::error::Result;
use crate::model::CovarianceMatrix;

/// Anything unusual noticed while assembling a set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SetWarning {
    /// Accepted nonzero grid points did not form one run; the hull is reported.
    NonContiguousAcceptance { gaps: usize },
    /// Zero was rejected but lies inside the nonzero interval, and was added.
    ZeroGapFilled,
    /// Nothing accepted, which points at a misspecified model.
    EmptyMisspecification,
    /// Hypotheses whose profile optimisation failed; they were accepted.
    OptimizerFailuresAccepted { count: usize },
}

/// A set of effect values: an optional closed interval of nonzero values
/// plus a separate flag for zero. The set is "torn" when zero and the
/// interval are disconnected, or when zero is a hole inside the interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceSet {
    pub interval: Option<(f64, f64)>,
    pub contains_zero: bool,
    #[serde(default)]
    pub warnings: Vec<SetWarning>,
}

impl ConfidenceSet {
    pub fn new(interval: Option<(f64, f64)>, contains_zero: bool) -> Self {
        ConfidenceSet { interval, contains_zero, warnings: Vec::new() }
    }

    pub fn empty() -> Self {
        ConfidenceSet::new(None, false)
    }

    pub fn zero_only() -> Self {
        ConfidenceSet::new(None, true)
    }

    pub fn is_empty(&self) -> bool {
        self.interval.is_none() && !self.contains_zero
    }

    pub fn contains(&self, psi: f64) -> bool {
        if psi == 0.0 {
            self.contains_zero
        } else {
            self.interval.is_some_and(|(l, u)| l <= psi && psi <= u)
        }
    }

    pub fn is_torn(&self) -> bool {
        match self.interval {
            Some((l, u)) => {
                let straddles = l <= 0.0 && 0.0 <= u;
                (self.contains_zero && !straddles) || (!self.contains_zero && l < 0.0 && 0.0 < u)
            }
            None => false,
        }
    }

    /// Smallest closed interval containing the set, if nonempty.
    pub fn hull(&self) -> Option<(f64, f64)> {
        match (self.interval, self.contains_zero) {
            (Some((l, u)), true) => Some((l.min(0.0), u.max(0.0))),
            (Some(iv), false) => Some(iv),
            (None, true) => Some((0.0, 0.0)),
            (None, false) => None,
        }
    }

    /// Width of the hull; zero for `{0}` and for the empty set.
    pub fn max_width(&self) -> f64 {
        self.hull().map_or(0.0, |(l, u)| u - l)
    }

    pub(crate) fn warn(&mut self, w: SetWarning) {
        self.warnings.push(w);
    }

    /// `self ⊆ other`, comparing interval endpoints with slack `tol`.
    pub fn is_subset_of(&self, other: &ConfidenceSet, tol: f64) -> bool {
        if self.contains_zero && !other.contains_zero {
            return false;
        }
        match (self.interval, other.interval) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((l, u)), Some((lo, uo))) => l >= lo - tol && u <= uo + tol,
        }
    }
}

/// Reference distribution used to calibrate a test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Reference {
    /// Asymptotic chi-bar-square limit.
    Mixture(MixtureSpec),
    /// Finite-sample split likelihood ratio bound `log(1/α)`.
    Universal,
}

/// Outcome of testing one hypothesized effect.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub psi: f64,
    pub statistic: f64,
    pub reference: Reference,
    pub critical: f64,
    pub accepted: bool,
}

impl TestOutcome {
    pub fn new(psi: f64, statistic: f64, reference: Reference, critical: f64) -> Self {
        TestOutcome { psi, statistic, reference, critical, accepted: statistic <= critical }
    }
}

/// Default number of grid points.
pub const DEFAULT_GRID_POINTS: usize = 2001;
/// Half-width of the default grid in standard errors.
pub const GRID_SE_MULTIPLE: f64 = 6.0;

/// Grid of hypothesized effects: `count` equispaced points on `[lo, hi]`,
/// plus extra points (always zero, usually the point estimate).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiGrid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub extra: Vec<f64>,
}

impl PsiGrid {
    pub fn new(lo: f64, hi: f64, count: usize) -> Self {
        assert!(lo < hi && count >= 2, "grid needs lo < hi and at least two points");
        PsiGrid { lo, hi, count, extra: vec![0.0] }
    }

    pub fn with_point(mut self, psi: f64) -> Self {
        if psi.is_finite() {
            self.extra.push(psi);
        }
        self
    }

    /// Grid covering every `centers` value by `± 6·se`, with
    /// `se = √(det S / (n S₁₁²))`; the centers are added as extra points.
    pub fn around(s: &CovarianceMatrix, n: usize, centers: &[f64], count: usize) -> Self {
        let se = (s.det() / (n as f64 * s.get(0, 0).powi(2))).sqrt();
        let half = GRID_SE_MULTIPLE * se.max(1e-12);
        let lo = centers.iter().copied().fold(0.0, f64::min) - half;
        let hi = centers.iter().copied().fold(0.0, f64::max) + half;
        centers.iter().fold(PsiGrid::new(lo, hi, count), |g, &c| g.with_point(c))
    }

    /// Sorted distinct grid points, zero included.
    pub fn points(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        let mut pts: Vec<f64> = (0..self.count).map(|i| self.lo + step * i as f64).collect();
        pts.extend(self.extra.iter().copied());
        pts.push(0.0);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

/// Absolute tolerance for endpoint bisection.
pub const ENDPOINT_TOL: f64 = 1e-10;
const MAX_EXPANSIONS: u32 = 40;

/// Inverts the test family `test` on `grid`.
///
/// Zero membership comes from `test(0.0)`. The nonzero part is the hull of
/// accepted nonzero grid points, with each end refined by bisection against
/// its rejected neighbour. When an outermost grid point is accepted the
/// search steps outwards geometrically until a rejection brackets the end.
pub fn invert_to_confidence_set<F>(test: F, grid: &PsiGrid) -> Result<ConfidenceSet>
where
    F: Fn(f64) -> Result<TestOutcome>,
{
    let accept = |psi: f64| -> Result<bool> { Ok(test(psi)?.accepted) };
    let contains_zero = accept(0.0)?;

    let pts: Vec<f64> = grid.points().into_iter().filter(|&p| p != 0.0).collect();
    let mut flags = Vec::with_capacity(pts.len());
    for &p in &pts {
        flags.push(accept(p)?);
    }
    let first = flags.iter().position(|&a| a);
    let last = flags.iter().rposition(|&a| a);

    let (first, last) = match (first, last) {
        (Some(f), Some(l)) => (f, l),
        _ => {
            let mut set = ConfidenceSet::new(None, contains_zero);
            if !contains_zero {
                set.warn(SetWarning::EmptyMisspecification);
            }
            return Ok(set);
        }
    };

    let gaps = flags[first..=last].windows(2).filter(|w| w[0] && !w[1]).count();

    let spacing = (grid.hi - grid.lo) / (grid.count - 1) as f64;
    let lower = if first == 0 {
        expand_and_refine(&accept, pts[0], -spacing)?
    } else {
        refine(&accept, pts[first - 1], pts[first])?
    };
    let upper = if last == pts.len() - 1 {
        expand_and_refine(&accept, pts[last], spacing)?
    } else {
        refine(&accept, pts[last + 1], pts[last])?
    };

    let mut set = ConfidenceSet::new(Some((lower, upper)), contains_zero);
    if gaps > 0 {
        set.warn(SetWarning::NonContiguousAcceptance { gaps });
    }
    Ok(set)
}

/// Bisection between a rejected and an accepted point; returns the
/// boundary estimate on the accepted side.
fn refine<A>(accept: &A, mut rejected: f64, mut accepted: f64) -> Result<f64>
where
    A: Fn(f64) -> Result<bool>,
{
    while (accepted - rejected).abs() > ENDPOINT_TOL {
        let mut mid = 0.5 * (accepted + rejected);
        if mid == 0.0 {
            // zero is tested separately; probe just beside it
            mid = 0.5 * accepted;
        }
        if mid == accepted || mid == rejected {
            break;
        }
        if accept(mid)? {
            accepted = mid;
        } else {
            rejected = mid;
        }
    }
    Ok(accepted)
}

fn expand_and_refine<A>(accept: &A, start: f64, step: f64) -> Result<f64>
where
    A: Fn(f64) -> Result<bool>,
{
    let mut accepted = start;
    let mut delta = step;
    for _ in 0..MAX_EXPANSIONS {
        let probe = accepted + delta;
        if probe == 0.0 || !accept(probe)? {
            return refine(accept, probe, accepted);
        }
        accepted = probe;
        delta *= 2.0;
    }
    Ok(accepted)
}
