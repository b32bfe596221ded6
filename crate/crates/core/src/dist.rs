//! Chi-square and chi-bar-square distribution functions, and the seeded
//! Gaussian LSEM sampler.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{Dataset, LsemParams};

const MAX_ITER: usize = 1000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Bracket used by every quantile bisection.
pub const QUANTILE_BRACKET: (f64, f64) = (0.0, 200.0);
/// Absolute tolerance of quantile bisection.
pub const QUANTILE_TOL: f64 = 1e-10;

/// `ln Γ(df/2)` for a positive integer `df`, by exact products.
fn ln_gamma_half(df: u32) -> f64 {
    if df.is_multiple_of(2) {
        let m = df / 2;
        (1..m).map(|i| (i as f64).ln()).sum()
    } else {
        let m = df / 2;
        0.5 * PI.ln() + (0..m).map(|i| (i as f64 + 0.5).ln()).sum::<f64>()
    }
}

/// Regularized lower incomplete gamma `P(df/2, x)`.
fn lower_gamma_half(df: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let a = 0.5 * df as f64;
    let prefactor = (-x + a * x.ln() - ln_gamma_half(df)).exp();
    if x < a + 1.0 {
        // series: P = prefactor · Σ xⁿ / (a (a+1) ⋯ (a+n))
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * EPS {
                break;
            }
        }
        (prefactor * sum).min(1.0)
    } else {
        // modified Lentz continued fraction for Q
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < EPS {
                break;
            }
        }
        (1.0 - prefactor * h).max(0.0)
    }
}

/// CDF of the chi-square distribution with `df` degrees of freedom;
/// `df = 0` is the point mass at zero.
pub fn chisq_cdf(x: f64, df: u32) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("chi-square argument {x} is negative")));
    }
    if df == 0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    Ok(lower_gamma_half(df, 0.5 * x))
}

/// Upper quantile `χ²_{df, p}` by bisection.
pub fn chisq_quantile(p: f64, df: u32) -> Result<f64> {
    mixture_quantile(p, &MixtureSpec::chisq(df))
}

/// A finite mixture `Σ wᵢ χ²_{dfᵢ}` with `χ²₀` the point mass at zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    components: Vec<(f64, u32)>,
}

impl MixtureSpec {
    pub fn new(mut components: Vec<(f64, u32)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("empty mixture".into()));
        }
        if components.iter().any(|(w, _)| !(0.0..=1.0).contains(w)) {
            return Err(Error::Domain("mixture weight outside [0, 1]".into()));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("mixture weights sum to {total}")));
        }
        components.sort_by_key(|&(_, df)| df);
        Ok(MixtureSpec { components })
    }

    pub fn chisq(df: u32) -> Self {
        MixtureSpec { components: vec![(1.0, df)] }
    }

    /// `0.5 χ²₀ + 0.5 χ²₁`.
    pub fn chibar_01() -> Self {
        MixtureSpec { components: vec![(0.5, 0), (0.5, 1)] }
    }

    /// `0.5 χ²₁ + 0.5 χ²₂`.
    pub fn chibar_12() -> Self {
        MixtureSpec { components: vec![(0.5, 1), (0.5, 2)] }
    }

    pub fn components(&self) -> &[(f64, u32)] {
        &self.components
    }

    /// Mass of the point mass at zero.
    pub fn atom(&self) -> f64 {
        self.components.iter().filter(|(_, df)| *df == 0).map(|(w, _)| w).sum()
    }

    pub fn cdf(&self, q: f64) -> f64 {
        if q < 0.0 {
            return 0.0;
        }
        self.components
            .iter()
            .map(|&(w, df)| w * chisq_cdf(q, df).expect("q is nonnegative"))
            .sum()
    }
}

/// `q` with `cdf(q) = p`, by bisection on `QUANTILE_BRACKET`.
pub fn mixture_quantile(p: f64, spec: &MixtureSpec) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("probability {p} outside (0, 1)")));
    }
    let atom = spec.atom();
    if p <= atom {
        return Err(Error::InfeasibleQuantile { p, atom });
    }
    let (mut lo, mut hi) = QUANTILE_BRACKET;
    if spec.cdf(hi) < p {
        return Err(Error::Domain(format!("quantile {p} lies beyond {hi}")));
    }
    while hi - lo > QUANTILE_TOL {
        let mid = 0.5 * (lo + hi);
        if spec.cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Like [`mixture_quantile`], but a probability inside the atom at zero
/// yields `(0, true)` instead of an error.
pub fn mixture_quantile_or_zero(p: f64, spec: &MixtureSpec) -> Result<(f64, bool)> {
    match mixture_quantile(p, spec) {
        Ok(q) => Ok((q, false)),
        Err(Error::InfeasibleQuantile { .. }) => Ok((0.0, true)),
        Err(e) => Err(e),
    }
}

/// Seed and stream of a ChaCha8 generator. The stream is the replication
/// index in Monte Carlo runs, so every replication is reproducible on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

/// Independent purposes drawn from one replication seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purpose {
    Data,
    Split,
    Bootstrap,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSeed { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Seed for a secondary purpose; `Purpose::Data` returns `self`.
    pub fn for_purpose(&self, purpose: Purpose) -> RngSeed {
        let tag = match purpose {
            Purpose::Data => return *self,
            Purpose::Split => 0x5b11_7000_0000_0001,
            Purpose::Bootstrap => 0xb007_0000_0000_0002,
        };
        RngSeed { seed: splitmix64(self.seed ^ tag), stream: self.stream }
    }
}

/// Draws `n` rows `X = (I − B)⁻¹ ε` with `ε ~ N(0, σ² I)`.
pub fn sample_lsem(params: &LsemParams, n: usize, seed: RngSeed) -> Dataset {
    let d = params.dim();
    let mixing = params.mixing();
    let sd = params.sigma2.sqrt();
    let mut rng = seed.rng();
    let mut values = Vec::with_capacity(n * d);
    let mut eps = [0.0; 3];
    for _ in 0..n {
        for e in eps.iter_mut().take(d) {
            let z: f64 = StandardNormal.sample(&mut rng);
            *e = sd * z;
        }
        let x = mixing.mul_vec(&eps);
        values.extend_from_slice(&x[..d]);
    }
    Dataset::new(d, values).expect("sampled values are finite")
}
