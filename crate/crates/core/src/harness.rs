//! Monte Carlo coverage experiments.
//!
//! A cell is one (scenario, n, β) combination. Every replication of a cell
//! draws one dataset and runs every configured method on it, so methods are
//! compared on identical data. Replication `r` of cell `c` uses the stream
//! `(c << 32) | r` of the master seed and can be rerun in isolation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;
use std::time::Instant;

use crate::confidence::{ConfidenceSet, DEFAULT_GRID_POINTS};
use crate::dist::{sample_lsem, RngSeed};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::lrt_polynomial::Lrt2Options;
use crate::method::{run_method, Method, MethodConfig};
use crate::model::{Dataset, LsemParams, ModelBranch};
use crate::split_lrt::SplitConfig;

/// Replication count behind `--full`.
pub const FULL_REPLICATIONS: usize = 10_000;

/// Weight of every edge other than the one from `X₁` to `X₂` in the
/// three-variable scenarios.
pub const D3_OTHER_EDGE: f64 = 0.5;

/// Experiment description, read from TOML. Omitted keys take the defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub methods: Vec<Method>,
    pub sample_sizes: Vec<usize>,
    pub betas: Vec<f64>,
    /// Causal orderings of the generating model: `"1->2"`, `"2->1"`, or three
    /// variable orderings such as `"1->3->2"`.
    pub scenarios: Vec<String>,
    pub replications: usize,
    pub alpha: f64,
    pub seed: u64,
    pub sigma2: f64,
    pub grid_points: usize,
    pub bootstrap_resamples: usize,
    pub gds_penalty: f64,
    pub fill_zero_gap: bool,
    /// Size of the first split half; `None` means `⌊n/2⌋`.
    pub split_k: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let m = MethodConfig::default();
        ExperimentConfig {
            methods: vec![Method::Lrt1, Method::Lrt1b, Method::Lrt2, Method::Slrt, Method::EstSlrt],
            sample_sizes: vec![100, 500, 1000],
            betas: vec![0.0, 0.05, 0.1, 0.2, 0.5],
            scenarios: vec!["1->2".into(), "2->1".into()],
            replications: 1000,
            alpha: 0.05,
            seed: 1,
            sigma2: 1.0,
            grid_points: DEFAULT_GRID_POINTS,
            bootstrap_resamples: m.bootstrap_resamples,
            gds_penalty: m.gds_penalty,
            fill_zero_gap: true,
            split_k: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.replications < 1 {
            return bad("replications must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha {} outside (0, 1)", self.alpha));
        }
        if self.sigma2.is_nan() || self.sigma2 <= 0.0 {
            return bad(format!("sigma2 {} must be positive", self.sigma2));
        }
        if self.methods.is_empty() || self.sample_sizes.is_empty() || self.betas.is_empty() || self.scenarios.is_empty() {
            return bad("methods, sample_sizes, betas and scenarios must be nonempty".into());
        }
        if let Some(&n) = self.sample_sizes.iter().find(|&&n| n < 10) {
            return bad(format!("sample size {n} below 10"));
        }
        if self.betas.iter().any(|b| !b.is_finite()) {
            return bad("betas must be finite".into());
        }
        for sc in &self.scenarios {
            let branch = ModelBranch::parse(sc)?;
            for m in &self.methods {
                if !m.supports_dim(branch.dim()) {
                    return bad(format!("{m} does not support {} variables", branch.dim()));
                }
            }
        }
        Ok(())
    }

    pub fn method_config(&self) -> MethodConfig {
        MethodConfig {
            alpha: self.alpha,
            grid_points: self.grid_points,
            lrt2: Lrt2Options { fill_zero_gap: self.fill_zero_gap },
            split: SplitConfig { k: self.split_k, ..SplitConfig::default() },
            bootstrap_resamples: self.bootstrap_resamples,
            gds_penalty: self.gds_penalty,
        }
    }
}

/// Generating model for a scenario, and the true effect of `X₁` on `X₂`.
///
/// Two variables: the single edge along the ordering has weight `beta`.
/// Three variables: the complete graph along the ordering, with the edge
/// between `X₁` and `X₂` chosen so that the total effect along the ordering
/// is `beta` and all other edges equal to [`D3_OTHER_EDGE`].
pub fn scenario_model(branch: ModelBranch, beta: f64, sigma2: f64) -> Result<(LsemParams, f64)> {
    let d = branch.dim();
    let order = branch.order();
    let mut b = Mat::zeros(d);
    for (p, &from) in order.iter().enumerate() {
        for &to in &order[p + 1..] {
            b.set(to, from, D3_OTHER_EDGE);
        }
    }
    let forward = branch.precedes(0, 1);
    let (from, to) = if forward { (0, 1) } else { (1, 0) };
    let via_middle = if d == 3 && branch.precedes(from, 2) && branch.precedes(2, to) {
        D3_OTHER_EDGE * D3_OTHER_EDGE
    } else {
        0.0
    };
    b.set(to, from, beta - via_middle);
    let params = LsemParams::new(branch, b, sigma2)?;
    let truth = params.total_effect(0, 1);
    Ok((params, truth))
}

/// Summary of one method in one cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub method: Method,
    pub scenario: String,
    pub n: usize,
    pub beta: f64,
    pub true_effect: f64,
    pub replications: usize,
    /// Failed replications count as not covering.
    pub coverage: f64,
    pub mean_max_width: f64,
    pub zero_rate: f64,
    pub empty_rate: f64,
    pub torn_rate: f64,
    pub failures: usize,
    pub master_seed: u64,
    /// Replication `r` used stream `stream_base + r`.
    pub stream_base: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub cells: Vec<CellResult>,
}

impl ExperimentResult {
    pub fn cell(&self, method: Method, scenario: &str, n: usize, beta: f64) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.method == method && c.scenario == scenario && c.n == n && c.beta == beta)
    }
}

/// Mean wall time per replication; kept apart from the results so those
/// stay byte-identical across runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellTiming {
    pub method: Method,
    pub scenario: String,
    pub n: usize,
    pub beta: f64,
    pub mean_runtime_secs: f64,
}

struct Cell {
    scenario: String,
    branch: ModelBranch,
    n: usize,
    beta: f64,
}

fn cells(cfg: &ExperimentConfig) -> Result<Vec<Cell>> {
    let mut out = Vec::new();
    for sc in &cfg.scenarios {
        let branch = ModelBranch::parse(sc)?;
        for &n in &cfg.sample_sizes {
            for &beta in &cfg.betas {
                out.push(Cell { scenario: branch.label(), branch, n, beta });
            }
        }
    }
    Ok(out)
}

pub fn replication_seed(master: u64, cell: usize, rep: usize) -> RngSeed {
    RngSeed::new(master, ((cell as u64) << 32) | rep as u64)
}

enum Outcome {
    Set(ConfidenceSet),
    Failed,
}

/// Runs every method on one replication; a pure function of its arguments.
fn replicate(data: &Dataset, methods: &[Method], mcfg: &MethodConfig, seed: RngSeed) -> Vec<(Outcome, f64)> {
    methods
        .iter()
        .map(|&m| {
            let start = Instant::now();
            let out = match run_method(m, data, mcfg, seed) {
                Ok(set) => Outcome::Set(set),
                Err(_) => Outcome::Failed,
            };
            (out, start.elapsed().as_secs_f64())
        })
        .collect()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(ExperimentResult, Vec<CellTiming>)> {
    cfg.validate()?;
    let cells = cells(cfg)?;
    let mcfg = cfg.method_config();
    let models = cells
        .iter()
        .map(|c| scenario_model(c.branch, c.beta, cfg.sigma2))
        .collect::<Result<Vec<_>>>()?;
    let reps = cfg.replications;
    let raw: Vec<Vec<(Outcome, f64)>> = (0..cells.len() * reps)
        .into_par_iter()
        .map(|idx| {
            let (c, r) = (idx / reps, idx % reps);
            let seed = replication_seed(cfg.seed, c, r);
            let data = sample_lsem(&models[c].0, cells[c].n, seed);
            replicate(&data, &cfg.methods, &mcfg, seed)
        })
        .collect();

    let mut results = Vec::new();
    let mut timings = Vec::new();
    for (c, cell) in cells.iter().enumerate() {
        let truth = models[c].1;
        let block = &raw[c * reps..(c + 1) * reps];
        for (mi, &method) in cfg.methods.iter().enumerate() {
            let (mut covered, mut zero, mut empty, mut torn, mut failures) = (0usize, 0usize, 0usize, 0usize, 0usize);
            let (mut width, mut secs) = (0.0, 0.0);
            for rep in block {
                let (outcome, t) = &rep[mi];
                secs += t;
                match outcome {
                    Outcome::Set(set) => {
                        covered += set.contains(truth) as usize;
                        zero += set.contains_zero as usize;
                        empty += set.is_empty() as usize;
                        torn += set.is_torn() as usize;
                        width += set.max_width();
                    }
                    Outcome::Failed => failures += 1,
                }
            }
            let ok = reps - failures;
            let frac = |k: usize| k as f64 / reps as f64;
            results.push(CellResult {
                method,
                scenario: cell.scenario.clone(),
                n: cell.n,
                beta: cell.beta,
                true_effect: truth,
                replications: reps,
                coverage: frac(covered),
                mean_max_width: if ok > 0 { width / ok as f64 } else { f64::NAN },
                zero_rate: frac(zero),
                empty_rate: frac(empty),
                torn_rate: frac(torn),
                failures,
                master_seed: cfg.seed,
                stream_base: replication_seed(cfg.seed, c, 0).stream,
            });
            timings.push(CellTiming {
                method,
                scenario: cell.scenario.clone(),
                n: cell.n,
                beta: cell.beta,
                mean_runtime_secs: secs / reps as f64,
            });
        }
    }
    Ok((ExperimentResult { config: cfg.clone(), cells: results }, timings))
}

pub fn run_coverage_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    Ok(run_experiment(cfg)?.0)
}

/// One point of a width or zero-inclusion curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub method: Method,
    pub scenario: String,
    pub n: usize,
    pub beta: f64,
    pub mean_max_width: f64,
    pub zero_rate: f64,
}

/// Width and zero-inclusion curves over the configured sample sizes and
/// effect sizes, ordered by method, scenario, `β`, then `n`.
pub fn run_width_and_zero_curves(cfg: &ExperimentConfig) -> Result<Vec<CurvePoint>> {
    Ok(curves_from(&run_coverage_experiment(cfg)?))
}

pub fn curves_from(result: &ExperimentResult) -> Vec<CurvePoint> {
    let mut pts: Vec<CurvePoint> = result
        .cells
        .iter()
        .map(|c| CurvePoint {
            method: c.method,
            scenario: c.scenario.clone(),
            n: c.n,
            beta: c.beta,
            mean_max_width: c.mean_max_width,
            zero_rate: c.zero_rate,
        })
        .collect();
    pts.sort_by(|a, b| {
        (a.method, &a.scenario)
            .cmp(&(b.method, &b.scenario))
            .then(a.beta.total_cmp(&b.beta))
            .then(a.n.cmp(&b.n))
    });
    pts
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.into()))?;
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `results.csv`, `results.json`, `curves.csv` and `timings.csv`.
pub fn write_outputs(dir: &Path, result: &ExperimentResult, timings: &[CellTiming]) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_csv(&dir.join("results.csv"), &result.cells)?;
    let json = serde_json::to_string_pretty(result).map_err(|e| Error::Io(e.into()))?;
    fs::write(dir.join("results.json"), json + "\n")?;
    write_csv(&dir.join("curves.csv"), &curves_from(result))?;
    write_csv(&dir.join("timings.csv"), timings)?;
    Ok(())
}
