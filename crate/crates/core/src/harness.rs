//! Experiment orchestration: runs the ODE and Monte Carlo engines on a
//! scenario, reduces Monte Carlo runs to mean and spread on a shared grid,
//! and compares curves.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::metrics::{analytic_report, class_error_empirical, report, ErrorReport};
use crate::order::OrderParams;
use crate::rng::{aux_rng, run_rng};
use crate::schedule::PriorSchedule;
use crate::stream::{random_orthonormal_pair, ModelParams};
use crate::theory::{integrate, output_grid_points, OdeSettings};
use crate::trainer::init_prototypes;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Ode,
    Mc,
    Both,
}

impl Engine {
    pub fn runs_ode(self) -> bool {
        matches!(self, Engine::Ode | Engine::Both)
    }

    pub fn runs_mc(self) -> bool {
        matches!(self, Engine::Mc | Engine::Both)
    }
}

/// Orientation of the cluster directions in the Monte Carlo engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `B_+ = e_1`, `B_- = e_2`.
    Standard,
    /// A random orthonormal pair drawn once per scenario from the master seed.
    Random,
}

/// How the Monte Carlo engine measures class-wise errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorMode {
    /// Exact errors of the measured order parameters.
    Analytic,
    /// Test-set estimates with `n_test` fresh inputs per class.
    Empirical,
}

/// One experiment: the density, the drift, the learning rule and how to run it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub lambda: f64,
    pub v_plus: f64,
    pub v_minus: f64,
    pub dim: usize,
    pub basis: Basis,
    pub schedule: PriorSchedule,
    pub eta: f64,
    pub gamma: f64,
    pub alpha_max: f64,
    pub engine: Engine,
    pub mc_runs: usize,
    pub seed: u64,
    pub q_hat: f64,
    pub output_stride: f64,
    pub d_alpha: f64,
    pub error_mode: ErrorMode,
    pub n_test: usize,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            v_plus: 0.4,
            v_minus: 0.4,
            dim: 100,
            basis: Basis::Standard,
            schedule: PriorSchedule::unbiased(),
            eta: 1.0,
            gamma: 0.0,
            alpha_max: 200.0,
            engine: Engine::Both,
            mc_runs: 50,
            seed: 0,
            q_hat: 1e-4,
            output_stride: 0.5,
            d_alpha: 0.01,
            error_mode: ErrorMode::Analytic,
            n_test: 100_000,
        }
    }
}

impl Scenario {
    /// Checks every field; the error names the offending config key.
    pub fn validate(&self) -> Result<()> {
        ModelParams::new(self.lambda, self.v_plus, self.v_minus, self.dim)?;
        if !self.eta.is_finite() || self.eta < 0.0 {
            return Err(Error::invalid(
                "eta",
                format!("{} must be finite and >= 0", self.eta),
            ));
        }
        if !self.gamma.is_finite() || self.gamma < 0.0 {
            return Err(Error::invalid(
                "gamma",
                format!("{} must be finite and >= 0", self.gamma),
            ));
        }
        if self.gamma >= self.dim as f64 {
            return Err(Error::invalid(
                "gamma",
                format!("{} must be below dim", self.gamma),
            ));
        }
        if !(self.alpha_max > 0.0 && self.alpha_max.is_finite()) {
            return Err(Error::invalid(
                "alpha_max",
                format!("{} must be finite and > 0", self.alpha_max),
            ));
        }
        if self.engine.runs_mc() && self.mc_runs < 1 {
            return Err(Error::invalid(
                "mc_runs",
                "must be >= 1 when the Monte Carlo engine runs",
            ));
        }
        if !(self.q_hat >= 0.0 && self.q_hat.is_finite()) {
            return Err(Error::invalid(
                "q_hat",
                format!("{} must be finite and >= 0", self.q_hat),
            ));
        }
        if !(self.output_stride > 0.0 && self.output_stride <= self.alpha_max) {
            return Err(Error::invalid(
                "output_stride",
                format!("{} must be in (0, alpha_max]", self.output_stride),
            ));
        }
        if !(self.d_alpha > 0.0 && self.d_alpha <= self.output_stride) {
            return Err(Error::invalid(
                "d_alpha",
                format!("{} must be in (0, output_stride]", self.d_alpha),
            ));
        }
        if self.n_test < 1 {
            return Err(Error::invalid("n_test", "must be >= 1"));
        }
        Ok(())
    }

    /// Model density with standard-basis cluster directions.
    pub fn model(&self) -> Result<ModelParams> {
        ModelParams::new(self.lambda, self.v_plus, self.v_minus, self.dim)
    }

    /// Model density as seen by the Monte Carlo engine, honouring `basis`.
    pub fn mc_model(&self) -> Result<ModelParams> {
        match self.basis {
            Basis::Standard => self.model(),
            Basis::Random => {
                let (bp, bm) = random_orthonormal_pair(self.dim, &mut aux_rng(self.seed))?;
                ModelParams::with_basis(self.lambda, self.v_plus, self.v_minus, bp, bm)
            }
        }
    }

    pub fn ode_settings(&self) -> OdeSettings {
        OdeSettings {
            eta: self.eta,
            gamma: self.gamma,
            alpha_max: self.alpha_max,
            d_alpha: self.d_alpha,
            output_stride: self.output_stride,
        }
    }

    /// The recording grid shared by both engines.
    pub fn grid(&self) -> Vec<f64> {
        output_grid_points(0.0, self.alpha_max, self.output_stride)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveSource {
    Ode,
    McMean,
}

/// One point of a learning curve.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CurveRow {
    pub alpha: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub eps_ref: f64,
    pub eps_track: f64,
    pub r_pp: f64,
    pub r_pm: f64,
    pub r_mp: f64,
    pub r_mm: f64,
    pub q_pp: f64,
    pub q_mm: f64,
    pub q_pm: f64,
}

impl CurveRow {
    /// Column names in output order.
    pub const COLUMNS: [&'static str; 12] = [
        "alpha",
        "eps_plus",
        "eps_minus",
        "eps_ref",
        "eps_track",
        "r_pp",
        "r_pm",
        "r_mp",
        "r_mm",
        "q_pp",
        "q_mm",
        "q_pm",
    ];

    pub fn new(op: &OrderParams, errors: &ErrorReport, alpha: f64) -> Self {
        Self {
            alpha,
            eps_plus: errors.eps_plus,
            eps_minus: errors.eps_minus,
            eps_ref: errors.eps_ref,
            eps_track: errors.eps_track,
            r_pp: op.r_pp,
            r_pm: op.r_pm,
            r_mp: op.r_mp,
            r_mm: op.r_mm,
            q_pp: op.q_pp,
            q_mm: op.q_mm,
            q_pm: op.q_pm,
        }
    }

    pub fn values(&self) -> [f64; 12] {
        [
            self.alpha,
            self.eps_plus,
            self.eps_minus,
            self.eps_ref,
            self.eps_track,
            self.r_pp,
            self.r_pm,
            self.r_mp,
            self.r_mm,
            self.q_pp,
            self.q_mm,
            self.q_pm,
        ]
    }

    pub fn from_values(v: &[f64; 12]) -> Self {
        Self {
            alpha: v[0],
            eps_plus: v[1],
            eps_minus: v[2],
            eps_ref: v[3],
            eps_track: v[4],
            r_pp: v[5],
            r_pm: v[6],
            r_mp: v[7],
            r_mm: v[8],
            q_pp: v[9],
            q_mm: v[10],
            q_pm: v[11],
        }
    }

    pub fn order_params(&self) -> OrderParams {
        OrderParams {
            r_pp: self.r_pp,
            r_pm: self.r_pm,
            r_mp: self.r_mp,
            r_mm: self.r_mm,
            q_pp: self.q_pp,
            q_mm: self.q_mm,
            q_pm: self.q_pm,
            alpha: self.alpha,
        }
    }
}

/// A learning curve. Monte Carlo curves carry the across-run standard
/// deviation of every column in `std` (its `alpha` column repeats the grid).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    pub source: CurveSource,
    pub rows: Vec<CurveRow>,
    pub std: Option<Vec<CurveRow>>,
    pub runs: usize,
}

impl LearningCurve {
    pub fn alphas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.alpha).collect()
    }

    /// Values of one named column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = CurveRow::COLUMNS.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.values()[i]).collect())
    }

    /// Row at the grid point closest to `alpha`.
    pub fn at(&self, alpha: f64) -> &CurveRow {
        self.rows
            .iter()
            .min_by(|a, b| (a.alpha - alpha).abs().total_cmp(&(b.alpha - alpha).abs()))
            .expect("curve has rows")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScenarioOutput {
    pub ode: Option<LearningCurve>,
    pub mc: Option<LearningCurve>,
}

/// Runs the engines selected by `s.engine`.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioOutput> {
    s.validate()?;
    let ode = if s.engine.runs_ode() {
        Some(ode_curve(s).map_err(|e| e.with_context("ODE engine"))?)
    } else {
        None
    };
    let mc = if s.engine.runs_mc() {
        Some(mc_curve(s).map_err(|e| e.with_context("Monte Carlo engine"))?)
    } else {
        None
    };
    Ok(ScenarioOutput { ode, mc })
}

/// Learning curve of the ODE engine from the uncorrelated start `q_hat`.
pub fn ode_curve(s: &Scenario) -> Result<LearningCurve> {
    let params = s.model()?;
    let traj = integrate(
        &OrderParams::initial(s.q_hat),
        &params,
        &s.schedule,
        &s.ode_settings(),
    )?;
    let rows = traj
        .iter()
        .map(|op| {
            let errors = analytic_report(op, &params, s.schedule.p_plus(op.alpha));
            CurveRow::new(op, &errors, op.alpha)
        })
        .collect();
    Ok(LearningCurve {
        source: CurveSource::Ode,
        rows,
        std: None,
        runs: 1,
    })
}

/// Offset separating the test-sample streams from the training streams.
const EVAL_STREAM: u64 = 1 << 63;

/// One Monte Carlo run on the scenario grid. Run `k` trains with
/// `run_rng(seed, k)`; empirical errors draw from `run_rng(seed, k + 2^63)`.
pub fn mc_run(s: &Scenario, params: &ModelParams, run: u64) -> Vec<CurveRow> {
    let n = s.dim;
    let mut rng = run_rng(s.seed, run);
    let mut eval_rng = run_rng(s.seed, run | EVAL_STREAM);
    let mut state = init_prototypes(n, s.q_hat, &mut rng).with_rates(s.eta, s.gamma);
    let mut buf = vec![0.0; n];
    s.grid()
        .into_iter()
        .map(|alpha| {
            let target = (alpha * n as f64).round() as u64;
            state.train(params, &s.schedule, target - state.mu, &mut rng, &mut buf);
            let op = state.measure(params);
            let p_plus = s.schedule.p_plus(alpha);
            let errors = match s.error_mode {
                ErrorMode::Analytic => analytic_report(&op, params, p_plus),
                ErrorMode::Empirical => report(
                    class_error_empirical(&state, params, Label::Plus, s.n_test, &mut eval_rng),
                    class_error_empirical(&state, params, Label::Minus, s.n_test, &mut eval_rng),
                    p_plus,
                ),
            };
            CurveRow::new(&op, &errors, alpha)
        })
        .collect()
}

/// Mean and standard deviation over `s.mc_runs` independent runs.
pub fn mc_curve(s: &Scenario) -> Result<LearningCurve> {
    let params = s.mc_model()?;
    let runs: Vec<Vec<CurveRow>> = (0..s.mc_runs as u64)
        .into_par_iter()
        .map(|k| mc_run(s, &params, k))
        .collect();
    Ok(reduce_runs(&runs))
}

/// Per-grid-point mean and sample standard deviation (0 for a single run).
/// Summation follows run order, so the result does not depend on how the
/// runs were scheduled.
pub fn reduce_runs(runs: &[Vec<CurveRow>]) -> LearningCurve {
    assert!(!runs.is_empty(), "at least one run required");
    let points = runs[0].len();
    let count = runs.len() as f64;
    let mut rows = Vec::with_capacity(points);
    let mut stds = Vec::with_capacity(points);
    for j in 0..points {
        let mut mean = [0.0; 12];
        for run in runs {
            for (m, x) in mean.iter_mut().zip(run[j].values()) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= count);
        let mut var = [0.0; 12];
        if runs.len() > 1 {
            for run in runs {
                for ((v, x), m) in var.iter_mut().zip(run[j].values()).zip(&mean) {
                    *v += (x - m) * (x - m);
                }
            }
            var.iter_mut().for_each(|v| *v /= count - 1.0);
        }
        let alpha = runs[0][j].alpha;
        mean[0] = alpha;
        let mut sd = var.map(f64::sqrt);
        sd[0] = alpha;
        rows.push(CurveRow::from_values(&mean));
        stds.push(CurveRow::from_values(&sd));
    }
    LearningCurve {
        source: CurveSource::McMean,
        rows,
        std: Some(stds),
        runs: runs.len(),
    }
}

/// Deviation statistics for one column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnDeviation {
    pub column: String,
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Largest `|a - b| / std` over points with positive spread; `None` when
    /// neither curve carries a spread.
    pub max_abs_z: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub points: usize,
    pub columns: Vec<ColumnDeviation>,
}

impl DeviationReport {
    pub fn column(&self, name: &str) -> Option<&ColumnDeviation> {
        self.columns.iter().find(|c| c.column == name)
    }
}

fn interpolate(curve: &LearningCurve, rows: &[CurveRow], alpha: f64) -> [f64; 12] {
    let idx = curve.rows.partition_point(|r| r.alpha < alpha);
    if idx < rows.len() && (curve.rows[idx].alpha - alpha).abs() < 1e-12 {
        return rows[idx].values();
    }
    let (lo, hi) = (idx.saturating_sub(1), idx.min(rows.len() - 1));
    let (a0, a1) = (curve.rows[lo].alpha, curve.rows[hi].alpha);
    let t = if a1 > a0 {
        (alpha - a0) / (a1 - a0)
    } else {
        0.0
    };
    let (v0, v1) = (rows[lo].values(), rows[hi].values());
    let mut out = [0.0; 12];
    for i in 0..12 {
        out[i] = v0[i] + t * (v1[i] - v0[i]);
    }
    out[0] = alpha;
    out
}

/// Compares `b` against `a` on the grid points of `a` that fall inside both
/// curves' ranges, interpolating `b` linearly. z-scores use the spread of
/// whichever curve carries one (`b` first).
pub fn compare_curves(a: &LearningCurve, b: &LearningCurve) -> Result<DeviationReport> {
    let range = |c: &LearningCurve| match (c.rows.first(), c.rows.last()) {
        (Some(f), Some(l)) => (f.alpha, l.alpha),
        _ => (f64::NAN, f64::NAN),
    };
    let (a0, a1) = range(a);
    let (b0, b1) = range(b);
    let (lo, hi) = (a0.max(b0), a1.min(b1));
    let disjoint = || Error::DisjointGrids {
        a_start: a0,
        a_end: a1,
        b_start: b0,
        b_end: b1,
    };
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(disjoint());
    }
    let tol = 1e-9;
    let alphas: Vec<f64> = a
        .alphas()
        .into_iter()
        .filter(|&x| x >= lo - tol && x <= hi + tol)
        .collect();
    if alphas.is_empty() {
        return Err(disjoint());
    }

    let spread: Option<(&LearningCurve, &Vec<CurveRow>)> = match (&b.std, &a.std) {
        (Some(s), _) => Some((b, s)),
        (None, Some(s)) => Some((a, s)),
        _ => None,
    };

    let mut max_abs = [0.0f64; 12];
    let mut sum_abs = [0.0f64; 12];
    let mut max_z: [Option<f64>; 12] = [None; 12];
    for &alpha in &alphas {
        let va = interpolate(a, &a.rows, alpha);
        let vb = interpolate(b, &b.rows, alpha);
        let sd = spread.map(|(c, s)| interpolate(c, s, alpha));
        for i in 1..12 {
            let d = (va[i] - vb[i]).abs();
            max_abs[i] = max_abs[i].max(d);
            sum_abs[i] += d;
            if let Some(sd) = sd {
                if sd[i] > 0.0 {
                    let z = d / sd[i];
                    max_z[i] = Some(max_z[i].map_or(z, |m: f64| m.max(z)));
                } else if max_z[i].is_none() {
                    max_z[i] = Some(0.0);
                }
            }
        }
    }
    let columns = (1..12)
        .map(|i| ColumnDeviation {
            column: CurveRow::COLUMNS[i].to_string(),
            max_abs: max_abs[i],
            mean_abs: sum_abs[i] / alphas.len() as f64,
            max_abs_z: max_z[i],
        })
        .collect();
    Ok(DeviationReport {
        points: alphas.len(),
        columns,
    })
}
