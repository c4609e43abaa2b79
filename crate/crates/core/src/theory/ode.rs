use serde::{Deserialize, Serialize};

use super::averages::average_terms;
use super::rk4::rk4_step;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::order::{OrderParams, ORDER_DIM};
use crate::schedule::PriorSchedule;
use crate::stream::ModelParams;

/// Largest tolerated violation of positive semidefiniteness of the
/// prototype Gram matrix along a trajectory.
pub const GRAM_TOLERANCE: f64 = 1e-9;

/// Length of the start-up interval integrated with a refined step. Starting
/// from nearly coincident prototypes the Heaviside argument has a tiny
/// spread, and the averages change on an alpha-scale of order
/// `sqrt(q_hat)`.
const STARTUP_SPAN: f64 = 1.0;
const STARTUP_REFINEMENT: f64 = 10.0;

/// Right-hand side of the order-parameter ODE,
///
/// ```text
/// dR_{S tau}/d alpha = eta (<b_tau f_S> - R_{S tau} <f_S>) - gamma R_{S tau}
/// dQ_{ST}/d alpha    = eta (<h_S f_T + h_T f_S> - Q_{ST} <f_S + f_T>)
///                      + eta^2 sum_sigma v_sigma p_sigma <f_S f_T>_sigma
///                      - 2 gamma Q_{ST}
/// ```
///
/// where `<.> = sum_sigma p_sigma <.>_sigma`. For LVQ1 `<f_+ f_->_sigma`
/// vanishes, so the `eta^2` term only contributes to `Q_{++}` and `Q_{--}`.
///
/// The result is returned as an [`OrderParams`] holding the derivatives, with
/// `alpha` set to 1.
pub fn ode_rhs(
    op: &OrderParams,
    params: &ModelParams,
    p_plus: f64,
    gamma: f64,
    eta: f64,
) -> OrderParams {
    let avg = average_terms(op, params);
    let prior = |sigma: Label| match sigma {
        Label::Plus => p_plus,
        Label::Minus => 1.0 - p_plus,
    };
    let mean =
        |g: &dyn Fn(Label) -> f64| Label::BOTH.iter().map(|&sg| prior(sg) * g(sg)).sum::<f64>();

    let f = |s: Label| mean(&|sg| avg.f(s, sg));
    let dr = |s: Label, tau: Label| {
        eta * (mean(&|sg| avg.b_f(tau, s, sg)) - op.r(s, tau) * f(s)) - gamma * op.r(s, tau)
    };
    let dq = |s: Label, t: Label| {
        let linear = mean(&|sg| avg.h_f(s, t, sg) + avg.h_f(t, s, sg)) - op.q(s, t) * (f(s) + f(t));
        let noise: f64 = Label::BOTH
            .iter()
            .map(|&sg| params.variance(sg) * prior(sg) * avg.ff(s, t, sg))
            .sum();
        eta * linear + eta * eta * noise - 2.0 * gamma * op.q(s, t)
    };

    use Label::{Minus as M, Plus as P};
    OrderParams {
        r_pp: dr(P, P),
        r_pm: dr(P, M),
        r_mp: dr(M, P),
        r_mm: dr(M, M),
        q_pp: dq(P, P),
        q_mm: dq(M, M),
        q_pm: dq(P, M),
        alpha: 1.0,
    }
}

/// Rates, horizon and grids for one ODE integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeSettings {
    pub eta: f64,
    pub gamma: f64,
    pub alpha_max: f64,
    /// Upper bound on the RK4 step.
    pub d_alpha: f64,
    /// Spacing of the emitted grid.
    pub output_stride: f64,
}

impl Default for OdeSettings {
    fn default() -> Self {
        Self {
            eta: 1.0,
            gamma: 0.0,
            alpha_max: 200.0,
            d_alpha: 0.01,
            output_stride: 0.5,
        }
    }
}

/// Uniform grid `start, start + stride, ...` up to `end` inclusive (within
/// rounding).
pub fn output_grid_points(start: f64, end: f64, stride: f64) -> Vec<f64> {
    let count = ((end - start) / stride + 1e-9).floor() as usize;
    (0..=count).map(|k| start + k as f64 * stride).collect()
}

/// Integrates the order-parameter ODE from `init` to `settings.alpha_max`
/// with fixed-step RK4, evaluating the class prior at every stage.
///
/// Returns the states on the uniform output grid starting at `init.alpha`.
/// The first unit of learning time uses a step ten times smaller than
/// `d_alpha`.
/// Schedule breakpoints are integration knots: a step never straddles a
/// discontinuity of `p_+`, and stages that land on the right end of a
/// segment see the left limit of the prior.
pub fn integrate(
    init: &OrderParams,
    params: &ModelParams,
    schedule: &PriorSchedule,
    settings: &OdeSettings,
) -> Result<Vec<OrderParams>> {
    if settings.d_alpha.is_nan() || settings.d_alpha <= 0.0 {
        return Err(Error::invalid(
            "d_alpha",
            format!("{} must be > 0", settings.d_alpha),
        ));
    }
    if settings.output_stride.is_nan() || settings.output_stride <= 0.0 {
        return Err(Error::invalid(
            "output_stride",
            format!("{} must be > 0", settings.output_stride),
        ));
    }
    if settings.alpha_max.is_nan() || settings.alpha_max <= init.alpha {
        return Err(Error::invalid(
            "alpha_max",
            format!(
                "{} must exceed the initial alpha {}",
                settings.alpha_max, init.alpha
            ),
        ));
    }
    check_gram(init)?;

    let grid = output_grid_points(init.alpha, settings.alpha_max, settings.output_stride);
    let mut knots: Vec<f64> = grid.clone();
    knots.extend(
        schedule
            .breakpoints()
            .into_iter()
            .filter(|&b| b > init.alpha && b < *grid.last().unwrap()),
    );
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let mut out = Vec::with_capacity(grid.len());
    out.push(*init);
    let mut next_output = 1;
    let mut y = init.to_array();
    for seg in knots.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let max_step = if a < init.alpha + STARTUP_SPAN {
            settings.d_alpha / STARTUP_REFINEMENT
        } else {
            settings.d_alpha
        };
        let steps = ((b - a) / max_step - 1e-9).ceil().max(1.0) as usize;
        let h = (b - a) / steps as f64;
        let mut rhs = |t: f64, y: &[f64; ORDER_DIM]| -> Result<[f64; ORDER_DIM]> {
            let p_plus = if t >= b - 1e-12 * b.abs().max(1.0) {
                schedule.p_plus_left(b)
            } else {
                schedule.p_plus(t)
            };
            let op = OrderParams::from_array(y, t);
            Ok(ode_rhs(&op, params, p_plus, settings.gamma, settings.eta).to_array())
        };
        for k in 0..steps {
            let t = a + k as f64 * h;
            y = rk4_step(&mut rhs, t, &y, h)?;
            check_gram(&OrderParams::from_array(&y, t + h))?;
        }
        if next_output < grid.len() && (grid[next_output] - b).abs() < 1e-9 {
            out.push(OrderParams::from_array(&y, grid[next_output]));
            next_output += 1;
        }
    }
    debug_assert_eq!(out.len(), grid.len());
    Ok(out)
}

fn check_gram(op: &OrderParams) -> Result<()> {
    let violation = op.gram_violation();
    if violation > GRAM_TOLERANCE
        || !violation.is_finite()
        || op.to_array().iter().any(|x| !x.is_finite())
    {
        return Err(Error::GramViolation {
            alpha: op.alpha,
            detail: format!(
                "Q++={}, Q--={}, Q+-={}, violation {violation:e}",
                op.q_pp, op.q_mm, op.q_pm
            ),
        });
    }
    Ok(())
}
