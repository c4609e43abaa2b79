//! Class-wise generalization errors and their reference / tracking
//! combinations.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::label::Label;
use crate::order::OrderParams;
use crate::stream::{sample_cluster_into, ModelParams};
use crate::theory::normal_cdf;
use crate::trainer::PrototypeState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub eps_plus: f64,
    pub eps_minus: f64,
    /// Error under equal class weights.
    pub eps_ref: f64,
    /// Error under the current class weights.
    pub eps_track: f64,
}

/// Probability that an input from cluster `sigma` is assigned to the wrong
/// class, i.e. that `d_sigma > d_{-sigma}`.
///
/// The difference `d_sigma - d_{-sigma}` is Gaussian with mean
/// `Q_{ss} - Q_{-s-s} - 2 lambda (R_{s s} - R_{-s s})` and variance
/// `4 v_sigma (Q_{++} - 2 Q_{+-} + Q_{--})`. Coincident prototypes fall back to
/// the tie-break (`+` wins), so the error is 0 for `sigma = +` and 1 for
/// `sigma = -`.
pub fn class_error_analytic(op: &OrderParams, params: &ModelParams, sigma: Label) -> f64 {
    let other = sigma.opposite();
    let mean = op.q(sigma, sigma)
        - op.q(other, other)
        - 2.0 * params.lambda() * (op.r(sigma, sigma) - op.r(other, sigma));
    let var = 4.0 * params.variance(sigma) * op.separation();
    if var > 0.0 {
        normal_cdf(mean / var.sqrt())
    } else if mean > 0.0 || (mean == 0.0 && sigma == Label::Minus) {
        1.0
    } else {
        0.0
    }
}

/// Fraction of `n_test` fresh inputs from cluster `sigma` that the
/// nearest-prototype classifier gets wrong.
pub fn class_error_empirical<R: Rng + ?Sized>(
    state: &PrototypeState,
    params: &ModelParams,
    sigma: Label,
    n_test: usize,
    rng: &mut R,
) -> f64 {
    assert!(n_test >= 1, "n_test must be at least 1");
    let mut xi = vec![0.0; params.dim()];
    let wrong = (0..n_test)
        .filter(|_| {
            sample_cluster_into(params, sigma, rng, &mut xi);
            state.classify(&xi) != sigma
        })
        .count();
    wrong as f64 / n_test as f64
}

/// Combines class-wise errors with the current prior `p_+`.
pub fn report(eps_plus: f64, eps_minus: f64, p_plus: f64) -> ErrorReport {
    ErrorReport {
        eps_plus,
        eps_minus,
        eps_ref: 0.5 * (eps_plus + eps_minus),
        eps_track: p_plus * eps_plus + (1.0 - p_plus) * eps_minus,
    }
}

/// Analytic errors of a state, with `p_plus` the prior at its learning time.
pub fn analytic_report(op: &OrderParams, params: &ModelParams, p_plus: f64) -> ErrorReport {
    report(
        class_error_analytic(op, params, Label::Plus),
        class_error_analytic(op, params, Label::Minus),
        p_plus,
    )
}
