//! Fixtures shared by the criterion benchmarks.

use lvq_drift_core::{ModelParams, OrderParams, PriorSchedule, Scenario};

/// A mid-training state typical of the unbiased scenario.
pub fn trained_state() -> OrderParams {
    OrderParams {
        r_pp: 0.9,
        r_pm: -0.1,
        r_mp: -0.1,
        r_mm: 0.9,
        q_pp: 1.3,
        q_mm: 1.3,
        q_pm: -0.2,
        alpha: 50.0,
    }
}

pub fn model(dim: usize) -> ModelParams {
    ModelParams::new(1.0, 0.4, 0.4, dim).expect("valid model")
}

/// The linear-drift scenario at a given dimension and horizon.
pub fn linear_drift(dim: usize, alpha_max: f64, mc_runs: usize) -> Scenario {
    Scenario {
        dim,
        alpha_max,
        mc_runs,
        schedule: PriorSchedule::linear(20.0, 200.0, 0.8).expect("valid schedule"),
        ..Scenario::default()
    }
}
