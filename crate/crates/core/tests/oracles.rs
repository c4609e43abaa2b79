mod common;

use std::f64::consts::PI;

use common::{integrate, mean_std, quad_x_theta, Pair};
use lvq_drift_core::rng::run_rng;
use lvq_drift_core::stream::sample_example_into;
use lvq_drift_core::theory::ode_rhs;
use lvq_drift_core::{ModelParams, PrototypeState, ORDER_DIM};

#[test]
fn quadrature_reproduces_gaussian_integrals() {
    let mut f = |x: f64| (-x * x).exp();
    let v = integrate(&mut f, -12.0, 12.0, 1e-14);
    assert!((v - PI.sqrt()).abs() < 1e-13);
    // E[x Theta(z)] for unit normals with correlation 0.5 is 0.5 / sqrt(2 pi)
    let p = Pair {
        mx: 0.0,
        sx: 1.0,
        mz: 0.0,
        sz: 1.0,
        rho: 0.5,
    };
    assert!((quad_x_theta(&p) - 0.5 / (2.0 * PI).sqrt()).abs() < 1e-11);
}

/// Prototypes at a fixed, non-trivial point of order-parameter space.
fn frozen_state(dim: usize) -> PrototypeState {
    let mut w_plus = vec![0.0; dim];
    let mut w_minus = vec![0.0; dim];
    w_plus[0] = 0.9;
    w_plus[1] = -0.2;
    w_plus[2] = 0.4;
    w_minus[0] = 0.1;
    w_minus[1] = 0.7;
    w_minus[3] = 0.5;
    PrototypeState {
        w_plus,
        w_minus,
        mu: 0,
        eta: 1.0,
        gamma: 0.05,
    }
}

#[test]
fn ode_rhs_matches_mean_single_step_increment() {
    let dim = 2000;
    let samples = 20_000;
    let p_plus = 0.7;
    let params = ModelParams::new(1.0, 0.3, 0.6, dim).unwrap();
    let frozen = frozen_state(dim);
    let start = frozen.measure(&params).to_array();
    let mut rng = run_rng(31, 0);
    let mut xi = vec![0.0; dim];
    let mut increments: Vec<Vec<f64>> = (0..ORDER_DIM)
        .map(|_| Vec::with_capacity(samples))
        .collect();
    for _ in 0..samples {
        let sigma = sample_example_into(&params, p_plus, &mut rng, &mut xi);
        let mut s = frozen.clone();
        s.lvq1_step(&xi, sigma);
        let after = s.measure(&params).to_array();
        for k in 0..ORDER_DIM {
            increments[k].push(dim as f64 * (after[k] - start[k]));
        }
    }
    let op = frozen.measure(&params);
    let rhs = ode_rhs(&op, &params, p_plus, frozen.gamma, frozen.eta).to_array();
    for k in 0..ORDER_DIM {
        let (m, sd) = mean_std(&increments[k]);
        let se = sd / (samples as f64).sqrt();
        assert!(
            (m - rhs[k]).abs() < 4.0 * se + 2e-3,
            "component {k}: MC {m} +- {se}, ODE {}",
            rhs[k]
        );
    }
}

#[test]
fn ode_rhs_reduces_to_decay_without_learning() {
    let params = ModelParams::new(1.0, 0.3, 0.6, 10).unwrap();
    let op = frozen_state(10).measure(&params);
    let d = ode_rhs(&op, &params, 0.5, 0.2, 0.0);
    assert!((d.r_pp + 0.2 * op.r_pp).abs() < 1e-15);
    assert!((d.q_pm + 0.4 * op.q_pm).abs() < 1e-15);
}
