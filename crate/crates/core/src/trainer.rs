//! Monte Carlo engine: two prototypes trained online by LVQ1 with optional
//! weight decay.

use rand::Rng;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::order::OrderParams;
use crate::schedule::PriorSchedule;
use crate::stream::{dot, gaussian_vector, sample_example_into, LabelledExample, ModelParams};

#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeState {
    pub w_plus: Vec<f64>,
    pub w_minus: Vec<f64>,
    /// Number of examples presented so far.
    pub mu: u64,
    pub eta: f64,
    pub gamma: f64,
}

/// Independent random prototypes of squared norm exactly `q_hat`, with
/// learning rate 1 and no weight decay (see [`PrototypeState::with_rates`]).
pub fn init_prototypes<R: Rng + ?Sized>(dim: usize, q_hat: f64, rng: &mut R) -> PrototypeState {
    assert!(q_hat >= 0.0, "q_hat must be non-negative");
    let mut draw = || {
        if q_hat == 0.0 {
            return vec![0.0; dim];
        }
        let mut w = gaussian_vector(dim, rng);
        let scale = (q_hat / dot(&w, &w)).sqrt();
        w.iter_mut().for_each(|x| *x *= scale);
        w
    };
    let w_plus = draw();
    let w_minus = draw();
    PrototypeState {
        w_plus,
        w_minus,
        mu: 0,
        eta: 1.0,
        gamma: 0.0,
    }
}

impl PrototypeState {
    pub fn with_rates(mut self, eta: f64, gamma: f64) -> Self {
        self.eta = eta;
        self.gamma = gamma;
        self
    }

    pub fn dim(&self) -> usize {
        self.w_plus.len()
    }

    pub fn prototype(&self, s: Label) -> &[f64] {
        match s {
            Label::Plus => &self.w_plus,
            Label::Minus => &self.w_minus,
        }
    }

    /// Squared Euclidean distances `(d_+, d_-)` of `xi` from the prototypes.
    pub fn distances(&self, xi: &[f64]) -> (f64, f64) {
        let sq = |w: &[f64]| {
            w.iter()
                .zip(xi)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
        };
        (sq(&self.w_plus), sq(&self.w_minus))
    }

    /// Nearest-prototype label. Ties go to `+`.
    pub fn classify(&self, xi: &[f64]) -> Label {
        debug_assert_eq!(xi.len(), self.dim());
        let (dp, dm) = self.distances(xi);
        if dp <= dm {
            Label::Plus
        } else {
            Label::Minus
        }
    }

    /// One LVQ1 step on `(xi, sigma)`:
    /// `w_S <- (1 - gamma/N) w_S + (eta/N) f_S (xi - w_S)` with
    /// `f_S = S sigma` for the winner and 0 for the loser. Both the winner and
    /// the update direction use the prototypes as they were before the step.
    pub fn lvq1_step(&mut self, xi: &[f64], sigma: Label) {
        debug_assert_eq!(xi.len(), self.dim());
        let n = self.dim() as f64;
        let winner = self.classify(xi);
        let decay = 1.0 - self.gamma / n;
        let k = self.eta / n * winner.sign() * sigma.sign();
        let (w_win, w_lose) = match winner {
            Label::Plus => (&mut self.w_plus, &mut self.w_minus),
            Label::Minus => (&mut self.w_minus, &mut self.w_plus),
        };
        for (w, x) in w_win.iter_mut().zip(xi) {
            *w = decay * *w + k * (x - *w);
        }
        if self.gamma != 0.0 {
            w_lose.iter_mut().for_each(|w| *w *= decay);
        }
        self.mu += 1;
    }

    pub fn step(&mut self, ex: &LabelledExample) -> Result<()> {
        if ex.xi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: ex.xi.len(),
            });
        }
        self.lvq1_step(&ex.xi, ex.sigma);
        Ok(())
    }

    /// Presents `steps` fresh examples, drawing the class of example `mu`
    /// with prior `p_+(mu / N)`. `buf` must have length `N`.
    pub fn train<R: Rng + ?Sized>(
        &mut self,
        params: &ModelParams,
        schedule: &PriorSchedule,
        steps: u64,
        rng: &mut R,
        buf: &mut [f64],
    ) {
        let n = self.dim() as f64;
        for _ in 0..steps {
            let p_plus = schedule.p_plus(self.mu as f64 / n);
            let sigma = sample_example_into(params, p_plus, rng, buf);
            self.lvq1_step(buf, sigma);
        }
    }

    pub fn measure(&self, params: &ModelParams) -> OrderParams {
        measure_order_params(self, params)
    }
}

/// Empirical order parameters of a prototype configuration.
pub fn measure_order_params(state: &PrototypeState, params: &ModelParams) -> OrderParams {
    let bp = params.direction(Label::Plus);
    let bm = params.direction(Label::Minus);
    OrderParams {
        r_pp: dot(&state.w_plus, bp),
        r_pm: dot(&state.w_plus, bm),
        r_mp: dot(&state.w_minus, bp),
        r_mm: dot(&state.w_minus, bm),
        q_pp: dot(&state.w_plus, &state.w_plus),
        q_mm: dot(&state.w_minus, &state.w_minus),
        q_pm: dot(&state.w_plus, &state.w_minus),
        alpha: state.mu as f64 / state.dim() as f64,
    }
}
