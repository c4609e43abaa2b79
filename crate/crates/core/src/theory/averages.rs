use statrs::function::erf::erfc;

use crate::label::Label;
use crate::order::OrderParams;
use crate::stream::ModelParams;

/// Index of a projection in the vector `(h_+, h_-, b_+, b_-)`, where
/// `h_S = w_S . xi` and `b_tau = B_tau . xi`.
#[inline]
fn h_idx(s: Label) -> usize {
    s.index()
}

#[inline]
fn b_idx(tau: Label) -> usize {
    2 + tau.index()
}

/// Standard normal CDF.
#[inline]
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
#[inline]
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Mean and covariance of `(h_+, h_-, b_+, b_-)` for an input drawn from one
/// cluster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMoments {
    pub mean: [f64; 4],
    pub cov: [[f64; 4]; 4],
}

/// Moments of the projections under cluster `sigma`:
/// `<h_S> = lambda R_{S sigma}`, `<b_tau> = lambda delta_{sigma tau}`,
/// `Cov(h_S, h_T) = v Q_{ST}`, `Cov(h_S, b_tau) = v R_{S tau}`,
/// `Cov(b_rho, b_tau) = v delta_{rho tau}`.
pub fn gaussian_moments(op: &OrderParams, params: &ModelParams, sigma: Label) -> GaussianMoments {
    let lambda = params.lambda();
    let v = params.variance(sigma);
    let mut mean = [0.0; 4];
    let mut cov = [[0.0; 4]; 4];
    for s in Label::BOTH {
        mean[h_idx(s)] = lambda * op.r(s, sigma);
        for t in Label::BOTH {
            cov[h_idx(s)][h_idx(t)] = v * op.q(s, t);
        }
        for tau in Label::BOTH {
            cov[h_idx(s)][b_idx(tau)] = v * op.r(s, tau);
            cov[b_idx(tau)][h_idx(s)] = v * op.r(s, tau);
        }
    }
    for tau in Label::BOTH {
        mean[b_idx(tau)] = if tau == sigma { lambda } else { 0.0 };
        cov[b_idx(tau)][b_idx(tau)] = v;
    }
    GaussianMoments { mean, cov }
}

/// `coeffs . (h_+, h_-, b_+, b_-) + constant`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearForm {
    pub coeffs: [f64; 4],
    pub constant: f64,
}

impl LinearForm {
    pub fn eval(&self, h: [f64; 2], b: [f64; 2]) -> f64 {
        self.coeffs[0] * h[0]
            + self.coeffs[1] * h[1]
            + self.coeffs[2] * b[0]
            + self.coeffs[3] * b[1]
            + self.constant
    }

    fn mean(&self, m: &GaussianMoments) -> f64 {
        self.coeffs
            .iter()
            .zip(&m.mean)
            .map(|(a, x)| a * x)
            .sum::<f64>()
            + self.constant
    }

    /// `Cov(x_i, z)` for every projection `x_i`.
    fn cross_cov(&self, m: &GaussianMoments) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, row) in m.cov.iter().enumerate() {
            out[i] = row.iter().zip(&self.coeffs).map(|(c, a)| c * a).sum();
        }
        out
    }
}

/// Argument of the Heaviside factor selecting prototype `S` as winner,
/// `d_{-S} - d_S`, in terms of projections. The `|xi|^2` terms cancel:
/// for `S = +` it is `2(h_+ - h_-) + Q_{--} - Q_{++}`, for `S = -` the
/// negation.
pub fn modulation_argument(op: &OrderParams, s: Label) -> LinearForm {
    let sg = s.sign();
    LinearForm {
        coeffs: [2.0 * sg, -2.0 * sg, 0.0, 0.0],
        constant: sg * (op.q_mm - op.q_pp),
    }
}

/// Averages under one cluster `sigma`, stored without the `S sigma` sign.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClusterAverages {
    /// `theta[S] = <Theta_S>`, the probability that `S` wins.
    pub theta: [f64; 2],
    /// `b_theta[S][tau] = <b_tau Theta_S>`.
    pub b_theta: [[f64; 2]; 2],
    /// `h_theta[S][T] = <h_T Theta_S>`.
    pub h_theta: [[f64; 2]; 2],
}

/// All conditional averages entering the ODE right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AverageTerms {
    pub clusters: [ClusterAverages; 2],
    /// Set when the prototypes coincide so the winner is decided by the
    /// tie-break rather than by a Gaussian probability.
    pub degenerate: bool,
}

impl AverageTerms {
    #[inline]
    fn sign(s: Label, sigma: Label) -> f64 {
        s.sign() * sigma.sign()
    }

    /// `<f_S>_sigma`
    pub fn f(&self, s: Label, sigma: Label) -> f64 {
        Self::sign(s, sigma) * self.clusters[sigma.index()].theta[s.index()]
    }

    /// `<b_tau f_S>_sigma`
    pub fn b_f(&self, tau: Label, s: Label, sigma: Label) -> f64 {
        Self::sign(s, sigma) * self.clusters[sigma.index()].b_theta[s.index()][tau.index()]
    }

    /// `<h_T f_S>_sigma`
    pub fn h_f(&self, t: Label, s: Label, sigma: Label) -> f64 {
        Self::sign(s, sigma) * self.clusters[sigma.index()].h_theta[s.index()][t.index()]
    }

    /// `<f_S f_T>_sigma`. The winner windows are disjoint, so this vanishes
    /// for `S != T` and equals `<Theta_S>_sigma` otherwise.
    pub fn ff(&self, s: Label, t: Label, sigma: Label) -> f64 {
        if s == t {
            self.clusters[sigma.index()].theta[s.index()]
        } else {
            0.0
        }
    }
}

/// Closed-form conditional averages of `Theta_S`, `b_tau Theta_S` and
/// `h_T Theta_S` for both clusters.
///
/// For jointly Gaussian `(x, z)` with `z ~ N(m, s^2)`:
/// `E[Theta(z)] = Phi(m/s)` and
/// `E[x Theta(z)] = E[x] Phi(m/s) + Cov(x, z) phi(m/s) / s`.
///
/// If the prototypes coincide (`s = 0`) the argument is deterministic; a zero
/// argument is resolved in favour of `S = +`, matching the trainer.
pub fn average_terms(op: &OrderParams, params: &ModelParams) -> AverageTerms {
    let mut out = AverageTerms::default();
    let separation = op.separation();
    for sigma in Label::BOTH {
        let moments = gaussian_moments(op, params, sigma);
        let c = &mut out.clusters[sigma.index()];
        for s in Label::BOTH {
            let z = modulation_argument(op, s);
            let m = z.mean(&moments);
            let cross = z.cross_cov(&moments);
            let var = 4.0 * params.variance(sigma) * separation;
            let (theta, weight) = if var > 0.0 {
                let sd = var.sqrt();
                (normal_cdf(m / sd), normal_pdf(m / sd) / sd)
            } else {
                out.degenerate = true;
                let wins = m > 0.0 || (m == 0.0 && s == Label::Plus);
                (if wins { 1.0 } else { 0.0 }, 0.0)
            };
            c.theta[s.index()] = theta;
            for tau in Label::BOTH {
                let i = b_idx(tau);
                c.b_theta[s.index()][tau.index()] = moments.mean[i] * theta + cross[i] * weight;
            }
            for t in Label::BOTH {
                let i = h_idx(t);
                c.h_theta[s.index()][t.index()] = moments.mean[i] * theta + cross[i] * weight;
            }
        }
        debug_assert!(
            (c.theta[0] + c.theta[1] - 1.0).abs() < 1e-12,
            "winner windows must partition input space"
        );
    }
    out
}
