//! Labelled example streams drawn from a mixture of two isotropic Gaussian
//! clusters centred at `lambda * B_sigma` with per-component variance `v_sigma`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;

const ORTHONORMAL_TOL: f64 = 1e-12;

/// Geometry and noise of the two-cluster input density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    lambda: f64,
    v_plus: f64,
    v_minus: f64,
    b_plus: Vec<f64>,
    b_minus: Vec<f64>,
}

impl ModelParams {
    /// Clusters along the first two standard basis vectors of `R^dim`.
    pub fn new(lambda: f64, v_plus: f64, v_minus: f64, dim: usize) -> Result<Self> {
        let (b_plus, b_minus) = make_orthonormal_pair(dim)?;
        Self::with_basis(lambda, v_plus, v_minus, b_plus, b_minus)
    }

    pub fn with_basis(
        lambda: f64,
        v_plus: f64,
        v_minus: f64,
        b_plus: Vec<f64>,
        b_minus: Vec<f64>,
    ) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(
                "model.lambda",
                format!("{lambda} must be finite and >= 0"),
            ));
        }
        for (key, v) in [("model.v_plus", v_plus), ("model.v_minus", v_minus)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(key, format!("{v} must be finite and > 0")));
            }
        }
        if b_plus.len() != b_minus.len() {
            return Err(Error::DimensionMismatch {
                expected: b_plus.len(),
                actual: b_minus.len(),
            });
        }
        if b_plus.len() < 2 {
            return Err(Error::invalid(
                "dim",
                format!("{} must be >= 2", b_plus.len()),
            ));
        }
        let np = dot(&b_plus, &b_plus);
        let nm = dot(&b_minus, &b_minus);
        let pm = dot(&b_plus, &b_minus);
        if (np - 1.0).abs() > ORTHONORMAL_TOL
            || (nm - 1.0).abs() > ORTHONORMAL_TOL
            || pm.abs() > ORTHONORMAL_TOL
        {
            return Err(Error::invalid(
                "basis",
                format!("cluster directions not orthonormal: |B+|^2={np}, |B-|^2={nm}, B+.B-={pm}"),
            ));
        }
        Ok(Self {
            lambda,
            v_plus,
            v_minus,
            b_plus,
            b_minus,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.b_plus.len()
    }

    pub fn variance(&self, sigma: Label) -> f64 {
        match sigma {
            Label::Plus => self.v_plus,
            Label::Minus => self.v_minus,
        }
    }

    pub fn direction(&self, sigma: Label) -> &[f64] {
        match sigma {
            Label::Plus => &self.b_plus,
            Label::Minus => &self.b_minus,
        }
    }

    /// Same density with the cluster roles exchanged.
    pub fn mirrored(&self) -> Self {
        Self {
            lambda: self.lambda,
            v_plus: self.v_minus,
            v_minus: self.v_plus,
            b_plus: self.b_minus.clone(),
            b_minus: self.b_plus.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelledExample {
    pub xi: Vec<f64>,
    pub sigma: Label,
}

/// First two standard basis vectors of `R^dim`.
pub fn make_orthonormal_pair(dim: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if dim < 2 {
        return Err(Error::invalid("dim", format!("{dim} must be >= 2")));
    }
    let mut e1 = vec![0.0; dim];
    let mut e2 = vec![0.0; dim];
    e1[0] = 1.0;
    e2[1] = 1.0;
    Ok((e1, e2))
}

/// Uniformly random orthonormal pair (Gaussian vectors, Gram-Schmidt).
pub fn random_orthonormal_pair<R: Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if dim < 2 {
        return Err(Error::invalid("dim", format!("{dim} must be >= 2")));
    }
    let mut u = gaussian_vector(dim, rng);
    normalize(&mut u);
    let mut v = gaussian_vector(dim, rng);
    // Two passes of Gram-Schmidt keep the residual overlap at rounding level.
    for _ in 0..2 {
        let c = dot(&u, &v);
        v.iter_mut().zip(&u).for_each(|(vi, ui)| *vi -= c * ui);
    }
    normalize(&mut v);
    Ok((u, v))
}

/// Draws one labelled example: `sigma = +1` with probability `p_plus`.
pub fn sample_example<R: Rng + ?Sized>(
    params: &ModelParams,
    p_plus: f64,
    rng: &mut R,
) -> LabelledExample {
    let mut xi = vec![0.0; params.dim()];
    let sigma = sample_example_into(params, p_plus, rng, &mut xi);
    LabelledExample { xi, sigma }
}

/// Allocation-free variant of [`sample_example`]; writes the input into `xi`.
pub fn sample_example_into<R: Rng + ?Sized>(
    params: &ModelParams,
    p_plus: f64,
    rng: &mut R,
    xi: &mut [f64],
) -> Label {
    debug_assert!(p_plus > 0.0 && p_plus < 1.0);
    let sigma = if rng.random::<f64>() < p_plus {
        Label::Plus
    } else {
        Label::Minus
    };
    sample_cluster_into(params, sigma, rng, xi);
    sigma
}

/// Draws an input from cluster `sigma` into `xi`.
pub fn sample_cluster_into<R: Rng + ?Sized>(
    params: &ModelParams,
    sigma: Label,
    rng: &mut R,
    xi: &mut [f64],
) {
    let sd = params.variance(sigma).sqrt();
    let center = params.direction(sigma);
    let lambda = params.lambda;
    for (x, b) in xi.iter_mut().zip(center) {
        let z: f64 = rng.sample(StandardNormal);
        *x = sd * z + lambda * b;
    }
}

pub(crate) fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}
