use serde::{Deserialize, Serialize};

use crate::label::Label;

/// Macroscopic state of the two-prototype system: projections
/// `R_{S sigma} = w_S . B_sigma`, overlaps `Q_{ST} = w_S . w_T`, and the
/// learning time `alpha = mu / N`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OrderParams {
    pub r_pp: f64,
    pub r_pm: f64,
    pub r_mp: f64,
    pub r_mm: f64,
    pub q_pp: f64,
    pub q_mm: f64,
    pub q_pm: f64,
    pub alpha: f64,
}

/// Number of dynamical order parameters (alpha excluded).
pub const ORDER_DIM: usize = 7;

impl OrderParams {
    /// Uncorrelated start: both prototypes of squared norm `q_hat`, no
    /// overlap with each other or with the cluster directions.
    pub fn initial(q_hat: f64) -> Self {
        Self {
            q_pp: q_hat,
            q_mm: q_hat,
            ..Self::default()
        }
    }

    #[inline]
    pub fn r(&self, s: Label, sigma: Label) -> f64 {
        match (s, sigma) {
            (Label::Plus, Label::Plus) => self.r_pp,
            (Label::Plus, Label::Minus) => self.r_pm,
            (Label::Minus, Label::Plus) => self.r_mp,
            (Label::Minus, Label::Minus) => self.r_mm,
        }
    }

    #[inline]
    pub fn q(&self, s: Label, t: Label) -> f64 {
        match (s, t) {
            (Label::Plus, Label::Plus) => self.q_pp,
            (Label::Minus, Label::Minus) => self.q_mm,
            _ => self.q_pm,
        }
    }

    /// Squared distance between the prototypes, `Q++ - 2Q+- + Q--`.
    #[inline]
    pub fn separation(&self) -> f64 {
        self.q_pp - 2.0 * self.q_pm + self.q_mm
    }

    /// `[r_pp, r_pm, r_mp, r_mm, q_pp, q_mm, q_pm]`
    pub fn to_array(&self) -> [f64; ORDER_DIM] {
        [
            self.r_pp, self.r_pm, self.r_mp, self.r_mm, self.q_pp, self.q_mm, self.q_pm,
        ]
    }

    pub fn from_array(y: &[f64; ORDER_DIM], alpha: f64) -> Self {
        Self {
            r_pp: y[0],
            r_pm: y[1],
            r_mp: y[2],
            r_mm: y[3],
            q_pp: y[4],
            q_mm: y[5],
            q_pm: y[6],
            alpha,
        }
    }

    /// The state seen after exchanging `+` and `-` for prototypes and
    /// clusters alike.
    pub fn mirrored(&self) -> Self {
        Self {
            r_pp: self.r_mm,
            r_pm: self.r_mp,
            r_mp: self.r_pm,
            r_mm: self.r_pp,
            q_pp: self.q_mm,
            q_mm: self.q_pp,
            q_pm: self.q_pm,
            alpha: self.alpha,
        }
    }

    /// Amount by which the prototype Gram matrix fails to be positive
    /// semidefinite; 0 when it is.
    pub fn gram_violation(&self) -> f64 {
        let diag = (-self.q_pp).max(-self.q_mm).max(0.0);
        let det = (self.q_pm * self.q_pm - self.q_pp * self.q_mm).max(0.0);
        diag.max(det)
    }
}
