//! Time-dependent class priors `p_+(alpha)`; `p_-(alpha) = 1 - p_+(alpha)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The shape of a prior schedule. Construct through [`PriorSchedule`] so the
/// parameters are validated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScheduleKind {
    Constant {
        p_plus: f64,
    },
    /// 1/2 before `alpha_o`, then a linear ramp reaching `p_max` at
    /// `alpha_end`; held at `p_max` afterwards.
    Linear {
        alpha_o: f64,
        alpha_end: f64,
        p_max: f64,
    },
    /// `p_max` for `alpha < alpha_o`, `1 - p_max` from `alpha_o` on.
    Sudden {
        alpha_o: f64,
        p_max: f64,
    },
    /// `1/2 + (p_max - 1/2) cos(2 pi alpha / period)`.
    Periodic {
        period: f64,
        p_max: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleKind", into = "ScheduleKind")]
pub struct PriorSchedule(ScheduleKind);

fn open_unit(key: &str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(key, format!("{p} is not in (0, 1)")))
    }
}

fn non_negative(key: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(key, format!("{x} must be finite and >= 0")))
    }
}

impl PriorSchedule {
    pub fn constant(p_plus: f64) -> Result<Self> {
        open_unit("schedule.p_plus", p_plus)?;
        Ok(Self(ScheduleKind::Constant { p_plus }))
    }

    pub fn unbiased() -> Self {
        Self(ScheduleKind::Constant { p_plus: 0.5 })
    }

    pub fn linear(alpha_o: f64, alpha_end: f64, p_max: f64) -> Result<Self> {
        non_negative("schedule.alpha_o", alpha_o)?;
        if alpha_end <= alpha_o || !alpha_end.is_finite() {
            return Err(Error::invalid(
                "schedule.alpha_end",
                format!("{alpha_end} must be finite and exceed alpha_o = {alpha_o}"),
            ));
        }
        if !(p_max > 0.5 && p_max < 1.0) {
            return Err(Error::invalid(
                "schedule.p_max",
                format!("{p_max} is not in (1/2, 1)"),
            ));
        }
        Ok(Self(ScheduleKind::Linear {
            alpha_o,
            alpha_end,
            p_max,
        }))
    }

    pub fn sudden(alpha_o: f64, p_max: f64) -> Result<Self> {
        non_negative("schedule.alpha_o", alpha_o)?;
        open_unit("schedule.p_max", p_max)?;
        Ok(Self(ScheduleKind::Sudden { alpha_o, p_max }))
    }

    pub fn periodic(period: f64, p_max: f64) -> Result<Self> {
        if period <= 0.0 || !period.is_finite() {
            return Err(Error::invalid(
                "schedule.period",
                format!("{period} must be finite and > 0"),
            ));
        }
        open_unit("schedule.p_max", p_max)?;
        Ok(Self(ScheduleKind::Periodic { period, p_max }))
    }

    pub fn kind(&self) -> &ScheduleKind {
        &self.0
    }

    /// `p_+(alpha)`.
    pub fn p_plus(&self, alpha: f64) -> f64 {
        match self.0 {
            ScheduleKind::Constant { p_plus } => p_plus,
            ScheduleKind::Linear {
                alpha_o,
                alpha_end,
                p_max,
            } => {
                if alpha < alpha_o {
                    0.5
                } else if alpha >= alpha_end {
                    p_max
                } else {
                    0.5 + (p_max - 0.5) * (alpha - alpha_o) / (alpha_end - alpha_o)
                }
            }
            ScheduleKind::Sudden { alpha_o, p_max } => {
                if alpha < alpha_o {
                    p_max
                } else {
                    1.0 - p_max
                }
            }
            ScheduleKind::Periodic { period, p_max } => {
                0.5 + (p_max - 0.5) * (2.0 * PI * alpha / period).cos()
            }
        }
    }

    pub fn p_minus(&self, alpha: f64) -> f64 {
        1.0 - self.p_plus(alpha)
    }

    /// Limit of `p_+` as the argument approaches `alpha` from below. Differs
    /// from [`p_plus`](Self::p_plus) only at the switch of a sudden schedule.
    pub fn p_plus_left(&self, alpha: f64) -> f64 {
        match self.0 {
            ScheduleKind::Sudden { alpha_o, p_max } if alpha <= alpha_o => p_max,
            _ => self.p_plus(alpha),
        }
    }

    /// Points where `p_+` is discontinuous or has a kink. An ODE integrator
    /// should place grid points here.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.0 {
            ScheduleKind::Constant { .. } | ScheduleKind::Periodic { .. } => Vec::new(),
            ScheduleKind::Linear {
                alpha_o, alpha_end, ..
            } => vec![alpha_o, alpha_end],
            ScheduleKind::Sudden { alpha_o, .. } => vec![alpha_o],
        }
    }
}

impl Default for PriorSchedule {
    fn default() -> Self {
        Self::unbiased()
    }
}

impl TryFrom<ScheduleKind> for PriorSchedule {
    type Error = Error;

    fn try_from(kind: ScheduleKind) -> Result<Self> {
        match kind {
            ScheduleKind::Constant { p_plus } => Self::constant(p_plus),
            ScheduleKind::Linear {
                alpha_o,
                alpha_end,
                p_max,
            } => Self::linear(alpha_o, alpha_end, p_max),
            ScheduleKind::Sudden { alpha_o, p_max } => Self::sudden(alpha_o, p_max),
            ScheduleKind::Periodic { period, p_max } => Self::periodic(period, p_max),
        }
    }
}

impl From<PriorSchedule> for ScheduleKind {
    fn from(s: PriorSchedule) -> Self {
        s.0
    }
}
