//! Simulation of LVQ1 prototype training on a stream of clustered
//! high-dimensional data whose class priors drift over time.
//!
//! Two engines describe the same process:
//!
//! * a Monte Carlo engine ([`trainer`]) that trains two prototypes on examples
//!   drawn from a two-cluster Gaussian mixture ([`stream`]) with priors given
//!   by a [`PriorSchedule`];
//! * an exact large-dimension description ([`theory`]) in which the
//!   order parameters `R_{S sigma} = w_S . B_sigma` and `Q_{ST} = w_S . w_T`
//!   follow a system of ODEs in the learning time `alpha = mu / N`.
//!
//! [`harness`] runs both on a [`Scenario`] and [`metrics`] turns order
//! parameters into class-wise, reference and tracking errors.

pub mod config;
pub mod error;
pub mod harness;
mod label;
pub mod metrics;
mod order;
pub mod output;
pub mod rng;
pub mod schedule;
pub mod stream;
pub mod theory;
pub mod trainer;

pub use config::{parse_config, to_config_string};
pub use error::{Error, Result};
pub use harness::{
    compare_curves, run_scenario, Basis, CurveRow, CurveSource, DeviationReport, Engine, ErrorMode,
    LearningCurve, Scenario, ScenarioOutput,
};
pub use label::Label;
pub use metrics::{class_error_analytic, class_error_empirical, report, ErrorReport};
pub use order::{OrderParams, ORDER_DIM};
pub use schedule::{PriorSchedule, ScheduleKind};
pub use stream::{LabelledExample, ModelParams};
pub use trainer::{init_prototypes, measure_order_params, PrototypeState};
