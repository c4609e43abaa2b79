//! Scenario documents in TOML.
//!
//! ```toml
//! dim = 100
//! eta = 1.0
//! gamma = 0.0
//! alpha_max = 200.0
//! engine = "both"          # ode | mc | both
//! mc_runs = 50
//! seed = 0
//! q_hat = 1e-4
//! output_stride = 0.5
//! d_alpha = 0.01           # RK4 step
//! basis = "standard"       # standard | random
//! error_mode = "analytic"  # analytic | empirical
//! n_test = 100000          # test inputs per class in empirical mode
//!
//! [model]
//! lambda = 1.0
//! v_plus = 0.4
//! v_minus = 0.4
//!
//! [schedule]
//! kind = "linear"          # constant | linear | sudden | periodic
//! alpha_o = 20.0
//! alpha_end = 200.0
//! p_max = 0.8
//! ```
//!
//! Every key is optional; missing keys take the values of
//! [`Scenario::default`] and a missing schedule means constant priors 1/2.
//! Unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::harness::{Basis, Engine, ErrorMode, Scenario};
use crate::schedule::{PriorSchedule, ScheduleKind};

const TOP_KEYS: &[&str] = &[
    "dim",
    "eta",
    "gamma",
    "alpha_max",
    "engine",
    "mc_runs",
    "seed",
    "q_hat",
    "output_stride",
    "d_alpha",
    "basis",
    "error_mode",
    "n_test",
    "model.lambda",
    "model.v_plus",
    "model.v_minus",
];

const SCHEDULE_KEYS: &[&str] = &[
    "schedule.kind",
    "schedule.p_plus",
    "schedule.alpha_o",
    "schedule.alpha_end",
    "schedule.p_max",
    "schedule.period",
];

fn flatten(prefix: &str, table: Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other);
            }
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

struct Keys(BTreeMap<String, Value>);

impl Keys {
    fn float(&mut self, key: &str) -> Result<Option<f64>> {
        match self.0.remove(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(x)),
            Some(Value::Integer(i)) => Ok(Some(i as f64)),
            Some(other) => Err(Error::invalid(
                key,
                format!("expected a number, found {}", other.type_str()),
            )),
        }
    }

    fn count(&mut self, key: &str) -> Result<Option<u64>> {
        match self.0.remove(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if i >= 0 => Ok(Some(i as u64)),
            Some(Value::String(s)) => s
                .parse::<u64>()
                .map(Some)
                .map_err(|_| Error::invalid(key, format!("`{s}` is not a non-negative integer"))),
            Some(other) => Err(Error::invalid(
                key,
                format!("expected a non-negative integer, found {other}"),
            )),
        }
    }

    fn string(&mut self, key: &str) -> Result<Option<String>> {
        match self.0.remove(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(other) => Err(Error::invalid(
                key,
                format!("expected a string, found {}", other.type_str()),
            )),
        }
    }

    fn require(&mut self, key: &str) -> Result<f64> {
        self.float(key)?
            .ok_or_else(|| Error::invalid(key, "required by this schedule kind"))
    }
}

fn choice<T: Copy>(key: &str, value: &str, options: &[(&str, T)]) -> Result<T> {
    options
        .iter()
        .find(|(name, _)| *name == value)
        .map(|(_, v)| *v)
        .ok_or_else(|| {
            let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
            Error::invalid(key, format!("`{value}` is not one of {}", names.join(", ")))
        })
}

/// Parses and validates a scenario document.
pub fn parse_config(text: &str) -> Result<Scenario> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        Error::ConfigParse {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    let mut flat = BTreeMap::new();
    flatten("", table, &mut flat);
    if let Some(unknown) = flat
        .keys()
        .find(|k| !TOP_KEYS.contains(&k.as_str()) && !SCHEDULE_KEYS.contains(&k.as_str()))
    {
        return Err(Error::invalid(unknown.clone(), "unknown key"));
    }
    let mut keys = Keys(flat);
    let mut s = Scenario::default();

    macro_rules! set {
        ($field:expr, $getter:ident, $key:literal) => {
            if let Some(v) = keys.$getter($key)? {
                $field = v;
            }
        };
    }
    set!(s.lambda, float, "model.lambda");
    set!(s.v_plus, float, "model.v_plus");
    set!(s.v_minus, float, "model.v_minus");
    set!(s.eta, float, "eta");
    set!(s.gamma, float, "gamma");
    set!(s.alpha_max, float, "alpha_max");
    set!(s.q_hat, float, "q_hat");
    set!(s.output_stride, float, "output_stride");
    set!(s.d_alpha, float, "d_alpha");
    set!(s.seed, count, "seed");
    if let Some(v) = keys.count("dim")? {
        s.dim = v as usize;
    }
    if let Some(v) = keys.count("mc_runs")? {
        s.mc_runs = v as usize;
    }
    if let Some(v) = keys.count("n_test")? {
        s.n_test = v as usize;
    }
    if let Some(v) = keys.string("engine")? {
        s.engine = choice(
            "engine",
            &v,
            &[
                ("ode", Engine::Ode),
                ("mc", Engine::Mc),
                ("both", Engine::Both),
            ],
        )?;
    }
    if let Some(v) = keys.string("basis")? {
        s.basis = choice(
            "basis",
            &v,
            &[("standard", Basis::Standard), ("random", Basis::Random)],
        )?;
    }
    if let Some(v) = keys.string("error_mode")? {
        s.error_mode = choice(
            "error_mode",
            &v,
            &[
                ("analytic", ErrorMode::Analytic),
                ("empirical", ErrorMode::Empirical),
            ],
        )?;
    }
    s.schedule = parse_schedule(&mut keys)?;
    s.validate()?;
    Ok(s)
}

fn parse_schedule(keys: &mut Keys) -> Result<PriorSchedule> {
    let kind = keys.string("schedule.kind")?;
    let allowed: &[&str] = match kind.as_deref() {
        None => &[],
        Some("constant") => &["schedule.p_plus"],
        Some("linear") => &["schedule.alpha_o", "schedule.alpha_end", "schedule.p_max"],
        Some("sudden") => &["schedule.alpha_o", "schedule.p_max"],
        Some("periodic") => &["schedule.period", "schedule.p_max"],
        Some(other) => {
            return Err(Error::invalid(
                "schedule.kind",
                format!("`{other}` is not one of constant, linear, sudden, periodic"),
            ))
        }
    };
    if let Some(stray) = keys
        .0
        .keys()
        .find(|k| k.starts_with("schedule.") && !allowed.contains(&k.as_str()))
    {
        let reason = match &kind {
            Some(kind) => format!("not used by schedule kind `{kind}`"),
            None => "schedule.kind is missing".to_string(),
        };
        return Err(Error::invalid(stray.clone(), reason));
    }
    match kind.as_deref() {
        None => Ok(PriorSchedule::unbiased()),
        Some("constant") => PriorSchedule::constant(keys.float("schedule.p_plus")?.unwrap_or(0.5)),
        Some("linear") => PriorSchedule::linear(
            keys.require("schedule.alpha_o")?,
            keys.require("schedule.alpha_end")?,
            keys.require("schedule.p_max")?,
        ),
        Some("sudden") => PriorSchedule::sudden(
            keys.require("schedule.alpha_o")?,
            keys.require("schedule.p_max")?,
        ),
        Some("periodic") => PriorSchedule::periodic(
            keys.require("schedule.period")?,
            keys.require("schedule.p_max")?,
        ),
        Some(_) => unreachable!("kind checked above"),
    }
}

fn engine_name(e: Engine) -> &'static str {
    match e {
        Engine::Ode => "ode",
        Engine::Mc => "mc",
        Engine::Both => "both",
    }
}

/// Writes a scenario as a document that [`parse_config`] reads back to the
/// same value.
pub fn to_config_string(s: &Scenario) -> String {
    let mut out = String::new();
    let seed = if s.seed <= i64::MAX as u64 {
        s.seed.to_string()
    } else {
        format!("\"{}\"", s.seed)
    };
    let basis = match s.basis {
        Basis::Standard => "standard",
        Basis::Random => "random",
    };
    let mode = match s.error_mode {
        ErrorMode::Analytic => "analytic",
        ErrorMode::Empirical => "empirical",
    };
    // `{:?}` prints the shortest representation that round-trips.
    let _ = writeln!(out, "dim = {}", s.dim);
    let _ = writeln!(out, "eta = {:?}", s.eta);
    let _ = writeln!(out, "gamma = {:?}", s.gamma);
    let _ = writeln!(out, "alpha_max = {:?}", s.alpha_max);
    let _ = writeln!(out, "engine = \"{}\"", engine_name(s.engine));
    let _ = writeln!(out, "mc_runs = {}", s.mc_runs);
    let _ = writeln!(out, "seed = {seed}");
    let _ = writeln!(out, "q_hat = {:?}", s.q_hat);
    let _ = writeln!(out, "output_stride = {:?}", s.output_stride);
    let _ = writeln!(out, "d_alpha = {:?}", s.d_alpha);
    let _ = writeln!(out, "basis = \"{basis}\"");
    let _ = writeln!(out, "error_mode = \"{mode}\"");
    let _ = writeln!(out, "n_test = {}", s.n_test);
    let _ = writeln!(out, "\n[model]");
    let _ = writeln!(out, "lambda = {:?}", s.lambda);
    let _ = writeln!(out, "v_plus = {:?}", s.v_plus);
    let _ = writeln!(out, "v_minus = {:?}", s.v_minus);
    let _ = writeln!(out, "\n[schedule]");
    match *s.schedule.kind() {
        ScheduleKind::Constant { p_plus } => {
            let _ = writeln!(out, "kind = \"constant\"\np_plus = {p_plus:?}");
        }
        ScheduleKind::Linear {
            alpha_o,
            alpha_end,
            p_max,
        } => {
            let _ = writeln!(
                out,
                "kind = \"linear\"\nalpha_o = {alpha_o:?}\nalpha_end = {alpha_end:?}\np_max = {p_max:?}"
            );
        }
        ScheduleKind::Sudden { alpha_o, p_max } => {
            let _ = writeln!(
                out,
                "kind = \"sudden\"\nalpha_o = {alpha_o:?}\np_max = {p_max:?}"
            );
        }
        ScheduleKind::Periodic { period, p_max } => {
            let _ = writeln!(
                out,
                "kind = \"periodic\"\nperiod = {period:?}\np_max = {p_max:?}"
            );
        }
    }
    out
}
