//! CSV tables and the run manifest.
//!
//! Numbers are written in scientific notation with 10 significant digits and
//! a `.` decimal separator regardless of locale.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::harness::{CurveRow, DeviationReport, LearningCurve, Scenario, ScenarioOutput};

fn num(x: f64) -> String {
    format!("{x:.9e}")
}

/// Header and rows of a learning curve. Curves with a spread get one
/// `<column>_std` column per non-alpha column after the means.
pub fn write_curve<W: Write>(mut w: W, curve: &LearningCurve) -> io::Result<()> {
    let mut header: Vec<String> = CurveRow::COLUMNS.iter().map(|c| c.to_string()).collect();
    if curve.std.is_some() {
        header.extend(CurveRow::COLUMNS[1..].iter().map(|c| format!("{c}_std")));
    }
    writeln!(w, "{}", header.join(","))?;
    for (j, row) in curve.rows.iter().enumerate() {
        let mut fields: Vec<String> = row.values().iter().map(|&x| num(x)).collect();
        if let Some(std) = &curve.std {
            fields.extend(std[j].values()[1..].iter().map(|&x| num(x)));
        }
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn write_comparison<W: Write>(mut w: W, report: &DeviationReport) -> io::Result<()> {
    writeln!(w, "column,max_abs_dev,mean_abs_dev,max_abs_z")?;
    for c in &report.columns {
        let z = c.max_abs_z.map_or_else(|| "nan".to_string(), num);
        writeln!(
            w,
            "{},{},{},{}",
            c.column,
            num(c.max_abs),
            num(c.mean_abs),
            z
        )?;
    }
    Ok(())
}

/// Files produced by [`write_outputs`].
#[derive(Debug, Clone, Default)]
pub struct WrittenFiles {
    pub ode: Option<PathBuf>,
    pub mc: Option<PathBuf>,
    pub compare: Option<PathBuf>,
    pub manifest: PathBuf,
}

/// Writes `ode.csv`, `mc.csv`, `compare.csv` (when both curves exist) and
/// `run.json` into `dir`, creating it if needed.
pub fn write_outputs(
    dir: &Path,
    scenario: &Scenario,
    out: &ScenarioOutput,
) -> Result<WrittenFiles> {
    fs::create_dir_all(dir)?;
    let mut files = WrittenFiles {
        manifest: dir.join("run.json"),
        ..Default::default()
    };
    let write_to = |name: &str, f: &dyn Fn(&mut Vec<u8>) -> io::Result<()>| -> Result<PathBuf> {
        let path = dir.join(name);
        let mut buf = Vec::new();
        f(&mut buf)?;
        fs::write(&path, buf)?;
        Ok(path)
    };
    if let Some(ode) = &out.ode {
        files.ode = Some(write_to("ode.csv", &|b| write_curve(b, ode))?);
    }
    if let Some(mc) = &out.mc {
        files.mc = Some(write_to("mc.csv", &|b| write_curve(b, mc))?);
    }
    if let (Some(ode), Some(mc)) = (&out.ode, &out.mc) {
        let report = crate::harness::compare_curves(ode, mc)?;
        files.compare = Some(write_to("compare.csv", &|b| write_comparison(b, &report))?);
    }
    let mut manifest = serde_json::to_string_pretty(scenario)?;
    manifest.push('\n');
    fs::write(&files.manifest, manifest)?;
    Ok(files)
}
