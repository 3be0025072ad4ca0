//! Eccentricity scans and their CSV, JSON and SVG renderings.

use std::fmt::Write as _;

use ellipsoid_core::equilibria::{maclaurin_omega2_over_pi_rho_g, transversal_omega2_over_pi_rho_g};
use ellipsoid_core::kinematics::MAX_ECCENTRICITY;
use ellipsoid_core::stability::{det_u_closed, phi_closed, s1_closed, s2_closed, stability_report, tr_u_closed};
use ellipsoid_core::{Error, Family, PhysicalParams, Result};
use rayon::prelude::*;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub family: Family,
    pub e_min: f64,
    pub e_max: f64,
    pub steps: usize,
    pub format: OutputFormat,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.family == Family::Spherical {
            return Err(Error::Domain("the spherical family has no eccentricity to scan"));
        }
        if !(0.0 < self.e_min && self.e_min < self.e_max && self.e_max <= MAX_ECCENTRICITY) {
            return Err(Error::Domain("scan range must satisfy 0 < e_min < e_max ≤ 0.999"));
        }
        if self.steps < 2 {
            return Err(Error::Domain("a scan needs at least 2 steps"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = (self.e_max - self.e_min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.e_max } else { self.e_min + i as f64 * h }).collect()
    }
}

/// One scan row: the eccentricity, the dimensionless series and the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub e: f64,
    pub values: Vec<f64>,
    pub verdict: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub family: Family,
    /// Names of the series in `Row::values`.
    pub columns: &'static [&'static str],
    pub rows: Vec<Row>,
}

const MACLAURIN_COLUMNS: &[&str] = &["Omega2_over_piRhoG", "S1_over_R", "S2_over_R"];
const TRANSVERSAL_COLUMNS: &[&str] = &["omega2_over_piRhoG", "phi_over_R", "trU_over_R", "detU_e10_over_R2"];

fn row(family: Family, e: f64, params: &PhysicalParams) -> Result<Row> {
    let values = match family {
        Family::MacLaurin => vec![maclaurin_omega2_over_pi_rho_g(e)?, s1_closed(e)?, s2_closed(e)?],
        _ => vec![
            transversal_omega2_over_pi_rho_g(e, family.branch_sign())?,
            phi_closed(e)?,
            tr_u_closed(e)?,
            det_u_closed(e)? * e.powi(10),
        ],
    };
    let verdict = stability_report(family, e, params)?.verdict.name();
    Ok(Row { e, values, verdict })
}

/// Evaluates the grid in parallel; rows come back ordered by `e`.
pub fn run(cfg: &ScanConfig, params: &PhysicalParams) -> Result<Scan> {
    cfg.validate()?;
    let rows = cfg.grid().par_iter().map(|&e| row(cfg.family, e, params)).collect::<Result<Vec<_>>>()?;
    let columns = if cfg.family == Family::MacLaurin { MACLAURIN_COLUMNS } else { TRANSVERSAL_COLUMNS };
    Ok(Scan { family: cfg.family, columns, rows })
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(scan: &Scan) -> String {
    let mut out = String::from("e");
    for c in scan.columns {
        out.push(',');
        out.push_str(c);
    }
    out.push_str(",verdict\n");
    for r in &scan.rows {
        out.push_str(&num(r.e));
        for v in &r.values {
            out.push(',');
            out.push_str(&num(*v));
        }
        let _ = writeln!(out, ",{}", r.verdict);
    }
    out
}

pub fn to_json(scan: &Scan) -> String {
    let rows: Vec<Value> = scan
        .rows
        .iter()
        .map(|r| {
            let mut m = Map::new();
            m.insert("e".into(), r.e.into());
            for (c, v) in scan.columns.iter().zip(&r.values) {
                m.insert((*c).into(), (*v).into());
            }
            m.insert("verdict".into(), r.verdict.into());
            Value::Object(m)
        })
        .collect();
    let doc = serde_json::json!({ "family": scan.family.name(), "rows": rows });
    serde_json::to_string_pretty(&doc).expect("scan JSON contains only finite numbers") + "\n"
}

/// One panel per series, stacked vertically, each with axes, a polyline and labels.
pub fn to_svg(scan: &Scan) -> String {
    const W: f64 = 640.0;
    const H: f64 = 240.0;
    const PAD: f64 = 50.0;
    let n = scan.columns.len();
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{}" font-family="sans-serif" font-size="12">"#,
        H * n as f64
    );
    let es: Vec<f64> = scan.rows.iter().map(|r| r.e).collect();
    let (e0, e1) = (es[0], es[es.len() - 1]);
    for (k, name) in scan.columns.iter().enumerate() {
        let ys: Vec<f64> = scan.rows.iter().map(|r| r.values[k]).collect();
        let lo = ys.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        let top = H * k as f64;
        let (x0, x1, y0, y1) = (PAD, W - PAD / 2.0, top + H - PAD / 2.0, top + PAD / 2.0);
        let px = |e: f64| x0 + (e - e0) / (e1 - e0) * (x1 - x0);
        let py = |y: f64| y0 - (y - lo) / span * (y0 - y1);
        let _ = writeln!(out, r#"  <g>"#);
        let _ = writeln!(out, r#"    <line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
        let _ = writeln!(out, r#"    <line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
        if lo < 0.0 && hi > 0.0 {
            let z = py(0.0);
            let _ = writeln!(
                out,
                r#"    <line x1="{x0}" y1="{z:.2}" x2="{x1}" y2="{z:.2}" stroke="gray" stroke-dasharray="4 3"/>"#
            );
        }
        let pts: Vec<String> = es.iter().zip(&ys).map(|(&e, &y)| format!("{:.2},{:.2}", px(e), py(y))).collect();
        let _ = writeln!(
            out,
            r#"    <polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let _ =
            writeln!(out, r#"    <text x="{}" y="{}" text-anchor="middle">{name}</text>"#, (x0 + x1) / 2.0, y1 - 6.0);
        let _ = writeln!(out, r#"    <text x="{x0}" y="{}" text-anchor="middle">{e0:.3}</text>"#, y0 + 16.0);
        let _ = writeln!(out, r#"    <text x="{x1}" y="{}" text-anchor="middle">{e1:.3}</text>"#, y0 + 16.0);
        let _ = writeln!(out, r#"    <text x="{}" y="{}" text-anchor="middle">e</text>"#, (x0 + x1) / 2.0, y0 + 16.0);
        let _ = writeln!(out, r#"    <text x="{}" y="{y0}" text-anchor="end">{lo:.3e}</text>"#, x0 - 4.0);
        let _ = writeln!(out, r#"    <text x="{}" y="{}" text-anchor="end">{hi:.3e}</text>"#, x0 - 4.0, y1 + 10.0);
        let _ = writeln!(out, r#"  </g>"#);
    }
    out.push_str("</svg>\n");
    out
}

pub fn render(scan: &Scan, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => to_csv(scan),
        OutputFormat::Json => to_json(scan),
        OutputFormat::Svg => to_svg(scan),
    }
}
