//! Fixed-schema delimited tables. Floats use the shortest representation
//! that round-trips, so tables are byte-identical across reruns.

use crate::error::{Error, Result};
use crate::harness::{DiscriminationReport, ErrorPoint, RateFit};
use crate::langevin::Trajectory;
use crate::spectrum::ConditionReport;

pub const ERRORS_HEADER: &[&str] = &["epsilon", "estimate", "se", "m_paths"];
pub const FITS_HEADER: &[&str] = &["gamma", "p", "slope", "r2", "theory"];
pub const CONDITIONS_HEADER: &[&str] = &["name", "series", "exponent", "verdict"];
pub const DISCRIMINATION_HEADER: &[&str] = &["candidate", "estimate", "se", "m_paths", "margin", "margin_se"];
pub const MU_HEADER: &[&str] = &["mu", "mean", "se", "paths"];

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Configuration(format!("table: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Configuration(format!("table: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Configuration(format!("table: {e}")))
    }
}

pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn errors_table(points: &[ErrorPoint]) -> Table {
    let mut t = Table::new(ERRORS_HEADER);
    for p in points {
        t.push(vec![num(p.epsilon), num(p.estimate), num(p.se), p.paths.to_string()]);
    }
    t
}

pub fn fits_table(fits: &[RateFit]) -> Table {
    let mut t = Table::new(FITS_HEADER);
    for f in fits {
        t.push(vec![num(f.gamma), f.p.to_string(), num(f.slope), num(f.r2), num(f.theory)]);
    }
    t
}

pub fn conditions_table(report: &ConditionReport) -> Table {
    let mut t = Table::new(CONDITIONS_HEADER);
    for e in &report.entries {
        let exponent = e.exponent.map(num).unwrap_or_default();
        t.push(vec![e.name.clone(), e.series.clone(), exponent, e.verdict.as_str().to_string()]);
    }
    t
}

pub fn discrimination_table(report: &DiscriminationReport) -> Table {
    let mut t = Table::new(DISCRIMINATION_HEADER);
    for c in &report.candidates {
        let margin = report.margins.iter().find(|m| m.against == c.label);
        let (m, se) = margin.map(|m| (num(m.difference), num(m.se))).unwrap_or_default();
        t.push(vec![c.label.clone(), num(c.point.estimate), num(c.point.se), c.point.paths.to_string(), m, se]);
    }
    t
}

/// `mu, mean, se, paths` rows.
pub fn mu_table(rows: &[(f64, f64, f64, usize)]) -> Table {
    let mut t = Table::new(MU_HEADER);
    for (mu, mean, se, n) in rows {
        t.push(vec![num(*mu), num(*mean), num(*se), n.to_string()]);
    }
    t
}

/// `t, x_1..x_d, X_1..X_d` for a full path and its coupled limit.
pub fn trajectory_table(full: &Trajectory, limit: &Trajectory) -> Result<Table> {
    if full.len() != limit.len() || full.dim != limit.dim {
        return Err(Error::GridMismatch("trajectories on different grids".into()));
    }
    let mut header = vec!["t".to_string()];
    header.extend((1..=full.dim).map(|i| format!("x_{i}")));
    header.extend((1..=full.dim).map(|i| format!("limit_{i}")));
    let mut t = Table { header, rows: Vec::new() };
    for n in 0..full.len() {
        let mut row = vec![num(full.times[n])];
        row.extend(full.position(n).iter().map(|v| num(*v)));
        row.extend(limit.position(n).iter().map(|v| num(*v)));
        t.rows.push(row);
    }
    Ok(t)
}
