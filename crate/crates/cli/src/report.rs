//! Machine-readable run reports and their CSV forms.

use hypvortex::tolerances::Tolerances;
use hypvortex::{PotentialSpec, QuadConfig};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

pub const SCHEMA: u32 = 1;

/// Max and mean of one residual over the sample grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualStat {
    pub name: String,
    pub max: f64,
    pub mean: f64,
    pub points: usize,
    /// Checked only when present.
    pub tolerance: Option<f64>,
}

impl ResidualStat {
    pub fn from_values(name: &str, vals: &[f64], tolerance: Option<f64>) -> Self {
        let max = vals.iter().copied().fold(0.0f64, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) });
        let mean = if vals.is_empty() { 0.0 } else { vals.iter().sum::<f64>() / vals.len() as f64 };
        ResidualStat {
            name: name.into(),
            max,
            mean,
            points: vals.len(),
            tolerance,
        }
    }

    pub fn pass(&self) -> bool {
        self.tolerance.map_or(true, |t| self.points > 0 && self.max < t)
    }
}

/// One quadrature with its optional target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadEntry {
    pub name: String,
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
}

impl QuadEntry {
    pub fn pass(&self) -> bool {
        self.converged
            && self.value.is_finite()
            && match (self.expected, self.tolerance) {
                (Some(e), Some(t)) => (self.value - e).abs() < t,
                _ => true,
            }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: Vec<String>,
    pub potential: Option<PotentialSpec>,
    pub tolerances: Tolerances,
    pub quadrature_config: Option<QuadConfig>,
    pub residuals: Vec<ResidualStat>,
    pub quadrature: Vec<QuadEntry>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(command: Vec<String>, potential: Option<PotentialSpec>, tolerances: Tolerances) -> Self {
        RunReport {
            schema: SCHEMA,
            command,
            potential,
            tolerances,
            quadrature_config: None,
            residuals: vec![],
            quadrature: vec![],
            notes: vec![],
            pass: false,
        }
    }

    /// Verdict recomputed from the stored numbers.
    pub fn verdict(&self) -> bool {
        self.residuals.iter().all(ResidualStat::pass) && self.quadrature.iter().all(QuadEntry::pass)
    }

    pub fn finish(mut self) -> Self {
        self.pass = self.verdict();
        self
    }

    pub fn converged(&self) -> bool {
        self.quadrature.iter().all(|q| q.converged && q.value.is_finite())
    }

    pub fn print_table(&self, out: &mut impl Write) -> std::io::Result<()> {
        if let Some(p) = &self.potential {
            writeln!(out, "potential  {} {}", p.family, p.params)?;
        }
        for r in &self.residuals {
            let tol = r.tolerance.map_or("-".to_string(), |t| format!("< {t:e}"));
            writeln!(
                out,
                "{:<28} max {:>10.3e}  mean {:>10.3e}  n {:>4}  {:<10} {}",
                r.name,
                r.max,
                r.mean,
                r.points,
                tol,
                if r.tolerance.is_none() { "info" } else if r.pass() { "ok" } else { "FAIL" }
            )?;
        }
        for q in &self.quadrature {
            let target = match (q.expected, q.tolerance) {
                (Some(e), Some(t)) => format!("want {e} ± {t:e}"),
                _ => String::new(),
            };
            writeln!(
                out,
                "{:<28} {:.6} ± {:.1e}  {}{} {}",
                q.name,
                q.value,
                q.error,
                if q.converged { "" } else { "not converged " },
                target,
                if q.pass() { "ok" } else { "FAIL" }
            )?;
        }
        for n in &self.notes {
            writeln!(out, "note: {n}")?;
        }
        writeln!(out, "{}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Row of `chern --csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChernRow {
    pub potential: String,
    pub which: String,
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub expected: Option<f64>,
    pub tolerance: f64,
}

impl ChernRow {
    pub fn pass(&self) -> bool {
        QuadEntry {
            name: String::new(),
            value: self.value,
            error: self.error,
            converged: self.converged,
            expected: self.expected,
            tolerance: Some(self.tolerance),
        }
        .pass()
    }
}

/// Row of `sweep`: one per `(c, r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub c: f64,
    pub r: f64,
    pub loop_integral: f64,
    pub re_hol: f64,
    pub im_hol: f64,
    pub alpha: f64,
    pub c1: f64,
    pub c1_expected: f64,
    pub c1_error: f64,
    pub converged: bool,
    pub tolerance: f64,
}

impl SweepRow {
    pub fn pass(&self) -> bool {
        self.converged && (self.c1 - self.c1_expected).abs() < self.tolerance
    }
}

pub fn write_csv<T: Serialize>(w: impl Write, rows: &[T]) -> anyhow::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

fn read_csv<T: for<'de> Deserialize<'de>>(text: &str) -> anyhow::Result<Vec<T>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    Ok(rd.deserialize().collect::<Result<Vec<T>, _>>()?)
}

/// A re-ingested output file.
#[derive(Debug)]
pub enum Ingested {
    Report(RunReport),
    Chern(Vec<ChernRow>),
    Sweep(Vec<SweepRow>),
}

impl Ingested {
    pub fn verdict(&self) -> bool {
        match self {
            Ingested::Report(r) => r.verdict(),
            Ingested::Chern(rows) => !rows.is_empty() && rows.iter().all(ChernRow::pass),
            Ingested::Sweep(rows) => !rows.is_empty() && rows.iter().all(SweepRow::pass),
        }
    }
}

pub fn ingest(path: &Path) -> anyhow::Result<Ingested> {
    let mut text = String::new();
    std::fs::File::open(path)?.read_to_string(&mut text)?;
    if text.trim_start().starts_with('{') {
        let r: RunReport = serde_json::from_str(&text)?;
        anyhow::ensure!(r.schema == SCHEMA, "unsupported report schema {}", r.schema);
        return Ok(Ingested::Report(r));
    }
    let header = text.lines().next().unwrap_or("");
    if header.starts_with("potential,which") {
        Ok(Ingested::Chern(read_csv(&text)?))
    } else if header.starts_with("c,r,loop_integral") {
        Ok(Ingested::Sweep(read_csv(&text)?))
    } else {
        anyhow::bail!("unrecognized file {}", path.display())
    }
}
