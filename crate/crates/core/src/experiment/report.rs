//! Report rows and their CSV / JSON serialization.

use std::cmp::Ordering;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::C64;
use crate::error::{Error, Result};
use crate::limits::{Provenance, Target};

pub const CSV_HEADER: [&str; 8] = [
    "metric",
    "n",
    "value_re",
    "value_im",
    "target_re",
    "target_im",
    "provenance",
    "pass",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Config {
                field: "format",
                message: format!("expected csv or json, got `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Tolerance {
    Absolute(f64),
    Relative(f64),
}

impl Tolerance {
    fn admits(&self, value: C64, target: C64) -> bool {
        let d = (value - target).norm();
        match *self {
            Tolerance::Absolute(t) => d <= t,
            Tolerance::Relative(t) => d <= t * target.norm(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub metric: String,
    pub n: Option<usize>,
    pub value: C64,
    pub target: Option<Target>,
    pub tolerance: Option<Tolerance>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Row {
    /// `|value - target|` within `tolerance`.
    pub fn compare(
        metric: impl Into<String>,
        n: Option<usize>,
        value: C64,
        target: Target,
        tolerance: Tolerance,
    ) -> Self {
        let pass = value.re.is_finite() && value.im.is_finite() && tolerance.admits(value, target.value);
        Self {
            metric: metric.into(),
            n,
            value,
            target: Some(target),
            tolerance: Some(tolerance),
            pass,
            note: None,
        }
    }

    pub fn real(
        metric: impl Into<String>,
        n: Option<usize>,
        value: f64,
        target: f64,
        provenance: Provenance,
        tolerance: Tolerance,
    ) -> Self {
        Self::compare(metric, n, C64::new(value, 0.0), Target::real(target, provenance), tolerance)
    }

    /// A verdict without a numeric target, such as a lower bound.
    pub fn check(metric: impl Into<String>, n: Option<usize>, value: f64, pass: bool) -> Self {
        Self {
            metric: metric.into(),
            n,
            value: C64::new(value, 0.0),
            target: None,
            tolerance: None,
            pass: pass && value.is_finite(),
            note: None,
        }
    }

    /// Recorded for reference; always passes.
    pub fn info(metric: impl Into<String>, n: Option<usize>, value: C64) -> Self {
        Self {
            metric: metric.into(),
            n,
            value,
            target: None,
            tolerance: None,
            pass: true,
            note: None,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(metric: impl Into<String>, n: Option<usize>, err: &Error) -> Self {
        Self {
            metric: metric.into(),
            n,
            value: C64::new(f64::NAN, 0.0),
            target: None,
            tolerance: None,
            pass: false,
            note: Some(err.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Additional condition folded into the verdict.
    pub fn and(mut self, ok: bool, note: impl Into<String>) -> Self {
        if !ok {
            self.pass = false;
            self.note = Some(note.into());
        }
        self
    }
}

pub(crate) fn row_order(a: &Row, b: &Row) -> Ordering {
    a.metric.cmp(&b.metric).then(a.n.cmp(&b.n))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub tolerance_table: String,
    pub config: serde_json::Value,
    /// seconds since the Unix epoch
    pub timestamp: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub rows: Vec<Row>,
}

fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

impl Report {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn find(&self, metric: &str) -> impl Iterator<Item = &Row> {
        let metric = metric.to_string();
        self.rows.iter().filter(move |r| r.metric == metric)
    }

    pub fn to_csv(&self) -> Result<String> {
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &self.rows {
            let (tre, tim, prov) = match &r.target {
                Some(t) => (fmt_f64(t.value.re), fmt_f64(t.value.im), t.provenance.as_str().to_string()),
                None => (String::new(), String::new(), String::new()),
            };
            w.write_record([
                r.metric.clone(),
                r.n.map(|n| n.to_string()).unwrap_or_default(),
                fmt_f64(r.value.re),
                fmt_f64(r.value.im),
                tre,
                tim,
                prov,
                r.pass.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidArgument(format!("json: {e}")))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json().map(|mut s| {
                s.push('\n');
                s
            }),
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        let body = self.render(format)?;
        std::fs::write(path, body).map_err(|e| Error::Config {
            field: "out",
            message: format!("{}: {e}", path.display()),
        })
    }
}
