//! Run reports and their text, CSV and JSON renderings.

use std::fmt::Write as _;
use std::time::Duration;

use clap::ValueEnum;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Preformatted text rendering, used instead of the rows in text mode.
    #[serde(skip)]
    pub listing: Option<String>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            listing: None,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub invariant: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub phase: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input_digest: String,
    pub outputs: Vec<Table>,
    pub verdicts: Vec<Verdict>,
    pub timings: Vec<Timing>,
}

impl RunReport {
    pub fn new(command: String, inputs: &[&str]) -> Self {
        let mut hasher = Sha256::new();
        for input in inputs {
            hasher.update(input.as_bytes());
            hasher.update([0u8]);
        }
        let input_digest = hasher.finalize().iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });
        RunReport {
            command,
            input_digest,
            outputs: Vec::new(),
            verdicts: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn verdict(&mut self, invariant: &str, passed: bool, max_deviation: Option<f64>) {
        self.verdicts.push(Verdict {
            invariant: invariant.to_string(),
            passed,
            max_deviation: max_deviation.map(f64::abs),
        });
    }

    pub fn time(&mut self, phase: &str, d: Duration) {
        self.timings.push(Timing {
            phase: phase.to_string(),
            seconds: d.as_secs_f64(),
        });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    /// Main rendering plus a trailer of verdicts and timings for stderr.
    /// JSON carries everything in the main rendering.
    pub fn render(&self, format: Format) -> (String, String) {
        match format {
            Format::Json => (
                serde_json::to_string_pretty(self).expect("report serializes") + "\n",
                String::new(),
            ),
            Format::Csv => {
                let blocks: Vec<String> = self.outputs.iter().map(csv_block).collect();
                (blocks.join("\n"), self.trailer())
            }
            Format::Text => {
                let mut out = String::new();
                for t in &self.outputs {
                    match &t.listing {
                        Some(l) => out.push_str(l),
                        None => out.push_str(&text_block(t)),
                    }
                }
                (out, self.trailer())
            }
        }
    }

    fn trailer(&self) -> String {
        let mut s = String::new();
        for v in &self.verdicts {
            let status = if v.passed { "PASS" } else { "FAIL" };
            match v.max_deviation {
                Some(d) => writeln!(
                    s,
                    "# {status} {} (max deviation {})",
                    v.invariant,
                    fmt_float(d)
                ),
                None => writeln!(s, "# {status} {}", v.invariant),
            }
            .unwrap();
        }
        for t in &self.timings {
            writeln!(s, "# time {}: {:.6} s", t.phase, t.seconds).unwrap();
        }
        s
    }
}

fn csv_block(t: &Table) -> String {
    let mut s = t.header.join(",") + "\n";
    for row in &t.rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn text_block(t: &Table) -> String {
    let mut widths: Vec<usize> = t.header.iter().map(|h| h.chars().count()).collect();
    for row in &t.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(&t.header);
    for row in &t.rows {
        s.push_str(&line(row));
    }
    s
}

/// Formats with 12 significant digits, trailing zeros removed.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    } else {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exp}")
    }
}
