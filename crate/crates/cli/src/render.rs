//! Deterministic text, CSV and JSON renderings.

use serde_json::{json, Value};
use weakval_core::scenarios::hardy::FactualProbabilities;
use weakval_core::{Complex64, WeakValueTable};

/// Values closer to zero than this print as `0`.
pub const ZERO_SNAP: f64 = 1e-13;
const SIGNIFICANT: usize = 12;

pub const UNDEFINED: &str = "undef";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

fn snap(x: f64) -> f64 {
    if x.abs() < ZERO_SNAP {
        0.0
    } else {
        x
    }
}

/// `%.12g` with trailing zeros removed.
pub fn real(x: f64) -> String {
    let x = snap(x);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x))
    }
}

fn strip_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `a+bi` with both parts at twelve significant digits.
pub fn complex(z: Complex64) -> String {
    let im = snap(z.im);
    let sign = if im < 0.0 { "-" } else { "+" };
    format!("{}{sign}{}i", real(z.re), real(im.abs()))
}

pub fn cell(z: Option<Complex64>) -> String {
    z.map(complex).unwrap_or_else(|| UNDEFINED.into())
}

/// The value a reader recovers from [`real`].
pub fn rounded(x: f64) -> f64 {
    real(x).parse().expect("formatted real parses")
}

/// A rectangular view shared by the text and CSV renderings.
pub struct Grid {
    pub title: String,
    pub header: Vec<String>,
    /// Rows; `None` draws a rule in text output.
    pub rows: Vec<Option<Vec<String>>>,
    /// Free-form lines printed after the text table.
    pub notes: Vec<String>,
}

impl Grid {
    pub fn text(&self) -> String {
        let cols = self.header.len();
        let mut widths = vec![0; cols];
        for row in std::iter::once(&self.header).chain(self.rows.iter().flatten()) {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |row: &[String]| {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}", w = *w))
                .collect();
            format!("{}\n", cells.join("  ").trim_end())
        };
        let total = widths.iter().sum::<usize>() + 2 * cols.saturating_sub(1);
        let mut out = format!("{}\n", self.title);
        out += &line(&self.header);
        out += &format!("{}\n", "-".repeat(total));
        for row in &self.rows {
            match row {
                Some(r) => out += &line(r),
                None => out += &format!("{}\n", "-".repeat(total)),
            }
        }
        for note in &self.notes {
            out += note;
            out.push('\n');
        }
        out
    }

    pub fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(false).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in self.rows.iter().flatten() {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Splits each complex row into `(Re)` and `(Im)` rows of reals.
fn split_rows(name: &str, cells: &[Option<Complex64>], average: Option<Complex64>) -> Vec<Vec<String>> {
    let part = |f: fn(Complex64) -> f64, tag: &str| {
        let mut row = vec![format!("{name} ({tag})")];
        row.extend(cells.iter().map(|c| c.map(|z| real(f(z))).unwrap_or_else(|| UNDEFINED.into())));
        row.push(average.map(|z| real(f(z))).unwrap_or_default());
        row
    };
    vec![part(|z| z.re, "Re"), part(|z| z.im, "Im")]
}

fn complex_row(name: &str, cells: &[Option<Complex64>], average: Complex64, split: bool) -> Vec<Vec<String>> {
    if split {
        return split_rows(name, cells, Some(average));
    }
    let mut row = vec![name.to_string()];
    row.extend(cells.iter().map(|c| cell(*c)));
    row.push(complex(average));
    vec![row]
}

pub fn table_grid(t: &WeakValueTable, split: bool) -> Grid {
    let mut header = vec!["Post-selection".to_string()];
    header.extend(t.post_labels.iter().cloned());
    header.push("Average".into());

    let mut weights = vec!["Weight".to_string()];
    weights.extend(t.weights.iter().map(|w| real(*w)));
    weights.push(String::new());

    let mut rows = vec![Some(weights), None];
    for r in &t.rows {
        rows.extend(complex_row(&r.name, &r.cells, r.average, split).into_iter().map(Some));
    }
    for summary in [&t.column_sums, &t.square_sums].into_iter().flatten() {
        rows.push(None);
        rows.extend(
            complex_row(&summary.label, &summary.cells, summary.average, split)
                .into_iter()
                .map(Some),
        );
    }
    let mut notes = Vec::new();
    if t.rows.iter().any(|r| r.formulas.is_some()) {
        notes.push(String::new());
        notes.push("Closed forms:".into());
        for r in &t.rows {
            if let Some(f) = &r.formulas {
                notes.push(format!("  {}: {}", r.name, f.join(" | ")));
            }
        }
    }
    Grid {
        title: t.title.clone(),
        header,
        rows,
        notes,
    }
}

fn json_cells(cells: &[Option<Complex64>]) -> Value {
    cells.iter().map(|c| Value::String(cell(*c))).collect()
}

pub fn table_json(t: &WeakValueTable) -> Value {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| {
            let mut v = json!({
                "name": r.name,
                "cells": json_cells(&r.cells),
                "average": complex(r.average),
            });
            if let Some(f) = &r.formulas {
                v["formulas"] = json!(f);
            }
            v
        })
        .collect();
    let mut v = json!({
        "title": t.title,
        "post_labels": t.post_labels,
        "weights": t.weights.iter().map(|w| rounded(*w)).collect::<Vec<_>>(),
        "rows": rows,
    });
    for (key, summary) in [("sum", &t.column_sums), ("sum_of_squared", &t.square_sums)] {
        if let Some(s) = summary {
            v[key] = json!({ "cells": json_cells(&s.cells), "average": complex(s.average) });
        }
    }
    v
}

pub fn factual_grid(f: &FactualProbabilities) -> Grid {
    let mut header = vec!["Detector".to_string()];
    header.extend(f.detectors.iter().cloned());
    let mut rows = Vec::new();
    for case in &f.cases {
        for (tag, probs) in [("Born", &case.born), ("ABL", &case.abl)] {
            let mut row = vec![format!("{} {tag}", case.measured)];
            row.extend(probs.iter().map(|p| real(*p)));
            rows.push(Some(row));
        }
        rows.push(None);
    }
    let mut row = vec!["Unconditional".to_string()];
    row.extend(f.unconditional.iter().map(|p| real(*p)));
    rows.push(Some(row));
    Grid {
        title: "Hardy: detector probabilities after a positron path measurement".into(),
        header,
        rows,
        notes: Vec::new(),
    }
}

pub fn factual_json(f: &FactualProbabilities) -> Value {
    let list = |v: &[f64]| v.iter().map(|p| rounded(*p)).collect::<Vec<_>>();
    json!({
        "detectors": f.detectors,
        "cases": f.cases.iter().map(|c| json!({
            "measured": c.measured,
            "outcome_probability": rounded(c.outcome_probability),
            "born": list(&c.born),
            "abl": list(&c.abl),
        })).collect::<Vec<_>>(),
        "unconditional": list(&f.unconditional),
    })
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
