//! Matrix file formats: square PHYLIP, TSV and JSON.

use std::fmt::Write as _;
use std::path::Path;

use infodist_core::matrix::MetricAuditReport;
use infodist_core::DistanceMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PHYLIP_LABEL_WIDTH: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixFormat {
    Phylip,
    Tsv,
    Json,
}

impl MatrixFormat {
    pub const ALL: [MatrixFormat; 3] = [MatrixFormat::Phylip, MatrixFormat::Tsv, MatrixFormat::Json];

    pub fn extension(self) -> &'static str {
        match self {
            MatrixFormat::Phylip => "phy",
            MatrixFormat::Tsv => "tsv",
            MatrixFormat::Json => "json",
        }
    }

    /// Guesses the format from a file extension, defaulting to PHYLIP.
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsv") => MatrixFormat::Tsv,
            Some("json") => MatrixFormat::Json,
            _ => MatrixFormat::Phylip,
        }
    }
}

impl std::str::FromStr for MatrixFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "phylip" | "phy" => Ok(MatrixFormat::Phylip),
            "tsv" => Ok(MatrixFormat::Tsv),
            "json" => Ok(MatrixFormat::Json),
            _ => Err(format!("unknown matrix format `{s}`; expected phylip, tsv or json")),
        }
    }
}

/// Label padded with spaces or truncated to exactly 10 characters.
pub fn phylip_label(label: &str) -> String {
    let mut s: String = label.chars().take(PHYLIP_LABEL_WIDTH).collect();
    while s.chars().count() < PHYLIP_LABEL_WIDTH {
        s.push(' ');
    }
    s
}

pub fn write_phylip(m: &DistanceMatrix) -> String {
    let mut seen = std::collections::HashSet::new();
    for l in m.labels() {
        if !seen.insert(phylip_label(l)) {
            log::warn!(
                "PHYLIP label `{}` is not unique after truncation",
                phylip_label(l).trim_end()
            );
        }
    }
    let mut out = format!("{}\n", m.len());
    for i in 0..m.len() {
        out.push_str(&phylip_label(&m.labels()[i]));
        for v in m.row(i) {
            write!(out, " {v:.6}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// `v` with 10 significant digits, in the style of C's `%.10g`.
pub fn format_significant(v: f64) -> String {
    const DIGITS: i32 = 10;
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s.to_owned()
        }
    };
    if !(-5..DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        trim(&format!("{:.*}", (DIGITS - 1 - exp) as usize, v))
    }
}

pub fn write_tsv(m: &DistanceMatrix) -> String {
    let mut out = String::new();
    for l in m.labels() {
        out.push('\t');
        out.push_str(l);
    }
    out.push('\n');
    for i in 0..m.len() {
        out.push_str(&m.labels()[i]);
        for v in m.row(i) {
            out.push('\t');
            out.push_str(&format_significant(*v));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonOut<'a> {
    labels: &'a [String],
    values: Vec<&'a [f64]>,
    recipe: Option<&'a infodist_core::DistanceRecipe>,
    recipe_text: Option<String>,
    audit: Option<&'a MetricAuditReport>,
}

#[derive(Deserialize)]
struct JsonIn {
    labels: Vec<String>,
    values: Vec<Vec<f64>>,
}

pub fn write_json(m: &DistanceMatrix, audit: Option<&MetricAuditReport>) -> String {
    let out = JsonOut {
        labels: m.labels(),
        values: (0..m.len()).map(|i| m.row(i)).collect(),
        recipe: m.recipe(),
        recipe_text: m.recipe().map(|r| r.to_string()),
        audit,
    };
    let mut s = serde_json::to_string_pretty(&out).expect("matrix serializes");
    s.push('\n');
    s
}

pub fn write_matrix(m: &DistanceMatrix, format: MatrixFormat, audit: Option<&MetricAuditReport>) -> String {
    match format {
        MatrixFormat::Phylip => write_phylip(m),
        MatrixFormat::Tsv => write_tsv(m),
        MatrixFormat::Json => write_json(m, audit),
    }
}

fn parse_values<'a>(tokens: impl Iterator<Item = &'a str>, line: usize) -> std::result::Result<Vec<f64>, String> {
    tokens
        .map(|t| t.parse::<f64>().map_err(|_| format!("line {line}: bad number `{t}`")))
        .collect()
}

fn build(n: usize, labels: Vec<String>, rows: Vec<Vec<f64>>) -> std::result::Result<DistanceMatrix, String> {
    if labels.len() != n || rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(format!("expected a {n}x{n} matrix"));
    }
    DistanceMatrix::new(labels, rows.concat()).map_err(|e| e.to_string())
}

/// Reads square PHYLIP. Labels are the first 10 characters, or the first
/// whitespace-delimited token when a row does not fit that layout.
pub fn read_phylip(text: &str) -> std::result::Result<DistanceMatrix, String> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or("empty PHYLIP file")?;
    let n: usize = first
        .trim()
        .parse()
        .map_err(|_| format!("line 1: expected the taxon count, got `{first}`"))?;
    let mut labels = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for (i, line) in lines {
        let strict: String = line.chars().take(PHYLIP_LABEL_WIDTH).collect();
        let rest: String = line.chars().skip(PHYLIP_LABEL_WIDTH).collect();
        let (label, values) = match parse_values(rest.split_whitespace(), i + 1) {
            Ok(v) if v.len() == n => (strict.trim().to_owned(), v),
            _ => {
                let mut tokens = line.split_whitespace();
                let label = tokens.next().unwrap_or_default().to_owned();
                (label, parse_values(tokens, i + 1)?)
            }
        };
        labels.push(label);
        rows.push(values);
    }
    build(n, labels, rows)
}

pub fn read_tsv(text: &str) -> std::result::Result<DistanceMatrix, String> {
    let mut lines = text.lines().filter(|l| !l.is_empty());
    let header = lines.next().ok_or("empty TSV file")?;
    let labels: Vec<String> = header.split('\t').skip(1).map(str::to_owned).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let mut cells = line.split('\t');
        let label = cells.next().unwrap_or_default();
        if labels.get(i).map(String::as_str) != Some(label) {
            return Err(format!("row {} label `{label}` does not match the header", i + 1));
        }
        rows.push(parse_values(cells, i + 2)?);
    }
    build(labels.len(), labels, rows)
}

pub fn read_json(text: &str) -> std::result::Result<DistanceMatrix, String> {
    let m: JsonIn = serde_json::from_str(text).map_err(|e| e.to_string())?;
    build(m.labels.len(), m.labels, m.values)
}

/// Reads a matrix file, choosing the parser by extension.
pub fn read_matrix(path: &Path) -> Result<DistanceMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parsed = match MatrixFormat::for_path(path) {
        MatrixFormat::Phylip => read_phylip(&text),
        MatrixFormat::Tsv => read_tsv(&text),
        MatrixFormat::Json => read_json(&text),
    };
    parsed.map_err(|m| Error::format(path, m))
}
