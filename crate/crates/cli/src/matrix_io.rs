//! Reading and writing count matrices as CSV or JSON.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use tmotif::{CountMatrix, Delta, GridCell};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// JSON form of a count: the 6x6 matrix plus metadata.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub delta: Delta,
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub classes: Vec<String>,
    pub counts: [[u64; 6]; 6],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
}

/// Header then one `i,j,count` line per cell, row-major, 1-based.
pub fn to_csv(m: &CountMatrix) -> String {
    let mut out = String::from("i,j,count\n");
    for (cell, v) in m.iter() {
        out.push_str(&format!("{},{},{}\n", cell.row(), cell.col(), v));
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Accepts either output format of `count`, or a bare 6x6 JSON array.
pub fn parse_matrix(text: &str) -> Result<CountMatrix> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let doc: MatrixDoc = serde_json::from_str(trimmed).context("reading JSON count matrix")?;
        return Ok(CountMatrix::from_rows(doc.counts));
    }
    if trimmed.starts_with('[') {
        let rows: [[u64; 6]; 6] = serde_json::from_str(trimmed).context("reading JSON count matrix")?;
        return Ok(CountMatrix::from_rows(rows));
    }
    let mut m = CountMatrix::zero();
    let mut seen = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == "i,j,count" {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [i, j, c] = fields[..] else {
            bail!("line {}: expected i,j,count", lineno + 1);
        };
        let parse = |s: &str| s.parse::<u64>().with_context(|| format!("line {}: bad number {s:?}", lineno + 1));
        let (i, j, c) = (parse(i)?, parse(j)?, parse(c)?);
        let cell = GridCell::new(i.try_into()?, j.try_into()?).with_context(|| format!("line {}", lineno + 1))?;
        m.set(cell, c);
        seen += 1;
    }
    if seen != 36 {
        bail!("expected 36 cells, found {seen}");
    }
    Ok(m)
}
