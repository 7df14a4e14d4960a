//! Array file formats and the exit-code-aware error type.
//!
//! JSON is the canonical format: `{"dims": [...], "ranks": [...]}` with
//! the flat rank layout of the core library. The text format covers 2-D
//! arrays only: one line per row, top row first, whitespace-separated
//! ranks.

use gridlex_core::{Error as CoreError, RankArray};
use serde::{Deserialize, Serialize};

/// CLI failures carrying their process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input, unusable parameters: exit 2.
    Format(String),
    /// Well-formed file whose ranks are not a permutation: exit 3.
    Invariant(String),
    /// Search budget exhausted before an answer: exit 4.
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Format(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Budget(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Format(m) | CliError::Invariant(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        match e {
            CoreError::NonPermutationRanks { .. } => CliError::Invariant(e.to_string()),
            CoreError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Format(e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct ArrayFile {
    dims: Vec<usize>,
    ranks: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FileFormat {
    Json,
    Text,
}

pub fn write_array(array: &RankArray, format: FileFormat) -> Result<String, CliError> {
    match format {
        FileFormat::Json => {
            let file =
                ArrayFile { dims: array.dims().to_vec(), ranks: array.ranks().to_vec() };
            let mut out = serde_json::to_string(&file)
                .map_err(|e| CliError::Format(e.to_string()))?;
            out.push('\n');
            Ok(out)
        }
        FileFormat::Text => {
            if array.dim() != 2 {
                return Err(CliError::Format(
                    "text format holds 2-D arrays only".into(),
                ));
            }
            let (w, h) = (array.dims()[0], array.dims()[1]);
            let mut out = String::new();
            for row in (1..=h).rev() {
                for x in 1..=w {
                    if x > 1 {
                        out.push(' ');
                    }
                    out.push_str(&array.rank_at(&[x, row]).to_string());
                }
                out.push('\n');
            }
            Ok(out)
        }
    }
}

pub fn read_array(path: &std::path::Path) -> Result<RankArray, CliError> {
    let text = std::fs::read_to_string(path)?;
    parse_array(&text)
}

/// Parses either format; JSON when the first non-blank byte is `{`.
pub fn parse_array(text: &str) -> Result<RankArray, CliError> {
    if text.trim_start().starts_with('{') {
        let file: ArrayFile = serde_json::from_str(text)
            .map_err(|e| CliError::Format(format!("bad JSON array file: {e}")))?;
        return Ok(RankArray::new(file.dims, file.ranks)?);
    }
    let rows: Vec<Vec<usize>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| CliError::Format(format!("bad rank token {tok:?}")))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.is_empty() {
        return Err(CliError::Format("empty array file".into()));
    }
    let w = rows[0].len();
    if rows.iter().any(|r| r.len() != w) {
        return Err(CliError::Format("text rows have unequal lengths".into()));
    }
    let h = rows.len();
    let mut ranks = vec![0usize; w * h];
    for (i, row) in rows.iter().enumerate() {
        let x2 = h - i; // top row first
        for (j, &v) in row.iter().enumerate() {
            ranks[j + (x2 - 1) * w] = v;
        }
    }
    Ok(RankArray::new(vec![w, h], ranks)?)
}
