//! Report rows and their CSV / markdown / JSON renderings.

use std::fmt;

use anyhow::Result;
use serde::{Deserialize, Serialize};

/// Real-valued expectations match within this tolerance; integers exactly.
pub const CAPACITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Match,
    Mismatch,
    LowerBoundOnly,
    Exploratory,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Match => "match",
            Status::Mismatch => "mismatch",
            Status::LowerBoundOnly => "lower-bound-only",
            Status::Exploratory => "exploratory",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scenario_id: String,
    pub claim: String,
    pub computed: String,
    pub expected: String,
    pub status: Status,
    pub mode: String,
    pub wall_ms: u64,
    /// Witnesses, audit results and the like; JSON output only.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl ReportRow {
    pub fn error(
        scenario_id: impl Into<String>,
        claim: impl Into<String>,
        err: &anyhow::Error,
    ) -> Self {
        Self {
            scenario_id: scenario_id.into(),
            claim: claim.into(),
            computed: format!("error: {err:#}"),
            expected: String::new(),
            status: Status::Mismatch,
            mode: String::new(),
            wall_ms: 0,
            detail: String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Md,
    Json,
}

const COLUMNS: [&str; 7] = [
    "scenario_id",
    "claim",
    "computed",
    "expected",
    "status",
    "mode",
    "wall_ms",
];

fn cells(r: &ReportRow) -> [String; 7] {
    [
        r.scenario_id.clone(),
        r.claim.clone(),
        r.computed.clone(),
        r.expected.clone(),
        r.status.to_string(),
        r.mode.clone(),
        r.wall_ms.to_string(),
    ]
}

pub fn render(rows: &[ReportRow], format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS)?;
            for r in rows {
                w.write_record(cells(r))?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Md => {
            let mut out = format!(
                "| {} |\n|{}\n",
                COLUMNS.join(" | "),
                "---|".repeat(COLUMNS.len())
            );
            for r in rows {
                let cells = cells(r).map(|c| c.replace('|', "\\|").replace('\n', " "));
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            out
        }
        Format::Json => serde_json::to_string_pretty(rows)? + "\n",
    })
}

pub fn any_mismatch(rows: &[ReportRow]) -> bool {
    rows.iter().any(|r| r.status == Status::Mismatch)
}
