//! Check records and their JSON-lines and text renderings.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Result, SubkitError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// One checked instance. Field order is the JSON key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub group: String,
    pub check: String,
    pub prime: Option<usize>,
    pub status: Status,
    pub witness: Value,
    pub ms: u64,
}

impl CheckReport {
    pub fn new(
        group: &str,
        check: &str,
        prime: Option<usize>,
        status: Status,
        witness: Value,
    ) -> Self {
        CheckReport {
            group: group.to_string(),
            check: check.to_string(),
            prime,
            status,
            witness,
            ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn from_json_line(line: &str) -> Result<CheckReport> {
        serde_json::from_str(line).map_err(|e| SubkitError::Parse {
            file: "report".into(),
            field: "line".into(),
            reason: e.to_string(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn render(reports: &[CheckReport], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            for r in reports {
                out.push_str(&r.to_json_line());
                out.push('\n');
            }
        }
        Format::Text => {
            if reports.is_empty() {
                return out;
            }
            let gw = reports
                .iter()
                .map(|r| r.group.len())
                .max()
                .unwrap_or(0)
                .max(5);
            let cw = reports
                .iter()
                .map(|r| r.check.len())
                .max()
                .unwrap_or(0)
                .max(5);
            out.push_str(&format!(
                "{:gw$}  {:cw$}  {:>5}  {:7}  instance\n",
                "group", "check", "prime", "status"
            ));
            for r in reports {
                let prime = r.prime.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
                let inst = r
                    .witness
                    .get("instance")
                    .map(Value::to_string)
                    .unwrap_or_default();
                out.push_str(&format!(
                    "{:gw$}  {:cw$}  {:>5}  {:7}  {}\n",
                    r.group,
                    r.check,
                    prime,
                    r.status.as_str(),
                    inst
                ));
            }
        }
    }
    out
}

/// Writes the reports to `out`, or to standard output when `out` is `None`.
pub fn emit_report(reports: &[CheckReport], format: Format, out: Option<&Path>) -> Result<()> {
    let text = render(reports, format);
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}
