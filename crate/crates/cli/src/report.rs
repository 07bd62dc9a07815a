//! Machine-readable report of a `classify` run.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use lie_proper_core::embed::Loaded;
use lie_proper_core::nilporb::Characteristic;
use lie_proper_core::proper::{decide, Admits, Evidence, ProperOptions, TriageClass};

pub const REPORT_SCHEMA: &str = "lie-proper/report/v1";

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    /// SHA-256 of the database file.
    pub input_digest: String,
    pub seed: u64,
    pub orbit_cap: usize,
    pub verdicts: Vec<VerdictEntry>,
    pub errors: Vec<ErrorEntry>,
    /// Wall-clock milliseconds; the only field that varies between runs.
    pub timing: Option<Timing>,
}

#[derive(Debug, Serialize)]
pub struct VerdictEntry {
    /// 0-based record position in the database.
    pub index: usize,
    pub id: String,
    pub g: String,
    pub h: String,
    pub triage: TriageClass,
    pub admits_nonabelian: Admits,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Characteristic>,
    /// Size of the witness orbit, or number of refuted characteristics.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refuted: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct ErrorEntry {
    pub index: usize,
    pub id: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ErrorEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "record {}", self.index + 1)?;
        if let Some(id) = &self.id {
            write!(f, " ({id})")?;
        }
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub load_ms: f64,
    pub decide_ms: f64,
}

impl RunReport {
    pub fn build(input_digest: String, opts: ProperOptions, entries: &[Loaded]) -> RunReport {
        let results: Vec<Result<VerdictEntry, ErrorEntry>> = entries
            .par_iter()
            .enumerate()
            .map(|(index, entry)| match entry {
                Loaded::Error(e) => {
                    Err(ErrorEntry { index, id: e.id.clone(), line: e.line, message: e.message.clone() })
                }
                Loaded::Record(rec) => match decide(rec, &opts) {
                    Ok(v) => {
                        let (orbit_points, refuted) = match v.certificate.as_ref().map(|c| &c.evidence) {
                            Some(Evidence::Witness { orbit_size, .. }) => (Some(*orbit_size), None),
                            Some(Evidence::Refuted { refutations }) => (None, Some(refutations.len())),
                            None => (None, None),
                        };
                        Ok(VerdictEntry {
                            index,
                            id: v.id,
                            g: v.g,
                            h: v.h,
                            triage: v.triage,
                            admits_nonabelian: v.admits_nonabelian,
                            witness: v.witness,
                            orbit_points,
                            refuted,
                        })
                    }
                    Err(e) => Err(ErrorEntry { index, id: Some(rec.id.clone()), line: None, message: e.to_string() }),
                },
            })
            .collect();
        let mut verdicts = Vec::new();
        let mut errors = Vec::new();
        for r in results {
            match r {
                Ok(v) => verdicts.push(v),
                Err(e) => errors.push(e),
            }
        }
        RunReport {
            schema: REPORT_SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            input_digest,
            seed: opts.scan.seed,
            orbit_cap: opts.cap,
            verdicts,
            errors,
            timing: None,
        }
    }

    pub fn with_timing(self, load_ms: f64, decide_ms: f64) -> RunReport {
        RunReport { timing: Some(Timing { load_ms, decide_ms }), ..self }
    }
}
