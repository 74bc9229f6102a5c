//! Machine-readable verification records.
//!
//! A certificate serializes as pretty-printed JSON with sorted maps. Apart
//! from the trailing `timings_ms` block, two runs with the same parameters
//! and budgets produce byte-identical output.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::dimacs::to_dimacs;
use crate::error::Result;
use crate::graph::Graph;

pub const SCHEMA_VERSION: u32 = 1;

pub fn tool_version() -> String {
    format!("starjoin {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimId {
    Theorem2,
    LemmaLocjoin,
    LemmaJoinHomology,
    RemarkR0,
    KstConsistency,
    Eq1Count,
    Eq2Adjacency,
}

impl ClaimId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimId::Theorem2 => "theorem2",
            ClaimId::LemmaLocjoin => "lemma_locjoin",
            ClaimId::LemmaJoinHomology => "lemma_join_homology",
            ClaimId::RemarkR0 => "remark_r0",
            ClaimId::KstConsistency => "kst_consistency",
            ClaimId::Eq1Count => "eq1_count",
            ClaimId::Eq2Adjacency => "eq2_adjacency",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unknown => "unknown",
        }
    }

    /// Fail dominates unknown, which dominates pass.
    pub fn combine(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub tool_version: String,
    pub claim_id: ClaimId,
    pub params: BTreeMap<String, Value>,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub artifact_hashes: BTreeMap<String, String>,
    /// Wall time per check in milliseconds; excluded from determinism.
    pub timings_ms: BTreeMap<String, u64>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

/// Content hash of the canonical DIMACS serialization.
pub fn graph_hash(g: &Graph) -> String {
    sha256_hex(to_dimacs(g).as_bytes())
}

impl Certificate {
    pub fn new(claim_id: ClaimId) -> Self {
        Certificate {
            schema_version: SCHEMA_VERSION,
            tool_version: tool_version(),
            claim_id,
            params: BTreeMap::new(),
            verdict: Verdict::Pass,
            checks: Vec::new(),
            artifact_hashes: BTreeMap::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn hash_graph(&mut self, name: &str, g: &Graph) {
        self.artifact_hashes.insert(name.to_string(), graph_hash(g));
    }

    /// Runs `f` as a named check and records its outcome and wall time.
    pub fn check(&mut self, name: &str, f: impl FnOnce() -> (Verdict, String)) -> Verdict {
        let start = Instant::now();
        let (verdict, detail) = f();
        self.timings_ms.insert(name.to_string(), start.elapsed().as_millis() as u64);
        self.checks.push(Check { name: name.to_string(), verdict, detail });
        self.verdict = self.verdict.combine(verdict);
        verdict
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes") + "\n"
    }

    /// Serialization with the timings block cleared, for comparisons.
    pub fn to_json_without_timings(&self) -> String {
        let mut copy = self.clone();
        copy.timings_ms.clear();
        copy.to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| crate::Error::Parse { line: e.line(), msg: e.to_string() })
    }

    /// Writes via a temporary sibling file and a rename.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json().as_bytes())
    }
}

pub fn write_atomic(path: &Path, data: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, data)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_aggregation() {
        let mut cert = Certificate::new(ClaimId::Eq1Count);
        cert.check("a", || (Verdict::Pass, "ok".into()));
        assert_eq!(cert.verdict, Verdict::Pass);
        cert.check("b", || (Verdict::Unknown, "budget".into()));
        assert_eq!(cert.verdict, Verdict::Unknown);
        cert.check("c", || (Verdict::Fail, "mismatch".into()));
        cert.check("d", || (Verdict::Pass, "ok".into()));
        assert_eq!(cert.verdict, Verdict::Fail);
    }

    #[test]
    fn json_round_trip_and_atomic_write() {
        let mut cert = Certificate::new(ClaimId::RemarkR0);
        cert.param("n", 2).param("m", 3);
        cert.check("x", || (Verdict::Pass, "fine".into()));
        let text = cert.to_json();
        assert!(text.contains("\"claim_id\": \"remark_r0\""));
        assert!(text.contains("\"schema_version\": 1"));
        assert_eq!(Certificate::from_json(&text).unwrap(), cert);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cert.json");
        cert.write_atomic(&path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), text);
        assert!(!dir.path().join("cert.json.tmp").exists());
    }

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
