//! Declarative verification grids.
//!
//! A suite config is TOML:
//!
//! ```toml
//! [budget]
//! max_nodes = 2000000
//! max_seconds = 60
//! face_cap = 5000000
//!
//! [[theorem2]]
//! n = 2
//! c = 3
//! r = 1
//! deep = true
//!
//! [[locjoin]]
//! g1 = "C5"
//! g2 = "K3"
//! r = 1
//! ```
//!
//! Other item tables: `joinhom` (g1, g2, s), `remark` (optional pairs),
//! `kst` (graph, r, n, c), `eq1` (n, c, r), `eq2` (g1, g2, s). Graph
//! references are `K<c>`, `C<n>`, `P<n>`, `tower:n,c,r` or a DIMACS path
//! relative to the config file. `STARJOIN_MAX_NODES`, `STARJOIN_MAX_SECONDS`
//! and `STARJOIN_FACE_CAP` override the budget table.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::certificate::{write_atomic, Certificate, ClaimId, Verdict};
use crate::coloring::SearchBudget;
use crate::complex::DEFAULT_FACE_CAP;
use crate::construct::{named_graph, tower, TowerParams};
use crate::dimacs::read_graph;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::verify::{
    verify_eq1, verify_eq2_adjacency, verify_kst, verify_lemma_join_homology,
    verify_lemma_locjoin, verify_remark_r0, verify_theorem2, REMARK_PAIRS,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<u64>,
    #[serde(default = "default_cap")]
    pub face_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_FACE_CAP
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig { max_nodes: Some(2_000_000), max_seconds: Some(60), face_cap: DEFAULT_FACE_CAP }
    }
}

impl BudgetConfig {
    pub fn search(&self) -> SearchBudget {
        SearchBudget { max_nodes: self.max_nodes, max_seconds: self.max_seconds }
    }

    pub fn apply_env(&mut self) -> Result<()> {
        fn var<T: std::str::FromStr>(name: &str) -> Result<Option<T>> {
            match std::env::var(name) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map(Some)
                    .map_err(|_| Error::InvalidInput(format!("{name}={v} is not a number"))),
                Err(_) => Ok(None),
            }
        }
        if let Some(v) = var("STARJOIN_MAX_NODES")? {
            self.max_nodes = Some(v);
        }
        if let Some(v) = var("STARJOIN_MAX_SECONDS")? {
            self.max_seconds = Some(v);
        }
        if let Some(v) = var("STARJOIN_FACE_CAP")? {
            self.face_cap = v;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theorem2Item {
    pub n: u32,
    pub c: u32,
    pub r: u32,
    #[serde(default)]
    pub deep: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairItem {
    pub g1: String,
    pub g2: String,
    #[serde(default)]
    pub r: Option<u32>,
    #[serde(default)]
    pub s: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemarkItem {
    #[serde(default)]
    pub pairs: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KstItem {
    pub graph: String,
    pub r: u32,
    pub n: u32,
    pub c: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default)]
    pub theorem2: Vec<Theorem2Item>,
    #[serde(default)]
    pub locjoin: Vec<PairItem>,
    #[serde(default)]
    pub joinhom: Vec<PairItem>,
    #[serde(default)]
    pub remark: Vec<RemarkItem>,
    #[serde(default)]
    pub kst: Vec<KstItem>,
    #[serde(default)]
    pub eq1: Vec<Theorem2Item>,
    #[serde(default)]
    pub eq2: Vec<PairItem>,
    /// Directory that relative DIMACS paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start].lines().count().max(1)).unwrap_or(0);
            Error::Parse { line, msg: e.message().to_string() }
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Self::parse(&fs::read_to_string(path)?)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn item_count(&self) -> usize {
        self.theorem2.len()
            + self.locjoin.len()
            + self.joinhom.len()
            + self.remark.len()
            + self.kst.len()
            + self.eq1.len()
            + self.eq2.len()
    }

    /// The desk-scale grid: towers with n <= 2, c in {3,4}, r in {1,2},
    /// plus small star-join corpora. Includes both an exactly refuted instance
    /// and one that runs out of search budget.
    pub fn default_grid() -> Self {
        let mut cfg = SuiteConfig::default();
        for n in 1..=2 {
            for c in 3..=4 {
                for r in 1..=2 {
                    cfg.theorem2.push(Theorem2Item { n, c, r, deep: true });
                    cfg.eq1.push(Theorem2Item { n, c, r, deep: false });
                }
            }
        }
        let pair = |g1: &str, g2: &str, r: Option<u32>, s: Option<usize>| PairItem {
            g1: g1.into(),
            g2: g2.into(),
            r,
            s,
        };
        for (g1, g2) in [("K2", "K2"), ("K3", "K3"), ("C5", "K3"), ("P3", "C5"), ("K4", "C4")] {
            cfg.locjoin.push(pair(g1, g2, Some(1), None));
        }
        cfg.locjoin.push(pair("C5", "C5", Some(2), None));
        for (g1, g2, s) in [("K2", "K2", 1), ("K3", "K3", 2), ("C4", "K3", 1), ("P3", "K3", 3), ("K2", "K4", 2)] {
            cfg.joinhom.push(pair(g1, g2, None, Some(s)));
        }
        cfg.remark.push(RemarkItem { pairs: None });
        for (graph, r, n, c) in [("K3", 1, 1, 3), ("C5", 1, 1, 3), ("tower:2,3,1", 1, 2, 3), ("tower:1,4,2", 4, 1, 4)] {
            cfg.kst.push(KstItem { graph: graph.into(), r, n, c });
        }
        for (g1, g2, s) in [("K3", "K3", 2), ("C5", "P3", 3), ("K2", "C4", 4)] {
            cfg.eq2.push(pair(g1, g2, None, Some(s)));
        }
        cfg
    }

    pub fn resolve_graph(&self, reference: &str) -> Result<Graph> {
        resolve_graph(reference, &self.base_dir)
    }
}

/// Resolves `K<c>`, `C<n>`, `P<n>`, `tower:n,c,r`, or a DIMACS path
/// relative to `base_dir`.
pub fn resolve_graph(reference: &str, base_dir: &Path) -> Result<Graph> {
    if let Some(g) = named_graph(reference) {
        return g;
    }
    if let Some(rest) = reference.strip_prefix("tower:") {
        let parts: Vec<u32> = rest
            .split(',')
            .map(|x| x.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidInput(format!("bad tower reference {reference:?}")))?;
        if let [n, c, r] = parts[..] {
            return tower(TowerParams::new(n, c, r)?);
        }
        return Err(Error::InvalidInput(format!("tower reference needs n,c,r: {reference:?}")));
    }
    read_graph(&base_dir.join(reference))
}

#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub name: String,
    pub outcome: std::result::Result<Certificate, String>,
}

impl SuiteEntry {
    pub fn verdict(&self) -> Option<Verdict> {
        self.outcome.as_ref().ok().map(|c| c.verdict)
    }
}

type Job<'a> = Box<dyn Fn() -> Result<Certificate> + 'a>;

fn need<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidInput(format!("missing field {what}")))
}

/// Runs every item of the config. Item errors are recorded and the suite
/// continues. With an output directory, each certificate is written as
/// `<name>.json` and the table as `summary.txt`.
pub fn run_suite(cfg: &SuiteConfig, out_dir: Option<&Path>) -> Result<Vec<SuiteEntry>> {
    let mut budget = cfg.budget.clone();
    budget.apply_env()?;
    let search = budget.search();
    let cap = budget.face_cap;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
    }

    let mut jobs: Vec<(String, Job<'_>)> = Vec::new();
    for t in &cfg.theorem2 {
        jobs.push((
            format!("theorem2_n{}_c{}_r{}", t.n, t.c, t.r),
            Box::new(move || verify_theorem2(TowerParams::new(t.n, t.c, t.r)?, search, t.deep, cap)),
        ));
    }
    for p in &cfg.locjoin {
        jobs.push((
            format!("locjoin_{}_{}_r{}", slug(&p.g1), slug(&p.g2), p.r.unwrap_or(0)),
            Box::new(move || {
                let (g1, g2) = (cfg.resolve_graph(&p.g1)?, cfg.resolve_graph(&p.g2)?);
                verify_lemma_locjoin(&g1, &g2, need(p.r, "r")?, search)
            }),
        ));
    }
    for p in &cfg.joinhom {
        jobs.push((
            format!("joinhom_{}_{}_s{}", slug(&p.g1), slug(&p.g2), p.s.unwrap_or(0)),
            Box::new(move || {
                let (g1, g2) = (cfg.resolve_graph(&p.g1)?, cfg.resolve_graph(&p.g2)?);
                verify_lemma_join_homology(&g1, &g2, need(p.s, "s")?, cap)
            }),
        ));
    }
    for (i, rm) in cfg.remark.iter().enumerate() {
        jobs.push((
            format!("remark_r0_{i}"),
            Box::new(move || verify_remark_r0(rm.pairs.as_deref().unwrap_or(&REMARK_PAIRS), cap)),
        ));
    }
    for k in &cfg.kst {
        jobs.push((
            format!("kst_{}_r{}_n{}_c{}", slug(&k.graph), k.r, k.n, k.c),
            Box::new(move || verify_kst(&cfg.resolve_graph(&k.graph)?, k.r, k.n, k.c, search)),
        ));
    }
    for t in &cfg.eq1 {
        jobs.push((
            format!("eq1_n{}_c{}_r{}", t.n, t.c, t.r),
            Box::new(move || verify_eq1(TowerParams::new(t.n, t.c, t.r)?)),
        ));
    }
    for p in &cfg.eq2 {
        jobs.push((
            format!("eq2_{}_{}_s{}", slug(&p.g1), slug(&p.g2), p.s.unwrap_or(0)),
            Box::new(move || {
                let (g1, g2) = (cfg.resolve_graph(&p.g1)?, cfg.resolve_graph(&p.g2)?);
                verify_eq2_adjacency(&g1, &g2, need(p.s, "s")?)
            }),
        ));
    }

    let mut entries = Vec::with_capacity(jobs.len());
    let mut used = std::collections::HashSet::new();
    for (mut name, job) in jobs {
        let base = name.clone();
        let mut k = 1;
        while !used.insert(name.clone()) {
            k += 1;
            name = format!("{base}_{k}");
        }
        info!("running {name}");
        let outcome = job().map_err(|e| e.to_string());
        match (&outcome, out_dir) {
            (Ok(cert), Some(dir)) => cert.write_atomic(&dir.join(format!("{name}.json")))?,
            (Err(e), _) => warn!("{name} failed: {e}"),
            _ => {}
        }
        entries.push(SuiteEntry { name, outcome });
    }
    if let Some(dir) = out_dir {
        write_atomic(&dir.join("summary.txt"), summary_table(&entries).as_bytes())?;
    }
    Ok(entries)
}

fn slug(s: &str) -> String {
    let file = Path::new(s).file_stem().and_then(|f| f.to_str()).unwrap_or(s);
    file.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '-' }).collect()
}

pub fn summary_table(entries: &[SuiteEntry]) -> String {
    let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(4).max(4);
    let mut out = format!("{:<width$}  {:<19}  verdict\n", "item", "claim");
    for e in entries {
        let (claim, verdict) = match &e.outcome {
            Ok(c) => (c.claim_id.as_str(), c.verdict.as_str().to_string()),
            Err(msg) => ("-", format!("error: {msg}")),
        };
        writeln!(out, "{:<width$}  {:<19}  {verdict}", e.name, claim).unwrap();
    }
    let count = |v| entries.iter().filter(|e| e.verdict() == Some(v)).count();
    let errors = entries.iter().filter(|e| e.outcome.is_err()).count();
    writeln!(
        out,
        "total {}: pass {}, fail {}, unknown {}, error {}",
        entries.len(),
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::Unknown),
        errors
    )
    .unwrap();
    out
}

/// The claims a suite touched, for reporting.
pub fn claims(entries: &[SuiteEntry]) -> Vec<ClaimId> {
    let mut ids: Vec<ClaimId> =
        entries.iter().filter_map(|e| e.outcome.as_ref().ok().map(|c| c.claim_id)).collect();
    ids.sort();
    ids.dedup();
    ids
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_empty_list() {
        let cfg = SuiteConfig::parse("").unwrap();
        assert_eq!(cfg.item_count(), 0);
        assert!(run_suite(&cfg, None).unwrap().is_empty());
    }

    #[test]
    fn parse_items_and_errors() {
        let cfg = SuiteConfig::parse(
            "[budget]\nmax_nodes = 1000\n\n[[theorem2]]\nn = 1\nc = 3\nr = 1\n\n[[locjoin]]\ng1 = \"K3\"\ng2 = \"C5\"\nr = 1\n",
        )
        .unwrap();
        assert_eq!(cfg.budget.max_nodes, Some(1000));
        assert_eq!(cfg.budget.max_seconds, None);
        assert_eq!(cfg.budget.face_cap, DEFAULT_FACE_CAP);
        assert_eq!(cfg.item_count(), 2);
        assert!(!cfg.theorem2[0].deep);
        assert!(matches!(SuiteConfig::parse("[[theorem2]]\nn = 1\n"), Err(Error::Parse { .. })));
        assert!(SuiteConfig::parse("[[bogus]]\nx = 1\n").is_err());
        let round = SuiteConfig::parse(&cfg.to_toml()).unwrap();
        assert_eq!(round, cfg);
    }

    #[test]
    fn item_errors_are_isolated() {
        let cfg = SuiteConfig::parse(
            "[[locjoin]]\ng1 = \"missing.dimacs\"\ng2 = \"K3\"\nr = 1\n\n[[eq1]]\nn = 1\nc = 3\nr = 1\n\n[[theorem2]]\nn = 1\nc = 2\nr = 1\n",
        )
        .unwrap();
        let entries = run_suite(&cfg, None).unwrap();
        assert_eq!(entries.len(), 3);
        assert_eq!(entries.iter().filter(|e| e.outcome.is_err()).count(), 2);
        assert_eq!(entries.iter().find(|e| e.name == "eq1_n1_c3_r1").unwrap().verdict(), Some(Verdict::Pass));
        assert!(summary_table(&entries).contains("error 2"));
    }

    #[test]
    fn graph_references() {
        let cfg = SuiteConfig::default();
        assert_eq!(cfg.resolve_graph("K4").unwrap().vertex_count(), 4);
        assert_eq!(cfg.resolve_graph("tower:2,3,1").unwrap().vertex_count(), 24);
        assert!(cfg.resolve_graph("tower:2,3").is_err());
        assert!(cfg.resolve_graph("tower:a,b,c").is_err());
    }

    #[test]
    fn writes_certificates_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = SuiteConfig::parse("[[eq1]]\nn = 2\nc = 3\nr = 1\n\n[[eq1]]\nn = 2\nc = 3\nr = 1\n").unwrap();
        let entries = run_suite(&cfg, Some(dir.path())).unwrap();
        assert_eq!(entries[1].name, "eq1_n2_c3_r1_2");
        let text = fs::read_to_string(dir.path().join("eq1_n2_c3_r1.json")).unwrap();
        assert_eq!(Certificate::from_json(&text).unwrap().verdict, Verdict::Pass);
        let summary = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
        assert!(summary.contains("total 2: pass 2"));
        assert_eq!(claims(&entries), vec![ClaimId::Eq1Count]);
    }
}
