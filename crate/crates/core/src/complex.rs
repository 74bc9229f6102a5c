//! Finite abstract simplicial complexes stored by their maximal faces.
//!
//! A face is a sorted list of universe indices, and faces compare
//! lexicographically, which is the canonical order used everywhere
//! (enumeration, boundary matrices, files). The empty face always belongs to
//! the complex: the complex with an empty universe is `{∅}`, not the void
//! complex.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub type Face = Vec<u32>;

/// Default bound on the number of faces materialized by one enumeration.
pub const DEFAULT_FACE_CAP: usize = 5_000_000;

/// Enumeration refuses to start when the overlap-blind estimate exceeds the
/// cap by more than this factor.
const ESTIMATE_SLACK: u128 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    universe: Vec<String>,
    maximal: Vec<Face>,
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

/// Keeps the containment-maximal faces, deduplicated, in canonical order.
fn antichain(mut faces: Vec<Face>) -> Vec<Face> {
    for f in &mut faces {
        f.sort_unstable();
        f.dedup();
    }
    faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    faces.dedup();
    let mut kept: Vec<Face> = Vec::new();
    for f in faces {
        if !kept.iter().any(|k| is_subset(&f, k)) {
            kept.push(f);
        }
    }
    kept.sort();
    kept
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

impl SimplicialComplex {
    /// Builds the complex generated by `faces` (any set system over
    /// `0..universe.len()`); containment-redundant faces are dropped.
    /// Every universe vertex must occur in some face.
    pub fn from_faces(universe: Vec<String>, faces: Vec<Face>) -> Result<Self> {
        let n = universe.len();
        let mut seen_labels = HashSet::new();
        for label in &universe {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(Error::InvalidInput(format!("bad complex vertex label {label:?}")));
            }
            if !seen_labels.insert(label) {
                return Err(Error::InvalidInput(format!("duplicate complex vertex {label}")));
            }
        }
        let mut covered = vec![false; n];
        for f in &faces {
            for &v in f {
                let slot = covered
                    .get_mut(v as usize)
                    .ok_or_else(|| Error::UnknownVertex(format!("index {v} (universe has {n})")))?;
                *slot = true;
            }
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return Err(Error::InvalidInput(format!(
                "universe vertex {} lies in no face",
                universe[v]
            )));
        }
        let mut maximal = antichain(faces);
        if maximal.is_empty() {
            maximal.push(Vec::new());
        }
        Ok(SimplicialComplex { universe, maximal })
    }

    /// The complex `{∅}` on an empty universe.
    pub fn empty() -> Self {
        SimplicialComplex { universe: Vec::new(), maximal: vec![Vec::new()] }
    }

    /// The full simplex on the given vertices.
    pub fn simplex(labels: &[&str]) -> Result<Self> {
        let universe: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let face = (0..universe.len() as u32).collect();
        SimplicialComplex::from_faces(universe, vec![face])
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn maximal_faces(&self) -> &[Face] {
        &self.maximal
    }

    /// Dimension; `-1` for `{∅}`.
    pub fn dim(&self) -> i32 {
        self.maximal.iter().map(Vec::len).max().unwrap_or(0) as i32 - 1
    }

    pub fn contains_face(&self, face: &[u32]) -> bool {
        self.maximal.iter().any(|m| is_subset(face, m))
    }

    /// Upper bound on the number of `k`-faces, ignoring overlaps.
    pub fn estimate_faces(&self, k: i32) -> u128 {
        if k < 0 {
            return 1;
        }
        self.maximal
            .iter()
            .map(|m| binomial(m.len(), k as usize + 1))
            .fold(0u128, u128::saturating_add)
    }

    /// All `k`-faces in canonical order. Fails loudly, never truncating,
    /// when more than `cap` faces would be produced.
    pub fn faces_of_dim(&self, k: usize, cap: usize) -> Result<Vec<Face>> {
        let size = k + 1;
        let estimate = self.estimate_faces(k as i32);
        if estimate > cap as u128 * ESTIMATE_SLACK {
            return Err(Error::Resource {
                what: format!("enumerating {k}-faces (overlap-blind estimate)"),
                needed: estimate,
                cap: cap as u128,
            });
        }
        let mut faces: HashSet<Face> = HashSet::new();
        let mut combo = Vec::with_capacity(size);
        for m in self.maximal.iter().filter(|m| m.len() >= size) {
            if m.len() == size {
                faces.insert(m.clone());
            } else {
                subsets_of_size(m, size, 0, &mut combo, &mut faces);
            }
            if faces.len() > cap {
                return Err(Error::Resource {
                    what: format!("enumerating {k}-faces"),
                    needed: faces.len() as u128,
                    cap: cap as u128,
                });
            }
        }
        let mut faces: Vec<Face> = faces.into_iter().collect();
        faces.sort_unstable();
        Ok(faces)
    }

    /// `counts[k]` is the number of `k`-faces, for `k` in `0..=dim`.
    pub fn f_vector(&self, cap: usize) -> Result<Vec<u64>> {
        (0..=self.dim())
            .map(|k| self.faces_of_dim(k as usize, cap).map(|f| f.len() as u64))
            .collect()
    }

    pub fn euler_characteristic(&self, cap: usize) -> Result<i64> {
        Ok(self
            .f_vector(cap)?
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum())
    }

    /// Text form: a `universe:` line, then one maximal face per line
    /// (space-separated labels; `{}` for the empty face).
    pub fn to_text(&self) -> String {
        let mut out = String::from("universe:");
        for label in &self.universe {
            out.push(' ');
            out.push_str(label);
        }
        out.push('\n');
        for face in &self.maximal {
            if face.is_empty() {
                out.push_str("{}");
            } else {
                let labels: Vec<&str> = face.iter().map(|&v| self.universe[v as usize].as_str()).collect();
                out.push_str(&labels.join(" "));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (first_no, first) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 0, msg: "missing universe line".into() })?;
        let rest = first.trim().strip_prefix("universe:").ok_or_else(|| Error::Parse {
            line: first_no + 1,
            msg: "expected 'universe:'".into(),
        })?;
        let universe: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        let position: std::collections::HashMap<&str, u32> =
            universe.iter().enumerate().map(|(i, s)| (s.as_str(), i as u32)).collect();
        let mut faces = Vec::new();
        for (lineno, line) in lines {
            let line = line.trim();
            if line == "{}" {
                faces.push(Vec::new());
                continue;
            }
            let face = line
                .split_whitespace()
                .map(|label| {
                    position.get(label).copied().ok_or_else(|| Error::Parse {
                        line: lineno + 1,
                        msg: format!("label {label:?} not in universe"),
                    })
                })
                .collect::<Result<Face>>()?;
            faces.push(face);
        }
        SimplicialComplex::from_faces(universe, faces)
    }

    /// Short human-readable summary.
    pub fn describe(&self) -> String {
        format!(
            "{} vertices, {} maximal faces, dim {}",
            self.universe.len(),
            self.maximal.len(),
            self.dim()
        )
    }
}

fn subsets_of_size(
    from: &[u32],
    size: usize,
    start: usize,
    combo: &mut Vec<u32>,
    out: &mut HashSet<Face>,
) {
    if combo.len() == size {
        out.insert(combo.clone());
        return;
    }
    let needed = size - combo.len();
    for i in start..=from.len() - needed {
        combo.push(from[i]);
        subsets_of_size(from, size, i + 1, combo, out);
        combo.pop();
    }
}

/// Complex generated by the open neighborhoods of `g`'s vertices: a vertex
/// set is a face iff its members have a common neighbor.
pub fn neighborhood_complex(g: &Graph) -> Result<SimplicialComplex> {
    g.require_no_isolated("graph")?;
    let universe = g.labels().iter().map(ToString::to_string).collect();
    let faces = (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().map(|&w| w as u32).collect())
        .collect();
    SimplicialComplex::from_faces(universe, faces)
}

/// Join on the tagged disjoint union: `K`'s vertices get a `0:` prefix and
/// `L`'s a `1:` prefix; faces are unions of a face of each.
pub fn join_complex(k: &SimplicialComplex, l: &SimplicialComplex) -> SimplicialComplex {
    let offset = k.universe.len() as u32;
    let universe = k
        .universe
        .iter()
        .map(|s| format!("0:{s}"))
        .chain(l.universe.iter().map(|s| format!("1:{s}")))
        .collect();
    let mut maximal = Vec::with_capacity(k.maximal.len() * l.maximal.len());
    for a in &k.maximal {
        for b in &l.maximal {
            let mut face = a.clone();
            face.extend(b.iter().map(|&v| v + offset));
            maximal.push(face);
        }
    }
    // Products of maximal faces form an antichain already.
    maximal.sort();
    SimplicialComplex { universe, maximal }
}
