//! Complete graphs, the star-join `G1 *_s G2`, and iterated towers.
//!
//! The star-join is built twice: [`star_join_quotient`] follows the
//! definition (layered product graph, then merge the bottom and top layers)
//! and [`star_join_direct`] writes down the merged graph's adjacency in
//! closed form. Both emit vertices in the same order: `Left(g1)` for every
//! `g1`, then `Mid(g1, g2, level)` level by level (`g1`-major), then
//! `Right(g2)` for every `g2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexLabel};

/// Parameters of the tower `G_n`: height `n`, clique size `c`, locality
/// radius `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TowerParams {
    pub n: u32,
    pub c: u32,
    pub r: u32,
}

impl TowerParams {
    pub fn new(n: u32, c: u32, r: u32) -> Result<Self> {
        let p = TowerParams { n, c, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.c < 3 || self.r < 1 {
            return Err(Error::InvalidInput(format!(
                "tower parameters need n >= 1, c >= 3, r >= 1 (got n={}, c={}, r={})",
                self.n, self.c, self.r
            )));
        }
        Ok(())
    }

    /// `n(c-1)`, the number of colors the tower must not admit.
    pub fn refuted_colors(&self) -> u32 {
        self.n * (self.c - 1)
    }

    /// Dimension of the sphere whose homology `N(G_n)` should carry.
    pub fn sphere_dim(&self) -> i32 {
        (self.n * (self.c - 1)) as i32 - 1
    }
}

pub fn complete_graph(c: usize) -> Result<Graph> {
    if c < 1 {
        return Err(Error::InvalidInput("complete graph needs at least one vertex".into()));
    }
    let edges: Vec<_> = (0..c).flat_map(|i| (i + 1..c).map(move |j| (i, j))).collect();
    Graph::from_base_edges(c, &edges)
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidInput("cycle needs at least three vertices".into()));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_base_edges(n, &edges)
}

pub fn path_graph(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidInput("path needs at least one vertex".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_base_edges(n, &edges)
}

/// Resolves family names `K<n>`, `C<n>` and `P<n>` (complete, cycle, path).
pub fn named_graph(name: &str) -> Option<Result<Graph>> {
    let (family, size) = name.split_at(name.char_indices().nth(1)?.0);
    let size: usize = size.parse().ok()?;
    match family {
        "K" => Some(complete_graph(size)),
        "C" => Some(cycle_graph(size)),
        "P" => Some(path_graph(size)),
        _ => None,
    }
}

/// Index layout shared by both star-join constructions.
struct JoinLayout {
    n1: usize,
    n2: usize,
    s: usize,
}

impl JoinLayout {
    fn left(&self, g1: usize) -> usize {
        g1
    }

    fn mid(&self, g1: usize, g2: usize, level: usize) -> usize {
        debug_assert!((1..=self.s).contains(&level));
        self.n1 + (level - 1) * self.n1 * self.n2 + g1 * self.n2 + g2
    }

    fn right(&self, g2: usize) -> usize {
        self.n1 + self.s * self.n1 * self.n2 + g2
    }

    fn vertex_count(&self) -> usize {
        self.s * self.n1 * self.n2 + self.n1 + self.n2
    }

    /// Image of the layered vertex `(g1, g2, level)` after merging.
    fn merged(&self, g1: usize, g2: usize, level: usize) -> usize {
        if level == 0 {
            self.left(g1)
        } else if level == self.s + 1 {
            self.right(g2)
        } else {
            self.mid(g1, g2, level)
        }
    }

    fn labels(&self, g1: &Graph, g2: &Graph) -> Vec<VertexLabel> {
        let mut labels = Vec::with_capacity(self.vertex_count());
        labels.extend(g1.labels().iter().map(VertexLabel::left));
        for level in 1..=self.s {
            for a in g1.labels() {
                for b in g2.labels() {
                    labels.push(VertexLabel::mid(a, b, level as u32));
                }
            }
        }
        labels.extend(g2.labels().iter().map(VertexLabel::right));
        labels
    }
}

/// Star-join by definition: the layered graph on `V1 x V2 x {0..s+1}`
/// (edges need adjacency in both coordinates and levels at most one apart),
/// with level 0 collapsed along `V2` and level `s+1` collapsed along `V1`.
pub fn star_join_quotient(g1: &Graph, g2: &Graph, s: usize) -> Result<Graph> {
    g1.require_no_isolated("first star-join operand")?;
    g2.require_no_isolated("second star-join operand")?;
    let layout = JoinLayout { n1: g1.vertex_count(), n2: g2.vertex_count(), s };
    let top = s + 1;

    let mut edges = Vec::new();
    for a in 0..layout.n1 {
        for &a2 in g1.neighbors(a) {
            for b in 0..layout.n2 {
                for &b2 in g2.neighbors(b) {
                    for level in 0..=top {
                        // Same-level pairs appear once per orientation;
                        // cross-level pairs once overall.
                        let u = layout.merged(a, b, level);
                        for next in [level, level + 1] {
                            if next > top {
                                continue;
                            }
                            let v = layout.merged(a2, b2, next);
                            if u != v {
                                edges.push((u.min(v), u.max(v)));
                            }
                        }
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::new(layout.labels(g1, g2), edges)
}

/// Star-join from the closed-form neighborhoods of the merged graph
/// (`s >= 2` only; smaller `s` must go through [`star_join_quotient`]).
pub fn star_join_direct(g1: &Graph, g2: &Graph, s: usize) -> Result<Graph> {
    if s < 2 {
        return Err(Error::Unsupported(format!(
            "closed-form star-join needs s >= 2 (got {s}); use the quotient construction"
        )));
    }
    g1.require_no_isolated("first star-join operand")?;
    g2.require_no_isolated("second star-join operand")?;
    let layout = JoinLayout { n1: g1.vertex_count(), n2: g2.vertex_count(), s };
    let mut edges = Vec::new();

    // Bottom copy of G1 and its links into level 1.
    for (a, a2) in g1.edges() {
        edges.push((layout.left(a), layout.left(a2)));
    }
    for a in 0..layout.n1 {
        for &a2 in g1.neighbors(a) {
            for b in 0..layout.n2 {
                edges.push((layout.left(a), layout.mid(a2, b, 1)));
            }
        }
    }
    // Middle levels: tensor-product adjacency within and between levels.
    for (a, a2) in (0..layout.n1).flat_map(|a| g1.neighbors(a).iter().map(move |&x| (a, x))) {
        for (b, b2) in (0..layout.n2).flat_map(|b| g2.neighbors(b).iter().map(move |&x| (b, x))) {
            for level in 1..=s {
                edges.push((layout.mid(a, b, level), layout.mid(a2, b2, level)));
                if level < s {
                    edges.push((layout.mid(a, b, level), layout.mid(a2, b2, level + 1)));
                }
            }
        }
    }
    // Top copy of G2 and its links into level s.
    for (b, b2) in g2.edges() {
        edges.push((layout.right(b), layout.right(b2)));
    }
    for b in 0..layout.n2 {
        for &b2 in g2.neighbors(b) {
            for a in 0..layout.n1 {
                edges.push((layout.right(b), layout.mid(a, b2, s)));
            }
        }
    }
    Graph::new(layout.labels(g1, g2), edges)
}

/// `G_1 = K_c`, `G_k = G_{k-1} *_{2r} K_c`.
pub fn tower(p: TowerParams) -> Result<Graph> {
    p.validate()?;
    let clique = complete_graph(p.c as usize)?;
    let mut g = clique.clone();
    for _ in 2..=p.n {
        g = star_join_quotient(&g, &clique, 2 * p.r as usize)?;
    }
    Ok(g)
}

/// `((2rc + 1)^n - 1) / (2r)` in exact integer arithmetic.
pub fn expected_tower_order(p: TowerParams) -> Result<u128> {
    p.validate()?;
    let base = 2 * p.r as u128 * p.c as u128 + 1;
    let power = base
        .checked_pow(p.n)
        .ok_or_else(|| Error::InvalidInput(format!("tower order overflows for {p:?}")))?;
    let denom = 2 * p.r as u128;
    let numer = power - 1;
    assert_eq!(numer % denom, 0, "tower order must divide exactly");
    Ok(numer / denom)
}
