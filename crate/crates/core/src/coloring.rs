//! Exact coloring by DSATUR branch and bound, plus the heuristic bounds and
//! the derived local quantities built on top of it.
//!
//! The search never overclaims: a `No` is returned only after the search
//! tree was exhausted, and a spent budget yields `Unknown`.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

const UNCOLORED: u32 = u32::MAX;

/// Node and wall-clock limits for one search; `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<u64>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes: Some(max_nodes), max_seconds: None }
    }

    fn meter(&self) -> Meter {
        Meter {
            max_nodes: self.max_nodes,
            deadline: self.max_seconds.map(|s| Instant::now() + Duration::from_secs(s)),
            nodes: 0,
        }
    }
}

struct Meter {
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    nodes: u64,
}

impl Meter {
    /// Charges one search node; false once the budget is spent.
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.max_nodes.is_some_and(|m| self.nodes > m) {
            return false;
        }
        if self.nodes.is_multiple_of(4096) {
            if let Some(deadline) = self.deadline {
                return Instant::now() < deadline;
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Colorability {
    /// Proper coloring with colors in `0..k`, indexed by vertex.
    Yes(Vec<u32>),
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KColorOutcome {
    pub answer: Colorability,
    pub nodes_explored: u64,
}

/// True iff every color is below `k` and no edge is monochromatic.
pub fn is_proper_coloring(g: &Graph, colors: &[u32], k: u32) -> bool {
    colors.len() == g.vertex_count()
        && colors.iter().all(|&c| c < k)
        && g.edges().all(|(u, v)| colors[u] != colors[v])
}

enum Step {
    Found,
    Refuted,
    Aborted,
}

struct DsaturSearch<'a> {
    g: &'a Graph,
    k: usize,
    active: Vec<bool>,
    color: Vec<u32>,
    /// `conflicts[v * k + c]`: colored neighbors of `v` holding color `c`.
    conflicts: Vec<u32>,
    saturation: Vec<u32>,
    free_degree: Vec<u32>,
    used: usize,
}

impl<'a> DsaturSearch<'a> {
    fn new(g: &'a Graph, k: usize, active: Vec<bool>) -> Self {
        let n = g.vertex_count();
        let free_degree = (0..n)
            .map(|v| g.neighbors(v).iter().filter(|&&w| active[w]).count() as u32)
            .collect();
        DsaturSearch {
            g,
            k,
            active,
            color: vec![UNCOLORED; n],
            conflicts: vec![0; n * k],
            saturation: vec![0; n],
            free_degree,
            used: 0,
        }
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = c as u32;
        let counted = self.active[v] as u32;
        for &w in self.g.neighbors(v) {
            let slot = &mut self.conflicts[w * self.k + c];
            if *slot == 0 {
                self.saturation[w] += 1;
            }
            *slot += 1;
            self.free_degree[w] -= counted;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.color[v] as usize;
        self.color[v] = UNCOLORED;
        let counted = self.active[v] as u32;
        for &w in self.g.neighbors(v) {
            let slot = &mut self.conflicts[w * self.k + c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[w] -= 1;
            }
            self.free_degree[w] += counted;
        }
    }

    fn pick(&self) -> usize {
        (0..self.color.len())
            .filter(|&v| self.active[v] && self.color[v] == UNCOLORED)
            .max_by_key(|&v| (self.saturation[v], self.free_degree[v], std::cmp::Reverse(v)))
            .expect("pick called with nothing left to color")
    }

    fn search(&mut self, remaining: usize, meter: &mut Meter) -> Step {
        if remaining == 0 {
            return Step::Found;
        }
        if !meter.tick() {
            return Step::Aborted;
        }
        let v = self.pick();
        if self.saturation[v] as usize >= self.k {
            return Step::Refuted;
        }
        // Colors at or above `used` are interchangeable: only the first
        // of them is tried.
        let limit = self.k.min(self.used + 1);
        for c in 0..limit {
            if self.conflicts[v * self.k + c] != 0 {
                continue;
            }
            let opened = c == self.used;
            if opened {
                self.used += 1;
            }
            self.assign(v, c);
            match self.search(remaining - 1, meter) {
                Step::Found => return Step::Found,
                Step::Aborted => return Step::Aborted,
                Step::Refuted => {}
            }
            self.unassign(v);
            if opened {
                self.used -= 1;
            }
        }
        Step::Refuted
    }
}

/// Repeatedly strips vertices of degree `< k`. Returns the core membership
/// mask and the stripped vertices in removal order.
fn peel(g: &Graph, k: usize) -> (Vec<bool>, Vec<usize>) {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut in_core = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] < k).collect();
    let mut removed = Vec::new();
    for &v in &stack {
        in_core[v] = false;
    }
    while let Some(v) = stack.pop() {
        removed.push(v);
        for &w in g.neighbors(v) {
            if in_core[w] {
                degree[w] -= 1;
                if degree[w] < k {
                    in_core[w] = false;
                    stack.push(w);
                }
            }
        }
    }
    (in_core, removed)
}

pub fn is_k_colorable(g: &Graph, k: u32, budget: SearchBudget) -> KColorOutcome {
    let mut meter = budget.meter();
    let answer = k_colorable_metered(g, k as usize, &mut meter);
    KColorOutcome { answer, nodes_explored: meter.nodes }
}

fn k_colorable_metered(g: &Graph, k: usize, meter: &mut Meter) -> Colorability {
    let n = g.vertex_count();
    if n == 0 {
        return Colorability::Yes(Vec::new());
    }
    if k == 0 {
        return Colorability::No;
    }
    let clique = greedy_clique(g);
    if clique.len() > k {
        return Colorability::No;
    }

    let (in_core, removed) = peel(g, k);
    let core_size = in_core.iter().filter(|&&b| b).count();
    let mut search = DsaturSearch::new(g, k, in_core);
    // Pinning a clique to colors 0..q only fixes a color permutation.
    let pinned: Vec<usize> = clique.iter().copied().filter(|&v| search.active[v]).collect();
    for &v in &pinned {
        let c = search.used;
        search.used += 1;
        search.assign(v, c);
    }
    let pinned = pinned.len();
    match search.search(core_size - pinned, meter) {
        Step::Aborted => return Colorability::Unknown,
        Step::Refuted => return Colorability::No,
        Step::Found => {}
    }
    // Every stripped vertex had fewer than k neighbors left at removal, so
    // coloring them in reverse order always finds a free color.
    for &v in removed.iter().rev() {
        let c = (0..k)
            .find(|&c| search.conflicts[v * k + c] == 0)
            .expect("peeled vertex has a free color");
        search.assign(v, c);
    }
    let colors = search.color;
    assert!(is_proper_coloring(g, &colors, k as u32), "solver produced an improper coloring");
    Colorability::Yes(colors)
}

/// Clique found by greedy extension from several high-degree seeds.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    if n == 0 {
        return Vec::new();
    }
    let mut seeds: Vec<usize> = (0..n).collect();
    seeds.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    seeds.truncate(128);

    let mut best = vec![seeds[0]];
    for &seed in &seeds {
        if g.degree(seed) < best.len() {
            continue;
        }
        let mut clique = vec![seed];
        let mut candidates: Vec<usize> = g.neighbors(seed).to_vec();
        while !candidates.is_empty() {
            let next = if candidates.len() <= 256 {
                *candidates
                    .iter()
                    .max_by_key(|&&u| {
                        let inside = candidates.iter().filter(|&&w| g.has_edge(u, w)).count();
                        (inside, std::cmp::Reverse(u))
                    })
                    .unwrap()
            } else {
                *candidates.iter().max_by_key(|&&u| (g.degree(u), std::cmp::Reverse(u))).unwrap()
            };
            clique.push(next);
            candidates.retain(|&w| w != next && g.has_edge(next, w));
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

pub fn clique_lower_bound(g: &Graph) -> u32 {
    greedy_clique(g).len() as u32
}

/// Greedy coloring along a smallest-last (degeneracy) order.
pub fn greedy_coloring(g: &Graph) -> Vec<u32> {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (degree[v], v)).unwrap();
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                degree[w] -= 1;
            }
        }
    }
    let mut colors = vec![UNCOLORED; n];
    let mut taken = Vec::new();
    for &v in order.iter().rev() {
        taken.clear();
        taken.extend(g.neighbors(v).iter().map(|&w| colors[w]).filter(|&c| c != UNCOLORED));
        taken.sort_unstable();
        taken.dedup();
        let c = taken.iter().enumerate().find(|&(i, &c)| i as u32 != c).map_or(taken.len(), |(i, _)| i);
        colors[v] = c as u32;
    }
    colors
}

pub fn greedy_bound(g: &Graph) -> u32 {
    greedy_coloring(g).iter().map(|&c| c + 1).max().unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChiStatus {
    Exact(u32),
    /// Budget ran out after proving `chi >= bound` by refutation.
    LowerOnly(u32),
    /// Budget ran out before any refutation; only heuristic bounds known.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringResult {
    pub status: ChiStatus,
    /// Best proper coloring found (uses `upper` colors).
    pub witness: Option<Vec<u32>>,
    pub lower: u32,
    pub upper: u32,
    pub nodes_explored: u64,
    /// Wall time spent, in milliseconds.
    pub budget_used: u64,
}

impl ColoringResult {
    pub fn exact(&self) -> Option<u32> {
        match self.status {
            ChiStatus::Exact(chi) => Some(chi),
            _ => None,
        }
    }
}

/// Exact chromatic number: scans `k` upward from the clique bound until a
/// coloring is found or the greedy bound is reached.
pub fn chromatic_number(g: &Graph, budget: SearchBudget) -> ColoringResult {
    let start = Instant::now();
    let mut meter = budget.meter();
    let mut witness = greedy_coloring(g);
    let mut upper = witness.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut lower = clique_lower_bound(g);
    let mut refuted_any = false;
    let mut status = None;

    let (first, last) = (lower, upper);
    for k in first..last {
        match k_colorable_metered(g, k as usize, &mut meter) {
            Colorability::Yes(colors) => {
                witness = colors;
                upper = k;
                status = Some(ChiStatus::Exact(k));
                break;
            }
            Colorability::No => {
                lower = k + 1;
                refuted_any = true;
            }
            Colorability::Unknown => {
                status = Some(if refuted_any { ChiStatus::LowerOnly(lower) } else { ChiStatus::Exhausted });
                break;
            }
        }
    }
    let status = status.unwrap_or(ChiStatus::Exact(upper));
    if let ChiStatus::Exact(chi) = status {
        lower = chi;
    }
    assert!(is_proper_coloring(g, &witness, upper.max(1)) || g.vertex_count() == 0);
    ColoringResult {
        status,
        witness: Some(witness),
        lower,
        upper,
        nodes_explored: meter.nodes,
        budget_used: start.elapsed().as_millis() as u64,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalChromatic {
    pub status: ChiStatus,
    /// Maximum over balls of the proven lower bounds.
    pub lower: u32,
    /// Maximum over balls of the upper bounds.
    pub upper: u32,
    /// A ball center attaining `lower`.
    pub center: Option<usize>,
    pub distinct_balls: usize,
    pub unresolved_balls: usize,
    pub nodes_explored: u64,
}

impl LocalChromatic {
    pub fn exact(&self) -> Option<u32> {
        match self.status {
            ChiStatus::Exact(v) => Some(v),
            _ => None,
        }
    }
}

/// Largest chromatic number of a radius-`r` ball. Balls with equal vertex
/// sets are solved once; the budget applies to each ball separately.
pub fn local_chromatic(g: &Graph, r: usize, budget: SearchBudget) -> LocalChromatic {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = LocalChromatic {
        status: ChiStatus::Exact(0),
        lower: 0,
        upper: 0,
        center: None,
        distinct_balls: 0,
        unresolved_balls: 0,
        nodes_explored: 0,
    };
    for v in 0..g.vertex_count() {
        let vertices = g.ball_vertices(v, r).expect("center in range");
        if !seen.insert(vertices.clone()) {
            continue;
        }
        out.distinct_balls += 1;
        let ball = g.induced_subgraph(&vertices).expect("ball vertices in range");
        let res = chromatic_number(&ball, budget);
        out.nodes_explored += res.nodes_explored;
        if res.exact().is_none() {
            out.unresolved_balls += 1;
        }
        if res.lower > out.lower || out.center.is_none() {
            out.lower = out.lower.max(res.lower);
            out.center = Some(v);
        }
        out.upper = out.upper.max(res.upper);
    }
    out.status = if out.unresolved_balls == 0 {
        ChiStatus::Exact(out.lower)
    } else if out.lower > 0 {
        ChiStatus::LowerOnly(out.lower)
    } else {
        ChiStatus::Exhausted
    };
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KstVerdict {
    Consistent,
    PremiseFails,
    Violation,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KstOutcome {
    pub verdict: KstVerdict,
    pub detail: String,
}

/// `floor(r / 2n)^n`, saturating at `u128::MAX`.
pub fn kst_size_bound(r: u64, n: u32) -> u128 {
    let base = (r / (2 * n as u64)) as u128;
    base.checked_pow(n).unwrap_or(u128::MAX)
}

/// Checks a graph against the upper bound `chi <= n(c-1)+1` that holds
/// whenever every radius-`r` ball is `c`-colorable and `|V| <= floor(r/2n)^n`.
pub fn kst_check(g: &Graph, r: u32, n: u32, c: u32, budget: SearchBudget) -> KstOutcome {
    let order = g.vertex_count() as u128;
    let size_bound = kst_size_bound(r as u64, n);
    if order > size_bound {
        return KstOutcome {
            verdict: KstVerdict::PremiseFails,
            detail: format!("|V| = {order} > floor({r}/{})^{n} = {size_bound}", 2 * n),
        };
    }
    let local = local_chromatic(g, r as usize, budget);
    if local.lower > c {
        return KstOutcome {
            verdict: KstVerdict::PremiseFails,
            detail: format!("local chromatic number at radius {r} is at least {} > {c}", local.lower),
        };
    }
    if local.exact().is_none() && local.upper > c {
        return KstOutcome {
            verdict: KstVerdict::Unknown,
            detail: format!("local chromatic number unresolved in [{}, {}]", local.lower, local.upper),
        };
    }
    let bound = n * c.saturating_sub(1) + 1;
    let chi = chromatic_number(g, budget);
    if chi.upper <= bound {
        KstOutcome {
            verdict: KstVerdict::Consistent,
            detail: format!("chi <= {} <= n(c-1)+1 = {bound}", chi.upper),
        }
    } else if chi.lower > bound {
        KstOutcome {
            verdict: KstVerdict::Violation,
            detail: format!("chi >= {} > n(c-1)+1 = {bound}", chi.lower),
        }
    } else {
        KstOutcome {
            verdict: KstVerdict::Unknown,
            detail: format!("chi unresolved in [{}, {}] around {bound}", chi.lower, chi.upper),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{complete_graph, cycle_graph};

    fn unlimited() -> SearchBudget {
        SearchBudget::unlimited()
    }

    #[test]
    fn k_colorability() {
        let k5 = complete_graph(5).unwrap();
        assert_eq!(is_k_colorable(&k5, 4, unlimited()).answer, Colorability::No);
        let c5 = cycle_graph(5).unwrap();
        match is_k_colorable(&c5, 3, unlimited()).answer {
            Colorability::Yes(colors) => assert!(is_proper_coloring(&c5, &colors, 3)),
            other => panic!("expected a coloring, got {other:?}"),
        }
        assert_eq!(is_k_colorable(&c5, 2, unlimited()).answer, Colorability::No);
        let empty = Graph::from_base_edges(0, &[]).unwrap();
        assert_eq!(is_k_colorable(&empty, 0, unlimited()).answer, Colorability::Yes(vec![]));
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        // C5 joined with C5 needs 6 colors but its largest clique has 4
        // vertices, so refuting 5 colors takes real search.
        let c5 = cycle_graph(5).unwrap();
        let g = crate::construct::star_join_quotient(&c5, &c5, 0).unwrap();
        let out = is_k_colorable(&g, 5, SearchBudget::nodes(1));
        assert_eq!(out.answer, Colorability::Unknown);
        let full = is_k_colorable(&g, 5, unlimited());
        assert_eq!(full.answer, Colorability::No);
        let chi = chromatic_number(&g, SearchBudget::nodes(1));
        assert!(chi.exact().is_none());
        assert!(chi.lower <= 6 && chi.upper >= 6);
    }

    #[test]
    fn chromatic_numbers() {
        for c in 1..=6 {
            let res = chromatic_number(&complete_graph(c).unwrap(), unlimited());
            assert_eq!(res.status, ChiStatus::Exact(c as u32));
        }
        let c7 = chromatic_number(&cycle_graph(7).unwrap(), unlimited());
        assert_eq!(c7.status, ChiStatus::Exact(3));
        assert!(is_proper_coloring(&cycle_graph(7).unwrap(), c7.witness.as_ref().unwrap(), 3));
    }

    #[test]
    fn greedy_bounds() {
        assert_eq!(greedy_bound(&complete_graph(4).unwrap()), 4);
        assert_eq!(greedy_bound(&cycle_graph(6).unwrap()), 2);
        let star = Graph::from_base_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(greedy_bound(&star), 2);
        assert_eq!(greedy_bound(&Graph::from_base_edges(3, &[]).unwrap()), 1);
    }

    #[test]
    fn clique_bounds() {
        assert_eq!(clique_lower_bound(&complete_graph(6).unwrap()), 6);
        assert_eq!(clique_lower_bound(&cycle_graph(5).unwrap()), 2);
        let k4_minus_edge =
            Graph::from_base_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(clique_lower_bound(&k4_minus_edge), 3);
    }

    #[test]
    fn local_chromatic_basics() {
        for c in 3..=5 {
            let res = local_chromatic(&complete_graph(c).unwrap(), 1, unlimited());
            assert_eq!(res.status, ChiStatus::Exact(c as u32));
            assert_eq!(res.distinct_balls, 1);
        }
        let c9 = cycle_graph(9).unwrap();
        for r in 1..=3 {
            assert_eq!(local_chromatic(&c9, r, unlimited()).status, ChiStatus::Exact(2));
        }
        assert_eq!(local_chromatic(&c9, 4, unlimited()).status, ChiStatus::Exact(3));
    }

    #[test]
    fn kst_examples() {
        let k3 = complete_graph(3).unwrap();
        assert_eq!(kst_check(&k3, 6, 1, 3, unlimited()).verdict, KstVerdict::Consistent);
        let c5 = cycle_graph(5).unwrap();
        assert_eq!(kst_check(&c5, 2, 1, 3, unlimited()).verdict, KstVerdict::PremiseFails);
        assert_eq!(kst_size_bound(1, 2), 0);
        assert_eq!(kst_size_bound(12, 2), 9);
    }
}
