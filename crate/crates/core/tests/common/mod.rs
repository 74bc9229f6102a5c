#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use starjoin::homology::{BettiVector, ChainComplex, FieldSpec};
use starjoin::{Graph, VertexLabel};

/// Random graph on `n` vertices with edge probability `p`; isolated
/// vertices get an edge to their successor.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    connect_isolated(n, edges)
}

pub fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    connect_isolated(n, edges)
}

fn connect_isolated(n: usize, mut edges: Vec<(usize, usize)>) -> Graph {
    for v in 0..n {
        if !edges.iter().any(|&(a, b)| a == v || b == v) {
            edges.push((v, (v + 1) % n));
        }
    }
    Graph::from_base_edges(n, &edges).unwrap()
}

/// Smallest `k` admitting a proper coloring, by exhaustive enumeration.
pub fn brute_chromatic(g: &Graph) -> u32 {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    for k in 1..=n as u32 {
        let mut colors = vec![0u32; n];
        loop {
            if edges.iter().all(|&(u, v)| colors[u] != colors[v]) {
                return k;
            }
            let mut i = 0;
            while i < n && colors[i] + 1 == k {
                colors[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            colors[i] += 1;
        }
    }
    unreachable!("n colors always suffice")
}

/// Breadth-first distances, written independently of the library.
pub fn bfs(g: &Graph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.vertex_count()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for v in 0..g.vertex_count() {
            if g.has_edge(u, v) && dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Radius-`r` local chromatic number via BFS balls and brute force.
pub fn brute_local_chromatic(g: &Graph, r: usize) -> u32 {
    (0..g.vertex_count())
        .map(|v| {
            let ball: Vec<usize> = bfs(g, v)
                .iter()
                .enumerate()
                .filter(|(_, d)| d.is_some_and(|d| d <= r))
                .map(|(u, _)| u)
                .collect();
            brute_chromatic(&g.induced_subgraph(&ball).unwrap())
        })
        .max()
        .unwrap_or(0)
}

/// Reduced Betti numbers of a join by the Kunneth formula over a field:
/// `b(K*L)_t = sum over i+j = t-1 of b(K)_i * b(L)_j`. Index 0 is dim -1.
pub fn kunneth_join(k: &BettiVector, l: &BettiVector) -> Vec<u64> {
    let mut out = vec![0u64; k.reduced.len() + l.reduced.len()];
    for (a, &x) in k.reduced.iter().enumerate() {
        for (b, &y) in l.reduced.iter().enumerate() {
            // dims a-1 and b-1 give t = a+b-1, stored at index a+b
            out[a + b] += x * y;
        }
    }
    out
}

/// Strips trailing zeros so Betti tables of different lengths compare.
pub fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Checks boundary-of-boundary vanishing and the reduced Euler relation
/// for every field given. Returns a description of the first violation.
pub fn chain_sanity(chain: &ChainComplex, fields: &[FieldSpec]) -> Result<(), String> {
    for k in 1..=chain.dim() {
        let prod = chain.boundary(k - 1).mul(&chain.boundary(k));
        if !prod.is_zero() {
            return Err(format!("boundary squared nonzero at {k}"));
        }
    }
    let chi: i64 = (-1..=chain.dim())
        .map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 } * chain.face_count(d) as i64)
        .sum();
    for &f in fields {
        let betti = chain.reduced_betti(f);
        if betti.reduced_euler() != chi {
            return Err(format!("euler mismatch over {f}: betti {} vs faces {chi}", betti.reduced_euler()));
        }
    }
    Ok(())
}

/// Neighbor label sets of the closed-form star-join, one per vertex label,
/// enumerated straight from the defining families.
pub fn closed_form_neighbors(g1: &Graph, g2: &Graph, s: u32, v: &VertexLabel) -> BTreeSet<String> {
    let n1 = |a: &VertexLabel| -> Vec<VertexLabel> {
        let i = g1.index_of(a).unwrap();
        g1.neighbors(i).iter().map(|&j| g1.label(j).clone()).collect()
    };
    let n2 = |b: &VertexLabel| -> Vec<VertexLabel> {
        let i = g2.index_of(b).unwrap();
        g2.neighbors(i).iter().map(|&j| g2.label(j).clone()).collect()
    };
    let mut out = BTreeSet::new();
    let mids = |a: &[VertexLabel], b: &[VertexLabel], levels: &[u32]| {
        let mut names = BTreeSet::new();
        for x in a {
            for y in b {
                for &l in levels {
                    names.insert(VertexLabel::mid(x, y, l).to_string());
                }
            }
        }
        names
    };
    match v {
        VertexLabel::Left(a) => {
            out.extend(n1(a).iter().map(|x| VertexLabel::left(x).to_string()));
            out.extend(mids(&n1(a), g2.labels(), &[1]));
        }
        VertexLabel::Right(b) => {
            out.extend(n2(b).iter().map(|y| VertexLabel::right(y).to_string()));
            out.extend(mids(g1.labels(), &n2(b), &[s]));
        }
        VertexLabel::Mid(a, b, i) => {
            let i = *i;
            let levels: Vec<u32> = (i.saturating_sub(1).max(1)..=(i + 1).min(s)).collect();
            out.extend(mids(&n1(a), &n2(b), &levels));
            if i == 1 {
                out.extend(n1(a).iter().map(|x| VertexLabel::left(x).to_string()));
            }
            if i == s {
                out.extend(n2(b).iter().map(|y| VertexLabel::right(y).to_string()));
            }
        }
        VertexLabel::Base(_) => panic!("base label in a join"),
    }
    out
}
