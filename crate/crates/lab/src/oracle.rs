//! Brute-force oracles for small instances.

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use treegraded::metric::Graph;
use treegraded::nagata::{Assembler, Variant};
use treegraded::{ChainPredicate, Color, Path, Vertex};

use crate::error::LabError;

/// Upper limit on enumerated geodesics per vertex.
const GEODESIC_CAP: usize = 1 << 16;
/// Upper limit on colorings searched by [`min_magnitude`].
const SEARCH_CAP: u64 = 50_000_000;

/// Distance matrix from one breadth-first search per vertex.
pub fn all_pairs(g: &Graph) -> Vec<Vec<u32>> {
    (0..g.vertex_count()).map(|v| g.bfs(v)).collect()
}

/// Largest distance inside a monochromatic chain component, with the
/// components found by merging every linked same-color pair.
pub fn brute_magnitude(dist: &[Vec<u32>], colors: &[Color], chain: ChainPredicate) -> (u32, Option<(Vertex, Vertex)>) {
    let n = colors.len();
    let mut uf = UnionFind::<usize>::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if colors[a] == colors[b] && chain.links(dist[a][b]) {
                uf.union(a, b);
            }
        }
    }
    let labels = uf.into_labeling();
    let mut best = (0, None);
    for a in 0..n {
        for b in a + 1..n {
            if labels[a] == labels[b] && dist[a][b] > best.0 {
                best = (dist[a][b], Some((a, b)));
            }
        }
    }
    best
}

/// Every vertex of `piece` nearest to `x`.
pub fn brute_projection(g: &Graph, piece: &[Vertex], x: Vertex) -> Vec<Vertex> {
    let dist = g.bfs(x);
    let best = piece.iter().map(|&v| dist[v]).min().unwrap_or(u32::MAX);
    piece.iter().copied().filter(|&v| dist[v] == best).collect()
}

/// All shortest paths from `from` to `to`, in lexicographic order.
pub fn all_geodesics(g: &Graph, from: Vertex, to: Vertex) -> Vec<Path> {
    let dist = g.bfs(from);
    let mut out = Vec::new();
    let mut stack = vec![to];
    walk_back(g, &dist, from, &mut stack, &mut out);
    out.sort();
    out.into_iter().map(|vertices| Path { vertices }).collect()
}

fn walk_back(g: &Graph, dist: &[u32], from: Vertex, stack: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
    let v = *stack.last().unwrap();
    if v == from {
        out.push(stack.iter().rev().copied().collect());
        return;
    }
    for &w in g.neighbors(v) {
        if out.len() >= GEODESIC_CAP {
            return;
        }
        if dist[w] + 1 == dist[v] {
            stack.push(w);
            walk_back(g, dist, from, stack, out);
            stack.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub vertex: Vertex,
    pub first: Vec<Vertex>,
    pub first_color: Color,
    pub second: Vec<Vertex>,
    pub second_color: Color,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub vertices: usize,
    pub geodesics: usize,
    pub disagreements: Vec<Disagreement>,
}

/// Evaluates the assembled coloring formula along every geodesic from the
/// base point to every vertex and compares the results.
pub fn geodesic_invariance(asm: &Assembler<'_>, max_vertices: usize) -> Result<InvarianceReport, LabError> {
    let g = asm.gs.graph();
    if g.vertex_count() > max_vertices {
        return Err(LabError::TooLarge { vertices: g.vertex_count(), max: max_vertices });
    }
    let mut report = InvarianceReport { invariant: true, vertices: g.vertex_count(), geodesics: 0, disagreements: Vec::new() };
    for x in 0..g.vertex_count() {
        let geodesics = all_geodesics(g, asm.gs.basepoint(), x);
        report.geodesics += geodesics.len();
        let colored: Vec<(Vec<Vertex>, Color)> = geodesics
            .into_iter()
            .map(|p| {
                let c = asm.evaluate(&asm.trace_along(p.clone()), Variant::Cstar).total;
                (p.vertices, c)
            })
            .collect();
        if let Some((other, c)) = colored.iter().find(|(_, c)| *c != colored[0].1) {
            report.invariant = false;
            report.disagreements.push(Disagreement {
                vertex: x,
                first: colored[0].0.clone(),
                first_color: colored[0].1,
                second: other.clone(),
                second_color: *c,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinMagnitude {
    pub magnitude: u32,
    /// A coloring attaining the minimum.
    pub coloring: Vec<Color>,
    pub searched: u64,
}

/// Exact minimum magnitude over all colorings with `n + 1` colors.
/// Vertex 0 is pinned to color 0, which loses nothing up to relabeling.
pub fn min_magnitude(g: &Graph, n: u32, chain: ChainPredicate, max_vertices: usize) -> Result<MinMagnitude, LabError> {
    let v = g.vertex_count();
    if v > max_vertices {
        return Err(LabError::TooLarge { vertices: v, max: max_vertices });
    }
    let k = u64::from(n) + 1;
    let total = u32::try_from(v - 1)
        .ok()
        .and_then(|e| k.checked_pow(e))
        .filter(|&t| t <= SEARCH_CAP)
        .ok_or_else(|| LabError::Config(format!("{k}^{} colorings exceed the search limit", v - 1)))?;
    let dist = all_pairs(g);
    let decode = |mut idx: u64| -> Vec<Color> {
        let mut colors = vec![0; v];
        for c in colors.iter_mut().skip(1) {
            *c = (idx % k) as Color;
            idx /= k;
        }
        colors
    };
    let (magnitude, best) = (0..total)
        .into_par_iter()
        .map(|idx| (brute_magnitude(&dist, &decode(idx), chain).0, idx))
        .min()
        .expect("at least one coloring");
    Ok(MinMagnitude { magnitude, coloring: decode(best), searched: total })
}
