//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use treegraded::forge::{gen_random, ForgeSpec};
use treegraded::{Graph, Space};

pub const INF: u32 = u32::MAX / 4;

/// All-pairs distances by Floyd-Warshall over the edge list.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut d = vec![vec![INF; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (u, v) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Chain components of `subset` by repeated pairwise merging, parts sorted
/// internally and by least element.
pub fn brute_components(d: &[Vec<u32>], subset: &[usize], reach: u32) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..subset.len()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..subset.len() {
            for j in 0..subset.len() {
                if d[subset[i]][subset[j]] <= reach && label[j] > label[i] {
                    label[j] = label[i];
                    changed = true;
                }
            }
        }
    }
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = label.clone();
    roots.sort_unstable();
    roots.dedup();
    for root in roots {
        let mut part: Vec<usize> = (0..subset.len()).filter(|&i| label[i] == root).map(|i| subset[i]).collect();
        part.sort_unstable();
        parts.push(part);
    }
    parts.sort();
    parts
}

/// Largest pairwise distance over monochromatic chain components.
pub fn brute_magnitude(d: &[Vec<u32>], colors: &[u32], reach: u32) -> u32 {
    let mut palette: Vec<u32> = colors.to_vec();
    palette.sort_unstable();
    palette.dedup();
    let mut worst = 0;
    for c in palette {
        let class: Vec<usize> = (0..colors.len()).filter(|&v| colors[v] == c).collect();
        for part in brute_components(d, &class, reach) {
            for &a in &part {
                for &b in &part {
                    worst = worst.max(d[a][b]);
                }
            }
        }
    }
    worst
}

/// Connected graph from a parent sequence (`parents[i] < i + 1`) plus extra
/// edges; self loops and repeats among the extras are dropped.
pub fn connected_graph(parents: &[usize], extra: &[(usize, usize)]) -> Graph {
    let n = parents.len() + 1;
    let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p % (i + 1), i + 1)).collect();
    for &(a, b) in extra {
        let (a, b) = (a % n, b % n);
        if a != b {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::new(n, &edges).unwrap()
}

pub fn mixed_spec(budget: usize, seed: u64) -> ForgeSpec {
    ForgeSpec {
        templates: ["path:5@2", "cycle:6@2", "grid:3x4@1", "tree:2@1"].iter().map(|t| t.parse().unwrap()).collect(),
        piece_budget: budget,
        max_tree_depth: 6,
        attach_spacing: 2,
        branch_cap: 2,
        seed,
        subdivide: 1,
    }
}

pub fn small_space(budget: usize, seed: u64) -> Space {
    gen_random(&mixed_spec(budget, seed)).unwrap()
}
