//! Unit-length graph metric: distances, canonical geodesics, balls,
//! scale components and diameters.

use std::collections::VecDeque;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;

pub type Vertex = usize;

/// Distance value for vertices not reached by a traversal.
pub const UNREACHED: u32 = u32::MAX;

/// A finite connected simple graph with unit edge lengths.
///
/// Adjacency is stored in compressed form with every neighbor list sorted
/// ascending, which makes all traversals deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicate edges, out-of-range ids and
    /// disconnected inputs.
    pub fn new(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        let mut degree = vec![0usize; vertex_count];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::UnknownVertex(w));
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[vertex_count]];
        for &(u, v) in edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..vertex_count {
            let list = &mut targets[offsets[v]..offsets[v + 1]];
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(v.min(w[0]), v.max(w[0])));
            }
        }
        let graph = Graph { offsets, targets };
        let dist = graph.bfs(0);
        if let Some(v) = dist.iter().position(|&d| d == UNREACHED) {
            return Err(GraphError::Disconnected(v));
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Index of the first arc leaving `v`; arcs of `v` occupy
    /// `arc_start(v)..arc_start(v) + degree(v)`, in neighbor order.
    pub fn arc_start(&self, v: Vertex) -> usize {
        self.offsets[v]
    }

    /// Arc index of the directed edge `u -> v`, if the edge exists.
    pub fn arc(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|i| self.offsets[u] + i)
    }

    pub fn arc_count(&self) -> usize {
        self.targets.len()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.arc(u, v).is_some()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    /// Breadth-first distances from `source` to every vertex.
    pub fn bfs(&self, source: Vertex) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &w in self.neighbors(u) {
                if dist[w] == UNREACHED {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices within `radius` of `source` with their distances, in
    /// breadth-first order (non-decreasing distance).
    pub fn bfs_within(&self, source: Vertex, radius: u32) -> Vec<(Vertex, u32)> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = vec![(source, 0)];
        seen[source] = true;
        let mut head = 0;
        while head < out.len() {
            let (u, d) = out[head];
            head += 1;
            if d == radius {
                continue;
            }
            for &w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    out.push((w, d + 1));
                }
            }
        }
        out
    }

    /// Bounded traversal from several sources at once. Entries are
    /// `(vertex, distance, index into sources of a closest source)`.
    pub fn multi_source_bfs(&self, sources: &[Vertex], radius: u32) -> Vec<(Vertex, u32, usize)> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::with_capacity(sources.len());
        for (i, &s) in sources.iter().enumerate() {
            if !seen[s] {
                seen[s] = true;
                out.push((s, 0, i));
            }
        }
        let mut head = 0;
        while head < out.len() {
            let (u, d, origin) = out[head];
            head += 1;
            if d == radius {
                continue;
            }
            for &w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    out.push((w, d + 1, origin));
                }
            }
        }
        out
    }
}

/// Reusable scratch space for many small bounded traversals of one graph.
pub struct Balls<'g> {
    g: &'g Graph,
    mark: Vec<u32>,
    epoch: u32,
    out: Vec<(Vertex, u32)>,
}

impl<'g> Balls<'g> {
    pub fn new(g: &'g Graph) -> Self {
        Balls { g, mark: vec![0; g.vertex_count()], epoch: 0, out: Vec::new() }
    }

    /// Closed ball around `center` in breadth-first order, with distances.
    pub fn ball(&mut self, center: Vertex, radius: u32) -> &[(Vertex, u32)] {
        self.epoch += 1;
        if self.epoch == u32::MAX {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.out.clear();
        self.out.push((center, 0));
        self.mark[center] = epoch;
        let mut head = 0;
        while head < self.out.len() {
            let (u, d) = self.out[head];
            head += 1;
            if d == radius {
                continue;
            }
            for &w in self.g.neighbors(u) {
                if self.mark[w] != epoch {
                    self.mark[w] = epoch;
                    self.out.push((w, d + 1));
                }
            }
        }
        &self.out
    }
}

/// A walk through consecutive adjacent vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub vertices: Vec<Vertex>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    pub fn is_walk_in(&self, g: &Graph) -> bool {
        self.vertices.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainMode {
    /// Consecutive chain points at distance `< r`.
    Strict,
    /// Consecutive chain points at distance `<= r`.
    Weak,
}

impl std::str::FromStr for ChainMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(ChainMode::Strict),
            "weak" => Ok(ChainMode::Weak),
            other => Err(format!("unknown chain mode `{other}` (expected strict or weak)")),
        }
    }
}

/// Which point pairs may be consecutive in an r-scale chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainPredicate {
    pub mode: ChainMode,
    pub r: u32,
}

impl ChainPredicate {
    pub fn strict(r: u32) -> Self {
        ChainPredicate { mode: ChainMode::Strict, r }
    }

    pub fn weak(r: u32) -> Self {
        ChainPredicate { mode: ChainMode::Weak, r }
    }

    /// Largest distance a single chain step may span.
    pub fn reach(&self) -> u32 {
        match self.mode {
            ChainMode::Strict => self.r.saturating_sub(1),
            ChainMode::Weak => self.r,
        }
    }

    pub fn links(&self, d: u32) -> bool {
        d <= self.reach()
    }
}

pub fn shortest_dist(g: &Graph, u: Vertex, v: Vertex) -> Result<u32, GraphError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Ok(0);
    }
    let mut dist = vec![UNREACHED; g.vertex_count()];
    let mut queue = VecDeque::from([u]);
    dist[u] = 0;
    while let Some(a) = queue.pop_front() {
        for &b in g.neighbors(a) {
            if dist[b] == UNREACHED {
                dist[b] = dist[a] + 1;
                if b == v {
                    return Ok(dist[b]);
                }
                queue.push_back(b);
            }
        }
    }
    unreachable!("graph is connected")
}

/// Breadth-first tree of canonical geodesics from one root: the parent of a
/// vertex is its smallest-id neighbor one step closer to the root.
#[derive(Debug, Clone)]
pub struct GeodesicTree {
    root: Vertex,
    dist: Vec<u32>,
    parent: Vec<Vertex>,
}

impl GeodesicTree {
    pub fn new(g: &Graph, root: Vertex) -> Result<Self, GraphError> {
        g.check_vertex(root)?;
        let dist = g.bfs(root);
        let parent = (0..g.vertex_count())
            .map(|v| {
                if v == root {
                    v
                } else {
                    *g.neighbors(v)
                        .iter()
                        .find(|&&w| dist[w] + 1 == dist[v])
                        .expect("connected graph")
                }
            })
            .collect();
        Ok(GeodesicTree { root, dist, parent })
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn dist(&self, v: Vertex) -> u32 {
        self.dist[v]
    }

    pub fn distances(&self) -> &[u32] {
        &self.dist
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        (v != self.root).then(|| self.parent[v])
    }

    /// The canonical geodesic from the root to `v`.
    pub fn path_to(&self, v: Vertex) -> Path {
        let mut vertices = Vec::with_capacity(self.dist[v] as usize + 1);
        let mut cur = v;
        vertices.push(cur);
        while cur != self.root {
            cur = self.parent[cur];
            vertices.push(cur);
        }
        vertices.reverse();
        Path { vertices }
    }
}

/// Deterministic shortest path from `u` to `v`: breadth-first from `u`,
/// each vertex reached through its smallest-id predecessor.
pub fn canonical_geodesic(g: &Graph, u: Vertex, v: Vertex) -> Result<Path, GraphError> {
    g.check_vertex(v)?;
    Ok(GeodesicTree::new(g, u)?.path_to(v))
}

/// Closed ball, sorted ascending.
pub fn ball(g: &Graph, center: Vertex, radius: u32) -> Result<Vec<Vertex>, GraphError> {
    g.check_vertex(center)?;
    let mut out: Vec<Vertex> = g.bfs_within(center, radius).into_iter().map(|(v, _)| v).collect();
    out.sort_unstable();
    Ok(out)
}

/// Partition of `subset` into maximal chain-connected parts, with distances
/// measured in `g`. Parts are sorted internally and ordered by their least
/// element.
pub fn scale_components(g: &Graph, subset: &[Vertex], pred: ChainPredicate) -> Vec<Vec<Vertex>> {
    let n = g.vertex_count();
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in subset.iter().enumerate() {
        slot[v] = i;
    }
    let mut uf = UnionFind::<usize>::new(subset.len());
    let reach = pred.reach();
    let mut balls = Balls::new(g);
    for (i, &v) in subset.iter().enumerate() {
        for &(w, _) in balls.ball(v, reach) {
            let j = slot[w];
            if j != usize::MAX && j > i {
                uf.union(i, j);
            }
        }
    }
    group_by_root(subset, |i| uf.find(i))
}

pub(crate) fn group_by_root(subset: &[Vertex], mut root: impl FnMut(usize) -> usize) -> Vec<Vec<Vertex>> {
    let mut index_of_root = std::collections::HashMap::new();
    let mut parts: Vec<Vec<Vertex>> = Vec::new();
    for (i, &v) in subset.iter().enumerate() {
        let k = *index_of_root.entry(root(i)).or_insert_with(|| {
            parts.push(Vec::new());
            parts.len() - 1
        });
        parts[k].push(v);
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    parts.sort_unstable_by_key(|p| p[0]);
    parts
}

/// Diameter of a vertex set with one pair realizing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diameter {
    pub value: u32,
    pub witness: (Vertex, Vertex),
}

/// Maximum pairwise ambient distance within `subset`.
pub fn set_diameter(g: &Graph, subset: &[Vertex]) -> Result<Diameter, GraphError> {
    let first = *subset.first().ok_or(GraphError::EmptySubset)?;
    for &v in subset {
        g.check_vertex(v)?;
    }
    let mut member = vec![false; g.vertex_count()];
    let mut distinct = 0usize;
    for &v in subset {
        if !member[v] {
            member[v] = true;
            distinct += 1;
        }
    }
    let mut best = Diameter { value: 0, witness: (first, first) };
    let mut dist = vec![UNREACHED; g.vertex_count()];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for &s in subset {
        // Distances from s until every member is settled.
        for &t in &touched {
            dist[t] = UNREACHED;
        }
        touched.clear();
        queue.clear();
        dist[s] = 0;
        touched.push(s);
        queue.push_back(s);
        let mut found = 1;
        let mut far = (0, s);
        'bfs: while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if dist[w] == UNREACHED {
                    dist[w] = dist[u] + 1;
                    touched.push(w);
                    if member[w] {
                        found += 1;
                        far = (dist[w], w);
                        if found == distinct {
                            break 'bfs;
                        }
                    }
                    queue.push_back(w);
                }
            }
        }
        if far.0 > best.value {
            best = Diameter { value: far.0, witness: (s.min(far.1), s.max(far.1)) };
        }
    }
    Ok(best)
}
