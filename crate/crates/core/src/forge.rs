//! Seeded generators of tree-graded spaces.
//!
//! Randomness comes from ChaCha8 seeded through `SeedableRng::seed_from_u64`;
//! a draw below `n` is `(next_u64 * n) >> 64` computed in 128 bits, so every
//! output is a fixed function of the seed.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ForgeError;
use crate::metric::{Graph, Vertex};
use crate::space::{PieceId, Space};

/// Deterministic draws from a seed.
#[derive(Debug, Clone)]
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform integer in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty range");
        ((u128::from(self.0.next_u64()) * n as u128) >> 64) as usize
    }

    /// Uniform integer in `lo..=hi`.
    pub fn between(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PieceTemplate {
    /// Path with this many edges.
    Path(u32),
    /// Cycle on this many vertices.
    Cycle(u32),
    /// `rows x cols` grid.
    Grid(u32, u32),
    /// Complete binary tree of this depth.
    Tree(u32),
}

impl PieceTemplate {
    /// Vertex count and local edge list.
    fn build(&self) -> (usize, Vec<(usize, usize)>) {
        match *self {
            PieceTemplate::Path(len) => {
                let len = len as usize;
                (len + 1, (0..len).map(|i| (i, i + 1)).collect())
            }
            PieceTemplate::Cycle(m) => {
                let m = m as usize;
                let mut edges: Vec<_> = (0..m - 1).map(|i| (i, i + 1)).collect();
                edges.push((0, m - 1));
                (m, edges)
            }
            PieceTemplate::Grid(rows, cols) => {
                let (rows, cols) = (rows as usize, cols as usize);
                let mut edges = Vec::new();
                for i in 0..rows {
                    for j in 0..cols {
                        let v = i * cols + j;
                        if j + 1 < cols {
                            edges.push((v, v + 1));
                        }
                        if i + 1 < rows {
                            edges.push((v, v + cols));
                        }
                    }
                }
                (rows * cols, edges)
            }
            PieceTemplate::Tree(depth) => {
                let n = (1usize << (depth + 1)) - 1;
                (n, (1..n).map(|v| ((v - 1) / 2, v)).collect())
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.build().0
    }

    fn check(&self) -> Result<(), ForgeError> {
        let ok = match *self {
            PieceTemplate::Path(len) => len >= 1,
            PieceTemplate::Cycle(m) => m >= 3,
            PieceTemplate::Grid(rows, cols) => rows >= 1 && cols >= 1 && rows * cols >= 2,
            PieceTemplate::Tree(depth) => (1..=16).contains(&depth),
        };
        if ok {
            Ok(())
        } else {
            Err(ForgeError::BadTemplate(self.to_string()))
        }
    }
}

impl fmt::Display for PieceTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PieceTemplate::Path(len) => write!(f, "path:{len}"),
            PieceTemplate::Cycle(m) => write!(f, "cycle:{m}"),
            PieceTemplate::Grid(rows, cols) => write!(f, "grid:{rows}x{cols}"),
            PieceTemplate::Tree(depth) => write!(f, "tree:{depth}"),
        }
    }
}

impl FromStr for PieceTemplate {
    type Err = ForgeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ForgeError::BadTemplate(s.to_string());
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        let template = match kind {
            "path" => PieceTemplate::Path(num(arg)?),
            "cycle" => PieceTemplate::Cycle(num(arg)?),
            "tree" => PieceTemplate::Tree(num(arg)?),
            "grid" => {
                let (a, b) = arg.split_once('x').ok_or_else(bad)?;
                PieceTemplate::Grid(num(a)?, num(b)?)
            }
            _ => return Err(bad()),
        };
        template.check().map_err(|_| bad())?;
        Ok(template)
    }
}

impl TryFrom<String> for PieceTemplate {
    type Error = ForgeError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<PieceTemplate> for String {
    fn from(t: PieceTemplate) -> String {
        t.to_string()
    }
}

/// A template with its relative sampling weight, written `kind:arg@weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct WeightedTemplate {
    pub template: PieceTemplate,
    pub weight: u32,
}

impl fmt::Display for WeightedTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.template, self.weight)
    }
}

impl FromStr for WeightedTemplate {
    type Err = ForgeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (t, w) = match s.split_once('@') {
            Some((t, w)) => (t, w.parse().map_err(|_| ForgeError::BadTemplate(s.to_string()))?),
            None => (s, 1),
        };
        Ok(WeightedTemplate { template: t.parse()?, weight: w })
    }
}

impl TryFrom<String> for WeightedTemplate {
    type Error = ForgeError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<WeightedTemplate> for String {
    fn from(t: WeightedTemplate) -> String {
        t.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForgeSpec {
    pub templates: Vec<WeightedTemplate>,
    pub piece_budget: usize,
    /// Maximum depth of a piece below the root piece.
    pub max_tree_depth: u32,
    /// Minimum piece-internal distance between two attachment points.
    pub attach_spacing: u32,
    /// Maximum number of child pieces glued at one vertex.
    pub branch_cap: u32,
    pub seed: u64,
    /// Every edge becomes a path of this many edges.
    pub subdivide: u32,
}

impl ForgeSpec {
    /// `# key value` records describing the spec.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let templates: Vec<String> = self.templates.iter().map(|t| t.to_string()).collect();
        vec![
            ("generator".into(), "random".into()),
            ("templates".into(), templates.join(",")),
            ("budget".into(), self.piece_budget.to_string()),
            ("max_depth".into(), self.max_tree_depth.to_string()),
            ("spacing".into(), self.attach_spacing.to_string()),
            ("branch_cap".into(), self.branch_cap.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("subdivide".into(), self.subdivide.to_string()),
        ]
    }

    fn check(&self) -> Result<(), ForgeError> {
        let infeasible = |m: &str| Err(ForgeError::Infeasible(m.to_string()));
        if self.piece_budget == 0 {
            return infeasible("piece budget must be positive");
        }
        if self.attach_spacing == 0 {
            return infeasible("attach spacing must be at least 1");
        }
        if self.subdivide == 0 {
            return infeasible("subdivision factor must be at least 1");
        }
        if self.templates.iter().all(|t| t.weight == 0) {
            return infeasible("no template has positive weight");
        }
        if self.piece_budget > 1 && (self.branch_cap == 0 || self.max_tree_depth == 0) {
            return infeasible("more than one piece needs positive branch cap and depth");
        }
        for t in &self.templates {
            t.template.check()?;
        }
        Ok(())
    }
}

struct LocalPiece {
    global: Vec<Vertex>,
    graph: Graph,
    /// Local indices already used for gluing.
    attach: Vec<usize>,
    depth: u32,
}

impl LocalPiece {
    fn far_from_attachments(&self, v: usize, spacing: u32) -> bool {
        if self.attach.iter().all(|&a| a == v) {
            return true;
        }
        let dist = self.graph.bfs(v);
        self.attach.iter().all(|&a| a == v || dist[a] >= spacing)
    }
}

#[derive(Default)]
struct Builder {
    vertex_count: usize,
    edges: Vec<(Vertex, Vertex)>,
    pieces: Vec<LocalPiece>,
    children_at: Vec<u32>,
}

impl Builder {
    /// Adds a template piece; with `glue`, one random template vertex is
    /// identified with the given existing vertex.
    fn add(&mut self, template: PieceTemplate, glue: Option<Vertex>, depth: u32, rng: &mut SeededRng) -> PieceId {
        let (k, local_edges) = template.build();
        let glue_local = glue.map(|_| rng.below(k));
        let mut global = Vec::with_capacity(k);
        for i in 0..k {
            match (glue, glue_local) {
                (Some(v), Some(g)) if g == i => global.push(v),
                _ => {
                    global.push(self.vertex_count);
                    self.vertex_count += 1;
                    self.children_at.push(0);
                }
            }
        }
        for &(a, b) in &local_edges {
            let (u, v) = (global[a], global[b]);
            self.edges.push((u.min(v), u.max(v)));
        }
        let graph = Graph::new(k, &local_edges).expect("templates are connected");
        if let Some(v) = glue {
            self.children_at[v] += 1;
        }
        self.pieces.push(LocalPiece { global, graph, attach: glue_local.into_iter().collect(), depth });
        self.pieces.len() - 1
    }

    fn attach_child(
        &mut self,
        parent: PieceId,
        local: usize,
        template: PieceTemplate,
        rng: &mut SeededRng,
    ) -> PieceId {
        let v = self.pieces[parent].global[local];
        let depth = self.pieces[parent].depth + 1;
        if !self.pieces[parent].attach.contains(&local) {
            self.pieces[parent].attach.push(local);
        }
        self.add(template, Some(v), depth, rng)
    }

    fn finish(self, basepoint: Vertex, subdivide: u32) -> Result<Space, ForgeError> {
        let graph = Graph::new(self.vertex_count, &self.edges)
            .map_err(|e| ForgeError::Infeasible(format!("generated graph rejected: {e}")))?;
        let pieces = self
            .pieces
            .into_iter()
            .map(|p| {
                let mut v = p.global;
                v.sort_unstable();
                v
            })
            .collect();
        let space = Space::new(graph, pieces, basepoint)?;
        let space = if subdivide > 1 { self::subdivide(&space, subdivide)? } else { space };
        let report = space.validate();
        if !report.ok() {
            return Err(ForgeError::Infeasible(format!("generated space is not tree-graded: {report}")));
        }
        Ok(space)
    }
}

fn pick_template(templates: &[WeightedTemplate], rng: &mut SeededRng) -> PieceTemplate {
    let total: usize = templates.iter().map(|t| t.weight as usize).sum();
    let mut ticket = rng.below(total);
    for t in templates {
        if ticket < t.weight as usize {
            return t.template;
        }
        ticket -= t.weight as usize;
    }
    unreachable!("ticket below total weight")
}

/// Grows a random tree of pieces from `spec`.
pub fn gen_random(spec: &ForgeSpec) -> Result<Space, ForgeError> {
    spec.check()?;
    let mut rng = SeededRng::new(spec.seed);
    let mut b = Builder::default();
    let root = pick_template(&spec.templates, &mut rng);
    b.add(root, None, 0, &mut rng);
    let basepoint = b.pieces[0].global[rng.below(b.pieces[0].global.len())];
    let limit = 200 * spec.piece_budget + 1000;
    let mut attempts = 0;
    while b.pieces.len() < spec.piece_budget {
        attempts += 1;
        if attempts > limit {
            return Err(ForgeError::Infeasible(format!(
                "placed {} of {} pieces before giving up after {limit} attempts",
                b.pieces.len(),
                spec.piece_budget
            )));
        }
        let open: Vec<PieceId> = (0..b.pieces.len()).filter(|&p| b.pieces[p].depth < spec.max_tree_depth).collect();
        let q = *rng.pick(&open);
        let local = rng.below(b.pieces[q].global.len());
        let v = b.pieces[q].global[local];
        if b.children_at[v] >= spec.branch_cap || !b.pieces[q].far_from_attachments(local, spec.attach_spacing) {
            continue;
        }
        let template = pick_template(&spec.templates, &mut rng);
        b.attach_child(q, local, template, &mut rng);
    }
    b.finish(basepoint, spec.subdivide)
}

/// Parameters of a free-product model; see [`gen_free_product_model`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeProductSpec {
    pub left: PieceTemplate,
    pub right: PieceTemplate,
    pub depth: u32,
    pub attach_spacing: u32,
    /// Maximum number of child pieces sprouting from one piece.
    pub branch_cap: u32,
    pub seed: u64,
}

impl FreeProductSpec {
    pub fn metadata(&self) -> Vec<(String, String)> {
        vec![
            ("generator".into(), "freeprod".into()),
            ("left".into(), self.left.to_string()),
            ("right".into(), self.right.to_string()),
            ("depth".into(), self.depth.to_string()),
            ("spacing".into(), self.attach_spacing.to_string()),
            ("branch_cap".into(), self.branch_cap.to_string()),
            ("seed".into(), self.seed.to_string()),
        ]
    }
}

/// Truncated coset tree of a free product: a `left` piece at level 0,
/// pieces of alternating templates sprouting from spaced attachment
/// vertices on each level, `depth` levels in all. A vertex already carrying
/// its parent piece never sprouts again, as in the coset tree.
pub fn gen_free_product_model(spec: &FreeProductSpec) -> Result<Space, ForgeError> {
    if spec.depth == 0 {
        return Err(ForgeError::Infeasible("depth must be at least 1".into()));
    }
    if spec.attach_spacing == 0 {
        return Err(ForgeError::Infeasible("attach spacing must be at least 1".into()));
    }
    spec.left.check()?;
    spec.right.check()?;
    let mut rng = SeededRng::new(spec.seed);
    let mut b = Builder::default();
    b.add(spec.left, None, 0, &mut rng);
    let basepoint = b.pieces[0].global[rng.below(b.pieces[0].global.len())];
    let mut frontier = vec![0];
    for level in 1..spec.depth {
        let template = if level % 2 == 1 { spec.right } else { spec.left };
        let mut next = Vec::new();
        for q in frontier {
            let mut order: Vec<usize> = (0..b.pieces[q].global.len()).collect();
            rng.shuffle(&mut order);
            let glue = b.pieces[q].attach.first().copied();
            let mut sprouted = 0;
            for local in order {
                if sprouted >= spec.branch_cap {
                    break;
                }
                if Some(local) == glue || !b.pieces[q].far_from_attachments(local, spec.attach_spacing) {
                    continue;
                }
                next.push(b.attach_child(q, local, template, &mut rng));
                sprouted += 1;
            }
        }
        frontier = next;
    }
    b.finish(basepoint, 1)
}

/// Replaces every edge by a path of `k` edges. New vertices are numbered
/// after the old ones, edge by edge in lexicographic edge order, and join
/// the piece owning their edge.
pub fn subdivide(space: &Space, k: u32) -> Result<Space, ForgeError> {
    if k == 0 {
        return Err(ForgeError::Infeasible("subdivision factor must be at least 1".into()));
    }
    if k == 1 {
        return Ok(space.clone());
    }
    let g = space.graph();
    let mut next = g.vertex_count();
    let mut edges = Vec::with_capacity(g.edge_count() * k as usize);
    let mut pieces: Vec<Vec<Vertex>> = space.pieces().to_vec();
    for (u, v) in g.edges() {
        let owner = space.edge_piece(u, v);
        let mut prev = u;
        for _ in 1..k {
            edges.push((prev, next));
            if let Some(p) = owner {
                pieces[p].push(next);
            }
            prev = next;
            next += 1;
        }
        edges.push((v.min(prev), v.max(prev)));
    }
    for p in &mut pieces {
        p.sort_unstable();
    }
    let graph = Graph::new(next, &edges).map_err(|e| ForgeError::Infeasible(e.to_string()))?;
    Ok(Space::new(graph, pieces, space.basepoint())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::write_space;

    fn spec(templates: &str, budget: usize, seed: u64) -> ForgeSpec {
        ForgeSpec {
            templates: templates.split(',').map(|t| t.parse().unwrap()).collect(),
            piece_budget: budget,
            max_tree_depth: 8,
            attach_spacing: 2,
            branch_cap: 2,
            seed,
            subdivide: 1,
        }
    }

    #[test]
    fn template_parsing() {
        let t: WeightedTemplate = "grid:3x4@5".parse().unwrap();
        assert_eq!(t.template, PieceTemplate::Grid(3, 4));
        assert_eq!(t.weight, 5);
        assert_eq!("tree:3".parse::<WeightedTemplate>().unwrap().weight, 1);
        for bad in ["grid:3", "cycle:2", "path:0", "blob:3", "path:x"] {
            assert!(bad.parse::<PieceTemplate>().is_err(), "{bad}");
        }
        assert_eq!(PieceTemplate::Tree(3).vertex_count(), 15);
    }

    #[test]
    fn budget_one_is_a_single_piece() {
        let s = gen_random(&spec("cycle:7", 1, 3)).unwrap();
        assert_eq!(s.piece_count(), 1);
        assert_eq!(s.graph().vertex_count(), 7);
        assert!(s.validate().ok());
    }

    #[test]
    fn infeasible_specs() {
        assert!(matches!(gen_random(&spec("path:3", 0, 1)), Err(ForgeError::Infeasible(_))));
        let mut s = spec("path:1", 5, 1);
        s.branch_cap = 0;
        assert!(gen_random(&s).is_err());
        // Two-vertex pieces with spacing 3 and one child per vertex run out of room.
        let mut s = spec("path:1", 50, 1);
        s.attach_spacing = 3;
        s.branch_cap = 1;
        s.max_tree_depth = 1;
        assert!(matches!(gen_random(&s), Err(ForgeError::Infeasible(_))));
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = write_space(&gen_random(&spec("path:6,cycle:5,grid:3x3,tree:2", 20, 9)).unwrap(), &[]);
        let b = write_space(&gen_random(&spec("path:6,cycle:5,grid:3x3,tree:2", 20, 9)).unwrap(), &[]);
        let c = write_space(&gen_random(&spec("path:6,cycle:5,grid:3x3,tree:2", 20, 10)).unwrap(), &[]);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn free_product_depth_one() {
        let fp = FreeProductSpec {
            left: PieceTemplate::Path(6),
            right: PieceTemplate::Path(6),
            depth: 1,
            attach_spacing: 2,
            branch_cap: 3,
            seed: 1,
        };
        let s = gen_free_product_model(&fp).unwrap();
        assert_eq!(s.piece_count(), 1);
        assert!(gen_free_product_model(&FreeProductSpec { depth: 0, ..fp }).is_err());
    }

    #[test]
    fn subdivide_path() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let s = Space::new(g, vec![(0..6).collect()], 0).unwrap();
        assert_eq!(subdivide(&s, 1).unwrap(), s);
        let d = subdivide(&s, 2).unwrap();
        assert_eq!(d.graph().vertex_count(), 11);
        assert_eq!(d.graph().edge_count(), 10);
        assert_eq!(crate::metric::shortest_dist(d.graph(), 0, 5).unwrap(), 10);
        assert!(d.validate().ok());
    }
}
