//! Piece decompositions, the tree-graded axioms, the gluing tree of pieces
//! and cut vertices, base points and projections onto pieces.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::SpaceError;
use crate::metric::{Graph, Vertex, UNREACHED};

pub type PieceId = usize;

/// A graph together with a cover by pieces and a global base point.
///
/// Construction only checks that ids are in range and piece lists are
/// sorted; [`Space::validate`] checks the tree-graded axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    graph: Graph,
    pieces: Vec<Vec<Vertex>>,
    basepoint: Vertex,
    pieces_of: Vec<Vec<PieceId>>,
    arc_piece: Vec<Option<PieceId>>,
}

impl Space {
    pub fn new(graph: Graph, pieces: Vec<Vec<Vertex>>, basepoint: Vertex) -> Result<Self, SpaceError> {
        let n = graph.vertex_count();
        if basepoint >= n {
            return Err(SpaceError::BadBasepoint(basepoint));
        }
        let mut pieces_of = vec![Vec::new(); n];
        for (p, piece) in pieces.iter().enumerate() {
            if piece.windows(2).any(|w| w[0] >= w[1]) {
                return Err(SpaceError::UnsortedPiece(p));
            }
            for &v in piece {
                graph.check_vertex(v)?;
                pieces_of[v].push(p);
            }
        }
        let mut arc_piece = vec![None; graph.arc_count()];
        for u in 0..n {
            for (i, &v) in graph.neighbors(u).iter().enumerate() {
                arc_piece[graph.arc_start(u) + i] = first_common(&pieces_of[u], &pieces_of[v]);
            }
        }
        Ok(Space { graph, pieces, basepoint, pieces_of, arc_piece })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn pieces(&self) -> &[Vec<Vertex>] {
        &self.pieces
    }

    pub fn piece(&self, p: PieceId) -> &[Vertex] {
        &self.pieces[p]
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn basepoint(&self) -> Vertex {
        self.basepoint
    }

    /// Pieces containing `v`, ascending.
    pub fn pieces_of(&self, v: Vertex) -> &[PieceId] {
        &self.pieces_of[v]
    }

    pub fn contains(&self, p: PieceId, v: Vertex) -> bool {
        self.pieces_of[v].binary_search(&p).is_ok()
    }

    /// The piece owning edge `{u, v}` (smallest id if several claim it).
    pub fn edge_piece(&self, u: Vertex, v: Vertex) -> Option<PieceId> {
        self.graph.arc(u, v).and_then(|a| self.arc_piece[a])
    }

    pub fn check_piece(&self, p: PieceId) -> Result<(), SpaceError> {
        if p < self.pieces.len() {
            Ok(())
        } else {
            Err(SpaceError::UnknownPiece(p))
        }
    }

    /// Vertices lying in two or more pieces, ascending.
    pub fn cut_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.graph.vertex_count()).filter(|&v| self.pieces_of[v].len() >= 2)
    }

    /// Subgraph induced by a piece, on local indices `0..piece.len()`.
    pub fn induced_piece_graph(&self, p: PieceId) -> Result<Graph, SpaceError> {
        let piece = &self.pieces[p];
        let mut edges = Vec::new();
        for (i, &u) in piece.iter().enumerate() {
            for &v in self.graph.neighbors(u) {
                if u < v {
                    if let Ok(j) = piece.binary_search(&v) {
                        edges.push((i, j));
                    }
                }
            }
        }
        Ok(Graph::new(piece.len(), &edges)?)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        self.check_edge_cover(&mut violations);
        self.check_t1(&mut violations);
        let connected = self.check_connected_pieces(&mut violations);
        self.check_tree(&mut violations);
        self.check_convex(&connected, &mut violations);
        ValidationReport { violations }
    }

    fn check_edge_cover(&self, out: &mut Vec<Violation>) {
        let n = self.graph.vertex_count();
        for v in 0..n {
            if self.pieces_of[v].is_empty() {
                out.push(Violation::new(Axiom::EdgeCover, vec![], vec![v], format!("vertex {v} lies in no piece")));
            }
        }
        for (u, v) in self.graph.edges() {
            let owners = common(&self.pieces_of[u], &self.pieces_of[v]);
            match owners.len() {
                1 => {}
                0 => out.push(Violation::new(
                    Axiom::EdgeCover,
                    vec![],
                    vec![u, v],
                    format!("edge {u} {v} belongs to no piece"),
                )),
                _ => out.push(Violation::new(
                    Axiom::EdgeCover,
                    owners.clone(),
                    vec![u, v],
                    format!("edge {u} {v} belongs to pieces {owners:?}"),
                )),
            }
        }
    }

    fn check_t1(&self, out: &mut Vec<Violation>) {
        let mut shared: BTreeMap<(PieceId, PieceId), Vec<Vertex>> = BTreeMap::new();
        for (v, ps) in self.pieces_of.iter().enumerate() {
            for (i, &a) in ps.iter().enumerate() {
                for &b in &ps[i + 1..] {
                    shared.entry((a, b)).or_default().push(v);
                }
            }
        }
        for ((a, b), vs) in shared {
            if vs.len() >= 2 {
                out.push(Violation::new(
                    Axiom::T1,
                    vec![a, b],
                    vs[..2].to_vec(),
                    format!("pieces {a} and {b} share vertices {} and {}", vs[0], vs[1]),
                ));
            }
        }
    }

    fn check_connected_pieces(&self, out: &mut Vec<Violation>) -> Vec<bool> {
        (0..self.pieces.len())
            .map(|p| {
                let piece = &self.pieces[p];
                if piece.len() < 2 {
                    out.push(Violation::new(
                        Axiom::ConnectedPiece,
                        vec![p],
                        piece.clone(),
                        format!("piece {p} has fewer than two vertices"),
                    ));
                    return false;
                }
                match self.induced_piece_graph(p) {
                    Ok(_) => true,
                    Err(SpaceError::Graph(crate::error::GraphError::Disconnected(i))) => {
                        out.push(Violation::new(
                            Axiom::ConnectedPiece,
                            vec![p],
                            vec![piece[0], piece[i]],
                            format!("piece {p} is disconnected: {} cannot reach {}", piece[0], piece[i]),
                        ));
                        false
                    }
                    Err(e) => unreachable!("induced subgraph of a valid graph: {e}"),
                }
            })
            .collect()
    }

    fn check_tree(&self, out: &mut Vec<Violation>) {
        let k = self.pieces.len();
        let cuts: Vec<Vertex> = self.cut_vertices().collect();
        let node_count = k + cuts.len();
        if node_count == 0 {
            return;
        }
        let mut uf = UnionFind::<usize>::new(node_count);
        let mut forest: Vec<Vec<usize>> = vec![Vec::new(); node_count];
        let mut reported_cycle = false;
        for (ci, &c) in cuts.iter().enumerate() {
            let cnode = k + ci;
            for &p in &self.pieces_of[c] {
                if uf.union(p, cnode) {
                    forest[p].push(cnode);
                    forest[cnode].push(p);
                } else if !reported_cycle {
                    reported_cycle = true;
                    let cycle = forest_path(&forest, p, cnode);
                    let pieces: Vec<PieceId> = cycle.iter().copied().filter(|&x| x < k).collect();
                    let vertices: Vec<Vertex> = cycle.iter().filter(|&&x| x >= k).map(|&x| cuts[x - k]).collect();
                    out.push(Violation::new(
                        Axiom::Tree,
                        pieces.clone(),
                        vertices.clone(),
                        format!("pieces {pieces:?} and cut vertices {vertices:?} form a cycle of gluings"),
                    ));
                }
            }
        }
        let root = uf.find(0);
        if let Some(other) = (0..k).find(|&p| uf.find(p) != root) {
            out.push(Violation::new(
                Axiom::Tree,
                vec![0, other],
                vec![],
                format!("pieces 0 and {other} are not joined through shared vertices"),
            ));
        }
    }

    fn check_convex(&self, connected: &[bool], out: &mut Vec<Violation>) {
        let n = self.graph.vertex_count();
        let mut ambient = vec![UNREACHED; n];
        let mut touched: Vec<Vertex> = Vec::new();
        let mut member = vec![false; n];
        'pieces: for (p, piece) in self.pieces.iter().enumerate() {
            if !connected[p] {
                continue;
            }
            let local = self.induced_piece_graph(p).expect("checked connected");
            for &v in piece {
                member[v] = true;
            }
            for (i, &u) in piece.iter().enumerate() {
                let inner = local.bfs(i);
                for &t in &touched {
                    ambient[t] = UNREACHED;
                }
                touched.clear();
                bfs_until_covered(&self.graph, u, &member, piece.len(), &mut ambient, &mut touched);
                if let Some(j) = (0..piece.len()).find(|&j| inner[j] != ambient[piece[j]]) {
                    out.push(Violation::new(
                        Axiom::Convex,
                        vec![p],
                        vec![u, piece[j]],
                        format!(
                            "piece {p}: d({u},{}) is {} inside the piece but {} in the space",
                            piece[j], inner[j], ambient[piece[j]]
                        ),
                    ));
                    for &v in piece {
                        member[v] = false;
                    }
                    continue 'pieces;
                }
            }
            for &v in piece {
                member[v] = false;
            }
        }
    }
}

fn bfs_until_covered(
    g: &Graph,
    source: Vertex,
    member: &[bool],
    members: usize,
    dist: &mut [u32],
    touched: &mut Vec<Vertex>,
) {
    let mut queue = VecDeque::from([source]);
    dist[source] = 0;
    touched.push(source);
    let mut found = usize::from(member[source]);
    while let Some(u) = queue.pop_front() {
        if found == members {
            return;
        }
        for &w in g.neighbors(u) {
            if dist[w] == UNREACHED {
                dist[w] = dist[u] + 1;
                touched.push(w);
                if member[w] {
                    found += 1;
                }
                queue.push_back(w);
            }
        }
    }
}

fn forest_path(forest: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; forest.len()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &w in &forest[u] {
            if prev[w] == usize::MAX {
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

fn common(a: &[PieceId], b: &[PieceId]) -> Vec<PieceId> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

fn first_common(a: &[PieceId], b: &[PieceId]) -> Option<PieceId> {
    a.iter().copied().find(|x| b.binary_search(x).is_ok())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Axiom {
    EdgeCover,
    T1,
    Tree,
    Convex,
    ConnectedPiece,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::EdgeCover => "EDGE_COVER",
            Axiom::T1 => "T1",
            Axiom::Tree => "TREE",
            Axiom::Convex => "CONVEX",
            Axiom::ConnectedPiece => "CONNECTED_PIECE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub pieces: Vec<PieceId>,
    pub vertices: Vec<Vertex>,
    pub detail: String,
}

impl Violation {
    fn new(axiom: Axiom, pieces: Vec<PieceId>, vertices: Vec<Vertex>, detail: String) -> Self {
        Violation { axiom, pieces, vertices, detail }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return writeln!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "{}: {}", v.axiom, v.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TreeNode {
    Piece(PieceId),
    Cut(Vertex),
}

/// Bipartite tree of pieces and cut vertices, rooted at the piece holding
/// the base point.
///
/// Node ids `0..piece_count` are the pieces themselves; cut vertices follow
/// in ascending vertex order.
#[derive(Debug, Clone)]
pub struct PieceTree {
    nodes: Vec<TreeNode>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<u32>,
    enter: Vec<u32>,
    exit: Vec<u32>,
    cut_node: Vec<usize>,
    root: usize,
}

impl PieceTree {
    pub fn root_piece(&self) -> PieceId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.parent.iter().filter(|p| p.is_some()).count()
    }

    pub fn node(&self, id: usize) -> TreeNode {
        self.nodes[id]
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.parent[id]
    }

    pub fn children(&self, id: usize) -> &[usize] {
        &self.children[id]
    }

    pub fn depth(&self, id: usize) -> u32 {
        self.depth[id]
    }

    /// `(parent, child)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.iter().enumerate().filter_map(|(c, p)| p.map(|p| (p, c)))
    }

    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        self.enter[a] <= self.enter[b] && self.exit[b] <= self.exit[a]
    }

    /// Tree node standing for vertex `v`: its cut node if `v` is a cut
    /// vertex, otherwise its only piece.
    pub fn location(&self, space: &Space, v: Vertex) -> usize {
        match self.cut_node[v] {
            usize::MAX => space.pieces_of(v)[0],
            c => c,
        }
    }

    /// The cut vertex joining a non-root piece to its parent.
    pub fn parent_cut(&self, p: PieceId) -> Option<Vertex> {
        self.parent[p].map(|c| match self.nodes[c] {
            TreeNode::Cut(v) => v,
            TreeNode::Piece(_) => unreachable!("bipartite tree"),
        })
    }
}

/// Builds the gluing tree of a space that passes validation.
pub fn gluing_tree(space: &Space) -> Result<PieceTree, SpaceError> {
    let report = space.validate();
    if !report.ok() {
        return Err(SpaceError::Invalid(report.to_string().trim_end().to_string()));
    }
    Ok(build_tree(space))
}

fn build_tree(space: &Space) -> PieceTree {
    let k = space.piece_count();
    let n = space.graph().vertex_count();
    let mut nodes: Vec<TreeNode> = (0..k).map(TreeNode::Piece).collect();
    let mut cut_node = vec![usize::MAX; n];
    for c in space.cut_vertices() {
        cut_node[c] = nodes.len();
        nodes.push(TreeNode::Cut(c));
    }
    let root = space.pieces_of(space.basepoint())[0];
    let total = nodes.len();
    let mut parent = vec![None; total];
    let mut children = vec![Vec::new(); total];
    let mut depth = vec![0; total];
    let mut seen = vec![false; total];
    let mut order = Vec::with_capacity(total);
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        let next: Vec<usize> = match nodes[u] {
            TreeNode::Piece(p) => space
                .piece(p)
                .iter()
                .filter(|&&v| cut_node[v] != usize::MAX)
                .map(|&v| cut_node[v])
                .collect(),
            TreeNode::Cut(v) => space.pieces_of(v).to_vec(),
        };
        for w in next {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                depth[w] = depth[u] + 1;
                children[u].push(w);
                queue.push_back(w);
            }
        }
    }
    let mut enter = vec![0; total];
    let mut exit = vec![0; total];
    let mut clock = 0u32;
    let mut stack = vec![(root, false)];
    while let Some((u, done)) = stack.pop() {
        if done {
            exit[u] = clock;
            clock += 1;
            continue;
        }
        enter[u] = clock;
        clock += 1;
        stack.push((u, true));
        for &c in children[u].iter().rev() {
            stack.push((c, false));
        }
    }
    PieceTree { nodes, parent, children, depth, enter, exit, cut_node, root }
}

/// A validated tree-graded space with its gluing tree, base points and
/// per-piece induced graphs.
#[derive(Debug, Clone)]
pub struct GradedSpace {
    space: Space,
    tree: PieceTree,
    basepoints: Vec<Vertex>,
    local: Vec<Graph>,
}

impl GradedSpace {
    pub fn new(space: Space) -> Result<Self, SpaceError> {
        let tree = gluing_tree(&space)?;
        let local = (0..space.piece_count())
            .map(|p| space.induced_piece_graph(p))
            .collect::<Result<Vec<_>, _>>()?;
        let mut graded = GradedSpace { space, tree, basepoints: Vec::new(), local };
        graded.basepoints = assign_basepoints(&graded);
        Ok(graded)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn graph(&self) -> &Graph {
        self.space.graph()
    }

    pub fn tree(&self) -> &PieceTree {
        &self.tree
    }

    pub fn basepoint(&self) -> Vertex {
        self.space.basepoint()
    }

    pub fn piece_count(&self) -> usize {
        self.space.piece_count()
    }

    pub fn piece(&self, p: PieceId) -> &[Vertex] {
        self.space.piece(p)
    }

    /// Base point `x_P` of piece `p`.
    pub fn piece_basepoint(&self, p: PieceId) -> Vertex {
        self.basepoints[p]
    }

    pub fn basepoints(&self) -> &[Vertex] {
        &self.basepoints
    }

    /// Induced graph of piece `p` on local indices (positions in
    /// [`GradedSpace::piece`]).
    pub fn piece_graph(&self, p: PieceId) -> &Graph {
        &self.local[p]
    }

    pub fn local_index(&self, p: PieceId, v: Vertex) -> Option<usize> {
        self.space.piece(p).binary_search(&v).ok()
    }

    pub fn local_index_checked(&self, p: PieceId, v: Vertex) -> Result<usize, SpaceError> {
        self.space.check_piece(p)?;
        self.local_index(p, v).ok_or(SpaceError::NotInPiece { piece: p, vertex: v })
    }

    /// The nearest point of piece `p` to `x`, read off the gluing tree.
    pub fn project(&self, p: PieceId, x: Vertex) -> Result<Vertex, SpaceError> {
        self.space.check_piece(p)?;
        self.space.graph().check_vertex(x)?;
        Ok(self.project_unchecked(p, x))
    }

    pub(crate) fn project_unchecked(&self, p: PieceId, x: Vertex) -> Vertex {
        if self.space.contains(p, x) {
            return x;
        }
        let loc = self.tree.location(&self.space, x);
        if self.tree.is_ancestor(p, loc) {
            let mut cur = loc;
            while self.tree.parent(cur) != Some(p) {
                cur = self.tree.parent(cur).expect("p is an ancestor");
            }
            match self.tree.node(cur) {
                TreeNode::Cut(c) => c,
                TreeNode::Piece(_) => unreachable!("pieces are children of cut nodes"),
            }
        } else {
            self.tree.parent_cut(p).expect("only the root is an ancestor of everything")
        }
    }
}

/// `x_P = π_P(x̂)` for every piece.
pub fn assign_basepoints(gs: &GradedSpace) -> Vec<Vertex> {
    let hat = gs.basepoint();
    (0..gs.piece_count()).map(|p| gs.project_unchecked(p, hat)).collect()
}

/// All vertices of `p` nearest to `x`, found by a full breadth-first search.
/// Used to cross-check [`GradedSpace::project`].
pub fn project_brute_force(space: &Space, p: PieceId, x: Vertex) -> Result<Vec<Vertex>, SpaceError> {
    space.check_piece(p)?;
    space.graph().check_vertex(x)?;
    let dist = space.graph().bfs(x);
    let best = space.piece(p).iter().map(|&v| dist[v]).min().unwrap_or(UNREACHED);
    Ok(space.piece(p).iter().copied().filter(|&v| dist[v] == best).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize, edges: &[(usize, usize)], pieces: &[&[usize]], base: usize) -> Space {
        Space::new(
            Graph::new(n, edges).unwrap(),
            pieces.iter().map(|p| p.to_vec()).collect(),
            base,
        )
        .unwrap()
    }

    fn tripod(base: usize) -> Space {
        // Center 0; arms A = {0,1,2}, B = {0,3,4}, C = {0,5,6}.
        space(
            7,
            &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)],
            &[&[0, 1, 2], &[0, 3, 4], &[0, 5, 6]],
            base,
        )
    }

    #[test]
    fn single_piece_path_is_valid() {
        let s = space(4, &[(0, 1), (1, 2), (2, 3)], &[&[0, 1, 2, 3]], 0);
        assert!(s.validate().ok());
        let t = gluing_tree(&s).unwrap();
        assert_eq!((t.node_count(), t.edge_count()), (1, 0));
    }

    #[test]
    fn triangles_sharing_an_edge_violate_t1() {
        let s = space(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)], &[&[0, 1, 2], &[1, 2, 3]], 0);
        let report = s.validate();
        let t1: Vec<_> = report.violations.iter().filter(|v| v.axiom == Axiom::T1).collect();
        assert_eq!(t1.len(), 1);
        assert_eq!(t1[0].pieces, vec![0, 1]);
        assert_eq!(t1[0].vertices, vec![1, 2]);
        assert!(gluing_tree(&s).is_err());
    }

    #[test]
    fn cycle_of_gluings_violates_tree() {
        let s = space(
            6,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)],
            &[&[0, 1, 2], &[2, 3, 4], &[0, 4, 5]],
            0,
        );
        let report = s.validate();
        assert!(report.has(Axiom::Tree));
        assert!(!report.has(Axiom::T1));
    }

    #[test]
    fn uncovered_edge_and_split_piece() {
        let s = space(4, &[(0, 1), (1, 2), (2, 3)], &[&[0, 1], &[2, 3], &[0, 3]], 0);
        let report = s.validate();
        assert!(report.has(Axiom::EdgeCover));
        assert!(report.has(Axiom::ConnectedPiece));
    }

    #[test]
    fn non_convex_piece() {
        // Piece {0,1,2,3} is a path 0-1-2-3 but 0-4-3 is a shortcut through another piece.
        let s = space(5, &[(0, 1), (1, 2), (2, 3), (0, 4), (3, 4)], &[&[0, 1, 2, 3], &[0, 3, 4]], 0);
        let report = s.validate();
        assert!(report.has(Axiom::Convex));
    }

    #[test]
    fn tripod_tree_and_projection() {
        let s = tripod(2);
        let t = gluing_tree(&s).unwrap();
        assert_eq!(t.node_count(), 4);
        assert_eq!(t.edge_count(), 3);
        assert_eq!(t.root_piece(), 0);
        let gs = GradedSpace::new(s).unwrap();
        assert_eq!(gs.project(0, 4).unwrap(), 0);
        assert_eq!(gs.project(1, 1).unwrap(), 0);
        assert_eq!(gs.project(1, 4).unwrap(), 4);
        assert_eq!(gs.basepoints(), &[2, 0, 0]);
        assert!(gs.project(3, 0).is_err());
        assert!(gs.project(0, 9).is_err());
    }

    #[test]
    fn chain_of_pieces_projection() {
        let s = space(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)],
            &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 6]],
            0,
        );
        let gs = GradedSpace::new(s.clone()).unwrap();
        assert_eq!(gs.project(0, 6).unwrap(), 2);
        assert_eq!(project_brute_force(&s, 0, 6).unwrap(), vec![2]);
        assert_eq!(gs.project(2, 0).unwrap(), 4);
    }

    #[test]
    fn basepoint_at_cut_vertex_roots_smallest_piece() {
        let s = tripod(0);
        let gs = GradedSpace::new(s).unwrap();
        assert_eq!(gs.tree().root_piece(), 0);
        assert_eq!(gs.basepoints(), &[0, 0, 0]);
    }
}
