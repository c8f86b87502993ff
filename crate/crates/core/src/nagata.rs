//! The assembled coloring of a tree-graded space.
//!
//! For a target `x`, the geodesic `γ` from the global base point is cut
//! into its piece segments `γ_P` (from `x_P` to `π_P(x)`). A segment is
//! short when its exit lies in the base component of `P`, long otherwise.
//! Long segments lose their initial `ceil(r/2)` stub; the closed stretches
//! of `γ` left between the shortened long segments are the β-segments.
//!
//! ```text
//! c*(x) = Σ_P c_P(π_P(x)) + Σ_i floor(|⌊β_i⌋| / period)   (mod n+1)
//! ```
//!
//! where `⌊β⌋` drops the last piece of `β`'s own piece structure.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GraphError, SpaceError};
use crate::metric::{GeodesicTree, Path, Vertex};
use crate::piece_coloring::{PieceColoring, ScaleSetup};
use crate::space::{GradedSpace, PieceId, Space};
use crate::Color;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentClass {
    Short,
    Long,
}

/// Inclusive range of positions along a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    /// Number of edges spanned.
    pub fn edge_count(&self) -> usize {
        self.end - self.start
    }

    pub fn is_point(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.start <= pos && pos <= self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSegment {
    pub piece: PieceId,
    pub span: Span,
    /// `x_P`.
    pub entry: Vertex,
    /// `π_P(x)`.
    pub exit: Vertex,
    pub class: SegmentClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicTrace {
    pub target: Vertex,
    pub gamma: Path,
    /// Piece of every edge of `gamma`, in order.
    pub edge_pieces: Vec<PieceId>,
    pub segments: Vec<PieceSegment>,
    /// Long segments minus their initial stub, in the same order as the
    /// long entries of `segments`.
    pub reduced: Vec<Span>,
    /// Closed complements of the reduced segments' interiors.
    pub betas: Vec<Span>,
}

impl GeodesicTrace {
    pub fn segment_vertices(&self, span: Span) -> &[Vertex] {
        &self.gamma.vertices[span.start..=span.end]
    }

    /// Length of `⌊β⌋` for the β-segment `span`.
    pub fn truncated_len(&self, span: Span) -> usize {
        truncated_len(&self.edge_pieces[span.start..span.end])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloorTerm {
    pub beta_index: usize,
    pub truncated_len: usize,
    pub value: u64,
}

/// Breakdown of one evaluation of the coloring formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorTerm {
    pub target: Vertex,
    pub first_sum: u64,
    pub floor_terms: Vec<FloorTerm>,
    pub total: Color,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// The full formula with truncated β-segments.
    Cstar,
    /// Piece color changes only.
    Naive,
    /// Piece color changes plus periodic changes along untruncated β-segments.
    Periodic,
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cstar" => Ok(Variant::Cstar),
            "naive" => Ok(Variant::Naive),
            "periodic" => Ok(Variant::Periodic),
            other => Err(format!("unknown variant `{other}` (expected cstar, naive or periodic)")),
        }
    }
}

/// A total coloring of a space's vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceColoring {
    pub colors: Vec<Color>,
    pub setup: ScaleSetup,
}

/// Edge count of the run of equal trailing entries of `edge_pieces`,
/// subtracted from the full length.
fn truncated_len(edge_pieces: &[PieceId]) -> usize {
    match edge_pieces.last() {
        None => 0,
        Some(&last) => edge_pieces.iter().rposition(|&p| p != last).map_or(0, |i| i + 1),
    }
}

/// `⌊β⌋`: the subpath of `beta` from its start to the entry point of the
/// last piece of its induced piece structure. A path inside one piece
/// (including a single vertex) truncates to its first vertex.
pub fn floor_trunc(space: &Space, beta: &Path) -> Result<Path, SpaceError> {
    if beta.vertices.is_empty() {
        return Err(GraphError::EmptySubset.into());
    }
    let edge_pieces = beta
        .vertices
        .windows(2)
        .map(|w| {
            space
                .edge_piece(w[0], w[1])
                .ok_or(SpaceError::Invalid(format!("{} {} is not an edge of any piece", w[0], w[1])))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let keep = truncated_len(&edge_pieces);
    Ok(Path { vertices: beta.vertices[..=keep].to_vec() })
}

/// Evaluates the assembled coloring over one space, scale and family of
/// piece colorings.
#[derive(Debug, Clone, Copy)]
pub struct Assembler<'a> {
    pub gs: &'a GradedSpace,
    pub setup: &'a ScaleSetup,
    pub pieces: &'a [PieceColoring],
}

impl<'a> Assembler<'a> {
    pub fn new(gs: &'a GradedSpace, setup: &'a ScaleSetup, pieces: &'a [PieceColoring]) -> Self {
        assert_eq!(pieces.len(), gs.piece_count(), "one coloring per piece");
        Assembler { gs, setup, pieces }
    }

    /// Trace along the canonical geodesic from the base point to `x`.
    pub fn trace(&self, x: Vertex) -> Result<GeodesicTrace, SpaceError> {
        let gamma = crate::metric::canonical_geodesic(self.gs.graph(), self.gs.basepoint(), x)?;
        Ok(self.trace_along(gamma))
    }

    /// Trace along any geodesic starting at the base point.
    pub fn trace_along(&self, gamma: Path) -> GeodesicTrace {
        let space = self.gs.space();
        debug_assert_eq!(gamma.first(), self.gs.basepoint());
        let verts = &gamma.vertices;
        let edge_pieces: Vec<PieceId> = verts
            .windows(2)
            .map(|w| space.edge_piece(w[0], w[1]).expect("validated space covers every edge"))
            .collect();
        let mut segments = Vec::new();
        let mut start = 0;
        for i in 0..edge_pieces.len() {
            if i + 1 == edge_pieces.len() || edge_pieces[i + 1] != edge_pieces[i] {
                let piece = edge_pieces[i];
                let exit = verts[i + 1];
                let class = if self.pieces[piece].in_base(exit) { SegmentClass::Short } else { SegmentClass::Long };
                segments.push(PieceSegment {
                    piece,
                    span: Span { start, end: i + 1 },
                    entry: verts[start],
                    exit,
                    class,
                });
                start = i + 1;
            }
        }
        let stub = self.setup.reduction_radius() as usize;
        let reduced: Vec<Span> = segments
            .iter()
            .filter(|s| s.class == SegmentClass::Long)
            .map(|s| Span { start: (s.span.start + stub).min(s.span.end), end: s.span.end })
            .collect();
        let mut betas = Vec::with_capacity(reduced.len() + 1);
        let mut cursor = 0;
        for red in &reduced {
            betas.push(Span { start: cursor, end: red.start });
            cursor = red.end;
        }
        betas.push(Span { start: cursor, end: verts.len() - 1 });
        GeodesicTrace { target: gamma.last(), gamma, edge_pieces, segments, reduced, betas }
    }

    /// Evaluates a variant of the formula on a trace.
    pub fn evaluate(&self, trace: &GeodesicTrace, variant: Variant) -> ColorTerm {
        let first_sum: u64 = trace
            .segments
            .iter()
            .map(|s| u64::from(self.pieces[s.piece].c_p_at(s.exit).expect("exit lies in its piece")))
            .sum();
        let period = self.setup.color_period();
        let floor_terms: Vec<FloorTerm> = match variant {
            Variant::Naive => Vec::new(),
            Variant::Cstar | Variant::Periodic => trace
                .betas
                .iter()
                .enumerate()
                .map(|(i, &span)| {
                    let len = if variant == Variant::Cstar { trace.truncated_len(span) } else { span.edge_count() };
                    FloorTerm { beta_index: i, truncated_len: len, value: len as u64 / period }
                })
                .collect(),
        };
        let sum = first_sum + floor_terms.iter().map(|t| t.value).sum::<u64>();
        ColorTerm {
            target: trace.target,
            first_sum,
            floor_terms,
            total: (sum % u64::from(self.setup.palette())) as Color,
        }
    }

    pub fn cstar_color(&self, x: Vertex) -> Result<ColorTerm, SpaceError> {
        Ok(self.evaluate(&self.trace(x)?, Variant::Cstar))
    }

    /// Colors every vertex, sharing one breadth-first tree of canonical
    /// geodesics from the base point.
    pub fn color_all(&self) -> SpaceColoring {
        self.color_with(Variant::Cstar)
    }

    pub fn baseline_color(&self, variant: Variant) -> SpaceColoring {
        self.color_with(variant)
    }

    pub fn color_with(&self, variant: Variant) -> SpaceColoring {
        let tree = GeodesicTree::new(self.gs.graph(), self.gs.basepoint()).expect("basepoint is a vertex");
        let colors = (0..self.gs.graph().vertex_count())
            .into_par_iter()
            .map(|v| self.evaluate(&self.trace_along(tree.path_to(v)), variant).total)
            .collect();
        SpaceColoring { colors, setup: *self.setup }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{ChainMode, Graph};
    use crate::piece_coloring::{color_pieces, StrategyPlan};

    /// Path 0..=len where every edge is its own piece.
    fn edge_path(len: usize) -> GradedSpace {
        let edges: Vec<_> = (1..=len).map(|i| (i - 1, i)).collect();
        let g = Graph::new(len + 1, &edges).unwrap();
        let pieces = (1..=len).map(|i| vec![i - 1, i]).collect();
        GradedSpace::new(Space::new(g, pieces, 0).unwrap()).unwrap()
    }

    fn one_piece_path(len: usize) -> GradedSpace {
        let edges: Vec<_> = (1..=len).map(|i| (i - 1, i)).collect();
        let g = Graph::new(len + 1, &edges).unwrap();
        GradedSpace::new(Space::new(g, vec![(0..=len).collect()], 0).unwrap()).unwrap()
    }

    #[test]
    fn truncation_rule() {
        assert_eq!(truncated_len(&[]), 0);
        assert_eq!(truncated_len(&[3, 3, 3]), 0);
        assert_eq!(truncated_len(&[1, 2, 2]), 1);
        assert_eq!(truncated_len(&[1, 1, 2, 3, 3]), 3);
    }

    #[test]
    fn floor_trunc_examples() {
        let gs = edge_path(6);
        let beta = Path { vertices: (1..=5).collect() };
        assert_eq!(floor_trunc(gs.space(), &beta).unwrap().vertices, vec![1, 2, 3, 4]);
        let single = Path { vertices: vec![3] };
        assert_eq!(floor_trunc(gs.space(), &single).unwrap().vertices, vec![3]);
        let whole = one_piece_path(6);
        let beta = Path { vertices: (0..=6).collect() };
        assert_eq!(floor_trunc(whole.space(), &beta).unwrap().vertices, vec![0]);
        assert!(floor_trunc(whole.space(), &Path { vertices: vec![] }).is_err());
    }

    #[test]
    fn trivial_trace_at_basepoint() {
        let gs = edge_path(5);
        let (setup, pieces) = color_pieces(&gs, &StrategyPlan::default(), 2, ChainMode::Strict, None, &[]).unwrap();
        let asm = Assembler::new(&gs, &setup, &pieces);
        let t = asm.trace(0).unwrap();
        assert_eq!(t.gamma.vertices, vec![0]);
        assert!(t.segments.is_empty());
        assert_eq!(t.betas, vec![Span { start: 0, end: 0 }]);
        assert_eq!(asm.cstar_color(0).unwrap().total, 0);
    }

    #[test]
    fn edge_path_period_switch() {
        let gs = edge_path(400);
        let (setup, pieces) = color_pieces(&gs, &StrategyPlan::default(), 2, ChainMode::Strict, None, &[]).unwrap();
        assert_eq!((setup.f_r, setup.n, setup.color_period()), (2, 1, 198));
        let asm = Assembler::new(&gs, &setup, &pieces);
        let at_199 = asm.cstar_color(199).unwrap();
        assert_eq!(at_199.first_sum, 0);
        assert_eq!(at_199.floor_terms.len(), 1);
        assert_eq!(at_199.floor_terms[0].value, 1);
        assert_eq!(at_199.total, 1);
        assert_eq!(asm.cstar_color(198).unwrap().total, 0);
    }
}
