//! Piece-level colorings: certified raw colorings, the recoloring of the
//! base ball, the distinguished base component, and magnitude measurement.

use serde::{Deserialize, Serialize};

use crate::error::ColoringError;
use crate::metric::{group_by_root, set_diameter, Balls, ChainMode, ChainPredicate, Graph, Vertex};
use crate::space::{GradedSpace, PieceId};
use crate::Color;

/// Scale, palette and the constants derived from the piece bound `f(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleSetup {
    pub r: u32,
    /// Colors are `0..=n`.
    pub n: u32,
    pub f_r: u32,
    /// Replaces the default period `99 * f_r` when set.
    pub period_override: Option<u64>,
    pub chain: ChainPredicate,
}

impl ScaleSetup {
    pub fn new(r: u32, n: u32, mode: ChainMode) -> Result<Self, ColoringError> {
        if r == 0 {
            return Err(ColoringError::Setup("scale r must be positive".into()));
        }
        if n == 0 {
            return Err(ColoringError::Setup("n must be at least 1".into()));
        }
        Ok(ScaleSetup { r, n, f_r: r, period_override: None, chain: ChainPredicate { mode, r } })
    }

    pub fn with_f(mut self, f_r: u32) -> Result<Self, ColoringError> {
        if f_r < self.r {
            return Err(ColoringError::Setup(format!("f(r) = {f_r} is below r = {}", self.r)));
        }
        self.f_r = f_r;
        Ok(self)
    }

    pub fn with_period(mut self, period: u64) -> Result<Self, ColoringError> {
        if period == 0 {
            return Err(ColoringError::Setup("color period must be positive".into()));
        }
        self.period_override = Some(period);
        Ok(self)
    }

    pub fn color_period(&self) -> u64 {
        self.period_override.unwrap_or(99 * u64::from(self.f_r))
    }

    pub fn recolor_radius(&self) -> u32 {
        2 * self.r
    }

    /// Integer radius standing in for `r/2`: `ceil(r/2)`.
    pub fn reduction_radius(&self) -> u32 {
        self.r.div_ceil(2)
    }

    pub fn palette(&self) -> u32 {
        self.n + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorStat {
    pub color: Color,
    pub components: usize,
    pub max_diameter: u32,
    pub witness: (Vertex, Vertex),
}

/// Per-color component statistics; `magnitude` is the largest component
/// diameter over all colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagnitudeReport {
    pub per_color: Vec<ColorStat>,
    pub magnitude: u32,
    pub witness: Option<(Vertex, Vertex)>,
}

/// Monochromatic chain components of a total coloring of `g`.
pub fn color_components(g: &Graph, colors: &[Color], chain: ChainPredicate) -> Vec<Vec<Vertex>> {
    let n = g.vertex_count();
    assert_eq!(colors.len(), n, "coloring must be total");
    let mut uf = petgraph::unionfind::UnionFind::<usize>::new(n);
    let reach = chain.reach();
    let mut balls = Balls::new(g);
    for v in 0..n {
        for &(w, _) in balls.ball(v, reach) {
            if w > v && colors[w] == colors[v] {
                uf.union(v, w);
            }
        }
    }
    let all: Vec<Vertex> = (0..n).collect();
    group_by_root(&all, |i| uf.find(i))
}

/// Magnitude of a total coloring of `g` at the chain's scale.
pub fn magnitude(g: &Graph, colors: &[Color], chain: ChainPredicate) -> MagnitudeReport {
    let components = color_components(g, colors, chain);
    magnitude_of_components(g, colors, &components)
}

pub fn magnitude_of_components(g: &Graph, colors: &[Color], components: &[Vec<Vertex>]) -> MagnitudeReport {
    let mut per_color: Vec<ColorStat> = Vec::new();
    for part in components {
        let color = colors[part[0]];
        let d = set_diameter(g, part).expect("components are non-empty");
        let slot = match per_color.binary_search_by_key(&color, |s| s.color) {
            Ok(i) => i,
            Err(i) => {
                per_color.insert(i, ColorStat { color, components: 0, max_diameter: 0, witness: (part[0], part[0]) });
                i
            }
        };
        let stat = &mut per_color[slot];
        stat.components += 1;
        if d.value > stat.max_diameter {
            stat.max_diameter = d.value;
            stat.witness = d.witness;
        }
    }
    let best = per_color.iter().max_by_key(|s| (s.max_diameter, std::cmp::Reverse(s.color)));
    MagnitudeReport {
        magnitude: best.map_or(0, |s| s.max_diameter),
        witness: best.map(|s| s.witness),
        per_color,
    }
}

/// Magnitude of a coloring of one piece, given on local indices; witnesses
/// are reported as global vertex ids.
pub fn piece_magnitude(gs: &GradedSpace, p: PieceId, colors: &[Color], chain: ChainPredicate) -> MagnitudeReport {
    let mut report = magnitude(gs.piece_graph(p), colors, chain);
    let piece = gs.piece(p);
    let globalize = |(a, b): (Vertex, Vertex)| (piece[a], piece[b]);
    for stat in &mut report.per_color {
        stat.witness = globalize(stat.witness);
    }
    report.witness = report.witness.map(globalize);
    report
}

/// Recognized shape of a piece's induced graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PieceShape {
    Path,
    Tree,
    Cycle,
    Grid(GridFrame),
    Other,
}

/// Axis coordinates of a grid piece measured from an anchor corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridFrame {
    pub rows: u32,
    pub cols: u32,
    pub anchor: Vertex,
    /// `(row, col)` per local vertex index.
    pub coords: Vec<(u32, u32)>,
}

fn is_acyclic(g: &Graph) -> bool {
    g.edge_count() + 1 == g.vertex_count()
}

pub fn classify(gs: &GradedSpace, p: PieceId) -> PieceShape {
    let g = gs.piece_graph(p);
    let n = g.vertex_count();
    let max_degree = (0..n).map(|v| g.degree(v)).max().unwrap_or(0);
    if is_acyclic(g) {
        return if max_degree <= 2 { PieceShape::Path } else { PieceShape::Tree };
    }
    if g.edge_count() == n && max_degree == 2 {
        return PieceShape::Cycle;
    }
    let corner = (0..n).find(|&v| g.degree(v) == 2);
    match corner.and_then(|c| grid_frame(g, c)) {
        Some(mut frame) => {
            frame.anchor = gs.piece(p)[frame.anchor];
            PieceShape::Grid(frame)
        }
        None => PieceShape::Other,
    }
}

/// Recovers grid coordinates with `anchor` (local index) at `(0, 0)`.
/// Paths count as `1 x b` grids anchored at an endpoint.
fn grid_frame(g: &Graph, anchor: usize) -> Option<GridFrame> {
    let n = g.vertex_count();
    let from_anchor = g.bfs(anchor);
    if is_acyclic(g) && (0..n).all(|v| g.degree(v) <= 2) {
        if g.degree(anchor) > 1 {
            return None;
        }
        let coords = from_anchor.iter().map(|&d| (0, d)).collect();
        return Some(GridFrame { rows: 1, cols: n as u32, anchor, coords });
    }
    if g.degree(anchor) != 2 {
        return None;
    }
    let side = (0..n)
        .filter(|&v| v != anchor && g.degree(v) == 2)
        .min_by_key(|&v| (from_anchor[v], v))?;
    let cols = from_anchor[side] + 1;
    if !n.is_multiple_of(cols as usize) {
        return None;
    }
    let rows = (n / cols as usize) as u32;
    let from_side = g.bfs(side);
    let mut taken = vec![false; n];
    let mut coords = Vec::with_capacity(n);
    for v in 0..n {
        let twice_col = i64::from(from_anchor[v]) - i64::from(from_side[v]) + i64::from(cols) - 1;
        if twice_col < 0 || twice_col % 2 != 0 {
            return None;
        }
        let col = (twice_col / 2) as u32;
        let row = from_anchor[v].checked_sub(col)?;
        if col >= cols || row >= rows {
            return None;
        }
        let slot = (row * cols + col) as usize;
        if std::mem::replace(&mut taken[slot], true) {
            return None;
        }
        coords.push((row, col));
    }
    let expected_edges = (rows * (cols - 1) + cols * (rows - 1)) as usize;
    let grid_like = g.edges().all(|(a, b)| {
        let ((r1, c1), (r2, c2)) = (coords[a], coords[b]);
        r1.abs_diff(r2) + c1.abs_diff(c2) == 1
    });
    (grid_like && g.edge_count() == expected_edges).then_some(GridFrame { rows, cols, anchor, coords })
}

/// How a raw piece coloring is produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Distance bands of `width` from the piece base point, two colors;
    /// acyclic pieces only.
    Band { width: u32 },
    /// The band formula on any piece.
    Shell { width: u32 },
    /// Offset-brick pattern on grid pieces, three colors.
    Brick { width: u32 },
    /// Everything color 0.
    Constant,
    /// Colors given per local vertex.
    Custom(Vec<Color>),
}

impl Strategy {
    /// Colors the strategy may use, minus one (at least 1).
    pub fn dimension(&self) -> u32 {
        match self {
            Strategy::Band { .. } | Strategy::Shell { .. } | Strategy::Constant => 1,
            Strategy::Brick { .. } => 2,
            Strategy::Custom(colors) => colors.iter().copied().max().unwrap_or(0).max(1),
        }
    }
}

/// Scale multipliers used to pick a strategy from a piece's shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyPlan {
    /// Band and shell width as a multiple of `r`.
    pub band_factor: u32,
    /// Brick height as a multiple of `r` (at least 2).
    pub brick_factor: u32,
}

impl Default for StrategyPlan {
    fn default() -> Self {
        StrategyPlan { band_factor: 1, brick_factor: 2 }
    }
}

impl StrategyPlan {
    pub fn choose(&self, shape: &PieceShape, r: u32) -> Strategy {
        match shape {
            PieceShape::Path | PieceShape::Tree => Strategy::Band { width: self.band_factor * r },
            PieceShape::Grid(_) => Strategy::Brick { width: self.brick_factor.max(2) * r },
            PieceShape::Cycle | PieceShape::Other => Strategy::Shell { width: self.band_factor * r },
        }
    }
}

/// `floor(d(root, v) / width) mod 2` with piece-internal distances.
pub fn band_coloring(gs: &GradedSpace, p: PieceId, root: Vertex, width: u32) -> Result<Vec<Color>, ColoringError> {
    let local = gs.local_index_checked(p, root)?;
    if !is_acyclic(gs.piece_graph(p)) {
        return Err(ColoringError::NotAcyclic(p));
    }
    bands(gs.piece_graph(p), local, width)
}

/// The band formula without the acyclicity requirement.
pub fn shell_coloring(gs: &GradedSpace, p: PieceId, root: Vertex, width: u32) -> Result<Vec<Color>, ColoringError> {
    let local = gs.local_index_checked(p, root)?;
    bands(gs.piece_graph(p), local, width)
}

fn bands(g: &Graph, root: usize, width: u32) -> Result<Vec<Color>, ColoringError> {
    if width == 0 {
        return Err(ColoringError::ZeroWidth);
    }
    Ok(g.bfs(root).into_iter().map(|d| (d / width) % 2).collect())
}

/// Offset bricks on a grid piece: rows of height `width`, bricks of length
/// `2 * width`, odd rows shifted by `width`. Brick adjacency is a triangular
/// lattice, colored properly with three colors.
pub fn brick_coloring(gs: &GradedSpace, p: PieceId, anchor: Vertex, width: u32) -> Result<Vec<Color>, ColoringError> {
    let local = gs.local_index_checked(p, anchor)?;
    if width == 0 {
        return Err(ColoringError::ZeroWidth);
    }
    let g = gs.piece_graph(p);
    let frame = grid_frame(g, local).ok_or_else(|| {
        if matches!(classify(gs, p), PieceShape::Grid(_)) {
            ColoringError::NotACorner { piece: p, vertex: anchor }
        } else {
            ColoringError::NotAGrid(p)
        }
    })?;
    Ok(frame.coords.iter().map(|&(row, col)| brick_color(row, col, width)).collect())
}

/// `(band, brick)` index of the brick holding grid point `(row, col)`.
fn brick_of(row: u32, col: u32, width: u32) -> (u32, u32) {
    let band = row / width;
    let shift = if band % 2 == 1 { width } else { 0 };
    (band, (col + shift) / (2 * width))
}

fn brick_color(row: u32, col: u32, width: u32) -> Color {
    let (band, brick) = brick_of(row, col, width);
    let (band, brick) = (i64::from(band), i64::from(brick));
    // Lattice coordinate of the brick along its band.
    let along = brick - (band + 1) / 2;
    (along - band).rem_euclid(3) as Color
}

/// Raw coloring `c'_P` of a piece under a strategy; band, shell and brick
/// patterns are anchored at the piece base point or at the grid anchor.
pub fn apply_strategy(gs: &GradedSpace, p: PieceId, strategy: &Strategy) -> Result<Vec<Color>, ColoringError> {
    let root = gs.piece_basepoint(p);
    match strategy {
        Strategy::Band { width } => band_coloring(gs, p, root, *width),
        Strategy::Shell { width } => shell_coloring(gs, p, root, *width),
        Strategy::Brick { width } => match classify(gs, p) {
            PieceShape::Grid(frame) => brick_coloring(gs, p, frame.anchor, *width),
            PieceShape::Path => brick_coloring(gs, p, path_end(gs, p), *width),
            _ => Err(ColoringError::NotAGrid(p)),
        },
        Strategy::Constant => Ok(vec![0; gs.piece(p).len()]),
        Strategy::Custom(colors) => {
            if colors.len() != gs.piece(p).len() {
                return Err(ColoringError::WrongLength { piece: p, expected: gs.piece(p).len(), got: colors.len() });
            }
            Ok(colors.clone())
        }
    }
}

fn path_end(gs: &GradedSpace, p: PieceId) -> Vertex {
    let g = gs.piece_graph(p);
    let end = (0..g.vertex_count()).find(|&v| g.degree(v) <= 1).unwrap_or(0);
    gs.piece(p)[end]
}

/// `c_P`: the raw coloring with the closed `2r`-ball around `x_P` set to 0.
pub fn recolor_base_ball(
    c_prime: &[Color],
    gs: &GradedSpace,
    p: PieceId,
    x_p: Vertex,
    setup: &ScaleSetup,
) -> Result<Vec<Color>, ColoringError> {
    let local = gs.local_index_checked(p, x_p)?;
    let mut c_p = c_prime.to_vec();
    for (v, _) in gs.piece_graph(p).bfs_within(local, setup.recolor_radius()) {
        c_p[v] = 0;
    }
    Ok(c_p)
}

/// The chain component of `x_P` among `c_P`-color-0 vertices of the piece,
/// sorted ascending (global ids).
pub fn base_component(
    c_p: &[Color],
    gs: &GradedSpace,
    p: PieceId,
    x_p: Vertex,
    setup: &ScaleSetup,
) -> Result<Vec<Vertex>, ColoringError> {
    let local = gs.local_index_checked(p, x_p)?;
    let g = gs.piece_graph(p);
    let reach = setup.chain.reach();
    let mut balls = Balls::new(g);
    let mut inside = vec![false; g.vertex_count()];
    let mut stack = vec![local];
    inside[local] = true;
    while let Some(u) = stack.pop() {
        for &(w, _) in balls.ball(u, reach) {
            if !inside[w] && c_p[w] == 0 {
                inside[w] = true;
                stack.push(w);
            }
        }
    }
    let piece = gs.piece(p);
    Ok((0..g.vertex_count()).filter(|&v| inside[v]).map(|v| piece[v]).collect())
}

/// Everything the assembled coloring needs from one piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceColoring {
    pub piece: PieceId,
    pub basepoint: Vertex,
    /// Piece vertices, ascending; the color vectors are aligned with it.
    pub vertices: Vec<Vertex>,
    pub c_prime: Vec<Color>,
    pub c_p: Vec<Color>,
    /// Membership in the base component, aligned with `vertices`.
    pub in_base_component: Vec<bool>,
}

impl PieceColoring {
    fn slot(&self, v: Vertex) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn c_p_at(&self, v: Vertex) -> Option<Color> {
        self.slot(v).map(|i| self.c_p[i])
    }

    pub fn c_prime_at(&self, v: Vertex) -> Option<Color> {
        self.slot(v).map(|i| self.c_prime[i])
    }

    pub fn in_base(&self, v: Vertex) -> bool {
        self.slot(v).is_some_and(|i| self.in_base_component[i])
    }

    pub fn base_component(&self) -> Vec<Vertex> {
        self.vertices
            .iter()
            .zip(&self.in_base_component)
            .filter(|(_, &b)| b)
            .map(|(&v, _)| v)
            .collect()
    }

    /// The base component without the base point itself.
    pub fn base_interior(&self) -> Vec<Vertex> {
        self.base_component().into_iter().filter(|&v| v != self.basepoint).collect()
    }
}

/// `f(r) = max(r, max_P magnitude(c'_P))`, written back into `setup`.
pub fn compute_f(gs: &GradedSpace, c_primes: &[Vec<Color>], setup: &mut ScaleSetup) -> u32 {
    let worst = c_primes
        .iter()
        .enumerate()
        .map(|(p, c)| piece_magnitude(gs, p, c, setup.chain).magnitude)
        .max()
        .unwrap_or(0);
    setup.f_r = worst.max(setup.r);
    setup.f_r
}

/// Checks raw colorings against the palette and the declared `f(r)`, then
/// derives `c_P` and the base component of every piece.
pub fn finish_pieces(
    gs: &GradedSpace,
    c_primes: Vec<Vec<Color>>,
    setup: &ScaleSetup,
) -> Result<Vec<PieceColoring>, ColoringError> {
    use rayon::prelude::*;
    if c_primes.len() != gs.piece_count() {
        return Err(ColoringError::Setup(format!(
            "{} piece colorings for {} pieces",
            c_primes.len(),
            gs.piece_count()
        )));
    }
    c_primes
        .into_par_iter()
        .enumerate()
        .map(|(p, c_prime)| {
            let vertices = gs.piece(p).to_vec();
            if c_prime.len() != vertices.len() {
                return Err(ColoringError::WrongLength { piece: p, expected: vertices.len(), got: c_prime.len() });
            }
            if let Some(&color) = c_prime.iter().find(|&&c| c > setup.n) {
                return Err(ColoringError::ColorOutOfRange { piece: p, color, n: setup.n });
            }
            let report = piece_magnitude(gs, p, &c_prime, setup.chain);
            if report.magnitude > setup.f_r {
                return Err(ColoringError::Uncertified {
                    piece: p,
                    measured: report.magnitude,
                    declared: setup.f_r,
                    witness: report.witness.unwrap_or((vertices[0], vertices[0])),
                });
            }
            let x_p = gs.piece_basepoint(p);
            let c_p = recolor_base_ball(&c_prime, gs, p, x_p, setup)?;
            let base = base_component(&c_p, gs, p, x_p, setup)?;
            let in_base_component = vertices.iter().map(|v| base.binary_search(v).is_ok()).collect();
            Ok(PieceColoring { piece: p, basepoint: x_p, vertices, c_prime, c_p, in_base_component })
        })
        .collect()
}

/// Chooses and applies a strategy for every piece. Returns the raw
/// colorings and the palette size they need (`n`).
pub fn plan_colorings(
    gs: &GradedSpace,
    plan: &StrategyPlan,
    r: u32,
    overrides: &[(PieceId, Strategy)],
) -> Result<(Vec<Vec<Color>>, u32), ColoringError> {
    let mut n = 1;
    let mut out = Vec::with_capacity(gs.piece_count());
    for p in 0..gs.piece_count() {
        let strategy = match overrides.iter().find(|(q, _)| *q == p) {
            Some((_, s)) => s.clone(),
            None => plan.choose(&classify(gs, p), r),
        };
        n = n.max(strategy.dimension());
        out.push(apply_strategy(gs, p, &strategy)?);
    }
    Ok((out, n))
}

/// Full piece-coloring pipeline: strategies, `f(r)`, certification,
/// recoloring and base components.
///
/// `n` defaults to the largest strategy dimension; a larger `n` may be
/// requested, a smaller one is an error.
pub fn color_pieces(
    gs: &GradedSpace,
    plan: &StrategyPlan,
    r: u32,
    mode: ChainMode,
    n: Option<u32>,
    overrides: &[(PieceId, Strategy)],
) -> Result<(ScaleSetup, Vec<PieceColoring>), ColoringError> {
    let (c_primes, needed) = plan_colorings(gs, plan, r, overrides)?;
    let n = match n {
        Some(n) if n < needed => {
            return Err(ColoringError::Setup(format!("strategies need n >= {needed}, got n = {n}")))
        }
        Some(n) => n,
        None => needed,
    };
    let mut setup = ScaleSetup::new(r, n, mode)?;
    compute_f(gs, &c_primes, &mut setup);
    let pieces = finish_pieces(gs, c_primes, &setup)?;
    Ok((setup, pieces))
}
