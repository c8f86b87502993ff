//! Property suites over one space, reported as counts with witnesses.
//!
//! Exact suites visit every applicable vertex or piece; sampled suites draw
//! from a seeded generator so repeated runs agree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use treegraded::forge::SeededRng;
use treegraded::metric::{canonical_geodesic, Balls};
use treegraded::nagata::{Assembler, SegmentClass};
use treegraded::piece_coloring::piece_magnitude;
use treegraded::{Color, GradedSpace, PieceId, Vertex};

const MAX_WITNESSES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaResult {
    pub lemma: String,
    pub checked: u64,
    pub violations: u64,
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl LemmaResult {
    fn new(lemma: &str) -> Self {
        LemmaResult { lemma: lemma.to_string(), checked: 0, violations: 0, witnesses: Vec::new(), note: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    fn absorb(&mut self, other: LemmaResult) {
        self.checked += other.checked;
        self.violations += other.violations;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Sample sizes for the sampled suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub pair_samples: usize,
    pub chain_samples: usize,
    /// Maximum number of steps of a sampled chain.
    pub chain_steps: usize,
    pub color_chain_samples: usize,
    pub trace_samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            pair_samples: 10_000,
            chain_samples: 1_000,
            chain_steps: 24,
            color_chain_samples: 1_000,
            trace_samples: 300,
            seed: 0x7e5e_11a7,
        }
    }
}

pub const PROJECTION_UNIQUE: &str = "projection-unique";
pub const RETRACTION_LIPSCHITZ: &str = "retraction-lipschitz";
pub const CLOSE_PAIRS: &str = "close-pairs-share-projection";
pub const CHAIN_ENTRY: &str = "chain-passes-entry";
pub const PIECE_OFFSET: &str = "piece-offset";
pub const PIECE_COMPONENTS: &str = "piece-components";
pub const CLOSE_PROJECTION_COLOR: &str = "close-projection-color";
pub const PROJECTED_CHAIN: &str = "projected-chain-color";
pub const IN_PIECE_COMPONENT: &str = "in-piece-component";
pub const ALONG_GEODESIC: &str = "along-geodesic-component";

/// Suites that depend only on the space: projection uniqueness, the
/// retraction being 1-Lipschitz, and close pairs sharing a projection.
pub fn structural_suite(gs: &GradedSpace, cfg: &SuiteConfig, seed: u64) -> Vec<LemmaResult> {
    vec![projection_unique(gs), retraction_lipschitz(gs), close_pairs(gs, cfg.pair_samples, seed)]
}

fn projection_unique(gs: &GradedSpace) -> LemmaResult {
    let g = gs.graph();
    let parts: Vec<LemmaResult> = (0..g.vertex_count())
        .into_par_iter()
        .map(|x| {
            let mut out = LemmaResult::new(PROJECTION_UNIQUE);
            let dist = g.bfs(x);
            for p in 0..gs.piece_count() {
                let best = gs.piece(p).iter().map(|&v| dist[v]).min().expect("pieces are non-empty");
                let nearest: Vec<Vertex> = gs.piece(p).iter().copied().filter(|&v| dist[v] == best).collect();
                let projected = gs.project(p, x).expect("valid piece and vertex");
                out.record(nearest == [projected], || {
                    format!("piece {p}, x {x}: nearest {nearest:?}, projection {projected}")
                });
            }
            out
        })
        .collect();
    merge(PROJECTION_UNIQUE, parts)
}

/// Checking adjacent pairs suffices: distances are path lengths, so a map
/// moving neighbours at most one apart moves any pair at most its distance.
fn retraction_lipschitz(gs: &GradedSpace) -> LemmaResult {
    let g = gs.graph();
    let parts: Vec<LemmaResult> = (0..gs.piece_count())
        .into_par_iter()
        .map(|p| {
            let mut out = LemmaResult::new(RETRACTION_LIPSCHITZ);
            let proj: Vec<Vertex> = (0..g.vertex_count()).map(|x| gs.project(p, x).unwrap()).collect();
            for (x, y) in g.edges() {
                let (a, b) = (proj[x], proj[y]);
                out.record(a == b || g.has_edge(a, b), || format!("piece {p}: edge {x}-{y} maps to {a}, {b}"));
            }
            for &v in gs.piece(p) {
                out.record(proj[v] == v, || format!("piece {p}: member {v} maps to {}", proj[v]));
            }
            out
        })
        .collect();
    merge(RETRACTION_LIPSCHITZ, parts)
}

fn close_pairs(gs: &GradedSpace, samples: usize, seed: u64) -> LemmaResult {
    let g = gs.graph();
    let mut rng = SeededRng::new(seed);
    let mut out = LemmaResult::new(CLOSE_PAIRS);
    let per_origin = 100;
    let mut remaining = if gs.piece_count() == 0 { 0 } else { samples };
    while remaining > 0 {
        let x = rng.below(g.vertex_count());
        let dist = g.bfs(x);
        let mut order: Vec<Vertex> = (0..g.vertex_count()).collect();
        order.sort_by_key(|&v| (dist[v], v));
        for _ in 0..per_origin.min(remaining) {
            remaining -= 1;
            let p = rng.below(gs.piece_count());
            let px = gs.project(p, x).unwrap();
            let radius = dist[px];
            let ball = order.partition_point(|&v| dist[v] <= radius);
            let y = order[rng.below(ball)];
            let py = gs.project(p, y).unwrap();
            out.record(px == py, || format!("piece {p}: x {x}, y {y}, d(x,P) {radius}, projections {px} and {py}"));
        }
    }
    out
}

/// Weak `r`-chains drawn as concatenated random walks of at most `r` edges.
/// For every piece holding an edge of the canonical geodesic between the
/// chain ends, some chain point must project to the geodesic's entry into
/// the piece and lie within `r` of it. Pieces touching the geodesic in one
/// vertex are skipped: other geodesics may avoid that vertex.
pub fn chain_suite(gs: &GradedSpace, r: u32, cfg: &SuiteConfig, seed: u64) -> LemmaResult {
    let g = gs.graph();
    let space = gs.space();
    let mut rng = SeededRng::new(seed);
    let mut out = LemmaResult::new(CHAIN_ENTRY);
    let mut balls = Balls::new(g);
    if g.edge_count() == 0 {
        return out;
    }
    for _ in 0..cfg.chain_samples {
        let mut chain = vec![rng.below(g.vertex_count())];
        for _ in 0..rng.between(1, cfg.chain_steps.max(1)) {
            let mut v = *chain.last().unwrap();
            for _ in 0..rng.between(1, r as usize) {
                v = *rng.pick(g.neighbors(v));
            }
            chain.push(v);
        }
        let (x0, xm) = (chain[0], *chain.last().unwrap());
        let omega = canonical_geodesic(g, x0, xm).unwrap().vertices;
        let mut met: Vec<(PieceId, Vertex)> = Vec::new();
        for w in omega.windows(2) {
            let p = space.edge_piece(w[0], w[1]).expect("validated space");
            if met.last().map(|&(q, _)| q) != Some(p) {
                met.push((p, w[0]));
            }
        }
        for (p, entry) in met {
            let near: Vec<Vertex> = balls.ball(entry, r).iter().map(|&(v, _)| v).collect();
            let ok = gs.project(p, x0).unwrap() == entry
                && chain.iter().any(|&x| near.contains(&x) && gs.project(p, x).unwrap() == entry);
            out.record(ok, || format!("piece {p}, entry {entry}, chain {chain:?}"));
        }
    }
    out
}

/// Suites over an assembled coloring. `components` are the chain
/// components of `colors` under the setup's chain predicate.
pub fn coloring_suite(
    asm: &Assembler<'_>,
    colors: &[Color],
    components: &[Vec<Vertex>],
    cfg: &SuiteConfig,
    seed: u64,
) -> Vec<LemmaResult> {
    let mut component_of = vec![0usize; colors.len()];
    for (i, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v] = i;
        }
    }
    let (offset, piece_components) = piece_offsets(asm, colors);
    vec![
        offset,
        piece_components,
        close_projection_color(asm, colors),
        projected_chains(asm, colors, cfg.color_chain_samples, cfg.chain_steps, seed),
        in_piece_components(asm, components),
        along_geodesic(asm, components, &component_of, cfg.trace_samples, seed ^ 0x5eed),
    ]
}

/// Pointwise offset `c*(x) - c_P(x) - c*(x_P)` in {0, 1} on every piece
/// minus its base point, and in-piece components of each color within
/// `8 f`. The note counts pieces whose offset is not constant.
fn piece_offsets(asm: &Assembler<'_>, colors: &[Color]) -> (LemmaResult, LemmaResult) {
    let gs = asm.gs;
    let pal = asm.setup.palette();
    let bound = 8 * asm.setup.f_r;
    let mut offset = LemmaResult::new(PIECE_OFFSET);
    let mut comps = LemmaResult::new(PIECE_COMPONENTS);
    let mut mixed = 0;
    for pc in asm.pieces {
        let base = colors[pc.basepoint];
        let mut seen = Vec::new();
        for (&x, &c) in pc.vertices.iter().zip(&pc.c_p) {
            if x == pc.basepoint {
                continue;
            }
            let o = (colors[x] + 2 * pal - c - base) % pal;
            if !seen.contains(&o) {
                seen.push(o);
            }
            offset.record(o <= 1, || format!("piece {}, x {x}: offset {o}", pc.piece));
        }
        if seen.len() > 1 {
            mixed += 1;
        }
        let local: Vec<Color> = pc.vertices.iter().map(|&v| colors[v]).collect();
        let report = piece_magnitude(gs, pc.piece, &local, asm.setup.chain);
        comps.record(report.magnitude <= bound, || {
            format!("piece {}: component diameter {} > {bound} at {:?}", pc.piece, report.magnitude, report.witness)
        });
    }
    offset.note = Some(format!("offset not constant on {mixed} of {} pieces", gs.piece_count()));
    (offset, comps)
}

/// Points within `r` of a piece whose projection avoids the base component
/// share the projection's color.
fn close_projection_color(asm: &Assembler<'_>, colors: &[Color]) -> LemmaResult {
    let gs = asm.gs;
    let r = asm.setup.r;
    let parts: Vec<LemmaResult> = asm
        .pieces
        .par_iter()
        .map(|pc| {
            let mut out = LemmaResult::new(CLOSE_PROJECTION_COLOR);
            for (x, d, _) in gs.graph().multi_source_bfs(&pc.vertices, r) {
                if d == 0 {
                    continue;
                }
                let y = gs.project(pc.piece, x).unwrap();
                if pc.in_base(y) {
                    continue;
                }
                out.record(colors[x] == colors[y], || {
                    format!("piece {}: x {x} color {}, projection {y} color {}", pc.piece, colors[x], colors[y])
                });
            }
            out
        })
        .collect();
    merge(CLOSE_PROJECTION_COLOR, parts)
}

/// Same-color chains leaving a piece and returning to it project to
/// same-color chains, unless a projection lands in the base component.
fn projected_chains(asm: &Assembler<'_>, colors: &[Color], samples: usize, steps: usize, seed: u64) -> LemmaResult {
    let gs = asm.gs;
    let reach = asm.setup.chain.reach();
    let mut rng = SeededRng::new(seed);
    let mut balls = Balls::new(gs.graph());
    let mut out = LemmaResult::new(PROJECTED_CHAIN);
    let mut skipped = 0u64;
    if gs.piece_count() == 0 {
        return out;
    }
    for _ in 0..samples {
        let p = rng.below(gs.piece_count());
        let x0 = *rng.pick(gs.piece(p));
        let color = colors[x0];
        let mut chain = vec![x0];
        for _ in 0..rng.between(1, steps.max(1)) {
            let next: Vec<Vertex> = balls
                .ball(*chain.last().unwrap(), reach)
                .iter()
                .map(|&(v, _)| v)
                .filter(|&v| colors[v] == color)
                .collect();
            chain.push(*rng.pick(&next));
        }
        let Some(end) = (1..chain.len()).rev().find(|&i| gs.space().contains(p, chain[i])) else {
            skipped += 1;
            continue;
        };
        let chain = &chain[..=end];
        let proj: Vec<Vertex> = chain.iter().map(|&x| gs.project(p, x).unwrap()).collect();
        if proj.iter().any(|&y| asm.pieces[p].in_base(y)) {
            skipped += 1;
            continue;
        }
        let mut ok = proj.iter().all(|&y| colors[y] == color);
        for w in proj.windows(2) {
            ok &= balls.ball(w[0], reach).iter().any(|&(v, _)| v == w[1]);
        }
        out.record(ok, || format!("piece {p}, color {color}, chain {chain:?}, projections {proj:?}"));
    }
    out.note = Some(format!("{skipped} sampled chains not applicable"));
    out
}

/// Two vertices of one piece in one same-color component lie within `36 f`.
fn in_piece_components(asm: &Assembler<'_>, components: &[Vec<Vertex>]) -> LemmaResult {
    let gs = asm.gs;
    let bound = 36 * asm.setup.f_r;
    let parts: Vec<LemmaResult> = components
        .par_iter()
        .map(|comp| {
            let mut out = LemmaResult::new(IN_PIECE_COMPONENT);
            let mut by_piece: Vec<(PieceId, Vertex)> =
                comp.iter().flat_map(|&v| gs.space().pieces_of(v).iter().map(move |&p| (p, v))).collect();
            by_piece.sort_unstable();
            for group in by_piece.chunk_by(|a, b| a.0 == b.0) {
                if group.len() < 2 {
                    continue;
                }
                let p = group[0].0;
                let g = gs.piece_graph(p);
                let locals: Vec<usize> = group.iter().map(|&(_, v)| gs.local_index(p, v).unwrap()).collect();
                let mut worst = (0, group[0].1, group[0].1);
                for (i, &a) in locals.iter().enumerate() {
                    let dist = g.bfs(a);
                    for (j, &b) in locals.iter().enumerate() {
                        if dist[b] > worst.0 {
                            worst = (dist[b], group[i].1, group[j].1);
                        }
                    }
                }
                out.record(worst.0 <= bound, || {
                    format!("piece {p}: {} and {} at distance {} > {bound}", worst.1, worst.2, worst.0)
                });
            }
            out
        })
        .collect();
    merge(IN_PIECE_COMPONENT, parts)
}

/// A same-color chain from `x` to a point `x_m` of the canonical geodesic
/// from the base point to `x` ends within `140 f` of `x`, whenever no long
/// piece of the geodesic straddles `x_m`.
fn along_geodesic(
    asm: &Assembler<'_>,
    components: &[Vec<Vertex>],
    component_of: &[usize],
    samples: usize,
    seed: u64,
) -> LemmaResult {
    let gs = asm.gs;
    let g = gs.graph();
    let reach = asm.setup.chain.reach();
    let bound = 140 * u64::from(asm.setup.f_r);
    let mut rng = SeededRng::new(seed);
    let mut out = LemmaResult::new(ALONG_GEODESIC);
    let mut near = vec![false; g.vertex_count()];
    for _ in 0..samples.min(g.vertex_count()) {
        let x = rng.below(g.vertex_count());
        let comp = &components[component_of[x]];
        let touched: Vec<Vertex> = g.multi_source_bfs(comp, reach).into_iter().map(|(v, _, _)| v).collect();
        for &v in &touched {
            near[v] = true;
        }
        let trace = asm.trace(x).unwrap();
        let len = trace.gamma.len();
        let long: Vec<_> = trace.segments.iter().filter(|s| s.class == SegmentClass::Long).map(|s| s.span).collect();
        for (i, &v) in trace.gamma.vertices.iter().enumerate() {
            if !near[v] || long.iter().any(|s| s.start < i && i < s.end) {
                continue;
            }
            let d = (len - i) as u64;
            out.record(d <= bound, || format!("x {x}: reaches geodesic point {v} at distance {d} > {bound}"));
        }
        for v in touched {
            near[v] = false;
        }
    }
    out
}

fn merge(name: &str, parts: Vec<LemmaResult>) -> LemmaResult {
    let mut out = LemmaResult::new(name);
    for part in parts {
        out.absorb(part);
    }
    out
}
