mod common;

use common::*;
use treegraded::forge::{gen_free_product_model, gen_random, FreeProductSpec, PieceTemplate};
use treegraded::metric::canonical_geodesic;
use treegraded::nagata::{floor_trunc, Assembler, SegmentClass, Span, Variant};
use treegraded::piece_coloring::{
    band_coloring, brick_coloring, color_pieces, piece_magnitude, PieceShape, Strategy, StrategyPlan,
};
use treegraded::space::gluing_tree;
use treegraded::{ChainMode, ChainPredicate, Graph, GradedSpace, Path, Space};

fn single_piece(n: usize, edges: &[(usize, usize)]) -> GradedSpace {
    let g = Graph::new(n, edges).unwrap();
    GradedSpace::new(Space::new(g, vec![(0..n).collect()], 0).unwrap()).unwrap()
}

fn binary_tree(depth: u32) -> GradedSpace {
    let n = (1usize << (depth + 1)) - 1;
    let edges: Vec<_> = (1..n).map(|v| ((v - 1) / 2, v)).collect();
    single_piece(n, &edges)
}

fn grid(rows: usize, cols: usize) -> GradedSpace {
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
    single_piece(rows * cols, &edges)
}

/// Path `0..=short+long`: one piece per edge for the first `short` edges,
/// then a single piece of `long` edges.
fn edges_then_long(short: usize, long: usize) -> GradedSpace {
    let n = short + long + 1;
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    let mut pieces: Vec<Vec<usize>> = (1..=short).map(|i| vec![i - 1, i]).collect();
    if long > 0 {
        pieces.push((short..n).collect());
    }
    GradedSpace::new(Space::new(Graph::new(n, &edges).unwrap(), pieces, 0).unwrap()).unwrap()
}

#[test]
fn band_on_binary_tree_stays_within_two_widths_plus_two_scales() {
    let gs = binary_tree(8);
    let (l, r) = (4, 3);
    let colors = band_coloring(&gs, 0, 0, l).unwrap();
    let d = floyd_warshall(gs.graph());
    let oracle = brute_magnitude(&d, &colors, r - 1);
    assert_eq!(piece_magnitude(&gs, 0, &colors, ChainPredicate::strict(r)).magnitude, oracle);
    assert!(oracle <= 2 * l + 2 * r, "{oracle}");
}

#[test]
fn brick_on_twelve_grid_is_certified_by_the_oracle() {
    let gs = grid(12, 12);
    let r = 2;
    let (setup, _) =
        color_pieces(&gs, &StrategyPlan::default(), r, ChainMode::Strict, None, &[(0, Strategy::Brick { width: 4 })])
            .unwrap();
    assert_eq!(setup.n, 2);
    let PieceShape::Grid(frame) = treegraded::piece_coloring::classify(&gs, 0) else { panic!("grid expected") };
    let colors = brick_coloring(&gs, 0, frame.anchor, 4).unwrap();
    assert!(colors.iter().all(|&c| c <= 2));
    let oracle = brute_magnitude(&floyd_warshall(gs.graph()), &colors, r - 1);
    assert_eq!(setup.f_r, oracle.max(r));
    assert!(oracle < 12, "bricks must separate: {oracle}");
}

#[test]
fn degenerate_brick_matches_band_magnitudes() {
    let len = 40;
    let edges: Vec<_> = (1..=len).map(|i| (i - 1, i)).collect();
    let gs = single_piece(len + 1, &edges);
    for l in 2..6u32 {
        for r in 1..=l / 2 {
            let brick = brick_coloring(&gs, 0, 0, l).unwrap();
            let band = band_coloring(&gs, 0, 0, 2 * l).unwrap();
            let chain = ChainPredicate::strict(r.max(1));
            assert_eq!(
                piece_magnitude(&gs, 0, &brick, chain).magnitude,
                piece_magnitude(&gs, 0, &band, chain).magnitude,
                "L={l} r={r}"
            );
        }
    }
}

#[test]
fn compute_f_takes_the_worst_piece() {
    let spec = FreeProductSpec {
        left: PieceTemplate::Grid(5, 5),
        right: PieceTemplate::Path(9),
        depth: 2,
        attach_spacing: 3,
        branch_cap: 2,
        seed: 4,
    };
    let gs = GradedSpace::new(gen_free_product_model(&spec).unwrap()).unwrap();
    let r = 2;
    let (setup, pieces) = color_pieces(&gs, &StrategyPlan::default(), r, ChainMode::Strict, None, &[]).unwrap();
    let d = floyd_warshall(gs.graph());
    let worst = pieces
        .iter()
        .map(|pc| {
            let sub: Vec<Vec<u32>> = pc.vertices.iter().map(|&a| pc.vertices.iter().map(|&b| d[a][b]).collect()).collect();
            brute_magnitude(&sub, &pc.c_prime, r - 1)
        })
        .max()
        .unwrap();
    assert_eq!(setup.f_r, worst.max(r));
    assert_eq!(setup.n, 2);
}

#[test]
fn forty_piece_forge_satisfies_the_tree_identity() {
    let spec = mixed_spec(40, 2024);
    let s = gen_random(&spec).unwrap();
    assert!(s.validate().ok(), "{}", s.validate());
    let tree = gluing_tree(&s).unwrap();
    let cuts = s.cut_vertices().count();
    assert_eq!(tree.node_count(), s.piece_count() + cuts);
    assert_eq!(tree.edge_count() + 1, tree.node_count());
    let incidences: usize = s.cut_vertices().map(|v| s.pieces_of(v).len()).sum();
    assert_eq!(tree.edge_count(), incidences);
}

#[test]
fn free_product_models_are_tree_graded() {
    let zz = FreeProductSpec {
        left: PieceTemplate::Path(6),
        right: PieceTemplate::Path(6),
        depth: 4,
        attach_spacing: 2,
        branch_cap: 3,
        seed: 11,
    };
    let s = gen_free_product_model(&zz).unwrap();
    assert!(s.validate().ok());
    assert_eq!(s.graph().edge_count() + 1, s.graph().vertex_count(), "Z*Z model is a tree");
    let depths: Vec<u32> = {
        let t = gluing_tree(&s).unwrap();
        (0..s.piece_count()).map(|p| t.depth(p) / 2).collect()
    };
    assert_eq!(depths.iter().max(), Some(&3));

    let z2z = FreeProductSpec {
        left: PieceTemplate::Grid(8, 8),
        right: PieceTemplate::Path(10),
        depth: 3,
        attach_spacing: 3,
        branch_cap: 3,
        seed: 12,
    };
    let s = gen_free_product_model(&z2z).unwrap();
    assert!(s.validate().ok(), "{}", s.validate());
    assert!(s.piece_count() > 3);
}

#[test]
fn trace_segments_match_piece_intersections() {
    for seed in 0..20 {
        let gs = GradedSpace::new(small_space(10, seed)).unwrap();
        let (setup, pieces) = color_pieces(&gs, &StrategyPlan::default(), 2, ChainMode::Strict, None, &[]).unwrap();
        let asm = Assembler::new(&gs, &setup, &pieces);
        for x in 0..gs.graph().vertex_count() {
            let trace = asm.trace(x).unwrap();
            let gamma = &trace.gamma.vertices;
            let mut expected: Vec<(usize, Span)> = (0..gs.piece_count())
                .filter_map(|p| {
                    let pos: Vec<usize> = (0..gamma.len()).filter(|&i| gs.space().contains(p, gamma[i])).collect();
                    (pos.len() >= 2).then(|| (p, Span { start: pos[0], end: *pos.last().unwrap() }))
                })
                .collect();
            expected.sort_by_key(|(_, s)| s.start);
            let got: Vec<(usize, Span)> = trace.segments.iter().map(|s| (s.piece, s.span)).collect();
            assert_eq!(got, expected, "seed {seed} x {x}");
            for s in &trace.segments {
                assert_eq!(s.entry, gs.piece_basepoint(s.piece));
                assert_eq!(s.exit, gs.project(s.piece, x).unwrap());
                match s.class {
                    SegmentClass::Short => assert!(s.span.edge_count() as u32 <= 8 * setup.f_r),
                    SegmentClass::Long => assert!(s.span.edge_count() as u32 >= 2 * setup.r),
                }
            }
        }
    }
}

#[test]
fn single_piece_trace_has_stub_and_endpoint_betas() {
    let len = 30;
    let edges: Vec<_> = (1..=len).map(|i| (i - 1, i)).collect();
    let gs = single_piece(len + 1, &edges);
    let r = 3;
    let (setup, pieces) = color_pieces(&gs, &StrategyPlan::default(), r, ChainMode::Strict, None, &[]).unwrap();
    let asm = Assembler::new(&gs, &setup, &pieces);
    let x = 20;
    assert!(!pieces[0].in_base(x));
    let trace = asm.trace(x).unwrap();
    assert_eq!(trace.segments.len(), 1);
    assert_eq!(trace.segments[0].class, SegmentClass::Long);
    assert_eq!(trace.betas, vec![Span { start: 0, end: 2 }, Span { start: 20, end: 20 }]);
    let term = asm.cstar_color(x).unwrap();
    assert_eq!(term.total, pieces[0].c_p_at(x).unwrap());
    assert!(term.floor_terms.iter().all(|t| t.value == 0));
}

#[test]
fn single_piece_cstar_agrees_with_piece_coloring_off_the_base() {
    let gs = grid(9, 9);
    let (setup, pieces) = color_pieces(&gs, &StrategyPlan::default(), 2, ChainMode::Strict, None, &[]).unwrap();
    let colors = Assembler::new(&gs, &setup, &pieces).color_all().colors;
    let x_p = pieces[0].basepoint;
    let dist = gs.graph().bfs(x_p);
    for v in 0..gs.graph().vertex_count() {
        if dist[v] > 2 * setup.r && !pieces[0].in_base(v) {
            assert_eq!(colors[v], pieces[0].c_p_at(v).unwrap(), "vertex {v}");
        }
    }
}

#[test]
fn floor_trunc_on_an_edge_path_drops_one_edge() {
    let gs = edges_then_long(50, 0);
    for d in 1..=50 {
        let beta = canonical_geodesic(gs.graph(), 0, d).unwrap();
        assert_eq!(floor_trunc(gs.space(), &beta).unwrap().len(), d - 1);
    }
    let point = Path { vertices: vec![7] };
    assert_eq!(floor_trunc(gs.space(), &point).unwrap(), point);
}

#[test]
fn edge_path_alternates_with_period_198() {
    let len = 800;
    let gs = edges_then_long(len, 0);
    let (setup, pieces) = color_pieces(&gs, &StrategyPlan::default(), 2, ChainMode::Strict, None, &[]).unwrap();
    assert_eq!((setup.f_r, setup.n, setup.color_period()), (2, 1, 198));
    let asm = Assembler::new(&gs, &setup, &pieces);
    let cstar = asm.color_all().colors;
    for (d, &c) in cstar.iter().enumerate() {
        let expected = if d == 0 { 0 } else { ((d - 1) / 198 % 2) as u32 };
        assert_eq!(c, expected, "distance {d}");
    }
    assert!(asm.baseline_color(Variant::Naive).colors.iter().all(|&c| c == 0));
    assert_eq!(asm.baseline_color(Variant::Periodic).colors[0], 0);
}

/// Offsets `periodic(x) - c_P(x)` over a piece, mod the palette.
fn offsets(gs: &GradedSpace, variant: Variant, piece: usize) -> Vec<u32> {
    let (setup, pieces) = color_pieces(gs, &StrategyPlan::default(), 2, ChainMode::Strict, None, &[]).unwrap();
    let colors = Assembler::new(gs, &setup, &pieces).color_with(variant).colors;
    let pc = &pieces[piece];
    pc.vertices.iter().zip(&pc.c_p).map(|(&v, &c)| (colors[v] + setup.palette() - c) % setup.palette()).collect()
}

#[test]
fn periodic_variant_breaks_piece_restriction_where_cstar_does_not() {
    let long = 60;
    let found = (1..400).find(|&short| {
        let gs = edges_then_long(short, long);
        let off = offsets(&gs, Variant::Periodic, short);
        off.iter().any(|&o| o != off[0])
    });
    let short = found.expect("search finds an instance");
    let gs = edges_then_long(short, long);
    let off = offsets(&gs, Variant::Cstar, short);
    assert!(off.iter().all(|&o| o == off[0]), "c* restriction is a shifted c_P at {short}");
}
