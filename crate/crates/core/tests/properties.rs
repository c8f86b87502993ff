mod common;

use common::*;
use proptest::prelude::*;
use treegraded::forge::{gen_random, subdivide};
use treegraded::format::write_space;
use treegraded::metric::{canonical_geodesic, scale_components, shortest_dist};
use treegraded::nagata::Assembler;
use treegraded::piece_coloring::{color_pieces, magnitude, recolor_base_ball, ScaleSetup, StrategyPlan};
use treegraded::space::project_brute_force;
use treegraded::{ChainMode, ChainPredicate, GradedSpace};

fn graph_input() -> impl Strategy<Value = (Vec<usize>, Vec<(usize, usize)>)> {
    (1usize..40).prop_flat_map(|n| {
        (
            proptest::collection::vec(0usize..64, n),
            proptest::collection::vec((0usize..64, 0usize..64), 0..n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bfs_matches_floyd_warshall((parents, extra) in graph_input()) {
        let g = connected_graph(&parents, &extra);
        let d = floyd_warshall(&g);
        let n = g.vertex_count();
        for u in 0..n {
            prop_assert_eq!(&g.bfs(u), &d[u]);
            for v in 0..n {
                prop_assert_eq!(d[u][v], d[v][u]);
                prop_assert_eq!(d[u][v] == 0, u == v);
                for w in 0..n {
                    prop_assert!(d[u][w] <= d[u][v] + d[v][w]);
                }
            }
        }
    }

    #[test]
    fn canonical_geodesics_are_shortest_and_repeatable((parents, extra) in graph_input(), a in 0usize..64, b in 0usize..64) {
        let g = connected_graph(&parents, &extra);
        let (u, v) = (a % g.vertex_count(), b % g.vertex_count());
        let p = canonical_geodesic(&g, u, v).unwrap();
        prop_assert!(p.is_walk_in(&g));
        prop_assert_eq!(p.first(), u);
        prop_assert_eq!(p.last(), v);
        prop_assert_eq!(p.len() as u32, shortest_dist(&g, u, v).unwrap());
        prop_assert_eq!(p, canonical_geodesic(&g, u, v).unwrap());
    }

    #[test]
    fn scale_components_match_pairwise_oracle(
        (parents, extra) in graph_input(),
        mask in proptest::collection::vec(any::<bool>(), 40),
        r in 1u32..5,
        weak in any::<bool>(),
    ) {
        let g = connected_graph(&parents, &extra);
        let subset: Vec<usize> = (0..g.vertex_count()).filter(|&v| mask[v]).collect();
        prop_assume!(!subset.is_empty());
        let pred = if weak { ChainPredicate::weak(r) } else { ChainPredicate::strict(r) };
        let d = floyd_warshall(&g);
        let parts = scale_components(&g, &subset, pred);
        prop_assert_eq!(&parts, &brute_components(&d, &subset, pred.reach()));
        if !weak {
            for (i, a) in parts.iter().enumerate() {
                for b in &parts[i + 1..] {
                    for &x in a {
                        for &y in b {
                            prop_assert!(d[x][y] >= r);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn magnitude_matches_oracle_and_weak_dominates(
        (parents, extra) in graph_input(),
        colors in proptest::collection::vec(0u32..3, 40),
        r in 1u32..5,
    ) {
        let g = connected_graph(&parents, &extra);
        let colors = &colors[..g.vertex_count()];
        let d = floyd_warshall(&g);
        let strict = magnitude(&g, colors, ChainPredicate::strict(r)).magnitude;
        let weak = magnitude(&g, colors, ChainPredicate::weak(r)).magnitude;
        prop_assert_eq!(strict, brute_magnitude(&d, colors, r - 1));
        prop_assert_eq!(weak, brute_magnitude(&d, colors, r));
        prop_assert!(weak >= strict);
    }

    #[test]
    fn forge_output_is_valid_and_seeded(budget in 1usize..12, seed in any::<u64>()) {
        let a = gen_random(&mixed_spec(budget, seed)).unwrap();
        prop_assert!(a.validate().ok(), "{}", a.validate());
        prop_assert_eq!(a.piece_count(), budget);
        let b = gen_random(&mixed_spec(budget, seed)).unwrap();
        prop_assert_eq!(write_space(&a, &[]), write_space(&b, &[]));
    }

    #[test]
    fn projection_is_the_unique_nearest_point(budget in 1usize..8, seed in any::<u64>()) {
        let gs = GradedSpace::new(small_space(budget, seed)).unwrap();
        let d = floyd_warshall(gs.graph());
        for p in 0..gs.piece_count() {
            for x in 0..gs.graph().vertex_count() {
                let nearest = project_brute_force(gs.space(), p, x).unwrap();
                prop_assert_eq!(nearest.len(), 1);
                let px = gs.project(p, x).unwrap();
                prop_assert_eq!(px, nearest[0]);
                if gs.space().contains(p, x) {
                    prop_assert_eq!(px, x);
                }
                for y in 0..gs.graph().vertex_count() {
                    let py = gs.project(p, y).unwrap();
                    prop_assert!(d[px][py] <= d[x][y]);
                }
            }
        }
    }

    #[test]
    fn subdivision_scales_distances(budget in 1usize..6, seed in any::<u64>(), k in 1u32..4) {
        let s = small_space(budget, seed);
        let t = subdivide(&s, k).unwrap();
        prop_assert!(t.validate().ok());
        let n = s.graph().vertex_count();
        for u in 0..n {
            let before = s.graph().bfs(u);
            let after = t.graph().bfs(u);
            for v in 0..n {
                prop_assert_eq!(after[v], k * before[v]);
            }
        }
    }

    #[test]
    fn color_all_agrees_with_pointwise_evaluation(budget in 1usize..8, seed in any::<u64>(), r in 2u32..5) {
        let gs = GradedSpace::new(small_space(budget, seed)).unwrap();
        let (setup, pieces) = color_pieces(&gs, &StrategyPlan::default(), r, ChainMode::Strict, None, &[]).unwrap();
        let asm = Assembler::new(&gs, &setup, &pieces);
        let all = asm.color_all();
        prop_assert_eq!(all.colors[gs.basepoint()], 0);
        for v in 0..gs.graph().vertex_count() {
            prop_assert_eq!(all.colors[v], asm.cstar_color(v).unwrap().total);
            prop_assert!(all.colors[v] <= setup.n);
        }
    }

    #[test]
    fn piece_colorings_respect_their_contracts(budget in 1usize..8, seed in any::<u64>(), r in 2u32..5) {
        let gs = GradedSpace::new(small_space(budget, seed)).unwrap();
        let (setup, pieces) = color_pieces(&gs, &StrategyPlan::default(), r, ChainMode::Strict, None, &[]).unwrap();
        prop_assert!(setup.f_r >= r);
        for pc in &pieces {
            let local = gs.piece_graph(pc.piece);
            let x = gs.local_index(pc.piece, pc.basepoint).unwrap();
            let dist = local.bfs(x);
            for (i, &d) in dist.iter().enumerate().take(pc.vertices.len()) {
                if d <= 2 * r {
                    prop_assert_eq!(pc.c_p[i], 0);
                } else {
                    prop_assert_eq!(pc.c_p[i], pc.c_prime[i]);
                }
            }
            prop_assert_eq!(&pc.c_p, &recolor_base_ball(&pc.c_prime, &gs, pc.piece, pc.basepoint, &setup).unwrap());
            let base = pc.base_component();
            let diam = base.iter().flat_map(|&a| {
                let row = gs.graph().bfs(a);
                base.iter().map(move |&b| row[b])
            }).max().unwrap();
            prop_assert!(diam <= 8 * setup.f_r, "base component diameter {} > 8f = {}", diam, 8 * setup.f_r);
        }
        let check = ScaleSetup::new(r, setup.n, ChainMode::Strict).unwrap();
        prop_assert_eq!(check.color_period(), 99 * u64::from(r));
    }
}
