//! Seeded instance families used by the acceptance suite and sample configs.

use treegraded::forge::{gen_random, FreeProductSpec, ForgeSpec, PieceTemplate};
use treegraded::{Graph, Space};

use crate::experiment::{SpaceEntry, SpaceSource};

const FAMILIES: [&str; 4] = [
    "path:12@2,path:40@1,path:60@1,cycle:10@1,cycle:30@1",
    "grid:4x5@1,grid:12x12@1,path:20@2,cycle:16@1",
    "tree:3@1,tree:6@1,path:60@1,cycle:8@1,cycle:40@1",
    "path:1@3,path:3@2,cycle:3@1,grid:2x3@1,tree:2@1,grid:8x8@1,cycle:24@1",
];

/// `count` random specs cycling through four template families with
/// varied budgets, depths, spacings and branch caps.
pub fn random_specs(count: usize, seed: u64) -> Vec<ForgeSpec> {
    (0..count)
        .map(|i| ForgeSpec {
            templates: FAMILIES[i % FAMILIES.len()].split(',').map(|t| t.parse().expect("valid template")).collect(),
            piece_budget: 6 + (i * 7) % 29,
            max_tree_depth: 3 + (i % 4) as u32 * 3,
            attach_spacing: 1 + (i % 3) as u32,
            branch_cap: 1 + ((i / 3) % 3) as u32,
            seed: seed.wrapping_add(i as u64),
            subdivide: if i % 13 == 5 { 2 } else { 1 },
        })
        .collect()
}

pub fn random_entries(count: usize, seed: u64) -> Vec<SpaceEntry> {
    random_specs(count, seed)
        .into_iter()
        .enumerate()
        .map(|(i, spec)| SpaceEntry { name: format!("random-{i:02}"), source: SpaceSource::Random { spec } })
        .collect()
}

/// Coset-tree models of `Z*Z` (path pieces) and `Z^2*Z` (grid and path
/// pieces) at depths 2 to 4.
pub fn free_product_entries(seed: u64) -> Vec<SpaceEntry> {
    let mut out = Vec::new();
    for depth in 2..=4 {
        out.push(SpaceEntry {
            name: format!("zz-depth{depth}"),
            source: SpaceSource::Freeprod {
                spec: FreeProductSpec {
                    left: PieceTemplate::Path(6),
                    right: PieceTemplate::Path(6),
                    depth,
                    attach_spacing: 2,
                    branch_cap: 3,
                    seed: seed.wrapping_add(u64::from(depth)),
                },
            },
        });
        out.push(SpaceEntry {
            name: format!("z2z-depth{depth}"),
            source: SpaceSource::Freeprod {
                spec: FreeProductSpec {
                    left: PieceTemplate::Grid(8, 8),
                    right: PieceTemplate::Path(10),
                    depth,
                    attach_spacing: 3,
                    branch_cap: 3,
                    seed: seed.wrapping_add(10 + u64::from(depth)),
                },
            },
        });
    }
    out
}

/// Valid random spaces with at most `max_vertices` vertices, built from
/// small templates so that cycles and grids give several geodesics.
pub fn tiny_spaces(count: usize, max_vertices: usize, seed: u64) -> Vec<Space> {
    let templates: Vec<_> = ["path:1@2", "path:2@1", "cycle:3@1", "cycle:4@2", "cycle:5@1", "grid:2x2@2", "grid:2x3@1"]
        .iter()
        .map(|t| t.parse().expect("valid template"))
        .collect();
    let mut out = Vec::with_capacity(count);
    let mut attempt = 0u64;
    while out.len() < count {
        let spec = ForgeSpec {
            templates: templates.clone(),
            piece_budget: 1 + (attempt % 4) as usize,
            max_tree_depth: 3,
            attach_spacing: 1,
            branch_cap: 2,
            seed: seed.wrapping_add(attempt),
            subdivide: 1,
        };
        attempt += 1;
        if let Ok(space) = gen_random(&spec) {
            if space.graph().vertex_count() <= max_vertices {
                out.push(space);
            }
        }
    }
    out
}

/// Path `0..=len` with one piece per edge, based at 0.
pub fn edge_path(len: usize) -> Space {
    let edges: Vec<_> = (1..=len).map(|i| (i - 1, i)).collect();
    let pieces = (1..=len).map(|i| vec![i - 1, i]).collect();
    Space::new(Graph::new(len + 1, &edges).expect("path is connected"), pieces, 0).expect("valid pieces")
}

/// Path `0..=len` as a single piece, based at 0.
pub fn path_piece(len: usize) -> Space {
    let edges: Vec<_> = (1..=len).map(|i| (i - 1, i)).collect();
    Space::new(Graph::new(len + 1, &edges).expect("path is connected"), vec![(0..=len).collect()], 0)
        .expect("valid piece")
}
