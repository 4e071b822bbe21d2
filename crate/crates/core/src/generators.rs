//! Named graph families and seeded random graphs used by the test corpora
//! and the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    Graph::from_edges(n, edges).expect("generator edges are in range and loop-free")
}

pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))))
}

pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|v| (v - 1, v)))
}

/// Cycle on `n >= 3` nodes, `0-1-...-(n-1)-0`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 nodes");
    build(n, (0..n).map(|v| (v, (v + 1) % n)))
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    build(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
}

/// Outer 5-cycle on 0..5, inner pentagram on 5..10, spokes `i - (i+5)`.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    build(10, outer.chain(inner).chain(spokes))
}

/// Cayley graph on Z4 x Z4 with the given connection set; node `(a, b)` is
/// index `4a + b`.
fn z4_squared(connection: &[(usize, usize)]) -> Graph {
    let mut edges = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for &(da, db) in connection {
                let u = 4 * a + b;
                let v = 4 * ((a + da) % 4) + (b + db) % 4;
                if u < v {
                    edges.push((u, v));
                }
            }
        }
    }
    build(16, edges)
}

/// The 4x4 rook's graph (lattice graph L(K4,4)), an SRG(16,6,2,2) whose
/// vertex neighbourhoods are two disjoint triangles.
pub fn rook_4x4() -> Graph {
    z4_squared(&[(0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0)])
}

/// The Shrikhande graph, the other SRG(16,6,2,2); its vertex
/// neighbourhoods are 6-cycles.
pub fn shrikhande() -> Graph {
    z4_squared(&[(0, 1), (0, 3), (1, 0), (3, 0), (1, 1), (3, 3)])
}

/// G(n, p) with a seeded generator.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    erdos_renyi_with(n, p, &mut rng)
}

pub fn erdos_renyi_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build(n, edges)
}

/// Resamples G(n, p) until the result is connected.
pub fn random_connected(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = erdos_renyi_with(n, p, &mut rng);
        if g.is_connected() {
            return g;
        }
    }
}
