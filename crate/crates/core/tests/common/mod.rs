#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgs_core::{Graph, Potential};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph, optionally with random extra host degree.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, with_deficits: bool) -> Graph {
    let mut edges = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if rng.random_bool(p) {
                edges.push((x, y));
            }
        }
    }
    let g = Graph::from_edges(n, edges).unwrap();
    if with_deficits {
        let host = (0..n).map(|x| g.degree(x) + rng.random_range(0..3)).collect();
        g.with_host_degrees(host).unwrap()
    } else {
        g
    }
}

/// Uniform random recursive tree.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|y| (rng.random_range(0..y), y)).collect();
    Graph::from_edges(n, edges).unwrap()
}

pub fn uniform_potential(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Potential {
    Potential::new((0..n).map(|_| rng.random_range(lo..hi)).collect())
}

/// Graph on up to `max_n` vertices with optional deficits.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
                proptest::collection::vec(0usize..3, n),
            )
        })
        .prop_map(|(n, bits, extra)| {
            let mut edges = Vec::new();
            let mut i = 0;
            for x in 0..n {
                for y in x + 1..n {
                    if bits[i] {
                        edges.push((x, y));
                    }
                    i += 1;
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            let host = (0..n).map(|x| g.degree(x) + extra[x]).collect();
            g.with_host_degrees(host).unwrap()
        })
}

/// Graph together with a potential whose entries lie in `[lo, hi]`, on a
/// quarter-integer lattice when `lattice` (exercising the exact path).
pub fn arb_instance(max_n: usize, lo: f64, hi: f64) -> impl Strategy<Value = (Graph, Potential)> {
    arb_graph(max_n).prop_flat_map(move |g| {
        let n = g.vertex_count();
        let lattice = proptest::collection::vec(
            ((lo * 4.0).ceil() as i64..=(hi * 4.0).floor() as i64).prop_map(|v| v as f64 / 4.0),
            n,
        );
        let real = proptest::collection::vec(lo..=hi, n);
        let q = prop_oneof![lattice, real].prop_map(Potential::new);
        (Just(g), q)
    })
}
