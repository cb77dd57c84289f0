//! Graph families used as fixtures: paths, cycles, stars, symmetric segments
//! of the integers and seeded random graphs. All have `m = 1`, `c = 0` and
//! unit weights unless stated otherwise.

use crate::graph::WeightedGraph;
use crate::rng::Lcg64;

fn unit(n: usize, edges: Vec<(usize, usize, f64)>) -> WeightedGraph {
    WeightedGraph::new(vec![1.0; n], vec![0.0; n], edges).expect("fixture edges are valid")
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> WeightedGraph {
    unit(n.max(1), (1..n).map(|i| (i - 1, i, 1.0)).collect())
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> WeightedGraph {
    assert!(n >= 3, "a cycle needs at least three vertices");
    unit(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect())
}

/// Star with center `0` and leaves `1..=leaves`: `b(k, n) > 0` iff exactly one
/// of `k`, `n` is the center.
pub fn star(leaves: usize) -> WeightedGraph {
    unit(leaves + 1, (1..=leaves).map(|k| (0, k, 1.0)).collect())
}

/// Star with center `0` and prescribed leaf weights `b(0, k)`.
pub fn weighted_star(weights: &[f64]) -> WeightedGraph {
    unit(
        weights.len() + 1,
        weights
            .iter()
            .enumerate()
            .map(|(k, &b)| (0, k + 1, b))
            .collect(),
    )
}

pub fn complete(n: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, 1.0));
        }
    }
    unit(n.max(1), edges)
}

/// The segment `{-R, .., R}` of the integer lattice: vertex `i` carries label
/// `i - R`, so the center `x0 = R` is labelled `"0"`.
pub fn z_segment(radius: usize) -> WeightedGraph {
    let n = 2 * radius + 1;
    let labels = (0..n)
        .map(|i| (i as i64 - radius as i64).to_string())
        .collect();
    WeightedGraph::with_labels(
        labels,
        vec![1.0; n],
        vec![0.0; n],
        (1..n).map(|i| (i - 1, i, 1.0)),
    )
    .expect("segment edges are valid")
}

/// Integer coordinate of a vertex of [`z_segment`].
pub fn z_coordinate(radius: usize, vertex: usize) -> i64 {
    vertex as i64 - radius as i64
}

/// Erdos-Renyi graph with unit weights; may be disconnected.
pub fn random_er(n: usize, p: f64, seed: u64) -> WeightedGraph {
    let mut rng = Lcg64::new(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.bernoulli(p) {
                edges.push((i, j, 1.0));
            }
        }
    }
    unit(n.max(1), edges)
}

/// A random recursive tree (vertex `i` attaches to a uniform earlier vertex)
/// plus independent extra edges with probability `p`. Always connected.
pub fn random_connected(n: usize, p: f64, seed: u64) -> WeightedGraph {
    unit(n.max(1), connected_edges(n, p, &mut Lcg64::new(seed)))
}

fn connected_edges(n: usize, p: f64, rng: &mut Lcg64) -> Vec<(usize, usize, f64)> {
    let mut adj = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.below(i);
        adj[i][j] = true;
        adj[j][i] = true;
        edges.push((j, i, 1.0));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.bernoulli(p) && !adj[i][j] {
                adj[i][j] = true;
                edges.push((i, j, 1.0));
            }
        }
    }
    edges
}

/// Connected random graph with `b` in `[0.5, 2]`, `m` in `[0.5, 2]` and
/// `c` in `[0, potential_max]`.
pub fn random_weighted(n: usize, p: f64, potential_max: f64, seed: u64) -> WeightedGraph {
    let mut rng = Lcg64::new(seed);
    let edges: Vec<_> = connected_edges(n, p, &mut rng)
        .into_iter()
        .map(|(i, j, _)| (i, j, rng.uniform(0.5, 2.0)))
        .collect();
    let measure = (0..n).map(|_| rng.uniform(0.5, 2.0)).collect();
    let potential = (0..n).map(|_| rng.uniform(0.0, potential_max)).collect();
    WeightedGraph::new(measure, potential, edges).expect("random weights are valid")
}
