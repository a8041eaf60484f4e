//! Graph fixtures shared by the benchmark targets.

use qclique_core::Graph;

/// Complete graph on `n` vertices: every combination is a clique, so oracle
/// synthesis does maximal work per block.
pub fn complete(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Cycle on `n` vertices: triangle-free for n > 3, so synthesis prunes every
/// combination and simulation takes the no-solution diagnostic path.
pub fn ring(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).map(|u| (u.min((u + 1) % n), u.max((u + 1) % n))).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// 4-vertex graph with two triangles sharing the edge (0,3).
pub fn two_triangles() -> Graph {
    Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]).unwrap()
}
