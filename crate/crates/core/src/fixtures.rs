//! Named graphs used throughout the tests and bundled as edge-list files.

use crate::graph::Graph;

/// Two components: a triangle on {1,2,3} and a 4-cycle 4-5-6-7-4.
///
/// Edges recovered from the block-diagonal Laplacian of the disconnected
/// example graph.
pub fn figure1() -> Graph {
    Graph::from_one_based(7, &[(1, 2), (1, 3), (2, 3), (4, 5), (4, 7), (5, 6), (6, 7)])
        .expect("static fixture")
}

/// Connected 3-regular graph on 8 vertices that is not walk-regular.
pub fn figure2() -> Graph {
    Graph::from_one_based(
        8,
        &[
            (1, 2),
            (1, 5),
            (1, 6),
            (2, 3),
            (2, 8),
            (3, 4),
            (3, 8),
            (4, 5),
            (4, 7),
            (5, 7),
            (6, 7),
            (6, 8),
        ],
    )
    .expect("static fixture")
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges).expect("complete graph")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges).expect("cycle graph")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &edges).expect("path graph")
}

/// K_{a,b} with parts {0..a} and {a..a+b}.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in a..a + b {
            edges.push((u, v));
        }
    }
    Graph::new(a + b, &edges).expect("complete bipartite graph")
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, &edges).expect("petersen graph")
}

pub fn two_triangles() -> Graph {
    Graph::from_one_based(6, &[(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)])
        .expect("static fixture")
}

/// Circulant graph on `n` vertices joining `i` and `i ± j` for every jump `j`.
pub fn circulant(n: usize, jumps: &[usize]) -> Graph {
    let mut edges = std::collections::BTreeSet::new();
    for i in 0..n {
        for &j in jumps {
            let j = j % n;
            if j == 0 {
                continue;
            }
            let w = (i + j) % n;
            edges.insert((i.min(w), i.max(w)));
        }
    }
    let edges: Vec<_> = edges.into_iter().collect();
    Graph::new(n, &edges).expect("circulant graph")
}

/// Every bundled fixture by file stem.
pub fn all() -> Vec<(&'static str, Graph)> {
    vec![
        ("figure1", figure1()),
        ("figure2", figure2()),
        ("k3", complete(3)),
        ("c4", cycle(4)),
        ("petersen", petersen()),
        ("two_triangles", two_triangles()),
        ("path3", path(3)),
        ("k33", complete_bipartite(3, 3)),
    ]
}
