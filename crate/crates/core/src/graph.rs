//! Simple undirected graphs and their degree, adjacency and Laplacian matrices.
//!
//! Vertices are 0-based inside the library. The edge-list text format and
//! everything the CLI prints are 1-based; the conversion happens only in
//! [`Graph::parse_edge_list`], [`Graph::to_edge_list`] and the report layer.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
}

impl Graph {
    /// Builds a graph from 0-based edges. Rejects self-loops, out-of-range
    /// endpoints and repeated edges (in either orientation).
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (idx, &(u, v)) in edges.iter().enumerate() {
            check_edge(n, u, v, &set).map_err(|message| Error::Parse {
                line: idx + 1,
                message,
            })?;
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self::from_edge_set(n, set))
    }

    /// Same as [`Graph::new`] with 1-based labels.
    pub fn from_one_based(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let shifted: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(u, v)| (u.wrapping_sub(1), v.wrapping_sub(1)))
            .collect();
        Self::new(n, &shifted)
    }

    fn from_edge_set(n: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let (components, component_of) = find_components(&neighbors);
        Graph {
            n,
            edges,
            neighbors,
            components,
            component_of,
        }
    }

    /// Parses the edge-list format: `#` comment lines, a header `n m`, then
    /// `m` lines `u v` with 1-based endpoints.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "missing header line \"n m\"".into(),
        })?;
        let (n, m) = parse_pair(header).map_err(|message| Error::Parse {
            line: header_line,
            message: format!("malformed header: {message}"),
        })?;
        if n == 0 {
            return Err(Error::Parse {
                line: header_line,
                message: "vertex count must be positive".into(),
            });
        }

        let mut set = BTreeSet::new();
        let mut last_line = header_line;
        for (line, body) in lines {
            last_line = line;
            if set.len() == m {
                return Err(Error::Parse {
                    line,
                    message: format!("more edges than the {m} declared in the header"),
                });
            }
            let (u, v) = parse_pair(body).map_err(|message| Error::Parse { line, message })?;
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::Parse {
                    line,
                    message: format!("vertex index out of range 1..={n} in edge {u} {v}"),
                });
            }
            check_edge(n, u - 1, v - 1, &set).map_err(|message| Error::Parse { line, message })?;
            set.insert(((u - 1).min(v - 1), (u - 1).max(v - 1)));
        }
        if set.len() != m {
            return Err(Error::Parse {
                line: last_line,
                message: format!("header declares {m} edges but {} were listed", set.len()),
            });
        }
        Ok(Self::from_edge_set(n, set))
    }

    /// Serializes back to the edge-list format (1-based, sorted edges).
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as 0-based pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    /// The common degree if every vertex has the same degree.
    pub fn is_regular(&self) -> Option<usize> {
        let degrees = self.degree_sequence();
        let first = degrees[0];
        degrees.iter().all(|&d| d == first).then_some(first)
    }

    pub fn adjacency_matrix(&self) -> DenseMatrix {
        let mut a = DenseMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    pub fn degree_matrix(&self) -> DenseMatrix {
        let d: Vec<f64> = self.degree_sequence().into_iter().map(|d| d as f64).collect();
        DenseMatrix::from_diagonal(&d)
    }

    /// L = D - A.
    pub fn laplacian_matrix(&self) -> DenseMatrix {
        let mut l = DenseMatrix::zeros(self.n, self.n);
        for (v, nb) in self.neighbors.iter().enumerate() {
            l[(v, v)] = nb.len() as f64;
        }
        for &(u, v) in &self.edges {
            l[(u, v)] = -1.0;
            l[(v, u)] = -1.0;
        }
        l
    }

    /// Whether each component occupies a contiguous range of labels.
    pub fn is_component_contiguous(&self) -> bool {
        let mut next = 0;
        for comp in &self.components {
            if comp.first() != Some(&next) || comp.last() != Some(&(next + comp.len() - 1)) {
                return false;
            }
            next += comp.len();
        }
        true
    }

    /// Contiguous `[start, end)` label ranges per component. Only meaningful
    /// when [`Graph::is_component_contiguous`] holds.
    pub fn component_ranges(&self) -> Vec<(usize, usize)> {
        self.components
            .iter()
            .map(|c| (c[0], c[c.len() - 1] + 1))
            .collect()
    }

    /// Relabels vertices so that components occupy contiguous label ranges.
    ///
    /// Components keep their order (by smallest vertex) and vertices keep
    /// their relative order inside each component. Returns the relabeled
    /// graph and `perm` with `perm[old] = new`; `perm` is the identity when
    /// the labeling is already contiguous.
    pub fn relabel_by_component(&self) -> (Graph, Vec<usize>) {
        let mut perm = vec![0; self.n];
        let mut next = 0;
        for comp in &self.components {
            for &v in comp {
                perm[v] = next;
                next += 1;
            }
        }
        let edges: BTreeSet<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        (Graph::from_edge_set(self.n, edges), perm)
    }
}

fn check_edge(
    n: usize,
    u: usize,
    v: usize,
    seen: &BTreeSet<(usize, usize)>,
) -> std::result::Result<(), String> {
    if u >= n || v >= n {
        return Err(format!("vertex index out of range in edge {} {}", u.wrapping_add(1), v.wrapping_add(1)));
    }
    if u == v {
        return Err(format!("self-loop at vertex {}", u + 1));
    }
    if seen.contains(&(u.min(v), u.max(v))) {
        return Err(format!("duplicate edge {} {}", u + 1, v + 1));
    }
    Ok(())
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let mut it = s.split_whitespace();
    let a = it.next().ok_or("expected two integers")?;
    let b = it.next().ok_or("expected two integers")?;
    if it.next().is_some() {
        return Err(format!("expected two integers, found \"{s}\""));
    }
    let a = a.parse::<usize>().map_err(|e| format!("bad integer \"{a}\": {e}"))?;
    let b = b.parse::<usize>().map_err(|e| format!("bad integer \"{b}\": {e}"))?;
    Ok((a, b))
}

fn find_components(neighbors: &[Vec<usize>]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let n = neighbors.len();
    let mut component_of = vec![usize::MAX; n];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if component_of[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![start];
        component_of[start] = id;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &w in &neighbors[u] {
                if component_of[w] == usize::MAX {
                    component_of[w] = id;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    (components, component_of)
}
