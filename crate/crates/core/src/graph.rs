//! Simple undirected graphs, relabeling, and the induced subgraphs that
//! feed the neighbourhood encodings.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("node {node} out of range for a graph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("permutation over {perm} nodes applied to a graph on {graph} nodes")]
    SizeMismatch { perm: usize, graph: usize },
    #[error("mapping is not a bijection on 0..{0}")]
    NotBijection(usize),
}

/// A simple undirected graph on nodes `0..n`, stored as a dense symmetric
/// adjacency matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl Graph {
    /// Graph on `n` nodes with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inserts the undirected edge `{u, v}`. Re-inserting an edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u * self.n + v] = true;
        self.adj[v * self.n + u] = true;
        Ok(())
    }

    fn check(&self, node: usize) -> Result<(), GraphError> {
        if node < self.n {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange { node, n: self.n })
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adj[u * self.n..(u + 1) * self.n];
        row.iter()
            .enumerate()
            .filter_map(|(v, &present)| present.then_some(v))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.neighbors(u).count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count() / 2
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            ((u + 1)..self.n)
                .filter(move |&v| self.has_edge(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut degrees: Vec<usize> = (0..self.n).map(|u| self.degree(u)).collect();
        degrees.sort_unstable();
        degrees
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Induced subgraph on `nodes`. Node `k` of the result is `nodes[k]`.
    pub fn induced(&self, nodes: &[usize]) -> Graph {
        let m = nodes.len();
        let mut sub = Graph::empty(m);
        for (a, &u) in nodes.iter().enumerate() {
            for (b, &v) in nodes.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    sub.adj[a * m + b] = true;
                    sub.adj[b * m + a] = true;
                }
            }
        }
        sub
    }

    /// Nodes adjacent to `i`, ascending.
    pub fn neighbourhood_nodes(&self, i: usize) -> Vec<usize> {
        self.neighbors(i).collect()
    }

    /// Nodes adjacent to both `i` and `j`, ascending.
    pub fn shared_neighbour_nodes(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&v| self.has_edge(i, v) && self.has_edge(j, v))
            .collect()
    }

    /// Nodes adjacent to `i` or `j`, ascending. `i` is a member only when
    /// it is adjacent to `j`, and vice versa.
    pub fn union_neighbour_nodes(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&v| self.has_edge(i, v) || self.has_edge(j, v))
            .collect()
    }

    /// Subgraph induced on the neighbours of `i`.
    pub fn neighbourhood_subgraph(&self, i: usize) -> Graph {
        self.induced(&self.neighbourhood_nodes(i))
    }

    /// Subgraph induced on the common neighbours of `i` and `j`. With
    /// `i == j` this is the neighbourhood subgraph of `i`.
    pub fn shared_neighbours_subgraph(&self, i: usize, j: usize) -> Graph {
        self.induced(&self.shared_neighbour_nodes(i, j))
    }

    pub fn union_neighbours_subgraph(&self, i: usize, j: usize) -> Graph {
        self.induced(&self.union_neighbour_nodes(i, j))
    }

    /// Relabels every node `u` as `p(u)`.
    pub fn permuted(&self, p: &Permutation) -> Result<Graph, GraphError> {
        if p.len() != self.n {
            return Err(GraphError::SizeMismatch {
                perm: p.len(),
                graph: self.n,
            });
        }
        let mut out = Graph::empty(self.n);
        for (u, v) in self.edges() {
            let (a, b) = (p.apply(u), p.apply(v));
            out.adj[a * self.n + b] = true;
            out.adj[b * self.n + a] = true;
        }
        Ok(out)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Free-function form of [`Graph::permuted`].
pub fn apply_permutation(g: &Graph, p: &Permutation) -> Result<Graph, GraphError> {
    g.permuted(p)
}

/// A bijection on `0..n`; `images[u]` is the image of `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn new(images: Vec<usize>) -> Result<Self, GraphError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n || std::mem::replace(&mut seen[img], true) {
                return Err(GraphError::NotBijection(n));
            }
        }
        Ok(Permutation { images })
    }

    /// Seeded Fisher-Yates shuffle. Identical `(n, seed)` always yields the
    /// same permutation.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut rng);
        Permutation { images }
    }

    #[inline]
    pub fn apply(&self, u: usize) -> usize {
        self.images[u]
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (u, &img) in self.images.iter().enumerate() {
            inv[img] = u;
        }
        Permutation { images: inv }
    }
}

pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    Permutation::random(n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            Graph::from_edges(2, [(0, 2)]),
            Err(GraphError::NodeOutOfRange { node: 2, n: 2 })
        );
        assert_eq!(Graph::from_edges(2, [(1, 1)]), Err(GraphError::SelfLoop(1)));
    }

    #[test]
    fn neighbourhood_examples() {
        let k3 = generators::complete(3);
        assert_eq!(k3.neighbourhood_subgraph(0), generators::complete(2));
        assert_eq!(path3().neighbourhood_subgraph(1), Graph::empty(2));
    }

    #[test]
    fn srg_16_6_2_2_neighbourhoods() {
        let rook = generators::rook_4x4();
        let shrikhande = generators::shrikhande();
        let two_triangles =
            Graph::from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        for i in 0..16 {
            let nh = rook.neighbourhood_subgraph(i);
            assert_eq!(nh.degree_sequence(), vec![2; 6]);
            assert!(!nh.is_connected());
            // two triangles: only 2-regular 6-node graph with 2 components
            // of size 3 each.
            assert!(crate::oracle::brute_force_isomorphism(&nh, &two_triangles)
                .unwrap()
                .is_some());

            let nh = shrikhande.neighbourhood_subgraph(i);
            assert!(
                crate::oracle::brute_force_isomorphism(&nh, &generators::cycle(6))
                    .unwrap()
                    .is_some()
            );
        }
    }

    #[test]
    fn shared_neighbour_examples() {
        let k3 = generators::complete(3);
        assert_eq!(k3.shared_neighbour_nodes(0, 1), vec![2]);
        assert_eq!(k3.shared_neighbours_subgraph(0, 1), Graph::empty(1));
        assert_eq!(path3().shared_neighbours_subgraph(0, 1), Graph::empty(0));

        for g in [generators::rook_4x4(), generators::shrikhande()] {
            for (i, j) in g.edges() {
                assert_eq!(g.shared_neighbours_subgraph(i, j).order(), 2);
            }
        }
    }

    #[test]
    fn union_neighbour_examples() {
        let k2 = generators::complete(2);
        assert_eq!(k2.union_neighbours_subgraph(0, 1), k2);
        assert_eq!(path3().union_neighbour_nodes(0, 2), vec![1]);
        assert_eq!(path3().union_neighbours_subgraph(0, 2), Graph::empty(1));
        assert_eq!(
            Graph::empty(2).union_neighbours_subgraph(0, 1),
            Graph::empty(0)
        );
    }

    #[test]
    fn permutation_examples() {
        let p = path3();
        assert_eq!(p.permuted(&Permutation::identity(3)).unwrap(), p);
        let k3 = generators::complete(3);
        for seed in 0..6 {
            assert_eq!(k3.permuted(&Permutation::random(3, seed)).unwrap(), k3);
        }
        let perm = Permutation::new(vec![2, 0, 1]).unwrap();
        let expected = Graph::from_edges(3, [(2, 0), (0, 1)]).unwrap();
        assert_eq!(p.permuted(&perm).unwrap(), expected);
        assert_eq!(
            p.permuted(&Permutation::identity(4)),
            Err(GraphError::SizeMismatch { perm: 4, graph: 3 })
        );
    }

    #[test]
    fn random_permutation_contract() {
        assert_eq!(random_permutation(1, 99), Permutation::identity(1));
        assert!(random_permutation(0, 5).is_empty());
        assert_eq!(random_permutation(12, 42), random_permutation(12, 42));
        let p = random_permutation(30, 7);
        assert!(Permutation::new(p.images().to_vec()).is_ok());
        assert_eq!(p.inverse().inverse(), p);
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
    }
}
