//! Canonical numbers: the Perron number of a weight matrix that layers four
//! structural encodings on top of each other.
//!
//! For every ordered pair `(i, j)`, diagonal included,
//!
//! ```text
//! W(i,j) = 1/d(i,j) + NH(i) + NH(j) + SN(i,j) + UN(i,j)
//! ```
//!
//! where `1/d` is the reciprocal hop distance (zero on the diagonal) and
//! `NH`, `SN`, `UN` are the free energies of the neighbourhood, shared
//! neighbours, and union neighbours subgraphs. Every term depends only on
//! the graph structure around `i` and `j`, never on the labels, so the
//! result is invariant under relabeling.

use thiserror::Error;

use crate::graph::{Graph, Permutation};
use crate::real::Real;
use crate::spectral::{reciprocal_distance_matrix, PowerIteration, SpectralError, WeightMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CanonicalError {
    #[error("canonical numbers are defined for graphs with at least one node")]
    EmptyGraph,
    #[error("{found} node weights supplied for a graph on {expected} nodes")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// The fully encoded weight matrix together with the subgraph energy tables
/// it was assembled from.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedMatrix<R = f64> {
    base: WeightMatrix<R>,
    nh_table: Vec<R>,
    sn_table: WeightMatrix<R>,
    un_table: WeightMatrix<R>,
}

impl<R: Real> RefinedMatrix<R> {
    pub fn order(&self) -> usize {
        self.base.order()
    }

    pub fn base(&self) -> &WeightMatrix<R> {
        &self.base
    }

    /// Free energy of each node's neighbourhood subgraph.
    pub fn nh_table(&self) -> &[R] {
        &self.nh_table
    }

    pub fn sn_table(&self) -> &WeightMatrix<R> {
        &self.sn_table
    }

    pub fn un_table(&self) -> &WeightMatrix<R> {
        &self.un_table
    }

    /// Spreads each node weight onto every entry in that node's row and
    /// column: `M(i,j) = base(i,j) + w(i) + w(j)`.
    pub fn overlay(&self, weights: &NodeWeights) -> Result<WeightMatrix<R>, CanonicalError> {
        let n = self.order();
        if weights.len() != n {
            return Err(CanonicalError::DimensionMismatch {
                expected: n,
                found: weights.len(),
            });
        }
        let w: Vec<R> = weights.iter().map(R::from_f64).collect();
        Ok(WeightMatrix::from_fn(n, |i, j| {
            self.base.get(i, j) + w[i] + w[j]
        }))
    }

    /// Conjugates every table by `p`, as if the graph had been relabeled.
    pub fn permuted(&self, p: &Permutation) -> Self {
        let inv = p.inverse();
        RefinedMatrix {
            base: self.base.permuted(p),
            nh_table: (0..self.order())
                .map(|a| self.nh_table[inv.apply(a)])
                .collect(),
            sn_table: self.sn_table.permuted(p),
            un_table: self.un_table.permuted(p),
        }
    }
}

/// Nonnegative per-node energies injected on top of a refined matrix.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeWeights(Vec<f64>);

impl NodeWeights {
    pub fn zeros(n: usize) -> Self {
        NodeWeights(vec![0.0; n])
    }

    pub fn new(weights: Vec<f64>) -> Self {
        debug_assert!(weights.iter().all(|&w| w >= 0.0));
        NodeWeights(weights)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, weight: f64) {
        debug_assert!(weight >= 0.0);
        self.0[i] = weight;
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Computes canonical numbers with a configurable eigen-solver and scalar
/// type.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Encoder {
    pub solver: PowerIteration,
}

impl Encoder {
    pub fn new(solver: PowerIteration) -> Self {
        Encoder { solver }
    }

    fn energy<R: Real>(&self, g: &Graph) -> Result<R, SpectralError> {
        self.solver.subgraph_free_energy(g)
    }

    pub fn refine<R: Real>(&self, g: &Graph) -> Result<RefinedMatrix<R>, CanonicalError> {
        let n = g.order();
        if n == 0 {
            return Err(CanonicalError::EmptyGraph);
        }
        let nh_table = (0..n)
            .map(|i| self.energy(&g.neighbourhood_subgraph(i)))
            .collect::<Result<Vec<R>, _>>()?;

        let mut sn = vec![R::zero(); n * n];
        let mut un = vec![R::zero(); n * n];
        for i in 0..n {
            // The neighbourhood of i shared with itself is its neighbourhood.
            sn[i * n + i] = nh_table[i];
            un[i * n + i] = nh_table[i];
            for j in (i + 1)..n {
                let s = self.energy(&g.shared_neighbours_subgraph(i, j))?;
                let u = self.energy(&g.union_neighbours_subgraph(i, j))?;
                sn[i * n + j] = s;
                sn[j * n + i] = s;
                un[i * n + j] = u;
                un[j * n + i] = u;
            }
        }
        let sn_table = WeightMatrix::from_fn(n, |i, j| sn[i * n + j]);
        let un_table = WeightMatrix::from_fn(n, |i, j| un[i * n + j]);

        let distance = reciprocal_distance_matrix::<R>(g);
        let base = WeightMatrix::from_fn(n, |i, j| {
            distance.get(i, j) + nh_table[i] + nh_table[j] + sn_table.get(i, j) + un_table.get(i, j)
        });
        Ok(RefinedMatrix {
            base,
            nh_table,
            sn_table,
            un_table,
        })
    }

    pub fn canonical_number<R: Real>(&self, g: &Graph) -> Result<R, CanonicalError> {
        let refined = self.refine::<R>(g)?;
        Ok(self.solver.perron(refined.base())?)
    }

    pub fn weighted_canonical_number<R: Real>(
        &self,
        refined: &RefinedMatrix<R>,
        weights: &NodeWeights,
    ) -> Result<R, CanonicalError> {
        Ok(self.solver.perron(&refined.overlay(weights)?)?)
    }
}

pub fn refine(g: &Graph) -> Result<RefinedMatrix, CanonicalError> {
    Encoder::default().refine(g)
}

pub fn canonical_number(g: &Graph) -> Result<f64, CanonicalError> {
    Encoder::default().canonical_number(g)
}

pub fn overlay_node_weights(
    refined: &RefinedMatrix,
    weights: &NodeWeights,
) -> Result<WeightMatrix, CanonicalError> {
    refined.overlay(weights)
}

pub fn weighted_canonical_number(
    refined: &RefinedMatrix,
    weights: &NodeWeights,
) -> Result<f64, CanonicalError> {
    Encoder::default().weighted_canonical_number(refined, weights)
}
