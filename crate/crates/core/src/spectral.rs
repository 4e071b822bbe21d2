//! Shortest distances, reciprocal-distance weights, and Perron-Frobenius
//! quantities computed by shifted power iteration.
//!
//! Every routine is generic over [`Real`] so the same code runs in native
//! double precision or in double-double arithmetic.

use std::cmp::Ordering;

use thiserror::Error;

use crate::graph::{Graph, Permutation};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("power iteration did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("matrix is reducible (eigenvector component {component} is not positive)")]
    Reducible { component: usize },
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry {index} is negative or not finite")]
    InvalidEntry { index: usize },
    #[error("stationary distribution needs at least one node")]
    Empty,
}

/// Hop counts between all node pairs. Unreachable pairs hold the surrogate
/// `n`, which exceeds every possible diameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<usize>,
}

impl DistanceMatrix {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.d[i * self.n + j]
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// The value standing in for "no path".
    pub fn unreachable(&self) -> usize {
        self.n
    }
}

/// Floyd-Warshall over unit edge weights.
pub fn all_pairs_shortest_distance(g: &Graph) -> DistanceMatrix {
    let n = g.order();
    let inf = usize::MAX / 2;
    let mut d = vec![inf; n * n];
    for i in 0..n {
        d[i * n + i] = 0;
    }
    for (u, v) in g.edges() {
        d[u * n + v] = 1;
        d[v * n + u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik == inf {
                continue;
            }
            for j in 0..n {
                let through = dik + d[k * n + j];
                if through < d[i * n + j] {
                    d[i * n + j] = through;
                }
            }
        }
    }
    for x in &mut d {
        if *x == inf {
            *x = n;
        }
    }
    DistanceMatrix { n, d }
}

/// Dense square nonnegative matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix<R = f64> {
    n: usize,
    w: Vec<R>,
}

impl<R: Real> WeightMatrix<R> {
    pub fn zeros(n: usize) -> Self {
        WeightMatrix {
            n,
            w: vec![R::zero(); n * n],
        }
    }

    /// Validates length and nonnegativity.
    pub fn new(n: usize, entries: Vec<R>) -> Result<Self, SpectralError> {
        if entries.len() != n * n {
            return Err(SpectralError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        if let Some(index) = entries.iter().position(|&x| {
            !matches!(
                x.partial_cmp(&R::zero()),
                Some(Ordering::Greater | Ordering::Equal)
            ) || !x.to_f64().is_finite()
        }) {
            return Err(SpectralError::InvalidEntry { index });
        }
        Ok(WeightMatrix { n, w: entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let w = (0..n * n).map(|k| f(k / n, k % n)).collect();
        WeightMatrix { n, w }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> R {
        self.w[i * self.n + j]
    }

    pub fn entries(&self) -> &[R] {
        &self.w
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.w[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        WeightMatrix::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `P W P^T`: entry `(p(i), p(j))` of the result is entry `(i, j)` here.
    pub fn permuted(&self, p: &Permutation) -> Self {
        let inv = p.inverse();
        WeightMatrix::from_fn(self.n, |a, b| self.get(inv.apply(a), inv.apply(b)))
    }

    pub fn to_f64(&self) -> WeightMatrix<f64> {
        WeightMatrix {
            n: self.n,
            w: self.w.iter().map(|x| x.to_f64()).collect(),
        }
    }

    /// Strong connectivity of the support digraph.
    pub fn is_irreducible(&self) -> bool {
        let reach = |forward: bool| {
            let mut seen = vec![false; self.n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(u) = stack.pop() {
                for (v, seen_v) in seen.iter_mut().enumerate() {
                    let x = if forward {
                        self.get(u, v)
                    } else {
                        self.get(v, u)
                    };
                    if !*seen_v && x > R::zero() {
                        *seen_v = true;
                        stack.push(v);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        self.n <= 1 || (reach(true) && reach(false))
    }

    fn shifted_product(&self, x: &[R], y: &mut [R]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = x[i];
            for (wij, &xj) in self.row(i).iter().zip(x) {
                acc += *wij * xj;
            }
            *yi = acc;
        }
    }
}

/// Perron root, its unit left and right eigenvectors, and the Parry
/// stationary distribution `pi_i ~ left_i * right_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult<R = f64> {
    pub perron: R,
    pub right_vec: Vec<R>,
    pub left_vec: Vec<R>,
    pub stationary: Vec<R>,
}

/// Power iteration on `W + I` started from the all-ones vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub max_iter: usize,
    /// Relative tolerance; `None` uses the scalar type's default
    /// ([`Real::TOLERANCE`]).
    pub tolerance: Option<f64>,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            max_iter: 100_000,
            tolerance: None,
        }
    }
}

impl PowerIteration {
    pub fn with_max_iter(max_iter: usize) -> Self {
        PowerIteration {
            max_iter,
            ..Default::default()
        }
    }

    fn tol<R: Real>(&self) -> R {
        R::from_f64(self.tolerance.unwrap_or(R::TOLERANCE))
    }

    /// Dominant eigenpair of `W + I`. With `vector` set, also waits for the
    /// eigenvector itself to settle, not just the eigenvalue estimate.
    fn dominant<R: Real>(
        &self,
        w: &WeightMatrix<R>,
        vector: bool,
    ) -> Result<(R, Vec<R>), SpectralError> {
        let n = w.order();
        let tol = self.tol::<R>();
        let mut x = vec![R::one() / R::from_f64(n as f64).sqrt(); n];
        let mut y = vec![R::zero(); n];
        let mut estimate = R::zero();
        for iter in 0..self.max_iter {
            w.shifted_product(&x, &mut y);
            let mut rayleigh = R::zero();
            let mut norm_sq = R::zero();
            for (&xi, &yi) in x.iter().zip(&y) {
                rayleigh += xi * yi;
                norm_sq += yi * yi;
            }
            let norm = norm_sq.sqrt();
            if norm == R::zero() {
                // Only possible if W + I annihilates x, which a nonnegative
                // matrix cannot do to a positive vector.
                return Err(SpectralError::NonConvergence { iterations: iter });
            }
            let mut step = R::zero();
            for (xi, &yi) in x.iter_mut().zip(&y) {
                let next = yi / norm;
                step = step.max((next - *xi).abs());
                *xi = next;
            }
            let settled = (rayleigh - estimate).abs() <= tol * rayleigh.abs().max(R::one());
            estimate = rayleigh;
            if iter > 0 && settled && (!vector || step <= tol) {
                return Ok((estimate, x));
            }
        }
        Err(SpectralError::NonConvergence {
            iterations: self.max_iter,
        })
    }

    /// Largest eigenvalue of a nonnegative matrix. Returns zero for the
    /// empty matrix.
    pub fn perron<R: Real>(&self, w: &WeightMatrix<R>) -> Result<R, SpectralError> {
        if w.order() == 0 {
            return Ok(R::zero());
        }
        let (shifted, _) = self.dominant(w, false)?;
        Ok(shifted - R::one())
    }

    /// Perron root, eigenvectors, and the Parry node distribution of an
    /// irreducible nonnegative matrix.
    pub fn parry<R: Real>(&self, w: &WeightMatrix<R>) -> Result<SpectralResult<R>, SpectralError> {
        if w.order() == 0 {
            return Err(SpectralError::Empty);
        }
        if !w.is_irreducible() {
            let component = (0..w.order())
                .find(|&i| w.row(i).iter().all(|&x| x == R::zero()))
                .unwrap_or(0);
            return Err(SpectralError::Reducible { component });
        }
        let (shifted, right) = self.dominant(w, true)?;
        let left = if w.is_symmetric() {
            right.clone()
        } else {
            self.dominant(&w.transpose(), true)?.1
        };

        let floor = R::from_f64(1e3 * self.tol::<f64>());
        for v in [&right, &left] {
            if let Some(component) = v
                .iter()
                .position(|&x| x.partial_cmp(&floor) != Some(Ordering::Greater))
            {
                return Err(SpectralError::Reducible { component });
            }
        }

        let products: Vec<R> = left.iter().zip(&right).map(|(&l, &r)| l * r).collect();
        let mut total = R::zero();
        for &p in &products {
            total += p;
        }
        let stationary = products.into_iter().map(|p| p / total).collect();
        Ok(SpectralResult {
            perron: shifted - R::one(),
            right_vec: right,
            left_vec: left,
            stationary,
        })
    }

    /// Perron number of the reciprocal-distance matrix of `g`; zero for
    /// graphs with fewer than two nodes.
    pub fn subgraph_free_energy<R: Real>(&self, g: &Graph) -> Result<R, SpectralError> {
        if g.order() < 2 {
            return Ok(R::zero());
        }
        self.perron(&reciprocal_distance_matrix::<R>(g))
    }
}

/// `W(i,j) = 1/d(i,j)` off the diagonal, zero on it.
pub fn reciprocal_distance_matrix<R: Real>(g: &Graph) -> WeightMatrix<R> {
    let d = all_pairs_shortest_distance(g);
    WeightMatrix::from_fn(g.order(), |i, j| {
        if i == j {
            R::zero()
        } else {
            R::one() / R::from_f64(d.get(i, j) as f64)
        }
    })
}

pub fn perron(w: &WeightMatrix<f64>) -> Result<f64, SpectralError> {
    PowerIteration::default().perron(w)
}

pub fn parry_stationary(w: &WeightMatrix<f64>) -> Result<SpectralResult<f64>, SpectralError> {
    PowerIteration::default().parry(w)
}

pub fn subgraph_free_energy(g: &Graph) -> Result<f64, SpectralError> {
    PowerIteration::default().subgraph_free_energy(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::real::Extended;

    fn matrix(n: usize, entries: &[f64]) -> WeightMatrix {
        WeightMatrix::new(n, entries.to_vec()).unwrap()
    }

    fn adjacency(g: &Graph) -> WeightMatrix {
        WeightMatrix::from_fn(g.order(), |i, j| g.has_edge(i, j) as u8 as f64)
    }

    #[test]
    fn distances() {
        let d = all_pairs_shortest_distance(&generators::path(3));
        assert_eq!(d.get(0, 2), 2);
        assert_eq!(d.get(2, 0), 2);
        let d = all_pairs_shortest_distance(&Graph::empty(2));
        assert_eq!(d.get(0, 1), 2);
        assert_eq!(d.unreachable(), 2);
        let d = all_pairs_shortest_distance(&generators::complete(3));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.get(i, j), (i != j) as usize);
            }
        }
    }

    #[test]
    fn reciprocal_distances() {
        let k2: WeightMatrix = reciprocal_distance_matrix(&generators::complete(2));
        assert_eq!(k2, matrix(2, &[0.0, 1.0, 1.0, 0.0]));
        let p3: WeightMatrix = reciprocal_distance_matrix(&generators::path(3));
        assert_eq!(
            p3,
            matrix(3, &[0.0, 1.0, 0.5, 1.0, 0.0, 1.0, 0.5, 1.0, 0.0])
        );
        let iso: WeightMatrix = reciprocal_distance_matrix(&Graph::empty(2));
        assert_eq!(iso, matrix(2, &[0.0, 0.5, 0.5, 0.0]));
    }

    #[test]
    fn perron_examples() {
        assert!((perron(&matrix(2, &[0.0, 1.0, 1.0, 0.0])).unwrap() - 1.0).abs() < 1e-12);
        assert!((perron(&matrix(1, &[2.0])).unwrap() - 2.0).abs() < 1e-12);
        // Symmetric eigenvector (a, b, a) reduces to l^2 - 0.5 l - 2 = 0.
        let expected = (0.5 + 8.25f64.sqrt()) / 2.0;
        let p3 = reciprocal_distance_matrix(&generators::path(3));
        assert!((perron(&p3).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 1.686140662).abs() < 1e-9);
        assert_eq!(perron(&WeightMatrix::zeros(0)).unwrap(), 0.0);
        assert!(perron(&WeightMatrix::zeros(3)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn perron_reports_non_convergence() {
        // The first iterate is never accepted, so a cap of one always fails.
        let w = matrix(2, &[0.0, 1.0, 3.0, 0.0]);
        assert_eq!(
            PowerIteration::with_max_iter(1).perron(&w),
            Err(SpectralError::NonConvergence { iterations: 1 })
        );
    }

    #[test]
    fn stationary_examples() {
        let c5 = parry_stationary(&adjacency(&generators::cycle(5))).unwrap();
        for p in &c5.stationary {
            assert!((p - 0.2).abs() < 1e-12);
        }
        let k2 = parry_stationary(&matrix(2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        assert!((k2.stationary[0] - 0.5).abs() < 1e-12);
        let p3 = parry_stationary(&adjacency(&generators::path(3))).unwrap();
        assert!((p3.perron - 2f64.sqrt()).abs() < 1e-12);
        for (p, want) in p3.stationary.iter().zip([0.25, 0.5, 0.25]) {
            assert!((p - want).abs() < 1e-12, "{p} vs {want}");
        }
    }

    #[test]
    fn stationary_of_nonsymmetric_matrix() {
        // Left and right eigenvectors differ; pi ~ eta * xi.
        // [[1, 2], [1, 0]]: eigenvalue 2, right (2, 1), left (1, 1).
        let r = parry_stationary(&matrix(2, &[1.0, 2.0, 1.0, 0.0])).unwrap();
        assert!((r.perron - 2.0).abs() < 1e-12);
        assert!((r.stationary[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.stationary[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn reducible_matrix_is_rejected() {
        let w = matrix(3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            parry_stationary(&w),
            Err(SpectralError::Reducible { component: 2 })
        );
        assert_eq!(
            parry_stationary(&WeightMatrix::zeros(0)),
            Err(SpectralError::Empty)
        );
    }

    #[test]
    fn rejects_invalid_matrices() {
        assert_eq!(
            WeightMatrix::new(2, vec![0.0; 3]),
            Err(SpectralError::DimensionMismatch {
                expected: 4,
                found: 3
            })
        );
        assert_eq!(
            WeightMatrix::new(1, vec![-1.0]),
            Err(SpectralError::InvalidEntry { index: 0 })
        );
        assert!(WeightMatrix::new(1, vec![f64::NAN]).is_err());
    }

    #[test]
    fn free_energy_conventions() {
        assert_eq!(subgraph_free_energy(&Graph::empty(0)).unwrap(), 0.0);
        assert_eq!(subgraph_free_energy(&Graph::empty(1)).unwrap(), 0.0);
        let k2 = subgraph_free_energy(&generators::complete(2)).unwrap();
        assert!((k2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extended_precision_agrees() {
        let g = generators::petersen();
        let solver = PowerIteration::default();
        let double: f64 = solver.subgraph_free_energy(&g).unwrap();
        let extended: Extended = solver.subgraph_free_energy(&g).unwrap();
        // Petersen has diameter 2: W = A + (J - I - A)/2, and A is
        // 3-regular, so the Perron number is 3 + 6/2 = 6.
        assert!((double - 6.0).abs() < 1e-12);
        assert!((extended - Extended::from_f64(6.0)).abs().to_f64() < 1e-25);
    }
}
