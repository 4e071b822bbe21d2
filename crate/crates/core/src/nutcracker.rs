//! Correspondence search between two graphs by repeated refinement and
//! single-node individualization.
//!
//! Each round overlays node weights on the fixed refined matrices of both
//! graphs, computes their Parry stationary distributions, and partitions
//! the nodes into *singles* (unique probability) and *nuts* (shared
//! probability). Aligned singles receive position-unique weights `1..=s`;
//! one node from each graph's first nut receives the "cracker" weight
//! `s + 1`, chosen so that both weighted canonical numbers still agree.
//! Once every node is a single, nodes are matched by probability order.
//! There is no backtracking: a wrong cracker choice surfaces as a failure.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::canonical::{CanonicalError, Encoder, NodeWeights, RefinedMatrix};
use crate::graph::{Graph, Permutation};
use crate::precision::{equal_at, significant_key};
use crate::real::Real;

/// Nodes sharing one rounded stationary probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Nut {
    pub nodes: Vec<usize>,
    pub probability: f64,
}

/// Singles sorted by probability; nuts sorted by `(size, probability)`.
/// Probabilities are the rounded values used for grouping.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Partition {
    pub singles: Vec<(usize, f64)>,
    pub nuts: Vec<Nut>,
}

impl Partition {
    pub fn node_count(&self) -> usize {
        self.singles.len() + self.nuts.iter().map(|n| n.nodes.len()).sum::<usize>()
    }

    pub fn is_discrete(&self) -> bool {
        self.nuts.is_empty()
    }

    /// True when both partitions have the same single probabilities and
    /// the same `(size, probability)` nut sequence.
    pub fn aligns_with(&self, other: &Partition) -> bool {
        self.singles.len() == other.singles.len()
            && self.nuts.len() == other.nuts.len()
            && self
                .singles
                .iter()
                .zip(&other.singles)
                .all(|(a, b)| a.1 == b.1)
            && self
                .nuts
                .iter()
                .zip(&other.nuts)
                .all(|(a, b)| a.nodes.len() == b.nodes.len() && a.probability == b.probability)
    }
}

/// Groups nodes by stationary probability rounded to `digits` significant
/// digits.
pub fn partition_by_stationary(pi: &[f64], digits: usize) -> Partition {
    let mut groups: HashMap<String, Vec<usize>> = HashMap::new();
    for (node, &p) in pi.iter().enumerate() {
        groups
            .entry(significant_key(p, digits))
            .or_default()
            .push(node);
    }
    let mut partition = Partition::default();
    for (key, nodes) in groups {
        let probability: f64 = key.parse().expect("significant_key renders a float");
        match nodes[..] {
            [single] => partition.singles.push((single, probability)),
            _ => partition.nuts.push(Nut { nodes, probability }),
        }
    }
    partition.singles.sort_by(|a, b| a.1.total_cmp(&b.1));
    partition.nuts.sort_by(|a, b| {
        a.nodes
            .len()
            .cmp(&b.nodes.len())
            .then(a.probability.total_cmp(&b.probability))
    });
    partition
}

/// A node bijection from the first graph onto the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    mapping: Permutation,
}

impl Correspondence {
    pub fn new(mapping: Permutation) -> Self {
        Correspondence { mapping }
    }

    pub fn apply(&self, u: usize) -> usize {
        self.mapping.apply(u)
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn as_permutation(&self) -> &Permutation {
        &self.mapping
    }
}

impl fmt::Display for Correspondence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut sep = "";
        for (u, v) in self.mapping.images().iter().enumerate() {
            write!(f, "{sep}{u}>{v}")?;
            sep = " ";
        }
        Ok(())
    }
}

/// `(u, v)` is an edge of `g1` iff `(c(u), c(v))` is an edge of `g2`.
pub fn verify_correspondence(g1: &Graph, g2: &Graph, c: &Correspondence) -> bool {
    let n = g1.order();
    n == g2.order()
        && c.len() == n
        && (0..n)
            .all(|u| ((u + 1)..n).all(|v| g1.has_edge(u, v) == g2.has_edge(c.apply(u), c.apply(v))))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchFailure {
    #[error("graphs have {0} and {1} nodes")]
    SizeMismatch(usize, usize),
    #[error("graphs have no nodes")]
    EmptyGraph,
    #[error("canonical numbers {0} and {1} differ")]
    CanonicalGate(f64, f64),
    #[error("round {round}: partitions do not align")]
    PartitionMisaligned { round: usize },
    #[error("round {round}: singles dropped from {before} to {after}")]
    SinglesRegressed {
        round: usize,
        before: usize,
        after: usize,
    },
    #[error("round {round}: no cracker pair keeps the canonical numbers equal")]
    CrackerExhausted { round: usize },
    #[error("nuts remain after {0} rounds")]
    RoundCap(usize),
    #[error("resulting mapping is not an isomorphism")]
    VerificationRejected,
    #[error(transparent)]
    Numerical(#[from] CanonicalError),
}

impl MatchFailure {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            MatchFailure::SizeMismatch(..) => "size-mismatch",
            MatchFailure::EmptyGraph => "empty-graph",
            MatchFailure::CanonicalGate(..) => "canonical-gate",
            MatchFailure::PartitionMisaligned { .. } => "partition-misaligned",
            MatchFailure::SinglesRegressed { .. } => "singles-regressed",
            MatchFailure::CrackerExhausted { .. } => "cracker-exhausted",
            MatchFailure::RoundCap(_) => "round-cap",
            MatchFailure::VerificationRejected => "verification-rejected",
            MatchFailure::Numerical(_) => "numerical-failure",
        }
    }
}

/// Shape of the partition seen in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundSummary {
    pub singles: usize,
    pub nut_sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Match {
    pub correspondence: Correspondence,
    pub rounds: Vec<RoundSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NutCracker {
    pub encoder: Encoder,
    /// Significant digits for every probability and canonical-number
    /// comparison.
    pub digits: usize,
}

impl Default for NutCracker {
    fn default() -> Self {
        NutCracker {
            encoder: Encoder::default(),
            digits: 9,
        }
    }
}

impl NutCracker {
    pub fn new(encoder: Encoder, digits: usize) -> Self {
        assert!(digits >= 1);
        NutCracker { encoder, digits }
    }

    fn stationary<R: Real>(
        &self,
        refined: &RefinedMatrix<R>,
        weights: &NodeWeights,
    ) -> Result<Vec<f64>, CanonicalError> {
        let m = refined.overlay(weights)?;
        let result = self.encoder.solver.parry(&m)?;
        Ok(result.stationary.into_iter().map(Real::to_f64).collect())
    }

    fn weighted_cn<R: Real>(
        &self,
        refined: &RefinedMatrix<R>,
        weights: &NodeWeights,
    ) -> Result<f64, CanonicalError> {
        Ok(self
            .encoder
            .weighted_canonical_number(refined, weights)?
            .to_f64())
    }

    pub fn find<R: Real>(&self, g1: &Graph, g2: &Graph) -> Result<Match, MatchFailure> {
        let n = g1.order();
        if n != g2.order() {
            return Err(MatchFailure::SizeMismatch(n, g2.order()));
        }
        if n == 0 {
            return Err(MatchFailure::EmptyGraph);
        }
        let r1 = self.encoder.refine::<R>(g1)?;
        let r2 = self.encoder.refine::<R>(g2)?;
        let cn1 = self.weighted_cn(&r1, &NodeWeights::zeros(n))?;
        let cn2 = self.weighted_cn(&r2, &NodeWeights::zeros(n))?;
        if !equal_at(cn1, cn2, self.digits) {
            return Err(MatchFailure::CanonicalGate(cn1, cn2));
        }

        let mut w1 = NodeWeights::zeros(n);
        let mut w2 = NodeWeights::zeros(n);
        let mut rounds = Vec::new();
        let mut prev_singles = 0;
        for round in 1..=n {
            let p1 = partition_by_stationary(&self.stationary(&r1, &w1)?, self.digits);
            let p2 = partition_by_stationary(&self.stationary(&r2, &w2)?, self.digits);
            debug_assert_eq!(p1.node_count(), n);
            rounds.push(RoundSummary {
                singles: p1.singles.len(),
                nut_sizes: p1.nuts.iter().map(|nut| nut.nodes.len()).collect(),
            });
            if !p1.aligns_with(&p2) {
                return Err(MatchFailure::PartitionMisaligned { round });
            }
            let singles = p1.singles.len();
            if singles < prev_singles {
                return Err(MatchFailure::SinglesRegressed {
                    round,
                    before: prev_singles,
                    after: singles,
                });
            }

            if p1.is_discrete() {
                let mut images = vec![0; n];
                for (a, b) in p1.singles.iter().zip(&p2.singles) {
                    images[a.0] = b.0;
                }
                let correspondence = Correspondence::new(
                    Permutation::new(images).expect("aligned singles cover both node sets"),
                );
                if !verify_correspondence(g1, g2, &correspondence) {
                    return Err(MatchFailure::VerificationRejected);
                }
                return Ok(Match {
                    correspondence,
                    rounds,
                });
            }

            let mut next1 = NodeWeights::zeros(n);
            let mut next2 = NodeWeights::zeros(n);
            for (k, (a, b)) in p1.singles.iter().zip(&p2.singles).enumerate() {
                next1.set(a.0, (k + 1) as f64);
                next2.set(b.0, (k + 1) as f64);
            }
            let cracker = (singles + 1) as f64;
            let (v1, v2) = self
                .find_cracker_pair(&r1, &r2, &next1, &next2, &p1.nuts[0], &p2.nuts[0], cracker)?
                .ok_or(MatchFailure::CrackerExhausted { round })?;
            next1.set(v1, cracker);
            next2.set(v2, cracker);
            w1 = next1;
            w2 = next2;
            prev_singles = singles;
        }
        Err(MatchFailure::RoundCap(n))
    }

    /// First `(v1, v2)` in ascending order, `v1` outer, whose cracker
    /// weights give equal weighted canonical numbers.
    #[allow(clippy::too_many_arguments)]
    fn find_cracker_pair<R: Real>(
        &self,
        r1: &RefinedMatrix<R>,
        r2: &RefinedMatrix<R>,
        base1: &NodeWeights,
        base2: &NodeWeights,
        nut1: &Nut,
        nut2: &Nut,
        cracker: f64,
    ) -> Result<Option<(usize, usize)>, CanonicalError> {
        let with_cracker = |base: &NodeWeights, v: usize| {
            let mut w = base.clone();
            w.set(v, cracker);
            w
        };
        let mut second: Vec<Option<f64>> = vec![None; nut2.nodes.len()];
        for &v1 in &nut1.nodes {
            let c1 = self.weighted_cn(r1, &with_cracker(base1, v1))?;
            for (slot, &v2) in nut2.nodes.iter().enumerate() {
                let c2 = match second[slot] {
                    Some(c) => c,
                    None => {
                        let c = self.weighted_cn(r2, &with_cracker(base2, v2))?;
                        second[slot] = Some(c);
                        c
                    }
                };
                if equal_at(c1, c2, self.digits) {
                    return Ok(Some((v1, v2)));
                }
            }
        }
        Ok(None)
    }
}

/// [`NutCracker::find`] in double precision with the given digit count.
pub fn find_correspondence(
    g1: &Graph,
    g2: &Graph,
    digits: usize,
) -> Result<Correspondence, MatchFailure> {
    NutCracker::new(Encoder::default(), digits)
        .find::<f64>(g1, g2)
        .map(|m| m.correspondence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn partition_examples() {
        let uniform = partition_by_stationary(&[0.2; 5], 9);
        assert!(uniform.singles.is_empty());
        assert_eq!(uniform.nuts.len(), 1);
        assert_eq!(uniform.nuts[0].nodes, vec![0, 1, 2, 3, 4]);

        let distinct = partition_by_stationary(&[0.4, 0.1, 0.3, 0.2], 9);
        assert!(distinct.is_discrete());
        let order: Vec<usize> = distinct.singles.iter().map(|s| s.0).collect();
        assert_eq!(order, vec![1, 3, 2, 0]);

        let p3 = partition_by_stationary(&[0.25, 0.5, 0.25], 9);
        assert_eq!(p3.singles, vec![(1, 0.5)]);
        assert_eq!(
            p3.nuts,
            vec![Nut {
                nodes: vec![0, 2],
                probability: 0.25
            }]
        );
    }

    #[test]
    fn partition_rounds_before_grouping() {
        let p = partition_by_stationary(&[0.3 + 1e-13, 0.3, 0.4], 9);
        assert_eq!(p.nuts.len(), 1);
        assert_eq!(p.nuts[0].nodes, vec![0, 1]);
        assert_eq!(p.singles.len(), 1);
    }

    #[test]
    fn nuts_sort_by_size_then_probability() {
        let pi = [0.1, 0.2, 0.1, 0.2, 0.05, 0.05, 0.05, 0.25];
        let p = partition_by_stationary(&pi, 9);
        let keys: Vec<(usize, f64)> = p
            .nuts
            .iter()
            .map(|n| (n.nodes.len(), n.probability))
            .collect();
        assert_eq!(keys, vec![(2, 0.1), (2, 0.2), (3, 0.05)]);
        assert_eq!(p.singles, vec![(7, 0.25)]);
    }

    #[test]
    fn verify_examples() {
        let c5 = generators::cycle(5);
        let id = Correspondence::new(Permutation::identity(5));
        assert!(verify_correspondence(&c5, &c5, &id));
        let rotate = Correspondence::new(Permutation::new(vec![1, 2, 3, 4, 0]).unwrap());
        assert!(verify_correspondence(&c5, &c5, &rotate));
        let k2 = generators::complete(2);
        for images in [vec![0, 1], vec![1, 0]] {
            let c = Correspondence::new(Permutation::new(images).unwrap());
            assert!(!verify_correspondence(&k2, &Graph::empty(2), &c));
        }
    }

    #[test]
    fn pentagon_matches_itself() {
        let c5 = generators::cycle(5);
        let m = NutCracker::default().find::<f64>(&c5, &c5).unwrap();
        assert!(verify_correspondence(&c5, &c5, &m.correspondence));
        // Vertex-transitive: the first round has a single nut of 5.
        assert_eq!(
            m.rounds[0],
            RoundSummary {
                singles: 0,
                nut_sizes: vec![5]
            }
        );
        assert!(m.rounds.len() <= 5);
    }

    #[test]
    fn permuted_petersen_matches() {
        let g = generators::petersen();
        let h = g.permuted(&Permutation::random(10, 3)).unwrap();
        let c = find_correspondence(&g, &h, 9).unwrap();
        assert!(verify_correspondence(&g, &h, &c));
    }

    #[test]
    fn gate_rejects_k2_against_isolated_pair() {
        let err = find_correspondence(&generators::complete(2), &Graph::empty(2), 9).unwrap_err();
        assert_eq!(err.code(), "canonical-gate");
        match err {
            MatchFailure::CanonicalGate(a, b) => {
                assert!((a - 2.0).abs() < 1e-12);
                assert!((b - 0.5).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn size_and_empty_failures() {
        let err = find_correspondence(&Graph::empty(2), &Graph::empty(3), 9).unwrap_err();
        assert_eq!(err, MatchFailure::SizeMismatch(2, 3));
        let err = find_correspondence(&Graph::empty(0), &Graph::empty(0), 9).unwrap_err();
        assert_eq!(err.code(), "empty-graph");
    }

    #[test]
    fn single_node_maps_to_itself() {
        let g = Graph::empty(1);
        let c = find_correspondence(&g, &g, 9).unwrap();
        assert_eq!(c.apply(0), 0);
    }

    #[test]
    fn correspondence_display() {
        let c = Correspondence::new(Permutation::new(vec![2, 0, 1]).unwrap());
        assert_eq!(c.to_string(), "0>2 1>0 2>1");
    }
}
