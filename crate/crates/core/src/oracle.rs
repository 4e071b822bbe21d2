//! Exhaustive ground truth for small graphs: backtracking isomorphism search
//! and the minimum adjacency bitstring over all relabelings.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Permutation};

pub const ISOMORPHISM_CAP: usize = 10;
pub const CANONICAL_FORM_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph on {n} nodes exceeds the exhaustive-search cap of {cap}")]
pub struct SizeCapExceeded {
    pub n: usize,
    pub cap: usize,
}

/// Finds a permutation `p` with `g1.permuted(p) == g2`, or `None` if the
/// graphs are not isomorphic.
pub fn brute_force_isomorphism(
    g1: &Graph,
    g2: &Graph,
) -> Result<Option<Permutation>, SizeCapExceeded> {
    let n = g1.order();
    for g in [g1, g2] {
        if g.order() > ISOMORPHISM_CAP {
            return Err(SizeCapExceeded {
                n: g.order(),
                cap: ISOMORPHISM_CAP,
            });
        }
    }
    if n != g2.order()
        || g1.edge_count() != g2.edge_count()
        || g1.degree_sequence() != g2.degree_sequence()
    {
        return Ok(None);
    }
    let deg1: Vec<usize> = (0..n).map(|u| g1.degree(u)).collect();
    let deg2: Vec<usize> = (0..n).map(|v| g2.degree(v)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        u: usize,
        g1: &Graph,
        g2: &Graph,
        deg1: &[usize],
        deg2: &[usize],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if u == map.len() {
            return true;
        }
        for v in 0..map.len() {
            if used[v] || deg1[u] != deg2[v] {
                continue;
            }
            if (0..u).any(|w| g1.has_edge(u, w) != g2.has_edge(v, map[w])) {
                continue;
            }
            map[u] = v;
            used[v] = true;
            if extend(u + 1, g1, g2, deg1, deg2, map, used) {
                return true;
            }
            used[v] = false;
        }
        false
    }

    Ok(extend(0, g1, g2, &deg1, &deg2, &mut map, &mut used)
        .then(|| Permutation::new(map).expect("search builds a bijection")))
}

/// Lexicographically smallest upper-triangle, row-major adjacency bit
/// sequence `x(0,1), x(0,2), ..., x(n-2,n-1)` over every relabeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    n: usize,
    // first bit of the sequence is the most significant of the
    // n(n-1)/2 low bits
    bits: u64,
}

impl CanonicalForm {
    pub fn order(&self) -> usize {
        self.n
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = self.n * self.n.saturating_sub(1) / 2;
        for k in (0..len).rev() {
            write!(f, "{}", self.bits >> k & 1)?;
        }
        Ok(())
    }
}

fn code_under(g: &Graph, relabel: &[usize]) -> u64 {
    // relabel[a] is the original node placed at position a
    let n = relabel.len();
    let mut code = 0u64;
    for a in 0..n {
        for b in (a + 1)..n {
            code = code << 1 | g.has_edge(relabel[a], relabel[b]) as u64;
        }
    }
    code
}

pub fn exact_canonical_form(g: &Graph) -> Result<CanonicalForm, SizeCapExceeded> {
    let n = g.order();
    if n > CANONICAL_FORM_CAP {
        return Err(SizeCapExceeded {
            n,
            cap: CANONICAL_FORM_CAP,
        });
    }
    // Heap's algorithm over all n! orderings.
    let mut order: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut best = code_under(g, &order);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            let swap_with = if i % 2 == 0 { 0 } else { counters[i] };
            order.swap(swap_with, i);
            best = best.min(code_under(g, &order));
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(CanonicalForm { n, bits: best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn path3_labelings() -> Vec<Graph> {
        let p3 = generators::path(3);
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        perms
            .iter()
            .map(|p| p3.permuted(&Permutation::new(p.to_vec()).unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn isomorphism_examples() {
        let k3 = generators::complete(3);
        let p = brute_force_isomorphism(&k3, &k3).unwrap().unwrap();
        assert_eq!(k3.permuted(&p).unwrap(), k3);

        let k2 = generators::complete(2);
        assert_eq!(brute_force_isomorphism(&k2, &Graph::empty(2)), Ok(None));

        let c5 = generators::cycle(5);
        let shuffled = c5.permuted(&Permutation::random(5, 17)).unwrap();
        let p = brute_force_isomorphism(&c5, &shuffled).unwrap().unwrap();
        assert_eq!(c5.permuted(&p).unwrap(), shuffled);
    }

    #[test]
    fn same_degrees_but_not_isomorphic() {
        // C6 and two triangles are both 2-regular on six nodes.
        let two_triangles =
            Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(
            brute_force_isomorphism(&generators::cycle(6), &two_triangles),
            Ok(None)
        );
    }

    #[test]
    fn caps_are_enforced() {
        let big = Graph::empty(11);
        assert_eq!(
            brute_force_isomorphism(&big, &big),
            Err(SizeCapExceeded { n: 11, cap: 10 })
        );
        assert!(exact_canonical_form(&Graph::empty(9)).is_err());
    }

    #[test]
    fn canonical_form_examples() {
        let forms: Vec<_> = path3_labelings()
            .iter()
            .map(|g| exact_canonical_form(g).unwrap())
            .collect();
        assert!(forms.windows(2).all(|w| w[0] == w[1]));
        // P3: smallest bitstring has the missing edge first.
        assert_eq!(forms[0].to_string(), "011");
        let k3 = exact_canonical_form(&generators::complete(3)).unwrap();
        assert_ne!(k3, forms[0]);
        assert_eq!(k3.to_string(), "111");
        assert_eq!(
            exact_canonical_form(&Graph::empty(0)).unwrap().to_string(),
            ""
        );
    }
}
