//! Ursell functions of small graphs.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::One;

use crate::rational::{int, Rational};

/// Largest vertex count accepted (the edge set is a 28-bit mask).
pub const MAX_URSELL_VERTICES: usize = 8;

/// A simple graph on `0..n` with edges stored as a bitmask over pairs `i < j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SmallGraph {
    pub n: usize,
    pub edges: u32,
}

impl SmallGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> SmallGraph {
        assert!(
            n <= MAX_URSELL_VERTICES,
            "graph too large for the Ursell function"
        );
        let mut mask = 0;
        for &(u, v) in edges {
            assert!(u != v && u < n && v < n, "edge ({u},{v}) invalid");
            mask |= 1 << pair_index(u.min(v), u.max(v));
        }
        SmallGraph { n, edges: mask }
    }

    pub fn complete(n: usize) -> SmallGraph {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        SmallGraph::new(n, &edges)
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 1..self.n {
            for u in 0..v {
                if self.edges >> pair_index(u, v) & 1 == 1 {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        spans(self.n, &self.edge_list(), u32::MAX)
    }
}

fn pair_index(u: usize, v: usize) -> usize {
    debug_assert!(u < v);
    v * (v - 1) / 2 + u
}

/// Whether the edges selected by `subset` (bits index `edges`) connect all `n` vertices.
fn spans(n: usize, edges: &[(usize, usize)], subset: u32) -> bool {
    if n <= 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut components = n;
    for (i, &(u, v)) in edges.iter().enumerate() {
        if subset >> i & 1 == 0 {
            continue;
        }
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            components -= 1;
        }
    }
    components == 1
}

fn cache() -> &'static Mutex<HashMap<SmallGraph, Rational>> {
    static CACHE: OnceLock<Mutex<HashMap<SmallGraph, Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `φ(F) = (1/|V|!) Σ (−1)^{|E'|}` over spanning connected edge subsets `E'`,
/// by direct enumeration. Zero for a disconnected graph. Memoized.
pub fn ursell(graph: &SmallGraph) -> Rational {
    if let Some(v) = cache().lock().expect("ursell cache").get(graph) {
        return v.clone();
    }
    let value = ursell_uncached(graph);
    cache()
        .lock()
        .expect("ursell cache")
        .insert(*graph, value.clone());
    value
}

/// [`ursell`] without the process-wide cache.
pub fn ursell_uncached(graph: &SmallGraph) -> Rational {
    let edges = graph.edge_list();
    let mut signed: i64 = 0;
    for subset in 0u32..(1u32 << edges.len()) {
        if spans(graph.n, &edges, subset) {
            signed += if subset.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    let factorial = (1..=graph.n as i64).product::<i64>();
    int(signed) / int(factorial.max(1))
}

/// `φ` of a tree on `ℓ` vertices, `(−1)^{ℓ−1}/ℓ!`.
pub fn ursell_tree(l: usize) -> Rational {
    let sign = if l % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    };
    sign / int((1..=l as i64).product::<i64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// Signed count of connected spanning subgraphs by deletion–contraction on
    /// a multigraph: `C(G) = C(G−e) − C(G/e)`, zero with a loop.
    fn deletion_contraction(n: usize, edges: &[(usize, usize)]) -> i64 {
        if edges.iter().any(|&(u, v)| u == v) {
            return 0;
        }
        let Some((&(u, v), rest)) = edges.split_first() else {
            return if n == 1 { 1 } else { 0 };
        };
        let deleted = deletion_contraction(n, rest);
        // merge v into u and relabel the last vertex as v
        let relabel = |x: usize| {
            let x = if x == v { u } else { x };
            if x == n - 1 {
                v
            } else {
                x
            }
        };
        let contracted: Vec<(usize, usize)> = rest
            .iter()
            .map(|&(a, b)| (relabel(a), relabel(b)))
            .collect();
        deleted - deletion_contraction(n - 1, &contracted)
    }

    #[test]
    fn spot_values() {
        assert_eq!(ursell(&SmallGraph::new(1, &[])), rat(1, 1));
        assert_eq!(ursell(&SmallGraph::new(2, &[(0, 1)])), rat(-1, 2));
        assert_eq!(ursell(&SmallGraph::complete(3)), rat(1, 3));
        assert_eq!(ursell(&SmallGraph::new(3, &[(0, 1), (1, 2)])), rat(1, 6));
        assert_eq!(ursell(&SmallGraph::new(2, &[])), rat(0, 1));
        for l in 1..6 {
            let path: Vec<_> = (1..l).map(|i| (i - 1, i)).collect();
            assert_eq!(ursell(&SmallGraph::new(l, &path)), ursell_tree(l));
        }
    }

    #[test]
    fn matches_deletion_contraction_up_to_five_vertices() {
        let mut checked = 0;
        for n in 1..=5usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            for mask in 0u32..(1 << pairs.len()) {
                let edges: Vec<_> = (0..pairs.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| pairs[i])
                    .collect();
                let g = SmallGraph::new(n, &edges);
                if !g.is_connected() {
                    continue;
                }
                let fact = (1..=n as i64).product::<i64>();
                let expected = int(deletion_contraction(n, &edges)) / int(fact);
                assert_eq!(ursell(&g), expected, "n={n} edges={edges:?}");
                checked += 1;
            }
        }
        // connected labelled graphs on 1..=5 vertices: 1 + 1 + 4 + 38 + 728
        assert_eq!(checked, 772);
    }
}
