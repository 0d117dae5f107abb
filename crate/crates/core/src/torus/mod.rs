//! Brute-force ground truth on small tori `Z_m^n`.

mod measures;
mod polymer;

pub use measures::{
    measures_table, verify_tilde_identity, HomRecord, HomTable, OracleReport, TildeReport,
};
pub use polymer::{
    capture_classify, definition_weights, disagreement_set, enumerate_polymers,
    global_cluster_series, polymer_weight, xi_exact, xi_graded, PolymerFamily,
};

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph_model::WeightedGraph;
use crate::rational::{pow, Rational};

pub const DEFAULT_HOM_CAP: usize = 20;
pub const DEFAULT_POLYMER_CAP: usize = 16;

/// Vertex-count limits for the exhaustive enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub homs: usize,
    pub polymers: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            homs: DEFAULT_HOM_CAP,
            polymers: DEFAULT_POLYMER_CAP,
        }
    }
}

impl Caps {
    /// No limit on homomorphism enumeration; polymer sets are still bitmasks
    /// and stop at 64 vertices.
    pub fn unlimited() -> Caps {
        Caps {
            homs: usize::MAX,
            polymers: 64,
        }
    }
}

/// The torus `Z_m^n` with `m` even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusSpec {
    pub m: u32,
    pub n: u32,
}

impl TorusSpec {
    pub fn new(m: u32, n: u32) -> Result<TorusSpec> {
        if m < 2 || m % 2 == 1 {
            return Err(Error::InvalidTorus {
                m,
                n,
                reason: "m must be even and at least 2",
            });
        }
        if n == 0 {
            return Err(Error::InvalidTorus {
                m,
                n,
                reason: "n must be at least 1",
            });
        }
        Ok(TorusSpec { m, n })
    }

    /// `c = 1 + [m > 2]`: neighbours per coordinate.
    pub fn c(&self) -> u32 {
        if self.m > 2 {
            2
        } else {
            1
        }
    }

    pub fn degree(&self) -> u32 {
        self.c() * self.n
    }

    /// `m^n`, or `None` if it does not fit in `usize`.
    pub fn vertex_count(&self) -> Option<usize> {
        (self.m as usize).checked_pow(self.n)
    }
}

/// Materialized torus: vertex `v` has coordinates given by its base-`m` digits.
#[derive(Debug, Clone)]
pub struct Torus {
    pub spec: TorusSpec,
    neighbors: Vec<Vec<usize>>,
    odd: Vec<bool>,
    /// Neighbourhood and distance-≤2 balls as bitmasks; empty above 64 vertices.
    nbr_mask: Vec<u64>,
    ball2: Vec<u64>,
}

impl Torus {
    pub fn build(spec: TorusSpec, cap: usize) -> Result<Torus> {
        let size = spec
            .vertex_count()
            .filter(|&v| v <= cap)
            .ok_or(Error::CapExceeded {
                what: "torus vertex count",
                size: spec.vertex_count().unwrap_or(usize::MAX),
                cap,
            })?;
        let m = spec.m as usize;
        let mut neighbors = Vec::with_capacity(size);
        let mut odd = Vec::with_capacity(size);
        for v in 0..size {
            let mut nb = Vec::new();
            let mut digit_sum = 0;
            let mut place = 1;
            for _ in 0..spec.n {
                let digit = v / place % m;
                digit_sum += digit;
                let up = v - digit * place + (digit + 1) % m * place;
                let down = v - digit * place + (digit + m - 1) % m * place;
                nb.push(up);
                if down != up {
                    nb.push(down);
                }
                place *= m;
            }
            neighbors.push(nb);
            odd.push(digit_sum % 2 == 1);
        }
        let (nbr_mask, ball2) = if size <= 64 {
            let nbr: Vec<u64> = neighbors
                .iter()
                .map(|nb| nb.iter().fold(0u64, |acc, &u| acc | 1 << u))
                .collect();
            let ball = (0..size)
                .map(|v| {
                    neighbors[v]
                        .iter()
                        .fold(nbr[v] | 1 << v, |acc, &u| acc | nbr[u])
                })
                .collect();
            (nbr, ball)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(Torus {
            spec,
            neighbors,
            odd,
            nbr_mask,
            ball2,
        })
    }

    pub fn len(&self) -> usize {
        self.odd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.odd.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// Whether `v` lies in the odd class `𝓞`.
    pub fn is_odd(&self, v: usize) -> bool {
        self.odd[v]
    }

    pub fn coords(&self, v: usize) -> Vec<u32> {
        let m = self.spec.m as usize;
        let mut place = 1;
        (0..self.spec.n)
            .map(|_| {
                let d = (v / place % m) as u32;
                place *= m;
                d
            })
            .collect()
    }

    pub fn index(&self, coords: &[u32]) -> usize {
        let m = self.spec.m as usize;
        coords
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * m + c as usize % m)
    }

    /// Vertices in BFS order from the all-zeros vertex.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut order = Vec::with_capacity(self.len());
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in &self.neighbors[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        order
    }

    pub(crate) fn has_masks(&self) -> bool {
        !self.ball2.is_empty()
    }

    pub(crate) fn nbr_mask(&self, v: usize) -> u64 {
        self.nbr_mask[v]
    }

    /// Union of open neighbourhoods `N(X)`.
    pub fn neighborhood_of(&self, set: u64) -> u64 {
        bits(set).fold(0, |acc, v| acc | self.nbr_mask[v])
    }

    /// Vertices at distance at most 2 from `set`.
    pub fn ball2_of(&self, set: u64) -> u64 {
        bits(set).fold(0, |acc, v| acc | self.ball2[v])
    }

    pub fn odd_mask(&self) -> u64 {
        (0..self.len())
            .filter(|&v| self.odd[v])
            .fold(0, |acc, v| acc | 1 << v)
    }
}

pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(v)
        }
    })
}

/// Activities scaled to a common denominator: `λ_v = scaled[v] / denom`.
struct ScaledActivities {
    scaled: Vec<BigInt>,
    denom: BigInt,
}

impl ScaledActivities {
    fn new(graph: &WeightedGraph) -> Self {
        let denom = graph
            .activities()
            .iter()
            .fold(BigInt::one(), |acc, l| acc.lcm(l.denom()));
        let scaled = graph
            .activities()
            .iter()
            .map(|l| (l * Rational::from_integer(denom.clone())).to_integer())
            .collect();
        ScaledActivities { scaled, denom }
    }
}

/// Backtracking state: vertices in BFS order, each with its earlier neighbours.
struct Search<'a> {
    graph: &'a WeightedGraph,
    order: Vec<usize>,
    earlier: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(torus: &Torus, graph: &'a WeightedGraph) -> Self {
        let order = torus.bfs_order();
        let mut position = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let earlier = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut e: Vec<usize> = torus
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| position[u] < i)
                    .copied()
                    .collect();
                e.dedup();
                e
            })
            .collect();
        Search {
            graph,
            order,
            earlier,
        }
    }

    fn allowed(&self, i: usize, colours: &[u8]) -> u32 {
        self.earlier[i].iter().fold(self.graph.all().0, |acc, &u| {
            acc & self.graph.neighbors(colours[u] as usize).0
        })
    }

    fn weighted_count(&self, i: usize, colours: &mut [u8], acts: &ScaledActivities) -> BigInt {
        if i == self.order.len() {
            return BigInt::one();
        }
        let v = self.order[i];
        let mut total = BigInt::zero();
        let mut allowed = self.allowed(i, colours);
        while allowed != 0 {
            let c = allowed.trailing_zeros() as usize;
            allowed &= allowed - 1;
            colours[v] = c as u8;
            let sub = self.weighted_count(i + 1, colours, acts);
            if !sub.is_zero() {
                total += sub * &acts.scaled[c];
            }
        }
        total
    }

    fn collect(&self, i: usize, colours: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == self.order.len() {
            out.push(colours.clone());
            return;
        }
        let v = self.order[i];
        let mut allowed = self.allowed(i, colours);
        while allowed != 0 {
            let c = allowed.trailing_zeros() as usize;
            allowed &= allowed - 1;
            colours[v] = c as u8;
            self.collect(i + 1, colours, out);
        }
    }
}

/// `Z = Σ_{f ∈ Hom(T, H)} Π λ_{f(v)}` by backtracking in BFS order.
pub fn partition_function(spec: TorusSpec, graph: &WeightedGraph, caps: Caps) -> Result<Rational> {
    let torus = Torus::build(spec, caps.homs)?;
    let search = Search::new(&torus, graph);
    let acts = ScaledActivities::new(graph);
    let root = search.order[0];
    // branch on the root colour in parallel; exact sums are order independent
    let total: BigInt = (0..graph.q())
        .into_par_iter()
        .map(|c| {
            let mut colours = vec![0u8; torus.len()];
            colours[root] = c as u8;
            search.weighted_count(1, &mut colours, &acts) * &acts.scaled[c]
        })
        .sum();
    let denom = pow(&Rational::from_integer(acts.denom), torus.len() as u32);
    Ok(Rational::from_integer(total) / denom)
}

/// Every homomorphism `T → H` as a colour vector indexed by torus vertex.
pub fn enumerate_homs(
    spec: TorusSpec,
    graph: &WeightedGraph,
    caps: Caps,
) -> Result<(Torus, Vec<Vec<u8>>)> {
    let torus = Torus::build(spec, caps.homs)?;
    let search = Search::new(&torus, graph);
    let mut out = Vec::new();
    let mut colours = vec![0u8; torus.len()];
    search.collect(0, &mut colours, &mut out);
    Ok((torus, out))
}

pub fn hom_weight(graph: &WeightedGraph, colours: &[u8]) -> Rational {
    colours
        .iter()
        .fold(Rational::one(), |acc, &c| acc * graph.activity(c as usize))
}

/// `Z` on the cycle `C_m` (`n = 1`) as `tr((ΛA)^m)`.
pub fn partition_function_transfer(m: u32, graph: &WeightedGraph) -> Result<Rational> {
    TorusSpec::new(m, 1)?;
    let q = graph.q();
    let step: Vec<Vec<Rational>> = (0..q)
        .map(|u| {
            (0..q)
                .map(|v| {
                    if graph.adjacent(u, v) {
                        graph.activity(u).clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mul = |x: &Vec<Vec<Rational>>, y: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
        (0..q)
            .map(|i| {
                (0..q)
                    .map(|j| (0..q).fold(Rational::zero(), |acc, l| acc + &x[i][l] * &y[l][j]))
                    .collect()
            })
            .collect()
    };
    let mut power = step.clone();
    for _ in 1..m {
        power = mul(&power, &step);
    }
    Ok((0..q).fold(Rational::zero(), |acc, i| acc + &power[i][i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_model::cayley_graph;
    use crate::rational::int;

    fn spec(m: u32, n: u32) -> TorusSpec {
        TorusSpec::new(m, n).unwrap()
    }

    #[test]
    fn geometry() {
        let q3 = Torus::build(spec(2, 3), 64).unwrap();
        assert_eq!(q3.len(), 8);
        assert!((0..8).all(|v| q3.neighbors(v).len() == 3));
        let t = Torus::build(spec(4, 2), 64).unwrap();
        assert!((0..16).all(|v| t.neighbors(v).len() == 4));
        assert_eq!(t.index(&t.coords(13)), 13);
        assert_eq!(t.bfs_order()[0], 0);
        assert!(!t.is_odd(0) && t.is_odd(1));
        assert!(matches!(
            TorusSpec::new(3, 2),
            Err(Error::InvalidTorus { .. })
        ));
        assert!(matches!(
            Torus::build(spec(2, 5), 20),
            Err(Error::CapExceeded { size: 32, .. })
        ));
        // m=2: ball of radius 2 in Q_3 is everything but the antipode
        assert_eq!(q3.ball2_of(1).count_ones(), 7);
    }

    #[test]
    fn small_partition_functions() {
        let k3 = WeightedGraph::complete(3);
        let hc = WeightedGraph::hard_core(int(1)).unwrap();
        assert_eq!(
            partition_function(spec(2, 2), &k3, Caps::default()).unwrap(),
            int(18)
        );
        assert_eq!(
            partition_function(spec(2, 2), &hc, Caps::default()).unwrap(),
            int(7)
        );
        assert_eq!(
            partition_function(spec(4, 1), &k3, Caps::default()).unwrap(),
            int(18)
        );
        assert_eq!(partition_function_transfer(4, &k3).unwrap(), int(18));
        assert_eq!(
            partition_function_transfer(4, &cayley_graph(5, &[1])).unwrap(),
            int(30)
        );
        for q in 3..7 {
            let kq = WeightedGraph::complete(q);
            let expected = int((q * (q - 1)) as i64);
            assert_eq!(partition_function_transfer(2, &kq).unwrap(), expected);
        }
    }

    #[test]
    fn enumeration_agrees_with_count() {
        let hc = WeightedGraph::hard_core(crate::rational::rat(2, 3)).unwrap();
        let (_, homs) = enumerate_homs(spec(2, 3), &hc, Caps::default()).unwrap();
        let total = homs
            .iter()
            .fold(Rational::zero(), |acc, f| acc + hom_weight(&hc, f));
        assert_eq!(
            total,
            partition_function(spec(2, 3), &hc, Caps::default()).unwrap()
        );
    }
}
