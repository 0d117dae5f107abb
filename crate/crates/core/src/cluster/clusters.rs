//! Clusters supported on a rooted set.

use num_traits::Zero;

use super::support::{g2_connected, LocalSet, LocalVertex};
use super::ursell::{ursell, SmallGraph};
use crate::rational::{int, Rational};

/// Nonempty G²-connected subsets of the support, as masks over its indices.
pub fn connected_subsets(support: &LocalSet, m: u32) -> Vec<u32> {
    let j = support.len();
    (1u32..(1 << j))
        .filter(|&mask| g2_connected(&members(support, mask), m))
        .collect()
}

pub fn members(support: &LocalSet, mask: u32) -> Vec<LocalVertex> {
    (0..support.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| support.vertices[i])
        .collect()
}

fn incompatible(support: &LocalSet, x: u32, y: u32, m: u32) -> bool {
    let m = m as u8;
    members(support, x)
        .iter()
        .any(|u| members(support, y).iter().any(|v| u.within_two(v, m)))
}

/// An ordered tuple of polymers covering the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedCluster {
    pub parts: Vec<Vec<LocalVertex>>,
    pub ursell: Rational,
}

/// A cluster up to the order of its parts: the sorted part masks, the number
/// of distinct orderings and the Ursell function of its incompatibility graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterClass {
    pub parts: Vec<u32>,
    pub orderings: u64,
    pub ursell: Rational,
}

impl ClusterClass {
    /// Total contribution of all orderings before polymer weights.
    pub fn coefficient(&self) -> Rational {
        &self.ursell * int(self.orderings as i64)
    }
}

/// Multisets of connected subsets with sizes summing to `k`, union equal to
/// the support, and connected incompatibility graph.
pub fn cluster_classes(support: &LocalSet, k: usize, m: u32) -> Vec<ClusterClass> {
    let subsets = connected_subsets(support, m);
    let full = (1u32 << support.len()) - 1;
    let n = subsets.len();
    let incompat: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| incompatible(support, subsets[i], subsets[j], m))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        start: usize,
        remaining: usize,
        union: u32,
        subsets: &[u32],
        incompat: &[Vec<bool>],
        full: u32,
        chosen: &mut Vec<usize>,
        out: &mut Vec<ClusterClass>,
    ) {
        if remaining == 0 {
            if union != full {
                return;
            }
            let l = chosen.len();
            let edges: Vec<(usize, usize)> = (0..l)
                .flat_map(|a| (a + 1..l).map(move |b| (a, b)))
                .filter(|&(a, b)| incompat[chosen[a]][chosen[b]])
                .collect();
            let phi = ursell(&SmallGraph::new(l, &edges));
            if phi.is_zero() {
                return;
            }
            let mut orderings: u64 = (1..=l as u64).product();
            let mut run = 1u64;
            for i in 1..=l {
                if i < l && chosen[i] == chosen[i - 1] {
                    run += 1;
                } else {
                    orderings /= (1..=run).product::<u64>();
                    run = 1;
                }
            }
            out.push(ClusterClass {
                parts: chosen.iter().map(|&i| subsets[i]).collect(),
                orderings,
                ursell: phi,
            });
            return;
        }
        for i in start..subsets.len() {
            let size = subsets[i].count_ones() as usize;
            if size > remaining {
                continue;
            }
            chosen.push(i);
            recurse(
                i,
                remaining - size,
                union | subsets[i],
                subsets,
                incompat,
                full,
                chosen,
                out,
            );
            chosen.pop();
        }
    }
    recurse(0, k, 0, &subsets, &incompat, full, &mut chosen, &mut out);
    out
}

/// Every ordered cluster of size `k` on the support.
pub fn enumerate_clusters(support: &LocalSet, k: usize, m: u32) -> Vec<RootedCluster> {
    let mut out = Vec::new();
    for class in cluster_classes(support, k, m) {
        let mut perm = class.parts.clone();
        // distinct permutations in lexicographic order
        perm.sort_unstable();
        loop {
            out.push(RootedCluster {
                parts: perm.iter().map(|&p| members(support, p)).collect(),
                ursell: class.ursell.clone(),
            });
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    out
}

fn next_permutation(xs: &mut [u32]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}
