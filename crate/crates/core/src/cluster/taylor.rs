//! Checks the cluster expansion against the formal logarithm of `Ξ`.

use num_traits::Zero;

use super::ursell::{ursell, SmallGraph};
use crate::error::Result;
use crate::graph_model::{Pattern, WeightedGraph};
use crate::rational::{int, Rational};
use crate::torus::{polymer_weight, xi_graded, PolymerFamily};

#[derive(Debug, Clone)]
pub struct TaylorReport {
    /// Coefficients `1..=K` of `log Ξ(ε)`.
    pub log_side: Vec<Rational>,
    /// Direct cluster sums `Σ_{‖Γ‖=k} φ(I_Γ) Π w(γ)` for `k = 1..=K`.
    pub cluster_side: Vec<Rational>,
}

impl TaylorReport {
    pub fn pass(&self) -> bool {
        self.log_side == self.cluster_side
    }
}

/// Grades each polymer by `ε^{|γ|}` and compares both expansions order by order.
pub fn taylor_expansion_check(
    family: &PolymerFamily,
    graph: &WeightedGraph,
    pattern: &Pattern,
    order: usize,
) -> Result<TaylorReport> {
    let torus = &family.torus;
    let weighted: Vec<(u64, Rational)> = family
        .polymers
        .iter()
        .filter(|p| p.count_ones() as usize <= order)
        .map(|&p| (p, polymer_weight(torus, graph, pattern, p)))
        .filter(|(_, w)| !w.is_zero())
        .collect();
    let log = xi_graded(torus, &weighted, order).formal_log()?;

    let balls: Vec<u64> = weighted.iter().map(|(p, _)| torus.ball2_of(*p)).collect();
    let mut cluster_side = vec![Rational::zero(); order + 1];
    let mut chosen = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        start: usize,
        size: usize,
        product: &Rational,
        weighted: &[(u64, Rational)],
        balls: &[u64],
        order: usize,
        chosen: &mut Vec<usize>,
        out: &mut [Rational],
    ) {
        if !chosen.is_empty() {
            let l = chosen.len();
            let edges: Vec<(usize, usize)> = (0..l)
                .flat_map(|a| (a + 1..l).map(move |b| (a, b)))
                .filter(|&(a, b)| balls[chosen[a]] & weighted[chosen[b]].0 != 0)
                .collect();
            let graph = SmallGraph::new(l, &edges);
            if graph.is_connected() {
                let mut orderings: i64 = (1..=l as i64).product();
                let mut run = 1i64;
                for i in 1..=l {
                    if i < l && chosen[i] == chosen[i - 1] {
                        run += 1;
                    } else {
                        orderings /= (1..=run).product::<i64>();
                        run = 1;
                    }
                }
                out[size] += ursell(&graph) * int(orderings) * product;
            }
        }
        for i in start..weighted.len() {
            let s = weighted[i].0.count_ones() as usize;
            if size + s > order {
                continue;
            }
            chosen.push(i);
            let next = product * &weighted[i].1;
            recurse(i, size + s, &next, weighted, balls, order, chosen, out);
            chosen.pop();
        }
    }
    recurse(
        0,
        0,
        &Rational::from_integer(1.into()),
        &weighted,
        &balls,
        order,
        &mut chosen,
        &mut cluster_side,
    );
    Ok(TaylorReport {
        log_side: log.coeffs[1..].to_vec(),
        cluster_side: cluster_side[1..].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_model::dominant_patterns;
    use crate::rational::rat;
    use crate::torus::{enumerate_polymers, Caps, TorusSpec};

    #[test]
    fn expansion_matches_log_on_small_tori() {
        for (m, n) in [(2, 2), (2, 3), (4, 1)] {
            let spec = TorusSpec::new(m, n).unwrap();
            let family = enumerate_polymers(spec, &rat(1, 8), Caps::default()).unwrap();
            let g = WeightedGraph::complete(3);
            let p = dominant_patterns(&g).unwrap().patterns[0];
            let report = taylor_expansion_check(&family, &g, &p, 4).unwrap();
            assert!(report.pass(), "({m},{n}): {report:?}");
        }
    }
}
