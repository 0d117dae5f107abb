//! Assembly of `L_{A,B}(k)`, the total weight of clusters of size `k`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::clusters::{cluster_classes, members};
use super::support::{enumerate_supports, LocalSet};
use super::weight::{polymer_weight_symbolic, RootParity};
use super::MAX_ORDER;
use crate::error::{Error, Result};
use crate::exp_poly::ExpPoly;
use crate::graph_model::{delta_unchecked, ensure_dominant, Pattern, WeightedGraph};
use crate::rational::{int, pow, rat};

fn check_order(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "cluster order must be at least 1".into(),
        ));
    }
    if k > MAX_ORDER {
        return Err(Error::OrderTooLarge(k));
    }
    Ok(())
}

/// Total cluster weight of size `k` over clusters supported on `support`,
/// with the root in the given parity class.
fn support_sum(
    support: &LocalSet,
    k: usize,
    graph: &WeightedGraph,
    pattern: &Pattern,
    rp: RootParity,
    m: u32,
) -> ExpPoly {
    let mut weights: HashMap<u32, ExpPoly> = HashMap::new();
    let mut total = ExpPoly::zero();
    for class in cluster_classes(support, k, m) {
        let mut product = ExpPoly::constant(class.coefficient());
        for part in &class.parts {
            let w = weights.entry(*part).or_insert_with(|| {
                polymer_weight_symbolic(&members(support, *part), graph, pattern, rp, m)
            });
            product = &product * w;
            if product.is_zero() {
                break;
            }
        }
        total += &product;
    }
    total
}

/// `L_1, …, L_{k_max}` for one dominant pattern on `Z_m^n`, as exponential
/// polynomials in `n`.
///
/// Each cluster is counted from every vertex of its support with weight
/// `1/j`. Cluster weights depend only on the parity of the root, so each class
/// contributes `m^n/2` times the sum over rooted supports, and supports whose
/// active coordinates are exactly `0..a` stand for `C(n, a)` choices.
pub fn l_terms(
    graph: &WeightedGraph,
    pattern: &Pattern,
    m: u32,
    k_max: usize,
) -> Result<Vec<ExpPoly>> {
    check_order(k_max)?;
    ensure_dominant(graph, pattern)?;
    if m < 2 || m % 2 == 1 {
        return Err(Error::InvalidTorus {
            m,
            n: 0,
            reason: "m must be even and at least 2",
        });
    }
    let supports: Vec<Vec<LocalSet>> = (1..=k_max).map(|j| enumerate_supports(m, j)).collect();
    let half_volume = ExpPoly::term(rat(1, 2), 0, int(m as i64));

    (1..=k_max)
        .map(|k| {
            let tasks: Vec<(usize, &LocalSet, RootParity)> = supports[..k]
                .iter()
                .enumerate()
                .flat_map(|(j, level)| level.iter().map(move |s| (j + 1, s)))
                .flat_map(|(j, s)| RootParity::BOTH.into_iter().map(move |rp| (j, s, rp)))
                .collect();
            // per (j, a): Σ over supports and root parities
            let partial: Vec<((usize, usize), ExpPoly)> = tasks
                .par_iter()
                .map(|&(j, s, rp)| ((j, s.a), support_sum(s, k, graph, pattern, rp, m)))
                .collect();
            let mut grouped: BTreeMap<(usize, usize), ExpPoly> = BTreeMap::new();
            for (key, value) in partial {
                *grouped.entry(key).or_default() += &value;
            }
            let mut total = ExpPoly::zero();
            for ((j, a), sum) in grouped {
                let factor = ExpPoly::binomial_poly(a as u32).scale(&rat(1, j as i64));
                total += &(&factor * &sum);
            }
            Ok(&half_volume * &total)
        })
        .collect()
}

/// `L_{A,B}(k)`.
pub fn l_k(graph: &WeightedGraph, pattern: &Pattern, m: u32, k: usize) -> Result<ExpPoly> {
    Ok(l_terms(graph, pattern, m, k)?.pop().expect("k >= 1"))
}

/// Bound-shaped size of the tail `Σ_{j≥k} |L_j|` with unit constant:
/// `m^n · (c·n)^{2(k−1)} · (δ^{ck})^n`. Zero exactly when `δ = 0`.
pub fn truncation_error_heuristic(
    graph: &WeightedGraph,
    pattern: &Pattern,
    m: u32,
    k: usize,
) -> Result<ExpPoly> {
    check_order(k)?;
    ensure_dominant(graph, pattern)?;
    let delta = delta_unchecked(graph, pattern);
    let c: u32 = if m > 2 { 2 } else { 1 };
    let e = 2 * (k as u32 - 1);
    let coeff = pow(&int(c as i64), e);
    let base = int(m as i64) * pow(&delta, c * k as u32);
    Ok(ExpPoly::term(coeff, e, base))
}

/// `L_1` from its closed form:
/// `m^n/2 · [ Σ_{v∉A} λ_v λ_{N(v)∩B}^d / (λ_A λ_B^d) + Σ_{v∉B} λ_v λ_{N(v)∩A}^d / (λ_B λ_A^d) ]`.
pub fn l1_closed_form(graph: &WeightedGraph, pattern: &Pattern, m: u32) -> Result<ExpPoly> {
    ensure_dominant(graph, pattern)?;
    let c: u32 = if m > 2 { 2 } else { 1 };
    let q = graph.q();
    let la = graph.weight(pattern.a);
    let lb = graph.weight(pattern.b);
    let mut sum = ExpPoly::zero();
    for v in pattern.a.complement(q).iter() {
        let r = graph.weight(graph.neighbors(v).intersection(pattern.b)) / &lb;
        sum += &ExpPoly::term(graph.activity(v) / &la, 0, pow(&r, c));
    }
    for v in pattern.b.complement(q).iter() {
        let r = graph.weight(graph.neighbors(v).intersection(pattern.a)) / &la;
        sum += &ExpPoly::term(graph.activity(v) / &lb, 0, pow(&r, c));
    }
    Ok(&ExpPoly::term(rat(1, 2), 0, int(m as i64)) * &sum)
}
