//! The `Z̃` identity and exact `μ` versus `μ̂` tables.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::polymer::{capture_classify, enumerate_polymers, xi_exact};
use super::{enumerate_homs, hom_weight, Caps, TorusSpec};
use crate::error::Result;
use crate::graph_model::{dominant_patterns, Pattern, WeightedGraph};
use crate::rational::{format_rational, pow, Rational};

#[derive(Debug, Clone)]
pub struct HomRecord {
    pub colours: Vec<u8>,
    pub weight: Rational,
    /// Indices into [`HomTable::patterns`] of the patterns capturing this colouring.
    pub capturing: Vec<usize>,
    pub mu: Rational,
    pub mu_hat: Rational,
}

impl HomRecord {
    pub fn p(&self) -> usize {
        self.capturing.len()
    }
}

/// Every homomorphism of a small torus with its capture data and both measures.
#[derive(Debug, Clone)]
pub struct HomTable {
    pub spec: TorusSpec,
    pub alpha: Rational,
    pub eta: Rational,
    pub patterns: Vec<Pattern>,
    pub records: Vec<HomRecord>,
    pub z: Rational,
    /// `η^{m^n/2} Σ_{(A,B)} Ξ_{A,B}`.
    pub z_tilde: Rational,
    /// `Σ_f p_f·weight(f)`.
    pub z_tilde_from_homs: Rational,
    pub xi: Vec<Rational>,
    /// Total variation distance between `μ` and `μ̂`.
    pub tv: Rational,
}

impl HomTable {
    /// Number of colourings captured by exactly `p` patterns, keyed by `p`.
    pub fn p_histogram(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            *out.entry(r.p()).or_insert(0) += 1;
        }
        out
    }

    pub fn identity_holds(&self) -> bool {
        self.z_tilde == self.z_tilde_from_homs
    }

    pub fn report(&self) -> OracleReport {
        OracleReport {
            z: format_rational(&self.z),
            z_tilde: format_rational(&self.z_tilde),
            xi: self
                .patterns
                .iter()
                .zip(&self.xi)
                .map(|(p, x)| (p.to_string(), format_rational(x)))
                .collect(),
            p_histogram: self
                .p_histogram()
                .into_iter()
                .map(|(p, c)| (p.to_string(), c))
                .collect(),
            tv: format_rational(&self.tv),
            alpha: format_rational(&self.alpha),
        }
    }
}

/// Serialized oracle output; rationals as `p/q` strings.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct OracleReport {
    #[serde(rename = "Z")]
    pub z: String,
    #[serde(rename = "Z_tilde")]
    pub z_tilde: String,
    pub xi: BTreeMap<String, String>,
    pub p_histogram: BTreeMap<String, usize>,
    pub tv: String,
    pub alpha: String,
}

/// Outcome of comparing both sides of `Z̃ = Σ_f p_f·weight(f)`.
#[derive(Debug, Clone)]
pub struct TildeReport {
    pub z: Rational,
    pub z_tilde_from_xi: Rational,
    pub z_tilde_from_homs: Rational,
    pub pass: bool,
    /// Counts of colourings captured by 0, 1, 2, ... patterns.
    pub p_histogram: BTreeMap<usize, usize>,
}

fn build_table(
    spec: TorusSpec,
    graph: &WeightedGraph,
    alpha: &Rational,
    caps: Caps,
) -> Result<HomTable> {
    let dominant = dominant_patterns(graph)?;
    let family = enumerate_polymers(spec, alpha, caps)?;
    let (torus, homs) = enumerate_homs(spec, graph, caps)?;
    let patterns = dominant.patterns;
    let half = (torus.len() / 2) as u32;
    let scale = pow(&dominant.eta, half);

    let xi: Vec<Rational> = patterns
        .iter()
        .map(|p| xi_exact(&family, graph, p))
        .collect();
    let z_tilde = xi.iter().fold(Rational::zero(), |acc, x| acc + x) * &scale;

    let mut records: Vec<HomRecord> = homs
        .into_iter()
        .map(|colours| {
            let weight = hom_weight(graph, &colours);
            let capturing = patterns
                .iter()
                .enumerate()
                .filter(|(_, p)| capture_classify(&family, p, &colours))
                .map(|(i, _)| i)
                .collect();
            HomRecord {
                colours,
                weight,
                capturing,
                mu: Rational::zero(),
                mu_hat: Rational::zero(),
            }
        })
        .collect();

    let z = records
        .iter()
        .fold(Rational::zero(), |acc, r| acc + &r.weight);
    let z_tilde_from_homs = records.iter().fold(Rational::zero(), |acc, r| {
        acc + &r.weight * Rational::from_integer(r.p().into())
    });
    let mut tv = Rational::zero();
    for r in &mut records {
        r.mu = &r.weight / &z;
        r.mu_hat = &r.weight * Rational::from_integer(r.p().into()) / &z_tilde;
        if r.mu_hat > r.mu {
            tv += &r.mu_hat - &r.mu;
        }
    }
    Ok(HomTable {
        spec,
        alpha: alpha.clone(),
        eta: dominant.eta,
        patterns,
        records,
        z,
        z_tilde,
        z_tilde_from_homs,
        xi,
        tv,
    })
}

/// Computes `Z̃` from the polymer models and from capture counts independently.
pub fn verify_tilde_identity(
    spec: TorusSpec,
    graph: &WeightedGraph,
    alpha: &Rational,
    caps: Caps,
) -> Result<TildeReport> {
    let table = build_table(spec, graph, alpha, caps)?;
    Ok(TildeReport {
        pass: table.identity_holds(),
        p_histogram: table.p_histogram(),
        z: table.z,
        z_tilde_from_xi: table.z_tilde,
        z_tilde_from_homs: table.z_tilde_from_homs,
    })
}

/// Per-homomorphism `μ(f) = weight/Z` and `μ̂(f) = p_f·weight/Z̃`, with the
/// exact total variation distance.
pub fn measures_table(
    spec: TorusSpec,
    graph: &WeightedGraph,
    alpha: &Rational,
    caps: Caps,
) -> Result<HomTable> {
    build_table(spec, graph, alpha, caps)
}
