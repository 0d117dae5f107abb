//! Closed-form reference expressions and the assembled approximation `Z̃`.

use num_traits::One;
use serde::Serialize;

use crate::cluster::{l1_closed_form, l_terms, truncation_error_heuristic, MAX_ORDER};
use crate::error::{Error, Result};
use crate::exp_poly::ExpPoly;
use crate::graph_model::{dominant_patterns, pattern_classes, Pattern, PatternView, WeightedGraph};
use crate::rational::{format_rational, int, pow, rat, Rational, ScaledFloat};

fn halves(q: usize) -> (i64, i64) {
    ((q / 2) as i64, q.div_ceil(2) as i64)
}

/// `L_1` from its closed form.
pub fn l1_closed(graph: &WeightedGraph, pattern: &Pattern, m: u32) -> Result<ExpPoly> {
    l1_closed_form(graph, pattern, m)
}

/// `f(n)` for proper `q`-colourings of the hypercube:
/// `(b/2a)(2−2/b)ⁿ + (a/2b)(2−2/a)ⁿ` with `a = ⌊q/2⌋`, `b = ⌈q/2⌉`.
pub fn qcolor_f(q: usize) -> Result<ExpPoly> {
    if q < 3 {
        return Err(Error::InvalidArgument(format!(
            "q-colouring needs q >= 3, got {q}"
        )));
    }
    let (a, b) = halves(q);
    let two = int(2);
    let term = |x: i64, y: i64| ExpPoly::term(rat(y, 2 * x), 0, &two - rat(2, y));
    Ok(term(a, b) + term(b, a))
}

/// The second cluster term for `K_q` on the hypercube, with the leading `2ⁿ`
/// folded into each base.
pub fn qcolor_l2(q: usize) -> Result<ExpPoly> {
    if q < 4 {
        return Err(Error::InvalidArgument(format!(
            "the L2 closed form needs q >= 4, got {q}"
        )));
    }
    let (a, b) = halves(q);
    let one = Rational::one();
    let (ra, rb) = (&one - rat(1, a), &one - rat(1, b));
    let two = int(2);

    let mut out = ExpPoly::term(
        rat(q as i64 - 1, 2 * (a - 1) * (b - 1)),
        1,
        &two * &ra * &rb,
    );
    // (x²/(8y²(x−1)³))(n² − n − 2(x−1)³)(1−1/x)^{2n}
    for (x, y, r) in [(a, b, &ra), (b, a, &rb)] {
        let coeff = rat(x * x, 8 * y * y * (x - 1).pow(3));
        let base = &two * r * r;
        let mut poly = ExpPoly::term(coeff.clone(), 2, base.clone());
        poly.add_term(-coeff.clone(), 1, base.clone());
        poly.add_term(-coeff * int(2 * (x - 1).pow(3)), 0, base);
        out = out + poly;
    }
    Ok(out)
}

/// Leading constant `c_k` of `L_k` for `K_q` with unit activities:
/// `(1+[q even])(1+3[m>2])^{k−1} / (2^k (b−1)^{k−1}) · (b/a)^k · k^{k−2}/k!`.
pub fn qcolor_ck(q: usize, m: u32, k: usize) -> Result<Rational> {
    if q < 4 || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "c_k needs q >= 4 and k >= 1, got q={q} k={k}"
        )));
    }
    let (a, b) = halves(q);
    let k32 = k as u32;
    let even = if q.is_multiple_of(2) { 2 } else { 1 };
    let spread = if m > 2 { 4 } else { 1 };
    let trees = tree_automorphism_sum(k);
    Ok(
        int(even) * pow(&int(spread), k32 - 1) / (pow(&int(2), k32) * pow(&int(b - 1), k32 - 1))
            * pow(&rat(b, a), k32)
            * trees,
    )
}

/// `Σ_{T} 1/|Aut(T)|` over unlabelled trees on `k` vertices, `k^{k−2}/k!`.
pub fn tree_automorphism_sum(k: usize) -> Rational {
    let fact: Rational = (1..=k as i64).map(int).product();
    if k == 1 {
        return fact.recip();
    }
    pow(&int(k as i64), k as u32 - 2) / fact
}

/// The base `(m(1−1/⌈q/2⌉)^{ck})` of the leading term of `L_k` for `K_q`.
pub fn qcolor_leading_base(q: usize, m: u32, k: usize) -> Rational {
    let (_, b) = halves(q);
    let c = if m > 2 { 2 } else { 1 };
    int(m as i64) * pow(&(Rational::one() - rat(1, b)), c * k as u32)
}

/// Reference terms for the hard-core model with unit fugacity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardcoreForms {
    /// `(1/2)(m/2^c)ⁿ`.
    pub l1: ExpPoly,
    /// `2n(2n−1)(m/16)ⁿ`, stated for `m > 2`.
    pub l2_leading: Option<ExpPoly>,
}

pub fn hardcore_l_forms(m: u32) -> Result<HardcoreForms> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::InvalidTorus {
            m,
            n: 0,
            reason: "m must be even and at least 2",
        });
    }
    let c = if m > 2 { 2 } else { 1 };
    let l1 = ExpPoly::term(rat(1, 2), 0, rat(m as i64, 1 << c));
    let l2_leading = (m > 2).then(|| {
        let base = rat(m as i64, 16);
        ExpPoly::term(int(4), 2, base.clone()) + ExpPoly::term(int(-2), 1, base)
    });
    Ok(HardcoreForms { l1, l2_leading })
}

/// `|𝓑_k(n)| ≈ prefactor · base^{2^{n−1}} · exp(exponent(n))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KBoundedAsymptotic {
    pub k: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub prefactor: Rational,
    /// Raised to `2^{n−1}`.
    #[serde(serialize_with = "serialize_rational")]
    pub base: Rational,
    pub exponent: ExpPoly,
}

fn serialize_rational<S: serde::Serializer>(
    value: &Rational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_rational(value))
}

pub fn kbounded_asymptotic(k: u32) -> Result<KBoundedAsymptotic> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let k = k as i64;
    let odd = k % 2 == 1;
    // ⌊k/2+1⌋, ⌈k/2+1⌉ and ⌈k/2⌉
    let lo = k / 2 + 1;
    let hi = (k + 1) / 2 + 1;
    let half_up = (k + 1) / 2;
    let lead = if odd { 1 } else { 2 };
    Ok(KBoundedAsymptotic {
        k: k as u32,
        prefactor: int(if odd { 2 } else { 1 }),
        base: int(lo * hi),
        exponent: ExpPoly::term(rat(lead, lo), 0, rat(2 * half_up, hi)),
    })
}

/// One symmetry class of dominant patterns and its truncated exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternClass {
    pub members: Vec<Pattern>,
    /// `Σ_{j<k_order} L_j`.
    pub exponent: ExpPoly,
    pub terms: Vec<ExpPoly>,
    pub truncation_heuristic: ExpPoly,
}

/// `Z̃ ≈ η^{m^n/2} Σ_{(A,B)} exp(Σ_{j<k_order} L_{A,B}(j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZFormula {
    pub eta: Rational,
    pub m: u32,
    pub k_order: usize,
    pub classes: Vec<PatternClass>,
}

/// Log-space evaluation of a [`ZFormula`] at a fixed dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZEvaluation {
    pub ln_z: f64,
    /// Largest truncation heuristic over the classes at this `n`.
    pub truncation_heuristic: f64,
}

pub fn z_formula(graph: &WeightedGraph, m: u32, k_order: usize) -> Result<ZFormula> {
    if k_order == 0 || k_order > MAX_ORDER {
        return Err(Error::OrderTooLarge(k_order));
    }
    let dominant = dominant_patterns(graph)?;
    let classes = pattern_classes(graph, &dominant.patterns)
        .into_iter()
        .map(|idx| {
            let members: Vec<Pattern> = idx.iter().map(|&i| dominant.patterns[i]).collect();
            let rep = members[0];
            let terms = if k_order > 1 {
                l_terms(graph, &rep, m, k_order - 1)?
            } else {
                Vec::new()
            };
            let exponent = terms.iter().fold(ExpPoly::zero(), |acc, t| acc + t.clone());
            Ok(PatternClass {
                members,
                exponent,
                terms,
                truncation_heuristic: truncation_error_heuristic(graph, &rep, m, k_order)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ZFormula {
        eta: dominant.eta,
        m,
        k_order,
        classes,
    })
}

impl ZFormula {
    pub fn pattern_count(&self) -> usize {
        self.classes.iter().map(|c| c.members.len()).sum()
    }

    /// `ln Z̃ = (m^n/2) ln η + ln Σ_classes |class| · exp(exponent(n))`.
    pub fn evaluate(&self, n: u32) -> ZEvaluation {
        let eta = ScaledFloat::from_rational(&self.eta).ln_abs();
        let half_volume = (self.m as f64).powi(n as i32) / 2.0;
        let logs: Vec<f64> = self
            .classes
            .iter()
            .map(|c| (c.members.len() as f64).ln() + c.exponent.eval_float(n, 1e-12).value)
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
        let truncation_heuristic = self
            .classes
            .iter()
            .map(|c| c.truncation_heuristic.eval_float(n, 1e-12).value)
            .fold(0.0, f64::max);
        ZEvaluation {
            ln_z: half_volume * eta + top + sum.ln(),
            truncation_heuristic,
        }
    }

    pub fn report(&self, n: Option<u32>) -> ZFormulaReport {
        let eval = n.map(|n| self.evaluate(n));
        let lead = &self.classes[0];
        ZFormulaReport {
            eta: format_rational(&self.eta),
            patterns: self.pattern_count(),
            m: self.m,
            k_order: self.k_order,
            exponent_terms: lead.exponent.clone(),
            truncation_heuristic: lead.truncation_heuristic.clone(),
            n,
            ln_z_at_n: eval.map(|e| format!("{:.12}", e.ln_z)),
            truncation_heuristic_at_n: eval.map(|e| format!("{:.6e}", e.truncation_heuristic)),
            classes: self
                .classes
                .iter()
                .map(|c| ClassReport {
                    representative: PatternView::from(&c.members[0]),
                    multiplicity: c.members.len(),
                    exponent_terms: c.exponent.clone(),
                    truncation_heuristic: c.truncation_heuristic.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub representative: PatternView,
    pub multiplicity: usize,
    pub exponent_terms: ExpPoly,
    pub truncation_heuristic: ExpPoly,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZFormulaReport {
    pub eta: String,
    pub patterns: usize,
    pub m: u32,
    pub k_order: usize,
    pub exponent_terms: ExpPoly,
    pub truncation_heuristic: ExpPoly,
    pub n: Option<u32>,
    #[serde(rename = "ln_Z_at_n")]
    pub ln_z_at_n: Option<String>,
    pub truncation_heuristic_at_n: Option<String>,
    pub classes: Vec<ClassReport>,
}
