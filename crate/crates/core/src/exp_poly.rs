//! Exponential polynomials `Σ cᵢ·n^{eᵢ}·bᵢⁿ` with exact rational data, and
//! truncated formal power series.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, pow, Rational, ScaledFloat};

/// One term `coeff · n^npow · baseⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub npow: u32,
    pub base: Rational,
}

/// Canonical exponential polynomial. Terms are keyed by `(base, npow)`, so the
/// map order is the canonical order; zero coefficients and zero bases are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct ExpPoly {
    terms: BTreeMap<(Rational, u32), Rational>,
}

impl ExpPoly {
    pub fn zero() -> ExpPoly {
        ExpPoly::default()
    }

    pub fn one() -> ExpPoly {
        ExpPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> ExpPoly {
        ExpPoly::term(c, 0, Rational::one())
    }

    /// `coeff · n^npow · baseⁿ`. A zero base is folded away.
    pub fn term(coeff: Rational, npow: u32, base: Rational) -> ExpPoly {
        let mut out = ExpPoly::zero();
        out.add_term(coeff, npow, base);
        out
    }

    /// `baseⁿ`.
    pub fn exponential(base: Rational) -> ExpPoly {
        ExpPoly::term(Rational::one(), 0, base)
    }

    /// `nᵉ`.
    pub fn monomial(npow: u32) -> ExpPoly {
        ExpPoly::term(Rational::one(), npow, Rational::one())
    }

    pub fn add_term(&mut self, coeff: Rational, npow: u32, base: Rational) {
        assert!(!base.is_negative(), "ExpPoly bases must be non-negative");
        if coeff.is_zero() || base.is_zero() {
            return;
        }
        let key = (base, npow);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order (by base, then npow).
    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|((base, npow), coeff)| Term {
            coeff: coeff.clone(),
            npow: *npow,
            base: base.clone(),
        })
    }

    /// Coefficient of `n^npow · baseⁿ` (zero when absent).
    pub fn coefficient(&self, npow: u32, base: &Rational) -> Rational {
        self.terms
            .get(&(base.clone(), npow))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn max_npow(&self) -> Option<u32> {
        self.terms.keys().map(|(_, e)| *e).max()
    }

    pub fn max_base(&self) -> Option<&Rational> {
        self.terms.keys().next_back().map(|(b, _)| b)
    }

    pub fn bases(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.terms.keys().map(|(b, _)| b.clone()).collect();
        out.dedup();
        out
    }

    /// The terms with the given base, as a polynomial in `n` (`coeffs[e]`).
    pub fn polynomial_at_base(&self, base: &Rational) -> Vec<Rational> {
        let top = self
            .terms
            .keys()
            .filter(|(b, _)| b == base)
            .map(|(_, e)| *e as usize)
            .max();
        let Some(top) = top else { return Vec::new() };
        (0..=top)
            .map(|e| self.coefficient(e as u32, base))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Replaces `n` by nothing structural but multiplies every base by `factor`,
    /// i.e. multiplies by `factorⁿ`.
    pub fn times_exponential(&self, factor: &Rational) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for ((base, npow), coeff) in &self.terms {
            out.add_term(coeff.clone(), *npow, base * factor);
        }
        out
    }

    /// `C(n, a) = n(n−1)…(n−a+1)/a!` with all bases 1.
    pub fn binomial_poly(a: u32) -> ExpPoly {
        let mut out = ExpPoly::one();
        for i in 0..a {
            let factor = ExpPoly::monomial(1) - ExpPoly::constant(int(i as i64));
            out = &out * &factor;
        }
        let mut fact = Rational::one();
        for i in 1..=a {
            fact *= int(i as i64);
        }
        out.scale(&fact.recip())
    }

    pub fn eval_exact(&self, n: u32) -> Rational {
        let nn = int(n as i64);
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, ((base, npow), coeff)| {
                acc + coeff * pow(&nn, *npow) * pow(base, n)
            })
    }

    /// Value at `n` as a float with an error bound.
    ///
    /// The value is evaluated exactly and rounded once, so the relative error is
    /// at most `ScaledFloat::REL_ERROR` whatever the magnitude; `rel_tol` below
    /// that bound is reported through [`FloatEval::meets`].
    pub fn eval_float(&self, n: u32, rel_tol: f64) -> FloatEval {
        assert!(rel_tol > 0.0, "rel_tol must be positive");
        let scaled = ScaledFloat::from_rational(&self.eval_exact(n));
        FloatEval::new(scaled, rel_tol)
    }

    pub fn to_terms(&self) -> Vec<Term> {
        self.terms().collect()
    }

    pub fn from_terms<I: IntoIterator<Item = Term>>(terms: I) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for t in terms {
            out.add_term(t.coeff, t.npow, t.base);
        }
        out
    }
}

/// A float evaluation with a rigorous bound on its error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatEval {
    pub scaled: ScaledFloat,
    /// Native value; `±inf` on overflow, `0` on underflow.
    pub value: f64,
    /// Bound on `|value − exact|` where `value` is finite, otherwise `inf`.
    pub abs_error: f64,
    pub rel_tol: f64,
}

impl FloatEval {
    fn new(scaled: ScaledFloat, rel_tol: f64) -> FloatEval {
        let value = scaled.to_f64();
        let abs_error = if scaled.is_zero() {
            0.0
        } else if value.is_infinite() {
            f64::INFINITY
        } else if value == 0.0 || value.abs() < f64::MIN_POSITIVE {
            // underflow: the exact magnitude is below 2^exp2
            2f64.powi(scaled.exp2.clamp(-1074, 0) as i32)
                .max(f64::MIN_POSITIVE)
        } else {
            // one rounding in the exact-to-scaled step and one in to_f64
            2.0 * ScaledFloat::REL_ERROR * value.abs()
        };
        FloatEval {
            scaled,
            value,
            abs_error,
            rel_tol,
        }
    }

    pub fn ln_abs(&self) -> f64 {
        self.scaled.ln_abs()
    }

    /// Whether the guaranteed relative error is within the requested tolerance.
    pub fn meets(&self) -> bool {
        if self.scaled.is_zero() {
            return true;
        }
        self.value.is_finite()
            && self.value != 0.0
            && self.abs_error <= self.rel_tol * self.value.abs()
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(
                f,
                "{} * n^{} * ({})^n",
                format_rational(&t.coeff),
                t.npow,
                format_rational(&t.base)
            )?;
        }
        Ok(())
    }
}

impl Add<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for ExpPoly {
    type Output = ExpPoly;
    fn add(mut self, rhs: ExpPoly) -> ExpPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&ExpPoly> for ExpPoly {
    fn add_assign(&mut self, rhs: &ExpPoly) {
        for ((base, npow), coeff) in &rhs.terms {
            self.add_term(coeff.clone(), *npow, base.clone());
        }
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

impl Sub<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        self + &(-rhs)
    }
}

impl Sub for ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: ExpPoly) -> ExpPoly {
        &self - &rhs
    }
}

impl Mul<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for ((b1, e1), c1) in &self.terms {
            for ((b2, e2), c2) in &rhs.terms {
                out.add_term(c1 * c2, e1 + e2, b1 * b2);
            }
        }
        out
    }
}

impl Mul for ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: ExpPoly) -> ExpPoly {
        &self * &rhs
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: String,
    npow: u32,
    base: String,
}

impl Serialize for ExpPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr: Vec<TermRepr> = self
            .terms()
            .map(|t| TermRepr {
                coeff: format_rational(&t.coeff),
                npow: t.npow,
                base: format_rational(&t.base),
            })
            .collect();
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExpPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = Vec::<TermRepr>::deserialize(deserializer)?;
        let mut out = ExpPoly::zero();
        for t in repr {
            let coeff = parse_rational(&t.coeff).map_err(D::Error::custom)?;
            let base = parse_rational(&t.base).map_err(D::Error::custom)?;
            if base.is_negative() {
                return Err(D::Error::custom("negative base"));
            }
            out.add_term(coeff, t.npow, base);
        }
        Ok(out)
    }
}

/// Truncated power series `c₀ + c₁ε + … + c_K ε^K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    pub coeffs: Vec<Rational>,
}

impl GradedSeries {
    pub fn new(coeffs: Vec<Rational>) -> GradedSeries {
        GradedSeries { coeffs }
    }

    pub fn zero(order: usize) -> GradedSeries {
        GradedSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Product truncated at the smaller order.
    pub fn mul(&self, other: &GradedSeries) -> GradedSeries {
        let order = self.order().min(other.order());
        let mut out = GradedSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// `log s` via `k·l_k = k·a_k − Σ_{j<k} j·l_j·a_{k−j}`.
    pub fn formal_log(&self) -> Result<GradedSeries> {
        let a = &self.coeffs;
        if a.first() != Some(&Rational::one()) {
            let c0 = a
                .first()
                .map(format_rational)
                .unwrap_or_else(|| "none".into());
            return Err(Error::LogConstantTerm(c0));
        }
        let mut l = vec![Rational::zero(); a.len()];
        for k in 1..a.len() {
            let kk = int(k as i64);
            let mut acc = &kk * &a[k];
            for j in 1..k {
                acc -= int(j as i64) * &l[j] * &a[k - j];
            }
            l[k] = acc / kk;
        }
        Ok(GradedSeries::new(l))
    }

    /// `exp s` for `s` with zero constant term, via `k·e_k = Σ_{j≤k} j·s_j·e_{k−j}`.
    pub fn formal_exp(&self) -> Result<GradedSeries> {
        let s = &self.coeffs;
        if s.first().is_some_and(|c| !c.is_zero()) {
            return Err(Error::InvalidArgument(
                "formal exp needs a zero constant term".into(),
            ));
        }
        let mut e = vec![Rational::zero(); s.len().max(1)];
        e[0] = Rational::one();
        for k in 1..s.len() {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += int(j as i64) * &s[j] * &e[k - j];
            }
            e[k] = acc / int(k as i64);
        }
        Ok(GradedSeries::new(e))
    }
}
