use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{LaurentL, PolyT};
use crate::error::{Error, Result};

/// The factor `1 - L^-a T^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DenomFactor {
    pub a: i64,
    pub b: u64,
}

impl DenomFactor {
    pub fn new(a: i64, b: u64) -> Self {
        DenomFactor { a, b }
    }

    pub fn to_poly(self) -> PolyT {
        &PolyT::one() - &PolyT::monomial(self.b as usize, LaurentL::l_pow(-self.a))
    }

    /// Value at `L = l`, `T = t`, computed as `-expm1(..)` so that points
    /// close to the zero locus keep their relative precision.
    pub fn eval_f64(self, l: f64, t: f64) -> f64 {
        if l > 0.0 && t > 0.0 {
            -((self.b as f64) * t.ln() - (self.a as f64) * l.ln()).exp_m1()
        } else {
            1.0 - l.powi(-self.a as i32) * t.powi(self.b as i32)
        }
    }

    fn sort_key(&self) -> (u64, i64) {
        (self.b, self.a)
    }

    pub fn to_latex(self) -> String {
        let l = match self.a {
            0 => String::new(),
            a => format!("\\mathbb{{L}}^{{{}}}", -a),
        };
        let t = match self.b {
            0 => String::new(),
            1 => "T".to_string(),
            b => format!("T^{{{b}}}"),
        };
        format!("(1-{l}{t})")
    }
}

impl fmt::Display for DenomFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.b {
            1 => write!(f, "(1 - L^-{}*T)", self.a),
            b => write!(f, "(1 - L^-{}*T^{})", self.a, b),
        }
    }
}

/// Rational function `numerator / ∏ denominator` with factored denominator.
///
/// Equality is equality of rational functions, not of representations.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "MotRatDoc", try_from = "MotRatDoc")]
pub struct MotRat {
    num: PolyT,
    den: Vec<DenomFactor>,
}

/// Rational function in `T` over ℚ, both sides as dense coefficient lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFnQ {
    pub num: Vec<BigRational>,
    pub den: Vec<BigRational>,
}

impl RatFnQ {
    /// Series coefficients up to and including `T^max`.
    pub fn series(&self, max: usize) -> Vec<BigRational> {
        let d0 = self.den[0].clone();
        let mut out: Vec<BigRational> = Vec::with_capacity(max + 1);
        for k in 0..=max {
            let mut acc = self.num.get(k).cloned().unwrap_or_else(BigRational::zero);
            for j in 1..=k.min(self.den.len().saturating_sub(1)) {
                acc -= &self.den[j] * &out[k - j];
            }
            out.push(acc / &d0);
        }
        out
    }
}

fn multiset(f: &[DenomFactor]) -> BTreeMap<DenomFactor, usize> {
    let mut m = BTreeMap::new();
    for x in f {
        *m.entry(*x).or_insert(0) += 1;
    }
    m
}

/// `a \ b` as multisets.
fn multiset_minus(a: &[DenomFactor], b: &[DenomFactor]) -> Vec<DenomFactor> {
    let mut mb = multiset(b);
    let mut out = Vec::new();
    for x in a {
        match mb.get_mut(x) {
            Some(c) if *c > 0 => *c -= 1,
            _ => out.push(*x),
        }
    }
    out
}

fn product(factors: &[DenomFactor]) -> PolyT {
    factors
        .iter()
        .fold(PolyT::one(), |acc, f| &acc * &f.to_poly())
}

impl MotRat {
    pub fn new(num: PolyT, mut den: Vec<DenomFactor>) -> Self {
        den.sort_by_key(DenomFactor::sort_key);
        MotRat { num, den }
    }

    pub fn zero() -> Self {
        Self::from_poly(PolyT::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(PolyT::one())
    }

    pub fn from_poly(num: PolyT) -> Self {
        MotRat { num, den: Vec::new() }
    }

    pub fn from_laurent(c: LaurentL) -> Self {
        Self::from_poly(PolyT::constant(c))
    }

    pub fn numerator(&self) -> &PolyT {
        &self.num
    }

    pub fn denominator(&self) -> &[DenomFactor] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Multiplies the numerator by a Laurent polynomial.
    pub fn scale(&self, c: &LaurentL) -> Self {
        MotRat {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &PolyT) -> Self {
        MotRat {
            num: &self.num * p,
            den: self.den.clone(),
        }
    }

    /// Divides by an extra factor.
    pub fn div_factor(&self, f: DenomFactor) -> Self {
        let mut den = self.den.clone();
        den.push(f);
        Self::new(self.num.clone(), den)
    }

    /// Exact division by `T`, when the numerator allows it.
    pub fn div_t(&self) -> Option<Self> {
        Some(MotRat {
            num: self.num.unshift_t(1)?,
            den: self.den.clone(),
        })
    }

    /// Rewrites `self` over the given denominator, which must contain the
    /// current one as a sub-multiset.
    fn over(&self, den: &[DenomFactor]) -> PolyT {
        let extra = multiset_minus(den, &self.den);
        debug_assert_eq!(extra.len() + self.den.len(), den.len());
        &self.num * &product(&extra)
    }

    fn lcm_den(&self, other: &MotRat) -> Vec<DenomFactor> {
        let mut den = self.den.clone();
        den.extend(multiset_minus(&other.den, &self.den));
        den.sort_by_key(DenomFactor::sort_key);
        den
    }

    /// Removes factors shared by numerator and denominator only when the
    /// numerator is zero; otherwise the representation is kept as is.
    fn normalize_zero(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
        }
        self
    }

    /// Power series coefficients up to and including `T^max`.
    pub fn expand_series(&self, max: usize) -> Result<PolyT> {
        let mut c: Vec<LaurentL> = (0..=max).map(|k| self.num.coeff(k)).collect();
        for f in &self.den {
            if f.b == 0 {
                return Err(Error::NonUnitDenominator { a: f.a, b: f.b });
            }
            let b = f.b as usize;
            // y_k = x_k + L^-a y_(k-b), ascending k
            for k in b..=max {
                if c[k - b].is_zero() {
                    continue;
                }
                let add = c[k - b].shift(-f.a);
                c[k] += &add;
            }
        }
        Ok(PolyT::from_coeffs(c))
    }

    /// Substitutes `L = q` exactly.
    pub fn eval_l(&self, q: &BigRational) -> Result<RatFnQ> {
        if q.is_zero() {
            return Err(Error::Domain("cannot substitute L = 0".into()));
        }
        let num = self.num.coeffs().iter().map(|c| c.eval(q)).collect();
        let mut den = vec![BigRational::from_integer(BigInt::from(1))];
        for f in &self.den {
            let c = LaurentL::l_pow(-f.a).eval(q);
            let b = f.b as usize;
            let mut next = den.clone();
            next.resize(den.len() + b, BigRational::zero());
            for (k, x) in den.iter().enumerate() {
                next[k + b] -= x * &c;
            }
            den = next;
        }
        Ok(RatFnQ { num, den })
    }

    pub fn eval_numeric(&self, l: f64, t: f64) -> Result<f64> {
        let mut d = 1.0;
        for f in &self.den {
            let v = f.eval_f64(l, t);
            if v == 0.0 || !v.is_finite() {
                return Err(Error::PoleHit);
            }
            d *= v;
        }
        Ok(self.num.eval_f64(l, t) / d)
    }

    /// Equality as rational functions.
    pub fn equals(&self, other: &MotRat) -> bool {
        let left = multiset_minus(&other.den, &self.den);
        let right = multiset_minus(&self.den, &other.den);
        &self.num * &product(&left) == &other.num * &product(&right)
    }

    /// Presentation with nonnegative `L`-exponents:
    /// `self = numerator / (L^shift · ∏ factors)`.
    pub fn cleared(&self) -> ClearedForm {
        let shift = self.num.min_l_exp().map_or(0, |e| -e);
        ClearedForm {
            shift,
            numerator: self.num.shift_l(shift),
            factors: self.den.clone(),
        }
    }

    pub fn to_latex(&self) -> String {
        self.cleared().to_latex()
    }
}

/// `numerator / (L^shift · ∏ factors)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClearedForm {
    pub shift: i64,
    pub numerator: PolyT,
    pub factors: Vec<DenomFactor>,
}

impl ClearedForm {
    pub fn denominator_latex(&self) -> String {
        let mut out = String::new();
        match self.shift {
            0 => {}
            1 => out.push_str("\\mathbb{L}"),
            c => out.push_str(&format!("\\mathbb{{L}}^{{{c}}}")),
        }
        for f in &self.factors {
            out.push_str(&f.to_latex());
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    pub fn to_latex(&self) -> String {
        // pull out a visible (L - 1) factor when there is one
        let (prefix, num) = match self.numerator.div_l_minus_one() {
            Some(q) if !self.numerator.is_zero() => ("(\\mathbb{L}-1)", q),
            _ => ("", self.numerator.clone()),
        };
        let body = if prefix.is_empty() {
            num.to_latex()
        } else if num == PolyT::one() {
            "\\mathbb{L}-1".to_string()
        } else {
            format!("{prefix}\\left({}\\right)", num.to_latex())
        };
        if self.shift == 0 && self.factors.is_empty() {
            return body;
        }
        format!("\\frac{{{body}}}{{{}}}", self.denominator_latex())
    }
}

impl fmt::Display for ClearedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.numerator)?;
        if self.shift != 0 || !self.factors.is_empty() {
            write!(f, " / (")?;
            let mut parts = Vec::new();
            if self.shift != 0 {
                parts.push(format!("L^{}", self.shift));
            }
            parts.extend(self.factors.iter().map(|x| x.to_string()));
            write!(f, "{})", parts.join(" * "))?;
        }
        Ok(())
    }
}

impl fmt::Display for MotRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.cleared().fmt(f)
    }
}

impl PartialEq for MotRat {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Add<&MotRat> for &MotRat {
    type Output = MotRat;
    fn add(self, rhs: &MotRat) -> MotRat {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let den = self.lcm_den(rhs);
        let num = &self.over(&den) + &rhs.over(&den);
        MotRat { num, den }.normalize_zero()
    }
}

impl Neg for &MotRat {
    type Output = MotRat;
    fn neg(self) -> MotRat {
        MotRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub<&MotRat> for &MotRat {
    type Output = MotRat;
    fn sub(self, rhs: &MotRat) -> MotRat {
        self + &(-rhs)
    }
}

impl Mul<&MotRat> for &MotRat {
    type Output = MotRat;
    fn mul(self, rhs: &MotRat) -> MotRat {
        let mut den = self.den.clone();
        den.extend_from_slice(&rhs.den);
        MotRat::new(&self.num * &rhs.num, den).normalize_zero()
    }
}

impl Add for MotRat {
    type Output = MotRat;
    fn add(self, rhs: MotRat) -> MotRat {
        &self + &rhs
    }
}

impl Sub for MotRat {
    type Output = MotRat;
    fn sub(self, rhs: MotRat) -> MotRat {
        &self - &rhs
    }
}

impl Mul for MotRat {
    type Output = MotRat;
    fn mul(self, rhs: MotRat) -> MotRat {
        &self * &rhs
    }
}

impl Neg for MotRat {
    type Output = MotRat;
    fn neg(self) -> MotRat {
        -&self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LTermDoc {
    pub ldeg: i64,
    pub coef: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TCoeffDoc {
    pub tdeg: usize,
    pub terms: Vec<LTermDoc>,
}

/// JSON shape of a [`MotRat`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MotRatDoc {
    pub numerator: Vec<TCoeffDoc>,
    pub denominator: Vec<DenomFactor>,
}

impl From<MotRat> for MotRatDoc {
    fn from(x: MotRat) -> Self {
        let numerator = x
            .num
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(tdeg, c)| TCoeffDoc {
                tdeg,
                terms: c
                    .terms()
                    .rev()
                    .map(|(ldeg, coef)| LTermDoc {
                        ldeg,
                        coef: coef.to_string(),
                    })
                    .collect(),
            })
            .collect();
        MotRatDoc {
            numerator,
            denominator: x.den,
        }
    }
}

impl TryFrom<MotRatDoc> for MotRat {
    type Error = Error;
    fn try_from(doc: MotRatDoc) -> Result<Self> {
        let mut num = PolyT::zero();
        for t in doc.numerator {
            let mut c = LaurentL::zero();
            for term in t.terms {
                let coef: BigInt = term
                    .coef
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad coefficient {:?}", term.coef)))?;
                c.add_term(term.ldeg, coef);
            }
            num.add_term(t.tdeg, &c);
        }
        Ok(MotRat::new(num, doc.denominator))
    }
}
