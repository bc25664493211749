use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Sparse Laurent polynomial in the Lefschetz class `L` with big-integer
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentL {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentL {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `coef · L^exp`.
    pub fn monomial(exp: i64, coef: impl Into<BigInt>) -> Self {
        let mut out = Self::zero();
        out.add_term(exp, coef.into());
        out
    }

    /// `L^exp`.
    pub fn l_pow(exp: i64) -> Self {
        Self::monomial(exp, 1)
    }

    /// `L - 1`.
    pub fn l_minus_one() -> Self {
        Self::from_terms([(1, 1), (0, -1)])
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c.into());
        }
        out
    }

    pub fn add_term(&mut self, exp: i64, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by `L^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentL {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentL {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Exact evaluation at `L = q`, `q ≠ 0`.
    pub fn eval(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let p = if *e >= 0 {
                num_traits::pow(q.clone(), *e as usize)
            } else {
                num_traits::pow(q.recip(), (-*e) as usize)
            };
            acc += p * BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, l: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * l.powi(*e as i32))
            .sum()
    }

    /// Sum of coefficients, i.e. the value at `L = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact quotient by `L - 1`, or `None` when it does not divide.
    pub fn div_l_minus_one(&self) -> Option<Self> {
        let Some(low) = self.min_exp() else {
            return Some(Self::zero());
        };
        let high = self.max_exp().unwrap();
        // synthetic division of Σ c_e L^(e-low) from the top
        let mut out = Self::zero();
        let mut carry = BigInt::zero();
        for e in (low + 1..=high).rev() {
            carry += self.coeff(e);
            out.add_term(e - 1, carry.clone());
        }
        carry += self.coeff(low);
        carry.is_zero().then_some(out)
    }

    /// Multiplicity of `L = 1` as a root.
    pub fn order_at_one(&self) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut p = self.clone();
        let mut order = 0;
        while let Some(q) = p.div_l_minus_one() {
            p = q;
            order += 1;
        }
        Some(order)
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, var: &str, latex: bool) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = abs.is_one();
            match *e {
                0 => write!(f, "{abs}")?,
                1 => {
                    if !unit {
                        write!(f, "{abs}")?;
                    }
                    write!(f, "{var}")?;
                }
                _ => {
                    if !unit {
                        write!(f, "{abs}")?;
                    }
                    if latex {
                        write!(f, "{var}^{{{e}}}")?;
                    } else {
                        write!(f, "{var}^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_latex(&self) -> String {
        struct Latex<'a>(&'a LaurentL);
        impl fmt::Display for Latex<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, "\\mathbb{L}", true)
            }
        }
        Latex(self).to_string()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for LaurentL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, "L", false)
    }
}

impl From<i64> for LaurentL {
    fn from(c: i64) -> Self {
        Self::monomial(0, c)
    }
}

impl AddAssign<&LaurentL> for LaurentL {
    fn add_assign(&mut self, rhs: &LaurentL) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentL> for LaurentL {
    fn sub_assign(&mut self, rhs: &LaurentL) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl Add<&LaurentL> for &LaurentL {
    type Output = LaurentL;
    fn add(self, rhs: &LaurentL) -> LaurentL {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LaurentL> for &LaurentL {
    type Output = LaurentL;
    fn sub(self, rhs: &LaurentL) -> LaurentL {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&LaurentL> for &LaurentL {
    type Output = LaurentL;
    fn mul(self, rhs: &LaurentL) -> LaurentL {
        let mut out = LaurentL::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentL {
    type Output = LaurentL;
    fn neg(self) -> LaurentL {
        LaurentL {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<LaurentL> for LaurentL {
            type Output = LaurentL;
            fn $method(self, rhs: LaurentL) -> LaurentL {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentL {
    type Output = LaurentL;
    fn neg(self) -> LaurentL {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn arithmetic_drops_zeros() {
        let a = LaurentL::from_terms([(2, 1), (0, -1)]);
        let b = LaurentL::from_terms([(2, -1), (1, 3)]);
        let s = &a + &b;
        assert_eq!(s, LaurentL::from_terms([(1, 3), (0, -1)]));
        assert_eq!(s.term_count(), 2);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn division_by_l_minus_one() {
        let p = &LaurentL::l_minus_one() * &LaurentL::from_terms([(46, 1), (45, 1), (-3, 2)]);
        assert_eq!(
            p.div_l_minus_one().unwrap(),
            LaurentL::from_terms([(46, 1), (45, 1), (-3, 2)])
        );
        assert!(LaurentL::l_pow(3).div_l_minus_one().is_none());
        assert_eq!(p.order_at_one(), Some(1));
    }

    #[test]
    fn evaluation() {
        let x = &(&LaurentL::l_minus_one() * &LaurentL::l_pow(1)) + &LaurentL::l_pow(3);
        assert_eq!(x.eval(&rat(5, 1)), rat(145, 1));
        assert_eq!(LaurentL::l_pow(-2).eval(&rat(2, 1)), rat(1, 4));
        assert_eq!(LaurentL::l_minus_one().eval_f64(1.0), 0.0);
    }

    #[test]
    fn display() {
        let x = LaurentL::from_terms([(46, 1), (45, 1)]);
        assert_eq!(x.to_string(), "L^46 + L^45");
        assert_eq!(LaurentL::l_minus_one().to_string(), "L - 1");
        assert_eq!(LaurentL::from_terms([(-3, -2)]).to_latex(), "-2\\mathbb{L}^{-3}");
    }
}
