use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::LaurentL;

/// Dense polynomial in `T` with [`LaurentL`] coefficients, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyT {
    coeffs: Vec<LaurentL>,
}

impl PolyT {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(LaurentL::one())
    }

    pub fn constant(c: LaurentL) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c · T^deg`.
    pub fn monomial(deg: usize, c: LaurentL) -> Self {
        let mut coeffs = vec![LaurentL::zero(); deg];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(coeffs: Vec<LaurentL>) -> Self {
        let mut p = PolyT { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(LaurentL::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `T`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, d: usize) -> LaurentL {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, d: usize) -> Option<&LaurentL> {
        self.coeffs.get(d)
    }

    pub fn coeffs(&self) -> &[LaurentL] {
        &self.coeffs
    }

    /// Adds `c · T^deg` in place.
    pub fn add_term(&mut self, deg: usize, c: &LaurentL) {
        if c.is_zero() {
            return;
        }
        if self.coeffs.len() <= deg {
            self.coeffs.resize(deg + 1, LaurentL::zero());
        }
        self.coeffs[deg] += c;
        self.trim();
    }

    /// Multiplies by `T^k`.
    pub fn shift_t(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![LaurentL::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PolyT { coeffs }
    }

    /// Exact division by `T^k`, `None` when some low coefficient is nonzero.
    pub fn unshift_t(&self, k: usize) -> Option<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(PolyT {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        })
    }

    /// Multiplies every coefficient by a Laurent polynomial.
    pub fn scale(&self, c: &LaurentL) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplies every coefficient by `L^k`.
    pub fn shift_l(&self, k: i64) -> Self {
        PolyT {
            coeffs: self.coeffs.iter().map(|x| x.shift(k)).collect(),
        }
    }

    /// Keeps the terms of degree `≤ max_deg`.
    pub fn truncate(&self, max_deg: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(max_deg + 1).cloned().collect())
    }

    /// Smallest `L`-exponent over all coefficients.
    pub fn min_l_exp(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(LaurentL::min_exp).min()
    }

    /// Exact quotient of every coefficient by `L - 1`.
    pub fn div_l_minus_one(&self) -> Option<Self> {
        self.coeffs
            .iter()
            .map(LaurentL::div_l_minus_one)
            .collect::<Option<Vec<_>>>()
            .map(Self::from_coeffs)
    }

    /// Substitutes `T = L^t_exp`, giving a Laurent polynomial.
    pub fn substitute_t_power(&self, t_exp: i64) -> LaurentL {
        let mut out = LaurentL::zero();
        for (d, c) in self.coeffs.iter().enumerate() {
            out += &c.shift(t_exp * d as i64);
        }
        out
    }

    pub fn eval_f64(&self, l: f64, t: f64) -> f64 {
        // Horner in T
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.eval_f64(l))
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = if latex { c.to_latex() } else { c.to_string() };
            let t = match (d, latex) {
                (0, _) => String::new(),
                (1, _) => "T".to_string(),
                (_, true) => format!("T^{{{d}}}"),
                (_, false) => format!("T^{d}"),
            };
            let body = if d == 0 {
                cs
            } else if c.is_one() {
                t
            } else if (-c.clone()).is_one() {
                format!("-{t}")
            } else if c.term_count() == 1 {
                format!("{cs}{}{t}", if latex { "" } else { "*" })
            } else {
                format!("({cs}){}{t}", if latex { "" } else { "*" })
            };
            parts.push(body);
        }
        let mut out = String::new();
        for (idx, p) in parts.iter().enumerate() {
            if idx == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

impl fmt::Display for PolyT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl From<LaurentL> for PolyT {
    fn from(c: LaurentL) -> Self {
        Self::constant(c)
    }
}

impl Add<&PolyT> for &PolyT {
    type Output = PolyT;
    fn add(self, rhs: &PolyT) -> PolyT {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => LaurentL::zero(),
            })
            .collect();
        PolyT::from_coeffs(coeffs)
    }
}

impl Neg for &PolyT {
    type Output = PolyT;
    fn neg(self) -> PolyT {
        PolyT {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub<&PolyT> for &PolyT {
    type Output = PolyT;
    fn sub(self, rhs: &PolyT) -> PolyT {
        self + &(-rhs)
    }
}

impl Mul<&PolyT> for &PolyT {
    type Output = PolyT;
    fn mul(self, rhs: &PolyT) -> PolyT {
        if self.is_zero() || rhs.is_zero() {
            return PolyT::zero();
        }
        let mut coeffs = vec![LaurentL::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += &(a * b);
            }
        }
        PolyT::from_coeffs(coeffs)
    }
}

impl Add for PolyT {
    type Output = PolyT;
    fn add(self, rhs: PolyT) -> PolyT {
        &self + &rhs
    }
}

impl Sub for PolyT {
    type Output = PolyT;
    fn sub(self, rhs: PolyT) -> PolyT {
        &self - &rhs
    }
}

impl Mul for PolyT {
    type Output = PolyT;
    fn mul(self, rhs: PolyT) -> PolyT {
        &self * &rhs
    }
}

impl Neg for PolyT {
    type Output = PolyT;
    fn neg(self) -> PolyT {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trimming_and_degree() {
        let p = PolyT::from_coeffs(vec![LaurentL::one(), LaurentL::zero(), LaurentL::zero()]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(PolyT::zero().degree(), None);
        let q = &PolyT::monomial(3, LaurentL::one()) - &PolyT::monomial(3, LaurentL::one());
        assert!(q.is_zero());
    }

    #[test]
    fn product_and_shift() {
        let one_minus_t = &PolyT::one() - &PolyT::monomial(1, LaurentL::one());
        let one_plus_t = &PolyT::one() + &PolyT::monomial(1, LaurentL::one());
        let p = &one_minus_t * &one_plus_t;
        assert_eq!(p, &PolyT::one() - &PolyT::monomial(2, LaurentL::one()));
        assert_eq!(p.shift_t(2).unshift_t(2).unwrap(), p);
        assert!(p.unshift_t(1).is_none());
    }

    #[test]
    fn display() {
        let p = &PolyT::monomial(2, LaurentL::from_terms([(3, 1), (0, -1)]))
            - &PolyT::monomial(1, LaurentL::l_pow(-1));
        assert_eq!(p.to_string(), "(L^3 - 1)*T^2 - L^-1*T");
    }
}
