//! Topological zeta function: closed form, poles and residues, and the
//! bridge to the motivic zeta function through `T = L^{-s}`, `L → 1`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::MotRat;
use crate::error::{Error, Result};
use crate::invariants::{candidate_poles, coupling_coefficient, residues, structural_pairs, PoleCandidate};
use crate::motivic::ZetaAssembly;
use crate::rational::{fmt_rational, rat, to_f64};
use crate::semigroup::SemigroupData;

/// Dense polynomial in `s` over ℚ, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `a + b s`.
    pub fn linear(a: BigRational, b: BigRational) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, s: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * s + c)
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * s + to_f64(c))
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        QPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(BigRational::zero);
                    let b = other.0.get(i).cloned().unwrap_or_else(BigRational::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::default();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|c| c * k).collect())
    }

    /// `(content, primitive)` with integer primitive part whose leading
    /// coefficient is positive.
    pub fn content_form(&self) -> (BigRational, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let lcm_den = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm_den.clone())).to_integer())
            .collect();
        let mut gcd = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if self.0.last().unwrap().is_negative() {
            gcd = -gcd;
        }
        let prim = ints.iter().map(|c| c / &gcd).collect();
        (BigRational::new(gcd, lcm_den), prim)
    }
}

/// The linear factor `ν + sN`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LinFactor {
    pub nu: u64,
    pub big_n: u64,
}

impl LinFactor {
    pub fn root(self) -> BigRational {
        rat(-(self.nu as i64), self.big_n as i64)
    }

    fn poly(self) -> QPoly {
        QPoly::linear(rat(self.nu as i64, 1), rat(self.big_n as i64, 1))
    }

    fn eval(self, s: &BigRational) -> BigRational {
        rat(self.nu as i64, 1) + s * rat(self.big_n as i64, 1)
    }
}

impl fmt::Display for LinFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.big_n {
            1 => write!(f, "({} + s)", self.nu),
            n => write!(f, "({} + {}s)", self.nu, n),
        }
    }
}

/// `numerator / ∏ (ν + sN)` with the factored denominator kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatQs {
    pub num: QPoly,
    pub den: Vec<LinFactor>,
}

fn den_product(factors: &[LinFactor]) -> QPoly {
    factors
        .iter()
        .fold(QPoly::constant(BigRational::one()), |acc, f| acc.mul(&f.poly()))
}

impl RatQs {
    pub fn eval(&self, s: &BigRational) -> Result<BigRational> {
        let mut d = BigRational::one();
        for f in &self.den {
            d *= f.eval(s);
        }
        if d.is_zero() {
            return Err(Error::PoleHit);
        }
        Ok(self.num.eval(s) / d)
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        let d: f64 = self
            .den
            .iter()
            .map(|f| f.nu as f64 + s * f.big_n as f64)
            .product();
        self.num.eval_f64(s) / d
    }

    /// Residue at the root of `den[idx]`, assuming the roots are distinct.
    pub fn residue_at(&self, idx: usize) -> BigRational {
        let f = self.den[idx];
        let s0 = f.root();
        let mut d = rat(f.big_n as i64, 1);
        for (j, other) in self.den.iter().enumerate() {
            if j != idx {
                d *= other.eval(&s0);
            }
        }
        self.num.eval(&s0) / d
    }

    pub fn is_proper(&self) -> bool {
        self.num.degree().is_none_or(|d| d < self.den.len())
    }

    fn render(&self, latex: bool) -> String {
        let (content, prim) = self.num.content_form();
        let mut terms = Vec::new();
        for (d, c) in prim.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            let coef = if abs.is_one() && d > 0 { String::new() } else { abs.to_string() };
            let var = match (d, latex) {
                (0, _) => String::new(),
                (1, _) => "s".to_string(),
                (_, true) => format!("s^{{{d}}}"),
                (_, false) => format!("s^{d}"),
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            terms.push((sign, format!("{coef}{var}")));
        }
        let mut poly = String::new();
        for (idx, (sign, t)) in terms.iter().enumerate() {
            if idx == 0 {
                if *sign == "-" {
                    poly.push('-');
                }
            } else {
                poly.push_str(&format!(" {sign} "));
            }
            poly.push_str(t);
        }
        let num = if content.is_one() {
            poly
        } else if prim.len() == 1 && prim[0].is_one() {
            fmt_rational(&content)
        } else {
            format!("{}({poly})", fmt_rational(&content))
        };
        let den: String = self
            .den
            .iter()
            .map(|f| {
                if latex {
                    match f.big_n {
                        1 => format!("({}+s)", f.nu),
                        n => format!("({}+{}s)", f.nu, n),
                    }
                } else {
                    f.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("");
        if latex {
            format!("\\frac{{{num}}}{{{den}}}")
        } else {
            format!("{num} / ({den})")
        }
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }
}

impl fmt::Display for RatQs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// JSON document `{"num": [...], "den": [[ν, N], ...]}` with rationals as strings.
#[derive(Debug, Clone, Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct RatQsDoc {
    pub num: Vec<String>,
    pub den: Vec<(u64, u64)>,
}

impl From<&RatQs> for RatQsDoc {
    fn from(z: &RatQs) -> Self {
        RatQsDoc {
            num: z.num.coeffs().iter().map(fmt_rational).collect(),
            den: z.den.iter().map(|f| (f.nu, f.big_n)).collect(),
        }
    }
}

/// Denominator factors `(g + s), (ν_1 + sN_1), …, (ν_g + sN_g)`.
pub fn top_denominator(s: &SemigroupData) -> Vec<LinFactor> {
    let mut den = vec![LinFactor { nu: s.g() as u64, big_n: 1 }];
    den.extend(
        structural_pairs(s)
            .iter()
            .map(|p| LinFactor { nu: p.nu, big_n: p.big_n }),
    );
    den
}

/// Product of all denominator factors except those at the given positions.
fn cofactor(den: &[LinFactor], skip: &[usize]) -> QPoly {
    let kept: Vec<LinFactor> = den
        .iter()
        .enumerate()
        .filter(|(j, _)| !skip.contains(j))
        .map(|(_, f)| *f)
        .collect();
    den_product(&kept)
}

/// `ν_1/(ν_1+sN_1) − Σ_i c_i s/((ν_i+sN_i)(ν_{i+1}+sN_{i+1})) − s/((g+s)(ν_g+sN_g))`
/// over the common denominator `(g+s) ∏ (ν_i+sN_i)`.
pub fn zeta_top(s: &SemigroupData) -> RatQs {
    let g = s.g();
    let pairs = structural_pairs(s);
    let den = top_denominator(s);
    let svar = QPoly::linear(BigRational::zero(), BigRational::one());

    let mut num = cofactor(&den, &[1]).scale(&rat(pairs[0].nu as i64, 1));
    for i in 1..g {
        let c = coupling_coefficient(s, &pairs, i);
        let term = cofactor(&den, &[i, i + 1]).mul(&svar).scale(&-c);
        num = num.add(&term);
    }
    let last = cofactor(&den, &[0, g]).mul(&svar).scale(&rat(-1, 1));
    num = num.add(&last);
    RatQs { num, den }
}

/// Candidate poles with residues computed from [`zeta_top`] by partial
/// fractions and cross-checked against the closed-form residue table.
pub fn poles_with_residues(s: &SemigroupData) -> Result<Vec<PoleCandidate>> {
    let z = zeta_top(s);
    let table = residues(s);
    let mut poles = candidate_poles(s);
    // candidates run −g, −ν_g/N_g, …, −ν_1/N_1; den runs (g,1), (ν_1,N_1), …
    let g = s.g();
    for (pos, pole) in poles.iter_mut().enumerate() {
        let idx = if pos == 0 { 0 } else { g + 1 - pos };
        debug_assert_eq!(z.den[idx].root(), pole.value);
        let symbolic = z.residue_at(idx);
        let (tv, tr) = &table[pos];
        debug_assert_eq!(tv, &pole.value);
        if *tr != symbolic {
            return Err(Error::ResidueMismatch {
                pole: fmt_rational(&pole.value),
                table: fmt_rational(tr),
                symbolic: fmt_rational(&symbolic),
            });
        }
        pole.order = if symbolic.is_zero() { 0 } else { 1 };
        pole.residue = Some(symbolic);
    }
    Ok(poles)
}

fn specialization_point(eps: f64, s: f64) -> (f64, f64) {
    (1.0 + eps, (-s * eps.ln_1p()).exp())
}

/// Largest `|Z^mot(1+ε, (1+ε)^{-s}) − Z^top(s)|` over the samples.
pub fn check_specialization(
    s: &SemigroupData,
    zeta: &ZetaAssembly,
    top: &RatQs,
    eps: f64,
    samples: &[f64],
    local: bool,
) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::Domain(format!("eps = {eps} outside (0, 1e-3]")));
    }
    let mut worst: f64 = 0.0;
    for &x in samples {
        let (l, t) = specialization_point(eps, x);
        let mot = zeta.eval_numeric(local, l, t, s.g())?;
        worst = worst.max((mot - top.eval_f64(x)).abs());
    }
    Ok(worst)
}

/// Exact value of `lim_{L→1} x(L, T = L^{-s})` for an integer `s ≥ 0`, or
/// `None` when the limit is infinite.
pub fn exact_limit(x: &MotRat, s: u64) -> Option<BigRational> {
    let num = x.numerator().substitute_t_power(-(s as i64));
    let mut den_const = BigInt::one();
    let mut vanishing = 0usize;
    for f in x.denominator() {
        let c = f.a + s as i64 * f.b as i64;
        if c == 0 {
            // the factor is identically zero along the curve
            return None;
        }
        // 1 − L^{-c} = (L − 1)·(c + O(L − 1))
        vanishing += 1;
        den_const *= BigInt::from(c);
    }
    let mut q = num;
    for _ in 0..vanishing {
        if q.is_zero() {
            return Some(BigRational::zero());
        }
        q = q.div_l_minus_one()?;
    }
    Some(BigRational::new(q.eval_at_one(), den_const))
}

/// Global and local topological zeta functions agree: both motivic totals
/// specialise to [`zeta_top`] at `s = 0..=3` exactly, and numerically at the
/// default sample points.
pub fn global_equals_local_top(s: &SemigroupData, zeta: &ZetaAssembly) -> bool {
    let top = zeta_top(s);
    let exact = (0..=3u64).all(|k| {
        let expected = top.eval(&rat(k as i64, 1)).ok();
        exact_limit(&zeta.total_global, k) == expected && exact_limit(&zeta.total_local, k) == expected
    });
    let numeric = [false, true].iter().all(|&local| {
        check_specialization(s, zeta, &top, 1e-6, &[0.0, 0.5, 1.0, 2.0], local)
            .is_ok_and(|d| d < 1e-4)
    });
    exact && numeric
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motivic::zeta_motivic;

    fn s(text: &str) -> SemigroupData {
        text.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn closed_forms() {
        let z = zeta_top(&s("4,6,13"));
        assert_eq!(z.num, QPoly::new(ints(&[4 * 148, 4 * 169, 4 * 47])));
        assert_eq!(z.to_string(), "4(47s^2 + 169s + 148) / ((2 + s)(8 + 6s)(37 + 26s))");
        let cusp = zeta_top(&s("2,3"));
        assert_eq!(cusp.num, QPoly::new(ints(&[5, 4])));
        assert_eq!(cusp.eval(&rat(1, 1)).unwrap(), rat(9, 22));
        assert!(z.is_proper());
    }

    #[test]
    fn residues_of_4_6_13() {
        let poles = poles_with_residues(&s("4,6,13")).unwrap();
        assert_eq!(poles[0].residue, Some(rat(-2, 15)));
        assert_eq!(poles[2].value, rat(-4, 3));
        assert_eq!(poles[2].residue, Some(rat(8, 3)));
        assert!(poles.iter().all(|p| p.order == 1));
    }

    #[test]
    fn exact_limits_match() {
        for text in ["2,3", "4,6,13"] {
            let c = s(text);
            let zeta = zeta_motivic(&c);
            let top = zeta_top(&c);
            for k in 0..4 {
                assert_eq!(
                    exact_limit(&zeta.total_global, k),
                    Some(top.eval(&rat(k as i64, 1)).unwrap())
                );
            }
            assert!(global_equals_local_top(&c, &zeta));
        }
    }

    #[test]
    fn numeric_bridge() {
        let c = s("4,6,13");
        let zeta = zeta_motivic(&c);
        let top = zeta_top(&c);
        let d = check_specialization(&c, &zeta, &top, 1e-6, &[0.0, 1.0, 2.0], false).unwrap();
        assert!(d < 1e-4, "{d}");
    }
}
