//! Closed form of the global and local motivic zeta functions, assembled from
//! the contributions of the branches of the jet-codimension tree.

use crate::algebra::{DenomFactor, LaurentL, MotRat, PolyT};
use crate::error::{Error, Result};
use crate::invariants::{c_ik, horizontal_factor, interval, period_factor, structural_pairs};
use crate::jets::{poincare_truncated, poincare_truncated_local};
use crate::semigroup::SemigroupData;

/// The branch contributions to `J_Y(T)` and the two zeta functions.
#[derive(Debug, Clone)]
pub struct ZetaAssembly {
    /// Side branch of `0`.
    pub term_a: MotRat,
    /// Main branch.
    pub term_b: MotRat,
    /// Side branches `i = 1..g-1`.
    pub terms_c: Vec<MotRat>,
    /// Infinite branches.
    pub term_d: MotRat,
    pub total_global: MotRat,
    pub total_local: MotRat,
}

fn g1(s: &SemigroupData) -> i64 {
    s.g() as i64 + 1
}

fn gauge(s: &SemigroupData) -> DenomFactor {
    DenomFactor::new(s.g() as i64, 1)
}

fn structural_factors(s: &SemigroupData) -> Vec<DenomFactor> {
    structural_pairs(s)
        .iter()
        .map(|p| DenomFactor::new(p.nu as i64, p.big_n))
        .collect()
}

/// `(L-1) L^{-(g+1)} T / (1 - L^{-g} T)`.
pub fn term_side_zero(s: &SemigroupData) -> MotRat {
    let num = PolyT::monomial(1, LaurentL::l_minus_one().shift(-g1(s)));
    MotRat::new(num, vec![gauge(s)])
}

/// `L^{-(g+1)} T · Σ_{r<N_1} L^{-Σ_i ⌊r/n_i⌋} T^r / (1 - L^{-ν_1} T^{N_1})`.
pub fn term_main(s: &SemigroupData) -> MotRat {
    let first = structural_factors(s)[0];
    let mut num = PolyT::zero();
    for r in 0..first.b {
        let e: u64 = s.n_all().iter().map(|&n| r / n).sum();
        num.add_term(r as usize + 1, &LaurentL::l_pow(-g1(s) - e as i64));
    }
    MotRat::new(num, vec![first])
}

/// The polynomial `Z_i(T)`, `1 ≤ i ≤ g-1`.
pub fn z_i_polynomial(s: &SemigroupData, i: usize) -> Result<PolyT> {
    if i == 0 || i >= s.g() {
        return Err(Error::Domain(format!(
            "Z_{i} is defined for 1 <= i <= g-1 = {}",
            s.g() as i64 - 1
        )));
    }
    let pairs = structural_pairs(s);
    let periods = period_factor(s, &pairs, i);
    let blocks = horizontal_factor(s, &pairs, i);
    let scale = s.n_prod_from_2(i);
    let mut z = PolyT::zero();
    for r in 0..periods {
        for rp in 1..=blocks {
            let k = (rp + r) * scale;
            for m in interval(s, i, k, rp)? {
                let c = c_ik(s, i, k, m)?;
                z.add_term(m as usize, &LaurentL::l_pow(-(c as i64) - 1));
            }
        }
    }
    Ok(z)
}

/// `(L-1) T Z_i(T) / ((1 - L^{-ν_i} T^{N_i})(1 - L^{-ν_{i+1}} T^{N_{i+1}}))`.
pub fn term_side(s: &SemigroupData, i: usize) -> Result<MotRat> {
    let z = z_i_polynomial(s, i)?;
    let f = structural_factors(s);
    let num = z.shift_t(1).scale(&LaurentL::l_minus_one());
    Ok(MotRat::new(num, vec![f[i - 1], f[i]]))
}

/// `(L-1) L^{-(ν_g+g+1)} T^{N_g+1} / ((1 - L^{-g} T)(1 - L^{-ν_g} T^{N_g}))`.
pub fn term_infinite(s: &SemigroupData) -> MotRat {
    let last = *structural_factors(s).last().expect("g >= 1");
    let num = PolyT::monomial(
        last.b as usize + 1,
        LaurentL::l_minus_one().shift(-(last.a + g1(s))),
    );
    MotRat::new(num, vec![gauge(s), last])
}

/// `(1 - T)/T · x`; every branch term carries at least one factor `T`.
fn one_minus_t_over_t(x: &MotRat) -> MotRat {
    let one_minus_t = DenomFactor::new(0, 1).to_poly();
    x.div_t()
        .expect("branch contributions are divisible by T")
        .mul_poly(&one_minus_t)
}

pub fn zeta_motivic(s: &SemigroupData) -> ZetaAssembly {
    let term_a = term_side_zero(s);
    let term_b = term_main(s);
    let terms_c: Vec<MotRat> = (1..s.g())
        .map(|i| term_side(s, i).expect("1 <= i < g"))
        .collect();
    let term_d = term_infinite(s);

    let mut local_sum = &term_b + &term_d;
    for c in &terms_c {
        local_sum = &local_sum + c;
    }
    let global_sum = &local_sum + &term_a;
    let total_global = &MotRat::one() - &one_minus_t_over_t(&global_sum);
    let total_local =
        &MotRat::from_laurent(LaurentL::l_pow(-g1(s))) - &one_minus_t_over_t(&local_sum);
    ZetaAssembly {
        term_a,
        term_b,
        terms_c,
        term_d,
        total_global,
        total_local,
    }
}

impl ZetaAssembly {
    pub fn total(&self, local: bool) -> &MotRat {
        if local {
            &self.total_local
        } else {
            &self.total_global
        }
    }

    /// Floating evaluation that sums the branch terms one by one instead of
    /// going through the combined numerator, which cancels badly near `L = 1`.
    pub fn eval_numeric(&self, local: bool, l: f64, t: f64, g: usize) -> Result<f64> {
        let mut sum = self.term_b.eval_numeric(l, t)? + self.term_d.eval_numeric(l, t)?;
        for c in &self.terms_c {
            sum += c.eval_numeric(l, t)?;
        }
        let head = if local {
            l.powi(-(g as i32 + 1))
        } else {
            sum += self.term_a.eval_numeric(l, t)?;
            1.0
        };
        Ok(head - (1.0 - t) / t * sum)
    }
}

/// Outcome of comparing the closed form with the jet-class series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCheck {
    pub order: usize,
    /// First `T`-degree where the two sides differ.
    pub first_mismatch: Option<usize>,
}

impl SeriesCheck {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

fn first_mismatch(a: &PolyT, b: &PolyT, order: usize) -> Option<usize> {
    (0..=order).find(|&d| a.coeff(d) != b.coeff(d))
}

/// `head - (1 - T)/T · p`, truncated at `T^order`.
fn from_poincare(head: LaurentL, p: &PolyT, order: usize) -> PolyT {
    let q = p.unshift_t(1).expect("Poincare series starts at T^1");
    let one_minus_t = DenomFactor::new(0, 1).to_poly();
    (&PolyT::constant(head) - &(&q * &one_minus_t)).truncate(order)
}

/// Compares the closed form with `head - (1-T)/T · J` through `T^order`.
pub fn series_check(s: &SemigroupData, zeta: &ZetaAssembly, order: usize, local: bool) -> SeriesCheck {
    let closed = zeta
        .total(local)
        .expand_series(order)
        .expect("all denominator factors have b >= 1");
    let series = if local {
        from_poincare(
            LaurentL::l_pow(-g1(s)),
            &poincare_truncated_local(s, order + 1),
            order,
        )
    } else {
        from_poincare(LaurentL::one(), &poincare_truncated(s, order + 1), order)
    };
    SeriesCheck {
        order,
        first_mismatch: first_mismatch(&closed, &series, order),
    }
}

/// Both the global and the local comparison through `T^order`.
pub fn series_consistency(s: &SemigroupData, order: usize) -> bool {
    let zeta = zeta_motivic(s);
    series_check(s, &zeta, order, false).passed() && series_check(s, &zeta, order, true).passed()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> SemigroupData {
        text.parse().unwrap()
    }

    #[test]
    fn branch_terms_of_4_6_13() {
        let c = s("4,6,13");
        assert_eq!(
            term_side_zero(&c).expand_series(1).unwrap().coeff(1),
            LaurentL::l_minus_one().shift(-3)
        );
        let b = term_main(&c);
        assert_eq!(b.numerator().coeffs().len(), 7);
        assert_eq!(b.numerator().coeff(6), LaurentL::l_pow(-3 - 5));
        assert_eq!(b.expand_series(1).unwrap().coeff(1), LaurentL::l_pow(-3));
        let d = term_infinite(&c);
        assert_eq!(d.denominator(), &[DenomFactor::new(2, 1), DenomFactor::new(37, 26)]);
        assert_eq!(d.numerator().coeff(27), LaurentL::l_minus_one().shift(-40));
    }

    #[test]
    fn main_branch_of_cusp() {
        let b = term_main(&s("2,3"));
        let exps: Vec<i64> = (1..=6)
            .map(|d| b.numerator().coeff(d).min_exp().unwrap() + 2)
            .collect();
        assert_eq!(exps, vec![0, 0, -1, -2, -3, -3]);
        let d = term_infinite(&s("2,3"));
        assert_eq!(d.denominator(), &[DenomFactor::new(1, 1), DenomFactor::new(5, 6)]);
        assert_eq!(d.numerator().coeff(7), LaurentL::l_minus_one().shift(-7));
    }

    #[test]
    fn z_polynomials() {
        let z = z_i_polynomial(&s("4,6,13"), 1).unwrap();
        let support: Vec<usize> = (0..40).filter(|&d| !z.coeff(d).is_zero()).collect();
        let expected: Vec<usize> = (6..13).chain(19..26).collect();
        assert_eq!(support, expected);
        assert_eq!(z.coeff(6), LaurentL::l_pow(-11));
        let z2 = z_i_polynomial(&s("8,12,26,53"), 2).unwrap();
        let count = z2.coeffs().iter().filter(|c| !c.is_zero()).count();
        assert_eq!(count, 54);
        assert!(z2.coeff(26).term_count() == 1 && z2.coeff(79).term_count() == 1);
        assert!(z_i_polynomial(&s("4,6,13"), 2).is_err());
    }

    #[test]
    fn constant_terms() {
        let z = zeta_motivic(&s("4,6,13"));
        let g = z.total_global.expand_series(0).unwrap();
        assert_eq!(g.coeff(0), LaurentL::from_terms([(0, 1), (-2, -1)]));
        assert!(z.total_local.expand_series(0).unwrap().coeff(0).is_zero());
    }

    #[test]
    fn small_series_checks() {
        assert!(series_consistency(&s("2,3"), 20));
        assert!(series_consistency(&s("4,6,13"), 30));
    }
}
