//! Numeric invariants of the space monomial curve: the structural pairs
//! `(N_i, ν_i)`, the log canonical threshold, the codimension functions of the
//! jet-scheme strata and the candidate poles with their residues.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, rat};
use crate::semigroup::SemigroupData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralPair {
    pub i: usize,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub nu: u64,
}

impl StructuralPair {
    /// `ν_i / N_i` in lowest terms.
    pub fn ratio(&self) -> BigRational {
        rat(self.nu as i64, self.big_n as i64)
    }
}

fn lcm_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(1u64, |acc, v| acc.lcm(&v))
}

/// `ν_i / N_i` from its defining expression, independent of `N_i`.
pub fn pole_ratio(s: &SemigroupData, i: usize) -> BigRational {
    let g = s.g();
    let big = |x: u64| BigInt::from(x);
    let numer: BigInt = (0..=i).map(|l| big(s.beta(l))).sum::<BigInt>()
        - (1..i).map(|l| big(s.n_beta(l))).sum::<BigInt>();
    let mut total = BigRational::new(numer, big(s.n_beta(i)));
    total += BigRational::from_integer(BigInt::from(i as i64 - 1));
    for l in i + 1..=g {
        total += BigRational::new(BigInt::one(), big(s.n(l)));
    }
    total
}

/// The pairs `(N_i, ν_i)`, `i = 1..=g`, with
/// `N_i = lcm(β̄_i/e_i, n_i, …, n_g)` and `ν_i = N_i · pole_ratio(i)`.
pub fn structural_pairs(s: &SemigroupData) -> Vec<StructuralPair> {
    let g = s.g();
    (1..=g)
        .map(|i| {
            let big_n = lcm_all(
                std::iter::once(s.beta(i) / s.e(i)).chain((i..=g).map(|l| s.n(l))),
            );
            let nu = pole_ratio(s, i) * BigRational::from_integer(BigInt::from(big_n));
            assert!(nu.is_integer(), "nu_{i} is not an integer");
            let nu = nu
                .to_integer()
                .to_u64()
                .expect("nu_i exceeds u64; generator bound violated");
            StructuralPair { i, big_n, nu }
        })
        .collect()
}

/// `K_i = e_i N_i / (n_i β̄_i)`; for `i = 1` this is `N_1/(n_0 n_1)`.
pub fn period_factor(s: &SemigroupData, pairs: &[StructuralPair], i: usize) -> u64 {
    let num = s.e(i) * pairs[i - 1].big_n;
    debug_assert_eq!(num % s.n_beta(i), 0);
    num / s.n_beta(i)
}

/// `e_{i+1} N_{i+1} / β̄_{i+1}`: the number of interval blocks per horizontal period.
pub fn horizontal_factor(s: &SemigroupData, pairs: &[StructuralPair], i: usize) -> u64 {
    let num = s.e(i + 1) * pairs[i].big_n;
    debug_assert_eq!(num % s.beta(i + 1), 0);
    num / s.beta(i + 1)
}

/// Log canonical threshold `Σ_{l=0}^g 1/n_l`.
pub fn lct(s: &SemigroupData) -> BigRational {
    s.n_all()
        .iter()
        .map(|&n| rat(1, n as i64))
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// `j(k)`: 2 if `n_2 ∤ k`, otherwise the largest `l ≤ g+1` with
/// `n_2 ⋯ n_{l-1} | k`. The value `g+1` marks an infinite side branch.
pub fn j_of_k(s: &SemigroupData, k: u64) -> usize {
    let g = s.g();
    let mut j = 2;
    while j <= g && k.is_multiple_of(s.n_prod_from_2(j)) {
        j += 1;
    }
    j.min(g + 1)
}

/// `k n_i β̄_i / e_1` when integral.
fn scaled_nbeta(s: &SemigroupData, i: usize, k: u64) -> Option<u64> {
    let num = u128::from(k) * u128::from(s.n_beta(i));
    let e1 = u128::from(s.e(1));
    (num % e1 == 0).then(|| (num / e1) as u64)
}

/// Upper window bound `k n_{i+1} β̄_{i+1} / e_1`, `None` meaning `+∞` (`i = g`).
fn window_end(s: &SemigroupData, i: usize, k: u64) -> Option<u64> {
    if i >= s.g() {
        None
    } else {
        scaled_nbeta(s, i + 1, k)
    }
}

/// The window index `i` with `k n_i β̄_i/e_1 ≤ m < k n_{i+1} β̄_{i+1}/e_1`
/// for an `m ≥ k n_0 n_1`; `None` when `m` lies below the side branch.
pub fn window_index(s: &SemigroupData, k: u64, m: u64) -> Option<usize> {
    let g = s.g();
    let start = k * s.n0() * s.n(1);
    if m < start {
        return None;
    }
    let mut i = 1;
    while i < g {
        let next = u128::from(k) * u128::from(s.n_beta(i + 1));
        // compare m < k n_{i+1} β̄_{i+1} / e_1 without requiring integrality
        if u128::from(m) * u128::from(s.e(1)) < next {
            break;
        }
        i += 1;
    }
    Some(i)
}

/// Codimension `c_{i,k}(m)` of the stratum `D_{m,k}` on window `i`.
pub fn c_ik(s: &SemigroupData, i: usize, k: u64, m: u64) -> Result<u64> {
    let g = s.g();
    let outside = || Error::Domain(format!("c_{{{i},{k}}}({m}) outside its window"));
    if i == 0 || i > g || k == 0 || i >= j_of_k(s, k) {
        return Err(outside());
    }
    let lo = scaled_nbeta(s, i, k).ok_or_else(outside)?;
    if m < lo {
        return Err(outside());
    }
    if let Some(hi) = window_end(s, i, k) {
        if m >= hi {
            return Err(outside());
        }
    }
    let mut c: u64 = k * (s.n0() + s.n(1));
    for l in 2..=i {
        let num = k * s.beta(l);
        if !num.is_multiple_of(s.e(1)) {
            return Err(outside());
        }
        c += num / s.e(1);
    }
    for l in 1..=i {
        c += m - scaled_nbeta(s, l, k).ok_or_else(outside)? + 1;
    }
    for l in i + 1..=g {
        c += m / s.n(l) + 1;
    }
    Ok(c)
}

/// `c(m) = g + 1 + Σ_{i=0}^g ⌊m/n_i⌋`, the codimension of the refined main stratum.
pub fn c_main(s: &SemigroupData, m: u64) -> u64 {
    s.g() as u64 + 1 + s.n_all().iter().map(|&n| m / n).sum::<u64>()
}

/// Codimension of `B_m` in `C^{(g+1)(m+1)}`, `m ≥ 1`.
pub fn codim_b(s: &SemigroupData, m: u64) -> u64 {
    let n0n1 = s.n0() * s.n(1);
    if !m.is_multiple_of(n0n1) {
        c_main(s, m)
    } else {
        let l1 = m / n0n1;
        let g = s.g() as u64;
        g + l1 * (s.n0() + s.n(1)) + (2..=s.g()).map(|i| m / s.n(i)).sum::<u64>()
    }
}

/// Whether `D_{m,k}` is empty, i.e. `m ≥ k n_{j(k)} β̄_{j(k)} / e_1`.
pub fn is_d_empty(s: &SemigroupData, m: u64, k: u64) -> bool {
    let j = j_of_k(s, k);
    if j > s.g() {
        return false;
    }
    u128::from(m) * u128::from(s.e(1)) >= u128::from(k) * u128::from(s.n_beta(j))
}

/// `l_i = n_{i+1} β̄_{i+1}/e_i − n_i β̄_i/e_i`, `i = 1..g-1`.
pub fn interval_length(s: &SemigroupData, i: usize) -> Result<u64> {
    if i == 0 || i >= s.g() {
        return Err(Error::Domain(format!("interval length l_{i} needs 1 <= i < g")));
    }
    Ok((s.n_beta(i + 1) - s.n_beta(i)) / s.e(i))
}

/// The half-open interval `I_{i,k}^{(p)}`.
pub fn interval(s: &SemigroupData, i: usize, k: u64, p: u64) -> Result<std::ops::Range<u64>> {
    let len = interval_length(s, i)?;
    let block = s.n_prod_from_2(i);
    if k == 0 || !k.is_multiple_of(block) {
        return Err(Error::Domain(format!(
            "k = {k} is not a multiple of n_2...n_{i} = {block}"
        )));
    }
    let k_prime = k / block;
    if p == 0 || p > k_prime {
        return Err(Error::Domain(format!("p = {p} outside 1..={k_prime}")));
    }
    let start = scaled_nbeta(s, i, k)
        .ok_or_else(|| Error::Domain("non-integral interval endpoint".into()))?;
    Ok(start + (p - 1) * len..start + p * len)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "i", rename_all = "snake_case")]
pub enum PoleSource {
    Gauge,
    Structural(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleCandidate {
    pub value: BigRational,
    /// Unreduced `(ν, N)` with value `-ν/N`; `(g, 1)` for the gauge pole.
    pub nu: u64,
    pub big_n: u64,
    pub source: PoleSource,
    pub residue: Option<BigRational>,
    pub order: u32,
}

impl Serialize for PoleCandidate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("PoleCandidate", 6)?;
        st.serialize_field("value", &fmt_rational(&self.value))?;
        st.serialize_field("unreduced", &format!("-{}/{}", self.nu, self.big_n))?;
        st.serialize_field("source", &self.source)?;
        st.serialize_field("residue", &self.residue.as_ref().map(fmt_rational))?;
        st.serialize_field("order", &self.order)?;
        st.end()
    }
}

/// The `g+1` candidate poles `−g < −ν_g/N_g < … < −ν_1/N_1`, residues unfilled.
pub fn candidate_poles(s: &SemigroupData) -> Vec<PoleCandidate> {
    let g = s.g();
    let mut poles = vec![PoleCandidate {
        value: rat(-(g as i64), 1),
        nu: g as u64,
        big_n: 1,
        source: PoleSource::Gauge,
        residue: None,
        order: 1,
    }];
    for pair in structural_pairs(s).into_iter().rev() {
        poles.push(PoleCandidate {
            value: -pair.ratio(),
            nu: pair.nu,
            big_n: pair.big_n,
            source: PoleSource::Structural(pair.i),
            residue: None,
            order: 1,
        });
    }
    poles
}

/// Coefficient `e_{i+1} N_i N_{i+1} (n_{i+1}β̄_{i+1} − n_iβ̄_i)/(n_i β̄_i β̄_{i+1})`
/// of the `i`-th coupling term of the topological zeta function.
pub fn coupling_coefficient(s: &SemigroupData, pairs: &[StructuralPair], i: usize) -> BigRational {
    let b = |x: u64| BigInt::from(x);
    let num = b(s.e(i + 1))
        * b(pairs[i - 1].big_n)
        * b(pairs[i].big_n)
        * (b(s.n_beta(i + 1)) - b(s.n_beta(i)));
    let den = b(s.n_beta(i)) * b(s.beta(i + 1));
    BigRational::new(num, den)
}

/// Residues from the closed-form table: `g/(ν_g − gN_g)` at `−g` and
/// `(ν_i/N_i²)·R_i` at `−ν_i/N_i`. Returned in [`candidate_poles`] order.
pub fn residues(s: &SemigroupData) -> Vec<(BigRational, BigRational)> {
    let g = s.g();
    let pairs = structural_pairs(s);
    let gq = rat(g as i64, 1);
    let ratio: Vec<BigRational> = pairs.iter().map(|p| p.ratio()).collect();
    let big_n = |i: usize| rat(pairs[i - 1].big_n as i64, 1);
    let b = |x: u64| BigInt::from(x);

    // term from the coupling between i and i±1, as it enters R_i
    let left = |i: usize| {
        // e_i N_i (n_iβ̄_i − n_{i-1}β̄_{i-1}) / (n_{i-1}β̄_{i-1} β̄_i) / (ν_{i-1}/N_{i-1} − ν_i/N_i)
        let c = BigRational::new(
            b(s.e(i)) * b(pairs[i - 1].big_n) * (b(s.n_beta(i)) - b(s.n_beta(i - 1))),
            b(s.n_beta(i - 1)) * b(s.beta(i)),
        );
        c / (&ratio[i - 2] - &ratio[i - 1])
    };
    let right = |i: usize| {
        let c = BigRational::new(
            b(s.e(i + 1)) * b(pairs[i - 1].big_n) * (b(s.n_beta(i + 1)) - b(s.n_beta(i))),
            b(s.n_beta(i)) * b(s.beta(i + 1)),
        );
        c / (&ratio[i] - &ratio[i - 1])
    };
    let gauge_term = |i: usize| BigRational::one() / (&gq - &ratio[i - 1]);

    let mut out = Vec::with_capacity(g + 1);
    let last = &pairs[g - 1];
    out.push((
        -gq.clone(),
        rat(g as i64, 1) / rat(last.nu as i64 - (g as i64) * last.big_n as i64, 1),
    ));
    for i in (1..=g).rev() {
        let r = if g == 1 {
            big_n(1) + gauge_term(1)
        } else if i == 1 {
            big_n(1) + right(1)
        } else if i < g {
            left(i) + right(i)
        } else {
            left(g) + gauge_term(g)
        };
        let scale = &ratio[i - 1] / big_n(i);
        out.push((-ratio[i - 1].clone(), scale * r));
    }
    out
}

/// `−β̄_0 + Σ_{l=1}^{i} (n_l − 1) β̄_l`.
pub fn gap_sum(s: &SemigroupData, i: usize) -> BigInt {
    let b = |x: u64| BigInt::from(x);
    -b(s.beta(0)) + (1..=i).map(|l| b(s.n(l) - 1) * b(s.beta(l))).sum::<BigInt>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::SemigroupData;

    fn data(s: &str) -> SemigroupData {
        s.parse().unwrap()
    }

    fn pairs(s: &str) -> Vec<(u64, u64)> {
        structural_pairs(&data(s))
            .iter()
            .map(|p| (p.big_n, p.nu))
            .collect()
    }

    #[test]
    fn structural_pairs_examples() {
        assert_eq!(pairs("4,6,13"), vec![(6, 8), (26, 37)]);
        assert_eq!(pairs("8,12,26,53"), vec![(6, 11), (26, 50), (106, 235)]);
        assert_eq!(pairs("2,3"), vec![(6, 5)]);
    }

    #[test]
    fn lct_examples() {
        assert_eq!(lct(&data("4,6,13")), rat(4, 3));
        assert_eq!(lct(&data("8,12,26,53")), rat(11, 6));
        assert_eq!(lct(&data("2,3")), rat(5, 6));
    }

    #[test]
    fn j_of_k_examples() {
        assert_eq!(j_of_k(&data("4,6,13"), 1), 2);
        assert_eq!(j_of_k(&data("4,6,13"), 2), 3);
        assert_eq!(j_of_k(&data("8,12,26,53"), 2), 3);
        assert_eq!(j_of_k(&data("8,12,26,53"), 4), 4);
        assert_eq!(j_of_k(&data("2,3"), 7), 2);
    }

    #[test]
    fn c_ik_examples() {
        let s = data("4,6,13");
        assert_eq!(c_ik(&s, 1, 1, 6).unwrap(), 10);
        assert_eq!(c_ik(&s, 1, 1, 12).unwrap(), 19);
        assert!(matches!(c_ik(&s, 1, 1, 13), Err(Error::Domain(_))));
        assert!(matches!(c_ik(&s, 1, 1, 5), Err(Error::Domain(_))));
        // i = 2 needs j(k) = 3, so k must be even
        assert!(c_ik(&s, 2, 1, 20).is_err());
        assert!(c_ik(&s, 2, 2, 26).is_ok());
    }

    #[test]
    fn codim_b_examples() {
        let s = data("4,6,13");
        assert_eq!(codim_b(&s, 1), 3);
        assert_eq!(codim_b(&s, 6), 10);
        assert_eq!(codim_b(&s, 5), 8);
        assert_eq!(codim_b(&s, 12), 18);
    }

    #[test]
    fn emptiness_examples() {
        let s = data("4,6,13");
        assert!(!is_d_empty(&s, 12, 1));
        assert!(is_d_empty(&s, 13, 1));
        assert!(!is_d_empty(&s, 1_000_000, 2));
    }

    #[test]
    fn interval_examples() {
        let s = data("4,6,13");
        assert_eq!(interval(&s, 1, 1, 1).unwrap(), 6..13);
        assert_eq!(interval(&s, 1, 2, 2).unwrap(), 19..26);
        assert!(interval(&s, 1, 2, 3).is_err());
        assert!(interval(&s, 2, 2, 1).is_err());
        let s = data("8,12,26,53");
        assert_eq!(interval(&s, 2, 2, 1).unwrap(), 26..53);
        assert!(interval(&s, 2, 3, 1).is_err());
    }

    #[test]
    fn candidate_pole_examples() {
        let values = |s: &str| -> Vec<BigRational> {
            candidate_poles(&data(s)).into_iter().map(|p| p.value).collect()
        };
        assert_eq!(values("4,6,13"), vec![rat(-2, 1), rat(-37, 26), rat(-4, 3)]);
        assert_eq!(
            values("8,12,26,53"),
            vec![rat(-3, 1), rat(-235, 106), rat(-50, 26), rat(-11, 6)]
        );
        assert_eq!(values("2,3"), vec![rat(-1, 1), rat(-5, 6)]);
        let p = &candidate_poles(&data("4,6,13"))[2];
        assert_eq!((p.nu, p.big_n), (8, 6));
    }

    #[test]
    fn residue_examples() {
        let r = residues(&data("4,6,13"));
        assert_eq!(r[0], (rat(-2, 1), rat(-2, 15)));
        assert_eq!(r[2], (rat(-4, 3), rat(8, 3)));
        assert!(r[1].1 < BigRational::zero());
    }

    #[test]
    fn window_index_tracks_branches() {
        let s = data("8,12,26,53");
        // k = 4: windows start at 24, 52 (=4*26/... ) and 106
        assert_eq!(window_index(&s, 4, 23), None);
        assert_eq!(window_index(&s, 4, 24), Some(1));
        assert_eq!(window_index(&s, 4, 51), Some(1));
        assert_eq!(window_index(&s, 4, 52), Some(2));
        assert_eq!(window_index(&s, 4, 106), Some(3));
    }
}
