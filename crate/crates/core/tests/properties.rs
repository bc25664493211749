use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use monozeta::algebra::{DenomFactor, LaurentL, MotRat, PolyT};
use monozeta::invariants::{codim_b, lct, structural_pairs};
use monozeta::jets::components;
use monozeta::motivic::series_consistency;
use monozeta::rational::rat;
use monozeta::semigroup::{random_plane_semigroup, represent_row, validate};
use monozeta::topological::poles_with_residues;
use monozeta::{GeneratorTuple, SemigroupData};

fn semigroup() -> impl Strategy<Value = SemigroupData> {
    (1usize..=3, 20u64..=400, any::<u64>()).prop_map(|(g, bound, seed)| {
        let gens = random_plane_semigroup(g, bound.max(8 << g), seed).unwrap();
        SemigroupData::try_from(&gens).unwrap()
    })
}

fn all_rows(gens: &[u64], n: &[u64], i: usize) -> Vec<Vec<u64>> {
    // every (b_{i1}, …, b_{i(i-1)}) with 0 ≤ b_ij < n_j, completed by b_{i0} when possible
    let mut digits = vec![0u64; i];
    let mut found = Vec::new();
    loop {
        let used: u64 = (1..i).map(|j| digits[j] * gens[j]).sum();
        let target = n[i] * gens[i];
        if used <= target && (target - used).is_multiple_of(gens[0]) {
            let mut row = digits.clone();
            row[0] = (target - used) / gens[0];
            found.push(row);
        }
        let mut j = 1;
        while j < i {
            digits[j] += 1;
            if digits[j] < n[j] {
                break;
            }
            digits[j] = 0;
            j += 1;
        }
        if j >= i {
            return found;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn structure_identities(s in semigroup()) {
        let g = s.g();
        for i in 0..=g {
            let gcd = s.gens()[..=i].iter().fold(0u64, |a, &b| a.gcd(&b));
            prop_assert_eq!(s.e(i), gcd);
            let tail: u64 = (i + 1..=g).map(|l| s.n(l)).product();
            prop_assert_eq!(s.e(i), tail);
        }
        prop_assert_eq!(s.n0() * s.e(1), s.beta(1));
        for i in 1..g {
            prop_assert!(s.n_beta(i) < s.beta(i + 1));
        }
        for i in 1..=g {
            let row = s.b_row(i);
            let sum: u64 = row.iter().zip(s.gens()).map(|(b, beta)| b * beta).sum();
            prop_assert_eq!(sum, s.n_beta(i));
            for (j, &b) in row.iter().enumerate().skip(1) {
                prop_assert!(b < s.n(j));
            }
            if i >= 2 {
                prop_assert!(row[0] > s.n0());
            }
        }
    }

    #[test]
    fn rows_are_the_unique_representations(s in semigroup()) {
        for i in 1..=s.g() {
            let rows = all_rows(s.gens(), s.n_all(), i);
            prop_assert_eq!(rows.len(), 1);
            prop_assert_eq!(&rows[0][..], s.b_row(i));
            let direct = represent_row(s.gens(), s.e_all(), s.n_all(), i).unwrap();
            prop_assert_eq!(&direct[..], s.b_row(i));
        }
    }

    #[test]
    fn structural_pairs_grow(s in semigroup()) {
        let pairs = structural_pairs(&s);
        prop_assert_eq!(pairs.len(), s.g());
        for w in pairs.windows(2) {
            prop_assert!(w[0].big_n < w[1].big_n);
            // −ν_g/N_g < … < −ν_1/N_1
            prop_assert!(w[0].ratio() < w[1].ratio());
        }
        let last = pairs.last().unwrap();
        prop_assert!(last.ratio() < rat(s.g() as i64, 1));
        prop_assert_eq!(lct(&s), pairs[0].ratio());
    }

    #[test]
    fn residue_signs(s in semigroup()) {
        let poles = poles_with_residues(&s).unwrap();
        let g = s.g();
        prop_assert!(poles[g].residue.as_ref().unwrap().is_positive());
        for p in &poles[1..g] {
            prop_assert!(p.residue.as_ref().unwrap().is_negative());
        }
    }

    #[test]
    fn main_component_is_smallest(s in semigroup(), m in 1u64..120) {
        let comps = components(&s, m);
        let main = comps[0].codim;
        prop_assert!(comps.iter().all(|c| c.codim >= main));
        prop_assert!(main <= s.g() as u64 * (m + 1));
        prop_assert!(codim_b(&s, m) <= codim_b(&s, m + 1));
    }

    #[test]
    fn sampler_is_deterministic(g in 1usize..=4, seed in any::<u64>()) {
        let a = random_plane_semigroup(g, 2000, seed).unwrap();
        let b = random_plane_semigroup(g, 2000, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(validate(&a).is_valid());
        prop_assert_eq!(a.len(), g + 1);
        prop_assert!(a.as_slice().iter().all(|&x| x <= 2000));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_series_consistency(s in semigroup()) {
        let order = 2 * structural_pairs(&s)[0].big_n as usize;
        prop_assert!(series_consistency(&s, order));
    }
}

fn laurent() -> impl Strategy<Value = LaurentL> {
    prop::collection::vec((-4i64..=4, -3i64..=3), 0..3).prop_map(LaurentL::from_terms)
}

fn poly() -> impl Strategy<Value = PolyT> {
    prop::collection::vec(laurent(), 0..4).prop_map(PolyT::from_coeffs)
}

fn motrat() -> impl Strategy<Value = MotRat> {
    (poly(), prop::collection::vec((-6i64..=6, 1u64..=4), 0..3)).prop_map(|(p, f)| {
        MotRat::new(p, f.into_iter().map(|(a, b)| DenomFactor::new(a, b)).collect())
    })
}

fn at_q(p: &PolyT, order: usize) -> Vec<BigRational> {
    let q = rat(3, 1);
    (0..=order).map(|d| p.coeff(d).eval(&q)).collect()
}

fn cauchy(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    (0..a.len())
        .map(|d| (0..=d).map(|k| &a[k] * &b[d - k]).fold(BigRational::zero(), |x, y| x + y))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in motrat(), b in motrat(), c in motrat()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MotRat::one(), a.clone());
    }

    #[test]
    fn series_is_a_ring_map(a in motrat(), b in motrat()) {
        let n = 8;
        let sa = a.expand_series(n).unwrap();
        let sb = b.expand_series(n).unwrap();
        prop_assert_eq!((&a + &b).expand_series(n).unwrap(), &sa + &sb);
        prop_assert_eq!((&a * &b).expand_series(n).unwrap(), (&sa * &sb).truncate(n));
    }

    #[test]
    fn evaluation_at_q_commutes(a in motrat(), b in motrat()) {
        let n = 6;
        let q = rat(3, 1);
        let ea = a.eval_l(&q).unwrap().series(n);
        let eb = b.eval_l(&q).unwrap().series(n);
        prop_assert_eq!(&ea, &at_q(&a.expand_series(n).unwrap(), n));
        let sum: Vec<BigRational> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
        prop_assert_eq!((&a + &b).eval_l(&q).unwrap().series(n), sum);
        prop_assert_eq!((&a * &b).eval_l(&q).unwrap().series(n), cauchy(&ea, &eb));
    }
}

#[test]
fn generator_tuple_parsing() {
    let t: GeneratorTuple = " 4, 6 ,13".parse().unwrap();
    assert_eq!(t.as_slice(), &[4, 6, 13]);
    assert!("4,,6".parse::<GeneratorTuple>().is_err());
}
