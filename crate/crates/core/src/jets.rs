//! Irreducible components of the jet-scheme fibers `π_m^{-1}(0)` and the
//! classes `[Y_m]` in the Grothendieck ring.

use serde::Serialize;

use crate::algebra::{LaurentL, PolyT};
use crate::invariants::{c_ik, c_main, codim_b, is_d_empty, window_index};
use crate::semigroup::SemigroupData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ComponentKind {
    /// The main component `B_m`.
    #[serde(rename = "B")]
    Main,
    /// The side component `C_{m,k}`.
    #[serde(rename = "C")]
    Side { k: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComponentDescriptor {
    #[serde(flatten)]
    pub kind: ComponentKind,
    pub codim: u64,
    /// Of maximal dimension among the components of the fiber.
    #[serde(skip)]
    pub maximal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StratumLabel {
    /// The refined main stratum `𝓑_m`.
    Main,
    /// `D_{m,k}`.
    Side { k: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumClass {
    pub label: StratumLabel,
    pub class: LaurentL,
}

fn n0n1(s: &SemigroupData) -> u64 {
    s.n0() * s.n(1)
}

/// Codimension of `D_{m,k}`, or `None` when the stratum is empty or `m` lies
/// below the side branch `k`.
pub fn side_codim(s: &SemigroupData, m: u64, k: u64) -> Option<u64> {
    if is_d_empty(s, m, k) {
        return None;
    }
    let i = window_index(s, k, m)?;
    Some(c_ik(s, i, k, m).expect("window index lies inside its window"))
}

/// Irreducible components of `π_m^{-1}(0)_red` for `m ≥ 1`: `B_m` first, then
/// `C_{m,k}` by increasing `k`.
pub fn components(s: &SemigroupData, m: u64) -> Vec<ComponentDescriptor> {
    assert!(m >= 1, "components are listed for m >= 1");
    let main = codim_b(s, m);
    let l = (m - 1) / n0n1(s);
    let mut out = vec![ComponentDescriptor {
        kind: ComponentKind::Main,
        codim: main,
        maximal: true,
    }];
    for k in 1..=l {
        if let Some(codim) = side_codim(s, m, k) {
            out.push(ComponentDescriptor {
                kind: ComponentKind::Side { k },
                codim,
                maximal: codim == main,
            });
        }
    }
    out
}

/// Stratification `π_m^{-1}(0)_red = 𝓑_m ⊔ ⊔_k D_{m,k}` with classes.
pub fn strata(s: &SemigroupData, m: u64) -> Vec<StratumClass> {
    let mut out = Vec::new();
    if m == 0 {
        out.push(StratumClass {
            label: StratumLabel::Main,
            class: LaurentL::one(),
        });
        return out;
    }
    let dim = (s.g() as i64 + 1) * (m as i64 + 1);
    out.push(StratumClass {
        label: StratumLabel::Main,
        class: LaurentL::l_pow(dim - c_main(s, m) as i64),
    });
    let l = m / n0n1(s);
    for k in 1..=l {
        if let Some(c) = side_codim(s, m, k) {
            out.push(StratumClass {
                label: StratumLabel::Side { k },
                class: LaurentL::l_minus_one().shift(dim - c as i64 - 1),
            });
        }
    }
    out
}

/// `[π_m^{-1}(0)_red]`.
pub fn fiber_class(s: &SemigroupData, m: u64) -> LaurentL {
    let mut out = LaurentL::zero();
    for st in strata(s, m) {
        out += &st.class;
    }
    out
}

/// `[Y_m] = (L - 1) L^m + [π_m^{-1}(0)_red]`.
pub fn jet_class(s: &SemigroupData, m: u64) -> LaurentL {
    let mut out = LaurentL::l_minus_one().shift(m as i64);
    out += &fiber_class(s, m);
    out
}

fn truncated(s: &SemigroupData, terms: usize, class: impl Fn(u64) -> LaurentL) -> PolyT {
    let g1 = s.g() as i64 + 1;
    let mut coeffs = vec![LaurentL::zero()];
    for m in 0..terms as u64 {
        coeffs.push(class(m).shift(-g1 * (m as i64 + 1)));
    }
    PolyT::from_coeffs(coeffs)
}

/// `Σ_{m<terms} [Y_m] L^{-(g+1)(m+1)} T^{m+1}`.
pub fn poincare_truncated(s: &SemigroupData, terms: usize) -> PolyT {
    truncated(s, terms, |m| jet_class(s, m))
}

/// Local counterpart of [`poincare_truncated`], built from the fiber classes.
pub fn poincare_truncated_local(s: &SemigroupData, terms: usize) -> PolyT {
    truncated(s, terms, |m| fiber_class(s, m))
}
