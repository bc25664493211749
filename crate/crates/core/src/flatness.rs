//! Non-flatness of the jet schemes of the equisingular family joining the
//! space monomial curve to its plane branch.

use serde::{Deserialize, Serialize};

use crate::semigroup::SemigroupData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FlatnessVerdict {
    /// Not flat for every `m ≥ 1`.
    NotFlatForAllM,
    /// Not flat for every `m ≥ m0`; smaller `m` are undecided.
    NotFlatFrom { m0: u64 },
    /// `g = 1`: the family is a family of plane curves and is flat.
    HypersurfaceFlat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub g: usize,
    #[serde(flatten)]
    pub verdict: FlatnessVerdict,
}

/// `⌈3 n_0 n_1 n_2 / ((n_2 − 1)(n_0 n_1 − n_0 − n_1))⌉` for `g = 2`.
pub fn threshold_g2(n0: u64, n1: u64, n2: u64) -> u64 {
    let den = (n2 - 1) * (n0 * n1 - n0 - n1);
    (3 * n0 * n1 * n2).div_ceil(den)
}

pub fn non_flat_threshold(s: &SemigroupData) -> FlatnessReport {
    let g = s.g();
    let verdict = match g {
        1 => FlatnessVerdict::HypersurfaceFlat,
        2 => FlatnessVerdict::NotFlatFrom {
            m0: threshold_g2(s.n0(), s.n(1), s.n(2)),
        },
        _ => FlatnessVerdict::NotFlatForAllM,
    };
    FlatnessReport { g, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        let r = non_flat_threshold(&"4,6,13".parse().unwrap());
        assert_eq!(r.verdict, FlatnessVerdict::NotFlatFrom { m0: 36 });
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"g":2,"verdict":"not_flat_from","m0":36}"#
        );
        let r = non_flat_threshold(&"8,12,26,53".parse().unwrap());
        assert_eq!(r.verdict, FlatnessVerdict::NotFlatForAllM);
        let r = non_flat_threshold(&"2,3".parse().unwrap());
        assert_eq!(r.verdict, FlatnessVerdict::HypersurfaceFlat);
    }

    #[test]
    fn rounding_up() {
        // 3·5·2·3 / (2·(10−7)) = 15
        assert_eq!(threshold_g2(5, 2, 3), 15);
        // 3·3·2·3 / (2·1) = 27
        assert_eq!(threshold_g2(3, 2, 3), 27);
        // 3·7·2·2 / (1·5) = 16.8
        assert_eq!(threshold_g2(7, 2, 2), 17);
    }
}
