//! Plane-branch semigroups given by their minimal generators.
//!
//! From `β̄_0 < … < β̄_g` we derive `e_i = gcd(β̄_0, …, β̄_i)`,
//! `n_i = e_{i-1}/e_i`, `n_0 = b_{10}` and the unique bounded representation
//! `n_i β̄_i = Σ_{j<i} b_{ij} β̄_j` with `0 ≤ b_{ij} < n_j` for `j ≥ 1`.
//! These integers are the exponents of the binomial equations
//! `x_i^{n_i} = x_0^{b_{i0}} ⋯ x_{i-1}^{b_{i(i-1)}}` of the space monomial curve.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted generator. Keeps every derived invariant (and the
/// `L`-exponents built from them) comfortably inside `i64`.
pub const MAX_GENERATOR: u64 = 1 << 24;

/// Minimal generators `β̄_0, …, β̄_g` as supplied by the caller.
///
/// Construction does not validate; see [`validate`] and [`derive_structure`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeneratorTuple(pub Vec<u64>);

impl GeneratorTuple {
    pub fn new(gens: impl Into<Vec<u64>>) -> Self {
        GeneratorTuple(gens.into())
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for GeneratorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for GeneratorTuple {
    type Err = Error;

    /// Parses `"4,6,13"` (whitespace and surrounding parentheses tolerated).
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let gens = trimmed
            .split(',')
            .map(|part| {
                part.trim().parse::<u64>().map_err(|_| {
                    Error::InvalidSemigroup(format!("cannot parse generator {:?}", part.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorTuple(gens))
    }
}

/// The full numerical skeleton of a validated semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupData {
    gens: Vec<u64>,
    e: Vec<u64>,
    // n[0] = n_0 = b_{10}; n[i] = e_{i-1}/e_i for i = 1..g
    n: Vec<u64>,
    // b[i-1] is the row (b_{i0}, …, b_{i(i-1)})
    b: Vec<Vec<u64>>,
}

impl SemigroupData {
    pub fn gens(&self) -> &[u64] {
        &self.gens
    }

    pub fn generators(&self) -> GeneratorTuple {
        GeneratorTuple(self.gens.clone())
    }

    pub fn g(&self) -> usize {
        self.gens.len() - 1
    }

    /// `β̄_i` for `i = 0..=g`.
    pub fn beta(&self, i: usize) -> u64 {
        self.gens[i]
    }

    /// `e_i` for `i = 0..=g`.
    pub fn e(&self, i: usize) -> u64 {
        self.e[i]
    }

    pub fn e_all(&self) -> &[u64] {
        &self.e
    }

    /// `n_i` for `i = 0..=g`, with `n_0 = b_{10}`.
    pub fn n(&self, i: usize) -> u64 {
        self.n[i]
    }

    pub fn n0(&self) -> u64 {
        self.n[0]
    }

    /// `n_0, n_1, …, n_g`.
    pub fn n_all(&self) -> &[u64] {
        &self.n
    }

    /// Row `(b_{i0}, …, b_{i(i-1)})` for `i = 1..=g`.
    pub fn b_row(&self, i: usize) -> &[u64] {
        &self.b[i - 1]
    }

    pub fn b_rows(&self) -> &[Vec<u64>] {
        &self.b
    }

    /// `n_i β̄_i` for `i = 1..=g`.
    pub fn n_beta(&self, i: usize) -> u64 {
        self.n[i] * self.gens[i]
    }

    /// `n_2 ⋯ n_i` (empty product 1 for `i < 2`).
    pub fn n_prod_from_2(&self, i: usize) -> u64 {
        (2..=i).map(|l| self.n[l]).product()
    }
}

impl Serialize for SemigroupData {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SemigroupData", 6)?;
        st.serialize_field("gens", &self.gens)?;
        st.serialize_field("g", &self.g())?;
        st.serialize_field("e", &self.e)?;
        st.serialize_field("n", &self.n[1..])?;
        st.serialize_field("n0", &self.n[0])?;
        st.serialize_field("b", &self.b)?;
        st.end()
    }
}

/// One named condition in a validation report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub satisfied: bool,
    pub detail: String,
}

pub const COND_LENGTH: &str = "length >= 2";
pub const COND_RANGE: &str = "0 < beta_i <= 2^24";
pub const COND_INCREASING: &str = "strictly increasing";
pub const COND_GCD: &str = "gcd = 1";
pub const COND_N_GE_2: &str = "n_i >= 2";
pub const COND_ORDERING: &str = "n_i*beta_i < beta_(i+1)";
pub const COND_REPRESENTATION: &str = "n_i*beta_i represented with b_i0 >= 0";
pub const COND_B_I0: &str = "b_i0 > n_0";

/// Outcome of [`validate`]: every evaluated condition, satisfied or not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn violations(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.satisfied)
    }

    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }

    pub fn violates(&self, name: &str) -> bool {
        self.violations().any(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, satisfied: bool, detail: String) {
        self.checks.push(Check {
            name,
            satisfied,
            detail,
        });
    }
}

/// Computes the row `(b_{i0}, …, b_{i(i-1)})` by top-down modular elimination.
///
/// `gens`, `e` and `n` must cover indices `0..=i`. For `j = i-1, …, 1` the
/// digit `b_{ij}` is the unique value in `[0, n_j)` making the running
/// remainder divisible by `e_{j-1}`; the final remainder divided by `β̄_0` is
/// `b_{i0}`.
pub fn represent_row(gens: &[u64], e: &[u64], n: &[u64], i: usize) -> Result<Vec<u64>> {
    if i == 0 || i >= gens.len() || e.len() <= i || n.len() <= i {
        return Err(Error::Domain(format!("row index {i} out of range")));
    }
    let mut remainder = i128::from(n[i]) * i128::from(gens[i]);
    let mut row = vec![0u64; i];
    for j in (1..i).rev() {
        let modulus = i128::from(e[j - 1]);
        let beta = i128::from(gens[j]);
        let digit = (0..n[j])
            .find(|&d| (remainder - i128::from(d) * beta).rem_euclid(modulus) == 0)
            .ok_or(Error::NoRepresentation { index: i })?;
        remainder -= i128::from(digit) * beta;
        if remainder < 0 {
            return Err(Error::NoRepresentation { index: i });
        }
        row[j] = digit;
    }
    let beta0 = i128::from(gens[0]);
    if remainder < 0 || remainder % beta0 != 0 {
        return Err(Error::NoRepresentation { index: i });
    }
    row[0] = u64::try_from(remainder / beta0).map_err(|_| Error::NoRepresentation { index: i })?;
    Ok(row)
}

fn analyze(gens: &GeneratorTuple) -> (ValidationReport, Option<SemigroupData>) {
    let mut report = ValidationReport { checks: Vec::new() };
    let gens = gens.as_slice();

    let long_enough = gens.len() >= 2;
    report.push(COND_LENGTH, long_enough, format!("{} generators", gens.len()));
    if !long_enough {
        return (report, None);
    }

    let in_range = gens.iter().all(|&x| x > 0 && x <= MAX_GENERATOR);
    report.push(COND_RANGE, in_range, String::new());
    if !in_range {
        return (report, None);
    }

    let increasing = gens.windows(2).all(|w| w[0] < w[1]);
    report.push(COND_INCREASING, increasing, String::new());

    let g = gens.len() - 1;
    let mut e = Vec::with_capacity(g + 1);
    e.push(gens[0]);
    for i in 1..=g {
        e.push(e[i - 1].gcd(&gens[i]));
    }
    report.push(COND_GCD, e[g] == 1, format!("gcd = {}", e[g]));

    let mut n = vec![0u64; g + 1];
    let mut n_ok = true;
    for i in 1..=g {
        n[i] = e[i - 1] / e[i];
        if n[i] < 2 {
            n_ok = false;
            report.push(
                COND_N_GE_2,
                false,
                format!("n_{i} = e_{}/e_{i} = {}/{} = {}", i - 1, e[i - 1], e[i], n[i]),
            );
        }
    }
    if n_ok {
        report.push(COND_N_GE_2, true, String::new());
    }

    let mut ordering_ok = true;
    for i in 1..g {
        let lhs = u128::from(n[i]) * u128::from(gens[i]);
        if lhs >= u128::from(gens[i + 1]) {
            ordering_ok = false;
            report.push(
                COND_ORDERING,
                false,
                format!("n_{i}*beta_{i} = {lhs} >= beta_{} = {}", i + 1, gens[i + 1]),
            );
        }
    }
    if ordering_ok {
        report.push(COND_ORDERING, true, String::new());
    }

    if !(increasing && e[g] == 1 && n_ok) {
        return (report, None);
    }

    let mut rows = Vec::with_capacity(g);
    let mut rows_ok = true;
    for i in 1..=g {
        match represent_row(gens, &e, &n, i) {
            Ok(row) => rows.push(row),
            Err(_) => {
                rows_ok = false;
                report.push(
                    COND_REPRESENTATION,
                    false,
                    format!("n_{i}*beta_{i} = {} has no bounded representation", n[i] * gens[i]),
                );
            }
        }
    }
    if !rows_ok {
        return (report, None);
    }
    report.push(COND_REPRESENTATION, true, String::new());
    n[0] = rows[0][0];

    let mut b_ok = true;
    for i in 2..=g {
        if rows[i - 1][0] <= n[0] {
            b_ok = false;
            report.push(
                COND_B_I0,
                false,
                format!("b_{i}0 = {} <= n_0 = {}", rows[i - 1][0], n[0]),
            );
        }
    }
    if b_ok {
        report.push(COND_B_I0, true, String::new());
    }

    if !report.is_valid() {
        return (report, None);
    }
    let data = SemigroupData {
        gens: gens.to_vec(),
        e,
        n,
        b: rows,
    };
    (report, Some(data))
}

/// Evaluates every structural condition and lists the satisfied and violated
/// ones. Never fails; the report has no violations iff [`derive_structure`]
/// succeeds.
pub fn validate(gens: &GeneratorTuple) -> ValidationReport {
    analyze(gens).0
}

/// Validates the generators and derives `e`, `n`, `n_0` and the `b` matrix.
pub fn derive_structure(gens: &GeneratorTuple) -> Result<SemigroupData> {
    let (report, data) = analyze(gens);
    match data {
        Some(d) => Ok(d),
        None => {
            let reasons: Vec<String> = report
                .violations()
                .map(|c| {
                    if c.detail.is_empty() {
                        c.name.to_string()
                    } else {
                        format!("{} ({})", c.name, c.detail)
                    }
                })
                .collect();
            Err(Error::InvalidSemigroup(reasons.join("; ")))
        }
    }
}

impl TryFrom<&GeneratorTuple> for SemigroupData {
    type Error = Error;

    fn try_from(gens: &GeneratorTuple) -> Result<Self> {
        derive_structure(gens)
    }
}

impl FromStr for SemigroupData {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        derive_structure(&s.parse()?)
    }
}

const MAX_ATTEMPTS: usize = 10_000;

/// Samples a valid generator tuple of genus `g` with `β̄_g ≤ bound`.
///
/// Picks `n_1..n_g ≥ 2`, sets `β̄_0 = n_1⋯n_g`, picks `n_0 > n_1` coprime to
/// `n_1` with `β̄_1 = n_0 e_1`, then each `β̄_{i+1} > n_i β̄_i` with
/// `gcd(e_i, β̄_{i+1}) = e_{i+1}`. Candidates failing [`validate`] are
/// rejected. Deterministic in `seed`.
pub fn random_plane_semigroup(g: usize, bound: u64, seed: u64) -> Result<GeneratorTuple> {
    let fail = Error::GenerationFailed {
        g,
        bound,
        attempts: MAX_ATTEMPTS,
    };
    if g == 0 || bound < 3 {
        return Err(fail);
    }
    let bound = bound.min(MAX_GENERATOR);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..MAX_ATTEMPTS {
        if let Some(gens) = sample_once(&mut rng, g, bound) {
            let tuple = GeneratorTuple(gens);
            if validate(&tuple).is_valid() {
                return Ok(tuple);
            }
        }
    }
    Err(fail)
}

fn sample_once(rng: &mut ChaCha8Rng, g: usize, bound: u64) -> Option<Vec<u64>> {
    // n_1..n_g; a crude cap so the product leaves room below `bound`
    let cap = ((bound as f64).powf(1.0 / (g as f64 + 1.0)).floor() as u64).max(2);
    let mut n = vec![0u64; g + 1];
    for slot in n.iter_mut().skip(1) {
        *slot = rng.gen_range(2..=cap.max(2));
    }
    // e_i = n_{i+1} ⋯ n_g
    let mut e = vec![1u64; g + 1];
    for i in (0..g).rev() {
        e[i] = e[i + 1].checked_mul(n[i + 1])?;
    }
    let beta0 = e[0];
    if beta0 >= bound {
        return None;
    }

    // room[i] caps β̄_i so that β̄_{j+1} > n_j β̄_j still fits below bound
    let mut room = vec![bound; g + 1];
    for i in (1..g).rev() {
        room[i] = room[i + 1].saturating_sub(1) / n[i];
    }

    // n_0 > n_1 with gcd(n_0, n_1) = 1 and β̄_1 = n_0 e_1 ≤ room[1]
    let max_n0 = room[1] / e[1];
    if max_n0 <= n[1] {
        return None;
    }
    let n0_choices: Vec<u64> = (n[1] + 1..=max_n0).filter(|c| c.gcd(&n[1]) == 1).collect();
    if n0_choices.is_empty() {
        return None;
    }
    let n0 = n0_choices[rng.gen_range(0..n0_choices.len())];
    let mut gens = vec![beta0, n0 * e[1]];

    for i in 1..g {
        let lower = n[i] * gens[i] + 1;
        if lower > room[i + 1] {
            return None;
        }
        // β̄_{i+1} = e_{i+1} * c with gcd(c, n_{i+1}) = 1
        let step = e[i + 1];
        let first = lower.div_ceil(step);
        let last = room[i + 1] / step;
        if first > last {
            return None;
        }
        let choices: Vec<u64> = (first..=last).filter(|c| c.gcd(&n[i + 1]) == 1).collect();
        if choices.is_empty() {
            return None;
        }
        let c = choices[rng.gen_range(0..choices.len())];
        gens.push(c * step);
    }
    Some(gens)
}
