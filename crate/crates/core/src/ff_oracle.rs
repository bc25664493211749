//! Point counts of jet schemes over a prime field, used to check the
//! Grothendieck-ring classes of `Y_m` and `π_m^{-1}(0)`.
//!
//! A point of `Y_m` over `F_q` is a tuple of truncated series
//! `x_i(t) = Σ_{l≤m} x_i^{(l)} t^l` with `f_k(x(t)) ≡ 0 mod t^{m+1}` for every
//! binomial `f_k = x_k^{n_k} − ∏_{j<k} x_j^{b_kj}`.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jets::{fiber_class, jet_class};
use crate::rational::rat;
use crate::semigroup::SemigroupData;

pub const DEFAULT_BUDGET: u64 = 2_000_000_000;
const MAX_Q: u64 = 1 << 16;
const FLUSH_EVERY: u64 = 1 << 14;

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

#[derive(Debug, Clone, Copy)]
struct Field {
    q: u64,
}

impl Field {
    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    #[inline]
    fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.q - b) % self.q
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.q;
        a %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.q - 2)
    }
}

/// Truncated jet equations of the space monomial curve over `F_q`.
#[derive(Debug, Clone)]
pub struct JetSystem {
    pub m: usize,
    pub q: u64,
    /// `n_0, …, n_g`.
    pub n: Vec<u64>,
    /// Row `k-1` holds the exponents `b_{k0}, …, b_{k(k-1)}` of `f_k`.
    pub b: Vec<Vec<u64>>,
    /// Some `β̄_i` is divisible by `q` (the counts are then reported, not asserted).
    pub char_divides_generator: bool,
}

impl JetSystem {
    pub fn g(&self) -> usize {
        self.n.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        (self.g() + 1) * (self.m + 1)
    }

    fn field(&self) -> Field {
        Field { q: self.q }
    }

    fn mul_trunc(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.field();
        let mut out = vec![0; self.m + 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(self.m + 1 - i) {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        out
    }

    fn pow_trunc(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut result = vec![0; self.m + 1];
        result[0] = 1 % self.q;
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_trunc(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_trunc(&base, &base);
            }
        }
        result
    }

    /// `∏_{j<k} x_j^{b_kj}` truncated.
    fn monomial(&self, k: usize, x: &[Vec<u64>]) -> Vec<u64> {
        let mut out = vec![0; self.m + 1];
        out[0] = 1 % self.q;
        for (j, &e) in self.b[k - 1].iter().enumerate() {
            if e > 0 {
                out = self.mul_trunc(&out, &self.pow_trunc(&x[j], e));
            }
        }
        out
    }

    /// `F_k^{(l)}` for `k = 1..g`, `l = 0..m` at the point `x[i][l] = x_i^{(l)}`.
    pub fn equations(&self, x: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let f = self.field();
        (1..=self.g())
            .map(|k| {
                let lhs = self.pow_trunc(&x[k], self.n[k]);
                let rhs = self.monomial(k, x);
                lhs.iter().zip(&rhs).map(|(a, b)| f.sub(*a, *b)).collect()
            })
            .collect()
    }

    pub fn is_point(&self, x: &[Vec<u64>]) -> bool {
        self.equations(x).iter().all(|row| row.iter().all(|&v| v == 0))
    }
}

/// Builds the system for `Y_m` over `F_q`; `q` must be a prime below `2^16`
/// not dividing any `n_i`.
pub fn build_jet_system(s: &SemigroupData, m: usize, q: u64) -> Result<JetSystem> {
    if !is_prime(q) {
        return Err(Error::BadCharacteristic { q, reason: "q is not prime".into() });
    }
    if q >= MAX_Q {
        return Err(Error::BadCharacteristic { q, reason: "q must be below 2^16".into() });
    }
    if let Some(n) = s.n_all().iter().find(|&&n| n % q == 0) {
        return Err(Error::BadCharacteristic {
            q,
            reason: format!("q divides n_i = {n}"),
        });
    }
    Ok(JetSystem {
        m,
        q,
        n: s.n_all().to_vec(),
        b: (1..=s.g()).map(|k| s.b_row(k).to_vec()).collect(),
        char_divides_generator: s.gens().iter().any(|&b| b % q == 0),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct CountOptions {
    pub local: bool,
    pub threads: usize,
    pub budget: u64,
    /// Disables the counting shortcuts of the last coordinate block and
    /// walks every point.
    pub exhaustive: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            local: false,
            threads: 1,
            budget: DEFAULT_BUDGET,
            exhaustive: false,
        }
    }
}

struct Budget {
    used: AtomicU64,
    limit: u64,
    exceeded: AtomicBool,
}

/// Leaves reached, bucketed by the power of `q` they stand for.
#[derive(Debug, Clone, Default)]
struct Tally(Vec<u64>);

impl Tally {
    fn add(&mut self, exp: usize) {
        if self.0.len() <= exp {
            self.0.resize(exp + 1, 0);
        }
        self.0[exp] += 1;
    }

    fn merge(&mut self, other: &Tally) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    fn value(&self, q: u64) -> BigUint {
        let mut total = BigUint::zero();
        for &c in self.0.iter().rev() {
            total = total * BigUint::from(q) + BigUint::from(c);
        }
        total
    }
}

/// Prefix of the `(x_0, x_1)` block: levels `0..len` of both series.
#[derive(Debug, Clone)]
struct Prefix {
    x0: Vec<u64>,
    x1: Vec<u64>,
}

/// Depth-first walker. `x[i][l]` holds the coordinates; `pw[i][j][l]` is the
/// `t^l` coefficient of `x_i^j` for `j ≤ n_i` (index 0 unused).
struct Walker<'a> {
    sys: &'a JetSystem,
    f: Field,
    opts: CountOptions,
    x: Vec<Vec<u64>>,
    pw: Vec<Vec<Vec<u64>>>,
    /// Targets `∏ x_j^{b_kj}` for blocks `k ≥ 2`.
    target: Vec<Vec<u64>>,
    tally: Tally,
    ops: u64,
    budget: &'a Budget,
    /// When set, block-1 walks stop at this level and record prefixes.
    split: Option<usize>,
    prefixes: Vec<Prefix>,
}

impl<'a> Walker<'a> {
    fn new(sys: &'a JetSystem, opts: CountOptions, budget: &'a Budget) -> Self {
        let g = sys.g();
        let m = sys.m;
        Walker {
            sys,
            f: sys.field(),
            opts,
            x: vec![vec![0; m + 1]; g + 1],
            pw: (0..=g)
                .map(|i| vec![vec![0; m + 1]; sys.n[i] as usize + 1])
                .collect(),
            target: vec![vec![0; m + 1]; g + 1],
            tally: Tally::default(),
            ops: 0,
            budget,
            split: None,
            prefixes: Vec::new(),
        }
    }

    fn charge(&mut self, cost: u64) -> Result<()> {
        self.ops += cost;
        if self.ops >= FLUSH_EVERY {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        let used = self.budget.used.fetch_add(self.ops, Ordering::Relaxed) + self.ops;
        self.ops = 0;
        if used > self.budget.limit || self.budget.exceeded.load(Ordering::Relaxed) {
            self.budget.exceeded.store(true, Ordering::Relaxed);
            return Err(Error::BudgetExceeded { budget: self.budget.limit });
        }
        Ok(())
    }

    fn last_block(&self) -> usize {
        self.sys.g()
    }

    /// Sets `x_i^{(0)} = v` and the level-0 column of its power table.
    fn set_level0(&mut self, i: usize, v: u64) {
        self.x[i][0] = v;
        let mut p = 1 % self.f.q;
        for j in 1..self.pw[i].len() {
            p = self.f.mul(p, v);
            self.pw[i][j][0] = p;
        }
    }

    /// Level-`l` column of the power table of `x_i` with `x_i^{(l)} = 0`;
    /// returns the `t^l` coefficient of `x_i^{n_i}`.
    fn column_without(&mut self, i: usize, l: usize) -> u64 {
        let f = self.f;
        let n = self.pw[i].len() - 1;
        self.x[i][l] = 0;
        self.pw[i][1][l] = 0;
        for j in 2..=n {
            let mut acc = 0;
            for r in 0..=l {
                let a = self.x[i][r];
                if a != 0 {
                    acc = f.add(acc, f.mul(a, self.pw[i][j - 1][l - r]));
                }
            }
            self.pw[i][j][l] = acc;
        }
        self.pw[i][n][l]
    }

    /// Updates the level-`l` column after setting `x_i^{(l)} = v`, given the
    /// column computed by [`Self::column_without`] and saved in `base`.
    fn set_level(&mut self, i: usize, l: usize, v: u64, base: &[u64]) {
        let f = self.f;
        self.x[i][l] = v;
        self.pw[i][1][l] = v;
        let a0 = self.x[i][0];
        // d/dx_l of coef_l(x^j) is j x_0^{j-1}
        let mut a0pow = 1 % f.q;
        for (j, &b) in base.iter().enumerate().take(self.pw[i].len()).skip(2) {
            a0pow = f.mul(a0pow, a0);
            let lin = f.mul(j as u64 % f.q, a0pow);
            self.pw[i][j][l] = f.add(b, f.mul(lin, v));
        }
    }

    fn derivative0(&self, i: usize) -> u64 {
        let n = self.sys.n[i];
        self.f.mul(n % self.f.q, self.f.pow(self.x[i][0], n - 1))
    }

    /// All coefficients of `x_i^{n_i}` from level `l` on, with coordinates of
    /// level `≥ l` set to zero.
    fn tail_without(&mut self, i: usize, l: usize) -> Vec<u64> {
        (l..=self.sys.m).map(|r| self.column_without(i, r)).collect()
    }

    fn level0_values(&self) -> std::ops::Range<u64> {
        if self.opts.local {
            0..1
        } else {
            0..self.f.q
        }
    }

    fn block1(&mut self, l: usize) -> Result<()> {
        if self.split == Some(l) {
            self.prefixes.push(Prefix {
                x0: self.x[0][..l].to_vec(),
                x1: self.x[1][..l].to_vec(),
            });
            return Ok(());
        }
        if l > self.sys.m {
            return self.next_block(2);
        }
        let f = self.f;
        let last = self.last_block() == 1;
        if l == 0 {
            for a in self.level0_values() {
                for b in self.level0_values() {
                    self.charge(1)?;
                    if f.pow(b, self.sys.n[1]) != f.pow(a, self.sys.n[0]) {
                        continue;
                    }
                    self.set_level0(0, a);
                    self.set_level0(1, b);
                    if last && !self.opts.exhaustive && (a != 0 || b != 0) {
                        // every later level is one affine equation in two unknowns
                        self.tally.add(self.sys.m);
                        continue;
                    }
                    self.block1(1)?;
                }
            }
            return Ok(());
        }
        let n0 = self.sys.n[0] as usize;
        let n1 = self.sys.n[1] as usize;
        if last && !self.opts.exhaustive && l + n0.min(n1) - 1 > self.sys.m {
            // x^{(0)} = 0 here, so levels ≥ l no longer reach the equations
            self.charge(((self.sys.m + 1 - l) * (n0 + n1) * l) as u64)?;
            let t0 = self.tail_without(0, l);
            let t1 = self.tail_without(1, l);
            if t0 == t1 {
                self.tally.add(2 * (self.sys.m + 1 - l));
            }
            return Ok(());
        }
        self.charge(((n0 + n1) * (l + 1)) as u64)?;
        let q0 = self.column_without(0, l);
        let q1 = self.column_without(1, l);
        let base0: Vec<u64> = (0..=n0).map(|j| self.pw[0][j][l]).collect();
        let base1: Vec<u64> = (0..=n1).map(|j| self.pw[1][j][l]).collect();
        let alpha = self.derivative0(1);
        let beta = self.derivative0(0);
        // q1 + alpha*y = q0 + beta*x
        if alpha != 0 {
            let inv = f.inv(alpha);
            for xv in 0..f.q {
                self.charge(1)?;
                let y = f.mul(f.sub(f.add(q0, f.mul(beta, xv)), q1), inv);
                self.set_level(0, l, xv, &base0);
                self.set_level(1, l, y, &base1);
                self.block1(l + 1)?;
            }
        } else if beta != 0 {
            let inv = f.inv(beta);
            for y in 0..f.q {
                self.charge(1)?;
                let xv = f.mul(f.sub(f.add(q1, f.mul(alpha, y)), q0), inv);
                self.set_level(0, l, xv, &base0);
                self.set_level(1, l, y, &base1);
                self.block1(l + 1)?;
            }
        } else if q0 == q1 {
            for xv in 0..f.q {
                for y in 0..f.q {
                    self.charge(1)?;
                    self.set_level(0, l, xv, &base0);
                    self.set_level(1, l, y, &base1);
                    self.block1(l + 1)?;
                }
            }
        }
        Ok(())
    }

    fn next_block(&mut self, k: usize) -> Result<()> {
        if k > self.sys.g() {
            self.tally.add(0);
            return Ok(());
        }
        let m = self.sys.m as u64;
        let cost: u64 = self.sys.b[k - 1].iter().map(|&e| (m + 1) * (m + 1) * (64 - e.leading_zeros() as u64)).sum();
        self.charge(cost)?;
        self.target[k] = self.sys.monomial(k, &self.x);
        self.single(k, 0)
    }

    /// Block `k ≥ 2`: `x_k^{n_k} = target[k]`, level by level.
    fn single(&mut self, k: usize, l: usize) -> Result<()> {
        let m = self.sys.m;
        if l > m {
            return self.next_block(k + 1);
        }
        let f = self.f;
        let last = self.last_block() == k;
        let n = self.sys.n[k] as usize;
        if l == 0 {
            let want = self.target[k][0];
            for v in self.level0_values() {
                self.charge(1)?;
                if f.pow(v, n as u64) != want {
                    continue;
                }
                self.set_level0(k, v);
                if last && !self.opts.exhaustive && v != 0 {
                    // unit leading coefficient: each level has one solution
                    self.tally.add(0);
                    continue;
                }
                self.single(k, 1)?;
            }
            return Ok(());
        }
        if last && !self.opts.exhaustive && l + n - 1 > m {
            self.charge(((m + 1 - l) * n * l) as u64)?;
            let tail = self.tail_without(k, l);
            if tail[..] == self.target[k][l..] {
                self.tally.add(m + 1 - l);
            }
            return Ok(());
        }
        self.charge((n * (l + 1)) as u64)?;
        let qv = self.column_without(k, l);
        let base: Vec<u64> = (0..=n).map(|j| self.pw[k][j][l]).collect();
        let alpha = self.derivative0(k);
        let want = self.target[k][l];
        if alpha != 0 {
            let v = f.mul(f.sub(want, qv), f.inv(alpha));
            self.set_level(k, l, v, &base);
            self.single(k, l + 1)?;
        } else if qv == want {
            for v in 0..f.q {
                self.charge(1)?;
                self.set_level(k, l, v, &base);
                self.single(k, l + 1)?;
            }
        }
        Ok(())
    }

    /// Replays a recorded prefix so the walk can resume at its level.
    fn load_prefix(&mut self, p: &Prefix) {
        let len = p.x0.len();
        self.set_level0(0, p.x0[0]);
        self.set_level0(1, p.x1[0]);
        for l in 1..len {
            self.column_without(0, l);
            let base0: Vec<u64> = (0..self.pw[0].len()).map(|j| self.pw[0][j][l]).collect();
            self.column_without(1, l);
            let base1: Vec<u64> = (0..self.pw[1].len()).map(|j| self.pw[1][j][l]).collect();
            self.set_level(0, l, p.x0[l], &base0);
            self.set_level(1, l, p.x1[l], &base1);
        }
    }
}

/// Number of `F_q`-points of `Y_m` (or of `π_m^{-1}(0)` when `local`).
pub fn count_jets(sys: &JetSystem, opts: CountOptions) -> Result<BigUint> {
    let budget = Budget {
        used: AtomicU64::new(0),
        limit: opts.budget,
        exceeded: AtomicBool::new(false),
    };
    let threads = opts.threads.max(1);
    let mut head = Walker::new(sys, opts, &budget);
    if threads > 1 && sys.m >= 1 {
        head.split = Some(sys.m.min(2));
    }
    head.block1(0)?;
    head.flush()?;
    let mut tally = head.tally.clone();
    let prefixes = std::mem::take(&mut head.prefixes);
    if !prefixes.is_empty() {
        let next = AtomicUsize::new(0);
        let results: Mutex<Vec<Result<Tally>>> = Mutex::new(Vec::new());
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| {
                    let mut w = Walker::new(sys, opts, &budget);
                    let outcome = (|| {
                        loop {
                            let idx = next.fetch_add(1, Ordering::Relaxed);
                            let Some(p) = prefixes.get(idx) else { break };
                            w.load_prefix(p);
                            w.block1(p.x0.len())?;
                        }
                        w.flush()?;
                        Ok(w.tally.clone())
                    })();
                    results.lock().unwrap().push(outcome);
                });
            }
        });
        for r in results.into_inner().unwrap() {
            tally.merge(&r?);
        }
    }
    Ok(tally.value(sys.q))
}

/// Walks the full product `F_q^{(g+1)(m+1)}` and evaluates every equation.
/// Only meant for tiny instances.
pub fn count_naive(sys: &JetSystem, local: bool) -> BigUint {
    let g = sys.g();
    let m = sys.m;
    let slots: Vec<(usize, usize)> = (0..=g)
        .flat_map(|i| (0..=m).map(move |l| (i, l)))
        .filter(|&(_, l)| !(local && l == 0))
        .collect();
    let mut x = vec![vec![0u64; m + 1]; g + 1];
    let mut count = 0u64;
    loop {
        if sys.is_point(&x) {
            count += 1;
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == slots.len() {
                return BigUint::from(count);
            }
            let (i, l) = slots[pos];
            x[i][l] += 1;
            if x[i][l] < sys.q {
                break;
            }
            x[i][l] = 0;
            pos += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub m: usize,
    pub q: u64,
    pub local: bool,
    #[serde(serialize_with = "as_string")]
    pub count: BigUint,
    #[serde(serialize_with = "as_string")]
    pub expected: BigUint,
    #[serde(rename = "match")]
    pub matched: bool,
    /// `q` divides a generator; a mismatch is then a finding, not a failure.
    pub char_divides_generator: bool,
}

fn as_string<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// The class of `Y_m` (or of the fiber when `local`) evaluated at `L = q`.
pub fn expected_count(s: &SemigroupData, m: usize, q: u64, local: bool) -> BigUint {
    let class = if local { fiber_class(s, m as u64) } else { jet_class(s, m as u64) };
    let v = class.eval(&rat(q as i64, 1));
    debug_assert!(v.is_integer());
    v.to_integer()
        .to_biguint()
        .expect("classes of jet schemes have nonnegative point counts")
}

pub fn verify_class(s: &SemigroupData, m: usize, q: u64, opts: CountOptions) -> Result<VerifyReport> {
    let sys = build_jet_system(s, m, q)?;
    let count = count_jets(&sys, opts)?;
    let expected = expected_count(s, m, q, opts.local);
    Ok(VerifyReport {
        m,
        q,
        local: opts.local,
        matched: count == expected,
        count,
        expected,
        char_divides_generator: sys.char_divides_generator,
    })
}

impl VerifyReport {
    pub fn count_u64(&self) -> Option<u64> {
        self.count.to_u64()
    }
}
