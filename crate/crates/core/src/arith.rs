//! Integer arithmetic: primality, factorization, multiplicative functions,
//! quadratic residue symbols, multiplicative orders, and checks of the
//! explicit prime-counting estimates used by the scan modules.
//!
//! Factorization runs trial division over a cached prime table and then
//! Pollard rho (Brent variant) under an explicit iteration budget with a
//! fixed parameter schedule, so results are deterministic for a given
//! `(n, budget)` and partial results are reported as failures that carry
//! the work done so far.

use crate::real::{Real, RealError};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("factoring budget exhausted; partial factorization attached")]
    EffortExceeded(Factorization),
    #[error("arguments are not coprime")]
    NotCoprime,
    #[error("argument {got} outside validity range (need {need})")]
    OutOfValidityRange { got: u64, need: &'static str },
    #[error("operation requires a complete factorization")]
    IncompleteFactorization,
    #[error("claimed group order multiple is not one")]
    BadOrderMultiple,
    #[error("certified real arithmetic failed: {0}")]
    Real(#[from] RealError),
}

/// Iteration budget for Pollard rho. One unit is one `f` evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EffortBudget {
    pub rho_iterations: u64,
}

impl Default for EffortBudget {
    fn default() -> Self {
        EffortBudget { rho_iterations: 1 << 24 }
    }
}

impl EffortBudget {
    pub fn new(rho_iterations: u64) -> Self {
        EffortBudget { rho_iterations }
    }
}

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Prime factorization of `n`, possibly with an unsplit composite cofactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: BigUint,
    factors: Vec<(BigUint, u32)>,
    cofactor: Option<BigUint>,
}

impl Factorization {
    pub fn n(&self) -> &BigUint {
        &self.n
    }

    /// Prime-exponent pairs in ascending prime order.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Unsplit composite remainder, when the budget ran out.
    pub fn cofactor(&self) -> Option<&BigUint> {
        self.cofactor.as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    pub fn omega(&self) -> u64 {
        self.factors.len() as u64
    }

    pub fn big_omega(&self) -> u64 {
        self.factors.iter().map(|(_, e)| *e as u64).sum()
    }

    pub fn valuation(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// All divisors (requires completeness); unsorted count is
    /// `tau(n)`, returned ascending.
    pub fn divisors(&self) -> Vec<BigUint> {
        assert!(self.is_complete(), "divisors of an incomplete factorization");
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            let mut pk = BigUint::one();
            for _ in 0..=*e {
                for d in &divs {
                    next.push(d * &pk);
                }
                pk *= p;
            }
            divs = next;
        }
        divs.sort();
        divs
    }

    /// Build from parts gathered elsewhere; factors must be prime, sorted
    /// once assembled, and multiply (with the cofactor) back to `n`.
    pub fn assemble(n: BigUint, mut factors: Vec<(BigUint, u32)>, cofactor: Option<BigUint>) -> Self {
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let f = Factorization { n, factors, cofactor };
        debug_assert!(f.n.is_zero() || f.verify(), "inconsistent factorization parts");
        f
    }

    fn verify(&self) -> bool {
        let mut prod = BigUint::one();
        for (p, e) in &self.factors {
            prod *= p.pow(*e);
        }
        if let Some(c) = &self.cofactor {
            prod *= c;
        }
        prod == self.n && self.factors.windows(2).all(|w| w[0].0 < w[1].0)
    }
}

/// Totally multiplicative summaries of a complete factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorFunctions {
    pub sigma: BigUint,
    pub tau: BigUint,
    pub omega: u64,
    pub big_omega: u64,
}

static SMALL_PRIMES: OnceLock<Vec<u64>> = OnceLock::new();

/// Primes below `TRIAL_DIVISION_BOUND`, cached.
pub fn small_primes() -> &'static [u64] {
    SMALL_PRIMES.get_or_init(|| sieve_to(TRIAL_DIVISION_BOUND))
}

fn sieve_to(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Primes in `[lo, hi]` by segmented sieve; `hi` up to `10^12`.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    assert!(hi <= 1_000_000_000_000, "segmented sieve guard");
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let lo = lo.max(2);
    if hi <= TRIAL_DIVISION_BOUND {
        return small_primes()
            .iter()
            .copied()
            .filter(|&p| p >= lo && p <= hi)
            .collect();
    }
    let base = small_primes();
    let mut out = Vec::new();
    if lo <= TRIAL_DIVISION_BOUND {
        out.extend(base.iter().copied().filter(|&p| p >= lo));
    }
    let seg_lo = lo.max(TRIAL_DIVISION_BOUND + 1);
    const SEG: u64 = 1 << 20;
    let mut start = seg_lo;
    while start <= hi {
        let end = (start + SEG - 1).min(hi);
        let mut composite = vec![false; (end - start + 1) as usize];
        for &p in base {
            if p * p > end {
                break;
            }
            let mut j = start.div_ceil(p) * p;
            if j < p * p {
                j = p * p;
            }
            while j <= end {
                composite[(j - start) as usize] = true;
                j += p;
            }
        }
        for (i, c) in composite.iter().enumerate() {
            if !c {
                out.push(start + i as u64);
            }
        }
        start = end + 1;
    }
    out
}

/// Primes up to `x` inclusive.
pub fn primes_up_to(x: u64) -> Vec<u64> {
    primes_in_range(2, x)
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    let n = count as f64;
    let bound = if count < 6 {
        13
    } else {
        (n * (n.ln() + n.ln().ln()) * 1.2) as u64 + 16
    };
    let mut primes = primes_up_to(bound);
    while primes.len() < count {
        primes = primes_up_to(primes.last().copied().unwrap_or(13) * 2);
    }
    primes.truncate(count);
    primes
}

pub fn nth_prime(n: usize) -> u64 {
    assert!(n >= 1);
    first_primes(n)[n - 1]
}

// --- 128-bit Montgomery arithmetic -------------------------------------

#[inline]
fn widening_mul_128(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = (1u128 << 64) - 1;
    let (a_hi, a_lo) = (a >> 64, a & MASK);
    let (b_hi, b_lo) = (b >> 64, b & MASK);
    let ll = a_lo * b_lo;
    let lh = a_lo * b_hi;
    let hl = a_hi * b_lo;
    let hh = a_hi * b_hi;
    let mid = (ll >> 64) + (lh & MASK) + (hl & MASK);
    let lo = (mid << 64) | (ll & MASK);
    let hi = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    (hi, lo)
}

#[inline]
fn add_mod_u128(a: u128, b: u128, n: u128) -> u128 {
    // operands < n < 2^127 so the sum cannot overflow
    let s = a + b;
    if s >= n {
        s - n
    } else {
        s
    }
}

#[inline]
fn sub_mod_u128(a: u128, b: u128, n: u128) -> u128 {
    if a >= b {
        a - b
    } else {
        n - b + a
    }
}

/// Montgomery context modulo odd `n < 2^126`.
struct Mont128 {
    n: u128,
    ninv: u128,
    r2: u128,
    one: u128,
}

impl Mont128 {
    fn new(n: u128) -> Self {
        debug_assert!(n.is_odd() && n < (1u128 << 126) && n > 1);
        let mut inv: u128 = 1;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        let ninv = inv.wrapping_neg();
        let r = (u128::MAX % n) + 1;
        let r = if r == n { 0 } else { r };
        let mut r2 = r;
        for _ in 0..128 {
            r2 = add_mod_u128(r2, r2, n);
        }
        Mont128 { n, ninv, r2, one: r }
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.ninv);
        let (mn_hi, mn_lo) = widening_mul_128(m, self.n);
        let (_, carry) = lo.overflowing_add(mn_lo);
        let t = hi + mn_hi + carry as u128;
        if t >= self.n {
            t - self.n
        } else {
            t
        }
    }

    #[inline]
    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = widening_mul_128(a, b);
        self.redc(hi, lo)
    }

    fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.n, self.r2)
    }

    #[cfg(test)]
    fn from_mont(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    fn pow(&self, base_mont: u128, mut e: u128) -> u128 {
        let mut acc = self.one;
        let mut b = base_mont;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

// --- primality ----------------------------------------------------------

/// Strong probable prime test to the 12 witnesses that are known to be
/// deterministic for all `n < 2^64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    strong_probable_prime_u128(n as u128, &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37])
}

fn strong_probable_prime_u128(n: u128, witnesses: &[u64]) -> bool {
    debug_assert!(n.is_odd() && n > 3);
    let mont = Mont128::new(n);
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let neg_one = n - mont.one;
    'w: for &a in witnesses {
        let a = a as u128 % n;
        if a == 0 {
            continue;
        }
        let am = mont.to_mont(a);
        let mut x = mont.pow(am, d);
        if x == mont.one || x == neg_one {
            continue;
        }
        for _ in 1..s {
            x = mont.mul(x, x);
            if x == neg_one {
                continue 'w;
            }
        }
        return false;
    }
    true
}

const SMALL_WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Threshold below which the first 13 prime witnesses are deterministic.
fn mr_deterministic_bound() -> &'static BigUint {
    static BOUND: OnceLock<BigUint> = OnceLock::new();
    BOUND.get_or_init(|| "3317044064679887385961981".parse().unwrap())
}

pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic Miller-Rabin: proven witness sets below
/// `3.317e24`, and 64 additional witnesses derived from `n` itself above,
/// so repeated runs always agree.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    for &p in small_primes().iter().take(256) {
        if (n % BigUint::from(p)).is_zero() {
            return false;
        }
    }
    if let Some(x) = n.to_u128() {
        if n <= mr_deterministic_bound() {
            return strong_probable_prime_u128(x, &SMALL_WITNESSES);
        }
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    let mut witnesses: Vec<BigUint> = SMALL_WITNESSES.iter().map(|&w| BigUint::from(w)).collect();
    let mut state = n.iter_u64_digits().next().unwrap_or(1) ^ 0xA076_1D64_78BD_642F;
    let span = n - BigUint::from(3u32);
    for _ in 0..64 {
        let raw = BigUint::from(splitmix64(&mut state));
        witnesses.push(&two + (raw % &span));
    }
    'w: for a in witnesses {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'w;
            }
        }
        return false;
    }
    true
}

// --- factorization -------------------------------------------------------

/// Brent-cycle Pollard rho on `n` (odd, composite, < 2^126).
/// Returns a nontrivial factor or `None` if this attempt failed or the
/// budget ran out. `spent` accumulates `f` evaluations.
fn brent_rho_u128(n: u128, c_raw: u64, y_raw: u64, cap: u64, spent: &mut u64) -> Option<u128> {
    let mont = Mont128::new(n);
    let c = mont.to_mont(c_raw as u128);
    let f = |y: u128| add_mod_u128(mont.mul(y, y), c, n);
    let mut y = mont.to_mont(y_raw as u128);
    let mut used: u64 = 0;
    let m = 128u64;
    let mut g: u128 = 1;
    let mut r: u64 = 1;
    let mut q = mont.one;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        used += r;
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = m.min(r - k);
            for _ in 0..steps {
                y = f(y);
                q = mont.mul(q, sub_mod_u128(x, y, n));
            }
            used += steps;
            g = q.gcd(&n);
            k += m;
            if used > cap {
                *spent += used;
                return None;
            }
        }
        r *= 2;
    }
    if g == n {
        // batched gcd overshot; replay stepwise
        loop {
            ys = f(ys);
            used += 1;
            g = sub_mod_u128(x, ys, n).gcd(&n);
            if g > 1 {
                break;
            }
            if used > cap {
                *spent += used;
                return None;
            }
        }
    }
    *spent += used;
    if g > 1 && g < n {
        Some(g)
    } else {
        None
    }
}

fn brent_rho_big(n: &BigUint, c_raw: u64, y_raw: u64, cap: u64, spent: &mut u64) -> Option<BigUint> {
    let c = BigUint::from(c_raw);
    let f = |y: &BigUint| (y * y + &c) % n;
    let mut y = BigUint::from(y_raw);
    let mut used: u64 = 0;
    let m = 64u64;
    let mut g = BigUint::one();
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let one = BigUint::one();
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        used += r;
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            let steps = m.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                if !diff.is_zero() {
                    q = q * diff % n;
                }
            }
            used += steps;
            g = q.gcd(n);
            k += m;
            if used > cap {
                *spent += used;
                return None;
            }
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            used += 1;
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if g > one {
                break;
            }
            if used > cap {
                *spent += used;
                return None;
            }
        }
    }
    *spent += used;
    if g > one && &g < n {
        Some(g)
    } else {
        None
    }
}

/// Split odd composite `n` (no factors below the trial division bound).
/// Fixed schedule: attempt `k` uses `c = 2k+1`, `y0 = k+2`, with a
/// per-attempt cap that doubles, all inside the shared budget.
fn rho_split(n: &BigUint, budget_left: u64, spent: &mut u64) -> Option<BigUint> {
    let mut attempt: u64 = 0;
    loop {
        if *spent >= budget_left {
            return None;
        }
        let cap = (1u64 << (16 + attempt.min(16))).min(budget_left - *spent);
        let c = 2 * attempt + 1;
        let y0 = attempt + 2;
        let found = if let Some(small) = n.to_u128() {
            if small < (1u128 << 126) {
                brent_rho_u128(small, c, y0, cap, spent).map(BigUint::from)
            } else {
                brent_rho_big(n, c, y0, cap, spent)
            }
        } else {
            brent_rho_big(n, c, y0, cap, spent)
        };
        if found.is_some() {
            return found;
        }
        if *spent >= budget_left {
            return None;
        }
        attempt += 1;
    }
}

/// Deterministic factorization under an explicit effort budget.
///
/// On success every listed factor is prime and exponents are exact. When
/// the budget runs out the error carries the partial result whose
/// `cofactor()` is a composite with no prime factor below the trial
/// division bound.
pub fn factor(n: &BigUint, budget: &EffortBudget) -> Result<Factorization, ArithError> {
    assert!(!n.is_zero(), "factor(0) is undefined");
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut spent: u64 = 0;
    let mut pending: Vec<BigUint> = Vec::new();
    let mut failed: Vec<BigUint> = Vec::new();

    let mut m = n.clone();
    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&pb);
            if r.is_zero() {
                m = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            factors.push((pb, e));
        }
    }
    if !m.is_one() {
        pending.push(m);
    }

    while let Some(c) = pending.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime(&c) {
            push_prime(&mut factors, c, 1);
            continue;
        }
        // perfect power: factor the root and scale exponents
        if let Some((root, k)) = perfect_power(&c) {
            for _ in 0..k {
                pending.push(root.clone());
            }
            continue;
        }
        match rho_split(&c, budget.rho_iterations, &mut spent) {
            Some(d) => {
                let other = &c / &d;
                pending.push(d);
                pending.push(other);
            }
            None => failed.push(c),
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    let cofactor = if failed.is_empty() {
        None
    } else {
        Some(failed.iter().product())
    };
    let f = Factorization { n: n.clone(), factors, cofactor };
    debug_assert!(f.verify());
    if f.is_complete() {
        Ok(f)
    } else {
        Err(ArithError::EffortExceeded(f))
    }
}

fn push_prime(factors: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32) {
    if let Some(slot) = factors.iter_mut().find(|(q, _)| *q == p) {
        slot.1 += e;
    } else {
        factors.push((p, e));
    }
}

/// `Some((a, k))` with `a^k == n`, `k >= 2` maximal-exponent-first probe.
pub fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    if n < &BigUint::from(4u32) {
        return None;
    }
    let bits = n.bits() as u32;
    for k in (2..=bits).rev() {
        let root = n.nth_root(k);
        if root.pow(k) == *n {
            return Some((root, k));
        }
    }
    None
}

/// Convenience complete factorization for machine-word numbers.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let f = factor(&BigUint::from(n), &EffortBudget::default())
        .expect("word-sized factorization cannot exhaust the default budget");
    f.factors
        .iter()
        .map(|(p, e)| (p.to_u64().unwrap(), *e))
        .collect()
}

// --- multiplicative functions -------------------------------------------

/// Euler totient from a complete factorization.
pub fn euler_phi(f: &Factorization) -> Result<BigUint, ArithError> {
    if !f.is_complete() {
        return Err(ArithError::IncompleteFactorization);
    }
    let mut phi = BigUint::one();
    for (p, e) in f.factors() {
        phi *= p.pow(e - 1) * (p - BigUint::one());
    }
    Ok(phi)
}

pub fn divisor_functions(f: &Factorization) -> Result<DivisorFunctions, ArithError> {
    if !f.is_complete() {
        return Err(ArithError::IncompleteFactorization);
    }
    let mut sigma = BigUint::one();
    let mut tau = BigUint::one();
    for (p, e) in f.factors() {
        // sigma(p^e) = (p^(e+1) - 1)/(p - 1)
        sigma *= (p.pow(e + 1) - BigUint::one()) / (p - BigUint::one());
        tau *= BigUint::from(*e as u64 + 1);
    }
    Ok(DivisorFunctions { sigma, tau, omega: f.omega(), big_omega: f.big_omega() })
}

/// `p`-adic valuation of `n`.
pub fn valuation(n: &BigUint, p: &BigUint) -> u32 {
    assert!(!n.is_zero(), "valuation of zero is infinite");
    let mut v = 0u32;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if r.is_zero() {
            v += 1;
            m = q;
        } else {
            return v;
        }
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    assert!(n.is_odd() && !n.is_zero(), "jacobi symbol needs odd modulus");
    let n_int = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().unwrap();
    let mut n = n.clone();
    let mut t = 1i32;
    let one = BigUint::one();
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            a >>= tz;
            let r = (&n % BigUint::from(8u32)).to_u32().unwrap();
            if tz % 2 == 1 && (r == 3 || r == 5) {
                t = -t;
            }
        }
        // quadratic reciprocity flip
        if (&a % BigUint::from(4u32)).to_u32().unwrap() == 3
            && (&n % BigUint::from(4u32)).to_u32().unwrap() == 3
        {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    if n == one {
        t
    } else {
        0
    }
}

/// Legendre symbol `(a/p)` for odd prime `p`.
pub fn legendre(a: &BigInt, p: &BigUint) -> i32 {
    jacobi(a, p)
}

pub fn jacobi_i64(a: i64, n: u64) -> i32 {
    jacobi(&BigInt::from(a), &BigUint::from(n))
}

/// Multiplicative order of `a` modulo `m`, given a complete factorization
/// of any multiple of the order (typically `phi(m)`).
pub fn multiplicative_order(
    a: &BigUint,
    m: &BigUint,
    order_multiple: &Factorization,
) -> Result<BigUint, ArithError> {
    if !order_multiple.is_complete() {
        return Err(ArithError::IncompleteFactorization);
    }
    if a.gcd(m) != BigUint::one() {
        return Err(ArithError::NotCoprime);
    }
    let one = BigUint::one();
    if a.modpow(order_multiple.n(), m) != one {
        return Err(ArithError::BadOrderMultiple);
    }
    let mut ord = order_multiple.n().clone();
    for (p, _) in order_multiple.factors() {
        while (&ord % p).is_zero() && a.modpow(&(&ord / p), m) == one {
            ord /= p;
        }
    }
    Ok(ord)
}

/// Whether `n` is composite with `phi(n) | n - 1`.
pub fn lehmer_property(f: &Factorization) -> Result<bool, ArithError> {
    if !f.is_complete() {
        return Err(ArithError::IncompleteFactorization);
    }
    let n = f.n();
    if n <= &BigUint::from(3u32) || is_probable_prime(n) {
        return Ok(false);
    }
    let phi = euler_phi(f)?;
    Ok(((n - BigUint::one()) % phi).is_zero())
}

// --- explicit analytic estimates ------------------------------------------

/// The explicit prime estimates relied on by the scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RsBoundKind {
    /// `p_n < n (ln n + ln ln n)` for `n >= 6`.
    PrimeCountUpper,
    /// `prod_{p <= x} (1 + 1/(p-1)) < 1.79 ln x (1 + 1/(2 ln^2 x))` for `x >= 286`.
    MertensProduct,
    /// `phi(n) > n / (1.79 ln ln n + 2.5 / ln ln n)` for `n >= 3`.
    PhiLower,
    /// `omega(n) < ln n / (ln ln n - 1.1714)` for `n >= 26`.
    OmegaUpper,
}

#[derive(Debug, Clone)]
pub struct RsBoundCheck {
    pub kind: RsBoundKind,
    pub n: u64,
    pub lhs: Real,
    pub rhs: Real,
    pub holds: bool,
    pub precision: u32,
}

/// Evaluate one explicit estimate at `n` with certified arithmetic,
/// escalating precision until the comparison is certain.
pub fn rs_bound_check(kind: RsBoundKind, n: u64) -> Result<RsBoundCheck, ArithError> {
    let range_ok = match kind {
        RsBoundKind::PrimeCountUpper => n >= 6,
        RsBoundKind::MertensProduct => n >= 286,
        RsBoundKind::PhiLower => n >= 3,
        RsBoundKind::OmegaUpper => n >= 26,
    };
    if !range_ok {
        return Err(ArithError::OutOfValidityRange {
            got: n,
            need: match kind {
                RsBoundKind::PrimeCountUpper => "n >= 6",
                RsBoundKind::MertensProduct => "x >= 286",
                RsBoundKind::PhiLower => "n >= 3",
                RsBoundKind::OmegaUpper => "n >= 26",
            },
        });
    }
    let mut prec: u32 = 128;
    loop {
        let nr = Real::from_bigint(&BigInt::from(n));
        let ln_n = nr.ln(prec)?;
        let lnln_n = || ln_n.ln(prec);
        let (lhs, rhs) = match kind {
            RsBoundKind::PrimeCountUpper => {
                let p = nth_prime(n as usize);
                let lhs = Real::from_bigint(&BigInt::from(p));
                let rhs = nr.mul(&ln_n.add(&lnln_n()?, prec), prec);
                (lhs, rhs)
            }
            RsBoundKind::MertensProduct => {
                let mut prod = Real::one();
                for &p in primes_up_to(n).iter() {
                    // 1 + 1/(p-1) = p/(p-1)
                    let f = Real::from_ratio(&BigInt::from(p), &BigInt::from(p - 1), prec)?;
                    prod = prod.mul(&f, prec);
                }
                let c = Real::from_decimal_str("1.79", prec)?;
                let ln2x = ln_n.mul(&ln_n, prec);
                let corr = Real::one().add(&Real::one().div(&ln2x.scale2(1), prec)?, prec);
                let rhs = c.mul(&ln_n, prec).mul(&corr, prec);
                (prod, rhs)
            }
            RsBoundKind::PhiLower => {
                let f = factor(&BigUint::from(n), &EffortBudget::default())?;
                let phi = euler_phi(&f)?;
                let lhs = Real::from_bigint(&BigInt::from(phi));
                let ll = lnln_n()?;
                let c1 = Real::from_decimal_str("1.79", prec)?;
                let c2 = Real::from_decimal_str("2.5", prec)?;
                let denom = c1.mul(&ll, prec).add(&c2.div(&ll, prec)?, prec);
                let rhs = nr.div(&denom, prec)?;
                (lhs, rhs)
            }
            RsBoundKind::OmegaUpper => {
                let f = factor(&BigUint::from(n), &EffortBudget::default())?;
                let lhs = Real::from_bigint(&BigInt::from(f.omega()));
                let c = Real::from_decimal_str("1.1714", prec)?;
                let denom = lnln_n()?.sub(&c, prec);
                if !denom.is_certainly_positive() {
                    prec *= 2;
                    continue;
                }
                let rhs = ln_n.div(&denom, prec)?;
                (lhs, rhs)
            }
        };
        let holds = match kind {
            // strict upper bounds for the first two and last, strict lower for phi
            RsBoundKind::PhiLower => lhs.cmp_certain(&rhs).map(|o| o == std::cmp::Ordering::Greater),
            _ => lhs.cmp_certain(&rhs).map(|o| o == std::cmp::Ordering::Less),
        };
        match holds {
            Some(h) => {
                return Ok(RsBoundCheck { kind, n, lhs, rhs, holds: h, precision: prec })
            }
            None => {
                prec *= 2;
                if prec > crate::real::PRECISION_CAP {
                    return Err(ArithError::Real(RealError::PrecisionCapReached(prec)));
                }
            }
        }
    }
}
