//! Order of appearance of primes in Lucas sequences, appearance exponents,
//! primitive prime divisors, and reciprocal sums over primes with a given
//! order.
//!
//! For a prime `p` not dividing `s`, `z(p)` is the least `k >= 1` with
//! `p | u_k`. The set of indices `n` with `p | u_n` is exactly the set of
//! multiples of `z(p)`, which lets `z(p)` be found by descending through
//! the divisors of `p - (disc|p)` instead of scanning forward.

use crate::arith::{self, ArithError, EffortBudget, Factorization};
use crate::lucas::{self, LucasError, LucasPair, Side};
use crate::real::{Real, RealError};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppearanceError {
    #[error("prime {0} divides s; no term of the fundamental sequence is divisible by it")]
    UnsupportedPrime(u64),
    #[error("the term factorization must be complete")]
    IncompleteFactorization,
    #[error(transparent)]
    Lucas(#[from] LucasError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Order of appearance and appearance exponent of one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppearanceRecord {
    pub pair: (i64, i64),
    pub p: u64,
    pub z: u64,
    pub e: u32,
}

/// `z(p)` and the exponent of `p` in `u_{z(p)}`.
///
/// The divisor descent starts from `M = p - (disc|p)` (or `M = p` when
/// `p | disc`, or a direct scan for `p = 2`) and strips prime factors of
/// `M` while divisibility persists, which yields the least index because
/// every index divisible by `p` is a multiple of `z(p)`.
pub fn order_of_appearance(pair: &LucasPair, p: u64) -> Result<AppearanceRecord, AppearanceError> {
    debug_assert!(arith::is_prime_u64(p), "p = {} not prime", p);
    let z = order_only(pair, p)?;
    let e = appearance_exponent(pair, p, z)?;
    Ok(AppearanceRecord { pair: (pair.r(), pair.s()), p, z, e })
}

fn order_only(pair: &LucasPair, p: u64) -> Result<u64, AppearanceError> {
    if p == 2 {
        if pair.s() % 2 == 0 {
            // gcd(r,s)=1 forces r odd, so u_n is odd for every n >= 1
            return Err(AppearanceError::UnsupportedPrime(2));
        }
        return Ok(if pair.r() % 2 == 0 { 2 } else { 3 });
    }
    if pair.s().unsigned_abs() % p == 0 {
        return Err(AppearanceError::UnsupportedPrime(p));
    }
    let disc_mod = pair.discriminant().rem_euclid(p as i128) as u64;
    if disc_mod == 0 {
        debug_assert_eq!(lucas::term_mod_u64(pair, p, p)?.0, 0);
        return Ok(p);
    }
    debug_assert!(p < (1 << 62));
    let eps = arith::jacobi_i64(disc_mod as i64, p);
    debug_assert!(eps != 0);
    let m = if eps == 1 { p - 1 } else { p + 1 };
    debug_assert_eq!(
        lucas::term_mod_u64(pair, m, p)?.0,
        0,
        "u_(p - eps) not divisible by p = {}",
        p
    );
    let mut z = m;
    for (q, _) in arith::factor_u64(m) {
        while z % q == 0 && lucas::term_mod_u64(pair, z / q, p)?.0 == 0 {
            z /= q;
        }
    }
    Ok(z)
}

/// `nu_p(u_z)` by evaluating `u_z` modulo escalating prime powers.
pub fn appearance_exponent(pair: &LucasPair, p: u64, z: u64) -> Result<u32, AppearanceError> {
    let mut k: u32 = 3;
    loop {
        let residue = match p.checked_pow(k) {
            Some(m) => BigUint::from(lucas::term_mod_u64(pair, z, m)?.0),
            None => lucas::term_mod_big(pair, z, &BigUint::from(p).pow(k))?.0,
        };
        if !residue.is_zero() {
            return Ok(arith::valuation(&residue, &BigUint::from(p)));
        }
        k = k.checked_mul(2).expect("exponent escalation overflow");
    }
}

/// Prime factors of the side-`n` term whose first appearance on that side
/// is at index `n` itself.
///
/// Fundamental side: `z(p) = n`. Companion side: the least `m >= 1` with
/// `p | v_m` equals `n` (equivalently `z(p) = 2n` for odd `p`, but the scan
/// form also settles `p = 2`).
pub fn primitive_prime_factors(
    pair: &LucasPair,
    n: u64,
    side: Side,
    f: &Factorization,
) -> Result<Vec<BigUint>, AppearanceError> {
    if !f.is_complete() {
        return Err(AppearanceError::IncompleteFactorization);
    }
    let mut earlier: Vec<BigInt> = Vec::new();
    for m in 1..n {
        earlier.push(lucas::term(pair, m as i64)?.side(side).clone());
    }
    let mut out = Vec::new();
    'primes: for (p, _) in f.factors() {
        let pb = BigInt::from(p.clone());
        for t in &earlier {
            if (t % &pb).is_zero() {
                continue 'primes;
            }
        }
        out.push(p.clone());
    }
    Ok(out)
}

/// One audited index.
#[derive(Debug, Clone)]
pub struct AuditEntry {
    pub n: u64,
    pub term_abs: BigUint,
    pub primitive_primes: Vec<BigUint>,
    /// every primitive prime away from the discriminant is +-1 mod n
    pub congruences_ok: bool,
    /// Pell fundamental side, n > 14: some prime factor is 1 mod 4
    pub residue_one_mod_four: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub pair: (i64, i64),
    pub side: Side,
    pub n_max: u64,
    pub entries: Vec<AuditEntry>,
    /// indices with |term| > 1 and no primitive prime divisor
    pub exceptions: Vec<u64>,
    /// indices skipped because |term| <= 1 makes the question vacuous
    pub skipped_unit_terms: Vec<u64>,
}

pub const AUDIT_INDEX_CAP: u64 = 120;

/// Complete factorizations of the side terms for 1..=n_max, computed
/// bottom up: primes found at earlier indices are peeled off first, so
/// only the primitive part of each term ever reaches the heavy splitter.
pub fn factor_terms_up_to(
    pair: &LucasPair,
    side: Side,
    n_max: u64,
    budget: &EffortBudget,
) -> Result<Vec<(u64, Factorization)>, AppearanceError> {
    let out = factor_terms_with_budget(pair, side, n_max, budget)?;
    if out.iter().any(|(_, f)| !f.is_complete()) {
        return Err(AppearanceError::IncompleteFactorization);
    }
    Ok(out)
}

/// Same bottom-up sweep, but budget exhaustion is not fatal: the affected
/// index keeps its partial factorization with the unfactored composite as
/// cofactor.
pub fn factor_terms_with_budget(
    pair: &LucasPair,
    side: Side,
    n_max: u64,
    budget: &EffortBudget,
) -> Result<Vec<(u64, Factorization)>, AppearanceError> {
    let mut known: Vec<BigUint> = Vec::new();
    let mut out = Vec::new();
    for n in 1..=n_max {
        let t = lucas::term(pair, n as i64)?;
        let mut rest = t
            .side(side)
            .magnitude()
            .clone();
        let mut factors: BTreeMap<BigUint, u32> = BTreeMap::new();
        if rest.is_zero() {
            out.push((n, Factorization::assemble(BigUint::zero(), vec![], None)));
            continue;
        }
        for p in &known {
            while (&rest % p).is_zero() {
                rest /= p;
                *factors.entry(p.clone()).or_insert(0) += 1;
            }
        }
        let mut cofactor = None;
        if !rest.is_one() {
            let sub = match arith::factor(&rest, budget) {
                Ok(f) => f,
                Err(ArithError::EffortExceeded(partial)) => partial,
                Err(other) => return Err(AppearanceError::Arith(other)),
            };
            for (p, k) in sub.factors() {
                *factors.entry(p.clone()).or_insert(0) += k;
            }
            cofactor = sub.cofactor().cloned();
        }
        for p in factors.keys() {
            if !known.contains(p) {
                known.push(p.clone());
            }
        }
        let f = Factorization::assemble(
            t.side(side).magnitude().clone(),
            factors.into_iter().collect(),
            cofactor,
        );
        out.push((n, f));
    }
    Ok(out)
}

/// Existence of primitive prime divisors for every index up to `n_max`,
/// with the associated congruence checks.
pub fn primitive_divisor_audit(
    pair: &LucasPair,
    side: Side,
    n_max: u64,
    budget: &EffortBudget,
) -> Result<AuditReport, AppearanceError> {
    if n_max > AUDIT_INDEX_CAP {
        return Err(AppearanceError::Lucas(LucasError::IndexGuardExceeded(
            n_max as i64,
            AUDIT_INDEX_CAP as i64,
        )));
    }
    let factored = factor_terms_up_to(pair, side, n_max, budget)?;
    let disc = BigInt::from(pair.discriminant());
    let is_pell_fundamental = pair.name() == Some("pell") && side == Side::Fundamental;

    let mut entries = Vec::new();
    let mut exceptions = Vec::new();
    let mut skipped = Vec::new();
    for (n, f) in &factored {
        if f.n() <= &BigUint::one() {
            skipped.push(*n);
            continue;
        }
        let prim = primitive_prime_factors(pair, *n, side, f)?;
        let nb = BigUint::from(*n);
        let congruences_ok = prim.iter().all(|p| {
            let pb = BigInt::from(p.clone());
            if (&disc % &pb).is_zero() {
                return true;
            }
            let r = p % &nb;
            r.is_zero() && *n == 1 || r.is_one() || r == &nb - 1u32
        });
        let residue_one_mod_four = if is_pell_fundamental && *n > 14 {
            Some(
                f.factors()
                    .iter()
                    .any(|(p, _)| (p % 4u32) == BigUint::one()),
            )
        } else {
            None
        };
        if prim.is_empty() {
            exceptions.push(*n);
        }
        entries.push(AuditEntry {
            n: *n,
            term_abs: f.n().clone(),
            primitive_primes: prim,
            congruences_ok,
            residue_one_mod_four,
        });
    }
    Ok(AuditReport {
        pair: (pair.r(), pair.s()),
        side,
        n_max,
        entries,
        exceptions,
        skipped_unit_terms: skipped,
    })
}

/// Census predicate over the order of appearance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusPredicate {
    ZOdd,
    ZNotDivFour,
}

impl CensusPredicate {
    pub fn label(&self) -> &'static str {
        match self {
            CensusPredicate::ZOdd => "z_odd",
            CensusPredicate::ZNotDivFour => "z_not_div_4",
        }
    }

    fn holds(&self, z: u64) -> bool {
        match self {
            CensusPredicate::ZOdd => z % 2 == 1,
            CensusPredicate::ZNotDivFour => z % 4 != 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CensusRecord {
    pub pair: (i64, i64),
    pub prime_count: usize,
    pub predicate: CensusPredicate,
    pub count: usize,
    /// product of p/(p-1) over the matching primes, 128-bit enclosure
    pub product: Real,
    pub product_decimal: String,
    /// (k, product over the first k matching primes) for requested k
    pub checkpoints: Vec<(usize, String)>,
}

pub const CENSUS_PRIME_CAP: usize = 100_000;
const CENSUS_PRECISION: u32 = 128;
const CENSUS_DIGITS: usize = 6;

/// Scan the first `prime_count` primes, count those whose order of
/// appearance satisfies the predicate, and accumulate the Euler-type
/// product of `(1 - 1/p)^{-1}` over them.
///
/// The z computation is sharded across threads; the product is then taken
/// sequentially over the sorted matches, so output does not depend on the
/// thread count. With 128-bit working precision the relative enclosure
/// width stays below 2^-100 for any count up to the cap.
pub fn appearance_census(
    pair: &LucasPair,
    prime_count: usize,
    predicate: CensusPredicate,
    checkpoints: &[usize],
) -> Result<CensusRecord, AppearanceError> {
    if prime_count > CENSUS_PRIME_CAP {
        return Err(AppearanceError::Arith(ArithError::OutOfValidityRange {
            got: prime_count as u64,
            need: "prime_count <= 100000",
        }));
    }
    let primes = arith::first_primes(prime_count);
    let orders: Vec<(u64, u64)> = primes
        .par_iter()
        .map(|&p| order_only(pair, p).map(|z| (p, z)))
        .collect::<Result<_, _>>()?;
    let matching: Vec<u64> = orders
        .iter()
        .filter(|(_, z)| predicate.holds(*z))
        .map(|(p, _)| *p)
        .collect();

    let mut product = Real::one();
    let mut cps = Vec::new();
    for (i, &p) in matching.iter().enumerate() {
        let factor = Real::from_ratio(&BigInt::from(p), &BigInt::from(p - 1), CENSUS_PRECISION)?;
        product = product.mul(&factor, CENSUS_PRECISION);
        if checkpoints.contains(&(i + 1)) {
            cps.push((i + 1, product.to_decimal(CENSUS_DIGITS)));
        }
    }
    Ok(CensusRecord {
        pair: (pair.r(), pair.s()),
        prime_count,
        predicate,
        count: matching.len(),
        product_decimal: product.to_decimal(CENSUS_DIGITS),
        product,
        checkpoints: cps,
    })
}

/// Reciprocal sum over the primes whose order of appearance is exactly `n`,
/// with the two analytic upper bounds it must stay below.
#[derive(Debug, Clone)]
pub struct ReciprocalSumRecord {
    pub n: u64,
    /// exact value of the sum as a reduced fraction
    pub sum_num: BigUint,
    pub sum_den: BigUint,
    pub sum_decimal: String,
    pub bound_index: String,
    pub bound_totient: String,
    pub holds: bool,
}

/// `S_n = sum of 1/(p-1)` over primitive primes of `u_n`, compared against
/// `2 ln n / n` and `(4 + 4 ln ln n) / phi(n)`.
pub fn sum_primitive_reciprocals(
    pair: &LucasPair,
    n: u64,
    f: &Factorization,
) -> Result<ReciprocalSumRecord, AppearanceError> {
    if n <= 2 {
        return Err(AppearanceError::Arith(ArithError::OutOfValidityRange {
            got: n,
            need: "n > 2",
        }));
    }
    let prim = primitive_prime_factors(pair, n, Side::Fundamental, f)?;
    let mut num = BigUint::zero();
    let mut den = BigUint::one();
    for p in &prim {
        // num/den + 1/(p-1)
        let m = p - 1u32;
        num = num * &m + &den;
        den *= m;
        let g = num.gcd(&den);
        num /= &g;
        den /= &g;
    }
    let prec = 192;
    let sum = Real::from_ratio(&BigInt::from(num.clone()), &BigInt::from(den.clone()), prec)?;
    let ln_n = Real::from_i64(n as i64).ln(prec)?;
    let bound_index = ln_n.scale2(1).div(&Real::from_i64(n as i64), prec)?;
    let phi = arith::euler_phi(&arith::factor(&BigUint::from(n), &EffortBudget::default())?)?;
    let lnln_n = ln_n.ln(prec)?;
    let four = Real::from_i64(4);
    let bound_totient = four
        .add(&lnln_n.mul(&four, prec), prec)
        .div(&Real::from_bigint(&BigInt::from(phi)), prec)?;
    let below_index = sum.cmp_certain(&bound_index) == Some(std::cmp::Ordering::Less);
    let below_totient = sum.cmp_certain(&bound_totient) == Some(std::cmp::Ordering::Less);
    Ok(ReciprocalSumRecord {
        n,
        sum_num: num,
        sum_den: den,
        sum_decimal: sum.to_decimal(8),
        bound_index: bound_index.to_decimal(8),
        bound_totient: bound_totient.to_decimal(8),
        holds: below_index && below_totient,
    })
}

/// Lemma-style ceiling on the appearance exponent: `e <= (p+1) ln(alpha) /
/// (2 ln p)`. The right side is irrational, so the comparison is strict and
/// decidable; precision escalates until the enclosure separates.
pub fn exponent_bound_holds(pair: &LucasPair, rec: &AppearanceRecord) -> Result<bool, AppearanceError> {
    let e = Real::from_i64(rec.e as i64);
    let mut prec = 96;
    loop {
        let ln_alpha = pair.alpha(prec).ln(prec)?;
        let ln_p = Real::from_i64(rec.p as i64).ln(prec)?;
        let bound = Real::from_i64(rec.p as i64 + 1)
            .mul(&ln_alpha, prec)
            .div(&ln_p.scale2(1), prec)?;
        match e.cmp_certain(&bound) {
            Some(ord) => return Ok(ord == std::cmp::Ordering::Less),
            None => {
                prec *= 2;
                if prec > crate::real::PRECISION_CAP {
                    return Err(AppearanceError::Real(RealError::PrecisionCapReached(prec)));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pell() -> LucasPair {
        LucasPair::pell()
    }

    fn fib() -> LucasPair {
        LucasPair::fibonacci()
    }

    #[test]
    fn orders_of_small_primes() {
        assert_eq!(order_of_appearance(&pell(), 2).unwrap().z, 2);
        let rec = order_of_appearance(&pell(), 13).unwrap();
        assert_eq!((rec.z, rec.e), (7, 2));
        let rec = order_of_appearance(&pell(), 31).unwrap();
        assert_eq!(rec.e, 2);
        assert_eq!(order_of_appearance(&fib(), 5).unwrap().z, 5);
        assert_eq!(order_of_appearance(&fib(), 2).unwrap().z, 3);
        assert_eq!(order_of_appearance(&fib(), 7).unwrap().z, 8);
        // p = 1546463 has a squared appearance in the Pell sequence
        let rec = order_of_appearance(&pell(), 1_546_463).unwrap();
        assert_eq!(rec.e, 2);
    }

    #[test]
    fn order_matches_forward_scan() {
        for pair in [pell(), fib(), LucasPair::new(3, 2).unwrap()] {
            for &p in arith::primes_up_to(500).iter() {
                let computed = match order_only(&pair, p) {
                    Ok(z) => z,
                    Err(AppearanceError::UnsupportedPrime(_)) => {
                        // no index up to a full period may be divisible
                        for k in 1..=4 * p {
                            assert_ne!(
                                lucas::term_mod_u64(&pair, k, p).unwrap().0,
                                0,
                                "pair {:?}, p={}",
                                pair,
                                p
                            );
                        }
                        continue;
                    }
                    Err(e) => panic!("{e}"),
                };
                let naive = (1..)
                    .find(|&k| lucas::term_mod_u64(&pair, k, p).unwrap().0 == 0)
                    .unwrap();
                assert_eq!(computed, naive, "pair {:?}, p={}", pair, p);
            }
        }
    }

    #[test]
    fn unsupported_prime_when_p_divides_s() {
        let pair = LucasPair::new(3, 2).unwrap();
        assert!(matches!(
            order_of_appearance(&pair, 2),
            Err(AppearanceError::UnsupportedPrime(2))
        ));
        let pair = LucasPair::new(2, 5).unwrap();
        assert!(matches!(
            order_of_appearance(&pair, 5),
            Err(AppearanceError::UnsupportedPrime(5))
        ));
    }

    #[test]
    fn primitive_factors_of_pell_companions() {
        let budget = EffortBudget::default();
        let q13 = lucas::term(&pell(), 13).unwrap().v.magnitude().clone();
        let f = arith::factor(&q13, &budget).unwrap();
        let prim = primitive_prime_factors(&pell(), 13, Side::Companion, &f).unwrap();
        assert_eq!(prim, vec![BigUint::from(79u32), BigUint::from(599u32)]);
        let q31 = lucas::term(&pell(), 31).unwrap().v.magnitude().clone();
        let f = arith::factor(&q31, &budget).unwrap();
        let prim = primitive_prime_factors(&pell(), 31, Side::Companion, &f).unwrap();
        assert_eq!(prim, vec![BigUint::from(424_577u32), BigUint::from(865_087u32)]);
    }

    #[test]
    fn lucas_companion_six_has_no_primitive() {
        let budget = EffortBudget::default();
        let l6 = lucas::term(&fib(), 6).unwrap().v.magnitude().clone();
        assert_eq!(l6, BigUint::from(18u32));
        let f = arith::factor(&l6, &budget).unwrap();
        let prim = primitive_prime_factors(&fib(), 6, Side::Companion, &f).unwrap();
        assert!(prim.is_empty());
        // and index 3 takes 2 as a primitive companion divisor
        let l3 = lucas::term(&fib(), 3).unwrap().v.magnitude().clone();
        let f = arith::factor(&l3, &budget).unwrap();
        let prim = primitive_prime_factors(&fib(), 3, Side::Companion, &f).unwrap();
        assert_eq!(prim, vec![BigUint::from(2u32)]);
    }

    #[test]
    fn audits_match_known_exception_sets() {
        let budget = EffortBudget::default();
        let rep = primitive_divisor_audit(&fib(), Side::Fundamental, 60, &budget).unwrap();
        assert_eq!(rep.exceptions, vec![6, 12]);
        assert_eq!(rep.skipped_unit_terms, vec![1, 2]);
        assert!(rep.entries.iter().all(|e| e.congruences_ok));

        let rep = primitive_divisor_audit(&fib(), Side::Companion, 60, &budget).unwrap();
        assert_eq!(rep.exceptions, vec![6]);
        assert!(rep.entries.iter().all(|e| e.congruences_ok));

        let rep = primitive_divisor_audit(&pell(), Side::Fundamental, 60, &budget).unwrap();
        assert!(rep.exceptions.is_empty());
        assert_eq!(rep.skipped_unit_terms, vec![1]);
        assert!(rep.entries.iter().all(|e| e.congruences_ok));
        assert!(rep
            .entries
            .iter()
            .all(|e| e.residue_one_mod_four.unwrap_or(true)));
    }

    #[test]
    fn census_small_prefix() {
        // z values for Pell: z(2)=2, z(3)=4, z(5)=3, z(7)=6, z(11)=12,
        // z(13)=7, z(17)=8, z(19)=20, z(23)=22, z(29)=5
        let rec = appearance_census(&pell(), 10, CensusPredicate::ZOdd, &[1, 2]).unwrap();
        assert_eq!(rec.count, 3); // 5, 13, 29
        assert_eq!(rec.checkpoints, vec![(1, "1.25000".into()), (2, "1.35417".into())]);
        // product: 5/4 * 13/12 * 29/28 = 1885/1344 = 1.40253...
        assert!(rec.product_decimal.starts_with("1.40253"));
        let rec = appearance_census(&pell(), 1, CensusPredicate::ZOdd, &[]).unwrap();
        assert_eq!(rec.count, 0);
        let rec = appearance_census(&pell(), 10, CensusPredicate::ZNotDivFour, &[]).unwrap();
        assert_eq!(rec.count, 6); // 2, 5, 7, 13, 23, 29
    }

    #[test]
    fn reciprocal_sums_for_small_indices() {
        let budget = EffortBudget::default();
        for (n, num, den) in [(3u64, 1u32, 4u32), (4, 1, 2), (7, 1, 12)] {
            let t = lucas::term(&pell(), n as i64).unwrap().u.magnitude().clone();
            let f = arith::factor(&t, &budget).unwrap();
            let rec = sum_primitive_reciprocals(&pell(), n, &f).unwrap();
            assert_eq!(rec.sum_num, BigUint::from(num), "n={}", n);
            assert_eq!(rec.sum_den, BigUint::from(den), "n={}", n);
            assert!(rec.holds, "n={}", n);
        }
    }

    #[test]
    fn exponent_bound_on_sample_primes() {
        for &p in &[2u64, 3, 5, 13, 31, 101, 9973] {
            let rec = order_of_appearance(&pell(), p).unwrap();
            assert!(exponent_bound_holds(&pell(), &rec).unwrap(), "p={}", p);
        }
    }
}
