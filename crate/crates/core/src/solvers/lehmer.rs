//! Terms with totient dividing term − 1, and the prime sweeps that
//! support those searches.

use super::{with_sequence_params, SolverError, TermStream};
use crate::appearance::{self, AppearanceError};
use crate::arith::{self, ArithError, EffortBudget};
use crate::cert::{factorization_json, SolutionCertificate};
use crate::lucas::{LucasPair, Side};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde_json::json;

/// Fewest distinct prime factors any composite N with φ(N) | N − 1 can
/// have, by the published lower bound. Such N is odd (an even composite
/// has even φ but odd N − 1) and squarefree (p² | N puts p in both φ(N)
/// and N − 1), so every prime factor contributes an even p − 1 to φ(N)
/// and 2^15 must divide N − 1.
const LEHMER_MIN_OMEGA: u32 = 15;

const PRIME_BLOCK: u64 = 1 << 16;

/// Indices n ≤ n_limit whose side term is composite with φ | term − 1.
///
/// Almost every index falls to a cheap exclusion (unit, prime, parity,
/// or the 2-adic bound); only survivors are factored, so the budget is
/// rarely touched.
pub fn lehmer_scan(
    pair: &LucasPair,
    side: Side,
    n_limit: u64,
    budget: &EffortBudget,
) -> Result<SolutionCertificate, SolverError> {
    let cert = SolutionCertificate::new("lehmer_property", n_limit);
    let mut cert = with_sequence_params(cert, pair, side);
    let mut units = 0u64;
    let mut primes = 0u64;
    let mut even_composites = 0u64;
    let mut low_two_adic = 0u64;
    let mut direct = 0u64;
    for (n, t) in TermStream::new(pair, side)
        .take(n_limit as usize + 1)
        .enumerate()
    {
        let v = t.magnitude();
        if *v <= BigUint::one() {
            units += 1;
            continue;
        }
        if arith::is_probable_prime(v) {
            primes += 1;
            continue;
        }
        if v.is_even() {
            even_composites += 1;
            continue;
        }
        let nu2 = (v - 1u32).trailing_zeros().expect("v > 1");
        if nu2 < u64::from(LEHMER_MIN_OMEGA) {
            low_two_adic += 1;
            continue;
        }
        match arith::factor(v, budget) {
            Ok(f) => {
                direct += 1;
                if arith::lehmer_property(&f)? {
                    cert.push_solution(
                        json!(n as u64),
                        json!({
                            "term": v.to_string(),
                            "factorization": factorization_json(&f),
                        }),
                    );
                }
            }
            Err(ArithError::EffortExceeded(_)) => cert.mark_uncovered(json!(n as u64)),
            Err(e) => return Err(e.into()),
        }
    }
    cert.note(format!(
        "{} units or zeros, {} primes, {} even composites excluded by parity, \
         {} odd composites excluded because 2^{} does not divide term - 1, {} factored directly",
        units, primes, even_composites, low_two_adic, LEHMER_MIN_OMEGA, direct
    ));
    Ok(cert)
}

fn prime_blocks(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut blocks = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = hi.min(start + PRIME_BLOCK - 1);
        blocks.push((start, end));
        start = end + 1;
    }
    blocks
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn modpow_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

fn divides_power_residue(base: u64, p: u64, k: u32) -> bool {
    match p.checked_pow(k) {
        Some(m) => modpow_u64(base, p - 1, m) == 1,
        None => {
            let m = BigUint::from(p).pow(k);
            BigUint::from(base)
                .modpow(&BigUint::from(p - 1), &m)
                .is_one()
        }
    }
}

/// Odd primes p ≤ p_limit, p ∤ base, with p^k dividing base^(p−1) − 1.
pub fn wieferich_scan(base: u64, p_limit: u64, k: u32) -> Vec<u64> {
    if p_limit < 3 {
        return Vec::new();
    }
    let mut hits: Vec<u64> = prime_blocks(3, p_limit)
        .par_iter()
        .flat_map_iter(|&(lo, hi)| {
            arith::primes_in_range(lo, hi)
                .into_iter()
                .filter(|&p| base % p != 0 && divides_power_residue(base, p, k))
                .collect::<Vec<_>>()
        })
        .collect();
    hits.sort_unstable();
    hits
}

/// Primes r ≤ r_limit dividing their first Pell multiple more than once.
pub fn pell_exponent_exception_scan(r_limit: u64) -> Result<Vec<(u64, u32)>, SolverError> {
    if r_limit < 2 {
        return Ok(Vec::new());
    }
    let pair = LucasPair::pell();
    let gathered: Result<Vec<Vec<(u64, u32)>>, SolverError> = prime_blocks(2, r_limit)
        .par_iter()
        .map(|&(lo, hi)| {
            let mut out = Vec::new();
            for p in arith::primes_in_range(lo, hi) {
                match appearance::order_of_appearance(&pair, p) {
                    Ok(rec) if rec.e >= 2 => out.push((p, rec.e)),
                    Ok(_) => {}
                    Err(AppearanceError::UnsupportedPrime(_)) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(out)
        })
        .collect();
    let mut flat: Vec<(u64, u32)> = gathered?.into_iter().flatten().collect();
    flat.sort_unstable();
    Ok(flat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pell_terms_have_no_lehmer_composites() {
        let cert =
            lehmer_scan(&LucasPair::pell(), Side::Fundamental, 60, &EffortBudget::new(1 << 16))
                .unwrap();
        assert!(cert.exhaustive);
        assert!(cert.solutions.is_empty());
        assert!(cert.notes[0].contains("2^15"));
    }

    #[test]
    fn lucas_companion_terms_have_no_lehmer_composites() {
        let cert = lehmer_scan(
            &LucasPair::fibonacci(),
            Side::Companion,
            40,
            &EffortBudget::new(1 << 16),
        )
        .unwrap();
        assert!(cert.exhaustive);
        assert!(cert.solutions.is_empty());
    }

    #[test]
    fn base_ten_power_residue_primes() {
        assert_eq!(wieferich_scan(10, 10_000, 2), vec![3, 487]);
        assert_eq!(wieferich_scan(10, 10_000, 3), Vec::<u64>::new());
    }

    #[test]
    fn base_five_power_residue_primes() {
        assert_eq!(wieferich_scan(5, 10_000, 2), Vec::<u64>::new());
        assert_eq!(wieferich_scan(5, 30_000, 2), vec![20_771]);
    }

    #[test]
    fn cube_hits_are_square_hits() {
        for base in [3u64, 7, 10, 19] {
            let squares = wieferich_scan(base, 5_000, 2);
            let cubes = wieferich_scan(base, 5_000, 3);
            assert!(cubes.iter().all(|p| squares.contains(p)), "base {}", base);
        }
        // 3^10 = 59049 ≡ 1 (mod 121), the classic base-3 example.
        assert!(wieferich_scan(3, 2_000, 2).contains(&11));
    }

    #[test]
    fn small_pell_exponent_exceptions() {
        assert_eq!(pell_exponent_exception_scan(12).unwrap(), vec![]);
        assert_eq!(
            pell_exponent_exception_scan(100).unwrap(),
            vec![(13, 2), (31, 2)]
        );
    }
}
