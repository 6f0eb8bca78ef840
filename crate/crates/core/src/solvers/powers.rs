//! Squares and higher powers among terms and repunits.

use super::TermStream;
use crate::arith;
use crate::cert::SolutionCertificate;
use crate::lucas::{LucasPair, Side};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::json;

/// Repunits (x^n − 1)/(x − 1) that are perfect squares, over
/// 2 ≤ x ≤ x_limit and 3 ≤ n ≤ n_limit.
pub fn ljunggren_check(x_limit: u64, n_limit: u64) -> SolutionCertificate {
    let mut cert = SolutionCertificate::new("repunit_square", n_limit)
        .with_parameter("x_limit", json!(x_limit));
    for x in 2..=x_limit {
        let mut rep = BigUint::one();
        for n in 2..=n_limit {
            rep = rep * x + 1u32;
            if n < 3 {
                continue;
            }
            let root = rep.sqrt();
            if &root * &root == rep {
                cert.push_solution(
                    json!([x, n]),
                    json!({"value": rep.to_string(), "root": root.to_string()}),
                );
            }
        }
    }
    cert
}

/// Index pairs m < n ≤ n_limit whose terms multiply to a perfect square.
pub fn square_product_scan(pair: &LucasPair, side: Side, n_limit: u64) -> Vec<(u64, u64)> {
    let terms: Vec<BigUint> = TermStream::new(pair, side)
        .take(n_limit as usize + 1)
        .map(|t| t.magnitude().clone())
        .collect();
    let mut out = Vec::new();
    for m in 0..terms.len() {
        if terms[m].is_zero() {
            continue;
        }
        for n in m + 1..terms.len() {
            if terms[n].is_zero() {
                continue;
            }
            let prod = &terms[m] * &terms[n];
            let root = prod.sqrt();
            if &root * &root == prod {
                out.push((m as u64, n as u64));
            }
        }
    }
    out
}

/// Terms equal to y^k with k ≥ 2. A term equal to 1 is a power for every
/// exponent at once and is listed as (n, 1, 0).
pub fn perfect_power_scan(pair: &LucasPair, side: Side, n_limit: u64) -> Vec<(u64, BigUint, u32)> {
    let mut out = Vec::new();
    for (n, t) in TermStream::new(pair, side)
        .take(n_limit as usize + 1)
        .enumerate()
    {
        let v = t.magnitude();
        if v.is_zero() {
            continue;
        }
        if v.is_one() {
            out.push((n as u64, BigUint::one(), 0));
            continue;
        }
        if let Some((y, k)) = arith::perfect_power(v) {
            out.push((n as u64, y, k));
        }
    }
    out
}
