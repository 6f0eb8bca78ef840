//! Totient equations over sequence terms and power forms.

use super::{with_sequence_params, SolverError};
use crate::appearance;
use crate::arith::{self, ArithError, EffortBudget, Factorization};
use crate::cert::{factorization_json, SolutionCertificate};
use crate::lucas::{self, LucasPair, Side};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::json;
use std::collections::BTreeMap;

/// Indices n ≤ n_limit with φ(u_n) again a term of the same sequence.
///
/// Every u_n must factor completely, so keep n_limit at 120 or below;
/// indices the budget cannot finish are listed uncovered.
pub fn phi_fixed_point_scan(
    pair: &LucasPair,
    n_limit: u64,
    budget: &EffortBudget,
) -> Result<SolutionCertificate, SolverError> {
    let cert = SolutionCertificate::new("phi_fixed_point", n_limit);
    let mut cert = with_sequence_params(cert, pair, Side::Fundamental);
    cert.note("index 0 skipped: the term is 0 and the totient of 0 is undefined");
    for (n, f) in appearance::factor_terms_with_budget(pair, Side::Fundamental, n_limit, budget)? {
        if !f.is_complete() {
            cert.mark_uncovered(json!(n));
            continue;
        }
        let phi = arith::euler_phi(&f)?;
        if let Some(m) = lucas::is_member(pair, &phi) {
            cert.push_solution(
                json!([n, m]),
                json!({
                    "term": f.n().to_string(),
                    "factorization": factorization_json(&f),
                    "phi": phi.to_string(),
                }),
            );
        }
    }
    Ok(cert)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerForm {
    /// b^m − 1
    Full,
    /// (b^m − 1)/(b − 1)
    Repunit,
}

impl PowerForm {
    pub fn label(&self) -> &'static str {
        match self {
            PowerForm::Full => "full",
            PowerForm::Repunit => "repunit",
        }
    }

    fn value(&self, base: u64, m: u32) -> BigUint {
        let raw = BigUint::from(base).pow(m) - 1u32;
        match self {
            PowerForm::Full => raw,
            PowerForm::Repunit => raw / BigUint::from(base - 1),
        }
    }
}

/// Largest n with w = x^n, if any; w = 1 gives no exponent (n ≥ 1 only).
fn power_exponent(w: &BigUint, x: u64) -> Option<u64> {
    let xb = BigUint::from(x);
    let mut w = w.clone();
    let mut n = 0u64;
    while w > BigUint::one() {
        let (q, r) = w.div_rem(&xb);
        if !r.is_zero() {
            return None;
        }
        w = q;
        n += 1;
    }
    (n >= 1).then_some(n)
}

/// Solve φ(V(X, m)) = V(X, n) where V(X, k) is X^k − 1 or its repunit
/// quotient (X^k − 1)/(X − 1).
///
/// With x_limit < 2 the single base X = `base` is scanned deeply in m;
/// otherwise X sweeps 2..=x_limit. The matching n is read off the
/// totient, which pins it uniquely. Solutions are (X, m, n) triples.
pub fn phi_power_form_scan(
    base: u64,
    x_limit: u64,
    m_limit: u32,
    form: PowerForm,
    budget: &EffortBudget,
) -> Result<SolutionCertificate, SolverError> {
    if base < 2 {
        return Err(SolverError::InvalidBase(base));
    }
    let mut cert = SolutionCertificate::new("phi_power_form", u64::from(m_limit))
        .with_parameter("base", json!(base))
        .with_parameter("x_limit", json!(x_limit))
        .with_parameter("m_limit", json!(m_limit))
        .with_parameter("form", json!(form.label()));
    let bases: Vec<u64> = if x_limit >= 2 {
        (2..=x_limit).collect()
    } else {
        vec![base]
    };
    for x in bases {
        // Primes found at smaller m divide the value again at multiples
        // of m; peeling them first leaves only the new part to split.
        let mut known: Vec<BigUint> = Vec::new();
        for m in 1..=m_limit {
            let v = form.value(x, m);
            let mut rest = v.clone();
            let mut factors: BTreeMap<BigUint, u32> = BTreeMap::new();
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
                    Err(e) => return Err(e.into()),
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
            let f = Factorization::assemble(v.clone(), factors.into_iter().collect(), cofactor);
            if !f.is_complete() {
                cert.mark_uncovered(json!([x, m]));
                continue;
            }
            let phi = arith::euler_phi(&f)?;
            let target = match form {
                PowerForm::Full => &phi + 1u32,
                PowerForm::Repunit => &phi * BigUint::from(x - 1) + 1u32,
            };
            if let Some(n) = power_exponent(&target, x) {
                cert.push_solution(
                    json!([x, m, n]),
                    json!({
                        "value": v.to_string(),
                        "factorization": factorization_json(&f),
                        "phi": phi.to_string(),
                    }),
                );
            }
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(cert: &SolutionCertificate) -> Vec<Vec<u64>> {
        cert.solutions
            .iter()
            .map(|s| {
                s.as_array()
                    .unwrap()
                    .iter()
                    .map(|v| v.as_u64().unwrap())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn pell_totients_fix_only_the_first_two_indices() {
        let cert = phi_fixed_point_scan(&LucasPair::pell(), 60, &EffortBudget::new(1 << 22)).unwrap();
        assert!(cert.exhaustive, "uncovered: {:?}", cert.uncovered);
        assert_eq!(pairs(&cert), vec![vec![1, 1], vec![2, 1]]);
    }

    #[test]
    fn fibonacci_totient_fixed_points() {
        let cert =
            phi_fixed_point_scan(&LucasPair::fibonacci(), 100, &EffortBudget::new(1 << 22))
                .unwrap();
        assert!(cert.exhaustive, "uncovered: {:?}", cert.uncovered);
        assert_eq!(
            pairs(&cert),
            vec![vec![1, 1], vec![2, 1], vec![3, 1], vec![4, 3]]
        );
        for e in &cert.evidence {
            let phi: u64 = e["phi"].as_str().unwrap().parse().unwrap();
            assert!(phi == 1 || phi == 2);
        }
    }

    #[test]
    fn zero_limit_scan_is_empty_and_exhaustive() {
        let cert = phi_fixed_point_scan(&LucasPair::pell(), 0, &EffortBudget::new(1)).unwrap();
        assert!(cert.exhaustive);
        assert!(cert.solutions.is_empty());
        assert!(cert.notes.iter().any(|n| n.contains("index 0")));
    }

    #[test]
    fn base_five_full_form_has_no_small_solution() {
        let cert =
            phi_power_form_scan(5, 0, 16, PowerForm::Full, &EffortBudget::new(1 << 22)).unwrap();
        assert!(cert.exhaustive, "uncovered: {:?}", cert.uncovered);
        assert!(cert.solutions.is_empty());
    }

    #[test]
    fn repunit_form_length_one_is_always_solved() {
        let cert =
            phi_power_form_scan(10, 30, 1, PowerForm::Repunit, &EffortBudget::new(1 << 16))
                .unwrap();
        assert!(cert.exhaustive);
        let got = pairs(&cert);
        assert_eq!(got.len(), 29);
        for (i, sol) in got.iter().enumerate() {
            assert_eq!(sol, &vec![i as u64 + 2, 1, 1]);
        }
    }

    #[test]
    fn full_form_sweep_finds_only_the_degenerate_base_two() {
        let cert =
            phi_power_form_scan(10, 20, 4, PowerForm::Full, &EffortBudget::new(1 << 18)).unwrap();
        assert!(cert.exhaustive);
        assert_eq!(pairs(&cert), vec![vec![2, 1, 1]]);
    }
}
