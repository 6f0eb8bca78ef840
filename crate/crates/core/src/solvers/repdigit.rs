//! Repeated-digit values and the scans built on them.
//!
//! A base-b repdigit is a·(b^m − 1)/(b − 1) with 1 ≤ a < b and m ≥ 1:
//! m copies of the digit a. Zero is not one (no admissible (a, m) yields
//! it), so scans report zero terms in a note instead of listing them.

use super::{with_sequence_params, SolverError, TermStream};
use crate::appearance;
use crate::arith::{self, EffortBudget, Factorization};
use crate::cert::{factorization_json, SolutionCertificate};
use crate::lucas::{self, LucasPair, PeriodRecord, Side};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

const SUPPORTED_MODULI: &[u64] = &[3, 5, 7, 8, 16];

/// `length` copies of `digit` in base `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepdigitForm {
    pub digit: u64,
    pub length: u64,
    pub base: u64,
    pub value: BigUint,
}

impl RepdigitForm {
    pub fn new(digit: u64, length: u64, base: u64) -> Result<Self, SolverError> {
        if base < 2 {
            return Err(SolverError::InvalidBase(base));
        }
        if digit == 0 || digit >= base {
            return Err(SolverError::InvalidDigit(digit));
        }
        if length == 0 {
            return Err(SolverError::InvalidLength);
        }
        let exp = u32::try_from(length).map_err(|_| SolverError::InvalidLength)?;
        let repunit = (BigUint::from(base).pow(exp) - 1u32) / BigUint::from(base - 1);
        Ok(RepdigitForm {
            digit,
            length,
            base,
            value: repunit * BigUint::from(digit),
        })
    }

    /// Read a positive value as a repdigit, if it is one.
    pub fn recognize(value: &BigUint, base: u64) -> Option<RepdigitForm> {
        if base < 2 || value.is_zero() {
            return None;
        }
        let digit = (value % BigUint::from(base)).to_u64().expect("digit < base");
        if digit == 0 {
            return None;
        }
        let form = RepdigitForm::new(digit, digit_count(value, base), base).ok()?;
        (&form.value == value).then_some(form)
    }
}

/// Number of base-`base` digits, exactly: bit-length gives a lower bound
/// on the exponent, then multiplication adjusts upward.
pub(crate) fn digit_count(value: &BigUint, base: u64) -> u64 {
    debug_assert!(base >= 2 && !value.is_zero());
    let b = BigUint::from(base);
    let log2b = 64 - (base - 1).leading_zeros() as u64;
    let mut m = (value.bits() - 1) / log2b;
    let mut p = b.pow(u32::try_from(m).expect("digit count fits u32"));
    loop {
        let next = &p * &b;
        if next > *value {
            break;
        }
        p = next;
        m += 1;
    }
    m + 1
}

/// All indices up to `n_limit` whose side term is a base-10 repdigit.
///
/// Digit test only, no factoring; sensible up to n_limit = 10^5.
pub fn repdigit_scan(
    pair: &LucasPair,
    side: Side,
    n_limit: u64,
) -> Result<SolutionCertificate, SolverError> {
    let cert = SolutionCertificate::new("term_repdigit", n_limit).with_parameter("base", json!(10));
    let mut cert = with_sequence_params(cert, pair, side);
    let mut zero_terms = Vec::new();
    let hundred = BigUint::from(100u32);
    for (n, t) in TermStream::new(pair, side)
        .take(n_limit as usize + 1)
        .enumerate()
    {
        if t.is_zero() {
            zero_terms.push(n as u64);
            continue;
        }
        if t.is_negative() {
            continue;
        }
        let v = t.magnitude();
        // Cheap reject: past one digit, the last two digits must agree.
        let r2 = (v % &hundred).to_u64().expect("residue fits");
        if r2 % 10 == 0 || (*v >= BigUint::from(10u32) && r2 % 10 != r2 / 10) {
            continue;
        }
        if let Some(form) = RepdigitForm::recognize(v, 10) {
            cert.push_solution(
                json!({"n": n as u64, "value": v.to_string()}),
                json!({"digit": form.digit, "length": form.length}),
            );
        }
    }
    if !zero_terms.is_empty() {
        let list: Vec<String> = zero_terms.iter().map(|n| n.to_string()).collect();
        cert.note(format!(
            "term 0 at index {} excluded: no digit 1..=9 repeated m >= 1 times gives 0",
            list.join(", ")
        ));
    }
    Ok(cert)
}

/// Residue bookkeeping for one modulus of an elimination argument.
///
/// The repunit residues (10^m − 1)/9 mod M eventually cycle; after the
/// transient prefix the reachable targets digit·repunit are a fixed set.
/// `eliminates` says that set misses every term residue, which rules out
/// all repdigit lengths past the transient.
#[derive(Debug, Clone)]
pub struct ModulusTrace {
    pub modulus: u64,
    pub term_period: u64,
    pub term_preperiod: u64,
    pub term_cycle: Vec<u64>,
    pub term_classes: Vec<u64>,
    pub repunit_transient: Vec<u64>,
    pub repunit_cycle: Vec<u64>,
    pub target_classes: Vec<u64>,
    pub eliminates: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EliminationVerdict {
    /// One modulus suffices: no term residue is a reachable target.
    Modulus(u64),
    /// No single modulus works, but the joint residue system is empty.
    Combination(Vec<u64>),
    NotEliminated,
}

#[derive(Debug, Clone)]
pub struct EliminationTrace {
    pub digit: u64,
    pub moduli: Vec<ModulusTrace>,
    pub verdict: EliminationVerdict,
    /// First repdigit length the eventual-cycle argument covers; shorter
    /// lengths are left to the direct scan.
    pub length_threshold: u64,
}

impl EliminationTrace {
    pub fn to_json(&self) -> Value {
        let moduli: Vec<Value> = self
            .moduli
            .iter()
            .map(|m| {
                json!({
                    "modulus": m.modulus,
                    "term_period": m.term_period,
                    "term_preperiod": m.term_preperiod,
                    "term_cycle": m.term_cycle,
                    "term_classes": m.term_classes,
                    "repunit_transient": m.repunit_transient,
                    "repunit_cycle": m.repunit_cycle,
                    "target_classes": m.target_classes,
                    "eliminates": m.eliminates,
                })
            })
            .collect();
        let verdict = match &self.verdict {
            EliminationVerdict::Modulus(m) => json!({"eliminated_by_modulus": m}),
            EliminationVerdict::Combination(ms) => json!({"eliminated_by_combination": ms}),
            EliminationVerdict::NotEliminated => json!("not_eliminated"),
        };
        json!({
            "digit": self.digit,
            "moduli": moduli,
            "verdict": verdict,
            "length_threshold": self.length_threshold,
        })
    }
}

/// Repunit orbit mod m under t -> 10t + 1 starting at t = 1:
/// transient prefix, then the eventual cycle.
fn repunit_orbit(m: u64) -> (Vec<u64>, Vec<u64>) {
    let mut vals: Vec<u64> = Vec::new();
    let mut t = 1 % m;
    loop {
        if let Some(i) = vals.iter().position(|&v| v == t) {
            let cycle = vals.split_off(i);
            return (vals, cycle);
        }
        vals.push(t);
        t = (10 * t + 1) % m;
    }
}

/// Repunit residue mod one modulus for a given length (1-indexed).
fn repunit_at(transient: &[u64], cycle: &[u64], length: u64) -> u64 {
    let t = transient.len() as u64;
    if length <= t {
        transient[length as usize - 1]
    } else {
        cycle[((length - t - 1) % cycle.len() as u64) as usize]
    }
}

/// Rule out repdigit terms with a fixed digit by residue arithmetic.
///
/// For each modulus the side residues of the sequence are intersected
/// with the reachable residues of digit·(10^m − 1)/9; if every modulus
/// fails individually, the joint system over one common period of index
/// and length classes is searched for a witness.
pub fn modular_elimination_trace(
    pair: &LucasPair,
    side: Side,
    digit: u64,
    moduli: &[u64],
) -> Result<EliminationTrace, SolverError> {
    if digit == 0 || digit > 9 {
        return Err(SolverError::InvalidDigit(digit));
    }
    let mut traces: Vec<ModulusTrace> = Vec::new();
    let mut records: Vec<PeriodRecord> = Vec::new();
    for &m in moduli {
        if !SUPPORTED_MODULI.contains(&m) {
            return Err(SolverError::UnsupportedModulus(m));
        }
        let rec = lucas::period_mod(pair, m)?;
        let term_cycle = rec.cycle(side).to_vec();
        let mut term_classes = term_cycle.clone();
        term_classes.sort_unstable();
        term_classes.dedup();
        let (transient, cycle) = repunit_orbit(m);
        let mut target_classes: Vec<u64> = cycle.iter().map(|t| (digit * t) % m).collect();
        target_classes.sort_unstable();
        target_classes.dedup();
        let eliminates = target_classes.iter().all(|t| !term_classes.contains(t));
        traces.push(ModulusTrace {
            modulus: m,
            term_period: rec.side_period(side),
            term_preperiod: rec.preperiod,
            term_cycle,
            term_classes,
            repunit_transient: transient,
            repunit_cycle: cycle,
            target_classes,
            eliminates,
        });
        records.push(rec);
    }
    let length_threshold = traces
        .iter()
        .map(|t| t.repunit_transient.len() as u64 + 1)
        .max()
        .unwrap_or(1);

    if let Some(t) = traces.iter().find(|t| t.eliminates) {
        let modulus = t.modulus;
        return Ok(EliminationTrace {
            digit,
            moduli: traces,
            verdict: EliminationVerdict::Modulus(modulus),
            length_threshold,
        });
    }

    let verdict = if traces.len() < 2 {
        EliminationVerdict::NotEliminated
    } else {
        let n_start = records.iter().map(|r| r.preperiod).max().unwrap();
        let n_span = traces.iter().fold(1u64, |acc, t| acc.lcm(&t.term_period));
        let m_span = traces
            .iter()
            .fold(1u64, |acc, t| acc.lcm(&(t.repunit_cycle.len() as u64)));
        let mut witness = false;
        'lengths: for dm in 0..m_span {
            let length = length_threshold + dm;
            for dn in 0..n_span {
                let n = n_start + dn;
                let hit = traces.iter().zip(&records).all(|(t, rec)| {
                    let target =
                        (digit * repunit_at(&t.repunit_transient, &t.repunit_cycle, length))
                            % t.modulus;
                    rec.residue_at(side, n) == target
                });
                if hit {
                    witness = true;
                    break 'lengths;
                }
            }
        }
        if witness {
            EliminationVerdict::NotEliminated
        } else {
            EliminationVerdict::Combination(traces.iter().map(|t| t.modulus).collect())
        }
    };
    Ok(EliminationTrace {
        digit,
        moduli: traces,
        verdict,
        length_threshold,
    })
}

/// Shape test for a large-index repdigit totient: the value must be the
/// digit 8 repeated an even number of times, at an index that is a prime
/// p or its square, where additionally p^3 divides 10^(p−1) − 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureCheck {
    pub digit_is_eight: bool,
    pub length_even: bool,
    pub index_prime_base: Option<u64>,
    pub cube_divides: bool,
    pub all_hold: bool,
}

impl StructureCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "digit_is_eight": self.digit_is_eight,
            "length_even": self.length_even,
            "index_prime_base": self.index_prime_base,
            "cube_divides": self.cube_divides,
            "all_hold": self.all_hold,
        })
    }
}

pub fn structure_check(digit: u64, length: u64, n: u64) -> StructureCheck {
    let digit_is_eight = digit == 8;
    let length_even = length % 2 == 0;
    let index_prime_base = if arith::is_prime_u64(n) {
        Some(n)
    } else {
        let r = n.isqrt();
        (r * r == n && arith::is_prime_u64(r)).then_some(r)
    };
    let cube_divides = index_prime_base.is_some_and(|p| {
        let cube = BigUint::from(p).pow(3);
        BigUint::from(10u32).modpow(&BigUint::from(p - 1), &cube).is_one()
    });
    StructureCheck {
        digit_is_eight,
        length_even,
        index_prime_base,
        cube_divides,
        all_hold: digit_is_eight && length_even && cube_divides,
    }
}

/// A certified divisor of φ(N) from a possibly partial factorization:
/// every known prime p with exponent e contributes p^(e−1)·(p−1), and an
/// unfactored cofactor coprime to the known primes is odd and exceeds 1,
/// so it contributes at least one more even factor.
pub(crate) fn certified_phi_divisor(f: &Factorization) -> BigUint {
    let mut acc = BigUint::one();
    for (p, e) in f.factors() {
        acc *= p.pow(e - 1) * (p - 1u32);
    }
    if let Some(c) = f.cofactor() {
        if f.factors().iter().all(|(p, _)| !(c % p).is_zero()) {
            acc *= 2u32;
        }
    }
    acc
}

/// Indices n ≤ n_limit with φ(v_n) a base-10 repdigit, for the (1, 1)
/// companion sequence 2, 1, 3, 4, 7, 11, ...
///
/// Terms whose factorization stays incomplete within budget are decided
/// anyway when no repdigit candidate is divisible by the certified
/// totient divisor; the rest are listed as uncovered.
pub fn phi_repdigit_scan(
    n_limit: u64,
    budget: &EffortBudget,
) -> Result<SolutionCertificate, SolverError> {
    let pair = LucasPair::fibonacci();
    let side = Side::Companion;
    let cert =
        SolutionCertificate::new("phi_term_repdigit", n_limit).with_parameter("base", json!(10));
    let mut cert = with_sequence_params(cert, &pair, side);

    let mut factored: Vec<(u64, Factorization)> = Vec::new();
    factored.push((0, arith::factor(&BigUint::from(2u32), budget)?));
    factored.extend(appearance::factor_terms_with_budget(
        &pair, side, n_limit, budget,
    )?);

    let mut ruled_out_partial = 0u64;
    for (n, f) in &factored {
        if f.is_complete() {
            let phi = arith::euler_phi(f)?;
            if let Some(form) = RepdigitForm::recognize(&phi, 10) {
                let mut evidence = json!({
                    "term": f.n().to_string(),
                    "factorization": factorization_json(f),
                    "phi": phi.to_string(),
                });
                if *n > 6 {
                    evidence["structure"] =
                        structure_check(form.digit, form.length, *n).to_json();
                }
                cert.push_solution(
                    json!({"n": n, "digit": form.digit, "length": form.length}),
                    evidence,
                );
            }
            continue;
        }
        let divisor = certified_phi_divisor(f);
        let digits = digit_count(f.n(), 10);
        let mut repunit = BigUint::zero();
        let mut alive = false;
        'candidates: for _ in 1..=digits {
            repunit = repunit * 10u32 + 1u32;
            for a in 1u32..=9 {
                if (&repunit * a % &divisor).is_zero() {
                    alive = true;
                    break 'candidates;
                }
            }
        }
        if alive {
            cert.mark_uncovered(json!(n));
        } else {
            ruled_out_partial += 1;
        }
    }
    if ruled_out_partial > 0 {
        cert.note(format!(
            "{} terms with incomplete factorizations ruled out: no repdigit up to the term's \
             size is divisible by the certified totient divisor",
            ruled_out_partial
        ));
    }
    Ok(cert)
}
