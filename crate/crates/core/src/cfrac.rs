//! Continued fractions with certified partial quotients, and the
//! Baker–Davenport reduction step built on top of them.
//!
//! Quotients of an interval-valued input are emitted only while the floor
//! of the remainder enclosure is unambiguous, so every stored quotient is
//! correct for every real inside the input enclosure. Exact rational
//! inputs are expanded by the Euclidean algorithm and always end in the
//! canonical form whose final quotient exceeds 1.

use crate::expr::{ExprError, RealExpr};
use crate::real::{Real, RealError, PRECISION_CAP};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CfracError {
    #[error("enclosure too wide to certify a partial quotient")]
    EnclosureTooWide,
    #[error("nearest integer is ambiguous for this enclosure")]
    AmbiguousHalfway,
    #[error("precision cap of {0} bits reached without certification")]
    PrecisionExhausted(u32),
    #[error("no convergent denominator past 6M gave a positive epsilon ({0} rejected)")]
    NoPositiveEpsilon(usize),
    #[error("expansion terminated before any denominator exceeded 6M")]
    DenominatorsExhausted,
    #[error("invalid reduction instance: {0}")]
    InvalidInstance(&'static str),
    #[error("unreadable reduction instance: {0}")]
    InstanceJson(String),
    #[error(transparent)]
    Real(#[from] RealError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Rounding width that never discards mantissa bits in practice.
const EXACT: u32 = u32::MAX;

/// Default working precision for the reduction step, in bits.
pub const DEFAULT_REDUCTION_PRECISION: u32 = 1024;

/// Give up on a reduction after this many rejected convergents.
const MAX_REJECTIONS: usize = 32;

/// A continued fraction prefix `[a_0; a_1, a_2, ...]`.
///
/// Every stored quotient is certified correct for every real in `x`.
/// `exact` marks a terminated expansion of a rational value, in which
/// case the quotient list determines the value completely and the final
/// quotient exceeds 1 unless the expansion is a single integer term.
#[derive(Debug, Clone)]
pub struct CFExpansion {
    pub x: Real,
    pub quotients: Vec<BigInt>,
    pub certified_count: usize,
    pub exact: bool,
}

impl CFExpansion {
    /// Convergents `p_j / q_j` of the certified quotient prefix.
    pub fn convergents(&self) -> Vec<(BigInt, BigInt)> {
        convergents_of(&self.quotients)
    }
}

/// Convergents of a quotient list via
/// `p_j = a_j p_{j-1} + p_{j-2}`, `q_j = a_j q_{j-1} + q_{j-2}`.
pub fn convergents_of(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(quotients.len());
    let (mut pm2, mut pm1) = (BigInt::zero(), BigInt::one());
    let (mut qm2, mut qm1) = (BigInt::one(), BigInt::zero());
    for a in quotients {
        let p = a * &pm1 + &pm2;
        let q = a * &qm1 + &qm2;
        out.push((p.clone(), q.clone()));
        pm2 = std::mem::replace(&mut pm1, p);
        qm2 = std::mem::replace(&mut qm1, q);
    }
    out
}

/// Terminating expansion of the exact rational `p / q`.
pub fn cf_expand_rational(p: &BigInt, q: &BigInt, max_quotients: usize) -> CFExpansion {
    assert!(!q.is_zero(), "rational expansion needs a nonzero denominator");
    assert!(max_quotients > 0);
    let (mut num, mut den) = if q.is_negative() { (-p, -q) } else { (p.clone(), q.clone()) };
    let mut quotients = Vec::new();
    let mut exact = true;
    loop {
        let (a, r) = num.div_mod_floor(&den);
        quotients.push(a);
        if r.is_zero() {
            break;
        }
        if quotients.len() == max_quotients {
            exact = false;
            break;
        }
        num = den;
        den = r;
    }
    let x = Real::from_ratio(p, q, 192).expect("nonzero denominator");
    let certified_count = quotients.len();
    CFExpansion { x, quotients, certified_count, exact }
}

/// Expand an enclosure, emitting quotients while the remainder's floor is
/// certain. A point enclosure is expanded exactly. Fails only when not
/// even the leading quotient can be certified.
pub fn cf_expand(x: &Real, max_quotients: usize) -> Result<CFExpansion, CfracError> {
    assert!(max_quotients > 0);
    if x.is_point() {
        let (p, q) = x.lo().to_ratio();
        let mut e = cf_expand_rational(&p, &q, max_quotients);
        e.x = x.clone();
        return Ok(e);
    }
    let work = match x.width_log2() {
        Some(w) if w < 0 => ((-w) as u32).saturating_add(64),
        _ => 128,
    };
    let mut quotients = Vec::new();
    let mut r = x.clone();
    while quotients.len() < max_quotients {
        let Some(a) = r.floor_certain() else { break };
        let frac = r.sub(&Real::from_bigint(&a), EXACT);
        debug_assert!(quotients.is_empty() || a.is_positive());
        quotients.push(a);
        if !frac.is_certainly_positive() {
            break;
        }
        let Ok(next) = frac.recip(work) else { break };
        r = next;
    }
    if quotients.is_empty() {
        return Err(CfracError::EnclosureTooWide);
    }
    let certified_count = quotients.len();
    Ok(CFExpansion { x: x.clone(), quotients, certified_count, exact: false })
}

/// Certified distance from `x` to the nearest integer, in `[0, 1/2]`.
pub fn nearest_int_distance(x: &Real) -> Result<Real, CfracError> {
    let half = Real::from_ratio(&BigInt::one(), &BigInt::from(2), 8).expect("2 != 0");
    let shifted = x.add(&half, EXACT);
    let n = shifted.floor_certain().ok_or(CfracError::AmbiguousHalfway)?;
    Ok(x.sub(&Real::from_bigint(&n), EXACT).abs())
}

/// Inputs to one Baker–Davenport reduction: certify that
/// `0 < u*gamma - v + mu < A * B^(-w)` has no integer solutions with
/// `1 <= u <= M` and `w` above the reported bound.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    gamma: RealExpr,
    mu: RealExpr,
    a: RealExpr,
    b: RealExpr,
    m: BigUint,
}

impl ReductionInstance {
    pub fn new(
        gamma: RealExpr,
        mu: RealExpr,
        a: RealExpr,
        b: RealExpr,
        m: BigUint,
    ) -> Result<Self, CfracError> {
        if m.is_zero() {
            return Err(CfracError::InvalidInstance("M must be at least 1"));
        }
        let av = a.eval(192)?;
        if !av.is_certainly_positive() {
            return Err(CfracError::InvalidInstance("A must be positive"));
        }
        let bv = b.eval(192)?;
        if bv.cmp_certain(&Real::one()) != Some(std::cmp::Ordering::Greater) {
            return Err(CfracError::InvalidInstance("B must exceed 1"));
        }
        Ok(ReductionInstance { gamma, mu, a, b, m })
    }

    pub fn gamma(&self) -> &RealExpr {
        &self.gamma
    }

    pub fn mu(&self) -> &RealExpr {
        &self.mu
    }

    pub fn a(&self) -> &RealExpr {
        &self.a
    }

    pub fn b(&self) -> &RealExpr {
        &self.b
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }
}

/// A convergent that was skipped because its epsilon came out nonpositive.
#[derive(Debug, Clone)]
pub struct RejectedConvergent {
    pub convergent_index: usize,
    pub q: BigInt,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct ReductionOutcome {
    /// Denominator used; exceeds `6M`.
    pub q: BigInt,
    /// Certified positive `||mu q|| - M ||gamma q||`.
    pub epsilon: Real,
    pub epsilon_decimal: String,
    /// All solutions of the inequality satisfy `w <= w_bound`.
    pub w_bound: BigInt,
    pub convergent_index: usize,
    /// Working precision, in bits, at which certification succeeded.
    pub precision: u32,
    pub attempts: Vec<RejectedConvergent>,
}

enum AttemptFail {
    Escalate,
    Fatal(CfracError),
}

impl From<ExprError> for AttemptFail {
    fn from(e: ExprError) -> Self {
        AttemptFail::Fatal(e.into())
    }
}

impl From<RealError> for AttemptFail {
    fn from(e: RealError) -> Self {
        AttemptFail::Fatal(e.into())
    }
}

/// Run the reduction, escalating the working precision by doubling from
/// [`DEFAULT_REDUCTION_PRECISION`] up to the global cap when a quotient,
/// a nearest-integer distance, or the sign of epsilon cannot be
/// certified.
pub fn baker_davenport_reduce(inst: &ReductionInstance) -> Result<ReductionOutcome, CfracError> {
    let six_m = BigInt::from(6u32) * BigInt::from(inst.m.clone());
    let rational_gamma = inst.gamma.as_rational();
    let mut prec = DEFAULT_REDUCTION_PRECISION;
    loop {
        match reduction_attempt(inst, prec, &rational_gamma, &six_m) {
            Ok(out) => return Ok(out),
            Err(AttemptFail::Fatal(e)) => return Err(e),
            Err(AttemptFail::Escalate) => {
                prec = prec.saturating_mul(2);
                if prec > PRECISION_CAP {
                    return Err(CfracError::PrecisionExhausted(PRECISION_CAP));
                }
            }
        }
    }
}

fn reduction_attempt(
    inst: &ReductionInstance,
    prec: u32,
    rational_gamma: &Option<(BigInt, BigInt)>,
    six_m: &BigInt,
) -> Result<ReductionOutcome, AttemptFail> {
    let expansion = match rational_gamma {
        Some((p, q)) => cf_expand_rational(p, q, 100_000),
        None => {
            let gamma = inst.gamma.eval(prec)?;
            // Denominators grow at least as fast as Fibonacci numbers, so
            // this many quotients are guaranteed to reach past 6M.
            let max_q = 64 + 2 * six_m.bits() as usize;
            match cf_expand(&gamma, max_q) {
                Ok(e) => e,
                Err(CfracError::EnclosureTooWide) => return Err(AttemptFail::Escalate),
                Err(e) => return Err(AttemptFail::Fatal(e)),
            }
        }
    };
    let gamma = inst.gamma.eval(prec)?;
    let mu = inst.mu.eval(prec)?;
    let m_real = Real::from_bigint(&BigInt::from(inst.m.clone()));
    let mut attempts = Vec::new();
    for (j, (_, q)) in expansion.convergents().into_iter().enumerate() {
        if q <= *six_m {
            continue;
        }
        if attempts.len() >= MAX_REJECTIONS {
            return Err(AttemptFail::Fatal(CfracError::NoPositiveEpsilon(attempts.len())));
        }
        let q_real = Real::from_bigint(&q);
        let dist_gamma = match nearest_int_distance(&gamma.mul(&q_real, EXACT)) {
            Ok(d) => d,
            Err(CfracError::AmbiguousHalfway) => return Err(AttemptFail::Escalate),
            Err(e) => return Err(AttemptFail::Fatal(e)),
        };
        let dist_mu = match nearest_int_distance(&mu.mul(&q_real, EXACT)) {
            Ok(d) => d,
            Err(CfracError::AmbiguousHalfway) => return Err(AttemptFail::Escalate),
            Err(e) => return Err(AttemptFail::Fatal(e)),
        };
        let eps = dist_mu.sub(&m_real.mul(&dist_gamma, EXACT), EXACT);
        if eps.is_certainly_positive() {
            let a = inst.a.eval(prec)?;
            let b = inst.b.eval(prec)?;
            let ratio = a.mul(&q_real, EXACT).div(&eps, prec)?;
            let bound = ratio.ln(prec)?.div(&b.ln(prec)?, prec)?;
            let w_bound = bound.hi().ceil() - 1;
            return Ok(ReductionOutcome {
                q,
                epsilon_decimal: eps.to_decimal(8),
                epsilon: eps,
                w_bound,
                convergent_index: j,
                precision: prec,
                attempts,
            });
        }
        if eps.is_certainly_negative() {
            attempts.push(RejectedConvergent {
                convergent_index: j,
                q,
                reason: "epsilon not positive".to_string(),
            });
            continue;
        }
        return Err(AttemptFail::Escalate);
    }
    if expansion.exact {
        Err(AttemptFail::Fatal(if attempts.is_empty() {
            CfracError::DenominatorsExhausted
        } else {
            CfracError::NoPositiveEpsilon(attempts.len())
        }))
    } else {
        Err(AttemptFail::Escalate)
    }
}

/// Parse an instance from a JSON object with string fields `gamma`, `mu`,
/// `a`, `b` in expression syntax and `m` a decimal integer.
pub fn reduction_instance_from_json(text: &str) -> Result<ReductionInstance, CfracError> {
    let doc: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CfracError::InstanceJson(format!("not valid JSON: {e}")))?;
    let field = |k: &str| -> Result<&str, CfracError> {
        doc.get(k)
            .and_then(serde_json::Value::as_str)
            .ok_or_else(|| CfracError::InstanceJson(format!("needs a string field \"{k}\"")))
    };
    let gamma = crate::expr::parse_real_expr(field("gamma")?)?;
    let mu = crate::expr::parse_real_expr(field("mu")?)?;
    let a = crate::expr::parse_real_expr(field("a")?)?;
    let b = crate::expr::parse_real_expr(field("b")?)?;
    let m: BigUint = field("m")?
        .trim()
        .parse()
        .map_err(|_| CfracError::InstanceJson("field \"m\" must be a decimal integer".into()))?;
    ReductionInstance::new(gamma, mu, a, b, m)
}

/// Outcome as a JSON value with every number a decimal string.
pub fn reduction_outcome_json(outcome: &ReductionOutcome) -> serde_json::Value {
    serde_json::json!({
        "q": outcome.q.to_string(),
        "epsilon": outcome.epsilon_decimal,
        "w_bound": outcome.w_bound.to_string(),
        "convergent_index": outcome.convergent_index.to_string(),
        "precision_bits": outcome.precision.to_string(),
        "attempts": outcome
            .attempts
            .iter()
            .map(|r| {
                serde_json::json!({
                    "convergent_index": r.convergent_index.to_string(),
                    "q": r.q.to_string(),
                    "reason": r.reason,
                })
            })
            .collect::<Vec<_>>(),
    })
}

/// Exhaustively confirm the reduction over `1 <= u <= u_cap` and
/// `w_bound < w <= w_bound + w_window`: no pair may satisfy
/// `0 < u*gamma - v + mu < A * B^(-w)` for any integer `v`. Returns
/// `false` when a violation is certified.
pub fn reduction_brute_check(
    inst: &ReductionInstance,
    outcome: &ReductionOutcome,
    u_cap: u64,
    w_window: u32,
) -> Result<bool, CfracError> {
    let w_base: i64 = (&outcome.w_bound)
        .try_into()
        .map_err(|_| CfracError::InvalidInstance("w_bound too large for a brute check"))?;
    let u_max = std::cmp::min(BigUint::from(u_cap), inst.m.clone());
    let u_max = u64::try_from(u_max).expect("capped by u_cap");
    let mut prec = 768;
    'retry: loop {
        let gamma = inst.gamma.eval(prec)?;
        let mu = inst.mu.eval(prec)?;
        let a = inst.a.eval(prec)?;
        let b = inst.b.eval(prec)?;
        let mut rhs = Vec::with_capacity(w_window as usize);
        for w in 1..=w_window {
            let exp = -(w_base + w as i64);
            let exp = i32::try_from(exp)
                .map_err(|_| CfracError::InvalidInstance("w range too large for a brute check"))?;
            rhs.push(a.mul(&b.pow_i32(exp, prec)?, prec));
        }
        for u in 1..=u_max {
            let t = gamma.mul(&Real::from_bigint(&BigInt::from(u)), EXACT).add(&mu, EXACT);
            let Some(v) = t.floor_certain() else {
                prec *= 2;
                if prec > PRECISION_CAP {
                    return Err(CfracError::PrecisionExhausted(PRECISION_CAP));
                }
                continue 'retry;
            };
            let theta = t.sub(&Real::from_bigint(&v), EXACT);
            if !theta.is_certainly_positive() {
                // The positivity constraint already fails for this u.
                continue;
            }
            for r in &rhs {
                match theta.cmp_certain(r) {
                    Some(std::cmp::Ordering::Greater) => {}
                    Some(_) => return Ok(false),
                    None => {
                        prec *= 2;
                        if prec > PRECISION_CAP {
                            return Err(CfracError::PrecisionExhausted(PRECISION_CAP));
                        }
                        continue 'retry;
                    }
                }
            }
        }
        return Ok(true);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_real_expr;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn quotients_i64(e: &CFExpansion) -> Vec<i64> {
        e.quotients.iter().map(|a| i64::try_from(a).unwrap()).collect()
    }

    #[test]
    fn rational_expansions_are_canonical() {
        let e = cf_expand_rational(&big(1), &big(4), 64);
        assert_eq!(quotients_i64(&e), vec![0, 4]);
        assert!(e.exact);
        let e = cf_expand_rational(&big(7), &big(1), 64);
        assert_eq!(quotients_i64(&e), vec![7]);
        let e = cf_expand_rational(&big(3), &big(2), 64);
        assert_eq!(quotients_i64(&e), vec![1, 2]);
        let e = cf_expand_rational(&big(-1), &big(4), 64);
        assert_eq!(quotients_i64(&e), vec![-1, 1, 3]);
        let e = cf_expand_rational(&big(355), &big(113), 64);
        assert_eq!(quotients_i64(&e), vec![3, 7, 16]);
        let convs = e.convergents();
        assert_eq!(convs[1], (big(22), big(7)));
        assert_eq!(convs[2], (big(355), big(113)));
        // Denominator sign is normalized away.
        let e = cf_expand_rational(&big(1), &big(-4), 64);
        assert_eq!(quotients_i64(&e), vec![-1, 1, 3]);
    }

    #[test]
    fn point_enclosures_expand_exactly() {
        let x = Real::from_ratio(&big(1), &big(4), 64).unwrap();
        let e = cf_expand(&x, 64).unwrap();
        assert_eq!(quotients_i64(&e), vec![0, 4]);
        assert!(e.exact);
        let e = cf_expand(&Real::from_i64(7), 64).unwrap();
        assert_eq!(quotients_i64(&e), vec![7]);
        assert!(e.exact);
        let e = cf_expand(&Real::zero(), 64).unwrap();
        assert_eq!(quotients_i64(&e), vec![0]);
        assert_eq!(e.convergents(), vec![(big(0), big(1))]);
    }

    #[test]
    fn convergents_of_unit_quotients_are_fibonacci_ratios() {
        let ones: Vec<BigInt> = std::iter::repeat_with(|| big(1)).take(5).collect();
        let convs = convergents_of(&ones);
        let want =
            [(1, 1), (2, 1), (3, 2), (5, 3), (8, 5)].map(|(p, q)| (big(p), big(q)));
        assert_eq!(convs, want.to_vec());
    }

    #[test]
    fn sqrt_two_expansion_and_convergents() {
        let x = Real::from_i64(2).sqrt(256).unwrap();
        let e = cf_expand(&x, 24).unwrap();
        assert!(!e.exact);
        assert_eq!(e.certified_count, 24);
        let qs = quotients_i64(&e);
        assert_eq!(qs[0], 1);
        assert!(qs[1..].iter().all(|&a| a == 2));
        let convs = e.convergents();
        let want = [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)];
        for (j, (p, q)) in want.into_iter().enumerate() {
            assert_eq!(convs[j], (big(p), big(q)));
        }
        // Consecutive convergents have determinant +-1.
        for j in 1..convs.len() {
            let det = &convs[j].0 * &convs[j - 1].1 - &convs[j - 1].0 * &convs[j].1;
            let want = if (j - 1) % 2 == 0 { big(1) } else { big(-1) };
            assert_eq!(det, want, "determinant at index {j}");
        }
    }

    #[test]
    fn golden_ratio_quotients_are_all_ones() {
        let phi = parse_real_expr("alpha(1,1)").unwrap().eval(256).unwrap();
        let e = cf_expand(&phi, 40).unwrap();
        assert_eq!(e.certified_count, 40);
        assert!(e.quotients.iter().all(|a| a == &big(1)));
    }

    #[test]
    fn certified_prefix_is_stable_under_precision_doubling() {
        let expr = parse_real_expr("log(10)/log(alpha(1,1))").unwrap();
        let coarse = cf_expand(&expr.eval(320).unwrap(), 1_000).unwrap();
        let fine = cf_expand(&expr.eval(640).unwrap(), 1_000).unwrap();
        assert!(coarse.certified_count >= 40);
        assert!(fine.certified_count > coarse.certified_count);
        assert_eq!(fine.quotients[..coarse.quotients.len()], coarse.quotients[..]);
    }

    #[test]
    fn expansion_of_random_rationals_round_trips() {
        let mut state = 0x5eed_cf2a_c001_d00du64;
        for _ in 0..200 {
            let p = BigInt::from(crate::arith::splitmix64(&mut state) as i64 % (1i64 << 48));
            let q = BigInt::from(crate::arith::splitmix64(&mut state) % (1u64 << 48) + 1);
            let e = cf_expand_rational(&p, &q, 1_000);
            assert!(e.exact);
            // Quotients past the first are positive; the last exceeds 1.
            assert!(e.quotients[1..].iter().all(|a| a.is_positive()));
            if e.quotients.len() > 1 {
                assert!(e.quotients.last().unwrap() > &big(1));
            }
            let convs = e.convergents();
            let (lp, lq) = convs.last().unwrap();
            let g = p.gcd(&q);
            if g.is_zero() {
                continue;
            }
            assert_eq!((lp * &g, lq * &g), (p.clone(), q.clone()));
            for j in 1..convs.len() {
                let det = &convs[j].0 * &convs[j - 1].1 - &convs[j - 1].0 * &convs[j].1;
                let want = if (j - 1) % 2 == 0 { big(1) } else { big(-1) };
                assert_eq!(det, want);
            }
        }
    }

    #[test]
    fn close_rational_approximations_are_convergents() {
        // Any reduced r/s with |sqrt2 - r/s| < 1/(2 s^2) must be a
        // convergent; sweep every denominator up to 500.
        let prec = 256;
        let sqrt2 = Real::from_i64(2).sqrt(prec).unwrap();
        let convs = cf_expand(&sqrt2, 16).unwrap().convergents();
        let mut hits = Vec::new();
        for s in 2i64..=500 {
            let s_real = Real::from_i64(s);
            let scaled = sqrt2.mul(&s_real, EXACT);
            let shifted = scaled.add(&Real::from_ratio(&big(1), &big(2), 8).unwrap(), EXACT);
            let r = shifted.floor_certain().unwrap();
            let frac = Real::from_ratio(&r, &big(s), prec).unwrap();
            let err = sqrt2.sub(&frac, prec).abs();
            let bound = Real::from_ratio(&big(1), &big(2 * s * s), prec).unwrap();
            match err.cmp_certain(&bound) {
                Some(std::cmp::Ordering::Less) => {
                    let g = r.gcd(&big(s));
                    let reduced = (&r / &g, big(s) / &g);
                    assert!(
                        convs.contains(&reduced),
                        "{r}/{s} approximates sqrt2 closely but is not a convergent"
                    );
                    hits.push(s);
                }
                Some(_) => {}
                None => panic!("undecided comparison at s = {s}"),
            }
        }
        for q in [2, 5, 12, 29, 70, 169, 408] {
            assert!(hits.contains(&q), "expected denominator {q} to qualify");
        }
    }

    #[test]
    fn convergents_beat_all_smaller_denominators() {
        let prec = 192;
        let sqrt2 = Real::from_i64(2).sqrt(prec).unwrap();
        let convs = cf_expand(&sqrt2, 10).unwrap().convergents();
        for j in 1..=5 {
            let qj = i64::try_from(&convs[j].1).unwrap();
            let q_next = i64::try_from(&convs[j + 1].1).unwrap();
            let best =
                nearest_int_distance(&sqrt2.mul(&Real::from_i64(qj), EXACT)).unwrap();
            for s in 1..q_next {
                if s == qj {
                    continue;
                }
                let d = nearest_int_distance(&sqrt2.mul(&Real::from_i64(s), EXACT)).unwrap();
                assert_eq!(
                    d.cmp_certain(&best),
                    Some(std::cmp::Ordering::Greater),
                    "denominator {s} should lose to convergent {qj}"
                );
            }
        }
    }

    #[test]
    fn nearest_int_distances() {
        let x = Real::from_decimal_str("0.3", 128).unwrap();
        let d = nearest_int_distance(&x).unwrap();
        let want = Real::from_decimal_str("0.3", 128).unwrap();
        assert!(d.sub(&want, 128).abs().hi() < &crate::real::Dyadic::new(big(1), -100));
        // Exactly halfway is fine for a point input.
        let half = nearest_int_distance(&Real::from_ratio(&big(7), &big(2), 16).unwrap()).unwrap();
        assert!(half.is_point());
        assert_eq!(half.lo(), &crate::real::Dyadic::new(big(1), -1));
        // A wide enclosure straddling a half-integer cannot be resolved.
        let wide = Real::from_endpoints(
            crate::real::Dyadic::new(big(2559), -10),
            crate::real::Dyadic::new(big(2561), -10),
        );
        assert!(matches!(nearest_int_distance(&wide), Err(CfracError::AmbiguousHalfway)));
    }

    fn sqrt2_instance(mu: &str) -> ReductionInstance {
        ReductionInstance::new(
            parse_real_expr("sqrt(2)").unwrap(),
            parse_real_expr(mu).unwrap(),
            parse_real_expr("1").unwrap(),
            parse_real_expr("2").unwrap(),
            BigUint::one(),
        )
        .unwrap()
    }

    #[test]
    fn reduction_on_sqrt_two_instance() {
        let inst = sqrt2_instance("0.3");
        let out = baker_davenport_reduce(&inst).unwrap();
        assert_eq!(out.q, big(12));
        assert_eq!(out.convergent_index, 3);
        assert!(out.attempts.is_empty());
        assert_eq!(out.w_bound, big(5));
        let eps = out.epsilon.to_decimal(6);
        assert_eq!(eps, "0.370563");
        assert!(reduction_brute_check(&inst, &out, 10_000, 64).unwrap());
    }

    #[test]
    fn reduction_advances_past_nonpositive_epsilon() {
        // mu = 1/4 makes ||mu q|| vanish at q = 12, forcing a rejection.
        let inst = sqrt2_instance("1/4");
        let out = baker_davenport_reduce(&inst).unwrap();
        assert_eq!(out.attempts.len(), 1);
        assert_eq!(out.attempts[0].q, big(12));
        assert_eq!(out.attempts[0].convergent_index, 3);
        assert_eq!(out.q, big(29));
        assert_eq!(out.convergent_index, 4);
        assert_eq!(out.w_bound, big(6));
        assert!(reduction_brute_check(&inst, &out, 10_000, 32).unwrap());
    }

    #[test]
    fn reduction_rejects_bad_instances() {
        let r = ReductionInstance::new(
            parse_real_expr("sqrt(2)").unwrap(),
            parse_real_expr("0.3").unwrap(),
            parse_real_expr("-1").unwrap(),
            parse_real_expr("2").unwrap(),
            BigUint::one(),
        );
        assert!(matches!(r, Err(CfracError::InvalidInstance(_))));
        let r = ReductionInstance::new(
            parse_real_expr("sqrt(2)").unwrap(),
            parse_real_expr("0.3").unwrap(),
            parse_real_expr("1").unwrap(),
            parse_real_expr("1").unwrap(),
            BigUint::one(),
        );
        assert!(matches!(r, Err(CfracError::InvalidInstance(_))));
        let r = ReductionInstance::new(
            parse_real_expr("sqrt(2)").unwrap(),
            parse_real_expr("0.3").unwrap(),
            parse_real_expr("1").unwrap(),
            parse_real_expr("2").unwrap(),
            BigUint::zero(),
        );
        assert!(matches!(r, Err(CfracError::InvalidInstance(_))));
    }

    #[test]
    fn rational_gamma_with_no_large_denominator_fails_cleanly() {
        // gamma = 3/2 has convergent denominators 1 and 2 only; with
        // M = 1 nothing exceeds 6.
        let inst = ReductionInstance::new(
            parse_real_expr("3/2").unwrap(),
            parse_real_expr("0.3").unwrap(),
            parse_real_expr("1").unwrap(),
            parse_real_expr("2").unwrap(),
            BigUint::one(),
        )
        .unwrap();
        assert!(matches!(
            baker_davenport_reduce(&inst),
            Err(CfracError::DenominatorsExhausted)
        ));
    }
}
