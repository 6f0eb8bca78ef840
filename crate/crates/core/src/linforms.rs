//! Logarithmic heights, the explicit lower-bound coefficient for linear
//! forms in logarithms, certified residual evaluation, and the bisection
//! that turns an inequality `x c1 - c2 < C (1 + ln x)^k` into a concrete
//! integer ceiling.

use crate::real::{Real, RealError, PRECISION_CAP};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinformsError {
    #[error("quadratic descriptor with square discriminant degenerates to rationals")]
    DegenerateQuadratic,
    #[error("no finite bound: the linear coefficient must be positive")]
    NoFiniteBound,
    #[error("invalid instance: {0}")]
    InvalidInstance(&'static str),
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Which root of a quadratic polynomial a descriptor denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    Plus,
    Minus,
}

/// A real algebraic number of degree at most two, given by exact data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraicNumberDesc {
    /// p/q in lowest terms, q >= 1
    Rational { p: BigInt, q: BigInt },
    /// the root (-b +- sqrt(b^2 - 4 a0 c)) / (2 a0) of a0 x^2 + b x + c,
    /// with a0 > 0 and positive non-square discriminant
    Quadratic { a0: i64, b: i64, c: i64, root: RootChoice },
}

impl AlgebraicNumberDesc {
    pub fn rational(p: i64, q: i64) -> Result<Self, LinformsError> {
        Self::rational_big(BigInt::from(p), BigInt::from(q))
    }

    pub fn rational_big(p: BigInt, q: BigInt) -> Result<Self, LinformsError> {
        if q.is_zero() {
            return Err(LinformsError::InvalidInstance("zero denominator"));
        }
        let (mut p, mut q) = if q.is_negative() { (-p, -q) } else { (p, q) };
        let g = p.gcd(&q);
        if !g.is_zero() {
            p /= &g;
            q /= &g;
        }
        Ok(AlgebraicNumberDesc::Rational { p, q })
    }

    pub fn quadratic(a0: i64, b: i64, c: i64, root: RootChoice) -> Result<Self, LinformsError> {
        if a0 <= 0 {
            return Err(LinformsError::InvalidInstance("leading coefficient must be positive"));
        }
        let disc = (b as i128) * (b as i128) - 4 * (a0 as i128) * (c as i128);
        if disc <= 0 {
            return Err(LinformsError::DegenerateQuadratic);
        }
        let root_floor = (disc as u128).isqrt();
        if root_floor * root_floor == disc as u128 {
            return Err(LinformsError::DegenerateQuadratic);
        }
        Ok(AlgebraicNumberDesc::Quadratic { a0, b, c, root })
    }

    /// Dominant root of `x^2 - r x - s`, i.e. the growth constant of the
    /// Lucas pair `(r, s)`.
    pub fn lucas_alpha(pair: &crate::lucas::LucasPair) -> Result<Self, LinformsError> {
        Self::quadratic(1, -pair.r(), -pair.s(), RootChoice::Plus)
    }

    /// Certified enclosure of the denoted value.
    pub fn value(&self, prec: u32) -> Result<Real, LinformsError> {
        match self {
            AlgebraicNumberDesc::Rational { p, q } => Ok(Real::from_ratio(p, q, prec)?),
            AlgebraicNumberDesc::Quadratic { a0, b, c, root } => {
                let disc = BigInt::from(*b) * BigInt::from(*b)
                    - BigInt::from(4) * BigInt::from(*a0) * BigInt::from(*c);
                let sq = Real::from_bigint(&disc).sqrt(prec)?;
                let neg_b = Real::from_i64(-b);
                let num = match root {
                    RootChoice::Plus => neg_b.add(&sq, prec),
                    RootChoice::Minus => neg_b.sub(&sq, prec),
                };
                Ok(num.div(&Real::from_i64(2 * a0), prec)?)
            }
        }
    }
}

/// Absolute logarithmic height.
///
/// For p/q in lowest terms this is ln max(|p|, q). For a quadratic with
/// minimal polynomial a0 x^2 + b x + c it is
/// (ln a0 + sum over both roots of ln max(|root|, 1)) / 2; both roots enter
/// symmetrically, so the choice field does not affect the height.
pub fn log_height(x: &AlgebraicNumberDesc, prec: u32) -> Result<Real, LinformsError> {
    match x {
        AlgebraicNumberDesc::Rational { p, q } => {
            let m = p.magnitude().max(q.magnitude());
            if m.is_one() || m.is_zero() {
                return Ok(Real::zero());
            }
            Ok(Real::from_bigint(&BigInt::from(m.clone())).ln(prec)?)
        }
        AlgebraicNumberDesc::Quadratic { a0, b, c, .. } => {
            let mut work = prec.max(64);
            loop {
                let plus = AlgebraicNumberDesc::Quadratic { a0: *a0, b: *b, c: *c, root: RootChoice::Plus }
                    .value(work)?;
                let minus = AlgebraicNumberDesc::Quadratic { a0: *a0, b: *b, c: *c, root: RootChoice::Minus }
                    .value(work)?;
                match (ln_max_abs_one(&plus, work)?, ln_max_abs_one(&minus, work)?) {
                    (Some(lp), Some(lm)) => {
                        let la0 = if *a0 == 1 {
                            Real::zero()
                        } else {
                            Real::from_i64(*a0).ln(work)?
                        };
                        return Ok(la0.add(&lp, prec).add(&lm, prec).scale2(-1));
                    }
                    _ => {
                        work = work.checked_mul(2).unwrap_or(u32::MAX);
                        if work > PRECISION_CAP {
                            return Err(LinformsError::Real(RealError::PrecisionCapReached(work)));
                        }
                    }
                }
            }
        }
    }
}

/// ln max(|x|, 1), or None when the enclosure cannot separate |x| from 1.
/// The non-square discriminant guarantees |root| != 1, so escalation in the
/// caller terminates.
fn ln_max_abs_one(x: &Real, prec: u32) -> Result<Option<Real>, LinformsError> {
    let a = x.abs();
    match a.cmp_certain(&Real::one()) {
        Some(Ordering::Greater) => Ok(Some(a.ln(prec)?)),
        Some(_) => Ok(Some(Real::zero())),
        None => Ok(None),
    }
}

/// Shape data for the explicit linear-forms lower bound
/// |Lambda| > exp(-C (1 + ln B)).
#[derive(Debug, Clone)]
pub struct MatveevInstance {
    t: u32,
    d: u32,
    b_max: BigUint,
    a: Vec<Real>,
}

impl MatveevInstance {
    /// `t` logarithms over a degree-`d` field, coefficients bounded by
    /// `b_max`, with per-term height majorants `a` (each must certifiably
    /// exceed 0.16).
    pub fn new(t: u32, d: u32, b_max: BigUint, a: Vec<Real>) -> Result<Self, LinformsError> {
        if t == 0 || d == 0 {
            return Err(LinformsError::InvalidInstance("t and d must be at least 1"));
        }
        if t as usize != a.len() {
            return Err(LinformsError::InvalidInstance("need exactly t height majorants"));
        }
        if b_max.is_zero() {
            return Err(LinformsError::InvalidInstance("coefficient bound must be positive"));
        }
        let floor = Real::from_ratio(&BigInt::from(4), &BigInt::from(25), 64)?;
        for ai in &a {
            if ai.cmp_certain(&floor) != Some(Ordering::Greater) {
                return Err(LinformsError::InvalidInstance("every majorant must exceed 0.16"));
            }
        }
        Ok(MatveevInstance { t, d, b_max, a })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn b_max(&self) -> &BigUint {
        &self.b_max
    }
}

/// The coefficient C = 1.4 * 30^(t+3) * t^4.5 * d^2 * (1 + ln d) * prod A_i.
///
/// t^4.5 is computed as t^4 sqrt(t); every factor is an enclosure, so the
/// result carries a certified two-sided error.
pub fn matveev_coefficient(inst: &MatveevInstance, prec: u32) -> Result<Real, LinformsError> {
    let work = prec + 16;
    let t = inst.t;
    let exact = BigInt::from(7)
        * BigInt::from(30u32).pow(t + 3)
        * BigInt::from(t).pow(4)
        * BigInt::from(inst.d).pow(2);
    // the 7 above carries 1.4 = 7/5
    let mut c = Real::from_ratio(&exact, &BigInt::from(5), work)?;
    c = c.mul(&Real::from_i64(t as i64).sqrt(work)?, work);
    if inst.d > 1 {
        let ln_d = Real::from_i64(inst.d as i64).ln(work)?;
        c = c.mul(&Real::one().add(&ln_d, work), work);
    }
    for ai in &inst.a {
        c = c.mul(ai, work);
    }
    Ok(c)
}

/// C (1 + ln B), the full exponent of the lower bound for this instance.
pub fn matveev_exponent(inst: &MatveevInstance, prec: u32) -> Result<Real, LinformsError> {
    let c = matveev_coefficient(inst, prec)?;
    let ln_b = Real::from_bigint(&BigInt::from(inst.b_max.clone())).ln(prec)?;
    Ok(c.mul(&Real::one().add(&ln_b, prec), prec))
}

/// |eta_1^{b_1} ... eta_t^{b_t} - 1| as a certified enclosure.
///
/// Precision escalates until the enclosure excludes zero. When every input
/// is rational the value is computed exactly instead, so a residual that is
/// exactly zero is returned as such rather than failing the escalation.
pub fn lambda_residual(
    etas: &[AlgebraicNumberDesc],
    bs: &[i32],
    precision: u32,
) -> Result<Real, LinformsError> {
    if etas.len() != bs.len() {
        return Err(LinformsError::InvalidInstance("one exponent per base"));
    }
    let all_rational = etas
        .iter()
        .all(|e| matches!(e, AlgebraicNumberDesc::Rational { .. }));
    if all_rational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (e, &b) in etas.iter().zip(bs) {
            let AlgebraicNumberDesc::Rational { p, q } = e else { unreachable!() };
            if p.is_zero() && b < 0 {
                return Err(LinformsError::InvalidInstance("zero base with negative exponent"));
            }
            let (top, bot) = if b >= 0 { (p, q) } else { (q, p) };
            num *= top.pow(b.unsigned_abs());
            den *= bot.pow(b.unsigned_abs());
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let lam = &num - &den; // num/den - 1 over common denominator den
        return Ok(Real::from_ratio(&lam.abs(), &den, precision.max(64))?);
    }

    let mut work = precision.max(64);
    loop {
        let mut prod = Real::one();
        for (e, &b) in etas.iter().zip(bs) {
            let v = e.value(work)?;
            prod = prod.mul(&v.pow_i32(b, work)?, work);
        }
        let lam = prod.sub(&Real::one(), work).abs();
        if !lam.contains_zero() {
            return Ok(lam);
        }
        work = work.checked_mul(2).unwrap_or(u32::MAX);
        if work > PRECISION_CAP {
            return Err(LinformsError::Real(RealError::PrecisionCapReached(work)));
        }
    }
}

/// Reference ceilings the chain recomputation is checked against. Each
/// entry is (stage label, rounded published value); a recomputed stage
/// passes when it lands at or below the ceiling without dropping under
/// half of it.
pub const REFERENCE_BOUNDS: &[(&str, &str)] = &[
    ("companion_stage_coefficient", "9.5e12"),
    ("companion_p_bound_coefficient", "2e13"),
    ("companion_q_stage_coefficient", "4.3e12"),
    ("companion_pq_coefficient", "2e26"),
    ("companion_index_coefficient", "4e39"),
    ("companion_index_ceiling", "5e43"),
    ("totient_index_coefficient", "8e93"),
    ("totient_index_ceiling", "1e111"),
];

pub fn reference_bound(label: &str) -> Option<Real> {
    REFERENCE_BOUNDS
        .iter()
        .find(|(l, _)| *l == label)
        .map(|(_, v)| Real::from_decimal_str(v, 96).expect("table entries parse"))
}

/// Whether `computed` lands in the acceptance window (ceiling/2, ceiling].
pub fn within_reference(computed: &Real, ceiling: &Real) -> bool {
    computed.cmp_certain(ceiling) != Some(Ordering::Greater)
        && computed.cmp_certain(&ceiling.scale2(-1)) == Some(Ordering::Greater)
}

/// Least integer X0 such that `x c1 - c2 < C (1 + ln x)^k` fails for every
/// x >= X0.
///
/// On x >= e^(k-1) the left side grows linearly while
/// (1 + ln x)^k / x decreases, so (x c1 - c2) / (1 + ln x)^k is strictly
/// increasing there (c2 >= 0 makes its contribution increasing too); one
/// certified failure is therefore a failure for everything beyond it.
/// Bisection keeps a holding point and a failing point until they are
/// adjacent, so the result is sharp: the inequality holds at X0 - 1 (or
/// X0 - 1 is below the domain floor) and fails at X0.
pub fn bound_chain_solve(
    c1: &Real,
    c2: &Real,
    big_c: &Real,
    k: u32,
) -> Result<BigUint, LinformsError> {
    if c1.cmp_certain(&Real::zero()) != Some(Ordering::Greater) {
        return Err(LinformsError::NoFiniteBound);
    }
    if c2.cmp_certain(&Real::zero()) == Some(Ordering::Less) {
        return Err(LinformsError::InvalidInstance("constant offset must be nonnegative"));
    }
    if k == 0 {
        return Err(LinformsError::InvalidInstance("logarithm power must be at least 1"));
    }

    // domain floor: least integer with ln x >= k - 1
    let floor = least_with_ln_at_least(k - 1)?;

    // strict inequality holds at x <=> x is NOT yet excluded
    let holds = |x: &BigUint| -> Result<bool, LinformsError> {
        let mut prec = 128;
        loop {
            let xr = Real::from_bigint(&BigInt::from(x.clone()));
            let lhs = xr.mul(c1, prec).sub(c2, prec);
            let rhs = big_c.mul(&Real::one().add(&xr.ln(prec)?, prec).pow_i32(k as i32, prec)?, prec);
            match lhs.cmp_certain(&rhs) {
                Some(Ordering::Less) => return Ok(true),
                Some(_) => return Ok(false),
                None => {
                    prec *= 2;
                    if prec > PRECISION_CAP {
                        return Err(LinformsError::Real(RealError::PrecisionCapReached(prec)));
                    }
                }
            }
        }
    };

    if !holds(&floor)? {
        return Ok(floor);
    }
    // double until failure
    let mut lo = floor.clone();
    let mut hi = &floor * 2u32;
    let mut guard = 0;
    while holds(&hi)? {
        lo = hi.clone();
        hi *= 4u32;
        guard += 1;
        if guard > 4096 {
            return Err(LinformsError::NoFiniteBound);
        }
    }
    // invariant: holds(lo), !holds(hi)
    while &lo + 1u32 < hi {
        let mid = (&lo + &hi) >> 1;
        if holds(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Least positive integer x with ln x >= target (target a small integer),
/// by the same certified bisection.
fn least_with_ln_at_least(target: u32) -> Result<BigUint, LinformsError> {
    if target == 0 {
        return Ok(BigUint::one());
    }
    let t = Real::from_i64(target as i64);
    let ln_ge = |x: &BigUint| -> Result<bool, LinformsError> {
        let mut prec = 96;
        loop {
            let l = Real::from_bigint(&BigInt::from(x.clone())).ln(prec)?;
            match l.cmp_certain(&t) {
                Some(Ordering::Less) => return Ok(false),
                Some(_) => return Ok(true),
                None => {
                    // ln x = integer target only for x = 1, target = 0
                    prec *= 2;
                    if prec > PRECISION_CAP {
                        return Err(LinformsError::Real(RealError::PrecisionCapReached(prec)));
                    }
                }
            }
        }
    };
    let mut lo = BigUint::one(); // ln 1 = 0 < target
    let mut hi = BigUint::from(3u32).pow(target); // 3^t > e^t
    debug_assert!(ln_ge(&hi).unwrap_or(true));
    while &lo + 1u32 < hi {
        let mid = (&lo + &hi) >> 1;
        if ln_ge(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lucas::LucasPair;

    fn dec(s: &str) -> Real {
        Real::from_decimal_str(s, 160).unwrap()
    }

    #[test]
    fn heights_of_rationals() {
        let x = AlgebraicNumberDesc::rational(8, 9).unwrap();
        let h = log_height(&x, 96).unwrap();
        assert_eq!(h.to_decimal(12), dec("2.19722457734").to_decimal(12));
        let ten = AlgebraicNumberDesc::rational(10, 1).unwrap();
        assert!(log_height(&ten, 96)
            .unwrap()
            .to_decimal(10)
            .starts_with("2.302585093"));
        // h(1/x) = h(x)
        for (p, q) in [(3i64, 7i64), (-22, 7), (100, 1)] {
            let a = log_height(&AlgebraicNumberDesc::rational(p, q).unwrap(), 96).unwrap();
            let b = log_height(&AlgebraicNumberDesc::rational(q, p).unwrap(), 96).unwrap();
            assert_eq!(a.to_decimal(15), b.to_decimal(15));
        }
        assert_eq!(log_height(&AlgebraicNumberDesc::rational(1, 1).unwrap(), 96).unwrap().to_decimal(3), "0");
    }

    #[test]
    fn height_of_golden_ratio_is_half_its_log() {
        let alpha = AlgebraicNumberDesc::quadratic(1, -1, -1, RootChoice::Plus).unwrap();
        let h = log_height(&alpha, 128).unwrap();
        let ln_alpha = alpha.value(160).unwrap().ln(160).unwrap();
        assert_eq!(h.scale2(1).to_decimal(18), ln_alpha.to_decimal(18));
        assert!(h.to_decimal(10).starts_with("0.240605912"));
    }

    #[test]
    fn quadratic_height_conjugate_symmetric() {
        for (a0, b, c) in [(1i64, -2, -1), (2, -4, 1), (3, 1, -5)] {
            let plus = AlgebraicNumberDesc::quadratic(a0, b, c, RootChoice::Plus).unwrap();
            let minus = AlgebraicNumberDesc::quadratic(a0, b, c, RootChoice::Minus).unwrap();
            assert_eq!(
                log_height(&plus, 96).unwrap().to_decimal(15),
                log_height(&minus, 96).unwrap().to_decimal(15)
            );
        }
    }

    #[test]
    fn degenerate_quadratics_rejected() {
        assert!(matches!(
            AlgebraicNumberDesc::quadratic(1, -3, 2, RootChoice::Plus),
            Err(LinformsError::DegenerateQuadratic)
        )); // roots 1, 2
        assert!(matches!(
            AlgebraicNumberDesc::quadratic(1, 0, 1, RootChoice::Plus),
            Err(LinformsError::DegenerateQuadratic)
        )); // complex
    }

    #[test]
    fn matveev_reference_instance() {
        // three logarithms over a quadratic field
        let prec = 160;
        let golden = AlgebraicNumberDesc::quadratic(1, -1, -1, RootChoice::Plus).unwrap();
        let ln_alpha = golden.value(prec).unwrap().ln(prec).unwrap();
        let two_ln_10 = Real::from_i64(10).ln(prec).unwrap().scale2(1);
        let two_ln_9 = Real::from_i64(9).ln(prec).unwrap().scale2(1);
        let inst = MatveevInstance::new(
            3,
            2,
            BigUint::from(1000u32),
            vec![ln_alpha, two_ln_10, two_ln_9],
        )
        .unwrap();
        let c = matveev_coefficient(&inst, 128).unwrap();
        let lo = dec("9.44e12");
        let hi = dec("9.45e12");
        assert_eq!(c.cmp_certain(&lo), Some(Ordering::Greater));
        assert_eq!(c.cmp_certain(&hi), Some(Ordering::Less));
        assert!(within_reference(&c, &reference_bound("companion_stage_coefficient").unwrap()));
    }

    #[test]
    fn matveev_linear_in_each_majorant() {
        let a = vec![dec("0.5"), dec("3"), dec("7")];
        let inst = MatveevInstance::new(3, 2, BigUint::one(), a.clone()).unwrap();
        let c1 = matveev_coefficient(&inst, 128).unwrap();
        let mut doubled = a.clone();
        doubled[1] = doubled[1].scale2(1);
        let inst2 = MatveevInstance::new(3, 2, BigUint::one(), doubled).unwrap();
        let c2 = matveev_coefficient(&inst2, 128).unwrap();
        assert_eq!(c1.scale2(1).to_decimal(20), c2.to_decimal(20));
    }

    #[test]
    fn instance_validation() {
        assert!(MatveevInstance::new(1, 1, BigUint::one(), vec![dec("0.1")]).is_err());
        assert!(MatveevInstance::new(2, 1, BigUint::one(), vec![dec("1")]).is_err());
        assert!(MatveevInstance::new(0, 1, BigUint::one(), vec![]).is_err());
    }

    #[test]
    fn residuals() {
        // exponent zero: exactly 1 - 1 = 0
        let two = AlgebraicNumberDesc::rational(2, 1).unwrap();
        let lam = lambda_residual(&[two.clone()], &[0], 64).unwrap();
        assert!(lam.contains_zero());
        assert_eq!(lam.to_decimal(4), "0");

        // |1 - 10 alpha^{-4}|, golden alpha: 10/alpha^4 = 1.4589...
        let golden = AlgebraicNumberDesc::quadratic(1, -1, -1, RootChoice::Plus).unwrap();
        let ten = AlgebraicNumberDesc::rational(10, 1).unwrap();
        let lam = lambda_residual(&[ten, golden.clone()], &[1, -4], 96).unwrap();
        assert!(lam.to_decimal(6).starts_with("0.45898"));

        // |1 - (8/9) 10 alpha^{-4}| nonzero
        let eight_ninths = AlgebraicNumberDesc::rational(8, 9).unwrap();
        let ten = AlgebraicNumberDesc::rational(10, 1).unwrap();
        let lam = lambda_residual(&[eight_ninths, ten, golden], &[1, 1, -4], 96).unwrap();
        assert!(!lam.contains_zero());
        assert!(lam.to_decimal(6).starts_with("0.29687"), "{}", lam.to_decimal(6));
    }

    #[test]
    fn residual_enclosures_nest_with_precision() {
        let golden = AlgebraicNumberDesc::quadratic(1, -1, -1, RootChoice::Plus).unwrap();
        let ten = AlgebraicNumberDesc::rational(10, 1).unwrap();
        let coarse = lambda_residual(&[ten.clone(), golden.clone()], &[1, -4], 80).unwrap();
        let fine = lambda_residual(&[ten, golden], &[1, -4], 160).unwrap();
        assert!(coarse.lo() <= fine.lo() && fine.hi() <= coarse.hi());
    }

    #[test]
    fn chain_solver_small_instance() {
        // x < 10 (1 + ln x): holds at 48 (10 * 4.8712 = 48.712), fails from
        // 49 on (10 * 4.8918 = 48.918 < 49)
        let x0 = bound_chain_solve(&Real::one(), &Real::zero(), &dec("10"), 1).unwrap();
        assert_eq!(x0, BigUint::from(49u32));
    }

    #[test]
    fn chain_solver_rejects_nonpositive_slope() {
        assert!(matches!(
            bound_chain_solve(&Real::zero(), &Real::zero(), &dec("10"), 1),
            Err(LinformsError::NoFiniteBound)
        ));
    }

    #[test]
    fn chain_solver_published_stages() {
        // n < 4e39 (1 + ln n)^2 closes below 5e43
        let x0 = bound_chain_solve(&Real::one(), &Real::zero(), &dec("4e39"), 2).unwrap();
        let got = Real::from_bigint(&BigInt::from(x0));
        let ceiling = reference_bound("companion_index_ceiling").unwrap();
        assert!(within_reference(&got, &ceiling), "{}", got.to_decimal(6));
        // n < 8e93 (1 + ln n)^7 closes below 1e111
        let x0 = bound_chain_solve(&Real::one(), &Real::zero(), &dec("8e93"), 7).unwrap();
        let got = Real::from_bigint(&BigInt::from(x0));
        let ceiling = reference_bound("totient_index_ceiling").unwrap();
        assert!(within_reference(&got, &ceiling), "{}", got.to_decimal(6));
    }

    #[test]
    fn chain_solver_sharp_at_boundary() {
        // direct sharpness replay for the small instance
        let c = dec("10");
        for (x, expect_holds) in [(48u32, true), (49, false), (50, false)] {
            let xr = Real::from_i64(x as i64);
            let rhs = c
                .mul(&Real::one().add(&xr.ln(128).unwrap(), 128), 128)
                .sub(&xr, 128);
            assert_eq!(
                rhs.cmp_certain(&Real::zero()) == Some(Ordering::Greater),
                expect_holds,
                "x={}",
                x
            );
        }
    }

    #[test]
    fn alpha_descriptor_matches_pair() {
        let pell = LucasPair::pell();
        let desc = AlgebraicNumberDesc::lucas_alpha(&pell).unwrap();
        let v = desc.value(128).unwrap();
        assert!(v.to_decimal(12).starts_with("2.41421356237"));
        let h = log_height(&desc, 128).unwrap();
        let ln_alpha = v.ln(160).unwrap();
        assert_eq!(h.scale2(1).to_decimal(16), ln_alpha.to_decimal(16));
    }
}
