//! Certified arbitrary-precision real arithmetic on dyadic intervals.
//!
//! A value is enclosed by `[lo, hi]` where both endpoints are dyadic
//! rationals `mant * 2^exp`. Every operation rounds the lower endpoint
//! toward minus infinity and the upper endpoint toward plus infinity, so
//! results carry a rigorous error bound at all times. Logarithms are
//! computed by argument reduction to `[1, 2)` followed by the `atanh`
//! series, with an explicit tail bound added to the enclosure.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum RealError {
    #[error("logarithm of an enclosure that is not strictly positive")]
    LogNonPositive,
    #[error("square root of an enclosure containing negative values")]
    SqrtNegative,
    #[error("division by an enclosure containing zero")]
    DivByZero,
    #[error("enclosure too wide for the requested operation")]
    EnclosureTooWide,
    #[error("working precision cap of {0} bits reached without certification")]
    PrecisionCapReached(u32),
    #[error("invalid decimal literal: {0}")]
    BadDecimal(String),
}

/// Hard ceiling for automatic precision escalation loops.
pub const PRECISION_CAP: u32 = 16_384;

/// A dyadic rational `mant * 2^exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }.normalized()
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Dyadic { mant: n.clone(), exp: 0 }.normalized()
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic { mant: BigInt::from(n), exp: 0 }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Position of the most significant bit: value lies in
    /// `[2^(msb-1), 2^msb)` for positive values. Zero returns `i64::MIN`.
    fn msb(&self) -> i64 {
        if self.mant.is_zero() {
            return i64::MIN;
        }
        self.mant.bits() as i64 + self.exp
    }

    fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &Dyadic) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (num_bigint::Sign::Minus, num_bigint::Sign::NoSign | num_bigint::Sign::Plus) => {
                return if other.mant.is_zero() && self.mant.is_zero() {
                    Ordering::Equal
                } else {
                    Ordering::Less
                }
            }
            (num_bigint::Sign::NoSign, num_bigint::Sign::Plus) => return Ordering::Less,
            (num_bigint::Sign::NoSign, num_bigint::Sign::Minus) => return Ordering::Greater,
            (num_bigint::Sign::Plus, num_bigint::Sign::NoSign | num_bigint::Sign::Minus) => {
                return Ordering::Greater
            }
            (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        // Same nonzero sign: compare magnitudes via msb first to avoid
        // gigantic alignment shifts.
        let (a, b) = (self.msb(), other.msb());
        if a != b {
            let mag = if a < b { Ordering::Less } else { Ordering::Greater };
            return if self.mant.is_positive() { mag } else { mag.reverse() };
        }
        let shift = self.exp - other.exp;
        if shift >= 0 {
            (&self.mant << shift as u64).cmp(&other.mant)
        } else {
            self.mant.cmp(&(&other.mant << (-shift) as u64))
        }
    }

    /// Exact sum. Alignment shift is bounded by the operands' exponent gap.
    fn add_exact(&self, other: &Dyadic) -> Dyadic {
        if self.mant.is_zero() {
            return other.clone();
        }
        if other.mant.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as u64;
        let b = &other.mant << (other.exp - exp) as u64;
        Dyadic { mant: a + b, exp }.normalized()
    }

    fn mul_exact(&self, other: &Dyadic) -> Dyadic {
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }.normalized()
    }

    /// Round toward minus infinity keeping `prec` significant bits.
    pub fn round_down(&self, prec: u32) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        // BigInt shr rounds toward minus infinity, which is exactly the
        // directed rounding we need here.
        Dyadic { mant: &self.mant >> shift, exp: self.exp + shift as i64 }.normalized()
    }

    /// Round toward plus infinity keeping `prec` significant bits.
    pub fn round_up(&self, prec: u32) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let down = &self.mant >> shift;
        let back = &down << shift;
        let mant = if back == self.mant { down } else { down + 1 };
        Dyadic { mant, exp: self.exp + shift as i64 }.normalized()
    }

    fn round_dir(&self, prec: u32, up: bool) -> Dyadic {
        if up {
            self.round_up(prec)
        } else {
            self.round_down(prec)
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    /// Exact value as a reduced fraction; the denominator is a power of two.
    pub fn to_ratio(&self) -> (BigInt, BigInt) {
        if self.exp >= 0 {
            (&self.mant << self.exp as u64, BigInt::one())
        } else {
            (self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Directed quotient `self / other` with at least `prec` significant bits.
    fn div_dir(&self, other: &Dyadic, prec: u32, up: bool) -> Dyadic {
        assert!(!other.mant.is_zero(), "dyadic division by zero");
        if self.mant.is_zero() {
            return Dyadic::zero();
        }
        let want = prec as i64 + 2;
        let have = self.mant.bits() as i64 - other.mant.bits() as i64;
        let s = (want - have).max(0) as u64;
        let num = &self.mant << s;
        let q = if up { num.div_ceil(&other.mant) } else { num.div_floor(&other.mant) };
        Dyadic { mant: q, exp: self.exp - s as i64 - other.exp }.normalized()
    }

    /// Directed square root; `self` must be nonnegative.
    fn sqrt_dir(&self, prec: u32, up: bool) -> Dyadic {
        assert!(!self.mant.is_negative(), "dyadic sqrt of negative value");
        if self.mant.is_zero() {
            return Dyadic::zero();
        }
        let want = 2 * prec as i64 + 4;
        let mut s = (want - self.mant.bits() as i64).max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let scaled = &self.mant << s as u64;
        let root = scaled.sqrt();
        let exp = (self.exp - s) / 2;
        if up {
            let exact = &root * &root == scaled;
            let mant = if exact { root } else { root + 1 };
            Dyadic { mant, exp }.normalized()
        } else {
            Dyadic { mant: root, exp }.normalized()
        }
    }

    /// Midpoint decimal rendering with `sig` significant digits, round half up.
    fn to_decimal(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.mant.is_zero() {
            return "0".to_string();
        }
        let neg = self.mant.is_negative();
        let mag = Dyadic { mant: self.mant.abs(), exp: self.exp };
        // Decimal exponent of the leading digit: 10^dex <= mag < 10^(dex+1).
        let mut dex = ((mag.msb() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        loop {
            let cmp_lo = cmp_dyadic_pow10(&mag, dex);
            if cmp_lo == Ordering::Less {
                dex -= 1;
                continue;
            }
            if cmp_dyadic_pow10(&mag, dex + 1) != Ordering::Less {
                dex += 1;
                continue;
            }
            break;
        }
        // digits = round(mag * 10^(sig-1-dex))
        let p = sig as i64 - 1 - dex;
        let mut digits = {
            let scaled = if p >= 0 {
                mag.mul_exact(&Dyadic::from_bigint(&BigInt::from(10u32).pow(p as u32)))
            } else {
                mag.div_dir(
                    &Dyadic::from_bigint(&BigInt::from(10u32).pow((-p) as u32)),
                    (mag.mant.bits() as u32).max(64) + 64,
                    false,
                )
            };
            // round half up on the dyadic value
            let doubled = Dyadic { mant: scaled.mant.clone(), exp: scaled.exp + 1 };
            (doubled.add_exact(&Dyadic::one())).floor() >> 1u8
        };
        let mut ds = digits.to_string();
        if ds.len() > sig {
            // rounding carried into an extra digit (e.g. 999 -> 1000)
            dex += 1;
            digits = &digits / 10;
            ds = digits.to_string();
        }
        while ds.len() < sig {
            ds.insert(0, '0');
        }
        let body = if (-4..=(sig as i64 + 14)).contains(&dex) {
            if dex >= 0 {
                let k = dex as usize + 1;
                if k >= ds.len() {
                    format!("{}{}", ds, "0".repeat(k - ds.len()))
                } else {
                    format!("{}.{}", &ds[..k], &ds[k..])
                }
            } else {
                format!("0.{}{}", "0".repeat((-dex - 1) as usize), ds)
            }
        } else if ds.len() == 1 {
            format!("{}e{}", ds, dex)
        } else {
            format!("{}.{}e{}", &ds[..1], &ds[1..], dex)
        };
        if neg {
            format!("-{}", body)
        } else {
            body
        }
    }
}

fn cmp_dyadic_pow10(d: &Dyadic, k: i64) -> Ordering {
    // compare d (positive) with 10^k
    if k >= 0 {
        d.cmp_exact(&Dyadic::from_bigint(&BigInt::from(10u32).pow(k as u32)))
    } else {
        // d vs 10^k  <=>  d * 10^(-k) vs 1
        let scaled = d.mul_exact(&Dyadic::from_bigint(&BigInt::from(10u32).pow((-k) as u32)));
        scaled.cmp_exact(&Dyadic::one())
    }
}

/// A certified enclosure `[lo, hi]` of a real number.
#[derive(Debug, Clone)]
pub struct Real {
    lo: Dyadic,
    hi: Dyadic,
}

impl Real {
    pub fn from_endpoints(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo.cmp_exact(&hi) != Ordering::Greater, "inverted enclosure");
        Real { lo, hi }
    }

    pub fn exact_dyadic(d: Dyadic) -> Self {
        Real { lo: d.clone(), hi: d }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Real::exact_dyadic(Dyadic::from_bigint(n))
    }

    pub fn from_i64(n: i64) -> Self {
        Real::exact_dyadic(Dyadic::from_i64(n))
    }

    pub fn zero() -> Self {
        Real::exact_dyadic(Dyadic::zero())
    }

    pub fn one() -> Self {
        Real::exact_dyadic(Dyadic::one())
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    /// Enclosure of `num/den` with directed rounding at `prec` bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Result<Self, RealError> {
        if den.is_zero() {
            return Err(RealError::DivByZero);
        }
        let (n, d) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        let nd = Dyadic::from_bigint(&n);
        let dd = Dyadic::from_bigint(&d);
        Ok(Real {
            lo: nd.div_dir(&dd, prec, false),
            hi: nd.div_dir(&dd, prec, true),
        })
    }

    /// Parse a decimal literal (`-12`, `3.25`, `9.5e12`, `4e-7`) into an
    /// exact enclosure at `prec` bits. The literal denotes an exact decimal
    /// rational; the enclosure is tight to 1 ulp.
    pub fn from_decimal_str(s: &str, prec: u32) -> Result<Self, RealError> {
        let (num, pow10) = parse_decimal(s).ok_or_else(|| RealError::BadDecimal(s.into()))?;
        if pow10 >= 0 {
            let n = num * BigInt::from(10u32).pow(pow10 as u32);
            Ok(Real::from_bigint(&n))
        } else {
            let den = BigInt::from(10u32).pow((-pow10) as u32);
            Real::from_ratio(&num, &den, prec)
        }
    }

    pub fn neg(&self) -> Self {
        Real { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = if self.lo.neg().cmp_exact(&self.hi) == Ordering::Greater {
                self.lo.neg()
            } else {
                self.hi.clone()
            };
            Real { lo: Dyadic::zero(), hi: m }
        }
    }

    pub fn add(&self, other: &Real, prec: u32) -> Self {
        Real {
            lo: add_dir(&self.lo, &other.lo, prec, false),
            hi: add_dir(&self.hi, &other.hi, prec, true),
        }
    }

    pub fn sub(&self, other: &Real, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Real, prec: u32) -> Self {
        let cands = [
            self.lo.mul_exact(&other.lo),
            self.lo.mul_exact(&other.hi),
            self.hi.mul_exact(&other.lo),
            self.hi.mul_exact(&other.hi),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp_exact(&lo) == Ordering::Less {
                lo = c.clone();
            }
            if c.cmp_exact(&hi) == Ordering::Greater {
                hi = c.clone();
            }
        }
        Real { lo: lo.round_down(prec), hi: hi.round_up(prec) }
    }

    pub fn div(&self, other: &Real, prec: u32) -> Result<Self, RealError> {
        if other.contains_zero() {
            return Err(RealError::DivByZero);
        }
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let dn = a.div_dir(b, prec, false);
                let up = a.div_dir(b, prec, true);
                lo = Some(match lo {
                    Some(l) if l.cmp_exact(&dn) != Ordering::Greater => l,
                    _ => dn,
                });
                hi = Some(match hi {
                    Some(h) if h.cmp_exact(&up) != Ordering::Less => h,
                    _ => up,
                });
            }
        }
        Ok(Real { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    pub fn recip(&self, prec: u32) -> Result<Self, RealError> {
        Real::one().div(self, prec)
    }

    /// Scale by `2^k` exactly.
    pub fn scale2(&self, k: i64) -> Self {
        Real {
            lo: Dyadic { mant: self.lo.mant.clone(), exp: self.lo.exp + k },
            hi: Dyadic { mant: self.hi.mant.clone(), exp: self.hi.exp + k },
        }
    }

    pub fn sqrt(&self, prec: u32) -> Result<Self, RealError> {
        if self.lo.is_negative() {
            return Err(RealError::SqrtNegative);
        }
        Ok(Real {
            lo: self.lo.sqrt_dir(prec, false),
            hi: self.hi.sqrt_dir(prec, true),
        })
    }

    /// Natural logarithm of a strictly positive enclosure.
    pub fn ln(&self, prec: u32) -> Result<Self, RealError> {
        if !self.lo.is_positive() {
            return Err(RealError::LogNonPositive);
        }
        let lo = ln_point(&self.lo, prec)?;
        let hi = ln_point(&self.hi, prec)?;
        Ok(Real { lo: lo.lo, hi: hi.hi })
    }

    /// Integer power by repeated interval multiplication.
    pub fn pow_i32(&self, k: i32, prec: u32) -> Result<Self, RealError> {
        let w = prec + 32;
        let mut acc = Real::one();
        let mut base = self.clone();
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, w);
            }
            base = base.mul(&base, w);
            e >>= 1;
        }
        let acc = Real { lo: acc.lo.round_down(prec), hi: acc.hi.round_up(prec) };
        if k < 0 {
            acc.recip(prec)
        } else {
            Ok(acc)
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_certainly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// `Some(ordering)` when the enclosures do not overlap.
    pub fn cmp_certain(&self, other: &Real) -> Option<Ordering> {
        if self.hi.cmp_exact(&other.lo) == Ordering::Less {
            Some(Ordering::Less)
        } else if self.lo.cmp_exact(&other.hi) == Ordering::Greater {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// `true` when both endpoints coincide, i.e. the value is known exactly.
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Certified floor: requires both endpoints to agree.
    pub fn floor_certain(&self) -> Option<BigInt> {
        let f = self.lo.floor();
        if f == self.hi.floor() {
            Some(f)
        } else {
            None
        }
    }

    /// Exact midpoint as a dyadic.
    pub fn mid(&self) -> Dyadic {
        let s = self.lo.add_exact(&self.hi);
        Dyadic { mant: s.mant, exp: s.exp - 1 }.normalized()
    }

    /// Exact width `hi - lo`.
    pub fn width(&self) -> Dyadic {
        self.hi.add_exact(&self.lo.neg())
    }

    /// `true` when the enclosure width is at most `2^-bits`.
    pub fn width_within(&self, bits: u32) -> bool {
        let w = self.width();
        if w.is_zero() {
            return true;
        }
        w.msb() <= -(bits as i64)
    }

    /// Ceiling of log2 of the width; `None` for exact enclosures.
    pub fn width_log2(&self) -> Option<i64> {
        let w = self.width();
        if w.is_zero() {
            None
        } else {
            Some(w.msb())
        }
    }

    /// Midpoint decimal with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        self.mid().to_decimal(sig)
    }

    /// Decimal digits that are certain: both endpoints round to the same
    /// string. Falls back to fewer digits when the enclosure is wide.
    pub fn to_decimal_certified(&self, sig: usize) -> String {
        let mut s = sig;
        while s > 1 {
            let a = self.lo.to_decimal(s);
            let b = self.hi.to_decimal(s);
            if a == b {
                return a;
            }
            s -= 1;
        }
        self.lo.to_decimal(1)
    }
}

fn add_dir(a: &Dyadic, b: &Dyadic, prec: u32, up: bool) -> Dyadic {
    if a.is_zero() {
        return b.round_dir(prec, up);
    }
    if b.is_zero() {
        return a.round_dir(prec, up);
    }
    let gap = (a.msb() - b.msb()).abs();
    if gap <= prec as i64 + 96 {
        return a.add_exact(b).round_dir(prec, up);
    }
    // absorb the far smaller operand, nudging one ulp in the safe direction
    let (big, small) = if a.msb() >= b.msb() { (a, b) } else { (b, a) };
    let r = big.round_dir(prec, up);
    let safe = if up { small.is_negative() } else { small.is_positive() };
    if safe {
        r
    } else {
        let ulp = Dyadic { mant: BigInt::from(if up { 1 } else { -1 }), exp: r.exp };
        r.add_exact(&ulp).round_dir(prec, up)
    }
}

/// Enclosure of `ln` of an exact positive dyadic.
fn ln_point(x: &Dyadic, prec: u32) -> Result<Real, RealError> {
    assert!(x.is_positive());
    let w = prec + 64;
    // x = m * 2^k with m in [1, 2)
    let k = x.msb() - 1;
    let m = Real::exact_dyadic(Dyadic { mant: x.mant.clone(), exp: x.exp - k });
    let ln_m = atanh_ln(&m, w)?;
    let kterm = ln2(w).mul(&Real::from_i64(k), w);
    let r = ln_m.add(&kterm, w);
    Ok(Real { lo: r.lo.round_down(prec), hi: r.hi.round_up(prec) })
}

/// `ln m = 2 atanh((m-1)/(m+1))` for `m` in `[1, 2)`, with tail bound.
fn atanh_ln(m: &Real, w: u32) -> Result<Real, RealError> {
    let one = Real::one();
    let t = m.sub(&one, w).div(&m.add(&one, w), w)?;
    // t in [0, 1/3]; terms t^(2j+1)/(2j+1)
    let t2 = t.mul(&t, w);
    let mut pow = t.clone();
    let mut sum = Real::zero();
    let mut j: i64 = 0;
    loop {
        let term = pow.div(&Real::from_i64(2 * j + 1), w)?;
        sum = sum.add(&term, w);
        pow = pow.mul(&t2, w);
        j += 1;
        let top = pow.hi.msb();
        if top < -(w as i64) - 2 || pow.hi.is_zero() {
            break;
        }
        if j > 4 * w as i64 {
            return Err(RealError::PrecisionCapReached(w));
        }
    }
    // tail <= pow_hi * (1/(2j+1)) * 1/(1 - t^2) <= pow_hi * 9/8
    let tail_hi = {
        let nine_eighth = Real::from_ratio(&BigInt::from(9), &BigInt::from(8), w).unwrap();
        Real::exact_dyadic(pow.hi.clone()).mul(&nine_eighth, w)
    };
    let enclosed = Real { lo: sum.lo.clone(), hi: sum.hi.add_exact(&tail_hi.hi).round_up(w) };
    Ok(enclosed.scale2(1))
}

static LN2_CACHE: Mutex<Option<HashMap<u32, (Dyadic, Dyadic)>>> = Mutex::new(None);

/// Enclosure of `ln 2 = 2 atanh(1/3)` at `prec` bits, cached.
pub fn ln2(prec: u32) -> Real {
    {
        let guard = LN2_CACHE.lock().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some((lo, hi)) = map.get(&prec) {
                return Real { lo: lo.clone(), hi: hi.clone() };
            }
        }
    }
    let w = prec + 16;
    let third = Real::from_ratio(&BigInt::one(), &BigInt::from(3), w).unwrap();
    let two = Real::from_i64(2);
    // ln 2 = 2 atanh(1/3) = ln((1+1/3)/(1-1/3)); atanh_ln expects m with
    // t=(m-1)/(m+1): choosing m = 2 directly gives t = 1/3.
    let _ = third;
    let r = atanh_ln(&two, w).unwrap();
    let r = Real { lo: r.lo.round_down(prec), hi: r.hi.round_up(prec) };
    let mut guard = LN2_CACHE.lock().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert(prec, (r.lo.clone(), r.hi.clone()));
    r
}

/// Parse a decimal literal into `(numerator, power_of_ten)` so the value is
/// `numerator * 10^power_of_ten`.
fn parse_decimal(s: &str) -> Option<(BigInt, i64)> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (body, exp10) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().ok()?;
            (&s[..i], e)
        }
        None => (s, 0i64),
    };
    let (sign, digits) = match body.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{}{}", int_part, frac_part);
    let num: BigInt = joined.parse().ok()?;
    Some((num * sign, exp10 - frac_part.len() as i64))
}
