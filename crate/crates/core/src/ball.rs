//! Midpoint–radius ball arithmetic over dyadic rationals.
//!
//! A [`CertifiedReal`] is a pair (midpoint, radius) with the guarantee that
//! the exact value it stands for lies in `[mid - rad, mid + rad]`. Midpoints
//! are dyadic rationals `mantissa * 2^exponent` rounded to a configurable
//! number of bits; radii are kept at a coarse fixed precision and every
//! radius operation rounds outward. Nothing here depends on floating point,
//! so enclosures are reproducible across platforms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Mantissa bits kept for radii. Radii only ever need an order of magnitude;
/// what matters is that they are rounded up, never down.
const RADIUS_BITS: u64 = 16;

/// Minimum supported working precision.
pub const MIN_WORKING_BITS: u32 = 64;

/// Requested precision for certified evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionConfig {
    working_bits: u32,
    target_radius_bits: u32,
}

impl PrecisionConfig {
    /// Working precision `bits` with the default tightness target `bits / 2`.
    pub fn new(bits: u32) -> Self {
        Self::with_target(bits, bits / 2)
    }

    /// Explicit working precision and relative enclosure target.
    ///
    /// Panics unless `working_bits >= 64` and `target_radius_bits < working_bits`.
    pub fn with_target(working_bits: u32, target_radius_bits: u32) -> Self {
        assert!(
            working_bits >= MIN_WORKING_BITS,
            "working_bits must be at least {MIN_WORKING_BITS}"
        );
        assert!(
            target_radius_bits < working_bits,
            "target_radius_bits must be below working_bits"
        );
        PrecisionConfig {
            working_bits,
            target_radius_bits,
        }
    }

    pub fn working_bits(&self) -> u32 {
        self.working_bits
    }

    pub fn target_radius_bits(&self) -> u32 {
        self.target_radius_bits
    }

    /// Same target, doubled working precision.
    pub fn doubled(&self) -> Self {
        PrecisionConfig {
            working_bits: self.working_bits * 2,
            target_radius_bits: self.target_radius_bits,
        }
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig::new(256)
    }
}

/// Exact dyadic rational `mant * 2^exp`, normalized so `mant` is odd or zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }.normalized()
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

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// Exact conversion; panics on NaN or infinity.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "cannot represent a non-finite value");
        if v == 0.0 {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Dyadic::new(BigInt::from(sign) * BigInt::from(mant), exp)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Exact sum.
    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    /// Exact product.
    pub fn mul(&self, other: &Dyadic) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Smallest `e` with `|self| <= 2^e`; meaningless for zero.
    pub fn mag_exponent(&self) -> i64 {
        debug_assert!(!self.is_zero());
        let b = self.mant.bits() as i64;
        // |mant| < 2^b and |mant| >= 2^(b-1); mant is odd so |mant| = 2^(b-1)
        // exactly only when mant = ±1.
        if self.mant.abs() == BigInt::one() {
            self.exp + b - 1
        } else {
            self.exp + b
        }
    }

    /// Truncate the mantissa to `prec` bits. Returns the rounded value and an
    /// upper bound on the absolute rounding error (zero when exact).
    pub fn round_to(&self, prec: u32) -> (Dyadic, Dyadic) {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let shift = bits - prec as u64;
        let m = &self.mant >> shift; // floor; error below one ulp either way
        let exp = self.exp + shift as i64;
        let err = Dyadic {
            mant: BigInt::one(),
            exp,
        };
        (Dyadic::new(m, exp), err)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Lossy conversion for diagnostics and coarse decisions only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        if bits <= 53 {
            return self.mant.to_f64().unwrap_or(f64::NAN) * exp2i(self.exp);
        }
        let shift = bits - 53;
        let top = (&self.mant >> shift).to_f64().unwrap_or(f64::NAN);
        top * exp2i(self.exp + shift as i64)
    }
}

fn exp2i(e: i64) -> f64 {
    if e > 1024 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else {
        f64::powi(2.0, e as i32)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (num_bigint::Sign::Minus, num_bigint::Sign::NoSign)
            | (num_bigint::Sign::Minus, num_bigint::Sign::Plus)
            | (num_bigint::Sign::NoSign, num_bigint::Sign::Plus) => return Ordering::Less,
            (num_bigint::Sign::Plus, num_bigint::Sign::NoSign)
            | (num_bigint::Sign::Plus, num_bigint::Sign::Minus)
            | (num_bigint::Sign::NoSign, num_bigint::Sign::Minus) => return Ordering::Greater,
            (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

/// Round a nonnegative dyadic up to the coarse radius precision.
fn round_up_coarse(d: &Dyadic) -> Dyadic {
    debug_assert!(!d.is_negative());
    let bits = d.mant.bits();
    if bits <= RADIUS_BITS {
        return d.clone();
    }
    let shift = bits - RADIUS_BITS;
    let m = (&d.mant >> shift) + 1;
    Dyadic::new(m, d.exp + shift as i64)
}

/// Truncated quotient of two dyadics at `prec` bits, with an error bound.
///
/// The returned error is zero when the quotient is exact, otherwise one ulp
/// of the result. Truncation is toward zero, so for positive operands the
/// quotient is a lower bound.
fn div_dyadic(num: &Dyadic, den: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    assert!(!den.is_zero(), "division by zero dyadic");
    if num.is_zero() {
        return (Dyadic::zero(), Dyadic::zero());
    }
    let nb = num.mant.bits() as i64;
    let db = den.mant.bits() as i64;
    // Shift the numerator so the integer quotient carries prec + 2 bits.
    let shift = (prec as i64 + 2) - (nb - db);
    let (n, d, exp) = if shift >= 0 {
        (
            &num.mant << shift as u64,
            den.mant.clone(),
            num.exp - den.exp - shift,
        )
    } else {
        (
            num.mant.clone(),
            &den.mant << (-shift) as u64,
            num.exp - den.exp - shift,
        )
    };
    let q = &n / &d;
    let exact = (&q * &d) == n;
    let err = if exact {
        Dyadic::zero()
    } else {
        Dyadic {
            mant: BigInt::one(),
            exp,
        }
    };
    (Dyadic::new(q, exp), err)
}

/// Upper bound on `a / b` for `a >= 0`, `b > 0`, at coarse precision.
fn div_up_coarse(a: &Dyadic, b: &Dyadic) -> Dyadic {
    if a.is_zero() {
        return Dyadic::zero();
    }
    let (q, err) = div_dyadic(a, b, RADIUS_BITS as u32 + 4);
    round_up_coarse(&q.add(&err))
}

/// A certified enclosure `[mid - rad, mid + rad]` of a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedReal {
    mid: Dyadic,
    rad: Dyadic,
}

impl CertifiedReal {
    /// Enclosure of an exactly representable value; radius zero.
    pub fn exact(mid: Dyadic) -> Self {
        CertifiedReal {
            mid,
            rad: Dyadic::zero(),
        }
    }

    pub fn from_integer(v: i64) -> Self {
        CertifiedReal::exact(Dyadic::from_integer(v))
    }

    pub fn zero() -> Self {
        CertifiedReal::exact(Dyadic::zero())
    }

    pub fn new(mid: Dyadic, rad: Dyadic) -> Self {
        assert!(!rad.is_negative(), "radius must be nonnegative");
        CertifiedReal {
            mid,
            rad: round_up_coarse(&rad),
        }
    }

    /// Enclosure of a rational at `bits` precision; exact when the
    /// denominator is a power of two.
    pub fn from_rational(v: &BigRational, bits: u32) -> Self {
        let num = Dyadic::from_bigint(v.numer().clone());
        let den = Dyadic::from_bigint(v.denom().clone());
        let (q, err) = div_dyadic(&num, &den, bits);
        CertifiedReal {
            mid: q,
            rad: round_up_coarse(&err),
        }
    }

    /// Tightest ball covering `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic) -> Self {
        assert!(lo <= hi, "endpoints out of order");
        let mid = lo.add(hi).mul_pow2(-1);
        let rad = hi.sub(lo).mul_pow2(-1);
        CertifiedReal {
            mid,
            rad: round_up_coarse(&rad),
        }
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Exact lower endpoint `mid - rad`.
    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    /// Exact upper endpoint `mid + rad`.
    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    /// Exact interval width `2 * rad`.
    pub fn width(&self) -> Dyadic {
        self.rad.mul_pow2(1)
    }

    /// Upper bound on the magnitude of any contained value.
    pub fn max_abs(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    /// Lower bound on the magnitude of any contained value.
    pub fn min_abs(&self) -> Dyadic {
        let d = self.mid.abs().sub(&self.rad);
        if d.is_negative() {
            Dyadic::zero()
        } else {
            d
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn contains_dyadic(&self, v: &Dyadic) -> bool {
        &self.lower() <= v && v <= &self.upper()
    }

    pub fn contains_rational(&self, v: &BigRational) -> bool {
        let lo = self.lower().to_rational();
        let hi = self.upper().to_rational();
        lo <= *v && *v <= hi
    }

    /// `Greater` / `Less` when every contained value is positive / negative,
    /// `Equal` when the enclosure is exactly zero, `None` when undecided.
    pub fn sign_certain(&self) -> Option<Ordering> {
        if self.rad.is_zero() && self.mid.is_zero() {
            return Some(Ordering::Equal);
        }
        if self.mid.abs() > self.rad {
            Some(if self.mid.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            })
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        CertifiedReal {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
        }
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        CertifiedReal {
            mid: self.mid.mul_pow2(k),
            rad: self.rad.mul_pow2(k),
        }
    }

    pub fn add(&self, other: &Self, bits: u32) -> Self {
        let sum = self.mid.add(&other.mid);
        let (mid, err) = sum.round_to(bits);
        let rad = self.rad.add(&other.rad).add(&err);
        CertifiedReal {
            mid,
            rad: round_up_coarse(&rad),
        }
    }

    pub fn sub(&self, other: &Self, bits: u32) -> Self {
        self.add(&other.neg(), bits)
    }

    pub fn mul(&self, other: &Self, bits: u32) -> Self {
        let prod = self.mid.mul(&other.mid);
        let (mid, err) = prod.round_to(bits);
        let cross = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad))
            .add(&err);
        CertifiedReal {
            mid,
            rad: round_up_coarse(&cross),
        }
    }

    /// Product with an exact integer.
    pub fn mul_bigint(&self, v: &BigInt, bits: u32) -> Self {
        let d = Dyadic::from_bigint(v.clone());
        let prod = self.mid.mul(&d);
        let (mid, err) = prod.round_to(bits);
        let rad = self.rad.mul(&d.abs()).add(&err);
        CertifiedReal {
            mid,
            rad: round_up_coarse(&rad),
        }
    }

    /// Quotient by an exact nonzero integer.
    pub fn div_bigint(&self, v: &BigInt, bits: u32) -> Self {
        assert!(!v.is_zero());
        let d = Dyadic::from_bigint(v.abs());
        let (q, err) = div_dyadic(&self.mid, &d, bits);
        let q = if v.is_negative() { q.neg() } else { q };
        let rad = div_up_coarse(&self.rad, &d).add(&err);
        CertifiedReal {
            mid: q,
            rad: round_up_coarse(&rad),
        }
    }

    /// Reciprocal; `None` when the enclosure does not exclude zero.
    pub fn recip(&self, bits: u32) -> Option<Self> {
        let m = self.mid.abs();
        if m <= self.rad {
            return None;
        }
        let (q, qerr) = div_dyadic(&Dyadic::one(), &m, bits);
        let q = if self.mid.is_negative() { q.neg() } else { q };
        // |1/v - 1/m| <= r / (m * (m - r)) over the whole enclosure.
        let denom = m.mul(&m.sub(&self.rad));
        let rad = div_up_coarse(&self.rad, &denom).add(&qerr);
        Some(CertifiedReal {
            mid: q,
            rad: round_up_coarse(&rad),
        })
    }

    /// Quotient; `None` when the divisor does not exclude zero.
    pub fn div(&self, other: &Self, bits: u32) -> Option<Self> {
        Some(self.mul(&other.recip(bits)?, bits))
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, n: u32, bits: u32) -> Self {
        let mut result = CertifiedReal::from_integer(1);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base, bits);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, bits);
            }
        }
        result
    }

    /// Intersection of two enclosures of the same value; `None` if disjoint.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lower().max(other.lower());
        let hi = self.upper().min(other.upper());
        if lo > hi {
            return None;
        }
        Some(CertifiedReal::from_endpoints(&lo, &hi))
    }

    /// Enclosure of `|v|` over the enclosure.
    pub fn abs(&self) -> Self {
        let lo = self.min_abs();
        let hi = self.max_abs();
        CertifiedReal::from_endpoints(&lo, &hi)
    }

    /// True when `rad <= 2^(mag(mid) - target_bits)`; exact enclosures always
    /// qualify, zero-centered inexact ones never do.
    pub fn meets_relative_target(&self, target_bits: u32) -> bool {
        if self.rad.is_zero() {
            return true;
        }
        if self.mid.is_zero() {
            return false;
        }
        self.rad.mag_exponent() <= self.mid.mag_exponent() - target_bits as i64
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Decimal rendering: midpoint to `digits` significant digits plus a
    /// radius string that absorbs the print truncation, rounded up to two
    /// significant digits. The printed pair still encloses the value.
    pub fn decimal_strings(&self, digits: usize) -> (String, String) {
        let mid_rat = self.mid.to_rational();
        let (mid_str, printed) = format_rational(&mid_rat, digits, false);
        let print_err = (&mid_rat - &printed).abs();
        let total_rad = self.rad.to_rational() + print_err;
        let (rad_str, _) = format_rational(&total_rad, 2, true);
        (mid_str, rad_str)
    }
}

/// Suggested significant digits for printing values computed at `bits`.
pub fn decimal_digits_for_bits(bits: u32) -> usize {
    (bits as f64 * 0.30103).ceil() as usize + 2
}

/// Parse a plain decimal literal (optional sign, fraction, exponent) into an
/// exact rational. Returns `None` on malformed input.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (mant_part, exp_part) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let exp10: i64 = match exp_part {
        Some(e) => e.parse().ok()?,
        None => 0,
    };
    let (sign, body) = match mant_part.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mant_part.strip_prefix('+').unwrap_or(mant_part)),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let joined = format!("{int_part}{frac_part}");
    let digits: BigInt = joined.parse().ok()?;
    let scale = frac_part.len() as i64;
    let num = BigInt::from(sign) * digits;
    let net = exp10 - scale;
    Some(if net >= 0 {
        BigRational::from_integer(num * BigInt::from(10u32).pow(net as u32))
    } else {
        BigRational::new(num, BigInt::from(10u32).pow((-net) as u32))
    })
}

/// Render `v` to `digits` significant digits in scientific-or-plain form.
/// Returns the string and the exactly represented printed value. With
/// `round_up` the magnitude is rounded away from zero (for radii).
fn format_rational(v: &BigRational, digits: usize, round_up: bool) -> (String, BigRational) {
    if v.is_zero() {
        return ("0".to_string(), BigRational::zero());
    }
    let digits = digits.max(1);
    let neg = v.is_negative();
    let a = v.abs();
    // Decimal magnitude e with 10^(e-1) <= a < 10^e.
    let mut e: i64 = {
        let n = a.numer().bits() as i64;
        let d = a.denom().bits() as i64;
        (((n - d) as f64) * 0.301_029_995_663_981_2).round() as i64
    };
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(BigInt::from(10u32).pow(k as u32))
        } else {
            BigRational::new(BigInt::one(), BigInt::from(10u32).pow((-k) as u32))
        }
    };
    while a >= pow10(e) {
        e += 1;
    }
    while a < pow10(e - 1) {
        e -= 1;
    }
    // Scale into [10^(digits-1), 10^digits) and take the integer part.
    let shift = digits as i64 - e;
    let scaled = &a * pow10(shift);
    let mut int = scaled.to_integer();
    if round_up && BigRational::from_integer(int.clone()) < scaled {
        int += 1;
    }
    let mut s = int.to_string();
    // Rounding up may push 999 -> 1000; renormalize.
    let (s, e) = if s.len() > digits {
        s.truncate(digits);
        (s, e + 1)
    } else {
        (s, e)
    };
    let mut printed =
        BigRational::from_integer(s.parse::<BigInt>().unwrap()) * pow10(e - digits as i64);
    if neg {
        printed = -printed;
    }
    let sign = if neg { "-" } else { "" };
    let text = if (-4..=(digits as i64 + 4)).contains(&e) {
        // Plain notation.
        if e >= digits as i64 {
            format!("{sign}{}{}", s, "0".repeat((e - digits as i64) as usize))
        } else if e >= 1 {
            let (ip, fp) = s.split_at(e as usize);
            let fp = fp.trim_end_matches('0');
            if fp.is_empty() {
                format!("{sign}{ip}")
            } else {
                format!("{sign}{ip}.{fp}")
            }
        } else {
            let fp = s.trim_end_matches('0');
            let fp = if fp.is_empty() { "0" } else { fp };
            format!("{sign}0.{}{}", "0".repeat((-e) as usize), fp)
        }
    } else {
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{sign}{head}e{}", e - 1)
        } else {
            format!("{sign}{head}.{tail}e{}", e - 1)
        }
    };
    (text, printed)
}
