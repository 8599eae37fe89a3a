//! Certified evaluation of the Bessel family `J_m`, `I_m`, the cross
//! product `W_m`, the ratio `F_m`, and the normalized combination `G_m`.
//!
//! Everything is computed from the defining power series in ball arithmetic
//! with an explicit geometric tail bound, so every returned enclosure is a
//! mathematical guarantee, not an estimate. Negative orders reduce to
//! nonnegative ones through the exact integer-order reflections
//! `I_{-m} = I_m`, `J_{-m} = (-1)^m J_m`, `W_{-m} = (-1)^m W_m`.

use crate::ball::{CertifiedReal, Dyadic, PrecisionConfig};
use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

/// Hard cap on series terms; unreachable for any argument this library
/// targets, present so malformed inputs fail instead of spinning.
const MAX_SERIES_TERMS: u64 = 100_000;

/// Failure modes of certified evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    /// The relative enclosure target was still unmet after escalating the
    /// working precision to four times the requested bits.
    #[error("enclosure target not met at {max_bits} working bits")]
    PrecisionExhausted { max_bits: u32 },
    /// The argument enclosure contains zero but the quantity requires a
    /// nonzero argument.
    #[error("argument enclosure must exclude zero")]
    UndefinedAtZero,
}

fn factorial(n: u32) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n as u64 {
        f *= k;
    }
    f
}

/// Magnitude exponent of the largest value a ball may contain; `None` for
/// the exact zero ball.
fn sup_mag(v: &CertifiedReal) -> Option<i64> {
    let s = v.max_abs();
    if s.is_zero() {
        None
    } else {
        Some(s.mag_exponent())
    }
}

/// Power series of `I_m` (all terms positive) or `J_m` (alternating) for
/// `m >= 0`, summed in ball arithmetic at `bits` working precision.
///
/// Successive terms satisfy `|t_{k+1}| <= |t_k| * U / ((k+1)(k+m+1))` where
/// `U` bounds `sup |x^2| / 4`. Once `(k+1)(k+m+1) >= 2U` the dropped tail is
/// at most `sup |t_k|`, which is folded into the radius at the stop.
fn series(m: u32, x: &CertifiedReal, bits: u32, alternating: bool) -> Option<CertifiedReal> {
    let half = x.mul_pow2(-1);
    let u = half.mul(&half, bits);
    let ucap2 = u.max_abs().mul_pow2(1);
    let mut term = half.pow(m, bits).div_bigint(&factorial(m), bits);
    let mut sum = term.clone();
    let mut emax = sup_mag(&sum);
    for k in 1..=MAX_SERIES_TERMS {
        let step = BigInt::from(k * (k + m as u64));
        term = term.mul(&u, bits).div_bigint(&step, bits);
        if alternating {
            term = term.neg();
        }
        sum = sum.add(&term, bits);
        emax = emax.max(sup_mag(&sum));
        let next_den = Dyadic::from_bigint(BigInt::from((k + 1) * (k + 1 + m as u64)));
        if ucap2 > next_den {
            continue;
        }
        let tail = term.max_abs();
        if tail.is_zero() {
            return Some(sum);
        }
        let scale = emax.unwrap_or(0);
        if tail.mag_exponent() <= scale - bits as i64 - 2 {
            return Some(CertifiedReal::new(sum.mid().clone(), sum.rad().add(&tail)));
        }
    }
    None
}

/// `I_m` enclosure at `bits`, any integer order.
fn im_ball(m: i32, x: &CertifiedReal, bits: u32) -> Option<CertifiedReal> {
    series(m.unsigned_abs(), x, bits, false)
}

/// `J_m` enclosure at `bits`, any integer order.
fn jm_ball(m: i32, x: &CertifiedReal, bits: u32) -> Option<CertifiedReal> {
    let s = series(m.unsigned_abs(), x, bits, true)?;
    Some(if m < 0 && m % 2 != 0 { s.neg() } else { s })
}

/// `W_m = I_{m+1} J_m + I_m J_{m+1}` for `m >= 0`, tightened for positive
/// orders by intersecting with the equivalent form
/// `I_{m-1} J_m - I_m J_{m-1}`. For `m = 0` the second form reflects onto
/// the first, so only one is computed.
fn wm_nonneg_ball(m: u32, x: &CertifiedReal, bits: u32) -> Option<CertifiedReal> {
    let m = m as i32;
    let im = im_ball(m, x, bits)?;
    let jm = jm_ball(m, x, bits)?;
    let up = im_ball(m + 1, x, bits)?
        .mul(&jm, bits)
        .add(&im.mul(&jm_ball(m + 1, x, bits)?, bits), bits);
    if m == 0 {
        return Some(up);
    }
    let down = im_ball(m - 1, x, bits)?
        .mul(&jm, bits)
        .sub(&im.mul(&jm_ball(m - 1, x, bits)?, bits), bits);
    Some(
        up.intersect(&down)
            .expect("both product forms enclose the same value"),
    )
}

/// `W_m` enclosure at `bits`, any integer order.
fn wm_ball(m: i32, x: &CertifiedReal, bits: u32) -> Option<CertifiedReal> {
    let s = wm_nonneg_ball(m.unsigned_abs(), x, bits)?;
    Some(if m < 0 && m % 2 != 0 { s.neg() } else { s })
}

/// Escalation schedule for one evaluation: the requested working precision,
/// then twice, then four times. Point arguments must meet the relative
/// radius target; interval arguments take the first round as computed.
fn refine(
    x: &CertifiedReal,
    cfg: PrecisionConfig,
    mut eval: impl FnMut(u32) -> Option<CertifiedReal>,
) -> Result<CertifiedReal, EvalError> {
    let wb = cfg.working_bits();
    let point = x.is_exact();
    for bits in [wb, 2 * wb, 4 * wb] {
        if let Some(v) = eval(bits) {
            if !point || v.meets_relative_target(cfg.target_radius_bits()) {
                return Ok(v);
            }
        }
    }
    Err(EvalError::PrecisionExhausted { max_bits: 4 * wb })
}

/// Certified enclosure of the modified Bessel function `I_m(x)`.
pub fn eval_i(m: i32, x: &CertifiedReal, cfg: PrecisionConfig) -> Result<CertifiedReal, EvalError> {
    refine(x, cfg, |bits| im_ball(m, x, bits))
}

/// Certified enclosure of the Bessel function `J_m(x)`.
pub fn eval_j(m: i32, x: &CertifiedReal, cfg: PrecisionConfig) -> Result<CertifiedReal, EvalError> {
    refine(x, cfg, |bits| jm_ball(m, x, bits))
}

/// Certified enclosure of the cross product
/// `W_m(x) = I_{m+1}(x) J_m(x) + I_m(x) J_{m+1}(x)`.
pub fn eval_w(m: i32, x: &CertifiedReal, cfg: PrecisionConfig) -> Result<CertifiedReal, EvalError> {
    refine(x, cfg, |bits| wm_ball(m, x, bits))
}

/// Certified enclosure of the ratio `F_m(x) = I_m(x) / (x I_{m-1}(x))`.
///
/// Requires an argument enclosure that excludes zero; the denominator sign
/// is certified as part of the division.
pub fn eval_f(m: i32, x: &CertifiedReal, cfg: PrecisionConfig) -> Result<CertifiedReal, EvalError> {
    if x.contains_zero() {
        return Err(EvalError::UndefinedAtZero);
    }
    refine(x, cfg, |bits| {
        let num = im_ball(m, x, bits)?;
        let den = x.mul(&im_ball(m - 1, x, bits)?, bits);
        num.div(&den, bits)
    })
}

/// Single-round `G_m` enclosure at `bits`; the scanning layer drives its
/// own escalation schedule through this.
pub(crate) fn gm_ball(m: i32, x: &CertifiedReal, bits: u32) -> Option<CertifiedReal> {
    let w = wm_ball(m, x, bits)?;
    let den = im_ball(m, x, bits)?;
    w.div(&den, bits)
}

/// Certified enclosure of `G_m(x) = W_m(x) / I_m(x)`, the cross product
/// normalized by the exponentially growing factor. `G_m` stays bounded, so
/// its sign changes are detectable on coarse grids where `W_m` itself
/// overflows any fixed exponent range.
pub fn eval_g(m: i32, x: &CertifiedReal, cfg: PrecisionConfig) -> Result<CertifiedReal, EvalError> {
    if x.contains_zero() {
        return Err(EvalError::UndefinedAtZero);
    }
    refine(x, cfg, |bits| gm_ball(m, x, bits))
}
