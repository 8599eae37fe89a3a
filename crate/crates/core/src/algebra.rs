//! Exact rational polynomial arithmetic and the quadratic resultant.
//!
//! Polynomials are dense, ascending, trailing-zero-free vectors of exact
//! rationals. The canonical text form is the comma-joined coefficient list
//! (`"c0,c1,..."` with each entry `num` or `num/den`), used for hashing,
//! caching, and interchange; parsing and printing round-trip exactly.

use crate::ball::{CertifiedReal, PrecisionConfig};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Exact rational scalar used throughout the symbolic layer.
pub type ExactRational = num_rational::BigRational;

/// Parse `num` or `num/den` with a nonzero denominator.
pub fn parse_rational(s: &str) -> Option<ExactRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(ExactRational::from_integer(n))
        }
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(ExactRational::new(n, d))
        }
    }
}

/// Dense univariate polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoly {
    /// Ascending by degree; empty for the zero polynomial, nonzero last
    /// entry otherwise.
    coeffs: Vec<ExactRational>,
}

impl ExactPoly {
    pub fn zero() -> Self {
        ExactPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: ExactRational) -> Self {
        ExactPoly { coeffs: vec![c] }.normalized()
    }

    pub fn from_integer(c: i64) -> Self {
        ExactPoly::constant(ExactRational::from_integer(BigInt::from(c)))
    }

    pub fn from_coeffs(coeffs: Vec<ExactRational>) -> Self {
        ExactPoly { coeffs }.normalized()
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: ExactRational) -> Self {
        if c.is_zero() {
            return ExactPoly::zero();
        }
        let mut coeffs = vec![ExactRational::zero(); k + 1];
        coeffs[k] = c;
        ExactPoly { coeffs }
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> ExactRational {
        self.coeffs.get(k).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> ExactRational {
        self.coeff(0)
    }

    pub fn neg(&self) -> Self {
        ExactPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        ExactPoly { coeffs }.normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ExactPoly::zero();
        }
        let mut coeffs =
            vec![ExactRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ExactPoly { coeffs }.normalized()
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        if c.is_zero() {
            return ExactPoly::zero();
        }
        ExactPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `x^k`.
    pub fn mul_xk(&self, k: usize) -> Self {
        if self.is_zero() {
            return ExactPoly::zero();
        }
        let mut coeffs = vec![ExactRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        ExactPoly { coeffs }
    }

    /// Exact division by `x^k`; `None` when any coefficient below `x^k` is
    /// nonzero.
    pub fn div_xk(&self, k: usize) -> Option<Self> {
        if self.is_zero() {
            return Some(ExactPoly::zero());
        }
        if self.coeffs.len() < k || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ExactPoly {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Truncation to degrees below `k`.
    pub fn mod_xk(&self, k: usize) -> Self {
        ExactPoly {
            coeffs: self.coeffs.iter().take(k).cloned().collect(),
        }
        .normalized()
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval_rational(&self, x: &ExactRational) -> ExactRational {
        let mut acc = ExactRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Certified evaluation by Horner's rule in ball arithmetic.
    pub fn eval_ball(&self, x: &CertifiedReal, cfg: PrecisionConfig) -> CertifiedReal {
        let bits = cfg.working_bits();
        let mut acc = CertifiedReal::zero();
        for c in self.coeffs.iter().rev() {
            let cb = CertifiedReal::from_rational(c, bits);
            acc = acc.mul(x, bits).add(&cb, bits);
        }
        acc
    }
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Malformed canonical polynomial text.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid polynomial coefficient list: {0:?}")]
pub struct ParsePolyError(pub String);

impl FromStr for ExactPoly {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut coeffs = Vec::new();
        for part in s.split(',') {
            let c = parse_rational(part).ok_or_else(|| ParsePolyError(part.to_string()))?;
            coeffs.push(c);
        }
        Ok(ExactPoly::from_coeffs(coeffs))
    }
}

impl Serialize for ExactPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for fields holding an [`ExactRational`]: canonical `num`
/// or `num/den` strings, matching the polynomial coefficient format.
pub mod rational_string {
    use super::{parse_rational, ExactRational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &ExactRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| de::Error::custom(format!("invalid rational: {s:?}")))
    }
}

/// `a y^2 + b y + c` with polynomial coefficients in `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadratic {
    pub a: ExactPoly,
    pub b: ExactPoly,
    pub c: ExactPoly,
}

impl Quadratic {
    pub fn new(a: ExactPoly, b: ExactPoly, c: ExactPoly) -> Self {
        Quadratic { a, b, c }
    }

    /// Exact evaluation at rational `x` and `y`.
    pub fn eval_rational(&self, x: &ExactRational, y: &ExactRational) -> ExactRational {
        self.a.eval_rational(x) * y * y + self.b.eval_rational(x) * y + self.c.eval_rational(x)
    }
}

/// Resultant in `y` of two quadratics, by the closed 2x2 determinant form
/// `(a1 c2 - a2 c1)^2 - (a1 b2 - a2 b1)(b1 c2 - b2 c1)`.
///
/// Vanishes at exactly those `x` where the quadratics share a root in `y`
/// (or both drop degree).
pub fn quadratic_resultant(p: &Quadratic, q: &Quadratic) -> ExactPoly {
    let ac = p.a.mul(&q.c).sub(&q.a.mul(&p.c));
    let ab = p.a.mul(&q.b).sub(&q.a.mul(&p.b));
    let bc = p.b.mul(&q.c).sub(&q.b.mul(&p.c));
    ac.mul(&ac).sub(&ab.mul(&bc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> ExactRational {
        ExactRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(coeffs: &[(i64, i64)]) -> ExactPoly {
        ExactPoly::from_coeffs(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn construction_trims_trailing_zeros() {
        let p = poly(&[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert!(ExactPoly::from_coeffs(vec![]).is_zero());
        assert!(ExactPoly::monomial(3, ExactRational::zero()).is_zero());
    }

    #[test]
    fn product_of_conjugates() {
        let a = poly(&[(1, 1), (1, 1)]); // 1 + x
        let b = poly(&[(1, 1), (-1, 1)]); // 1 - x
        assert_eq!(a.mul(&b), poly(&[(1, 1), (0, 1), (-1, 1)]));
    }

    #[test]
    fn xk_division_is_exact_or_refused() {
        let p = ExactPoly::monomial(2, rat(3, 1)).add(&ExactPoly::monomial(4, rat(-1, 2)));
        let q = p.div_xk(2).unwrap();
        assert_eq!(q, poly(&[(3, 1), (0, 1), (-1, 2)]));
        assert!(p.div_xk(3).is_none());
        assert_eq!(ExactPoly::zero().div_xk(7).unwrap(), ExactPoly::zero());
    }

    #[test]
    fn canonical_text_round_trips() {
        for s in ["0", "6", "1/2,0,-3", "-5/7,1", "0,0,1"] {
            let p: ExactPoly = s.parse().unwrap();
            let expect = if s == "0,0,1" { "0,0,1" } else { s };
            assert_eq!(p.to_string(), expect);
        }
        assert_eq!(ExactPoly::from_integer(6).to_string(), "6");
        assert_eq!(ExactPoly::zero().to_string(), "0");
        // Trailing zero coefficients canonicalize away.
        let p: ExactPoly = "1,2,0".parse().unwrap();
        assert_eq!(p.to_string(), "1,2");
        assert!("1/0".parse::<ExactPoly>().is_err());
        assert!("".parse::<ExactPoly>().is_err());
        assert!("x".parse::<ExactPoly>().is_err());
    }

    #[test]
    fn rational_evaluation_matches_expansion() {
        let p = poly(&[(2, 1), (-3, 1), (1, 2)]); // 2 - 3x + x^2/2
        let x = rat(4, 3);
        let direct = rat(2, 1) - rat(3, 1) * &x + rat(1, 2) * &x * &x;
        assert_eq!(p.eval_rational(&x), direct);
    }

    #[test]
    fn shared_root_kills_the_resultant() {
        // y^2 - 3y + 2 and y^2 - 5y + 6 share the root y = 2.
        let p = Quadratic::new(
            ExactPoly::from_integer(1),
            ExactPoly::from_integer(-3),
            ExactPoly::from_integer(2),
        );
        let q = Quadratic::new(
            ExactPoly::from_integer(1),
            ExactPoly::from_integer(-5),
            ExactPoly::from_integer(6),
        );
        assert!(quadratic_resultant(&p, &q).is_zero());
        // y^2 - 1 and y^2 - 4 share none; the resultant is 9.
        let p = Quadratic::new(
            ExactPoly::from_integer(1),
            ExactPoly::zero(),
            ExactPoly::from_integer(-1),
        );
        let q = Quadratic::new(
            ExactPoly::from_integer(1),
            ExactPoly::zero(),
            ExactPoly::from_integer(-4),
        );
        assert_eq!(quadratic_resultant(&p, &q), ExactPoly::from_integer(9));
    }

    #[test]
    fn resultant_with_polynomial_coefficients() {
        // y^2 - x and y^2 - (x + 1) never share a root; the resultant is 1.
        let p = Quadratic::new(
            ExactPoly::from_integer(1),
            ExactPoly::zero(),
            ExactPoly::monomial(1, rat(-1, 1)),
        );
        let q = Quadratic::new(
            ExactPoly::from_integer(1),
            ExactPoly::zero(),
            poly(&[(-1, 1), (-1, 1)]),
        );
        assert_eq!(quadratic_resultant(&p, &q), ExactPoly::from_integer(1));
    }

    fn arb_poly() -> impl Strategy<Value = ExactPoly> {
        prop::collection::vec((-20i64..20, 1i64..8), 0..6)
            .prop_map(|v| ExactPoly::from_coeffs(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn addition_commutes_and_associates(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        }

        #[test]
        fn multiplication_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn text_round_trip(a in arb_poly()) {
            let s = a.to_string();
            let back: ExactPoly = s.parse().unwrap();
            prop_assert_eq!(a, back);
        }

        #[test]
        fn ball_evaluation_contains_exact_value(
            a in arb_poly(),
            (xn, xd) in (-40i64..40, 1i64..10),
        ) {
            let x = rat(xn, xd);
            let exact = a.eval_rational(&x);
            let xball = CertifiedReal::from_rational(&x, 128);
            let v = a.eval_ball(&xball, PrecisionConfig::new(128));
            prop_assert!(v.contains_rational(&exact));
        }
    }
}
