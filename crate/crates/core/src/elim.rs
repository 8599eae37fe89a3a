//! Quadratic-pair elimination and refutation certificates.
//!
//! A joint zero of three cross products at orders `m1 < m2 < m3` forces the
//! ratio `F_{m2+1}` to satisfy two quadratics with exact polynomial
//! coefficients: one from rolling the recursion up to `m3`, one from rolling
//! it down to `m1`. Eliminating the quadratic term yields a linear relation
//! `L x^2 F + M = 0`; back-substitution yields a refutation polynomial `R`
//! whose constant term is certified nonzero. A joint zero at `x_0` would
//! force both the linear relation and `R(x_0) = 0`, so an enclosure
//! excluding zero on either path refutes the triple over that interval.

use crate::algebra::{quadratic_resultant, ExactPoly, ExactRational, Quadratic};
use crate::ball::{CertifiedReal, PrecisionConfig};
use crate::bessel::{self, EvalError};
use crate::coeffs::{closed_form_mod_x4, CoeffTable};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Validated candidate order triple. Adjacent orders are excluded up front:
/// consecutive cross products never share a positive zero, so only gaps of
/// at least two are worth refuting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleIndex {
    m1: u32,
    m2: u32,
    m3: u32,
}

/// Rejected order triple.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TripleError {
    #[error("orders must be strictly ascending: {0}, {1}, {2}")]
    NotAscending(u32, u32, u32),
    #[error("adjacent orders {0} and {1} share no zeros; the triple is impossible outright")]
    AdjacentOrders(u32, u32),
}

impl TripleIndex {
    pub fn new(m1: u32, m2: u32, m3: u32) -> Result<Self, TripleError> {
        if !(m1 < m2 && m2 < m3) {
            return Err(TripleError::NotAscending(m1, m2, m3));
        }
        if m2 == m1 + 1 {
            return Err(TripleError::AdjacentOrders(m1, m2));
        }
        if m3 == m2 + 1 {
            return Err(TripleError::AdjacentOrders(m2, m3));
        }
        Ok(TripleIndex { m1, m2, m3 })
    }

    pub fn orders(&self) -> (u32, u32, u32) {
        (self.m1, self.m2, self.m3)
    }

    /// Downward gap `m2 - m1 - 2`.
    pub fn l(&self) -> u32 {
        self.m2 - self.m1 - 2
    }

    /// Pivot order `m2`.
    pub fn m(&self) -> u32 {
        self.m2
    }

    /// Upward gap `m3 - m2 - 2`.
    pub fn n(&self) -> u32 {
        self.m3 - self.m2 - 2
    }
}

/// Certificate construction failure.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ElimError {
    /// A structural check failed; this signals an implementation bug, never
    /// a property of the input triple.
    #[error("certificate invariant violated: {0}")]
    InvariantViolation(&'static str),
    /// Both eliminant parts vanish identically; not expected for any valid
    /// triple.
    #[error("degenerate triple: both eliminant parts are identically zero")]
    DegenerateTriple,
}

/// Exact elimination certificate for one order triple.
///
/// `lin_coeff` and `lin_const` are the `L` and `M` of the linear relation
/// `L x^2 F_{m+1} + M = 0`; `refutation` is `R` after dividing out
/// `x^stripped_x_power` (always zero in practice, certified by the constant
/// term; kept for exact bookkeeping).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationCertificate {
    pub triple: TripleIndex,
    pub q_up: Quadratic,
    pub q_down: Quadratic,
    pub lin_coeff: ExactPoly,
    pub lin_const: ExactPoly,
    pub refutation: ExactPoly,
    #[serde(with = "crate::algebra::rational_string")]
    pub refutation_constant: ExactRational,
    pub stripped_x_power: u32,
}

/// Quadratic in `F_{m+1}` satisfied when the cross products at orders `m`
/// and `m + n + 2` share a zero: `(A_{m+1,n}, x^2 B_{m+1,n}, C_{m+1,n})`.
pub fn quadratic_up(m: u32, n: u32, table: &mut CoeffTable) -> Quadratic {
    let q = table.quad(m as i64 + 1, n).clone();
    Quadratic::new(q.a, q.b.mul_xk(2), q.c)
}

/// Quadratic in `F_{m+1}` satisfied when the cross products at orders `m`
/// and `m - l - 2` share a zero. Obtained from the upward form at order
/// `-m` through the reflection `x^2 F_{-m+1} = x^2 F_{m+1} + 2m`, expanded:
/// with `A' = A_{-m+1,l}` and so on,
/// `(x^4 A', 4m x^2 A' + x^6 B', 4m^2 A' + 2m x^4 B' + x^4 C')`.
pub fn quadratic_down(m: u32, l: u32, table: &mut CoeffTable) -> Quadratic {
    assert!(m >= 1, "downward direction needs a positive pivot order");
    let q = table.quad(1 - m as i64, l).clone();
    let four_m = ExactRational::from_integer(BigInt::from(4u64 * m as u64));
    let two_m = ExactRational::from_integer(BigInt::from(2u64 * m as u64));
    let four_m2 = ExactRational::from_integer(BigInt::from(4u64 * m as u64 * m as u64));
    let a = q.a.mul_xk(4);
    let b = q.a.mul_xk(2).scale(&four_m).add(&q.b.mul_xk(6));
    let c = q
        .a
        .scale(&four_m2)
        .add(&q.b.mul_xk(4).scale(&two_m))
        .add(&q.c.mul_xk(4));
    Quadratic::new(a, b, c)
}

/// Step 1 and 2 of the elimination on an arbitrary quadratic pair:
/// the unstripped linear parts `(L x^2, M) = (a1 b2 - a2 b1, a1 c2 - a2 c1)`
/// and the back-substituted polynomial `a1 M^2 - b1 M (L x^2) + c1 (L x^2)^2`.
fn back_substitute(up: &Quadratic, down: &Quadratic) -> (ExactPoly, ExactPoly, ExactPoly) {
    let lx2 = up.a.mul(&down.b).sub(&down.a.mul(&up.b));
    let m_part = up.a.mul(&down.c).sub(&down.a.mul(&up.c));
    let r = up
        .a
        .mul(&m_part.mul(&m_part))
        .sub(&up.b.mul(&m_part).mul(&lx2))
        .add(&up.c.mul(&lx2).mul(&lx2));
    (lx2, m_part, r)
}

/// Residue of `A_{m+1,n}` modulo `x^4` as a constant, valid for the index
/// ranges a certificate touches (`m + 1 >= 1` upward, `1 - m <= -l - 1`
/// downward).
fn a_residue(m: i64, n: u32) -> ExactRational {
    if n == 0 {
        ExactRational::from_integer(BigInt::from(2 * m))
    } else {
        closed_form_mod_x4(m, n)
    }
}

/// Build and fully verify the elimination certificate for a triple.
pub fn eliminate(
    t: TripleIndex,
    table: &mut CoeffTable,
) -> Result<EliminationCertificate, ElimError> {
    let (l, m, n) = (t.l(), t.m(), t.n());
    let q_up = quadratic_up(m, n, table);
    let q_down = quadratic_down(m, l, table);
    let (lx2, lin_const, r_raw) = back_substitute(&q_up, &q_down);

    let lin_coeff = lx2
        .div_xk(2)
        .ok_or(ElimError::InvariantViolation("eliminant coefficient lacks its x^2 factor"))?;
    if lin_coeff.is_zero() && lin_const.is_zero() {
        return Err(ElimError::DegenerateTriple);
    }
    if lin_coeff.is_zero() {
        return Err(ElimError::InvariantViolation("eliminant coefficient vanished"));
    }
    if r_raw.is_zero() {
        return Err(ElimError::InvariantViolation("refutation polynomial vanished"));
    }
    let stripped_x_power = (0..)
        .find(|&k| !r_raw.coeff(k).is_zero())
        .expect("nonzero polynomial has a lowest term") as u32;
    let refutation = r_raw
        .div_xk(stripped_x_power as usize)
        .expect("dividing out the recorded power is exact");

    // Residue checks against the closed form: L = 4m A A', M = 4m^2 A A',
    // R = 16 m^4 A^3 A'^2, all modulo x^4.
    let a_up = a_residue(m as i64 + 1, n);
    let a_down = a_residue(1 - m as i64, l);
    let m_rat = ExactRational::from_integer(BigInt::from(m as i64));
    let aa = &a_up * &a_down;
    let four_m_aa = ExactRational::from_integer(BigInt::from(4)) * &m_rat * &aa;
    if lin_coeff.mod_xk(4) != ExactPoly::constant(four_m_aa.clone()) {
        return Err(ElimError::InvariantViolation("eliminant coefficient residue mismatch"));
    }
    if lin_const.mod_xk(4) != ExactPoly::constant(&four_m_aa * &m_rat) {
        return Err(ElimError::InvariantViolation("eliminant constant residue mismatch"));
    }
    let r_residue = ExactRational::from_integer(BigInt::from(16))
        * &m_rat
        * &m_rat
        * &m_rat
        * &m_rat
        * &a_up
        * &a_up
        * &a_up
        * &a_down
        * &a_down;
    if refutation.mod_xk(4) != ExactPoly::constant(r_residue) {
        return Err(ElimError::InvariantViolation("refutation residue mismatch"));
    }
    let refutation_constant = refutation.constant_term();
    if refutation_constant.is_zero() {
        return Err(ElimError::InvariantViolation("refutation constant term vanished"));
    }

    // Independent cross-check: the back-substitution equals
    // `a1 * Res(q_up, q_down)` as an exact polynomial identity.
    let res = quadratic_resultant(&q_up, &q_down);
    if q_up.a.mul(&res) != r_raw {
        return Err(ElimError::InvariantViolation("resultant equivalence failed"));
    }

    Ok(EliminationCertificate {
        triple: t,
        q_up,
        q_down,
        lin_coeff,
        lin_const,
        refutation,
        refutation_constant,
        stripped_x_power,
    })
}

/// Which certificate path excluded zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RefutationPath {
    /// The refutation polynomial itself is bounded away from zero.
    Resultant,
    /// The linear eliminant `L x^2 F_{m+1} + M` is bounded away from zero.
    LinearEliminant,
}

/// Outcome of refuting one triple over one argument enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// No joint zero of the three cross products exists inside the
    /// argument enclosure.
    Refuted {
        path: RefutationPath,
        enclosure: CertifiedReal,
    },
    /// Neither path excluded zero at the working precision.
    Inconclusive {
        r_enclosure: CertifiedReal,
        linear_enclosure: Option<CertifiedReal>,
    },
}

impl Refutation {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Refutation::Refuted { .. })
    }
}

/// Refute a triple zero inside `x`: a joint zero would force both
/// `R(x_0) = 0` and `L(x_0) x_0^2 F_{m+1}(x_0) + M(x_0) = 0`, so either
/// enclosure excluding zero suffices.
pub fn refute_triple(
    cert: &EliminationCertificate,
    x: &CertifiedReal,
    cfg: PrecisionConfig,
) -> Refutation {
    let r_ball = cert.refutation.eval_ball(x, cfg);
    if !r_ball.contains_zero() {
        return Refutation::Refuted {
            path: RefutationPath::Resultant,
            enclosure: r_ball,
        };
    }
    let linear = linear_eliminant_ball(cert, x, cfg);
    match linear {
        Ok(lin) if !lin.contains_zero() => Refutation::Refuted {
            path: RefutationPath::LinearEliminant,
            enclosure: lin,
        },
        Ok(lin) => Refutation::Inconclusive {
            r_enclosure: r_ball,
            linear_enclosure: Some(lin),
        },
        Err(_) => Refutation::Inconclusive {
            r_enclosure: r_ball,
            linear_enclosure: None,
        },
    }
}

/// Enclosure of `L(x) x^2 F_{m+1}(x) + M(x)`.
fn linear_eliminant_ball(
    cert: &EliminationCertificate,
    x: &CertifiedReal,
    cfg: PrecisionConfig,
) -> Result<CertifiedReal, EvalError> {
    let bits = cfg.working_bits();
    let f = bessel::eval_f(cert.triple.m() as i32 + 1, x, cfg)?;
    let lv = cert.lin_coeff.eval_ball(x, cfg);
    let mv = cert.lin_const.eval_ball(x, cfg);
    Ok(lv.mul(&x.mul(x, bits), bits).mul(&f, bits).add(&mv, bits))
}
