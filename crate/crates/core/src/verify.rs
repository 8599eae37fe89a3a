//! Executable identity suite: the working identities of the evaluation and
//! recursion layers, each checked as a residual enclosure over a
//! configurable grid.
//!
//! A residual passes at a grid point when its enclosure contains zero AND
//! its radius stays below a cancellation threshold tied to the magnitudes
//! of the combined terms; a huge radius trivially contains zero and must
//! not count as a pass.

use crate::algebra::ExactRational;
use crate::ball::{CertifiedReal, Dyadic, PrecisionConfig};
use crate::bessel::{eval_f, eval_i, eval_j, eval_w, EvalError};
use crate::coeffs::CoeffTable;
use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use std::cmp::Ordering;

/// Stable labels for every identity in the suite, in run order.
pub const IDENTITY_NAMES: [&str; 8] = [
    "cross-product-two-forms",
    "j-three-term-recurrence",
    "i-three-term-recurrence",
    "riccati-key-identity",
    "f-ratio-reflection",
    "w-three-term-recurrence",
    "rolled-recursion",
    "w-neighbor-sum",
];

/// Index of the one identity that consumes the depth grid.
const ROLLED: usize = 6;

/// Evaluation grid: orders, recursion depths, and argument points.
#[derive(Clone, Debug)]
pub struct GridConfig {
    pub orders: Vec<i32>,
    pub depths: Vec<u32>,
    pub points: Vec<ExactRational>,
}

fn quarter_points(upto_quarters: i64) -> Vec<ExactRational> {
    (1..=upto_quarters)
        .map(|k| ExactRational::new(BigInt::from(k), BigInt::from(4)))
        .collect()
}

impl GridConfig {
    /// Full grid: orders -6..=12, depths 0..=6, x from 1/4 to 20 in
    /// quarter steps.
    pub fn standard() -> Self {
        GridConfig {
            orders: (-6..=12).collect(),
            depths: (0..=6).collect(),
            points: quarter_points(80),
        }
    }

    /// Small grid for fast checks.
    pub fn quick() -> Self {
        GridConfig {
            orders: vec![-3, -1, 0, 1, 2, 5],
            depths: vec![0, 1, 3],
            points: vec![
                ExactRational::new(BigInt::from(1), BigInt::from(2)),
                ExactRational::from_integer(BigInt::from(3)),
                ExactRational::new(BigInt::from(39), BigInt::from(4)),
            ],
        }
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig::standard()
    }
}

/// Why a grid point failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    /// The residual enclosure excludes zero: the identity is violated.
    ExcludesZero,
    /// The residual contains zero only because its radius is too large.
    RadiusAboveThreshold,
    /// Evaluation could not meet its precision target at this point.
    EvalFailed,
}

/// One failed grid point.
#[derive(Clone, Debug)]
pub struct IdentityFailure {
    pub m: i32,
    pub n: u32,
    pub x: ExactRational,
    pub kind: FailureKind,
}

/// Outcome of one identity over the whole grid.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub identity_name: &'static str,
    pub grid: String,
    pub checks: u64,
    /// Largest residual radius seen; a precision health metric.
    pub max_residual_radius: CertifiedReal,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Sum the terms and their magnitude scale; the identity holds when the
/// sum encloses zero tightly relative to the scale.
fn residual(terms: &[CertifiedReal], bits: u32) -> (CertifiedReal, Dyadic) {
    let mut sum = CertifiedReal::zero();
    let mut scale = Dyadic::zero();
    for t in terms {
        sum = sum.add(t, bits);
        scale = scale.add(&t.max_abs());
    }
    (sum, scale)
}

fn int_ball(v: i64) -> CertifiedReal {
    CertifiedReal::from_integer(v)
}

/// Terms of identity `idx` at one grid point; they must sum to zero.
fn identity_terms(
    idx: usize,
    m: i32,
    n: u32,
    x: &CertifiedReal,
    table: &CoeffTable,
    cfg: PrecisionConfig,
) -> Result<Vec<CertifiedReal>, EvalError> {
    let b = cfg.working_bits();
    let two_m = int_ball(2 * m as i64);
    Ok(match idx {
        // I_{m+1}J_m + I_mJ_{m+1} agrees with I_{m-1}J_m - I_mJ_{m-1}.
        0 => {
            let (im, jm) = (eval_i(m, x, cfg)?, eval_j(m, x, cfg)?);
            let first = eval_i(m + 1, x, cfg)?
                .mul(&jm, b)
                .add(&im.mul(&eval_j(m + 1, x, cfg)?, b), b);
            let second = eval_i(m - 1, x, cfg)?
                .mul(&jm, b)
                .sub(&im.mul(&eval_j(m - 1, x, cfg)?, b), b);
            vec![first, second.neg()]
        }
        // x(J_{m-1} + J_{m+1}) = 2m J_m.
        1 => vec![
            x.mul(&eval_j(m - 1, x, cfg)?, b),
            x.mul(&eval_j(m + 1, x, cfg)?, b),
            two_m.mul(&eval_j(m, x, cfg)?, b).neg(),
        ],
        // x(I_{m-1} - I_{m+1}) = 2m I_m.
        2 => vec![
            x.mul(&eval_i(m - 1, x, cfg)?, b),
            x.mul(&eval_i(m + 1, x, cfg)?, b).neg(),
            two_m.mul(&eval_i(m, x, cfg)?, b).neg(),
        ],
        // x^2 F_{m+1} F_m = 1 - 2m F_m.
        3 => {
            let fm = eval_f(m, x, cfg)?;
            vec![
                x.pow(2, b).mul(&eval_f(m + 1, x, cfg)?, b).mul(&fm, b),
                int_ball(-1),
                two_m.mul(&fm, b),
            ]
        }
        // x^2 F_{-m+1} = x^2 F_{m+1} + 2m.
        4 => {
            let x2 = x.pow(2, b);
            vec![
                x2.mul(&eval_f(1 - m, x, cfg)?, b),
                x2.mul(&eval_f(m + 1, x, cfg)?, b).neg(),
                two_m.neg(),
            ]
        }
        // W_{m+1} = 2m F_m W_m + (2m F_m - 1) W_{m-1}.
        5 => {
            let fm2m = two_m.mul(&eval_f(m, x, cfg)?, b);
            vec![
                eval_w(m + 1, x, cfg)?,
                fm2m.mul(&eval_w(m, x, cfg)?, b).neg(),
                fm2m
                    .sub(&int_ball(1), b)
                    .mul(&eval_w(m - 1, x, cfg)?, b)
                    .neg(),
            ]
        }
        // Rolled recursion, multiplied through by F_m:
        // x^{2n} F_m W_{m+n+1} = (A F_m^2 + x^2 B F_m + C) W_m
        //                      + (A F_m^2 + Bt F_m - C) W_{m-1}.
        6 => {
            let q = table
                .get(m as i64, n)
                .expect("table prefilled over the grid");
            let fm = eval_f(m, x, cfg)?;
            let fm2 = fm.pow(2, b);
            let (a, c) = (q.a.eval_ball(x, cfg), q.c.eval_ball(x, cfg));
            let bx2 = x.pow(2, b).mul(&q.b.eval_ball(x, cfg), b);
            let bt = q.b_tilde.eval_ball(x, cfg);
            let lhs = x
                .pow(2 * n, b)
                .mul(&fm, b)
                .mul(&eval_w(m + n as i32 + 1, x, cfg)?, b);
            let on_wm = a.mul(&fm2, b).add(&bx2.mul(&fm, b), b).add(&c, b);
            let on_wm1 = a.mul(&fm2, b).add(&bt.mul(&fm, b), b).sub(&c, b);
            vec![
                lhs,
                on_wm.mul(&eval_w(m, x, cfg)?, b).neg(),
                on_wm1.mul(&eval_w(m - 1, x, cfg)?, b).neg(),
            ]
        }
        // x(W_{m-1} + W_{m+1}) = 4m I_m J_m.
        7 => vec![
            x.mul(&eval_w(m - 1, x, cfg)?, b),
            x.mul(&eval_w(m + 1, x, cfg)?, b),
            int_ball(4 * m as i64)
                .mul(&eval_i(m, x, cfg)?, b)
                .mul(&eval_j(m, x, cfg)?, b)
                .neg(),
        ],
        _ => unreachable!("identity index out of range"),
    })
}

/// Run every identity over the grid. Failures are report content, never
/// errors; an all-green run returns eight reports with empty failure
/// lists.
pub fn run_identity_suite(grid: &GridConfig, cfg: PrecisionConfig) -> Vec<IdentityReport> {
    assert!(
        grid.orders.iter().all(|&m| m.abs() <= 16),
        "orders limited to |m| <= 16"
    );
    assert!(
        grid.depths.iter().all(|&n| n <= 8),
        "depths limited to n <= 8"
    );
    assert!(
        grid.points.iter().all(|x| {
            x.is_positive() && *x <= ExactRational::from_integer(BigInt::from(40))
        }),
        "points limited to x in (0, 40]"
    );

    let wb = cfg.working_bits();
    let mut table = CoeffTable::new();
    for &m in &grid.orders {
        for &n in &grid.depths {
            table.quad(m as i64, n);
        }
    }
    let points: Vec<(ExactRational, CertifiedReal)> = grid
        .points
        .iter()
        .map(|q| (q.clone(), CertifiedReal::from_rational(q, wb)))
        .collect();

    // The radius threshold: below 2^(-wb/2) of the combined term scale.
    let cancel_shift = -((wb / 2) as i64);

    IDENTITY_NAMES
        .iter()
        .enumerate()
        .map(|(idx, &name)| {
            let depths: &[u32] = if idx == ROLLED { &grid.depths } else { &[0] };
            let mut cases: Vec<(i32, u32, &(ExactRational, CertifiedReal))> = Vec::new();
            for &m in &grid.orders {
                for &n in depths {
                    for p in &points {
                        cases.push((m, n, p));
                    }
                }
            }
            let outcomes: Vec<(Dyadic, Option<FailureKind>)> = cases
                .par_iter()
                .map(|&(m, n, (_, xb))| {
                    match identity_terms(idx, m, n, xb, &table, cfg) {
                        Err(_) => (Dyadic::zero(), Some(FailureKind::EvalFailed)),
                        Ok(terms) => {
                            let (res, scale) = residual(&terms, wb);
                            let rad = res.rad().clone();
                            let kind = if !res.contains_zero() {
                                Some(FailureKind::ExcludesZero)
                            } else if rad > scale.mul_pow2(cancel_shift) {
                                Some(FailureKind::RadiusAboveThreshold)
                            } else {
                                None
                            };
                            (rad, kind)
                        }
                    }
                })
                .collect();
            let mut max_rad = Dyadic::zero();
            let mut failures = Vec::new();
            for ((m, n, (xq, _)), (rad, kind)) in cases.iter().zip(&outcomes) {
                if rad.cmp(&max_rad) == Ordering::Greater {
                    max_rad = rad.clone();
                }
                if let Some(kind) = kind {
                    failures.push(IdentityFailure {
                        m: *m,
                        n: *n,
                        x: xq.clone(),
                        kind: *kind,
                    });
                }
            }
            IdentityReport {
                identity_name: name,
                grid: format!(
                    "{} orders x {} depths x {} points",
                    grid.orders.len(),
                    depths.len(),
                    grid.points.len()
                ),
                checks: cases.len() as u64,
                max_residual_radius: CertifiedReal::exact(max_rad),
                failures,
            }
        })
        .collect()
}
