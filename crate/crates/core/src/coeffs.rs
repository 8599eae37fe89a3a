//! Coefficient quadruples `(A, B, B~, C)` of the rolled cross-product
//! recursion, computed exactly and memoized.
//!
//! The quadruple at `(m, n)` expresses `x^{2n} W_{m+n+1}` in terms of `W_m`
//! and `W_{m-1}`. The base case is `(2m, 0, -1, 0)`; each step down in `m`
//! and up in `n` applies four exact polynomial relations to the quadruple at
//! `(m+1, n-1)`. The residue of `A` modulo `x^4` has a closed form that
//! serves as an independent cross-check and as the nonvanishing certificate
//! used by the elimination step.

use crate::algebra::{ExactPoly, ExactRational};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// One exact coefficient quadruple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffQuad {
    pub m: i64,
    pub n: u32,
    pub a: ExactPoly,
    pub b: ExactPoly,
    pub b_tilde: ExactPoly,
    pub c: ExactPoly,
}

fn int_rat(v: BigInt) -> ExactRational {
    ExactRational::from_integer(v)
}

impl CoeffQuad {
    /// Depth-zero quadruple `(2m, 0, -1, 0)`.
    pub fn base(m: i64) -> Self {
        CoeffQuad {
            m,
            n: 0,
            a: ExactPoly::constant(int_rat(BigInt::from(2) * m)),
            b: ExactPoly::zero(),
            b_tilde: ExactPoly::from_integer(-1),
            c: ExactPoly::zero(),
        }
    }

    /// One recursion step: the quadruple at `(m, prev.n + 1)` from the one
    /// at `(m + 1, prev.n)`.
    pub fn step(prev: &CoeffQuad, m: i64) -> Self {
        debug_assert_eq!(prev.m, m + 1, "step consumes the (m+1, n-1) quadruple");
        let mb = BigInt::from(m);
        let neg_4m2 = int_rat(BigInt::from(-4) * &mb * &mb);
        let two_m = int_rat(BigInt::from(2) * &mb);
        let four_m = int_rat(BigInt::from(4) * &mb);
        let a = prev
            .a
            .scale(&neg_4m2)
            .add(&prev.b.mul_xk(4).scale(&two_m))
            .sub(&prev.c.mul_xk(4));
        let b = prev.b_tilde.clone();
        let b_tilde = prev.a.scale(&four_m).sub(&prev.b.mul_xk(4));
        let c = prev.a.clone();
        CoeffQuad {
            m,
            n: prev.n + 1,
            a,
            b,
            b_tilde,
            c,
        }
    }

    /// Exact check of the depth-zero shape.
    pub fn satisfies_base(&self) -> bool {
        self.n == 0 && *self == CoeffQuad::base(self.m)
    }

    /// Exact check of the four step relations against the parent quadruple.
    pub fn satisfies_step(&self, prev: &CoeffQuad) -> bool {
        self.n >= 1 && prev.m == self.m + 1 && prev.n == self.n - 1 && {
            *self == CoeffQuad::step(prev, self.m)
        }
    }
}

/// Memoized quadruples, keyed by `(m, n)`.
///
/// Filling is a single-writer phase; once populated the table is read-only
/// and safe to share across threads.
#[derive(Clone, Debug, Default)]
pub struct CoeffTable {
    entries: HashMap<(i64, u32), CoeffQuad>,
}

/// A persisted table entry failed re-verification.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("coefficient table entry ({m}, {n}) fails its defining relations")]
pub struct CorruptEntry {
    pub m: i64,
    pub n: u32,
}

impl CoeffTable {
    pub fn new() -> Self {
        CoeffTable::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, m: i64, n: u32) -> Option<&CoeffQuad> {
        self.entries.get(&(m, n))
    }

    pub fn entries(&self) -> impl Iterator<Item = &CoeffQuad> {
        self.entries.values()
    }

    /// The quadruple at `(m, n)`, computing and memoizing the whole
    /// dependency chain `(m+n, 0), (m+n-1, 1), ..., (m, n)` as needed.
    pub fn quad(&mut self, m: i64, n: u32) -> &CoeffQuad {
        if !self.entries.contains_key(&(m, n)) {
            let top = m + n as i64;
            let mut current = self
                .entries
                .get(&(top, 0))
                .cloned()
                .unwrap_or_else(|| CoeffQuad::base(top));
            self.entries.entry((top, 0)).or_insert_with(|| current.clone());
            for j in 1..=n {
                let mj = top - j as i64;
                current = match self.entries.get(&(mj, j)) {
                    Some(q) => q.clone(),
                    None => {
                        let next = CoeffQuad::step(&current, mj);
                        self.entries.insert((mj, j), next.clone());
                        next
                    }
                };
            }
        }
        &self.entries[&(m, n)]
    }

    /// Rebuild a table from persisted entries, re-verifying every quadruple
    /// against its defining relations. Entries of depth `n >= 1` whose
    /// parent is absent from the batch are rejected as unverifiable.
    pub fn from_entries(entries: Vec<CoeffQuad>) -> Result<Self, CorruptEntry> {
        let mut table = CoeffTable::new();
        for q in entries {
            table.entries.insert((q.m, q.n), q);
        }
        for q in table.entries.values() {
            let ok = if q.n == 0 {
                q.satisfies_base()
            } else {
                table
                    .entries
                    .get(&(q.m + 1, q.n - 1))
                    .is_some_and(|prev| q.satisfies_step(prev))
            };
            if !ok {
                return Err(CorruptEntry { m: q.m, n: q.n });
            }
        }
        Ok(table)
    }
}

/// Constant residue of `A_{m,n}` modulo `x^4` in closed form:
/// `2 (-4)^n (m+n) prod_{k=0}^{n-1} (m+k)^2`, for `n >= 1`.
///
/// Nonzero whenever `m > 0` or `m < -n`, which is what certifies that the
/// refutation polynomial keeps a nonzero constant term.
pub fn closed_form_mod_x4(m: i64, n: u32) -> ExactRational {
    assert!(n >= 1, "depth zero uses the base case directly");
    let mut v = BigInt::from(2) * BigInt::from(m + n as i64);
    for _ in 0..n {
        v *= -4;
    }
    for k in 0..n as i64 {
        let f = BigInt::from(m + k);
        v *= &f * &f;
    }
    int_rat(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn int_poly(v: i64) -> ExactPoly {
        ExactPoly::from_integer(v)
    }

    #[test]
    fn depth_zero_is_the_three_term_recurrence() {
        for m in [-3i64, 0, 1, 7] {
            let mut t = CoeffTable::new();
            let q = t.quad(m, 0).clone();
            assert_eq!(q.a, int_poly(2 * m));
            assert!(q.b.is_zero());
            assert_eq!(q.b_tilde, int_poly(-1));
            assert!(q.c.is_zero());
            assert!(q.satisfies_base());
        }
    }

    #[test]
    fn depth_one_matches_hand_expansion() {
        // One application of the step relations to the base case gives
        // A = -8m^2(m+1), B = -1, B~ = 8m(m+1), C = 2(m+1).
        for m in -5i64..=5 {
            let mut t = CoeffTable::new();
            let q = t.quad(m, 1).clone();
            assert_eq!(q.a, int_poly(-8 * m * m * (m + 1)));
            assert_eq!(q.b, int_poly(-1));
            assert_eq!(q.b_tilde, int_poly(8 * m * (m + 1)));
            assert_eq!(q.c, int_poly(2 * (m + 1)));
        }
    }

    #[test]
    fn depth_two_residue_at_order_one() {
        let mut t = CoeffTable::new();
        let q = t.quad(1, 2).clone();
        assert_eq!(q.a.mod_xk(4), int_poly(384));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_mod_x4(1, 1), ExactRational::from_integer((-16).into()));
        assert_eq!(closed_form_mod_x4(2, 3), ExactRational::from_integer((-368640).into()));
        for n in 1..=6u32 {
            assert!(closed_form_mod_x4(-(n as i64), n).is_zero());
        }
    }

    #[test]
    fn recursion_agrees_with_closed_form_everywhere() {
        let mut t = CoeffTable::new();
        for m in -10i64..=10 {
            for n in 1..=8u32 {
                let a_mod = t.quad(m, n).a.mod_xk(4);
                let expect = closed_form_mod_x4(m, n);
                assert_eq!(
                    a_mod,
                    ExactPoly::constant(expect),
                    "residue mismatch at ({m}, {n})"
                );
            }
        }
    }

    #[test]
    fn constant_term_nonzero_off_the_degenerate_band() {
        let mut t = CoeffTable::new();
        for m in -10i64..=10 {
            for n in 1..=8u32 {
                if m > 0 || m < -(n as i64) {
                    let q = t.quad(m, n);
                    assert!(
                        !q.a.constant_term().is_zero(),
                        "constant term vanished at ({m}, {n})"
                    );
                }
            }
        }
    }

    #[test]
    fn degrees_grow_by_at_most_four_per_step() {
        let mut t = CoeffTable::new();
        for m in -6i64..=6 {
            for n in 0..=8u32 {
                let q = t.quad(m, n);
                let cap = 4 * n as usize;
                for p in [&q.a, &q.b, &q.b_tilde, &q.c] {
                    assert!(p.degree().unwrap_or(0) <= cap);
                }
            }
        }
    }

    #[test]
    fn every_memoized_entry_verifies() {
        let mut t = CoeffTable::new();
        t.quad(-4, 7);
        t.quad(2, 5);
        let entries: Vec<_> = t.entries().cloned().collect();
        assert!(entries.len() >= 14);
        let rebuilt = CoeffTable::from_entries(entries).unwrap();
        assert_eq!(rebuilt.len(), t.len());
    }

    #[test]
    fn corrupted_entries_are_rejected() {
        let mut t = CoeffTable::new();
        t.quad(1, 3);
        let mut entries: Vec<_> = t.entries().cloned().collect();
        let victim = entries.iter_mut().find(|q| q.n == 3).unwrap();
        victim.a = victim.a.add(&ExactPoly::from_integer(1));
        let err = CoeffTable::from_entries(entries).unwrap_err();
        assert_eq!(err, CorruptEntry { m: 1, n: 3 });
        // A depth-one entry with a missing parent is unverifiable.
        let mut t = CoeffTable::new();
        let orphan = t.quad(0, 1).clone();
        assert!(CoeffTable::from_entries(vec![orphan]).is_err());
    }
}
