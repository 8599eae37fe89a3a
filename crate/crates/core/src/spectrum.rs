//! Certified zero localization, eigenvalue enumeration, cross-order gap
//! scans, and the triple-refutation sweep.
//!
//! Scanning runs on `G_m = W_m / I_m`, which shares the positive zero set
//! of the cross product but stays bounded as the argument grows, so sign
//! changes remain visible on coarse grids. Grid points and bisection
//! midpoints are exact dyadics; every sign used to shrink a bracket is
//! certified by a ball enclosure that excludes zero. Completeness of the
//! enumeration is heuristic (transversal crossings on the grid) and is
//! cross-checked against an independent scan in the test suite, never
//! assumed silently.

use crate::algebra::ExactRational;
use crate::ball::{CertifiedReal, Dyadic, PrecisionConfig};
use crate::bessel;
use crate::coeffs::CoeffTable;
use crate::elim::{eliminate, refute_triple, ElimError, Refutation, TripleIndex};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

/// Largest supported scan endpoint.
pub const SCAN_CEILING: i64 = 100;

/// Reported gap pairs are capped at this many entries; positivity is still
/// asserted for every cross-order pair.
const MAX_REPORTED_PAIRS: usize = 200;

/// One certified zero of a cross product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroRecord {
    /// Order of the cross product.
    pub m: u32,
    /// One-based index among the positive zeros of that order.
    pub k: u32,
    /// Certified enclosure of the zero.
    pub enclosure: CertifiedReal,
    /// Fourth power of the enclosure: the plate eigenvalue.
    pub lambda: CertifiedReal,
    /// Spectral multiplicity contributed by this zero: the radial mode is
    /// unique at order zero and pairs with its mirror otherwise.
    pub degeneracy: u32,
}

/// One cross-order pair and the certified distance between its zeros.
#[derive(Clone, Debug)]
pub struct GapPair {
    pub first: ZeroRecord,
    pub second: ZeroRecord,
    pub gap: CertifiedReal,
}

/// Smallest cross-order distances over a scan window.
#[derive(Clone, Debug)]
pub struct GapReport {
    pub m_max: u32,
    pub pairs: Vec<GapPair>,
    pub min_gap: Option<CertifiedReal>,
}

/// One inconclusive refutation check, kept with its full outcome.
#[derive(Clone, Debug)]
pub struct InconclusiveCheck {
    pub triple: TripleIndex,
    pub zero: ZeroRecord,
    pub outcome: Refutation,
}

/// Summary of a triple-refutation sweep.
#[derive(Clone, Debug)]
pub struct TripleRefutationReport {
    pub m_max: u32,
    pub triple_count: u32,
    pub checks: u64,
    pub refuted: u64,
    pub inconclusive: Vec<InconclusiveCheck>,
}

/// Spectrum-level failures. All of them mean "escalate precision or shrink
/// the window", never "the mathematics is in doubt".
#[derive(Clone, Debug, thiserror::Error)]
pub enum SpectrumError {
    #[error("could not certify a sign for order {m} near x = {near}")]
    UnresolvedBracket { m: u32, near: f64 },
    #[error("scan ceiling reached before enumerating the requested count")]
    ScanCeiling,
    #[error("lambda enclosures at sorted positions {first} and {second} overlap at working precision")]
    UnresolvedOrder { first: usize, second: usize },
    #[error("gap between orders {m_a} and {m_b} could not be certified positive")]
    UnresolvedCoincidence { m_a: u32, m_b: u32 },
    #[error(transparent)]
    Certificate(#[from] ElimError),
}

fn rational(num: i64, den: i64) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

/// Dyadic stand-in for a rational point: the midpoint of its enclosure at
/// `bits`. Scan anchors need not sit exactly on decimal grid points; they
/// only need certified signs.
fn dyadic_near(q: &ExactRational, bits: u32) -> Dyadic {
    CertifiedReal::from_rational(q, bits).mid().clone()
}

/// Certified sign of `G_m` at an exact dyadic point. Starts with a cheap
/// probe and doubles the working precision up to four times the configured
/// bits before giving up.
fn certified_sign(m: u32, x: &Dyadic, cfg: &PrecisionConfig) -> Result<Ordering, SpectrumError> {
    let cap = cfg.working_bits() * 4;
    let ball = CertifiedReal::exact(x.clone());
    let mut bits = 64;
    loop {
        if let Some(g) = bessel::gm_ball(m as i32, &ball, bits) {
            if let Some(s) = g.sign_certain() {
                if s != Ordering::Equal {
                    return Ok(s);
                }
            }
        }
        if bits >= cap {
            return Err(SpectrumError::UnresolvedBracket {
                m,
                near: x.to_f64(),
            });
        }
        bits = (bits * 2).min(cap);
    }
}

struct Bracket {
    lo: Dyadic,
    hi: Dyadic,
    sign_lo: Ordering,
}

/// Shrink a certified sign-change bracket until its relative width meets
/// the target, bisecting on exact dyadic midpoints. When the midpoint sign
/// resists certification (the midpoint may sit essentially on the zero) one
/// off-center split is tried before reporting the bracket unresolved.
fn bisect_bracket(
    m: u32,
    mut lo: Dyadic,
    mut hi: Dyadic,
    sign_lo: Ordering,
    cfg: &PrecisionConfig,
) -> Result<CertifiedReal, SpectrumError> {
    let wb = cfg.working_bits();
    let target = cfg.target_radius_bits() as i64;
    let max_steps = cfg.target_radius_bits() + 96;
    for _ in 0..max_steps {
        let width = hi.sub(&lo);
        if width.mag_exponent() <= lo.mag_exponent() - target {
            return Ok(CertifiedReal::from_endpoints(&lo, &hi));
        }
        let (mid, _) = lo.add(&hi).mul_pow2(-1).round_to(wb + 16);
        if !(lo < mid && mid < hi) {
            break;
        }
        let split = match certified_sign(m, &mid, cfg) {
            Ok(s) => (mid, s),
            Err(e) => {
                let (alt, _) = lo
                    .add(&width.mul(&Dyadic::from_integer(17)).mul_pow2(-5))
                    .round_to(wb + 16);
                if !(lo < alt && alt < hi) {
                    return Err(e);
                }
                (alt.clone(), certified_sign(m, &alt, cfg)?)
            }
        };
        if split.1 == sign_lo {
            lo = split.0;
        } else {
            hi = split.0;
        }
    }
    Err(SpectrumError::UnresolvedBracket {
        m,
        near: lo.to_f64(),
    })
}

/// Locate every zero of the order-`m` cross product in `(0, x_max]`.
///
/// Grid step one tenth, with one finer pass at one hundredth inside any
/// sign-constant stretch between detected changes that is shorter than
/// half pi (asymptotic zero spacing is about pi, so short stretches are the
/// signature of a nearly tangent pair). Each bracket is then bisected to
/// the configured relative width.
pub fn find_zeros(
    m: u32,
    x_max: &ExactRational,
    cfg: PrecisionConfig,
) -> Result<Vec<ZeroRecord>, SpectrumError> {
    assert!(
        *x_max > ExactRational::from_integer(BigInt::from(0)),
        "scan endpoint must be positive"
    );
    assert!(
        *x_max <= ExactRational::from_integer(BigInt::from(SCAN_CEILING)),
        "scan endpoint exceeds the supported ceiling"
    );
    let wb = cfg.working_bits();
    let cells = (x_max * rational(10, 1)).floor().to_integer();
    let cells = cells.to_i64().expect("bounded by the scan ceiling");

    // Coarse pass: anchors near k/10 with certified signs. Positions are
    // tracked in hundredths so the fine pass shares the bookkeeping.
    let mut anchors: Vec<(i64, Dyadic)> = (1..=cells)
        .map(|k| (10 * k, dyadic_near(&rational(k, 10), wb)))
        .collect();
    let tail = dyadic_near(x_max, wb);
    if anchors.last().map_or(true, |(_, d)| *d < tail) {
        anchors.push((10 * cells + 1, tail));
    }
    let signs: Vec<Ordering> = anchors
        .par_iter()
        .map(|(_, d)| certified_sign(m, d, &cfg))
        .collect::<Result<_, _>>()?;

    let flips: Vec<usize> = (0..anchors.len().saturating_sub(1))
        .filter(|&i| signs[i] != signs[i + 1])
        .collect();

    let mut brackets: Vec<Bracket> = flips
        .iter()
        .map(|&i| Bracket {
            lo: anchors[i].1.clone(),
            hi: anchors[i + 1].1.clone(),
            sign_lo: signs[i],
        })
        .collect();

    // Fine pass inside suspiciously short sign-constant stretches.
    for w in flips.windows(2) {
        let (p, q) = (w[0], w[1]);
        // Rescan when the sign-constant stretch from anchor p+1 to anchor q
        // is shorter than half pi (157 hundredths).
        if anchors[q].0 - anchors[p + 1].0 >= 157 {
            continue;
        }
        let fine: Vec<Dyadic> = ((anchors[p + 1].0 + 1)..anchors[q].0)
            .map(|k| dyadic_near(&rational(k, 100), wb))
            .collect();
        let fine_signs: Vec<Ordering> = fine
            .par_iter()
            .map(|d| certified_sign(m, d, &cfg))
            .collect::<Result<_, _>>()?;
        let mut run: Vec<(Dyadic, Ordering)> = vec![(anchors[p + 1].1.clone(), signs[p + 1])];
        run.extend(fine.into_iter().zip(fine_signs));
        run.push((anchors[q].1.clone(), signs[q]));
        for pair in run.windows(2) {
            if pair[0].1 != pair[1].1 {
                brackets.push(Bracket {
                    lo: pair[0].0.clone(),
                    hi: pair[1].0.clone(),
                    sign_lo: pair[0].1,
                });
            }
        }
    }
    brackets.sort_by(|a, b| a.lo.cmp(&b.lo));

    let enclosures: Vec<CertifiedReal> = brackets
        .par_iter()
        .map(|b| bisect_bracket(m, b.lo.clone(), b.hi.clone(), b.sign_lo, &cfg))
        .collect::<Result<_, _>>()?;

    Ok(enclosures
        .into_iter()
        .enumerate()
        .map(|(i, enclosure)| {
            let lambda = enclosure.pow(4, wb);
            ZeroRecord {
                m,
                k: i as u32 + 1,
                enclosure,
                lambda,
                degeneracy: if m == 0 { 1 } else { 2 },
            }
        })
        .collect())
}

enum Enumeration {
    Sorted(Vec<ZeroRecord>),
    Overlap(usize, usize),
}

fn eigenvalues_once(count: u32, cfg: PrecisionConfig) -> Result<Enumeration, SpectrumError> {
    let ceiling = ExactRational::from_integer(BigInt::from(SCAN_CEILING));
    let mut cap = ExactRational::from_integer(BigInt::from(8));
    loop {
        let mut all: Vec<ZeroRecord> = Vec::new();
        let mut empty_streak = 0;
        let mut m = 0u32;
        // First zeros move outward with the order; two consecutive empty
        // orders end the sweep. Heuristic, backed by the oracle count
        // checks in the test suite.
        while empty_streak < 2 {
            let zs = find_zeros(m, &cap, cfg)?;
            if zs.is_empty() {
                empty_streak += 1;
            } else {
                empty_streak = 0;
                all.extend(zs);
            }
            m += 1;
        }
        if all.len() > count as usize {
            all.sort_by(|a, b| a.lambda.mid().cmp(b.lambda.mid()));
            // The requested prefix must be certifiably sorted, including
            // against the first record beyond the cut.
            for i in 0..(count as usize).min(all.len() - 1) {
                if all[i].lambda.upper() >= all[i + 1].lambda.lower() {
                    return Ok(Enumeration::Overlap(i, i + 1));
                }
            }
            all.truncate(count as usize);
            return Ok(Enumeration::Sorted(all));
        }
        if cap >= ceiling {
            return Err(SpectrumError::ScanCeiling);
        }
        cap = (&cap * rational(3, 2)).min(ceiling.clone());
    }
}

/// Enumerate the `count` smallest eigenvalues across all orders, certified
/// sorted, each with its spectral multiplicity. Overlapping enclosures
/// trigger automatic precision doubling up to four times the configured
/// bits.
pub fn eigenvalues(count: u32, cfg: PrecisionConfig) -> Result<Vec<ZeroRecord>, SpectrumError> {
    assert!((1..=500).contains(&count), "count must be in 1..=500");
    let mut overlap = (0, 0);
    for attempt in [cfg, cfg.doubled(), cfg.doubled().doubled()] {
        match eigenvalues_once(count, attempt)? {
            Enumeration::Sorted(v) => return Ok(v),
            Enumeration::Overlap(i, j) => overlap = (i, j),
        }
    }
    Err(SpectrumError::UnresolvedOrder {
        first: overlap.0,
        second: overlap.1,
    })
}

fn gap_scan_once(
    m_max: u32,
    x_max: &ExactRational,
    cfg: PrecisionConfig,
) -> Result<GapReport, SpectrumError> {
    let per_order: Vec<Vec<ZeroRecord>> = (0..=m_max)
        .into_par_iter()
        .map(|m| find_zeros(m, x_max, cfg))
        .collect::<Result<_, _>>()?;
    let wb = cfg.working_bits();
    let mut pairs: Vec<GapPair> = Vec::new();
    for (ia, za) in per_order.iter().enumerate() {
        for zb in per_order.iter().skip(ia + 1) {
            for a in za {
                for b in zb {
                    let gap = a.enclosure.sub(&b.enclosure, wb).abs();
                    if gap.contains_zero() {
                        return Err(SpectrumError::UnresolvedCoincidence { m_a: a.m, m_b: b.m });
                    }
                    pairs.push(GapPair {
                        first: a.clone(),
                        second: b.clone(),
                        gap,
                    });
                }
            }
        }
    }
    pairs.sort_by(|p, q| p.gap.mid().cmp(q.gap.mid()));
    let min_gap = pairs.first().map(|p| p.gap.clone());
    pairs.truncate(MAX_REPORTED_PAIRS);
    Ok(GapReport {
        m_max,
        pairs,
        min_gap,
    })
}

/// Locate all zeros of all orders up to `m_max` in `(0, x_max]` and certify
/// that no two zeros of distinct orders coincide, reporting the smallest
/// cross-order gaps in ascending order.
pub fn gap_scan(
    m_max: u32,
    x_max: &ExactRational,
    cfg: PrecisionConfig,
) -> Result<GapReport, SpectrumError> {
    assert!(m_max <= 32, "order ceiling for gap scans is 32");
    let mut last = None;
    for attempt in [cfg, cfg.doubled(), cfg.doubled().doubled()] {
        match gap_scan_once(m_max, x_max, attempt) {
            Err(SpectrumError::UnresolvedCoincidence { m_a, m_b }) => {
                last = Some(SpectrumError::UnresolvedCoincidence { m_a, m_b });
            }
            other => return other,
        }
    }
    Err(last.expect("three attempts were made"))
}

/// Run the refutation certificate of every valid order triple with all
/// three orders at most `m_max` against every zero of the triple's middle
/// order up to `x_max`.
///
/// A joint zero of the three cross products would in particular be a zero
/// of the middle order, so checking the certificate on the middle order's
/// zero enclosures covers every candidate in the window. Inconclusive
/// checks are retried at doubled and quadrupled precision before being
/// recorded; they are data, not errors.
pub fn refute_all_triples(
    m_max: u32,
    x_max: &ExactRational,
    cfg: PrecisionConfig,
) -> Result<TripleRefutationReport, SpectrumError> {
    assert!(m_max <= 16, "order ceiling for refutation sweeps is 16");
    let mut triples = Vec::new();
    for m2 in 2..=m_max.saturating_sub(2) {
        for m1 in 0..=(m2 - 2) {
            for m3 in (m2 + 2)..=m_max {
                triples.push(TripleIndex::new(m1, m2, m3).expect("gaps are two or more"));
            }
        }
    }

    let middles: BTreeSet<u32> = triples.iter().map(|t| t.m()).collect();
    let zeros: BTreeMap<u32, Vec<ZeroRecord>> = middles
        .into_par_iter()
        .map(|m| find_zeros(m, x_max, cfg).map(|z| (m, z)))
        .collect::<Result<_, _>>()?;

    let mut table = CoeffTable::new();
    let certs = triples
        .iter()
        .map(|&t| eliminate(t, &mut table))
        .collect::<Result<Vec<_>, _>>()?;

    let work: Vec<(usize, &ZeroRecord)> = certs
        .iter()
        .enumerate()
        .flat_map(|(ci, cert)| {
            zeros[&cert.triple.m()].iter().map(move |z| (ci, z))
        })
        .collect();

    let outcomes: Vec<(usize, &ZeroRecord, Refutation)> = work
        .par_iter()
        .map(|&(ci, z)| {
            let cert = &certs[ci];
            let mut out = refute_triple(cert, &z.enclosure, cfg);
            for escalated in [cfg.doubled(), cfg.doubled().doubled()] {
                if out.is_refuted() {
                    break;
                }
                out = refute_triple(cert, &z.enclosure, escalated);
            }
            (ci, z, out)
        })
        .collect();

    let mut refuted = 0u64;
    let mut inconclusive = Vec::new();
    for (ci, z, out) in outcomes {
        if out.is_refuted() {
            refuted += 1;
        } else {
            inconclusive.push(InconclusiveCheck {
                triple: certs[ci].triple,
                zero: z.clone(),
                outcome: out,
            });
        }
    }
    Ok(TripleRefutationReport {
        m_max,
        triple_count: triples.len() as u32,
        checks: work.len() as u64,
        refuted,
        inconclusive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::parse_decimal;
    use num_traits::Signed;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    /// Reference values: mpmath (Python) root-finding at 35 significant
    /// digits, via an independent scan of W_m at step 0.01.
    fn assert_encloses_value(v: &CertifiedReal, reference: &str, tol_exp: i64) {
        let r = parse_decimal(reference).unwrap();
        let tol = parse_decimal(&format!("1e{tol_exp}")).unwrap();
        assert!((v.mid().to_rational() - &r).abs() <= tol);
        assert!(v.rad().to_rational() <= tol);
    }

    #[test]
    fn fundamental_zero_and_eigenvalue() {
        let zs = find_zeros(0, &parse_decimal("4").unwrap(), cfg()).unwrap();
        assert_eq!(zs.len(), 1);
        let z = &zs[0];
        assert_eq!((z.m, z.k, z.degeneracy), (0, 1, 1));
        assert_encloses_value(&z.enclosure, "3.196220616582541093980527", -24);
        assert_encloses_value(&z.lambda, "104.3631055588443069217", -18);
        assert!(z.enclosure.meets_relative_target(120));
    }

    #[test]
    fn window_below_first_sign_change_is_empty() {
        assert!(find_zeros(0, &parse_decimal("3").unwrap(), cfg())
            .unwrap()
            .is_empty());
        assert!(find_zeros(1, &parse_decimal("4.5").unwrap(), cfg())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn first_three_zeros_of_order_zero() {
        let zs = find_zeros(0, &parse_decimal("10").unwrap(), cfg()).unwrap();
        assert_eq!(zs.len(), 3);
        assert_encloses_value(&zs[0].enclosure, "3.196220616582541093980527", -24);
        assert_encloses_value(&zs[1].enclosure, "6.306437047688423715891775", -24);
        assert_encloses_value(&zs[2].enclosure, "9.439499137876404905103758", -24);
        for w in zs.windows(2) {
            assert!(w[0].enclosure.upper() < w[1].enclosure.lower());
        }
    }

    #[test]
    fn fundamental_mode_tops_the_enumeration() {
        let eigs = eigenvalues(1, cfg()).unwrap();
        assert_eq!(eigs.len(), 1);
        assert_eq!((eigs[0].m, eigs[0].k, eigs[0].degeneracy), (0, 1, 1));
        assert_encloses_value(&eigs[0].lambda, "104.3631055588443069217", -18);
    }

    #[test]
    fn small_enumeration_is_sorted_with_multiplicities() {
        let eigs = eigenvalues(6, cfg()).unwrap();
        let orders: Vec<(u32, u32, u32)> =
            eigs.iter().map(|e| (e.m, e.k, e.degeneracy)).collect();
        assert_eq!(
            orders,
            vec![(0, 1, 1), (1, 1, 2), (2, 1, 2), (0, 2, 1), (3, 1, 2), (1, 2, 2)]
        );
        for w in eigs.windows(2) {
            assert!(w[0].lambda.mid() < w[1].lambda.mid());
            assert!(w[0].lambda.upper() < w[1].lambda.lower());
        }
    }

    #[test]
    fn two_order_gap_report() {
        let report = gap_scan(1, &parse_decimal("8").unwrap(), cfg()).unwrap();
        // Orders zero and one hold two zeros each below eight.
        assert_eq!(report.pairs.len(), 4);
        let min = report.min_gap.as_ref().unwrap();
        assert!(!min.contains_zero());
        // Smallest distance is w_{1,1} - w_{0,1} = 4.6109 - 3.1962.
        assert_encloses_value(min, "1.414679262466514733261606", -20);
        for w in report.pairs.windows(2) {
            assert!(w[0].gap.mid() <= w[1].gap.mid());
        }
    }

    #[test]
    fn single_order_gap_report_is_empty() {
        let report = gap_scan(0, &parse_decimal("10").unwrap(), cfg()).unwrap();
        assert!(report.pairs.is_empty());
        assert!(report.min_gap.is_none());
    }

    #[test]
    fn smallest_sweep_refutes_its_single_triple() {
        let report = refute_all_triples(4, &parse_decimal("7").unwrap(), cfg()).unwrap();
        assert_eq!(report.triple_count, 1);
        assert_eq!(report.checks, 1);
        assert_eq!(report.refuted, 1);
        assert!(report.inconclusive.is_empty());
    }

    #[test]
    fn sweep_without_valid_triples_is_empty() {
        let report = refute_all_triples(3, &parse_decimal("10").unwrap(), cfg()).unwrap();
        assert_eq!(report.triple_count, 0);
        assert_eq!(report.checks, 0);
    }
}
