//! Slope classification: renormalization reduction, the folding-pattern
//! distinguisher, bridges, and the shift-action law for σ^R.
//!
//! The reduction step rests on the exact affine conjugacy between T_s² on
//! `[p, c₁]` (p = s/(s+1) the positive fixed point) and T_{s²} on
//! `[0, c₁(s²)]`; every reduction re-verifies that conjugacy on a
//! deterministic sample, so a passing run carries its own certificate.

use std::collections::BTreeMap;

use crate::composant::{ray_segment, Level, PPoint};
use crate::numerics::{Scalar, SlopeValue};
use crate::tentmap::{Preperiodicity, TentMap};
use crate::{Error, Result};

/// One renormalization reduction s ↦ s^{2^{n−1}}.
#[derive(Clone, Debug)]
pub struct RenormStep<S> {
    /// The index with 2^{1/2ⁿ} < s ≤ 2^{1/2^{n−1}}.
    pub n: u32,
    pub reduced_slope: S,
    /// The positive fixed point p = s/(s+1) of the original map.
    pub fixed_point: S,
    /// Number of conjugacy sample points verified (50 per squaring).
    pub cert_samples: usize,
}

/// The n with 2^{1/2ⁿ} < s ≤ 2^{1/2^{n−1}}, decided by certified
/// comparisons of the repeated squares s^{2ⁿ} against 2.
pub fn renorm_index<S: Scalar>(s: &S) -> Result<u32> {
    let two = S::from_ratio(2, 1);
    if !(S::one().is_lt(s)? && s.is_le(&two)?) {
        return Err(Error::Domain("renormIndex needs a slope in (1, 2]".into()));
    }
    let mut t = s.clone() * s.clone();
    for n in 1..=64u32 {
        match t.try_cmp(&two) {
            Ok(std::cmp::Ordering::Greater) => return Ok(n),
            Ok(_) => t = t.clone() * t,
            Err(Error::PrecisionExhausted(bits)) => {
                return Err(Error::UncertifiableBoundary(format!(
                    "cannot separate s^(2^{n}) from 2 at {bits} bits"
                )))
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::BudgetExceeded { used: 64, cap: 64 })
}

/// Verifies L ∘ T_t² = T_{t²} ∘ L on 50 sample points of [p, c₁], where L is
/// the orientation-preserving affine map [p, c₁] → [0, c₁(t²)].
fn verify_square_conjugacy<S: Scalar>(t: &S) -> Result<usize> {
    let tm = TentMap::new(t.clone())?;
    let t2 = t.clone() * t.clone();
    let tm2 = TentMap::new(t2)?;
    let p = t.clone().try_div(&(t.clone() + S::one()))?;
    let span = tm.c1().clone() - p.clone();
    let scale = tm2.c1().clone().try_div(&span)?;
    const SAMPLES: usize = 50;
    for k in 1..=SAMPLES as i64 {
        let x = p.clone() + span.clone() * S::from_ratio(k, SAMPLES as i64 + 1);
        let lhs = (tm.iterate(&x, 2)? - p.clone()) * scale.clone();
        let rhs = tm2.eval(&((x.clone() - p.clone()) * scale.clone()))?;
        if !lhs.eq_cert(&rhs)? {
            return Err(Error::ConjugacyViolation(x.exact_str()));
        }
    }
    Ok(SAMPLES)
}

/// Reduces a slope to its base representative s^{2^{n−1}} ∈ (√2, 2],
/// verifying the affine conjugacy at every squaring.
pub fn reduce_slope<S: Scalar>(s: &S) -> Result<RenormStep<S>> {
    let n = renorm_index(s)?;
    let fixed_point = s.clone().try_div(&(s.clone() + S::one()))?;
    let mut t = s.clone();
    let mut cert_samples = 0;
    for _ in 1..n {
        cert_samples += verify_square_conjugacy(&t)?;
        t = t.clone() * t;
    }
    Ok(RenormStep { n, reduced_slope: t, fixed_point, cert_samples })
}

/// Field-preserving reduction of a parsed slope.
pub fn reduce_slope_value(v: &SlopeValue) -> Result<(SlopeValue, u32)> {
    match v {
        SlopeValue::Rational(q) => {
            let step = reduce_slope(q)?;
            Ok((SlopeValue::Rational(step.reduced_slope), step.n))
        }
        SlopeValue::Quadratic(x) => {
            let step = reduce_slope(x)?;
            let red = if step.reduced_slope.is_rational() {
                SlopeValue::Rational(step.reduced_slope.rational_part().clone())
            } else {
                SlopeValue::Quadratic(step.reduced_slope)
            };
            Ok((red, step.n))
        }
    }
}

/// Folding-pattern entries of a parsed slope at ray-segment depth `j`
/// (including the leading * sentinel).
fn fp_levels(v: &SlopeValue, j: u32) -> Result<Vec<Level>> {
    match v {
        SlopeValue::Rational(q) => {
            let tm = TentMap::new(q.clone())?;
            Ok(ray_segment(&tm, j, 0)?.levels())
        }
        SlopeValue::Quadratic(x) => {
            let tm = TentMap::new(x.clone())?;
            Ok(ray_segment(&tm, j, 0)?.levels())
        }
    }
}

fn preperiodic_warning(v: &SlopeValue, label: &str) -> Result<Option<String>> {
    let verdict = match v {
        SlopeValue::Rational(q) => TentMap::new(q.clone())?.is_preperiodic(24)?,
        SlopeValue::Quadratic(x) => TentMap::new(x.clone())?.is_preperiodic(24)?,
    };
    Ok(match verdict {
        Preperiodicity::Yes { i, j } => Some(format!(
            "slope {label} has a preperiodic critical point (c_{i} = c_{j}); \
             the folding-pattern comparison remains valid but falls outside \
             the non-preperiodic regime of the symmetry analysis"
        )),
        Preperiodicity::NoWitnessUpTo(_) => None,
    })
}

/// Result of the folding-pattern distinguisher.
#[derive(Clone, Debug)]
pub struct DistinguishReport {
    pub a: SlopeValue,
    pub b: SlopeValue,
    /// 1-based index into the folding patterns (counting the leading * as
    /// index 1) of the first differing entry.
    pub first_discrepancy: Option<usize>,
    pub depth_used: usize,
    /// True when the reduced slopes are certified equal, so the absence of a
    /// discrepancy is conclusive rather than a depth limitation.
    pub slopes_equal: bool,
    pub warnings: Vec<String>,
}

impl DistinguishReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "a": self.a.exact_str(),
            "b": self.b.exact_str(),
            "firstDiscrepancy": self.first_discrepancy,
            "depthUsed": self.depth_used,
        })
    }
}

/// Compares the folding patterns of two slopes after reducing both to the
/// base renormalization range, reporting the first differing entry.
pub fn distinguish(a: &SlopeValue, b: &SlopeValue, max_depth: usize) -> Result<DistinguishReport> {
    if max_depth < 1 {
        return Err(Error::Domain("distinguish needs maxDepth >= 1".into()));
    }
    let (ra, _) = reduce_slope_value(a)?;
    let (rb, _) = reduce_slope_value(b)?;
    let mut warnings = Vec::new();
    if let Some(w) = preperiodic_warning(&ra, "a")? {
        warnings.push(w);
    }
    if let Some(w) = preperiodic_warning(&rb, "b")? {
        warnings.push(w);
    }
    if ra.eq_slope(&rb) {
        return Ok(DistinguishReport {
            a: a.clone(),
            b: b.clone(),
            first_discrepancy: None,
            depth_used: max_depth,
            slopes_equal: true,
            warnings,
        });
    }
    // Iterative deepening: the folding pattern at depth j is a prefix of the
    // one at depth j+1, so the first depth revealing a discrepancy gives the
    // definitive index.  Entry counts grow like s^j, so the work at the
    // deciding depth dominates the geometric total.
    for j in 1..=max_depth {
        let fa = fp_levels(&ra, j as u32)?;
        let fb = fp_levels(&rb, j as u32)?;
        for (k, (x, y)) in fa.iter().zip(fb.iter()).enumerate() {
            if x != y {
                return Ok(DistinguishReport {
                    a: a.clone(),
                    b: b.clone(),
                    first_discrepancy: Some(k + 1),
                    depth_used: j,
                    slopes_equal: false,
                    warnings,
                });
            }
        }
    }
    Ok(DistinguishReport {
        a: a.clone(),
        b: b.clone(),
        first_discrepancy: None,
        depth_used: max_depth,
        slopes_equal: false,
        warnings,
    })
}

/// A bridge: a maximal arc between consecutive level-0 q-points.
#[derive(Clone, Debug)]
pub struct Bridge<S> {
    pub q: u32,
    pub endpoints: (PPoint<S>, PPoint<S>),
    /// Levels of the interior q-points, in arc order; never contains 0.
    pub interior_levels: Vec<u32>,
}

/// Ordered bridge decomposition of the ray segment `[α, s_{depth+1}]` at
/// scale q.  Partial pieces before the first and after the last level-0
/// point are not bridges and are dropped.
pub fn bridges<S: Scalar>(tm: &TentMap<S>, q: u32, depth: u32) -> Result<Vec<Bridge<S>>> {
    let seg = ray_segment(tm, depth, q)?;
    let zeros: Vec<usize> = seg
        .points
        .iter()
        .enumerate()
        .filter(|(_, pt)| pt.level == Level::L(0))
        .map(|(k, _)| k)
        .collect();
    let mut out = Vec::new();
    for w in zeros.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let interior_levels = seg.points[lo + 1..hi]
            .iter()
            .map(|pt| pt.level.as_number().expect("interior of a bridge has no alpha point"))
            .collect();
        out.push(Bridge {
            q,
            endpoints: (seg.points[lo].clone(), seg.points[hi].clone()),
            interior_levels,
        });
    }
    Ok(out)
}

/// Verification report for the action of σ^R on the folding pattern.
#[derive(Clone, Debug)]
pub struct ShiftActionReport {
    pub r: u32,
    pub depth: u32,
    /// (i, M_i): the shift sends the i-th snappy point to index M_i = i + R.
    pub m_indices: Vec<(u32, u32)>,
    pub snappy_shift_ok: bool,
    pub level_multisets_ok: bool,
    pub bridges_ok: bool,
    /// Indices i whose inter-snappy window was compared.
    pub checked: Vec<u32>,
}

impl ShiftActionReport {
    pub fn all_ok(&self) -> bool {
        self.snappy_shift_ok && self.level_multisets_ok && self.bridges_ok
    }
}

fn first_occurrence(seq: &[u32], v: u32) -> Option<usize> {
    seq.iter().position(|e| *e == v)
}

fn multiset(seq: &[u32]) -> BTreeMap<u32, usize> {
    let mut m = BTreeMap::new();
    for e in seq {
        *m.entry(*e).or_insert(0) += 1;
    }
    m
}

fn bridge_words(seq: &[u32]) -> Vec<Vec<u32>> {
    let zeros: Vec<usize> = seq
        .iter()
        .enumerate()
        .filter(|(_, e)| **e == 0)
        .map(|(k, _)| k)
        .collect();
    zeros
        .windows(2)
        .map(|w| seq[w[0] + 1..w[1]].to_vec())
        .collect()
}

/// Checks the σ^R action on the folding pattern at segment depth `depth`:
/// (a) snappy indices shift by exactly R (M_i = i + R);
/// (b) the level multiset strictly between consecutive snappy points is
///     preserved by the shift (levels ≥ R, shifted down by R);
/// (c) bridges map to bridges with identical interior words.
///
/// The image structure is the subsequence of entries ≥ R, shifted down by R —
/// exactly the level data the shifted segment carries at scale q + R.
pub fn shift_action_check<S: Scalar>(
    tm: &TentMap<S>,
    r: u32,
    depth: u32,
) -> Result<ShiftActionReport> {
    if depth < r + 2 {
        return Err(Error::Domain(format!("shiftActionCheck needs depth >= R + 2 = {}", r + 2)));
    }
    let seg = ray_segment(tm, depth, 0)?;
    // fe: folding-pattern entries after the leading *, as plain levels.
    let fe: Vec<u32> = seg
        .points
        .iter()
        .skip(1)
        .map(|pt| pt.level.as_number().expect("only index 0 is the alpha sentinel"))
        .collect();
    let g: Vec<u32> = fe.iter().filter(|e| **e >= r).map(|e| e - r).collect();

    let mut m_indices = Vec::new();
    let mut snappy_shift_ok = true;
    let mut level_multisets_ok = true;
    let mut checked = Vec::new();
    let mut i = 1u32;
    while let (Some(gi), Some(fi)) = (first_occurrence(&g, i), first_occurrence(&fe, i + r)) {
        // (a) The first level-(i+R) entry of the original pattern is the
        // image of the i-th snappy point; its position in the filtered
        // subsequence must be the position of the i-th snappy point of the
        // image pattern.
        let filtered_pos = fe[..fi].iter().filter(|e| **e >= r).count();
        if filtered_pos != gi {
            snappy_shift_ok = false;
        }
        m_indices.push((i, i + r));
        // (b) Window between snappy i and i+1 in the image vs the original.
        if let (Some(gn), Some(fn_), Some(f_lo)) = (
            first_occurrence(&g, i + 1),
            first_occurrence(&fe, i + 1 + r),
            first_occurrence(&fe, i + r),
        ) {
            let image_window = &g[gi + 1..gn];
            let orig_window: Vec<u32> = fe[f_lo + 1..fn_]
                .iter()
                .filter(|e| **e >= r)
                .map(|e| e - r)
                .collect();
            if multiset(image_window) != multiset(&orig_window) {
                level_multisets_ok = false;
            }
            // The law of the shift: the image window equals the original
            // pattern's window between snappy i and i+1.
            if let Some(plain) = first_occurrence(&fe, i) {
                if let Some(plain_hi) = first_occurrence(&fe, i + 1) {
                    if multiset(image_window) != multiset(&fe[plain + 1..plain_hi]) {
                        level_multisets_ok = false;
                    }
                }
            }
            checked.push(i);
        }
        i += 1;
    }

    // (c) Complete bridge words of the image pattern must reproduce the
    // original bridge words.
    let wf = bridge_words(&fe);
    let wg = bridge_words(&g);
    let bridges_ok = wg.len() <= wf.len() && wg.iter().zip(wf.iter()).all(|(a, b)| a == b);

    Ok(ShiftActionReport {
        r,
        depth,
        m_indices,
        snappy_shift_ok,
        level_multisets_ok,
        bridges_ok,
        checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad::QuadExt;
    use crate::numerics::parse_slope;
    use num_rational::BigRational;

    type Rat = BigRational;

    fn rat(n: i64, d: i64) -> Rat {
        <Rat as Scalar>::from_ratio(n, d)
    }

    fn tm(n: i64, d: i64) -> TentMap<Rat> {
        TentMap::new(rat(n, d)).unwrap()
    }

    #[test]
    fn renorm_index_examples() {
        assert_eq!(renorm_index(&rat(17, 10)).unwrap(), 1);
        assert_eq!(renorm_index(&rat(13, 10)).unwrap(), 2);
        assert_eq!(renorm_index(&rat(2, 1)).unwrap(), 1);
        assert_eq!(renorm_index(&rat(23, 20)).unwrap(), 3);
        assert_eq!(renorm_index(&QuadExt::sqrt_of(2)).unwrap(), 2);
        assert!(matches!(renorm_index(&rat(1, 1)), Err(Error::Domain(_))));
    }

    #[test]
    fn reduce_slope_examples() {
        let step = reduce_slope(&rat(13, 10)).unwrap();
        assert_eq!(step.n, 2);
        assert_eq!(step.reduced_slope, rat(169, 100));
        assert_eq!(step.fixed_point, rat(13, 23));
        assert_eq!(step.cert_samples, 50);

        let id = reduce_slope(&rat(17, 10)).unwrap();
        assert_eq!(id.n, 1);
        assert_eq!(id.reduced_slope, rat(17, 10));
        assert_eq!(id.cert_samples, 0);

        let boundary = reduce_slope(&QuadExt::sqrt_of(2)).unwrap();
        assert_eq!(boundary.n, 2);
        assert!(boundary.reduced_slope.eq_cert(&QuadExt::from_ratio(2, 1)).unwrap());
    }

    #[test]
    fn reduction_is_idempotent() {
        for s in [rat(13, 10), rat(23, 20), rat(11, 10), rat(3, 2)] {
            let step = reduce_slope(&s).unwrap();
            assert_eq!(renorm_index(&step.reduced_slope).unwrap(), 1);
        }
    }

    #[test]
    fn interval_swap_invariant_when_renormalizable() {
        // For n >= 2: c2 <= c <= p <= c1, T(p) = p, T(c1) = c2 and
        // T([c2, p]) = [p, c1].
        let t = tm(13, 10);
        let p = rat(13, 23);
        assert!(t.c2() <= t.c() && t.c() <= &p && &p <= t.c1());
        assert_eq!(t.eval(&p).unwrap(), p);
        assert_eq!(t.eval(t.c1()).unwrap(), *t.c2());
        // [c2, p] straddles c, so its image is [min(T(c2), T(p)), c1].
        let tc2 = t.eval(t.c2()).unwrap();
        assert!(tc2 >= p);
        assert_eq!(t.eval(t.c()).unwrap(), *t.c1());
    }

    #[test]
    fn distinguish_golden_vs_17_10() {
        let a = parse_slope("golden").unwrap();
        let b = parse_slope("17/10").unwrap();
        let rep = distinguish(&a, &b, 12).unwrap();
        assert_eq!(rep.first_discrepancy, Some(8));
        assert!(!rep.slopes_equal);
        // Golden has a periodic critical orbit: expect a warning.
        assert!(!rep.warnings.is_empty());
    }

    #[test]
    fn distinguish_reflexive_and_symmetric() {
        let a = parse_slope("17/10").unwrap();
        let b = parse_slope("9/5").unwrap();
        let same = distinguish(&a, &a, 10).unwrap();
        assert_eq!(same.first_discrepancy, None);
        assert!(same.slopes_equal);
        let ab = distinguish(&a, &b, 20).unwrap();
        let ba = distinguish(&b, &a, 20).unwrap();
        assert_eq!(ab.first_discrepancy, ba.first_discrepancy);
        assert_eq!(ab.first_discrepancy, Some(28));
        // The deciding segment depth is far below the budget.
        assert!(ab.depth_used <= 8);
        // An insufficient depth yields an inconclusive (undecided) report.
        let shallow = distinguish(&a, &b, 2).unwrap();
        assert_eq!(shallow.first_discrepancy, None);
        assert!(!shallow.slopes_equal);
    }

    #[test]
    fn distinguish_reduces_before_comparing() {
        // 13/10 reduces to 169/100, so they are indistinguishable.
        let a = parse_slope("13/10").unwrap();
        let b = parse_slope("169/100").unwrap();
        let rep = distinguish(&a, &b, 16).unwrap();
        assert_eq!(rep.first_discrepancy, None);
        assert!(rep.slopes_equal);
    }

    #[test]
    fn bridges_17_10_first_words() {
        let t = tm(17, 10);
        let bs = bridges(&t, 1, 4).unwrap();
        assert!(bs.len() >= 3);
        assert_eq!(bs[0].interior_levels, vec![1]);
        assert_eq!(bs[1].interior_levels, vec![2]);
        assert_eq!(bs[2].interior_levels, vec![1]);
        for b in &bs {
            assert!(!b.interior_levels.contains(&0));
            assert_eq!(b.endpoints.0.level, Level::L(0));
            assert_eq!(b.endpoints.1.level, Level::L(0));
        }
    }

    #[test]
    fn bridges_concatenate_to_folding_pattern() {
        let t = tm(17, 10);
        let depth = 5;
        let seg = ray_segment(&t, depth, 0).unwrap();
        let bs = bridges(&t, 0, depth).unwrap();
        let mut rebuilt: Vec<Level> = Vec::new();
        for (k, b) in bs.iter().enumerate() {
            if k == 0 {
                rebuilt.push(Level::L(0));
            }
            rebuilt.extend(b.interior_levels.iter().map(|l| Level::L(*l)));
            rebuilt.push(Level::L(0));
        }
        let levels = seg.levels();
        let first_zero = levels.iter().position(|l| *l == Level::L(0)).unwrap();
        let last_zero = levels.iter().rposition(|l| *l == Level::L(0)).unwrap();
        assert_eq!(rebuilt.as_slice(), &levels[first_zero..=last_zero]);
    }

    #[test]
    fn too_shallow_segment_has_no_bridges() {
        let t = tm(17, 10);
        // Depth 0: points *, 0-level c, endpoint level 1 — a single zero.
        let bs = bridges(&t, 0, 0).unwrap();
        assert!(bs.is_empty());
    }

    #[test]
    fn bridge_interior_palindromes_at_unique_maximum() {
        let phi = QuadExt::new(
            BigRational::from_ratio(1, 2),
            BigRational::from_ratio(1, 2),
            5,
        );
        let t = TentMap::new(phi).unwrap();
        for b in bridges(&t, 0, 10).unwrap() {
            let w = &b.interior_levels;
            if w.is_empty() {
                continue;
            }
            let max = w.iter().max().unwrap();
            if w.iter().filter(|l| *l == max).count() == 1 {
                let rev: Vec<u32> = w.iter().rev().cloned().collect();
                assert_eq!(*w, rev, "non-palindromic bridge word {w:?}");
            }
        }
    }

    #[test]
    fn shift_action_identity_and_small_shifts() {
        let t = tm(17, 10);
        let id = shift_action_check(&t, 0, 8).unwrap();
        assert!(id.all_ok());
        let one = shift_action_check(&t, 1, 10).unwrap();
        assert!(one.all_ok(), "{one:?}");
        assert!(one.m_indices.iter().all(|(i, m)| *m == *i + 1));
    }

    #[test]
    fn shift_action_golden_r3() {
        let phi = QuadExt::new(
            BigRational::from_ratio(1, 2),
            BigRational::from_ratio(1, 2),
            5,
        );
        let t = TentMap::new(phi).unwrap();
        let rep = shift_action_check(&t, 3, 12).unwrap();
        assert!(rep.all_ok(), "{rep:?}");
        assert!(!rep.checked.is_empty());
    }
}
