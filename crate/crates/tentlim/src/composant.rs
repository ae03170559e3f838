//! Symbolic representation of the ray C from the endpoint α: p-points,
//! p-levels, folding patterns, snappy points, arc length and the shift action.
//!
//! A segment of the ray up to the snappy point `s_{j+1}` is parametrized by
//! the projection `π_{p+j}` as the window `[0, c₁]`; its p-points are the
//! precritical points of minimal order ≤ j, a point of minimal order i
//! carrying level `j − i`.  The endpoint carries level `j + 1`: it is not a
//! critical point of `T^j` on `[0, c₁]`, but this convention reconciles the
//! interior-level rule with the extended folding pattern of the full ray (and
//! reproduces the published golden-slope sequence, see the tests).  When c is
//! periodic a precritical point has several orders; using the minimal order
//! together with the segment depth recovers the largest-coincidence level.

use std::fmt;

use serde::Serialize;

use crate::numerics::Scalar;
use crate::tentmap::TentMap;
use crate::{Error, Result};

/// A p-level entry: the sentinel `*` for the endpoint α, or a level in ℕ₀.
///
/// `*` is a distinguished value, not the number −1, so that level arithmetic
/// stays honest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Star,
    L(u32),
}

impl Level {
    pub fn as_number(&self) -> Option<u32> {
        match self {
            Level::Star => None,
            Level::L(l) => Some(*l),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Star => write!(f, "*"),
            Level::L(l) => write!(f, "{l}"),
        }
    }
}

impl Serialize for Level {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        match self {
            Level::Star => s.serialize_str("*"),
            Level::L(l) => s.serialize_u32(*l),
        }
    }
}

/// A p-point of a ray segment.
#[derive(Clone, Debug)]
pub struct PPoint<S> {
    /// 1-based position in the ordered p-point list (α counts as index 1).
    pub arc_index: usize,
    pub level: Level,
    /// Position of the point in `[0, c₁]` under the canonical projection
    /// `π_{p+depth}` of its segment.
    pub position: S,
    /// True iff every earlier p-point has a strictly smaller level (only
    /// points of level ≥ 1 qualify).
    pub snappy: bool,
}

/// The segment `[α, s_{depth+1}]` of the ray with its ordered p-points.
#[derive(Clone, Debug)]
pub struct RaySegment<S> {
    pub depth: u32,
    /// Projection offset: positions live under `π_{p+depth}`.
    pub p: u32,
    /// Accumulated σ-shift.  The k-th snappy point of a segment shifted by r
    /// is the composant point `s_{k+r}`, and composant levels are the stored
    /// levels plus this offset.
    pub shift_offset: u32,
    pub points: Vec<PPoint<S>>,
}

/// The folding pattern `*, e₁, e₂, …` of the composant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldingPattern {
    pub entries: Vec<Level>,
    /// The segment depth j whose segment produced the entries.
    pub depth: u32,
}

/// Maximal level-palindrome around a p-point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PSymmetricArc {
    /// 0-based index of the center point in the segment.
    pub center: usize,
    /// Largest r with matching levels at center ± k for all k ≤ r.
    pub radius: usize,
    pub truncated_at_alpha: bool,
}

/// Enumerates the segment `[α, s_{j+1}]`.
///
/// The level sequence is independent of p (p only rescales arc lengths), and
/// the sequence of any depth is a prefix of the sequence of any larger depth.
pub fn ray_segment<S: Scalar>(tm: &TentMap<S>, j: u32, p: u32) -> Result<RaySegment<S>> {
    let zero = S::zero();
    let pts = tm.precritical_points(j, (&zero, tm.c1()))?;
    let mut points: Vec<PPoint<S>> = Vec::with_capacity(pts.len() + 2);
    points.push(PPoint {
        arc_index: 1,
        level: Level::Star,
        position: S::zero(),
        snappy: false,
    });
    let mut max_level_seen: i64 = 0;
    for pp in pts {
        if pp.x.eq_cert(tm.c1())? {
            // c₁ can itself be precritical (periodic c); the endpoint entry
            // below supersedes it.
            continue;
        }
        let level = j - pp.order;
        let snappy = level >= 1 && i64::from(level) > max_level_seen;
        max_level_seen = max_level_seen.max(i64::from(level));
        points.push(PPoint {
            arc_index: points.len() + 1,
            level: Level::L(level),
            position: pp.x,
            snappy,
        });
    }
    points.push(PPoint {
        arc_index: points.len() + 1,
        level: Level::L(j + 1),
        position: tm.c1().clone(),
        snappy: true,
    });
    Ok(RaySegment { depth: j, p, shift_offset: 0, points })
}

/// First `count` entries of the folding pattern FP(C).
pub fn folding_pattern<S: Scalar>(tm: &TentMap<S>, count: usize) -> Result<FoldingPattern> {
    if count == 0 {
        return Err(Error::Domain("foldingPattern requires count >= 1".into()));
    }
    let mut j = 1u32;
    loop {
        let seg = ray_segment(tm, j, 0)?;
        if seg.points.len() >= count {
            let entries = seg.points[..count].iter().map(|p| p.level).collect();
            return Ok(FoldingPattern { entries, depth: j });
        }
        j += 1;
        if j > 256 {
            return Err(Error::BudgetExceeded { used: u64::from(j), cap: 256 });
        }
    }
}

/// The snappy points `s₁ … s_count` with levels 1..count and their positions
/// under the canonical projection of the enumerating segment.
///
/// Returns the segment used (for projection bookkeeping) along with clones of
/// its snappy points in level order.
pub fn snappy_points<S: Scalar>(
    tm: &TentMap<S>,
    p: u32,
    count: u32,
) -> Result<(RaySegment<S>, Vec<PPoint<S>>)> {
    if count == 0 {
        return Err(Error::Domain("snappyPoints requires count >= 1".into()));
    }
    // Depth count−1 already contains s_count as its endpoint; going one deeper
    // keeps every requested snappy point interior or terminal with margin.
    let mut j = count.max(1);
    loop {
        let seg = ray_segment(tm, j, p)?;
        let mut found: Vec<Option<PPoint<S>>> = vec![None; count as usize];
        for pt in &seg.points {
            if pt.snappy {
                if let Some(l) = pt.level.as_number() {
                    if l >= 1 && l <= count && found[(l - 1) as usize].is_none() {
                        found[(l - 1) as usize] = Some(pt.clone());
                    }
                }
            }
        }
        if found.iter().all(|f| f.is_some()) {
            let list = found.into_iter().map(|f| f.unwrap()).collect();
            return Ok((seg, list));
        }
        j += 1;
        if j > 256 {
            return Err(Error::BudgetExceeded { used: u64::from(j), cap: 256 });
        }
    }
}

/// Arc length `d̄(α, z) = s^{p+depth} · position(z)` for a point of the
/// segment; independent of which valid enumerating depth produced z.
pub fn arc_length<S: Scalar>(tm: &TentMap<S>, seg: &RaySegment<S>, idx: usize) -> Result<S> {
    let pt = seg
        .points
        .get(idx)
        .ok_or_else(|| Error::Domain(format!("point index {idx} out of range")))?;
    // The segment's positions are strictly increasing, so π_{p+depth} is
    // injective on it by construction.
    Ok(tm.slope().pow_u(seg.p + seg.depth) * pt.position.clone())
}

/// The σ^r image of a segment: identical ordered level sequence, arc lengths
/// multiplied by s^r, and the k-th snappy point now representing the
/// composant point `s_{k+r}`.
pub fn shift<S: Scalar>(seg: &RaySegment<S>, r: u32) -> RaySegment<S> {
    RaySegment {
        depth: seg.depth,
        p: seg.p + r,
        shift_offset: seg.shift_offset + r,
        points: seg.points.clone(),
    }
}

impl<S> RaySegment<S> {
    /// Level of a point as a composant quantity, accounting for σ-shifts.
    pub fn composant_level(&self, idx: usize) -> Option<u32> {
        self.points[idx].level.as_number().map(|l| l + self.shift_offset)
    }

    pub fn levels(&self) -> Vec<Level> {
        self.points.iter().map(|p| p.level).collect()
    }
}

/// Maximal symmetric radius of the level palindrome centered at a point.
pub fn p_symmetric_arc<S: Scalar>(seg: &RaySegment<S>, center_idx: usize) -> Result<PSymmetricArc> {
    if center_idx >= seg.points.len() {
        return Err(Error::Domain(format!(
            "center index {center_idx} out of range"
        )));
    }
    let n = seg.points.len();
    let mut radius = 0usize;
    let mut truncated = false;
    loop {
        let k = radius + 1;
        if k > center_idx {
            truncated = true;
            break;
        }
        if center_idx + k >= n {
            break;
        }
        if seg.points[center_idx - k].level != seg.points[center_idx + k].level {
            break;
        }
        radius = k;
    }
    Ok(PSymmetricArc { center: center_idx, radius, truncated_at_alpha: truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad::QuadExt;
    use num_rational::BigRational;

    type Rat = BigRational;

    fn rat(n: i64, d: i64) -> Rat {
        <Rat as Scalar>::from_ratio(n, d)
    }

    fn tm(n: i64, d: i64) -> TentMap<Rat> {
        TentMap::new(rat(n, d)).unwrap()
    }

    fn golden() -> TentMap<QuadExt> {
        TentMap::new(QuadExt::new(
            BigRational::from_ratio(1, 2),
            BigRational::from_ratio(1, 2),
            5,
        ))
        .unwrap()
    }

    fn levels_of(v: &[Level]) -> String {
        v.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
    }

    /// The published golden-slope folding pattern (44 entries).
    pub(crate) const GOLDEN_FP_44: &str = "* 0 1 0 2 0 1 3 1 0 2 0 4 0 2 0 1 3 1 0 5 0 1 3 1 0 2 0 4 0 2 0 1 6 1 0 2 0 4 0 2 0 1 3";

    #[test]
    fn ray_segment_17_10_small_depths() {
        let t = tm(17, 10);
        let s1 = ray_segment(&t, 1, 0).unwrap();
        assert_eq!(levels_of(&s1.levels()), "* 0 1 0 2");
        let pos: Vec<Rat> = s1.points.iter().map(|p| p.position.clone()).collect();
        assert_eq!(pos, vec![rat(0, 1), rat(5, 17), rat(1, 2), rat(12, 17), rat(17, 20)]);
        let s2 = ray_segment(&t, 2, 0).unwrap();
        assert_eq!(levels_of(&s2.levels()), "* 0 1 0 2 0 1 0 3");
    }

    #[test]
    fn ray_segment_golden_depth_two() {
        let t = golden();
        let s2 = ray_segment(&t, 2, 0).unwrap();
        assert_eq!(levels_of(&s2.levels()), "* 0 1 0 2 0 1 3");
    }

    #[test]
    fn universal_prefix() {
        for (n, d) in [(17, 10), (3, 2), (19, 10), (11, 10), (2, 1)] {
            let t = tm(n, d);
            let fp = folding_pattern(&t, 7).unwrap();
            assert_eq!(levels_of(&fp.entries), "* 0 1 0 2 0 1", "slope {n}/{d}");
        }
        let fp = folding_pattern(&golden(), 7).unwrap();
        assert_eq!(levels_of(&fp.entries), "* 0 1 0 2 0 1");
    }

    #[test]
    fn golden_folding_pattern_44() {
        let fp = folding_pattern(&golden(), 44).unwrap();
        assert_eq!(levels_of(&fp.entries), GOLDEN_FP_44);
    }

    #[test]
    fn folding_pattern_17_10_count_9() {
        let fp = folding_pattern(&tm(17, 10), 9).unwrap();
        assert_eq!(levels_of(&fp.entries), "* 0 1 0 2 0 1 0 3");
    }

    #[test]
    fn prefix_stability() {
        for (n, d) in [(17, 10), (3, 2), (19, 10)] {
            let t = tm(n, d);
            let long = folding_pattern(&t, 60).unwrap();
            for count in [1usize, 5, 13, 29, 44] {
                let short = folding_pattern(&t, count).unwrap();
                assert_eq!(short.entries[..], long.entries[..count]);
            }
        }
    }

    #[test]
    fn p_independence_of_levels() {
        let t = tm(17, 10);
        let reference = ray_segment(&t, 5, 0).unwrap().levels();
        for p in [1u32, 2, 5] {
            assert_eq!(ray_segment(&t, 5, p).unwrap().levels(), reference);
        }
    }

    #[test]
    fn snappy_levels_are_consecutive_first_occurrences() {
        for (n, d) in [(17, 10), (3, 2), (19, 10)] {
            let t = tm(n, d);
            let fp = folding_pattern(&t, 60).unwrap();
            let mut expected_next = 1u32;
            let seg = ray_segment(&t, fp.depth, 0).unwrap();
            for pt in &seg.points {
                if pt.snappy {
                    assert_eq!(pt.level, Level::L(expected_next));
                    expected_next += 1;
                }
            }
        }
    }

    #[test]
    fn snappy_indices_17_10() {
        // With 1-based indexing counting * as index 1, the first three snappy
        // points of FP(17/10) = * 0 1 0 2 0 1 0 3 sit at entries 3, 5, 9.
        let (_, sn) = snappy_points(&tm(17, 10), 0, 3).unwrap();
        let idx: Vec<usize> = sn.iter().map(|p| p.arc_index).collect();
        assert_eq!(idx, vec![3, 5, 9]);
        let lv: Vec<Level> = sn.iter().map(|p| p.level).collect();
        assert_eq!(lv, vec![Level::L(1), Level::L(2), Level::L(3)]);
    }

    #[test]
    fn snappy_indices_golden() {
        let (_, sn) = snappy_points(&golden(), 0, 6).unwrap();
        let idx: Vec<usize> = sn.iter().map(|p| p.arc_index).collect();
        assert_eq!(idx, vec![3, 5, 8, 13, 21, 34]);
    }

    #[test]
    fn arc_length_ratio_law() {
        // d̄(α, s_{i+1}) / d̄(α, s_i) = s: convention-independent form of the
        // arc-length law.
        let t = tm(17, 10);
        let (seg, sn) = snappy_points(&t, 0, 6).unwrap();
        let mut lengths = Vec::new();
        for p in &sn {
            lengths.push(arc_length(&t, &seg, p.arc_index - 1).unwrap());
        }
        for w in lengths.windows(2) {
            let ratio = w[1].try_div(&w[0]).unwrap();
            assert_eq!(ratio, rat(17, 10));
        }
    }

    #[test]
    fn arc_length_direct_value() {
        // d̄(α, s₁) with p = 0 via the depth-0 segment: s^(0+0) projection
        // would be the segment [α, s₁] itself; with the depth-1 segment the
        // exponent is 1 and the position of s₁ is 1/2: d̄ = 17/20 · 17/10 …
        // the absolute normalization is convention-dependent, so only the
        // j-independence is asserted here.
        let t = tm(17, 10);
        let seg1 = ray_segment(&t, 1, 0).unwrap();
        // s₁ is at index 2 (level 1, position 1/2): d̄ = s¹ · 1/2 = 17/20.
        let d1 = arc_length(&t, &seg1, 2).unwrap();
        let seg2 = ray_segment(&t, 2, 0).unwrap();
        // In the deeper segment s₁ has position 5/17 and exponent 2:
        // (17/10)² · 5/17 = 17/20: identical.
        assert_eq!(seg2.points[2].level, Level::L(1));
        let d2 = arc_length(&t, &seg2, 2).unwrap();
        assert_eq!(d1, d2);
        assert_eq!(d1, rat(17, 20));
        // d̄(α, α) = 0.
        assert_eq!(arc_length(&t, &seg1, 0).unwrap(), rat(0, 1));
    }

    #[test]
    fn shift_identity_and_composant_levels() {
        let t = tm(17, 10);
        let seg = ray_segment(&t, 3, 0).unwrap();
        let same = shift(&seg, 0);
        assert_eq!(same.levels(), seg.levels());
        assert_eq!(same.p, seg.p);
        // σ of s₁ is s₂ with composant level 2.
        let shifted = shift(&seg, 1);
        assert_eq!(shifted.levels(), seg.levels());
        let s1_idx = seg.points.iter().position(|p| p.level == Level::L(1)).unwrap();
        assert_eq!(seg.composant_level(s1_idx), Some(1));
        assert_eq!(shifted.composant_level(s1_idx), Some(2));
    }

    #[test]
    fn shift_scales_arc_lengths() {
        let t = tm(17, 10);
        let seg = ray_segment(&t, 4, 0).unwrap();
        let shifted = shift(&seg, 1);
        for idx in (0..seg.points.len()).step_by(3).take(20) {
            let before = arc_length(&t, &seg, idx).unwrap();
            let after = arc_length(&t, &shifted, idx).unwrap();
            assert_eq!(after, rat(17, 10) * before);
        }
    }

    #[test]
    fn golden_palindrome_around_s5() {
        let t = golden();
        let fp = folding_pattern(&t, 44).unwrap();
        let seg = ray_segment(&t, fp.depth, 0).unwrap();
        // s₅ is FP entry 21 (1-based counting * as 1) → 0-based index 20.
        assert_eq!(seg.points[20].level, Level::L(5));
        let arc = p_symmetric_arc(&seg, 20).unwrap();
        // Distance 1 holds the 0,0 pair; distances 2..12 carry the palindrome
        // "1 3 1 0 2 0 4 0 2 0 1" on each side; distance 13 breaks (3 vs 6).
        assert_eq!(arc.radius, 12);
        assert!(!arc.truncated_at_alpha);
        for k in 2..=12usize {
            assert_eq!(seg.points[20 - k].level, seg.points[20 + k].level);
        }
        assert_ne!(seg.points[7].level, seg.points[33].level);
    }

    #[test]
    fn palindrome_degenerate_and_s2_cases() {
        let t = tm(17, 10);
        let seg = ray_segment(&t, 3, 0).unwrap();
        // A level-0 point with distinct neighbors has radius 0.
        // FP: * 0 1 0 2 0 1 0 3 …; index 3 (0-based) is a 0 between 1 and 2.
        assert_eq!(seg.points[3].level, Level::L(0));
        assert_eq!(p_symmetric_arc(&seg, 3).unwrap().radius, 0);
        // Around s₂ (0-based index 4) the arc 0-2-0 is symmetric: r ≥ 1.
        assert_eq!(seg.points[4].level, Level::L(2));
        assert!(p_symmetric_arc(&seg, 4).unwrap().radius >= 1);
    }
}
