//! Natural chains, link itineraries of ray segments, and link-symmetric arcs,
//! including the snappy-count laws.
//!
//! A natural chain C_p covers `[0, s/2]` with closed links cut at the
//! order-≤p preimages of c.  Links are closed intervals sharing single
//! endpoints: consecutive links meet exactly at the shared cut point and
//! non-consecutive links are disjoint, which realizes the chain condition with
//! canonical exact boundaries (openness plays no role in any counting
//! statement).
//!
//! The itinerary of a ray segment is the sequence of links visited by its
//! piecewise-linear projection.  Consecutive visited links always differ by
//! one index, so the step list is stored as maximal monotone runs rather than
//! materialized (itineraries at certified chain scales reach 10⁸ steps).
//! Palindrome scans around a center step walk the runs in chunks.
//!
//! Conventions at cut points, validated against the counting laws downstream:
//! a rising edge whose target value lands exactly on a cut stays in the link
//! left of the cut; a falling edge landing on a cut stays in the link right of
//! the cut.  Either way the extremum is assigned to the incoming link, so a
//! fold exactly at a cut (periodic critical orbit) does not spuriously enter
//! the neighbouring link.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::composant::{ray_segment, Level, RaySegment};
use crate::numerics::Scalar;
use crate::tentmap::{binary_search_cert, TentMap};
use crate::{Error, Result};

/// The natural chain C_p: links are `[cuts[i], cuts[i+1]]`.
#[derive(Clone, Debug)]
pub struct NaturalChain<S> {
    pub p: u32,
    /// Strictly increasing: `{0} ∪ (order-≤p preimages of c in [0, c₁]) ∪ {c₁}`.
    pub cuts: Vec<S>,
    /// Maximum link length.
    pub width: S,
}

impl<S: Scalar> NaturalChain<S> {
    pub fn link_count(&self) -> usize {
        self.cuts.len() - 1
    }

    pub fn link(&self, i: usize) -> (&S, &S) {
        (&self.cuts[i], &self.cuts[i + 1])
    }

    /// Build a chain from an explicit cut list (used to construct deliberate
    /// violations in tests).
    pub fn from_cuts(p: u32, cuts: Vec<S>) -> Result<Self> {
        if cuts.len() < 2 {
            return Err(Error::Domain("a chain needs at least one link".into()));
        }
        let mut width = cuts[1].clone() - cuts[0].clone();
        for w in cuts.windows(2) {
            if !w[0].is_lt(&w[1])? {
                return Err(Error::Domain("cuts must be strictly increasing".into()));
            }
            let gap = w[1].clone() - w[0].clone();
            width = width.max_cert(gap)?;
        }
        Ok(NaturalChain { p, cuts, width })
    }
}

/// Builds C_p for the given map.
pub fn build_chain<S: Scalar>(tm: &TentMap<S>, p: u32) -> Result<NaturalChain<S>> {
    let zero = S::zero();
    let pts = tm.precritical_points(p, (&zero, tm.c1()))?;
    let mut cuts: Vec<S> = Vec::with_capacity(pts.len() + 2);
    cuts.push(S::zero());
    for pp in pts {
        cuts.push(pp.x);
    }
    match cuts.last().unwrap().try_cmp(tm.c1())? {
        Ordering::Equal => {}
        Ordering::Less => cuts.push(tm.c1().clone()),
        Ordering::Greater => unreachable!("points were filtered to [0, c1]"),
    }
    NaturalChain::from_cuts(p, cuts)
}

/// Smallest p (≤ `p_cap`) whose chain width is certified below `eps`.
pub fn choose_p<S: Scalar>(tm: &TentMap<S>, eps: &S, p_cap: u32) -> Result<NaturalChain<S>> {
    for p in 0..=p_cap {
        let chain = build_chain(tm, p)?;
        if chain.width.is_lt(eps)? {
            return Ok(chain);
        }
    }
    Err(Error::BudgetExceeded { used: u64::from(p_cap), cap: u64::from(p_cap) })
}

/// The exact image interval `T([a, b])`.
fn image_interval<S: Scalar>(tm: &TentMap<S>, a: &S, b: &S) -> Result<(S, S)> {
    let ta = tm.eval_in_domain(a)?;
    let tb = tm.eval_in_domain(b)?;
    if b.is_le(tm.c())? || a.is_ge(tm.c())? {
        // Monotone piece.
        if ta.is_le(&tb)? {
            Ok((ta, tb))
        } else {
            Ok((tb, ta))
        }
    } else {
        // Straddles c: image tops out at c₁.
        Ok((ta.min_cert(tb)?, tm.c1().clone()))
    }
}

/// Condition 3 of chain refinement: every T-image of a fine link is contained
/// in some coarse link (certified interval containment).
pub fn refines<S: Scalar>(
    tm: &TentMap<S>,
    fine: &NaturalChain<S>,
    coarse: &NaturalChain<S>,
) -> Result<bool> {
    if fine.p != coarse.p + 1 {
        return Err(Error::Domain(format!(
            "refines expects consecutive scales, got p={} vs p={}",
            fine.p, coarse.p
        )));
    }
    for i in 0..fine.link_count() {
        let (a, b) = fine.link(i);
        let (lo, hi) = image_interval(tm, a, b)?;
        // Locate the coarse link starting at or before lo.
        let idx = match binary_search_cert(&coarse.cuts, |c| c, &lo)? {
            Ok(k) => k.min(coarse.link_count() - 1),
            Err(k) => {
                if k == 0 {
                    return Ok(false);
                }
                k - 1
            }
        };
        // Containment in [cuts[idx], cuts[idx+1]]; when lo sits exactly on a
        // cut the image may belong to either adjacent link.
        let fits = |j: usize| -> Result<bool> {
            Ok(j < coarse.link_count()
                && lo.is_ge(&coarse.cuts[j])?
                && hi.is_le(&coarse.cuts[j + 1])?)
        };
        if !fits(idx)? && !fits(idx + 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Chain condition: links are nonempty, consecutive links share exactly one
/// point, non-consecutive links are disjoint.  Equivalent to the cut list
/// being certified strictly increasing.
pub fn chain_condition<S: Scalar>(chain: &NaturalChain<S>) -> Result<bool> {
    for w in chain.cuts.windows(2) {
        if !w[0].is_lt(&w[1])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Upper bound for the diameter, in the inverse-limit metric
/// `d(x, y) = Σ 2⁻ⁿ |x_{−n} − y_{−n}|`, of the preimage of a chain link under
/// the scale-`p_scale` projection: `2 · s^p · width + 2^{−p}`.
pub fn mesh_diameter_bound<S: Scalar>(
    tm: &TentMap<S>,
    chain: &NaturalChain<S>,
    p_scale: u32,
) -> Result<S> {
    if p_scale > 62 {
        return Err(Error::Domain("mesh bound scale too large".into()));
    }
    let tail = S::from_ratio(1, 1i64 << p_scale);
    Ok(S::from_ratio(2, 1) * tm.slope().pow_u(p_scale) * chain.width.clone() + tail)
}

/// One maximal monotone run of the step list.  Entry `n` of the run has link
/// index `value_before + dir · (n − start_step + 1)`.
#[derive(Clone, Copy, Debug)]
struct Run {
    start_step: u64,
    len: u64,
    dir: i8,
    value_before: i64,
}

/// A turn: a step containing at least one extremum p-point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TurnStep {
    pub step: u64,
    /// Index of the extremum vertex in the segment's point list.
    pub vertex: usize,
    pub level: u32,
}

/// The visited-link sequence of a ray segment, run-length encoded.
#[derive(Clone, Debug)]
pub struct LinkItinerary {
    /// Number of entries in the (virtual) step list; entry 0 is link 0.
    pub total_steps: u64,
    runs: Vec<Run>,
    /// Step index at which each segment vertex sits.
    pub vert_step: Vec<u64>,
    /// All turns, sorted by step (several extrema can share a step when the
    /// path folds without leaving the link).
    pub turns: Vec<TurnStep>,
}

/// Where a value sits relative to the cut list.
#[derive(Clone, Copy, Debug)]
enum Loc {
    /// Exactly the cut with this index (boundary of links i−1 and i).
    Cut(usize),
    /// Interior of the link with this index.
    In(usize),
}

fn link_of<S: Scalar>(cuts: &[S], v: &S) -> Result<Loc> {
    match binary_search_cert(cuts, |c| c, v)? {
        Ok(i) => Ok(Loc::Cut(i)),
        Err(i) => {
            debug_assert!(i > 0 && i < cuts.len());
            Ok(Loc::In(i - 1))
        }
    }
}

/// How a palindrome expansion around a center step ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stop {
    /// The next symmetric pair of links differs: the arc is maximal.
    Mismatch,
    /// The expansion hit the α end of the segment.
    AlphaEnd,
    /// The expansion hit the far end of the segment.
    FarEnd,
}

#[derive(Clone, Copy, Debug)]
pub struct Expansion {
    pub radius: u64,
    pub stop: Stop,
}

impl LinkItinerary {
    /// Link index at a step.
    pub fn link_at(&self, n: u64) -> i64 {
        if n == 0 {
            return 0;
        }
        let idx = match self.runs.binary_search_by(|r| {
            if r.start_step > n {
                Ordering::Greater
            } else if r.start_step + r.len <= n {
                Ordering::Less
            } else {
                Ordering::Equal
            }
        }) {
            Ok(i) => i,
            Err(_) => unreachable!("step {n} outside all runs"),
        };
        let r = &self.runs[idx];
        r.value_before + i64::from(r.dir) * (n - r.start_step + 1) as i64
    }

    /// Index of the run covering entry `n ≥ 1`.
    fn run_index(&self, n: u64) -> usize {
        match self.runs.binary_search_by(|r| {
            if r.start_step > n {
                Ordering::Greater
            } else if r.start_step + r.len <= n {
                Ordering::Less
            } else {
                Ordering::Equal
            }
        }) {
            Ok(i) => i,
            Err(_) => unreachable!("step {n} outside all runs"),
        }
    }

    /// Largest r with `link_at(t−k) = link_at(t+k)` for all k ≤ r, walked in
    /// run-sized chunks.
    pub fn expand(&self, t: u64) -> Expansion {
        let last = self.total_steps - 1;
        let mut k: u64 = 0;
        loop {
            if t < k + 1 {
                return Expansion { radius: k, stop: Stop::AlphaEnd };
            }
            if t + k + 1 > last {
                return Expansion { radius: k, stop: Stop::FarEnd };
            }
            // Moving left from entry t−k consumes the direction of entry t−k
            // itself; moving right to entry t+k+1 consumes its direction.
            let ln = t - k; // entry whose direction the left walker consumes
            let rn = t + k + 1;
            if ln == 0 {
                // Left walker sits at the start entry; only a direct value
                // comparison remains and it was already performed to get here.
                return Expansion { radius: k, stop: Stop::AlphaEnd };
            }
            let li = self.run_index(ln);
            let ri = self.run_index(rn);
            let lrun = &self.runs[li];
            let rrun = &self.runs[ri];
            if rrun.dir != -lrun.dir {
                return Expansion { radius: k, stop: Stop::Mismatch };
            }
            let cnt_l = ln - lrun.start_step + 1;
            let cnt_r = rrun.start_step + rrun.len - rn;
            let chunk = cnt_l.min(cnt_r).min(t - k).min(last - (t + k));
            debug_assert!(chunk >= 1);
            k += chunk;
        }
    }

    /// Materializes the step list (small chains only).
    pub fn materialize(&self, limit: u64) -> Result<Vec<i64>> {
        if self.total_steps > limit {
            return Err(Error::BudgetExceeded { used: self.total_steps, cap: limit });
        }
        let mut out = Vec::with_capacity(self.total_steps as usize);
        out.push(0);
        for r in &self.runs {
            let mut v = r.value_before;
            for _ in 0..r.len {
                v += i64::from(r.dir);
                out.push(v);
            }
        }
        Ok(out)
    }

    pub fn turn_at(&self, step: u64) -> Option<&TurnStep> {
        self.turns
            .binary_search_by_key(&step, |t| t.step)
            .ok()
            .map(|i| {
                // Several turns can share a step; report the highest level.
                let mut best = i;
                let mut lo = i;
                while lo > 0 && self.turns[lo - 1].step == step {
                    lo -= 1;
                    if self.turns[lo].level > self.turns[best].level {
                        best = lo;
                    }
                }
                let mut hi = i;
                while hi + 1 < self.turns.len() && self.turns[hi + 1].step == step {
                    hi += 1;
                    if self.turns[hi].level > self.turns[best].level {
                        best = hi;
                    }
                }
                &self.turns[best]
            })
    }
}

/// Computes the link itinerary of a segment against a chain.
///
/// Projection values of the segment's vertices are orbit points: a vertex of
/// level l projects to c_l, the α vertex to 0, so only `depth + 3` distinct
/// values occur and all link lookups are shared.
pub fn itinerary<S: Scalar>(
    tm: &TentMap<S>,
    seg: &RaySegment<S>,
    chain: &NaturalChain<S>,
) -> Result<LinkItinerary> {
    let j = seg.depth;
    let orb = tm.orbit_with_c(j + 1)?;
    // Value ids: 0..=j+1 are orbit indices, j+2 is the α value 0.
    let zero_id = (j + 2) as usize;
    let mut values: Vec<&S> = orb.iter().collect();
    let zero = S::zero();
    values.push(&zero);

    let ids: Vec<usize> = seg
        .points
        .iter()
        .map(|pt| match pt.level {
            Level::Star => zero_id,
            Level::L(l) => l as usize,
        })
        .collect();

    let mut locs: Vec<Loc> = Vec::with_capacity(values.len());
    for v in &values {
        locs.push(link_of(&chain.cuts, v)?);
    }
    // Pairwise certified comparison table over the distinct values.
    let n_vals = values.len();
    let mut cmp = vec![Ordering::Equal; n_vals * n_vals];
    for a in 0..n_vals {
        for b in 0..n_vals {
            cmp[a * n_vals + b] = values[a].try_cmp(values[b])?;
        }
    }
    let ord = |a: usize, b: usize| cmp[a * n_vals + b];

    let n = seg.points.len();
    let mut runs: Vec<Run> = Vec::new();
    let mut total: u64 = 1;
    let mut cur: i64 = 0;
    let mut vert_step: Vec<u64> = vec![0; n];
    let mut turns: Vec<TurnStep> = Vec::new();

    let emit = |runs: &mut Vec<Run>, total: &mut u64, cur: &mut i64, target: i64| {
        if target == *cur {
            return;
        }
        let dir: i8 = if target > *cur { 1 } else { -1 };
        let len = target.abs_diff(*cur);
        match runs.last_mut() {
            Some(last) if last.dir == dir && last.start_step + last.len == *total => {
                last.len += len;
            }
            _ => runs.push(Run { start_step: *total, len, dir, value_before: *cur }),
        }
        *total += len;
        *cur = target;
    };

    for k in 0..n - 1 {
        let rising = ord(ids[k + 1], ids[k]) == Ordering::Greater;
        let target: i64 = match (locs[ids[k + 1]], rising) {
            (Loc::In(idx), _) => idx as i64,
            (Loc::Cut(i), true) => i as i64 - 1,
            (Loc::Cut(i), false) => i as i64,
        };
        emit(&mut runs, &mut total, &mut cur, target);
        vert_step[k + 1] = total - 1;
        if k + 1 < n - 1 {
            let a = ord(ids[k + 1], ids[k]);
            let b = ord(ids[k + 2], ids[k + 1]);
            let extremum = (a == Ordering::Greater && b == Ordering::Less)
                || (a == Ordering::Less && b == Ordering::Greater);
            if extremum {
                if let Level::L(l) = seg.points[k + 1].level {
                    turns.push(TurnStep { step: total - 1, vertex: k + 1, level: l });
                }
            }
        }
    }
    turns.sort_by_key(|t| (t.step, t.vertex));
    Ok(LinkItinerary { total_steps: total, runs, vert_step, turns })
}

/// Maximal link-symmetric arc around a turn step.
#[derive(Clone, Debug)]
pub struct LinkSymmetricArc {
    pub center_step: u64,
    /// The highest-level extremum p-point of the central link visit.
    pub center_vertex: usize,
    pub center_level: u32,
    pub radius_links: u64,
    /// True when the expansion ended at a genuine link mismatch.
    pub maximal: bool,
    pub truncated_at_alpha: bool,
}

pub fn max_link_symmetric_arc(
    itin: &LinkItinerary,
    center_step: u64,
) -> Result<LinkSymmetricArc> {
    let turn = itin
        .turn_at(center_step)
        .ok_or(Error::NotATurn(center_step))?;
    let e = itin.expand(center_step);
    Ok(LinkSymmetricArc {
        center_step,
        center_vertex: turn.vertex,
        center_level: turn.level,
        radius_links: e.radius,
        maximal: e.stop == Stop::Mismatch,
        truncated_at_alpha: e.stop == Stop::AlphaEnd,
    })
}

/// A segment's itinerary together with the step positions of its snappy
/// points, the working unit for the snappy-count laws.
pub struct SegmentItinerary<S: Scalar> {
    pub seg: RaySegment<S>,
    pub itin: LinkItinerary,
    /// level → (vertex index, step).
    pub snappy_step: BTreeMap<u32, (usize, u64)>,
}

impl<S: Scalar> SegmentItinerary<S> {
    pub fn build(tm: &TentMap<S>, chain: &NaturalChain<S>, j: u32) -> Result<Self> {
        let seg = ray_segment(tm, j, chain.p)?;
        let itin = itinerary(tm, &seg, chain)?;
        let mut snappy_step = BTreeMap::new();
        for (k, pt) in seg.points.iter().enumerate() {
            if pt.snappy {
                if let Level::L(l) = pt.level {
                    snappy_step.entry(l).or_insert((k, itin.vert_step[k]));
                }
            }
        }
        Ok(SegmentItinerary { seg, itin, snappy_step })
    }

    fn snappies_within(&self, lo: u64, hi: u64) -> Vec<u32> {
        self.snappy_step
            .iter()
            .filter(|(_, (_, t))| lo <= *t && *t <= hi)
            .map(|(l, _)| *l)
            .collect()
    }
}

/// Result of counting snappy points inside the maximal link-symmetric arc A_i
/// around the snappy point s_i.
#[derive(Clone, Debug)]
pub struct SnappyCountReport {
    pub i: u32,
    pub kappa: u32,
    pub count: usize,
    /// Snappy levels whose steps fall inside A_i.
    pub members: Vec<u32>,
    /// The law's prediction: s_{i−κ+2} … s_{i+1}.
    pub expected: Vec<u32>,
    pub membership_ok: bool,
    /// s_{i−κ+2} strictly interior to A_i.
    pub interior_ok: bool,
    pub radius: u64,
    pub chain_p: u32,
}

fn ensure_fine_enough<S: Scalar>(chain: &NaturalChain<S>, eps: Option<&S>) -> Result<()> {
    if let Some(eps) = eps {
        if !chain.width.is_lt(eps)? {
            return Err(Error::ChainTooCoarse {
                width: chain.width.exact_str(),
                epsilon: eps.exact_str(),
            });
        }
    }
    Ok(())
}

/// Counts snappy points inside A_i.  `eps` enforces the chain-fineness
/// precondition; pass `None` to run diagnostically outside the law's
/// hypotheses (e.g. for periodic critical orbits, where the count exceeds κ).
pub fn snappy_count<S: Scalar>(
    tm: &TentMap<S>,
    chain: &NaturalChain<S>,
    eps: Option<&S>,
    i: u32,
) -> Result<SnappyCountReport> {
    let kappa = tm
        .kappa()
        .ok_or_else(|| Error::Domain("kappa not found for this slope".into()))?;
    if i + 1 < kappa {
        return Err(Error::IndexTooSmall(format!("need i >= kappa-1 = {}", kappa - 1)));
    }
    ensure_fine_enough(chain, eps)?;
    let si = SegmentItinerary::build(tm, chain, i + 3)?;
    snappy_count_in(&si, kappa, i, chain.p)
}

fn snappy_count_in<S: Scalar>(
    si: &SegmentItinerary<S>,
    kappa: u32,
    i: u32,
    chain_p: u32,
) -> Result<SnappyCountReport> {
    let &(_, t) = si
        .snappy_step
        .get(&i)
        .ok_or_else(|| Error::Domain(format!("snappy level {i} not in segment")))?;
    let e = si.itin.expand(t);
    let r = e.radius;
    let members = si.snappies_within(t - r, t + r);
    let expected: Vec<u32> = (i + 2 - kappa..=i + 1).collect();
    let membership_ok = members == expected;
    let interior_ok = match si.snappy_step.get(&(i + 2 - kappa)) {
        Some(&(_, tm_step)) => t - r < tm_step && tm_step < t + r,
        None => false,
    };
    Ok(SnappyCountReport {
        i,
        kappa,
        count: members.len(),
        members,
        expected,
        membership_ok,
        interior_ok,
        radius: r,
        chain_p,
    })
}

/// Verdict for one admissible off-center candidate of the at-most-one law.
#[derive(Clone, Debug)]
pub struct OffCenterReport {
    pub i: u32,
    pub y_step: u64,
    pub count: usize,
    pub contained_in_a_i: bool,
    pub radius: u64,
}

/// All admissible off-center turn steps for index i: turns strictly between
/// the steps of s_{i−1} and s_i.  Turns sharing the step of either snappy
/// point sit in the same arc component of its link and are excluded
/// (each step *is* one arc component of its link, so distinct steps are the
/// computable surrogate for distinct arc components).
pub fn admissible_off_centers<S: Scalar>(si: &SegmentItinerary<S>, i: u32) -> Result<Vec<u64>> {
    let &(_, t_i) = si
        .snappy_step
        .get(&i)
        .ok_or_else(|| Error::Domain(format!("snappy level {i} not in segment")))?;
    let &(_, t_prev) = si
        .snappy_step
        .get(&(i - 1))
        .ok_or_else(|| Error::Domain(format!("snappy level {} not in segment", i - 1)))?;
    let (lo, hi) = (t_prev.min(t_i), t_prev.max(t_i));
    let mut out: Vec<u64> = si
        .itin
        .turns
        .iter()
        .map(|t| t.step)
        .filter(|s| lo < *s && *s < hi)
        .collect();
    out.dedup();
    Ok(out)
}

/// The at-most-one law for one off-center candidate: the maximal
/// link-symmetric arc centered at `y_step` contains at most one snappy point
/// and lies inside A_i.  Both facts are returned for the caller to assert.
pub fn off_center_snappy_bound<S: Scalar>(
    tm: &TentMap<S>,
    chain: &NaturalChain<S>,
    eps: Option<&S>,
    i: u32,
    y_step: u64,
) -> Result<OffCenterReport> {
    let kappa = tm
        .kappa()
        .ok_or_else(|| Error::Domain("kappa not found for this slope".into()))?;
    if i < kappa {
        return Err(Error::IndexTooSmall(format!("need i > kappa-1 = {}", kappa - 1)));
    }
    ensure_fine_enough(chain, eps)?;
    let si = SegmentItinerary::build(tm, chain, i + 3)?;
    off_center_in(&si, i, y_step)
}

pub(crate) fn off_center_in<S: Scalar>(
    si: &SegmentItinerary<S>,
    i: u32,
    y_step: u64,
) -> Result<OffCenterReport> {
    let &(_, t_i) = si
        .snappy_step
        .get(&i)
        .ok_or_else(|| Error::Domain(format!("snappy level {i} not in segment")))?;
    let &(_, t_prev) = si
        .snappy_step
        .get(&(i - 1))
        .ok_or_else(|| Error::Domain(format!("snappy level {} not in segment", i - 1)))?;
    if y_step == t_i || y_step == t_prev {
        return Err(Error::BadCenter(
            "candidate shares an arc component with a bounding snappy point".into(),
        ));
    }
    let (lo, hi) = (t_prev.min(t_i), t_prev.max(t_i));
    if !(lo < y_step && y_step < hi) {
        return Err(Error::BadCenter(format!(
            "step {y_step} is not strictly between the snappy steps {lo} and {hi}"
        )));
    }
    if si.itin.turn_at(y_step).is_none() {
        return Err(Error::NotATurn(y_step));
    }
    let e_y = si.itin.expand(y_step);
    let r = e_y.radius;
    let count = si.snappies_within(y_step - r, y_step + r).len();
    let e_a = si.itin.expand(t_i);
    let contained =
        y_step - r >= t_i.saturating_sub(e_a.radius) && y_step + r <= t_i + e_a.radius;
    Ok(OffCenterReport { i, y_step, count, contained_in_a_i: contained, radius: r })
}
