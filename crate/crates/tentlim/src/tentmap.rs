//! The tent map `T_s`, its critical orbit, preimage structure and
//! preperiodicity detection.

use std::cmp::Ordering;

use crate::numerics::Scalar;
use crate::{Error, Result};

/// Default per-value bit-size budget.  Denominator growth under iteration is
/// unbounded, so operations fail loudly once a value outgrows this cap rather
/// than silently degrading.
pub const DEFAULT_BIT_CAP: u64 = 1 << 22;

/// The tent map `T_s(x) = min(sx, s(1−x))` with its derived constants.
///
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct TentMap<S: Scalar> {
    s: S,
    c: S,
    c1: S,
    c2: S,
    kappa: Option<u32>,
    bit_cap: u64,
}

/// A point with `T^order(x) = c` and `T^i(x) ≠ c` for `i < order`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecriticalPoint<S> {
    pub x: S,
    /// Minimal order.  When c is periodic a precritical point has infinitely
    /// many orders; the minimal one is finite and computable in all cases, and
    /// together with a segment depth it recovers the largest-coincidence
    /// level convention downstream.
    pub order: u32,
}

/// Outcome of a bounded preperiodicity search on the critical orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preperiodicity {
    /// Certified `c_i = c_j` with `i < j` (treating `c_0 = c`).
    Yes { i: u32, j: u32 },
    /// No coincidence up to the given depth; not a claim of aperiodicity.
    NoWitnessUpTo(u32),
}

/// Certified sort helper: sorts by a scalar key, surfacing the first
/// comparison failure instead of guessing an order.
pub(crate) fn sort_by_cert<T, S: Scalar>(
    v: &mut [T],
    key: impl Fn(&T) -> &S,
) -> Result<()> {
    let mut err: Option<Error> = None;
    v.sort_by(|a, b| match key(a).try_cmp(key(b)) {
        Ok(o) => o,
        Err(e) => {
            if err.is_none() {
                err = Some(e);
            }
            Ordering::Equal
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Certified binary search over a slice sorted by a scalar key.
pub(crate) fn binary_search_cert<T, S: Scalar>(
    v: &[T],
    key: impl Fn(&T) -> &S,
    x: &S,
) -> Result<std::result::Result<usize, usize>> {
    let mut lo = 0usize;
    let mut hi = v.len();
    while lo < hi {
        let mid = (lo + hi) / 2;
        match key(&v[mid]).try_cmp(x)? {
            Ordering::Less => lo = mid + 1,
            Ordering::Greater => hi = mid,
            Ordering::Equal => return Ok(Ok(mid)),
        }
    }
    Ok(Err(lo))
}

impl<S: Scalar> TentMap<S> {
    pub fn new(s: S) -> Result<Self> {
        Self::with_bit_cap(s, DEFAULT_BIT_CAP)
    }

    pub fn with_bit_cap(s: S, bit_cap: u64) -> Result<Self> {
        if !s.is_gt(&S::one())? || !s.is_le(&S::from_ratio(2, 1))? {
            return Err(Error::Domain(format!(
                "slope must lie in (1, 2], got {s}"
            )));
        }
        let c = S::half();
        let c1 = s.clone() * c.clone();
        let c2 = s.clone() * (S::one() - c1.clone());
        let mut tm = TentMap { s, c, c1, c2, kappa: None, bit_cap };
        tm.kappa = tm.compute_kappa(64).ok();
        Ok(tm)
    }

    pub fn slope(&self) -> &S {
        &self.s
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    pub fn c1(&self) -> &S {
        &self.c1
    }

    pub fn c2(&self) -> &S {
        &self.c2
    }

    /// κ = min{i ≥ 3 : c_i ≥ c}, if found within the construction bound.
    pub fn kappa(&self) -> Option<u32> {
        self.kappa
    }

    pub fn bit_cap(&self) -> u64 {
        self.bit_cap
    }

    fn check_budget(&self, v: &S) -> Result<()> {
        let used = v.bit_size();
        if used > self.bit_cap {
            return Err(Error::BudgetExceeded { used, cap: self.bit_cap });
        }
        Ok(())
    }

    /// `T_s(x)`; the branch choice is certified by comparing x with c.
    pub fn eval(&self, x: &S) -> Result<S> {
        if !x.is_ge(&S::zero())? || !x.is_le(&S::one())? {
            return Err(Error::Domain(format!("eval: {x} outside [0,1]")));
        }
        self.eval_in_domain(x)
    }

    /// `T_s(x)` for x already certified to lie in [0,1].
    pub(crate) fn eval_in_domain(&self, x: &S) -> Result<S> {
        if x.is_le(&self.c)? {
            Ok(self.s.clone() * x.clone())
        } else {
            Ok(self.s.clone() * (S::one() - x.clone()))
        }
    }

    /// `T^n(x)` with budget checks along the way.
    pub fn iterate(&self, x: &S, n: u32) -> Result<S> {
        let mut v = x.clone();
        for _ in 0..n {
            v = self.eval_in_domain(&v)?;
            self.check_budget(&v)?;
        }
        Ok(v)
    }

    /// `[c₁, …, c_n]` exactly.
    pub fn critical_orbit(&self, n: u32) -> Result<Vec<S>> {
        let mut out = Vec::with_capacity(n as usize);
        let mut v = self.c.clone();
        for _ in 0..n {
            v = self.eval_in_domain(&v)?;
            self.check_budget(&v)?;
            out.push(v.clone());
        }
        Ok(out)
    }

    /// `[c₀ = c, c₁, …, c_n]`.
    pub(crate) fn orbit_with_c(&self, n: u32) -> Result<Vec<S>> {
        let mut out = Vec::with_capacity(n as usize + 1);
        out.push(self.c.clone());
        out.extend(self.critical_orbit(n)?);
        Ok(out)
    }

    /// Smallest i in [3, bound] with certified c_i ≥ c.
    pub fn compute_kappa(&self, bound: u32) -> Result<u32> {
        if bound < 3 {
            return Err(Error::Domain("computeKappa requires bound >= 3".into()));
        }
        let mut v = self.c.clone();
        for i in 1..=bound {
            v = self.eval_in_domain(&v)?;
            self.check_budget(&v)?;
            if i >= 3 && v.is_ge(&self.c)? {
                return Ok(i);
            }
        }
        Err(Error::NotFoundWithinBound(bound))
    }

    /// `{y/s, 1−y/s}`, sorted, deduplicated when y = c₁ (where both branches
    /// meet at c).
    pub fn preimages(&self, y: &S) -> Result<Vec<S>> {
        if !y.is_ge(&S::zero())? || !y.is_le(&self.c1)? {
            return Err(Error::Domain(format!(
                "preimages: {y} outside [0, c1]"
            )));
        }
        let z1 = y.try_div(&self.s)?;
        let z2 = S::one() - z1.clone();
        if z1.eq_cert(&z2)? {
            Ok(vec![z1])
        } else if z1.is_lt(&z2)? {
            Ok(vec![z1, z2])
        } else {
            Ok(vec![z2, z1])
        }
    }

    /// All minimal-order precritical points of order ≤ max_order in [0,1],
    /// sorted ascending, each with its minimal order.
    ///
    /// The enumeration is a breadth-first walk of the preimage tree rooted at
    /// c.  A node y has children only when y ≤ c₁ (points above the maximum of
    /// T have no preimages).  A child can coincide with an earlier node only
    /// when c is periodic, so membership is checked against the sorted master
    /// list before a child joins the frontier.
    pub fn precritical_all(&self, max_order: u32) -> Result<Vec<PrecriticalPoint<S>>> {
        let mut master: Vec<PrecriticalPoint<S>> =
            vec![PrecriticalPoint { x: self.c.clone(), order: 0 }];
        let mut frontier: Vec<S> = vec![self.c.clone()];
        for k in 1..=max_order {
            let mut batch: Vec<S> = Vec::with_capacity(frontier.len() * 2);
            for y in &frontier {
                if y.is_gt(&self.c1)? {
                    continue;
                }
                let z1 = y.try_div(&self.s)?;
                self.check_budget(&z1)?;
                let z2 = S::one() - z1.clone();
                batch.push(z1);
                batch.push(z2);
            }
            sort_by_cert(&mut batch, |x| x)?;
            let mut fresh: Vec<S> = Vec::with_capacity(batch.len());
            for z in batch {
                if let Some(last) = fresh.last() {
                    if last.eq_cert(&z)? {
                        continue;
                    }
                }
                if binary_search_cert(&master, |p| &p.x, &z)?.is_err() {
                    fresh.push(z);
                }
            }
            if fresh.is_empty() {
                break;
            }
            // Linear merge of the sorted master with the sorted fresh batch.
            let mut merged: Vec<PrecriticalPoint<S>> =
                Vec::with_capacity(master.len() + fresh.len());
            let mut it_m = master.into_iter().peekable();
            let mut it_f = fresh.iter().cloned().peekable();
            loop {
                match (it_m.peek(), it_f.peek()) {
                    (Some(m), Some(f)) => {
                        if m.x.is_lt(f)? {
                            merged.push(it_m.next().unwrap());
                        } else {
                            merged.push(PrecriticalPoint {
                                x: it_f.next().unwrap(),
                                order: k,
                            });
                        }
                    }
                    (Some(_), None) => merged.push(it_m.next().unwrap()),
                    (None, Some(_)) => merged.push(PrecriticalPoint {
                        x: it_f.next().unwrap(),
                        order: k,
                    }),
                    (None, None) => break,
                }
            }
            master = merged;
            frontier = fresh;
        }
        Ok(master)
    }

    /// All x in the window with minimal order ≤ max_order, sorted ascending.
    pub fn precritical_points(
        &self,
        max_order: u32,
        window: (&S, &S),
    ) -> Result<Vec<PrecriticalPoint<S>>> {
        let all = self.precritical_all(max_order)?;
        let mut out = Vec::new();
        for p in all {
            if p.x.is_ge(window.0)? && p.x.is_le(window.1)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Bounded search for a certified coincidence `c_i = c_j` on the critical
    /// orbit (with `c_0 = c`).  Reports the smallest j, then the smallest i.
    pub fn is_preperiodic(&self, depth: u32) -> Result<Preperiodicity> {
        if depth < 2 {
            return Err(Error::Domain("isPreperiodic requires depth >= 2".into()));
        }
        let orb = self.orbit_with_c(depth)?;
        for j in 1..=depth as usize {
            for i in 0..j {
                if orb[i].eq_cert(&orb[j])? {
                    return Ok(Preperiodicity::Yes { i: i as u32, j: j as u32 });
                }
            }
        }
        Ok(Preperiodicity::NoWitnessUpTo(depth))
    }
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
        let phi = QuadExt::new(
            BigRational::from_ratio(1, 2),
            BigRational::from_ratio(1, 2),
            5,
        );
        TentMap::new(phi).unwrap()
    }

    #[test]
    fn slope_range_is_enforced() {
        assert!(TentMap::new(rat(1, 1)).is_err());
        assert!(TentMap::new(rat(21, 10)).is_err());
        assert!(TentMap::new(rat(2, 1)).is_ok());
    }

    #[test]
    fn eval_examples() {
        let t = tm(17, 10);
        assert_eq!(t.eval(&rat(1, 2)).unwrap(), rat(17, 20));
        assert_eq!(t.eval(&rat(17, 20)).unwrap(), rat(51, 200));
        assert_eq!(t.eval(&rat(0, 1)).unwrap(), rat(0, 1));
        assert!(t.eval(&rat(-1, 2)).is_err());
        assert!(t.eval(&rat(3, 2)).is_err());
    }

    #[test]
    fn derived_constants() {
        let t = tm(17, 10);
        assert_eq!(*t.c1(), rat(17, 20));
        assert_eq!(*t.c2(), rat(51, 200));
        // c1 ≥ c ≥ c2, T(c1) = c2, T(c2) = c3.
        assert!(t.c1() >= t.c());
        assert!(t.c() >= t.c2());
        assert_eq!(t.eval(t.c1()).unwrap(), *t.c2());
        let c3 = t.eval(t.c2()).unwrap();
        assert_eq!(c3, rat(867, 2000));
    }

    #[test]
    fn critical_orbit_17_10() {
        let t = tm(17, 10);
        assert_eq!(
            t.critical_orbit(4).unwrap(),
            vec![rat(17, 20), rat(51, 200), rat(867, 2000), rat(14739, 20000)]
        );
    }

    #[test]
    fn critical_orbit_full_tent() {
        let t = tm(2, 1);
        assert_eq!(
            t.critical_orbit(3).unwrap(),
            vec![rat(1, 1), rat(0, 1), rat(0, 1)]
        );
    }

    #[test]
    fn critical_orbit_golden_period_three() {
        let t = golden();
        let orb = t.critical_orbit(3).unwrap();
        // c₃ = c: the golden critical point is periodic with period 3.
        assert_eq!(orb[2].try_cmp(&QuadExt::from_ratio(1, 2)).unwrap(), Ordering::Equal);
        assert_eq!(orb[0], *t.c1());
    }

    #[test]
    fn kappa_values() {
        assert_eq!(tm(17, 10).compute_kappa(10).unwrap(), 4);
        assert_eq!(tm(3, 2).compute_kappa(10).unwrap(), 3);
        assert_eq!(golden().compute_kappa(10).unwrap(), 3);
        assert_eq!(tm(19, 10).compute_kappa(10).unwrap(), 5);
        // kappa is cached on construction.
        assert_eq!(tm(17, 10).kappa(), Some(4));
    }

    #[test]
    fn preimage_examples() {
        let t = tm(17, 10);
        assert_eq!(t.preimages(&rat(1, 2)).unwrap(), vec![rat(5, 17), rat(12, 17)]);
        assert_eq!(t.preimages(&rat(17, 20)).unwrap(), vec![rat(1, 2)]);
        let full = tm(2, 1);
        assert_eq!(full.preimages(&rat(0, 1)).unwrap(), vec![rat(0, 1), rat(1, 1)]);
        assert!(t.preimages(&rat(9, 10)).is_err());
    }

    #[test]
    fn precritical_points_order_one() {
        let t = tm(17, 10);
        let pts = t
            .precritical_points(1, (&rat(0, 1), &rat(17, 20)))
            .unwrap();
        let expect = vec![
            PrecriticalPoint { x: rat(5, 17), order: 1 },
            PrecriticalPoint { x: rat(1, 2), order: 0 },
            PrecriticalPoint { x: rat(12, 17), order: 1 },
        ];
        assert_eq!(pts, expect);
    }

    #[test]
    fn precritical_points_order_zero() {
        let t = tm(17, 10);
        let pts = t.precritical_points(0, (&rat(0, 1), &rat(1, 1))).unwrap();
        assert_eq!(pts, vec![PrecriticalPoint { x: rat(1, 2), order: 0 }]);
    }

    #[test]
    fn precritical_points_golden_includes_c1() {
        let t = golden();
        let zero = QuadExt::from_ratio(0, 1);
        let pts = t.precritical_points(2, (&zero, t.c1())).unwrap();
        assert_eq!(pts.len(), 7);
        // φ/2 itself is precritical of minimal order 2 (since c₃ = c).
        let last = pts.last().unwrap();
        assert_eq!(last.x.try_cmp(t.c1()).unwrap(), Ordering::Equal);
        assert_eq!(last.order, 2);
    }

    #[test]
    fn precritical_points_sorted_and_match_naive_oracle() {
        use std::collections::BTreeMap;
        // Independent oracle: iterate full preimage sets with BTreeMap dedup.
        let t = tm(17, 10);
        for max_order in 0..=6u32 {
            let mut seen: BTreeMap<Rat, u32> = BTreeMap::new();
            seen.insert(rat(1, 2), 0);
            let mut frontier = vec![rat(1, 2)];
            for k in 1..=max_order {
                let mut next = Vec::new();
                for y in &frontier {
                    if *y > rat(17, 20) {
                        continue;
                    }
                    for z in t.preimages(y).unwrap() {
                        if !seen.contains_key(&z) {
                            seen.insert(z.clone(), k);
                            next.push(z);
                        }
                    }
                }
                frontier = next;
            }
            let got = t.precritical_points(max_order, (&rat(0, 1), &rat(1, 1))).unwrap();
            assert_eq!(got.len(), seen.len());
            for (p, (x, o)) in got.iter().zip(seen.iter()) {
                assert_eq!(&p.x, x);
                assert_eq!(p.order, *o);
            }
            for w in got.windows(2) {
                assert!(w[0].x < w[1].x, "not strictly sorted");
            }
        }
    }

    #[test]
    fn preperiodicity_reports() {
        assert_eq!(
            golden().is_preperiodic(5).unwrap(),
            Preperiodicity::Yes { i: 0, j: 3 }
        );
        assert_eq!(
            tm(2, 1).is_preperiodic(4).unwrap(),
            Preperiodicity::Yes { i: 2, j: 3 }
        );
        assert_eq!(
            tm(17, 10).is_preperiodic(30).unwrap(),
            Preperiodicity::NoWitnessUpTo(30)
        );
    }

    #[test]
    fn orbit_self_consistency_and_hat_symmetry() {
        let t = tm(19, 10);
        let orb = t.critical_orbit(12).unwrap();
        let mut v = rat(1, 2);
        for ci in &orb {
            v = t.eval(&v).unwrap();
            assert_eq!(&v, ci);
        }
        // T(x) = T(1−x) for sampled x (the hat operation x̂ = 1−x).
        for k in 0..100i64 {
            let x = rat(k, 100);
            let hat = rat(1, 1) - x.clone();
            assert_eq!(t.eval(&x).unwrap(), t.eval(&hat).unwrap());
        }
    }
}
