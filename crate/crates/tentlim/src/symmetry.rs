//! ε-symmetry machinery: closest precritical points, the admissible-order
//! filter θ_N > |z_N − c|, parameter selection (N₀, N, δ, r₀, ε), exact
//! piecewise-linear asymmetry measurement, ε-periodicity verdicts, the
//! monotone pullback J_δ, and the falsification scan for the
//! no-ε-symmetric-interval property.
//!
//! All quantities are exact; every inequality that enters a selected
//! parameter set can be re-derived and re-checked via [`verify_params`].

use serde::Serialize;

use crate::numerics::Scalar;
use crate::tentmap::{sort_by_cert, PrecriticalPoint, Preperiodicity, TentMap};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A closest precritical point z_k: `T^k(z_k) = c` and T^k maps `[c, z_k]`
/// monotonically onto `[c_k, c]` (as a set).
#[derive(Clone, Debug)]
pub struct ClosestPrecritical<S> {
    pub order: u32,
    pub z: S,
    /// |z − c|.
    pub dist: S,
    pub side: Side,
}

impl<S: Scalar> ClosestPrecritical<S> {
    /// The mirror point ẑ_k = 1 − z_k, closest precritical on the other side.
    pub fn mirror(&self) -> ClosestPrecritical<S> {
        ClosestPrecritical {
            order: self.order,
            z: S::one() - self.z.clone(),
            dist: self.dist.clone(),
            side: match self.side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            },
        }
    }
}

/// All closest precritical points of order ≤ `max_order`, canonically on the
/// right of c.  Orders with no such point are omitted.
///
/// The search window `(c, c + d]` shrinks to the latest record distance, so
/// T^k is monotone on it by induction (its interior never contains a
/// lower-order precritical point) and the unique order-k solution, when the
/// image straddles c, comes from one affine inversion.
pub fn closest_precriticals<S: Scalar>(
    tm: &TentMap<S>,
    max_order: u32,
) -> Result<Vec<ClosestPrecritical<S>>> {
    if max_order < 1 {
        return Err(Error::Domain("closestPrecriticals needs maxOrder >= 1".into()));
    }
    let c = tm.c().clone();
    let mut d_cur = S::from_ratio(1, 2);
    let mut out = Vec::new();
    for k in 1..=max_order {
        let a = c.clone();
        let b = c.clone() + d_cur.clone();
        let mut fa = a.clone();
        let mut fb = b.clone();
        for _ in 0..k {
            fa = tm.eval_in_domain(&fa)?;
            fb = tm.eval_in_domain(&fb)?;
        }
        let straddles = (fa.is_lt(&c)? && c.is_lt(&fb)?) || (fb.is_lt(&c)? && c.is_lt(&fa)?);
        if straddles {
            let z = a.clone()
                + (c.clone() - fa.clone()).try_div(&(fb - fa))? * (b - a);
            d_cur = z.clone() - c.clone();
            out.push(ClosestPrecritical { order: k, z, dist: d_cur.clone(), side: Side::Right });
        }
    }
    Ok(out)
}

/// θ_N = min{ |c_i − c| : 0 < i ≤ N } for every N up to `bound`
/// (index 0 of the result is unused and set to a placeholder 1).
fn theta_table<S: Scalar>(tm: &TentMap<S>, bound: u32) -> Result<Vec<S>> {
    let orb = tm.orbit_with_c(bound)?;
    let mut out = Vec::with_capacity(bound as usize + 1);
    out.push(S::one());
    let mut cur: Option<S> = None;
    for ci in orb.iter().skip(1) {
        let d = (ci.clone() - tm.c().clone()).abs_cert()?;
        cur = Some(match cur {
            None => d,
            Some(m) => m.min_cert(d)?,
        });
        out.push(cur.clone().unwrap());
    }
    Ok(out)
}

pub fn theta<S: Scalar>(tm: &TentMap<S>, n: u32) -> Result<S> {
    Ok(theta_table(tm, n)?.pop().unwrap())
}

fn ensure_not_preperiodic<S: Scalar>(tm: &TentMap<S>, depth: u32) -> Result<()> {
    if let Preperiodicity::Yes { i, j } = tm.is_preperiodic(depth)? {
        return Err(Error::Domain(format!(
            "critical point is preperiodic (c_{i} = c_{j}); the symmetry parameters are undefined"
        )));
    }
    Ok(())
}

/// All admissible N ≤ `search_bound`: orders with a closest precritical point
/// satisfying θ_N > |z_N − c|.
pub fn find_n<S: Scalar>(tm: &TentMap<S>, search_bound: u32) -> Result<Vec<u32>> {
    ensure_not_preperiodic(tm, search_bound.max(2))?;
    let th = theta_table(tm, search_bound)?;
    let mut out = Vec::new();
    for cp in closest_precriticals(tm, search_bound)? {
        if th[cp.order as usize].is_gt(&cp.dist)? {
            out.push(cp.order);
        }
    }
    Ok(out)
}

/// The selected symmetry parameters of a slope.
#[derive(Clone, Debug)]
pub struct SymmetryParams<S> {
    pub n0: u32,
    pub n: u32,
    /// The closest precritical point z_N.
    pub z_n: S,
    /// δ = |z_N − c|.
    pub delta: S,
    pub epsilon: S,
    pub r0: u32,
    /// θ_N.
    pub theta: S,
}

/// The right-hand side of the δ bound involving left precritical points
/// c₋ⱼ = c/sʲ and ĉ₁ = 1 − c₁: `min{|c₋₁−c₋₂|, |c₋₁−ĉ₁|, |c₂−c_{2−κ}|}/30`.
fn delta_bound_left<S: Scalar>(tm: &TentMap<S>) -> Result<S> {
    let kappa = tm
        .kappa()
        .ok_or_else(|| Error::Domain("kappa not found for this slope".into()))?;
    let c = tm.c().clone();
    let left = |j: u32| -> Result<S> { c.clone().try_div(&tm.slope().pow_u(j)) };
    let cm1 = left(1)?;
    let cm2 = left(2)?;
    let hat_c1 = S::one() - tm.c1().clone();
    let c2 = tm.c2().clone();
    let c_2mk = left(kappa - 2)?;
    let m = (cm1.clone() - cm2).abs_cert()?
        .min_cert((cm1 - hat_c1).abs_cert()?)?
        .min_cert((c2 - c_2mk).abs_cert()?)?;
    m.try_div(&S::from_ratio(30, 1))
}

/// Selects N₀, N, δ, r₀ and ε:
/// - N₀: smallest admissible order with s^{N₀} > 100;
/// - N: smallest admissible order > N₀ with δ = |z_N − c| < |z_{N₀} − c|/100
///   and δ below the left-precritical bound;
/// - r₀: 1 + the least m with s^{mN}·22δ ≥ 1;
/// - ε: half of min{ |c_i − c_j| : 0 ≤ i < j ≤ (2 + r₀)N } (with c₀ = c).
pub fn select_params<S: Scalar>(tm: &TentMap<S>, budget: u32) -> Result<SymmetryParams<S>> {
    ensure_not_preperiodic(tm, budget.max(2))?;
    let th = theta_table(tm, budget)?;
    let ccp = closest_precriticals(tm, budget)?;
    let admissible: Vec<&ClosestPrecritical<S>> = {
        let mut v = Vec::new();
        for cp in &ccp {
            if th[cp.order as usize].is_gt(&cp.dist)? {
                v.push(cp);
            }
        }
        v
    };
    let hundred = S::from_ratio(100, 1);
    let mut n0_pick: Option<&ClosestPrecritical<S>> = None;
    for cp in &admissible {
        if tm.slope().pow_u(cp.order).is_gt(&hundred)? {
            n0_pick = Some(cp);
            break;
        }
    }
    let n0 = n0_pick.ok_or(Error::BudgetExceeded { used: budget as u64, cap: budget as u64 })?;
    let bound4 = delta_bound_left(tm)?;
    let z_n0_dist_over_100 = n0.dist.clone().try_div(&hundred)?;
    let mut n_pick: Option<&ClosestPrecritical<S>> = None;
    for cp in &admissible {
        if cp.order > n0.order
            && cp.dist.is_lt(&z_n0_dist_over_100)?
            && cp.dist.is_lt(&bound4)?
        {
            n_pick = Some(cp);
            break;
        }
    }
    let np = n_pick.ok_or(Error::BudgetExceeded { used: budget as u64, cap: budget as u64 })?;
    let delta = np.dist.clone();
    let n = np.order;
    // r0: growth bound for the monotone pullback length.
    let one = S::one();
    let d22 = S::from_ratio(22, 1) * delta.clone();
    let mut m = 0u32;
    while (tm.slope().pow_u(m * n) * d22.clone()).is_lt(&one)? {
        m += 1;
        if m > 64 {
            return Err(Error::BudgetExceeded { used: 64, cap: 64 });
        }
    }
    let r0 = m + 1;
    let big_m = (2 + r0) * n;
    let pts = tm.orbit_with_c(big_m)?;
    let mut min_pair: Option<S> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = (pts[i].clone() - pts[j].clone()).abs_cert()?;
            min_pair = Some(match min_pair {
                None => d,
                Some(m) => m.min_cert(d)?,
            });
        }
    }
    let epsilon = min_pair.unwrap() * S::half();
    Ok(SymmetryParams {
        n0: n0.order,
        n,
        z_n: np.z.clone(),
        delta,
        epsilon,
        r0,
        theta: th[n as usize].clone(),
    })
}

/// One re-verified inequality from the parameter selection.
#[derive(Clone, Debug, Serialize)]
pub struct ParamCertificate {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// Independently re-derives every inequality behind a parameter set.
pub fn verify_params<S: Scalar>(
    tm: &TentMap<S>,
    p: &SymmetryParams<S>,
) -> Result<Vec<ParamCertificate>> {
    let mut out = Vec::new();
    let mut push = |name: &str, lhs: &S, rhs: &S, holds: bool| {
        out.push(ParamCertificate {
            name: name.to_string(),
            lhs: lhs.exact_str(),
            rhs: rhs.exact_str(),
            holds,
        });
    };
    let hundred = S::from_ratio(100, 1);
    let s_n0 = tm.slope().pow_u(p.n0);
    push("s^N0 > 100", &s_n0, &hundred, s_n0.is_gt(&hundred)?);

    let th = theta_table(tm, p.n)?;
    let ccp = closest_precriticals(tm, p.n)?;
    let z_n0 = ccp
        .iter()
        .find(|cp| cp.order == p.n0)
        .ok_or_else(|| Error::Domain("N0 has no closest precritical point".into()))?;
    let z_n = ccp
        .iter()
        .find(|cp| cp.order == p.n)
        .ok_or_else(|| Error::Domain("N has no closest precritical point".into()))?;
    push(
        "theta_N0 > |z_N0 - c|",
        &th[p.n0 as usize],
        &z_n0.dist,
        th[p.n0 as usize].is_gt(&z_n0.dist)?,
    );
    push(
        "theta_N > |z_N - c|",
        &th[p.n as usize],
        &z_n.dist,
        th[p.n as usize].is_gt(&z_n.dist)?,
    );
    let lhs = hundred.clone() * p.delta.clone();
    push("100*delta < |z_N0 - c|", &lhs, &z_n0.dist, lhs.is_lt(&z_n0.dist)?);
    let bound4 = delta_bound_left(tm)?;
    push("delta < left-precritical bound", &p.delta, &bound4, p.delta.is_lt(&bound4)?);

    let one = S::one();
    let d22 = S::from_ratio(22, 1) * p.delta.clone();
    let grown = tm.slope().pow_u((p.r0 - 1) * p.n) * d22.clone();
    push("s^{(r0-1)N}*22*delta >= 1", &grown, &one, grown.is_ge(&one)?);
    if p.r0 >= 2 {
        let prev = tm.slope().pow_u((p.r0 - 2) * p.n) * d22;
        push("s^{(r0-2)N}*22*delta < 1", &prev, &one, prev.is_lt(&one)?);
    }

    let big_m = (2 + p.r0) * p.n;
    let pts = tm.orbit_with_c(big_m)?;
    let mut min_pair: Option<S> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = (pts[i].clone() - pts[j].clone()).abs_cert()?;
            min_pair = Some(match min_pair {
                None => d,
                Some(m) => m.min_cert(d)?,
            });
        }
    }
    let min_pair = min_pair.unwrap();
    push(
        "epsilon < min orbit gap",
        &p.epsilon,
        &min_pair,
        p.epsilon.is_lt(&min_pair)?,
    );
    Ok(out)
}

/// Exact supremum of |T^n(a+t) − T^n(b−t)| over t ∈ [0, b−a].
///
/// The difference is piecewise linear in t with breakpoints exactly where
/// a+t or b−t crosses a precritical point of order < n, so the supremum is
/// attained on the breakpoint set plus the endpoints.
pub fn max_asymmetry<S: Scalar>(tm: &TentMap<S>, a: &S, b: &S, n: u32) -> Result<S> {
    let pre = if n >= 1 {
        tm.precritical_points(n - 1, (a, b))?
    } else {
        Vec::new()
    };
    max_asymmetry_with(tm, a, b, n, &pre)
}

fn max_asymmetry_with<S: Scalar>(
    tm: &TentMap<S>,
    a: &S,
    b: &S,
    n: u32,
    pre: &[PrecriticalPoint<S>],
) -> Result<S> {
    let zero = S::zero();
    if a.is_lt(&zero)? || b.is_gt(tm.c1())? || !a.is_lt(b)? {
        return Err(Error::Domain("maxAsymmetry needs [a, b] ⊆ [0, c1] with a < b".into()));
    }
    let len = b.clone() - a.clone();
    let mut ts = vec![S::zero(), len.clone()];
    for p in pre {
        if p.order + 1 <= n && p.x.is_ge(a)? && p.x.is_le(b)? {
            ts.push(p.x.clone() - a.clone());
            ts.push(b.clone() - p.x.clone());
        }
    }
    let mut best: Option<S> = None;
    for t in ts {
        if t.is_ge(&zero)? && t.is_le(&len)? {
            let u = tm.iterate(&(a.clone() + t.clone()), n)?;
            let v = tm.iterate(&(b.clone() - t), n)?;
            let d = (u - v).abs_cert()?;
            best = Some(match best {
                None => d,
                Some(m) => m.max_cert(d)?,
            });
        }
    }
    Ok(best.unwrap())
}

/// Verdict of an ε-periodicity check.
#[derive(Clone, Debug)]
pub enum EpsPeriodicVerdict<S> {
    Holds,
    /// A witness t with `|T^n(t) − T^n(t+2η)| ≥ ε`, with the exact value.
    Fails { t: S, value: S },
}

/// Checks |T^n(t) − T^n(t+2η)| < ε for all t, t+2η ∈ [a, b].  When 2η ≥ b−a
/// there is no admissible pair and the property holds vacuously.
pub fn eps_periodic<S: Scalar>(
    tm: &TentMap<S>,
    a: &S,
    b: &S,
    n: u32,
    eta: &S,
    epsilon: &S,
) -> Result<EpsPeriodicVerdict<S>> {
    if !eta.is_gt(&S::zero())? {
        return Err(Error::Domain("epsPeriodic needs eta > 0".into()));
    }
    let two_eta = eta.clone() + eta.clone();
    let len = b.clone() - a.clone();
    if two_eta.is_ge(&len)? {
        return Ok(EpsPeriodicVerdict::Holds);
    }
    let hi = b.clone() - two_eta.clone();
    let mut ts = vec![a.clone(), hi.clone()];
    if n >= 1 {
        for p in tm.precritical_points(n - 1, (a, b))? {
            ts.push(p.x.clone());
            ts.push(p.x.clone() - two_eta.clone());
        }
    }
    sort_by_cert(&mut ts, |t| t)?;
    let mut worst: Option<(S, S)> = None;
    for t in ts {
        if t.is_ge(a)? && t.is_le(&hi)? {
            let u = tm.iterate(&t, n)?;
            let v = tm.iterate(&(t.clone() + two_eta.clone()), n)?;
            let d = (u - v).abs_cert()?;
            let better = match &worst {
                None => true,
                Some((_, w)) => d.is_gt(w)?,
            };
            if better {
                worst = Some((t, d));
            }
        }
    }
    let (t, value) = worst.unwrap();
    if value.is_lt(epsilon)? {
        Ok(EpsPeriodicVerdict::Holds)
    } else {
        Ok(EpsPeriodicVerdict::Fails { t, value })
    }
}

const PULLBACK_ITER_CAP: u32 = 20_000;

/// The monotone pullback: given J̃ with |J̃| ≥ 22δ, produces l and a
/// concentric J ⊆ J̃ with |J| ≥ 18δ, T^l monotone on J and
/// T^l(J) ⊇ [c−δ, c+δ].
///
/// Implements the two-stage cascade: if a boundary of the first critical
/// image is δ-close to c, shrink concentrically so that the boundary maps
/// exactly to c (J′), and repeat once if the other boundary then comes
/// δ-close (J″).
pub fn jdelta<S: Scalar>(
    tm: &TentMap<S>,
    jtilde: (&S, &S),
    delta: &S,
) -> Result<(u32, (S, S))> {
    let (lo, hi) = (jtilde.0.clone(), jtilde.1.clone());
    let c = tm.c().clone();
    let width = hi.clone() - lo.clone();
    let need = S::from_ratio(22, 1) * delta.clone();
    if width.is_lt(&need)? {
        return Err(Error::Domain(format!(
            "|Jtilde| = {} is below 22*delta = {}",
            width.exact_str(),
            need.exact_str()
        )));
    }
    if lo.is_lt(&S::zero())? || hi.is_gt(&S::one())? {
        return Err(Error::Domain("Jtilde must lie in [0, 1]".into()));
    }
    let x = (lo.clone() + hi.clone()) * S::half();

    let dclose = |v: &S| -> Result<bool> {
        (v.clone() - c.clone()).abs_cert()?.is_lt(delta)
    };
    // Iterate endpoint images until the (monotone) image contains c.
    let find_m = |a0: &S, b0: &S| -> Result<(u32, S, S)> {
        let mut a = a0.clone();
        let mut b = b0.clone();
        let mut m = 0u32;
        loop {
            let lo_im = a.clone().min_cert(b.clone())?;
            let hi_im = a.clone().max_cert(b.clone())?;
            if lo_im.is_le(&c)? && c.is_le(&hi_im)? {
                return Ok((m, a, b));
            }
            a = tm.eval_in_domain(&a)?;
            b = tm.eval_in_domain(&b)?;
            m += 1;
            if m > PULLBACK_ITER_CAP {
                return Err(Error::NotFound("no iterate of Jtilde reaches c".into()));
            }
        }
    };
    // Shrink [lo, hi] concentrically about x so the δ-close boundary of the
    // order-m image maps exactly to c: affine inversion on the monotone piece.
    let shrink = |lo: &S, hi: &S, fa: &S, fb: &S| -> Result<(S, S)> {
        let tpre = lo.clone()
            + (c.clone() - fa.clone())
                .try_div(&(fb.clone() - fa.clone()))?
                * (hi.clone() - lo.clone());
        let h = (tpre - x.clone()).abs_cert()?;
        Ok((x.clone() - h.clone(), x.clone() + h))
    };
    // Continue iterating past step m until c is strictly interior.
    let find_strict = |a0: &S, b0: &S, m_from: u32| -> Result<(u32, S, S)> {
        let mut a = a0.clone();
        let mut b = b0.clone();
        let mut m = m_from;
        loop {
            let lo_im = a.clone().min_cert(b.clone())?;
            let hi_im = a.clone().max_cert(b.clone())?;
            if m > m_from && lo_im.is_lt(&c)? && c.is_lt(&hi_im)? {
                return Ok((m, a, b));
            }
            a = tm.eval_in_domain(&a)?;
            b = tm.eval_in_domain(&b)?;
            m += 1;
            if m > PULLBACK_ITER_CAP {
                return Err(Error::NotFound("cascade found no strictly covering iterate".into()));
            }
        }
    };

    let (m, fa, fb) = find_m(&lo, &hi)?;
    let (l, jl, jh) = if !dclose(&fa)? && !dclose(&fb)? {
        (m, lo, hi)
    } else {
        let (lo2, hi2) = shrink(&lo, &hi, &fa, &fb)?;
        let mut a2 = lo2.clone();
        let mut b2 = hi2.clone();
        for _ in 0..m {
            a2 = tm.eval_in_domain(&a2)?;
            b2 = tm.eval_in_domain(&b2)?;
        }
        let (mp, fa2, fb2) = find_strict(&a2, &b2, m)?;
        // find_strict iterated images, so mp counts from 0 on [lo2, hi2].
        if !dclose(&fa2)? && !dclose(&fb2)? {
            (mp, lo2, hi2)
        } else {
            let (lo3, hi3) = shrink(&lo2, &hi2, &fa2, &fb2)?;
            let mut a3 = lo3.clone();
            let mut b3 = hi3.clone();
            for _ in 0..mp {
                a3 = tm.eval_in_domain(&a3)?;
                b3 = tm.eval_in_domain(&b3)?;
            }
            let (mpp, _, _) = find_strict(&a3, &b3, mp)?;
            (mpp, lo3, hi3)
        }
    };

    // Certify the size and containment postconditions before returning.
    let size = jh.clone() - jl.clone();
    if size.is_lt(&(S::from_ratio(18, 1) * delta.clone()))? {
        return Err(Error::NotFound(format!(
            "pullback interval too small: |J| = {}",
            size.exact_str()
        )));
    }
    let mut ia = jl.clone();
    let mut ib = jh.clone();
    for _ in 0..l {
        ia = tm.eval_in_domain(&ia)?;
        ib = tm.eval_in_domain(&ib)?;
    }
    let lo_im = ia.clone().min_cert(ib.clone())?;
    let hi_im = ia.max_cert(ib)?;
    let contains = lo_im.is_le(&(c.clone() - delta.clone()))?
        && (c.clone() + delta.clone()).is_le(&hi_im)?;
    if !contains {
        return Err(Error::NotFound("image does not cover [c-delta, c+delta]".into()));
    }
    Ok((l, (jl, jh)))
}

/// One sampled case of the asymmetry scan.
#[derive(Clone, Debug)]
pub struct ScanCase<S> {
    pub a: S,
    pub b: S,
    pub n: u32,
    pub max_asymmetry: S,
    pub pass: bool,
}

/// Outcome of the falsification scan: every sampled interval H ∋ c obeying
/// the δ-distance condition should fail to be ε-symmetric at every n ≤ nMax.
#[derive(Clone, Debug)]
pub struct ScanOutcome<S> {
    pub slope: S,
    pub delta: S,
    pub epsilon: S,
    pub n_max: u32,
    pub cases: Vec<ScanCase<S>>,
    pub min_slack: S,
    pub counterexamples: usize,
}

impl<S: Scalar> ScanOutcome<S> {
    pub fn to_json(&self, approx: bool) -> serde_json::Value {
        let num = |v: &S| serde_json::Value::String(v.exact_str());
        let mut cases = Vec::new();
        for case in &self.cases {
            let mut obj = serde_json::json!({
                "H": [case.a.exact_str(), case.b.exact_str()],
                "n": case.n,
                "maxAsymmetry": case.max_asymmetry.exact_str(),
                "pass": case.pass,
            });
            if approx {
                obj["maxAsymmetryApprox"] =
                    serde_json::json!(Scalar::approx(&case.max_asymmetry));
            }
            cases.push(obj);
        }
        let mut root = serde_json::json!({
            "slope": num(&self.slope),
            "delta": num(&self.delta),
            "epsilon": num(&self.epsilon),
            "nMax": self.n_max,
            "cases": cases,
            "minSlack": num(&self.min_slack),
            "counterexamples": self.counterexamples,
        });
        if approx {
            root["deltaApprox"] = serde_json::json!(Scalar::approx(&self.delta));
            root["epsilonApprox"] = serde_json::json!(Scalar::approx(&self.epsilon));
            root["minSlackApprox"] = serde_json::json!(Scalar::approx(&self.min_slack));
        }
        root
    }
}

/// Samples intervals H = [a, b] ∋ c on a rational grid, excludes those whose
/// endpoints or center come δ-close to c, and records maxAsymmetry(H, n) for
/// every n ≤ `n_max`.  A case with value below ε would falsify the
/// implementation (the underlying proposition quantifies over all H).
pub fn asymmetry_scan<S: Scalar>(
    tm: &TentMap<S>,
    params: &SymmetryParams<S>,
    n_max: u32,
    grid: u32,
) -> Result<ScanOutcome<S>> {
    if grid == 0 {
        return Err(Error::Domain("scan grid must be positive".into()));
    }
    let c = tm.c().clone();
    let c1 = tm.c1().clone();
    let delta = &params.delta;
    let pre_all = if n_max >= 1 {
        tm.precritical_points(n_max - 1, (&S::zero(), &S::one()))?
    } else {
        Vec::new()
    };
    let mut cases = Vec::new();
    let mut min_slack: Option<S> = None;
    let mut counterexamples = 0usize;
    let g1 = i64::from(grid) + 1;
    for k in 1..=i64::from(grid) {
        let a = c.clone() * S::from_ratio(k, g1);
        let b = c.clone()
            + (c1.clone() - c.clone()) * S::from_ratio(i64::from(grid) + 2 - k, g1);
        let x = (a.clone() + b.clone()) * S::half();
        let far = |v: &S| -> Result<bool> {
            (v.clone() - c.clone()).abs_cert()?.is_gt(delta)
        };
        if !(far(&a)? && far(&b)? && far(&x)?) {
            continue;
        }
        if !(a.is_lt(&c)? && c.is_lt(&b)?) || b.is_gt(&c1)? || a.is_lt(&S::zero())? {
            continue;
        }
        for n in 0..=n_max {
            let m = max_asymmetry_with(tm, &a, &b, n, &pre_all)?;
            let pass = m.is_ge(&params.epsilon)?;
            if !pass {
                counterexamples += 1;
            }
            let slack = m.clone() - params.epsilon.clone();
            min_slack = Some(match min_slack {
                None => slack,
                Some(ms) => ms.min_cert(slack)?,
            });
            cases.push(ScanCase { a: a.clone(), b: b.clone(), n, max_asymmetry: m, pass });
        }
    }
    let min_slack = min_slack
        .ok_or_else(|| Error::Domain("every grid interval was excluded by the delta filter".into()))?;
    Ok(ScanOutcome {
        slope: tm.slope().clone(),
        delta: delta.clone(),
        epsilon: params.epsilon.clone(),
        n_max,
        cases,
        min_slack,
        counterexamples,
    })
}
