//! Brute-force counts over the 8-tuples: the weighted sum of `1 / (|Delta| + P)`
//! and counts in dyadic boxes.
//!
//! Loops run over `(a1, a2, b1, b2, a3, b3)` and derive `a4 = b1 + b2 - a3`,
//! `b4 = a1 + a2 - b3` from the linear relations, which removes two of the
//! eight nested loops.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::symmetry::{canonical_representative, orbit};
use super::{DeltaQuantities, LatticeTuple};
use crate::error::{Error, Result};

/// Exhaustive loops are refused above this `M`.
pub const PROP4_M_LIMIT: i64 = 48;

/// Exact rational accumulation is refused above this `M`.
const EXACT_M_LIMIT: i64 = 12;

/// Parameters of the weighted sum `sum 1 / (|Delta| + P)` over tuples with
/// all entries in `[-M, M]`, `|Delta| <= M^(4 - delta)` and
/// `|Delta1|, |Delta2| <= c_eps (|Delta| + P)^(1 + eps')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop4Params {
    pub m: i64,
    pub delta: f64,
    pub eps_prime: f64,
    /// The implied constant in the `Delta1, Delta2` constraint.
    pub c_eps: f64,
}

impl Prop4Params {
    pub fn new(m: i64, delta: f64, eps_prime: f64) -> Self {
        Self { m, delta, eps_prime, c_eps: 1.0 }
    }

    fn validate(&self) -> Result<()> {
        if self.m > PROP4_M_LIMIT {
            return Err(Error::GuardExceeded { m: self.m, limit: PROP4_M_LIMIT });
        }
        if self.m < 1 || !(self.delta >= 0.0) || !(self.eps_prime >= 0.0) || !(self.c_eps > 0.0) {
            return Err(Error::InvalidArgument(format!("invalid parameters {self:?}")));
        }
        Ok(())
    }

    /// `floor(M^(4 - delta))`.
    pub fn delta_cap(&self) -> i64 {
        (self.m as f64).powf(4.0 - self.delta).floor() as i64
    }
}

/// Tuple counts by denominator `|Delta| + P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop4Histogram {
    pub params: Prop4Params,
    /// `counts[d]` tuples have `|Delta| + P = d`.
    pub counts: Vec<u64>,
}

impl Prop4Histogram {
    pub fn tuples(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Sum of `counts[d] / d`, accumulated from the largest `d` down so the
    /// small terms are added first. Deterministic for a given histogram.
    pub fn weighted_sum(&self) -> f64 {
        self.counts.iter().enumerate().rev().filter(|(_, &c)| c > 0).map(|(d, &c)| c as f64 / d as f64).sum()
    }

    /// The same sum as an exact fraction.
    pub fn exact_sum(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (d, &c) in self.counts.iter().enumerate().filter(|(_, &c)| c > 0) {
            acc += BigRational::new(BigInt::from(c), BigInt::from(d));
        }
        acc
    }
}

/// `b3` ranges (inclusive, possibly empty) outside of which
/// `|x - bb b3 (s - b3)| > cap`. The quadratic is solved in floating point
/// and both ends are widened by one, so the ranges are supersets; the caller
/// still applies the exact test.
fn b3_windows(x: i64, bb: i64, s: i64, cap: i64, lo: i64, hi: i64) -> [(i64, i64); 2] {
    const EMPTY: (i64, i64) = (1, 0);
    if bb == 0 {
        return if x.abs() <= cap { [(lo, hi), EMPTY] } else { [EMPTY, EMPTY] };
    }
    // b3 (s - b3) = s^2/4 - w^2 with w = b3 - s/2 must lie in [flo, fhi].
    let (f1, f2) = ((x - cap) as f64 / bb as f64, (x + cap) as f64 / bb as f64);
    let (flo, fhi) = (f1.min(f2), f1.max(f2));
    let q = (s as f64) * (s as f64) / 4.0;
    let whi2 = q - flo;
    if whi2 < 0.0 {
        return [EMPTY, EMPTY];
    }
    let (wlo, whi) = ((q - fhi).max(0.0).sqrt(), whi2.sqrt());
    let c = s as f64 / 2.0;
    let left = ((c - whi).floor() as i64 - 1, (c - wlo).ceil() as i64 + 1);
    let right = ((c + wlo).floor() as i64 - 1, (c + whi).ceil() as i64 + 1);
    let clip = |(a, b): (i64, i64)| (a.max(lo), b.min(hi));
    if left.1 >= right.0 {
        [clip((left.0, right.1)), EMPTY]
    } else {
        [clip(left), clip(right)]
    }
}

/// All tuples with outer variable `a1`, added into `hist`.
fn prop4_kernel(a1: i64, m: i64, cap: i64, lim: &[i64], hist: &mut [u64]) {
    for a2 in -m..=m {
        if (a1 - a2) & 1 != 0 {
            continue;
        }
        let (aa, s) = (a1 * a2, a1 + a2);
        let (b3_lo, b3_hi) = ((s - m).max(-m), (s + m).min(m));
        for b1 in -m..=m {
            if a1 == 0 && b1 == 0 {
                continue;
            }
            for b2 in -m..=m {
                if (b1 - b2) & 1 != 0 || (a2 == 0 && b2 == 0) {
                    continue;
                }
                let (bb, t) = (b1 * b2, b1 + b2);
                let cc = a1 * b2 + b1 * a2;
                let p12 = aa.abs().max(bb.abs());
                for a3 in (t - m).max(-m)..=(t + m).min(m) {
                    let a4 = t - a3;
                    let c34 = a3 * a4;
                    let x = aa * c34;
                    let p123 = p12.max(c34.abs());
                    for (lo, hi) in b3_windows(x, bb, s, cap, b3_lo, b3_hi) {
                        for b3 in lo..=hi {
                            let b4 = s - b3;
                            let b34 = b3 * b4;
                            let delta = x - bb * b34;
                            if delta.abs() > cap {
                                continue;
                            }
                            if (a3 == 0 && b3 == 0) || (a4 == 0 && b4 == 0) {
                                continue;
                            }
                            // With the linear relations, a = (b3, b4, b1, b2) reduces to
                            // b3 = a1, a3 = b1, and a = (b4, b3, b2, b1) to b3 = a2, a3 = b2.
                            if (b3 == a1 && a3 == b1) || (b3 == a2 && a3 == b2) {
                                continue;
                            }
                            let d = (delta.abs() + p123.max(b34.abs())) as usize;
                            let bound = lim[d];
                            let d1 = aa * (b3 * a4 + a3 * b4) - b34 * cc;
                            if d1.abs() > bound {
                                continue;
                            }
                            let d2 = c34 * cc - bb * (a3 * b4 + b3 * a4);
                            if d2.abs() > bound {
                                continue;
                            }
                            hist[d] += 1;
                        }
                    }
                }
            }
        }
    }
}

/// Counts every admissible tuple by its denominator. The count is an exact
/// integer reduction, so the result does not depend on scheduling.
pub fn prop4_histogram(params: Prop4Params) -> Result<Prop4Histogram> {
    params.validate()?;
    let m = params.m;
    let cap = params.delta_cap();
    let len = (cap + m * m + 1) as usize;
    let lim: Vec<i64> =
        (0..len).map(|d| (params.c_eps * (d as f64).powf(1.0 + params.eps_prime)).floor() as i64).collect();
    let run = |a1: i64| {
        let mut h = vec![0u64; len];
        prop4_kernel(a1, m, cap, &lim, &mut h);
        h
    };
    let add = |mut x: Vec<u64>, y: Vec<u64>| {
        x.iter_mut().zip(&y).for_each(|(u, v)| *u += v);
        x
    };
    #[cfg(feature = "parallel")]
    let counts = {
        use rayon::prelude::*;
        (-m..=m).into_par_iter().map(run).reduce(|| vec![0u64; len], add)
    };
    #[cfg(not(feature = "parallel"))]
    let counts = (-m..=m).map(run).fold(vec![0u64; len], add);
    Ok(Prop4Histogram { params, counts })
}

/// `sum 1 / (|Delta| + P)` over the admissible tuples, as a float.
pub fn prop4_sum(params: Prop4Params) -> Result<f64> {
    Ok(prop4_histogram(params)?.weighted_sum())
}

/// The same sum as an exact fraction; limited to small `M`.
pub fn prop4_exact(params: Prop4Params) -> Result<BigRational> {
    if params.m > EXACT_M_LIMIT {
        return Err(Error::GuardExceeded { m: params.m, limit: EXACT_M_LIMIT });
    }
    Ok(prop4_histogram(params)?.exact_sum())
}

/// A box `A_i <= |a_i| <= 2 A_i`, `B_i <= |b_i| <= 2 B_i`, `D <= |Delta| <= 2D`,
/// where a zero bound pins the variable (or `Delta`) to zero. Optional `K`,
/// `L` bound `|k|` and `|l|` the same way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicBox {
    pub a: [i64; 4],
    pub b: [i64; 4],
    pub d: i128,
    pub k: Option<i128>,
    pub l: Option<i128>,
}

fn in_dyadic(v: i128, bound: i128) -> bool {
    if bound == 0 {
        v == 0
    } else {
        bound <= v.abs() && v.abs() <= 2 * bound
    }
}

fn dyadic_values(bound: i64) -> Vec<i64> {
    if bound == 0 {
        vec![0]
    } else {
        (bound..=2 * bound).flat_map(|v| [-v, v]).collect()
    }
}

impl DyadicBox {
    pub fn new(a: [i64; 4], b: [i64; 4], d: i128) -> Self {
        Self { a, b, d, k: None, l: None }
    }

    pub fn bounds(&self) -> [i64; 8] {
        LatticeTuple { a: self.a, b: self.b }.to_array()
    }

    /// `P_0 = max(A1 A2, B1 B2, A3 A4, B3 B4)`.
    pub fn p0(&self) -> i128 {
        let [a1, a2, a3, a4, b1, b2, b3, b4] = self.bounds().map(i128::from);
        (a1 * a2).max(b1 * b2).max(a3 * a4).max(b3 * b4)
    }

    pub fn contains_entries(&self, t: &LatticeTuple) -> bool {
        t.to_array().iter().zip(self.bounds()).all(|(&v, bd)| in_dyadic(v.into(), bd.into()))
    }

    /// Size constraints plus `|Delta1|, |Delta2| <= c_eps (D + P_0)`.
    pub fn admits(&self, t: &LatticeTuple, q: &DeltaQuantities, c_eps: f64) -> bool {
        let limit = c_eps * (self.d + self.p0()) as f64;
        self.contains_entries(t)
            && in_dyadic(q.delta, self.d)
            && (q.delta1.abs() as f64) <= limit
            && (q.delta2.abs() as f64) <= limit
            && self.k.is_none_or(|k| in_dyadic(q.k, k))
            && self.l.is_none_or(|l| in_dyadic(q.l, l))
    }

    /// The box transported by a symmetry; `k`, `l` bounds are not symmetric
    /// and are dropped.
    pub fn image(&self, g: &super::Permutation) -> Self {
        let v = self.bounds();
        let w: [i64; 8] = std::array::from_fn(|i| v[g[i]]);
        let t = LatticeTuple::from_array(w);
        Self { a: t.a, b: t.b, d: self.d, k: None, l: None }
    }
}

/// Number of valid tuples in the box satisfying the `Delta1, Delta2` bound.
pub fn dyadic_count(bx: &DyadicBox, m: i64, c_eps: f64) -> Result<u64> {
    if m > PROP4_M_LIMIT {
        return Err(Error::GuardExceeded { m, limit: PROP4_M_LIMIT });
    }
    if let Some(bad) = bx.bounds().iter().find(|&&v| v < 0 || 2 * v > m) {
        return Err(Error::InvalidArgument(format!("bound {bad} outside [0, M/2] for M = {m}")));
    }
    let vals = bx.bounds().map(dyadic_values);
    let [va1, va2, va3, _, vb1, vb2, vb3, _] = &vals;
    let mut count = 0u64;
    for &a1 in va1 {
        for &a2 in va2 {
            if (a1 - a2) & 1 != 0 {
                continue;
            }
            for &b1 in vb1 {
                for &b2 in vb2 {
                    if (b1 - b2) & 1 != 0 {
                        continue;
                    }
                    for &a3 in va3 {
                        let a4 = b1 + b2 - a3;
                        if !in_dyadic(a4.into(), bx.a[3].into()) {
                            continue;
                        }
                        for &b3 in vb3 {
                            let b4 = a1 + a2 - b3;
                            if !in_dyadic(b4.into(), bx.b[3].into()) {
                                continue;
                            }
                            let t = LatticeTuple::new([a1, a2, a3, a4], [b1, b2, b3, b4]);
                            if !t.satisfies_same() {
                                continue;
                            }
                            let q = t.deltas()?;
                            if bx.admits(&t, &q, c_eps) {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

/// `P_0^2 min(A3, A4) min(B3, B4)`, with zero bounds counted as 1.
pub fn trivial_bound(bx: &DyadicBox) -> f64 {
    let one = |v: i64| v.max(1) as f64;
    let p0 = bx.p0().max(1) as f64;
    p0 * p0 * one(bx.a[2].min(bx.a[3])) * one(bx.b[2].min(bx.b[3]))
}

/// `(plain, weighted)` over valid tuples with entries in `[-M, M]` passing
/// `keep`: the plain count, and the sum of orbit sizes over canonical
/// representatives. They agree when `keep` is symmetry invariant.
pub fn symmetry_reduced_count<F>(m: i64, keep: F) -> Result<(u64, u64)>
where
    F: Fn(&LatticeTuple, &DeltaQuantities) -> bool,
{
    if m > PROP4_M_LIMIT {
        return Err(Error::GuardExceeded { m, limit: PROP4_M_LIMIT });
    }
    let (mut plain, mut weighted) = (0u64, 0u64);
    for a1 in -m..=m {
        for a2 in -m..=m {
            for b1 in -m..=m {
                for b2 in -m..=m {
                    for a3 in -m..=m {
                        let a4 = b1 + b2 - a3;
                        if a4.abs() > m {
                            continue;
                        }
                        for b3 in -m..=m {
                            let b4 = a1 + a2 - b3;
                            if b4.abs() > m {
                                continue;
                            }
                            let t = LatticeTuple::new([a1, a2, a3, a4], [b1, b2, b3, b4]);
                            if !t.is_valid() || !keep(&t, &t.deltas()?) {
                                continue;
                            }
                            plain += 1;
                            if canonical_representative(&t) == t {
                                weighted += orbit(&t).len() as u64;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((plain, weighted))
}
