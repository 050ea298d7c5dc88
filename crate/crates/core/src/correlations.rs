//! Pair and triple correlations of sorted sequences.
//!
//! `T_n(I_2, .., I_n; N)` counts ordered tuples of pairwise distinct indices
//! `i_1, .., i_n <= N` with `v[i_j] - v[i_1]` in `I_j`, divided by `N`. The
//! first `N` entries of the (sorted) input are used, never a value cutoff.
//!
//! Two evaluation paths exist: window counting by monotone search over the
//! sorted prefix, and the literal nested-loop [`n_correlation_oracle`]. Both
//! test membership with the same predicate on the same floating-point
//! differences, so their integer counts agree exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nested loops are refused above this sample size.
pub const ORACLE_LIMIT: usize = 5000;

/// A real interval for differences.
///
/// The default convention ([`Interval::new`]) is half-open `(lo, hi]`,
/// except that `lo = 0` gives the closed `[0, hi]`, so exact ties between
/// distinct indices are counted. Explicit constructors override it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_closed: lo == 0.0 }
    }

    /// `[lo, hi]`.
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_closed: true }
    }

    /// `(lo, hi]`.
    pub fn open_closed(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_closed: false }
    }

    /// Lebesgue measure.
    pub fn length(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }

    /// Lower-end test; monotone in `d`.
    #[inline]
    pub fn above_lower(&self, d: f64) -> bool {
        if self.lo_closed {
            d >= self.lo
        } else {
            d > self.lo
        }
    }

    /// Upper-end test; antitone in `d`.
    #[inline]
    pub fn below_upper(&self, d: f64) -> bool {
        d <= self.hi
    }

    #[inline]
    pub fn contains(&self, d: f64) -> bool {
        self.above_lower(d) && self.below_upper(d)
    }

    /// Intersection, which is again an interval of the same kind.
    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        Interval { lo, hi: self.hi.min(other.hi), lo_closed }
    }

    pub fn negated(&self) -> Interval {
        // -(lo, hi] = [-hi, -lo); only the closed case maps onto our family.
        Interval { lo: -self.hi, hi: -self.lo, lo_closed: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Optimized,
}

/// One evaluated correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationStat {
    pub order: usize,
    pub intervals: Vec<Interval>,
    pub sample_size: usize,
    /// Exact number of admissible tuples.
    pub count: u64,
    pub value: f64,
    pub method: Method,
}

impl CorrelationStat {
    fn new(order: usize, intervals: Vec<Interval>, n: usize, count: u64, method: Method) -> Self {
        let value = if n == 0 { 0.0 } else { count as f64 / n as f64 };
        Self { order, intervals, sample_size: n, count, value, method }
    }
}

fn prefix<S: AsRef<[f64]> + ?Sized>(values: &S, n: usize) -> Result<&[f64]> {
    let v = values.as_ref();
    if n > v.len() {
        return Err(Error::SampleTooLarge { requested: n, available: v.len() });
    }
    debug_assert!(v[..n].windows(2).all(|w| w[0] <= w[1]), "input must be sorted");
    Ok(&v[..n])
}

/// Number of `j != i` with `v[j] - v[i]` in `interval`.
#[inline]
fn window_count(v: &[f64], i: usize, interval: &Interval) -> u64 {
    let x = v[i];
    let start = v.partition_point(|&y| !interval.above_lower(y - x));
    let end = v.partition_point(|&y| interval.below_upper(y - x));
    let mut c = end.saturating_sub(start) as u64;
    if interval.contains(0.0) {
        c -= 1;
    }
    c
}

/// Ordered-pair count by two monotone pointers.
fn pair_count(v: &[f64], interval: &Interval) -> u64 {
    let n = v.len();
    if n == 0 || interval.lo > interval.hi {
        return 0;
    }
    let self_hit = interval.contains(0.0);
    let (mut start, mut end) = (0usize, 0usize);
    let mut total = 0u64;
    for i in 0..n {
        let x = v[i];
        while start < n && !interval.above_lower(v[start] - x) {
            start += 1;
        }
        if end < start {
            end = start;
        }
        while end < n && interval.below_upper(v[end] - x) {
            end += 1;
        }
        total += (end - start) as u64;
        if self_hit {
            total -= 1;
        }
    }
    total
}

/// `T_2(I; N)` on the first `n` values.
pub fn pair_correlation<S: AsRef<[f64]> + ?Sized>(values: &S, interval: Interval, n: usize) -> Result<CorrelationStat> {
    let v = prefix(values, n)?;
    Ok(CorrelationStat::new(2, vec![interval], n, pair_count(v, &interval), Method::Optimized))
}

/// `T_3(I_1, I_2; N)`: per first index, the product of the two window counts
/// minus the `i_2 = i_3` diagonal, which is the window count of `I_1 ∩ I_2`.
pub fn triple_correlation<S: AsRef<[f64]> + ?Sized>(
    values: &S,
    i1: Interval,
    i2: Interval,
    n: usize,
) -> Result<CorrelationStat> {
    let v = prefix(values, n)?;
    let cap = i1.intersect(&i2);
    let mut total = 0u64;
    for i in 0..n {
        let c1 = window_count(v, i, &i1);
        if c1 == 0 {
            continue;
        }
        let c2 = window_count(v, i, &i2);
        let c12 = if cap.lo <= cap.hi { window_count(v, i, &cap) } else { 0 };
        total += c1 * c2 - c12;
    }
    Ok(CorrelationStat::new(3, vec![i1, i2], n, total, Method::Optimized))
}

/// Literal count over pairwise-distinct index tuples; `intervals` has length
/// 1 (pairs) or 2 (triples).
pub fn n_correlation_oracle<S: AsRef<[f64]> + ?Sized>(
    values: &S,
    intervals: &[Interval],
    n: usize,
) -> Result<CorrelationStat> {
    if n > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge { n, limit: ORACLE_LIMIT });
    }
    let v = prefix(values, n)?;
    let mut count = 0u64;
    match intervals {
        [a] => {
            for i1 in 0..n {
                for i2 in 0..n {
                    if i1 != i2 && a.contains(v[i2] - v[i1]) {
                        count += 1;
                    }
                }
            }
        }
        [a, b] => {
            for i1 in 0..n {
                for i2 in 0..n {
                    if i2 == i1 || !a.contains(v[i2] - v[i1]) {
                        continue;
                    }
                    for i3 in 0..n {
                        if i3 != i1 && i3 != i2 && b.contains(v[i3] - v[i1]) {
                            count += 1;
                        }
                    }
                }
            }
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "oracle supports orders 2 and 3, got {} intervals",
                intervals.len()
            )))
        }
    }
    Ok(CorrelationStat::new(intervals.len() + 1, intervals.to_vec(), n, count, Method::Oracle))
}

/// `T_2([0, b])` or `T_3([0, b], [0, b])` for each `b` in an ascending grid.
pub fn correlation_curve<S: AsRef<[f64]> + ?Sized>(
    values: &S,
    b_grid: &[f64],
    order: usize,
    n: usize,
) -> Result<Vec<CorrelationStat>> {
    if b_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("b grid must be ascending".into()));
    }
    b_grid
        .iter()
        .map(|&b| {
            let i = Interval::closed(0.0, b);
            match order {
                2 => pair_correlation(values, i, n),
                3 => triple_correlation(values, i, i, n),
                _ => Err(Error::InvalidArgument(format!("unsupported order {order}"))),
            }
        })
        .collect()
}

/// `T_3(I; N_j)` along `N_j = 2^j N_0`, `j = 0..steps`, with the smallest and
/// largest value seen. Finite-N probe of the almost-sure liminf/limsup
/// statements; nothing is asserted about it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsequenceProbe {
    pub points: Vec<(usize, f64)>,
    pub min: f64,
    pub max: f64,
}

pub fn triple_subsequence_probe<S: AsRef<[f64]> + ?Sized>(
    values: &S,
    interval: Interval,
    n0: usize,
    steps: u32,
) -> Result<SubsequenceProbe> {
    let points = (0..steps)
        .map(|j| {
            let n = n0 << j;
            triple_correlation(values, interval, interval, n).map(|s| (n, s.value))
        })
        .collect::<Result<Vec<_>>>()?;
    let min = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(SubsequenceProbe { points, min, max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn integers(n: usize) -> Vec<f64> {
        (0..n).map(|k| k as f64).collect()
    }

    #[test]
    fn pair_examples_on_integers() {
        let n = 50;
        let v = integers(n);
        let s = pair_correlation(&v, Interval::new(0.5, 1.5), n).unwrap();
        assert_eq!(s.count, (n - 1) as u64);
        assert_eq!(s.value, (n - 1) as f64 / n as f64);
        let s = pair_correlation(&v, Interval::new(-1.5, 1.5), n).unwrap();
        assert_eq!(s.count, 2 * (n - 1) as u64);
    }

    #[test]
    fn triple_examples_on_integers() {
        let n = 40;
        let v = integers(n);
        let unit = Interval::new(0.5, 1.5);
        assert_eq!(triple_correlation(&v, unit, unit, n).unwrap().count, 0);
        let two = Interval::new(1.5, 2.5);
        assert_eq!(triple_correlation(&v, unit, two, n).unwrap().count, (n - 2) as u64);
    }

    #[test]
    fn oracle_small_cases() {
        let v = [0.0, 0.5, 2.0];
        let s = n_correlation_oracle(&v, &[Interval::new(0.0, 1.0)], 3).unwrap();
        assert_eq!(s.count, 1);
        assert_eq!(s.value, 1.0 / 3.0);
        let s = n_correlation_oracle(&v, &[Interval::new(-5.0, 5.0)], 1).unwrap();
        assert_eq!(s.value, 0.0);
        assert!(matches!(
            n_correlation_oracle(&integers(6000), &[Interval::new(0.0, 1.0)], 5001),
            Err(Error::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn sample_too_large() {
        assert!(matches!(
            pair_correlation(&[1.0, 2.0], Interval::new(0.0, 1.0), 3),
            Err(Error::SampleTooLarge { requested: 3, available: 2 })
        ));
        assert!(triple_correlation(&[1.0], Interval::new(0.0, 1.0), Interval::new(0.0, 1.0), 2).is_err());
    }

    #[test]
    fn curve_on_integers() {
        let n = 30;
        let v = integers(n);
        let c = correlation_curve(&v, &[0.0, 1.0, 2.0], 2, n).unwrap();
        let counts: Vec<u64> = c.iter().map(|s| s.count).collect();
        assert_eq!(counts, vec![0, (n - 1) as u64, (2 * n - 3) as u64]);
        assert!(correlation_curve(&v, &[1.0, 0.5], 2, n).is_err());
    }

    #[test]
    fn ties_are_counted_in_both_orders() {
        let v = [1.0, 1.0, 1.0];
        let s = pair_correlation(&v, Interval::new(0.0, 0.0), 3).unwrap();
        assert_eq!(s.count, 6);
        let o = n_correlation_oracle(&v, &[Interval::new(0.0, 0.0)], 3).unwrap();
        assert_eq!(o.count, 6);
        let t = triple_correlation(&v, Interval::new(0.0, 0.0), Interval::new(0.0, 0.0), 3).unwrap();
        assert_eq!(t.count, 6);
    }

    #[test]
    fn subsequence_probe_reports_extremes() {
        let v: Vec<f64> = (0..64).map(|k| (k as f64) * 0.5).collect();
        let p = triple_subsequence_probe(&v, Interval::new(0.0, 1.0), 8, 3).unwrap();
        assert_eq!(p.points.len(), 3);
        assert!(p.min <= p.max);
    }

    fn sorted_vec(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..40.0, 0..max_len).prop_map(|mut v| {
            v.sort_by(f64::total_cmp);
            v
        })
    }

    fn interval() -> impl Strategy<Value = Interval> {
        (-3.0f64..3.0, 0.0f64..3.0, any::<bool>()).prop_map(|(lo, w, closed)| Interval {
            lo,
            hi: lo + w,
            lo_closed: closed,
        })
    }

    proptest! {
        #[test]
        fn optimized_matches_oracle(v in sorted_vec(120), a in interval(), b in interval()) {
            let n = v.len();
            prop_assert_eq!(
                pair_correlation(&v, a, n).unwrap().count,
                n_correlation_oracle(&v, &[a], n).unwrap().count
            );
            prop_assert_eq!(
                triple_correlation(&v, a, b, n).unwrap().count,
                n_correlation_oracle(&v, &[a, b], n).unwrap().count
            );
        }

        #[test]
        fn additivity_and_translation(v in sorted_vec(200), lo in 0.0f64..1.0, w1 in 0.0f64..1.5, w2 in 0.0f64..1.5, shift in -10.0f64..10.0) {
            let n = v.len();
            let whole = Interval::new(lo, lo + w1 + w2);
            let left = Interval::new(lo, lo + w1);
            let right = Interval::open_closed(lo + w1, lo + w1 + w2);
            prop_assert_eq!(
                pair_correlation(&v, whole, n).unwrap().count,
                pair_correlation(&v, left, n).unwrap().count + pair_correlation(&v, right, n).unwrap().count
            );
            // Shift by a power of two keeps differences bit-identical.
            let k = (2f64).powi(shift as i32 / 3);
            let shifted: Vec<f64> = v.iter().map(|x| x + 64.0 * k).collect();
            let diffs_same = v.windows(2).zip(shifted.windows(2)).all(|(a, b)| a[1] - a[0] == b[1] - b[0]);
            if diffs_same {
                prop_assert_eq!(
                    pair_correlation(&v, whole, n).unwrap().count,
                    pair_correlation(&shifted, whole, n).unwrap().count
                );
            }
        }

        #[test]
        fn symmetric_window_decomposition(v in sorted_vec(200), b in 0.01f64..3.0) {
            let n = v.len();
            let sym = pair_correlation(&v, Interval::closed(-b, b), n).unwrap().count;
            let pos = pair_correlation(&v, Interval::open_closed(0.0, b), n).unwrap().count;
            let zero = pair_correlation(&v, Interval::closed(0.0, 0.0), n).unwrap().count;
            prop_assert_eq!(sym, 2 * pos + zero);
        }
    }
}
