//! Consecutive-gap statistics and the elementary inequalities tying the gap
//! distribution to pair and triple correlations.
//!
//! For a sorted prefix `v[0..N]` the gap distribution function is
//! `f(b) = #{i < N-1 : v[i+1] - v[i] <= b} / N`. Let `l_i(b)` be the number
//! of `j > i` with `v[j] - v[i]` in `[0, b]`. Because `1[l >= 1]` bounds both
//! `l - l(l-1)/2` and `2l/3 - l(l-1)/6` for every integer `l >= 0`, summing
//! over `i` gives
//!
//! ```text
//! f(b) >= T2([0,b]) - T3([0,b],[0,b]) / 2
//! f(b) >= 2 T2([0,b]) / 3 - T3([0,b],[0,b]) / 6
//! f(b) >= (N-1)/N - T2((b, G-eps])     when every gap is <= G - eps
//! ```
//!
//! The first two summed forms use `sum_i l_i = N T2` and
//! `sum_i l_i (l_i - 1) = N T3`, which hold when the prefix has no exact
//! ties; with ties the ordered-pair counts in `T2` see both orders. The
//! pointwise versions hold unconditionally and are checked separately.

use serde::{Deserialize, Serialize};

use crate::correlations::{pair_correlation, triple_correlation, Interval};
use crate::error::{Error, Result};

/// Gaps of a prefix and their distribution function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapProfile {
    n: usize,
    /// `v[i+1] - v[i]` in index order.
    gaps: Vec<f64>,
    sorted: Vec<f64>,
    span: f64,
}

impl GapProfile {
    pub fn sample_size(&self) -> usize {
        self.n
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    /// Gaps in ascending order.
    pub fn sorted_gaps(&self) -> &[f64] {
        &self.sorted
    }

    /// `v[N-1] - v[0]`.
    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn max_gap(&self) -> f64 {
        self.sorted.last().copied().unwrap_or(0.0)
    }

    pub fn mean_gap(&self) -> f64 {
        self.span / self.gaps.len() as f64
    }

    /// `f(b)`: right-continuous, non-decreasing, at most `(N-1)/N`.
    pub fn ecdf(&self, b: f64) -> f64 {
        self.sorted.partition_point(|&g| g <= b) as f64 / self.n as f64
    }

    /// `#{gap > t} / N`.
    pub fn exceedance(&self, t: f64) -> f64 {
        (self.sorted.len() - self.sorted.partition_point(|&g| g <= t)) as f64 / self.n as f64
    }

    /// Exact `int_0^B f(x) dx = sum_i max(0, B - gap_i) / N`.
    pub fn step_integral(&self, upper: f64) -> f64 {
        let k = self.sorted.partition_point(|&g| g < upper);
        let s: f64 = self.sorted[..k].iter().map(|&g| upper - g).sum();
        s / self.n as f64
    }
}

pub fn gap_profile<S: AsRef<[f64]> + ?Sized>(values: &S, n: usize) -> Result<GapProfile> {
    let v = values.as_ref();
    if n > v.len() {
        return Err(Error::SampleTooLarge { requested: n, available: v.len() });
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("gap profile needs N >= 2, got {n}")));
    }
    let gaps: Vec<f64> = v[..n].windows(2).map(|w| w[1] - w[0]).collect();
    let mut sorted = gaps.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(GapProfile { n, gaps, sorted, span: v[n - 1] - v[0] })
}

/// `#{i < N-1 : gap_i > G - eps} / N`.
pub fn long_gap_proportion<S: AsRef<[f64]> + ?Sized>(values: &S, n: usize, g: f64, eps: f64) -> Result<f64> {
    if !(g > 0.0 && eps > 0.0 && eps < g) {
        return Err(Error::InvalidArgument(format!("need G > 0 and 0 < eps < G, got G={g}, eps={eps}")));
    }
    Ok(gap_profile(values, n)?.exceedance(g - eps))
}

/// `1[l >= 1] >= l - l(l-1)/2`, in integers.
pub fn pointwise_first(l: u64) -> bool {
    let ind = u64::from(l >= 1) as i128;
    let l = l as i128;
    2 * ind >= 2 * l - l * (l - 1)
}

/// `1[l >= 1] >= 2l/3 - l(l-1)/6`, in integers.
pub fn pointwise_second(l: u64) -> bool {
    let ind = u64::from(l >= 1) as i128;
    let l = l as i128;
    6 * ind >= 4 * l - l * (l - 1)
}

/// Per-index check of both pointwise inequalities with the one-sided window
/// counts `l_i(b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseReport {
    pub max_window: u64,
    pub first_violations: usize,
    pub second_violations: usize,
}

pub fn pointwise_check<S: AsRef<[f64]> + ?Sized>(values: &S, n: usize, b: f64) -> Result<PointwiseReport> {
    let v = values.as_ref();
    if n > v.len() {
        return Err(Error::SampleTooLarge { requested: n, available: v.len() });
    }
    let v = &v[..n];
    let mut report = PointwiseReport { max_window: 0, first_violations: 0, second_violations: 0 };
    let mut end = 0usize;
    for i in 0..n {
        end = end.max(i + 1);
        while end < n && v[end] - v[i] <= b {
            end += 1;
        }
        let l = (end - i - 1) as u64;
        report.max_window = report.max_window.max(l);
        report.first_violations += usize::from(!pointwise_first(l));
        report.second_violations += usize::from(!pointwise_second(l));
    }
    Ok(report)
}

/// Both sides of the three summed inequalities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub b: f64,
    pub upper: f64,
    pub f_b: f64,
    pub t2: f64,
    pub t3: f64,
    /// `T2((b, G - eps])`.
    pub t2_tail: f64,
    pub first_rhs: f64,
    pub second_rhs: f64,
    pub third_rhs: f64,
    pub first_holds: bool,
    pub second_holds: bool,
    pub third_holds: bool,
    /// The prefix is strictly increasing, so the first two must hold.
    pub tie_free: bool,
    /// Every gap is `<= G - eps`, so the third must hold.
    pub third_hypothesis: bool,
}

impl InequalityReport {
    /// Whether every inequality whose hypothesis is met actually holds.
    pub fn consistent(&self) -> bool {
        (!self.tie_free || (self.first_holds && self.second_holds)) && (!self.third_hypothesis || self.third_holds)
    }
}

pub fn gap_correlation_inequalities<S: AsRef<[f64]> + ?Sized>(
    values: &S,
    n: usize,
    b: f64,
    g: f64,
    eps: f64,
) -> Result<InequalityReport> {
    let upper = g - eps;
    if !(0.0 <= b && b <= upper) {
        return Err(Error::InvalidArgument(format!("need 0 <= b <= G - eps, got b={b}, G-eps={upper}")));
    }
    let profile = gap_profile(values, n)?;
    let window = Interval::closed(0.0, b);
    let t2 = pair_correlation(values, window, n)?.value;
    let t3 = triple_correlation(values, window, window, n)?.value;
    let t2_tail = pair_correlation(values, Interval::open_closed(b, upper), n)?.value;
    let f_b = profile.ecdf(b);
    let first_rhs = t2 - 0.5 * t3;
    let second_rhs = 2.0 * t2 / 3.0 - t3 / 6.0;
    let third_rhs = (n - 1) as f64 / n as f64 - t2_tail;
    // Values are ratios of integers over N; allow for the rounding of those quotients.
    let slack = 8.0 * f64::EPSILON * (1.0 + t2 + t3);
    Ok(InequalityReport {
        b,
        upper,
        f_b,
        t2,
        t3,
        t2_tail,
        first_rhs,
        second_rhs,
        third_rhs,
        first_holds: f_b >= first_rhs - slack,
        second_holds: f_b >= second_rhs - slack,
        third_holds: f_b >= third_rhs - slack,
        tie_free: profile.sorted_gaps().first().is_none_or(|&g| g > 0.0),
        third_hypothesis: profile.max_gap() <= upper,
    })
}

/// Both sides of `v[N] - v[0] = (N-1) B - N int_0^B f + (v[N] - v[N-1])`,
/// which holds whenever every gap up to index `N` is at most `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialSummation {
    pub lhs: f64,
    pub rhs: f64,
}

/// Needs `N + 1` values: the profile uses the first `N`, the boundary term the next one.
pub fn partial_summation_identity<S: AsRef<[f64]> + ?Sized>(
    values: &S,
    n: usize,
    bound: f64,
) -> Result<PartialSummation> {
    let v = values.as_ref();
    if n + 1 > v.len() {
        return Err(Error::SampleTooLarge { requested: n + 1, available: v.len() });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("partial summation needs N >= 1".into()));
    }
    if let Some((index, gap)) = v[..=n].windows(2).map(|w| w[1] - w[0]).enumerate().find(|&(_, g)| g > bound) {
        return Err(Error::GapExceedsBound { index, gap, bound });
    }
    let boundary = v[n] - v[n - 1];
    let lhs = v[n] - v[0];
    let bulk = if n >= 2 {
        let p = gap_profile(v, n)?;
        (n - 1) as f64 * bound - n as f64 * p.step_integral(bound)
    } else {
        0.0
    };
    Ok(PartialSummation { lhs, rhs: bulk + boundary })
}

/// The integration-by-parts chain behind the `3/2` lower bound on gaps:
///
/// ```text
/// G_N - mean_gap = N/(N-1) int_0^{G_N} f(x) dx
///               >= N/(N-1) int_0^{G_N} max(0, (N-1)/N - T2((x, G_N])) dx
/// ```
///
/// where `G_N` is the largest gap of the prefix. For a sequence with
/// Poissonian pair correlation the right side tends to `1/2`, forcing
/// `G_N >= 3/2` asymptotically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundWitness {
    pub n: usize,
    pub max_gap: f64,
    pub mean_gap: f64,
    /// `N/(N-1) int_0^{G_N} f`.
    pub gap_integral: f64,
    /// `N/(N-1) int_0^{G_N} max(0, (N-1)/N - T2((x, G_N]))`.
    pub correlation_integral: f64,
    /// `mean_gap + correlation_integral`, a lower bound for `max_gap`.
    pub lower_bound: f64,
    /// `max_gap - lower_bound`, non-negative up to rounding.
    pub slack: f64,
}

pub fn lower_bound_witness<S: AsRef<[f64]> + ?Sized>(values: &S, n: usize) -> Result<LowerBoundWitness> {
    let v = values.as_ref();
    let profile = gap_profile(v, n)?;
    let v = &v[..n];
    let top = profile.max_gap();
    let scale = n as f64 / (n - 1) as f64;
    let gap_integral = scale * profile.step_integral(top);

    // Positive one-sided differences in (0, top], sorted; T2((x, top]) * N is
    // the number of them above x, for 0 <= x < top.
    let mut diffs = Vec::new();
    for i in 0..n {
        for &y in &v[i + 1..] {
            let d = y - v[i];
            if d > top {
                break;
            }
            if d > 0.0 {
                diffs.push(d);
            }
        }
    }
    diffs.sort_by(f64::total_cmp);
    // Integrate max(0, (N-1) - #{d > x}) over [0, top] piece by piece.
    let need = (n - 1) as f64;
    let mut integral = 0.0;
    let mut x = 0.0;
    let mut above = diffs.len();
    for &d in &diffs {
        integral += (need - above as f64).max(0.0) * (d - x);
        x = d;
        above -= 1;
    }
    integral += (need - above as f64).max(0.0) * (top - x);
    let correlation_integral = scale * integral / n as f64;
    let mean_gap = profile.mean_gap();
    let lower_bound = mean_gap + correlation_integral;
    Ok(LowerBoundWitness {
        n,
        max_gap: top,
        mean_gap,
        gap_integral,
        correlation_integral,
        lower_bound,
        slack: top - lower_bound,
    })
}

/// `max_b |T2((0, b]) - b|` over the grid: the distance from the Poisson
/// pair law seen by the chain above.
pub fn pair_deviation<S: AsRef<[f64]> + ?Sized>(values: &S, n: usize, grid: &[f64]) -> Result<f64> {
    grid.iter().try_fold(0.0f64, |acc, &b| {
        let t = pair_correlation(values, Interval::open_closed(0.0, b), n)?.value;
        Ok(acc.max((t - b).abs()))
    })
}

/// If `|T2((0, x]) - x| <= dev` on `[0, 2]` and the mean gap is 1, the chain
/// gives approximately `G_N >= 1 + (1 - dev)^2 / 2`.
pub fn implied_gap_bound(dev: f64) -> f64 {
    1.0 + (1.0 - dev).max(0.0).powi(2) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn integers(n: usize) -> Vec<f64> {
        (0..n).map(|k| k as f64).collect()
    }

    #[test]
    fn integer_profile() {
        let p = gap_profile(&integers(10), 10).unwrap();
        assert!(p.gaps().iter().all(|&g| g == 1.0));
        assert_eq!(p.ecdf(0.999), 0.0);
        assert_eq!(p.ecdf(1.0), 0.9);
        assert_eq!(p.ecdf(7.0), 0.9);
        assert_eq!(p.max_gap(), 1.0);
    }

    #[test]
    fn small_profile_and_errors() {
        let p = gap_profile(&[0.0, 0.3, 1.0], 3).unwrap();
        assert_eq!(p.gaps(), &[0.3, 0.7]);
        assert!((p.gaps().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(matches!(gap_profile(&[0.0, 1.0], 3), Err(Error::SampleTooLarge { .. })));
        assert!(gap_profile(&[0.0], 1).is_err());
    }

    #[test]
    fn long_gaps() {
        assert_eq!(long_gap_proportion(&integers(50), 50, 2.006, 0.1).unwrap(), 0.0);
        let mut v = integers(100);
        v.push(102.0);
        assert_eq!(long_gap_proportion(&v, 101, 2.006, 0.1).unwrap() * 101.0, 1.0);
        assert!(long_gap_proportion(&v, 101, 1.0, 2.0).is_err());
    }

    #[test]
    fn pointwise_inequalities_for_small_windows() {
        assert!((0..=1000).all(pointwise_first));
        assert!((0..=1000).all(pointwise_second));
    }

    #[test]
    fn integer_inequalities() {
        let v = integers(10);
        let r = gap_correlation_inequalities(&v, 10, 1.5, 2.006, 0.01).unwrap();
        assert_eq!(r.f_b, 0.9);
        assert_eq!(r.t2, 0.9);
        assert_eq!(r.t3, 0.0);
        assert!(r.first_holds && r.second_holds && r.third_holds && r.consistent());
    }

    #[test]
    fn partial_summation_examples() {
        let n = 100;
        let v = integers(n + 1);
        let ps = partial_summation_identity(&v, n, 2.0).unwrap();
        assert_eq!(ps.lhs, n as f64);
        assert!((ps.lhs - ps.rhs).abs() < 1e-9);

        let ps = partial_summation_identity(&[0.0, 0.7], 1, 1.0).unwrap();
        assert_eq!((ps.lhs, ps.rhs), (0.7, 0.7));

        assert!(matches!(
            partial_summation_identity(&[0.0, 0.5, 3.0], 2, 2.0),
            Err(Error::GapExceedsBound { index: 1, .. })
        ));
    }

    #[test]
    fn partial_summation_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut x = 0.0;
        let v: Vec<f64> = (0..10_001)
            .map(|_| {
                x += rng.random_range(0.0..2.0);
                x
            })
            .collect();
        let ps = partial_summation_identity(&v, 10_000, 2.0).unwrap();
        assert!((ps.lhs - ps.rhs).abs() < 1e-6 * ps.lhs);
    }

    #[test]
    fn witness_on_integers_is_tight() {
        let w = lower_bound_witness(&integers(500), 500).unwrap();
        assert_eq!(w.max_gap, 1.0);
        assert_eq!(w.correlation_integral, 0.0);
        assert!(w.slack.abs() < 1e-12);
    }

    #[test]
    fn witness_chain_holds_on_random_sequences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let mut x = 0.0;
            let v: Vec<f64> = (0..800)
                .map(|_| {
                    x += -(1.0 - rng.random::<f64>()).ln();
                    x
                })
                .collect();
            let w = lower_bound_witness(&v, 800).unwrap();
            assert!(w.slack >= -1e-9, "{w:?}");
            assert!((w.max_gap - w.mean_gap - w.gap_integral).abs() < 1e-9);
        }
    }

    fn random_sorted() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..2.0, 2..300).prop_map(|steps| {
            let mut x = 0.0;
            steps
                .into_iter()
                .map(|s| {
                    x += s;
                    x
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn conservation_and_ecdf(v in random_sorted(), b in 0.0f64..2.5) {
            let n = v.len();
            let p = gap_profile(&v, n).unwrap();
            let sum: f64 = p.gaps().iter().sum();
            prop_assert!((sum - p.span()).abs() <= 1e-9 * p.span().max(1.0));
            let direct = p.gaps().iter().filter(|&&g| g <= b).count() as f64 / n as f64;
            prop_assert_eq!(p.ecdf(b), direct);
            prop_assert!(p.ecdf(b) <= (n - 1) as f64 / n as f64);
        }

        #[test]
        fn summed_inequalities(v in random_sorted(), b in 0.0f64..1.9) {
            let n = v.len();
            let r = gap_correlation_inequalities(&v, n, b, 2.0, 0.0).unwrap();
            prop_assert!(r.third_hypothesis);
            prop_assert!(r.consistent(), "{:?}", r);
            let pw = pointwise_check(&v, n, b).unwrap();
            prop_assert_eq!((pw.first_violations, pw.second_violations), (0, 0));
        }

        #[test]
        fn step_integral_matches_quadrature(v in random_sorted(), upper in 0.0f64..2.5) {
            let n = v.len();
            let p = gap_profile(&v, n).unwrap();
            // Midpoint rule on a fine grid converges to the exact step integral.
            let m = 20_000;
            let h = upper / m as f64;
            let approx: f64 = (0..m).map(|k| p.ecdf((k as f64 + 0.5) * h) * h).sum();
            prop_assert!((approx - p.step_integral(upper)).abs() <= 2.0 * h + 1e-12);
        }
    }
}
