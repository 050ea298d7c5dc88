//! The hyperbolic measure `d a1 d a2 d a3 / (4 a1 a3 - a2^2)^{3/2}` on shape
//! space, sampling from it, and the averaged triple correlation over a box
//! of shapes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::correlations::{triple_correlation, Interval};
use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;
use crate::shape::TorusShape;
use crate::spectrum::enumerate_spectrum;

/// A box `[lo1, hi1] x [lo2, hi2] x [lo3, hi3]` of coefficients inside the
/// fundamental domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeRectangle {
    pub ranges: [(f64, f64); 3],
}

impl ShapeRectangle {
    /// Requires `lo <= hi` per axis, `lo2 >= 0`, `hi2 <= lo1`, `hi1 <= lo3`
    /// and `4 lo1 lo3 > hi2^2`.
    pub fn new(ranges: [(f64, f64); 3]) -> Result<Self> {
        if ranges.iter().any(|&(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo <= hi)) {
            return Err(Error::InvalidArgument(format!("ranges must be finite with lo <= hi: {ranges:?}")));
        }
        let [(lo1, hi1), (lo2, hi2), (lo3, _)] = ranges;
        if lo2 < 0.0 || hi2 > lo1 || hi1 > lo3 {
            return Err(Error::InvalidArgument(format!("rectangle {ranges:?} leaves the fundamental domain")));
        }
        if 4.0 * lo1 * lo3 <= hi2 * hi2 {
            return Err(Error::SingularDomain);
        }
        Ok(Self { ranges })
    }

    pub fn volume(&self) -> f64 {
        self.ranges.iter().map(|(lo, hi)| hi - lo).product()
    }

    pub fn contains(&self, s: &TorusShape) -> bool {
        self.ranges.iter().zip(s.coefficients()).all(|(&(lo, hi), v)| lo <= v && v <= hi)
    }

    /// Largest value of the density on the box, attained at `(lo1, hi2, lo3)`.
    fn envelope(&self) -> f64 {
        let [(lo1, _), (_, hi2), (lo3, _)] = self.ranges;
        (4.0 * lo1 * lo3 - hi2 * hi2).powf(-1.5)
    }

    /// The two halves along axis `axis`.
    pub fn split(&self, axis: usize) -> (Self, Self) {
        let (lo, hi) = self.ranges[axis];
        let mid = 0.5 * (lo + hi);
        let (mut left, mut right) = (*self, *self);
        left.ranges[axis] = (lo, mid);
        right.ranges[axis] = (mid, hi);
        (left, right)
    }
}

/// `(4 a1 a3 - a2^2)^{-3/2}`.
pub fn hyp_density(a1: f64, a2: f64, a3: f64) -> f64 {
    (4.0 * a1 * a3 - a2 * a2).powf(-1.5)
}

/// `int_lo^hi (c - x^2)^{-3/2} dx = [x / (c sqrt(c - x^2))]`.
fn alpha2_integral(c: f64, lo: f64, hi: f64) -> f64 {
    let f = |x: f64| x / (c * (c - x * x).sqrt());
    f(hi) - f(lo)
}

/// `mu_hyp(R)`, integrating `a2` in closed form and `a1`, `a3` by nested
/// adaptive Simpson to relative tolerance `rel_tol`.
pub fn hyp_measure(r: &ShapeRectangle, rel_tol: f64) -> Result<f64> {
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let [(lo1, hi1), (lo2, hi2), (lo3, hi3)] = r.ranges;
    if r.volume() == 0.0 {
        return Ok(0.0);
    }
    // The integrand is smooth and within a factor ~2 of its value at the centre.
    let scale = r.volume() * hyp_density(0.5 * (lo1 + hi1), 0.5 * (lo2 + hi2), 0.5 * (lo3 + hi3));
    let tol = rel_tol * scale;
    let inner_tol = tol / (hi1 - lo1) / 4.0;
    let outer = |a1: f64| adaptive_simpson(&|a3: f64| alpha2_integral(4.0 * a1 * a3, lo2, hi2), lo3, hi3, inner_tol);
    Ok(adaptive_simpson(&outer, lo1, hi1, tol / 2.0))
}

/// One shape from the normalized restriction of `mu_hyp` to `R`, by
/// rejection from the uniform distribution on `R`.
pub fn sample_shape<G: Rng + ?Sized>(r: &ShapeRectangle, rng: &mut G) -> TorusShape {
    let env = r.envelope();
    let [(lo1, hi1), (lo2, hi2), (lo3, hi3)] = r.ranges;
    let mut draw = |lo: f64, hi: f64| if lo == hi { lo } else { rng.random_range(lo..=hi) };
    loop {
        let (a1, a2, a3) = (draw(lo1, hi1), draw(lo2, hi2), draw(lo3, hi3));
        if draw(0.0, env) <= hyp_density(a1, a2, a3) {
            return TorusShape::new(a1, a2, a3).expect("rectangle lies in the positive-definite cone");
        }
    }
}

/// Substream `k` of `seed`; sample `k` of every estimator uses it.
fn sample_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// `int_R T3(alpha; I1, I2; N) d mu_hyp` estimated by importance sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragedTriple {
    pub rectangle: ShapeRectangle,
    pub i1: Interval,
    pub i2: Interval,
    pub n: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub mu_hyp: f64,
    pub estimate: f64,
    /// Jackknife standard error.
    pub std_error: f64,
    /// `|I1| |I2| mu_hyp(R)`.
    pub target: f64,
    /// Per-sample `T3` values.
    pub values: Vec<f64>,
}

impl AveragedTriple {
    pub fn relative_error(&self) -> f64 {
        (self.estimate - self.target).abs() / self.target
    }

    pub fn target_within(&self, k: f64) -> bool {
        (self.estimate - self.target).abs() <= k * self.std_error
    }
}

fn check_averaging_args(n: usize, n_samples: usize) -> Result<()> {
    if n < 1000 || n_samples < 10 {
        return Err(Error::InvalidArgument(format!(
            "averaging needs N >= 1000 and at least 10 samples, got N={n}, samples={n_samples}"
        )));
    }
    Ok(())
}

/// Jackknife standard error of `scale * mean(v)`.
fn jackknife(v: &[f64], scale: f64) -> f64 {
    let n = v.len() as f64;
    let total: f64 = v.iter().sum();
    let loo: Vec<f64> = v.iter().map(|x| scale * (total - x) / (n - 1.0)).collect();
    let mean = loo.iter().sum::<f64>() / n;
    ((n - 1.0) / n * loo.iter().map(|x| (x - mean).powi(2)).sum::<f64>()).sqrt()
}

pub fn averaged_triple(
    r: &ShapeRectangle,
    i1: Interval,
    i2: Interval,
    n: usize,
    n_samples: usize,
    seed: u64,
) -> Result<AveragedTriple> {
    Ok(averaged_triple_grid(r, &[(i1, i2)], n, n_samples, seed)?.remove(0))
}

/// Several interval pairs on one sample stream; each shape's spectrum is
/// enumerated once.
pub fn averaged_triple_grid(
    r: &ShapeRectangle,
    pairs: &[(Interval, Interval)],
    n: usize,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<AveragedTriple>> {
    check_averaging_args(n, n_samples)?;
    let mu = hyp_measure(r, 1e-10)?;
    let per_sample = |k: usize| -> Result<Vec<f64>> {
        let shape = sample_shape(r, &mut sample_rng(seed, k as u64));
        let spec = enumerate_spectrum(&shape, n);
        pairs.iter().map(|&(a, b)| Ok(triple_correlation(&spec, a, b, n)?.value)).collect()
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        (0..n_samples).into_par_iter().map(per_sample).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<f64>> = (0..n_samples).map(per_sample).collect::<Result<_>>()?;
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(p, &(i1, i2))| {
            let values: Vec<f64> = rows.iter().map(|row| row[p]).collect();
            let mean = values.iter().sum::<f64>() / n_samples as f64;
            AveragedTriple {
                rectangle: *r,
                i1,
                i2,
                n,
                n_samples,
                seed,
                mu_hyp: mu,
                estimate: mu * mean,
                std_error: jackknife(&values, mu),
                target: i1.length() * i2.length() * mu,
                values,
            }
        })
        .collect())
}

/// `max |estimate - target| / mu_hyp` over the interval pairs: a finite-N
/// view of the uniformity in the intervals. Report only.
pub fn interval_grid_sup(results: &[AveragedTriple]) -> f64 {
    results.iter().map(|a| (a.estimate - a.target).abs() / a.mu_hyp).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    fn reference_box() -> ShapeRectangle {
        ShapeRectangle::new([(1.0, 1.2), (0.3, 0.5), (1.3, 1.5)]).unwrap()
    }

    /// Composite Simpson on a fixed 100^3 grid (10^6 nodes).
    fn simpson_grid(r: &ShapeRectangle, k: usize) -> f64 {
        let w = |i: usize| {
            if i == 0 || i == k {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            }
        };
        let h: Vec<f64> = r.ranges.iter().map(|(lo, hi)| (hi - lo) / k as f64).collect();
        let mut s = 0.0;
        for i in 0..=k {
            for j in 0..=k {
                for l in 0..=k {
                    let a1 = r.ranges[0].0 + i as f64 * h[0];
                    let a2 = r.ranges[1].0 + j as f64 * h[1];
                    let a3 = r.ranges[2].0 + l as f64 * h[2];
                    s += w(i) * w(j) * w(l) * hyp_density(a1, a2, a3);
                }
            }
        }
        s * h[0] * h[1] * h[2] / 27.0
    }

    #[test]
    fn measure_against_grid_oracle() {
        let r = reference_box();
        let v = hyp_measure(&r, 1e-10).unwrap();
        let oracle = simpson_grid(&r, 100);
        assert!((v - oracle).abs() < 1e-10 * v, "{v} vs {oracle}");
        assert!((v - 5.4969e-4).abs() < 1e-7, "{v}");
    }

    #[test]
    fn degenerate_and_additive() {
        let flat = ShapeRectangle::new([(1.0, 1.0), (0.3, 0.5), (1.3, 1.5)]).unwrap();
        assert_eq!(hyp_measure(&flat, 1e-8).unwrap(), 0.0);
        let r = reference_box();
        let whole = hyp_measure(&r, 1e-9).unwrap();
        let (a, b) = r.split(0);
        let parts = hyp_measure(&a, 1e-9).unwrap() + hyp_measure(&b, 1e-9).unwrap();
        assert!((whole - parts).abs() <= 2e-9 * whole);
    }

    #[test]
    fn rectangle_validation() {
        assert!(ShapeRectangle::new([(1.0, 1.2), (0.3, 1.1), (1.3, 1.5)]).is_err());
        assert!(ShapeRectangle::new([(1.0, 1.4), (0.3, 0.5), (1.3, 1.5)]).is_err());
        assert!(ShapeRectangle::new([(1.0, 0.9), (0.3, 0.5), (1.3, 1.5)]).is_err());
        assert!(ShapeRectangle::new([(0.0, 0.0), (0.0, 0.0), (1.0, 2.0)]) == Err(Error::SingularDomain));
    }

    #[test]
    fn samples_stay_inside_and_reproduce() {
        let r = reference_box();
        let mut a = sample_rng(3, 0);
        let mut b = sample_rng(3, 0);
        for _ in 0..1000 {
            let s = sample_shape(&r, &mut a);
            assert!(r.contains(&s));
            assert_eq!(s, sample_shape(&r, &mut b));
        }
    }

    #[test]
    fn uniform_importance_mean_matches_measure() {
        let r = reference_box();
        let mut rng = sample_rng(4, 0);
        let n = 100_000;
        let [(lo1, hi1), (lo2, hi2), (lo3, hi3)] = r.ranges;
        let vals: Vec<f64> = (0..n)
            .map(|_| {
                hyp_density(rng.random_range(lo1..hi1), rng.random_range(lo2..hi2), rng.random_range(lo3..hi3))
                    * r.volume()
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        let target = hyp_measure(&r, 1e-10).unwrap();
        assert!((mean - target).abs() <= 3.0 * sd / (n as f64).sqrt());
    }

    #[test]
    fn sampler_chi_square() {
        let r = reference_box();
        let k = 4;
        let total = hyp_measure(&r, 1e-10).unwrap();
        let cell = |idx: [usize; 3]| {
            let ranges = std::array::from_fn(|a| {
                let (lo, hi) = r.ranges[a];
                let w = (hi - lo) / k as f64;
                (lo + idx[a] as f64 * w, lo + (idx[a] + 1) as f64 * w)
            });
            ShapeRectangle { ranges }
        };
        let n = 100_000;
        let mut counts = vec![0u64; k * k * k];
        let mut rng = sample_rng(5, 0);
        for _ in 0..n {
            let s = sample_shape(&r, &mut rng).coefficients();
            let idx: [usize; 3] = std::array::from_fn(|a| {
                let (lo, hi) = r.ranges[a];
                (((s[a] - lo) / (hi - lo) * k as f64) as usize).min(k - 1)
            });
            counts[idx[0] * k * k + idx[1] * k + idx[2]] += 1;
        }
        let mut stat = 0.0;
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let expected = n as f64 * hyp_measure(&cell([i, j, l]), 1e-10).unwrap() / total;
                    let obs = counts[i * k * k + j * k + l] as f64;
                    stat += (obs - expected).powi(2) / expected;
                }
            }
        }
        let p = 1.0 - ChiSquared::new((k * k * k - 1) as f64).unwrap().cdf(stat);
        assert!(p > 1e-3, "chi2 = {stat}, p = {p}");
    }

    #[test]
    fn averaged_triple_small_and_linear() {
        let r = reference_box();
        let (a, b) = (Interval::new(0.0, 0.4), Interval::open_closed(0.4, 1.0));
        let whole = Interval::new(0.0, 1.0);
        let res = averaged_triple_grid(&r, &[(whole, whole), (a, whole), (b, whole)], 2000, 12, 9).unwrap();
        let sum = res[1].estimate + res[2].estimate;
        assert!((res[0].estimate - sum).abs() <= 1e-12 * res[0].estimate);
        assert!(res[0].std_error > 0.0);
        assert!(interval_grid_sup(&res).is_finite());

        let empty = Interval::open_closed(0.5, 0.5);
        let e = averaged_triple(&r, empty, whole, 2000, 10, 1).unwrap();
        assert_eq!(e.estimate, 0.0);
        assert!(averaged_triple(&r, whole, whole, 100, 10, 1).is_err());
    }
}
