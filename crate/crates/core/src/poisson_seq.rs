//! A sequence with Poissonian pair correlation and all gaps at most 2.
//!
//! Index `i` contributes a uniform point `X_i` in `(i, i + 1)` unless `i` is
//! a perfect square `m^2`, in which case it contributes the cluster
//! `C_m = { m^2 + j / c_m : 0 <= j < c_m }` with `c_m = ceil(sqrt(2m))`.
//! The uniform points alone have pair correlation `b^2/2` on `[0, 1]` and
//! `b - 1/2` beyond; each cluster adds about `m` close pairs, and since
//! `sum_{m <= sqrt N} m ~ N/2` the clusters supply exactly the missing mass.
//!
//! Each `X_i` is drawn from its own ChaCha stream (`stream = i`), so the
//! sequence is a deterministic function of the seed and every horizon is a
//! prefix of every larger one.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Tag {
    /// `X_i`, lying in `(i, i + 1)`.
    Random { i: u64 },
    /// `m^2 + j / c_m`.
    Cluster { m: u64, j: u64 },
}

/// Sorted values with their origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiRandomSequence {
    values: Vec<f64>,
    tags: Vec<Tag>,
    seed: u64,
    clusters: bool,
}

impl SemiRandomSequence {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn has_clusters(&self) -> bool {
        self.clusters
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cluster_point_count(&self) -> usize {
        self.tags.iter().filter(|t| matches!(t, Tag::Cluster { .. })).count()
    }

    /// Largest consecutive difference, 0 for fewer than two values.
    pub fn max_gap(&self) -> f64 {
        self.values.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// CSV with header `value,tag_kind,tag_index_1,tag_index_2`; random
    /// points leave the last column empty.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "value,tag_kind,tag_index_1,tag_index_2")?;
        for (v, t) in self.values.iter().zip(&self.tags) {
            match t {
                Tag::Random { i } => writeln!(out, "{v:.16e},random,{i},")?,
                Tag::Cluster { m, j } => writeln!(out, "{v:.16e},cluster,{m},{j}")?,
            }
        }
        Ok(())
    }
}

impl AsRef<[f64]> for SemiRandomSequence {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// `ceil(sqrt(2m))`, the size of cluster `m`.
pub fn cluster_size(m: u64) -> u64 {
    let r = (2 * m).isqrt();
    if r * r == 2 * m {
        r
    } else {
        r + 1
    }
}

/// The points of cluster `m >= 1`, all in `[m^2, m^2 + 1)`.
pub fn cluster_points(m: u64) -> Vec<f64> {
    let c = cluster_size(m);
    let base = (m * m) as f64;
    (0..c).map(|j| base + j as f64 / c as f64).collect()
}

/// The uniform point of index `i`, never an integer.
fn random_point(base: &ChaCha8Rng, i: u64) -> f64 {
    let mut rng = base.clone();
    rng.set_stream(i);
    let u: f64 = rng.random();
    let x = i as f64 + u;
    let lo = i as f64;
    if x <= lo {
        lo.next_up()
    } else if x >= lo + 1.0 {
        (lo + 1.0).next_down()
    } else {
        x
    }
}

/// Walks indices `1, 2, ..`. For each index, `include(i, emitted)` returns
/// `None` to stop, or whether a cluster at this index may be emitted.
fn walk(seed: u64, clusters: bool, mut include: impl FnMut(u64, usize) -> Option<bool>) -> SemiRandomSequence {
    let base = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::new();
    let mut tags = Vec::new();
    let mut i = 1u64;
    while let Some(cluster_ok) = include(i, values.len()) {
        let m = i.isqrt();
        if m * m == i {
            if clusters && cluster_ok {
                for (j, v) in cluster_points(m).into_iter().enumerate() {
                    values.push(v);
                    tags.push(Tag::Cluster { m, j: j as u64 });
                }
            }
        } else {
            values.push(random_point(&base, i));
            tags.push(Tag::Random { i });
        }
        i += 1;
    }
    SemiRandomSequence { values, tags, seed, clusters }
}

/// All `X_i` with non-square `i <= n`, plus every cluster with `m^2 + 1 <= n`.
pub fn generate(n: u64, seed: u64) -> SemiRandomSequence {
    walk(seed, true, |i, _| (i <= n).then_some(i < n))
}

/// As [`generate`] without clusters: only the uniform points.
pub fn generate_random_only(n: u64, seed: u64) -> SemiRandomSequence {
    walk(seed, false, |i, _| (i <= n).then_some(false))
}

/// The first `count` elements of the infinite sequence.
pub fn first_n(count: usize, seed: u64, clusters: bool) -> SemiRandomSequence {
    let mut s = walk(seed, clusters, |_, emitted| (emitted < count).then_some(true));
    s.values.truncate(count);
    s.tags.truncate(count);
    s
}

/// One-sided pair counts `#{i < j < N : v_j - v_i <= b}` split by origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDecomposition {
    /// Both uniform points.
    pub s1: u64,
    /// One uniform point and one cluster point.
    pub s2: u64,
    /// Cluster points of different clusters.
    pub s3: u64,
    /// Cluster points of the same cluster.
    pub s4: u64,
    pub total: u64,
    pub n: usize,
}

impl PairDecomposition {
    /// `total / N`, the pair correlation `T2(b; N)`.
    pub fn t2(&self) -> f64 {
        self.total as f64 / self.n as f64
    }
}

pub fn pair_corr_decomposition(seq: &SemiRandomSequence, b: f64, n: usize) -> Result<PairDecomposition> {
    if n > seq.len() {
        return Err(Error::SampleTooLarge { requested: n, available: seq.len() });
    }
    if !(b > 0.0) {
        return Err(Error::InvalidArgument(format!("b must be positive, got {b}")));
    }
    let (v, t) = (&seq.values[..n], &seq.tags[..n]);
    let mut d = PairDecomposition { s1: 0, s2: 0, s3: 0, s4: 0, total: 0, n };
    for i in 0..n {
        for j in i + 1..n {
            if v[j] - v[i] > b {
                break;
            }
            match (t[i], t[j]) {
                (Tag::Random { .. }, Tag::Random { .. }) => d.s1 += 1,
                (Tag::Cluster { m: p, .. }, Tag::Cluster { m: q, .. }) if p == q => d.s4 += 1,
                (Tag::Cluster { .. }, Tag::Cluster { .. }) => d.s3 += 1,
                _ => d.s2 += 1,
            }
            d.total += 1;
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitComponent {
    /// Uniform points only: `b^2/2` on `[0, 1]`, `b - 1/2` beyond.
    RandomOnly,
    /// With clusters: the Poisson value `b`.
    Full,
}

pub fn theoretical_limit(b: f64, component: LimitComponent) -> f64 {
    match component {
        LimitComponent::RandomOnly if b <= 1.0 => 0.5 * b * b,
        LimitComponent::RandomOnly => b - 0.5,
        LimitComponent::Full => b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::{pair_correlation, Interval};

    #[test]
    fn cluster_examples() {
        assert_eq!(cluster_points(1), vec![1.0, 1.5]);
        assert_eq!(cluster_points(3), vec![9.0, 9.0 + 1.0 / 3.0, 9.0 + 2.0 / 3.0]);
        assert_eq!(cluster_points(8), vec![64.0, 64.25, 64.5, 64.75]);
        for m in 1..2000u64 {
            let c = cluster_size(m);
            assert!(c * c >= 2 * m && (c - 1) * (c - 1) < 2 * m);
        }
    }

    #[test]
    fn small_sequence_structure() {
        let s = generate(10, 3);
        let random: Vec<u64> = s
            .tags()
            .iter()
            .filter_map(|t| match t {
                Tag::Random { i } => Some(*i),
                _ => None,
            })
            .collect();
        assert_eq!(random, vec![2, 3, 5, 6, 7, 8, 10]);
        let clusters: Vec<f64> = s
            .values()
            .iter()
            .zip(s.tags())
            .filter(|(_, t)| matches!(t, Tag::Cluster { .. }))
            .map(|(v, _)| *v)
            .collect();
        assert_eq!(clusters, vec![1.0, 1.5, 4.0, 4.5, 9.0, 9.0 + 1.0 / 3.0, 9.0 + 2.0 / 3.0]);
        for (v, t) in s.values().iter().zip(s.tags()) {
            if let Tag::Random { i } = t {
                assert!(*v > *i as f64 && *v < *i as f64 + 1.0);
            }
        }
        assert!(s.values().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn square_horizon_omits_its_cluster() {
        let s = generate(9, 1);
        assert!(s.tags().iter().all(|t| !matches!(t, Tag::Cluster { m: 3, .. })));
    }

    #[test]
    fn gap_bound_and_determinism() {
        for seed in 0..5 {
            let s = generate(20_000, seed);
            assert!(s.max_gap() <= 2.0);
            assert_eq!(s, generate(20_000, seed));
        }
        assert_ne!(generate(100, 1).values(), generate(100, 2).values());
    }

    #[test]
    fn prefix_property() {
        let small = generate(5_000, 9);
        let large = generate(8_000, 9);
        let k = small.len();
        assert_eq!(small.values(), &large.values()[..k]);
        let f = first_n(k, 9, true);
        assert_eq!(f.values(), small.values());
        assert_eq!(first_n(1234, 9, true).values(), &large.values()[..1234]);
    }

    #[test]
    fn decomposition_partitions_total() {
        let s = generate(30_000, 4);
        let n = s.len();
        for &b in &[0.25, 1.0, 2.0] {
            let d = pair_corr_decomposition(&s, b, n).unwrap();
            assert_eq!(d.s1 + d.s2 + d.s3 + d.s4, d.total);
            let t2 = pair_correlation(&s, Interval::closed(0.0, b), n).unwrap();
            assert_eq!(t2.count, d.total);
        }
        let r = generate_random_only(30_000, 4);
        let d = pair_corr_decomposition(&r, 1.0, r.len()).unwrap();
        assert_eq!((d.s2, d.s3, d.s4), (0, 0, 0));
    }

    #[test]
    fn single_cluster_pairs() {
        // Horizon 26 holds clusters 1..=5; with b = 1 every internal pair counts.
        let s = generate(26, 0);
        let d = pair_corr_decomposition(&s, 1.0, s.len()).unwrap();
        let internal: u64 = (1..=5).map(|m| cluster_size(m) * (cluster_size(m) - 1) / 2).sum();
        assert_eq!(d.s4, internal);
    }

    #[test]
    fn limits() {
        assert_eq!(theoretical_limit(1.0, LimitComponent::RandomOnly), 0.5);
        assert_eq!(theoretical_limit(2.0, LimitComponent::Full), 2.0);
        assert_eq!(theoretical_limit(0.0, LimitComponent::RandomOnly), 0.0);
        assert_eq!(theoretical_limit(0.0, LimitComponent::Full), 0.0);
        assert_eq!(theoretical_limit(1.5, LimitComponent::RandomOnly), 1.0);
    }

    #[test]
    fn csv_export() {
        let s = generate(5, 0);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("value,tag_kind,tag_index_1,tag_index_2"));
        assert_eq!(lines.next(), Some("1.0000000000000000e0,cluster,1,0"));
        assert!(text.lines().nth(3).unwrap().ends_with(",random,2,"));
        assert_eq!(text.lines().count(), s.len() + 1);
    }
}
