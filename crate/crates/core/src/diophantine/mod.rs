//! Exact integer arithmetic for the 8-variable counting problem behind the
//! averaged triple correlation.
//!
//! Triples of lattice points `(x_j, y_j)` map bijectively onto integer
//! 8-tuples `(a_1..a_4, b_1..b_4)` by
//!
//! ```text
//! a1 = y1 - y2   a2 = y1 + y2   a3 = x1 - x3   a4 = x1 + x3
//! b1 = x1 - x2   b2 = x1 + x2   b3 = y1 - y3   b4 = y1 + y3
//! ```
//!
//! subject to the parity condition `a1 = a2, b1 = b2 (mod 2)`, the linear
//! relations `a1 + a2 = b3 + b4`, `a3 + a4 = b1 + b2`, and the exclusions
//! that correspond to coincident points. The quantities [`DeltaQuantities`]
//! govern the size of the oscillatory kernel attached to each tuple.

mod counting;
mod symmetry;
mod volume;

pub use counting::{
    dyadic_count, prop4_exact, prop4_histogram, prop4_sum, symmetry_reduced_count, trivial_bound, DyadicBox,
    Prop4Histogram, Prop4Params, PROP4_M_LIMIT,
};
pub use symmetry::{
    apply, canonical_representative, is_normalized, orbit, stabilizer_order, symmetry_group, Permutation,
};
pub use volume::{continuous_volume_estimate, VolumeEstimate};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest entry magnitude for which every product in [`LatticeTuple::deltas`]
/// fits in `i128`: four factors of `2^30` give `2^120`, and the widest sum
/// (four such terms) stays below `2^123`.
pub const ENTRY_LIMIT: i64 = 1 << 30;

/// An integer 8-tuple `(a_1..a_4, b_1..b_4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeTuple {
    pub a: [i64; 4],
    pub b: [i64; 4],
}

/// The invariants of a tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaQuantities {
    /// `a1 a2 a3 a4 - b1 b2 b3 b4`.
    pub delta: i128,
    /// `a1 a2 b3 a4 + a1 a2 a3 b4 - a1 b2 b3 b4 - b1 a2 b3 b4`.
    pub delta1: i128,
    /// `a1 b2 a3 a4 + b1 a2 a3 a4 - b1 b2 a3 b4 - b1 b2 b3 a4`.
    pub delta2: i128,
    /// `max(|a1 a2|, |a3 a4|, |b1 b2|, |b3 b4|)`.
    pub p: i128,
    /// `a2 a4 - b2 b4`.
    pub k: i128,
    /// `b2 b3 - a2 a3`.
    pub l: i128,
}

impl LatticeTuple {
    pub fn new(a: [i64; 4], b: [i64; 4]) -> Self {
        Self { a, b }
    }

    /// Positions `0..4` are `a`, `4..8` are `b`.
    pub fn from_array(v: [i64; 8]) -> Self {
        Self { a: [v[0], v[1], v[2], v[3]], b: [v[4], v[5], v[6], v[7]] }
    }

    pub fn to_array(&self) -> [i64; 8] {
        let (a, b) = (self.a, self.b);
        [a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]]
    }

    /// The change of variables from three lattice points; rejects triples
    /// with `(x_i, y_i) = +-(x_j, y_j)` for some `i != j`.
    pub fn from_xy(x: [i64; 3], y: [i64; 3]) -> Result<Self> {
        let pt = |j: usize| (x[j], y[j]);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (p, q) = (pt(i), pt(j));
            if p == q || p == (-q.0, -q.1) {
                return Err(Error::DegenerateInput(format!("points {i} and {j} coincide up to sign: {p:?}, {q:?}")));
            }
        }
        let t = Self::from_xy_unchecked(x, y);
        debug_assert!(t.is_valid());
        Ok(t)
    }

    /// The linear change of variables without the distinctness check.
    pub fn from_xy_unchecked(x: [i64; 3], y: [i64; 3]) -> Self {
        Self {
            a: [y[0] - y[1], y[0] + y[1], x[0] - x[2], x[0] + x[2]],
            b: [x[0] - x[1], x[0] + x[1], y[0] - y[2], y[0] + y[2]],
        }
    }

    /// Inverse of [`LatticeTuple::from_xy`]; `None` if the parities do not
    /// allow integer points or the relations fail.
    pub fn to_xy(&self) -> Option<([i64; 3], [i64; 3])> {
        if !self.satisfies_cong() || !self.satisfies_sum() {
            return None;
        }
        let [a1, a2, a3, a4] = self.a;
        let [b1, b2, b3, b4] = self.b;
        let x = [(b1 + b2) / 2, (b2 - b1) / 2, (a4 - a3) / 2];
        let y = [(a1 + a2) / 2, (a2 - a1) / 2, (b4 - b3) / 2];
        Some((x, y))
    }

    pub fn satisfies_cong(&self) -> bool {
        (self.a[0] - self.a[1]).rem_euclid(2) == 0 && (self.b[0] - self.b[1]).rem_euclid(2) == 0
    }

    pub fn satisfies_sum(&self) -> bool {
        self.a[0] + self.a[1] == self.b[2] + self.b[3] && self.a[2] + self.a[3] == self.b[0] + self.b[1]
    }

    pub fn satisfies_same(&self) -> bool {
        let [b1, b2, b3, b4] = self.b;
        self.a != [b3, b4, b1, b2] && self.a != [b4, b3, b2, b1] && (0..4).all(|i| (self.a[i], self.b[i]) != (0, 0))
    }

    /// All three conditions.
    pub fn is_valid(&self) -> bool {
        self.satisfies_cong() && self.satisfies_sum() && self.satisfies_same()
    }

    pub fn max_abs(&self) -> i64 {
        self.to_array().iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// The six invariants in `i128`; [`Error::Overflow`] beyond [`ENTRY_LIMIT`].
    pub fn deltas(&self) -> Result<DeltaQuantities> {
        if self.max_abs() > ENTRY_LIMIT {
            return Err(Error::Overflow);
        }
        let [a1, a2, a3, a4] = self.a.map(i128::from);
        let [b1, b2, b3, b4] = self.b.map(i128::from);
        Ok(DeltaQuantities {
            delta: a1 * a2 * a3 * a4 - b1 * b2 * b3 * b4,
            delta1: a1 * a2 * b3 * a4 + a1 * a2 * a3 * b4 - a1 * b2 * b3 * b4 - b1 * a2 * b3 * b4,
            delta2: a1 * b2 * a3 * a4 + b1 * a2 * a3 * a4 - b1 * b2 * a3 * b4 - b1 * b2 * b3 * a4,
            p: (a1 * a2).abs().max((a3 * a4).abs()).max((b1 * b2).abs()).max((b3 * b4).abs()),
            k: a2 * a4 - b2 * b4,
            l: b2 * b3 - a2 * a3,
        })
    }
}

fn rat(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `H(a2, b2, a3, k, l) = -a3 b2 k / l + a3^2 k / l + b2^2 / 4 + a3 k / a2
/// - b2 k / (2 a2) + k^2 / (4 a2^2)`.
///
/// Obtained by eliminating `b3, b4` through `l` and `k`, then `a1, b1`
/// through the linear relations; the constant term is `b2^2 / 4`.
pub fn h_value(a2: i128, b2: i128, a3: i128, k: i128, l: i128) -> Result<BigRational> {
    if a2 == 0 || l == 0 {
        return Err(Error::DegenerateDenominator);
    }
    let (a2, b2, a3, k, l) = (rat(a2), rat(b2), rat(a3), rat(k), rat(l));
    let two = rat(2);
    let four = rat(4);
    Ok(-(&a3 * &b2 * &k) / &l + &a3 * &a3 * &k / &l + &b2 * &b2 / &four + &a3 * &k / &a2 - &b2 * &k / (&two * &a2)
        + &k * &k / (&four * &a2 * &a2))
}

/// Checks `(a4 - (b2 + k/a2)/2)^2 = H - b2 Delta / (a2 l)` in exact
/// rational arithmetic. The identity holds whenever the linear relations do.
pub fn kl_identity_check(t: &LatticeTuple) -> Result<bool> {
    let d = t.deltas()?;
    let (a2, a4, b2) = (i128::from(t.a[1]), i128::from(t.a[3]), i128::from(t.b[1]));
    let a3 = i128::from(t.a[2]);
    if a2 == 0 || b2 == 0 || d.l == 0 {
        return Err(Error::DegenerateDenominator);
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let inner = rat(a4) - half * (rat(b2) + rat(d.k) / rat(a2));
    let lhs = &inner * &inner;
    let rhs = h_value(a2, b2, a3, d.k, d.l)? - rat(b2) * rat(d.delta) / (rat(a2) * rat(d.l));
    Ok(lhs == rhs)
}
