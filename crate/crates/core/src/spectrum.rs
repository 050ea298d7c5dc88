//! Normalized, desymmetrized Laplace spectra of flat tori.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shape::TorusShape;

/// Which lattice points index the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Desymmetrization {
    /// `m > 0`, or `m = 0` and `n >= 1`: one representative per `+-(m, n)`.
    #[default]
    HalfPlane,
    /// `m, n >= 0`, origin excluded. Only defined for rectangular forms
    /// (`alpha2 = 0`), where `(m, n) -> (m, -n)` is an extra automorphism.
    Quadrant,
}

impl Desymmetrization {
    /// Mean-spacing normalizer for the given shape.
    pub fn normalizer(self, shape: &TorusShape) -> f64 {
        match self {
            Self::HalfPlane => shape.normalizer(),
            Self::Quadrant => PI / (4.0 * (shape.alpha1() * shape.alpha3()).sqrt()),
        }
    }

    fn admits(self, m: i64, n: i64) -> bool {
        match self {
            Self::HalfPlane => m > 0 || (m == 0 && n >= 1),
            Self::Quadrant => m >= 0 && n >= 0 && (m, n) != (0, 0),
        }
    }
}

/// Where a spectrum came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    Torus {
        shape: TorusShape,
        desymmetrization: Desymmetrization,
    },
    /// Values injected directly, e.g. synthetic test sequences.
    Synthetic,
}

/// Sorted multiset of normalized eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedSpectrum {
    provenance: Provenance,
    values: Vec<f64>,
    /// Lattice point of each value; empty for synthetic spectra.
    points: Vec<(i64, i64)>,
}

impl NormalizedSpectrum {
    /// Wraps an arbitrary sequence, sorting it ascending.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("spectrum values must be finite".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { provenance: Provenance::Synthetic, values, points: Vec::new() })
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn points(&self) -> &[(i64, i64)] {
        &self.points
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First `n` values as a new spectrum.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n > self.count() {
            return Err(Error::SampleTooLarge { requested: n, available: self.count() });
        }
        Ok(Self {
            provenance: self.provenance.clone(),
            values: self.values[..n].to_vec(),
            points: self.points.get(..n).map(<[_]>::to_vec).unwrap_or_default(),
        })
    }
}

impl AsRef<[f64]> for NormalizedSpectrum {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// The `count` smallest normalized values over the half-plane index set.
pub fn enumerate_spectrum(shape: &TorusShape, count: usize) -> NormalizedSpectrum {
    enumerate_with(shape, count, Desymmetrization::HalfPlane)
        .expect("half-plane enumeration is defined for every shape")
}

/// The `count` smallest normalized values of `x^2 a1 + y^2 a3` over `x, y >= 0`.
pub fn enumerate_quadrant_spectrum(shape: &TorusShape, count: usize) -> Result<NormalizedSpectrum> {
    enumerate_with(shape, count, Desymmetrization::Quadrant)
}

/// Enumerates lattice points inside a growing ellipse until at least `count`
/// values are found, then sorts by `(value, m, n)` and truncates.
pub fn enumerate_with(shape: &TorusShape, count: usize, desym: Desymmetrization) -> Result<NormalizedSpectrum> {
    if desym == Desymmetrization::Quadrant && shape.alpha2() != 0.0 {
        return Err(Error::NotRectangular(shape.alpha2()));
    }
    let norm = desym.normalizer(shape);
    let provenance = Provenance::Torus { shape: *shape, desymmetrization: desym };
    if count == 0 {
        return Ok(NormalizedSpectrum { provenance, values: Vec::new(), points: Vec::new() });
    }

    // Weyl law: about X values below X, so start at X = 1.2 N plus a little
    // slack for tiny N.
    let mut threshold = 1.2 * count as f64 + 8.0;
    loop {
        let mut found = points_below(shape, threshold / norm, desym);
        if found.len() >= count {
            found.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
            found.truncate(count);
            let values = found.iter().map(|&(q, _, _)| q * norm).collect();
            let points = found.iter().map(|&(_, m, n)| (m, n)).collect();
            return Ok(NormalizedSpectrum { provenance, values, points });
        }
        threshold *= 1.5;
    }
}

/// All admissible `(q(m, n), m, n)` with `q(m, n) <= bound`.
fn points_below(shape: &TorusShape, bound: f64, desym: Desymmetrization) -> Vec<(f64, i64, i64)> {
    let (a, b) = (shape.alpha1(), shape.alpha2());
    let disc = shape.discriminant();
    // For fixed n the condition is a quadratic in m with discriminant
    // 4 a bound - disc n^2.
    let n_max = (4.0 * a * bound / disc).sqrt().floor() as i64 + 1;
    let n_lo = if desym == Desymmetrization::Quadrant { 0 } else { -n_max };
    let mut out = Vec::with_capacity((1.1 * bound * desym.normalizer(shape)) as usize + 16);
    for n in n_lo..=n_max {
        let nf = n as f64;
        let root = 4.0 * a * bound - disc * nf * nf;
        if root < 0.0 {
            continue;
        }
        let sq = root.sqrt();
        let m_lo = ((-b * nf - sq) / (2.0 * a)).floor() as i64 - 1;
        let m_hi = ((-b * nf + sq) / (2.0 * a)).ceil() as i64 + 1;
        for m in m_lo.max(0)..=m_hi {
            if !desym.admits(m, n) {
                continue;
            }
            let q = shape.eval(m, n);
            if q <= bound {
                out.push((q, m, n));
            }
        }
    }
    out
}

/// Groups consecutive values whose difference is at most `tol`; each group
/// is reported by its first value.
pub fn spectrum_multiplicities(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut prev: Option<f64> = None;
    for &v in values {
        match (prev, out.last_mut()) {
            (Some(p), Some(last)) if v - p <= tol => last.1 += 1,
            _ => out.push((v, 1)),
        }
        prev = Some(v);
    }
    out
}
