//! Torus shapes as positive-definite binary quadratic forms
//! `q(m, n) = a1 m^2 + a2 m n + a3 n^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integral unimodular change of variables `(m, n) -> (p m + q n, r m + s n)`,
/// stored row-major as `[[p, q], [r, s]]` with determinant `+-1`.
pub type Unimodular = [[i64; 2]; 2];

/// Coefficients of a positive-definite binary quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusShape {
    alpha1: f64,
    alpha2: f64,
    alpha3: f64,
    reduced: bool,
}

impl TorusShape {
    /// Validates `4 a1 a3 > a2^2` and records membership in the fundamental
    /// domain `0 <= a2 <= a1 <= a3`.
    pub fn new(alpha1: f64, alpha2: f64, alpha3: f64) -> Result<Self> {
        let finite = alpha1.is_finite() && alpha2.is_finite() && alpha3.is_finite();
        if !finite || 4.0 * alpha1 * alpha3 <= alpha2 * alpha2 || alpha1 <= 0.0 {
            return Err(Error::NotPositiveDefinite { alpha1, alpha2, alpha3 });
        }
        let reduced = 0.0 <= alpha2 && alpha2 <= alpha1 && alpha1 <= alpha3;
        Ok(Self { alpha1, alpha2, alpha3, reduced })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn alpha3(&self) -> f64 {
        self.alpha3
    }

    pub fn coefficients(&self) -> [f64; 3] {
        [self.alpha1, self.alpha2, self.alpha3]
    }

    /// Whether the coefficients lie in the fundamental domain.
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// `4 a1 a3 - a2^2`, strictly positive.
    pub fn discriminant(&self) -> f64 {
        4.0 * self.alpha1 * self.alpha3 - self.alpha2 * self.alpha2
    }

    /// The factor `pi / sqrt(4 a1 a3 - a2^2)` that gives the half-plane
    /// spectrum unit mean spacing.
    pub fn normalizer(&self) -> f64 {
        PI / self.discriminant().sqrt()
    }

    pub fn eval(&self, m: i64, n: i64) -> f64 {
        let (m, n) = (m as f64, n as f64);
        self.alpha1 * m * m + self.alpha2 * m * n + self.alpha3 * n * n
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(lambda * self.alpha1, lambda * self.alpha2, lambda * self.alpha3)
    }

    /// The form `q(p m + q n, r m + s n)`.
    pub fn transformed(&self, u: &Unimodular) -> Result<Self> {
        let [[p, q], [r, s]] = *u;
        if (p * s - q * r).abs() != 1 {
            return Err(Error::InvalidArgument(format!("matrix {u:?} is not unimodular")));
        }
        let (p, q, r, s) = (p as f64, q as f64, r as f64, s as f64);
        let (a, b, c) = (self.alpha1, self.alpha2, self.alpha3);
        Self::new(
            a * p * p + b * p * r + c * r * r,
            2.0 * a * p * q + b * (p * s + q * r) + 2.0 * c * r * s,
            a * q * q + b * q * s + c * s * s,
        )
    }

    /// Reduces into the fundamental domain. See [`TorusShape::reduce_with_transform`].
    pub fn reduce(&self) -> Self {
        self.reduce_with_transform().0
    }

    /// Gauss reduction: returns the equivalent reduced form together with
    /// the unimodular `U` such that `reduced = self.transformed(U)`.
    pub fn reduce_with_transform(&self) -> (Self, Unimodular) {
        let (mut a, mut b, mut c) = (self.alpha1, self.alpha2, self.alpha3);
        let mut u: Unimodular = [[1, 0], [0, 1]];
        // Each pass strictly shrinks a or |b|; the cap only guards NaN-like input.
        for _ in 0..10_000 {
            if b.abs() > a {
                // (m, n) -> (m - k n, n)
                let k = (b / (2.0 * a)).round();
                let (c_new, b_new) = (a * k * k - b * k + c, b - 2.0 * a * k);
                b = b_new;
                c = c_new;
                let k = k as i64;
                u = [[u[0][0], u[0][1] - k * u[0][0]], [u[1][0], u[1][1] - k * u[1][0]]];
                continue;
            }
            if a > c {
                // (m, n) -> (n, m)
                std::mem::swap(&mut a, &mut c);
                u = [[u[0][1], u[0][0]], [u[1][1], u[1][0]]];
                continue;
            }
            break;
        }
        if b < 0.0 {
            // (m, n) -> (m, -n)
            b = -b;
            u = [[u[0][0], -u[0][1]], [u[1][0], -u[1][1]]];
        }
        let reduced = Self::new(a, b, c).expect("reduction preserves positive definiteness");
        (reduced, u)
    }
}
