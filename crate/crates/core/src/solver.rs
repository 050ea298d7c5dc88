//! The long-gap constant `G` and the closed-form endgame of the gap argument.
//!
//! Writing `s = sqrt(6G - 5)`, the endgame inequality reduces to
//! `rhs(G, eps) - G = g(G) / 18 + slack(G, eps)` with
//!
//! ```text
//! g(G)      = 35 - 18 G - 9 G^2 + (12 G - 10) s
//! slack     = (1 - 2e-6 + G - s) eps - eps^2 / 2
//! ```
//!
//! so `G` is the root of `g` in `[2, 2.1]`, approximately `2.0063619389251`.
//! The commonly quoted form `35 - 9 G^2 + (12 G - 10) s` drops the `-18 G`
//! term and has no root in that range; [`printed_gap_equation`] keeps it
//! available for comparison.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

/// Primary bracket from `2 <= G <= 2.1`.
pub const PRIMARY_BRACKET: (f64, f64) = (2.0, 2.1);
/// Searched only when the primary bracket has no sign change.
pub const FALLBACK_BRACKET: (f64, f64) = (1.5, 3.0);

/// Weight lost to the `(1 - 10^-6)` factors in the assembled inequality.
const LOSS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapConstant {
    #[serde(rename = "G")]
    pub g: f64,
    /// `|g(G)|`.
    pub residual: f64,
    /// Crossover `sqrt(6G - 5) - 1`.
    #[serde(rename = "C")]
    pub c: f64,
    /// Whether the root was only found in [`FALLBACK_BRACKET`].
    pub used_fallback: bool,
}

/// `g(G) = 35 - 18G - 9G^2 + (12G - 10) sqrt(6G - 5)`.
pub fn gap_equation(g: f64) -> f64 {
    35.0 - 18.0 * g - 9.0 * g * g + (12.0 * g - 10.0) * (6.0 * g - 5.0).sqrt()
}

fn gap_equation_derivative(g: f64) -> f64 {
    let s = (6.0 * g - 5.0).sqrt();
    -18.0 - 18.0 * g + 12.0 * s + (12.0 * g - 10.0) * 3.0 / s
}

/// `35 - 9G^2 + (12G - 10) sqrt(6G - 5)`, positive on all of `[1.5, 3]`.
pub fn printed_gap_equation(g: f64) -> f64 {
    35.0 - 9.0 * g * g + (12.0 * g - 10.0) * (6.0 * g - 5.0).sqrt()
}

/// The crossover constant for a given `G`.
pub fn crossover(g: f64) -> f64 {
    (6.0 * g - 5.0).sqrt() - 1.0
}

/// Bisection on a sign-changing bracket, then Newton steps that are kept
/// only while they stay inside the final bracket and shrink `|f|`.
fn bracketed_root<F, D>(f: &F, df: &D, (mut lo, mut hi): (f64, f64), tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut flo, fhi) = (f(lo), f(hi));
    if !(flo.signum() != fhi.signum() || flo == 0.0 || fhi == 0.0) {
        return Err(Error::NoRootInBracket { lo, hi });
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..20 {
        let fx = f(x);
        if fx.abs() <= tol * 1e-3 {
            break;
        }
        let next = x - fx / df(x);
        if !(lo..=hi).contains(&next) || f(next).abs() >= fx.abs() {
            break;
        }
        x = next;
    }
    Ok(x)
}

/// Solves `g(G) = 0`, first on [`PRIMARY_BRACKET`], then on [`FALLBACK_BRACKET`].
pub fn solve_g(tol: f64) -> Result<GapConstant> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (g, used_fallback) = match bracketed_root(&gap_equation, &gap_equation_derivative, PRIMARY_BRACKET, tol) {
        Ok(g) => (g, false),
        Err(_) => (bracketed_root(&gap_equation, &gap_equation_derivative, FALLBACK_BRACKET, tol)?, true),
    };
    let residual = gap_equation(g).abs();
    if residual > tol {
        return Err(Error::InvalidArgument(format!("residual {residual:e} above requested tolerance {tol:e}")));
    }
    Ok(GapConstant { g, residual, c: crossover(g), used_fallback })
}

/// Residual of the quartic obtained by isolating and squaring the radical:
/// `(9G^2 + 18G - 35)^2 - (12G - 10)^2 (6G - 5)`.
///
/// In double precision its magnitude at the computed root is bounded by
/// `1e-10` (terms are of size ~1e3 and the root is accurate to ~1e-16).
pub fn quartic_residual(g: f64) -> f64 {
    let p = 9.0 * g * g + 18.0 * g - 35.0;
    let q = 12.0 * g - 10.0;
    p * p - q * q * (6.0 * g - 5.0)
}

/// The three pieces of the endgame integral and the assembled comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Endgame {
    /// `int_0^1 (b - b^2/2) db`, equal to `1/3`.
    pub first: f64,
    /// `int_1^C (2b/3 - b^2/6) db`.
    pub second: f64,
    /// `int_C^{G-eps} (1 - (G - eps - b)) db`.
    pub third: f64,
    /// Right-hand side of the assembled inequality `G >= rhs` that is to be contradicted.
    pub rhs: f64,
    /// `(1 - 2e-6 + G - sqrt(6G - 5)) eps - eps^2 / 2`.
    pub slack: f64,
    /// `rhs - G - g(G)/18 - slack`; zero up to rounding.
    pub discrepancy: f64,
    /// Linear coefficient of the slack.
    pub coefficient: f64,
}

/// Closed-form evaluation with crossover `C = sqrt(6G - 5) - 1`.
pub fn endgame_integrals(g: f64, eps: f64) -> Result<Endgame> {
    endgame_with_crossover(g, eps, crossover(g))
}

/// Same pieces with an explicit crossover `c`; `slack` and `discrepancy`
/// only have their stated meaning at the default crossover.
pub fn endgame_with_crossover(g: f64, eps: f64, c: f64) -> Result<Endgame> {
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 0.1), got {eps}")));
    }
    if !(1.0 <= c && c <= g - eps) {
        return Err(Error::InvalidArgument(format!("crossover {c} outside [1, G - eps]")));
    }
    let first = 1.0 / 3.0;
    let second = (c * c - 1.0) / 3.0 - (c * c * c - 1.0) / 18.0;
    let w = g - eps - c;
    let third = w - 0.5 * w * w;
    let rhs = 1.0 + (1.0 - LOSS) * eps + (first + second + third) - LOSS * eps;
    let s = (6.0 * g - 5.0).sqrt();
    let coefficient = 1.0 - 2.0 * LOSS + g - s;
    let slack = coefficient * eps - 0.5 * eps * eps;
    let discrepancy = rhs - g - gap_equation(g) / 18.0 - slack;
    Ok(Endgame { first, second, third, rhs, slack, discrepancy, coefficient })
}

/// Sum of the three integrals by adaptive quadrature of the piecewise
/// integrand; the test oracle for the closed forms.
pub fn endgame_integral_by_quadrature(g: f64, eps: f64, c: f64, tol: f64) -> f64 {
    let top = g - eps;
    let integrand = |b: f64| {
        if b <= 1.0 {
            b - 0.5 * b * b
        } else if b <= c {
            2.0 * b / 3.0 - b * b / 6.0
        } else {
            1.0 - (top - b)
        }
    };
    adaptive_simpson(&integrand, 0.0, 1.0, tol)
        + adaptive_simpson(&integrand, 1.0, c, tol)
        + adaptive_simpson(&integrand, c, top, tol)
}
