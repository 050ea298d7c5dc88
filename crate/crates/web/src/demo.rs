//! The demo computations, returning JSON documents. Kept free of
//! `wasm-bindgen` so they can be tested natively.

use serde_json::{json, Value};
use torus_spectra::correlations::correlation_curve;
use torus_spectra::gaps::gap_profile;
use torus_spectra::poisson_seq::{first_n, theoretical_limit, LimitComponent};
use torus_spectra::solver::{endgame_integrals, solve_g};
use torus_spectra::spectrum::enumerate_spectrum;
use torus_spectra::{Result, TorusShape};

/// Upper limits on the demo sizes, so one click cannot freeze the page.
pub const MAX_EIGENVALUES: usize = 200_000;
pub const MAX_POINTS: usize = 200_000;

fn grid(max: f64, steps: usize) -> Vec<f64> {
    (1..=steps).map(|k| max * k as f64 / steps as f64).collect()
}

fn curve(values: &[f64], b_grid: &[f64], n: usize) -> Result<Vec<f64>> {
    Ok(correlation_curve(values, b_grid, 2, n)?.into_iter().map(|s| s.value).collect())
}

fn check(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(torus_spectra::Error::InvalidArgument(msg.into()))
    }
}

/// Gap histogram on `[0, gap_max]` with `bins` bins and the pair correlation
/// curve `T2([0, b])` for a torus of shape `(a1, a2, a3)`.
pub fn torus_statistics(a1: f64, a2: f64, a3: f64, n: usize, bins: usize) -> Result<Value> {
    check((2..=MAX_EIGENVALUES).contains(&n), "N must lie in [2, 200000]")?;
    check((1..=500).contains(&bins), "bins must lie in [1, 500]")?;
    let shape = TorusShape::new(a1, a2, a3)?;
    let spec = enumerate_spectrum(&shape, n);
    let profile = gap_profile(&spec, n)?;
    let gap_max = 4.0;
    let width = gap_max / bins as f64;
    let mut hist = vec![0.0; bins];
    for &g in profile.gaps() {
        let k = (g / width) as usize;
        if k < bins {
            hist[k] += 1.0 / (profile.gaps().len() as f64 * width);
        }
    }
    let b = grid(3.0, 60);
    Ok(json!({
        "reduced": shape.reduce().coefficients(),
        "bin_width": width,
        "histogram": hist,
        "poisson_density": (0..bins).map(|k| (-(k as f64 + 0.5) * width).exp()).collect::<Vec<_>>(),
        "max_gap": profile.max_gap(),
        "zero_gaps": profile.sorted_gaps().partition_point(|&g| g <= 0.0),
        "b": b,
        "t2": curve(spec.values(), &b, n)?,
    }))
}

/// `T2([0, b])` of the bounded-gap sequence against its uniform-only part.
pub fn construction_comparison(n: usize, seed: u64) -> Result<Value> {
    check((2..=MAX_POINTS).contains(&n), "N must lie in [2, 200000]")?;
    let full = first_n(n, seed, true);
    let random = first_n(n, seed, false);
    let b = grid(2.0, 40);
    Ok(json!({
        "b": b,
        "full": curve(full.values(), &b, n)?,
        "random_only": curve(random.values(), &b, n)?,
        "limit_full": b.iter().map(|&x| theoretical_limit(x, LimitComponent::Full)).collect::<Vec<_>>(),
        "limit_random_only": b.iter().map(|&x| theoretical_limit(x, LimitComponent::RandomOnly)).collect::<Vec<_>>(),
        "max_gap": full.max_gap(),
        "max_gap_random_only": random.max_gap(),
        "cluster_points": full.cluster_point_count(),
    }))
}

/// The long-gap constant and the endgame slack as a function of the margin.
pub fn endgame_slack(eps: f64) -> Result<Value> {
    let g = solve_g(1e-12)?;
    let at = endgame_integrals(g.g, eps)?;
    let eps_grid: Vec<f64> = (1..100).map(|k| k as f64 * 1e-3).collect();
    let slack = eps_grid.iter().map(|&e| endgame_integrals(g.g, e).map(|r| r.slack)).collect::<Result<Vec<_>>>()?;
    Ok(json!({ "G": g.g, "C": g.c, "eps": eps, "endgame": at, "eps_grid": eps_grid, "slack": slack }))
}
