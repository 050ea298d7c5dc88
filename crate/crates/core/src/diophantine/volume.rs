//! Monte Carlo estimate of the continuous analogue of the weighted sum: the
//! same constraints and weight, integrated over real variables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const CHUNK: u64 = 1 << 16;

/// Integral of `1 / (|Delta| + P)` over `(a1, a2, a3, b1, b2, b3)` in
/// `[-M, M]^6` with `a4, b4` from the linear relations (and also in
/// `[-M, M]`), `|Delta| <= cap` and `|Delta1|, |Delta2| <= c_eps (|Delta| + P)^(1 + eps')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub m: f64,
    pub delta: f64,
    pub eps_prime: f64,
    pub samples: u64,
    pub seed: u64,
    /// Samples inside the region.
    pub hits: u64,
    pub estimate: f64,
    pub std_error: f64,
}

/// `cap` defaults to `M^(4 - delta)`; pass a negative cap to force an empty region.
#[allow(clippy::too_many_arguments)]
pub fn continuous_volume_estimate(
    m: f64,
    delta: f64,
    eps_prime: f64,
    c_eps: f64,
    samples: u64,
    seed: u64,
    cap: Option<f64>,
) -> Result<VolumeEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    if !(m > 0.0) {
        return Err(Error::InvalidArgument(format!("M must be positive, got {m}")));
    }
    let cap = cap.unwrap_or_else(|| m.powf(4.0 - delta));
    let chunks = samples.div_ceil(CHUNK);
    let run = |c: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c);
        let n = CHUNK.min(samples - c * CHUNK);
        let (mut s, mut s2, mut hits) = (0.0, 0.0, 0u64);
        for _ in 0..n {
            let v = sample_weight(&mut rng, m, cap, eps_prime, c_eps);
            if v > 0.0 {
                hits += 1;
                s += v;
                s2 += v * v;
            }
        }
        (s, s2, hits)
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<(f64, f64, u64)> = {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<(f64, f64, u64)> = (0..chunks).map(run).collect();
    let (mut s, mut s2, mut hits) = (0.0, 0.0, 0u64);
    for (a, b, h) in parts {
        s += a;
        s2 += b;
        hits += h;
    }
    let n = samples as f64;
    let volume = (2.0 * m).powi(6);
    let mean = s / n;
    let var = if samples > 1 { (s2 / n - mean * mean).max(0.0) * n / (n - 1.0) } else { 0.0 };
    Ok(VolumeEstimate {
        m,
        delta,
        eps_prime,
        samples,
        seed,
        hits,
        estimate: volume * mean,
        std_error: volume * (var / n).sqrt(),
    })
}

fn sample_weight(rng: &mut ChaCha8Rng, m: f64, cap: f64, eps_prime: f64, c_eps: f64) -> f64 {
    let mut u = || rng.random_range(-m..m);
    let (a1, a2, a3, b1, b2, b3) = (u(), u(), u(), u(), u(), u());
    let (a4, b4) = (b1 + b2 - a3, a1 + a2 - b3);
    if a4.abs() > m || b4.abs() > m {
        return 0.0;
    }
    let (aa, bb, c34, b34) = (a1 * a2, b1 * b2, a3 * a4, b3 * b4);
    let delta = aa * c34 - bb * b34;
    if delta.abs() > cap {
        return 0.0;
    }
    let d = delta.abs() + aa.abs().max(bb.abs()).max(c34.abs()).max(b34.abs());
    let limit = c_eps * d.powf(1.0 + eps_prime);
    let cc = a1 * b2 + b1 * a2;
    let d1 = aa * (b3 * a4 + a3 * b4) - b34 * cc;
    let d2 = c34 * cc - bb * (a3 * b4 + b3 * a4);
    if d1.abs() > limit || d2.abs() > limit {
        return 0.0;
    }
    1.0 / d
}
