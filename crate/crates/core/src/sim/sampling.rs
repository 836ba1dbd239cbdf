//! Random draws used by the generative model and the prior perturbations.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Exp1};

/// `min(Poisson(lambda), cap)` by inversion from a single uniform.
///
/// Exactly one uniform is consumed for every call, including `lambda == 0`,
/// so the caller's stream stays aligned across clutter rates.
pub fn draw_clutter_count<R: Rng + ?Sized>(lambda: f64, cap: usize, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    poisson_inverse(lambda, cap, u)
}

/// Smallest `k ≤ cap` with `F(k) > u` for the Poisson CDF `F`, or `cap`.
pub(crate) fn poisson_inverse(lambda: f64, cap: usize, u: f64) -> usize {
    let mut pmf = libm::exp(-lambda);
    let mut cdf = pmf;
    let mut k = 0;
    while u >= cdf && k < cap {
        k += 1;
        pmf *= lambda / k as f64;
        cdf += pmf;
    }
    k
}

/// Draws an index with the given probabilities. Entries need to be
/// nonnegative with a positive sum; rounding never selects a zero entry.
pub fn sample_categorical<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc && p > 0.0 {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Symmetric `Dirichlet(1, …, 1)` via normalized unit exponentials.
pub fn sample_flat_dirichlet<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut draws: Vec<f64> = (0..dim).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    if total > 0.0 {
        for x in &mut draws {
            *x /= total;
        }
    } else {
        draws.fill(1.0 / dim as f64);
    }
    draws
}

/// Mixes every row with its own fresh `Dirichlet(1, …, 1)` draw:
/// `(1 − mu)·row + mu·u`.
pub fn perturb_regional_prior<R: Rng + ?Sized>(rows: &[Vec<f64>], mu: f64, rng: &mut R) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|row| {
            let u = sample_flat_dirichlet(row.len(), rng);
            row.iter()
                .zip(u)
                .map(|(&p, ui)| (1.0 - mu) * p + mu * ui)
                .collect()
        })
        .collect()
}

/// `clip(pd + mu·v, 0, 1)` for a given offset `v`.
pub fn perturb_detection_prob(pd: f64, mu: f64, v: f64) -> f64 {
    (pd + mu * v).clamp(0.0, 1.0)
}

/// [`perturb_detection_prob`] with `v ~ U(−1, 1)`.
pub fn perturb_sensor_prior<R: Rng + ?Sized>(pd: f64, mu: f64, rng: &mut R) -> f64 {
    let v: f64 = rng.random_range(-1.0..1.0);
    perturb_detection_prob(pd, mu, v)
}
