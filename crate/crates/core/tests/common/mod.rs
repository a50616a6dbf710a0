//! Shared helpers and independent oracles for the integration suites.
//!
//! The oracles here re-derive expected values by brute force (grid search,
//! exhaustive enumeration) and never call the closed-form paths they are
//! used to check.

use ppcof::lattice::{gauss_is_zero, GaussInt, GaussVec};
use ppcof::rate::noise_energy;
use ppcof::rng::SubRng;
use ppcof::Cplx;

pub fn random_channel(rng: &mut SubRng, l: usize) -> Vec<Cplx> {
    (0..l).map(|_| rng.next_cn01()).collect()
}

pub fn random_coeffs(rng: &mut SubRng, l: usize, reach: i64) -> GaussVec {
    loop {
        let a: GaussVec = (0..l)
            .map(|_| {
                let span = (2 * reach + 1) as u64;
                GaussInt::new(
                    rng.next_below(span) as i64 - reach,
                    rng.next_below(span) as i64 - reach,
                )
            })
            .collect();
        if !gauss_is_zero(&a) {
            return a;
        }
    }
}

/// Grid minimization of `Q(a, α)` over complex `α`: a coarse pass over the
/// square `[-span, span]²` followed by refinements around the incumbent
/// until the step is at most `target_step`. Independent of the MMSE formula.
pub fn grid_min_noise_energy(
    h: &[Cplx],
    a: &[GaussInt],
    rho: f64,
    span: f64,
    target_step: f64,
) -> (Cplx, f64) {
    let points_per_axis = 41i32;
    let mut center = Cplx::new(0.0, 0.0);
    let mut half = span;
    let mut best_alpha = center;
    let mut best_q = f64::INFINITY;
    loop {
        let step = 2.0 * half / (points_per_axis - 1) as f64;
        for i in 0..points_per_axis {
            for j in 0..points_per_axis {
                let alpha = Cplx::new(
                    center.re - half + i as f64 * step,
                    center.im - half + j as f64 * step,
                );
                let q = noise_energy(h, a, alpha, rho);
                if q < best_q {
                    best_q = q;
                    best_alpha = alpha;
                }
            }
        }
        if step <= target_step {
            return (best_alpha, best_q);
        }
        center = best_alpha;
        half = 2.0 * step;
    }
}
