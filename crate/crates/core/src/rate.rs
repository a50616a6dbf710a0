//! Computation-rate evaluation for compute-and-forward, with and without
//! phase precoding.
//!
//! For SNR `ρ`, channel `h`, and coefficients `a ∈ Z[i]^L`, the achievable
//! computation rate is
//!
//! ```text
//! R(ρ, h, a) = max_α log₂⁺( ρ / (ρ‖αh - a‖² + |α|²) ) = log₂⁺( 1 / (a M aᴴ) )
//! ```
//!
//! where `M = I - (ρ/(1+ρ‖h‖²)) hᴴh` and the maximizing `α` is the MMSE
//! scalar `ρ⟨h,a⟩/(1+ρ‖h‖²)`. Under a diagonal phase precoder `Φ` the same
//! expressions hold with `h' = hΦ`, and for the optimal phases the rate has
//! the closed form
//!
//! ```text
//! R'(ρ, h, a) = log₂(1+ρ‖h‖²) - log₂( ‖a‖² + ρ(‖h‖²‖a‖² - (Σℓ|hℓ||aℓ|)²) )
//! ```
//!
//! which dominates `R(ρ, h, a)` for every coefficient vector.

use crate::lattice::{all_finite, gauss_is_zero, gauss_norm_sq, gauss_to_cplx, inner, norm_sq, GaussInt};
use crate::precode::Precoder;
use crate::{Cplx, Error, Result};

/// `max(0, log₂ x)`.
pub fn log2_pos(x: f64) -> f64 {
    if x > 1.0 {
        x.log2()
    } else {
        0.0
    }
}

/// The Hermitian positive-definite Gram form `M = I - (ρ/(1+ρ‖h‖²)) hᴴh`
/// whose quadratic form `a M aᴴ` determines the computation rate.
#[derive(Debug, Clone)]
pub struct GramForm {
    dim: usize,
    // Row-major L×L entries; Hermitian by construction.
    matrix: Vec<Cplx>,
    rho: f64,
    channel: Vec<Cplx>,
}

impl GramForm {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn channel(&self) -> &[Cplx] {
        &self.channel
    }

    pub fn entry(&self, row: usize, col: usize) -> Cplx {
        self.matrix[row * self.dim + col]
    }

    /// Quadratic form `b M bᴴ` for a complex row vector, evaluated from the
    /// stored matrix entries.
    pub fn quad_form_cplx(&self, b: &[Cplx]) -> f64 {
        debug_assert_eq!(b.len(), self.dim);
        let mut acc = Cplx::new(0.0, 0.0);
        for (j, bj) in b.iter().enumerate() {
            for (k, bk) in b.iter().enumerate() {
                acc += bj * self.entry(j, k) * bk.conj();
            }
        }
        acc.re
    }

    /// Quadratic form `a M aᴴ` for Gaussian-integer coefficients.
    pub fn quad_form(&self, a: &[GaussInt]) -> f64 {
        self.quad_form_cplx(&gauss_to_cplx(a))
    }
}

/// Builds the Gram form of the rate quadratic (`M = I - c·hᴴh`,
/// `c = ρ/(1+ρ‖h‖²)`), mirroring the upper triangle so `M = Mᴴ` exactly.
pub fn gram_form(h: &[Cplx], rho: f64) -> Result<GramForm> {
    if rho <= 0.0 || rho.is_nan() || rho.is_infinite() {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    if !all_finite(h) {
        return Err(Error::NonFinite);
    }
    let h_sq = norm_sq(h);
    if h_sq == 0.0 || h.is_empty() {
        return Err(Error::InvalidParameter("channel must be nonzero".into()));
    }
    let l = h.len();
    let c = rho / (1.0 + rho * h_sq);
    let mut matrix = vec![Cplx::new(0.0, 0.0); l * l];
    for j in 0..l {
        for k in j..l {
            let mut m = -c * h[j].conj() * h[k];
            if j == k {
                m = Cplx::new(1.0 - c * h[j].norm_sqr(), 0.0);
            }
            matrix[j * l + k] = m;
            matrix[k * l + j] = m.conj();
        }
    }
    Ok(GramForm { dim: l, matrix, rho, channel: h.to_vec() })
}

/// MMSE scaling `α = ρ·ahᴴ / (1+ρ‖h‖²)`, the unique minimizer of the
/// effective-noise energy for a given coefficient vector.
pub fn mmse_alpha(h: &[Cplx], a: &[GaussInt], rho: f64) -> Result<Cplx> {
    if gauss_is_zero(a) {
        return Err(Error::ZeroCoefficient);
    }
    if h.len() != a.len() {
        return Err(Error::DimensionMismatch { expected: h.len(), got: a.len() });
    }
    let a_c = gauss_to_cplx(a);
    Ok(inner(&a_c, h) * (rho / (1.0 + rho * norm_sq(h))))
}

/// Average effective-noise energy `Q(a, α) = ρ‖αh - a‖² + |α|²`.
pub fn noise_energy(h: &[Cplx], a: &[GaussInt], alpha: Cplx, rho: f64) -> f64 {
    let diff_sq: f64 = h
        .iter()
        .zip(a)
        .map(|(hl, al)| (alpha * hl - al.to_cplx()).norm_sqr())
        .sum();
    rho * diff_sq + alpha.norm_sqr()
}

/// A computation-rate evaluation: the rate in bits per channel use, the
/// scaling that achieves it, the effective-noise energy, and the loss term
/// that penalizes approximating the channel by integers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub rate_bits: f64,
    pub alpha: Cplx,
    pub noise_energy: f64,
    pub loss_term: f64,
}

/// Computation rate `R(ρ, h, a) = log₂⁺(1/(a M aᴴ))` at the MMSE scaling.
pub fn computation_rate(h: &[Cplx], a: &[GaussInt], rho: f64) -> Result<RateReport> {
    let m = gram_form(h, rho)?;
    let alpha = mmse_alpha(h, a, rho)?;
    let q = m.quad_form(a);
    let a_c = gauss_to_cplx(a);
    let a_sq = gauss_norm_sq(a) as f64;
    let h_sq = norm_sq(h);
    let cross = inner(h, &a_c).norm_sqr();
    Ok(RateReport {
        rate_bits: log2_pos(1.0 / q),
        alpha,
        noise_energy: noise_energy(h, a, alpha, rho),
        loss_term: a_sq + rho * (h_sq * a_sq - cross),
    })
}

/// Phase-precoded computation rate `log₂⁺(1/(aΦᴴMΦaᴴ))` for an explicit
/// precoder, with the optimal scaling `α' = ρ⟨h',a⟩/(1+ρ‖h‖²)`, `h' = hΦ`.
pub fn pp_computation_rate(
    h: &[Cplx],
    phi: &Precoder,
    a: &[GaussInt],
    rho: f64,
) -> Result<RateReport> {
    if gauss_is_zero(a) {
        return Err(Error::ZeroCoefficient);
    }
    if phi.len() != h.len() {
        return Err(Error::DimensionMismatch { expected: h.len(), got: phi.len() });
    }
    if a.len() != h.len() {
        return Err(Error::DimensionMismatch { expected: h.len(), got: a.len() });
    }
    let m = gram_form(h, rho)?;
    let mult = phi.multipliers();
    let h_prime: Vec<Cplx> = h.iter().zip(&mult).map(|(hl, w)| hl * w).collect();
    let a_c = gauss_to_cplx(a);
    // aΦᴴ: the precoder rotates the form, equivalently the coefficients.
    let b: Vec<Cplx> = a_c.iter().zip(&mult).map(|(al, w)| al * w.conj()).collect();
    let q = m.quad_form_cplx(&b);
    let alpha = inner(&a_c, &h_prime) * (rho / (1.0 + rho * norm_sq(h)));
    let diff_sq: f64 = h_prime
        .iter()
        .zip(&a_c)
        .map(|(hl, al)| (alpha * hl - al).norm_sqr())
        .sum();
    let a_sq = gauss_norm_sq(a) as f64;
    let h_sq = norm_sq(h);
    let cross = inner(&h_prime, &a_c).norm_sqr();
    Ok(RateReport {
        rate_bits: log2_pos(1.0 / q),
        alpha,
        noise_energy: rho * diff_sq + alpha.norm_sqr(),
        loss_term: a_sq + rho * (h_sq * a_sq - cross),
    })
}

/// Phase-precoded rate at the *optimal* precoder, in closed form:
/// `log₂(1+ρ‖h‖²) - log₂(‖a‖² + ρ(‖h‖²‖a‖² - (Σ|hℓ||aℓ|)²))`, floored at 0.
pub fn pp_rate_optimal_closed_form(h: &[Cplx], a: &[GaussInt], rho: f64) -> Result<RateReport> {
    if gauss_is_zero(a) {
        return Err(Error::ZeroCoefficient);
    }
    if h.len() != a.len() {
        return Err(Error::DimensionMismatch { expected: h.len(), got: a.len() });
    }
    if !all_finite(h) {
        return Err(Error::NonFinite);
    }
    let h_sq = norm_sq(h);
    if h_sq == 0.0 || rho <= 0.0 || rho.is_nan() {
        return Err(Error::InvalidParameter("need nonzero channel and rho > 0".into()));
    }
    let a_sq = gauss_norm_sq(a) as f64;
    let aligned: f64 = h
        .iter()
        .zip(a)
        .map(|(hl, al)| hl.norm() * (al.norm_sq() as f64).sqrt())
        .sum();
    let loss = a_sq + rho * (h_sq * a_sq - aligned * aligned);
    let cap = 1.0 + rho * h_sq;
    let rate = (cap.log2() - loss.log2()).max(0.0);
    // At the aligned optimum ⟨h',a⟩ = Σ|h||a| is real positive.
    let alpha = Cplx::new(rho * aligned / cap, 0.0);
    Ok(RateReport {
        rate_bits: rate,
        alpha,
        noise_energy: rho * loss / cap,
        loss_term: loss,
    })
}

/// A real symmetric quadratic form on `Z^n`, stored row-major.
#[derive(Debug, Clone)]
pub struct RealQuadForm {
    pub dim: usize,
    pub entries: Vec<f64>,
}

impl RealQuadForm {
    /// Real embedding of an explicit complex matrix, validating that it is
    /// Hermitian (within 1e-12 entrywise).
    pub fn from_hermitian(rows: &[Vec<Cplx>]) -> Result<RealQuadForm> {
        let l = rows.len();
        if l == 0 || rows.iter().any(|r| r.len() != l) {
            return Err(Error::DimensionMismatch { expected: l, got: 0 });
        }
        for j in 0..l {
            for k in 0..l {
                if (rows[j][k] - rows[k][j].conj()).norm() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not Hermitian at ({j},{k})"
                    )));
                }
            }
        }
        let n = 2 * l;
        let mut entries = vec![0.0; n * n];
        for j in 0..l {
            for k in 0..l {
                let e = rows[j][k];
                entries[j * n + k] = e.re;
                entries[j * n + (k + l)] = e.im;
                entries[(j + l) * n + k] = -e.im;
                entries[(j + l) * n + (k + l)] = e.re;
            }
        }
        Ok(RealQuadForm { dim: n, entries })
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let mut acc = 0.0;
        for (j, xj) in x.iter().enumerate() {
            for (k, xk) in x.iter().enumerate() {
                acc += xj * self.entry(j, k) * xk;
            }
        }
        acc
    }

    pub fn quad_form_int(&self, x: &[i64]) -> f64 {
        let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        self.quad_form(&xf)
    }
}

/// The `2L×2L` real version `[[Re M, Im M], [-Im M, Re M]]` of a complex
/// Gram form. For `a ∈ Z[i]^L` with real embedding `ã = (Re a, Im a)` the
/// quadratic form is preserved: `ã M̃ ãᵀ = a M aᴴ`.
pub fn real_embedding(m: &GramForm) -> RealQuadForm {
    let l = m.dim();
    let rows: Vec<Vec<Cplx>> =
        (0..l).map(|j| (0..l).map(|k| m.entry(j, k)).collect()).collect();
    RealQuadForm::from_hermitian(&rows).expect("Gram forms are Hermitian by construction")
}

/// Real embedding `ã = (Re a, Im a)` of a Gaussian-integer vector.
pub fn embed_coeffs(a: &[GaussInt]) -> Vec<i64> {
    a.iter().map(|g| g.re).chain(a.iter().map(|g| g.im)).collect()
}

/// Inverse of [`embed_coeffs`].
pub fn unembed_coeffs(x: &[i64]) -> Vec<GaussInt> {
    let l = x.len() / 2;
    (0..l).map(|j| GaussInt::new(x[j], x[j + l])).collect()
}
