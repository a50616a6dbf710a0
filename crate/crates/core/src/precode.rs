//! Optimal phase precoder construction.
//!
//! For channel entries `hℓ = ηℓ e^{iθℓ}` and coefficients `aℓ = βℓ e^{iψℓ}`,
//! the rate-maximizing rotation of transmitter `ℓ` is `e^{i(ψℓ-θℓ)}`: it
//! turns each channel entry onto the phase of its coefficient so the inner
//! product `⟨h', a⟩` collapses to `Σ ηℓ βℓ`. Only phase *differences* matter,
//! so the all-aligned zero-offset member of the optimal family is used.
//!
//! Because `Z[i]` is invariant under rotation by 90°, each raw rotation
//! factors as `uℓ·e^{iφℓ}` with a Gaussian unit `uℓ` and `φℓ ∈ [-π/4, π/4)`.
//! A transmitter then only realizes the small phase `φℓ`, while the unit is
//! absorbed into the coefficient as `uℓᴴ·aℓ` — still a Gaussian integer, with
//! the same modulus, and exactly the same effective-noise energy.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::lattice::{gauss_is_zero, GaussInt, GaussUnit, GaussVec};
use crate::{Cplx, Error, Result};

/// Per-user phases in `[-π/4, π/4]` plus the Gaussian units folded out of the
/// raw rotations. The combined per-user multiplier is `uℓ·e^{iφℓ}`, which has
/// unit modulus, so precoding never changes transmit power.
#[derive(Debug, Clone)]
pub struct Precoder {
    phases: Vec<f64>,
    units: Vec<GaussUnit>,
}

impl Precoder {
    pub fn new(phases: Vec<f64>, units: Vec<GaussUnit>) -> Result<Self> {
        if phases.len() != units.len() {
            return Err(Error::DimensionMismatch { expected: phases.len(), got: units.len() });
        }
        if let Some(phi) = phases.iter().find(|phi| phi.abs() > FRAC_PI_4 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "precoder phase {phi} outside [-pi/4, pi/4]"
            )));
        }
        Ok(Precoder { phases, units })
    }

    /// Identity precoder: all phases zero, all units 1.
    pub fn identity(l: usize) -> Self {
        Precoder { phases: vec![0.0; l], units: vec![GaussUnit::One; l] }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn units(&self) -> &[GaussUnit] {
        &self.units
    }

    /// Combined multiplier `uℓ·e^{iφℓ}` for user `ℓ`.
    pub fn multiplier(&self, l: usize) -> Cplx {
        self.units[l].to_cplx() * Cplx::from_polar(1.0, self.phases[l])
    }

    pub fn multipliers(&self) -> Vec<Cplx> {
        (0..self.len()).map(|l| self.multiplier(l)).collect()
    }
}

/// Wraps an angle into `(-π, π]`.
fn wrap_angle(mut x: f64) -> f64 {
    while x > PI {
        x -= 2.0 * PI;
    }
    while x <= -PI {
        x += 2.0 * PI;
    }
    x
}

/// Splits a raw rotation into `(unit, phase)` with `raw = arg(unit) + phase`
/// and `phase ∈ [-π/4, π/4)`; the π/4 boundary maps downward.
fn fold_phase(raw: f64) -> (GaussUnit, f64) {
    let raw = wrap_angle(raw);
    let unit = if (-FRAC_PI_4..FRAC_PI_4).contains(&raw) {
        GaussUnit::One
    } else if (FRAC_PI_4..3.0 * FRAC_PI_4).contains(&raw) {
        GaussUnit::I
    } else if (-3.0 * FRAC_PI_4..-FRAC_PI_4).contains(&raw) {
        GaussUnit::NegI
    } else {
        GaussUnit::NegOne
    };
    (unit, wrap_angle(raw - unit.arg()))
}

/// Builds the optimal precoder for `(h, a)` and the unit-adjusted coefficient
/// vector `uᴴ·a`.
///
/// The raw phase for user `ℓ` is `arg(aℓ) - arg(hℓ)`; entries where either
/// vector is zero contribute nothing and get phase 0, unit 1. Applying the
/// returned precoder in full aligns every channel entry with the *original*
/// `aℓ`; applying only its `[-π/4, π/4]` phases aligns with the adjusted
/// coefficients — both describe the same effective noise exactly.
pub fn optimal_precoder(h: &[Cplx], a: &[GaussInt]) -> Result<(Precoder, GaussVec)> {
    if gauss_is_zero(a) {
        return Err(Error::ZeroCoefficient);
    }
    if h.len() != a.len() {
        return Err(Error::DimensionMismatch { expected: h.len(), got: a.len() });
    }
    let mut phases = Vec::with_capacity(h.len());
    let mut units = Vec::with_capacity(h.len());
    let mut adjusted = Vec::with_capacity(h.len());
    for (hl, al) in h.iter().zip(a) {
        if hl.norm_sqr() == 0.0 || al.is_zero() {
            phases.push(0.0);
            units.push(GaussUnit::One);
            adjusted.push(*al);
            continue;
        }
        let theta = hl.im.atan2(hl.re);
        let psi = (al.im as f64).atan2(al.re as f64);
        let (unit, phi) = fold_phase(psi - theta);
        phases.push(phi);
        units.push(unit);
        adjusted.push(unit.conj().mul_gauss(*al));
    }
    Ok((Precoder { phases, units }, adjusted))
}

/// Applies a precoder to a channel vector: `h'ℓ = hℓ·uℓ·e^{iφℓ}`.
pub fn apply_precoder(h: &[Cplx], p: &Precoder) -> Result<Vec<Cplx>> {
    if h.len() != p.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), got: h.len() });
    }
    Ok(h.iter().enumerate().map(|(l, hl)| hl * p.multiplier(l)).collect())
}
