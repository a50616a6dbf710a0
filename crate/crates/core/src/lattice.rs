//! Complex vectors, Gaussian integers, nearest-point quantization, and
//! modulo-lattice reduction.
//!
//! Everything downstream reduces to the scaled integer lattices `pZ[i]^n`:
//! the quantizer rounds componentwise to the nearest Gaussian integer and the
//! modulo operation keeps the residual, so both are exact up to one rounding
//! per real axis.

use crate::{Cplx, Error, Result};

/// A Gaussian integer, an element of `Z[i]`.
///
/// Arithmetic is exact 64-bit integer arithmetic; no rounding occurs in
/// addition or multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };

    pub fn new(re: i64, im: i64) -> Self {
        GaussInt { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// Squared modulus `re² + im²`.
    pub fn norm_sq(&self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(&self) -> GaussInt {
        GaussInt::new(self.re, -self.im)
    }

    pub fn add(&self, rhs: GaussInt) -> GaussInt {
        GaussInt::new(self.re + rhs.re, self.im + rhs.im)
    }

    pub fn sub(&self, rhs: GaussInt) -> GaussInt {
        GaussInt::new(self.re - rhs.re, self.im - rhs.im)
    }

    pub fn mul(&self, rhs: GaussInt) -> GaussInt {
        GaussInt::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }

    pub fn neg(&self) -> GaussInt {
        GaussInt::new(-self.re, -self.im)
    }

    pub fn to_cplx(&self) -> Cplx {
        Cplx::new(self.re as f64, self.im as f64)
    }
}

/// Network-equation coefficient vector `a ∈ Z[i]^L`.
pub type GaussVec = Vec<GaussInt>;

/// One of the four units of `Z[i]`: `1, i, -1, -i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussUnit {
    One,
    I,
    NegOne,
    NegI,
}

impl GaussUnit {
    pub const ALL: [GaussUnit; 4] = [GaussUnit::One, GaussUnit::I, GaussUnit::NegOne, GaussUnit::NegI];

    pub fn value(&self) -> GaussInt {
        match self {
            GaussUnit::One => GaussInt::new(1, 0),
            GaussUnit::I => GaussInt::new(0, 1),
            GaussUnit::NegOne => GaussInt::new(-1, 0),
            GaussUnit::NegI => GaussInt::new(0, -1),
        }
    }

    /// Argument of the unit in radians: `0, π/2, π, -π/2`.
    pub fn arg(&self) -> f64 {
        match self {
            GaussUnit::One => 0.0,
            GaussUnit::I => std::f64::consts::FRAC_PI_2,
            GaussUnit::NegOne => std::f64::consts::PI,
            GaussUnit::NegI => -std::f64::consts::FRAC_PI_2,
        }
    }

    pub fn conj(&self) -> GaussUnit {
        match self {
            GaussUnit::One => GaussUnit::One,
            GaussUnit::I => GaussUnit::NegI,
            GaussUnit::NegOne => GaussUnit::NegOne,
            GaussUnit::NegI => GaussUnit::I,
        }
    }

    pub fn to_cplx(&self) -> Cplx {
        self.value().to_cplx()
    }

    /// Exact product `u · g` in `Z[i]`.
    pub fn mul_gauss(&self, g: GaussInt) -> GaussInt {
        self.value().mul(g)
    }
}

/// True when every component has finite real and imaginary parts.
pub fn all_finite(v: &[Cplx]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Squared Euclidean norm `Σ |vℓ|²`.
pub fn norm_sq(v: &[Cplx]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Hermitian inner product `⟨a, b⟩ = Σ aℓ · conj(bℓ)`.
pub fn inner(a: &[Cplx], b: &[Cplx]) -> Cplx {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn gauss_to_cplx(a: &[GaussInt]) -> Vec<Cplx> {
    a.iter().map(GaussInt::to_cplx).collect()
}

/// Squared Euclidean norm of a Gaussian-integer vector, exact.
pub fn gauss_norm_sq(a: &[GaussInt]) -> i64 {
    a.iter().map(GaussInt::norm_sq).sum()
}

pub fn gauss_is_zero(a: &[GaussInt]) -> bool {
    a.iter().all(GaussInt::is_zero)
}

/// Rounds half away from zero; the rounding mode of `f64::round`.
fn round_away(x: f64) -> i64 {
    x.round() as i64
}

/// Componentwise nearest Gaussian integer, `Q_{Z[i]^n}(v)`.
///
/// Ties on either real axis are broken by rounding half away from zero.
pub fn quantize_zi(v: &[Cplx]) -> Result<GaussVec> {
    if !all_finite(v) {
        return Err(Error::NonFinite);
    }
    Ok(v.iter()
        .map(|z| GaussInt::new(round_away(z.re), round_away(z.im)))
        .collect())
}

/// Modulo-lattice reduction `v mod pZ[i]^n = v - p·Q_{Z[i]^n}(v/p)`.
///
/// Every component of the result lies in `[-p/2, p/2]` on both real axes.
pub fn mod_lattice(v: &[Cplx], p: i64) -> Result<Vec<Cplx>> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("modulo scale p must be >= 2, got {p}")));
    }
    if !all_finite(v) {
        return Err(Error::NonFinite);
    }
    let pf = p as f64;
    let scaled: Vec<Cplx> = v.iter().map(|z| z / pf).collect();
    let q = quantize_zi(&scaled)?;
    Ok(v.iter()
        .zip(&q)
        .map(|(z, g)| z - g.to_cplx() * pf)
        .collect())
}

/// Polar decomposition of each entry: `(modulus, phase)` with phase in
/// `(-π, π]` and the phase of a zero entry defined as 0.
pub fn polar(v: &[Cplx]) -> Vec<(f64, f64)> {
    v.iter()
        .map(|z| {
            let m = z.norm();
            if m == 0.0 {
                (0.0, 0.0)
            } else {
                (m, z.im.atan2(z.re))
            }
        })
        .collect()
}

/// Polar decomposition of a Gaussian-integer vector.
pub fn polar_gauss(a: &[GaussInt]) -> Vec<(f64, f64)> {
    polar(&gauss_to_cplx(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Cplx {
        Cplx::new(re, im)
    }

    #[test]
    fn quantize_rounds_componentwise() {
        let q = quantize_zi(&[c(3.2, -1.7)]).unwrap();
        assert_eq!(q, vec![GaussInt::new(3, -2)]);
        let q0 = quantize_zi(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(q0, vec![GaussInt::ZERO, GaussInt::ZERO]);
    }

    #[test]
    fn quantize_ties_round_away_from_zero() {
        let q = quantize_zi(&[c(0.5, -0.5), c(-1.5, 2.5)]).unwrap();
        assert_eq!(q, vec![GaussInt::new(1, -1), GaussInt::new(-2, 3)]);
    }

    #[test]
    fn quantize_rejects_non_finite() {
        assert_eq!(quantize_zi(&[c(f64::NAN, 0.0)]), Err(Error::NonFinite));
        assert_eq!(quantize_zi(&[c(0.0, f64::INFINITY)]), Err(Error::NonFinite));
    }

    // Brute-force nearest-point oracle: scan all Gaussian integers in a box
    // around the component and keep the closest.
    fn nearest_bruteforce(z: Cplx) -> GaussInt {
        let bound = 11i64;
        let mut best = GaussInt::ZERO;
        let mut best_d = f64::INFINITY;
        for re in -bound..=bound {
            for im in -bound..=bound {
                let d = (z - c(re as f64, im as f64)).norm_sqr();
                if d < best_d - 1e-15 {
                    best_d = d;
                    best = GaussInt::new(re, im);
                }
            }
        }
        best
    }

    #[test]
    fn quantize_matches_bruteforce_oracle() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 20.0 - 10.0
        };
        for _ in 0..200 {
            let z = c(next(), next());
            let got = quantize_zi(&[z]).unwrap()[0];
            let want = nearest_bruteforce(z);
            // Half-integer ties are measure-zero for these draws; distances match.
            let d_got = (z - got.to_cplx()).norm_sqr();
            let d_want = (z - want.to_cplx()).norm_sqr();
            assert!((d_got - d_want).abs() <= 1e-12, "{z} -> {got:?} vs {want:?}");
        }
    }

    #[test]
    fn mod_lattice_examples() {
        let r = mod_lattice(&[c(7.3, 0.0)], 5).unwrap();
        assert!((r[0] - c(2.3, 0.0)).norm() < 1e-12);

        // Lattice points map to zero.
        let r = mod_lattice(&[c(35.0, -10.0)], 5).unwrap();
        assert!(r[0].norm() < 1e-12);
    }

    #[test]
    fn mod_lattice_rejects_small_scale() {
        assert!(matches!(mod_lattice(&[c(1.0, 0.0)], 1), Err(Error::InvalidParameter(_))));
        assert!(matches!(mod_lattice(&[c(1.0, 0.0)], 0), Err(Error::InvalidParameter(_))));
    }

    // Translate-enumeration oracle: minimize |v - p g| per component over a
    // box of Gaussian integers g.
    fn mod_bruteforce(z: Cplx, p: i64) -> Cplx {
        let reach = (z.re.abs().max(z.im.abs()) / p as f64).ceil() as i64 + 1;
        let mut best = z;
        let mut best_n = f64::INFINITY;
        for re in -reach..=reach {
            for im in -reach..=reach {
                let t = z - c((p * re) as f64, (p * im) as f64);
                // Boundary ties resolved toward the quantizer's choice; compare
                // on norm only.
                let n = t.re.abs().max(t.im.abs());
                if n < best_n - 1e-12 {
                    best_n = n;
                    best = t;
                }
            }
        }
        best
    }

    #[test]
    fn mod_lattice_matches_translate_oracle() {
        let mut state = 0xdeadbeefcafef00du64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 60.0 - 30.0
        };
        for _ in 0..200 {
            let z = c(next(), next());
            let got = mod_lattice(&[z], 7).unwrap()[0];
            let want = mod_bruteforce(z, 7);
            assert!(
                (got.re.abs().max(got.im.abs()) - want.re.abs().max(want.im.abs())).abs() <= 1e-9,
                "{z}: got {got}, oracle {want}"
            );
        }
    }

    #[test]
    fn polar_examples() {
        let p = polar(&[c(1.0, 1.0), c(-2.0, 0.0), c(0.0, 0.0)]);
        assert!((p[0].0 - 2f64.sqrt()).abs() < 1e-12);
        assert!((p[0].1 - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!((p[1].0 - 2.0).abs() < 1e-12);
        assert!((p[1].1 - std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(p[2], (0.0, 0.0));
    }

    proptest! {
        #[test]
        fn quantize_translation_equivariance(
            re in -8.0..8.0f64, im in -8.0..8.0f64,
            gre in -20i64..20, gim in -20i64..20,
        ) {
            let z = c(re, im);
            let g = GaussInt::new(gre, gim);
            let q_shift = quantize_zi(&[z + g.to_cplx()]).unwrap()[0];
            let q = quantize_zi(&[z]).unwrap()[0];
            prop_assert_eq!(q_shift, q.add(g));
        }

        #[test]
        fn mod_lattice_idempotent(re in -50.0..50.0f64, im in -50.0..50.0f64, p in 2i64..12) {
            let once = mod_lattice(&[c(re, im)], p).unwrap();
            let twice = mod_lattice(&once, p).unwrap();
            prop_assert!((once[0] - twice[0]).norm() <= 1e-12);
        }

        #[test]
        fn mod_lattice_range(re in -50.0..50.0f64, im in -50.0..50.0f64, p in 2i64..12) {
            let r = mod_lattice(&[c(re, im)], p).unwrap()[0];
            let half = p as f64 / 2.0 + 1e-9;
            prop_assert!(r.re.abs() <= half && r.im.abs() <= half);
        }

        #[test]
        fn quantize_error_within_half_cell(re in -100.0..100.0f64, im in -100.0..100.0f64) {
            let z = c(re, im);
            let q = quantize_zi(&[z]).unwrap()[0];
            prop_assert!((z - q.to_cplx()).norm() <= 2f64.sqrt() / 2.0 + 1e-12);
        }

        #[test]
        fn polar_round_trip(re in -100.0..100.0f64, im in -100.0..100.0f64) {
            let z = c(re, im);
            let (m, ph) = polar(&[z])[0];
            let back = Cplx::from_polar(m, ph);
            prop_assert!((back - z).norm() <= 1e-12 * (1.0 + z.norm()));
            prop_assert!(ph > -std::f64::consts::PI - 1e-15 && ph <= std::f64::consts::PI + 1e-15);
        }
    }
}
