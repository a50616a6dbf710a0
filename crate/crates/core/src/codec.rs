//! Construction-A lattice code over `Z[i]` with relay-side equation decoding.
//!
//! The code is the quotient `Λ/Λ'` with `Λ = βZ[i]^n` and `Λ' = βpZ[i]^n`:
//! a message symbol in `F_p[i]` lifts to its centered residue, scaled by `β`
//! so the codebook meets the power budget `ρ`. The relay quantizes `αy` onto
//! `Λ` and reduces mod `Λ'`; an equation error is declared when the result
//! differs from the true combination `(Σ aℓ xℓ) mod Λ'`.

use crate::field::{validate_field_prime, Fp2};
use crate::lattice::{all_finite, quantize_zi, GaussInt, GaussVec};
use crate::{Cplx, Error, Result};

/// Power normalization for the codebook scaling `β`.
///
/// `Average` sets the mean symbol energy of a uniform codeword to `ρ`;
/// `Peak` guarantees `‖x‖² ≤ nρ` for every codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerNormalization {
    Average,
    Peak,
}

/// A construction-A lattice code: codeword length `n`, field prime
/// `p ≡ 3 (mod 4)`, power scaling `beta`.
#[derive(Debug, Clone)]
pub struct LatticeCode {
    pub n: usize,
    pub p: i64,
    pub beta: f64,
    pub normalization: PowerNormalization,
}

impl LatticeCode {
    pub fn new(n: usize, p: i64, rho: f64, normalization: PowerNormalization) -> Result<Self> {
        validate_field_prime(p)?;
        if n == 0 {
            return Err(Error::InvalidParameter("codeword length must be >= 1".into()));
        }
        if rho <= 0.0 || rho.is_nan() {
            return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
        }
        let beta = match normalization {
            // Uniform centered residues have E|z|² = (p²-1)/6.
            PowerNormalization::Average => (6.0 * rho / ((p * p - 1) as f64)).sqrt(),
            // Largest residue energy is 2((p-1)/2)².
            PowerNormalization::Peak => (2.0 * rho).sqrt() / ((p - 1) as f64),
        };
        Ok(LatticeCode { n, p, beta, normalization })
    }

    /// Centered representative of an integer residue, in `[-(p-1)/2, (p-1)/2]`.
    fn center(&self, v: i64) -> i64 {
        let r = v.rem_euclid(self.p);
        if r > (self.p - 1) / 2 {
            r - self.p
        } else {
            r
        }
    }

    pub(crate) fn center_gauss(&self, g: GaussInt) -> GaussInt {
        GaussInt::new(self.center(g.re), self.center(g.im))
    }
}

/// A decoded (or true) equation: the coefficient vector it targets and the
/// lattice-code point as exact centered residues; the complex-valued point is
/// `β·residues`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationEstimate {
    pub a: GaussVec,
    pub residues: GaussVec,
}

impl EquationEstimate {
    /// The lattice-code point in signal space.
    pub fn point(&self, code: &LatticeCode) -> Vec<Cplx> {
        self.residues.iter().map(|r| r.to_cplx() * code.beta).collect()
    }

    /// The residues as canonical field elements of `F_p[i]`.
    pub fn to_field(&self, code: &LatticeCode) -> Vec<Fp2> {
        self.residues.iter().map(|r| Fp2::reduce(r.re, r.im, code.p)).collect()
    }
}

/// Encodes a message `w ∈ F_p[i]^n` to the codeword `β·centered(w)`.
pub fn encode(w: &[Fp2], code: &LatticeCode) -> Result<Vec<Cplx>> {
    if w.len() != code.n {
        return Err(Error::DimensionMismatch { expected: code.n, got: w.len() });
    }
    for s in w {
        if s.p != code.p {
            return Err(Error::InvalidSymbol(format!(
                "symbol over F_{}[i] fed to a p={} code",
                s.p, code.p
            )));
        }
        if s.re < 0 || s.re >= code.p || s.im < 0 || s.im >= code.p {
            return Err(Error::InvalidSymbol(format!(
                "symbol ({}, {}) outside [0, {})",
                s.re, s.im, code.p
            )));
        }
    }
    Ok(w.iter()
        .map(|s| {
            let g = code.center_gauss(GaussInt::new(s.re, s.im));
            g.to_cplx() * code.beta
        })
        .collect())
}

/// Relay detector `ĉ = Q_Λ(αy) mod Λ'`: quantize the scaled observation onto
/// `βZ[i]^n`, then reduce the integer coordinates mod `p`.
pub fn relay_decode(
    y: &[Cplx],
    alpha: Cplx,
    a: &[GaussInt],
    code: &LatticeCode,
) -> Result<EquationEstimate> {
    if y.len() != code.n {
        return Err(Error::DimensionMismatch { expected: code.n, got: y.len() });
    }
    let scaled: Vec<Cplx> = y.iter().map(|z| z * alpha / code.beta).collect();
    if !all_finite(&scaled) {
        return Err(Error::NonFinite);
    }
    let v = quantize_zi(&scaled)?;
    let residues = v.iter().map(|g| code.center_gauss(*g)).collect();
    Ok(EquationEstimate { a: a.to_vec(), residues })
}

/// Ground truth `c = (Σ aℓ xℓ) mod Λ'`, computed exactly on the integer
/// coordinates of the codewords.
pub fn true_equation(
    x_list: &[Vec<Cplx>],
    a: &[GaussInt],
    code: &LatticeCode,
) -> Result<EquationEstimate> {
    if x_list.len() != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: x_list.len() });
    }
    for x in x_list {
        if x.len() != code.n {
            return Err(Error::DimensionMismatch { expected: code.n, got: x.len() });
        }
    }
    let mut acc = vec![GaussInt::ZERO; code.n];
    for (x, al) in x_list.iter().zip(a) {
        // Codewords are β times exact integers; recover them losslessly.
        let ints = quantize_zi(&x.iter().map(|z| z / code.beta).collect::<Vec<_>>())?;
        for (slot, g) in acc.iter_mut().zip(&ints) {
            *slot = slot.add(al.mul(*g));
        }
    }
    let residues = acc.into_iter().map(|g| code.center_gauss(g)).collect();
    Ok(EquationEstimate { a: a.to_vec(), residues })
}

/// True iff the estimate differs from the truth in any coordinate; both must
/// target the same coefficient vector.
pub fn equation_error(est: &EquationEstimate, truth: &EquationEstimate) -> Result<bool> {
    if est.a != truth.a {
        return Err(Error::InvalidComparison);
    }
    Ok(est.residues != truth.residues)
}
