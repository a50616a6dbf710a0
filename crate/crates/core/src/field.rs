//! Exact arithmetic in `F_{p²} = F_p[i]` and destination-side message
//! recovery.
//!
//! For a prime `p ≡ 3 (mod 4)`, `-1` is a quadratic non-residue mod `p`, so
//! `Z[i]/pZ[i]` is the field with `p²` elements. The destination collects one
//! decoded equation per relay and solves the resulting linear system over
//! this field; the system is solvable exactly when the reduced coefficient
//! matrix is nonsingular.

use crate::lattice::GaussInt;
use crate::rng::SubRng;
use crate::{Error, Result};

/// Checks `p` prime and `p ≡ 3 (mod 4)` by trial division.
pub fn validate_field_prime(p: i64) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        d += 1;
    }
    if p % 4 != 3 {
        return Err(Error::InvalidField(format!("{p} is not congruent to 3 mod 4")));
    }
    Ok(())
}

/// An element `re + im·i` of `F_p[i]`, both parts canonical in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2 {
    pub re: i64,
    pub im: i64,
    pub p: i64,
}

fn emod(x: i64, p: i64) -> i64 {
    x.rem_euclid(p)
}

fn pow_mod(mut base: i64, mut exp: i64, p: i64) -> i64 {
    let mut acc = 1i64;
    base = emod(base, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Fp2 {
    /// Canonical reduction of arbitrary integer parts.
    pub fn reduce(re: i64, im: i64, p: i64) -> Fp2 {
        Fp2 { re: emod(re, p), im: emod(im, p), p }
    }

    pub fn zero(p: i64) -> Fp2 {
        Fp2 { re: 0, im: 0, p }
    }

    pub fn one(p: i64) -> Fp2 {
        Fp2 { re: 1, im: 0, p }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn add(&self, rhs: Fp2) -> Fp2 {
        debug_assert_eq!(self.p, rhs.p);
        Fp2::reduce(self.re + rhs.re, self.im + rhs.im, self.p)
    }

    pub fn sub(&self, rhs: Fp2) -> Fp2 {
        debug_assert_eq!(self.p, rhs.p);
        Fp2::reduce(self.re - rhs.re, self.im - rhs.im, self.p)
    }

    pub fn mul(&self, rhs: Fp2) -> Fp2 {
        debug_assert_eq!(self.p, rhs.p);
        Fp2::reduce(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
            self.p,
        )
    }

    pub fn neg(&self) -> Fp2 {
        Fp2::reduce(-self.re, -self.im, self.p)
    }

    /// Multiplicative inverse `(re - im·i)/(re² + im²)`; `None` for zero.
    ///
    /// The norm `re² + im²` is a unit of `F_p` whenever the element is
    /// nonzero, because `-1` is a non-residue for `p ≡ 3 (mod 4)`.
    pub fn inv(&self) -> Option<Fp2> {
        if self.is_zero() {
            return None;
        }
        let norm = emod(self.re * self.re + self.im * self.im, self.p);
        debug_assert_ne!(norm, 0);
        let ninv = pow_mod(norm, self.p - 2, self.p);
        Some(Fp2::reduce(self.re * ninv, -self.im * ninv, self.p))
    }
}

/// Componentwise reduction of a Gaussian-integer coefficient vector to
/// `F_p[i]`: `(Re a mod p, Im a mod p)`.
pub fn reduce_coeffs(a: &[GaussInt], p: i64) -> Result<Vec<Fp2>> {
    validate_field_prime(p)?;
    Ok(a.iter().map(|g| Fp2::reduce(g.re, g.im, p)).collect())
}

/// An `L×L` linear system over `F_p[i]`: one decoded equation per relay, each
/// right-hand side a length-`n` message combination.
#[derive(Debug, Clone)]
pub struct EquationSystem {
    pub coeffs: Vec<Vec<Fp2>>,
    pub rhs: Vec<Vec<Fp2>>,
    pub p: i64,
}

impl EquationSystem {
    pub fn new(coeffs: Vec<Vec<Fp2>>, rhs: Vec<Vec<Fp2>>, p: i64) -> Result<Self> {
        validate_field_prime(p)?;
        let l = coeffs.len();
        if l == 0 {
            return Err(Error::Config("empty equation system".into()));
        }
        if coeffs.iter().any(|row| row.len() != l) {
            return Err(Error::DimensionMismatch { expected: l, got: 0 });
        }
        if rhs.len() != l {
            return Err(Error::DimensionMismatch { expected: l, got: rhs.len() });
        }
        let n = rhs[0].len();
        if rhs.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: 0 });
        }
        let ok = coeffs.iter().flatten().chain(rhs.iter().flatten()).all(|e| e.p == p);
        if !ok {
            return Err(Error::InvalidSymbol("mixed field primes in system".into()));
        }
        Ok(EquationSystem { coeffs, rhs, p })
    }
}

/// Outcome of solving an equation system: the recovered messages, or the
/// singular flag (a legitimate result, not an error).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(Vec<Vec<Fp2>>),
    Singular,
}

/// Gaussian elimination over `F_p[i]` with first-nonzero pivoting.
pub fn solve(system: &EquationSystem) -> SolveOutcome {
    let l = system.coeffs.len();
    let n = system.rhs[0].len();
    let mut a = system.coeffs.clone();
    let mut b = system.rhs.clone();

    for col in 0..l {
        let pivot_row = match (col..l).find(|&r| !a[r][col].is_zero()) {
            Some(r) => r,
            None => return SolveOutcome::Singular,
        };
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let inv = a[col][col].inv().expect("pivot is nonzero");
        for k in col..l {
            a[col][k] = a[col][k].mul(inv);
        }
        for k in 0..n {
            b[col][k] = b[col][k].mul(inv);
        }
        for r in 0..l {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col];
                for k in col..l {
                    let t = factor.mul(a[col][k]);
                    a[r][k] = a[r][k].sub(t);
                }
                for k in 0..n {
                    let t = factor.mul(b[col][k]);
                    b[r][k] = b[r][k].sub(t);
                }
            }
        }
    }
    SolveOutcome::Solved(b)
}

/// Determinant over `F_p[i]` by elimination.
pub fn determinant(coeffs: &[Vec<Fp2>], p: i64) -> Fp2 {
    let l = coeffs.len();
    let mut a = coeffs.to_vec();
    let mut det = Fp2::one(p);
    for col in 0..l {
        let pivot_row = match (col..l).find(|&r| !a[r][col].is_zero()) {
            Some(r) => r,
            None => return Fp2::zero(p),
        };
        if pivot_row != col {
            a.swap(col, pivot_row);
            det = det.neg();
        }
        det = det.mul(a[col][col]);
        let inv = a[col][col].inv().expect("pivot is nonzero");
        for r in col + 1..l {
            if !a[r][col].is_zero() {
                let factor = a[r][col].mul(inv);
                for k in col..l {
                    let t = factor.mul(a[col][k]);
                    a[r][k] = a[r][k].sub(t);
                }
            }
        }
    }
    det
}

/// Fraction of uniformly random `L×L` matrices over `F_{p²}` that are
/// singular; deterministic in `seed`.
pub fn singularity_rate(l: usize, p: i64, trials: u64, seed: u64) -> Result<f64> {
    validate_field_prime(p)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if l == 0 {
        return Err(Error::InvalidParameter("matrix dimension must be >= 1".into()));
    }
    let mut singular = 0u64;
    for trial in 0..trials {
        let mut rng = SubRng::from_parts(seed, &[0x5146, trial]);
        let m: Vec<Vec<Fp2>> = (0..l)
            .map(|_| {
                (0..l)
                    .map(|_| {
                        Fp2::reduce(
                            rng.next_below(p as u64) as i64,
                            rng.next_below(p as u64) as i64,
                            p,
                        )
                    })
                    .collect()
            })
            .collect();
        if determinant(&m, p).is_zero() {
            singular += 1;
        }
    }
    Ok(singular as f64 / trials as f64)
}

/// Exact probability that a uniformly random `L×L` matrix over `F_q`
/// (`q = p²`) is singular: `1 - Π_{k=1..L} (1 - q^{-k})`.
pub fn singularity_probability(l: usize, q: f64) -> f64 {
    let mut nonsingular = 1.0;
    for k in 1..=l {
        nonsingular *= 1.0 - q.powi(-(k as i32));
    }
    1.0 - nonsingular
}
