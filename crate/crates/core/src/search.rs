//! Network-equation coefficient search.
//!
//! All searchers minimize the rate quadratic form `a M' aᴴ` over nonzero
//! `a ∈ Z[i]^L`, where `M'` is the Gram form of the (possibly precoded)
//! channel:
//!
//! - [`qes`]: quantized exhaustive search over a grid of scalings `α`
//!   (modulus 1..|α|max in integer steps, argument 0..90° in steps of `d`),
//!   quantizing `αh'` to candidate coefficients and re-optimizing `α` to the
//!   MMSE value before scoring. Cost is exactly `(⌊90/d⌋+1)·|α|max`
//!   candidate evaluations.
//! - [`bruteforce`]: exhaustive scan of the zero-rate sphere
//!   `‖a‖² < 1+ρ‖h'‖²`; exact, cost grows like `ρ^L`.
//! - [`sphere_min`]: exact depth-first enumeration on the Cholesky factor of
//!   the real-embedded form, radius shrinking on improvement.
//! - [`lll_assisted`]: LLL-reduces (δ = 0.75) the real-embedded Cholesky
//!   basis first and starts the same enumeration from the shortest reduced
//!   row's length.
//!
//! `ops_count` reports candidate evaluations (grid points, ball points, or
//! enumeration-tree nodes); LLL preprocessing itself is not counted.
//!
//! Returned coefficient vectors are canonical: the first nonzero entry is
//! rotated by a Gaussian unit into argument `[-π/4, π/4)`, and exact ties in
//! the quadratic form resolve to the lexicographically smallest
//! `(Re a₁, Im a₁, Re a₂, ...)`.

use crate::lattice::{
    gauss_is_zero, gauss_norm_sq, gauss_to_cplx, inner, norm_sq, quantize_zi, GaussInt, GaussUnit,
    GaussVec,
};
use crate::precode::{apply_precoder, Precoder};
use crate::rate::{gram_form, log2_pos, real_embedding, GramForm, RealQuadForm};
use crate::{Cplx, Error, Result};

/// Hard cap on exhaustive-search candidates.
const ENUMERATION_LIMIT: u128 = 100_000_000;

/// Relative tolerance for treating two quadratic-form values as tied.
const TIE_TOL: f64 = 1e-12;

/// Which coefficient searcher to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearcherKind {
    Qes,
    BruteForce,
    Sphere,
    Lll,
}

impl SearcherKind {
    pub fn name(&self) -> &'static str {
        match self {
            SearcherKind::Qes => "qes",
            SearcherKind::BruteForce => "bruteforce",
            SearcherKind::Sphere => "sphere",
            SearcherKind::Lll => "lll",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "qes" => Ok(SearcherKind::Qes),
            "bruteforce" => Ok(SearcherKind::BruteForce),
            "sphere" => Ok(SearcherKind::Sphere),
            "lll" => Ok(SearcherKind::Lll),
            other => Err(Error::Config(format!(
                "unknown searcher '{other}' (expected qes|bruteforce|sphere|lll)"
            ))),
        }
    }
}

/// Search parameters. `alpha_max` and `phase_step_deg` only drive QES.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub alpha_max: u32,
    pub phase_step_deg: f64,
    pub searcher: SearcherKind,
    pub ops_budget: Option<u64>,
}

impl SearchConfig {
    pub fn new(alpha_max: u32, phase_step_deg: f64, searcher: SearcherKind) -> Result<Self> {
        let cfg = SearchConfig { alpha_max, phase_step_deg, searcher, ops_budget: None };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Defaults: `|α|max = ⌈√(1+ρ‖h‖²)⌉` (larger moduli can only yield zero
    /// rate) and the paper's suggested 5° step.
    pub fn defaults(searcher: SearcherKind, rho: f64, h_norm_sq: f64) -> Self {
        let alpha_max = (1.0 + rho * h_norm_sq).sqrt().ceil().max(1.0) as u32;
        SearchConfig { alpha_max, phase_step_deg: 5.0, searcher, ops_budget: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_max < 1 {
            return Err(Error::InvalidParameter("alpha_max must be >= 1".into()));
        }
        let step_ok = self.phase_step_deg > 0.0 && self.phase_step_deg <= 90.0;
        if !step_ok {
            return Err(Error::InvalidParameter(format!(
                "phase step must be in (0, 90] degrees, got {}",
                self.phase_step_deg
            )));
        }
        Ok(())
    }

    /// Exact QES grid size: `(⌊90/d⌋+1)·|α|max`.
    pub fn qes_grid_size(&self) -> u64 {
        let steps = (90.0 / self.phase_step_deg).floor() as u64 + 1;
        steps * self.alpha_max as u64
    }
}

/// Outcome of a coefficient search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub a: GaussVec,
    pub alpha: Cplx,
    pub noise_energy: f64,
    pub rate_bits: f64,
    pub ops_count: u64,
}

fn lex_less(a: &[i64], b: &[i64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x < y;
        }
    }
    false
}

/// Tie-break key `(Re a₁, Im a₁, Re a₂, Im a₂, ...)`.
fn interleave(a: &[GaussInt]) -> Vec<i64> {
    a.iter().flat_map(|g| [g.re, g.im]).collect()
}

/// True when `arg(z) ∈ [-π/4, π/4)`, decided in exact integer arithmetic.
fn arg_in_fundamental_sector(z: GaussInt) -> bool {
    z.re > 0 && z.im >= -z.re && z.im < z.re
}

/// The Gaussian unit that rotates the first nonzero entry of `a` into
/// argument `[-π/4, π/4)`. Units leave the quadratic form unchanged.
pub fn canonical_unit(a: &[GaussInt]) -> GaussUnit {
    let first = match a.iter().find(|g| !g.is_zero()) {
        Some(g) => *g,
        None => return GaussUnit::One,
    };
    for u in GaussUnit::ALL {
        if arg_in_fundamental_sector(u.mul_gauss(first)) {
            return u;
        }
    }
    unreachable!("one of the four units always lands in the sector");
}

fn canonicalize(a: &[GaussInt], alpha: Cplx) -> (GaussVec, Cplx) {
    let u = canonical_unit(a);
    let a_new = a.iter().map(|g| u.mul_gauss(*g)).collect();
    (a_new, alpha * u.to_cplx())
}

/// Running minimum with lexicographic tie-breaking on the raw coordinates.
/// Unit canonicalization happens only on the final result: inside an
/// enumeration the coordinates may live in a reduced basis where unit
/// rotations are not symmetries.
struct BestCandidate {
    value: f64,
    x: Option<Vec<i64>>,
}

impl BestCandidate {
    fn new() -> Self {
        BestCandidate { value: f64::INFINITY, x: None }
    }

    /// Returns true when the candidate strictly improved the value.
    fn offer(&mut self, value: f64, x: &[i64]) -> bool {
        if self.x.is_none() {
            self.value = value;
            self.x = Some(x.to_vec());
            return true;
        }
        let tol = TIE_TOL * (1.0 + self.value.abs());
        if value < self.value - tol {
            self.value = value;
            self.x = Some(x.to_vec());
            true
        } else if value <= self.value + tol {
            let keep = self.x.as_ref().expect("tie requires an incumbent");
            if lex_less(x, keep) {
                self.value = self.value.min(value);
                self.x = Some(x.to_vec());
            }
            false
        } else {
            false
        }
    }
}

fn finish_result(
    h_eff: &[Cplx],
    rho: f64,
    a: GaussVec,
    quad_value: f64,
    ops_count: u64,
) -> SearchResult {
    let d = 1.0 + rho * norm_sq(h_eff);
    let a_c = gauss_to_cplx(&a);
    let alpha_raw = inner(&a_c, h_eff) * (rho / d);
    let (a, alpha) = canonicalize(&a, alpha_raw);
    let a_c = gauss_to_cplx(&a);
    let diff_sq: f64 = h_eff
        .iter()
        .zip(&a_c)
        .map(|(hl, al)| (alpha * hl - al).norm_sqr())
        .sum();
    SearchResult {
        a,
        alpha,
        noise_energy: rho * diff_sq + alpha.norm_sqr(),
        rate_bits: log2_pos(1.0 / quad_value),
        ops_count,
    }
}

fn check_budget(cfg: &SearchConfig, estimate: u64) -> Result<()> {
    if let Some(budget) = cfg.ops_budget {
        if estimate > budget {
            return Err(Error::EnumerationTooLarge {
                estimate: estimate as u128,
                limit: budget as u128,
            });
        }
    }
    Ok(())
}

/// Quantized exhaustive search: the `α` grid quantizes `αh'` into candidate
/// coefficients, `α` is then refreshed to the MMSE value for the candidate,
/// and the pair with the smallest effective-noise energy wins. Candidates
/// that are zero or sit outside the zero-rate sphere are skipped.
pub fn qes(h: &[Cplx], p: &Precoder, rho: f64, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    if rho <= 0.0 || rho.is_nan() {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    let h_prime = apply_precoder(h, p)?;
    check_budget(cfg, cfg.qes_grid_size())?;
    let h_sq = norm_sq(&h_prime);
    let d_denom = 1.0 + rho * h_sq;
    let phase_steps = (90.0 / cfg.phase_step_deg).floor() as u32;

    let mut ops: u64 = 0;
    let mut best_q = f64::INFINITY;
    let mut best: Option<(GaussVec, Cplx)> = None;
    for mag in 1..=cfg.alpha_max {
        for step in 0..=phase_steps {
            ops += 1;
            let arg = (step as f64 * cfg.phase_step_deg).to_radians();
            let alpha_grid = Cplx::from_polar(mag as f64, arg);
            let scaled: Vec<Cplx> = h_prime.iter().map(|z| alpha_grid * z).collect();
            let a = quantize_zi(&scaled)?;
            if gauss_is_zero(&a) {
                continue;
            }
            if gauss_norm_sq(&a) as f64 >= d_denom {
                continue; // zero-rate candidate
            }
            let a_c = gauss_to_cplx(&a);
            let alpha = inner(&a_c, &h_prime) * (rho / d_denom);
            let diff_sq: f64 = h_prime
                .iter()
                .zip(&a_c)
                .map(|(hl, al)| (alpha * hl - al).norm_sqr())
                .sum();
            let q1 = rho * diff_sq + alpha.norm_sqr();
            if q1 < best_q {
                best_q = q1;
                best = Some((a, alpha));
            }
        }
    }
    match best {
        Some((a, alpha)) => {
            let (a, alpha) = canonicalize(&a, alpha);
            Ok(SearchResult {
                a,
                alpha,
                noise_energy: best_q,
                rate_bits: log2_pos(rho / best_q),
                ops_count: ops,
            })
        }
        None => Err(Error::SearchFailure),
    }
}

/// Exhaustive scan of all nonzero `a ∈ Z[i]^L` with `‖a‖² < 1+ρ‖h'‖²`,
/// keeping the exact minimizer of the quadratic form. The reference
/// searcher: simple and exact, with `O(ρ^L)` cost.
pub fn bruteforce(h: &[Cplx], p: &Precoder, rho: f64) -> Result<SearchResult> {
    if rho <= 0.0 || rho.is_nan() {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    let h_prime = apply_precoder(h, p)?;
    let m = gram_form(&h_prime, rho)?;
    let l = h_prime.len();
    let radius_sq = 1.0 + rho * norm_sq(&h_prime);
    let bound = radius_sq.sqrt().floor() as i64;
    let per_axis = 2 * bound as u128 + 1;
    let mut estimate: u128 = 1;
    for _ in 0..2 * l {
        estimate = estimate.saturating_mul(per_axis);
        if estimate > ENUMERATION_LIMIT {
            return Err(Error::EnumerationTooLarge { estimate, limit: ENUMERATION_LIMIT });
        }
    }

    fn scan(
        m: &GramForm,
        a: &mut GaussVec,
        level: usize,
        norm_used: i64,
        norm_cap: f64,
        best: &mut BestCandidate,
        ops: &mut u64,
    ) {
        if level == a.len() {
            if !gauss_is_zero(a) {
                *ops += 1;
                best.offer(m.quad_form(a), &interleave(a));
            }
            return;
        }
        let remaining = norm_cap - norm_used as f64;
        let re_bound = remaining.sqrt().floor() as i64;
        for re in -re_bound..=re_bound {
            let after_re = norm_used + re * re;
            let im_bound = (norm_cap - after_re as f64).sqrt().floor() as i64;
            for im in -im_bound..=im_bound {
                let used = after_re + im * im;
                if (used as f64) >= norm_cap {
                    continue;
                }
                a[level] = GaussInt::new(re, im);
                scan(m, a, level + 1, used, norm_cap, best, ops);
            }
        }
        a[level] = GaussInt::ZERO;
    }
    let mut a = vec![GaussInt::ZERO; l];
    let mut best = BestCandidate::new();
    let mut ops: u64 = 0;
    scan(&m, &mut a, 0, 0, radius_sq, &mut best, &mut ops);

    match best.x {
        Some(x) => {
            let a: GaussVec =
                x.chunks(2).map(|pair| GaussInt::new(pair[0], pair[1])).collect();
            Ok(finish_result(&h_prime, rho, a, best.value, ops))
        }
        None => Err(Error::SearchFailure),
    }
}

/// Cholesky factorization `M = LLᵀ` (lower triangular, row-major).
fn cholesky(q: &RealQuadForm) -> Result<Vec<f64>> {
    let n = q.dim;
    let mut l = vec![0.0f64; n * n];
    for j in 0..n {
        let mut diag = q.entry(j, j);
        for k in 0..j {
            diag -= l[j * n + k] * l[j * n + k];
        }
        if diag <= 0.0 || !diag.is_finite() {
            return Err(Error::Numeric(format!(
                "Cholesky pivot {diag} at index {j}: form is not positive definite"
            )));
        }
        let root = diag.sqrt();
        l[j * n + j] = root;
        for i in j + 1..n {
            let mut acc = q.entry(i, j);
            for k in 0..j {
                acc -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = acc / root;
        }
    }
    Ok(l)
}

struct Frame {
    level: usize,
    used_sq: f64,
    center: f64,
    next_up: i64,
    next_down: i64,
    go_up: bool,
    up_dead: bool,
    down_dead: bool,
}

/// Exact shortest-vector enumeration on a real quadratic form.
///
/// Depth-first Schnorr-Euchner order: each level zig-zags outward from the
/// real-valued center, descending while the partial cost fits the current
/// radius, which shrinks every time a better nonzero point completes.
/// Returns the minimizer, its value, and the visited node count.
pub fn sphere_min_real(
    q: &RealQuadForm,
    initial_radius_sq: f64,
    ops_budget: Option<u64>,
) -> Result<(Vec<i64>, f64, u64)> {
    let n = q.dim;
    let lower = cholesky(q)?;
    // Row i of the cost recursion uses R = Lᵀ: cost_i = (Σ_{j>=i} R[i][j]·x_j)².
    let r = move |i: usize, j: usize| lower[j * n + i];

    let open_frame = |level: usize, used_sq: f64, x: &[i64]| -> Frame {
        let off: f64 = (level + 1..n).map(|j| r(level, j) * x[j] as f64).sum();
        let center = -off / r(level, level);
        let first = center.round() as i64;
        Frame {
            level,
            used_sq,
            center,
            next_up: first,
            next_down: first - 1,
            go_up: true,
            up_dead: false,
            down_dead: false,
        }
    };

    let mut x = vec![0i64; n];
    let mut best = BestCandidate::new();
    let mut radius_sq = initial_radius_sq;
    let mut ops: u64 = 0;
    let mut stack: Vec<Frame> = vec![open_frame(n - 1, 0.0, &x)];

    while let Some(frame) = stack.last_mut() {
        if frame.up_dead && frame.down_dead {
            stack.pop();
            continue;
        }
        let take_up = if frame.up_dead {
            false
        } else if frame.down_dead {
            true
        } else {
            frame.go_up
        };
        frame.go_up = !take_up;
        let candidate = if take_up { frame.next_up } else { frame.next_down };

        let i = frame.level;
        let dist = r(i, i) * (candidate as f64 - frame.center);
        let cost = frame.used_sq + dist * dist;
        ops += 1;
        if let Some(budget) = ops_budget {
            if ops > budget {
                return Err(Error::EnumerationTooLarge {
                    estimate: ops as u128,
                    limit: budget as u128,
                });
            }
        }
        if cost > radius_sq * (1.0 + TIE_TOL) {
            // The cost is a parabola in the coordinate: this side is done.
            if take_up {
                frame.up_dead = true;
            } else {
                frame.down_dead = true;
            }
            continue;
        }
        if take_up {
            frame.next_up += 1;
        } else {
            frame.next_down -= 1;
        }
        x[i] = candidate;
        if i == 0 {
            if x.iter().any(|&v| v != 0) && best.offer(cost, &x) {
                radius_sq = best.value;
            }
        } else {
            let next = open_frame(i - 1, cost, &x);
            stack.push(next);
        }
    }

    match best.x {
        Some(x) => Ok((x, best.value, ops)),
        None => Err(Error::SearchFailure),
    }
}

fn min_diagonal(q: &RealQuadForm) -> f64 {
    (0..q.dim).map(|j| q.entry(j, j)).fold(f64::INFINITY, f64::min)
}

/// Exact solution of `min_{0 ≠ a ∈ Z[i]^L} a M aᴴ` by sphere decoding the
/// real-embedded form. The initial radius is the zero-rate bound `1+ρ‖h‖²`,
/// clamped to the smallest diagonal entry (a unit vector always attains that
/// value, so the clamp never excludes the optimum).
pub fn sphere_min(m: &GramForm) -> Result<SearchResult> {
    sphere_min_with_budget(m, None)
}

pub fn sphere_min_with_budget(m: &GramForm, ops_budget: Option<u64>) -> Result<SearchResult> {
    let embedded = real_embedding(m);
    let cap = 1.0 + m.rho() * norm_sq(m.channel());
    let radius = cap.min(min_diagonal(&embedded) * (1.0 + 1e-9));
    let (x, value, ops) = sphere_min_real(&embedded, radius, ops_budget)?;
    let l = m.dim();
    let a: GaussVec = (0..l).map(|j| GaussInt::new(x[j], x[j + l])).collect();
    Ok(finish_result(m.channel(), m.rho(), a, value, ops))
}

/// Floating-point LLL (δ = 0.75) on the rows of `basis`, tracking the
/// unimodular transform `t` so reduced coordinates map back exactly.
fn lll_reduce_rows(basis: &mut [Vec<f64>], t: &mut [Vec<i64>], delta: f64) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let dim = basis[0].len();
    let gram_schmidt = |basis: &[Vec<f64>]| {
        let mut star: Vec<Vec<f64>> = basis.to_vec();
        let mut mu = vec![vec![0.0f64; n]; n];
        let mut norms = vec![0.0f64; n];
        for i in 0..n {
            for j in 0..i {
                let dot: f64 = basis[i].iter().zip(&star[j]).map(|(a, b)| a * b).sum();
                mu[i][j] = if norms[j] > 0.0 { dot / norms[j] } else { 0.0 };
                let coeff = mu[i][j];
                let star_j = star[j].clone();
                for (s, sj) in star[i].iter_mut().zip(&star_j) {
                    *s -= coeff * sj;
                }
            }
            norms[i] = star[i].iter().map(|v| v * v).sum();
        }
        (mu, norms)
    };

    let mut k = 1;
    let mut guard = 0u32;
    while k < n && guard < 10_000 {
        guard += 1;
        let (mu, _) = gram_schmidt(basis);
        // Size-reduce row k against earlier rows.
        let mut mu_k = mu[k].clone();
        for j in (0..k).rev() {
            let q = mu_k[j].round();
            if q != 0.0 {
                let qi = q as i64;
                for col in 0..dim {
                    let bj = basis[j][col];
                    basis[k][col] -= q * bj;
                }
                for col in 0..dim {
                    let tj = t[j][col];
                    t[k][col] -= qi * tj;
                }
                for jj in 0..=j {
                    mu_k[jj] -= q * mu[j][jj];
                }
            }
        }
        let (mu, norms) = gram_schmidt(basis);
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            t.swap(k, k - 1);
            k = k.max(2) - 1;
        }
    }
}

fn lll_reduced_system(m: &GramForm) -> Result<(RealQuadForm, Vec<Vec<i64>>, f64)> {
    let embedded = real_embedding(m);
    let n = embedded.dim;
    let lower = cholesky(&embedded)?;
    let mut basis: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| lower[i * n + j]).collect()).collect();
    let mut t: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    lll_reduce_rows(&mut basis, &mut t, 0.75);

    // Gram of the reduced basis, rebuilt exactly from the transform: T M̃ Tᵀ.
    let mut reduced = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for u in 0..n {
                let mut row = 0.0;
                for v in 0..n {
                    row += embedded.entry(u, v) * t[j][v] as f64;
                }
                acc += t[i][u] as f64 * row;
            }
            reduced[i * n + j] = acc;
        }
    }
    let shortest_row_sq = basis
        .iter()
        .map(|row| row.iter().map(|v| v * v).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    Ok((RealQuadForm { dim: n, entries: reduced }, t, shortest_row_sq))
}

/// LLL-assisted exact search: reduce the real-embedded Cholesky basis, seed
/// the enumeration radius with the shortest reduced row, enumerate, and map
/// the reduced coordinates back through the unimodular transform. Returns
/// the same optimum as [`sphere_min`], usually after fewer nodes.
pub fn lll_assisted(m: &GramForm) -> Result<SearchResult> {
    lll_assisted_with_budget(m, None)
}

pub fn lll_assisted_with_budget(m: &GramForm, ops_budget: Option<u64>) -> Result<SearchResult> {
    let (reduced_form, t, shortest_row_sq) = lll_reduced_system(m)?;
    let n = reduced_form.dim;
    let radius = shortest_row_sq.min(min_diagonal(&reduced_form)) * (1.0 + 1e-9);
    let (x_red, value, ops) = sphere_min_real(&reduced_form, radius, ops_budget)?;

    // Back to standard coordinates: x = x_red · T.
    let mut x = vec![0i64; n];
    for (i, coeff) in x_red.iter().enumerate() {
        for (slot, tij) in x.iter_mut().zip(&t[i]) {
            *slot += coeff * tij;
        }
    }
    let l = m.dim();
    let a: GaussVec = (0..l).map(|j| GaussInt::new(x[j], x[j + l])).collect();
    Ok(finish_result(m.channel(), m.rho(), a, value, ops))
}

/// Squared length of the shortest LLL-reduced row; for two users this
/// already attains the exact minimum of the form.
pub fn lll_shortest_row_sq(m: &GramForm) -> Result<f64> {
    Ok(lll_reduced_system(m)?.2)
}

/// Best real-valued coefficients for the *optimally precoded* relay.
///
/// Under the optimal phases the loss term depends only on the coefficient
/// moduli, so for real-integer moduli the objective collapses to the plain
/// rate form of the modulus channel `η = (|h₁|, ..., |h_L|)`:
/// `m (I - c·ηηᵀ) mᵀ` over nonzero `m ∈ Z^L`. That `L`-dimensional form is
/// minimized exactly by sphere enumeration; taking componentwise absolute
/// values only tightens the alignment, so the result is optimal among all
/// real coefficient vectors.
pub fn pp_modulus_search(h: &[Cplx], rho: f64) -> Result<(GaussVec, f64, u64)> {
    if rho <= 0.0 || rho.is_nan() {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    let l = h.len();
    let eta: Vec<f64> = h.iter().map(|z| z.norm()).collect();
    let eta_sq: f64 = eta.iter().map(|v| v * v).sum();
    if eta_sq == 0.0 {
        return Err(Error::InvalidParameter("channel must be nonzero".into()));
    }
    let c = rho / (1.0 + rho * eta_sq);
    let mut entries = vec![0.0f64; l * l];
    for j in 0..l {
        for k in 0..l {
            entries[j * l + k] = f64::from(j == k) - c * eta[j] * eta[k];
        }
    }
    let form = RealQuadForm { dim: l, entries };
    let radius = min_diagonal(&form) * (1.0 + 1e-9);
    let (x, value, ops) = sphere_min_real(&form, radius, None)?;
    let a: GaussVec = x.iter().map(|&v| GaussInt::new(v.abs(), 0)).collect();
    Ok((a, value, ops))
}

/// Refinement of [`pp_modulus_search`] over complex-valued coefficients:
/// the optimally-precoded loss sees only the coefficient moduli, and every
/// coefficient vector is aligned with the modulus channel rotated by some
/// relative phases. Sweeping those `L-1` phases over a `[0, π/2)` grid
/// (`Z[i]` is 90°-symmetric) and solving the exact SVP of
/// `(|h₁|, |h₂|e^{iθ₂}, ...)` at each grid point covers every coefficient
/// vector whose aligned rotation falls near a grid point. Each winner is
/// scored by the exact optimally-precoded loss, so the result is always
/// achievable.
pub fn pp_phase_scan_search(
    h: &[Cplx],
    rho: f64,
    steps_per_dim: usize,
) -> Result<(GaussVec, u64)> {
    let l = h.len();
    if l < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: l });
    }
    if steps_per_dim == 0 {
        return Err(Error::InvalidParameter("phase scan needs at least one step".into()));
    }
    let grid_points = (steps_per_dim as u128).pow(l as u32 - 1);
    if grid_points > 2000 {
        return Err(Error::EnumerationTooLarge { estimate: grid_points, limit: 2000 });
    }
    let eta: Vec<f64> = h.iter().map(|z| z.norm()).collect();
    let h_sq: f64 = eta.iter().map(|e| e * e).sum();
    let step = std::f64::consts::FRAC_PI_2 / steps_per_dim as f64;

    let mut ops = 0u64;
    let mut best: Option<(GaussVec, f64)> = None;
    let mut counters = vec![0usize; l - 1];
    loop {
        let mut g = Vec::with_capacity(l);
        g.push(Cplx::new(eta[0], 0.0));
        for (dim, &k) in counters.iter().enumerate() {
            g.push(Cplx::from_polar(eta[dim + 1], k as f64 * step));
        }
        let m = gram_form(&g, rho)?;
        let found = lll_assisted(&m)?;
        ops += found.ops_count;
        let a_sq = gauss_norm_sq(&found.a) as f64;
        let aligned: f64 = eta
            .iter()
            .zip(&found.a)
            .map(|(e, al)| e * (al.norm_sq() as f64).sqrt())
            .sum();
        let loss = a_sq + rho * (h_sq * a_sq - aligned * aligned);
        if best.as_ref().is_none_or(|(_, incumbent)| loss < *incumbent) {
            best = Some((found.a, loss));
        }
        // Advance the mixed-radix phase counter.
        let mut dim = 0;
        loop {
            if dim == counters.len() {
                let (a, _) = best.expect("grid has at least one point");
                return Ok((a, ops));
            }
            counters[dim] += 1;
            if counters[dim] < steps_per_dim {
                break;
            }
            counters[dim] = 0;
            dim += 1;
        }
    }
}

/// Runs the configured searcher against an effective (already precoded)
/// channel.
pub fn run_searcher(h_eff: &[Cplx], rho: f64, cfg: &SearchConfig) -> Result<SearchResult> {
    let identity = Precoder::identity(h_eff.len());
    match cfg.searcher {
        SearcherKind::Qes => qes(h_eff, &identity, rho, cfg),
        SearcherKind::BruteForce => bruteforce(h_eff, &identity, rho),
        SearcherKind::Sphere => sphere_min_with_budget(&gram_form(h_eff, rho)?, cfg.ops_budget),
        SearcherKind::Lll => lll_assisted_with_budget(&gram_form(h_eff, rho)?, cfg.ops_budget),
    }
}
