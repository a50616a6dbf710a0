//! Monte Carlo experiment harnesses.
//!
//! Every trial draws from its own counter-based stream keyed by the seed,
//! an experiment tag, and the trial id (plus the SNR index where draws
//! differ per SNR point — the rate and DoF experiments deliberately reuse
//! one channel per trial across the whole SNR grid). Trials never share
//! state and aggregation runs in trial order after all workers finish, so
//! the same `(config, seed)` produces identical tables for any worker
//! count.

use crate::codec::{
    encode, equation_error, relay_decode, true_equation, LatticeCode, PowerNormalization,
};
use crate::field::{
    determinant, reduce_coeffs, solve, EquationSystem, Fp2, SolveOutcome,
};
use crate::lattice::{norm_sq, GaussVec};
use crate::precode::{apply_precoder, optimal_precoder, Precoder};
use crate::rate::{computation_rate, pp_rate_optimal_closed_form, RateReport};
use crate::rng::SubRng;
use crate::search::{run_searcher, SearchConfig, SearchResult, SearcherKind};
use crate::{Cplx, Error, Result};

const STREAM_RATE_CDF: u64 = 1;
const STREAM_ERROR_RATE: u64 = 2;
const STREAM_DOF: u64 = 3;
const STREAM_BENCH: u64 = 4;
const STREAM_RECOVER_CHANNEL: u64 = 5;
const STREAM_RECOVER_MESSAGE: u64 = 6;

/// Empirical CDF points reported by the rate experiment.
pub const PERCENTILES: [u32; 9] = [1, 5, 10, 25, 50, 75, 90, 95, 99];

/// Whether transmitters apply the optimal phase precoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precoding {
    None,
    Optimal,
}

impl Precoding {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Precoding::None),
            "optimal" => Ok(Precoding::Optimal),
            other => Err(Error::Config(format!(
                "unknown precoding '{other}' (expected none|optimal)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Precoding::None => "none",
            Precoding::Optimal => "optimal",
        }
    }
}

/// Searcher selection plus the QES grid knobs; `alpha_max` defaults to
/// `⌈√(1+ρ‖h‖²)⌉` per SNR point when unset.
#[derive(Debug, Clone)]
pub struct SearchSettings {
    pub kind: SearcherKind,
    pub alpha_max: Option<u32>,
    pub phase_step_deg: f64,
    pub ops_budget: Option<u64>,
}

impl SearchSettings {
    pub fn new(kind: SearcherKind) -> Self {
        SearchSettings { kind, alpha_max: None, phase_step_deg: 5.0, ops_budget: None }
    }

    pub fn config_for(&self, rho: f64, h_norm_sq: f64) -> SearchConfig {
        let mut cfg = SearchConfig::defaults(self.kind, rho, h_norm_sq);
        if let Some(amax) = self.alpha_max {
            cfg.alpha_max = amax;
        }
        cfg.phase_step_deg = self.phase_step_deg;
        cfg.ops_budget = self.ops_budget;
        cfg
    }

    fn with_kind(&self, kind: SearcherKind) -> SearchSettings {
        SearchSettings { kind, ..self.clone() }
    }
}

/// Lattice-code parameters for the error-rate experiment.
#[derive(Debug, Clone)]
pub struct CodeParams {
    pub prime: i64,
    pub block_n: usize,
    pub normalization: PowerNormalization,
}

/// Full experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub users: usize,
    pub snr_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub search: SearchSettings,
    pub precoding: Precoding,
    pub code: Option<CodeParams>,
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.users == 0 {
            return Err(Error::Config("users must be >= 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("need at least one SNR point".into()));
        }
        Ok(())
    }
}

pub fn snr_db_to_rho(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// I.i.d. circularly-symmetric complex Gaussian channel, unit variance per
/// entry.
pub fn draw_channel(l: usize, rng: &mut SubRng) -> Vec<Cplx> {
    (0..l).map(|_| rng.next_cn01()).collect()
}

/// Runs `f` for every trial id, farming contiguous chunks out to `workers`
/// threads. Results come back indexed by trial id, so the output is
/// independent of the worker count.
pub fn parallel_trials<T, F>(trials: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let workers = workers.max(1).min(trials.max(1) as usize);
    if workers == 1 {
        return (0..trials).map(f).collect();
    }
    let mut slots: Vec<Option<T>> = (0..trials).map(|_| None).collect();
    let chunk = trials.div_ceil(workers as u64) as usize;
    std::thread::scope(|scope| {
        for (w, slice) in slots.chunks_mut(chunk).enumerate() {
            let f = &f;
            let base = (w * chunk) as u64;
            scope.spawn(move || {
                for (off, slot) in slice.iter_mut().enumerate() {
                    *slot = Some(f(base + off as u64));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("all trials filled")).collect()
}

/// One (a, precoder) choice for the precoded system.
#[derive(Debug, Clone)]
pub struct PrecodedChoice {
    pub a: GaussVec,
    pub precoder: Precoder,
    pub report: RateReport,
    pub ops_count: u64,
}

/// Best coefficients for the phase-precoded relay.
///
/// The optimal pair (a, Φ) is circular: the best a minimizes the Φ-rotated
/// form, and the best Φ aligns the channel with a. Starting from Φ = I the
/// search alternates — coefficients for the current precoder, then the
/// optimal precoder for those coefficients — for at most four rounds or
/// until the optimal-precoder rate stops improving by 1e-9. The exact
/// modulus-channel minimizer ([`crate::search::pp_modulus_search`]) enters
/// as one more candidate: alternation alone tends to stall near the plain
/// coefficients, while the optimally-precoded objective only sees moduli.
pub fn precoded_search(
    h: &[Cplx],
    rho: f64,
    settings: &SearchSettings,
) -> Result<(PrecodedChoice, SearchResult)> {
    let h_sq = norm_sq(h);
    let mut precoder = Precoder::identity(h.len());
    let mut ops_total = 0u64;
    let mut plain: Option<SearchResult> = None;
    let mut best: Option<(GaussVec, RateReport)> = None;
    for round in 0..4 {
        let h_eff = apply_precoder(h, &precoder)?;
        let found = match run_searcher(&h_eff, rho, &settings.config_for(rho, h_sq)) {
            Ok(f) => f,
            // A dead end after the first round just stops the alternation;
            // the incumbent candidate stands.
            Err(Error::SearchFailure) | Err(Error::EnumerationTooLarge { .. })
                if round > 0 =>
            {
                break
            }
            Err(e) => return Err(e),
        };
        ops_total += found.ops_count;
        let report = pp_rate_optimal_closed_form(h, &found.a, rho)?;
        let improved = match &best {
            Some((_, incumbent)) => report.rate_bits > incumbent.rate_bits + 1e-9,
            None => true,
        };
        if round == 0 {
            plain = Some(found.clone());
        }
        if !improved {
            break;
        }
        precoder = optimal_precoder(h, &found.a)?.0;
        best = Some((found.a, report));
    }
    let mut offer = |cand: GaussVec, ops: u64, best: &mut Option<(GaussVec, RateReport)>| -> Result<()> {
        ops_total += ops;
        let report = pp_rate_optimal_closed_form(h, &cand, rho)?;
        if best.as_ref().is_none_or(|(_, inc)| report.rate_bits > inc.rate_bits) {
            *best = Some((cand, report));
        }
        Ok(())
    };
    let (mod_a, _, mod_ops) = crate::search::pp_modulus_search(h, rho)?;
    offer(mod_a, mod_ops, &mut best)?;
    // Relative-phase sweep covers complex-valued moduli patterns too; the
    // grid is dense for two users and coarse (but still a pure candidate
    // improver) up to four.
    let scan_steps = match h.len() {
        2 => Some(90),
        3 => Some(24),
        4 => Some(10),
        _ => None,
    };
    if let Some(steps) = scan_steps {
        let (scan_a, scan_ops) = crate::search::pp_phase_scan_search(h, rho, steps)?;
        offer(scan_a, scan_ops, &mut best)?;
    }
    let (a, report) = best.expect("modulus route always yields a candidate");
    let precoder = optimal_precoder(h, &a)?.0;
    let choice = PrecodedChoice { a, precoder, report, ops_count: ops_total };
    Ok((choice, plain.expect("first round always runs")))
}

/// One rate-experiment trial: the plain-search choice and the precoded one.
///
/// Records are self-validating: the stored rates are exactly what the rate
/// engine returns for the stored `(h, a)`, and the precoded rate dominates
/// the plain rate (checked here, unconditionally).
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub h: Vec<Cplx>,
    pub a_plain: GaussVec,
    pub alpha: Cplx,
    pub rate_bits: f64,
    pub a_pp: GaussVec,
    pub pp_rate_bits: f64,
    pub noise_energy: f64,
    pub equation_error: Option<bool>,
    pub ops_count: u64,
}

fn rate_trial(
    cfg: &ExperimentConfig,
    snr_idx: usize,
    trial: u64,
) -> Result<TrialRecord> {
    let rho = snr_db_to_rho(cfg.snr_db[snr_idx]);
    let mut rng = SubRng::from_parts(cfg.seed, &[STREAM_RATE_CDF, trial]);
    let h = draw_channel(cfg.users, &mut rng);
    let (pp, plain) = match cfg.precoding {
        Precoding::Optimal => {
            let (choice, plain) = precoded_search(&h, rho, &cfg.search)?;
            (Some(choice), plain)
        }
        Precoding::None => {
            let h_sq = norm_sq(&h);
            let plain = run_searcher(&h, rho, &cfg.search.config_for(rho, h_sq))?;
            (None, plain)
        }
    };
    let plain_report = computation_rate(&h, &plain.a, rho)?;
    let (a_pp, pp_rate, pp_ops) = match pp {
        Some(choice) => (choice.a, choice.report.rate_bits, choice.ops_count),
        None => (plain.a.clone(), plain_report.rate_bits, 0),
    };
    let record = TrialRecord {
        trial_id: trial,
        h,
        a_plain: plain.a,
        alpha: plain.alpha,
        rate_bits: plain_report.rate_bits,
        a_pp,
        pp_rate_bits: pp_rate,
        noise_energy: plain.noise_energy,
        equation_error: None,
        ops_count: plain.ops_count + pp_ops,
    };
    assert!(
        record.pp_rate_bits >= record.rate_bits - 1e-9,
        "precoded rate {} below plain rate {} (trial {})",
        record.pp_rate_bits,
        record.rate_bits,
        record.trial_id
    );
    Ok(record)
}

/// A rate-CDF table row.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCdfRow {
    pub snr_db: f64,
    pub percentile: u32,
    pub rate_plain: f64,
    pub rate_pp: f64,
}

#[derive(Debug, Clone)]
pub struct RateCdfOutput {
    pub rows: Vec<RateCdfRow>,
    pub search_failures: u64,
}

fn percentile_of(sorted: &[f64], pct: u32) -> f64 {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len();
    let idx = ((pct as f64 / 100.0 * n as f64).ceil() as usize).clamp(1, n) - 1;
    sorted[idx]
}

/// Rate CDFs of the best equation with and without phase precoding.
pub fn rate_cdf_experiment(cfg: &ExperimentConfig) -> Result<RateCdfOutput> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut failures = 0u64;
    for snr_idx in 0..cfg.snr_db.len() {
        let results = parallel_trials(cfg.trials, cfg.workers, |trial| {
            rate_trial(cfg, snr_idx, trial)
        });
        let mut plain = Vec::new();
        let mut pp = Vec::new();
        for r in results {
            match r {
                Ok(rec) => {
                    plain.push(rec.rate_bits);
                    pp.push(rec.pp_rate_bits);
                }
                Err(Error::SearchFailure) | Err(Error::EnumerationTooLarge { .. }) => {
                    failures += 1;
                }
                Err(e) => return Err(e),
            }
        }
        if plain.is_empty() {
            return Err(Error::Config(format!(
                "every trial failed at {} dB",
                cfg.snr_db[snr_idx]
            )));
        }
        plain.sort_by(|a, b| a.partial_cmp(b).expect("rates are finite"));
        pp.sort_by(|a, b| a.partial_cmp(b).expect("rates are finite"));
        for &pct in &PERCENTILES {
            rows.push(RateCdfRow {
                snr_db: cfg.snr_db[snr_idx],
                percentile: pct,
                rate_plain: percentile_of(&plain, pct),
                rate_pp: percentile_of(&pp, pct),
            });
        }
    }
    Ok(RateCdfOutput { rows, search_failures: failures })
}

/// An equation-error-rate table row, with a 95% binomial interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRateRow {
    pub snr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub error_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

fn binomial_ci(errors: u64, trials: u64) -> (f64, f64) {
    let p = errors as f64 / trials as f64;
    let half = 1.96 * (p * (1.0 - p) / trials as f64).sqrt();
    ((p - half).max(0.0), (p + half).min(1.0))
}

fn error_trial(
    cfg: &ExperimentConfig,
    code_params: &CodeParams,
    snr_idx: usize,
    trial: u64,
) -> Result<Option<bool>> {
    let rho = snr_db_to_rho(cfg.snr_db[snr_idx]);
    let mut rng = SubRng::from_parts(cfg.seed, &[STREAM_ERROR_RATE, snr_idx as u64, trial]);
    let h = draw_channel(cfg.users, &mut rng);
    let code = LatticeCode::new(code_params.block_n, code_params.prime, rho, code_params.normalization)?;
    // All random draws happen before the precoding branch so that plain and
    // precoded runs of the same seed see identical channels, messages, noise.
    let messages: Vec<Vec<Fp2>> = (0..cfg.users)
        .map(|_| {
            (0..code.n)
                .map(|_| {
                    Fp2::reduce(
                        rng.next_below(code.p as u64) as i64,
                        rng.next_below(code.p as u64) as i64,
                        code.p,
                    )
                })
                .collect()
        })
        .collect();
    let noise: Vec<Cplx> = (0..code.n).map(|_| rng.next_cn01()).collect();

    let (a, h_eff) = match cfg.precoding {
        Precoding::None => {
            let found = match run_searcher(&h, rho, &cfg.search.config_for(rho, norm_sq(&h))) {
                Ok(r) => r,
                Err(Error::SearchFailure) | Err(Error::EnumerationTooLarge { .. }) => {
                    return Ok(None)
                }
                Err(e) => return Err(e),
            };
            (found.a, h.clone())
        }
        Precoding::Optimal => {
            let (choice, _) = match precoded_search(&h, rho, &cfg.search) {
                Ok(r) => r,
                Err(Error::SearchFailure) | Err(Error::EnumerationTooLarge { .. }) => {
                    return Ok(None)
                }
                Err(e) => return Err(e),
            };
            let h_eff = apply_precoder(&h, &choice.precoder)?;
            (choice.a, h_eff)
        }
    };

    let x_list: Vec<Vec<Cplx>> = messages
        .iter()
        .map(|w| encode(w, &code))
        .collect::<Result<_>>()?;
    let mut y = noise;
    for (x, hl) in x_list.iter().zip(&h_eff) {
        for (slot, sym) in y.iter_mut().zip(x) {
            *slot += hl * sym;
        }
    }
    let alpha = crate::rate::mmse_alpha(&h_eff, &a, rho)?;
    let estimate = relay_decode(&y, alpha, &a, &code)?;
    let truth = true_equation(&x_list, &a, &code)?;
    Ok(Some(equation_error(&estimate, &truth)?))
}

/// Equation-error rate of the relay detector versus SNR.
pub fn error_rate_experiment(cfg: &ExperimentConfig) -> Result<Vec<ErrorRateRow>> {
    cfg.validate()?;
    let code_params = cfg
        .code
        .as_ref()
        .ok_or_else(|| Error::Config("error-rate experiment needs code parameters".into()))?;
    let mut rows = Vec::new();
    for snr_idx in 0..cfg.snr_db.len() {
        let results = parallel_trials(cfg.trials, cfg.workers, |trial| {
            error_trial(cfg, code_params, snr_idx, trial)
        });
        let mut errors = 0u64;
        let mut counted = 0u64;
        for r in results {
            match r? {
                Some(true) => {
                    errors += 1;
                    counted += 1;
                }
                Some(false) => counted += 1,
                None => {}
            }
        }
        if counted == 0 {
            return Err(Error::Config(format!(
                "every trial failed at {} dB",
                cfg.snr_db[snr_idx]
            )));
        }
        let (lo, hi) = binomial_ci(errors, counted);
        rows.push(ErrorRateRow {
            snr_db: cfg.snr_db[snr_idx],
            trials: counted,
            errors,
            error_rate: errors as f64 / counted as f64,
            ci_low: lo,
            ci_high: hi,
        });
    }
    Ok(rows)
}

/// Per-channel high-SNR slopes of the best-equation rate.
#[derive(Debug, Clone)]
pub struct DofSlopeOutput {
    pub users: usize,
    pub trials: u64,
    pub mean_slope_plain: f64,
    pub mean_slope_pp: f64,
    pub median_slope_plain: f64,
    pub median_slope_pp: f64,
    /// (plain, precoded) slope per channel draw.
    pub per_channel: Vec<(f64, f64)>,
}

/// Least-squares slope of `rate` against `log₂ρ`.
fn ls_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx: f64 = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my: f64 = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn median(sorted: &mut [f64]) -> f64 {
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Empirical degrees-of-freedom proxy: per channel draw, fit the rate-vs-
/// `log₂ρ` slope over the top half of the SNR grid for the plain and the
/// precoded sup-rate, then aggregate.
pub fn dof_slope_experiment(cfg: &ExperimentConfig) -> Result<DofSlopeOutput> {
    cfg.validate()?;
    if cfg.snr_db.len() < 3 {
        return Err(Error::Config("slope fit needs at least 3 SNR points".into()));
    }
    let span = cfg.snr_db.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - cfg.snr_db.iter().cloned().fold(f64::INFINITY, f64::min);
    if span < 30.0 {
        return Err(Error::Config(format!(
            "SNR grid must span at least 30 dB, got {span:.1}"
        )));
    }
    let mut snr_sorted = cfg.snr_db.clone();
    snr_sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    // Low-SNR points bias the fit; use the top half of the grid.
    let fit_from = snr_sorted.len() / 2;
    let fit_snrs: Vec<f64> = snr_sorted[fit_from..].to_vec();

    let results = parallel_trials(cfg.trials, cfg.workers, |trial| -> Result<(f64, f64)> {
        let mut rng = SubRng::from_parts(cfg.seed, &[STREAM_DOF, trial]);
        let h = draw_channel(cfg.users, &mut rng);
        let mut plain_pts = Vec::new();
        let mut pp_pts = Vec::new();
        for &db in &fit_snrs {
            let rho = snr_db_to_rho(db);
            let (choice, plain) = precoded_search(&h, rho, &cfg.search)?;
            let plain_rate = computation_rate(&h, &plain.a, rho)?.rate_bits;
            plain_pts.push((rho.log2(), plain_rate));
            pp_pts.push((rho.log2(), choice.report.rate_bits));
        }
        Ok((ls_slope(&plain_pts), ls_slope(&pp_pts)))
    });
    let mut per_channel = Vec::with_capacity(cfg.trials as usize);
    for r in results {
        per_channel.push(r?);
    }
    let n = per_channel.len() as f64;
    let mean_plain = per_channel.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_pp = per_channel.iter().map(|p| p.1).sum::<f64>() / n;
    let mut plain_all: Vec<f64> = per_channel.iter().map(|p| p.0).collect();
    let mut pp_all: Vec<f64> = per_channel.iter().map(|p| p.1).collect();
    Ok(DofSlopeOutput {
        users: cfg.users,
        trials: cfg.trials,
        mean_slope_plain: mean_plain,
        mean_slope_pp: mean_pp,
        median_slope_plain: median(&mut plain_all),
        median_slope_pp: median(&mut pp_all),
        per_channel,
    })
}

/// A searcher-benchmark table row.
#[derive(Debug, Clone)]
pub struct SearchBenchRow {
    pub searcher: SearcherKind,
    pub users: usize,
    pub snr_db: f64,
    pub trials: u64,
    pub failures: u64,
    pub mean_ops_count: f64,
    pub mean_rate_bits: f64,
    pub mean_gap_bits: f64,
}

/// Benchmarks every searcher on shared channel draws; the gap column is the
/// rate shortfall against the exact sphere optimum.
pub fn search_bench_experiment(cfg: &ExperimentConfig) -> Result<Vec<SearchBenchRow>> {
    cfg.validate()?;
    let kinds = [
        SearcherKind::Qes,
        SearcherKind::BruteForce,
        SearcherKind::Sphere,
        SearcherKind::Lll,
    ];
    let mut rows = Vec::new();
    for (snr_idx, &db) in cfg.snr_db.iter().enumerate() {
        let rho = snr_db_to_rho(db);
        type TrialOut = Vec<Option<(u64, f64, f64)>>;
        let results: Vec<Result<TrialOut>> =
            parallel_trials(cfg.trials, cfg.workers, |trial| -> Result<TrialOut> {
                let mut rng =
                    SubRng::from_parts(cfg.seed, &[STREAM_BENCH, snr_idx as u64, trial]);
                let h = draw_channel(cfg.users, &mut rng);
                let h_sq = norm_sq(&h);
                let exact = run_searcher(
                    &h,
                    rho,
                    &cfg.search.with_kind(SearcherKind::Sphere).config_for(rho, h_sq),
                )?;
                let mut per_kind = Vec::with_capacity(kinds.len());
                for kind in kinds {
                    let outcome = run_searcher(
                        &h,
                        rho,
                        &cfg.search.with_kind(kind).config_for(rho, h_sq),
                    );
                    match outcome {
                        Ok(r) => per_kind.push(Some((
                            r.ops_count,
                            r.rate_bits,
                            exact.rate_bits - r.rate_bits,
                        ))),
                        Err(Error::SearchFailure) | Err(Error::EnumerationTooLarge { .. }) => {
                            per_kind.push(None)
                        }
                        Err(e) => return Err(e),
                    }
                }
                Ok(per_kind)
            });
        let mut collected: Vec<TrialOut> = Vec::with_capacity(cfg.trials as usize);
        for r in results {
            collected.push(r?);
        }
        for (k, kind) in kinds.into_iter().enumerate() {
            let mut ops_sum = 0.0;
            let mut rate_sum = 0.0;
            let mut gap_sum = 0.0;
            let mut n = 0u64;
            let mut failures = 0u64;
            for trial_out in &collected {
                match &trial_out[k] {
                    Some((ops, rate, gap)) => {
                        ops_sum += *ops as f64;
                        rate_sum += rate;
                        gap_sum += gap;
                        n += 1;
                    }
                    None => failures += 1,
                }
            }
            rows.push(SearchBenchRow {
                searcher: kind,
                users: cfg.users,
                snr_db: db,
                trials: n,
                failures,
                mean_ops_count: if n > 0 { ops_sum / n as f64 } else { f64::NAN },
                mean_rate_bits: if n > 0 { rate_sum / n as f64 } else { f64::NAN },
                mean_gap_bits: if n > 0 { gap_sum / n as f64 } else { f64::NAN },
            });
        }
    }
    Ok(rows)
}

/// Destination-side recovery demo: one equation per simulated relay, reduced
/// to `F_p[i]`, then solved for the original messages.
#[derive(Debug, Clone)]
pub struct RecoverDemo {
    pub prime: i64,
    pub coeff_matrix: Vec<Vec<Fp2>>,
    pub det: Fp2,
    pub messages: Vec<Vec<Fp2>>,
    pub outcome: SolveOutcome,
    pub recovered_ok: Option<bool>,
}

pub fn recover_demo(cfg: &ExperimentConfig) -> Result<RecoverDemo> {
    cfg.validate()?;
    let code_params = cfg
        .code
        .as_ref()
        .ok_or_else(|| Error::Config("recover demo needs code parameters".into()))?;
    let p = code_params.prime;
    crate::field::validate_field_prime(p)?;
    let rho = snr_db_to_rho(cfg.snr_db[0]);
    let l = cfg.users;

    // One relay per unknown: each draws its own channel and picks its own
    // equation coefficients.
    let mut coeff_matrix = Vec::with_capacity(l);
    for relay in 0..l {
        let mut rng = SubRng::from_parts(cfg.seed, &[STREAM_RECOVER_CHANNEL, relay as u64]);
        let h = draw_channel(l, &mut rng);
        let a = match cfg.precoding {
            Precoding::None => {
                run_searcher(&h, rho, &cfg.search.config_for(rho, norm_sq(&h)))?.a
            }
            Precoding::Optimal => precoded_search(&h, rho, &cfg.search)?.0.a,
        };
        coeff_matrix.push(reduce_coeffs(&a, p)?);
    }

    let messages: Vec<Vec<Fp2>> = (0..l)
        .map(|user| {
            let mut rng =
                SubRng::from_parts(cfg.seed, &[STREAM_RECOVER_MESSAGE, user as u64]);
            (0..code_params.block_n)
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

    // Noiseless decoded equations: rhs_m = Σ_l A[m][l]·w_l over the field.
    let rhs: Vec<Vec<Fp2>> = (0..l)
        .map(|m| {
            (0..code_params.block_n)
                .map(|k| {
                    let mut acc = Fp2::zero(p);
                    for (user, w) in messages.iter().enumerate() {
                        acc = acc.add(coeff_matrix[m][user].mul(w[k]));
                    }
                    acc
                })
                .collect()
        })
        .collect();

    let det = determinant(&coeff_matrix, p);
    let system = EquationSystem::new(coeff_matrix.clone(), rhs, p)?;
    let outcome = solve(&system);
    let recovered_ok = match &outcome {
        SolveOutcome::Solved(w) => Some(*w == messages),
        SolveOutcome::Singular => None,
    };
    Ok(RecoverDemo { prime: p, coeff_matrix, det, messages, outcome, recovered_ok })
}
