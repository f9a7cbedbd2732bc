//! Symbol-level simulation of the two-slot MARC protocol.
//!
//! Slot 1: both sources transmit at once; every relay and the destination
//! see the superposition. Slot 2: only the selected relay transmits, either
//! the normalised received signal (ANC) or the modulo-M sum of the symbols
//! it decoded (DF-NC). The destination detects the symbol pair by joint ML
//! over all `M^2` hypotheses with full CSI.
//!
//! Random streams: trial `t` draws from ChaCha8 stream `t / BATCH_SIZE`
//! keyed by the master seed, so results do not depend on how batches are
//! scheduled across workers. Early exit is evaluated only at round
//! boundaries of [`ROUND_BATCHES`] batches.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{
    complex_gaussian, compute_rate_params, relay_snrs, sample_channels, select_best_relay, ConfigError, LinkGains,
    ModOrder, RateParams, Scheme, SystemConfig,
};
use crate::stats::{binomial_se, wilson_halfwidth};

/// Trials per random stream.
pub const BATCH_SIZE: u64 = 1024;
/// Batches evaluated between early-exit checks.
pub const ROUND_BATCHES: u64 = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("symbol index {index} out of range for M = {m}")]
    SymbolIndex { index: usize, m: u32 },
    #[error("trial count must be >= 1")]
    NoTrials,
    #[error("gamma_th must be >= 0, got {0}")]
    NegativeThreshold(f64),
    #[error("SNR {0} dB does not map to a valid configuration: {1}")]
    Config(f64, ConfigError),
}

/// Unit-energy MPSK point `e^{i 2 pi index / M}`.
pub fn modulate(index: usize, mod_order: ModOrder) -> Result<Complex64, SimError> {
    let m = mod_order.size();
    if index >= m {
        return Err(SimError::SymbolIndex {
            index,
            m: mod_order.get(),
        });
    }
    Ok(psk_point(index, m))
}

fn psk_point(index: usize, m: usize) -> Complex64 {
    // exact values on the axes keep BPSK/QPSK free of 1e-16 residues
    match (4 * index).checked_rem(m) {
        Some(0) => [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ][4 * index / m],
        _ => Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * index as f64 / m as f64),
    }
}

/// Outcome of one protocol round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialResult {
    pub s1_error: bool,
    pub s2_error: bool,
    pub selected_relay: usize,
    /// `min(gamma_S1, gamma_S2)` at the selected relay.
    pub best_snr: f64,
}

/// Precomputed per-configuration state for running trials.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: SystemConfig,
    rates: RateParams,
    points: Vec<Complex64>,
    sqrt_ps: f64,
    sqrt_pr: f64,
    beta: f64,
}

impl Simulator {
    pub fn new(config: &SystemConfig) -> Self {
        let m = config.mod_order().size();
        Simulator {
            config: config.clone(),
            rates: compute_rate_params(config),
            points: (0..m).map(|i| psk_point(i, m)).collect(),
            sqrt_ps: config.p_source().sqrt(),
            sqrt_pr: config.p_relay().sqrt(),
            beta: config.anc_beta(),
        }
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn rates(&self) -> &RateParams {
        &self.rates
    }

    /// Selected relay and its bottleneck SNR.
    pub fn select(&self, gains: &LinkGains) -> (usize, f64) {
        let (s1, s2) = relay_snrs(&self.config, &self.rates, gains);
        let j = select_best_relay(&s1, &s2).expect("gains hold at least one relay");
        (j, s1[j].min(s2[j]))
    }

    pub fn run_trial<R: Rng + ?Sized>(&self, gains: &LinkGains, rng: &mut R) -> TrialResult {
        match self.config.scheme() {
            Scheme::Anc => self.run_anc_trial(gains, rng),
            Scheme::DfNc => self.run_df_trial(gains, rng),
        }
    }

    fn draw_symbols<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        let m = self.points.len();
        (rng.random_range(0..m), rng.random_range(0..m))
    }

    fn superpose(&self, a: Complex64, b: Complex64, i: usize, j: usize) -> Complex64 {
        (a * self.points[i] + b * self.points[j]) * self.sqrt_ps
    }

    /// Index pair minimising `metric`, first in (i, j) order on ties.
    fn argmin_pair(&self, mut metric: impl FnMut(usize, usize) -> f64) -> (usize, usize) {
        let m = self.points.len();
        let mut best = (0, 0);
        let mut best_val = f64::INFINITY;
        for i in 0..m {
            for j in 0..m {
                let v = metric(i, j);
                if v < best_val {
                    best_val = v;
                    best = (i, j);
                }
            }
        }
        best
    }

    pub fn run_anc_trial<R: Rng + ?Sized>(&self, gains: &LinkGains, rng: &mut R) -> TrialResult {
        let n0 = self.config.noise_psd();
        let (relay, best_snr) = self.select(gains);
        let (i1, i2) = self.draw_symbols(rng);
        let g1 = gains.h_s1_r[relay];
        let g2 = gains.h_s2_r[relay];
        let g3 = gains.h_r_d[relay];
        let y_relay = self.superpose(g1, g2, i1, i2) + complex_gaussian(rng, n0);
        let y1 = self.superpose(gains.h_s1_d, gains.h_s2_d, i1, i2) + complex_gaussian(rng, n0);
        let relay_gain = g3 * (self.sqrt_pr / self.beta);
        let y2 = relay_gain * y_relay + complex_gaussian(rng, n0);
        // forwarded relay noise adds to the destination noise in slot 2
        let v2 = relay_gain.norm_sqr() * n0 + n0;
        let (d1, d2) = self.argmin_pair(|i, j| {
            (y1 - self.superpose(gains.h_s1_d, gains.h_s2_d, i, j)).norm_sqr() / n0
                + (y2 - relay_gain * self.superpose(g1, g2, i, j)).norm_sqr() / v2
        });
        TrialResult {
            s1_error: d1 != i1,
            s2_error: d2 != i2,
            selected_relay: relay,
            best_snr,
        }
    }

    pub fn run_df_trial<R: Rng + ?Sized>(&self, gains: &LinkGains, rng: &mut R) -> TrialResult {
        let n0 = self.config.noise_psd();
        let m = self.points.len();
        let (relay, best_snr) = self.select(gains);
        let (i1, i2) = self.draw_symbols(rng);
        let g1 = gains.h_s1_r[relay];
        let g2 = gains.h_s2_r[relay];
        let g3 = gains.h_r_d[relay];
        let y_relay = self.superpose(g1, g2, i1, i2) + complex_gaussian(rng, n0);
        let y1 = self.superpose(gains.h_s1_d, gains.h_s2_d, i1, i2) + complex_gaussian(rng, n0);
        let (r1, r2) = self.argmin_pair(|i, j| (y_relay - self.superpose(g1, g2, i, j)).norm_sqr());
        let relay_tx = g3 * self.sqrt_pr;
        let y2 = relay_tx * self.points[(r1 + r2) % m] + complex_gaussian(rng, n0);
        let (d1, d2) = self.argmin_pair(|i, j| {
            (y1 - self.superpose(gains.h_s1_d, gains.h_s2_d, i, j)).norm_sqr()
                + (y2 - relay_tx * self.points[(i + j) % m]).norm_sqr()
        });
        TrialResult {
            s1_error: d1 != i1,
            s2_error: d2 != i2,
            selected_relay: relay,
            best_snr,
        }
    }
}

/// Random stream for batch `batch` under `seed`.
pub fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

/// When to stop accumulating trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub max_trials: u64,
    /// Stop early once each source has this many errors...
    pub target_errors: Option<u64>,
    /// ...and at least this many trials have run.
    pub min_trials: u64,
}

impl StopRule {
    pub const DEFAULT_TARGET_ERRORS: u64 = 400;
    pub const DEFAULT_MIN_TRIALS: u64 = 10_000;

    pub fn fixed(trials: u64) -> Self {
        StopRule {
            max_trials: trials,
            target_errors: None,
            min_trials: trials,
        }
    }

    pub fn early_exit(max_trials: u64) -> Self {
        StopRule {
            max_trials,
            target_errors: Some(Self::DEFAULT_TARGET_ERRORS),
            min_trials: Self::DEFAULT_MIN_TRIALS,
        }
    }
}

/// Monte Carlo SER point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerEstimate {
    pub errors: u64,
    pub trials: u64,
    pub ser: f64,
    /// 95% confidence half-width.
    pub ci_halfwidth: f64,
}

impl SerEstimate {
    pub fn from_counts(errors: u64, trials: u64) -> Self {
        SerEstimate {
            errors,
            trials,
            ser: if trials == 0 {
                0.0
            } else {
                errors as f64 / trials as f64
            },
            ci_halfwidth: wilson_halfwidth(errors, trials),
        }
    }

    pub fn standard_error(&self) -> f64 {
        binomial_se(self.ser, self.trials)
    }
}

/// Per-source SER estimates from one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerPair {
    pub source1: SerEstimate,
    pub source2: SerEstimate,
    /// Trials where both sources were in error.
    pub both_errors: u64,
    pub trials: u64,
}

impl SerPair {
    /// Average of the two sources. The interval uses the per-trial variance
    /// of `(e1 + e2) / 2`, so the correlation between sources is accounted for.
    pub fn pooled(&self) -> SerEstimate {
        let t = self.trials as f64;
        let (e1, e2) = (self.source1.errors as f64, self.source2.errors as f64);
        let mean = (e1 + e2) / (2.0 * t);
        let second = (e1 + e2 + 2.0 * self.both_errors as f64) / (4.0 * t);
        let var = (second - mean * mean).max(0.0);
        SerEstimate {
            errors: self.source1.errors + self.source2.errors,
            trials: 2 * self.trials,
            ser: mean,
            ci_halfwidth: crate::stats::Z95 * (var / t).sqrt(),
        }
    }

    /// Standard error of the pooled mean.
    pub fn pooled_standard_error(&self) -> f64 {
        self.pooled().ci_halfwidth / crate::stats::Z95
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    trials: u64,
    e1: u64,
    e2: u64,
    both: u64,
}

impl Tally {
    fn add(self, o: Tally) -> Tally {
        Tally {
            trials: self.trials + o.trials,
            e1: self.e1 + o.e1,
            e2: self.e2 + o.e2,
            both: self.both + o.both,
        }
    }
}

/// Config for an SNR point: `P_total = N0 10^(snr_db / 10)`, split by the
/// template's `kappa`.
pub fn config_at_snr(template: &SystemConfig, snr_db: f64) -> Result<SystemConfig, SimError> {
    template
        .with_total_power(template.noise_psd() * 10f64.powf(snr_db / 10.0))
        .map_err(|e| SimError::Config(snr_db, e))
}

/// Runs batches in rounds until `stop` is satisfied, folding with `trial`.
fn run_batches<F>(seed: u64, stop: StopRule, done: impl Fn(&Tally) -> bool, trial: F) -> Tally
where
    F: Fn(&mut ChaCha8Rng) -> (bool, bool) + Sync,
{
    let total_batches = stop.max_trials.div_ceil(BATCH_SIZE);
    let mut tally = Tally::default();
    let mut next = 0;
    while next < total_batches {
        let end = (next + ROUND_BATCHES).min(total_batches);
        let round: Vec<Tally> = (next..end)
            .into_par_iter()
            .map(|b| {
                let mut rng = batch_rng(seed, b);
                let n = BATCH_SIZE.min(stop.max_trials - b * BATCH_SIZE);
                let mut t = Tally::default();
                for _ in 0..n {
                    let (a, c) = trial(&mut rng);
                    t.trials += 1;
                    t.e1 += u64::from(a);
                    t.e2 += u64::from(c);
                    t.both += u64::from(a && c);
                }
                t
            })
            .collect();
        tally = round.into_iter().fold(tally, Tally::add);
        next = end;
        if tally.trials >= stop.min_trials && done(&tally) {
            break;
        }
    }
    tally
}

/// Monte Carlo SER of both sources at `snr_db`.
pub fn estimate_ser(template: &SystemConfig, snr_db: f64, stop: StopRule, seed: u64) -> Result<SerPair, SimError> {
    if stop.max_trials == 0 {
        return Err(SimError::NoTrials);
    }
    let config = config_at_snr(template, snr_db)?;
    let sim = Simulator::new(&config);
    let variances = config.variances();
    let n = config.num_relays();
    let target = stop.target_errors;
    let tally = run_batches(
        seed,
        stop,
        |t| target.is_some_and(|k| t.e1.min(t.e2) >= k),
        |rng| {
            let gains = sample_channels(n, &variances, rng);
            let r = sim.run_trial(&gains, rng);
            (r.s1_error, r.s2_error)
        },
    );
    Ok(SerPair {
        source1: SerEstimate::from_counts(tally.e1, tally.trials),
        source2: SerEstimate::from_counts(tally.e2, tally.trials),
        both_errors: tally.both,
        trials: tally.trials,
    })
}

/// Empirical outage probability of the selected relay's bottleneck SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub outages: u64,
    pub trials: u64,
    pub probability: f64,
}

pub fn estimate_outage(
    template: &SystemConfig,
    snr_db: f64,
    gamma_th: f64,
    trials: u64,
    seed: u64,
) -> Result<OutageEstimate, SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    if !(gamma_th >= 0.0) {
        return Err(SimError::NegativeThreshold(gamma_th));
    }
    let config = config_at_snr(template, snr_db)?;
    let sim = Simulator::new(&config);
    let variances = config.variances();
    let n = config.num_relays();
    let tally = run_batches(
        seed,
        StopRule::fixed(trials),
        |_| false,
        |rng| {
            let gains = sample_channels(n, &variances, rng);
            let (_, snr) = sim.select(&gains);
            (snr < gamma_th, false)
        },
    );
    Ok(OutageEstimate {
        outages: tally.e1,
        trials: tally.trials,
        probability: tally.e1 as f64 / tally.trials as f64,
    })
}

/// Bottleneck SNR of the selected relay for `count` independent channel
/// draws, in trial order.
pub fn sample_best_snrs(config: &SystemConfig, count: u64, seed: u64) -> Vec<f64> {
    let sim = Simulator::new(config);
    let variances = config.variances();
    let n = config.num_relays();
    let batches = count.div_ceil(BATCH_SIZE);
    (0..batches)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = batch_rng(seed, b);
            let len = BATCH_SIZE.min(count - b * BATCH_SIZE);
            let sim = &sim;
            (0..len)
                .map(|_| {
                    let gains = sample_channels(n, &variances, &mut rng);
                    sim.select(&gains).1
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Calibration mode that bypasses the relays: BPSK over one Rayleigh link
/// with mean SNR `10^(snr_db / 10)` and coherent detection.
pub fn estimate_direct_baseline(snr_db: f64, stop: StopRule, seed: u64) -> Result<SerEstimate, SimError> {
    if stop.max_trials == 0 {
        return Err(SimError::NoTrials);
    }
    let amp = 10f64.powf(snr_db / 20.0);
    let target = stop.target_errors;
    let tally = run_batches(
        seed,
        stop,
        |t| target.is_some_and(|k| t.e1 >= k),
        |rng| {
            let h = complex_gaussian(rng, 1.0);
            let x = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let y = h * (amp * x) + complex_gaussian(rng, 1.0);
            let decided = if (h.conj() * y).re >= 0.0 { 1.0 } else { -1.0 };
            (decided != x, false)
        },
    );
    Ok(SerEstimate::from_counts(tally.e1, tally.trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LinkVariances;

    fn config(scheme: Scheme, n: usize, m: u32) -> SystemConfig {
        SystemConfig::new(
            n,
            1.0,
            1.0,
            1.0,
            ModOrder::new(m).unwrap(),
            scheme,
            LinkVariances::default(),
        )
        .unwrap()
    }

    #[test]
    fn modulation_points() {
        assert_eq!(modulate(0, ModOrder::BPSK).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(modulate(1, ModOrder::BPSK).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(
            modulate(1, ModOrder::new(4).unwrap()).unwrap(),
            Complex64::new(0.0, 1.0)
        );
        for &m in &[2u32, 4, 8, 16] {
            let mo = ModOrder::new(m).unwrap();
            for i in 0..m as usize {
                assert!((modulate(i, mo).unwrap().norm() - 1.0).abs() < 1e-15);
            }
            assert!(matches!(modulate(m as usize, mo), Err(SimError::SymbolIndex { .. })));
        }
        let p = modulate(1, ModOrder::new(8).unwrap()).unwrap();
        assert!((p.arg() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn noiseless_trials_are_error_free() {
        for scheme in [Scheme::Anc, Scheme::DfNc] {
            for m in [2, 8] {
                let cfg = SystemConfig::new(
                    3,
                    1.0,
                    1.0,
                    1e-14,
                    ModOrder::new(m).unwrap(),
                    scheme,
                    LinkVariances::default(),
                )
                .unwrap();
                let sim = Simulator::new(&cfg);
                let mut rng = batch_rng(5, 0);
                for _ in 0..2000 {
                    let gains = sample_channels(3, &cfg.variances(), &mut rng);
                    let r = sim.run_trial(&gains, &mut rng);
                    assert!(!r.s1_error && !r.s2_error, "{scheme} M={m}");
                    assert!(r.selected_relay < 3);
                }
            }
        }
    }

    #[test]
    fn trial_reports_selected_relay_snr() {
        let cfg = config(Scheme::DfNc, 4, 2);
        let sim = Simulator::new(&cfg);
        let mut rng = batch_rng(1, 0);
        let gains = sample_channels(4, &cfg.variances(), &mut rng);
        let r = sim.run_trial(&gains, &mut rng);
        let (s1, s2) = relay_snrs(&cfg, sim.rates(), &gains);
        let mins: Vec<f64> = s1.iter().zip(&s2).map(|(a, b)| a.min(*b)).collect();
        assert_eq!(r.best_snr, mins[r.selected_relay]);
        assert!(mins.iter().all(|&v| v <= r.best_snr));
    }

    #[test]
    fn estimates_are_deterministic_and_thread_independent() {
        let cfg = config(Scheme::Anc, 2, 2);
        let a = estimate_ser(&cfg, 5.0, StopRule::fixed(20_000), 11).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| estimate_ser(&cfg, 5.0, StopRule::fixed(20_000), 11).unwrap());
        assert_eq!(a, b);
        let c = estimate_ser(&cfg, 5.0, StopRule::fixed(20_000), 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn early_exit_stops_on_round_boundary() {
        let cfg = config(Scheme::Anc, 1, 8);
        let r = estimate_ser(&cfg, 0.0, StopRule::early_exit(1_000_000), 3).unwrap();
        assert!(r.trials < 1_000_000);
        assert_eq!(r.trials % (BATCH_SIZE * ROUND_BATCHES), 0);
        assert!(r.source1.errors.min(r.source2.errors) >= 400);
    }

    #[test]
    fn single_trial_noiseless_estimate() {
        let cfg = config(Scheme::Anc, 1, 2);
        // 200 dB: noise is negligible against every hypothesis distance
        let r = estimate_ser(&cfg, 200.0, StopRule::fixed(1), 0).unwrap();
        assert_eq!(r.trials, 1);
        assert_eq!(r.source1.ser, 0.0);
        assert_eq!(r.source2.ser, 0.0);
    }

    #[test]
    fn zero_trials_rejected() {
        let cfg = config(Scheme::Anc, 1, 2);
        assert_eq!(estimate_ser(&cfg, 0.0, StopRule::fixed(0), 0), Err(SimError::NoTrials));
        assert_eq!(estimate_outage(&cfg, 0.0, 1.0, 0, 0), Err(SimError::NoTrials));
        assert!(matches!(
            estimate_outage(&cfg, 0.0, -1.0, 10, 0),
            Err(SimError::NegativeThreshold(_))
        ));
    }

    #[test]
    fn outage_at_zero_threshold() {
        let cfg = config(Scheme::DfNc, 2, 2);
        let r = estimate_outage(&cfg, 10.0, 0.0, 5000, 1).unwrap();
        assert_eq!(r.outages, 0);
    }

    #[test]
    fn pooled_estimate() {
        let p = SerPair {
            source1: SerEstimate::from_counts(10, 100),
            source2: SerEstimate::from_counts(20, 100),
            both_errors: 5,
            trials: 100,
        };
        let pooled = p.pooled();
        assert_eq!(pooled.errors, 30);
        assert!((pooled.ser - 0.15).abs() < 1e-15);
        // E[((e1+e2)/2)^2] = (10 + 20 + 10) / 400 = 0.1
        let var: f64 = 0.1 - 0.15 * 0.15;
        assert!((pooled.ci_halfwidth - crate::stats::Z95 * (var / 100.0).sqrt()).abs() < 1e-15);
    }
}
