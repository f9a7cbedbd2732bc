//! Scenario configuration, Rayleigh channel sampling, per-relay SNRs and
//! best-relay selection.
//!
//! Powers are linear (watts) and the noise spectral density `N0` scales
//! every receiver. Both sources transmit with the same power `P_s`, and the
//! source/relay power ratio is `kappa = P_s / P_r`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Configuration errors raised while building a [`SystemConfig`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("num_relays must be at least 1")]
    NoRelays,
    #[error("{name} must be finite and strictly positive, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("modulation order must be a power of two >= 2, got {0}")]
    BadModOrder(u32),
    #[error("p_source = {p_source} is inconsistent with kappa * p_relay = {expected}")]
    KappaMismatch { p_source: f64, expected: f64 },
}

/// Contract violations in the selection helpers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectionError {
    #[error("relay SNR lists must be non-empty")]
    Empty,
    #[error("relay SNR lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

/// Relaying scheme used in the second slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Analog network coding: the relay amplifies the superposed signal.
    Anc,
    /// Decode-and-forward with a modulo-M network-coded symbol.
    DfNc,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Anc => "anc",
            Scheme::DfNc => "df",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "anc" | "analog" | "analog-nc" => Ok(Scheme::Anc),
            "df" | "df-nc" | "df_nc" | "dfnc" => Ok(Scheme::DfNc),
            other => Err(format!("unknown scheme `{other}` (expected anc or df)")),
        }
    }
}

/// MPSK constellation size, always a power of two >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModOrder(u32);

impl ModOrder {
    pub const BPSK: ModOrder = ModOrder(2);

    pub fn new(m: u32) -> Result<Self, ConfigError> {
        if m >= 2 && m.is_power_of_two() {
            Ok(ModOrder(m))
        } else {
            Err(ConfigError::BadModOrder(m))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    /// The MPSK constant `sin^2(pi / M)`; equals 1 for BPSK.
    pub fn psk_constant(self) -> f64 {
        if self.0 == 2 {
            return 1.0;
        }
        let s = (std::f64::consts::PI / f64::from(self.0)).sin();
        s * s
    }
}

impl fmt::Display for ModOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Average power gains `E|h|^2` of the three link classes.
///
/// Zero is allowed here (a switched-off link); [`SystemConfig`] requires
/// strictly positive values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkVariances {
    pub source_relay: f64,
    pub relay_dest: f64,
    pub source_dest: f64,
}

impl Default for LinkVariances {
    fn default() -> Self {
        LinkVariances {
            source_relay: 1.0,
            relay_dest: 1.0,
            source_dest: 1.0,
        }
    }
}

/// All parameters of one MARC scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    num_relays: usize,
    p_source: f64,
    p_relay: f64,
    noise_psd: f64,
    kappa: f64,
    mod_order: ModOrder,
    scheme: Scheme,
    variances: LinkVariances,
}

fn positive(name: &'static str, value: f64) -> Result<f64, ConfigError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ConfigError::NotPositive { name, value })
    }
}

impl SystemConfig {
    /// Builds a config from explicit source and relay powers; `kappa` is
    /// derived as `p_source / p_relay`.
    pub fn new(
        num_relays: usize,
        p_source: f64,
        p_relay: f64,
        noise_psd: f64,
        mod_order: ModOrder,
        scheme: Scheme,
        variances: LinkVariances,
    ) -> Result<Self, ConfigError> {
        if num_relays == 0 {
            return Err(ConfigError::NoRelays);
        }
        let p_source = positive("p_source", p_source)?;
        let p_relay = positive("p_relay", p_relay)?;
        let noise_psd = positive("noise_psd", noise_psd)?;
        positive("variance_s_r", variances.source_relay)?;
        positive("variance_r_d", variances.relay_dest)?;
        positive("variance_s_d", variances.source_dest)?;
        Ok(SystemConfig {
            num_relays,
            p_source,
            p_relay,
            noise_psd,
            kappa: p_source / p_relay,
            mod_order,
            scheme,
            variances,
        })
    }

    /// Like [`SystemConfig::new`] but also checks a caller-supplied `kappa`
    /// against the powers.
    #[allow(clippy::too_many_arguments)]
    pub fn with_kappa(
        num_relays: usize,
        p_source: f64,
        p_relay: f64,
        kappa: f64,
        noise_psd: f64,
        mod_order: ModOrder,
        scheme: Scheme,
        variances: LinkVariances,
    ) -> Result<Self, ConfigError> {
        let kappa = positive("kappa", kappa)?;
        let cfg = Self::new(num_relays, p_source, p_relay, noise_psd, mod_order, scheme, variances)?;
        let expected = kappa * cfg.p_relay;
        if (cfg.p_source - expected).abs() > 1e-12 * expected.max(cfg.p_source) {
            return Err(ConfigError::KappaMismatch {
                p_source: cfg.p_source,
                expected,
            });
        }
        Ok(SystemConfig { kappa, ..cfg })
    }

    /// Splits `p_total = 2 P_s + P_r` with `P_s = kappa * P_r`.
    pub fn from_total_power(
        num_relays: usize,
        p_total: f64,
        kappa: f64,
        noise_psd: f64,
        mod_order: ModOrder,
        scheme: Scheme,
        variances: LinkVariances,
    ) -> Result<Self, ConfigError> {
        let p_total = positive("p_total", p_total)?;
        let kappa = positive("kappa", kappa)?;
        let p_relay = p_total / (2.0 * kappa + 1.0);
        Self::new(
            num_relays,
            kappa * p_relay,
            p_relay,
            noise_psd,
            mod_order,
            scheme,
            variances,
        )
    }

    pub fn num_relays(&self) -> usize {
        self.num_relays
    }
    pub fn p_source(&self) -> f64 {
        self.p_source
    }
    pub fn p_relay(&self) -> f64 {
        self.p_relay
    }
    pub fn p_total(&self) -> f64 {
        2.0 * self.p_source + self.p_relay
    }
    pub fn noise_psd(&self) -> f64 {
        self.noise_psd
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn mod_order(&self) -> ModOrder {
        self.mod_order
    }
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }
    pub fn variances(&self) -> LinkVariances {
        self.variances
    }

    pub fn with_scheme(&self, scheme: Scheme) -> Self {
        SystemConfig { scheme, ..self.clone() }
    }

    pub fn with_num_relays(&self, num_relays: usize) -> Result<Self, ConfigError> {
        if num_relays == 0 {
            return Err(ConfigError::NoRelays);
        }
        Ok(SystemConfig {
            num_relays,
            ..self.clone()
        })
    }

    /// Same scenario with powers rescaled to a new total, keeping `kappa`.
    pub fn with_total_power(&self, p_total: f64) -> Result<Self, ConfigError> {
        Self::from_total_power(
            self.num_relays,
            p_total,
            self.kappa,
            self.noise_psd,
            self.mod_order,
            self.scheme,
            self.variances,
        )
    }

    /// Relay amplification normalisation so the relay's average output energy
    /// is one: `sqrt(2 P_s sigma_sr^2 + N0)`.
    pub fn anc_beta(&self) -> f64 {
        (2.0 * self.p_source * self.variances.source_relay + self.noise_psd).sqrt()
    }
}

/// One joint realisation of every fading coefficient in the network.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkGains {
    pub h_s1_r: Vec<Complex64>,
    pub h_s2_r: Vec<Complex64>,
    pub h_r_d: Vec<Complex64>,
    pub h_s1_d: Complex64,
    pub h_s2_d: Complex64,
}

impl LinkGains {
    pub fn num_relays(&self) -> usize {
        self.h_r_d.len()
    }
}

/// Circularly-symmetric complex Gaussian with `E|h|^2 = variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(scale * re, scale * im)
}

/// Draws one i.i.d. Rayleigh realisation for `num_relays` relays.
///
/// Draw order is fixed (per relay: s1->r, s2->r, r->d; then the two direct
/// links), so identical streams give bit-identical gains.
pub fn sample_channels<R: Rng + ?Sized>(num_relays: usize, variances: &LinkVariances, rng: &mut R) -> LinkGains {
    let mut h_s1_r = Vec::with_capacity(num_relays);
    let mut h_s2_r = Vec::with_capacity(num_relays);
    let mut h_r_d = Vec::with_capacity(num_relays);
    for _ in 0..num_relays {
        h_s1_r.push(complex_gaussian(rng, variances.source_relay));
        h_s2_r.push(complex_gaussian(rng, variances.source_relay));
        h_r_d.push(complex_gaussian(rng, variances.relay_dest));
    }
    let h_s1_d = complex_gaussian(rng, variances.source_dest);
    let h_s2_d = complex_gaussian(rng, variances.source_dest);
    LinkGains {
        h_s1_r,
        h_s2_r,
        h_r_d,
        h_s1_d,
        h_s2_d,
    }
}

/// Exponential rate parameters and effective SNR scales of a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateParams {
    /// Rate of the per-source, per-relay end-to-end SNR.
    pub eta_relay_path: f64,
    /// Rate of the source->destination SNR.
    pub eta_direct: f64,
    /// `P_s / (N0 (1 + kappa))`.
    pub gamma_s: f64,
    /// `P_r / N0`.
    pub gamma_r: f64,
    /// Rate of the selection bottleneck `min(gamma_S1j, gamma_S2j)` of one
    /// relay (see [`compute_rate_params`]).
    pub eta_bottleneck: f64,
}

/// Derives `Gamma_S`, `Gamma_R` and the exponential rates for `config`.
///
/// ANC uses the high-SNR harmonic-mean form `1/(Gamma_S s_sr) + 1/(Gamma_R s_rd)`;
/// DF uses `1/(Gamma_R s_sr)`, the rate of `|h_sr|^2 Gamma_R`.
///
/// The bottleneck rate is exact for DF (minimum of two independent
/// exponentials). For ANC both sources share the relay->destination hop, so
/// the high-SNR bottleneck is `min(Gamma_S X1, Gamma_S X2, Gamma_R Y)` with
/// rate `2/(Gamma_S s_sr) + 1/(Gamma_R s_rd)`.
pub fn compute_rate_params(config: &SystemConfig) -> RateParams {
    let n0 = config.noise_psd;
    let v = config.variances;
    let gamma_s = config.p_source / (n0 * (1.0 + config.kappa));
    let gamma_r = config.p_relay / n0;
    let (eta_relay_path, eta_bottleneck) = match config.scheme {
        Scheme::Anc => (
            anc_path_rate(gamma_s, gamma_r, &v),
            2.0 / (gamma_s * v.source_relay) + 1.0 / (gamma_r * v.relay_dest),
        ),
        Scheme::DfNc => {
            let eta = 1.0 / (gamma_r * v.source_relay);
            (eta, 2.0 * eta)
        }
    };
    RateParams {
        eta_relay_path,
        eta_direct: 1.0 / (gamma_s * v.source_dest),
        gamma_s,
        gamma_r,
        eta_bottleneck,
    }
}

/// Harmonic-mean approximation of the ANC per-relay rate.
pub fn anc_path_rate(gamma_s: f64, gamma_r: f64, variances: &LinkVariances) -> f64 {
    1.0 / (gamma_s * variances.source_relay) + 1.0 / (gamma_r * variances.relay_dest)
}

/// End-to-end SNR of one source through an amplifying relay.
pub fn anc_relay_snr(gain_sr_sq: f64, gain_rd_sq: f64, rates: &RateParams) -> f64 {
    let a = gain_sr_sq * rates.gamma_s;
    let b = gain_rd_sq * rates.gamma_r;
    a * b / (a + b + 1.0)
}

/// Receive SNR used for decode-and-forward selection.
pub fn df_relay_snr(gain_sq: f64, gamma_r: f64) -> f64 {
    gain_sq * gamma_r
}

/// Per-relay SNRs for both sources under the configured scheme.
pub fn relay_snrs(config: &SystemConfig, rates: &RateParams, gains: &LinkGains) -> (Vec<f64>, Vec<f64>) {
    let n = gains.num_relays();
    let mut s1 = Vec::with_capacity(n);
    let mut s2 = Vec::with_capacity(n);
    for j in 0..n {
        let g1 = gains.h_s1_r[j].norm_sqr();
        let g2 = gains.h_s2_r[j].norm_sqr();
        match config.scheme {
            Scheme::Anc => {
                let grd = gains.h_r_d[j].norm_sqr();
                s1.push(anc_relay_snr(g1, grd, rates));
                s2.push(anc_relay_snr(g2, grd, rates));
            }
            Scheme::DfNc => {
                s1.push(df_relay_snr(g1, rates.gamma_r));
                s2.push(df_relay_snr(g2, rates.gamma_r));
            }
        }
    }
    (s1, s2)
}

/// Max-min relay selection: `argmax_j min(s1[j], s2[j])`, ties to the
/// lowest index.
///
/// Minimising the summed per-source SER selects the same relay when links
/// are symmetric, since SER falls monotonically with SNR and the weaker
/// source dominates the sum.
pub fn select_best_relay(snrs_s1: &[f64], snrs_s2: &[f64]) -> Result<usize, SelectionError> {
    if snrs_s1.is_empty() || snrs_s2.is_empty() {
        return Err(SelectionError::Empty);
    }
    if snrs_s1.len() != snrs_s2.len() {
        return Err(SelectionError::LengthMismatch(snrs_s1.len(), snrs_s2.len()));
    }
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (j, (a, b)) in snrs_s1.iter().zip(snrs_s2).enumerate() {
        let v = a.min(*b);
        if v > best_val {
            best = j;
            best_val = v;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_config(scheme: Scheme) -> SystemConfig {
        SystemConfig::new(2, 1.0, 1.0, 1.0, ModOrder::BPSK, scheme, LinkVariances::default()).unwrap()
    }

    #[test]
    fn config_rejects_bad_inputs() {
        let v = LinkVariances::default();
        assert_eq!(
            SystemConfig::new(0, 1.0, 1.0, 1.0, ModOrder::BPSK, Scheme::Anc, v),
            Err(ConfigError::NoRelays)
        );
        assert!(SystemConfig::new(1, -1.0, 1.0, 1.0, ModOrder::BPSK, Scheme::Anc, v).is_err());
        assert!(SystemConfig::new(1, 1.0, 1.0, f64::NAN, ModOrder::BPSK, Scheme::Anc, v).is_err());
        let zero_var = LinkVariances { relay_dest: 0.0, ..v };
        assert!(SystemConfig::new(1, 1.0, 1.0, 1.0, ModOrder::BPSK, Scheme::Anc, zero_var).is_err());
        assert!(ModOrder::new(6).is_err());
        assert!(ModOrder::new(1).is_err());
        assert!(ModOrder::new(8).is_ok());
    }

    #[test]
    fn kappa_consistency() {
        let v = LinkVariances::default();
        let ok = SystemConfig::with_kappa(1, 2.0, 1.0, 2.0, 1.0, ModOrder::BPSK, Scheme::Anc, v).unwrap();
        assert_eq!(ok.kappa(), 2.0);
        assert!(matches!(
            SystemConfig::with_kappa(1, 2.0, 1.0, 1.0, 1.0, ModOrder::BPSK, Scheme::Anc, v),
            Err(ConfigError::KappaMismatch { .. })
        ));
        let split = SystemConfig::from_total_power(1, 3.0, 1.0, 1.0, ModOrder::BPSK, Scheme::Anc, v).unwrap();
        assert!((split.p_source() - 1.0).abs() < 1e-15);
        assert!((split.p_relay() - 1.0).abs() < 1e-15);
        assert!((split.p_total() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn psk_constant() {
        assert_eq!(ModOrder::BPSK.psk_constant(), 1.0);
        assert!((ModOrder::new(4).unwrap().psk_constant() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_variance_gives_zero_coefficients() {
        let v = LinkVariances {
            source_relay: 0.0,
            relay_dest: 1.0,
            source_dest: 0.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = sample_channels(4, &v, &mut rng);
        assert!(g.h_s1_r.iter().chain(&g.h_s2_r).all(|h| h.norm_sqr() == 0.0));
        assert_eq!(g.h_s1_d.norm_sqr(), 0.0);
        assert!(g.h_r_d.iter().all(|h| h.norm_sqr() > 0.0));
    }

    #[test]
    fn sampling_is_deterministic() {
        let v = LinkVariances::default();
        let a = sample_channels(5, &v, &mut ChaCha8Rng::seed_from_u64(99));
        let b = sample_channels(5, &v, &mut ChaCha8Rng::seed_from_u64(99));
        assert_eq!(a, b);
        assert_eq!(a.h_s1_r.len(), 5);
        assert_eq!(a.h_s2_r.len(), 5);
    }

    #[test]
    fn gain_mean_matches_variance() {
        // Independent accumulation: straight sum of squared components,
        // without going through Complex64::norm_sqr.
        let v = LinkVariances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 1_000_000;
        let mut acc = 0.0f64;
        for _ in 0..n / 5 {
            let g = sample_channels(1, &v, &mut rng);
            for h in g
                .h_s1_r
                .iter()
                .chain(&g.h_s2_r)
                .chain(&g.h_r_d)
                .chain([&g.h_s1_d, &g.h_s2_d])
            {
                acc += h.re * h.re + h.im * h.im;
            }
        }
        let mean = acc / n as f64;
        assert!((0.997..=1.003).contains(&mean), "mean {mean}");
    }

    #[test]
    fn anc_snr_examples() {
        let rates = RateParams {
            eta_relay_path: 0.2,
            eta_direct: 0.1,
            gamma_s: 10.0,
            gamma_r: 10.0,
            eta_bottleneck: 0.3,
        };
        assert!((anc_relay_snr(1.0, 1.0, &rates) - 100.0 / 21.0).abs() < 1e-14);
        assert_eq!(anc_relay_snr(0.0, 3.0, &rates), 0.0);
        let big = RateParams {
            gamma_s: 1e6,
            gamma_r: 1e6,
            ..rates
        };
        let hm = 1e6 * 1e6 / 2e6;
        assert!(((anc_relay_snr(1.0, 1.0, &big) - hm) / hm).abs() < 1e-5);
    }

    #[test]
    fn df_snr_examples() {
        assert_eq!(df_relay_snr(2.0, 5.0), 10.0);
        assert_eq!(df_relay_snr(0.0, 5.0), 0.0);
        assert_eq!(df_relay_snr(1.0, 1.0), 1.0);
    }

    #[test]
    fn rate_params_examples() {
        let r = compute_rate_params(&unit_config(Scheme::Anc));
        assert_eq!((r.gamma_s, r.gamma_r), (0.5, 1.0));
        assert_eq!(r.eta_relay_path, 2.0 + 1.0);
        assert_eq!(r.eta_direct, 2.0);

        // P_s = P_r = 2, N0 = 1: Gamma_S = 1, Gamma_R = 2.
        let v = LinkVariances::default();
        let c = SystemConfig::new(1, 2.0, 2.0, 1.0, ModOrder::BPSK, Scheme::Anc, v).unwrap();
        let r = compute_rate_params(&c);
        assert_eq!((r.gamma_s, r.gamma_r), (1.0, 2.0));
        assert_eq!(r.eta_relay_path, 1.5);
        assert_eq!(r.eta_bottleneck, 2.5);

        let df = compute_rate_params(&unit_config(Scheme::DfNc));
        assert_eq!(df.eta_relay_path, 1.0);
        assert_eq!(df.eta_bottleneck, 2.0);
    }

    #[test]
    fn anc_rate_at_unit_gammas() {
        assert_eq!(anc_path_rate(1.0, 1.0, &LinkVariances::default()), 2.0);
    }

    #[test]
    fn small_kappa_limit() {
        let v = LinkVariances::default();
        let c = SystemConfig::new(1, 1e-3, 1e6, 1.0, ModOrder::BPSK, Scheme::Anc, v).unwrap();
        assert!((compute_rate_params(&c).gamma_s - 1e-3).abs() < 1e-11);
    }

    #[test]
    fn selection_examples() {
        assert_eq!(select_best_relay(&[0.1], &[7.0]), Ok(0));
        assert_eq!(select_best_relay(&[3.0, 10.0], &[5.0, 1.0]), Ok(0));
        assert_eq!(select_best_relay(&[2.0; 4], &[2.0; 4]), Ok(0));
        assert_eq!(select_best_relay(&[], &[]), Err(SelectionError::Empty));
        assert_eq!(
            select_best_relay(&[1.0], &[1.0, 2.0]),
            Err(SelectionError::LengthMismatch(1, 2))
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rates(gs: f64, gr: f64) -> RateParams {
            RateParams {
                eta_relay_path: 1.0 / gs + 1.0 / gr,
                eta_direct: 1.0 / gs,
                gamma_s: gs,
                gamma_r: gr,
                eta_bottleneck: 2.0 / gs + 1.0 / gr,
            }
        }

        proptest! {
            #[test]
            fn anc_below_each_hop(a in 0.0..50.0f64, b in 0.0..50.0f64, gs in 0.01..1e4f64, gr in 0.01..1e4f64) {
                let r = rates(gs, gr);
                let v = anc_relay_snr(a, b, &r);
                prop_assert!(v >= 0.0);
                prop_assert!(v <= (gs * a).min(gr * b) * (1.0 + 1e-12));
            }

            #[test]
            fn snrs_monotone(a in 0.0..50.0f64, b in 0.0..50.0f64, d in 0.0..5.0f64, gs in 0.01..1e4f64, gr in 0.01..1e4f64) {
                let r = rates(gs, gr);
                prop_assert!(anc_relay_snr(a + d, b, &r) >= anc_relay_snr(a, b, &r));
                prop_assert!(anc_relay_snr(a, b + d, &r) >= anc_relay_snr(a, b, &r));
                prop_assert!(df_relay_snr(a + d, gr) >= df_relay_snr(a, gr));
            }

            #[test]
            fn selection_invariant_under_increasing_map(
                pairs in proptest::collection::vec((0.0..100.0f64, 0.0..100.0f64), 1..12)
            ) {
                let (s1, s2): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
                let idx = select_best_relay(&s1, &s2).unwrap();
                let t = |x: &f64| (1.0 + x).ln() * 3.0 + 1.0;
                let t1: Vec<f64> = s1.iter().map(t).collect();
                let t2: Vec<f64> = s2.iter().map(t).collect();
                prop_assert_eq!(select_best_relay(&t1, &t2).unwrap(), idx);
                // brute force
                let mins: Vec<f64> = s1.iter().zip(&s2).map(|(a, b)| a.min(*b)).collect();
                let max = mins.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                prop_assert_eq!(mins.iter().position(|&m| m == max).unwrap(), idx);
            }
        }
    }
}
