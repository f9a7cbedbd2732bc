//! Closed-form distribution of the best-relay SNR and the MGF-based SER and
//! outage expressions built on it.
//!
//! The best relay's SNR is the maximum of `N` i.i.d. exponentials with rate
//! `eta`. Product forms are used for evaluation:
//!
//! ```text
//! F(g) = (1 - e^{-eta g})^N
//! f(g) = N eta e^{-eta g} (1 - e^{-eta g})^{N-1}
//! M(s) = prod_{k=1..N} k eta / (s + k eta)
//! ```
//!
//! The alternating binomial sums they expand to are also exposed (for
//! `N <= 64`) so the two routes can be checked against each other. The
//! MGF product follows from writing the maximum as a sum of independent
//! exponentials with rates `eta, 2 eta, .., N eta`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::errata::{ErratumKind, ErratumRecord};
use crate::model::ModOrder;
use crate::quadrature::{self, QuadratureError, Tolerance};

/// Largest `N` for which alternating binomial sums are evaluated.
pub const MAX_ALTERNATING_N: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("{name} must be >= 0, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("{name} must be finite and > 0, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("num_relays must be >= 1")]
    NoRelays,
    #[error("alternating binomial sums are unstable for N = {0} > {MAX_ALTERNATING_N}")]
    AlternatingSumUnstable(usize),
    #[error("closed-form SER is only defined for BPSK (M = 2), got M = {0}; use ser_quadrature")]
    UnsupportedModulation(u32),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

fn non_negative(name: &'static str, value: f64) -> Result<f64, AnalyticError> {
    // NaN fails this comparison too.
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(AnalyticError::Negative { name, value })
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64, AnalyticError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(AnalyticError::NotPositive { name, value })
    }
}

/// `C(n, k)` by the multiplicative recurrence.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c.round()
}

/// Which MGF expression to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgfForm {
    /// Denominator `s + n eta` in the `n`-th term, as integration of the
    /// density gives.
    Corrected,
    /// Denominator `s + eta` in every term, as originally published. The
    /// coefficients `n C(N, n) (-1)^{n-1}` sum to zero for `N >= 2`, so this
    /// form collapses to 0 there.
    Printed,
}

/// Distribution of the maximum of `N` i.i.d. exponential SNRs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestRelayDistribution {
    num_relays: usize,
    eta: f64,
}

impl BestRelayDistribution {
    pub fn new(num_relays: usize, eta: f64) -> Result<Self, AnalyticError> {
        if num_relays == 0 {
            return Err(AnalyticError::NoRelays);
        }
        Ok(BestRelayDistribution {
            num_relays,
            eta: positive("eta", eta)?,
        })
    }

    pub fn num_relays(&self) -> usize {
        self.num_relays
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn check_alternating(&self) -> Result<(), AnalyticError> {
        if self.num_relays > MAX_ALTERNATING_N {
            Err(AnalyticError::AlternatingSumUnstable(self.num_relays))
        } else {
            Ok(())
        }
    }

    pub fn cdf(&self, gamma: f64) -> Result<f64, AnalyticError> {
        let gamma = non_negative("gamma", gamma)?;
        Ok((-(-self.eta * gamma).exp_m1()).powi(self.num_relays as i32))
    }

    /// `sum_{n=0..N} C(N,n) (-1)^n e^{-n eta gamma}`.
    pub fn cdf_binomial(&self, gamma: f64) -> Result<f64, AnalyticError> {
        let gamma = non_negative("gamma", gamma)?;
        self.check_alternating()?;
        let n = self.num_relays;
        Ok((0..=n)
            .map(|k| sign(k) * binomial(n, k) * (-(k as f64) * self.eta * gamma).exp())
            .sum())
    }

    pub fn pdf(&self, gamma: f64) -> Result<f64, AnalyticError> {
        let gamma = non_negative("gamma", gamma)?;
        let n = self.num_relays as f64;
        let e = (-self.eta * gamma).exp();
        Ok(n * self.eta * e * (-(-self.eta * gamma).exp_m1()).powi(self.num_relays as i32 - 1))
    }

    /// `sum_{n=1..N} n eta C(N,n) (-1)^{n-1} e^{-n eta gamma}`.
    pub fn pdf_alternating(&self, gamma: f64) -> Result<f64, AnalyticError> {
        let gamma = non_negative("gamma", gamma)?;
        self.check_alternating()?;
        let n = self.num_relays;
        Ok((1..=n)
            .map(|k| {
                let kf = k as f64;
                -sign(k) * kf * self.eta * binomial(n, k) * (-kf * self.eta * gamma).exp()
            })
            .sum())
    }

    /// `E[e^{-s gamma}]` for the best-relay SNR.
    pub fn mgf(&self, s: f64) -> Result<f64, AnalyticError> {
        let s = non_negative("s", s)?;
        Ok(self.mgf_unchecked(s))
    }

    fn mgf_unchecked(&self, s: f64) -> f64 {
        (1..=self.num_relays)
            .map(|k| {
                let rate = k as f64 * self.eta;
                rate / (s + rate)
            })
            .product()
    }

    /// The alternating-sum MGF in either form.
    pub fn mgf_alternating(&self, s: f64, form: MgfForm) -> Result<f64, AnalyticError> {
        let s = non_negative("s", s)?;
        self.check_alternating()?;
        Ok(self.mgf_alternating_unchecked(s, form))
    }

    fn mgf_alternating_unchecked(&self, s: f64, form: MgfForm) -> f64 {
        let n = self.num_relays;
        (1..=n)
            .map(|k| {
                let kf = k as f64;
                let denom = match form {
                    MgfForm::Corrected => s + kf * self.eta,
                    MgfForm::Printed => s + self.eta,
                };
                -sign(k) * binomial(n, k) * kf * self.eta / denom
            })
            .sum()
    }

    /// Probability that the best-relay SNR falls below `gamma_th`.
    pub fn outage_probability(&self, gamma_th: f64) -> Result<f64, AnalyticError> {
        non_negative("gamma_th", gamma_th)?;
        self.cdf(gamma_th)
    }

    /// Outage by integrating the alternating density term by term.
    pub fn outage_termwise(&self, gamma_th: f64) -> Result<f64, AnalyticError> {
        let gamma_th = non_negative("gamma_th", gamma_th)?;
        self.check_alternating()?;
        let n = self.num_relays;
        Ok((1..=n)
            .map(|k| {
                let rate = k as f64 * self.eta;
                // n eta C (-1)^{n-1} * (1 - e^{-n eta g}) / (n eta)
                -sign(k) * rate * binomial(n, k) * (-(-rate * gamma_th).exp_m1()) / rate
            })
            .sum())
    }
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(1/pi) int_0^{pi/2} sin^2 t / (sin^2 t + c) dt = 0.5 (1 - sqrt(c / (1 + c)))`.
///
/// This is the average BPSK error probability over a Rayleigh link with
/// mean SNR `c`.
pub fn rayleigh_integral(c: f64) -> f64 {
    0.5 * (1.0 - (c / (1.0 + c)).sqrt())
}

/// MGF of an exponential SNR with rate `eta`.
pub fn exponential_mgf(eta: f64, s: f64) -> f64 {
    eta / (s + eta)
}

/// Constants of the BPSK-style SER integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerParams {
    mod_order: ModOrder,
    g: f64,
    c1: f64,
    c2: f64,
}

impl SerParams {
    /// `c1 = g / eta_relay`, `c2 = g / eta_direct` with `g = sin^2(pi / M)`.
    pub fn new(mod_order: ModOrder, eta_relay: f64, eta_direct: f64) -> Result<Self, AnalyticError> {
        let g = mod_order.psk_constant();
        Ok(SerParams {
            mod_order,
            g,
            c1: g / positive("eta_relay", eta_relay)?,
            c2: g / positive("eta_direct", eta_direct)?,
        })
    }

    pub fn mod_order(&self) -> ModOrder {
        self.mod_order
    }
    pub fn g(&self) -> f64 {
        self.g
    }
    pub fn c1(&self) -> f64 {
        self.c1
    }
    pub fn c2(&self) -> f64 {
        self.c2
    }
    pub fn eta_direct(&self) -> f64 {
        self.g / self.c2
    }
}

/// Default accuracy for SER integrals.
pub const SER_TOLERANCE: Tolerance = Tolerance::absolute(1e-10);

/// Average SER of best-relay selection combined with an optional direct
/// path, by adaptive quadrature of the MGF product over
/// `theta in (0, (M-1) pi / M]`.
pub fn ser_quadrature(
    dist: &BestRelayDistribution,
    direct_eta: Option<f64>,
    mod_order: ModOrder,
) -> Result<f64, AnalyticError> {
    ser_quadrature_with(dist, direct_eta, mod_order, MgfForm::Corrected, SER_TOLERANCE)
}

pub fn ser_quadrature_with(
    dist: &BestRelayDistribution,
    direct_eta: Option<f64>,
    mod_order: ModOrder,
    form: MgfForm,
    tol: Tolerance,
) -> Result<f64, AnalyticError> {
    if let Some(eta) = direct_eta {
        positive("direct_eta", eta)?;
    }
    if form == MgfForm::Printed {
        dist.check_alternating()?;
    }
    let g = mod_order.psk_constant();
    let m = f64::from(mod_order.get());
    let upper = (m - 1.0) * PI / m;
    let integrand = |theta: f64| {
        let sin2 = theta.sin().powi(2);
        if sin2 == 0.0 {
            return 0.0;
        }
        let s = g / sin2;
        let relay = match form {
            MgfForm::Corrected => dist.mgf_unchecked(s),
            MgfForm::Printed => dist.mgf_alternating_unchecked(s, MgfForm::Printed),
        };
        let direct = direct_eta.map_or(1.0, |eta| exponential_mgf(eta, s));
        relay * direct
    };
    let r = quadrature::integrate(integrand, 0.0, upper, tol)?;
    Ok(r.value / PI)
}

/// The published BPSK closed form alongside the quadrature value it is
/// supposed to equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormSer {
    pub value: f64,
    pub quadrature: f64,
    pub discrepancy: f64,
}

impl ClosedFormSer {
    pub fn erratum(&self, context: impl Into<String>) -> ErratumRecord {
        ErratumRecord::new(
            ErratumKind::SerClosedForm,
            context,
            self.discrepancy,
            format!("printed={} quadrature={}", self.value, self.quadrature),
        )
    }
}

/// `sum_{n=1..N} C(N,n) (-1)^{n-1} (I(c1) + I(c2))`, exactly as published.
///
/// Not an oracle: the sum of binomial terms is 1 for every `N`, so this
/// ignores the relay count entirely. The quadrature SER is reported next to
/// it together with the gap.
pub fn ser_closed_form(dist: &BestRelayDistribution, params: &SerParams) -> Result<ClosedFormSer, AnalyticError> {
    if params.mod_order.get() != 2 {
        return Err(AnalyticError::UnsupportedModulation(params.mod_order.get()));
    }
    dist.check_alternating()?;
    let n = dist.num_relays;
    let inner = rayleigh_integral(params.c1) + rayleigh_integral(params.c2);
    let value: f64 = (1..=n).map(|k| -sign(k) * binomial(n, k) * inner).sum();
    let quadrature = ser_quadrature(dist, Some(params.eta_direct()), params.mod_order)?;
    Ok(ClosedFormSer {
        value,
        quadrature,
        discrepancy: (value - quadrature).abs(),
    })
}

/// Measures how far the published MGF denominator moves the SER:
/// `|SER(printed MGF) - SER(corrected MGF)|`.
pub fn mgf_denominator_erratum(
    dist: &BestRelayDistribution,
    direct_eta: Option<f64>,
    mod_order: ModOrder,
    context: impl Into<String>,
) -> Result<ErratumRecord, AnalyticError> {
    let corrected = ser_quadrature(dist, direct_eta, mod_order)?;
    let printed = ser_quadrature_with(dist, direct_eta, mod_order, MgfForm::Printed, SER_TOLERANCE)?;
    Ok(ErratumRecord::new(
        ErratumKind::MgfDenominator,
        context,
        (printed - corrected).abs(),
        format!("printed={printed} corrected={corrected}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(n: usize, eta: f64) -> BestRelayDistribution {
        BestRelayDistribution::new(n, eta).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    /// 1e-12, widened by the rounding floor of an alternating sum whose
    /// absolute terms add up to `magnitude`.
    fn alternating_tol(magnitude: f64) -> f64 {
        1e-12 + 8.0 * f64::EPSILON * magnitude
    }

    /// `sum_n C(N,n) e^{-n x}` = `(1 + e^{-x})^N`.
    fn abs_terms(n: usize, x: f64) -> f64 {
        (1.0 + (-x).exp()).powi(n as i32)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(10, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
        let c = binomial(64, 32);
        assert!((c / 1_832_624_140_942_590_534.0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(BestRelayDistribution::new(0, 1.0), Err(AnalyticError::NoRelays));
        assert!(BestRelayDistribution::new(1, 0.0).is_err());
        assert!(BestRelayDistribution::new(1, f64::INFINITY).is_err());
    }

    #[test]
    fn cdf_examples() {
        close(dist(4, 3.0).cdf(0.0).unwrap(), 0.0, 0.0);
        close(dist(1, 1.0).cdf(1.0).unwrap(), 0.632_120_558_828_557_7, 1e-15);
        close(dist(3, 1.0).cdf(1.0).unwrap(), 0.252_580_457_827_647_17, 1e-15);
        assert!(matches!(dist(1, 1.0).cdf(-1.0), Err(AnalyticError::Negative { .. })));
    }

    #[test]
    fn cdf_binomial_agrees() {
        for n in 1..=20 {
            for &eta in &[0.3, 1.0, 2.5] {
                for &g in &[0.0, 0.05, 0.5, 1.0, 3.0, 10.0] {
                    let d = dist(n, eta);
                    let tol = alternating_tol(abs_terms(n, eta * g));
                    close(d.cdf(g).unwrap(), d.cdf_binomial(g).unwrap(), tol);
                    if eta * g >= 1.0 {
                        // well-conditioned region: plain 1e-12
                        close(d.cdf(g).unwrap(), d.cdf_binomial(g).unwrap(), 1e-12);
                    }
                }
            }
        }
        assert_eq!(
            dist(65, 1.0).cdf_binomial(1.0),
            Err(AnalyticError::AlternatingSumUnstable(65))
        );
        // product form still works beyond the cap
        assert!(dist(200, 1.0).cdf(1.0).unwrap() > 0.0);
    }

    #[test]
    fn pdf_examples() {
        close(dist(1, 2.0).pdf(0.0).unwrap(), 2.0, 1e-15);
        close(dist(2, 1.0).pdf(2f64.ln()).unwrap(), 0.5, 1e-15);
        for n in 1..=20 {
            for &g in &[0.0, 0.1, 1.0, 4.0] {
                let d = dist(n, 0.7);
                let tol = alternating_tol(n as f64 * 0.7 * abs_terms(n, 0.7 * g));
                close(d.pdf(g).unwrap(), d.pdf_alternating(g).unwrap(), tol);
            }
        }
    }

    #[test]
    fn pdf_normalised() {
        let d = dist(5, 0.5);
        let r = quadrature::integrate_to_infinity(|g| d.pdf(g).unwrap(), 0.0, Tolerance::absolute(1e-12)).unwrap();
        close(r.value, 1.0, 1e-8);
    }

    #[test]
    fn mgf_examples() {
        for &(n, eta) in &[(1, 1.0), (3, 0.2), (10, 5.0)] {
            close(dist(n, eta).mgf(0.0).unwrap(), 1.0, 1e-15);
        }
        close(dist(1, 1.0).mgf(1.0).unwrap(), 0.5, 1e-15);
        close(dist(2, 1.0).mgf(1.0).unwrap(), 1.0 / 3.0, 1e-15);
        close(
            dist(2, 1.0).mgf_alternating(1.0, MgfForm::Corrected).unwrap(),
            1.0 / 3.0,
            1e-15,
        );
        assert!(dist(1, 1.0).mgf(-0.1).is_err());
    }

    #[test]
    fn mgf_matches_laplace_transform_of_pdf() {
        let d = dist(2, 1.0);
        let r = quadrature::integrate_to_infinity(|g| (-g).exp() * d.pdf(g).unwrap(), 0.0, Tolerance::absolute(1e-12))
            .unwrap();
        close(r.value, 1.0 / 3.0, 1e-10);
    }

    #[test]
    fn printed_mgf_collapses_for_two_or_more_relays() {
        close(dist(1, 1.0).mgf_alternating(1.0, MgfForm::Printed).unwrap(), 0.5, 1e-15);
        for n in 2..=10 {
            close(dist(n, 1.0).mgf_alternating(0.7, MgfForm::Printed).unwrap(), 0.0, 1e-9);
        }
    }

    #[test]
    fn rayleigh_integral_values() {
        close(rayleigh_integral(0.0), 0.5, 0.0);
        close(rayleigh_integral(1.0), 0.146_446_609_406_726_24, 1e-15);
        close(rayleigh_integral(100.0), 0.002_481_404_895_005_432_2, 1e-15);
        for &c in &[0.01, 0.3, 1.0, 7.0, 100.0] {
            let q = quadrature::integrate(
                |t: f64| {
                    let s2 = t.sin().powi(2);
                    s2 / (s2 + c)
                },
                0.0,
                PI / 2.0,
                Tolerance::absolute(1e-13),
            )
            .unwrap()
            .value
                / PI;
            close(q, rayleigh_integral(c), 1e-9);
        }
    }

    #[test]
    fn ser_reduces_to_single_link() {
        let s = ser_quadrature(&dist(1, 1.0), None, ModOrder::BPSK).unwrap();
        close(s, rayleigh_integral(1.0), 1e-10);
    }

    #[test]
    fn ser_reference_values() {
        // Frozen from 30-digit quadrature of the product-MGF integrand.
        close(
            ser_quadrature(&dist(1, 1.0), Some(1.0), ModOrder::BPSK).unwrap(),
            0.058_058_261_758_407_797,
            1e-10,
        );
        close(
            ser_quadrature(&dist(2, 1.0), Some(1.0), ModOrder::BPSK).unwrap(),
            0.034_548_170_108_550_237,
            1e-10,
        );
        close(
            ser_quadrature(&dist(2, 0.5), Some(0.5), ModOrder::new(8).unwrap()).unwrap(),
            0.273_056_351_531_188_88,
            1e-10,
        );
    }

    #[test]
    fn ser_extremes() {
        let s = ser_quadrature(&dist(1, 1e-6), Some(1e-6), ModOrder::BPSK).unwrap();
        assert!((0.0..=1e-5).contains(&s), "{s}");
        let guess = ser_quadrature(&dist(1, 1e9), Some(1e9), ModOrder::new(8).unwrap()).unwrap();
        // approaches the guessing bound like sqrt(g / eta)
        close(guess, 7.0 / 8.0, 1e-4);
    }

    #[test]
    fn direct_path_gives_diversity_gain() {
        let d = dist(1, 0.3);
        let with = ser_quadrature(&d, Some(0.3), ModOrder::BPSK).unwrap();
        let without = ser_quadrature(&d, None, ModOrder::BPSK).unwrap();
        assert!(with < without);
    }

    #[test]
    fn ser_decreases_with_relays() {
        for &m in &[2, 8] {
            let m = ModOrder::new(m).unwrap();
            for &eta in &[0.01, 0.1, 1.0, 3.0] {
                let sers: Vec<f64> = (1..=6)
                    .map(|n| ser_quadrature(&dist(n, eta), Some(eta), m).unwrap())
                    .collect();
                assert!(sers.windows(2).all(|w| w[1] < w[0]), "{sers:?}");
            }
        }
    }

    #[test]
    fn closed_form_as_published() {
        let params = SerParams::new(ModOrder::BPSK, 1.0, 1.0).unwrap();
        assert_eq!(params.c1(), 1.0);
        let one = ser_closed_form(&dist(1, 1.0), &params).unwrap();
        close(one.value, 2.0 * rayleigh_integral(1.0), 1e-15);
        close(one.value, 0.292_893_218_813_452_5, 1e-15);
        let two = ser_closed_form(&dist(2, 1.0), &params).unwrap();
        close(two.value, 0.292_893_218_813_452_5, 1e-15);
        close(two.quadrature, 0.034_548_170_108_550_237, 1e-10);
        assert!(two.discrepancy > 0.25);
        let eight = SerParams::new(ModOrder::new(8).unwrap(), 1.0, 1.0).unwrap();
        assert_eq!(
            ser_closed_form(&dist(1, 1.0), &eight),
            Err(AnalyticError::UnsupportedModulation(8))
        );
    }

    #[test]
    fn outage_examples() {
        close(dist(3, 1.0).outage_probability(0.0).unwrap(), 0.0, 0.0);
        close(
            dist(2, 1.0).outage_probability(1.0).unwrap(),
            0.399_576_400_893_728_05,
            1e-15,
        );
        close(dist(2, 1.0).outage_probability(1e6).unwrap(), 1.0, 1e-15);
        for n in 1..=20 {
            let d = dist(n, 0.8);
            for &g in &[0.0, 0.2, 1.0, 5.0] {
                let tol = alternating_tol(2f64.powi(n as i32));
                close(d.outage_probability(g).unwrap(), d.outage_termwise(g).unwrap(), tol);
                if n <= 10 {
                    close(d.outage_probability(g).unwrap(), d.outage_termwise(g).unwrap(), 1e-12);
                }
            }
        }
        assert!(dist(1, 1.0).outage_probability(-1.0).is_err());
    }

    #[test]
    fn mgf_erratum_measured() {
        let rec = mgf_denominator_erratum(&dist(3, 0.2), Some(0.2), ModOrder::BPSK, "n=3").unwrap();
        assert_eq!(rec.kind, ErratumKind::MgfDenominator);
        assert!(rec.magnitude > 0.0);
        let rec = mgf_denominator_erratum(&dist(1, 0.2), Some(0.2), ModOrder::BPSK, "n=1").unwrap();
        assert!(rec.magnitude < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn cdf_shape(n in 1usize..30, eta in 0.01..10.0f64, g in 0.0..20.0f64, dg in 0.0..5.0f64) {
                let d = dist(n, eta);
                let a = d.cdf(g).unwrap();
                prop_assert!((0.0..=1.0).contains(&a));
                prop_assert!(d.cdf(g + dg).unwrap() >= a);
                prop_assert!(dist(n + 1, eta).cdf(g).unwrap() <= a);
            }

            #[test]
            fn mgf_completely_monotone_low_orders(n in 1usize..12, eta in 0.01..10.0f64, s in 0.0..50.0f64) {
                // sign pattern of the first two derivatives by central differences
                let d = dist(n, eta);
                let h = 1e-3 * (1.0 + s);
                let m0 = d.mgf(s + 2.0 * h).unwrap();
                let m1 = d.mgf(s + h).unwrap();
                let m2 = d.mgf(s).unwrap();
                prop_assert!(m0 <= m1 && m1 <= m2 && m2 <= 1.0);
                prop_assert!(m0 - 2.0 * m1 + m2 >= -1e-15);
            }
        }
    }
}
