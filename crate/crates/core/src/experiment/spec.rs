//! Sweep specification: figure presets, list syntax, validation and the
//! `key = value` serialisation.
//!
//! List syntax shared by flags and config files:
//! - SNR: `0:25:2.5` (inclusive range) or `0,5,10`
//! - relays: `1-5`, `1,2,5,10` or a mix such as `1-3,10`
//! - schemes: `anc,df`; modulation orders: `2,8`
//! - total power: linear values `1,10,100`, mapped to `10 log10(P / N0)` dB

use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::kv::{self, KvError};
use crate::model::{ModOrder, Scheme};

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_GAMMA_TH: f64 = 1.0;
pub const DEFAULT_VARIANCE: f64 = 1.0;
pub const DEFAULT_KAPPA: f64 = 1.0;
/// Above this many trials per point a warning is issued.
pub const TRIALS_WARNING: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    /// ANC SER vs SNR for BPSK and 8-PSK, N = 1..5.
    Fig2SerVsSnrMpsk,
    /// ANC vs DF SER, BPSK, N in {1, 2, 5, 10}.
    Fig3AncVsDf,
    /// Outage vs SNR for both schemes, N in {1, 2, 5, 10}.
    Fig4Outage,
    /// ANC SER with optimised vs equal power split, N = 1..4.
    Fig5PowerAlloc,
    Custom,
}

impl Figure {
    pub fn as_str(self) -> &'static str {
        match self {
            Figure::Fig2SerVsSnrMpsk => "fig2_ser_vs_snr_mpsk",
            Figure::Fig3AncVsDf => "fig3_anc_vs_df",
            Figure::Fig4Outage => "fig4_outage",
            Figure::Fig5PowerAlloc => "fig5_power_alloc",
            Figure::Custom => "custom",
        }
    }

    pub fn wants_ser(self) -> bool {
        !matches!(self, Figure::Fig4Outage)
    }

    pub fn wants_outage(self) -> bool {
        matches!(self, Figure::Fig4Outage | Figure::Custom)
    }

    fn default_schemes(self) -> Vec<Scheme> {
        match self {
            Figure::Fig2SerVsSnrMpsk | Figure::Fig5PowerAlloc => vec![Scheme::Anc],
            _ => vec![Scheme::Anc, Scheme::DfNc],
        }
    }

    fn default_relays(self) -> Vec<usize> {
        match self {
            Figure::Fig2SerVsSnrMpsk => (1..=5).collect(),
            Figure::Fig5PowerAlloc => (1..=4).collect(),
            Figure::Fig3AncVsDf | Figure::Fig4Outage => vec![1, 2, 5, 10],
            Figure::Custom => vec![1, 2, 3, 4, 5, 10],
        }
    }

    fn default_mods(self) -> Vec<u32> {
        match self {
            Figure::Fig2SerVsSnrMpsk => vec![2, 8],
            _ => vec![2],
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fig2" | "fig2_ser_vs_snr_mpsk" => Ok(Figure::Fig2SerVsSnrMpsk),
            "fig3" | "fig3_anc_vs_df" => Ok(Figure::Fig3AncVsDf),
            "fig4" | "fig4_outage" => Ok(Figure::Fig4Outage),
            "fig5" | "fig5_power_alloc" => Ok(Figure::Fig5PowerAlloc),
            "custom" => Ok(Figure::Custom),
            other => Err(format!("unknown figure `{other}`")),
        }
    }
}

/// Default SNR axis: 0 to 25 dB in 2.5 dB steps.
pub fn default_snr_points() -> Vec<f64> {
    (0..=10).map(|k| 2.5 * f64::from(k)).collect()
}

/// One validation problem, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub field: &'static str,
    pub message: String,
}

impl SpecError {
    fn new(field: &'static str, message: impl Into<String>) -> Self {
        SpecError {
            field,
            message: message.into(),
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for SpecError {}

// Rounds away representation noise from range arithmetic (2.5 * 3 etc.).
fn tidy(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", s.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{}` is not finite", s.trim()))
    }
}

/// Parses `start:stop:step` or a comma list of dB values.
pub fn parse_snr_list(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range `{s}` must be start:stop:step"));
        }
        let (start, stop, step) = (parse_f64(parts[0])?, parse_f64(parts[1])?, parse_f64(parts[2])?);
        if !(step > 0.0) {
            return Err("range step must be > 0".into());
        }
        if stop < start {
            return Err(format!("range stop {stop} is below start {start}"));
        }
        let count = ((stop - start) / step + 1e-9).floor();
        if count > 100_000.0 {
            return Err(format!("range `{s}` has too many points"));
        }
        return Ok((0..=count as u64).map(|k| tidy(start + step * k as f64)).collect());
    }
    s.split(',').map(parse_f64).collect()
}

/// Parses linear total powers into dB points (`N0 = 1`).
pub fn parse_ptotal_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let v = parse_f64(p)?;
            if v > 0.0 {
                Ok(tidy(10.0 * v.log10()))
            } else {
                Err(format!("total power `{}` must be > 0", p.trim()))
            }
        })
        .collect()
}

/// Parses `1-5`, `1,2,5` or mixes. Zero is returned as-is for validation
/// to report.
pub fn parse_relay_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once('-') {
            let a: usize = a.trim().parse().map_err(|_| format!("bad relay range `{part}`"))?;
            let b: usize = b.trim().parse().map_err(|_| format!("bad relay range `{part}`"))?;
            if b < a || b - a > 10_000 {
                return Err(format!("bad relay range `{part}`"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| format!("`{part}` is not a relay count"))?);
        }
    }
    Ok(out)
}

fn parse_list<T, E: fmt::Display>(s: &str, f: impl Fn(&str) -> Result<T, E>) -> Result<Vec<T>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| f(p).map_err(|e| e.to_string()))
        .collect()
}

/// A possibly incomplete specification, as read from one source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialSpec {
    pub figure: Option<Figure>,
    pub schemes: Option<Vec<Scheme>>,
    pub relay_counts: Option<Vec<usize>>,
    pub snr_points_db: Option<Vec<f64>>,
    pub mod_orders: Option<Vec<u32>>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub gamma_th: Option<f64>,
    pub variance: Option<f64>,
    pub kappa: Option<f64>,
    pub early_exit: Option<bool>,
    pub output_path: Option<String>,
}

impl PartialSpec {
    /// Applies one `key = value` setting. `ptotal` sets the SNR axis.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), SpecError> {
        let field = match key {
            "figure" => "figure",
            "scheme" | "schemes" => "scheme",
            "relays" | "relay_counts" => "relays",
            "snr" | "snr_points_db" => "snr",
            "ptotal" => "ptotal",
            "mod" | "mod_orders" => "mod",
            "trials" => "trials",
            "seed" => "seed",
            "gamma_th" => "gamma_th",
            "variance" => "variance",
            "kappa" => "kappa",
            "early_exit" => "early_exit",
            "out" | "output_path" => "out",
            _ => return Err(SpecError::new("config", format!("unknown key `{key}`"))),
        };
        let err = |m: String| SpecError::new(field, m);
        match field {
            "figure" => self.figure = Some(value.parse().map_err(err)?),
            "scheme" => self.schemes = Some(parse_list(value, Scheme::from_str).map_err(err)?),
            "relays" => self.relay_counts = Some(parse_relay_list(value).map_err(err)?),
            "snr" => self.snr_points_db = Some(parse_snr_list(value).map_err(err)?),
            "ptotal" => self.snr_points_db = Some(parse_ptotal_list(value).map_err(err)?),
            "mod" => self.mod_orders = Some(parse_list(value, u32::from_str).map_err(err)?),
            "trials" => {
                let t: f64 = parse_f64(value).map_err(err)?;
                if t < 0.0 || t.fract() != 0.0 || t > u64::MAX as f64 {
                    return Err(SpecError::new(field, format!("`{value}` is not a trial count")));
                }
                self.trials = Some(t as u64);
            }
            "seed" => {
                self.seed = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| err(format!("`{value}` is not a u64")))?,
                )
            }
            "gamma_th" => self.gamma_th = Some(parse_f64(value).map_err(err)?),
            "variance" => self.variance = Some(parse_f64(value).map_err(err)?),
            "kappa" => self.kappa = Some(parse_f64(value).map_err(err)?),
            "early_exit" => {
                self.early_exit = Some(match value.trim() {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    other => return Err(err(format!("`{other}` is not a boolean"))),
                })
            }
            "out" => self.output_path = Some(value.trim().to_string()),
            _ => unreachable!(),
        }
        Ok(())
    }

    /// Parses a config file; every bad line is reported.
    pub fn from_config_text(text: &str) -> Result<Self, Vec<SpecError>> {
        let pairs = kv::parse_kv(text).map_err(|e: KvError| vec![SpecError::new("config", e.to_string())])?;
        let mut spec = PartialSpec::default();
        let errors: Vec<SpecError> = pairs.iter().filter_map(|(k, v)| spec.set(k, v).err()).collect();
        if errors.is_empty() {
            Ok(spec)
        } else {
            Err(errors)
        }
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merge(self, over: PartialSpec) -> PartialSpec {
        PartialSpec {
            figure: over.figure.or(self.figure),
            schemes: over.schemes.or(self.schemes),
            relay_counts: over.relay_counts.or(self.relay_counts),
            snr_points_db: over.snr_points_db.or(self.snr_points_db),
            mod_orders: over.mod_orders.or(self.mod_orders),
            trials: over.trials.or(self.trials),
            seed: over.seed.or(self.seed),
            gamma_th: over.gamma_th.or(self.gamma_th),
            variance: over.variance.or(self.variance),
            kappa: over.kappa.or(self.kappa),
            early_exit: over.early_exit.or(self.early_exit),
            output_path: over.output_path.or(self.output_path),
        }
    }
}

/// A complete, validated specification.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub figure: Figure,
    pub schemes: Vec<Scheme>,
    pub relay_counts: Vec<usize>,
    pub snr_points_db: Vec<f64>,
    pub mod_orders: Vec<ModOrder>,
    pub trials: u64,
    pub seed: u64,
    pub gamma_th: f64,
    pub variance: f64,
    pub kappa: f64,
    pub early_exit: bool,
    pub output_path: String,
}

impl ExperimentSpec {
    /// Preset for `figure` writing to `output_path`, all defaults filled.
    pub fn preset(figure: Figure, output_path: impl Into<String>) -> Self {
        let partial = PartialSpec {
            figure: Some(figure),
            output_path: Some(output_path.into()),
            ..PartialSpec::default()
        };
        validate_spec(&partial).expect("presets are valid").spec
    }

    fn join<T: fmt::Display>(items: &[T]) -> String {
        items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }

    /// Canonical `key = value` form; parses back to the same spec.
    pub fn to_config_text(&self) -> String {
        kv::write_kv([
            ("figure", self.figure.to_string()),
            ("scheme", Self::join(&self.schemes)),
            ("relays", Self::join(&self.relay_counts)),
            (
                "snr",
                self.snr_points_db
                    .iter()
                    .map(|v| format!("{v:?}"))
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("mod", Self::join(&self.mod_orders)),
            ("trials", self.trials.to_string()),
            ("seed", self.seed.to_string()),
            ("gamma_th", format!("{:?}", self.gamma_th)),
            ("variance", format!("{:?}", self.variance)),
            ("kappa", format!("{:?}", self.kappa)),
            ("early_exit", self.early_exit.to_string()),
            ("out", self.output_path.clone()),
        ])
    }

    /// SHA-256 of everything that determines the CSV (all keys but `out`).
    pub fn config_hash(&self) -> String {
        let text: String = self
            .to_config_text()
            .lines()
            .filter(|l| !l.starts_with("out="))
            .map(|l| format!("{l}\n"))
            .collect();
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Validation result: the complete spec plus non-fatal warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedSpec {
    pub spec: ExperimentSpec,
    pub warnings: Vec<String>,
}

/// Fills defaults from the figure preset and reports every violation.
pub fn validate_spec(partial: &PartialSpec) -> Result<ValidatedSpec, Vec<SpecError>> {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let figure = partial.figure.unwrap_or(Figure::Custom);

    let schemes = partial.schemes.clone().unwrap_or_else(|| figure.default_schemes());
    if schemes.is_empty() {
        errors.push(SpecError::new("scheme", "at least one scheme is required"));
    }
    if figure == Figure::Fig5PowerAlloc && schemes.iter().any(|s| *s != Scheme::Anc) {
        errors.push(SpecError::new("scheme", "fig5_power_alloc supports only anc"));
    }
    let mut unique_schemes = schemes.clone();
    unique_schemes.sort();
    unique_schemes.dedup();
    if unique_schemes.len() != schemes.len() {
        errors.push(SpecError::new("scheme", "schemes must not repeat"));
    }

    let relay_counts = partial.relay_counts.clone().unwrap_or_else(|| figure.default_relays());
    if relay_counts.is_empty() {
        errors.push(SpecError::new("relays", "relay_counts must be non-empty"));
    }
    if let Some(bad) = relay_counts.iter().find(|&&n| n == 0) {
        errors.push(SpecError::new("relays", format!("relay count {bad} must be >= 1")));
    }
    if relay_counts.windows(2).any(|w| w[1] <= w[0]) {
        errors.push(SpecError::new("relays", "relay counts must be strictly increasing"));
    }

    let snr = partial.snr_points_db.clone().unwrap_or_else(default_snr_points);
    if snr.is_empty() {
        errors.push(SpecError::new("snr", "snr_points_db must be non-empty"));
    }
    if snr.iter().any(|v| !v.is_finite()) {
        errors.push(SpecError::new("snr", "snr points must be finite"));
    }
    if snr.windows(2).any(|w| !(w[1] > w[0])) {
        errors.push(SpecError::new("snr", "snr points must be strictly increasing"));
    }

    let raw_mods = partial.mod_orders.clone().unwrap_or_else(|| figure.default_mods());
    if raw_mods.is_empty() {
        errors.push(SpecError::new("mod", "at least one modulation order is required"));
    }
    let mut mod_orders = Vec::new();
    for m in &raw_mods {
        match ModOrder::new(*m) {
            Ok(mo) => mod_orders.push(mo),
            Err(e) => errors.push(SpecError::new("mod", e.to_string())),
        }
    }
    if mod_orders.windows(2).any(|w| w[1] <= w[0]) {
        errors.push(SpecError::new("mod", "modulation orders must be strictly increasing"));
    }

    let trials = partial.trials.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        errors.push(SpecError::new("trials", "trials must be >= 1"));
    } else if trials > TRIALS_WARNING {
        warnings.push(format!("trials = {trials} per point will take a very long time"));
    }

    let gamma_th = partial.gamma_th.unwrap_or(DEFAULT_GAMMA_TH);
    if !(gamma_th.is_finite() && gamma_th >= 0.0) {
        errors.push(SpecError::new(
            "gamma_th",
            format!("gamma_th must be finite and >= 0, got {gamma_th}"),
        ));
    }
    let variance = partial.variance.unwrap_or(DEFAULT_VARIANCE);
    if !(variance.is_finite() && variance > 0.0) {
        errors.push(SpecError::new(
            "variance",
            format!("variance must be finite and > 0, got {variance}"),
        ));
    }
    let kappa = partial.kappa.unwrap_or(DEFAULT_KAPPA);
    if !(kappa.is_finite() && kappa > 0.0) {
        errors.push(SpecError::new(
            "kappa",
            format!("kappa must be finite and > 0, got {kappa}"),
        ));
    }

    let output_path = partial.output_path.clone().unwrap_or_default();
    if output_path.trim().is_empty() {
        errors.push(SpecError::new("out", "output path is required"));
    } else if output_path.contains('\n') {
        errors.push(SpecError::new("out", "output path must be a single line"));
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(ValidatedSpec {
        spec: ExperimentSpec {
            figure,
            schemes,
            relay_counts,
            snr_points_db: snr,
            mod_orders,
            trials,
            seed: partial.seed.unwrap_or(DEFAULT_SEED),
            gamma_th,
            variance,
            kappa,
            early_exit: partial.early_exit.unwrap_or(true),
            output_path,
        },
        warnings,
    })
}
