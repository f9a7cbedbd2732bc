//! Splitting a total power budget `2 P_s + P_r = P_total` between the two
//! sources and the selected relay.
//!
//! [`numeric_allocation`] is the authoritative minimiser: a 64-point grid
//! scan followed by golden-section refinement of the SER objective.
//! [`closed_form_allocation`] evaluates the published cube-root expression
//! for comparison only.

use rayon::prelude::*;
use thiserror::Error;

use crate::analytic::{ser_closed_form, ser_quadrature_with, AnalyticError, BestRelayDistribution, MgfForm, SerParams};
use crate::errata::{ErratumKind, ErratumRecord};
use crate::model::{compute_rate_params, ConfigError, LinkVariances, ModOrder, Scheme, SystemConfig};
use crate::quadrature::Tolerance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowerError {
    #[error("{name} must be finite and > 0, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("split infeasible: p_source = {p_source} must lie in (0, {half})")]
    Infeasible { p_source: f64, half: f64 },
    #[error("closed-form allocation is infeasible: evaluated P_s = {raw_p_source} outside (0, {half})")]
    FormulaInfeasible { raw_p_source: f64, half: f64 },
    #[error(transparent)]
    Objective(#[from] AnalyticError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

fn positive(name: &'static str, value: f64) -> Result<f64, PowerError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(PowerError::NotPositive { name, value })
    }
}

/// A feasible split of the total power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    p_source: f64,
    p_relay: f64,
    p_total: f64,
}

impl PowerSplit {
    /// Per-source power `p_source`, relay gets the rest.
    pub fn from_source(p_total: f64, p_source: f64) -> Result<Self, PowerError> {
        let p_total = positive("p_total", p_total)?;
        let half = 0.5 * p_total;
        if !(p_source > 0.0 && p_source < half) {
            return Err(PowerError::Infeasible { p_source, half });
        }
        Ok(PowerSplit {
            p_source,
            p_relay: p_total - 2.0 * p_source,
            p_total,
        })
    }

    /// `P_s = P_r = P_total / 3`.
    pub fn equal(p_total: f64) -> Result<Self, PowerError> {
        Self::from_source(p_total, p_total / 3.0)
    }

    pub fn p_source(&self) -> f64 {
        self.p_source
    }
    pub fn p_relay(&self) -> f64 {
        self.p_relay
    }
    pub fn p_total(&self) -> f64 {
        self.p_total
    }

    /// `P_s / P_r`.
    pub fn kappa(&self) -> f64 {
        self.p_source / self.p_relay
    }

    /// `P_r / (2 P_s)`; 1 when the relay matches the two sources combined.
    pub fn relay_to_sources_ratio(&self) -> f64 {
        self.p_relay / (2.0 * self.p_source)
    }
}

/// SER as a function of unconstrained source and relay powers.
pub trait SerObjective: Sync {
    fn ser(&self, p_source: f64, p_relay: f64) -> Result<f64, AnalyticError>;
}

impl<F> SerObjective for F
where
    F: Fn(f64, f64) -> Result<f64, AnalyticError> + Sync,
{
    fn ser(&self, p_source: f64, p_relay: f64) -> Result<f64, AnalyticError> {
        self(p_source, p_relay)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// MGF quadrature SER.
    Quadrature,
    /// The published BPSK closed form.
    PrintedClosedForm,
}

/// ANC best-relay SER with rates recomputed for each candidate split.
#[derive(Debug, Clone, PartialEq)]
pub struct AncSerObjective {
    pub num_relays: usize,
    pub mod_order: ModOrder,
    pub noise_psd: f64,
    pub variances: LinkVariances,
    pub kind: ObjectiveKind,
    pub tolerance: Tolerance,
}

impl AncSerObjective {
    /// Quadrature objective with a relative tolerance tight enough for
    /// finite-difference gradients.
    pub fn new(num_relays: usize, mod_order: ModOrder, noise_psd: f64, variances: LinkVariances) -> Self {
        AncSerObjective {
            num_relays,
            mod_order,
            noise_psd,
            variances,
            kind: ObjectiveKind::Quadrature,
            tolerance: Tolerance::relative(1e-13).with_abs(1e-300),
        }
    }

    pub fn from_config(config: &SystemConfig) -> Self {
        Self::new(
            config.num_relays(),
            config.mod_order(),
            config.noise_psd(),
            config.variances(),
        )
    }

    pub fn with_kind(self, kind: ObjectiveKind) -> Self {
        AncSerObjective { kind, ..self }
    }
}

impl SerObjective for AncSerObjective {
    fn ser(&self, p_source: f64, p_relay: f64) -> Result<f64, AnalyticError> {
        let config = SystemConfig::new(
            self.num_relays,
            p_source,
            p_relay,
            self.noise_psd,
            self.mod_order,
            Scheme::Anc,
            self.variances,
        )
        .map_err(|_| AnalyticError::NotPositive {
            name: "power",
            value: p_source.min(p_relay),
        })?;
        let rates = compute_rate_params(&config);
        let dist = BestRelayDistribution::new(self.num_relays, rates.eta_relay_path)?;
        match self.kind {
            ObjectiveKind::Quadrature => ser_quadrature_with(
                &dist,
                Some(rates.eta_direct),
                self.mod_order,
                MgfForm::Corrected,
                self.tolerance,
            ),
            ObjectiveKind::PrintedClosedForm => {
                let params = SerParams::new(self.mod_order, rates.eta_relay_path, rates.eta_direct)?;
                Ok(ser_closed_form(&dist, &params)?.value)
            }
        }
    }
}

/// Result of evaluating the published power-allocation formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormAllocation {
    pub split: PowerSplit,
    /// `2 P_s - P_total`, the relay power as published (wrong sign).
    pub relay_as_printed: f64,
}

/// Raw `P_s = (A + B/A + C) / (4b)` with the published `A`, `B`, `C`.
/// Cube roots are real cube roots, so negative arguments are allowed.
pub fn closed_form_source_power(p_total: f64, b: f64) -> f64 {
    let p = p_total;
    let (pb, pb2, pb3) = (p * b, (p * b).powi(2), (p * b).powi(3));
    let inner = -486.0 * pb - 756.0 * pb2 - 81.0 - 402.0 * pb3 - 51.0 * p * b.powi(4);
    let a = (-135.0 * pb - 9.0 * pb2 + 91.0 * pb3 - 27.0 + 12.0 * p * inner.cbrt()).cbrt();
    let bb = 30.0 * pb + 25.0 * pb2 + 9.0;
    let c = (-3.0 + 7.0 * pb) / b;
    (a + bb / a + c) / (4.0 * b)
}

/// Published closed-form allocation with `P_r = P_total - 2 P_s`.
/// Fails when the evaluated `P_s` is not a feasible source power.
pub fn closed_form_allocation(p_total: f64, b: f64) -> Result<ClosedFormAllocation, PowerError> {
    let p_total = positive("p_total", p_total)?;
    let b = positive("b", b)?;
    let raw = closed_form_source_power(p_total, b);
    let half = 0.5 * p_total;
    if !(raw > 0.0 && raw < half) {
        return Err(PowerError::FormulaInfeasible {
            raw_p_source: raw,
            half,
        });
    }
    Ok(ClosedFormAllocation {
        split: PowerSplit::from_source(p_total, raw)?,
        relay_as_printed: 2.0 * raw - p_total,
    })
}

/// Erratum record comparing the closed form against the numeric optimum.
///
/// Magnitude is `|P_s(closed) - P_s(numeric)|`; an infeasible evaluation is
/// still measured from its raw value.
pub fn closed_form_erratum(p_total: f64, b: f64, numeric: &PowerSplit, context: impl Into<String>) -> ErratumRecord {
    let raw = closed_form_source_power(p_total, b);
    let feasible = closed_form_allocation(p_total, b).is_ok();
    let printed_relay = 2.0 * raw - p_total;
    let magnitude = if raw.is_finite() {
        (raw - numeric.p_source()).abs()
    } else {
        f64::INFINITY
    };
    ErratumRecord::new(
        ErratumKind::PowerAllocClosedForm,
        context,
        magnitude,
        format!(
            "raw_p_s={raw} feasible={feasible} printed_p_r={printed_relay} constraint_p_r={} numeric_p_s={}",
            p_total - 2.0 * raw,
            numeric.p_source()
        ),
    )
}

/// Minimiser output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericAllocation {
    pub split: PowerSplit,
    pub ser: f64,
    /// Separated grid minima with values within 1e-12 (relative) of each other.
    pub multimodal: bool,
}

pub const GRID_POINTS: usize = 64;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`, to width `tol`.
pub fn golden_section<F, E>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64), E>
where
    F: Fn(f64) -> Result<f64, E>,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

/// SER-minimising split of `p_total` for `objective`.
pub fn numeric_allocation<O: SerObjective>(p_total: f64, objective: &O) -> Result<NumericAllocation, PowerError> {
    let p_total = positive("p_total", p_total)?;
    let eps = 1e-6 * p_total;
    let lo = eps;
    let hi = 0.5 * p_total - eps;
    let eval = |ps: f64| objective.ser(ps, p_total - 2.0 * ps);
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS).map(|k| lo + step * k as f64).collect();
    let values = grid.par_iter().map(|&x| eval(x)).collect::<Result<Vec<f64>, _>>()?;

    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    let fmin = values[best];
    let local_minima: Vec<usize> = (0..GRID_POINTS)
        .filter(|&i| {
            let left = i == 0 || values[i] <= values[i - 1];
            let right = i + 1 == GRID_POINTS || values[i] <= values[i + 1];
            left && right && (values[i] - fmin).abs() <= 1e-12 * fmin.abs()
        })
        .collect();
    let multimodal = local_minima.windows(2).any(|w| w[1] > w[0] + 1);

    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(GRID_POINTS - 1)];
    let (x, fx) = golden_section(eval, a, b, 1e-8 * p_total)?;
    let (x, fx) = if fx <= fmin { (x, fx) } else { (grid[best], fmin) };
    Ok(NumericAllocation {
        split: PowerSplit::from_source(p_total, x)?,
        ser: fx,
        multimodal,
    })
}

/// First-order optimality check of a split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stationarity {
    pub d_source: f64,
    pub d_relay: f64,
    /// `|dSER/dP_s - 2 dSER/dP_r|`.
    pub residual: f64,
}

impl Stationarity {
    /// Residual over the larger gradient component.
    pub fn relative(&self) -> f64 {
        self.residual / self.d_source.abs().max(self.d_relay.abs())
    }

    /// Multiplier implied by the relay condition, `-dSER/dP_r`.
    pub fn lagrange_multiplier(&self) -> f64 {
        -self.d_relay
    }
}

/// Central-difference gradient at `split` (step `1e-5 P_total`) and the
/// Lagrange residual obtained by eliminating the multiplier.
pub fn stationarity_residual<O: SerObjective>(split: &PowerSplit, objective: &O) -> Result<Stationarity, PowerError> {
    let h = 1e-5 * split.p_total();
    let (ps, pr) = (split.p_source(), split.p_relay());
    let d_source = (objective.ser(ps + h, pr)? - objective.ser(ps - h, pr)?) / (2.0 * h);
    let d_relay = (objective.ser(ps, pr + h)? - objective.ser(ps, pr - h)?) / (2.0 * h);
    Ok(Stationarity {
        d_source,
        d_relay,
        residual: (d_source - 2.0 * d_relay).abs(),
    })
}
