//! Sweep execution: cells in deterministic order, computed on a worker
//! pool, journaled as they finish, written once at the end.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use thiserror::Error;

use super::csv::{self, CsvRow};
use super::journal::{journal_path, Journal};
use super::kv::{self, KvError};
use super::spec::{ExperimentSpec, Figure};
use crate::analytic::{
    mgf_denominator_erratum, ser_closed_form, ser_quadrature, AnalyticError, BestRelayDistribution, SerParams,
    MAX_ALTERNATING_N,
};
use crate::errata::{ErrataLedger, ErratumKind, ErratumRecord};
use crate::model::{compute_rate_params, LinkVariances, ModOrder, Scheme, SystemConfig};
use crate::montecarlo::{config_at_snr, estimate_outage, estimate_ser, SimError, StopRule};
use crate::power::{
    closed_form_allocation, closed_form_erratum, numeric_allocation, AncSerObjective, PowerError, PowerSplit,
};

/// Errata below this magnitude are recorded but not reported as triggered.
pub const ERRATUM_THRESHOLD: f64 = 1e-12;
/// Relative gap above which a row is flagged `closed_form_gap`.
const CLOSED_FORM_FLAG: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("cell {cell}: {source}")]
    Sim {
        cell: String,
        #[source]
        source: SimError,
    },
    #[error("cell {cell}: {source}")]
    Analytic {
        cell: String,
        #[source]
        source: AnalyticError,
    },
    #[error("cell {cell}: {source}")]
    Power {
        cell: String,
        #[source]
        source: PowerError,
    },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the number of CPUs.
    pub workers: Option<usize>,
    /// Print one line per finished cell to stderr.
    pub progress: bool,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub rows: Vec<CsvRow>,
    pub errata: ErrataLedger,
    pub resumed: usize,
    pub csv_path: PathBuf,
    pub meta_path: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alloc {
    /// Split fixed by the spec's `kappa`.
    Fixed,
    /// `P_s = P_r = P_total / 3`.
    Equal,
    /// SER-minimising split.
    Numeric,
}

/// One (scheme, M, N, SNR[, allocation]) job.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub scheme: Scheme,
    pub mod_order: ModOrder,
    pub num_relays: usize,
    pub snr_db: f64,
    pub alloc: Alloc,
}

impl Cell {
    pub fn key(&self) -> String {
        let base = format!(
            "{}/{}/{}/{}",
            self.scheme,
            self.mod_order,
            self.num_relays,
            csv::format_float(self.snr_db)
        );
        match self.alloc {
            Alloc::Fixed => base,
            Alloc::Equal => base + "/equal",
            Alloc::Numeric => base + "/numeric",
        }
    }
}

/// Cells in output order: scheme, M, N, SNR, allocation.
pub fn cells(spec: &ExperimentSpec) -> Vec<Cell> {
    let allocs: &[Alloc] = if spec.figure == Figure::Fig5PowerAlloc {
        &[Alloc::Equal, Alloc::Numeric]
    } else {
        &[Alloc::Fixed]
    };
    let mut out = Vec::new();
    for &scheme in &spec.schemes {
        for &mod_order in &spec.mod_orders {
            for &num_relays in &spec.relay_counts {
                for &snr_db in &spec.snr_points_db {
                    for &alloc in allocs {
                        out.push(Cell {
                            scheme,
                            mod_order,
                            num_relays,
                            snr_db,
                            alloc,
                        });
                    }
                }
            }
        }
    }
    out
}

fn uniform(variance: f64) -> LinkVariances {
    LinkVariances {
        source_relay: variance,
        relay_dest: variance,
        source_dest: variance,
    }
}

struct Analytic {
    row: CsvRow,
    kappa: f64,
    errata: Vec<ErratumRecord>,
}

/// Everything except the Monte Carlo columns. Cheap, so it is recomputed
/// for journaled cells to rebuild the errata ledger.
fn analytic_part(spec: &ExperimentSpec, cell: &Cell) -> Result<Analytic, RunError> {
    let key = cell.key();
    let analytic = |source| RunError::Analytic {
        cell: key.clone(),
        source,
    };
    let p_total = 10f64.powf(cell.snr_db / 10.0);
    let variances = uniform(spec.variance);
    let mut flags = Vec::new();
    let mut errata = Vec::new();

    let split = match cell.alloc {
        Alloc::Fixed => None,
        Alloc::Equal => Some(PowerSplit::equal(p_total).map_err(|source| RunError::Power {
            cell: key.clone(),
            source,
        })?),
        Alloc::Numeric => {
            let objective = AncSerObjective::new(cell.num_relays, cell.mod_order, 1.0, variances);
            let opt = numeric_allocation(p_total, &objective).map_err(|source| RunError::Power {
                cell: key.clone(),
                source,
            })?;
            let g = cell.mod_order.psk_constant();
            if closed_form_allocation(p_total, g).is_err() {
                flags.push("closed_form_infeasible".to_string());
            }
            errata.push(closed_form_erratum(p_total, g, &opt.split, &key));
            if opt.multimodal {
                flags.push("multimodal".to_string());
            }
            Some(opt.split)
        }
    };
    let kappa = split.map_or(spec.kappa, |s| s.kappa());
    match cell.alloc {
        Alloc::Fixed => {}
        Alloc::Equal => flags.push("alloc=equal".to_string()),
        Alloc::Numeric => flags.push("alloc=numeric".to_string()),
    }
    if let Some(s) = split {
        flags.push(format!("pr_over_2ps={}", csv::format_float(s.relay_to_sources_ratio())));
    }

    let template =
        SystemConfig::from_total_power(cell.num_relays, 1.0, kappa, 1.0, cell.mod_order, cell.scheme, variances)
            .map_err(|e| RunError::Sim {
                cell: key.clone(),
                source: SimError::Config(cell.snr_db, e),
            })?;
    let config = config_at_snr(&template, cell.snr_db).map_err(|source| RunError::Sim {
        cell: key.clone(),
        source,
    })?;
    let rates = compute_rate_params(&config);

    let mut row = CsvRow {
        scheme: cell.scheme,
        mod_order: cell.mod_order,
        num_relays: cell.num_relays,
        snr_db: cell.snr_db,
        ser_mc: None,
        ser_ci: None,
        ser_quadrature: None,
        ser_paper_closed: None,
        outage_mc: None,
        outage_analytic: None,
        p_s: Some(config.p_source()),
        p_r: Some(config.p_relay()),
        flags: Vec::new(),
    };

    if spec.figure.wants_ser() {
        let dist = BestRelayDistribution::new(cell.num_relays, rates.eta_relay_path).map_err(analytic)?;
        let quad = ser_quadrature(&dist, Some(rates.eta_direct), cell.mod_order).map_err(analytic)?;
        row.ser_quadrature = Some(quad);
        if cell.num_relays <= MAX_ALTERNATING_N {
            let rec = mgf_denominator_erratum(&dist, Some(rates.eta_direct), cell.mod_order, &key).map_err(analytic)?;
            if rec.magnitude > ERRATUM_THRESHOLD {
                flags.push("mgf_printed_gap".to_string());
            }
            errata.push(rec);
            if cell.mod_order == ModOrder::BPSK {
                let params =
                    SerParams::new(cell.mod_order, rates.eta_relay_path, rates.eta_direct).map_err(analytic)?;
                let closed = ser_closed_form(&dist, &params).map_err(analytic)?;
                row.ser_paper_closed = Some(closed.value);
                if closed.discrepancy > CLOSED_FORM_FLAG * quad.abs() {
                    flags.push("closed_form_gap".to_string());
                }
                errata.push(closed.erratum(&key));
            }
        }
        flags.push(
            match cell.scheme {
                Scheme::Anc => "sim_model_gap=anc_joint_ml",
                Scheme::DfNc => "sim_model_gap=df_relay_mai",
            }
            .to_string(),
        );
    }
    if spec.figure.wants_outage() {
        let dist = BestRelayDistribution::new(cell.num_relays, rates.eta_bottleneck).map_err(analytic)?;
        row.outage_analytic = Some(dist.cdf(spec.gamma_th).map_err(analytic)?);
        if cell.scheme == Scheme::Anc {
            flags.push("anc_exp_approx".to_string());
        }
    }
    row.flags = flags;
    Ok(Analytic { row, kappa, errata })
}

fn monte_carlo_part(spec: &ExperimentSpec, cell: &Cell, analytic: &Analytic) -> Result<CsvRow, RunError> {
    let key = cell.key();
    let sim = |source| RunError::Sim {
        cell: key.clone(),
        source,
    };
    let template = SystemConfig::from_total_power(
        cell.num_relays,
        1.0,
        analytic.kappa,
        1.0,
        cell.mod_order,
        cell.scheme,
        uniform(spec.variance),
    )
    .map_err(|e| sim(SimError::Config(cell.snr_db, e)))?;
    let mut row = analytic.row.clone();
    if spec.figure.wants_ser() {
        let stop = if spec.early_exit {
            StopRule::early_exit(spec.trials)
        } else {
            StopRule::fixed(spec.trials)
        };
        let pooled = estimate_ser(&template, cell.snr_db, stop, spec.seed)
            .map_err(sim)?
            .pooled();
        row.ser_mc = Some(pooled.ser);
        row.ser_ci = Some(pooled.ci_halfwidth);
    }
    if spec.figure.wants_outage() {
        let out = estimate_outage(&template, cell.snr_db, spec.gamma_th, spec.trials, spec.seed).map_err(sim)?;
        row.outage_mc = Some(out.probability);
    }
    Ok(row)
}

/// Computes all rows without touching the filesystem.
pub fn compute_rows(spec: &ExperimentSpec, opts: &RunOptions) -> Result<(Vec<CsvRow>, ErrataLedger), RunError> {
    let mut done = BTreeMap::new();
    compute_with(spec, opts, &mut done, None::<&Mutex<Journal>>)
}

fn compute_with(
    spec: &ExperimentSpec,
    opts: &RunOptions,
    done: &mut BTreeMap<String, CsvRow>,
    journal: Option<&Mutex<Journal>>,
) -> Result<(Vec<CsvRow>, ErrataLedger), RunError> {
    let cells = cells(spec);
    let total = cells.len();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = opts.workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder.build().map_err(|e| RunError::Pool(e.to_string()))?;
    let done = &*done;
    let results: Vec<Result<(CsvRow, Vec<ErratumRecord>), RunError>> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let key = cell.key();
                let analytic = analytic_part(spec, cell)?;
                if let Some(row) = done.get(&key) {
                    return Ok((row.clone(), analytic.errata));
                }
                let row = monte_carlo_part(spec, cell, &analytic)?;
                if let Some(j) = journal {
                    let path = j.lock().map_err(|e| RunError::Pool(e.to_string()))?.append(&key, &row);
                    path.map_err(|source| RunError::Io {
                        path: PathBuf::from(&spec.output_path),
                        source,
                    })?;
                }
                if opts.progress {
                    eprintln!(
                        "[{}/{total}] {key}",
                        cells.iter().position(|c| c == cell).unwrap_or(0) + 1
                    );
                }
                Ok((row, analytic.errata))
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(total);
    let mut ledger = ErrataLedger::new();
    for r in results {
        let (row, errata) = r?;
        rows.push(row);
        ledger.extend(errata);
    }
    Ok((rows, ledger))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Metadata sidecar path: `<out>.meta`.
pub fn meta_path(output: &Path) -> PathBuf {
    sibling(output, ".meta")
}

/// Renders the metadata sidecar.
pub fn render_metadata(spec: &ExperimentSpec, rows: usize, ledger: &ErrataLedger) -> String {
    let mut pairs: Vec<(String, String)> = vec![
        ("tool".into(), env!("CARGO_PKG_NAME").into()),
        ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ("config_hash".into(), spec.config_hash()),
        ("seed".into(), spec.seed.to_string()),
        ("figure".into(), spec.figure.to_string()),
        ("rows".into(), rows.to_string()),
        ("snr_axis".into(), "snr_db = 10 log10(P_total / N0), N0 = 1".into()),
        ("power_split".into(), "P_total = 2 P_s + P_r, P_s = kappa P_r".into()),
        ("equal_split".into(), "P_s = P_r = P_total / 3".into()),
        (
            "rng".into(),
            "chacha8, stream per batch of 1024 trials, same seed for every cell".into(),
        ),
    ];
    for line in spec.to_config_text().lines() {
        if let Some((k, v)) = line.split_once('=') {
            pairs.push((format!("spec.{k}"), v.to_string()));
        }
    }
    let triggered: Vec<&str> = ledger
        .triggered(ERRATUM_THRESHOLD)
        .into_iter()
        .map(ErratumKind::as_str)
        .collect();
    pairs.push(("errata.triggered".into(), triggered.join(",")));
    for kind in ErratumKind::ALL {
        let count = ledger.of_kind(kind).count();
        pairs.push((format!("errata.{kind}.count"), count.to_string()));
        if let Some(m) = ledger.max_magnitude(kind) {
            pairs.push((format!("errata.{kind}.max_magnitude"), csv::format_float(m)));
        }
    }
    for (i, r) in ledger.records().iter().enumerate() {
        pairs.push((
            format!("erratum.{i}"),
            format!(
                "{}|{}|{}|{}",
                r.kind,
                r.context,
                csv::format_float(r.magnitude),
                r.detail
            ),
        ));
    }
    kv::write_kv(pairs.iter().map(|(k, v)| (k.as_str(), v.clone())))
}

/// Parses a metadata sidecar into a map; duplicate keys are rejected.
pub fn parse_metadata(text: &str) -> Result<BTreeMap<String, String>, KvError> {
    let mut map = BTreeMap::new();
    for (i, (k, v)) in kv::parse_kv(text)?.into_iter().enumerate() {
        if map.insert(k.clone(), v).is_some() {
            return Err(KvError {
                line: i + 1,
                message: format!("duplicate key `{k}`"),
            });
        }
    }
    Ok(map)
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), RunError> {
    let tmp = sibling(path, ".tmp");
    std::fs::write(&tmp, contents).map_err(io_err(&tmp))?;
    std::fs::rename(&tmp, path).map_err(io_err(path))
}

/// Runs the sweep, writing `<out>`, `<out>.meta`, and a journal that is
/// removed on success. An existing journal for the same spec is resumed.
pub fn run_experiment(spec: &ExperimentSpec, opts: &RunOptions) -> Result<RunSummary, RunError> {
    let csv_path = PathBuf::from(&spec.output_path);
    let jpath = journal_path(&csv_path);
    let (journal, mut done) = Journal::open(&jpath, &spec.config_hash()).map_err(io_err(&jpath))?;
    let resumed = done.len();
    let journal = Mutex::new(journal);
    let (rows, errata) = compute_with(spec, opts, &mut done, Some(&journal))?;
    write_atomic(&csv_path, &csv::render(&rows))?;
    let meta = meta_path(&csv_path);
    write_atomic(&meta, &render_metadata(spec, rows.len(), &errata))?;
    journal
        .into_inner()
        .map_err(|e| RunError::Pool(e.to_string()))?
        .finish()
        .map_err(io_err(&jpath))?;
    Ok(RunSummary {
        rows,
        errata,
        resumed,
        csv_path,
        meta_path: meta,
    })
}
