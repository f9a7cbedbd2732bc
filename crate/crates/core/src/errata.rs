//! Records of where published closed forms disagree with the quantities
//! they are meant to compute.
//!
//! Nothing here replaces an oracle: each record is produced by evaluating
//! the printed form next to the authoritative one and measuring the gap.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErratumKind {
    /// MGF terms printed with `s + eta` instead of `s + n eta`.
    MgfDenominator,
    /// Closed-form BPSK SER versus its quadrature.
    SerClosedForm,
    /// Closed-form power split: relay-power sign and feasibility.
    PowerAllocClosedForm,
}

impl ErratumKind {
    pub const ALL: [ErratumKind; 3] = [
        ErratumKind::MgfDenominator,
        ErratumKind::SerClosedForm,
        ErratumKind::PowerAllocClosedForm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErratumKind::MgfDenominator => "mgf_denominator",
            ErratumKind::SerClosedForm => "ser_closed_form",
            ErratumKind::PowerAllocClosedForm => "power_alloc_closed_form",
        }
    }
}

impl fmt::Display for ErratumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErratumRecord {
    pub kind: ErratumKind,
    pub context: String,
    /// Measured size of the discrepancy (absolute, in the quantity's units).
    pub magnitude: f64,
    pub detail: String,
}

impl ErratumRecord {
    pub fn new(kind: ErratumKind, context: impl Into<String>, magnitude: f64, detail: impl Into<String>) -> Self {
        ErratumRecord {
            kind,
            context: context.into(),
            magnitude,
            detail: detail.into(),
        }
    }
}

/// Ordered collection of errata.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ErrataLedger {
    records: Vec<ErratumRecord>,
}

impl ErrataLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: ErratumRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = ErratumRecord>) {
        self.records.extend(records);
    }

    pub fn records(&self) -> &[ErratumRecord] {
        &self.records
    }

    pub fn of_kind(&self, kind: ErratumKind) -> impl Iterator<Item = &ErratumRecord> {
        self.records.iter().filter(move |r| r.kind == kind)
    }

    /// Largest magnitude recorded for `kind`, if any record exists.
    pub fn max_magnitude(&self, kind: ErratumKind) -> Option<f64> {
        self.of_kind(kind).map(|r| r.magnitude).reduce(f64::max)
    }

    /// Kinds with at least one record whose magnitude exceeds `threshold`.
    pub fn triggered(&self, threshold: f64) -> Vec<ErratumKind> {
        ErratumKind::ALL
            .into_iter()
            .filter(|k| self.of_kind(*k).any(|r| !(r.magnitude <= threshold)))
            .collect()
    }
}
