//! Fixed-schema result rows.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{ModOrder, Scheme};

pub const HEADER: &str =
    "scheme,mod_order,num_relays,snr_db,ser_mc,ser_ci,ser_quadrature,ser_paper_closed,outage_mc,outage_analytic,p_s,p_r,flags";

const COLUMNS: usize = 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RowError {
    #[error("expected {COLUMNS} columns, found {0}")]
    ColumnCount(usize),
    #[error("column `{column}`: {message}")]
    Column { column: &'static str, message: String },
}

/// One CSV line. `None` renders as an empty cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub scheme: Scheme,
    pub mod_order: ModOrder,
    pub num_relays: usize,
    pub snr_db: f64,
    pub ser_mc: Option<f64>,
    pub ser_ci: Option<f64>,
    pub ser_quadrature: Option<f64>,
    pub ser_paper_closed: Option<f64>,
    pub outage_mc: Option<f64>,
    pub outage_analytic: Option<f64>,
    pub p_s: Option<f64>,
    pub p_r: Option<f64>,
    /// `;`-separated tokens.
    pub flags: Vec<String>,
}

/// Shortest round-trip decimal; switches to exponent form for very large or
/// small magnitudes.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

/// Flag tokens: non-empty, `[A-Za-z0-9_.+=-]` only.
pub fn is_flag_token(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b"_.+=-".contains(&b))
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn parse_opt(column: &'static str, s: &str) -> Result<Option<f64>, RowError> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse::<f64>().map(Some).map_err(|_| RowError::Column {
        column,
        message: format!("`{s}` is not a number"),
    })
}

impl CsvRow {
    pub fn to_line(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.scheme,
            self.mod_order,
            self.num_relays,
            format_float(self.snr_db),
            opt(self.ser_mc),
            opt(self.ser_ci),
            opt(self.ser_quadrature),
            opt(self.ser_paper_closed),
            opt(self.outage_mc),
            opt(self.outage_analytic),
            opt(self.p_s),
            opt(self.p_r),
            self.flags.join(";")
        );
        s
    }

    pub fn parse(line: &str) -> Result<Self, RowError> {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != COLUMNS {
            return Err(RowError::ColumnCount(cols.len()));
        }
        let col_err = |column: &'static str| move |message: String| RowError::Column { column, message };
        let scheme = cols[0].parse().map_err(col_err("scheme"))?;
        let m: u32 = cols[1]
            .parse()
            .map_err(|_| col_err("mod_order")(format!("`{}`", cols[1])))?;
        let mod_order = ModOrder::new(m).map_err(|e| col_err("mod_order")(e.to_string()))?;
        let num_relays = cols[2]
            .parse()
            .map_err(|_| col_err("num_relays")(format!("`{}`", cols[2])))?;
        let snr_db = parse_opt("snr_db", cols[3])?.ok_or_else(|| col_err("snr_db")("empty".into()))?;
        let flags = if cols[12].is_empty() {
            Vec::new()
        } else {
            cols[12].split(';').map(str::to_string).collect()
        };
        if let Some(bad) = flags.iter().find(|f| !is_flag_token(f)) {
            return Err(col_err("flags")(format!("bad flag token {bad:?}")));
        }
        Ok(CsvRow {
            scheme,
            mod_order,
            num_relays,
            snr_db,
            ser_mc: parse_opt("ser_mc", cols[4])?,
            ser_ci: parse_opt("ser_ci", cols[5])?,
            ser_quadrature: parse_opt("ser_quadrature", cols[6])?,
            ser_paper_closed: parse_opt("ser_paper_closed", cols[7])?,
            outage_mc: parse_opt("outage_mc", cols[8])?,
            outage_analytic: parse_opt("outage_analytic", cols[9])?,
            p_s: parse_opt("p_s", cols[10])?,
            p_r: parse_opt("p_r", cols[11])?,
            flags,
        })
    }

    pub fn has_flag(&self, name: &str) -> bool {
        self.flags
            .iter()
            .any(|f| f == name || f.split_once('=').is_some_and(|(k, _)| k == name))
    }
}

/// Header plus rows, newline-terminated.
pub fn render(rows: &[CsvRow]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_line());
        s.push('\n');
    }
    s
}

/// Parses a whole CSV file written by [`render`].
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, RowError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(HEADER) => {}
        Some(other) => {
            return Err(RowError::Column {
                column: "header",
                message: format!("unexpected header `{other}`"),
            })
        }
        None => return Ok(Vec::new()),
    }
    lines.map(CsvRow::parse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_opt() -> impl Strategy<Value = Option<f64>> {
        prop_oneof![
            Just(None),
            any::<f64>().prop_filter("finite", |x| x.is_finite()).prop_map(Some)
        ]
    }

    #[test]
    fn empty_cells_and_header() {
        let row = CsvRow {
            scheme: Scheme::DfNc,
            mod_order: ModOrder::BPSK,
            num_relays: 5,
            snr_db: 7.5,
            ser_mc: None,
            ser_ci: None,
            ser_quadrature: None,
            ser_paper_closed: None,
            outage_mc: Some(0.25),
            outage_analytic: Some(1e-7),
            p_s: None,
            p_r: None,
            flags: vec![],
        };
        assert_eq!(row.to_line(), "df,2,5,7.5,,,,,0.25,1e-7,,,");
        assert_eq!(HEADER.split(',').count(), COLUMNS);
    }

    #[test]
    fn flag_tokens_restricted() {
        let line = "anc,2,1,0.0,,,,,,,,,ok;bad\r";
        assert!(CsvRow::parse(line).is_err());
        assert!(CsvRow::parse("anc,2,1,0.0,,,,,,,,,a;;b").is_err());
        assert_eq!(
            CsvRow::parse("anc,2,1,0.0,,,,,,,,,pr_over_2ps=1.5e-3;x")
                .unwrap()
                .flags
                .len(),
            2
        );
    }

    proptest! {
        #[test]
        fn rows_round_trip(
            scheme in prop::sample::select(vec![Scheme::Anc, Scheme::DfNc]),
            e in 1u32..6,
            n in 1usize..100,
            snr in -50.0..50.0f64,
            vals in prop::collection::vec(arb_opt(), 8),
            flags in prop::collection::vec("[a-z_]{1,8}(=[0-9.]{1,5})?", 0..3),
        ) {
            let row = CsvRow {
                scheme,
                mod_order: ModOrder::new(1 << e).unwrap(),
                num_relays: n,
                snr_db: snr,
                ser_mc: vals[0],
                ser_ci: vals[1],
                ser_quadrature: vals[2],
                ser_paper_closed: vals[3],
                outage_mc: vals[4],
                outage_analytic: vals[5],
                p_s: vals[6],
                p_r: vals[7],
                flags,
            };
            let back = CsvRow::parse(&row.to_line()).unwrap();
            prop_assert_eq!(back, row);
        }
    }
}
