//! Append-and-skip journal of finished rows, keyed by cell.
//!
//! Layout: a header line `#spec=<config hash>`, then one `key<TAB>csv row`
//! line per finished cell. A journal whose hash does not match the current
//! spec is ignored. A torn final line (no newline) is dropped.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use super::csv::CsvRow;

/// Finished rows recovered from a journal.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JournalContents {
    pub spec_hash: Option<String>,
    pub rows: BTreeMap<String, CsvRow>,
    /// Lines that could not be parsed and were skipped.
    pub skipped: usize,
}

/// Parses journal text. Never fails: damaged lines are counted and skipped.
pub fn parse_journal(text: &str) -> JournalContents {
    let mut out = JournalContents::default();
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    if complete.len() < text.len() {
        out.skipped += 1;
    }
    for (i, line) in complete.lines().enumerate() {
        if i == 0 {
            if let Some(h) = line.strip_prefix("#spec=") {
                out.spec_hash = Some(h.to_string());
                continue;
            }
        }
        let parsed = line
            .split_once('\t')
            .and_then(|(k, r)| CsvRow::parse(r).ok().map(|row| (k.to_string(), row)));
        match parsed {
            Some((k, row)) if !k.is_empty() => {
                out.rows.insert(k, row);
            }
            _ => out.skipped += 1,
        }
    }
    out
}

/// Journal path for an output file: `<out>.journal`.
pub fn journal_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".journal");
    PathBuf::from(s)
}

/// Open journal being appended to.
#[derive(Debug)]
pub struct Journal {
    path: PathBuf,
    file: File,
}

impl Journal {
    /// Opens (or starts) the journal for `spec_hash`, returning any rows
    /// already recorded under the same hash.
    pub fn open(path: &Path, spec_hash: &str) -> io::Result<(Self, BTreeMap<String, CsvRow>)> {
        let existing = match std::fs::read_to_string(path) {
            Ok(text) => parse_journal(&text),
            Err(e) if e.kind() == io::ErrorKind::NotFound => JournalContents::default(),
            Err(e) => return Err(e),
        };
        let rows = if existing.spec_hash.as_deref() == Some(spec_hash) {
            existing.rows
        } else {
            BTreeMap::new()
        };
        // Rewrite so a torn tail or stale spec does not linger.
        let mut file = File::create(path)?;
        writeln!(file, "#spec={spec_hash}")?;
        for (k, row) in &rows {
            writeln!(file, "{k}\t{}", row.to_line())?;
        }
        file.sync_data()?;
        let file = OpenOptions::new().append(true).open(path)?;
        Ok((
            Journal {
                path: path.to_path_buf(),
                file,
            },
            rows,
        ))
    }

    pub fn append(&mut self, key: &str, row: &CsvRow) -> io::Result<()> {
        let line = format!("{key}\t{}\n", row.to_line());
        self.file.write_all(line.as_bytes())?;
        self.file.flush()
    }

    /// Removes the journal after the final CSV is in place.
    pub fn finish(self) -> io::Result<()> {
        drop(self.file);
        std::fs::remove_file(&self.path)
    }
}
