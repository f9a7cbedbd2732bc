//! Plain-text `key = value` files: one pair per line, `#` starts a comment.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct KvError {
    pub line: usize,
    pub message: String,
}

/// Parses `key = value` lines, keeping their order. Keys are lowercased
/// and `-` is normalised to `_`.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>, KvError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| KvError {
            line: i + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        if key.is_empty() {
            return Err(KvError {
                line: i + 1,
                message: "empty key".into(),
            });
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

/// Renders pairs one per line. Values must not contain newlines.
pub fn write_kv<'a>(pairs: impl IntoIterator<Item = (&'a str, String)>) -> String {
    let mut s = String::new();
    for (k, v) in pairs {
        debug_assert!(!v.contains('\n'));
        s.push_str(k);
        s.push('=');
        s.push_str(&v);
        s.push('\n');
    }
    s
}
