//! Reviewed reference values, one per line:
//! `q=<int> key=<string> value=<big-integer>`.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;
use thiserror::Error;

/// The values shipped with the crate.
pub const BUNDLED: &str = include_str!("../golden/values.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GoldenError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: duplicate entry q={q} key={key}")]
    Duplicate { line: usize, q: u64, key: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Golden(pub BTreeMap<(u64, String), BigInt>);

impl Golden {
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Golden, GoldenError> {
        let mut out = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| GoldenError::Malformed { line, msg: msg.to_string() };
            let mut fields = s.split_whitespace();
            let mut take = |name: &str| -> Result<String, GoldenError> {
                let tok = fields.next().ok_or_else(|| bad(&format!("missing {name}")))?;
                tok.strip_prefix(&format!("{name}="))
                    .map(str::to_string)
                    .ok_or_else(|| bad(&format!("expected {name}=...")))
            };
            let q: u64 = take("q")?.parse().map_err(|_| bad("q is not an integer"))?;
            let key = take("key")?;
            let value: BigInt = take("value")?.parse().map_err(|_| bad("value is not an integer"))?;
            if fields.next().is_some() {
                return Err(bad("trailing fields"));
            }
            if out.insert((q, key.clone()), value).is_some() {
                return Err(GoldenError::Duplicate { line, q, key });
            }
        }
        Ok(Golden(out))
    }

    pub fn bundled() -> Golden {
        Golden::parse(BUNDLED).expect("bundled golden file parses")
    }

    pub fn get(&self, q: u64, key: &str) -> Option<&BigInt> {
        self.0.get(&(q, key.to_string()))
    }

    pub fn insert(&mut self, q: u64, key: &str, value: impl Into<BigInt>) {
        self.0.insert((q, key.to_string()), value.into());
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for ((q, key), v) in &self.0 {
            writeln!(s, "q={q} key={key} value={v}").unwrap();
        }
        s
    }
}
