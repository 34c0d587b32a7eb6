//! Catalog of known network protection codes.
//!
//! Record format, one per line (`#` starts a comment, which on a record
//! line becomes that record's note):
//!
//! ```text
//! n k d_min kind@tables source
//! ```
//!
//! `source` is `bch` (construct the narrow-sense BCH code with designed
//! distance `d_min`), `-` (parameters only) or `k` generator rows of `n`
//! bits each.

use std::path::Path;
use std::sync::OnceLock;

use super::bch::construct_bch;
use super::linear::{LinearCode, Provenance};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

const BUNDLED: &str = include_str!("../../data/catalog.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Bch,
    ParametersOnly,
    Matrix(BitMatrix),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub kind: String,
    pub tables: Vec<String>,
    pub source: Source,
    pub note: Option<String>,
    pub code: Option<LinearCode>,
}

impl CatalogEntry {
    pub fn m(&self) -> usize {
        self.n - self.k
    }

    /// Failures the code survives, `d_min - 1`.
    pub fn t(&self) -> usize {
        self.d - 1
    }

    pub fn parameters(&self) -> String {
        format!("[{},{},{}]", self.n, self.k, self.d)
    }

    pub fn provenance(&self) -> String {
        format!("{}@{}", self.kind, self.tables.join(","))
    }

    fn to_line(&self) -> String {
        let source = match &self.source {
            Source::Bch => "bch".to_string(),
            Source::ParametersOnly => "-".to_string(),
            Source::Matrix(g) => g.to_rows().iter().map(|r| {
                r.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect::<String>()
            }).collect::<Vec<_>>().join(" "),
        };
        let mut line = format!("{} {} {} {} {}", self.n, self.k, self.d, self.provenance(), source);
        if let Some(note) = &self.note {
            line.push_str(" # ");
            line.push_str(note);
        }
        line
    }
}

/// Filter for [`Catalog::query`]; unset fields match everything.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CatalogQuery {
    pub n: Option<usize>,
    pub t: Option<usize>,
    pub kind: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The catalog shipped with the crate, parsed once.
    pub fn bundled() -> &'static Catalog {
        static CELL: OnceLock<Catalog> = OnceLock::new();
        CELL.get_or_init(|| Catalog::parse(BUNDLED).expect("bundled catalog is valid"))
    }

    pub fn bundled_text() -> &'static str {
        BUNDLED
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Catalog::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Catalog> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let (body, note) = match raw.split_once('#') {
                Some((b, n)) => (b, Some(n.trim().to_string()).filter(|n| !n.is_empty())),
                None => (raw, None),
            };
            if body.trim().is_empty() {
                continue;
            }
            entries.push(parse_record(body, note).map_err(|reason| Error::Catalog {
                line: line_no,
                reason,
            })?);
        }
        Ok(Catalog { entries })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn query(&self, q: &CatalogQuery) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| q.n.is_none_or(|n| e.n == n))
            .filter(|e| q.t.is_none_or(|t| e.t() == t))
            .filter(|e| q.kind.as_deref().is_none_or(|k| e.kind == k))
            .collect()
    }

    /// Entries that carry a generator matrix.
    pub fn codes(&self) -> impl Iterator<Item = (&CatalogEntry, &LinearCode)> {
        self.entries
            .iter()
            .filter_map(|e| e.code.as_ref().map(|c| (e, c)))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.to_line());
            out.push('\n');
        }
        out
    }
}

fn parse_record(body: &str, note: Option<String>) -> std::result::Result<CatalogEntry, String> {
    let tokens: Vec<&str> = body.split_whitespace().collect();
    if tokens.len() < 5 {
        return Err(format!(
            "expected `n k d_min kind@tables source`, found {} fields",
            tokens.len()
        ));
    }
    let num = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| format!("{what} `{s}` is not a non-negative integer"))
    };
    let n = num(tokens[0], "n")?;
    let k = num(tokens[1], "k")?;
    let d = num(tokens[2], "d_min")?;
    if k == 0 || k >= n || d == 0 || d > n {
        return Err(format!("parameters [{n},{k},{d}] are not a proper code"));
    }
    let (kind, tables) = tokens[3]
        .split_once('@')
        .ok_or_else(|| format!("provenance `{}` lacks `@tables`", tokens[3]))?;
    if kind.is_empty() {
        return Err("empty kind".into());
    }
    let tables: Vec<String> = tables
        .split(',')
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect();
    let provenance = Provenance::Explicit(format!("{kind}@{}", tables.join(",")));
    let rest = &tokens[4..];
    let (source, code) = match rest {
        ["-"] => (Source::ParametersOnly, None),
        ["bch"] => {
            let code = construct_bch(n, d).map_err(|e| e.to_string())?;
            if code.k() != k || code.d_min().value() != d {
                return Err(format!(
                    "BCH construction gives {}, not [{n},{k},{d}]",
                    code.parameters()
                ));
            }
            (Source::Bch, Some(code))
        }
        rows => {
            if rows.len() != k {
                return Err(format!("expected {k} generator rows, found {}", rows.len()));
            }
            let g = BitMatrix::from_text(&rows.join("\n")).map_err(|e| e.to_string())?;
            if g.cols() != n {
                return Err(format!("generator rows have {} bits, expected {n}", g.cols()));
            }
            let code = LinearCode::from_generator(&g, provenance).map_err(|e| e.to_string())?;
            if code.d_min().value() != d {
                return Err(format!(
                    "generator has minimum distance {}, not {d}",
                    code.d_min()
                ));
            }
            (Source::Matrix(g), Some(code))
        }
    };
    Ok(CatalogEntry {
        n,
        k,
        d,
        kind: kind.to_string(),
        tables,
        source,
        note,
        code,
    })
}
