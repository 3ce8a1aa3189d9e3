//! Plain-text group catalog files.
//!
//! ```text
//! Z3          <- name token
//! 3           <- order n
//! 0 1 2       <- n rows of n indices, identity at 0
//! 1 2 0
//! 2 0 1
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::groups::{validate_table, FiniteGroup, GroupError};

#[derive(Debug, Error)]
pub enum CatalogErrorKind {
    #[error("missing name line")]
    MissingName,
    #[error("name line must be a single token")]
    BadName,
    #[error("missing or malformed order line")]
    BadOrder,
    #[error("expected {expected} rows, found {found}")]
    MissingRows { expected: usize, found: usize },
    #[error("row has {found} entries, expected {expected}")]
    RowLength { expected: usize, found: usize },
    #[error("malformed entry {0:?}")]
    BadEntry(String),
    #[error("trailing content after the table")]
    TrailingGarbage,
    #[error("table is not a group: {0}")]
    Group(#[from] GroupError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("no catalog files found")]
    Empty,
}

/// A catalog failure with the file and (1-based) line it was detected on.
#[derive(Debug, Error)]
#[error("{}:{line}: {kind}", path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<input>".into()))]
pub struct CatalogError {
    pub path: Option<PathBuf>,
    pub line: usize,
    pub kind: CatalogErrorKind,
}

fn err(line: usize, kind: CatalogErrorKind) -> CatalogError {
    CatalogError { path: None, line, kind }
}

pub fn parse_group(text: &str) -> Result<FiniteGroup, CatalogError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, name_line) = lines.next().ok_or_else(|| err(1, CatalogErrorKind::MissingName))?;
    let mut tokens = name_line.split_whitespace();
    let name = match (tokens.next(), tokens.next()) {
        (Some(name), None) => name.to_string(),
        (None, _) => return Err(err(1, CatalogErrorKind::MissingName)),
        _ => return Err(err(1, CatalogErrorKind::BadName)),
    };
    let order: usize = match lines.next() {
        Some((_, l)) => l.trim().parse().map_err(|_| err(2, CatalogErrorKind::BadOrder))?,
        None => return Err(err(2, CatalogErrorKind::BadOrder)),
    };
    if order == 0 {
        return Err(err(2, CatalogErrorKind::BadOrder));
    }
    let mut rows = Vec::with_capacity(order);
    for found in 0..order {
        let (no, line) = lines.next().ok_or_else(|| {
            err(3 + found, CatalogErrorKind::MissingRows { expected: order, found })
        })?;
        let row = line
            .split_whitespace()
            .map(|tok| tok.parse::<usize>().map_err(|_| err(no, CatalogErrorKind::BadEntry(tok.to_string()))))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != order {
            return Err(err(no, CatalogErrorKind::RowLength { expected: order, found: row.len() }));
        }
        rows.push(row);
    }
    if let Some((no, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(err(no, CatalogErrorKind::TrailingGarbage));
    }
    validate_table(&rows)
        .map(|g| g.with_name(name))
        .map_err(|e| err(3, CatalogErrorKind::Group(e)))
}

pub fn format_group(group: &FiniteGroup) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", group.name());
    let _ = writeln!(out, "{}", group.order());
    for a in group.elements() {
        let row: Vec<String> = group.row(a).iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn load_group_file(path: &Path) -> Result<FiniteGroup, CatalogError> {
    let text = fs::read_to_string(path).map_err(|e| CatalogError {
        path: Some(path.to_path_buf()),
        line: 0,
        kind: e.into(),
    })?;
    parse_group(&text).map_err(|mut e| {
        e.path = Some(path.to_path_buf());
        e
    })
}

/// Loads a single catalog file, or every `*.txt` file of a directory in
/// file-name order.
pub fn load_catalog(path: &Path) -> Result<Vec<FiniteGroup>, CatalogError> {
    let io = |e: std::io::Error| CatalogError { path: Some(path.to_path_buf()), line: 0, kind: e.into() };
    if path.is_file() {
        return Ok(vec![load_group_file(path)?]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(io)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "txt"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CatalogError { path: Some(path.to_path_buf()), line: 0, kind: CatalogErrorKind::Empty });
    }
    files.iter().map(|p| load_group_file(p)).collect()
}
