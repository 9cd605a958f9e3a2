//! The `matroid/v1` JSON file format.
//!
//! ```json
//! {"format": "matroid/v1", "name": "K4", "n": 6,
//!  "repr": {"kind": "graph", "vertices": 4, "edges": [[0,1],[0,2],...]}}
//! ```
//!
//! Reading accepts the `bases`, `matrix`, `uniform` and `graph` kinds.
//! Writing always emits the canonical `bases` kind.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elemset::ElemSet;
use crate::matroid::{Matroid, MatroidError};

pub const FORMAT_TAG: &str = "matroid/v1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown format tag {0:?}, expected \"matroid/v1\"")]
    BadTag(String),
    #[error("declared n = {declared} but the representation has {actual} elements")]
    SizeMismatch { declared: usize, actual: usize },
    #[error("matrix declares {declared} rows but has {actual}")]
    RowCount { declared: usize, actual: usize },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Repr {
    Bases {
        bases: Vec<Vec<usize>>,
    },
    Matrix {
        field: u32,
        rows: usize,
        cols: usize,
        entries: Vec<Vec<i64>>,
    },
    Uniform {
        r: usize,
        n: usize,
    },
    Graph {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidFile {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub repr: Repr,
}

impl MatroidFile {
    /// Canonical `bases` form of `m`.
    pub fn from_matroid(m: &Matroid, name: Option<String>) -> Self {
        MatroidFile {
            format: FORMAT_TAG.to_string(),
            name,
            n: m.n(),
            repr: Repr::Bases {
                bases: m.bases().iter().map(|b| b.to_vec()).collect(),
            },
        }
    }

    pub fn to_matroid(&self) -> Result<Matroid, FormatError> {
        if self.format != FORMAT_TAG {
            return Err(FormatError::BadTag(self.format.clone()));
        }
        let m = match &self.repr {
            Repr::Bases { bases } => Matroid::from_bases(self.n, bases)?,
            Repr::Matrix {
                field,
                rows,
                cols,
                entries,
            } => {
                if *rows != entries.len() {
                    return Err(FormatError::RowCount {
                        declared: *rows,
                        actual: entries.len(),
                    });
                }
                Matroid::from_matrix(*field, *cols, entries)?
            }
            Repr::Uniform { r, n } => Matroid::uniform(*r, *n)?,
            Repr::Graph { vertices, edges } => Matroid::from_graph(*vertices, edges)?,
        };
        if m.n() != self.n {
            return Err(FormatError::SizeMismatch {
                declared: self.n,
                actual: m.n(),
            });
        }
        Ok(m)
    }
}

pub fn parse_matroid(json: &str) -> Result<(Matroid, Option<String>), FormatError> {
    let file: MatroidFile = serde_json::from_str(json)?;
    let m = file.to_matroid()?;
    Ok((m, file.name))
}

pub fn read_matroid(path: &Path) -> Result<(Matroid, Option<String>), FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matroid(&text)
}

pub fn write_matroid(m: &Matroid, name: Option<&str>) -> String {
    serde_json::to_string(&MatroidFile::from_matroid(m, name.map(str::to_string)))
        .expect("matroid files always serialize")
}

/// Parses `"0,2,3,5"` (spaces and an empty list allowed).
pub fn parse_set(list: &str) -> Result<ElemSet, String> {
    let mut set = ElemSet::EMPTY;
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let e: usize = part
            .parse()
            .map_err(|_| format!("{part:?} is not an element index"))?;
        if e >= crate::elemset::CAPACITY {
            return Err(format!(
                "element {e} exceeds capacity {}",
                crate::elemset::CAPACITY
            ));
        }
        set = set.with(e);
    }
    Ok(set)
}
