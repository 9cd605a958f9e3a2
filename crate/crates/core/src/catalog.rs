//! Matroid catalogs and the six-point counterexample search.
//!
//! A catalog spec is a comma-separated list of parts:
//!
//! | part | matroids |
//! |---|---|
//! | `uniform:N` | `U(r, n)` for `0 <= r <= n <= N` |
//! | `binary:R:N[:dual]` | column subsets of size `<= N` of `PG(r-1, 2)`, `r <= R` |
//! | `ternary:R:N[:dual]` | the same over GF(3) |
//! | `graphs:V` | cycle matroids of connected simple graphs on `<= V` vertices |
//! | `dir:PATH` | every `*.json` matroid file in `PATH`, by file name |
//! | `random-binary:R:N:COUNT[:SEED]` | random `R x N` matrices over GF(2) |
//! | `random-ternary:...`, `random-gf5:...`, `random-gf7:...` | the same over GF(3), GF(5), GF(7) |
//! | `random-graph:V:E:COUNT[:SEED]` | random simple graphs with `E` edges |
//!
//! `:dual` also emits the dual of each matroid. Matroids are deduplicated by
//! labeled basis family across the whole catalog and numbered in order.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cci::cci_spectrum;
use crate::elemset::{k_subsets, ElemSet, CAPACITY};
use crate::envelope::is_envelope;
use crate::format::{read_matroid, FormatError};
use crate::matroid::{Matroid, MatroidError};

/// Largest number of raw candidates a spec may generate.
pub const CANDIDATE_LIMIT: u128 = 500_000;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("bad catalog spec {0:?}: {1}")]
    BadSpec(String, String),
    #[error("catalog part {part:?} would generate about {estimate} candidates (limit {limit})")]
    SpecTooLarge {
        part: String,
        estimate: u128,
        limit: u128,
    },
    #[error("cannot list {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Part {
    Uniform {
        max_n: usize,
    },
    Projective {
        p: u32,
        max_rank: usize,
        max_n: usize,
        dual: bool,
    },
    Graphs {
        max_vertices: usize,
    },
    Dir(PathBuf),
    RandomMatrix {
        p: u32,
        rank: usize,
        n: usize,
        count: usize,
        seed: u64,
    },
    RandomGraph {
        vertices: usize,
        edges: usize,
        count: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogSpec {
    pub parts: Vec<(String, Part)>,
}

impl CatalogSpec {
    /// Parses a spec; random parts without an explicit seed use `seed`.
    pub fn parse(spec: &str, seed: u64) -> Result<Self, CatalogError> {
        let mut parts = Vec::new();
        for raw in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            parts.push((raw.to_string(), parse_part(raw, seed)?));
        }
        Ok(CatalogSpec { parts })
    }

    /// Raw candidate count before deduplication.
    pub fn estimate(&self) -> u128 {
        self.parts.iter().map(|(_, p)| estimate(p)).sum()
    }
}

fn parse_part(raw: &str, seed: u64) -> Result<Part, CatalogError> {
    let bad = |why: &str| CatalogError::BadSpec(raw.to_string(), why.to_string());
    let (kind, rest) = raw
        .split_once(':')
        .ok_or_else(|| bad("expected KIND:ARGS"))?;
    if kind == "dir" {
        return Ok(Part::Dir(PathBuf::from(rest)));
    }
    let fields: Vec<&str> = rest.split(':').collect();
    let num = |i: usize| -> Result<u64, CatalogError> {
        fields
            .get(i)
            .ok_or_else(|| bad("missing argument"))?
            .parse()
            .map_err(|_| bad("arguments must be non-negative integers"))
    };
    let arity = |lo: usize, hi: usize| {
        if fields.len() < lo || fields.len() > hi {
            Err(bad("wrong number of arguments"))
        } else {
            Ok(())
        }
    };
    let field_of = |name: &str| match name {
        "binary" => Some(2),
        "ternary" => Some(3),
        "gf5" => Some(5),
        "gf7" => Some(7),
        _ => None,
    };
    match kind {
        "uniform" => {
            arity(1, 1)?;
            Ok(Part::Uniform {
                max_n: num(0)? as usize,
            })
        }
        "graphs" => {
            arity(1, 1)?;
            Ok(Part::Graphs {
                max_vertices: num(0)? as usize,
            })
        }
        "binary" | "ternary" => {
            arity(2, 3)?;
            let dual = match fields.get(2) {
                None => false,
                Some(&"dual") => true,
                Some(_) => return Err(bad("third argument must be `dual`")),
            };
            Ok(Part::Projective {
                p: field_of(kind).unwrap(),
                max_rank: num(0)? as usize,
                max_n: num(1)? as usize,
                dual,
            })
        }
        "random-graph" => {
            arity(3, 4)?;
            Ok(Part::RandomGraph {
                vertices: num(0)? as usize,
                edges: num(1)? as usize,
                count: num(2)? as usize,
                seed: if fields.len() == 4 { num(3)? } else { seed },
            })
        }
        _ => {
            let p = kind
                .strip_prefix("random-")
                .and_then(field_of)
                .ok_or_else(|| bad("unknown catalog kind"))?;
            arity(3, 4)?;
            Ok(Part::RandomMatrix {
                p,
                rank: num(0)? as usize,
                n: num(1)? as usize,
                count: num(2)? as usize,
                seed: if fields.len() == 4 { num(3)? } else { seed },
            })
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn projective_size(p: u32, r: usize) -> usize {
    ((p as usize).pow(r as u32) - 1) / (p as usize - 1)
}

fn estimate(part: &Part) -> u128 {
    match *part {
        Part::Uniform { max_n } => ((max_n + 1) * (max_n + 2) / 2) as u128,
        Part::Projective {
            p,
            max_rank,
            max_n,
            dual,
        } => {
            let raw: u128 = (1..=max_rank)
                .map(|r| {
                    let pts = projective_size(p, r) as u128;
                    (1..=max_n as u128).map(|s| binomial(pts, s)).sum::<u128>()
                })
                .sum();
            if dual {
                2 * raw
            } else {
                raw
            }
        }
        Part::Graphs { max_vertices } => (1..=max_vertices)
            .map(|v| 1u128 << (v * v.saturating_sub(1) / 2).min(100))
            .sum(),
        Part::Dir(_) => 0,
        Part::RandomMatrix { count, .. } | Part::RandomGraph { count, .. } => count as u128,
    }
}

/// One catalog matroid with a stable sequence id.
#[derive(Debug, Clone)]
pub struct CatalogItem {
    pub id: usize,
    /// The spec part that produced the matroid.
    pub source: String,
    pub name: String,
    pub matroid: Matroid,
}

struct Sink {
    seen: HashSet<(usize, Vec<ElemSet>)>,
    items: Vec<CatalogItem>,
}

impl Sink {
    fn push(&mut self, source: &str, name: String, m: Matroid) {
        if self.seen.insert((m.n(), m.bases().to_vec())) {
            self.items.push(CatalogItem {
                id: self.items.len(),
                source: source.to_string(),
                name,
                matroid: m,
            });
        }
    }
}

/// Builds the whole catalog in deterministic order.
pub fn gen_catalog(spec: &CatalogSpec) -> Result<Vec<CatalogItem>, CatalogError> {
    for (raw, part) in &spec.parts {
        let estimate = estimate(part);
        if estimate > CANDIDATE_LIMIT {
            return Err(CatalogError::SpecTooLarge {
                part: raw.clone(),
                estimate,
                limit: CANDIDATE_LIMIT,
            });
        }
    }
    let mut sink = Sink {
        seen: HashSet::new(),
        items: Vec::new(),
    };
    for (raw, part) in &spec.parts {
        generate(raw, part, &mut sink)?;
    }
    Ok(sink.items)
}

fn check_n(raw: &str, n: usize) -> Result<(), CatalogError> {
    if n > CAPACITY {
        return Err(CatalogError::BadSpec(
            raw.to_string(),
            format!("ground sets above {CAPACITY} elements are not supported"),
        ));
    }
    Ok(())
}

fn generate(raw: &str, part: &Part, sink: &mut Sink) -> Result<(), CatalogError> {
    match part {
        &Part::Uniform { max_n } => {
            check_n(raw, max_n)?;
            for n in 0..=max_n {
                for r in 0..=n {
                    sink.push(raw, format!("U({r},{n})"), Matroid::uniform(r, n)?);
                }
            }
        }
        &Part::Projective {
            p,
            max_rank,
            max_n,
            dual,
        } => {
            check_n(raw, max_n)?;
            for r in 1..=max_rank {
                let points = projective_points(p, r);
                for size in 1..=max_n.min(points.len()) {
                    for cols in (0..points.len()).combinations(size) {
                        let rows: Vec<Vec<i64>> = (0..r)
                            .map(|i| cols.iter().map(|&c| points[c][i]).collect())
                            .collect();
                        let m = Matroid::from_matrix(p, size, &rows)?;
                        let name = format!("PG({},{p}){cols:?}", r - 1);
                        if dual {
                            let d = m.dual().clone();
                            sink.push(raw, name.clone(), m);
                            sink.push(raw, format!("dual {name}"), d);
                        } else {
                            sink.push(raw, name, m);
                        }
                    }
                }
            }
        }
        &Part::Graphs { max_vertices } => {
            for v in 1..=max_vertices {
                let all: Vec<(usize, usize)> = (0..v).tuple_combinations().collect();
                for mask in 0u64..(1u64 << all.len()) {
                    let edges: Vec<(usize, usize)> = (0..all.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| all[i])
                        .collect();
                    if edges.len() > CAPACITY || !connected(v, &edges) {
                        continue;
                    }
                    let m = Matroid::from_graph(v, &edges)?;
                    sink.push(raw, format!("graph v{v} {edges:?}"), m);
                }
            }
        }
        Part::Dir(path) => {
            for file in json_files(path)? {
                let (m, name) = read_matroid(&file)?;
                let stem = file.file_stem().map(|s| s.to_string_lossy().into_owned());
                sink.push(raw, name.or(stem).unwrap_or_default(), m);
            }
        }
        &Part::RandomMatrix {
            p,
            rank,
            n,
            count,
            seed,
        } => {
            check_n(raw, n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..count {
                let rows: Vec<Vec<i64>> = (0..rank)
                    .map(|_| (0..n).map(|_| rng.gen_range(0..p as i64)).collect())
                    .collect();
                let m = Matroid::from_matrix(p, n, &rows)?;
                sink.push(
                    raw,
                    format!("random GF({p}) {rank}x{n} #{i} seed {seed}"),
                    m,
                );
            }
        }
        &Part::RandomGraph {
            vertices,
            edges,
            count,
            seed,
        } => {
            check_n(raw, edges)?;
            let all: Vec<(usize, usize)> = (0..vertices).tuple_combinations().collect();
            if edges > all.len() {
                return Err(CatalogError::BadSpec(
                    raw.to_string(),
                    format!(
                        "a simple graph on {vertices} vertices has at most {} edges",
                        all.len()
                    ),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..count {
                let mut chosen = rand::seq::index::sample(&mut rng, all.len(), edges).into_vec();
                chosen.sort_unstable();
                let list: Vec<(usize, usize)> = chosen.into_iter().map(|e| all[e]).collect();
                let m = Matroid::from_graph(vertices, &list)?;
                sink.push(
                    raw,
                    format!("random graph v{vertices} e{edges} #{i} seed {seed}"),
                    m,
                );
            }
        }
    }
    Ok(())
}

/// Points of `PG(r-1, p)`: nonzero vectors whose first nonzero entry is 1.
pub fn projective_points(p: u32, r: usize) -> Vec<Vec<i64>> {
    let p = p as i64;
    let mut out = Vec::new();
    let total = p.pow(r as u32);
    for code in 1..total {
        let mut v = vec![0i64; r];
        let mut c = code;
        for slot in v.iter_mut().rev() {
            *slot = c % p;
            c /= p;
        }
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v);
        }
    }
    out
}

fn connected(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut reach = vec![false; v];
    if v == 0 {
        return true;
    }
    reach[0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in edges {
            if reach[a] != reach[b] {
                reach[a] = true;
                reach[b] = true;
                changed = true;
            }
        }
    }
    reach.into_iter().all(|r| r)
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, CatalogError> {
    let io = |source| CatalogError::Io {
        path: dir.display().to_string(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// A rank-3 matroid on six points with size-4 but no size-3 CCIs.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    #[serde(skip)]
    pub matroid: Matroid,
    /// Lines with three or more points.
    pub lines: Vec<ElemSet>,
    pub spectrum: Vec<usize>,
    /// One size-4 CCI; the matroid is an envelope for it.
    pub cci: ElemSet,
    pub is_envelope: bool,
    /// `(lines by size, number of bases)`; equal signatures group candidates
    /// that may be isomorphic.
    pub signature: (Vec<usize>, usize),
}

/// Every simple rank-3 matroid on six points, given by its long lines,
/// whose CCI spectrum contains 4 but not 3. Canonical order of line sets.
pub fn find_counterexample_k1() -> Vec<Counterexample> {
    const N: usize = 6;
    let candidates: Vec<ElemSet> = (3..N)
        .flat_map(|s| {
            let mut v: Vec<ElemSet> = k_subsets(N, s).collect();
            v.sort();
            v
        })
        .collect();
    let mut families = Vec::new();
    let mut current = Vec::new();
    linear_spaces(&candidates, 0, &mut current, &mut families);

    let mut found = Vec::new();
    for lines in families {
        let bases: Vec<Vec<usize>> = k_subsets(N, 3)
            .filter(|t| !lines.iter().any(|l| t.is_subset(*l)))
            .map(|t| t.to_vec())
            .collect();
        let m = Matroid::from_bases(N, &bases).expect("linear spaces give matroids");
        let spectrum = cci_spectrum(&m);
        if !spectrum.contains(4) || spectrum.contains(3) {
            continue;
        }
        let cci = spectrum.witnesses[&4].intersection;
        let mut sizes: Vec<usize> = lines.iter().map(|l| l.len()).collect();
        sizes.sort_unstable();
        found.push(Counterexample {
            is_envelope: is_envelope(&m, cci),
            signature: (sizes, m.bases().len()),
            spectrum: spectrum.sizes.into_iter().collect(),
            lines,
            cci,
            matroid: m,
        });
    }
    found
}

/// Families of `>= 3`-point lines pairwise meeting in at most one point.
fn linear_spaces(
    candidates: &[ElemSet],
    start: usize,
    current: &mut Vec<ElemSet>,
    out: &mut Vec<Vec<ElemSet>>,
) {
    out.push(current.clone());
    for i in start..candidates.len() {
        let line = candidates[i];
        if current.iter().all(|l| l.intersection(line).len() <= 1) {
            current.push(line);
            linear_spaces(candidates, i + 1, current, out);
            current.pop();
        }
    }
}

/// Groups counterexamples by signature.
pub fn signature_classes(found: &[Counterexample]) -> BTreeMap<(Vec<usize>, usize), usize> {
    let mut classes = BTreeMap::new();
    for c in found {
        *classes.entry(c.signature.clone()).or_default() += 1;
    }
    classes
}
