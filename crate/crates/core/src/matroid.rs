//! Matroids on small ground sets, represented by their basis family.
//!
//! A [`Matroid`] stores its canonical (sorted, deduplicated) basis family
//! and derives everything else from it: a rank table over all subsets,
//! circuits, hyperplanes and the dual. Derived data is cached behind
//! [`OnceLock`]s, so a matroid can be shared freely between threads and
//! every reader sees either nothing or the finished value.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::elemset::{k_subsets, ElemSet, CAPACITY};
use crate::field::{column_rank, Field, Gf};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("ground set of {n} elements exceeds capacity {cap}")]
    CapacityExceeded { n: usize, cap: usize },
    #[error("empty basis family")]
    EmptyFamily,
    #[error("not the basis family of a matroid: {0}")]
    ExchangeAxiomViolation(String),
    #[error("element {elem} is outside the ground set of size {n}")]
    ElementOutOfRange { elem: usize, n: usize },
    #[error("GF({0}) is not a supported prime field (use 2, 3, 5 or 7)")]
    NotPrimeField(u32),
    #[error("matrix row {row} has {got} entries, expected {expected}")]
    MatrixShape {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("vertex {vertex} out of range for a graph on {vertices} vertices")]
    VertexOutOfRange { vertex: usize, vertices: usize },
    #[error("uniform matroid U({r},{n}) needs r <= n")]
    InvalidUniform { r: usize, n: usize },
    #[error("matroid has rank zero, so it has no hyperplanes")]
    RankZero,
    #[error("minor would remove every element")]
    EverythingDeleted,
    #[error("deletion set and contraction set overlap in {0}")]
    OverlappingMinor(ElemSet),
}

pub type Result<T, E = MatroidError> = std::result::Result<T, E>;

#[derive(Clone, Default)]
struct Cache {
    ranks: OnceLock<Vec<u8>>,
    circuits: OnceLock<Vec<ElemSet>>,
    hyperplanes: OnceLock<Vec<ElemSet>>,
    dual: OnceLock<Box<Matroid>>,
}

#[derive(Clone)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<ElemSet>,
    cache: Cache,
}

/// `r(M) - r(M|set)`, the number of rank units `set` is short of spanning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorankQuery {
    pub set: ElemSet,
    pub corank: usize,
}

impl CorankQuery {
    pub fn spans(&self) -> bool {
        self.corank == 0
    }
}

/// A minor together with the map from its element indices back to the
/// parent's: `labels[i]` is the parent index of minor element `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minor {
    pub matroid: Matroid,
    pub labels: Vec<usize>,
}

impl Minor {
    /// Identity minor.
    pub fn whole(m: &Matroid) -> Self {
        Minor {
            matroid: m.clone(),
            labels: (0..m.n()).collect(),
        }
    }

    /// Maps a set of minor elements to parent labels.
    pub fn lift(&self, set: ElemSet) -> ElemSet {
        set.relabel(&self.labels)
    }

    /// Maps parent labels to minor indices, dropping removed elements.
    pub fn project(&self, set: ElemSet) -> ElemSet {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(_, &orig)| set.contains(orig))
            .map(|(i, _)| i)
            .collect()
    }

    /// Parent-label set of the elements that survive in the minor.
    pub fn kept(&self) -> ElemSet {
        self.labels.iter().copied().collect()
    }

    /// Takes a minor of this minor, composing the label maps.
    pub fn then(&self, inner: Minor) -> Minor {
        let labels = inner.labels.iter().map(|&i| self.labels[i]).collect();
        Minor {
            matroid: inner.matroid,
            labels,
        }
    }
}

fn check_capacity(n: usize) -> Result<()> {
    if n > CAPACITY {
        Err(MatroidError::CapacityExceeded { n, cap: CAPACITY })
    } else {
        Ok(())
    }
}

/// Checks the basis-exchange axiom over every ordered pair of bases.
pub fn verify_exchange_axiom(bases: &[ElemSet]) -> std::result::Result<(), String> {
    let lookup: HashSet<ElemSet> = bases.iter().copied().collect();
    for &b1 in bases {
        // swaps[e] = elements f such that b1 - e + f is a basis.
        let mut swaps = [ElemSet::EMPTY; 32];
        for e in b1 {
            let rest = b1.without(e);
            for b2 in bases {
                for f in b2.difference(b1) {
                    if lookup.contains(&rest.with(f)) {
                        swaps[e] = swaps[e].with(f);
                    }
                }
            }
        }
        for &b2 in bases {
            let fresh = b2.difference(b1);
            for e in b1.difference(b2) {
                if swaps[e].is_disjoint(fresh) {
                    return Err(format!("no exchange for {e} from {b1} into {b2}"));
                }
            }
        }
    }
    Ok(())
}

impl Matroid {
    /// Builds a matroid from its basis family, validating every axiom.
    pub fn from_bases(n: usize, bases: &[Vec<usize>]) -> Result<Self> {
        check_capacity(n)?;
        if bases.is_empty() {
            return Err(MatroidError::EmptyFamily);
        }
        let mut sets = Vec::with_capacity(bases.len());
        for b in bases {
            if let Some(&elem) = b.iter().find(|&&e| e >= n) {
                return Err(MatroidError::ElementOutOfRange { elem, n });
            }
            let set = ElemSet::from_indices(b.iter().copied());
            if set.len() != b.len() {
                return Err(MatroidError::ExchangeAxiomViolation(format!(
                    "basis {b:?} repeats an element"
                )));
            }
            sets.push(set);
        }
        let r = sets[0].len();
        if let Some(bad) = sets.iter().find(|s| s.len() != r) {
            return Err(MatroidError::ExchangeAxiomViolation(format!(
                "bases {} and {bad} differ in size",
                sets[0]
            )));
        }
        sets.sort();
        sets.dedup();
        verify_exchange_axiom(&sets).map_err(MatroidError::ExchangeAxiomViolation)?;
        Ok(Self::from_canonical(n, r, sets))
    }

    /// Trusted constructor: `bases` must already be a valid family.
    fn from_family(n: usize, mut bases: Vec<ElemSet>) -> Self {
        bases.sort();
        bases.dedup();
        let r = bases.first().map_or(0, |b| b.len());
        Self::from_canonical(n, r, bases)
    }

    fn from_canonical(n: usize, rank: usize, bases: Vec<ElemSet>) -> Self {
        debug_assert!(!bases.is_empty());
        Matroid {
            n,
            rank,
            bases,
            cache: Cache::default(),
        }
    }

    /// The matroid on the empty ground set.
    pub fn empty() -> Self {
        Self::from_canonical(0, 0, vec![ElemSet::EMPTY])
    }

    /// U(r, n): every r-subset is a basis.
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        check_capacity(n)?;
        if r > n {
            return Err(MatroidError::InvalidUniform { r, n });
        }
        Ok(Self::from_family(n, k_subsets(n, r).collect()))
    }

    /// Column matroid of a matrix over GF(p) for p in {2, 3, 5, 7}.
    ///
    /// `entries` holds the rows; each must have `cols` entries. Integers are
    /// reduced mod p.
    pub fn from_matrix(p: u32, cols: usize, entries: &[Vec<i64>]) -> Result<Self> {
        match p {
            2 => Self::from_int_matrix::<Gf<2>>(cols, entries),
            3 => Self::from_int_matrix::<Gf<3>>(cols, entries),
            5 => Self::from_int_matrix::<Gf<5>>(cols, entries),
            7 => Self::from_int_matrix::<Gf<7>>(cols, entries),
            _ => Err(MatroidError::NotPrimeField(p)),
        }
    }

    fn from_int_matrix<F: Field>(cols: usize, entries: &[Vec<i64>]) -> Result<Self> {
        for (row, r) in entries.iter().enumerate() {
            if r.len() != cols {
                return Err(MatroidError::MatrixShape {
                    row,
                    got: r.len(),
                    expected: cols,
                });
            }
        }
        let rows: Vec<Vec<F>> = entries
            .iter()
            .map(|r| r.iter().map(|&v| F::from_i64(v)).collect())
            .collect();
        Self::from_field_matrix(cols, &rows)
    }

    /// Column matroid of a matrix over any exact field.
    pub fn from_field_matrix<F: Field>(cols: usize, rows: &[Vec<F>]) -> Result<Self> {
        check_capacity(cols)?;
        for (row, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(MatroidError::MatrixShape {
                    row,
                    got: r.len(),
                    expected: cols,
                });
            }
        }
        let all: Vec<usize> = (0..cols).collect();
        let r = if rows.is_empty() {
            0
        } else {
            column_rank(rows, &all)
        };
        let bases: Vec<ElemSet> = k_subsets(cols, r)
            .filter(|s| r == 0 || column_rank(rows, &s.to_vec()) == r)
            .collect();
        Ok(Self::from_family(cols, bases))
    }

    /// Cycle matroid of a multigraph; loops and parallel edges allowed.
    pub fn from_graph(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        check_capacity(edges.len())?;
        for &(u, v) in edges {
            for vertex in [u, v] {
                if vertex >= num_vertices {
                    return Err(MatroidError::VertexOutOfRange {
                        vertex,
                        vertices: num_vertices,
                    });
                }
            }
        }
        let forest_size = |set: ElemSet| -> (usize, bool) {
            let mut parent: Vec<usize> = (0..num_vertices).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            let mut merged = 0;
            let mut acyclic = true;
            for e in set {
                let (u, v) = edges[e];
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a == b {
                    acyclic = false;
                } else {
                    parent[a] = b;
                    merged += 1;
                }
            }
            (merged, acyclic)
        };
        let n = edges.len();
        let (r, _) = forest_size(ElemSet::full(n));
        let bases = k_subsets(n, r).filter(|&s| forest_size(s).1).collect();
        Ok(Self::from_family(n, bases))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ground(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    /// Canonical basis family (sorted, deduplicated).
    pub fn bases(&self) -> &[ElemSet] {
        &self.bases
    }

    /// Rejects sets with elements outside the ground set.
    pub fn check_subset(&self, set: ElemSet) -> Result<()> {
        match set.difference(self.ground()).min() {
            Some(elem) => Err(MatroidError::ElementOutOfRange { elem, n: self.n }),
            None => Ok(()),
        }
    }

    fn rank_table(&self) -> &[u8] {
        self.cache.ranks.get_or_init(|| {
            let size = 1usize << self.n;
            let mut indep = vec![false; size];
            for b in &self.bases {
                indep[b.bits() as usize] = true;
            }
            // Independence is closed downward; sweep from the top.
            for s in (0..size).rev() {
                if indep[s] {
                    let mut rest = s;
                    while rest != 0 {
                        let low = rest & rest.wrapping_neg();
                        indep[s ^ low] = true;
                        rest ^= low;
                    }
                }
            }
            let mut ranks = vec![0u8; size];
            for s in 1..size {
                ranks[s] = if indep[s] {
                    s.count_ones() as u8
                } else {
                    let mut best = 0;
                    let mut rest = s;
                    while rest != 0 {
                        let low = rest & rest.wrapping_neg();
                        best = best.max(ranks[s ^ low]);
                        rest ^= low;
                    }
                    best
                };
            }
            ranks
        })
    }

    /// r(M|set).
    pub fn rank_of(&self, set: ElemSet) -> usize {
        debug_assert!(set.is_subset(self.ground()));
        self.rank_table()[set.bits() as usize] as usize
    }

    pub fn corank(&self, set: ElemSet) -> CorankQuery {
        CorankQuery {
            set,
            corank: self.rank - self.rank_of(set),
        }
    }

    pub fn is_independent(&self, set: ElemSet) -> bool {
        self.rank_of(set) == set.len()
    }

    pub fn is_basis(&self, set: ElemSet) -> bool {
        set.len() == self.rank && self.is_independent(set)
    }

    pub fn is_circuit(&self, set: ElemSet) -> bool {
        !set.is_empty()
            && self.rank_of(set) + 1 == set.len()
            && set.iter().all(|e| self.is_independent(set.without(e)))
    }

    pub fn is_cocircuit(&self, set: ElemSet) -> bool {
        self.dual().is_circuit(set)
    }

    pub fn closure(&self, set: ElemSet) -> ElemSet {
        let r = self.rank_of(set);
        self.ground()
            .difference(set)
            .iter()
            .filter(|&e| self.rank_of(set.with(e)) == r)
            .fold(set, ElemSet::with)
    }

    pub fn is_flat(&self, set: ElemSet) -> bool {
        self.closure(set) == set
    }

    /// Closed and of corank 1.
    pub fn is_hyperplane(&self, set: ElemSet) -> bool {
        self.rank >= 1 && self.rank_of(set) + 1 == self.rank && self.is_flat(set)
    }

    pub fn is_cohyperplane(&self, set: ElemSet) -> bool {
        self.dual().is_hyperplane(set)
    }

    /// Minimal dependent sets in canonical order.
    pub fn circuits(&self) -> &[ElemSet] {
        self.cache.circuits.get_or_init(|| {
            let ranks = self.rank_table();
            let mut out = Vec::new();
            for s in 1..(1usize << self.n) {
                let size = s.count_ones() as u8;
                if ranks[s] + 1 != size {
                    continue;
                }
                let mut rest = s;
                let mut minimal = true;
                while rest != 0 {
                    let low = rest & rest.wrapping_neg();
                    if ranks[s ^ low] != size - 1 {
                        minimal = false;
                        break;
                    }
                    rest ^= low;
                }
                if minimal {
                    out.push(ElemSet::from_bits(s as u32));
                }
            }
            out.sort();
            out
        })
    }

    pub fn cocircuits(&self) -> &[ElemSet] {
        self.dual().circuits()
    }

    /// Hyperplanes in canonical order (empty for rank 0).
    ///
    /// Computed as closures of the independent (r-1)-sets.
    pub fn hyperplane_family(&self) -> &[ElemSet] {
        self.cache.hyperplanes.get_or_init(|| {
            if self.rank == 0 {
                return Vec::new();
            }
            let mut seen = HashSet::new();
            for s in k_subsets(self.n, self.rank - 1) {
                if self.is_independent(s) {
                    seen.insert(self.closure(s));
                }
            }
            let mut out: Vec<ElemSet> = seen.into_iter().collect();
            out.sort();
            out
        })
    }

    pub fn hyperplanes(&self) -> Result<&[ElemSet]> {
        if self.rank == 0 {
            return Err(MatroidError::RankZero);
        }
        Ok(self.hyperplane_family())
    }

    pub fn cohyperplanes(&self) -> Result<&[ElemSet]> {
        self.dual().hyperplanes()
    }

    /// The dual matroid; bases are the complements of bases.
    pub fn dual(&self) -> &Matroid {
        self.cache.dual.get_or_init(|| {
            let bases = self.bases.iter().map(|b| b.complement(self.n)).collect();
            let dual = Matroid::from_family(self.n, bases);
            // Seed the involution so dual().dual() costs nothing.
            let _ = dual.cache.dual.set(Box::new(Matroid {
                cache: Cache::default(),
                ..self.clone()
            }));
            Box::new(dual)
        })
    }

    pub fn delete(&self, set: ElemSet) -> Result<Minor> {
        self.minor(set, ElemSet::EMPTY)
    }

    pub fn contract(&self, set: ElemSet) -> Result<Minor> {
        self.minor(ElemSet::EMPTY, set)
    }

    /// M \ del / con, re-indexed by ascending surviving element.
    pub fn minor(&self, del: ElemSet, con: ElemSet) -> Result<Minor> {
        self.check_subset(del)?;
        self.check_subset(con)?;
        let overlap = del.intersection(con);
        if !overlap.is_empty() {
            return Err(MatroidError::OverlappingMinor(overlap));
        }
        let keep = self.ground().difference(del.union(con));
        if keep.is_empty() && self.n > 0 {
            return Err(MatroidError::EverythingDeleted);
        }
        let labels = keep.to_vec();
        if del.is_empty() && con.is_empty() {
            return Ok(Minor {
                matroid: self.clone(),
                labels,
            });
        }
        // Bases of M\D are the maximal B - D; among those, bases of the
        // contraction by C are the ones meeting C in a basis of C.
        let restricted = self.ground().difference(del);
        let r_restricted = self.rank_of(restricted);
        let r_con = self.rank_of(con);
        let bases = self
            .bases
            .iter()
            .filter(|b| b.intersection(restricted).len() == r_restricted)
            .filter(|b| b.intersection(con).len() == r_con)
            .map(|b| b.intersection(keep).compress(keep))
            .collect();
        Ok(Minor {
            matroid: Matroid::from_family(keep.len(), bases),
            labels,
        })
    }
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rank == other.rank && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("n", &self.n)
            .field("rank", &self.rank)
            .field("bases", &self.bases)
            .finish()
    }
}
