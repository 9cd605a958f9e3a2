//! Batch verification over a catalog, streamed as JSON Lines.
//!
//! Records come out in catalog id order whatever the worker count: items
//! are processed in chunks on a rayon pool and each chunk is written in
//! order once it is complete.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::CatalogItem;
use crate::certificate::Rule;
use crate::partition::LemmaSuiteCounts;
use crate::reduction::{verify_conjecture, Anomaly, KEntry, Violation};

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub id: usize,
    pub source: String,
    pub name: String,
    pub n: usize,
    pub rank: usize,
    pub cci_sizes: Vec<usize>,
    pub entries: Vec<KEntry>,
    pub lemma_checks: LemmaSuiteCounts,
    pub anomalies: Vec<Anomaly>,
    pub violations: Vec<Violation>,
    /// Wall-clock milliseconds; only recorded on request since it breaks
    /// byte-for-byte reproducibility.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

pub fn verify_item(item: &CatalogItem, timing: bool) -> ReportRecord {
    let start = Instant::now();
    let report = verify_conjecture(&item.matroid);
    ReportRecord {
        id: item.id,
        source: item.source.clone(),
        name: item.name.clone(),
        n: item.matroid.n(),
        rank: item.matroid.rank(),
        cci_sizes: report.cci_sizes,
        entries: report.entries,
        lemma_checks: report.lemma_checks,
        anomalies: report.anomalies,
        violations: report.violations,
        timing_ms: timing.then(|| start.elapsed().as_millis() as u64),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub matroids: usize,
    /// Records already present when resuming.
    pub resumed: usize,
    pub envelopes_by_k: BTreeMap<usize, usize>,
    pub rules: BTreeMap<Rule, usize>,
    pub oracle_agreements: usize,
    pub lemma_checks: LemmaSuiteCounts,
    pub anomalies: usize,
    pub violations: usize,
    /// Ids of records with violations or anomalies, for follow-up.
    pub flagged: Vec<usize>,
}

impl Summary {
    pub fn add(&mut self, r: &ReportRecord) {
        self.matroids += 1;
        for e in &r.entries {
            *self.envelopes_by_k.entry(e.k).or_default() += e.envelopes;
            self.oracle_agreements += e.oracle_agreements;
            for (&rule, &count) in &e.rules {
                *self.rules.entry(rule).or_default() += count;
            }
        }
        self.lemma_checks += r.lemma_checks;
        self.anomalies += r.anomalies.len();
        self.violations += r.violations.len();
        if !r.anomalies.is_empty() || !r.violations.is_empty() {
            self.flagged.push(r.id);
        }
    }

    pub fn clean(&self) -> bool {
        self.anomalies == 0 && self.violations == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub jobs: usize,
    pub timing: bool,
    /// Items with a smaller id are skipped.
    pub start_id: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            jobs: 1,
            timing: false,
            start_id: 0,
        }
    }
}

const CHUNK_PER_JOB: usize = 16;

/// Verifies every item and writes one JSON line per item, in id order.
pub fn run_verify<W: Write>(
    items: Vec<CatalogItem>,
    opts: RunOptions,
    out: &mut W,
) -> io::Result<Summary> {
    let jobs = opts.jobs.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(io::Error::other)?;
    let mut summary = Summary::default();
    let mut pending = items
        .into_iter()
        .filter(|i| i.id >= opts.start_id)
        .peekable();
    while pending.peek().is_some() {
        // Dropping each chunk frees the matroid caches it filled.
        let chunk: Vec<CatalogItem> = pending.by_ref().take(jobs * CHUNK_PER_JOB).collect();
        let records: Vec<ReportRecord> = pool.install(|| {
            chunk
                .par_iter()
                .map(|i| verify_item(i, opts.timing))
                .collect()
        });
        for r in &records {
            serde_json::to_writer(&mut *out, r)?;
            out.write_all(b"\n")?;
            summary.add(r);
        }
        out.flush()?;
    }
    Ok(summary)
}

/// Complete records at the head of an existing report.
#[derive(Debug, Clone, Default)]
pub struct ResumeState {
    pub records: Vec<ReportRecord>,
    /// Byte length of the valid prefix.
    pub valid_len: u64,
}

impl ResumeState {
    pub fn next_id(&self) -> usize {
        self.records.last().map_or(0, |r| r.id + 1)
    }
}

/// Reads the valid prefix of a report: whole lines that parse as records
/// with consecutive ids from 0. A torn last line is ignored.
pub fn read_resume_state(path: &Path) -> io::Result<ResumeState> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(ResumeState::default()),
        Err(e) => return Err(e),
    };
    let mut state = ResumeState::default();
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    loop {
        line.clear();
        let read = reader.read_line(&mut line)?;
        if read == 0 || !line.ends_with('\n') {
            break;
        }
        match serde_json::from_str::<ReportRecord>(&line) {
            Ok(r) if r.id == state.records.len() => {
                state.valid_len += read as u64;
                state.records.push(r);
            }
            _ => break,
        }
    }
    Ok(state)
}

/// Runs a verification into `path`, optionally continuing a previous run.
pub fn run_verify_to_path(
    items: Vec<CatalogItem>,
    mut opts: RunOptions,
    path: &Path,
    resume: bool,
) -> io::Result<Summary> {
    let mut prior = Summary::default();
    let file = if resume {
        let state = read_resume_state(path)?;
        for r in &state.records {
            prior.add(r);
        }
        opts.start_id = state.next_id();
        let f = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(false)
            .open(path)?;
        f.set_len(state.valid_len)?;
        let mut f = f;
        std::io::Seek::seek(&mut f, io::SeekFrom::End(0))?;
        f
    } else {
        File::create(path)?
    };
    let mut out = io::BufWriter::new(file);
    let mut summary = run_verify(items, opts, &mut out)?;
    out.flush()?;
    summary.resumed = prior.matroids;
    merge(&mut summary, prior);
    Ok(summary)
}

fn merge(into: &mut Summary, other: Summary) {
    into.matroids += other.matroids;
    for (k, v) in other.envelopes_by_k {
        *into.envelopes_by_k.entry(k).or_default() += v;
    }
    for (k, v) in other.rules {
        *into.rules.entry(k).or_default() += v;
    }
    into.oracle_agreements += other.oracle_agreements;
    into.lemma_checks += other.lemma_checks;
    into.anomalies += other.anomalies;
    into.violations += other.violations;
    let mut flagged = other.flagged;
    flagged.append(&mut into.flagged);
    flagged.sort_unstable();
    into.flagged = flagged;
}
