use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ccilab_core::batch::{run_verify_to_path, RunOptions};
use ccilab_core::catalog::{find_counterexample_k1, gen_catalog, signature_classes, CatalogSpec};
use ccilab_core::cci::{cci_spectrum, cci_witnesses};
use ccilab_core::envelope::{build_envelope, check_envelope, Envelope};
use ccilab_core::format::{parse_set, read_matroid};
use ccilab_core::partition::{partitions, Kind};
use ccilab_core::reduction::reduce;
use ccilab_core::{ElemSet, Matroid, Rule};
use clap::{Parser, Subcommand};
use serde_json::json;

const SCHEMA_HELP: &str = r#"Matroid files are JSON objects:
  {"format": "matroid/v1", "name": "optional", "n": <elements>,
   "repr": one of
     {"kind": "bases",   "bases": [[0,1], [0,2], ...]}
     {"kind": "matrix",  "field": 2|3|5|7, "rows": R, "cols": C, "entries": [[...], ...]}
     {"kind": "uniform", "r": R, "n": N}
     {"kind": "graph",   "vertices": V, "edges": [[u,v], ...]}}
Element lists on the command line are comma-separated indices, e.g. 0,2,3,5."#;

#[derive(Parser)]
#[command(
    name = "ccilab",
    version,
    about = "Circuit-cocircuit intersections of small matroids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,

    /// Seed for random catalog parts without an explicit seed
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, basis count and CCI spectrum
    Info { file: PathBuf },
    /// Every CCI with a witnessing circuit and cocircuit
    Ccis { file: PathBuf },
    /// Envelope minor for the intersection of a circuit and a cocircuit
    Envelope {
        file: PathBuf,
        #[arg(long)]
        circuit: String,
        #[arg(long)]
        cocircuit: String,
    },
    /// Hyperplane-partitions (or cohyperplane-partitions with --dual) of a CCI
    Partitions {
        file: PathBuf,
        #[arg(long)]
        cci: String,
        #[arg(long)]
        dual: bool,
    },
    /// Certificate for a CCI two elements smaller (always JSON)
    Reduce {
        file: PathBuf,
        #[arg(long)]
        cci: String,
    },
    /// Verify every matroid of a catalog, writing a JSON Lines report
    Verify {
        /// e.g. "uniform:8,binary:4:9:dual,graphs:5"
        #[arg(long)]
        catalog: String,
        #[arg(long, env = "CCILAB_JOBS", default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        report: PathBuf,
        /// Continue an interrupted report
        #[arg(long)]
        resume: bool,
        /// Record per-matroid wall-clock time (reports stop being reproducible)
        #[arg(long)]
        timing: bool,
    },
    /// Search six-point rank-3 matroids with a size-4 but no size-3 CCI
    Counterexample,
}

enum Failure {
    Usage(String),
    Schema(String),
}

type Outcome = Result<bool, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn load(path: &Path) -> Result<(Matroid, Option<String>), Failure> {
    read_matroid(path).map_err(|e| Failure::Schema(e.to_string()))
}

fn set_arg(list: &str) -> Result<ElemSet, Failure> {
    parse_set(list).map_err(Failure::Usage)
}

fn list(s: ElemSet) -> String {
    s.to_string()
}

fn print_json(v: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("values serialize")
    );
}

/// The envelope of `x` in `m`: `m` itself when it already is one, otherwise
/// a minor built from the first witnessing circuit/cocircuit pair.
fn envelope_for(m: &Matroid, x: ElemSet) -> Result<Envelope, Failure> {
    m.check_subset(x).map_err(usage)?;
    if check_envelope(m, x).is_ok() {
        return Envelope::new(m.clone(), x).map_err(usage);
    }
    let w = cci_witnesses(m)
        .remove(&x)
        .ok_or_else(|| Failure::Usage(format!("{x} is not a CCI of this matroid")))?;
    build_envelope(m, w.circuit, w.cocircuit).map_err(usage)
}

fn info(file: &Path, as_json: bool) -> Outcome {
    let (m, name) = load(file)?;
    let spectrum = cci_spectrum(&m);
    if as_json {
        print_json(&json!({
            "name": name,
            "n": m.n(),
            "rank": m.rank(),
            "bases": m.bases().len(),
            "cci_sizes": spectrum.sizes,
        }));
    } else {
        if let Some(name) = name {
            println!("name      {name}");
        }
        println!("elements  {}", m.n());
        println!("rank      {}", m.rank());
        println!("bases     {}", m.bases().len());
        println!("CCI sizes {:?}", spectrum.sizes);
    }
    Ok(true)
}

fn ccis(file: &Path, as_json: bool) -> Outcome {
    let (m, _) = load(file)?;
    let all = cci_witnesses(&m);
    if as_json {
        print_json(&serde_json::to_value(all.values().collect::<Vec<_>>()).unwrap());
    } else {
        for r in all.values() {
            println!(
                "{:<20} size {}  circuit {}  cocircuit {}",
                list(r.intersection),
                r.size,
                r.circuit,
                r.cocircuit
            );
        }
    }
    Ok(true)
}

fn envelope(file: &Path, circuit: &str, cocircuit: &str, as_json: bool) -> Outcome {
    let (m, _) = load(file)?;
    let env = build_envelope(&m, set_arg(circuit)?, set_arg(cocircuit)?).map_err(usage)?;
    if as_json {
        print_json(&json!({
            "k": env.k,
            "n": env.matroid.n(),
            "x": env.x,
            "y": env.y,
            "labels": env.labels,
            "bases": env.matroid.bases(),
        }));
    } else {
        println!("k        {}", env.k);
        println!("elements {} (rank {})", env.matroid.n(), env.matroid.rank());
        println!("X        {}  (parent {})", env.x, env.lift(env.x));
        println!("Y        {}  (parent {})", env.y, env.lift(env.y));
        println!("labels   {:?}", env.labels);
    }
    Ok(true)
}

fn show_partitions(file: &Path, cci: &str, dual: bool, as_json: bool) -> Outcome {
    let (m, _) = load(file)?;
    let env = envelope_for(&m, set_arg(cci)?)?;
    let kind = if dual {
        Kind::Cohyperplane
    } else {
        Kind::Hyperplane
    };
    let ps = partitions(&env, kind).map_err(usage)?;
    if as_json {
        print_json(&json!({ "labels": env.labels, "x": env.x, "partitions": ps }));
    } else {
        println!("envelope labels {:?}", env.labels);
        for p in &ps {
            let classes: Vec<String> = p.classes.iter().map(|c| list(*c)).collect();
            println!(
                "J = {:<14} type {:?}  {}",
                list(p.j),
                p.type_vec(),
                classes.join(" ")
            );
        }
    }
    Ok(true)
}

fn run_reduce(file: &Path, cci: &str) -> Outcome {
    let (m, _) = load(file)?;
    let env = envelope_for(&m, set_arg(cci)?)?;
    let cert = reduce(&env).map_err(usage)?;
    print_json(&json!({
        "rule": cert.rule,
        "h": cert.h,
        "h_star": cert.h_star,
        "cci": cert.cci,
        "k_from": cert.k_from,
        "k_to": cert.k_to,
        "labels": env.labels,
        "cci_in_parent": env.lift(cert.cci),
    }));
    Ok(cert.rule != Rule::RbBruteForce)
}

fn verify(
    cli: &Cli,
    catalog: &str,
    jobs: usize,
    report: &Path,
    resume: bool,
    timing: bool,
) -> Outcome {
    let spec = CatalogSpec::parse(catalog, cli.seed).map_err(usage)?;
    let items = gen_catalog(&spec).map_err(usage)?;
    let opts = RunOptions {
        jobs,
        timing,
        start_id: 0,
    };
    let summary = run_verify_to_path(items, opts, report, resume).map_err(usage)?;
    if cli.json {
        print_json(&serde_json::to_value(&summary).unwrap());
    } else {
        println!(
            "matroids    {} ({} resumed)",
            summary.matroids, summary.resumed
        );
        println!("envelopes   {:?}", summary.envelopes_by_k);
        for (rule, count) in &summary.rules {
            println!("  {rule:<14} {count}");
        }
        println!("oracle      {} agreements", summary.oracle_agreements);
        println!("anomalies   {}", summary.anomalies);
        println!("violations  {}", summary.violations);
        if !summary.flagged.is_empty() {
            println!("flagged ids {:?}", summary.flagged);
        }
    }
    Ok(summary.violations == 0)
}

fn counterexample(as_json: bool) -> Outcome {
    let found = find_counterexample_k1();
    if as_json {
        print_json(&json!({
            "found": found,
            "signature_classes": signature_classes(&found)
                .into_iter()
                .map(|((lines, bases), count)| json!({"lines": lines, "bases": bases, "count": count}))
                .collect::<Vec<_>>(),
        }));
    } else {
        println!(
            "{} matroids with a size-4 CCI and no size-3 CCI",
            found.len()
        );
        for c in &found {
            let lines: Vec<String> = c.lines.iter().map(|l| list(*l)).collect();
            println!(
                "lines {}  spectrum {:?}  envelope {}",
                lines.join(" "),
                c.spectrum,
                c.is_envelope
            );
        }
        for ((lines, bases), count) in signature_classes(&found) {
            println!("signature lines {lines:?} bases {bases}: {count}");
        }
    }
    Ok(!found.is_empty())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Info { file } => info(file, cli.json),
        Command::Ccis { file } => ccis(file, cli.json),
        Command::Envelope {
            file,
            circuit,
            cocircuit,
        } => envelope(file, circuit, cocircuit, cli.json),
        Command::Partitions { file, cci, dual } => show_partitions(file, cci, *dual, cli.json),
        Command::Reduce { file, cci } => run_reduce(file, cci),
        Command::Verify {
            catalog,
            jobs,
            report,
            resume,
            timing,
        } => verify(&cli, catalog, *jobs, report, *resume, *timing),
        Command::Counterexample => counterexample(cli.json),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Schema(msg)) => {
            eprintln!("error: {msg}\n\n{SCHEMA_HELP}");
            ExitCode::from(2)
        }
    }
}
