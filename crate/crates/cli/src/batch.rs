//! Manifest-driven certification runs with a deterministic report.

use std::path::{Path, PathBuf};
use std::time::Instant;

use nondistill::certifier::{certify, CertifyOptions};
use nondistill::rational;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::CliError;
use crate::{copies, load_dist, parse_lambda0, read, summary, FamilySpec, Generator};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    runs: Vec<RunEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RunEntry {
    g: String,
    #[serde(default)]
    family: Option<String>,
    #[serde(default)]
    gen: Option<GenEntry>,
    #[serde(default = "default_lambda0")]
    lambda0: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GenEntry {
    kind: Generator,
    #[serde(rename = "M")]
    m: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_cap")]
    cap: u32,
}

fn default_lambda0() -> String {
    "1/2".into()
}

fn default_cap() -> u32 {
    4
}

pub struct Report {
    /// Tab-separated rows sorted by input, one header line first.
    pub table: String,
    /// Per-run wall-clock times, kept apart so `table` stays reproducible.
    pub timings: String,
    /// Largest exit code among failed rows.
    pub failure: Option<u8>,
}

struct Row {
    g: String,
    family: String,
    lambda0: String,
    outcome: Result<String, CliError>,
    millis: u128,
}

fn run_entry(base: &Path, entry: &RunEntry, max_dm: usize) -> Result<String, CliError> {
    let spec = match (&entry.family, &entry.gen) {
        (Some(f), None) => FamilySpec::File(base.join(f)),
        (None, Some(g)) => FamilySpec::generated(g.kind, g.m, g.seed, g.cap),
        _ => return Err(CliError::input("each run needs exactly one of \"family\" and \"gen\"")),
    };
    let l0 = parse_lambda0(&entry.lambda0)?;
    let g = load_dist(&base.join(&entry.g))?;
    let (ca, cb) = copies(&g)?;
    let fam = spec.resolve(ca, cb)?;
    let cert = certify(&g, &fam, &l0, &CertifyOptions { max_dm, ..CertifyOptions::default() })?;
    Ok(summary(&cert))
}

fn family_label(entry: &RunEntry) -> String {
    match (&entry.family, &entry.gen) {
        (Some(f), None) => f.clone(),
        (None, Some(g)) => FamilySpec::generated(g.kind, g.m, g.seed, g.cap).describe(),
        _ => "?".into(),
    }
}

pub fn run(manifest: &Path, max_dm: usize) -> Result<Report, CliError> {
    let text = read(manifest)?;
    let parsed: Manifest = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", manifest.display())))?;
    let base: PathBuf = manifest.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut rows: Vec<Row> = parsed
        .runs
        .par_iter()
        .map(|entry| {
            let start = Instant::now();
            let outcome = run_entry(&base, entry, max_dm);
            let lambda0 = rational::parse(&entry.lambda0)
                .map(|r| rational::format(&r))
                .unwrap_or_else(|_| entry.lambda0.clone());
            Row {
                g: entry.g.clone(),
                family: family_label(entry),
                lambda0,
                outcome,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect();
    rows.sort_by(|a, b| (&a.g, &a.family, &a.lambda0).cmp(&(&b.g, &b.family, &b.lambda0)));

    let mut table = String::from("g\tfamily\tlambda0\tresult\n");
    let mut timings = String::new();
    let mut failure = None;
    for row in &rows {
        let result = match &row.outcome {
            Ok(s) => s.clone(),
            Err(e) => {
                failure = failure.max(Some(e.code));
                format!("ERROR({}) {}", e.code, e.message.replace(['\t', '\n'], " "))
            }
        };
        table.push_str(&format!("{}\t{}\t{}\t{result}\n", row.g, row.family, row.lambda0));
        timings.push_str(&format!("timing\t{}\t{}\t{}\t{} ms\n", row.g, row.family, row.lambda0, row.millis));
    }
    Ok(Report { table, timings, failure })
}
