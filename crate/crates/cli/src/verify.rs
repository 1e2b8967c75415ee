use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use bcv_core::verify::{run_suite, SuiteEntry, SUITES};
use bcv_core::BcvParams;
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use crate::failure::{CmdResult, Failure};
use crate::output::{json_float, json_float_opt, sink};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub tau: f64,
    /// Suite to run; repeat to select several. Runs every suite when absent.
    #[arg(long = "suite", value_name = "NAME")]
    pub suites: Vec<String>,
    #[arg(long, default_value_t = bcv_core::verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall time in the report, which makes it non-reproducible.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Serialize)]
struct EntryReport {
    name: String,
    samples: usize,
    #[serde(serialize_with = "json_float")]
    max_residual: f64,
    #[serde(serialize_with = "json_float")]
    tolerance: f64,
    relation: &'static str,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Serialize)]
struct SuiteReport {
    suite: String,
    pass: bool,
    entries: Vec<EntryReport>,
}

#[derive(Debug, Serialize)]
struct Report {
    #[serde(serialize_with = "json_float")]
    kappa: f64,
    #[serde(serialize_with = "json_float")]
    tau: f64,
    geometry: &'static str,
    seed: u64,
    pass: bool,
    suites: Vec<SuiteReport>,
    #[serde(serialize_with = "json_float_opt", skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
}

impl From<SuiteEntry> for EntryReport {
    fn from(e: SuiteEntry) -> Self {
        Self {
            name: e.name,
            samples: e.samples,
            max_residual: e.max_residual,
            tolerance: e.tolerance,
            relation: e.relation.symbol(),
            pass: e.pass,
            note: e.note,
        }
    }
}

/// Runs the selected suites and writes the report; returns the overall pass flag.
pub fn run(args: &VerifyArgs) -> CmdResult<bool> {
    let start = Instant::now();
    let params = BcvParams::new(args.kappa, args.tau)?;
    let selected: Vec<&str> = if args.suites.is_empty() {
        SUITES.to_vec()
    } else {
        let mut names = Vec::new();
        for name in &args.suites {
            let known = SUITES
                .iter()
                .find(|s| **s == name.as_str())
                .ok_or_else(|| Failure::usage(anyhow::anyhow!("unknown suite '{name}'; known suites: {}", SUITES.join(", "))))?;
            if !names.contains(known) {
                names.push(*known);
            }
        }
        names
    };

    let results: Vec<CmdResult<SuiteReport>> = selected
        .par_iter()
        .map(|&suite| {
            let entries: Vec<EntryReport> = run_suite(suite, &params, args.seed)?
                .into_iter()
                .map(EntryReport::from)
                .collect();
            Ok(SuiteReport {
                suite: suite.to_string(),
                pass: entries.iter().all(|e| e.pass),
                entries,
            })
        })
        .collect();
    let suites = results.into_iter().collect::<CmdResult<Vec<_>>>()?;

    let report = Report {
        kappa: params.kappa,
        tau: params.tau,
        geometry: params.classify().name(),
        seed: args.seed,
        pass: suites.iter().all(|s| s.pass),
        suites,
        wall_time_s: args.timing.then(|| start.elapsed().as_secs_f64()),
    };
    let mut out = sink(args.out.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &report).map_err(Failure::usage)?;
    writeln!(out)?;
    out.flush()?;
    Ok(report.pass)
}
