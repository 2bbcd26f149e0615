//! Result files.
//!
//! The CSV schema (version [`SCHEMA_VERSION`]) has one row per trial,
//! followed by two aggregate rows per `(cell, algorithm)` whose `trial`
//! column is `mean` or `std`. Empty cells mean "not applicable" (e.g. `alpha`
//! for real graphs, `ratio` for a failed trial).

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{Aggregate, Algorithm, ExperimentConfig, ExperimentRecord, TrialRow};
use crate::generators::ModelTag;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 13] = [
    "model",
    "n",
    "p",
    "n_prime",
    "alpha",
    "gamma",
    "epsilon",
    "seed",
    "algorithm",
    "trial",
    "ratio",
    "runtime_s",
    "oracle_calls",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    JsonLines,
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Model-level fields for aggregate rows, taken from the record's config.
struct Context {
    model: ModelTag,
    n: usize,
    p: Option<f64>,
    gamma: f64,
    epsilon: f64,
    seed: u64,
}

fn context(record: &ExperimentRecord) -> Context {
    match &record.config {
        ExperimentConfig::Synthetic(c) => Context {
            model: ModelTag::Planted,
            n: c.n,
            p: Some(c.p),
            gamma: c.settings.gamma,
            epsilon: c.settings.epsilon,
            seed: c.seed,
        },
        ExperimentConfig::Real(c) => Context {
            model: ModelTag::Knockout,
            n: record.rows.first().map_or(0, |r| r.n),
            p: None,
            gamma: c.settings.gamma,
            epsilon: c.settings.epsilon,
            seed: c.seed,
        },
    }
}

fn trial_fields(r: &TrialRow) -> [String; 13] {
    [
        r.model.as_str().to_string(),
        r.n.to_string(),
        opt(r.p),
        opt(r.n_prime),
        opt(r.alpha),
        r.gamma.to_string(),
        r.epsilon.to_string(),
        r.seed.to_string(),
        r.algorithm.as_str().to_string(),
        r.trial.to_string(),
        opt(r.ratio),
        r.runtime_s.to_string(),
        r.oracle_calls.to_string(),
    ]
}

fn aggregate_fields(ctx: &Context, a: &Aggregate, which: &str) -> [String; 13] {
    let (ratio, runtime, calls) = match which {
        "mean" => (a.mean_ratio, a.mean_runtime_s, a.mean_oracle_calls),
        _ => (a.std_ratio, f64::NAN, f64::NAN),
    };
    let num = |x: f64| if x.is_finite() { x.to_string() } else { String::new() };
    [
        ctx.model.as_str().to_string(),
        ctx.n.to_string(),
        opt(ctx.p),
        opt(a.n_prime),
        opt(a.alpha),
        ctx.gamma.to_string(),
        ctx.epsilon.to_string(),
        ctx.seed.to_string(),
        a.algorithm.as_str().to_string(),
        which.to_string(),
        num(ratio),
        num(runtime),
        num(calls),
    ]
}

pub fn write_csv<W: Write>(record: &ExperimentRecord, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &record.rows {
        w.write_record(trial_fields(r))?;
    }
    let ctx = context(record);
    for a in &record.aggregates {
        w.write_record(aggregate_fields(&ctx, a, "mean"))?;
        w.write_record(aggregate_fields(&ctx, a, "std"))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonTrial<'a> {
    kind: &'static str,
    #[serde(flatten)]
    row: &'a TrialRow,
}

#[derive(Serialize)]
struct JsonAggregate<'a> {
    kind: &'static str,
    #[serde(flatten)]
    aggregate: &'a Aggregate,
}

/// One JSON object per line: every trial, then every aggregate.
pub fn write_json_lines<W: Write>(record: &ExperimentRecord, mut out: W) -> Result<()> {
    for row in &record.rows {
        serde_json::to_writer(&mut out, &JsonTrial { kind: "trial", row })?;
        out.write_all(b"\n")?;
    }
    for aggregate in &record.aggregates {
        serde_json::to_writer(&mut out, &JsonAggregate { kind: "aggregate", aggregate })?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Summary<'a> {
    schema_version: u32,
    config: &'a ExperimentConfig,
    trials: usize,
    aggregates: &'a [Aggregate],
}

/// Pretty-printed JSON with the config and the aggregates.
pub fn write_summary<W: Write>(record: &ExperimentRecord, out: W) -> Result<()> {
    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        config: &record.config,
        trials: record.rows.len(),
        aggregates: &record.aggregates,
    };
    serde_json::to_writer_pretty(out, &summary)?;
    Ok(())
}

pub fn emit_results<W: Write>(record: &ExperimentRecord, format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(record, out),
        Format::JsonLines => write_json_lines(record, out),
    }
}

/// A parsed CSV line; `trial` is `None` on aggregate rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub model: String,
    pub n_prime: Option<usize>,
    pub alpha: Option<f64>,
    pub algorithm: Algorithm,
    pub trial: Option<usize>,
    pub kind: String,
    pub ratio: Option<f64>,
    pub runtime_s: Option<f64>,
    pub oracle_calls: Option<f64>,
    pub seed: u64,
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::parse(1, format!("unexpected CSV header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec?;
        let real = |k: usize| -> Result<Option<f64>> {
            let s = &rec[k];
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| Error::parse(line, format!("bad number '{s}'")))
            }
        };
        let algorithm = Algorithm::parse(&rec[8])
            .ok_or_else(|| Error::parse(line, format!("unknown algorithm '{}'", &rec[8])))?;
        let trial = rec[9].parse::<usize>().ok();
        let n_prime = if rec[3].is_empty() {
            None
        } else {
            Some(rec[3].parse().map_err(|_| Error::parse(line, "bad n_prime"))?)
        };
        rows.push(CsvRow {
            model: rec[0].to_string(),
            n_prime,
            alpha: real(4)?,
            algorithm,
            trial,
            kind: if trial.is_some() { "trial".into() } else { rec[9].to_string() },
            ratio: real(10)?,
            runtime_s: real(11)?,
            oracle_calls: real(12)?,
            seed: rec[7].parse().map_err(|_| Error::parse(line, "bad seed"))?,
        });
    }
    Ok(rows)
}
