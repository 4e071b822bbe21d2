//! Batch commands behind the `nutcracker` binary. Each command renders its
//! report to a `String` so the binary only deals with I/O and exit codes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::ValueEnum;
use rayon::prelude::*;
use thiserror::Error;

use nutcracker_core::io::{self, ParseError, Record};
use nutcracker_core::{
    brute_force_isomorphism, CanonicalError, Correspondence, DigitPolicy, Encoder, Extended,
    Format, Graph, NutCracker, PairScan, Permutation, PowerIteration, Real,
};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Failure = 1,
    Usage = 2,
}

impl Status {
    fn worst(self, other: Status) -> Status {
        if other as u8 > self as u8 {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum InputFormat {
    #[default]
    Graph6,
    Edges,
}

impl From<InputFormat> for Format {
    fn from(f: InputFormat) -> Format {
        match f {
            InputFormat::Graph6 => Format::Graph6,
            InputFormat::Edges => Format::EdgeList,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{first} holds {a} graphs but {second} holds {b}")]
    CountMismatch {
        first: String,
        second: String,
        a: usize,
        b: usize,
    },
    #[error("suspect digits ({suspect}) must lie in 1..={digits}")]
    BadDigits { digits: usize, suspect: usize },
    #[error("cannot emit graph {index}: {message}")]
    Emit { index: usize, message: String },
}

/// Settings shared by the numerical commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub format: InputFormat,
    pub digits: usize,
    pub suspect_digits: usize,
    pub precision: Precision,
    pub max_iter: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            format: InputFormat::Graph6,
            digits: 9,
            suspect_digits: 8,
            precision: Precision::Double,
            max_iter: 100_000,
        }
    }
}

impl Settings {
    pub fn policy(&self) -> Result<DigitPolicy, CliError> {
        if self.digits == 0 || self.suspect_digits == 0 || self.suspect_digits > self.digits {
            return Err(CliError::BadDigits {
                digits: self.digits,
                suspect: self.suspect_digits,
            });
        }
        Ok(DigitPolicy::new(self.digits, self.suspect_digits))
    }

    fn encoder(&self) -> Encoder {
        Encoder::new(PowerIteration::with_max_iter(self.max_iter))
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads every record of a file, failing on the first unparseable one.
pub fn load_graphs(path: &Path, format: InputFormat) -> Result<Vec<Graph>, CliError> {
    let text = read_text(path)?;
    io::read_records(&text, format.into())
        .into_iter()
        .map(|r| {
            r.graph.map_err(|source| CliError::Parse {
                path: path.to_path_buf(),
                source,
            })
        })
        .collect()
}

fn load_records(path: &Path, format: InputFormat) -> Result<Vec<Record>, CliError> {
    Ok(io::read_records(&read_text(path)?, format.into()))
}

fn load_pairs(
    first: &Path,
    second: &Path,
    format: InputFormat,
) -> Result<Vec<(Record, Record)>, CliError> {
    let a = load_records(first, format)?;
    let b = load_records(second, format)?;
    if a.len() != b.len() {
        return Err(CliError::CountMismatch {
            first: first.display().to_string(),
            second: second.display().to_string(),
            a: a.len(),
            b: b.len(),
        });
    }
    Ok(a.into_iter().zip(b).collect())
}

/// Rendered command output plus the exit status it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub status: Status,
}

/// Canonical number of one input graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphRecord {
    pub index: usize,
    pub canonical: Result<f64, CanonicalError>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub records: Vec<GraphRecord>,
    pub scan: PairScan,
    pub failures: BTreeMap<&'static str, usize>,
}

impl RunReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            match &r.canonical {
                Ok(cn) => writeln!(out, "{} {:.15}", r.index, cn),
                Err(e) => writeln!(out, "{} ERROR {}", r.index, e),
            }
            .expect("writing to a String");
        }
        let finite = self.finite_indices();
        let index = |i: usize| finite[i];
        for p in &self.scan.nearest {
            writeln!(
                out,
                "nearest {} {} {:.3e} {}",
                index(p.first),
                index(p.second),
                p.delta,
                p.agreement.label()
            )
            .expect("writing to a String");
        }
        for p in &self.scan.collisions {
            writeln!(out, "collision {} {}", index(p.first), index(p.second))
                .expect("writing to a String");
        }
        for p in &self.scan.suspects {
            writeln!(
                out,
                "precision-suspect {} {}",
                index(p.first),
                index(p.second)
            )
            .expect("writing to a String");
        }
        write!(
            out,
            "summary graphs={} collisions={} suspects={} failures={}",
            self.records.len(),
            self.scan.collisions.len(),
            self.scan.suspects.len(),
            self.failures.values().sum::<usize>()
        )
        .expect("writing to a String");
        for (code, count) in &self.failures {
            write!(out, " {code}={count}").expect("writing to a String");
        }
        out.push('\n');
        out
    }

    fn finite_indices(&self) -> Vec<usize> {
        self.records
            .iter()
            .filter(|r| r.canonical.is_ok())
            .map(|r| r.index)
            .collect()
    }

    pub fn timings(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            writeln!(out, "{} {:.6}s", r.index, r.elapsed.as_secs_f64())
                .expect("writing to a String");
        }
        out
    }
}

fn numerical_code(e: &CanonicalError) -> &'static str {
    match e {
        CanonicalError::EmptyGraph => "empty-graph",
        _ => "numerical-failure",
    }
}

pub fn canon_report(
    graphs: &[Graph],
    settings: &Settings,
    nearest: usize,
) -> Result<RunReport, CliError> {
    let policy = settings.policy()?;
    let encoder = settings.encoder();
    let records: Vec<GraphRecord> = graphs
        .par_iter()
        .enumerate()
        .map(|(index, g)| {
            let start = Instant::now();
            let canonical = match settings.precision {
                Precision::Double => encoder.canonical_number::<f64>(g),
                Precision::Extended => encoder.canonical_number::<Extended>(g).map(Real::to_f64),
            };
            GraphRecord {
                index,
                canonical,
                elapsed: start.elapsed(),
            }
        })
        .collect();
    let values: Vec<f64> = records
        .iter()
        .filter_map(|r| r.canonical.clone().ok())
        .collect();
    let scan = policy.scan(&values, nearest);
    let mut failures = BTreeMap::new();
    for r in &records {
        if let Err(e) = &r.canonical {
            *failures.entry(numerical_code(e)).or_insert(0) += 1;
        }
    }
    Ok(RunReport {
        records,
        scan,
        failures,
    })
}

pub fn cmd_canon(
    path: &Path,
    settings: &Settings,
    nearest: usize,
    timings: bool,
) -> Result<Output, CliError> {
    let graphs = load_graphs(path, settings.format)?;
    let report = canon_report(&graphs, settings, nearest)?;
    let status = if report.failures.is_empty() {
        Status::Success
    } else {
        Status::Failure
    };
    Ok(Output {
        stdout: report.render(),
        stderr: if timings {
            report.timings()
        } else {
            String::new()
        },
        status,
    })
}

/// Seed for the graph at `index` so each permutation is independent of
/// batch order.
fn graph_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add(index as u64)
}

pub fn permute_graphs(graphs: &[Graph], seed: u64) -> Vec<Graph> {
    graphs
        .iter()
        .enumerate()
        .map(|(index, g)| {
            let p = Permutation::random(g.order(), graph_seed(seed, index));
            g.permuted(&p).expect("permutation matches the graph order")
        })
        .collect()
}

pub fn cmd_permute(path: &Path, format: InputFormat, seed: u64) -> Result<Output, CliError> {
    let graphs = load_graphs(path, format)?;
    let mut stdout = String::new();
    for (index, g) in permute_graphs(&graphs, seed).iter().enumerate() {
        let text = io::emit(g, format.into()).map_err(|e| CliError::Emit {
            index,
            message: e.to_string(),
        })?;
        stdout.push_str(&text);
    }
    Ok(Output {
        stdout,
        stderr: String::new(),
        status: Status::Success,
    })
}

fn pair_error(index: usize, a: &Record, b: &Record) -> Option<String> {
    [a, b]
        .into_iter()
        .find_map(|r| r.graph.as_ref().err())
        .map(|e| format!("pair {index}: {e}\n"))
}

pub fn cmd_match(first: &Path, second: &Path, settings: &Settings) -> Result<Output, CliError> {
    settings.policy()?;
    let pairs = load_pairs(first, second, settings.format)?;
    let cracker = NutCracker::new(settings.encoder(), settings.digits);
    let lines: Vec<(String, Option<&'static str>, Option<String>)> = pairs
        .par_iter()
        .enumerate()
        .map(|(index, (a, b))| {
            if let Some(message) = pair_error(index, a, b) {
                return (
                    "FAIL parse-error".to_string(),
                    Some("parse-error"),
                    Some(message),
                );
            }
            let (g1, g2) = (a.graph.as_ref().unwrap(), b.graph.as_ref().unwrap());
            let found = match settings.precision {
                Precision::Double => cracker.find::<f64>(g1, g2),
                Precision::Extended => cracker.find::<Extended>(g1, g2),
            };
            match found {
                Ok(m) => (format!("OK {}", m.correspondence), None, None),
                Err(e) => (
                    format!("FAIL {}", e.code()),
                    Some(e.code()),
                    Some(format!("pair {index}: {e}\n")),
                ),
            }
        })
        .collect();

    let mut out = Output {
        stdout: String::new(),
        stderr: String::new(),
        status: Status::Success,
    };
    let mut tally: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut ok = 0;
    for (line, code, message) in lines {
        out.stdout.push_str(&line);
        out.stdout.push('\n');
        match code {
            None => ok += 1,
            Some(code) => {
                *tally.entry(code).or_insert(0) += 1;
                out.status = out.status.worst(if code == "parse-error" {
                    Status::Usage
                } else {
                    Status::Failure
                });
            }
        }
        if let Some(m) = message {
            out.stderr.push_str(&m);
        }
    }
    write!(
        out.stdout,
        "summary ok={} fail={}",
        ok,
        tally.values().sum::<usize>()
    )
    .expect("writing to a String");
    for (code, count) in &tally {
        write!(out.stdout, " {code}={count}").expect("writing to a String");
    }
    out.stdout.push('\n');
    Ok(out)
}

pub fn cmd_oracle(first: &Path, second: &Path, format: InputFormat) -> Result<Output, CliError> {
    let pairs = load_pairs(first, second, format)?;
    let lines: Vec<(String, Status, Option<String>)> = pairs
        .par_iter()
        .enumerate()
        .map(|(index, (a, b))| {
            if let Some(message) = pair_error(index, a, b) {
                return (
                    "ERROR parse-error".to_string(),
                    Status::Usage,
                    Some(message),
                );
            }
            let (g1, g2) = (a.graph.as_ref().unwrap(), b.graph.as_ref().unwrap());
            match brute_force_isomorphism(g1, g2) {
                Ok(Some(p)) => (
                    format!("ISO {}", Correspondence::new(p)),
                    Status::Success,
                    None,
                ),
                Ok(None) => ("NONISO".to_string(), Status::Success, None),
                Err(e) => (
                    "ERROR size-cap".to_string(),
                    Status::Failure,
                    Some(format!("pair {index}: {e}\n")),
                ),
            }
        })
        .collect();
    let mut out = Output {
        stdout: String::new(),
        stderr: String::new(),
        status: Status::Success,
    };
    for (line, status, message) in lines {
        out.stdout.push_str(&line);
        out.stdout.push('\n');
        out.status = out.status.worst(status);
        if let Some(m) = message {
            out.stderr.push_str(&m);
        }
    }
    Ok(out)
}
