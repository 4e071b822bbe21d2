//! Text formats: graph6 (single-byte size header only) and a plain edge
//! list.
//!
//! graph6 packs the upper triangle of the adjacency matrix column by column,
//! `x(0,1), x(0,2), x(1,2), x(0,3), ...`, six bits per printable byte
//! (value + 63), most significant bit first, zero padded.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

/// Largest order representable with a one-byte graph6 header.
pub const GRAPH6_MAX_ORDER: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty record: missing size header at byte 0")]
    MissingHeader,
    #[error("byte {byte} at offset {offset} is outside the printable range 63..=126")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("multi-byte size header at offset {offset} is not supported")]
    MultiByteHeader { offset: usize },
    #[error("bit field truncated at offset {offset}: expected {expected} bytes in total")]
    Truncated { offset: usize, expected: usize },
    #[error("unexpected trailing data at offset {offset}")]
    TrailingData { offset: usize },
    #[error("non-zero padding bits in the final byte at offset {offset}")]
    NonZeroPadding { offset: usize },
    #[error("graph on {0} nodes exceeds the single-byte header limit of 62")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdgeListError {
    #[error("line {line}: expected header `n <count>`")]
    MissingHeader { line: usize },
    #[error("line {line}: cannot parse `{token}`")]
    BadToken { line: usize, token: String },
    #[error("line {line}: expected exactly two node indices")]
    FieldCount { line: usize },
    #[error("line {line}: node {node} out of range for {n} nodes")]
    OutOfRange { line: usize, node: usize, n: usize },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {source}")]
    Graph6 {
        line: usize,
        #[source]
        source: Graph6Error,
    },
    #[error(transparent)]
    EdgeList(#[from] EdgeListError),
}

fn total_bytes(n: usize) -> usize {
    1 + (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Decodes one graph6 record (no trailing newline).
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let bytes = line.as_bytes();
    if let Some((offset, &byte)) = bytes
        .iter()
        .enumerate()
        .find(|(_, &b)| !(63..=126).contains(&b))
    {
        return Err(Graph6Error::InvalidByte { offset, byte });
    }
    let header = *bytes.first().ok_or(Graph6Error::MissingHeader)?;
    if header == 126 {
        return Err(Graph6Error::MultiByteHeader { offset: 0 });
    }
    let n = (header - 63) as usize;
    let expected = total_bytes(n);
    if bytes.len() < expected {
        return Err(Graph6Error::Truncated {
            offset: bytes.len(),
            expected,
        });
    }
    if bytes.len() > expected {
        return Err(Graph6Error::TrailingData { offset: expected });
    }

    let payload = &bytes[1..];
    let bit = |k: usize| (payload[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut g = Graph::empty(n);
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(k) {
                g.add_edge(u, v).expect("indices below n, u < v");
            }
            k += 1;
        }
    }
    let bits = payload.len() * 6;
    if (k..bits).any(bit) {
        return Err(Graph6Error::NonZeroPadding {
            offset: expected - 1,
        });
    }
    Ok(g)
}

pub fn emit_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.order();
    if n > GRAPH6_MAX_ORDER {
        return Err(Graph6Error::TooLarge(n));
    }
    let mut out = Vec::with_capacity(total_bytes(n));
    out.push(n as u8 + 63);
    let mut word = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            word = word << 1 | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(word + 63);
                word = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((word << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

fn parse_index(line: usize, token: &str) -> Result<usize, EdgeListError> {
    usize::from_str(token).map_err(|_| EdgeListError::BadToken {
        line,
        token: token.to_owned(),
    })
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_block<'a>(
    mut lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<Graph, EdgeListError> {
    let (line, header) = lines
        .next()
        .ok_or(EdgeListError::MissingHeader { line: 1 })?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => parse_index(line, count)?,
        _ => return Err(EdgeListError::MissingHeader { line }),
    };
    let mut g = Graph::empty(n);
    for (line, text) in lines {
        let (u, v) = match text.split_whitespace().collect::<Vec<_>>()[..] {
            [u, v] => (parse_index(line, u)?, parse_index(line, v)?),
            _ => return Err(EdgeListError::FieldCount { line }),
        };
        g.add_edge(u, v).map_err(|e| match e {
            GraphError::NodeOutOfRange { node, n } => EdgeListError::OutOfRange { line, node, n },
            GraphError::SelfLoop(node) => EdgeListError::SelfLoop { line, node },
            other => unreachable!("add_edge cannot fail with {other:?}"),
        })?;
    }
    Ok(g)
}

/// Parses a single edge-list block: `n <count>` followed by `u v` lines.
/// Duplicate edges collapse. Blank lines and `#` comments are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    parse_block(significant_lines(text))
}

pub fn emit_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.order());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Format {
    #[default]
    Graph6,
    EdgeList,
}

/// One graph read from a multi-record file, tagged with the line on which
/// it starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub line: usize,
    pub graph: Result<Graph, ParseError>,
}

/// Splits a file into records. graph6 files hold one graph per non-empty
/// line (an optional `>>graph6<<` prefix is skipped); edge-list files hold
/// consecutive blocks, each opened by an `n <count>` line.
pub fn read_records(text: &str, format: Format) -> Vec<Record> {
    match format {
        Format::Graph6 => text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.is_empty())
            .map(|(line, l)| Record {
                line,
                graph: parse_graph6(l.strip_prefix(">>graph6<<").unwrap_or(l))
                    .map_err(|source| ParseError::Graph6 { line, source }),
            })
            .collect(),
        Format::EdgeList => {
            let mut blocks: Vec<Vec<(usize, &str)>> = Vec::new();
            for (line, l) in significant_lines(text) {
                let opens = l.split_whitespace().next() == Some("n");
                match blocks.last_mut() {
                    Some(block) if !opens => block.push((line, l)),
                    _ => blocks.push(vec![(line, l)]),
                }
            }
            blocks
                .into_iter()
                .map(|block| Record {
                    line: block[0].0,
                    graph: parse_block(block.into_iter()).map_err(ParseError::from),
                })
                .collect()
        }
    }
}

pub fn emit(g: &Graph, format: Format) -> Result<String, Graph6Error> {
    match format {
        Format::Graph6 => emit_graph6(g).map(|mut s| {
            s.push('\n');
            s
        }),
        Format::EdgeList => Ok(emit_edge_list(g)),
    }
}
