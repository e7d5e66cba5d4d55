// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! graph6 reader and writer.
//!
//! The order is encoded as one byte `n + 63` for `n <= 62`, as `~` followed
//! by three 6-bit groups for `n <= 258047`, and as `~~` followed by six
//! groups beyond that. The adjacency body lists the upper triangle column
//! by column (`x(0,1), x(0,2), x(1,2), x(0,3), ...`), packed six bits per
//! byte, most significant bit first, each byte offset by 63. Trailing pad
//! bits must be zero.

use crate::error::{Error, Result};
use crate::graph::Graph;

const BIAS: u8 = 63;
const MAX_SHORT: usize = 62;
const MAX_MEDIUM: usize = 258_047;
const HEADER: &str = ">>graph6<<";

/// Parses every non-empty line of `text`. An optional `>>graph6<<` prefix
/// on a line is skipped.
pub fn parse_graph6(text: &[u8]) -> Result<Vec<Graph>> {
    text.split(|&b| b == b'\n')
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.strip_suffix(b"\r").unwrap_or(line);
            let line = line.strip_prefix(HEADER.as_bytes()).unwrap_or(line);
            (!line.is_empty()).then_some((i + 1, line))
        })
        .map(|(lineno, line)| parse_line(line, lineno))
        .collect()
}

/// Parses a single graph6 record (no trailing newline).
pub fn parse_graph6_line(line: &[u8]) -> Result<Graph> {
    parse_line(line, 1)
}

fn parse_line(line: &[u8], lineno: usize) -> Result<Graph> {
    for &b in line {
        if !(BIAS..=126).contains(&b) {
            return Err(Error::InvalidByte {
                line: lineno,
                byte: b,
            });
        }
    }
    let (n, body) = decode_order(line).ok_or(Error::MalformedHeader { line: lineno })?;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() < expected {
        return Err(Error::TruncatedBitstream {
            line: lineno,
            expected,
            found: body.len(),
        });
    }
    if body.len() > expected {
        return Err(Error::TrailingBytes {
            line: lineno,
            extra: body.len() - expected,
        });
    }

    let bit = |k: usize| (body[k / 6] - BIAS) >> (5 - k % 6) & 1 == 1;
    let mut graph = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                graph.set_edge(i, j);
            }
            k += 1;
        }
    }
    if (bits..expected * 6).any(bit) {
        return Err(Error::NonCanonicalPadding { line: lineno });
    }
    Ok(graph)
}

fn decode_order(line: &[u8]) -> Option<(usize, &[u8])> {
    let group = |bytes: &[u8]| {
        bytes
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - BIAS) as usize)
    };
    match line {
        [] => None,
        [126, 126, rest @ ..] => (rest.len() >= 6).then(|| (group(&rest[..6]), &rest[6..])),
        [126, rest @ ..] => (rest.len() >= 3).then(|| (group(&rest[..3]), &rest[3..])),
        [b, rest @ ..] => Some(((b - BIAS) as usize, rest)),
    }
}

/// Canonical graph6 record for `graph`: minimal order header and zero
/// padding, without a trailing newline.
pub fn write_graph6(graph: &Graph) -> Result<String> {
    let n = graph.order();
    let mut out: Vec<u8> = Vec::with_capacity(8 + n * n / 12);
    if n <= MAX_SHORT {
        out.push(n as u8 + BIAS);
    } else if n <= MAX_MEDIUM {
        out.push(126);
        out.extend((0..3).rev().map(|s| ((n >> (6 * s)) & 0x3f) as u8 + BIAS));
    } else if (n as u64) < (1u64 << 36) {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|s| ((n >> (6 * s)) & 0x3f) as u8 + BIAS));
    } else {
        return Err(Error::OrderTooLarge(n));
    }

    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | graph.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + BIAS);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + BIAS);
    }
    Ok(String::from_utf8(out).expect("graph6 alphabet is ASCII"))
}

/// One record per line, each terminated by `\n`.
pub fn write_graph6_lines<'a, I>(graphs: I) -> Result<String>
where
    I: IntoIterator<Item = &'a Graph>,
{
    let mut s = String::new();
    for g in graphs {
        s.push_str(&write_graph6(g)?);
        s.push('\n');
    }
    Ok(s)
}
