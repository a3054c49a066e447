//! Plain-text poset files.
//!
//! ```text
//! # two chains
//! poset 4
//! 0 < 1
//! 2 < 3
//! ```

use std::fmt::Write as _;

use super::Poset;
use crate::error::{Error, Result};

/// Parses the text format. Generating relations are closed transitively and
/// cycles are rejected.
pub fn parse_poset(input: &str) -> Result<Poset> {
    let mut n: Option<usize> = None;
    let mut pairs = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let parse_id = |tok: &str| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("expected an element id, found {tok:?}"),
            })
        };
        match n {
            None => {
                if tokens.len() != 2 || tokens[0] != "poset" {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "expected header `poset <n>`".into(),
                    });
                }
                n = Some(tokens[1].parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad element count {:?}", tokens[1]),
                })?);
            }
            Some(size) => {
                if tokens.len() != 3 || tokens[1] != "<" {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "expected `<u> < <v>`".into(),
                    });
                }
                let u = parse_id(tokens[0])?;
                let v = parse_id(tokens[2])?;
                if u >= size || v >= size {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("element id out of range for poset {size}"),
                    });
                }
                pairs.push((u, v));
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing `poset <n>` header".into(),
    })?;
    Poset::from_relations(n, &pairs)
}

/// Writes the text format using cover relations only.
pub fn write_poset(poset: &Poset, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "poset {}", poset.len());
    for (u, v) in poset.cover_relations() {
        let _ = writeln!(out, "{u} < {v}");
    }
    out
}
