//! Plain-text bipartite Hamiltonian files.
//!
//! ```text
//! # comment
//! dims 2 3
//! H_A
//! 0,0 0,0
//! 0,0 1,0
//! H_B
//! ...
//! H_I
//! ...
//! ```
//!
//! Each block is a row-major list of `re,im` entries separated by
//! whitespace; line breaks inside a block are free.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::protocol::BipartiteSystem;
use crate::quantum::{CMatrix, HermitianOperator, Operator, C64};

const BLOCKS: [&str; 3] = ["H_A", "H_B", "H_I"];

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_entry(tok: &str, line: usize) -> Result<C64> {
    let (re, im) = tok.split_once(',').ok_or_else(|| parse_err(line, format!("expected re,im but found `{tok}`")))?;
    let num = |s: &str| s.parse::<f64>().map_err(|_| parse_err(line, format!("bad number `{s}` in `{tok}`")));
    Ok(C64::new(num(re)?, num(im)?))
}

pub fn parse_system(text: &str) -> Result<BipartiteSystem> {
    let mut dims: Option<(usize, usize)> = None;
    let mut blocks: Vec<(usize, Vec<C64>)> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let first = toks.next().expect("non-empty line");
        if first == "dims" {
            if dims.is_some() {
                return Err(parse_err(line, "duplicate dims header"));
            }
            let mut dim = || -> Result<usize> {
                let t = toks.next().ok_or_else(|| parse_err(line, "dims needs two sizes"))?;
                match t.parse::<usize>() {
                    Ok(d) if d > 0 => Ok(d),
                    _ => Err(parse_err(line, format!("bad dimension `{t}`"))),
                }
            };
            dims = Some((dim()?, dim()?));
            if toks.next().is_some() {
                return Err(parse_err(line, "dims takes exactly two sizes"));
            }
            continue;
        }
        if let Some(pos) = BLOCKS.iter().position(|b| *b == first) {
            if dims.is_none() {
                return Err(parse_err(line, "block before the dims header"));
            }
            if pos != blocks.len() {
                return Err(parse_err(line, format!("expected block {}", BLOCKS.get(blocks.len()).unwrap_or(&"end"))));
            }
            check_complete(&blocks, dims, line)?;
            blocks.push((line, Vec::new()));
            if toks.next().is_some() {
                return Err(parse_err(line, "block name must stand alone"));
            }
            continue;
        }
        let Some((_, entries)) = blocks.last_mut() else {
            return Err(parse_err(line, format!("unexpected `{first}` outside a block")));
        };
        for tok in content.split_whitespace() {
            entries.push(parse_entry(tok, line)?);
        }
    }
    let (d_a, d_b) = dims.ok_or_else(|| parse_err(last_line.max(1), "missing dims header"))?;
    check_complete(&blocks, dims, last_line)?;
    if blocks.len() != 3 {
        return Err(parse_err(last_line.max(1), format!("missing block {}", BLOCKS[blocks.len()])));
    }
    let ops: Vec<HermitianOperator> = blocks
        .into_iter()
        .zip([d_a, d_b, d_a * d_b])
        .map(|((line, entries), d)| {
            HermitianOperator::new(CMatrix::from_row_slice(d, d, &entries))
                .map_err(|e| parse_err(line, format!("block is not a valid Hamiltonian: {e}")))
        })
        .collect::<Result<_>>()?;
    let mut it = ops.into_iter();
    BipartiteSystem::new(it.next().unwrap(), it.next().unwrap(), it.next().unwrap())
}

/// The most recent block must hold exactly `d^2` entries before another
/// begins or the file ends.
fn check_complete(blocks: &[(usize, Vec<C64>)], dims: Option<(usize, usize)>, line: usize) -> Result<()> {
    let (Some((start, entries)), Some((d_a, d_b))) = (blocks.last(), dims) else {
        return Ok(());
    };
    let d = [d_a, d_b, d_a * d_b][blocks.len() - 1];
    if entries.len() != d * d {
        return Err(parse_err(
            line,
            format!("block {} (line {start}) has {} entries, expected {}", BLOCKS[blocks.len() - 1], entries.len(), d * d),
        ));
    }
    Ok(())
}

pub fn read_system(path: &Path) -> Result<BipartiteSystem> {
    parse_system(&std::fs::read_to_string(path)?)
}

/// Serialize with shortest round-trip float formatting.
pub fn format_system(sys: &BipartiteSystem) -> String {
    let mut out = String::new();
    let dims = sys.dims();
    writeln!(out, "dims {} {}", dims.d_a(), dims.d_b()).unwrap();
    for (name, op) in BLOCKS.iter().zip([sys.h_a(), sys.h_b(), sys.h_i()]) {
        writeln!(out, "{name}").unwrap();
        let m = op.matrix();
        for i in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols()).map(|j| format!("{},{}", m[(i, j)].re, m[(i, j)].im)).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
    }
    out
}

pub fn write_system(sys: &BipartiteSystem, path: &Path) -> Result<()> {
    std::fs::write(path, format_system(sys))?;
    Ok(())
}
