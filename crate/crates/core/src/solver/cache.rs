//! On-disk memo file.
//!
//! Layout, version 1:
//!
//! ```text
//! mbrainbow-solver-cache 1\n
//! <descriptor as one line of JSON>\n
//! records: 8-byte little-endian position key, 1 byte winner (1 = Maker)
//! ```
//!
//! The key packs the canonical Maker mask (bits 0..24), the canonical Breaker
//! mask (24..48), the side to move (bit 48, set for Breaker) and the claims
//! left in the current turn (49..). A file whose header or descriptor differs
//! from the current instance is ignored and overwritten.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use dashmap::DashMap;
use serde::Serialize;

use crate::board::Board;
use crate::engine::{Player, Predicate};
use crate::error::{Error, Result};

const MAGIC: &str = "mbrainbow-solver-cache 1";

#[derive(Serialize)]
pub(super) struct Descriptor {
    board: Board,
    predicate: Predicate,
    maker_bias: usize,
    breaker_bias: usize,
    first: Player,
    canonical: bool,
}

impl Descriptor {
    pub(super) fn new(board: &Board, predicate: &Predicate, maker_bias: usize, breaker_bias: usize, first: Player, canonical: bool) -> Self {
        Descriptor {
            board: board.clone(),
            predicate: predicate.clone(),
            maker_bias,
            breaker_bias,
            first,
            canonical,
        }
    }
}

pub(super) fn load(path: &Path, desc: &Descriptor, memo: &DashMap<u64, bool>) -> Result<usize> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(e.into()),
    };
    let mut r = BufReader::new(file);
    let mut line = String::new();
    r.read_line(&mut line)?;
    if line.trim_end() != MAGIC {
        return Ok(0);
    }
    line.clear();
    r.read_line(&mut line)?;
    if line.trim_end() != encode(desc)? {
        return Ok(0);
    }
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if rest.len() % 9 != 0 {
        return Err(Error::Parse(format!("{}: truncated record", path.display())));
    }
    for rec in rest.chunks_exact(9) {
        let key = u64::from_le_bytes(rec[..8].try_into().expect("8 bytes"));
        memo.insert(key, rec[8] == 1);
    }
    Ok(rest.len() / 9)
}

pub(super) fn save(path: &Path, desc: &Descriptor, memo: &DashMap<u64, bool>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "{}", encode(desc)?)?;
    let mut entries: Vec<(u64, bool)> = memo.iter().map(|e| (*e.key(), *e.value())).collect();
    entries.sort_unstable();
    for (k, v) in entries {
        w.write_all(&k.to_le_bytes())?;
        w.write_all(&[v as u8])?;
    }
    w.flush()?;
    Ok(())
}

fn encode(desc: &Descriptor) -> Result<String> {
    serde_json::to_string(desc).map_err(|e| Error::Parse(e.to_string()))
}
