//! On-disk cache of sieved tables.
//!
//! Layout: a 32-byte header (`magic`, kind tag, `lo`, `hi`, each 8 bytes
//! little-endian) followed by `hi - lo + 1` little-endian `f64` values.
//! A cache miss or a corrupt file simply triggers a fresh sieve.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::{ArithTable, FnKind, SieveConfig};
use crate::error::{Error, Result};

pub const MAGIC: [u8; 8] = *b"PSUMTBL1";
pub const HEADER_LEN: usize = 32;

pub fn write_table(path: &Path, table: &ArithTable) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(&MAGIC)?;
    w.write_all(&u64::from(table.kind().tag()).to_le_bytes())?;
    w.write_all(&table.lo().to_le_bytes())?;
    w.write_all(&table.hi().to_le_bytes())?;
    for v in table.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_table(path: &Path) -> Result<ArithTable> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < HEADER_LEN || bytes[..8] != MAGIC {
        return Err(Error::Parse(format!(
            "{}: bad cache header",
            path.display()
        )));
    }
    let word = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let tag = word(8);
    let kind = u8::try_from(tag)
        .ok()
        .and_then(FnKind::from_tag)
        .ok_or_else(|| Error::Parse(format!("unknown kind tag {tag}")))?;
    let (lo, hi) = (word(16), word(24));
    if lo == 0 || lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let body = &bytes[HEADER_LEN..];
    let n = (hi - lo + 1) as usize;
    if body.len() != n * 8 {
        return Err(Error::Parse(format!(
            "{}: expected {} values, found {} bytes",
            path.display(),
            n,
            body.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(ArithTable::from_parts(kind, lo, values))
}

pub fn cache_path(dir: &Path, kind: FnKind, lo: u64, hi: u64) -> PathBuf {
    dir.join(format!("{}_{}_{}.bin", kind.name(), lo, hi))
}

/// Reads `(kind, lo, hi)` from `dir` when a valid file exists, otherwise
/// sieves and writes it.
pub fn load_or_sieve(
    dir: &Path,
    cfg: &SieveConfig,
    kind: FnKind,
    lo: u64,
    hi: u64,
) -> Result<ArithTable> {
    let path = cache_path(dir, kind, lo, hi);
    if path.exists() {
        match read_table(&path) {
            Ok(t) if t.kind() == kind && t.lo() == lo && t.hi() == hi => return Ok(t),
            Ok(_) => log::warn!("{}: header mismatch, re-sieving", path.display()),
            Err(e) => log::warn!("{}: {e}, re-sieving", path.display()),
        }
    }
    let table = cfg.sieve(kind, lo, hi)?;
    fs::create_dir_all(dir)?;
    if let Err(e) = write_table(&path, &table) {
        log::warn!("could not write cache {}: {e}", path.display());
    }
    Ok(table)
}
