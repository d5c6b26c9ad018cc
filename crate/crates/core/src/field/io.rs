//! Field persistence.
//!
//! Binary layout (little endian):
//!
//! ```text
//! b"FRACFLD1"            8-byte magic
//! u64                    header length in bytes
//! [u8; len]              JSON header {dim, box_length, points_per_dim, s}
//! [f64; M^N]             node values in flat row-major order
//! ```
//!
//! The CSV form is a `# {json header}` comment line followed by one value
//! per line, written in shortest round-trip decimal.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::{Field, Grid, GridParams};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"FRACFLD1";

pub fn to_bytes(u: &Field) -> Result<Vec<u8>> {
    let header = serde_json::to_vec(&GridParams::from(*u.grid()))?;
    let mut out = Vec::with_capacity(16 + header.len() + 8 * u.values().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(header.len() as u64).to_le_bytes());
    out.extend_from_slice(&header);
    for v in u.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn from_bytes(bytes: &[u8]) -> Result<Field> {
    let bad = |msg: &str| Error::InvalidField(format!("binary field: {msg}"));
    if bytes.len() < 16 || &bytes[..8] != MAGIC {
        return Err(bad("missing magic"));
    }
    let len = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let body = bytes.get(16..16 + len).ok_or_else(|| bad("truncated header"))?;
    let grid: Grid = serde_json::from_slice(body)?;
    let data = &bytes[16 + len..];
    if data.len() != 8 * grid.len() {
        return Err(bad("payload length does not match the grid"));
    }
    let values = data
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Field::new(grid, values)
}

pub fn write_binary(u: &Field, path: &Path) -> Result<()> {
    fs::write(path, to_bytes(u)?)?;
    Ok(())
}

pub fn read_binary(path: &Path) -> Result<Field> {
    let mut buf = Vec::new();
    fs::File::open(path)?.read_to_end(&mut buf)?;
    from_bytes(&buf)
}

pub fn to_csv_string(u: &Field) -> Result<String> {
    let header = serde_json::to_string(&GridParams::from(*u.grid()))?;
    let mut out = format!("# {header}\n");
    for v in u.values() {
        out.push_str(&format!("{v:?}\n"));
    }
    Ok(out)
}

pub fn write_csv(u: &Field, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(to_csv_string(u)?.as_bytes())?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Field> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut lines = reader.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::InvalidField("empty CSV".into()))??;
    let json = first
        .strip_prefix('#')
        .ok_or_else(|| Error::InvalidField("CSV header must start with '#'".into()))?;
    let grid: Grid = serde_json::from_str(json.trim())?;
    let mut values = Vec::with_capacity(grid.len());
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        values.push(
            t.parse::<f64>()
                .map_err(|e| Error::InvalidField(format!("bad value `{t}`: {e}")))?,
        );
    }
    Field::new(grid, values)
}
