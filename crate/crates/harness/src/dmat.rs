//! DMAT binary matrix format.
//!
//! ```text
//! offset  size  field
//! 0       4     magic   b"DMAT"
//! 4       4     version u32 LE, always 1
//! 8       8     rows    u64 LE
//! 16      8     cols    u64 LE
//! 24      8·r·c values  f64 LE, row-major
//! ```
//!
//! Round trips are bit-exact. Readers reject zero dimensions, a file length
//! that disagrees with the header, and non-finite values.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use nyspca_core::Mat;

use crate::error::{HarnessError, Result};

pub const MAGIC: [u8; 4] = *b"DMAT";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: u64 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub rows: usize,
    pub cols: usize,
}

impl Header {
    pub fn file_len(&self) -> Option<u64> {
        (self.rows as u64).checked_mul(self.cols as u64)?.checked_mul(8)?.checked_add(HEADER_LEN)
    }

    fn encode(&self) -> [u8; 24] {
        let mut h = [0u8; 24];
        h[..4].copy_from_slice(&MAGIC);
        h[4..8].copy_from_slice(&VERSION.to_le_bytes());
        h[8..16].copy_from_slice(&(self.rows as u64).to_le_bytes());
        h[16..24].copy_from_slice(&(self.cols as u64).to_le_bytes());
        h
    }
}

/// Reads and validates the header, checking it against the file length.
pub(crate) fn read_header(file: &mut File, path: &Path) -> Result<Header> {
    let actual = file.metadata().map_err(|e| HarnessError::io(path, e))?.len();
    let mut h = [0u8; 24];
    if actual < HEADER_LEN {
        return Err(HarnessError::dmat(
            path,
            "header",
            actual,
            format!("truncated: expected at least {HEADER_LEN} bytes, found {actual}"),
        ));
    }
    file.read_exact(&mut h).map_err(|e| HarnessError::io(path, e))?;
    if h[..4] != MAGIC {
        return Err(HarnessError::dmat(path, "magic", 0, format!("expected \"DMAT\", found {:?}", &h[..4])));
    }
    let version = u32::from_le_bytes(h[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(HarnessError::dmat(path, "version", 4, format!("unsupported version {version}, expected {VERSION}")));
    }
    let rows = u64::from_le_bytes(h[8..16].try_into().unwrap());
    let cols = u64::from_le_bytes(h[16..24].try_into().unwrap());
    if rows == 0 {
        return Err(HarnessError::dmat(path, "rows", 8, "row count is zero"));
    }
    if cols == 0 {
        return Err(HarnessError::dmat(path, "cols", 16, "column count is zero"));
    }
    let header = Header {
        rows: usize::try_from(rows).map_err(|_| HarnessError::dmat(path, "rows", 8, format!("{rows} rows overflow usize")))?,
        cols: usize::try_from(cols).map_err(|_| HarnessError::dmat(path, "cols", 16, format!("{cols} columns overflow usize")))?,
    };
    let expected = header
        .file_len()
        .ok_or_else(|| HarnessError::dmat(path, "cols", 16, format!("{rows}x{cols} overflows the addressable size")))?;
    if actual != expected {
        let what = if actual < expected { "truncated" } else { "trailing bytes" };
        return Err(HarnessError::dmat(
            path,
            "values",
            actual.min(expected),
            format!("{what}: expected {expected} bytes for {rows}x{cols}, found {actual}"),
        ));
    }
    Ok(header)
}

pub(crate) fn decode_value(bytes: &[u8], path: &Path, offset: u64) -> Result<f64> {
    let v = f64::from_le_bytes(bytes.try_into().expect("8-byte chunk"));
    if !v.is_finite() {
        return Err(HarnessError::dmat(path, "values", offset, format!("non-finite value {v}")));
    }
    Ok(v)
}

pub fn read_header_from(path: impl AsRef<Path>) -> Result<Header> {
    let path = path.as_ref();
    let mut file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_header(&mut file, path)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Mat> {
    let path = path.as_ref();
    let mut file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let h = read_header(&mut file, path)?;
    let mut bytes = vec![0u8; h.rows * h.cols * 8];
    file.read_exact(&mut bytes).map_err(|e| HarnessError::io(path, e))?;
    let data = bytes
        .chunks_exact(8)
        .enumerate()
        .map(|(k, c)| decode_value(c, path, HEADER_LEN + 8 * k as u64))
        .collect::<Result<Vec<f64>>>()?;
    Ok(Mat::new(h.rows, h.cols, data)?)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &Mat) -> Result<()> {
    let path = path.as_ref();
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Err(HarnessError::Usage(format!("refusing to write an empty {rows}x{cols} matrix")));
    }
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| HarnessError::io(path, e);
    w.write_all(&Header { rows, cols }.encode()).map_err(io)?;
    for v in m.data() {
        w.write_all(&v.to_le_bytes()).map_err(io)?;
    }
    w.flush().map_err(io)
}
