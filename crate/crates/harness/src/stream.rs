//! Column sketches read straight from a DMAT file.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use nyspca_core::{Axis, Mat, Selection};

use crate::dmat::{decode_value, read_header, HEADER_LEN};
use crate::error::{HarnessError, Result};

/// Reads only the selected columns of a stored `n × p` matrix.
///
/// The file is consumed one row at a time through a single `p`-entry
/// buffer, so at most `n·l + p` values are held. The result is identical
/// to loading the whole matrix and calling `subsample_columns`.
pub fn stream_columns(path: impl AsRef<Path>, sel: &Selection) -> Result<Mat> {
    let path = path.as_ref();
    let mut file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let h = read_header(&mut file, path)?;
    if sel.axis() != Axis::Columns || sel.q() != h.cols {
        return Err(HarnessError::Usage(format!(
            "selection over {} {:?} does not match the {} stored columns",
            sel.q(),
            sel.axis(),
            h.cols
        )));
    }
    let l = sel.l();
    let mut out = vec![0.0; h.rows * l];
    let mut row = vec![0u8; h.cols * 8];
    for i in 0..h.rows {
        file.read_exact(&mut row).map_err(|e| HarnessError::io(path, e))?;
        let base = HEADER_LEN + (i * h.cols * 8) as u64;
        for (k, &c) in sel.indices().iter().enumerate() {
            out[i * l + k] = decode_value(&row[8 * c..8 * c + 8], path, base + 8 * c as u64)?;
        }
    }
    Ok(Mat::new(h.rows, l, out)?)
}
