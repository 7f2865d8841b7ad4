//! Format dispatch by file extension: `.csv` is CSV, anything else DMAT.

use std::path::Path;

use nyspca_core::Mat;

use crate::csvmat::{read_csv_matrix, write_csv_matrix};
use crate::dmat::{read_matrix, write_matrix};
use crate::error::Result;

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn load(path: impl AsRef<Path>) -> Result<Mat> {
    let path = path.as_ref();
    if is_csv(path) {
        read_csv_matrix(path)
    } else {
        read_matrix(path)
    }
}

pub fn save(path: impl AsRef<Path>, m: &Mat) -> Result<()> {
    let path = path.as_ref();
    if is_csv(path) {
        write_csv_matrix(path, m)
    } else {
        write_matrix(path, m)
    }
}
