//! Binary matrix dumps: row-major `(re, im)` pairs of little-endian `f64`,
//! with a JSON sidecar describing the grid.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use serde_json::json;

use crate::error::{Error, Result};
use crate::reps::kernel::DiscretizedOperator;
use crate::reps::testfn::C64;

pub fn write_matrix<W: Write>(mut w: W, m: &DMatrix<C64>) -> Result<()> {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_matrix<R: Read>(mut r: R, rows: usize, cols: usize) -> Result<DMatrix<C64>> {
    let mut buf = vec![0u8; rows * cols * 16];
    r.read_exact(&mut buf)?;
    let mut m = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let o = 16 * (i * cols + j);
            let re = f64::from_le_bytes(buf[o..o + 8].try_into().unwrap());
            let im = f64::from_le_bytes(buf[o + 8..o + 16].try_into().unwrap());
            m[(i, j)] = C64::new(re, im);
        }
    }
    Ok(m)
}

pub fn sidecar(op: &DiscretizedOperator) -> serde_json::Value {
    json!({
        "rows": op.matrix.nrows(),
        "cols": op.matrix.ncols(),
        "layout": "row-major complex pairs, f64 little-endian",
        "weighted": op.weighted,
        "grid": op.meta(),
    })
}

/// Writes `<stem>.bin` and `<stem>.json`.
pub fn export(op: &DiscretizedOperator, stem: &Path) -> Result<()> {
    let bin = stem.with_extension("bin");
    let meta = stem.with_extension("json");
    let mut w = BufWriter::new(File::create(&bin)?);
    write_matrix(&mut w, &op.matrix)?;
    w.flush()?;
    let text = serde_json::to_string_pretty(&sidecar(op)).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(meta, text + "\n")?;
    Ok(())
}
