//! Matrix and mask file formats.
//!
//! LRSD binary matrices: magic `LRSD`, version `u16 = 1`, `u32` rows, `u32`
//! cols (all little-endian), then `rows * cols` IEEE-754 f64 values,
//! little-endian, row-major. CSV matrices are headerless comma-separated
//! rows. Mask files hold either the literal token `FULL` or zero-based
//! `i,j` lines.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::mask::ObservationMask;
use crate::matrix::DenseMatrix;

const LRSD_MAGIC: &[u8; 4] = b"LRSD";
const LRSD_VERSION: u16 = 1;

pub fn write_lrsd(path: &Path, x: &DenseMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(LRSD_MAGIC)?;
    w.write_all(&LRSD_VERSION.to_le_bytes())?;
    w.write_all(&u32::try_from(x.rows()).map_err(|_| Error::InvalidShape("rows exceed u32".into()))?.to_le_bytes())?;
    w.write_all(&u32::try_from(x.cols()).map_err(|_| Error::InvalidShape("cols exceed u32".into()))?.to_le_bytes())?;
    for &v in x.as_slice() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_lrsd(path: &Path) -> Result<DenseMatrix> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|_| Error::Format("truncated LRSD header".into()))?;
    if &magic != LRSD_MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}, expected \"LRSD\"")));
    }
    let mut buf2 = [0u8; 2];
    r.read_exact(&mut buf2)
        .map_err(|_| Error::Format("truncated LRSD header".into()))?;
    let version = u16::from_le_bytes(buf2);
    if version != LRSD_VERSION {
        return Err(Error::FormatVersion {
            expected: LRSD_VERSION,
            found: version,
        });
    }
    let mut buf4 = [0u8; 4];
    r.read_exact(&mut buf4)
        .map_err(|_| Error::Format("truncated LRSD header".into()))?;
    let rows = u32::from_le_bytes(buf4) as usize;
    r.read_exact(&mut buf4)
        .map_err(|_| Error::Format("truncated LRSD header".into()))?;
    let cols = u32::from_le_bytes(buf4) as usize;

    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::Format("dimension overflow".into()))?;
    let mut data = Vec::with_capacity(count);
    let mut buf8 = [0u8; 8];
    for _ in 0..count {
        r.read_exact(&mut buf8)
            .map_err(|_| Error::Format("truncated LRSD payload".into()))?;
        data.push(f64::from_le_bytes(buf8));
    }
    // Exactly count values expected; trailing bytes indicate corruption.
    if r.read(&mut [0u8; 1])? != 0 {
        return Err(Error::Format("trailing bytes after LRSD payload".into()));
    }
    DenseMatrix::from_vec(rows, cols, data)
}

/// Headerless CSV export; values print in shortest round-trip form.
pub fn write_csv_matrix(path: &Path, x: &DenseMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            if j > 0 {
                w.write_all(b",")?;
            }
            write!(w, "{}", x.get(i, j))?;
        }
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv_matrix(path: &Path) -> Result<DenseMatrix> {
    let r = BufReader::new(File::open(path)?);
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0usize;
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let values: Vec<f64> = trimmed
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))
            })
            .collect::<Result<_>>()?;
        match cols {
            None => cols = Some(values.len()),
            Some(c) if c != values.len() => {
                return Err(Error::Format(format!(
                    "line {}: expected {c} columns, got {}",
                    lineno + 1,
                    values.len()
                )))
            }
            _ => {}
        }
        data.extend(values);
        rows += 1;
    }
    let cols = cols.ok_or_else(|| Error::Format("empty CSV matrix".into()))?;
    DenseMatrix::from_vec(rows, cols, data)
}

/// Mask file: the literal token `FULL`, or zero-based `i,j` lines.
pub fn write_mask(path: &Path, mask: &ObservationMask) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match mask.indices() {
        None => w.write_all(b"FULL\n")?,
        Some(ix) => {
            for &(i, j) in ix {
                writeln!(w, "{i},{j}")?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_mask(path: &Path, rows: usize, cols: usize) -> Result<ObservationMask> {
    let r = BufReader::new(File::open(path)?);
    let mut indices = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "FULL" {
            if lineno == 0 {
                return Ok(ObservationMask::full(rows, cols));
            }
            return Err(Error::Format("FULL token must be the only content".into()));
        }
        let (a, b) = trimmed
            .split_once(',')
            .ok_or_else(|| Error::Format(format!("line {}: expected i,j", lineno + 1)))?;
        let i = a
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))?;
        let j = b
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))?;
        indices.push((i, j));
    }
    ObservationMask::from_indices(rows, cols, indices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn lrsd_round_trip_is_bitwise() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.lrsd");
        let x = DenseMatrix::from_vec(
            2,
            3,
            vec![1.5, -2.25, 1e-300, std::f64::consts::PI, 0.0, -0.0],
        )
        .unwrap();
        write_lrsd(&path, &x).unwrap();
        let y = read_lrsd(&path).unwrap();
        assert_eq!(x.shape(), y.shape());
        for (a, b) in x.as_slice().iter().zip(y.as_slice()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn truncated_lrsd_is_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.lrsd");
        let x = DenseMatrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        write_lrsd(&path, &x).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 5]).unwrap();
        assert!(matches!(read_lrsd(&path), Err(Error::Format(_))));
    }

    #[test]
    fn bad_magic_and_version_are_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.lrsd");
        std::fs::write(&path, b"XRSD\x01\x00\x01\x00\x00\x00\x01\x00\x00\x00").unwrap();
        assert!(matches!(read_lrsd(&path), Err(Error::Format(_))));
        let mut good = Vec::new();
        good.extend_from_slice(b"LRSD");
        good.extend_from_slice(&9u16.to_le_bytes());
        good.extend_from_slice(&1u32.to_le_bytes());
        good.extend_from_slice(&1u32.to_le_bytes());
        good.extend_from_slice(&1.0f64.to_le_bytes());
        std::fs::write(&path, &good).unwrap();
        assert!(matches!(read_lrsd(&path), Err(Error::FormatVersion { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let x = DenseMatrix::from_vec(2, 2, vec![0.1, -3.0, 1e-17, 42.0]).unwrap();
        write_csv_matrix(&path, &x).unwrap();
        let y = read_csv_matrix(&path).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn mask_round_trip_partial_and_full() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("mask.txt");
        let m = ObservationMask::from_indices(3, 3, vec![(0, 1), (2, 2)]).unwrap();
        write_mask(&path, &m).unwrap();
        assert_eq!(read_mask(&path, 3, 3).unwrap(), m);

        let full = ObservationMask::full(3, 3);
        write_mask(&path, &full).unwrap();
        assert_eq!(read_mask(&path, 3, 3).unwrap(), full);
    }
}
