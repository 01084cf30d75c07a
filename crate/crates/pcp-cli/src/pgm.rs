//! 8-bit binary PGM export of matrix columns as image frames.
//!
//! Data matrices assembled from image sequences stack each frame's columns
//! into one matrix column, so column `k` reshapes to an `h x w` frame with
//! pixel `(i, j)` at row `i + j * h`.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use pcp_core::DenseMatrix;

/// Writes column `frame_index` of `x`, reshaped to `h x w`, as a binary PGM
/// (P5), affinely scaled from the column's `[min, max]` to `[0, 255]`.
/// A constant column has no range to scale; it exports as all zeros.
pub fn export_pgm(
    x: &DenseMatrix,
    path: &Path,
    frame_shape: (usize, usize),
    frame_index: usize,
) -> anyhow::Result<()> {
    let (h, w) = frame_shape;
    if h * w != x.rows() {
        bail!(
            "frame shape {h}x{w} does not match the matrix row count {}",
            x.rows()
        );
    }
    if frame_index >= x.cols() {
        bail!("frame index {frame_index} out of range ({} columns)", x.cols());
    }

    let column: Vec<f64> = (0..x.rows()).map(|r| x.get(r, frame_index)).collect();
    let lo = column.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;

    let mut pixels = Vec::with_capacity(h * w);
    for i in 0..h {
        for j in 0..w {
            let v = column[i + j * h];
            let g = if range > 0.0 {
                ((v - lo) / range * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                0
            };
            pixels.push(g);
        }
    }

    let mut out = std::fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))?;
    write!(out, "P5\n{w} {h}\n255\n")?;
    out.write_all(&pixels)?;
    Ok(())
}

/// Parses the header of an exported PGM, returning `(width, height)`.
pub fn read_pgm_dims(path: &Path) -> anyhow::Result<(usize, usize)> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8_lossy(&bytes[..bytes.len().min(64)]).to_string();
    let mut lines = text.lines();
    if lines.next() != Some("P5") {
        bail!("not a binary PGM");
    }
    let dims = lines.next().context("missing dimension line")?;
    let mut it = dims.split_whitespace();
    let w: usize = it.next().context("missing width")?.parse()?;
    let h: usize = it.next().context("missing height")?.parse()?;
    Ok((w, h))
}

/// Sum of pixel values of an exported PGM (smoke-test helper).
pub fn pgm_pixel_sum(path: &Path) -> anyhow::Result<u64> {
    let bytes = std::fs::read(path)?;
    let header_end = {
        // P5\n<w> <h>\n255\n
        let mut newlines = 0;
        bytes
            .iter()
            .position(|&b| {
                if b == b'\n' {
                    newlines += 1;
                }
                newlines == 3
            })
            .context("malformed PGM header")?
            + 1
    };
    Ok(bytes[header_end..].iter().map(|&b| b as u64).sum())
}
