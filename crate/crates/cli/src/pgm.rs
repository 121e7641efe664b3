use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// `"19x19"` -> `(19, 19)`
pub fn parse_shape(s: &str) -> Result<(usize, usize)> {
    let (h, w) = s
        .split_once(['x', 'X'])
        .with_context(|| format!("image shape must look like HxW, got `{s}`"))?;
    Ok((h.trim().parse()?, w.trim().parse()?))
}

/// Binary 8-bit PGM of one column, pixels row-major, scaled so the largest
/// entry is white. Negative entries are clipped to black.
pub fn encode(column: &[f64], h: usize, w: usize) -> Result<Vec<u8>> {
    if column.len() != h * w {
        bail!("column has {} entries, image shape {h}x{w} needs {}", column.len(), h * w);
    }
    let max = column.iter().copied().fold(0.0_f64, f64::max);
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    out.extend(column.iter().map(|&v| {
        if max > 0.0 {
            (255.0 * (v.max(0.0) / max)).round() as u8
        } else {
            0
        }
    }));
    Ok(out)
}

pub fn write(path: &Path, column: &[f64], h: usize, w: usize) -> Result<()> {
    fs::write(path, encode(column, h, w)?).with_context(|| format!("writing {}", path.display()))
}
