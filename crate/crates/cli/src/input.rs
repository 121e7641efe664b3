use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use prepnmf::io::{read_matrix, write_matrix, MatrixFormat};
use prepnmf::{fixtures, DenseMatrix};
use serde::Serialize;

use crate::args::{Format, InputArgs};

impl From<Format> for MatrixFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => MatrixFormat::Csv,
            Format::Matrixmarket => MatrixFormat::MatrixMarket,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub source: String,
    pub rows: usize,
    pub cols: usize,
}

pub fn load(args: &InputArgs) -> Result<(DenseMatrix, InputInfo)> {
    let (m, source) = match (&args.input, &args.fixture) {
        (Some(path), _) => {
            let m = read_matrix(path, args.format.map(Into::into))
                .with_context(|| format!("reading {}", path.display()))?;
            (m, path.display().to_string())
        }
        (None, Some(name)) => (fixtures::load(name)?, format!("fixture:{name}")),
        (None, None) => bail!("either --input or --fixture is required"),
    };
    let info = InputInfo {
        source,
        rows: m.nrows(),
        cols: m.ncols(),
    };
    Ok((m, info))
}

/// `a..b` (inclusive) or `a,b,c`.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let seeds: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().context("seed range start")?;
        let b: u64 = b.trim().parse().context("seed range end")?;
        if b < a {
            bail!("empty seed range {s}");
        }
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<u64>().with_context(|| format!("bad seed `{t}`")))
            .collect::<Result<_>>()?
    };
    if seeds.is_empty() {
        bail!("no seeds given");
    }
    Ok(seeds)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaArg {
    Value(f64),
    Auto,
}

pub fn parse_alpha(s: &str) -> Result<AlphaArg> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(AlphaArg::Auto);
    }
    let a: f64 = s.parse().with_context(|| format!("alpha must be a number or `auto`, got `{s}`"))?;
    if !(0.0..=1.0).contains(&a) {
        bail!("alpha must lie in [0, 1], got {a}");
    }
    Ok(AlphaArg::Value(a))
}

pub fn check_epsilons(eps: &[f64]) -> Result<()> {
    for &e in eps {
        if !(0.0..1.0).contains(&e) {
            bail!("epsilon must lie in [0, 1), got {e}");
        }
    }
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// Writes `m` as CSV into `dir` and returns the file name.
pub fn write_csv(dir: &Path, name: &str, m: &DenseMatrix) -> Result<String> {
    let path = dir.join(name);
    write_matrix(&path, m, Some(MatrixFormat::Csv)).with_context(|| format!("writing {}", path.display()))?;
    Ok(name.to_string())
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

/// `0.01` -> `0.01`, `0` -> `0`; file-name friendly.
pub fn eps_tag(e: f64) -> String {
    format!("{e}")
}

pub fn rows_of(m: &DenseMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_parse_ranges_and_lists() {
        assert_eq!(parse_seeds("0..9").unwrap(), (0..10).collect::<Vec<_>>());
        assert_eq!(parse_seeds("3,1, 4").unwrap(), vec![3, 1, 4]);
        assert!(parse_seeds("5..2").is_err());
        assert!(parse_seeds("x").is_err());
    }

    #[test]
    fn alpha_accepts_auto_and_unit_interval() {
        assert_eq!(parse_alpha("auto").unwrap(), AlphaArg::Auto);
        assert_eq!(parse_alpha("0.5").unwrap(), AlphaArg::Value(0.5));
        assert!(parse_alpha("1.5").is_err());
    }

    #[test]
    fn epsilon_must_be_below_one() {
        assert!(check_epsilons(&[0.0, 0.5]).is_ok());
        assert!(check_epsilons(&[1.0]).is_err());
        assert!(check_epsilons(&[-0.1]).is_err());
    }
}
