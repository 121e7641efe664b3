//! Dense CSV and MatrixMarket readers/writers.
//!
//! Values are written with Rust's shortest round-trip float formatting, so a
//! write/read cycle reproduces every entry bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    MatrixMarket,
}

impl MatrixFormat {
    /// `.mtx` / `.mm` are MatrixMarket, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("mtx") | Some("mm") => MatrixFormat::MatrixMarket,
            _ => MatrixFormat::Csv,
        }
    }
}

impl std::str::FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(MatrixFormat::Csv),
            "matrixmarket" | "mtx" | "mm" => Ok(MatrixFormat::MatrixMarket),
            other => Err(Error::InvalidParameter(format!("unknown matrix format `{other}`"))),
        }
    }
}

/// Parses comma-separated text, one matrix row per line.
pub fn parse_csv(text: &str) -> Result<DenseMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    msg: format!("`{field}`: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    DenseMatrix::from_rows(&rows)
}

pub fn to_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", m.get(i, j));
        }
        out.push('\n');
    }
    out
}

/// Parses the MatrixMarket `array` and `coordinate` formats (real or
/// integer field, general or symmetric).
pub fn parse_matrix_market(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("bad banner `{header}`"),
        });
    }
    let coordinate = match tokens[2].as_str() {
        "array" => false,
        "coordinate" => true,
        f => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported format `{f}`"),
            })
        }
    };
    if !matches!(tokens[3].as_str(), "real" | "integer" | "double") {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported field `{}`", tokens[3]),
        });
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        s => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported symmetry `{s}`"),
            })
        }
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let parse_tokens = |lineno: usize, line: &str| -> Result<Vec<f64>> {
        line.split_whitespace()
            .map(|t| {
                t.parse::<f64>().map_err(|e| Error::Parse {
                    line: lineno + 1,
                    msg: format!("`{t}`: {e}"),
                })
            })
            .collect()
    };
    let (size_no, size_line) = body.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing size line".into(),
    })?;
    let size = parse_tokens(size_no, size_line)?;
    let want = if coordinate { 3 } else { 2 };
    if size.len() != want {
        return Err(Error::Parse {
            line: size_no + 1,
            msg: "malformed size line".into(),
        });
    }
    let (m, n) = (size[0] as usize, size[1] as usize);
    let mut values = vec![0.0; m * n];

    if coordinate {
        let nnz = size[2] as usize;
        let mut seen = 0;
        for (no, line) in body {
            let t = parse_tokens(no, line)?;
            if t.len() != 3 {
                return Err(Error::Parse {
                    line: no + 1,
                    msg: "expected `row col value`".into(),
                });
            }
            let (i, j) = (t[0] as usize, t[1] as usize);
            if i == 0 || j == 0 || i > m || j > n {
                return Err(Error::Parse {
                    line: no + 1,
                    msg: format!("index ({i}, {j}) out of range"),
                });
            }
            values[(j - 1) * m + (i - 1)] = t[2];
            if symmetric && i != j {
                values[(i - 1) * m + (j - 1)] = t[2];
            }
            seen += 1;
        }
        if seen != nnz {
            return Err(Error::Parse {
                line: size_no + 1,
                msg: format!("declared {nnz} entries, found {seen}"),
            });
        }
    } else {
        let mut flat = Vec::with_capacity(m * n);
        for (no, line) in body {
            flat.extend(parse_tokens(no, line)?);
        }
        if symmetric {
            // lower triangle, column by column
            let mut it = flat.into_iter();
            for j in 0..n {
                for i in j..m {
                    let v = it.next().ok_or(Error::Parse {
                        line: 0,
                        msg: "too few values".into(),
                    })?;
                    values[j * m + i] = v;
                    values[i * m + j] = v;
                }
            }
        } else {
            if flat.len() != m * n {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("expected {} values, found {}", m * n, flat.len()),
                });
            }
            values = flat;
        }
    }
    DenseMatrix::from_column_major(m, n, values)
}

/// Dense `array` MatrixMarket text.
pub fn to_matrix_market(m: &DenseMatrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix array real general\n");
    if let Some(name) = m.name() {
        let _ = writeln!(out, "% {name}");
    }
    let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
    for v in m.as_slice() {
        let _ = writeln!(out, "{v}");
    }
    out
}

/// Sparse `coordinate` MatrixMarket text (exact zeros omitted).
pub fn to_matrix_market_coordinate(m: &DenseMatrix) -> String {
    let mut entries = String::new();
    let mut nnz = 0;
    for j in 0..m.ncols() {
        for (i, v) in m.column(j).iter().enumerate() {
            if *v != 0.0 {
                let _ = writeln!(entries, "{} {} {}", i + 1, j + 1, v);
                nnz += 1;
            }
        }
    }
    format!(
        "%%MatrixMarket matrix coordinate real general\n{} {} {}\n{}",
        m.nrows(),
        m.ncols(),
        nnz,
        entries
    )
}

pub fn read_matrix(path: &Path, format: Option<MatrixFormat>) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path)?;
    let m = match format.unwrap_or_else(|| MatrixFormat::from_path(path)) {
        MatrixFormat::Csv => parse_csv(&text)?,
        MatrixFormat::MatrixMarket => parse_matrix_market(&text)?,
    };
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    Ok(match name {
        Some(name) => m.with_name(name),
        None => m,
    })
}

pub fn write_matrix(path: &Path, m: &DenseMatrix, format: Option<MatrixFormat>) -> Result<()> {
    let text = match format.unwrap_or_else(|| MatrixFormat::from_path(path)) {
        MatrixFormat::Csv => to_csv(m),
        MatrixFormat::MatrixMarket => to_matrix_market(m),
    };
    fs::write(path, text)?;
    Ok(())
}
