use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Column-major real matrix with every entry finite.
///
/// Thin wrapper around [`nalgebra::DMatrix`]; the wrapper exists to enforce the
/// non-empty / finite invariants and to carry an optional name tag through
/// file I/O and reports.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    data: DMatrix<f64>,
    name: Option<String>,
}

fn check(data: &DMatrix<f64>) -> Result<()> {
    if data.nrows() == 0 || data.ncols() == 0 {
        return Err(Error::EmptyMatrix {
            rows: data.nrows(),
            cols: data.ncols(),
        });
    }
    if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: pos % data.nrows(),
            col: pos / data.nrows(),
        });
    }
    Ok(())
}

impl DenseMatrix {
    pub fn from_nalgebra(data: DMatrix<f64>) -> Result<Self> {
        check(&data)?;
        Ok(Self { data, name: None })
    }

    /// Builds a matrix from column-major storage.
    pub fn from_column_major(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        Self::from_nalgebra(DMatrix::from_vec(rows, cols, values))
    }

    /// Builds a matrix from a list of rows (convenient for literals).
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(bad) = rows.iter().position(|r| r.as_ref().len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} entries, expected {n}",
                rows[bad].as_ref().len()
            )));
        }
        Self::from_nalgebra(DMatrix::from_fn(m, n, |i, j| rows[i].as_ref()[j]))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        Self::from_nalgebra(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from equally long columns.
    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let n = columns.len();
        let m = columns.first().map_or(0, |c| c.as_ref().len());
        if columns.iter().any(|c| c.as_ref().len() != m) {
            return Err(Error::DimensionMismatch("columns differ in length".into()));
        }
        let values = columns.iter().flat_map(|c| c.as_ref().iter().copied()).collect();
        Self::from_column_major(m, n, values)
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self {
            data: DMatrix::zeros(rows, cols),
            name: None,
        }
    }

    /// # Panics
    /// If `n` is zero.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "empty matrix");
        Self {
            data: DMatrix::identity(n, n),
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.data.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        let m = self.nrows();
        &self.data.as_slice()[j * m..(j + 1) * m]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.data.row(i).iter().copied().collect()
    }

    /// Column-major view of all entries.
    pub fn as_slice(&self) -> &[f64] {
        self.data.as_slice()
    }

    pub fn as_nalgebra(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_nalgebra(self) -> DMatrix<f64> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        Self {
            data: self.data.transpose(),
            name: None,
        }
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols(),
                rhs.nrows(),
                rhs.ncols()
            )));
        }
        Self::from_nalgebra(&self.data * &rhs.data)
    }

    pub fn map(&self, f: impl FnMut(f64) -> f64) -> Result<DenseMatrix> {
        Self::from_nalgebra(self.data.map(f))
    }

    pub fn scaled(&self, c: f64) -> Result<DenseMatrix> {
        self.map(|v| v * c)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.data.max()
    }

    pub fn min(&self) -> f64 {
        self.data.min()
    }

    /// Largest absolute entrywise difference; `None` on shape mismatch.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Option<f64> {
        (self.shape() == other.shape()).then(|| {
            self.data
                .iter()
                .zip(other.data.iter())
                .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> Result<DenseMatrix> {
        if idx.is_empty() {
            return Err(Error::EmptyMatrix {
                rows: self.nrows(),
                cols: 0,
            });
        }
        Self::from_nalgebra(self.data.select_columns(idx))
    }

    pub fn column_l1_norms(&self) -> Vec<f64> {
        (0..self.ncols())
            .map(|j| self.column(j).iter().map(|v| v.abs()).sum())
            .collect()
    }

    pub fn column_l2_norms(&self) -> Vec<f64> {
        (0..self.ncols())
            .map(|j| self.column(j).iter().map(|v| v * v).sum::<f64>().sqrt())
            .collect()
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        super::Svd::new(&self.data).s.iter().copied().collect()
    }

    /// Number of singular values strictly above `rel_tol * sigma_max`.
    pub fn numerical_rank(&self, rel_tol: f64) -> usize {
        let s = self.singular_values();
        let top = s.first().copied().unwrap_or(0.0);
        if top == 0.0 {
            return 0;
        }
        s.iter().filter(|&&v| v > rel_tol * top).count()
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.data[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(matches!(
            DenseMatrix::from_column_major(0, 3, vec![]),
            Err(Error::EmptyMatrix { .. })
        ));
        assert!(matches!(
            DenseMatrix::from_rows(&[[1.0, f64::NAN]]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn column_major_layout() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(m.column(1), &[2.0, 4.0]);
        assert_eq!(m.as_slice(), &[1.0, 3.0, 2.0, 4.0]);
        assert_eq!(m.row(1), vec![3.0, 4.0]);
    }

    #[test]
    fn rank_of_nested_squares_is_three() {
        let m = DenseMatrix::from_rows(&[
            [5.0, 3.0, 3.0, 5.0],
            [3.0, 5.0, 5.0, 3.0],
            [5.0, 5.0, 3.0, 3.0],
            [3.0, 3.0, 5.0, 5.0],
        ])
        .unwrap();
        assert_eq!(m.numerical_rank(1e-9), 3);
    }
}
