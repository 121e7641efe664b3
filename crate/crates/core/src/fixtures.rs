//! Small named matrices that exercise the preprocessing and the geometry.
//!
//! | name                  | shape | notes                                          |
//! |-----------------------|-------|------------------------------------------------|
//! | `separable-rank3`     | 10x8  | rank-3 separable, first three columns are pure |
//! | `nested-squares`      | 4x4   | two concentric squares in the column space     |
//! | `noisy`               | 3x2   | sparse matrix with one small positive entry    |
//! | `sparse-unique`       | 4x3   | sparsity pattern certifies a unique NMF        |
//! | `ones-minus-identity` | 3x3   | circulant left untouched by the preprocessing  |
//! | `counter-example`     | 4x4   | separable after preprocessing, infinitely many NPP solutions |

use crate::error::{Error, Result};
use crate::io::parse_csv;
use crate::matcore::DenseMatrix;

const FIXTURES: &[(&str, &str)] = &[
    ("separable-rank3", include_str!("../fixtures/separable-rank3.csv")),
    ("nested-squares", include_str!("../fixtures/nested-squares.csv")),
    ("noisy", include_str!("../fixtures/noisy.csv")),
    ("sparse-unique", include_str!("../fixtures/sparse-unique.csv")),
    ("ones-minus-identity", include_str!("../fixtures/ones-minus-identity.csv")),
    ("counter-example", include_str!("../fixtures/counter-example.csv")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}

pub fn load(name: &str) -> Result<DenseMatrix> {
    let (name, text) = FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
    Ok(parse_csv(text)?.with_name(*name))
}

/// The noisy 3x2 matrix `[[0, delta], [1, 0], [1, 1]]` for any `delta`.
pub fn noisy(delta: f64) -> DenseMatrix {
    DenseMatrix::from_rows(&[[0.0, delta], [1.0, 0.0], [1.0, 1.0]])
        .expect("finite literal")
        .with_name("noisy")
}

/// Left factor of `separable-rank3` (10x3); `M = separable_left() * [I | R]`.
pub fn separable_left() -> DenseMatrix {
    DenseMatrix::from_columns(&[
        [5.0, 5.0, 5.0, 5.0, 9.0, 1.0, 4.0, 1.0, 7.0, 7.0],
        [10.0, 6.0, 5.0, 3.0, 7.0, 8.0, 4.0, 1.0, 5.0, 8.0],
        [8.0, 9.0, 9.0, 4.0, 7.0, 8.0, 3.0, 9.0, 6.0, 7.0],
    ])
    .expect("finite literal")
}
