//! Independent oracles and instance generators shared by the integration
//! tests. Nothing here calls the solvers under test.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use prepnmf::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform `[0, 1)` entries, each zeroed with probability `zero_prob`.
pub fn random_nonneg(rng: &mut ChaCha8Rng, m: usize, n: usize, zero_prob: f64) -> DenseMatrix {
    DenseMatrix::from_fn(m, n, |_, _| {
        if rng.gen::<f64>() < zero_prob {
            0.0
        } else {
            rng.gen::<f64>()
        }
    })
    .unwrap()
}

/// `W H` with nonnegative factors of inner dimension `r`.
pub fn random_low_rank(rng: &mut ChaCha8Rng, m: usize, n: usize, r: usize, zero_prob: f64) -> (DenseMatrix, DenseMatrix, DenseMatrix) {
    let w = random_nonneg(rng, m, r, zero_prob);
    let h = random_nonneg(rng, r, n, zero_prob);
    (w.matmul(&h).unwrap(), w, h)
}

/// Brute-force solution of
/// `min ||d - A b||^2  s.t. b >= 0, A b <= u` by enumerating every choice
/// of free variables and active rows, solving the equality-constrained
/// least-squares problem through its pseudo-inverted KKT system, and keeping
/// the best feasible candidate. Exponential; only for tiny instances.
pub fn qp_oracle(a: &DMatrix<f64>, d: &DVector<f64>, u: &DVector<f64>) -> (f64, DVector<f64>) {
    let (m, p) = a.shape();
    let scale = d.amax().max(1.0);
    let mut best = (d.norm_squared(), DVector::zeros(p));
    for free_mask in 1u32..(1 << p) {
        let free: Vec<usize> = (0..p).filter(|j| free_mask >> j & 1 == 1).collect();
        for row_mask in 0u32..(1 << m) {
            let rows: Vec<usize> = (0..m).filter(|k| row_mask >> k & 1 == 1).collect();
            let f = free.len();
            let w = rows.len();
            let af = a.select_columns(&free);
            let aw = af.select_rows(&rows);
            let mut kkt = DMatrix::zeros(f + w, f + w);
            kkt.view_mut((0, 0), (f, f)).copy_from(&(af.transpose() * &af));
            kkt.view_mut((0, f), (f, w)).copy_from(&aw.transpose());
            kkt.view_mut((f, 0), (w, f)).copy_from(&aw);
            let mut rhs = DVector::zeros(f + w);
            rhs.rows_mut(0, f).copy_from(&(af.transpose() * d));
            for (k, &row) in rows.iter().enumerate() {
                rhs[f + k] = u[row];
            }
            let Ok(pinv) = kkt.pseudo_inverse(1e-12) else { continue };
            let sol = pinv * rhs;
            let bf = sol.rows(0, f).into_owned();
            if bf.iter().any(|&x| x < -1e-10 * scale) {
                continue;
            }
            let fit = &af * &bf;
            if (0..m).any(|k| fit[k] > u[k] + 1e-10 * scale) {
                continue;
            }
            if rows.iter().any(|&k| (fit[k] - u[k]).abs() > 1e-8 * scale) {
                // the KKT system was inconsistent
                continue;
            }
            let obj = (d - &fit).norm_squared();
            if obj < best.0 {
                let mut b = DVector::zeros(p);
                for (k, &j) in free.iter().enumerate() {
                    b[j] = bf[k].max(0.0);
                }
                best = (obj, b);
            }
        }
    }
    best
}

/// Spectral radius from the full complex spectrum.
pub fn eigen_radius(b: &DenseMatrix) -> f64 {
    // a nonnegative B is nilpotent iff B^n = 0, and the powers involve no
    // cancellation; the dense solver is off by eps^(1/n) there
    let a = b.as_nalgebra();
    let mut p = a.clone_owned();
    for _ in 1..a.nrows() {
        p = &p * a;
    }
    if p.iter().all(|&x| x == 0.0) {
        return 0.0;
    }
    b.as_nalgebra()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// `B* = 3/8` times the 4-cycle adjacency, derived by hand for the nested
/// squares: each column is best fit by the two columns sharing its pattern
/// on half the rows.
pub fn nested_b_star() -> DenseMatrix {
    DenseMatrix::from_fn(4, 4, |i, j| if (i + j) % 2 == 1 { 0.375 } else { 0.0 }).unwrap()
}

pub fn a_const() -> f64 {
    2f64.sqrt() - 1.0
}

pub fn alpha_bar() -> f64 {
    let a = a_const();
    (4.0 * a - 1.0) / (3.0 * a)
}

/// Random permutation of `0..n`.
pub fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// `l1`-normalized nonzero columns.
pub fn theta(m: &DenseMatrix) -> DenseMatrix {
    let cols: Vec<Vec<f64>> = (0..m.ncols())
        .filter_map(|j| {
            let c = m.column(j);
            let s: f64 = c.iter().map(|x| x.abs()).sum();
            (s > 1e-12 * m.max_abs()).then(|| c.iter().map(|x| x / s).collect())
        })
        .collect();
    DenseMatrix::from_columns(&cols).unwrap()
}

pub mod theory;

/// 50x40 "image-like" separable matrix plus noise: `r` bump-shaped parts
/// over 50 pixels, the first `r` columns pure, the rest sparse mixtures, and
/// uniform noise up to `noise * max`.
pub fn image_like(seed: u64, r: usize, noise: f64) -> DenseMatrix {
    let mut g = rng(seed);
    let (m, n) = (50usize, 40usize);
    let centers: Vec<f64> = (0..r)
        .map(|k| (k as f64 + 0.5) * m as f64 / r as f64 + g.gen_range(-2.0..2.0))
        .collect();
    let w = DenseMatrix::from_fn(m, r, |i, k| {
        let d = (i as f64 - centers[k]) / 4.0;
        (1.0 - d * d).max(0.0)
    })
    .unwrap();
    let h = DenseMatrix::from_fn(r, n, |k, j| {
        if j < r {
            (k == j) as u8 as f64
        } else {
            let x: f64 = g.gen();
            if x < 0.3 {
                0.0
            } else {
                x
            }
        }
    })
    .unwrap();
    let clean = w.matmul(&h).unwrap();
    let top = clean.max();
    clean.map(|x| x + noise * top * g.gen::<f64>()).unwrap()
}
