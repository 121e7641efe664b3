//! Accelerated HALS and the fixed-support continuation.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FactorPair;
use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;

/// Entries below this snap to exactly zero after every update.
pub const SNAP: f64 = 1e-16;

#[derive(Clone, Copy, Debug)]
pub struct HalsConfig {
    pub max_outer: usize,
    /// Inner repetition weight: at most `1 + floor(alpha * mn / (r (m + n)))`
    /// sweeps per factor.
    pub alpha: f64,
    /// Inner sweeps stop once a sweep changes the factor by less than
    /// `eps_stop` times the first sweep's change.
    pub eps_stop: f64,
}

impl Default for HalsConfig {
    fn default() -> Self {
        Self {
            max_outer: 1000,
            alpha: 0.5,
            eps_stop: 0.1,
        }
    }
}

impl HalsConfig {
    pub fn with_max_outer(max_outer: usize) -> Self {
        Self {
            max_outer,
            ..Self::default()
        }
    }

    pub(crate) fn max_inner(&self, m: usize, n: usize, r: usize) -> usize {
        1 + (self.alpha * (m * n) as f64 / (r * (m + n)) as f64).floor() as usize
    }
}

/// Uniform `[0, 1)` factors from a seeded ChaCha8 stream (U column-major
/// first, then V), with V scaled by the optimal factor `<M, UV> / ||UV||^2`.
pub fn random_init(m: &DenseMatrix, r: usize, seed: u64) -> (DMatrix<f64>, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = DMatrix::from_fn(rows, r, |_, _| rng.gen::<f64>());
    let mut v = DMatrix::from_fn(r, cols, |_, _| rng.gen::<f64>());
    let uv = &u * &v;
    let denom = uv.norm_squared();
    let num = m.as_nalgebra().dot(&uv);
    if denom > 0.0 && num > 0.0 {
        v *= num / denom;
    }
    (u, v)
}

pub(crate) fn objective(m: &DMatrix<f64>, u: &DMatrix<f64>, v: &DMatrix<f64>) -> f64 {
    (m - u * v).norm_squared()
}

/// HALS sweeps over the columns of `x` for `min ||M - x y||` with
/// `a = M y^T`, `b = y y^T`. `mask`, when given, pins entries to zero.
pub(crate) fn update_columns(
    x: &mut DMatrix<f64>,
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    max_inner: usize,
    eps_stop: f64,
    mask: Option<&DMatrix<bool>>,
) {
    let (rows, r) = x.shape();
    let mut first_change = 0.0;
    for sweep in 0..max_inner {
        let mut change = 0.0;
        for k in 0..r {
            let bkk = b[(k, k)];
            if bkk <= 0.0 {
                continue;
            }
            // a_k - x b_k, evaluated with the current x
            let xb = &*x * b.column(k);
            for i in 0..rows {
                let old = x[(i, k)];
                let mut new = (old + (a[(i, k)] - xb[i]) / bkk).max(0.0);
                if new < SNAP {
                    new = 0.0;
                }
                if let Some(mask) = mask {
                    if !mask[(i, k)] {
                        new = 0.0;
                    }
                }
                change += (new - old) * (new - old);
                x[(i, k)] = new;
            }
        }
        if sweep == 0 {
            first_change = change;
        } else if change <= eps_stop * eps_stop * first_change {
            break;
        }
    }
}

/// Round-off level of `||M - UV||_F^2` near an exact fit. Objective values
/// this small carry no information, so monotonicity is only meaningful above
/// it.
pub fn roundoff_floor(m: &DenseMatrix) -> f64 {
    (4.0 * f64::EPSILON * m.frobenius_norm()).powi(2)
}

fn check_rank(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    Ok(())
}

/// A-HALS from an explicit starting point.
pub fn ahals_from(
    m: &DenseMatrix,
    u0: DMatrix<f64>,
    v0: DMatrix<f64>,
    cfg: &HalsConfig,
    u_mask: Option<&DMatrix<bool>>,
) -> Result<FactorPair> {
    let r = u0.ncols();
    check_rank(r)?;
    let (rows, cols) = m.shape();
    if u0.nrows() != rows || v0.shape() != (r, cols) {
        return Err(Error::DimensionMismatch("initial factors do not match M".into()));
    }
    let mm = m.as_nalgebra();
    let max_inner = cfg.max_inner(rows, cols, r);
    let (mut u, mut v) = (u0, v0);
    if let Some(mask) = u_mask {
        u.zip_apply(mask, |x, keep| {
            if !keep {
                *x = 0.0
            }
        });
    }
    let mut history = vec![objective(mm, &u, &v)];
    // exact to working precision; below this the objective only jitters
    let exact = roundoff_floor(m);
    for _ in 0..cfg.max_outer {
        let a = mm * v.transpose();
        let b = &v * v.transpose();
        update_columns(&mut u, &a, &b, max_inner, cfg.eps_stop, u_mask);
        let at = mm.transpose() * &u;
        let bt = u.transpose() * &u;
        let mut vt = v.transpose();
        update_columns(&mut vt, &at, &bt, max_inner, cfg.eps_stop, None);
        v = vt.transpose();
        let obj = objective(mm, &u, &v);
        history.push(obj);
        if obj <= exact {
            break;
        }
    }
    FactorPair::new(m, u, v, history)
}

/// A-HALS from the seeded random start.
pub fn ahals(m: &DenseMatrix, r: usize, seed: u64, cfg: &HalsConfig) -> Result<FactorPair> {
    check_rank(r)?;
    let (u, v) = random_init(m, r, seed);
    let mut out = ahals_from(m, u, v, cfg, None)?;
    out.seed = seed;
    Ok(out)
}

/// Continues HALS with the zero pattern of `U` frozen: entries at or below
/// `zero_tol * max|U|` stay zero.
pub fn postprocess_fixed_support(
    m: &DenseMatrix,
    u: &DenseMatrix,
    v: &DenseMatrix,
    extra_iters: usize,
    zero_tol: f64,
) -> Result<FactorPair> {
    let threshold = zero_tol * u.max_abs();
    let mask = u.as_nalgebra().map(|x| x > threshold);
    let cfg = HalsConfig::with_max_outer(extra_iters);
    ahals_from(
        m,
        u.as_nalgebra().clone(),
        v.as_nalgebra().clone(),
        &cfg,
        Some(&mask),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_recovered() {
        let m = DenseMatrix::identity(3);
        let best = (0..10)
            .map(|s| ahals(&m, 3, s, &HalsConfig::default()).unwrap().rel_error)
            .fold(f64::INFINITY, f64::min);
        assert!(best <= 1e-8, "best {best}");
    }

    #[test]
    fn objective_never_increases() {
        let m = crate::fixtures::load("separable-rank3").unwrap();
        let fp = ahals(&m, 3, 7, &HalsConfig::with_max_outer(200)).unwrap();
        for w in fp.history.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-10));
        }
    }

    #[test]
    fn init_is_deterministic() {
        let m = DenseMatrix::identity(4);
        assert_eq!(random_init(&m, 2, 3), random_init(&m, 2, 3));
        assert_ne!(random_init(&m, 2, 3).0, random_init(&m, 2, 4).0);
    }
}
