//! Penalty tuning for sparse NMF against a target sparsity of `U`.

use super::snmf::{snmf, SnmfConfig};
use super::FactorPair;
use crate::error::{Error, Result};
use crate::matcore::{sparsity, DenseMatrix};

pub const TUNE_PROBES: usize = 20;
pub const TUNE_TOL: f64 = 0.02;

#[derive(Clone, Debug)]
pub struct TuneResult {
    pub config: SnmfConfig,
    pub achieved_s_u: f64,
    /// `|achieved - target|`
    pub gap: f64,
    pub probes: usize,
    pub factors: FactorPair,
}

/// Log-scale bisection of a uniform `mu` over `[1e-6, 1e3] * max|M|^2 * n`.
/// Best effort: returns the closest probe when the target is not reached.
pub fn tune_mu(
    m: &DenseMatrix,
    r: usize,
    target_s_u: f64,
    seed: u64,
    max_outer: usize,
    zero_tol: f64,
) -> Result<TuneResult> {
    if !(0.0..1.0).contains(&target_s_u) {
        return Err(Error::InvalidParameter(format!(
            "target sparsity {target_s_u} is outside [0, 1)"
        )));
    }
    let base = m.max_abs().powi(2) * m.ncols() as f64;
    let base = if base > 0.0 { base } else { 1.0 };
    let mut probes = 0;
    let mut best: Option<(f64, f64, FactorPair)> = None;
    let mut probe = |mu: f64, probes: &mut usize| -> Result<f64> {
        *probes += 1;
        let fp = snmf(m, r, &SnmfConfig::uniform(r, mu, max_outer, seed))?;
        let s = sparsity(&fp.u, zero_tol);
        if best.as_ref().is_none_or(|(_, bs, _)| (s - target_s_u).abs() < (bs - target_s_u).abs()) {
            best = Some((mu, s, fp));
        }
        Ok(s)
    };

    let (mut lo, mut hi) = ((1e-6 * base).ln(), (1e3 * base).ln());
    let s_lo = probe(lo.exp(), &mut probes)?;
    if s_lo + TUNE_TOL < target_s_u {
        let s_hi = probe(hi.exp(), &mut probes)?;
        if s_hi >= target_s_u - TUNE_TOL {
            while probes < TUNE_PROBES {
                let mid = 0.5 * (lo + hi);
                let s = probe(mid.exp(), &mut probes)?;
                if (s - target_s_u).abs() <= TUNE_TOL {
                    break;
                }
                if s < target_s_u {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
    }
    let (mu, s, factors) = best.expect("at least one probe ran");
    Ok(TuneResult {
        config: SnmfConfig::uniform(r, mu, max_outer, seed),
        achieved_s_u: s,
        gap: (s - target_s_u).abs(),
        probes,
        factors,
    })
}
