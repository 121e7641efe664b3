//! Best-of-seeds drivers for plain NMF, Pre-NMF and matched sparse NMF.

use std::time::Instant;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use super::hals::{ahals, postprocess_fixed_support, HalsConfig};
use super::refit::{refit_v, v_from_q};
use super::snmf::snmf;
use super::tune::tune_mu;
use super::{relative_error, FactorPair};
use crate::error::{Error, Result};
use crate::matcore::{detect_duplicates, DenseMatrix, DEFAULT_ZERO_TOL};
use crate::preprocess::{preprocess, PreprocessConfig};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    Nmf,
    /// Preprocess with the given relaxation, factor `P_eps(M) D`, refit `V`
    /// on `M`.
    PreNmf { epsilon: f64 },
    /// Sparse NMF with `mu` tuned to reach the given sparsity of `U`.
    Snmf { target_s_u: f64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Nmf => "nmf",
            Method::PreNmf { .. } => "pre-nmf",
            Method::Snmf { .. } => "snmf",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub rank: usize,
    pub seeds: Vec<u64>,
    pub max_outer: usize,
    /// Fixed-support continuation length for the "improved" errors.
    pub improve_iters: usize,
    pub zero_tol: f64,
    /// Proceed with Pre-NMF even when columns are multiples of each other.
    pub allow_duplicates: bool,
}

impl PipelineConfig {
    pub fn new(rank: usize) -> Self {
        Self {
            rank,
            seeds: (0..10).collect(),
            max_outer: 1000,
            improve_iters: 100,
            zero_tol: DEFAULT_ZERO_TOL,
            allow_duplicates: false,
        }
    }
}

/// Serializable summary of one method run.
#[derive(Clone, Debug, Serialize)]
pub struct MethodRecord {
    pub method: &'static str,
    pub rank: usize,
    pub epsilon: Option<f64>,
    pub seed: u64,
    pub rel_error: f64,
    pub rel_error_improved: f64,
    /// Pre-NMF only: error of `V = V' D^{-1} Q^{-1}` instead of the refit.
    pub rel_error_vq: Option<f64>,
    pub s_u: f64,
    pub s_v: f64,
    pub s_u_improved: f64,
    pub rho_b_star: Option<f64>,
    pub q_ill_conditioned: Option<bool>,
    pub mu: Option<f64>,
    pub target_s_u: Option<f64>,
    pub tune_probes: Option<usize>,
    pub rank_too_large: bool,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub record: MethodRecord,
    pub factors: FactorPair,
    pub improved: FactorPair,
    /// Pre-NMF only: the matrix that was factored.
    pub preprocessed: Option<DenseMatrix>,
}

/// Runs `run` for every seed and keeps the smallest error, lowest seed on
/// ties.
fn best_of<T: Send>(
    seeds: &[u64],
    run: impl Fn(u64) -> Result<(f64, T)> + Sync + Send,
) -> Result<(u64, T)> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("at least one seed is needed".into()));
    }
    #[cfg(feature = "parallel")]
    let results: Vec<Result<(f64, T)>> = seeds.par_iter().map(|&s| run(s)).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<(f64, T)>> = seeds.iter().map(|&s| run(s)).collect();
    let mut best: Option<(f64, u64, T)> = None;
    for (&seed, res) in seeds.iter().zip(results) {
        let (err, value) = res?;
        if best.as_ref().is_none_or(|(e, _, _)| err < *e) {
            best = Some((err, seed, value));
        }
    }
    let (_, seed, value) = best.expect("seeds is non-empty");
    Ok((seed, value))
}

pub fn run_pipeline(m: &DenseMatrix, method: Method, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    let start = Instant::now();
    run_inner(m, method, cfg)
        .map(|mut out| {
            out.record.wall_time_s = start.elapsed().as_secs_f64();
            out
        })
        .map_err(|e| Error::InMethod {
            method: method.name(),
            source: Box::new(e),
        })
}

fn run_inner(m: &DenseMatrix, method: Method, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    let r = cfg.rank;
    let hals = HalsConfig::with_max_outer(cfg.max_outer);
    let mut record = MethodRecord {
        method: method.name(),
        rank: r,
        epsilon: None,
        seed: 0,
        rel_error: 0.0,
        rel_error_improved: 0.0,
        rel_error_vq: None,
        s_u: 0.0,
        s_v: 0.0,
        s_u_improved: 0.0,
        rho_b_star: None,
        q_ill_conditioned: None,
        mu: None,
        target_s_u: None,
        tune_probes: None,
        rank_too_large: false,
        wall_time_s: 0.0,
    };
    let mut preprocessed = None;
    let factors = match method {
        Method::Nmf => {
            let (_, fp) = best_of(&cfg.seeds, |s| {
                let fp = ahals(m, r, s, &hals)?;
                Ok((fp.rel_error, fp))
            })?;
            fp
        }
        Method::PreNmf { epsilon } => {
            if !cfg.allow_duplicates {
                let dups = detect_duplicates(m, 1e-9);
                if !dups.is_empty() {
                    return Err(Error::DuplicateColumns(
                        dups.iter().map(|d| (d.of, d.column)).collect(),
                    ));
                }
            }
            let pre = preprocess(
                m,
                &PreprocessConfig {
                    epsilon,
                    rescale: true,
                    ..PreprocessConfig::default()
                },
            )?;
            let x = pre.p_alpha_m.clone();
            let d = pre.rescale.clone().expect("rescale requested");
            let (_, (fp, vp)) = best_of(&cfg.seeds, |s| {
                let on_x = ahals(&x, r, s, &hals)?;
                let v = refit_v(m, &on_x.u)?;
                let mut fp = FactorPair::new(
                    m,
                    on_x.u.as_nalgebra().clone(),
                    v.into_nalgebra(),
                    on_x.history.clone(),
                )?;
                fp.seed = s;
                Ok((fp.rel_error, (fp, on_x.v)))
            })?;
            // V' D^{-1}, then Q^{-1}
            let vp_scaled = DenseMatrix::from_fn(vp.nrows(), vp.ncols(), |k, j| vp.get(k, j) / d[j])?;
            match v_from_q(&vp_scaled, &pre.b_star, 1.0) {
                Ok(vq) => {
                    record.rel_error_vq = Some(relative_error(m, &fp.u, &vq.v));
                    record.q_ill_conditioned = Some(vq.ill_conditioned);
                }
                Err(Error::SingularQ { .. }) => record.q_ill_conditioned = Some(true),
                Err(e) => return Err(e),
            }
            record.epsilon = Some(epsilon);
            record.rho_b_star = Some(pre.rho.rho);
            preprocessed = Some(x);
            fp
        }
        Method::Snmf { target_s_u } => {
            let first = *cfg.seeds.first().ok_or_else(|| {
                Error::InvalidParameter("at least one seed is needed".into())
            })?;
            let tuned = tune_mu(m, r, target_s_u, first, cfg.max_outer, cfg.zero_tol)?;
            let mu = tuned.config.mu.clone();
            let (_, fp) = best_of(&cfg.seeds, |s| {
                let mut c = tuned.config.clone();
                c.seed = s;
                c.mu = mu.clone();
                let fp = snmf(m, r, &c)?;
                Ok((fp.rel_error, fp))
            })?;
            record.mu = Some(mu[0]);
            record.target_s_u = Some(target_s_u);
            record.tune_probes = Some(tuned.probes);
            fp
        }
    };
    let factors = factors.with_zero_tol(cfg.zero_tol);
    let improved = postprocess_fixed_support(m, &factors.u, &factors.v, cfg.improve_iters, cfg.zero_tol)?
        .with_zero_tol(cfg.zero_tol);
    record.seed = factors.seed;
    record.rel_error = factors.rel_error;
    record.rel_error_improved = improved.rel_error;
    record.s_u = factors.s_u;
    record.s_v = factors.s_v;
    record.s_u_improved = improved.s_u;
    record.rank_too_large = factors.rank_too_large;
    Ok(PipelineOutput {
        record,
        factors,
        improved,
        preprocessed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nmf_on_identity() {
        let m = DenseMatrix::identity(3);
        let out = run_pipeline(&m, Method::Nmf, &PipelineConfig::new(3)).unwrap();
        assert!(out.record.rel_error <= 1e-8);
    }

    #[test]
    fn duplicates_are_rejected_unless_allowed() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0, 0.0], [1.0, 2.0, 1.0]]).unwrap();
        let mut cfg = PipelineConfig::new(2);
        cfg.seeds = vec![0];
        cfg.max_outer = 20;
        let err = run_pipeline(&m, Method::PreNmf { epsilon: 0.0 }, &cfg).unwrap_err();
        assert!(matches!(err, Error::InMethod { .. }));
        cfg.allow_duplicates = true;
        assert!(run_pipeline(&m, Method::PreNmf { epsilon: 0.0 }, &cfg).is_ok());
    }
}
