use std::path::Path;

use anyhow::{bail, Result};
use prepnmf::nmf::{run_pipeline, Method, MethodRecord, PipelineConfig, PipelineOutput, TUNE_PROBES, TUNE_TOL};
use prepnmf::DenseMatrix;
use serde::Serialize;

use super::warn_rho;
use crate::args::{FactorizeArgs, MethodArg};
use crate::input::{self, check_epsilons, eps_tag, parse_seeds};
use crate::pgm;
use crate::report::envelope;

#[derive(Serialize)]
struct Files {
    u: String,
    v: String,
    u_improved: String,
    v_improved: String,
    preprocessed: Option<String>,
    pgm: Vec<String>,
}

#[derive(Serialize)]
struct Record {
    #[serde(flatten)]
    record: MethodRecord,
    files: Files,
}

#[derive(Serialize)]
struct Environment {
    seeds: Vec<u64>,
    max_outer: usize,
    improve_iters: usize,
    zero_tol: f64,
    tune_tol: f64,
    tune_probes: usize,
    allow_duplicates: bool,
}

#[derive(Serialize)]
struct Body {
    rank: usize,
    environment: Environment,
    records: Vec<Record>,
}

fn save(out: &Path, tag: &str, o: &PipelineOutput, shape: Option<(usize, usize)>) -> Result<Files> {
    let mut pgms = Vec::new();
    if let Some((h, w)) = shape {
        for k in 0..o.factors.u.ncols() {
            let name = format!("{tag}_u{k}.pgm");
            pgm::write(&out.join(&name), o.factors.u.column(k), h, w)?;
            pgms.push(name);
        }
    }
    Ok(Files {
        u: input::write_csv(out, &format!("{tag}_u.csv"), &o.factors.u)?,
        v: input::write_csv(out, &format!("{tag}_v.csv"), &o.factors.v)?,
        u_improved: input::write_csv(out, &format!("{tag}_u_improved.csv"), &o.improved.u)?,
        v_improved: input::write_csv(out, &format!("{tag}_v_improved.csv"), &o.improved.v)?,
        preprocessed: o
            .preprocessed
            .as_ref()
            .map(|p| input::write_csv(out, &format!("{tag}_preprocessed.csv"), p))
            .transpose()?,
        pgm: pgms,
    })
}

fn print_row(r: &MethodRecord) {
    let eps = r.epsilon.map_or("-".to_string(), |e| e.to_string());
    println!(
        "{:<8} {:>8} {:>12.4e} {:>12.4e} {:>7.4} {:>7.4}",
        r.method, eps, r.rel_error, r.rel_error_improved, r.s_u, r.s_v
    );
}

pub fn run(args: &FactorizeArgs) -> Result<()> {
    if args.rank == 0 {
        bail!("rank must be at least 1");
    }
    check_epsilons(&args.epsilon)?;
    let seeds = parse_seeds(&args.seeds)?;
    let shape = args.image_shape.as_deref().map(pgm::parse_shape).transpose()?;
    let (m, info) = input::load(&args.input)?;
    if let Some((h, w)) = shape {
        if h * w != m.nrows() {
            bail!("image shape {h}x{w} does not match the {} rows of the input", m.nrows());
        }
    }
    input::ensure_dir(&args.out)?;
    let cfg = PipelineConfig {
        rank: args.rank,
        seeds: seeds.clone(),
        max_outer: args.max_outer,
        improve_iters: args.improve_iters,
        zero_tol: args.zero_tol,
        allow_duplicates: args.allow_duplicates,
    };
    let wants = |x: MethodArg| args.method.contains(&x);
    let mut records = Vec::new();
    let mut emit = |m: &DenseMatrix, method: Method, epsilon: Option<f64>, tag: String| -> Result<f64> {
        let mut o = run_pipeline(m, method, &cfg)?;
        // sNMF carries the epsilon of the Pre-NMF run it was matched to
        o.record.epsilon = o.record.epsilon.or(epsilon);
        if let Some(rho) = o.record.rho_b_star {
            warn_rho(&tag, rho);
        }
        print_row(&o.record);
        let files = save(&args.out, &tag, &o, shape)?;
        let s_u = o.record.s_u;
        records.push(Record { record: o.record, files });
        Ok(s_u)
    };
    println!(
        "{:<8} {:>8} {:>12} {:>12} {:>7} {:>7}",
        "method", "epsilon", "plain", "improved", "s(U)", "s(V)"
    );
    if wants(MethodArg::Nmf) {
        emit(&m, Method::Nmf, None, "nmf".into())?;
    }
    if wants(MethodArg::PreNmf) || wants(MethodArg::Snmf) {
        for &epsilon in &args.epsilon {
            let tag = eps_tag(epsilon);
            // sNMF is tuned to the sparsity Pre-NMF reaches at the same epsilon
            let target = emit(&m, Method::PreNmf { epsilon }, Some(epsilon), format!("pre-nmf_eps{tag}"))?;
            if wants(MethodArg::Snmf) {
                emit(&m, Method::Snmf { target_s_u: target }, Some(epsilon), format!("snmf_eps{tag}"))?;
            }
        }
    }
    let body = Body {
        rank: args.rank,
        environment: Environment {
            seeds,
            max_outer: args.max_outer,
            improve_iters: args.improve_iters,
            zero_tol: args.zero_tol,
            tune_tol: TUNE_TOL,
            tune_probes: TUNE_PROBES,
            allow_duplicates: args.allow_duplicates,
        },
        records,
    };
    input::write_json(&args.out.join("report.json"), &envelope("factorize", info, body))
}
