use anyhow::{bail, Result};
use prepnmf::matcore::{detect_duplicates, sparsity};
use prepnmf::preprocess::{apply_alpha, find_alpha_bar, preprocess, PreprocessConfig, SpectralRadius};
use serde::Serialize;

use super::warn_rho;
use crate::args::PreprocessArgs;
use crate::input::{self, check_epsilons, eps_tag, parse_alpha, AlphaArg};
use crate::report::envelope;

/// Bisection tolerance for `--alpha auto`. The result is the feasible end of
/// the bracket, and just below alpha-bar the solution set is a continuum, so
/// the bracket must close well inside the geometric touching tolerance.
pub const ALPHA_TOL: f64 = 1e-12;

#[derive(Serialize)]
struct Entry {
    epsilon: f64,
    alpha: f64,
    /// Set when alpha was searched for.
    alpha_bar: Option<f64>,
    rho_b_star: SpectralRadius,
    /// `alpha * rho(B*)`, the radius that decides whether `I - alpha B*` inverts.
    rho_alpha: f64,
    near_singular: bool,
    s_m: f64,
    s_p: f64,
    nonzero_columns: Vec<usize>,
    max_column_kkt: f64,
    p_file: String,
    b_star_file: String,
}

#[derive(Serialize)]
struct Body {
    zero_tol: f64,
    results: Vec<Entry>,
}

pub fn run(args: &PreprocessArgs) -> Result<()> {
    check_epsilons(&args.epsilon)?;
    let alpha = parse_alpha(&args.alpha)?;
    let (m, info) = input::load(&args.input)?;
    if !args.allow_duplicates {
        let dups = detect_duplicates(&m, 1e-9);
        if !dups.is_empty() {
            let named: Vec<String> = dups.iter().map(|d| format!("{} ~ {}", d.column, d.of)).collect();
            bail!(
                "columns are positive multiples of each other ({}); remove them or pass --allow-duplicates",
                named.join(", ")
            );
        }
    }
    input::ensure_dir(&args.out)?;
    let s_m = sparsity(&m, args.zero_tol);
    let mut results = Vec::new();
    println!("{:>8} {:>10} {:>12} {:>8} {:>8}", "epsilon", "alpha", "rho(B*)", "s(M)", "s(P)");
    for &epsilon in &args.epsilon {
        let pre = preprocess(
            &m,
            &PreprocessConfig {
                epsilon,
                ..PreprocessConfig::default()
            },
        )?;
        let (a, alpha_bar) = match alpha {
            AlphaArg::Value(a) => (a, None),
            AlphaArg::Auto => {
                let a = find_alpha_bar(&m, &pre.b_star, ALPHA_TOL)?;
                (a, Some(a))
            }
        };
        let p = if a == 1.0 { pre.p_alpha_m.clone() } else { apply_alpha(&m, &pre.b_star, a)? };
        let tag = eps_tag(epsilon);
        let p_file = input::write_csv(&args.out, &format!("p_eps{tag}.csv"), &p)?;
        let b_star_file = input::write_csv(&args.out, &format!("b_star_eps{tag}.csv"), &pre.b_star)?;
        let s_p = sparsity(&p, args.zero_tol);
        let threshold = args.zero_tol * p.max_abs();
        let nonzero_columns = (0..p.ncols())
            .filter(|&j| p.column(j).iter().any(|v| v.abs() > threshold))
            .collect();
        let rho_alpha = a * pre.rho.rho;
        warn_rho(&format!("epsilon {epsilon}"), rho_alpha);
        println!("{epsilon:>8} {a:>10.6} {:>12.8} {s_m:>8.4} {s_p:>8.4}", pre.rho.rho);
        results.push(Entry {
            epsilon,
            alpha: a,
            alpha_bar,
            rho_b_star: pre.rho,
            rho_alpha,
            near_singular: rho_alpha >= super::RHO_WARN,
            s_m,
            s_p,
            nonzero_columns,
            max_column_kkt: pre.column_kkt.iter().copied().fold(0.0, f64::max),
            p_file,
            b_star_file,
        });
    }
    let body = Body {
        zero_tol: args.zero_tol,
        results,
    };
    input::write_json(&args.out.join("preprocess.json"), &envelope("preprocess", info, body))
}
