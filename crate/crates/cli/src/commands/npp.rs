use std::fmt::Write as _;
use std::fs;

use anyhow::{Context, Result};
use prepnmf::npp3::{build_npp, enumerate_solutions, f_k, feasible_k, sample_fk, Feasibility, Point, SolutionSet};
use prepnmf::preprocess::{apply_alpha, check_rank3, find_alpha_bar, preprocess, PreprocessConfig};
use serde::Serialize;

use super::preprocess::ALPHA_TOL;
use super::warn_rho;
use crate::args::NppArgs;
use crate::input::{self, parse_alpha, rows_of, AlphaArg};
use crate::report::envelope;

/// Shifts (as fractions of the perimeter) checked for `f(t + s) = f(t) + s`.
const SHIFTS: [f64; 3] = [0.125, 0.25, 0.5];

#[derive(Serialize)]
struct Shift {
    fraction: f64,
    max_abs_residual: f64,
}

#[derive(Serialize)]
struct Solution {
    t_values: Vec<f64>,
    vertices: Vec<Point>,
    /// Lifted vertices as rows of the `m x 3` factor.
    u: Vec<Vec<f64>>,
    u_file: String,
}

#[derive(Serialize)]
struct Body {
    alpha: f64,
    alpha_bar: Option<f64>,
    rho_b_star: f64,
    perimeter: f64,
    inner_vertices: Vec<Point>,
    /// Input column behind each inner vertex.
    inner_columns: Vec<usize>,
    outer_vertices: Vec<Point>,
    /// The inner polygon is already a triangle, so its columns are a solution.
    separable: bool,
    feasibility: Feasibility,
    finite: bool,
    solution_count: Option<usize>,
    solutions: Vec<Solution>,
    /// Set when the solutions form a continuum.
    continuum_witness: Option<f64>,
    fk_steps: usize,
    fk_file: String,
    shift_residuals: Vec<Shift>,
    p_file: String,
}

pub fn run(args: &NppArgs) -> Result<()> {
    let alpha = parse_alpha(&args.alpha)?;
    let (m, info) = input::load(&args.input)?;
    check_rank3(&m)?;
    input::ensure_dir(&args.out)?;
    let pre = preprocess(&m, &PreprocessConfig::default())?;
    let (a, alpha_bar) = match alpha {
        AlphaArg::Value(a) => (a, None),
        AlphaArg::Auto => {
            let a = find_alpha_bar(&m, &pre.b_star, ALPHA_TOL)?;
            (a, Some(a))
        }
    };
    warn_rho("B*", a * pre.rho.rho);
    let x = apply_alpha(&m, &pre.b_star, a)?;
    let p_file = input::write_csv(&args.out, "p_alpha.csv", &x)?;
    let npp = build_npp(&x)?;
    let per = npp.outer.perimeter();

    let samples = sample_fk(&npp, args.fk, args.samples.max(1))?;
    let mut csv = String::from("# t,f_k(t)\n");
    for (t, f) in &samples {
        writeln!(csv, "{t},{f}").expect("string write");
    }
    let fk_file = "fk.csv".to_string();
    fs::write(args.out.join(&fk_file), csv).context("writing fk.csv")?;
    let mut shift_residuals = Vec::new();
    for frac in SHIFTS {
        let s = frac * per;
        let mut worst = 0.0_f64;
        for (t, f) in &samples {
            worst = worst.max((f_k(&npp, t + s, args.fk)? - f - s).abs());
        }
        shift_residuals.push(Shift {
            fraction: frac,
            max_abs_residual: worst,
        });
    }

    let feasibility = feasible_k(&npp, 3);
    let (finite, solutions, continuum_witness) = match enumerate_solutions(&npp, 3)? {
        SolutionSet::Finite(list) => {
            let mut out = Vec::new();
            for (i, s) in list.into_iter().enumerate() {
                let u_file = input::write_csv(&args.out, &format!("solution{i}_u.csv"), &s.u)?;
                out.push(Solution {
                    t_values: s.t_values,
                    vertices: s.vertices,
                    u: rows_of(&s.u),
                    u_file,
                });
            }
            (true, out, None)
        }
        SolutionSet::NotFinite { witness, .. } => (false, Vec::new(), Some(witness)),
    };
    match (finite, alpha_bar) {
        (true, Some(ab)) => println!("alpha-bar {ab:.8}: {} solutions", solutions.len()),
        (true, None) => println!("alpha {a}: {} solutions", solutions.len()),
        (false, _) => println!("alpha {a}: infinitely many solutions (witness t = {})", continuum_witness.unwrap_or(f64::NAN)),
    }
    let body = Body {
        alpha: a,
        alpha_bar,
        rho_b_star: pre.rho.rho,
        perimeter: per,
        inner_vertices: npp.inner.vertices().to_vec(),
        inner_columns: npp.inner_columns.clone(),
        outer_vertices: npp.outer.vertices().to_vec(),
        separable: npp.inner.len() == 3,
        feasibility,
        finite,
        solution_count: finite.then_some(solutions.len()),
        solutions,
        continuum_witness,
        fk_steps: args.fk,
        fk_file,
        shift_residuals,
        p_file,
    };
    input::write_json(&args.out.join("npp.json"), &envelope("npp", info, body))
}
