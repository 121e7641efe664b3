//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes and returns plain strings (CSV in, JSON out) so the
//! page needs no bindings beyond the generated glue. The `*_json` functions
//! do the work and are also callable natively, which is how they are tested.

use prepnmf::io::parse_csv;
use prepnmf::matcore::{sparsity, DEFAULT_ZERO_TOL};
use prepnmf::npp3::{build_npp, enumerate_solutions, feasible_k, sample_fk, Point, SolutionSet};
use prepnmf::preprocess::{apply_alpha, check_rank3, find_alpha_bar, preprocess, PreprocessConfig};
use prepnmf::DenseMatrix;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Bisection tolerance for alpha-bar; see the CLI for why it is this tight.
const ALPHA_TOL: f64 = 1e-12;

fn parse(csv: &str) -> Result<DenseMatrix, String> {
    parse_csv(csv).map_err(|e| e.to_string())
}

fn to_json(v: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn rows(m: &DenseMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i)).collect()
}

#[derive(Serialize)]
struct PreprocessView {
    p: Vec<Vec<f64>>,
    b_star: Vec<Vec<f64>>,
    rho: f64,
    rho_converged: bool,
    s_m: f64,
    s_p: f64,
}

pub fn preprocess_json(csv: &str, epsilon: f64) -> Result<String, String> {
    let m = parse(csv)?;
    if !(0.0..1.0).contains(&epsilon) {
        return Err(format!("epsilon must lie in [0, 1), got {epsilon}"));
    }
    let pre = preprocess(
        &m,
        &PreprocessConfig {
            epsilon,
            ..PreprocessConfig::default()
        },
    )
    .map_err(|e| e.to_string())?;
    to_json(&PreprocessView {
        p: rows(&pre.p_alpha_m),
        b_star: rows(&pre.b_star),
        rho: pre.rho.rho,
        rho_converged: pre.rho.converged,
        s_m: sparsity(&m, DEFAULT_ZERO_TOL),
        s_p: sparsity(&pre.p_alpha_m, DEFAULT_ZERO_TOL),
    })
}

#[derive(Serialize)]
struct Triangle {
    vertices: Vec<Point>,
}

#[derive(Serialize)]
struct GeometryView {
    alpha: f64,
    perimeter: f64,
    outer: Vec<Point>,
    inner: Vec<Point>,
    /// Chart image of every nonzero column.
    points: Vec<Point>,
    feasible: bool,
    max_gap: f64,
    /// `None` when the triangles form a continuum.
    solution_count: Option<usize>,
    triangles: Vec<Triangle>,
    continuum_witness: Option<Point>,
}

/// Nested polygons of `P^alpha(M)` for a rank-3 `M`, with the triangles that
/// fit between them.
pub fn geometry_json(csv: &str, alpha: f64) -> Result<String, String> {
    let m = parse(csv)?;
    check_rank3(&m).map_err(|e| e.to_string())?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(format!("alpha must lie in [0, 1], got {alpha}"));
    }
    let b = preprocess(&m, &PreprocessConfig::default()).map_err(|e| e.to_string())?.b_star;
    let x = apply_alpha(&m, &b, alpha).map_err(|e| e.to_string())?;
    let npp = build_npp(&x).map_err(|e| e.to_string())?;
    let f = feasible_k(&npp, 3);
    let (solution_count, triangles, continuum_witness) = match enumerate_solutions(&npp, 3).map_err(|e| e.to_string())? {
        SolutionSet::Finite(list) => (
            Some(list.len()),
            list.into_iter().map(|s| Triangle { vertices: s.vertices }).collect(),
            None,
        ),
        SolutionSet::NotFinite { witness, .. } => (None, Vec::new(), Some(npp.outer.point_at(witness))),
    };
    to_json(&GeometryView {
        alpha,
        perimeter: npp.outer.perimeter(),
        outer: npp.outer.vertices().to_vec(),
        inner: npp.inner.vertices().to_vec(),
        points: npp.points.clone(),
        feasible: f.feasible,
        max_gap: f.max_gap,
        solution_count,
        triangles,
        continuum_witness,
    })
}

/// Largest `alpha` that keeps an exact rank-3 factorization.
pub fn alpha_bar_of(csv: &str) -> Result<f64, String> {
    let m = parse(csv)?;
    let b = preprocess(&m, &PreprocessConfig::default()).map_err(|e| e.to_string())?.b_star;
    find_alpha_bar(&m, &b, ALPHA_TOL).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct FkView {
    perimeter: f64,
    t: Vec<f64>,
    f: Vec<f64>,
}

/// `samples` values of `f_k` (k tangent steps) over one period.
pub fn fk_json(csv: &str, alpha: f64, k: usize, samples: usize) -> Result<String, String> {
    let m = parse(csv)?;
    check_rank3(&m).map_err(|e| e.to_string())?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(format!("alpha must lie in [0, 1], got {alpha}"));
    }
    let b = preprocess(&m, &PreprocessConfig::default()).map_err(|e| e.to_string())?.b_star;
    let npp = build_npp(&apply_alpha(&m, &b, alpha).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let pts = sample_fk(&npp, k.max(1), samples.clamp(2, 20_000)).map_err(|e| e.to_string())?;
    let (t, f) = pts.into_iter().unzip();
    to_json(&FkView {
        perimeter: npp.outer.perimeter(),
        t,
        f,
    })
}

/// CSV text of a built-in matrix.
pub fn fixture_csv(name: &str) -> Result<String, String> {
    prepnmf::fixtures::load(name)
        .map(|m| prepnmf::io::to_csv(&m))
        .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn preprocess_matrix(csv: &str, epsilon: f64) -> Result<String, JsError> {
    preprocess_json(csv, epsilon).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn nested_geometry(csv: &str, alpha: f64) -> Result<String, JsError> {
    geometry_json(csv, alpha).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn alpha_bar(csv: &str) -> Result<f64, JsError> {
    alpha_bar_of(csv).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fk_samples(csv: &str, alpha: f64, k: usize, samples: usize) -> Result<String, JsError> {
    fk_json(csv, alpha, k, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fixture(name: &str) -> Result<String, JsError> {
    fixture_csv(name).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fixture_names() -> String {
    prepnmf::fixtures::names().collect::<Vec<_>>().join(",")
}
