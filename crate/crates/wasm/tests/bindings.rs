//! The JSON entry points behind the browser exports, run natively.

use prepnmf_wasm::{alpha_bar_of, fixture_csv, fk_json, geometry_json, preprocess_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

fn points(v: &Value) -> Vec<[f64; 2]> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|p| [p[0].as_f64().unwrap(), p[1].as_f64().unwrap()])
        .collect()
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// `p` inside the convex polygon `poly` (either orientation), with slack.
fn inside(poly: &[[f64; 2]], p: [f64; 2], tol: f64) -> bool {
    let n = poly.len();
    let s: Vec<f64> = (0..n).map(|i| cross(poly[i], poly[(i + 1) % n], p)).collect();
    s.iter().all(|&x| x >= -tol) || s.iter().all(|&x| x <= tol)
}

fn alpha_bar() -> f64 {
    let a = 2f64.sqrt() - 1.0;
    (4.0 * a - 1.0) / (3.0 * a)
}

#[test]
fn nested_squares_at_alpha_bar_show_eight_triangles() {
    let csv = fixture_csv("nested-squares").unwrap();
    let g = parse(geometry_json(&csv, alpha_bar()).unwrap());
    assert!((alpha_bar_of(&csv).unwrap() - alpha_bar()).abs() <= 1e-9);
    assert_eq!(g["solution_count"], 8);
    let outer = points(&g["outer"]);
    let inner = points(&g["inner"]);
    assert_eq!(inner.len(), 4);
    for t in g["triangles"].as_array().unwrap() {
        let tri = points(&t["vertices"]);
        assert_eq!(tri.len(), 3);
        for &v in &tri {
            assert!(inside(&outer, v, 1e-9));
        }
        for &q in &inner {
            assert!(inside(&tri, q, 1e-9), "inner vertex outside a triangle");
        }
    }
}

#[test]
fn above_alpha_bar_nothing_fits_and_below_it_a_continuum_does() {
    let csv = fixture_csv("nested-squares").unwrap();
    let above = parse(geometry_json(&csv, 0.6).unwrap());
    assert_eq!(above["feasible"], false);
    assert_eq!(above["solution_count"], 0);
    let below = parse(geometry_json(&csv, 0.4).unwrap());
    assert_eq!(below["feasible"], true);
    assert!(below["solution_count"].is_null());
    assert!(below["continuum_witness"].is_array());
}

#[test]
fn fk_samples_are_monotone_and_ahead_of_t() {
    let csv = fixture_csv("nested-squares").unwrap();
    let v = parse(fk_json(&csv, alpha_bar(), 3, 400).unwrap());
    let t: Vec<f64> = v["t"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let f: Vec<f64> = v["f"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(t.len(), 400);
    assert!(f.windows(2).all(|w| w[1] >= w[0] - 1e-9));
    assert!(t.iter().zip(&f).all(|(a, b)| b > a));
    // three steps around the squares never overshoot a full turn at alpha-bar
    let per = v["perimeter"].as_f64().unwrap();
    assert!(t.iter().zip(&f).all(|(a, b)| b - a <= per + 1e-9));
}

#[test]
fn preprocess_reports_radius_and_sparsity() {
    let v = parse(preprocess_json(&fixture_csv("nested-squares").unwrap(), 0.0).unwrap());
    assert!((v["rho"].as_f64().unwrap() - 0.75).abs() <= 1e-8);
    assert_eq!(v["s_p"].as_f64().unwrap(), 0.5);
    let noisy = parse(preprocess_json("0,0.01\n1,0\n1,1\n", 0.0).unwrap());
    assert_eq!(noisy["p"], serde_json::json!([[0.0, 0.01], [1.0, 0.0], [1.0, 1.0]]));
}

#[test]
fn bad_inputs_come_back_as_messages() {
    assert!(geometry_json("1,0\n0,1\n", 1.0).unwrap_err().contains("rank"));
    assert!(preprocess_json("1,2\n3,4\n", 1.0).is_err());
    assert!(preprocess_json("1,x\n", 0.0).is_err());
    assert!(fixture_csv("nope").is_err());
    assert!(alpha_bar_of("1,0\n0,1\n").is_err());
}
