use nalgebra::{DMatrix, DVector};

use super::geom::{clip_half_plane, dist, rotate, Point};
use super::polygon::Polygon2;
use crate::error::{Error, Result};
use crate::matcore::{pullback, DenseMatrix, Svd, DEFAULT_DROP_TOL};
use crate::preprocess::check_rank3;

/// Absolute tolerance for all incidence and tangency tests, in chart units
/// (the outer polygon has perimeter 1).
pub const GEOM_TOL: f64 = 1e-9;

/// Affine map between the plane spanned by the normalized columns and 2D
/// chart coordinates: `x = origin + scale * basis * y`.
#[derive(Clone, Debug)]
pub struct Chart {
    origin: DVector<f64>,
    basis: DMatrix<f64>,
    scale: f64,
}

impl Chart {
    pub fn lift(&self, y: Point) -> Vec<f64> {
        let v = &self.origin + &self.basis * DVector::from_column_slice(&y) * self.scale;
        v.iter().copied().collect()
    }

    pub fn project(&self, x: &[f64]) -> Point {
        let d = DVector::from_column_slice(x) - &self.origin;
        let y = self.basis.tr_mul(&d) / self.scale;
        [y[0], y[1]]
    }

    pub fn ambient_dim(&self) -> usize {
        self.origin.len()
    }

    fn rotated(&self, angle: f64) -> Chart {
        // lift(R y) must equal the old lift(y): basis' = basis R^T
        let (s, c) = angle.sin_cos();
        let r_t = DMatrix::from_row_slice(2, 2, &[c, s, -s, c]);
        Chart {
            origin: self.origin.clone(),
            basis: &self.basis * r_t,
            scale: self.scale,
        }
    }
}

/// Rank-3 nested polygon problem: find a polygon with few vertices between
/// `inner` (hull of the normalized columns) and `outer` (the simplex
/// restricted to their affine hull).
#[derive(Clone, Debug)]
pub struct NppInstance {
    pub outer: Polygon2,
    pub inner: Polygon2,
    pub chart: Chart,
    /// Source column of each inner vertex.
    pub inner_columns: Vec<usize>,
    /// Chart image of every kept column, in `kept` order.
    pub points: Vec<Point>,
    /// Columns with nonzero l1 norm.
    pub kept: Vec<usize>,
    pub geom_tol: f64,
}

impl NppInstance {
    /// The same instance in a rotated chart; parameters restart at the new
    /// lowest outer vertex.
    pub fn rotated(&self, angle: f64) -> NppInstance {
        let points: Vec<Point> = self.points.iter().map(|&p| rotate(p, angle)).collect();
        let inner_pts: Vec<Point> = self.inner.vertices().iter().map(|&p| rotate(p, angle)).collect();
        let (inner, order) = Polygon2::hull_of(&inner_pts, 0.0);
        let inner_columns = order.iter().map(|&k| self.inner_columns[k]).collect();
        NppInstance {
            outer: self.outer.rotated(angle),
            inner,
            chart: self.chart.rotated(angle),
            inner_columns,
            points,
            kept: self.kept.clone(),
            geom_tol: self.geom_tol,
        }
    }
}

/// Builds the nested polygons of a rank-3 matrix.
pub fn build_npp(x: &DenseMatrix) -> Result<NppInstance> {
    check_rank3(x)?;
    let pb = pullback(x, DEFAULT_DROP_TOL)?;
    let theta = pb.theta.as_nalgebra();
    let (m, n) = theta.shape();
    let origin: DVector<f64> = theta.column_mean();
    let mut centered = theta.clone();
    for mut col in centered.column_iter_mut() {
        col -= &origin;
    }
    let svd = Svd::new(&centered);
    if svd.s.len() < 2 || svd.s[1] <= 1e-9 * svd.s[0] {
        return Err(Error::DegenerateChart(
            "normalized columns are collinear".into(),
        ));
    }
    let basis = svd.u.columns(0, 2).into_owned();

    // outer polygon: big triangle clipped by x_i(y) >= 0
    let radius = 10.0;
    let mut outer: Vec<Point> = (0..3)
        .map(|k| {
            let a = std::f64::consts::FRAC_PI_2 + k as f64 * 2.0 * std::f64::consts::PI / 3.0;
            [radius * a.cos(), radius * a.sin()]
        })
        .collect();
    for i in 0..m {
        let nrm = [basis[(i, 0)], basis[(i, 1)]];
        if nrm[0].hypot(nrm[1]) <= 1e-14 {
            if origin[i] < -1e-12 {
                return Err(Error::EmptyOuter);
            }
            continue;
        }
        outer = clip_half_plane(&outer, nrm, -origin[i]);
        if outer.len() < 3 {
            return Err(Error::EmptyOuter);
        }
    }
    let raw_diam = outer
        .iter()
        .flat_map(|a| outer.iter().map(move |b| dist(*a, *b)))
        .fold(0.0_f64, f64::max);
    let (outer_poly, _) = Polygon2::hull_of(&outer, 1e-12 * raw_diam);
    if outer_poly.len() < 3 {
        return Err(Error::EmptyOuter);
    }
    let scale = outer_poly.perimeter();
    let outer_poly = outer_poly.scaled(1.0 / scale);

    let chart = Chart {
        origin,
        basis,
        scale,
    };
    let points: Vec<Point> = (0..n)
        .map(|j| chart.project(theta.column(j).as_slice()))
        .collect();
    let (inner, hull_idx) = Polygon2::hull_of(&points, GEOM_TOL);
    if inner.len() < 3 {
        return Err(Error::DegenerateChart(
            "fewer than three distinct normalized columns".into(),
        ));
    }
    for (k, &v) in inner.vertices().iter().enumerate() {
        if !outer_poly.contains(v, GEOM_TOL) {
            return Err(Error::InvalidParameter(format!(
                "column {} has negative entries and lies outside the simplex",
                pb.kept[hull_idx[k]]
            )));
        }
    }
    let inner_columns = hull_idx.iter().map(|&k| pb.kept[k]).collect();
    Ok(NppInstance {
        outer: outer_poly,
        inner,
        chart,
        inner_columns,
        points,
        kept: pb.kept,
        geom_tol: GEOM_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_round_trips_and_normalizes_the_outer_perimeter() {
        let m = crate::fixtures::load("nested-squares").unwrap();
        let npp = build_npp(&m).unwrap();
        assert!((npp.outer.perimeter() - 1.0).abs() < 1e-12);
        assert_eq!(npp.outer.len(), 4);
        assert_eq!(npp.inner.len(), 4);
        let y = [0.01, -0.02];
        let back = npp.chart.project(&npp.chart.lift(y));
        assert!((back[0] - y[0]).abs() < 1e-12 && (back[1] - y[1]).abs() < 1e-12);
        // lifted points sum to one, like columns of the pullback
        let s: f64 = npp.chart.lift(y).iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_four_is_rejected() {
        let m = DenseMatrix::identity(4);
        assert!(matches!(build_npp(&m), Err(Error::RankMismatch { .. })));
    }
}
