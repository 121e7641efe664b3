use serde::Serialize;

use super::geom::{add, convex_hull, dist, dot, norm, rotate, scale, side, sub, Point};

/// Strictly convex polygon with counterclockwise vertices, parametrized by
/// arc length. Vertex 0 is the lowest (then leftmost) vertex and has
/// parameter 0.
#[derive(Clone, Debug, Serialize)]
pub struct Polygon2 {
    vertices: Vec<Point>,
    /// `cum[i]` is the boundary length from vertex 0 to vertex `i`;
    /// `cum[n]` is the perimeter.
    cum: Vec<f64>,
}

impl Polygon2 {
    /// Convex hull of `points`; also returns, per polygon vertex, the index
    /// of the input point it came from.
    pub fn hull_of(points: &[Point], tol: f64) -> (Polygon2, Vec<usize>) {
        let mut idx = convex_hull(points, tol);
        // canonical start: lowest y, then lowest x
        if let Some(start) = (0..idx.len()).min_by(|&a, &b| {
            let (p, q) = (points[idx[a]], points[idx[b]]);
            p[1].total_cmp(&q[1]).then(p[0].total_cmp(&q[0]))
        }) {
            idx.rotate_left(start);
        }
        let vertices: Vec<Point> = idx.iter().map(|&i| points[i]).collect();
        (Polygon2::from_ccw(vertices), idx)
    }

    fn from_ccw(vertices: Vec<Point>) -> Self {
        let n = vertices.len();
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        for i in 0..n {
            let len = dist(vertices[i], vertices[(i + 1) % n]);
            cum.push(cum[i] + len);
        }
        Self { vertices, cum }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    pub fn perimeter(&self) -> f64 {
        self.cum[self.vertices.len()]
    }

    /// Boundary parameter of vertex `i`.
    pub fn vertex_param(&self, i: usize) -> f64 {
        self.cum[i]
    }

    pub fn scaled(&self, s: f64) -> Polygon2 {
        Polygon2::from_ccw(self.vertices.iter().map(|&v| scale(v, s)).collect())
    }

    /// Rotated copy; the parametrization restarts at the new lowest vertex.
    pub fn rotated(&self, angle: f64) -> Polygon2 {
        let pts: Vec<Point> = self.vertices.iter().map(|&v| rotate(v, angle)).collect();
        Polygon2::hull_of(&pts, 0.0).0
    }

    /// Smallest turn (distance of a vertex from the line through its
    /// neighbours); strictly convex polygons have a positive value.
    pub fn min_turn(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| side(self.vertex(i + n - 1), self.vertex(i + 1), self.vertex(i)).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Edge containing parameter `t` (taken modulo the perimeter).
    pub fn edge_at(&self, t: f64) -> usize {
        let per = self.perimeter();
        let t = t.rem_euclid(per);
        let n = self.len();
        match self.cum[..n].binary_search_by(|c| c.total_cmp(&t)) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1).min(n - 1),
        }
    }

    pub fn point_at(&self, t: f64) -> Point {
        let i = self.edge_at(t);
        let t = t.rem_euclid(self.perimeter());
        let (a, b) = (self.vertex(i), self.vertex(i + 1));
        let len = self.cum[i + 1] - self.cum[i];
        let s = ((t - self.cum[i]) / len).clamp(0.0, 1.0);
        add(a, scale(sub(b, a), s))
    }

    /// Parameter of the projection of `p` on edge `i`.
    pub fn param_on_edge(&self, i: usize, p: Point) -> f64 {
        let (a, b) = (self.vertex(i), self.vertex(i + 1));
        let e = sub(b, a);
        let len = norm(e);
        let s = (dot(sub(p, a), e) / len).clamp(0.0, len);
        let t = self.cum[i] + s;
        if t >= self.perimeter() {
            t - self.perimeter()
        } else {
            t
        }
    }

    /// Parameter of the boundary point nearest to `p`.
    pub fn param_of(&self, p: Point) -> f64 {
        let n = self.len();
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..n {
            let t = self.param_on_edge(i, p);
            let d = dist(self.point_at(t), p);
            if d < best.0 {
                best = (d, t);
            }
        }
        best.1
    }

    /// Smallest signed distance from `p` to the edge lines; nonnegative
    /// inside.
    pub fn depth(&self, p: Point) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| side(self.vertex(i), self.vertex(i + 1), p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.depth(p) >= -tol
    }

    /// Edges whose segment lies within `tol` of `p`.
    pub fn edges_near(&self, p: Point, tol: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| super::geom::segment_dist(self.vertex(i), self.vertex(i + 1), p) <= tol)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Polygon2 {
        Polygon2::hull_of(&[[1.0, 1.0], [0.0, 1.0], [0.0, 0.0], [1.0, 0.0]], 1e-12).0
    }

    #[test]
    fn canonical_start_and_parameters() {
        let sq = unit_square();
        assert_eq!(sq.vertex(0), [0.0, 0.0]);
        assert_eq!(sq.vertex(1), [1.0, 0.0]);
        assert_eq!(sq.perimeter(), 4.0);
        assert_eq!(sq.point_at(1.5), [1.0, 0.5]);
        assert_eq!(sq.point_at(5.5), [1.0, 0.5]);
        assert!((sq.param_of([0.0, 0.25]) - 3.75).abs() < 1e-15);
        assert_eq!(sq.edge_at(2.0), 2);
    }

    #[test]
    fn depth_is_signed() {
        let sq = unit_square();
        assert!((sq.depth([0.5, 0.5]) - 0.5).abs() < 1e-15);
        assert!(sq.depth([2.0, 0.5]) < 0.0);
        assert!(sq.min_turn() > 0.5);
    }
}
