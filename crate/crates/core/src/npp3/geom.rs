//! Plane geometry on `[f64; 2]` points.

pub type Point = [f64; 2];

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s]
}

#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

/// Signed distance of `p` from the directed line `a -> b`; positive on the
/// left.
#[inline]
pub fn side(a: Point, b: Point, p: Point) -> f64 {
    let e = sub(b, a);
    let len = norm(e);
    if len == 0.0 {
        return 0.0;
    }
    cross(e, sub(p, a)) / len
}

/// Distance from `p` to the segment `[a, b]`.
pub fn segment_dist(a: Point, b: Point, p: Point) -> f64 {
    let e = sub(b, a);
    let ee = dot(e, e);
    let s = if ee == 0.0 {
        0.0
    } else {
        (dot(sub(p, a), e) / ee).clamp(0.0, 1.0)
    };
    dist(add(a, scale(e, s)), p)
}

/// Rotation by `angle` radians about the origin.
pub fn rotate(p: Point, angle: f64) -> Point {
    let (s, c) = angle.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1]]
}

/// Keeps the part of a convex polygon where `dot(n, y) >= c`
/// (one Sutherland–Hodgman pass).
pub fn clip_half_plane(poly: &[Point], n: Point, c: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let fp = dot(n, p) - c;
        let fq = dot(n, q) - c;
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp > 0.0 && fq < 0.0) || (fp < 0.0 && fq > 0.0) {
            out.push(add(p, scale(sub(q, p), fp / (fp - fq))));
        }
    }
    out
}

/// Counterclockwise convex hull (Andrew's monotone chain). Points closer
/// than `tol` to a hull edge line are dropped, as are duplicates. Returns
/// indices into `points`.
pub fn convex_hull(points: &[Point], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
    });
    idx.dedup_by(|a, b| dist(points[*a], points[*b]) <= tol);
    if idx.len() < 3 {
        return idx;
    }
    let turn = |o: usize, a: usize, b: usize| {
        let e = sub(points[a], points[o]);
        let len = norm(e);
        if len <= tol {
            return 0.0;
        }
        cross(e, sub(points[b], points[o])) / len
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for &i in &idx {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], i) <= tol {
            hull.pop();
        }
        hull.push(i);
    }
    let lower_len = hull.len() + 1;
    for &i in idx.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(hull[hull.len() - 2], hull[hull.len() - 1], i) <= tol {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    hull
}
