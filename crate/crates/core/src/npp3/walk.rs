//! Tangent walks around the outer polygon and the functions `f_k`.
//!
//! From `x(t)` on the outer boundary, the walk follows the line through
//! `x(t)` that touches the inner polygon with the inner polygon on its left,
//! and stops where that line leaves the outer polygon. Parameters are
//! unwrapped: `t_next >= t`, never reduced modulo the perimeter. `k` counts
//! steps, so `f_k(t) = t_{k+1}` and a `k`-gon exists iff
//! `max_t f_k(t) - t >= 1`.

use serde::Serialize;

use super::geom::{add, cross, dist, dot, norm, scale, segment_dist, side, sub, Point};
use super::instance::NppInstance;
use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;

/// How the tangent segment meets the inner polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactCase {
    /// The touch point lies on the outer side carrying the start point; the
    /// step runs along that side to its end vertex.
    StartSide,
    /// The touch point lies on the outer side where the step ends; the step
    /// ends on it.
    EndSide,
    /// The touch point is strictly inside the outer polygon.
    Interior,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Step {
    pub t_next: f64,
    pub case: ContactCase,
    /// Touch point on the inner polygon.
    pub q: Point,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    Forward,
    Backward,
}

fn step_dir(npp: &NppInstance, t: f64, direction: Direction) -> Result<Step> {
    let tol = npp.geom_tol;
    let outer = &npp.outer;
    let inner = npp.inner.vertices();
    let sign = match direction {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let x = outer.point_at(t);
    if npp.inner.depth(x) > tol {
        return Err(Error::StartInsideQ);
    }

    // tangent vertex: every inner vertex on the chosen side of x -> q. Among
    // the candidates that pass within tol, keep the exact extreme one; a
    // candidate a hair past the true tangent would tilt the ray by tol/|q - x|.
    let mut best: Option<Point> = None;
    for &q in inner {
        if dist(q, x) <= tol {
            continue;
        }
        let supports = inner
            .iter()
            .all(|&w| dist(w, x) <= tol || sign * side(x, q, w) >= -tol);
        if !supports {
            continue;
        }
        best = match best {
            None => Some(q),
            Some(b) => {
                let s = sign * side(x, b, q);
                if s < 0.0 || (s == 0.0 && dist(q, x) > dist(b, x)) {
                    Some(q)
                } else {
                    Some(b)
                }
            }
        };
    }
    let q = best.ok_or(Error::StartInsideQ)?;
    let dir = scale(sub(q, x), 1.0 / dist(q, x));

    // exit point of the ray x + s dir
    let mut exit: Option<(f64, usize)> = None;
    for i in 0..outer.len() {
        let (p0, p1) = (outer.vertex(i), outer.vertex(i + 1));
        let e = sub(p1, p0);
        let e = scale(e, 1.0 / norm(e));
        let a0 = cross(e, sub(x, p0));
        let a1 = cross(e, dir);
        if a1 < -1e-12 {
            let s = a0.max(0.0) / -a1;
            if exit.is_none_or(|(best_s, _)| s < best_s) {
                exit = Some((s, i));
            }
        }
    }
    let (s, edge) = exit.ok_or(Error::EmptyOuter)?;
    let y = add(x, scale(dir, s));
    let tau = outer.param_on_edge(edge, y);
    let per = outer.perimeter();
    let base = t.rem_euclid(per);
    let mut progress = match direction {
        Direction::Forward => (tau - base).rem_euclid(per),
        Direction::Backward => (base - tau).rem_euclid(per),
    };
    if progress > per - 1e-12 && dist(x, y) <= tol {
        progress = 0.0;
    }
    let t_next = t + sign * progress;

    // classify by where the touching inner vertices sit
    let touching: Vec<Point> = inner
        .iter()
        .copied()
        .filter(|&w| {
            dist(w, x) > tol && side(x, q, w).abs() <= tol && dot(sub(w, x), dir) > 0.0
        })
        .collect();
    let start_edges = outer.edges_near(x, tol);
    let end_edges = outer.edges_near(y, tol);
    let on_edges = |w: Point, edges: &[usize]| {
        edges
            .iter()
            .any(|&i| segment_dist(outer.vertex(i), outer.vertex(i + 1), w) <= tol)
    };
    let case = if touching.iter().any(|&w| on_edges(w, &start_edges)) {
        ContactCase::StartSide
    } else if touching.iter().any(|&w| on_edges(w, &end_edges)) {
        ContactCase::EndSide
    } else {
        ContactCase::Interior
    };
    Ok(Step { t_next, case, q })
}

/// One forward step of the walk from parameter `t`.
pub fn tangent_step(npp: &NppInstance, t: f64) -> Result<Step> {
    step_dir(npp, t, Direction::Forward)
}

/// The mirrored step: tangent with the inner polygon on the right, walking
/// clockwise. Used to pull change points back through the walk.
pub fn tangent_step_back(npp: &NppInstance, t: f64) -> Result<Step> {
    step_dir(npp, t, Direction::Backward)
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentWalk {
    pub t_start: f64,
    pub k: usize,
    /// `t_1 .. t_{k+1}`, nondecreasing and unwrapped.
    pub t_values: Vec<f64>,
    pub steps: Vec<Step>,
    /// `x(t_1) .. x(t_{k+1})` in chart coordinates.
    pub vertices: Vec<Point>,
}

impl TangentWalk {
    /// `f_k(t_start) = t_{k+1}`
    pub fn end(&self) -> f64 {
        *self.t_values.last().expect("k + 1 values")
    }
}

pub fn walk_fk(npp: &NppInstance, t: f64, k: usize) -> Result<TangentWalk> {
    let mut t_values = Vec::with_capacity(k + 1);
    let mut steps = Vec::with_capacity(k);
    let mut vertices = Vec::with_capacity(k + 1);
    t_values.push(t);
    vertices.push(npp.outer.point_at(t));
    let mut cur = t;
    for _ in 0..k {
        let s = tangent_step(npp, cur)?;
        cur = s.t_next;
        t_values.push(cur);
        vertices.push(npp.outer.point_at(cur));
        steps.push(s);
    }
    Ok(TangentWalk {
        t_start: t,
        k,
        t_values,
        steps,
        vertices,
    })
}

pub fn f_k(npp: &NppInstance, t: f64, k: usize) -> Result<f64> {
    Ok(walk_fk(npp, t, k)?.end())
}

/// `(t, f_k(t))` on a uniform grid of `samples` points over one period.
pub fn sample_fk(npp: &NppInstance, k: usize, samples: usize) -> Result<Vec<(f64, f64)>> {
    let per = npp.outer.perimeter();
    (0..samples)
        .map(|i| {
            let t = per * i as f64 / samples as f64;
            Ok((t, f_k(npp, t, k)?))
        })
        .collect()
}

/// Boundary parameters where the line through `a`, `b` crosses the outer
/// boundary.
fn line_crossings(npp: &NppInstance, a: Point, b: Point) -> Vec<f64> {
    let outer = &npp.outer;
    let mut out = Vec::new();
    for i in 0..outer.len() {
        let (p, q) = (outer.vertex(i), outer.vertex(i + 1));
        let (fp, fq) = (side(a, b, p), side(a, b, q));
        if (fp <= 0.0 && fq > 0.0) || (fp >= 0.0 && fq < 0.0) {
            let y = add(p, scale(sub(q, p), fp / (fp - fq)));
            out.push(outer.param_on_edge(i, y));
        }
    }
    out
}

fn dedup_params(mut ts: Vec<f64>, per: f64) -> Vec<f64> {
    for t in ts.iter_mut() {
        *t = t.rem_euclid(per);
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    if ts.len() > 1 && per - ts[ts.len() - 1] + ts[0] <= 1e-12 {
        ts.pop();
    }
    ts
}

/// Parameters in `[0, perimeter)` where the combinatorial structure of the
/// `k`-step walk can change: outer vertices, crossings of inner edge lines
/// with the outer boundary and inner vertices on it, each pulled back
/// through up to `k` backward steps.
pub fn contact_change_points(npp: &NppInstance, k: usize) -> Vec<f64> {
    let per = npp.outer.perimeter();
    let mut base: Vec<f64> = (0..npp.outer.len()).map(|i| npp.outer.vertex_param(i)).collect();
    let inner = &npp.inner;
    for j in 0..inner.len() {
        base.extend(line_crossings(npp, inner.vertex(j), inner.vertex(j + 1)));
        let v = inner.vertex(j);
        if npp.outer.depth(v) <= npp.geom_tol {
            base.push(npp.outer.param_of(v));
        }
    }
    let base = dedup_params(base, per);
    let mut all = base.clone();
    let mut frontier = base;
    for _ in 0..k {
        frontier = frontier
            .iter()
            .filter_map(|&t| tangent_step_back(npp, t).ok().map(|s| s.t_next))
            .collect();
        frontier = dedup_params(frontier, per);
        all.extend(frontier.iter().copied());
    }
    dedup_params(all, per)
}

/// Number of distinct walks (as vertex sets) started from the contact
/// change points.
pub fn contact_classes(npp: &NppInstance, k: usize) -> usize {
    let mut classes: Vec<Vec<Point>> = Vec::new();
    for t in contact_change_points(npp, k) {
        let Ok(w) = walk_fk(npp, t, k) else { continue };
        let verts = w.vertices[..k].to_vec();
        if !classes.iter().any(|c| same_vertex_set(c, &verts, 1e-6)) {
            classes.push(verts);
        }
    }
    classes.len()
}

fn same_vertex_set<const D: usize>(a: &[[f64; D]], b: &[[f64; D]], tol: f64) -> bool {
    let close = |p: &[f64; D], q: &[f64; D]| {
        p.iter().zip(q).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt() <= tol
    };
    a.iter().all(|p| b.iter().any(|q| close(p, q))) && b.iter().all(|q| a.iter().any(|p| close(p, q)))
}

/// Uniform safety grid added to the change points in the feasibility scan.
pub const SAFETY_GRID: usize = 512;

#[derive(Clone, Debug, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// Start parameter attaining the largest gap.
    pub witness: Option<f64>,
    /// `max_t f_k(t) - t - perimeter` over the candidates.
    pub max_gap: f64,
    pub candidates: usize,
}

fn scan_candidates(npp: &NppInstance, k: usize) -> Vec<f64> {
    let per = npp.outer.perimeter();
    let mut ts = contact_change_points(npp, k);
    ts.extend((0..SAFETY_GRID).map(|i| per * i as f64 / SAFETY_GRID as f64));
    dedup_params(ts, per)
}

/// Number of best candidates whose neighbouring intervals get a local search.
const REFINE_TOP: usize = 8;

/// Golden-section maximization of the gap on `[lo, hi]`.
fn golden_max(npp: &NppInstance, k: usize, mut lo: f64, mut hi: f64) -> Option<(f64, f64)> {
    let per = npp.outer.perimeter();
    let gap = |t: f64| f_k(npp, t, k).ok().map(|f| f - t - per);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut g1, mut g2) = (gap(x1)?, gap(x2)?);
    for _ in 0..60 {
        if hi - lo <= 1e-13 * per {
            break;
        }
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + r * (hi - lo);
            g2 = gap(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - r * (hi - lo);
            g1 = gap(x1)?;
        }
    }
    Some(if g1 >= g2 { (x1, g1) } else { (x2, g2) })
}

/// Evaluates the gap `f_k(t) - t - perimeter` on the scan candidates, then
/// searches the intervals on both sides of the best few. Between change
/// points the gap is smooth but can peak inside an interval.
fn scan_gaps(npp: &NppInstance, k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let per = npp.outer.perimeter();
    let mut ts = scan_candidates(npp, k);
    let mut gaps = Vec::with_capacity(ts.len());
    for &t in &ts {
        gaps.push(f_k(npp, t, k)? - t - per);
    }
    let n = ts.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| gaps[b].total_cmp(&gaps[a]));
    let mut extra = Vec::new();
    for &i in order.iter().take(REFINE_TOP.min(n)) {
        let prev = if i == 0 { ts[n - 1] - per } else { ts[i - 1] };
        let next = if i + 1 == n { ts[0] + per } else { ts[i + 1] };
        for (lo, hi) in [(prev, ts[i]), (ts[i], next)] {
            if let Some((t, g)) = golden_max(npp, k, lo, hi) {
                if g > gaps[i] {
                    extra.push((t.rem_euclid(per), g));
                }
            }
        }
    }
    for (t, g) in extra {
        ts.push(t);
        gaps.push(g);
    }
    let mut pairs: Vec<(f64, f64)> = ts.into_iter().zip(gaps).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

/// Decides whether a polygon with `k` vertices fits between the inner and
/// outer polygons: `f_k(t) >= t + 1` for some `t`. Change points plus a
/// safety grid bracket the maximum of `f_k(t) - t`, and a golden-section
/// search inside the best intervals pins it down.
pub fn feasible_k(npp: &NppInstance, k: usize) -> Feasibility {
    let (ts, gaps) = match scan_gaps(npp, k) {
        Ok(v) => v,
        Err(_) => {
            // fall back to the points that do evaluate
            let per = npp.outer.perimeter();
            let ts = scan_candidates(npp, k);
            let gaps = ts
                .iter()
                .map(|&t| f_k(npp, t, k).map_or(f64::NEG_INFINITY, |f| f - t - per))
                .collect();
            (ts, gaps)
        }
    };
    let mut best = (f64::NEG_INFINITY, None);
    for (&t, &gap) in ts.iter().zip(&gaps) {
        if gap > best.0 {
            best = (gap, Some(t));
        }
    }
    Feasibility {
        feasible: best.0 >= -npp.geom_tol,
        witness: best.1,
        max_gap: best.0,
        candidates: ts.len(),
    }
}

/// A `k`-vertex polygon nested between the inner and outer polygons.
#[derive(Clone, Debug)]
pub struct NppSolution {
    /// Start parameters of the vertices.
    pub t_values: Vec<f64>,
    /// Chart coordinates.
    pub vertices: Vec<Point>,
    /// Vertices lifted to the simplex, one per column (`m x k`).
    pub u: DenseMatrix,
}

#[derive(Clone, Debug)]
pub enum SolutionSet {
    Finite(Vec<NppSolution>),
    /// The feasible start parameters form an interval, so there is a
    /// continuum of solutions.
    NotFinite { witness: f64, max_gap: f64 },
}

impl SolutionSet {
    pub fn count(&self) -> Option<usize> {
        match self {
            SolutionSet::Finite(v) => Some(v.len()),
            SolutionSet::NotFinite { .. } => None,
        }
    }
}

/// Lifted vertex sets closer than this are one solution.
const SOLUTION_DEDUP: f64 = 1e-6;

fn lift_clipped(npp: &NppInstance, p: Point) -> Vec<f64> {
    npp.chart
        .lift(p)
        .into_iter()
        .map(|v| if v < 0.0 { 0.0 } else { v })
        .collect()
}

/// Lists the `k`-vertex solutions, one per distinct vertex set. Solutions
/// exist where `f_k(t) - t` reaches the perimeter; when that happens on an
/// interval (or strictly exceeds it) the set is reported as not finite.
pub fn enumerate_solutions(npp: &NppInstance, k: usize) -> Result<SolutionSet> {
    let per = npp.outer.perimeter();
    let tol = npp.geom_tol;
    let ts = scan_candidates(npp, k);
    let mut gaps = Vec::with_capacity(ts.len());
    for &t in &ts {
        gaps.push(f_k(npp, t, k)? - t - per);
    }
    // refined points only decide strict excess; near a touching point they
    // would fake a flat piece
    let (rts, rgaps) = scan_gaps(npp, k)?;
    if let Some((i, &g)) = rgaps.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) {
        if g > tol {
            return Ok(SolutionSet::NotFinite {
                witness: rts[i],
                max_gap: g,
            });
        }
    }
    let (max_idx, max_gap) = gaps
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, g)| if g > acc.1 { (i, g) } else { acc });
    if max_gap > tol {
        return Ok(SolutionSet::NotFinite {
            witness: ts[max_idx],
            max_gap,
        });
    }
    // touching on a whole piece: interior points of the piece touch too.
    // Pieces narrower than the dedup scale only repeat one solution.
    for i in 0..ts.len() {
        let j = (i + 1) % ts.len();
        let b = if j == 0 { ts[0] + per } else { ts[j] };
        if b - ts[i] <= SOLUTION_DEDUP * per {
            continue;
        }
        if gaps[i] >= -tol && gaps[j] >= -tol {
            for frac in [0.25, 0.5, 0.75] {
                let t = ts[i] + frac * (b - ts[i]);
                let g = f_k(npp, t, k)? - t - per;
                if g >= -tol {
                    return Ok(SolutionSet::NotFinite {
                        witness: t,
                        max_gap: max_gap.max(g),
                    });
                }
            }
        }
    }
    let mut out: Vec<NppSolution> = Vec::new();
    let mut lifted_sets: Vec<Vec<Vec<f64>>> = Vec::new();
    for (i, &t) in ts.iter().enumerate() {
        if gaps[i] < -tol {
            continue;
        }
        let w = walk_fk(npp, t, k)?;
        let vertices = w.vertices[..k].to_vec();
        let cols: Vec<Vec<f64>> = vertices.iter().map(|&p| lift_clipped(npp, p)).collect();
        let duplicate = lifted_sets.iter().any(|s| {
            s.iter().all(|a| cols.iter().any(|b| l2(a, b) <= SOLUTION_DEDUP))
                && cols.iter().all(|b| s.iter().any(|a| l2(a, b) <= SOLUTION_DEDUP))
        });
        if duplicate {
            continue;
        }
        let u = DenseMatrix::from_columns(&cols)?;
        lifted_sets.push(cols);
        out.push(NppSolution {
            t_values: w.t_values[..k].to_vec(),
            vertices,
            u,
        });
    }
    Ok(SolutionSet::Finite(out))
}

fn l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}
