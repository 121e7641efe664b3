//! Exact nested-polygon engine for rank-3 matrices.
//!
//! The normalized columns of a rank-3 matrix live in a plane. Inside it,
//! the hull of the columns (the inner polygon) sits inside the slice of the
//! probability simplex (the outer polygon); an exact NMF with `k` factors is
//! a `k`-gon squeezed between the two.

pub mod geom;
mod instance;
mod membership;
mod polygon;
mod walk;

pub use geom::Point;
pub use instance::{build_npp, Chart, NppInstance, GEOM_TOL};
pub use membership::{hull_distance, hull_membership};
pub use polygon::Polygon2;
pub use walk::{
    contact_change_points, contact_classes, enumerate_solutions, f_k, feasible_k, sample_fk,
    tangent_step, tangent_step_back, walk_fk, ContactCase, Feasibility, NppSolution, SolutionSet,
    Step, TangentWalk, SAFETY_GRID,
};
