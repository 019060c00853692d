//! Exact solver for the simultaneous location of a service facility and a
//! fixed-length rapid transit line in the plane under rectilinear travel
//! distances.
//!
//! A demand point either travels directly to the facility `x` or walks to
//! the line entrance `e` and rides the line at cost ℓ/k; the objective is
//! the weighted sum of the cheaper option over all demand points, minimized
//! over all segments of Euclidean length ℓ. The solver enumerates the finite
//! candidate families of the optimal endpoints (grid-pinned endpoints inside
//! the median anchor disk, and coordinate-pinned pairs), reduces each family
//! to a one-dimensional piecewise-sinusoidal minimization over the segment
//! angle, and certifies results against a brute-force lattice oracle.

pub mod captation;
pub mod geometry;
pub mod median;
pub mod model;
pub mod objective;
pub mod oracle;
pub mod solver;

pub use captation::{
    captation_partition, member_closed_form, member_definitional, CaptationPartition, Membership,
    RegionCase, RegionParams,
};
pub use geometry::{
    arc_point, diagonal_angles, l1_dist, l2_dist, quadrant_of, Arc, Orientation, Point, Quadrant,
    Reflection,
};
pub use median::{
    intersection_points, median_rectangle, weighted_coordinate_median, IntersectionPoints,
    MedianRectangle,
};
pub use model::{
    validate_instance, Condition, Config, DemandPoint, Instance, RawInstance, Segment, Solution,
    ValidationError, DEFAULT_ANGLE_TOL, DEFAULT_TOL,
};
pub use objective::{
    angle_condition_ii, evaluate, predict_delta_horizontal, predict_delta_mixed, travel_distance,
    weight_aggregates, AngleCondition, HorizontalDelta, MixedDelta, Regime, SplitAxis,
    WeightAggregates,
};
pub use oracle::{brute_force, OracleResult};
pub use solver::{
    breakpoints, classify_solution, minimize_piece, optimize_family, solve, solve_with,
    CandidateFamily, ClassificationReport, FamilyKind, PiecewiseSinusoid,
};
