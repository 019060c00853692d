//! Instance and solution data model.
//!
//! An [`Instance`] is immutable after validation, so it can be shared
//! read-only across parallel workers.

use crate::geometry::{l2_dist, Orientation, Point, Reflection};
use thiserror::Error;

/// Global absolute tolerance on coordinates and objective deltas.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance for the tangent comparison in the angle stationarity check;
/// looser than [`DEFAULT_TOL`] because the tangent amplifies angle noise
/// near π/2.
pub const DEFAULT_ANGLE_TOL: f64 = 1e-7;

/// Shared solver configuration.
#[derive(Debug, Clone, Copy)]
pub struct Config {
    /// Absolute tolerance on coordinates and objective deltas.
    pub tol: f64,
    /// Tolerance for the tangent stationarity comparison.
    pub angle_tol: f64,
    /// Optimize candidate families on the rayon pool. The merge is
    /// deterministic either way.
    pub parallel: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: DEFAULT_TOL,
            angle_tol: DEFAULT_ANGLE_TOL,
            parallel: true,
        }
    }
}

/// A weighted demand point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandPoint {
    pub x: f64,
    pub y: f64,
    pub w: f64,
}

impl DemandPoint {
    pub const fn new(x: f64, y: f64, w: f64) -> Self {
        DemandPoint { x, y, w }
    }

    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Unvalidated instance data, as parsed from a file or built by hand.
#[derive(Debug, Clone, Default)]
pub struct RawInstance {
    pub points: Vec<DemandPoint>,
    pub length: f64,
    pub speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("points: instance has no demand points")]
    EmptyPoints,
    #[error("points[{index}].w: weight must be strictly positive and finite (got {value})")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("points[{index}]: coordinates must be finite (got ({x}, {y}))")]
    NonFiniteCoordinate { index: usize, x: f64, y: f64 },
    #[error("length: line length must be nonnegative and finite (got {value})")]
    BadLength { value: f64 },
    #[error("k: speedup must be >= 1 and finite (got {value})")]
    BadSpeedup { value: f64 },
}

/// A validated problem instance: demand points, line length ℓ and speedup k.
///
/// Duplicate demand points are retained as distinct entries; weights are
/// never merged.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    points: Vec<DemandPoint>,
    length: f64,
    speedup: f64,
}

impl Instance {
    pub fn points(&self) -> &[DemandPoint] {
        &self.points
    }

    /// Length ℓ of the rapid transit line.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Speed factor k; travel along the line costs ℓ/k.
    pub fn speedup(&self) -> f64 {
        self.speedup
    }

    /// Transit cost ℓ/k of traversing the whole line.
    pub fn line_cost(&self) -> f64 {
        self.length / self.speedup
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.w).sum()
    }

    /// The same instance with every demand point reflected; length, speedup
    /// and point order are preserved (reflections are L1 isometries).
    pub fn reflected(&self, map: &Reflection) -> Instance {
        if map.is_identity() {
            return self.clone();
        }
        Instance {
            points: self
                .points
                .iter()
                .map(|p| {
                    let q = map.apply(p.point());
                    DemandPoint::new(q.x, q.y, p.w)
                })
                .collect(),
            length: self.length,
            speedup: self.speedup,
        }
    }
}

/// Checks all field invariants and returns a well-formed [`Instance`].
///
/// The point list is kept in input order. Each rejected input maps to
/// exactly one error case; the first offending field (in declaration
/// order: points, length, speedup) wins.
pub fn validate_instance(raw: RawInstance) -> Result<Instance, ValidationError> {
    if raw.points.is_empty() {
        return Err(ValidationError::EmptyPoints);
    }
    for (index, p) in raw.points.iter().enumerate() {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(ValidationError::NonFiniteCoordinate {
                index,
                x: p.x,
                y: p.y,
            });
        }
        if !p.w.is_finite() || p.w <= 0.0 {
            return Err(ValidationError::NonPositiveWeight { index, value: p.w });
        }
    }
    if !raw.length.is_finite() || raw.length < 0.0 {
        return Err(ValidationError::BadLength { value: raw.length });
    }
    if !raw.speedup.is_finite() || raw.speedup < 1.0 {
        return Err(ValidationError::BadSpeedup { value: raw.speedup });
    }
    Ok(Instance {
        points: raw.points,
        length: raw.length,
        speedup: raw.speedup,
    })
}

/// A transit line placement: entrance `e` and facility/exit `x`.
///
/// Feasible segments have Euclidean length ℓ; for ℓ = 0 the endpoints
/// coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub entrance: Point,
    pub facility: Point,
}

impl Segment {
    pub const fn new(entrance: Point, facility: Point) -> Self {
        Segment { entrance, facility }
    }

    /// Degenerate segment with both endpoints at `p` (the ℓ = 0 case).
    pub const fn degenerate(p: Point) -> Self {
        Segment {
            entrance: p,
            facility: p,
        }
    }

    pub fn euclidean_length(&self) -> f64 {
        l2_dist(self.entrance, self.facility)
    }
}

/// Which finite-candidate condition the optimal segment was produced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// One endpoint sits on an intersection point inside the anchor disk.
    GridEndpoint,
    /// One facility coordinate and the opposite entrance coordinate are
    /// pinned to demand coordinates.
    CoordinatePinned,
    /// A tie or non-generic configuration; logged by classification.
    Degenerate,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::GridEndpoint => "grid-endpoint",
            Condition::CoordinatePinned => "coordinate-pinned",
            Condition::Degenerate => "degenerate",
        }
    }
}

/// An optimal placement together with the anchor and orientation it was
/// found under.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub segment: Segment,
    pub objective: f64,
    /// The intersection point of the median set the search was anchored at.
    pub anchor: Point,
    pub orientation: Orientation,
    pub condition: Condition,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(points: Vec<DemandPoint>, length: f64, speedup: f64) -> RawInstance {
        RawInstance {
            points,
            length,
            speedup,
        }
    }

    #[test]
    fn minimal_instance_is_valid() {
        let inst = validate_instance(raw(vec![DemandPoint::new(0.0, 0.0, 1.0)], 1.0, 2.0))
            .expect("valid instance");
        assert_eq!(inst.points().len(), 1);
        assert_eq!(inst.length(), 1.0);
        assert_eq!(inst.speedup(), 2.0);
        assert_eq!(inst.line_cost(), 0.5);
    }

    #[test]
    fn empty_points_rejected() {
        assert_eq!(
            validate_instance(raw(vec![], 1.0, 2.0)),
            Err(ValidationError::EmptyPoints)
        );
    }

    #[test]
    fn slow_line_rejected() {
        assert_eq!(
            validate_instance(raw(vec![DemandPoint::new(0.0, 0.0, 1.0)], 1.0, 0.5)),
            Err(ValidationError::BadSpeedup { value: 0.5 })
        );
    }

    #[test]
    fn bad_weights_rejected() {
        for w in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            let err = validate_instance(raw(vec![DemandPoint::new(0.0, 0.0, w)], 1.0, 2.0))
                .expect_err("must reject");
            assert!(matches!(
                err,
                ValidationError::NonPositiveWeight { index: 0, .. }
            ));
        }
    }

    #[test]
    fn bad_length_rejected() {
        for ell in [-1.0, f64::NAN, f64::INFINITY] {
            let err = validate_instance(raw(vec![DemandPoint::new(0.0, 0.0, 1.0)], ell, 2.0))
                .expect_err("must reject");
            assert!(matches!(err, ValidationError::BadLength { .. }));
        }
    }

    #[test]
    fn non_finite_coordinates_rejected() {
        let err = validate_instance(raw(vec![DemandPoint::new(f64::NAN, 0.0, 1.0)], 1.0, 2.0))
            .expect_err("must reject");
        assert!(matches!(
            err,
            ValidationError::NonFiniteCoordinate { index: 0, .. }
        ));
    }

    #[test]
    fn duplicates_kept_separate_in_order() {
        let pts = vec![
            DemandPoint::new(1.0, 1.0, 2.0),
            DemandPoint::new(1.0, 1.0, 3.0),
            DemandPoint::new(0.0, 0.0, 1.0),
        ];
        let inst = validate_instance(raw(pts.clone(), 0.0, 1.0)).expect("valid");
        assert_eq!(inst.points(), pts.as_slice());
        assert_eq!(inst.total_weight(), 6.0);
    }

    #[test]
    fn zero_length_segment_is_degenerate() {
        let s = Segment::degenerate(Point::new(3.0, 4.0));
        assert_eq!(s.euclidean_length(), 0.0);
        assert_eq!(s.entrance, s.facility);
    }
}
