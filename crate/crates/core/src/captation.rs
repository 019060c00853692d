//! Captation region membership.
//!
//! A demand point is captured by the segment when reaching the facility via
//! the entrance and the line is no longer (in rectilinear distance plus the
//! line cost ℓ/k) than traveling directly: `‖x−a‖₁ ≥ ‖e−a‖₁ + ℓ/k`.
//!
//! Two routes are implemented: the defining inequality
//! ([`member_definitional`], authoritative) and the closed-form three-case
//! description ([`member_closed_form`], used for candidate generation and
//! property-tested against the definition).

use crate::geometry::{diagonal_angles, l1_dist, Point};
use crate::model::{Instance, Segment};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum CaptationError {
    #[error("entrance {entrance} is not up-right of facility {facility} within tolerance")]
    NotCanonical { entrance: Point, facility: Point },
}

/// Membership of a demand point relative to the captation region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    /// Strictly inside: transit is strictly shorter.
    Interior,
    /// On the boundary: both routes cost the same (within tolerance).
    Boundary,
    /// Outside: direct travel is strictly shorter.
    Outside,
}

impl Membership {
    pub fn is_captured(self) -> bool {
        !matches!(self, Membership::Outside)
    }
}

/// Signed capture margin `g = ‖x−a‖₁ − ‖e−a‖₁ − ℓ/k`.
///
/// Nonnegative means the point is captured; `g` is nondecreasing in `k`.
pub fn capture_margin(a: Point, entrance: Point, facility: Point, ell: f64, k: f64) -> f64 {
    l1_dist(facility, a) - l1_dist(entrance, a) - ell / k
}

/// Classifies `a` by the defining inequality with a `tol`-wide boundary band.
pub fn member_definitional(
    a: Point,
    entrance: Point,
    facility: Point,
    ell: f64,
    k: f64,
    tol: f64,
) -> Membership {
    let g = capture_margin(a, entrance, facility, ell, k);
    if g.abs() <= tol {
        Membership::Boundary
    } else if g > 0.0 {
        Membership::Interior
    } else {
        Membership::Outside
    }
}

/// Which of the three closed-form descriptions applies, split by the
/// diagonal points ẽ and ē of the arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionCase {
    /// `x₁ ≤ e₁ ≤ ẽ₁`: the entrance sits on the steep part of the arc.
    DiagonalLow,
    /// `ẽ₁ < e₁ < ē₁`: between the two diagonal points.
    Middle,
    /// `ē₁ ≤ e₁ ≤ x₁ + ℓ`: the shallow part of the arc.
    DiagonalHigh,
}

/// The half-plane parameters of the closed-form captation region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionParams {
    pub h_minus: f64,
    pub h_plus: f64,
    pub v_minus: f64,
    pub v_plus: f64,
    pub c: f64,
    pub case: RegionCase,
}

/// Computes the five half-plane parameters and selects the case by comparing
/// `e₁` against the diagonal abscissas `ẽ₁` and `ē₁`.
///
/// Requires the canonical orientation: `e` weakly up-right of `x`.
pub fn region_params(
    entrance: Point,
    facility: Point,
    ell: f64,
    k: f64,
    tol: f64,
) -> Result<RegionParams, CaptationError> {
    if entrance.x < facility.x - tol || entrance.y < facility.y - tol {
        return Err(CaptationError::NotCanonical { entrance, facility });
    }
    let (e1, e2) = (entrance.x, entrance.y);
    let (x1, x2) = (facility.x, facility.y);
    let lk = ell / k;

    let h_minus = 0.5 * (e1 + e2 + lk) + 0.5 * (x2 - x1);
    let h_plus = 0.5 * (-e1 + e2 + lk) + 0.5 * (x1 + x2);
    let v_minus = 0.5 * (e1 + e2 + lk) + 0.5 * (x1 - x2);
    let v_plus = 0.5 * (e1 - e2 + lk) + 0.5 * (x1 + x2);
    let c = 0.5 * (e1 + e2 + lk) + 0.5 * (x1 + x2);

    let (theta_tilde, theta_bar) = diagonal_angles(k);
    let e1_tilde = x1 + ell * theta_tilde.cos();
    let e1_bar = x1 + ell * theta_bar.cos();
    let case = if e1 <= e1_tilde {
        RegionCase::DiagonalLow
    } else if e1 >= e1_bar {
        RegionCase::DiagonalHigh
    } else {
        RegionCase::Middle
    };

    Ok(RegionParams {
        h_minus,
        h_plus,
        v_minus,
        v_plus,
        c,
        case,
    })
}

/// Closed-form membership test: `true` iff `a` lies in the captation region
/// according to the case-appropriate half-plane description.
pub fn member_closed_form(
    a: Point,
    entrance: Point,
    facility: Point,
    ell: f64,
    k: f64,
    tol: f64,
) -> Result<bool, CaptationError> {
    let p = region_params(entrance, facility, ell, k, tol)?;
    let (a1, a2) = (a.x, a.y);
    let (x1, x2) = (facility.x, facility.y);
    let inside = match p.case {
        RegionCase::DiagonalLow => {
            (a1 >= x1 && a2 >= p.h_plus && a1 + a2 >= p.c) || (a1 < x1 && a2 >= p.h_minus)
        }
        RegionCase::Middle => a1 >= p.v_plus && a2 >= p.h_plus && a1 + a2 >= p.c,
        RegionCase::DiagonalHigh => {
            (a2 >= x2 && a1 >= p.v_plus && a1 + a2 >= p.c) || (a2 < x2 && a1 >= p.v_minus)
        }
    };
    Ok(inside)
}

/// Index partition of the demand points by captation membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaptationPartition {
    pub interior: Vec<usize>,
    pub boundary: Vec<usize>,
    pub outside: Vec<usize>,
}

impl CaptationPartition {
    /// Indices of captured points (interior plus boundary), sorted.
    pub fn captured(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .interior
            .iter()
            .chain(self.boundary.iter())
            .copied()
            .collect();
        out.sort_unstable();
        out
    }
}

/// Applies [`member_definitional`] to every demand point.
pub fn captation_partition(instance: &Instance, segment: &Segment, tol: f64) -> CaptationPartition {
    let ell = instance.length();
    let k = instance.speedup();
    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    let mut outside = Vec::new();
    for (i, p) in instance.points().iter().enumerate() {
        match member_definitional(p.point(), segment.entrance, segment.facility, ell, k, tol) {
            Membership::Interior => interior.push(i),
            Membership::Boundary => boundary.push(i),
            Membership::Outside => outside.push(i),
        }
    }
    CaptationPartition {
        interior,
        boundary,
        outside,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_instance, DemandPoint, RawInstance, DEFAULT_TOL};

    const TOL: f64 = DEFAULT_TOL;

    // Worked segment: x = (0,0), e = (3,4), ℓ = 5, k = 5, so ℓ/k = 1 and
    // e coincides with the diagonal point ẽ.
    const E: Point = Point::new(3.0, 4.0);
    const X: Point = Point::new(0.0, 0.0);

    #[test]
    fn definitional_examples() {
        assert_eq!(
            member_definitional(Point::new(0.0, 6.0), E, X, 5.0, 5.0, TOL),
            Membership::Boundary
        );
        assert_eq!(
            member_definitional(Point::new(4.0, 4.0), E, X, 5.0, 5.0, TOL),
            Membership::Interior
        );
        assert_eq!(
            member_definitional(Point::new(-10.0, -10.0), E, X, 5.0, 5.0, TOL),
            Membership::Outside
        );
    }

    #[test]
    fn params_at_diagonal_low() {
        let p = region_params(E, X, 5.0, 5.0, TOL).unwrap();
        assert_eq!(p.h_minus, 4.0);
        assert_eq!(p.h_plus, 1.0);
        assert_eq!(p.v_minus, 4.0);
        assert_eq!(p.v_plus, 0.0);
        assert_eq!(p.c, 4.0);
        assert_eq!(p.case, RegionCase::DiagonalLow);
    }

    #[test]
    fn params_at_diagonal_high() {
        // e = ē = (4,3) sits on the other diagonal.
        let p = region_params(Point::new(4.0, 3.0), X, 5.0, 5.0, TOL).unwrap();
        assert_eq!(p.case, RegionCase::DiagonalHigh);
        assert_eq!(p.h_minus, 4.0);
        assert_eq!(p.v_minus, 4.0);
    }

    #[test]
    fn params_middle_case() {
        let r = 5.0 / std::f64::consts::SQRT_2;
        let p = region_params(Point::new(r, r), X, 5.0, 5.0, TOL).unwrap();
        assert_eq!(p.case, RegionCase::Middle);
    }

    #[test]
    fn params_reject_non_canonical() {
        let err = region_params(Point::new(-3.0, 4.0), X, 5.0, 5.0, TOL).unwrap_err();
        assert!(matches!(err, CaptationError::NotCanonical { .. }));
    }

    #[test]
    fn closed_form_examples() {
        assert!(member_closed_form(Point::new(4.0, 4.0), E, X, 5.0, 5.0, TOL).unwrap());
        assert!(member_closed_form(Point::new(0.0, 6.0), E, X, 5.0, 5.0, TOL).unwrap());
        assert!(!member_closed_form(Point::new(-10.0, -10.0), E, X, 5.0, 5.0, TOL).unwrap());
    }

    fn instance(points: &[(f64, f64, f64)], length: f64, speedup: f64) -> Instance {
        validate_instance(RawInstance {
            points: points
                .iter()
                .map(|&(x, y, w)| DemandPoint::new(x, y, w))
                .collect(),
            length,
            speedup,
        })
        .expect("valid instance")
    }

    #[test]
    fn partition_three_points() {
        let inst = instance(
            &[(0.0, 6.0, 1.0), (4.0, 4.0, 2.0), (-10.0, -10.0, 1.0)],
            5.0,
            5.0,
        );
        let part = captation_partition(&inst, &Segment::new(E, X), TOL);
        assert_eq!(part.interior, vec![1]);
        assert_eq!(part.boundary, vec![0]);
        assert_eq!(part.outside, vec![2]);
        assert_eq!(part.captured(), vec![0, 1]);
    }

    #[test]
    fn zero_length_puts_everything_on_the_boundary() {
        let inst = instance(
            &[(0.0, 6.0, 1.0), (4.0, 4.0, 2.0), (-10.0, -10.0, 1.0)],
            0.0,
            1.0,
        );
        let seg = Segment::degenerate(Point::new(1.0, 2.0));
        let part = captation_partition(&inst, &seg, TOL);
        assert_eq!(part.boundary, vec![0, 1, 2]);
        assert!(part.interior.is_empty());
        assert!(part.outside.is_empty());
    }

    #[test]
    fn slow_far_line_captures_nothing() {
        // k = 1 gives the line no speed advantage; far axis-aligned points
        // never benefit from detouring through the entrance.
        let inst = instance(&[(-5.0, 0.0, 1.0), (-3.0, 1.0, 1.0)], 2.0, 1.0);
        let seg = Segment::new(Point::new(2.0, 0.0), Point::new(0.0, 0.0));
        let part = captation_partition(&inst, &seg, TOL);
        assert!(part.interior.is_empty());
        assert!(part.boundary.is_empty());
        assert_eq!(part.outside, vec![0, 1]);
    }
}
