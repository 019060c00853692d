//! Brute-force reference optimizer with an explicit resolution bound.
//!
//! Facility positions sweep a square lattice over the demand bounding box
//! expanded by ℓ on each side, crossed with uniformly spaced entrance angles
//! over the full circle. The search deliberately ignores the
//! opposite-quadrant restriction so that it independently tests it.

use crate::geometry::Point;
use crate::model::{Instance, Segment};
use crate::objective::evaluate;
use rayon::prelude::*;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("resolution too coarse: need grid_n >= 2 and angle_n >= 4 (got {grid_n}, {angle_n})")]
    BadResolution { grid_n: usize, angle_n: usize },
}

/// Best lattice configuration and the bound on how far below it the true
/// optimum can sit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub best_segment: Segment,
    pub best_objective: f64,
    pub grid_step: f64,
    pub angle_step: f64,
    /// `W_total · (2·grid_step + ℓ·angle_step)`: the L1 travel distance is
    /// 1-Lipschitz per endpoint coordinate, and an angle step moves the
    /// entrance by at most ℓ·angle_step per coordinate.
    pub error_bound: f64,
}

/// Evaluates the full facility-lattice × entrance-angle grid.
///
/// The true optimum lies in `[best_objective − error_bound, best_objective]`.
pub fn brute_force(
    instance: &Instance,
    grid_n: usize,
    angle_n: usize,
) -> Result<OracleResult, OracleError> {
    if grid_n < 2 || angle_n < 4 {
        return Err(OracleError::BadResolution { grid_n, angle_n });
    }
    let ell = instance.length();
    let points = instance.points();

    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        x_lo = x_lo.min(p.x);
        x_hi = x_hi.max(p.x);
        y_lo = y_lo.min(p.y);
        y_hi = y_hi.max(p.y);
    }
    x_lo -= ell;
    x_hi += ell;
    y_lo -= ell;
    y_hi += ell;

    let n = grid_n as f64;
    let step_x = (x_hi - x_lo) / (n - 1.0);
    let step_y = (y_hi - y_lo) / (n - 1.0);
    let grid_step = step_x.max(step_y);
    let angle_step = TAU / angle_n as f64;

    let offsets: Vec<(f64, f64)> = (0..angle_n)
        .map(|j| {
            let alpha = angle_step * j as f64;
            (ell * alpha.cos(), ell * alpha.sin())
        })
        .collect();

    // One best per lattice column, merged deterministically afterwards.
    let column_best = |ix: usize| -> (f64, Segment) {
        let fx = x_lo + step_x * ix as f64;
        let mut best = (f64::INFINITY, Segment::degenerate(Point::new(fx, y_lo)));
        for iy in 0..grid_n {
            let facility = Point::new(fx, y_lo + step_y * iy as f64);
            for &(dx, dy) in &offsets {
                let segment = Segment::new(Point::new(facility.x + dx, facility.y + dy), facility);
                let value = evaluate(instance, &segment);
                if value < best.0 {
                    best = (value, segment);
                }
            }
        }
        best
    };

    let columns: Vec<(f64, Segment)> = (0..grid_n).into_par_iter().map(column_best).collect();
    let (best_objective, best_segment) = columns
        .into_iter()
        .min_by(|(va, sa), (vb, sb)| {
            va.total_cmp(vb)
                .then_with(|| sa.facility.x.total_cmp(&sb.facility.x))
                .then_with(|| sa.facility.y.total_cmp(&sb.facility.y))
                .then_with(|| sa.entrance.x.total_cmp(&sb.entrance.x))
                .then_with(|| sa.entrance.y.total_cmp(&sb.entrance.y))
        })
        .expect("grid_n >= 2");

    Ok(OracleResult {
        best_segment,
        best_objective,
        grid_step,
        angle_step,
        error_bound: instance.total_weight() * (2.0 * grid_step + ell * angle_step),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::median::median_rectangle;
    use crate::model::{validate_instance, DemandPoint, RawInstance};

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
    fn rejects_coarse_resolution() {
        let inst = instance(&[(0.0, 0.0, 1.0)], 1.0, 2.0);
        assert_eq!(
            brute_force(&inst, 1, 512),
            Err(OracleError::BadResolution {
                grid_n: 1,
                angle_n: 512
            })
        );
        assert_eq!(
            brute_force(&inst, 9, 3),
            Err(OracleError::BadResolution {
                grid_n: 9,
                angle_n: 3
            })
        );
    }

    #[test]
    fn single_point_with_lattice_hit_is_free() {
        // Odd grid over a symmetric box puts a lattice point exactly on the
        // demand point.
        let inst = instance(&[(3.0, 4.0, 1.0)], 1.0, 2.0);
        let result = brute_force(&inst, 9, 8).unwrap();
        assert_eq!(result.best_objective, 0.0);
        assert_eq!(result.best_segment.facility, Point::new(3.0, 4.0));
    }

    #[test]
    fn zero_length_matches_median_within_bound() {
        let inst = instance(
            &[(0.0, 6.0, 1.0), (4.0, 4.0, 2.0), (-10.0, -10.0, 1.0)],
            0.0,
            1.0,
        );
        let result = brute_force(&inst, 65, 4).unwrap();
        let median_obj = evaluate(
            &inst,
            &Segment::degenerate(median_rectangle(&inst).lower_corner()),
        );
        assert!(result.best_objective >= median_obj - 1e-9);
        assert!(result.best_objective <= median_obj + result.error_bound);
    }

    #[test]
    fn worked_instance_is_at_most_thirty() {
        let inst = instance(
            &[(0.0, 6.0, 1.0), (4.0, 4.0, 2.0), (-10.0, -10.0, 1.0)],
            5.0,
            5.0,
        );
        let result = brute_force(&inst, 129, 512).unwrap();
        // x = (0,0), e = (3,4) achieves exactly 30.
        assert!(result.best_objective <= 30.0 + 1e-9);
    }

    #[test]
    fn nested_refinement_never_gets_worse() {
        let inst = instance(
            &[(0.0, 6.0, 1.0), (4.0, 4.0, 2.0), (-10.0, -10.0, 1.0)],
            2.0,
            3.0,
        );
        let coarse = brute_force(&inst, 33, 64).unwrap();
        // 2n−1 grid points and 2n angles contain the coarse lattice.
        let fine = brute_force(&inst, 65, 128).unwrap();
        assert!(fine.best_objective <= coarse.best_objective + 1e-12);
        assert!(fine.error_bound < coarse.error_bound);
    }
}
