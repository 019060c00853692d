//! Weighted rectilinear 1-median set, the intersection-point grid of the
//! fundamental lines, and their intersection.
//!
//! The median problem is coordinate-separable, so the solution set is the
//! cartesian product of two 1-D weighted-median intervals: a (possibly
//! degenerate) axis-aligned rectangle whose corners are demand coordinates.

use crate::geometry::Point;
use crate::model::Instance;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MedianError {
    #[error("weighted median of an empty value list")]
    EmptyInput,
}

/// The full minimizer set of the planar weighted rectilinear median problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianRectangle {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl MedianRectangle {
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        p.x >= self.x_lo - tol
            && p.x <= self.x_hi + tol
            && p.y >= self.y_lo - tol
            && p.y <= self.y_hi + tol
    }

    /// Lexicographically smallest corner; a grid point by construction.
    pub fn lower_corner(&self) -> Point {
        Point::new(self.x_lo, self.y_lo)
    }
}

/// The grid of intersection points of the fundamental lines (horizontal and
/// vertical lines through demand points), plus the sublist inside the median
/// rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionPoints {
    /// The deduplicated grid, sorted by (x, y).
    pub all: Vec<Point>,
    /// Grid points inside the median rectangle, in the same order.
    pub in_median: Vec<Point>,
}

/// The full minimizer interval `[lo, hi]` of `m ↦ Σ wᵢ·|m − vᵢ|`.
///
/// A point `m` minimizes iff the total weight strictly below it and the
/// total weight strictly above it are each at most half the total; the set
/// of such points is a closed interval with demand values as endpoints.
pub fn weighted_coordinate_median(
    values: &[f64],
    weights: &[f64],
) -> Result<(f64, f64), MedianError> {
    if values.is_empty() || values.len() != weights.len() {
        return Err(MedianError::EmptyInput);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let total: f64 = weights.iter().sum();
    let half = 0.5 * total;

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut below = 0.0;
    let mut i = 0;
    while i < order.len() {
        // Group equal values so `below`/`above` are strict sums.
        let v = values[order[i]];
        let mut at = 0.0;
        let mut j = i;
        while j < order.len() && values[order[j]] == v {
            at += weights[order[j]];
            j += 1;
        }
        let above = total - below - at;
        if below <= half && above <= half {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        below += at;
        i = j;
    }
    debug_assert!(lo <= hi, "median interval must be nonempty");
    Ok((lo, hi))
}

/// Cartesian product of the two coordinate-median intervals.
pub fn median_rectangle(instance: &Instance) -> MedianRectangle {
    let xs: Vec<f64> = instance.points().iter().map(|p| p.x).collect();
    let ys: Vec<f64> = instance.points().iter().map(|p| p.y).collect();
    let ws: Vec<f64> = instance.points().iter().map(|p| p.w).collect();
    let (x_lo, x_hi) = weighted_coordinate_median(&xs, &ws).expect("instance is non-empty");
    let (y_lo, y_hi) = weighted_coordinate_median(&ys, &ws).expect("instance is non-empty");
    MedianRectangle {
        x_lo,
        x_hi,
        y_lo,
        y_hi,
    }
}

/// The deduplicated M² grid of demand-coordinate crossings and its
/// intersection with the median rectangle (closed containment within `tol`).
pub fn intersection_points(instance: &Instance, tol: f64) -> IntersectionPoints {
    let rect = median_rectangle(instance);
    let mut xs: Vec<f64> = instance.points().iter().map(|p| p.x).collect();
    let mut ys: Vec<f64> = instance.points().iter().map(|p| p.y).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ys.sort_by(f64::total_cmp);
    ys.dedup();

    let mut all = Vec::with_capacity(xs.len() * ys.len());
    let mut in_median = Vec::new();
    for &x in &xs {
        for &y in &ys {
            let p = Point::new(x, y);
            all.push(p);
            if rect.contains(p, tol) {
                in_median.push(p);
            }
        }
    }
    debug_assert!(
        !in_median.is_empty(),
        "median rectangle corners are grid points"
    );
    IntersectionPoints { all, in_median }
}
