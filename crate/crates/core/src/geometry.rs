//! Planar primitives: the rectilinear norm, quadrant classification relative
//! to an anchor point, quarter-circle arcs, the diagonal angles that split the
//! captation-region cases, and the reflections used to reduce the four
//! entrance/facility orientations to a single canonical one.

use std::fmt;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

/// Rectilinear (L1) distance between two points.
pub fn l1_dist(p: Point, q: Point) -> f64 {
    (p.x - q.x).abs() + (p.y - q.y).abs()
}

/// Euclidean (L2) distance between two points.
pub fn l2_dist(p: Point, q: Point) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// One of the four quadrants relative to an anchor point.
///
/// The classification is total: ties on the vertical boundary go right,
/// ties on the horizontal boundary go up, so the anchor itself is in `Q1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrant {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Quadrant {
    pub fn index(self) -> u8 {
        match self {
            Quadrant::Q1 => 1,
            Quadrant::Q2 => 2,
            Quadrant::Q3 => 3,
            Quadrant::Q4 => 4,
        }
    }
}

/// Classifies `p` relative to `anchor` under the half-open convention:
/// Q1 = {x ≥, y ≥}, Q2 = {x <, y ≥}, Q3 = {x <, y <}, Q4 = {x ≥, y <}.
pub fn quadrant_of(p: Point, anchor: Point) -> Quadrant {
    match (p.x >= anchor.x, p.y >= anchor.y) {
        (true, true) => Quadrant::Q1,
        (false, true) => Quadrant::Q2,
        (false, false) => Quadrant::Q3,
        (true, false) => Quadrant::Q4,
    }
}

/// A circular arc of radius `radius` around `center`, covering the angle
/// interval `[theta_lo, theta_hi]` (radians, within the first quadrant).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub center: Point,
    pub radius: f64,
    pub theta_lo: f64,
    pub theta_hi: f64,
}

impl Arc {
    pub fn point_at(&self, theta: f64) -> Point {
        arc_point(self.center, theta, self.radius)
    }

    pub fn is_empty(&self) -> bool {
        self.theta_lo > self.theta_hi
    }
}

/// The point at angle `theta` on the circle of radius `ell` around `center`.
pub fn arc_point(center: Point, theta: f64, ell: f64) -> Point {
    Point {
        x: center.x + ell * theta.cos(),
        y: center.y + ell * theta.sin(),
    }
}

/// Angles of the two diagonal points on the quarter arc where the
/// coordinate-offset difference of the entrance relative to the facility
/// equals `ell / k`: solves `sin θ − cos θ = ±1/k`.
///
/// Returns `(theta_tilde, theta_bar)` with `theta_bar ≤ π/4 ≤ theta_tilde`.
pub fn diagonal_angles(k: f64) -> (f64, f64) {
    debug_assert!(k >= 1.0);
    let delta = (1.0 / (k * std::f64::consts::SQRT_2)).asin();
    let quarter = std::f64::consts::FRAC_PI_4;
    (quarter + delta, quarter - delta)
}

/// The four admissible entrance/facility quadrant pairings relative to an
/// anchor. `EntranceQ1FacilityQ3` is the canonical one the captation
/// formulas are written for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    EntranceQ1FacilityQ3,
    EntranceQ2FacilityQ4,
    EntranceQ3FacilityQ1,
    EntranceQ4FacilityQ2,
}

impl Orientation {
    pub const ALL: [Orientation; 4] = [
        Orientation::EntranceQ1FacilityQ3,
        Orientation::EntranceQ2FacilityQ4,
        Orientation::EntranceQ3FacilityQ1,
        Orientation::EntranceQ4FacilityQ2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Orientation::EntranceQ1FacilityQ3 => "entrance-q1/facility-q3",
            Orientation::EntranceQ2FacilityQ4 => "entrance-q2/facility-q4",
            Orientation::EntranceQ3FacilityQ1 => "entrance-q3/facility-q1",
            Orientation::EntranceQ4FacilityQ2 => "entrance-q4/facility-q2",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// An axis-aligned reflection about an anchor point. Applying it twice is the
/// identity, so the map doubles as its own inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection {
    pub center: Point,
    pub flip_x: bool,
    pub flip_y: bool,
}

impl Reflection {
    /// The reflection that carries `orientation` onto the canonical
    /// entrance-Q1/facility-Q3 pairing while keeping `anchor` fixed.
    pub fn for_orientation(anchor: Point, orientation: Orientation) -> Self {
        let (flip_x, flip_y) = match orientation {
            Orientation::EntranceQ1FacilityQ3 => (false, false),
            Orientation::EntranceQ2FacilityQ4 => (true, false),
            Orientation::EntranceQ3FacilityQ1 => (true, true),
            Orientation::EntranceQ4FacilityQ2 => (false, true),
        };
        Reflection {
            center: anchor,
            flip_x,
            flip_y,
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.flip_x && !self.flip_y
    }

    pub fn apply(&self, p: Point) -> Point {
        Point {
            x: if self.flip_x {
                2.0 * self.center.x - p.x
            } else {
                p.x
            },
            y: if self.flip_y {
                2.0 * self.center.y - p.y
            } else {
                p.y
            },
        }
    }
}
