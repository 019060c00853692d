//! Exact solver.
//!
//! For ℓ = 0 the problem is the weighted rectilinear median. Otherwise the
//! optimal segment endpoints lie in opposite quadrants relative to some
//! intersection point of the median set, and at least one optimum belongs to
//! a finite family: an endpoint pinned to a grid point inside the anchor
//! disk, or one facility coordinate and the opposite entrance coordinate
//! pinned to demand coordinates. Every family is a one-parameter arc in the
//! segment angle θ, along which the objective is piecewise of the form
//! `A + B·cos θ + C·sin θ`; pieces are delimited by membership flips,
//! coordinate crossings, and the diagonal angles, and each piece is
//! minimized in closed form with every candidate re-scored by the raw
//! objective.

use crate::captation::{captation_partition, member_definitional};
use crate::geometry::{arc_point, l2_dist, Orientation, Point, Reflection};
use crate::median::{intersection_points, median_rectangle};
use crate::model::{Condition, Config, Instance, Segment, Solution};
use crate::objective::{
    angle_condition_ii, evaluate, horizontal_safe_radius, mixed_safe_angle,
    predict_delta_horizontal, predict_delta_mixed, shift_magnitudes, AngleCondition,
};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_4;
use thiserror::Error;

/// Breakpoint dedup tolerance on angles.
const THETA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("candidate family has an empty angle domain")]
    EmptyDomain,
}

/// How a one-parameter candidate family pins the segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    /// Facility fixed at a grid point, entrance on the arc above-right.
    FacilityAtGrid { facility: Point },
    /// Entrance fixed at a grid point, facility on the arc below-left.
    EntranceAtGrid { entrance: Point },
    /// `x₁` and `e₂` pinned to demand coordinates, angle free.
    PinnedFacilityX { facility_x: f64, entrance_y: f64 },
    /// `x₂` and `e₁` pinned to demand coordinates, angle free.
    PinnedFacilityY { facility_y: f64, entrance_x: f64 },
}

impl FamilyKind {
    fn condition(&self) -> Condition {
        match self {
            FamilyKind::FacilityAtGrid { .. } | FamilyKind::EntranceAtGrid { .. } => {
                Condition::GridEndpoint
            }
            FamilyKind::PinnedFacilityX { .. } | FamilyKind::PinnedFacilityY { .. } => {
                Condition::CoordinatePinned
            }
        }
    }
}

/// A candidate family restricted to a feasible angle interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateFamily {
    pub kind: FamilyKind,
    pub theta_lo: f64,
    pub theta_hi: f64,
}

/// One tracked endpoint coordinate along a family: `base + coeff·trig(θ)`,
/// where abscissas ride on cos θ and ordinates on sin θ.
#[derive(Debug, Clone, Copy)]
struct CoordTrack {
    base: f64,
    coeff: f64,
}

impl CoordTrack {
    fn at_cos(&self, theta: f64) -> f64 {
        self.base + self.coeff * theta.cos()
    }

    fn at_sin(&self, theta: f64) -> f64 {
        self.base + self.coeff * theta.sin()
    }
}

/// The four tracked coordinates (e₁, e₂, x₁, x₂) of a family.
#[derive(Debug, Clone, Copy)]
struct SegmentTrack {
    e1: CoordTrack,
    e2: CoordTrack,
    x1: CoordTrack,
    x2: CoordTrack,
}

impl CandidateFamily {
    fn track(&self, ell: f64) -> SegmentTrack {
        let fixed = |base: f64| CoordTrack { base, coeff: 0.0 };
        match self.kind {
            FamilyKind::FacilityAtGrid { facility: p } => SegmentTrack {
                e1: CoordTrack {
                    base: p.x,
                    coeff: ell,
                },
                e2: CoordTrack {
                    base: p.y,
                    coeff: ell,
                },
                x1: fixed(p.x),
                x2: fixed(p.y),
            },
            FamilyKind::EntranceAtGrid { entrance: p } => SegmentTrack {
                e1: fixed(p.x),
                e2: fixed(p.y),
                x1: CoordTrack {
                    base: p.x,
                    coeff: -ell,
                },
                x2: CoordTrack {
                    base: p.y,
                    coeff: -ell,
                },
            },
            FamilyKind::PinnedFacilityX {
                facility_x,
                entrance_y,
            } => SegmentTrack {
                e1: CoordTrack {
                    base: facility_x,
                    coeff: ell,
                },
                e2: fixed(entrance_y),
                x1: fixed(facility_x),
                x2: CoordTrack {
                    base: entrance_y,
                    coeff: -ell,
                },
            },
            FamilyKind::PinnedFacilityY {
                facility_y,
                entrance_x,
            } => SegmentTrack {
                e1: fixed(entrance_x),
                e2: CoordTrack {
                    base: facility_y,
                    coeff: ell,
                },
                x1: CoordTrack {
                    base: entrance_x,
                    coeff: -ell,
                },
                x2: fixed(facility_y),
            },
        }
    }

    /// The segment selected by angle `theta`; always of Euclidean length
    /// `ell` with the entrance up-right of the facility.
    pub fn segment_at(&self, theta: f64, ell: f64) -> Segment {
        let t = self.track(ell);
        Segment::new(
            Point::new(t.e1.at_cos(theta), t.e2.at_sin(theta)),
            Point::new(t.x1.at_cos(theta), t.x2.at_sin(theta)),
        )
    }
}

/// One sinusoidal piece of the objective along a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinusoidPiece {
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SinusoidPiece {
    pub fn value(&self, theta: f64) -> f64 {
        self.a + self.b * theta.cos() + self.c * theta.sin()
    }
}

/// The objective along a family as contiguous sinusoidal pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSinusoid {
    pub pieces: Vec<SinusoidPiece>,
}

fn push_if_inside(events: &mut Vec<f64>, theta: f64, lo: f64, hi: f64) {
    if theta > lo + THETA_TOL && theta < hi - THETA_TOL {
        events.push(theta);
    }
}

/// Angles inside `[lo, hi]` where `coord(θ)` crosses `value`; the trig
/// function is monotone on the quarter arc so there is at most one.
fn crossing_angles(track: CoordTrack, value: f64, is_cos: bool) -> Option<f64> {
    if track.coeff == 0.0 {
        return None;
    }
    let ratio = (value - track.base) / track.coeff;
    if !(0.0..=1.0).contains(&ratio) {
        return None;
    }
    Some(if is_cos { ratio.acos() } else { ratio.asin() })
}

/// Roots of `a + b·cos θ + c·sin θ = 0` inside `[lo, hi]`.
fn sinusoid_roots(a: f64, b: f64, c: f64, lo: f64, hi: f64, out: &mut Vec<f64>) {
    let r = b.hypot(c);
    if r <= 0.0 {
        return;
    }
    let ratio = -a / r;
    if !(-1.0..=1.0).contains(&ratio) {
        return;
    }
    let phi = c.atan2(b);
    let delta = ratio.acos();
    for base in [phi - delta, phi + delta] {
        for shift in [-std::f64::consts::TAU, 0.0, std::f64::consts::TAU] {
            let theta = base + shift;
            if theta >= lo - THETA_TOL && theta <= hi + THETA_TOL {
                out.push(theta.clamp(lo, hi));
            }
        }
    }
}

/// All angles where the algebraic form of the objective along `family`
/// changes: domain endpoints, the diagonal angles and π/4, coordinate
/// crossings of the moving endpoint coordinates against demand coordinates,
/// and captation membership flips. Sorted and deduplicated within 1e−12.
pub fn breakpoints(instance: &Instance, family: &CandidateFamily) -> Vec<f64> {
    let ell = instance.length();
    let k = instance.speedup();
    let (lo, hi) = (family.theta_lo, family.theta_hi);
    let track = family.track(ell);

    let mut events = vec![lo, hi];
    let (theta_tilde, theta_bar) = crate::geometry::diagonal_angles(k);
    push_if_inside(&mut events, theta_bar, lo, hi);
    push_if_inside(&mut events, FRAC_PI_4, lo, hi);
    push_if_inside(&mut events, theta_tilde, lo, hi);

    for p in instance.points() {
        for (coord, value, is_cos) in [
            (track.e1, p.x, true),
            (track.x1, p.x, true),
            (track.e2, p.y, false),
            (track.x2, p.y, false),
        ] {
            if let Some(theta) = crossing_angles(coord, value, is_cos) {
                push_if_inside(&mut events, theta, lo, hi);
            }
        }
    }

    // Membership flips: within each sub-interval free of this point's own
    // coordinate crossings, the capture margin is a single sinusoid.
    let mut roots = Vec::new();
    for p in instance.points() {
        let mut own = vec![lo, hi];
        for (coord, value, is_cos) in [
            (track.e1, p.x, true),
            (track.x1, p.x, true),
            (track.e2, p.y, false),
            (track.x2, p.y, false),
        ] {
            if let Some(theta) = crossing_angles(coord, value, is_cos) {
                push_if_inside(&mut own, theta, lo, hi);
            }
        }
        own.sort_by(f64::total_cmp);
        for w in own.windows(2) {
            let (s, t) = (w[0], w[1]);
            if t - s <= THETA_TOL {
                continue;
            }
            let m = 0.5 * (s + t);
            let sx1 = sign_of(track.x1.at_cos(m) - p.x);
            let sx2 = sign_of(track.x2.at_sin(m) - p.y);
            let se1 = sign_of(track.e1.at_cos(m) - p.x);
            let se2 = sign_of(track.e2.at_sin(m) - p.y);
            let a = sx1 * (track.x1.base - p.x) + sx2 * (track.x2.base - p.y)
                - se1 * (track.e1.base - p.x)
                - se2 * (track.e2.base - p.y)
                - ell / k;
            let b = sx1 * track.x1.coeff - se1 * track.e1.coeff;
            let c = sx2 * track.x2.coeff - se2 * track.e2.coeff;
            sinusoid_roots(a, b, c, s, t, &mut roots);
        }
    }
    for theta in roots {
        push_if_inside(&mut events, theta, lo, hi);
    }

    events.sort_by(f64::total_cmp);
    events.dedup_by(|a, b| (*a - *b).abs() <= THETA_TOL);
    events
}

fn sign_of(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Fits the exact `(A, B, C)` coefficients of every breakpoint piece by
/// accumulating each demand point's contribution under its fixed sign
/// pattern and captation status at the piece midpoint.
pub fn family_pieces(instance: &Instance, family: &CandidateFamily, tol: f64) -> PiecewiseSinusoid {
    let ell = instance.length();
    let k = instance.speedup();
    let track = family.track(ell);
    let events = breakpoints(instance, family);
    let mut pieces = Vec::new();
    for w in events.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let m = 0.5 * (lo + hi);
        let seg = family.segment_at(m, ell);
        let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
        for p in instance.points() {
            let captured = member_definitional(p.point(), seg.entrance, seg.facility, ell, k, tol)
                .is_captured();
            let (c1, c2) = if captured {
                (track.e1, track.e2)
            } else {
                (track.x1, track.x2)
            };
            let s1 = sign_of(c1.at_cos(m) - p.x);
            let s2 = sign_of(c2.at_sin(m) - p.y);
            a += p.w * (s1 * (c1.base - p.x) + s2 * (c2.base - p.y));
            if captured {
                a += p.w * ell / k;
            }
            b += p.w * s1 * c1.coeff;
            c += p.w * s2 * c2.coeff;
        }
        pieces.push(SinusoidPiece {
            theta_lo: lo,
            theta_hi: hi,
            a,
            b,
            c,
        });
    }
    PiecewiseSinusoid { pieces }
}

/// Minimizes `A + B·cos θ + C·sin θ` on `[theta_lo, theta_hi]`.
///
/// Candidates are the endpoints plus the interior stationary minimum, each
/// re-scored with `raw_value` (never the fitted coefficients); ties break
/// toward the smaller angle.
pub fn minimize_piece(
    a: f64,
    b: f64,
    c: f64,
    theta_lo: f64,
    theta_hi: f64,
    raw_value: impl Fn(f64) -> f64,
) -> (f64, f64) {
    debug_assert!(theta_lo <= theta_hi);
    let _ = a;
    let mut candidates = vec![theta_lo, theta_hi];
    let r = b.hypot(c);
    if r > 0.0 {
        // A + R·cos(θ − φ) attains its minimum at θ = φ + π.
        let phi = c.atan2(b);
        for shift in [-std::f64::consts::TAU, 0.0, std::f64::consts::TAU] {
            let theta = phi + std::f64::consts::PI + shift;
            if theta > theta_lo && theta < theta_hi {
                candidates.push(theta);
            }
        }
    }
    candidates.sort_by(f64::total_cmp);
    let mut best_theta = candidates[0];
    let mut best_value = raw_value(best_theta);
    for &theta in &candidates[1..] {
        let value = raw_value(theta);
        if value < best_value {
            best_value = value;
            best_theta = theta;
        }
    }
    (best_theta, best_value)
}

/// Family minimum: angle, segment and raw objective value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyBest {
    pub theta: f64,
    pub segment: Segment,
    pub objective: f64,
}

/// Minimizes the objective over one candidate family by piecewise
/// closed-form minimization with raw re-scoring.
pub fn optimize_family(
    instance: &Instance,
    family: &CandidateFamily,
    tol: f64,
) -> Result<FamilyBest, FamilyError> {
    if family.theta_lo > family.theta_hi {
        return Err(FamilyError::EmptyDomain);
    }
    let ell = instance.length();
    let raw = |theta: f64| evaluate(instance, &family.segment_at(theta, ell));
    let sinusoid = family_pieces(instance, family, tol);
    let mut best_theta = family.theta_lo;
    let mut best_value = raw(best_theta);
    for piece in &sinusoid.pieces {
        let (theta, value) = minimize_piece(
            piece.a,
            piece.b,
            piece.c,
            piece.theta_lo,
            piece.theta_hi,
            raw,
        );
        if value < best_value || (value == best_value && theta < best_theta) {
            best_value = value;
            best_theta = theta;
        }
    }
    Ok(FamilyBest {
        theta: best_theta,
        segment: family.segment_at(best_theta, ell),
        objective: best_value,
    })
}

fn clamp01(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

/// Enumerates all candidate families for one anchor in the canonical frame.
fn build_families(reflected: &Instance, anchor: Point, ell: f64, tol: f64) -> Vec<CandidateFamily> {
    let mut xs: Vec<f64> = reflected.points().iter().map(|p| p.x).collect();
    let mut ys: Vec<f64> = reflected.points().iter().map(|p| p.y).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ys.sort_by(f64::total_cmp);
    ys.dedup();

    let mut families = Vec::new();
    let mut push = |kind: FamilyKind, theta_lo: f64, theta_hi: f64| {
        if theta_lo <= theta_hi {
            families.push(CandidateFamily {
                kind,
                theta_lo,
                theta_hi,
            });
        }
    };

    // Grid families: one endpoint on an intersection point inside the
    // closed disk of radius ℓ around the anchor.
    for &gx in &xs {
        for &gy in &ys {
            let p = Point::new(gx, gy);
            if l2_dist(p, anchor) > ell + tol {
                continue;
            }
            if gx <= anchor.x + tol && gy <= anchor.y + tol {
                push(
                    FamilyKind::FacilityAtGrid { facility: p },
                    clamp01((anchor.y - gy) / ell).asin(),
                    clamp01((anchor.x - gx) / ell).acos(),
                );
            }
            if gx >= anchor.x - tol && gy >= anchor.y - tol {
                push(
                    FamilyKind::EntranceAtGrid { entrance: p },
                    clamp01((gy - anchor.y) / ell).asin(),
                    clamp01((gx - anchor.x) / ell).acos(),
                );
            }
        }
    }

    // Pinned families: one facility coordinate and the opposite entrance
    // coordinate on demand coordinates.
    for &v in &xs {
        if v > anchor.x + tol {
            continue;
        }
        for &u in &ys {
            if u < anchor.y - tol {
                continue;
            }
            push(
                FamilyKind::PinnedFacilityX {
                    facility_x: v,
                    entrance_y: u,
                },
                clamp01((u - anchor.y) / ell).asin(),
                clamp01((anchor.x - v) / ell).acos(),
            );
        }
    }
    for &v in &ys {
        if v > anchor.y + tol {
            continue;
        }
        for &u in &xs {
            if u < anchor.x - tol {
                continue;
            }
            push(
                FamilyKind::PinnedFacilityY {
                    facility_y: v,
                    entrance_x: u,
                },
                clamp01((anchor.y - v) / ell).asin(),
                clamp01((u - anchor.x) / ell).acos(),
            );
        }
    }

    families
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    solution_objective: f64,
    segment: Segment,
    anchor: Point,
    orientation: Orientation,
    condition: Condition,
}

fn round12(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

fn orientation_rank(o: Orientation) -> u8 {
    match o {
        Orientation::EntranceQ1FacilityQ3 => 0,
        Orientation::EntranceQ2FacilityQ4 => 1,
        Orientation::EntranceQ3FacilityQ1 => 2,
        Orientation::EntranceQ4FacilityQ2 => 3,
    }
}

/// Total order on candidates: objective first, then lexicographic rounded
/// segment coordinates, with raw coordinates, orientation and anchor as
/// final tie-breakers so parallel merges are schedule-independent.
fn candidate_cmp(a: &Candidate, b: &Candidate) -> Ordering {
    let key = |c: &Candidate| {
        (
            c.segment.facility.x,
            c.segment.facility.y,
            c.segment.entrance.x,
            c.segment.entrance.y,
        )
    };
    let (ax1, ax2, ae1, ae2) = key(a);
    let (bx1, bx2, be1, be2) = key(b);
    a.solution_objective
        .total_cmp(&b.solution_objective)
        .then_with(|| round12(ax1).total_cmp(&round12(bx1)))
        .then_with(|| round12(ax2).total_cmp(&round12(bx2)))
        .then_with(|| round12(ae1).total_cmp(&round12(be1)))
        .then_with(|| round12(ae2).total_cmp(&round12(be2)))
        .then_with(|| ax1.total_cmp(&bx1))
        .then_with(|| ax2.total_cmp(&bx2))
        .then_with(|| ae1.total_cmp(&be1))
        .then_with(|| ae2.total_cmp(&be2))
        .then_with(|| orientation_rank(a.orientation).cmp(&orientation_rank(b.orientation)))
        .then_with(|| a.anchor.x.total_cmp(&b.anchor.x))
        .then_with(|| a.anchor.y.total_cmp(&b.anchor.y))
}

/// Solves the instance with the default configuration.
pub fn solve(instance: &Instance) -> Solution {
    solve_with(instance, &Config::default())
}

/// Enumerates every anchor, orientation and candidate family, optimizes each
/// family, and returns the global minimum with deterministic tie-breaking.
pub fn solve_with(instance: &Instance, config: &Config) -> Solution {
    let ell = instance.length();
    if ell == 0.0 {
        let corner = median_rectangle(instance).lower_corner();
        let segment = Segment::degenerate(corner);
        return Solution {
            objective: evaluate(instance, &segment),
            segment,
            anchor: corner,
            orientation: Orientation::EntranceQ1FacilityQ3,
            condition: Condition::GridEndpoint,
        };
    }

    let grid = intersection_points(instance, config.tol);
    let mut tasks: Vec<(Point, Orientation, Instance, Vec<CandidateFamily>)> = Vec::new();
    for &anchor in &grid.in_median {
        for orientation in Orientation::ALL {
            let map = Reflection::for_orientation(anchor, orientation);
            let reflected = instance.reflected(&map);
            let families = build_families(&reflected, anchor, ell, config.tol);
            tasks.push((anchor, orientation, reflected, families));
        }
    }

    let optimize_task = |(anchor, orientation, reflected, families): &(
        Point,
        Orientation,
        Instance,
        Vec<CandidateFamily>,
    )| {
        let map = Reflection::for_orientation(*anchor, *orientation);
        let mut out = Vec::with_capacity(families.len());
        for family in families {
            let Ok(best) = optimize_family(reflected, family, config.tol) else {
                continue;
            };
            let segment = Segment::new(
                map.apply(best.segment.entrance),
                map.apply(best.segment.facility),
            );
            out.push(Candidate {
                solution_objective: evaluate(instance, &segment),
                segment,
                anchor: *anchor,
                orientation: *orientation,
                condition: family.kind.condition(),
            });
        }
        out
    };

    let candidates: Vec<Candidate> = if config.parallel {
        tasks.par_iter().map(optimize_task).flatten().collect()
    } else {
        tasks.iter().flat_map(optimize_task).collect()
    };

    let best = candidates
        .iter()
        .min_by(|a, b| candidate_cmp(a, b))
        .expect("anchor grid point always yields at least one family");
    Solution {
        segment: best.segment,
        objective: best.solution_objective,
        anchor: best.anchor,
        orientation: best.orientation,
        condition: best.condition,
    }
}

/// Outcome of one local perturbation probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOutcome {
    pub label: String,
    /// `evaluate(perturbed) − objective`; nonnegative (within tolerance)
    /// at an optimum.
    pub improvement: f64,
}

/// Certification report for a solved instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub certified: Condition,
    pub angle: Option<AngleCondition>,
    pub probes: Vec<ProbeOutcome>,
    /// Ties and skipped checks, for the record.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassificationError {
    #[error("solution satisfies neither endpoint condition and no tie explains it: {details}")]
    ClassificationFailed { details: String },
    #[error("probe {label} improves the optimum by {improvement:e}")]
    ProbeImproved { label: String, improvement: f64 },
}

fn matches_coord(value: f64, coords: &[f64], tol: f64) -> bool {
    coords.iter().any(|&c| (value - c).abs() <= tol)
}

/// Mirror through the 45° diagonal. Swapping both coordinates preserves L1
/// distances and capture margins and carries the pin pattern
/// (x₁, e₂ pinned) onto (x₂, e₁ pinned), so the one stationarity check
/// covers both patterns.
fn swap_axes(instance: &Instance, segment: &Segment) -> (Instance, Segment) {
    let swapped = crate::model::validate_instance(crate::model::RawInstance {
        points: instance
            .points()
            .iter()
            .map(|p| crate::model::DemandPoint::new(p.y, p.x, p.w))
            .collect(),
        length: instance.length(),
        speedup: instance.speedup(),
    })
    .expect("swapped instance stays valid");
    (
        swapped,
        Segment::new(
            Point::new(segment.entrance.y, segment.entrance.x),
            Point::new(segment.facility.y, segment.facility.x),
        ),
    )
}

/// Verifies that the returned optimum satisfies one of the finite-candidate
/// conditions and that no local probe improves it.
pub fn classify_solution(
    instance: &Instance,
    solution: &Solution,
    config: &Config,
) -> Result<ClassificationReport, ClassificationError> {
    let tol = config.tol;
    let ell = instance.length();
    let grid = intersection_points(instance, tol);
    let mut notes = Vec::new();

    let near_grid = |p: Point| {
        grid.all
            .iter()
            .any(|g| (g.x - p.x).abs() <= tol && (g.y - p.y).abs() <= tol)
    };

    let xs: Vec<f64> = instance.points().iter().map(|p| p.x).collect();
    let ys: Vec<f64> = instance.points().iter().map(|p| p.y).collect();
    let seg = solution.segment;

    // Canonical frame for the aggregate-based checks.
    let map = Reflection::for_orientation(solution.anchor, solution.orientation);
    let canonical_instance = instance.reflected(&map);
    let canonical_segment = Segment::new(map.apply(seg.entrance), map.apply(seg.facility));

    let mut angle = None;
    let certified = if near_grid(seg.facility) || near_grid(seg.entrance) {
        Condition::GridEndpoint
    } else {
        let pinned_x =
            matches_coord(seg.facility.x, &xs, tol) && matches_coord(seg.entrance.y, &ys, tol);
        let pinned_y =
            matches_coord(seg.facility.y, &ys, tol) && matches_coord(seg.entrance.x, &xs, tol);
        if pinned_x || pinned_y {
            // The stationarity condition is written for the pattern with
            // x₂ and e₁ pinned; the mirrored pattern is checked on the
            // diagonally swapped configuration.
            let mut checks = Vec::new();
            if pinned_y {
                checks.push(angle_condition_ii(
                    &canonical_instance,
                    &canonical_segment,
                    tol,
                    config.angle_tol,
                ));
            }
            if pinned_x {
                let (swapped_instance, swapped_segment) =
                    swap_axes(&canonical_instance, &canonical_segment);
                checks.push(angle_condition_ii(
                    &swapped_instance,
                    &swapped_segment,
                    tol,
                    config.angle_tol,
                ));
            }
            match checks.iter().flatten().find(|cond| cond.holds) {
                Some(cond) => {
                    angle = Some(*cond);
                    Condition::CoordinatePinned
                }
                None => {
                    angle = checks.iter().flatten().next().copied();
                    match checks.iter().find(|c| c.is_err()) {
                        Some(Err(err)) => {
                            notes.push(format!("angle check skipped, non-generic position: {err}"))
                        }
                        _ => notes.push(
                            "coordinate pins present but angle stationarity fails; \
                             optimum sits on a piece boundary tie"
                                .to_string(),
                        ),
                    }
                    Condition::Degenerate
                }
            }
        } else {
            return Err(ClassificationError::ClassificationFailed {
                details: format!(
                    "facility {} / entrance {} match no grid point and no \
                     coordinate-pin pair within {tol:e}",
                    seg.facility, seg.entrance
                ),
            });
        }
    };

    // Formula-based non-improvability, when the genericity preconditions
    // hold in the canonical frame.
    match predict_delta_horizontal(
        &canonical_instance,
        &canonical_segment,
        0.5 * horizontal_safe_radius(&canonical_instance, &canonical_segment, tol),
        tol,
    ) {
        Ok(delta) => {
            if delta.delta_prime.min(delta.delta_dprime) < -tol {
                return Err(ClassificationError::ProbeImproved {
                    label: "horizontal shift pair (predicted)".into(),
                    improvement: delta.delta_prime.min(delta.delta_dprime),
                });
            }
        }
        Err(err) => notes.push(format!("horizontal delta check skipped: {err}")),
    }
    let theta = (canonical_segment.entrance.y - canonical_segment.facility.y)
        .atan2(canonical_segment.entrance.x - canonical_segment.facility.x);
    let h = 0.5 * mixed_safe_angle(&canonical_instance, &canonical_segment, theta, tol);
    if h > 0.0 {
        match predict_delta_mixed(
            &canonical_instance,
            &canonical_segment,
            theta,
            theta - h,
            theta + h,
            tol,
        ) {
            Ok(delta) => {
                if delta.delta_prime.min(delta.delta_dprime) < -tol {
                    return Err(ClassificationError::ProbeImproved {
                        label: "mixed shift pair (predicted)".into(),
                        improvement: delta.delta_prime.min(delta.delta_dprime),
                    });
                }
            }
            Err(err) => notes.push(format!("mixed delta check skipped: {err}")),
        }
    } else {
        notes.push("mixed delta check skipped: no angular room".into());
    }

    // Direct re-evaluation probes; valid regardless of genericity.
    let mut probes = Vec::new();
    let mut gaps: Vec<f64> = Vec::new();
    for p in instance.points() {
        for g in [
            (p.x - seg.entrance.x).abs(),
            (p.x - seg.facility.x).abs(),
            (p.y - seg.entrance.y).abs(),
            (p.y - seg.facility.y).abs(),
        ] {
            if g > tol {
                gaps.push(g);
            }
        }
    }
    let radius = gaps
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
        .min(1.0 + ell)
        * 0.5;
    let translate = |dx: f64, dy: f64| {
        Segment::new(
            Point::new(seg.entrance.x + dx, seg.entrance.y + dy),
            Point::new(seg.facility.x + dx, seg.facility.y + dy),
        )
    };
    let mut probe_segments: Vec<(String, Segment)> = vec![
        ("translate left".into(), translate(-radius, 0.0)),
        ("translate right".into(), translate(radius, 0.0)),
        ("translate down".into(), translate(0.0, -radius)),
        ("translate up".into(), translate(0.0, radius)),
    ];
    if h > 0.0 {
        let (lambda1, beta1) = shift_magnitudes(ell, theta, theta - h);
        let (lambda2, beta2) = shift_magnitudes(ell, theta + h, theta);
        let rotate = |dlx: f64, dey: f64| {
            Segment::new(
                map.apply(Point::new(
                    canonical_segment.entrance.x,
                    canonical_segment.entrance.y + dey,
                )),
                map.apply(Point::new(
                    canonical_segment.facility.x + dlx,
                    canonical_segment.facility.y,
                )),
            )
        };
        probe_segments.push(("rotate down".into(), rotate(-lambda1, -beta1)));
        probe_segments.push(("rotate up".into(), rotate(lambda2, beta2)));
    }
    for (label, probe_segment) in probe_segments {
        let improvement = evaluate(instance, &probe_segment) - solution.objective;
        if improvement < -tol {
            return Err(ClassificationError::ProbeImproved { label, improvement });
        }
        probes.push(ProbeOutcome { label, improvement });
    }

    Ok(ClassificationReport {
        certified,
        angle,
        probes,
        notes,
    })
}

/// Captured demand indices of a solution, by the defining inequality.
pub fn captured_indices(instance: &Instance, segment: &Segment, tol: f64) -> Vec<usize> {
    captation_partition(instance, segment, tol).captured()
}

/// Convenience for tests and probes: the segment obtained by placing the
/// entrance at angle `theta` on the arc around the facility.
pub fn canonical_segment(facility: Point, theta: f64, ell: f64) -> Segment {
    Segment::new(arc_point(facility, theta, ell), facility)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_instance, DemandPoint, RawInstance};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

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
    fn minimize_piece_examples() {
        let sinusoid = |b: f64, c: f64| move |theta: f64| b * theta.cos() + c * theta.sin();
        let (theta, value) = minimize_piece(0.0, 1.0, 0.0, 0.0, PI, sinusoid(1.0, 0.0));
        assert_abs_diff_eq!(theta, PI, epsilon = 1e-12);
        assert_abs_diff_eq!(value, -1.0, epsilon = 1e-12);

        let (theta, value) = minimize_piece(0.0, 0.0, 1.0, 0.0, FRAC_PI_2, sinusoid(0.0, 1.0));
        assert_eq!(theta, 0.0);
        assert_abs_diff_eq!(value, 0.0, epsilon = 1e-12);

        // Endpoints tie at 1; tie-break toward the smaller angle.
        let (theta, value) = minimize_piece(0.0, 1.0, 1.0, 0.0, FRAC_PI_2, sinusoid(1.0, 1.0));
        assert_eq!(theta, 0.0);
        assert_abs_diff_eq!(value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn breakpoints_single_point_family() {
        // Facility pinned on the unique demand point: the only events are
        // the domain ends, the diagonal angles and π/4 (the entrance
        // coordinate crossings coincide with the domain ends).
        let k = 50.0;
        let inst = instance(&[(0.0, 0.0, 1.0)], 1.0, k);
        let family = CandidateFamily {
            kind: FamilyKind::FacilityAtGrid {
                facility: Point::new(0.0, 0.0),
            },
            theta_lo: 0.0,
            theta_hi: FRAC_PI_2,
        };
        let events = breakpoints(&inst, &family);
        let (tilde, bar) = crate::geometry::diagonal_angles(k);
        let expected = [0.0, bar, FRAC_PI_4, tilde, FRAC_PI_2];
        assert_eq!(events.len(), expected.len());
        for (got, want) in events.iter().zip(expected.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn breakpoints_grow_with_points() {
        let base = instance(&[(1.0, 1.5, 1.0)], 2.0, 3.0);
        let more = instance(&[(1.0, 1.5, 1.0), (0.5, 2.2, 1.0)], 2.0, 3.0);
        let family = CandidateFamily {
            kind: FamilyKind::FacilityAtGrid {
                facility: Point::new(0.0, 0.0),
            },
            theta_lo: 0.0,
            theta_hi: FRAC_PI_2,
        };
        let a = breakpoints(&base, &family);
        let b = breakpoints(&more, &family);
        for theta in &a {
            assert!(
                b.iter().any(|t| (t - theta).abs() <= 1e-9),
                "event {theta} lost after adding a point"
            );
        }
    }

    #[test]
    fn optimize_family_facility_on_single_point() {
        let inst = instance(&[(2.0, 3.0, 1.0)], 1.0, 2.0);
        let family = CandidateFamily {
            kind: FamilyKind::FacilityAtGrid {
                facility: Point::new(2.0, 3.0),
            },
            theta_lo: 0.0,
            theta_hi: FRAC_PI_2,
        };
        let best = optimize_family(&inst, &family, 1e-9).unwrap();
        assert_eq!(best.objective, 0.0);
        // Constant objective: the tie-break lands on the lower domain end.
        assert_eq!(best.theta, 0.0);
    }

    #[test]
    fn optimize_family_matches_dense_sampling() {
        let inst = instance(
            &[(0.0, 6.0, 1.0), (4.0, 4.0, 2.0), (-10.0, -10.0, 1.0)],
            5.0,
            5.0,
        );
        let family = CandidateFamily {
            kind: FamilyKind::FacilityAtGrid {
                facility: Point::new(0.0, 4.0),
            },
            theta_lo: 0.0,
            theta_hi: FRAC_PI_2,
        };
        let best = optimize_family(&inst, &family, 1e-9).unwrap();
        assert!(best.objective <= 30.0 + 1e-9);
        let mut sampled = f64::INFINITY;
        for i in 0..=10_000 {
            let theta = FRAC_PI_2 * (i as f64) / 10_000.0;
            sampled = sampled.min(evaluate(&inst, &family.segment_at(theta, 5.0)));
        }
        assert!(best.objective <= sampled + 1e-9);
    }

    #[test]
    fn empty_domain_is_rejected() {
        let inst = instance(&[(0.0, 0.0, 1.0)], 1.0, 2.0);
        let family = CandidateFamily {
            kind: FamilyKind::FacilityAtGrid {
                facility: Point::new(0.0, 0.0),
            },
            theta_lo: 1.0,
            theta_hi: 0.5,
        };
        assert_eq!(
            optimize_family(&inst, &family, 1e-9),
            Err(FamilyError::EmptyDomain)
        );
    }

    #[test]
    fn solve_single_point_is_free() {
        let inst = instance(&[(3.0, 4.0, 1.0)], 1.0, 2.0);
        let solution = solve(&inst);
        assert_eq!(solution.objective, 0.0);
        assert_eq!(solution.segment.facility, Point::new(3.0, 4.0));
        assert_abs_diff_eq!(solution.segment.euclidean_length(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn solve_zero_length_reduces_to_median() {
        let inst = instance(
            &[(0.0, 6.0, 1.0), (4.0, 4.0, 2.0), (-10.0, -10.0, 1.0)],
            0.0,
            1.0,
        );
        let solution = solve(&inst);
        let rect = median_rectangle(&inst);
        let median_obj = evaluate(&inst, &Segment::degenerate(rect.lower_corner()));
        assert_eq!(solution.objective, median_obj);
        assert_eq!(solution.segment.entrance, solution.segment.facility);
        assert_eq!(solution.condition, Condition::GridEndpoint);
    }

    #[test]
    fn solve_beats_every_known_configuration() {
        let inst = instance(
            &[(0.0, 6.0, 1.0), (4.0, 4.0, 2.0), (-10.0, -10.0, 1.0)],
            5.0,
            5.0,
        );
        let solution = solve(&inst);
        // x = (0,0), e = (3,4) achieves 30.
        assert!(solution.objective <= 30.0 + 1e-9);
        assert_abs_diff_eq!(solution.segment.euclidean_length(), 5.0, epsilon = 1e-9);
        let report = classify_solution(&inst, &solution, &Config::default()).unwrap();
        assert_ne!(report.certified, Condition::Degenerate);
    }

    #[test]
    fn solve_is_parallelism_independent() {
        let inst = instance(
            &[
                (0.0, 6.0, 1.0),
                (4.0, 4.0, 2.0),
                (-10.0, -10.0, 1.0),
                (2.5, -1.5, 0.7),
            ],
            3.0,
            4.0,
        );
        let serial = solve_with(
            &inst,
            &Config {
                parallel: false,
                ..Config::default()
            },
        );
        let parallel = solve_with(
            &inst,
            &Config {
                parallel: true,
                ..Config::default()
            },
        );
        assert_eq!(serial, parallel);
    }
}
