//! Objective evaluation and exact finite-shift perturbation analytics.
//!
//! The objective is `f(e, x) = Σ wᵢ·min(‖x−aᵢ‖₁, ‖e−aᵢ‖₁ + ℓ/k)`. For a
//! canonical segment in generic position, shifting both endpoints
//! horizontally by `±λ`, or trading a horizontal facility shift against a
//! vertical entrance shift along the arc, changes the objective by an exact
//! linear form in the shift magnitudes. The coefficients are weight sums
//! over quadrant/captation classes ([`WeightAggregates`]); the predicted
//! changes Δ′ and Δ″ match the re-evaluated objective exactly as long as the
//! shifts stay below the safe radius (no membership flip, no quadrant
//! change, no new coordinate tie).

use crate::captation::{capture_margin, Membership};
use crate::geometry::{l1_dist, quadrant_of, Point, Quadrant};
use crate::model::{Instance, Segment};
use std::f64::consts::FRAC_PI_4;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum PerturbationError {
    #[error("demand point {index} ties a split coordinate (gap {gap:e}) within tolerance")]
    DegeneratePosition { index: usize, gap: f64 },
    #[error("shift {lambda} is not below the safe radius {safe_radius}")]
    LambdaTooLarge { lambda: f64, safe_radius: f64 },
    #[error("angles must satisfy 0 < θ′ < θ < θ″ ≤ π/2 within one regime (got θ′={theta_p}, θ={theta}, θ″={theta_pp})")]
    BadAngles {
        theta_p: f64,
        theta: f64,
        theta_pp: f64,
    },
}

/// Travel distance from a demand point to the facility: the cheaper of
/// direct rectilinear travel and entering the line at `e`.
pub fn travel_distance(a: Point, segment: &Segment, ell: f64, k: f64) -> f64 {
    let direct = l1_dist(segment.facility, a);
    let transit = l1_dist(segment.entrance, a) + ell / k;
    direct.min(transit)
}

/// Weighted sum of travel distances over all demand points.
pub fn evaluate(instance: &Instance, segment: &Segment) -> f64 {
    let ell = instance.length();
    let k = instance.speedup();
    instance
        .points()
        .iter()
        .map(|p| p.w * travel_distance(p.point(), segment, ell, k))
        .sum()
}

/// Which coordinate the captured-point sums are split by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitAxis {
    /// Split captured points by `aᵢ₁` against `e₁` (both endpoints shift
    /// horizontally).
    Horizontal,
    /// Split captured points by `aᵢ₂` against `e₂` (the facility shifts
    /// horizontally, the entrance vertically).
    Vertical,
}

/// The weight sums driving the Δ′/Δ″ formulas.
///
/// `w1..w4` are quadrant sums relative to the facility, with captured points
/// removed as each class requires; `w_plus`/`w_minus` split the interior of
/// the captation region by the axis coordinate against the entrance;
/// `w_dplus`/`w_dminus` do the same for boundary points outside the
/// facility's second quadrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightAggregates {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub w4: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    pub w_dplus: f64,
    pub w_dminus: f64,
    pub axis: SplitAxis,
}

/// Recomputes the eight weight sums from the captation partition and the
/// quadrants relative to the facility.
///
/// Fails with `DegeneratePosition` when a demand coordinate ties the split
/// coordinate of the entrance within `tol`.
pub fn weight_aggregates(
    instance: &Instance,
    segment: &Segment,
    axis: SplitAxis,
    tol: f64,
) -> Result<WeightAggregates, PerturbationError> {
    let split_of = |p: Point| match axis {
        SplitAxis::Horizontal => p.x,
        SplitAxis::Vertical => p.y,
    };
    let e_split = split_of(segment.entrance);
    for (index, p) in instance.points().iter().enumerate() {
        let gap = (split_of(p.point()) - e_split).abs();
        if gap <= tol {
            return Err(PerturbationError::DegeneratePosition { index, gap });
        }
    }

    let ell = instance.length();
    let k = instance.speedup();
    let mut agg = WeightAggregates {
        w1: 0.0,
        w2: 0.0,
        w3: 0.0,
        w4: 0.0,
        w_plus: 0.0,
        w_minus: 0.0,
        w_dplus: 0.0,
        w_dminus: 0.0,
        axis,
    };
    for p in instance.points() {
        let a = p.point();
        let membership = crate::captation::member_definitional(
            a,
            segment.entrance,
            segment.facility,
            ell,
            k,
            tol,
        );
        let quadrant = quadrant_of(a, segment.facility);
        match quadrant {
            Quadrant::Q1 if membership == Membership::Outside => agg.w1 += p.w,
            Quadrant::Q2 if membership != Membership::Interior => agg.w2 += p.w,
            Quadrant::Q3 => agg.w3 += p.w,
            Quadrant::Q4 if membership == Membership::Outside => agg.w4 += p.w,
            _ => {}
        }
        let above = split_of(a) > e_split;
        match membership {
            Membership::Interior => {
                if above {
                    agg.w_plus += p.w;
                } else {
                    agg.w_minus += p.w;
                }
            }
            Membership::Boundary if quadrant != Quadrant::Q2 => {
                if above {
                    agg.w_dplus += p.w;
                } else {
                    agg.w_dminus += p.w;
                }
            }
            _ => {}
        }
    }
    Ok(agg)
}

/// Predicted objective changes for the paired horizontal shifts
/// `(x∓λ, e∓λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizontalDelta {
    /// Change when both endpoints shift left by `λ`.
    pub delta_prime: f64,
    /// Change when both endpoints shift right by `λ`.
    pub delta_dprime: f64,
    pub lambda: f64,
    pub aggregates: WeightAggregates,
}

/// Largest horizontal shift guaranteed not to cross any event: half the
/// smallest gap between a demand abscissa and either endpoint abscissa, and
/// half of every nonzero capture margin over its shift rate.
pub fn horizontal_safe_radius(instance: &Instance, segment: &Segment, tol: f64) -> f64 {
    let ell = instance.length();
    let k = instance.speedup();
    let mut least = f64::INFINITY;
    for p in instance.points() {
        let a = p.point();
        least = least.min((a.x - segment.entrance.x).abs());
        least = least.min((a.x - segment.facility.x).abs());
        let g = capture_margin(a, segment.entrance, segment.facility, ell, k);
        if g.abs() > tol {
            // Both norms change by at most λ, so g moves at rate ≤ 2.
            least = least.min(0.5 * g.abs());
        }
    }
    0.5 * least
}

/// Exact objective changes for the horizontal shift pair.
///
/// Requires generic position (`x₁` and `e₁` off every demand abscissa) and
/// `0 < λ <` the safe radius.
pub fn predict_delta_horizontal(
    instance: &Instance,
    segment: &Segment,
    lambda: f64,
    tol: f64,
) -> Result<HorizontalDelta, PerturbationError> {
    for (index, p) in instance.points().iter().enumerate() {
        let gap = (p.x - segment.facility.x).abs();
        if gap <= tol {
            return Err(PerturbationError::DegeneratePosition { index, gap });
        }
    }
    let aggregates = weight_aggregates(instance, segment, SplitAxis::Horizontal, tol)?;
    let safe_radius = horizontal_safe_radius(instance, segment, tol);
    if lambda.is_nan() || lambda <= 0.0 || lambda >= safe_radius {
        return Err(PerturbationError::LambdaTooLarge {
            lambda,
            safe_radius,
        });
    }
    let s = aggregates.w1 - aggregates.w2 - aggregates.w3 + aggregates.w4 + aggregates.w_plus
        - aggregates.w_minus
        + aggregates.w_dplus;
    Ok(HorizontalDelta {
        delta_prime: (s - aggregates.w_dminus) * lambda,
        delta_dprime: (-s - aggregates.w_dminus) * lambda,
        lambda,
        aggregates,
    })
}

/// Angle regime of the mixed shift relative to the π/4 diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `θ″ ≤ π/4`: every angle below the diagonal.
    BelowDiag,
    /// `θ′ ≥ π/4`: every angle above the diagonal.
    AboveDiag,
    /// `θ = π/4` exactly.
    OnDiag,
}

/// Predicted objective changes for the mixed shift pair along the arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedDelta {
    /// Change of the angle-decreasing move `x−(λ₁,0)`, `e−(0,β₁)`.
    pub delta_prime: f64,
    /// Change of the angle-increasing move `x+(λ₂,0)`, `e+(0,β₂)`.
    pub delta_dprime: f64,
    pub w_a: f64,
    pub w_b: f64,
    /// Boundary-point correction of Δ′; never positive.
    pub d_prime: f64,
    /// Boundary-point correction of Δ″; never positive.
    pub d_dprime: f64,
    pub regime: Regime,
    pub lambda1: f64,
    pub beta1: f64,
    pub lambda2: f64,
    pub beta2: f64,
    pub aggregates: WeightAggregates,
}

/// Shift magnitudes for rotating a length-`ell` segment from angle `from`
/// to `to < from`, in the numerically stable product form:
/// `λ = ℓ(cos to − cos from)`, `β = ℓ(sin from − sin to)`.
pub fn shift_magnitudes(ell: f64, from: f64, to: f64) -> (f64, f64) {
    let mean = 0.5 * (from + to);
    let half = 0.5 * (from - to);
    let lambda = 2.0 * ell * mean.sin() * half.sin();
    let beta = 2.0 * ell * mean.cos() * half.sin();
    (lambda, beta)
}

/// Conservative angular safe radius for the mixed shift around `theta`:
/// keeps both rotated angles inside `(0, π/2]`, on one side of π/4, and
/// below every coordinate-tie and membership-flip event (each endpoint
/// coordinate moves at rate at most ℓ).
pub fn mixed_safe_angle(instance: &Instance, segment: &Segment, theta: f64, tol: f64) -> f64 {
    let ell = instance.length();
    if ell <= 0.0 {
        return 0.0;
    }
    let k = instance.speedup();
    let mut least = theta.min(std::f64::consts::FRAC_PI_2 - theta);
    if theta != FRAC_PI_4 {
        least = least.min((theta - FRAC_PI_4).abs());
    }
    for p in instance.points() {
        let a = p.point();
        least = least.min((a.x - segment.facility.x).abs() / ell);
        least = least.min((a.y - segment.entrance.y).abs() / ell);
        let g = capture_margin(a, segment.entrance, segment.facility, ell, k);
        if g.abs() > tol {
            least = least.min(0.5 * g.abs() / ell);
        }
    }
    0.5 * least
}

/// Exact objective changes for the mixed shifts, with the regime picked by
/// comparing `θ`, `θ′`, `θ″` against π/4.
///
/// The caller must keep `θ′`, `θ″` inside the breakpoint-free piece around
/// `θ` (see [`mixed_safe_angle`]); requires generic position (`x₁` off every
/// demand abscissa, `e₂` off every demand ordinate).
pub fn predict_delta_mixed(
    instance: &Instance,
    segment: &Segment,
    theta: f64,
    theta_p: f64,
    theta_pp: f64,
    tol: f64,
) -> Result<MixedDelta, PerturbationError> {
    let ordered = 0.0 < theta_p
        && theta_p < theta
        && theta < theta_pp
        && theta_pp <= std::f64::consts::FRAC_PI_2;
    if !ordered {
        return Err(PerturbationError::BadAngles {
            theta_p,
            theta,
            theta_pp,
        });
    }
    let regime = if theta == FRAC_PI_4 {
        Regime::OnDiag
    } else if theta_pp <= FRAC_PI_4 {
        Regime::BelowDiag
    } else if theta_p >= FRAC_PI_4 {
        Regime::AboveDiag
    } else {
        return Err(PerturbationError::BadAngles {
            theta_p,
            theta,
            theta_pp,
        });
    };
    for (index, p) in instance.points().iter().enumerate() {
        let gap = (p.x - segment.facility.x).abs();
        if gap <= tol {
            return Err(PerturbationError::DegeneratePosition { index, gap });
        }
    }
    let aggregates = weight_aggregates(instance, segment, SplitAxis::Vertical, tol)?;

    let ell = instance.length();
    let (lambda1, beta1) = shift_magnitudes(ell, theta, theta_p);
    let (lambda2, beta2) = shift_magnitudes(ell, theta_pp, theta);

    let w_a = aggregates.w1 - aggregates.w2 - aggregates.w3 + aggregates.w4;
    let w_b = aggregates.w_plus - aggregates.w_minus + aggregates.w_dplus;

    let (d_prime, d_dprime) = match regime {
        Regime::BelowDiag => (
            -aggregates.w_dminus * beta1 + aggregates.w_dplus * (lambda1 - beta1),
            -aggregates.w_dminus * lambda2,
        ),
        Regime::AboveDiag => (
            -aggregates.w_dminus * beta1,
            -aggregates.w_dminus * lambda2 + aggregates.w_dplus * (beta2 - lambda2),
        ),
        Regime::OnDiag => (
            -aggregates.w_dminus * beta1 + aggregates.w_dplus * (lambda1 - beta1),
            -aggregates.w_dminus * lambda2 + aggregates.w_dplus * (beta2 - lambda2),
        ),
    };

    Ok(MixedDelta {
        delta_prime: w_a * lambda1 + w_b * beta1 + d_prime,
        delta_dprime: -w_a * lambda2 - w_b * beta2 + d_dprime,
        w_a,
        w_b,
        d_prime,
        d_dprime,
        regime,
        lambda1,
        beta1,
        lambda2,
        beta2,
        aggregates,
    })
}

/// Result of the angle stationarity check of the coordinate-pinned
/// optimality condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleCondition {
    pub holds: bool,
    pub w_a: f64,
    pub w_b: f64,
}

/// Checks `tan θ = −w_b/w_a` with `w_b > 0` (hence `w_a < 0`) against the
/// vertical aggregates of the given canonical segment.
pub fn angle_condition_ii(
    instance: &Instance,
    segment: &Segment,
    tol: f64,
    angle_tol: f64,
) -> Result<AngleCondition, PerturbationError> {
    let aggregates = weight_aggregates(instance, segment, SplitAxis::Vertical, tol)?;
    let w_a = aggregates.w1 - aggregates.w2 - aggregates.w3 + aggregates.w4;
    let w_b = aggregates.w_plus - aggregates.w_minus + aggregates.w_dplus;
    let theta =
        (segment.entrance.y - segment.facility.y).atan2(segment.entrance.x - segment.facility.x);
    let holds = w_b > 0.0 && w_a < 0.0 && (theta.tan() + w_b / w_a).abs() <= angle_tol;
    Ok(AngleCondition { holds, w_a, w_b })
}
