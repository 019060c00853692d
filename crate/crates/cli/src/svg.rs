//! Static SVG figure of a solved instance: demand points (area scaled by
//! weight, captured ones styled distinctly), the median rectangle, the
//! anchor's quadrant axes, the optimal segment with entrance/exit markers,
//! and the captation region boundary polyline of the active case.
//!
//! All coordinates are written with fixed 6-decimal formatting, so the
//! output is byte-identical across runs and platforms for identical inputs.

use rapidline_core::captation::{region_params, RegionCase, RegionParams};
use rapidline_core::{
    median_rectangle, CaptationPartition, Instance, Point, Reflection, Segment, Solution,
};
use std::fmt::Write as _;
use std::io;
use std::path::Path;

const WIDTH: f64 = 640.0;
const PAD: f64 = 28.0;

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: &[Point]) -> Frame {
        let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            min_x = min_x.min(p.x);
            max_x = max_x.max(p.x);
            min_y = min_y.min(p.y);
            max_y = max_y.max(p.y);
        }
        let span_x = (max_x - min_x).max(1e-6);
        let span_y = (max_y - min_y).max(1e-6);
        let scale = (WIDTH - 2.0 * PAD) / span_x;
        Frame {
            min_x,
            max_y,
            scale,
            height: span_y * scale + 2.0 * PAD,
        }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            (p.x - self.min_x) * self.scale + PAD,
            (self.max_y - p.y) * self.scale + PAD,
        )
    }
}

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

fn polyline(frame: &Frame, points: &[Point], class: &str, out: &mut String) {
    let coords: Vec<String> = points
        .iter()
        .map(|&p| {
            let (sx, sy) = frame.map(p);
            format!("{},{}", fmt6(sx), fmt6(sy))
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline class="{class}" points="{}"/>"#,
        coords.join(" ")
    );
}

fn line(frame: &Frame, a: Point, b: Point, class: &str, out: &mut String) {
    let (x1, y1) = frame.map(a);
    let (x2, y2) = frame.map(b);
    let _ = writeln!(
        out,
        r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
        fmt6(x1),
        fmt6(y1),
        fmt6(x2),
        fmt6(y2)
    );
}

/// Boundary polyline vertices of the captation region in the canonical
/// frame, with unbounded rays extended by `reach`.
fn region_polyline(params: &RegionParams, segment: &Segment, reach: f64) -> Vec<Point> {
    let e = segment.entrance;
    let x = segment.facility;
    match params.case {
        RegionCase::DiagonalLow => vec![
            Point::new(x.x - reach, params.h_minus),
            Point::new(x.x, params.h_minus),
            Point::new(e.x, params.h_plus),
            Point::new(e.x + reach, params.h_plus),
        ],
        RegionCase::Middle => vec![
            Point::new(params.v_plus, e.y + reach),
            Point::new(params.v_plus, e.y),
            Point::new(e.x, params.h_plus),
            Point::new(e.x + reach, params.h_plus),
        ],
        RegionCase::DiagonalHigh => vec![
            Point::new(params.v_minus, x.y - reach),
            Point::new(params.v_minus, x.y),
            Point::new(params.v_plus, e.y),
            Point::new(params.v_plus, e.y + reach),
        ],
    }
}

/// Renders the figure as an SVG 1.1 string.
pub fn render_svg(
    instance: &Instance,
    solution: &Solution,
    partition: &CaptationPartition,
    tol: f64,
) -> String {
    let mut anchors: Vec<Point> = instance.points().iter().map(|p| p.point()).collect();
    anchors.push(solution.segment.entrance);
    anchors.push(solution.segment.facility);
    anchors.push(solution.anchor);
    let frame = Frame::fit(&anchors);
    let rect = median_rectangle(instance);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {} {}">"#,
        fmt6(WIDTH),
        fmt6(frame.height)
    );
    out.push_str(
        "<style>\n\
         .anchor-axes { stroke: #9ca3af; stroke-width: 1; stroke-dasharray: 4 3; }\n\
         .median-rect { fill: #bfdbfe; fill-opacity: 0.45; stroke: #2563eb; stroke-width: 1; }\n\
         .captation-boundary { fill: none; stroke: #059669; stroke-width: 1.5; }\n\
         .segment { stroke: #111827; stroke-width: 2; }\n\
         .entrance-marker { fill: #111827; }\n\
         .facility-marker { fill: #dc2626; }\n\
         .demand-direct { fill: #6b7280; fill-opacity: 0.8; }\n\
         .demand-captured { fill: #059669; fill-opacity: 0.9; stroke: #065f46; stroke-width: 1; }\n\
         </style>\n",
    );

    // Quadrant axes through the anchor.
    let reach = 4.0 * (WIDTH / frame.scale + frame.height / frame.scale);
    line(
        &frame,
        Point::new(solution.anchor.x - reach, solution.anchor.y),
        Point::new(solution.anchor.x + reach, solution.anchor.y),
        "anchor-axes",
        &mut out,
    );
    line(
        &frame,
        Point::new(solution.anchor.x, solution.anchor.y - reach),
        Point::new(solution.anchor.x, solution.anchor.y + reach),
        "anchor-axes",
        &mut out,
    );

    // Median rectangle (possibly degenerate).
    let (rx, ry) = frame.map(Point::new(rect.x_lo, rect.y_hi));
    let _ = writeln!(
        out,
        r#"<rect class="median-rect" x="{}" y="{}" width="{}" height="{}"/>"#,
        fmt6(rx),
        fmt6(ry),
        fmt6(((rect.x_hi - rect.x_lo) * frame.scale).max(1.0)),
        fmt6(((rect.y_hi - rect.y_lo) * frame.scale).max(1.0)),
    );

    // Captation region boundary of the active case, drawn in the canonical
    // frame and reflected back.
    if instance.length() > 0.0 {
        let map = Reflection::for_orientation(solution.anchor, solution.orientation);
        let canonical = Segment::new(
            map.apply(solution.segment.entrance),
            map.apply(solution.segment.facility),
        );
        if let Ok(params) = region_params(
            canonical.entrance,
            canonical.facility,
            instance.length(),
            instance.speedup(),
            tol,
        ) {
            let vertices: Vec<Point> = region_polyline(&params, &canonical, reach)
                .into_iter()
                .map(|p| map.apply(p))
                .collect();
            polyline(&frame, &vertices, "captation-boundary", &mut out);
        }
    }

    // Demand points, area proportional to weight.
    for (i, p) in instance.points().iter().enumerate() {
        let class = if partition.interior.contains(&i) || partition.boundary.contains(&i) {
            "demand-captured"
        } else {
            "demand-direct"
        };
        let (cx, cy) = frame.map(p.point());
        let _ = writeln!(
            out,
            r#"<circle class="{class}" cx="{}" cy="{}" r="{}"/>"#,
            fmt6(cx),
            fmt6(cy),
            fmt6(3.5 * p.w.sqrt()),
        );
    }

    // The optimal segment with entrance/exit markers.
    line(
        &frame,
        solution.segment.entrance,
        solution.segment.facility,
        "segment",
        &mut out,
    );
    let (ex, ey) = frame.map(solution.segment.entrance);
    let _ = writeln!(
        out,
        r#"<circle class="entrance-marker" cx="{}" cy="{}" r="4.000000"/>"#,
        fmt6(ex),
        fmt6(ey),
    );
    let (fx, fy) = frame.map(solution.segment.facility);
    let _ = writeln!(
        out,
        r#"<rect class="facility-marker" x="{}" y="{}" width="8.000000" height="8.000000"/>"#,
        fmt6(fx - 4.0),
        fmt6(fy - 4.0),
    );

    out.push_str("</svg>\n");
    out
}

/// Writes the figure to `path`.
pub fn emit_svg(
    instance: &Instance,
    solution: &Solution,
    partition: &CaptationPartition,
    tol: f64,
    path: &Path,
) -> io::Result<()> {
    std::fs::write(path, render_svg(instance, solution, partition, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_instance;
    use rapidline_core::{captation_partition, solve};

    fn render(json: &str) -> String {
        let inst = parse_instance(json).expect("valid instance");
        let solution = solve(&inst);
        let partition = captation_partition(&inst, &solution.segment, 1e-9);
        render_svg(&inst, &solution, &partition, 1e-9)
    }

    #[test]
    fn byte_identical_across_runs() {
        let json = r#"{"points":[{"x":0,"y":6,"w":1},{"x":4,"y":4,"w":2},{"x":-10,"y":-10,"w":1}],
                       "length":5,"k":5}"#;
        assert_eq!(render(json), render(json));
    }

    #[test]
    fn single_point_draws_one_demand_circle() {
        let svg = render(r#"{"points":[{"x":3,"y":4,"w":1}],"length":1,"k":2}"#);
        let demand_circles = svg.matches(r#"class="demand-"#).count();
        assert_eq!(demand_circles, 1);
        assert!(svg.contains("entrance-marker"));
        assert!(svg.contains("facility-marker"));
        assert!(svg.contains("median-rect"));
    }

    #[test]
    fn captured_points_get_the_distinct_style() {
        let json = r#"{"points":[{"x":0,"y":6,"w":1},{"x":4,"y":4,"w":2},{"x":-10,"y":-10,"w":1}],
                       "length":5,"k":5}"#;
        let inst = parse_instance(json).unwrap();
        let solution = solve(&inst);
        let partition = captation_partition(&inst, &solution.segment, 1e-9);
        let svg = render_svg(&inst, &solution, &partition, 1e-9);
        let captured = svg.matches(r#"class="demand-captured""#).count();
        let direct = svg.matches(r#"class="demand-direct""#).count();
        assert_eq!(
            captured,
            partition.interior.len() + partition.boundary.len()
        );
        assert_eq!(direct, partition.outside.len());
        assert!(svg.contains("captation-boundary"));
    }
}
