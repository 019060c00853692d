//! Instance file schema and the solve report.
//!
//! Instances are single JSON objects with `points` (list of `{x, y, w}`),
//! `length` and `k`. Reports serialize with serde_json's shortest
//! round-trip float encoding, so every double survives a parse/print cycle
//! losslessly.

use rapidline_core::{
    captation_partition, validate_instance, DemandPoint, Instance, OracleResult, RawInstance,
    Segment, Solution,
};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointRecord {
    pub x: f64,
    pub y: f64,
    pub w: f64,
}

/// On-disk instance schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub points: Vec<PointRecord>,
    pub length: f64,
    pub k: f64,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance) -> Self {
        InstanceFile {
            points: instance
                .points()
                .iter()
                .map(|p| PointRecord {
                    x: p.x,
                    y: p.y,
                    w: p.w,
                })
                .collect(),
            length: instance.length(),
            k: instance.speedup(),
        }
    }
}

/// Errors that map to exit code 2: unreadable, unparsable or invalid input.
#[derive(Debug)]
pub enum LoadError {
    Io(String, std::io::Error),
    Parse(String, serde_json::Error),
    Validation(rapidline_core::ValidationError),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io(path, err) => write!(f, "{path}: {err}"),
            LoadError::Parse(path, err) => write!(f, "{path}: {err}"),
            LoadError::Validation(err) => write!(f, "{err}"),
        }
    }
}

impl std::error::Error for LoadError {}

pub fn load_instance(path: &Path) -> Result<Instance, LoadError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(display.clone(), e))?;
    parse_instance(&text).map_err(|e| match e {
        LoadError::Parse(_, err) => LoadError::Parse(display.clone(), err),
        other => other,
    })
}

pub fn parse_instance(text: &str) -> Result<Instance, LoadError> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| LoadError::Parse(String::new(), e))?;
    validate_instance(RawInstance {
        points: file
            .points
            .iter()
            .map(|p| DemandPoint::new(p.x, p.y, p.w))
            .collect(),
        length: file.length,
        speedup: file.k,
    })
    .map_err(LoadError::Validation)
}

/// Oracle section of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSection {
    pub objective: f64,
    pub error_bound: f64,
    pub grid_step: f64,
    pub angle_step: f64,
    /// True when the solver objective sits inside
    /// `[oracle − error_bound − 1e−6, oracle + 1e−9]`-style agreement: the
    /// oracle never beats the solver beyond rounding and never trails it
    /// beyond its own resolution bound.
    pub agrees: bool,
}

/// The printed solve result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub facility: [f64; 2],
    pub entrance: [f64; 2],
    pub objective: f64,
    pub captured: Vec<usize>,
    pub anchor: [f64; 2],
    pub orientation: String,
    pub condition: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleSection>,
}

pub fn oracle_section(solution: &Solution, oracle: &OracleResult) -> OracleSection {
    let agrees = oracle.best_objective >= solution.objective - 1e-6
        && solution.objective <= oracle.best_objective + oracle.error_bound;
    OracleSection {
        objective: oracle.best_objective,
        error_bound: oracle.error_bound,
        grid_step: oracle.grid_step,
        angle_step: oracle.angle_step,
        agrees,
    }
}

pub fn build_report(
    instance: &Instance,
    solution: &Solution,
    oracle: Option<&OracleResult>,
    tol: f64,
) -> SolveReport {
    let captured = captation_partition(instance, &solution.segment, tol).captured();
    SolveReport {
        facility: [solution.segment.facility.x, solution.segment.facility.y],
        entrance: [solution.segment.entrance.x, solution.segment.entrance.y],
        objective: solution.objective,
        captured,
        anchor: [solution.anchor.x, solution.anchor.y],
        orientation: solution.orientation.label().to_string(),
        condition: solution.condition.label().to_string(),
        oracle: oracle.map(|o| oracle_section(solution, o)),
    }
}

pub fn render_report(report: &SolveReport, pretty: bool) -> String {
    let mut text = if pretty {
        serde_json::to_string_pretty(report).expect("report serializes")
    } else {
        serde_json::to_string(report).expect("report serializes")
    };
    text.push('\n');
    text
}

/// The segment printed in a report.
pub fn report_segment(report: &SolveReport) -> Segment {
    Segment::new(
        rapidline_core::Point::new(report.entrance[0], report.entrance[1]),
        rapidline_core::Point::new(report.facility[0], report.facility[1]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rapidline_core::{solve, Point};

    fn sample_instance() -> Instance {
        parse_instance(
            r#"{"points":[{"x":0,"y":6,"w":1},{"x":4,"y":4,"w":2},{"x":-10,"y":-10,"w":1}],
                "length":5,"k":5}"#,
        )
        .expect("valid sample")
    }

    #[test]
    fn parses_and_validates() {
        let inst = sample_instance();
        assert_eq!(inst.points().len(), 3);
        assert_eq!(inst.length(), 5.0);
        assert_eq!(inst.speedup(), 5.0);
    }

    #[test]
    fn bad_speedup_names_the_field() {
        let err = parse_instance(r#"{"points":[{"x":0,"y":0,"w":1}],"length":1,"k":0.5}"#)
            .expect_err("must reject");
        let message = err.to_string();
        assert!(message.contains("speedup"), "message was: {message}");
    }

    #[test]
    fn report_round_trips_losslessly() {
        let inst = sample_instance();
        let solution = solve(&inst);
        let report = build_report(&inst, &solution, None, 1e-9);
        let text = render_report(&report, false);
        let back: SolveReport = serde_json::from_str(&text).expect("parses back");
        assert_eq!(back, report);
        // Bit-exact floats after the round trip.
        assert_eq!(back.objective.to_bits(), report.objective.to_bits());
        assert_eq!(back.facility[0].to_bits(), report.facility[0].to_bits());
    }

    #[test]
    fn report_objective_matches_fresh_evaluation() {
        let inst = sample_instance();
        let solution = solve(&inst);
        let report = build_report(&inst, &solution, None, 1e-9);
        let fresh = rapidline_core::evaluate(&inst, &report_segment(&report));
        assert!((fresh - report.objective).abs() <= 1e-9);
    }

    #[test]
    fn instance_file_round_trip() {
        let inst = sample_instance();
        let text = serde_json::to_string(&InstanceFile::from_instance(&inst)).unwrap();
        let back = parse_instance(&text).unwrap();
        assert_eq!(back.points(), inst.points());
        assert_eq!(back.length(), inst.length());
        let p: Point = back.points()[0].point();
        assert_eq!(p, Point::new(0.0, 6.0));
    }
}
