//! Library surface of the `rapidline` command: instance parsing, report
//! building and SVG rendering, kept separate from the binary so the
//! integration tests can exercise them directly.

pub mod format;
pub mod svg;
