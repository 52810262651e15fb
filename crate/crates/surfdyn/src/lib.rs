//! Map files, analysis reports, the built-in gallery and the `surfdyn`
//! command line, on top of [`surfdyn_core`].

pub mod cli;
pub mod gallery;
pub mod mapio;
pub mod report;

pub use mapio::{load_map, Components, MapFile, MapIoError};
pub use report::{emit_report, ReportFormat, ReportJson};
