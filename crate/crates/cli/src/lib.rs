//! Definition-file front end for the `omegaclone` workbench.

pub mod error;
pub mod report;
pub mod spec;
pub mod task;

pub use error::CliError;
pub use report::{emit_report, Format, Report, Status, Witness};
pub use spec::{parse_spec, WorkbenchSpec};
pub use task::{run_task, TaskKind};

/// Runs every task, or those whose label is `only`, in file order.
pub fn run_all(spec: &WorkbenchSpec, only: Option<&str>) -> Vec<Report> {
    spec.tasks
        .iter()
        .enumerate()
        .filter(|(_, t)| only.map_or(true, |n| t.label() == n))
        .map(|(i, t)| run_task(spec, i, t))
        .collect()
}
