use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: unknown name `{name}`")]
    UnknownName { line: usize, name: String },

    #[error("line {line}: domain mismatch: {msg}")]
    DomainMismatch { line: usize, msg: String },

    #[error("task {task}: would enumerate about {estimate} candidates, above the limit of {limit}")]
    CapExceeded { task: String, estimate: String, limit: u128 },

    #[error("task {task}: {msg}")]
    Task { task: String, msg: String },
}
