use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    /// The profile mode and the requested encoding/operation do not fit together.
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),

    /// No schedule satisfies the time windows / precedence constraints.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("instance has {n} tasks, above the limit of {limit}")]
    SizeLimitExceeded { n: usize, limit: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid precedence graph: {0}")]
    InvalidGraph(String),

    #[error("invalid time windows: {0}")]
    InvalidWindows(String),

    #[error("size mismatch: expected {expected} tasks, found {found}")]
    SizeMismatch { expected: usize, found: usize },
}

/// A parse failure, with the 1-based line it occurred on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> Self {
        Self { line, kind }
    }

    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Self::new(line, ParseErrorKind::Syntax(message.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("task {0} appears more than once")]
    DuplicateTask(usize),
    #[error("task {task} is outside 1..={n}")]
    TaskOutOfRange { task: usize, n: usize },
    #[error("window ({release},{due}) of task {task} violates 0 <= r < d <= {n}")]
    BadWindow {
        task: usize,
        release: usize,
        due: usize,
        n: usize,
    },
    #[error("no schedule fits every window of this preference")]
    InfeasibleWindows,
    #[error("preference does not match the declared `profile {0}` mode")]
    MixedModes(&'static str),
    #[error("expected {expected} tasks, found {found}")]
    TaskCountMismatch { expected: usize, found: usize },
    #[error("multiplicities sum to {found}, but `voters {declared}` was declared")]
    VoterCountMismatch { declared: u64, found: u64 },
    #[error("precedence graph contains a cycle")]
    Cycle,
}
