use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or parameters. Exit status 1.
    Usage(String),
    /// A numerical identity failed during the run. Exit status 2.
    Invariant(String),
    /// Reading or writing files. Exit status 1.
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 2,
            CliError::Usage(_) | CliError::Io(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Invariant(_) => "invariant",
            CliError::Io(_) => "io",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invariant(m) | CliError::Io(m) => m,
        }
    }

    /// Machine-readable record written to stderr on failure.
    pub fn to_json(&self, command: Option<&str>) -> serde_json::Value {
        serde_json::json!({
            "schema_version": 1,
            "command": command,
            "error": {
                "kind": self.kind(),
                "message": self.message(),
                "exit_code": self.exit_code(),
            }
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<qca_core::Error> for CliError {
    fn from(e: qca_core::Error) -> Self {
        if e.is_invariant_violation() {
            CliError::Invariant(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
