use serde::Serialize;

/// Everything that ends a run without an artifact, mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or unwritable file.
    Io(String),
    /// Input that does not parse or does not fit the expected shape.
    Schema { message: String, line: Option<usize>, column: Option<usize> },
    Solver(String),
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    column: Option<usize>,
}

impl Failure {
    pub fn schema(message: impl Into<String>) -> Self {
        Failure::Schema { message: message.into(), line: None, column: None }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(_) | Failure::Schema { .. } => 2,
            Failure::Solver(_) => 3,
        }
    }

    pub fn to_json(&self) -> String {
        let (error, message, line, column) = match self {
            Failure::Io(m) => ("io", m.as_str(), None, None),
            Failure::Schema { message, line, column } => ("schema", message.as_str(), *line, *column),
            Failure::Solver(m) => ("solver", m.as_str(), None, None),
        };
        serde_json::to_string(&ErrorJson { error, message, line, column }).expect("plain struct")
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Schema { message: e.to_string(), line: Some(e.line()), column: Some(e.column()) }
    }
}

impl From<spectre::Error> for Failure {
    fn from(e: spectre::Error) -> Self {
        use spectre::Error as E;
        match e {
            E::Infeasible | E::Unbounded | E::MaxIterExceeded(_) | E::SolverFailure(_) => Failure::Solver(e.to_string()),
            other => Failure::schema(other.to_string()),
        }
    }
}
