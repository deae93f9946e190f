use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("output index {index} out of range (function has {count} outputs)")]
    OutputIndex { index: usize, count: usize },
    #[error("variable index {index} out of range (function has {count} inputs)")]
    VariableIndex { index: usize, count: usize },
    #[error("input count must be between 1 and {max}, got {got}")]
    InputCount { got: usize, max: usize },
    #[error("a function needs at least one output")]
    NoOutputs,
    #[error("column {column} has {got} rows, expected {expected}")]
    ColumnLength {
        column: usize,
        got: usize,
        expected: usize,
    },
    #[error("probabilities must lie in [0, 1] and sum to 1 (sum = {sum})")]
    InvalidDistribution { sum: f64 },

    #[error("invalid gate {name}: {reason}")]
    InvalidGate { name: String, reason: String },
    #[error("gate library is empty")]
    EmptyLibrary,
    #[error("duplicate gate name {0} in library")]
    DuplicateGate(String),
    #[error("unknown gate {0}")]
    UnknownGate(String),
    #[error("gate input {index} out of range for {gate} (arity {arity})")]
    GateInput {
        gate: String,
        index: usize,
        arity: usize,
    },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("cell (level {level}, position {position}) lies outside the geometry")]
    CellOutOfBounds { level: usize, position: usize },
    #[error("no candidates to rank")]
    NoCandidates,

    #[error("target has {target_inputs} inputs / {target_outputs} outputs but the geometry expects {geom_inputs} / {geom_outputs}")]
    ShapeMismatch {
        target_inputs: usize,
        target_outputs: usize,
        geom_inputs: usize,
        geom_outputs: usize,
    },
    #[error("genotypes differ in geometry or library")]
    IncompatibleParents,
    #[error("cannot shrink a geometry below one level")]
    CannotShrink,
    #[error("invalid search parameter: {0}")]
    InvalidParameter(String),
    #[error("target function is constant, vitality is undefined")]
    ZeroEntropy,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("incomplete specification unsupported: {0}")]
    Incomplete(String),
    #[error("netlist: {0}")]
    Netlist(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
