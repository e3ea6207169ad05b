use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A formula's denominator vanished for the given inputs.
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("compressor `{command}` failed: {message}")]
    Compressor { command: String, message: String },
    #[error("invalid compressor configuration: {0}")]
    InvalidCompressor(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("zero denominator C(yy')-C(y) for pair ({0}, {1})")]
    Singularity(String, String),
    #[error("enumeration over 2^{requested} strings exceeds the budget of 2^{max}")]
    BudgetExceeded { requested: usize, max: usize },
    #[error("unknown label `{label}`; available: {}", available.join(", "))]
    UnknownLabel { label: String, available: Vec<String> },
    #[error("leaf sets differ: only in first [{}], only in second [{}]", only_first.join(", "), only_second.join(", "))]
    LeafSetMismatch {
        only_first: Vec<String>,
        only_second: Vec<String>,
    },
    #[error("invalid spaced template `{0}`: {1}")]
    InvalidTemplate(String, &'static str),
    #[error("newick parse error at byte {pos}: {message}")]
    Newick { pos: usize, message: String },
}
