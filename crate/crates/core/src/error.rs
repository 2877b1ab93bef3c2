use thiserror::Error;

use crate::diagram::JacobiGraph;

#[derive(Debug, Error)]
pub enum LmoError {
    #[error("malformed graph: {0}")]
    Structural(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("rewrite budget of {budget} steps exceeded")]
    BudgetExceeded { budget: usize },

    /// A rewrite output did not have strictly fewer I-configurations than its input.
    #[error("I-configuration count did not decrease: {input_count} -> {output_count}")]
    PotentialViolation {
        input: Box<JacobiGraph>,
        output: Box<JacobiGraph>,
        input_count: usize,
        output_count: usize,
    },
}

pub type Result<T> = std::result::Result<T, LmoError>;
