use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed input: construction data, distribution parameters, ranges.
    InvalidInput(String),
    /// Explicit word expansion would exceed the symbol budget.
    BudgetExceeded {
        level: usize,
        height: String,
        budget: u64,
    },
    /// Construction data has no stage `level` (finite data without a
    /// repeating suffix).
    StagesExhausted { level: usize },
    /// The sampling window did not embed inside any tower within `cap` levels.
    DepthCap { cap: usize, radius: u64 },
    /// A generalized inverse search ran past its horizon.
    Horizon { target: f64, horizon: u64 },
    /// A drawn lifetime did not fit into 64 bits.
    SampleOverflow,
    /// A finite-support sampler would truncate more than the allowed tail mass.
    SamplingHorizon { truncated_mass: f64, epsilon: f64 },
    /// A walk sample does not reach `±needed`.
    Coverage {
        needed: u64,
        reached_plus: i128,
        reached_minus: i128,
        j: usize,
        suggested_j: usize,
    },
    /// A scaling sequence has no value at `n`.
    OutOfRange { n: u64 },
    /// A module invariant was violated.
    Invariant(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::BudgetExceeded {
                level,
                height,
                budget,
            } => write!(
                f,
                "expanding B_{level} needs q_{level} = {height} symbols, budget is {budget}"
            ),
            Error::StagesExhausted { level } => {
                write!(
                    f,
                    "construction data has no stage {level} and no repeating suffix"
                )
            }
            Error::DepthCap { cap, radius } => write!(
                f,
                "window of radius {radius} did not embed within {cap} levels"
            ),
            Error::Horizon { target, horizon } => write!(
                f,
                "generalized inverse at {target} exceeds search horizon {horizon}"
            ),
            Error::SampleOverflow => write!(f, "sampled lifetime does not fit in u64"),
            Error::SamplingHorizon {
                truncated_mass,
                epsilon,
            } => write!(
                f,
                "sampler truncation drops tail mass {truncated_mass:e} > {epsilon:e}"
            ),
            Error::Coverage {
                needed,
                reached_plus,
                reached_minus,
                j,
                suggested_j,
            } => write!(
                f,
                "walk with J = {j} reaches [{reached_minus}, {reached_plus}], needs ±{needed}; \
                 retry with J >= {suggested_j}"
            ),
            Error::OutOfRange { n } => write!(f, "scaling sequence undefined at n = {n}"),
            Error::Invariant(msg) => write!(f, "invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
