use thiserror::Error;

use crate::arith::Boundary;
use crate::shift::ForbiddenBlock;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("unsupported radicand {0}")]
    UnsupportedRadicand(String),

    #[error("value is not exact (certified enclosures have no canonical key)")]
    NotExact,

    #[error("invalid precision {0} bits (minimum is 16)")]
    InvalidPrecision(u32),

    #[error("precision unavailable: enclosure could not be refined to {bits} bits")]
    PrecisionUnavailable { bits: u32 },

    #[error("{}", boundary_message(*step, *boundary, *bits))]
    BoundaryUnresolvable {
        step: Option<usize>,
        boundary: Boundary,
        bits: u32,
    },

    #[error("step budget of {budget} exhausted (last state {last})")]
    MaxStepsExceeded { budget: usize, last: String },

    #[error("continued-fraction term {index} needs more than {budget} steps")]
    TermBudgetExceeded { index: usize, budget: usize },

    #[error("inadmissible itinerary: block {block} at position {position}")]
    Inadmissible { position: usize, block: ForbiddenBlock },

    #[error("inconsistent continued fraction: its itinerary contains block {block} at position {position}")]
    InconsistentCf { position: usize, block: ForbiddenBlock },

    #[error("itinerary ends in an unbounded run of a single symbol")]
    UnboundedRun,

    #[error("itinerary has no symbols to shift")]
    EmptyItinerary,

    #[error("invalid itinerary: {0}")]
    InvalidItinerary(String),

    #[error("invalid continued fraction: {0}")]
    InvalidCf(String),

    #[error("convergent {depth} has zero denominator")]
    Pole { depth: usize },

    #[error("period matrix is not hyperbolic")]
    NotHyperbolic,

    #[error("no root of the period equation re-encodes to the periodic tail")]
    InconsistentPeriodicCf,

    #[error("expected an irrational quadratic surd")]
    NotQuadraticIrrational,

    #[error("parse error at offset {offset} near `{token}`: {reason}")]
    Parse {
        offset: usize,
        token: String,
        reason: String,
    },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("nothing to plot: orbit has fewer than two finite points")]
    NothingToPlot,
}

fn boundary_message(step: Option<usize>, boundary: Boundary, bits: u32) -> String {
    match step {
        Some(s) => format!(
            "cannot certify the symbol at step {s}: enclosure still straddles {boundary} at {bits} bits"
        ),
        None => format!("cannot certify the symbol: enclosure still straddles {boundary} at {bits} bits"),
    }
}

impl Error {
    pub(crate) fn parse(offset: usize, token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            token: token.into(),
            reason: reason.into(),
        }
    }
}
