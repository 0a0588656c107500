use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The working precision could not certify a comparison or a floor.
    /// Callers are expected to retry at a higher precision.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("argument outside the domain of {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("division by an enclosure that contains zero")]
    DivisionByZero,

    #[error("nearest integer is ambiguous: enclosure reaches a half-integer")]
    AmbiguousMidpoint,

    #[error("invalid concatenation pattern: {0}")]
    InvalidPattern(String),

    #[error("{p}/{q} is not a reduced fraction with positive denominator")]
    NonReduced { p: BigInt, q: BigInt },

    #[error("continued fraction has no convergent with denominator above {0}")]
    InsufficientExpansion(BigInt),

    #[error("epsilon not certified positive on any of {tried} convergents")]
    EpsilonNotPositive { tried: usize },

    #[error("lemma hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("published constant {name} = {published} does not dominate certified value {computed}")]
    EnvelopeViolated {
        name: &'static str,
        published: String,
        computed: String,
    },

    #[error("{stage} failed on {instance}: {source}")]
    Stage {
        stage: &'static str,
        instance: String,
        source: Box<Error>,
    },
}

impl Error {
    /// True when raising the working precision may make the failure go away.
    pub fn wants_more_precision(&self) -> bool {
        match self {
            Error::PrecisionExhausted(_) | Error::AmbiguousMidpoint => true,
            Error::Stage { source, .. } => source.wants_more_precision(),
            _ => false,
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str, instance: impl Into<String>) -> Error {
        Error::Stage {
            stage,
            instance: instance.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
