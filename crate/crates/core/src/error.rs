use thiserror::Error;

use crate::exactnum::GaussRational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("pole at t = {at}")]
    Pole { at: Box<GaussRational> },

    #[error("pole at t = 0: the limit is not finite")]
    PoleAtZero,

    /// A coefficient rule of a family has a pole at the specialization point.
    /// `index` is `None` when the rule is symbolic in `p` and the pole is
    /// independent of the index.
    #[error("pole at t = {at} in rule `{rule}`{}", index.map(|p| format!(" at index {p}")).unwrap_or_default())]
    SpecializationPole {
        rule: String,
        index: Option<i64>,
        at: Box<GaussRational>,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unclassified support: {0}")]
    UnclassifiedSupport(String),

    #[error("inconsistent module: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
