use thiserror::Error;

use crate::evolution::Trajectory;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Mismatched grids, sizes or representations.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// Not enough data for an estimator to be meaningful.
    #[error("estimation error: {0}")]
    Estimation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A non-finite value appeared during time stepping. `partial` holds every
    /// checkpoint emitted before the failure.
    #[error("blow-up detected at t = {time}: non-finite field value")]
    BlowUp { time: f64, partial: Box<Trajectory> },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn estimation(msg: impl Into<String>) -> Self {
        Error::Estimation(msg.into())
    }
}
