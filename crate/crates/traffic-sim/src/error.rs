use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    /// A requested configuration is outside the supported range.
    #[error("configuration error: {0}")]
    Config(String),
    /// A caller violated an operation contract (bad id, wrong system kind, ...).
    #[error("contract violation: {0}")]
    Contract(String),
    /// Car-following math was asked to operate on a non-positive gap.
    #[error("non-positive gap {0}; collision should have been detected earlier")]
    NonPositiveGap(f64),
}

pub type Result<T> = std::result::Result<T, SimError>;
