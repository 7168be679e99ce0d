use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not a cochain complex: {0}")]
    NotComplex(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("DGLA axiom violated: {0}")]
    Axiom(String),
    #[error("invalid morphism: {0}")]
    Morphism(String),
    #[error("vector is not closed: {0}")]
    NotClosed(String),
    #[error("field error: {0}")]
    Field(String),
    #[error("characteristic {p} too small: need every integer up to {needed} invertible")]
    Characteristic { p: u64, needed: usize },
    #[error("not a Maurer-Cartan element at order {order}")]
    NotMaurerCartan { order: usize },
    #[error("square does not commute: {0}")]
    NotCommuting(String),
    #[error("enumeration guard exceeded: {0}")]
    Guard(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}
