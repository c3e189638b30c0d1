//! Error types shared across the engine.

use thiserror::Error;

/// Errors raised by the symbolic kernel and the catalog layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Two expressions referencing different symbol tables were combined.
    #[error("symbol table mismatch: {0}")]
    TableMismatch(String),
    /// A symbol name was not found in the active table.
    #[error("unknown symbol: {0}")]
    UnknownSymbol(String),
    /// Division by the zero polynomial.
    #[error("division by zero polynomial")]
    DivisionByZero,
    /// A substitution produced an identically zero denominator.
    #[error("substitution produced a zero denominator in {0}")]
    DivisionByZeroExpr(String),
    /// Parse error in the expression grammar.
    #[error("parse error: {0}")]
    Parse(String),
    /// Wrong number of parameters handed to a scalar Hamiltonian builder.
    #[error("arity error: {0}")]
    Arity(String),
    /// Requested generator does not exist in the catalog.
    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
    /// Requested chart does not exist in the catalog.
    #[error("unknown chart: {0}")]
    UnknownChart(String),
    /// Requested divisor is not in the invariant-divisor table.
    #[error("unknown divisor: {0}")]
    UnknownDivisor(String),
    /// First-integral check called on a non-autonomous system.
    #[error("system {0} is not autonomous")]
    NotAutonomous(String),
    /// Poisson-series check on a generator the catalog marks inapplicable.
    #[error("poisson series not applicable to generator {0}")]
    NotApplicable(String),
    /// The confluence family has a pole at eps = 0.
    #[error("degeneration singular at eps = 0: {0}")]
    DegenerationSingular(String),
    /// A numeric trajectory came too close to a singular divisor.
    #[error("singularity approached: |{divisor}| = {value:e} at t = {t}")]
    SingularityApproached {
        divisor: String,
        value: f64,
        t: f64,
    },
    /// A numeric trajectory overflowed or produced NaN.
    #[error("non-finite value encountered at t = {0}")]
    NonFinite(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
