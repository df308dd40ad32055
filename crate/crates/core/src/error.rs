use thiserror::Error;

/// Errors raised by the walk engines and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains a non-finite entry")]
    NotFinite,

    #[error("Kraus pair is not normalized: |B*B + C*C - I|_max = {deviation:e}")]
    Normalization { deviation: f64 },

    #[error("matrix is not Hermitian: |rho - rho*|_max = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("density matrix trace {trace} differs from 1")]
    TraceNotOne { trace: f64 },

    #[error("distribution mass {total} differs from 1 (accumulated drift)")]
    Sum { total: f64 },

    #[error("negative probability {value:e} at site {site}")]
    NegativeMass { site: i64, value: f64 },

    #[error("Fourier inversion left imaginary residue {imag:e} at site {site}")]
    Residue { site: i64, imag: f64 },

    #[error("walk support of {sites} sites exceeds the configured limit {limit}")]
    SiteLimit { sites: usize, limit: usize },

    #[error("both jump branches are degenerate (p_B = {p_b:e}, p_C = {p_c:e})")]
    DegenerateJump { p_b: f64, p_c: f64 },

    #[error("channel has no invariant state within tolerance (numerical failure)")]
    NoInvariantState,

    #[error("channel has a {dim}-dimensional space of invariant states")]
    NonUniqueInvariant { dim: usize },

    #[error("state is not invariant under the channel: residual {residual:e}")]
    NotInvariant { residual: f64 },

    #[error("support of the invariant state is not left invariant by B and C")]
    SupportNotInvariant,

    #[error("Poisson equation is not solvable: {0}")]
    Solvability(String),

    #[error("|f| has no isolated maximum on the sampling grid")]
    DegenerateMax,

    #[error("invalid example parameters: {0}")]
    Parameter(String),

    #[error("no closed form available for {0}")]
    UnsupportedExample(String),

    #[error("n = {n} exceeds the enumeration limit {max}")]
    Size { n: usize, max: usize },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of a numerical guard, as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Sum { .. }
                | Error::NegativeMass { .. }
                | Error::Residue { .. }
                | Error::DegenerateJump { .. }
                | Error::NoInvariantState
                | Error::NonUniqueInvariant { .. }
                | Error::NotInvariant { .. }
                | Error::SupportNotInvariant
                | Error::Solvability(_)
                | Error::DegenerateMax
                | Error::Consistency(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
