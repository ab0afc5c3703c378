use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A dispersion model with a pole at ζ = 0 was asked for its value there.
    #[error("{model} response diverges at zeta = 0; use the static limit instead")]
    StaticLimit { model: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("invalid stack: {0}")]
    InvalidStack(String),

    #[error("vanishing denominator in {0}")]
    Singular(&'static str),

    #[error("unphysical mode weight: |r+ r- exp(-2 kappa a)| = {product} >= 1")]
    Unphysical { product: f64 },

    #[error(
        "quadrature did not converge within {subdivisions} subdivisions \
         (estimate {estimate:e}, error {abs_error:e})"
    )]
    NotConverged {
        estimate: f64,
        abs_error: f64,
        subdivisions: usize,
    },

    #[error(
        "Matsubara sum not converged after {terms} terms \
         (partial sum {partial:e} Pa, last term {last_term:e} Pa)"
    )]
    MatsubaraTruncation {
        partial: f64,
        last_term: f64,
        terms: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}
