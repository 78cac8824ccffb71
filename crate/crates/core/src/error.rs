use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("polyanalytic degree q must be at least 1")]
    ZeroDegree,

    #[error("monomial z̄^{k} z^{j} needs k < q = {q}")]
    ComponentOutOfRange { k: usize, j: usize, q: usize },

    #[error("dilation factor must lie in (0, 1], got {0}")]
    InvalidDilation(f64),

    #[error("point {re} + {im}i is not inside the {domain}")]
    OutsideDomain {
        re: f64,
        im: f64,
        domain: &'static str,
    },

    #[error("angle {theta} is outside [0, {theta_max})")]
    AngleOutOfRange { theta: f64, theta_max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integrand is not finite at node {index} (z = {re} + {im}i)")]
    NonFinite { index: usize, re: f64, im: f64 },

    #[error("besov requires p >= 2, got {0}")]
    BesovExponent(f64),

    #[error("half-plane with beta = 0 needs an explicit truncation radius")]
    TruncationRequired,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate monomial (k = {k}, j = {j})")]
    DuplicateMonomial { line: usize, k: usize, j: usize },
}
