use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown process family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("beta has length {got}, expected m = {expected}")]
    BetaLength { expected: usize, got: usize },
    #[error("boundary conditions are not in normalized form: {0}")]
    NotNormalized(String),
    #[error("irregular boundary conditions (theta_1 = 0)")]
    Irregular,
    #[error("singular theta extraction system")]
    SingularExtraction,
    #[error("root scan reached the safety cap at zeta = {cap} with {found} of {wanted} roots")]
    BracketExhaustion { found: usize, wanted: usize, cap: f64 },
    #[error("kernel matrix is not symmetric")]
    NonSymmetric,
    #[error("divergence alarm: {0}")]
    Divergence(String),
    #[error("kappa = {kappa} >= 2 ell^2 = {bound}: the general law does not apply")]
    KappaTooLarge { kappa: usize, bound: usize },
    #[error("no closed form for {0}")]
    NoClosedForm(String),
    #[error("mismatched laws: {0}")]
    LawMismatch(String),
    #[error("junction check failed: relative jump {0:.3e}")]
    Junction(f64),
    #[error("saddlepoint search failed: {0}")]
    Saddle(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("{0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of numerical guards, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::BracketExhaustion { .. }
                | Error::Divergence(_)
                | Error::Junction(_)
                | Error::Saddle(_)
                | Error::PrecisionLoss(_)
                | Error::Numerical(_)
                | Error::SingularExtraction
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
