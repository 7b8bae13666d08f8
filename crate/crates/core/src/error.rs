use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// Variants split into two families: input validation (the caller passed
/// something outside the admitted domain) and numerical failures (the
/// computation itself could not be certified). [`Error::is_numerical`]
/// tells them apart; the CLI maps the two families to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("bandwidth must be finite and > 0, got {0}")]
    InvalidBandwidth(f64),

    #[error("parameter `{name}` = {value} violates constraint {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("index {n} out of range (n_max = {n_max})")]
    IndexOutOfRange { n: usize, n_max: usize },

    #[error("point {0} lies outside [-1, 1]")]
    PointOutsideInterval(f64),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error(
        "mode {n} is beyond the certified range n_max = {n_max} (lambda floor {floor:e})"
    )]
    BeyondLambdaFloor { n: usize, n_max: usize, floor: f64 },

    #[error("eigenfunction {n} degenerate at its sup node: |psi(x*)| = {value:e}")]
    DegenerateEigenfunction { n: usize, value: f64 },

    #[error("tridiagonal eigensolver did not converge")]
    EigenSolverFailed,

    #[error("regularization index n* = {n_star} exceeds certified n_max = {n_max}")]
    ClampedTruncation { n_star: usize, n_max: usize },

    #[error("at least 8 angles required, got {0}")]
    InsufficientAngles(usize),

    #[error("grid resolution {0} is not a power of two")]
    NonPowerOfTwo(usize),

    #[error("dilation by sigma = {0} is not representable on the grid")]
    DilateOutsideExtent(f64),

    #[error("bandwidth mismatch: data has c = {data}, basis has c = {basis}")]
    BandwidthMismatch { data: f64, basis: f64 },

    #[error("dimension mismatch: expected d = {expected}, found d = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::BeyondLambdaFloor { .. }
                | Error::DegenerateEigenfunction { .. }
                | Error::EigenSolverFailed
                | Error::ClampedTruncation { .. }
        )
    }

    /// Short machine-readable tag used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidBandwidth(_) => "invalid_bandwidth",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::PointOutsideInterval(_) => "point_outside_interval",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::BeyondLambdaFloor { .. } => "beyond_lambda_floor",
            Error::DegenerateEigenfunction { .. } => "degenerate_eigenfunction",
            Error::EigenSolverFailed => "eigensolver_failed",
            Error::ClampedTruncation { .. } => "clamped_truncation",
            Error::InsufficientAngles(_) => "insufficient_angles",
            Error::NonPowerOfTwo(_) => "non_power_of_two",
            Error::DilateOutsideExtent(_) => "dilate_outside_extent",
            Error::BandwidthMismatch { .. } => "bandwidth_mismatch",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Invalid(_) => "invalid_input",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            constraint: "(0,1)",
        })
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            constraint: "> 0",
        })
    }
}
