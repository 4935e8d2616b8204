use thiserror::Error;

/// Errors raised by the kinematics and synthesis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector norm {0:e} is too small to normalize")]
    ZeroVector(f64),
    #[error("geodesic is undefined between parallel or antiparallel points")]
    DegenerateGeodesic,
    #[error("adjacent joints x{0} and x{1} are coincident or antipodal")]
    DegenerateMechanism(usize, usize),
    #[error("linkage cannot be assembled at input angle {theta} (discriminant {discriminant:e})")]
    InfeasibleConfiguration { theta: f64, discriminant: f64 },
    #[error("input-output equation is singular at input angle {0}")]
    SingularConfiguration(f64),
    #[error("coupler endpoints are parallel at input angle {0}")]
    DegenerateCoupler(f64),
    #[error("root search did not converge near {0}")]
    NoConvergence(f64),
    #[error("neither branch reproduces the assembly configuration")]
    NoValidBranch,
    #[error("design vector has {found} entries, expected {expected}")]
    DesignLength { expected: usize, found: usize },
    #[error("invalid target path: {0}")]
    InvalidPath(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
