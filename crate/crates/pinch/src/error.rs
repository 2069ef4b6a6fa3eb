use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {name} = {value} outside domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "rotation angle {0} has a period <= 1e6 within 1e-12; an irrational angle is required"
    )]
    RationalAngle(f64),

    #[error("blow-up orbit passes within {dist:.3e} of the basepoint 0; try x0 = {suggestion}")]
    OrbitHitsCut { dist: f64, suggestion: f64 },

    #[error("map oracle evaluation failed: {0}")]
    Oracle(String),

    #[error(
        "pinch scale {scale} pushes the band outside the fibre interval; try c <= {max_scale}"
    )]
    PinchScale { scale: f64, max_scale: f64 },

    #[error("pinch functions coincide away from the pinch point (phi = psi at theta = {0})")]
    PinchDegenerate(f64),

    #[error("base point is periodic within horizon {horizon} (return distance {dist:.3e} at n = {period})")]
    PeriodicBasePoint {
        period: u64,
        horizon: u64,
        dist: f64,
    },

    #[error("fibre maps do not contract the annulus into its interior (margin {0:.3e})")]
    NoContraction(f64),

    #[error("gluing mismatch across the surgery boundary: max residual {0:.3e}")]
    GluingMismatch(f64),

    #[error(
        "rotation vector ({omega}, {rho}) admits an integer relation with coefficients <= 1000"
    )]
    RationallyDependent { omega: f64, rho: f64 },

    #[error("extrapolation did not converge; partial estimates: {0:?}")]
    NonConvergent(Vec<f64>),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
