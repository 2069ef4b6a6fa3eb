//! Blow-up extensions of quasiperiodically forced increasing interval maps.
//!
//! Starting from a forced system f(theta, x) = (theta + omega, f_theta(x))
//! with a continuous invariant curve gamma, a family of fibre measures
//! mu_theta (atoms on the orbit of a pinch fibre theta*, uniform bands
//! elsewhere, plus a Lebesgue floor) defines fibrewise quantile maps h_theta.
//! The extension fhat = h^-1 o f o h blows countably many curve points up
//! into vertical segments; the preimage of the curve is pinched and carries
//! the interesting minimal dynamics.
//!
//! [`ForcedIntervalSystem`] is the input data, [`PinchFunctions`] the band
//! profile, [`BlownUpSystem`] the extension together with its certification
//! probes, and [`PinchedTrace`] the circle parametrization of the pinched set.

mod blowup;
mod pinch_fns;
mod trace;

pub use blowup::{
    AttractorEnvelope, BlownUpSystem, EnvelopeReport, EnvelopeVerdict, JumpEstimate, Segment,
};
pub use pinch_fns::{PinchFunctions, PinchMode};
pub use trace::PinchedTrace;

use std::sync::Arc;

use crate::circle::{self, frac};
use crate::error::{Error, Result};

/// Fibres never get blown up unless the base point matches the pinch orbit
/// to within this distance; every other fibre uses the non-atomic formula.
pub const EXACT_FIBRE_TOL: f64 = 1e-13;

/// Default fibre contraction rate.
pub const DEFAULT_LAMBDA: f64 = 0.5;

/// Default pinch fibre.
pub const DEFAULT_THETA_STAR: f64 = 0.25;

pub(crate) type Curve = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub(crate) type FibreMap = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A quasiperiodically forced increasing interval map on T^1 x \[0,1\] with a
/// distinguished continuous invariant curve.
#[derive(Clone)]
pub struct ForcedIntervalSystem {
    omega: f64,
    curve: Curve,
    fibre_fwd: FibreMap,
    fibre_inv: FibreMap,
}

impl ForcedIntervalSystem {
    pub fn new(omega: f64, curve: Curve, fibre_fwd: FibreMap, fibre_inv: FibreMap) -> Result<Self> {
        if !circle::is_numerically_irrational(omega) {
            return Err(Error::RationalAngle(omega));
        }
        Ok(Self {
            omega,
            curve,
            fibre_fwd,
            fibre_inv,
        })
    }

    /// Affine fibre maps f_theta(x) = gamma(theta + omega) + lambda (x - gamma(theta)).
    ///
    /// Curve invariance holds by construction, the inverse is exact, and for
    /// lambda < 1 the annulus maps strictly inside itself provided the curve
    /// oscillation stays small (the standard curve keeps a wide margin).
    pub fn affine_contraction(omega: f64, curve: Curve, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::Domain {
                name: "lambda",
                value: lambda,
                domain: "(0, 1)",
            });
        }
        let c_fwd = curve.clone();
        let c_inv = curve.clone();
        let fwd: FibreMap = Arc::new(move |theta: f64, x: f64| {
            c_fwd(frac(theta + omega)) + lambda * (x - c_fwd(theta))
        });
        let inv: FibreMap = Arc::new(move |theta: f64, y: f64| {
            c_inv(theta) + (y - c_inv(frac(theta + omega))) / lambda
        });
        Self::new(omega, curve, fwd, inv)
    }

    /// The default concrete system: golden rotation, tent-shaped curve
    /// gamma(theta) = 1/2 + (1/4) dist(theta, 0) in \[0.5, 0.625\], lambda = 1/2.
    pub fn standard() -> Self {
        Self::affine_contraction(
            circle::golden_mean(),
            Arc::new(|theta: f64| 0.5 + 0.25 * circle::dist(theta, 0.0)),
            DEFAULT_LAMBDA,
        )
        .expect("standard system parameters are valid")
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn curve(&self, theta: f64) -> f64 {
        (self.curve)(theta)
    }

    pub fn curve_oracle(&self) -> Curve {
        self.curve.clone()
    }

    pub fn fibre(&self, theta: f64, x: f64) -> f64 {
        (self.fibre_fwd)(theta, x)
    }

    pub fn fibre_inv(&self, theta: f64, y: f64) -> f64 {
        (self.fibre_inv)(theta, y)
    }

    /// Grid validation of the input contract: curve invariance
    /// f_theta(gamma(theta)) = gamma(theta + omega), fibre monotonicity and
    /// the inverse identity, all within 1e-10.
    pub fn validate(&self, grid: usize) -> Result<()> {
        let n = grid.max(8);
        for i in 0..n {
            let theta = i as f64 / n as f64;
            let inv_err =
                (self.fibre(theta, self.curve(theta)) - self.curve(frac(theta + self.omega))).abs();
            if inv_err > 1e-10 {
                return Err(Error::Precondition(format!(
                    "curve not invariant at theta = {theta}: residual {inv_err:.3e}"
                )));
            }
            let mut prev = self.fibre(theta, 0.0);
            for j in 1..=32 {
                let x = j as f64 / 32.0;
                let fx = self.fibre(theta, x);
                if fx <= prev {
                    return Err(Error::Precondition(format!(
                        "fibre map not strictly increasing at theta = {theta}, x = {x}"
                    )));
                }
                prev = fx;
                let rt = (self.fibre_inv(theta, fx) - x).abs();
                if rt > 1e-10 {
                    return Err(Error::Precondition(format!(
                        "fibre inverse off by {rt:.3e} at theta = {theta}, x = {x}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Margin by which the annulus maps into its own interior:
    /// min over a boundary grid of f_theta(0) and 1 - f_theta(1).
    pub fn contraction_margin(&self, grid: usize) -> f64 {
        let n = grid.max(8);
        let mut margin = f64::INFINITY;
        for i in 0..n {
            let theta = i as f64 / n as f64;
            margin = margin.min(self.fibre(theta, 0.0));
            margin = margin.min(1.0 - self.fibre(theta, 1.0));
        }
        margin
    }
}
