//! Band profiles phi >= gamma >= psi pinching the invariant curve at theta*.
//!
//! Three properties matter: (1) psi <= gamma <= phi everywhere, (2) the bands
//! close onto the curve near theta* in the mode-specific way, and (3)
//! psi < phi away from theta*. One-sided mode closes phi on a left
//! neighbourhood and psi on a right neighbourhood of theta*, which forces the
//! measure jump that kills continuous curves. Oscillating mode closes each
//! band on interleaved sequences accumulating at theta* from both sides,
//! which makes the pinched set sweep the whole blown-up segment instead.

use std::sync::Arc;

use crate::circle::{dist, frac};
use crate::error::{Error, Result};

use super::Curve;

/// Half-width of the flat (band-on-curve) neighbourhoods in one-sided mode.
const FLAT: f64 = 0.1;
/// Ramp width of the one-sided tents.
const RAMP: f64 = 0.2;
/// Outer scale of the oscillating profile.
const OSC_OUTER: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PinchMode {
    /// phi = gamma left of theta*, psi = gamma right of theta*.
    OneSided,
    /// Band contacts accumulate on theta* from both sides; produces
    /// filled-in evidence instead of the one-sided jump.
    Oscillating,
}

#[derive(Clone)]
pub struct PinchFunctions {
    theta_star: f64,
    mode: PinchMode,
    phi: Curve,
    psi: Curve,
}

/// Triangle wave with period 2: zero at even integers, one at odd.
fn triangle(t: f64) -> f64 {
    let u = t.rem_euclid(2.0);
    1.0 - (1.0 - u).abs()
}

impl PinchFunctions {
    /// One-sided profile: phi = gamma + c*w, psi = gamma - c*w' with
    /// piecewise-linear tents w, w' vanishing on \[theta* - FLAT, theta*\] and
    /// \[theta*, theta* + FLAT\] respectively and positive elsewhere.
    pub fn one_sided(theta_star: f64, curve: Curve, amplitude: f64) -> Result<Self> {
        Self::check_amplitude(amplitude)?;
        let theta_star = frac(theta_star);
        let up = {
            let curve = curve.clone();
            let c = amplitude;
            Arc::new(move |theta: f64| {
                let u = frac(theta - theta_star);
                let w = if u >= 1.0 - FLAT {
                    0.0
                } else {
                    (u / RAMP).min(1.0).min((1.0 - FLAT - u) / RAMP).max(0.0)
                };
                curve(theta) + c * w
            })
        };
        let down = {
            let curve = curve.clone();
            let c = amplitude;
            Arc::new(move |theta: f64| {
                let u = frac(theta - theta_star);
                let w = if u <= FLAT {
                    0.0
                } else {
                    ((u - FLAT) / RAMP).min(1.0).min((1.0 - u) / RAMP).max(0.0)
                };
                curve(theta) - c * w
            })
        };
        Ok(Self {
            theta_star,
            mode: PinchMode::OneSided,
            phi: up,
            psi: down,
        })
    }

    /// Oscillating profile built on the log-scale triangle wave: with
    /// s = dist(theta, theta*) and l = log2(OSC_OUTER / s),
    ///
    ///   w  = s * triangle(l),    w' = s * triangle(l + 1)     for s <= OSC_OUTER,
    ///   w  = s - OSC_OUTER,      w' = OSC_OUTER               beyond.
    ///
    /// The zeros of w sit at s = OSC_OUTER * 4^-m, those of w' at half those
    /// scales; both accumulate on theta* from both sides, and w + w' = s > 0
    /// off theta* because triangle(l) + triangle(l+1) = 1.
    pub fn oscillating(theta_star: f64, curve: Curve, amplitude: f64) -> Result<Self> {
        Self::check_amplitude(amplitude)?;
        let theta_star = frac(theta_star);
        let profile = move |theta: f64, phase: f64| -> f64 {
            let s = dist(theta, theta_star);
            if s == 0.0 {
                0.0
            } else if s <= OSC_OUTER {
                s * triangle((OSC_OUTER / s).log2() + phase)
            } else if phase == 0.0 {
                s - OSC_OUTER
            } else {
                OSC_OUTER
            }
        };
        let up = {
            let curve = curve.clone();
            let c = amplitude;
            Arc::new(move |theta: f64| curve(theta) + c * profile(theta, 0.0))
        };
        let down = {
            let curve = curve.clone();
            let c = amplitude;
            Arc::new(move |theta: f64| curve(theta) - c * profile(theta, 1.0))
        };
        Ok(Self {
            theta_star,
            mode: PinchMode::Oscillating,
            phi: up,
            psi: down,
        })
    }

    pub fn standard(mode: PinchMode, curve: Curve) -> Self {
        let c = super::DEFAULT_THETA_STAR;
        match mode {
            PinchMode::OneSided => Self::one_sided(c, curve, 0.25),
            PinchMode::Oscillating => Self::oscillating(c, curve, 0.25),
        }
        .expect("standard pinch parameters are valid")
    }

    fn check_amplitude(amplitude: f64) -> Result<()> {
        if amplitude.is_nan() || amplitude <= 0.0 {
            return Err(Error::Domain {
                name: "amplitude",
                value: amplitude,
                domain: "(0, inf)",
            });
        }
        Ok(())
    }

    pub fn theta_star(&self) -> f64 {
        self.theta_star
    }

    pub fn mode(&self) -> PinchMode {
        self.mode
    }

    pub fn phi(&self, theta: f64) -> f64 {
        (self.phi)(theta)
    }

    pub fn psi(&self, theta: f64) -> f64 {
        (self.psi)(theta)
    }

    /// Band width phi - psi; strictly positive off theta*.
    pub fn width(&self, theta: f64) -> f64 {
        self.phi(theta) - self.psi(theta)
    }

    /// Grid check of the band properties against a curve: ordering, strict
    /// width off theta*, closure at theta*, and range inside (0, 1) with the
    /// stated margin.
    pub fn validate(&self, curve: &Curve, grid: usize, range_margin: f64) -> Result<()> {
        if self.width(self.theta_star).abs() > 1e-12 {
            return Err(Error::Precondition(format!(
                "band not pinched at theta* (width {})",
                self.width(self.theta_star)
            )));
        }
        let n = grid.max(16);
        for i in 0..n {
            // Offset grid so theta* itself is skipped.
            let theta = frac(self.theta_star + (i as f64 + 0.5) / n as f64);
            let (g, p, q) = (curve(theta), self.phi(theta), self.psi(theta));
            if !(q <= g + 1e-14 && g <= p + 1e-14) {
                return Err(Error::Precondition(format!(
                    "band ordering violated at theta = {theta}: psi {q}, gamma {g}, phi {p}"
                )));
            }
            if p - q <= 0.0 {
                return Err(Error::PinchDegenerate(theta));
            }
            if p > 1.0 - range_margin || q < range_margin {
                let max_scale = range_margin.max(1e-3);
                return Err(Error::PinchScale {
                    scale: p.max(1.0 - q),
                    max_scale,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle;
    use std::sync::Arc;

    fn curve() -> Curve {
        Arc::new(|theta: f64| 0.5 + 0.25 * circle::dist(theta, 0.0))
    }

    #[test]
    fn one_sided_flats_are_exact() {
        let p = PinchFunctions::one_sided(0.25, curve(), 0.25).unwrap();
        let c = curve();
        // Left of theta*: phi = gamma exactly; psi strictly below.
        for d in [0.01, 0.05, 0.0999] {
            let theta = frac(0.25 - d);
            assert_eq!(p.phi(theta), c(theta));
            assert!(p.psi(theta) < c(theta));
        }
        // Right of theta*: psi = gamma exactly; phi strictly above.
        for d in [0.01, 0.05, 0.0999] {
            let theta = frac(0.25 + d);
            assert_eq!(p.psi(theta), c(theta));
            assert!(p.phi(theta) > c(theta));
        }
        assert_eq!(p.width(0.25), 0.0);
    }

    #[test]
    fn one_sided_validates() {
        let p = PinchFunctions::one_sided(0.25, curve(), 0.25).unwrap();
        p.validate(&curve(), 4096, 0.05).unwrap();
    }

    #[test]
    fn oscillating_contacts_accumulate_from_both_sides() {
        let p = PinchFunctions::oscillating(0.25, curve(), 0.25).unwrap();
        let c = curve();
        for m in 0..6 {
            let s = OSC_OUTER * 0.25f64.powi(m);
            for side in [-1.0, 1.0] {
                let theta = frac(0.25 + side * s);
                // phi touches the curve at these scales, psi stays strictly below.
                assert!(
                    (p.phi(theta) - c(theta)).abs() < 1e-12,
                    "phi contact missing at scale {s}"
                );
                assert!(p.psi(theta) < c(theta) - 1e-6);
            }
            let s_half = 0.5 * OSC_OUTER * 0.25f64.powi(m);
            for side in [-1.0, 1.0] {
                let theta = frac(0.25 + side * s_half);
                assert!(
                    (p.psi(theta) - c(theta)).abs() < 1e-12,
                    "psi contact missing at scale {s_half}"
                );
                assert!(p.phi(theta) > c(theta) + 1e-6);
            }
        }
    }

    #[test]
    fn oscillating_validates() {
        let p = PinchFunctions::oscillating(0.25, curve(), 0.25).unwrap();
        p.validate(&curve(), 4096, 0.05).unwrap();
    }

    #[test]
    fn width_positive_off_pinch_point_one_sided() {
        let p = PinchFunctions::one_sided(0.25, curve(), 0.25).unwrap();
        for i in 1..1000 {
            let theta = frac(0.25 + i as f64 / 1000.0);
            assert!(p.width(theta) > 0.0, "width vanished at {theta}");
        }
    }
}
