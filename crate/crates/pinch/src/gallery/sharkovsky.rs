//! Surgery producing a forced interval map with a three-periodic continuous
//! curve but no invariant continuous curve.
//!
//! The outer map is the product of the base rotation with an interval map g
//! carrying an exact 3-cycle and a unique attracting fixed point x0. Inside
//! the trap annulus A0 = T^1 x \[a-, a+\] around the (former) invariant curve
//! x = x0, the product dynamics are replaced by a blown-up extension glued in
//! through fibrewise piecewise-affine maps. The boundary bands of the gluing
//! are pinned so that both branches agree on the boundary circles exactly;
//! the 3-cycle lives outside A0 and is untouched, while every invariant curve
//! candidate inside A0 inherits the oscillation of the pinched set.

use crate::circle::{self, frac};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::skew::{BlownUpSystem, PinchMode};

use super::{three_cycle_fixed_point, three_cycle_map, PiecewiseLinear};

#[derive(Clone, Debug)]
pub struct CurveAbsenceCertificate {
    /// Extrapolated oscillation of the attractor's upper boundary inside A0
    /// across the image of the pinch fibre.
    pub oscillation: f64,
    /// Fibre scale of the gluing at the pinch fibre.
    pub scale: f64,
    /// 0.8 * a_0 * scale.
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct BasinReport {
    pub captured: usize,
    pub on_cycle: usize,
    pub escaped: usize,
    pub max_capture_time: u32,
}

pub struct SurgerySystem {
    g: PiecewiseLinear,
    a_minus: f64,
    a_plus: f64,
    g_a_minus: f64,
    g_a_plus: f64,
    inner: BlownUpSystem,
}

impl SurgerySystem {
    pub fn new(inner: BlownUpSystem, a_minus: f64, a_plus: f64) -> Result<Self> {
        let g = three_cycle_map();
        let x0 = three_cycle_fixed_point();
        let (g_m, g_p) = (g.eval(a_minus), g.eval(a_plus));
        if !(a_minus < g_m && g_m < x0 && x0 < g_p && g_p < a_plus) {
            return Err(Error::Precondition(format!(
                "trap interval [{a_minus}, {a_plus}] must satisfy a- < g(a-) < x0 < g(a+) < a+"
            )));
        }
        let margin = inner.system().contraction_margin(256);
        if margin <= 0.0 {
            return Err(Error::NoContraction(margin));
        }
        let me = Self {
            g,
            a_minus,
            a_plus,
            g_a_minus: g_m,
            g_a_plus: g_p,
            inner,
        };
        let residual = me.boundary_residual(512);
        if residual > 1e-8 {
            return Err(Error::GluingMismatch(residual));
        }
        Ok(me)
    }

    /// Default surgery: standard one-sided blow-up glued into \[0.63, 0.74\].
    pub fn standard(trunc: i64) -> Result<Self> {
        Self::new(
            BlownUpSystem::standard(PinchMode::OneSided, trunc)?,
            0.63,
            0.74,
        )
    }

    pub fn inner(&self) -> &BlownUpSystem {
        &self.inner
    }

    pub fn outer_map(&self) -> &PiecewiseLinear {
        &self.g
    }

    pub fn trap(&self) -> (f64, f64) {
        (self.a_minus, self.a_plus)
    }

    pub fn omega(&self) -> f64 {
        self.inner.omega()
    }

    /// Fibre interval of the inner image annulus fhat(A) at base point theta.
    fn inner_band(&self, theta: f64) -> (f64, f64) {
        let prev = frac(theta - self.inner.omega());
        (self.inner.fhat(prev, 0.0).1, self.inner.fhat(prev, 1.0).1)
    }

    /// Gluing map h1 in the fibre over theta: \[0,1\] -> \[a-, a+\], affine on
    /// the three bands split by the inner image annulus, with the middle band
    /// carried onto \[g(a-), g(a+)\].
    pub fn glue(&self, theta: f64, x: f64) -> f64 {
        let (lo, hi) = self.inner_band(theta);
        if x <= lo {
            if lo <= 0.0 {
                return self.g_a_minus;
            }
            self.a_minus + (x / lo) * (self.g_a_minus - self.a_minus)
        } else if x >= hi {
            if hi >= 1.0 {
                return self.g_a_plus;
            }
            self.g_a_plus + ((x - hi) / (1.0 - hi)) * (self.a_plus - self.g_a_plus)
        } else {
            self.g_a_minus + ((x - lo) / (hi - lo)) * (self.g_a_plus - self.g_a_minus)
        }
    }

    pub fn glue_inv(&self, theta: f64, y: f64) -> f64 {
        let (lo, hi) = self.inner_band(theta);
        if y <= self.g_a_minus {
            if self.g_a_minus <= self.a_minus {
                return lo;
            }
            (y - self.a_minus) / (self.g_a_minus - self.a_minus) * lo
        } else if y >= self.g_a_plus {
            if self.a_plus <= self.g_a_plus {
                return hi;
            }
            hi + (y - self.g_a_plus) / (self.a_plus - self.g_a_plus) * (1.0 - hi)
        } else {
            lo + (y - self.g_a_minus) / (self.g_a_plus - self.g_a_minus) * (hi - lo)
        }
    }

    /// The composite map: the product rotation x g outside the trap annulus,
    /// the glued blown-up extension inside.
    pub fn apply(&self, theta: f64, x: f64) -> (f64, f64) {
        let theta = frac(theta);
        if x < self.a_minus || x > self.a_plus {
            return (frac(theta + self.omega()), self.g.eval(x.clamp(0.0, 1.0)));
        }
        let u = self.glue_inv(theta, x.clamp(self.a_minus, self.a_plus));
        let (t2, v) = self.inner.fhat(theta, u);
        (t2, self.glue(t2, v))
    }

    /// Sup over boundary grid points of the gap between the outer branch and
    /// the glued inner branch on the trap boundary circles x = a-, a+.
    pub fn boundary_residual(&self, grid: usize) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..grid {
            let theta = i as f64 / grid as f64;
            let outer_lo = self.g.eval(self.a_minus);
            let outer_hi = self.g.eval(self.a_plus);
            let t2 = frac(theta + self.omega());
            // Inner branch: a- pulls back to the fibre bottom, lands on the
            // lower inner-band edge, and must glue to g(a-); same at the top.
            let inner_lo = {
                let u = self.glue_inv(theta, self.a_minus);
                let (t, v) = self.inner.fhat(theta, u);
                debug_assert!(circle::dist(t, t2) < 1e-12);
                self.glue(t2, v)
            };
            let inner_hi = {
                let u = self.glue_inv(theta, self.a_plus);
                let (_, v) = self.inner.fhat(theta, u);
                self.glue(t2, v)
            };
            worst = worst.max((inner_lo - outer_lo).abs());
            worst = worst.max((inner_hi - outer_hi).abs());
        }
        worst
    }

    /// Sup over a theta grid of |F^3(theta, x) - x| in the fibre coordinate,
    /// for the three constant curves x in {0, 1/2, 1}.
    pub fn three_cycle_residual(&self, grid: usize) -> f64 {
        let mut worst = 0.0f64;
        for &x in &[0.0, 0.5, 1.0] {
            for i in 0..grid {
                let theta = i as f64 / grid as f64;
                let mut p = (theta, x);
                for _ in 0..3 {
                    p = self.apply(p.0, p.1);
                }
                worst = worst.max((p.1 - x).abs());
            }
        }
        worst
    }

    /// Fibre scale of the middle gluing band at the pinch fibre.
    pub fn fibre_scale(&self) -> f64 {
        let star = self.inner.theta_star();
        let (lo, hi) = self.inner_band(star);
        (self.g_a_plus - self.g_a_minus) / (hi - lo)
    }

    /// Oscillation certificate: the upper boundary of the glued attractor
    /// jumps by about a_0 * scale across the pinch fibre, so any invariant
    /// curve candidate inside the trap would have to be discontinuous there.
    pub fn certify_no_invariant_curve(&self) -> CurveAbsenceCertificate {
        let star = self.inner.theta_star();
        let mut diffs = Vec::new();
        for j in 5..=30u32 {
            let delta = 0.5f64.powi(j as i32);
            let left = frac(star - delta);
            let right = frac(star + delta);
            let up_left = self.glue(left, self.inner.gamma_plus(left));
            let up_right = self.glue(right, self.inner.gamma_plus(right));
            diffs.push((up_left - up_right).abs());
        }
        let m = diffs.len();
        let oscillation = 2.0 * diffs[m - 1] - diffs[m - 2];
        let scale = self.fibre_scale();
        let threshold = 0.8 * self.inner.weights().weight(0) * scale;
        CurveAbsenceCertificate {
            oscillation,
            scale,
            threshold,
            passed: oscillation >= threshold,
        }
    }

    /// Iterates seeded sample points from outside the trap; every orbit must
    /// either reach the trap annulus (whose interior is invariant) or ride
    /// the 3-cycle.
    pub fn basin_capture(&self, samples: usize, horizon: u32, seed: u64) -> BasinReport {
        let mut rng = SplitMix64::new(seed);
        let mut report = BasinReport {
            captured: 0,
            on_cycle: 0,
            escaped: 0,
            max_capture_time: 0,
        };
        for _ in 0..samples {
            let theta = rng.next_f64();
            let x = rng.next_f64();
            if (self.a_minus..=self.a_plus).contains(&x) {
                report.captured += 1;
                continue;
            }
            let mut p = (theta, x);
            let mut done = false;
            for k in 0..horizon {
                let near_cycle = [0.0, 0.5, 1.0].iter().any(|&c| (p.1 - c).abs() < 1e-9);
                if near_cycle {
                    report.on_cycle += 1;
                    done = true;
                    break;
                }
                if (self.a_minus..=self.a_plus).contains(&p.1) {
                    report.captured += 1;
                    report.max_capture_time = report.max_capture_time.max(k);
                    done = true;
                    break;
                }
                p = self.apply(p.0, p.1);
            }
            if !done {
                report.escaped += 1;
            }
        }
        report
    }

    /// Monotonicity of the glued fibre maps inside the trap annulus.
    pub fn trap_monotonicity_inversions(&self, fibres: usize, grid: usize) -> usize {
        let mut inversions = 0;
        for i in 0..fibres {
            let theta = (i as f64 + 0.5) / fibres as f64;
            let mut prev = f64::NEG_INFINITY;
            for j in 0..=grid {
                let x = self.a_minus + (self.a_plus - self.a_minus) * j as f64 / grid as f64;
                let (_, y) = self.apply(theta, x);
                if y < prev {
                    inversions += 1;
                }
                prev = y;
            }
        }
        inversions
    }
}
