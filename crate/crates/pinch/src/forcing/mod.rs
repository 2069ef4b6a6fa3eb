//! Blow-up constructions over general almost periodic minimal bases.
//!
//! The circle-specific construction in [`crate::skew`] only uses the base
//! through its orbit walk and its metric, so it generalizes to any compact
//! metric base with a suitable homeomorphism. [`BaseSystem`] captures what is
//! needed; the shipped bases are a circle rotation, a two-torus translation
//! and the binary odometer. Since a general base has no left/right
//! neighbourhoods, the band profiles close onto the curve along two approach
//! sequences S and T instead ([`PinchSequences`], distance-based profiles),
//! and the one-sided jump machinery is not available: everything else
//! carries over.
//!
//! [`GeneralBlownUp`] is deliberately an independent code path from the
//! concrete circle implementation; the two are cross-checked against each
//! other on the rotation base.

mod bases;
mod generic;

pub use bases::{CircleRotation, Odometer, TorusTranslation};
pub use generic::{GeneralBlownUp, GeneralSegment};

use std::fmt::Debug;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// A homeomorphism of a compact metric space, exposed through the operations
/// the blow-up machinery needs. `displacement(n)` must equal
/// sup_theta d(alpha^n(theta), theta) in closed form.
pub trait BaseSystem: Clone + Send + Sync {
    type Point: Copy + PartialEq + Debug + Send + Sync;

    fn step(&self, p: &Self::Point) -> Self::Point;
    fn step_back(&self, p: &Self::Point) -> Self::Point;
    fn dist(&self, a: &Self::Point, b: &Self::Point) -> f64;
    fn displacement(&self, n: u64) -> f64;
    fn is_minimal(&self) -> bool;
    fn is_almost_periodic(&self) -> bool;
    fn origin(&self) -> Self::Point;
    fn sample(&self, rng: &mut SplitMix64) -> Self::Point;
    /// (sigma_n, tau_n): disjoint approach sequences converging to `center`.
    fn approach_pair(&self, center: &Self::Point, n: u32) -> (Self::Point, Self::Point);

    fn advance(&self, p: &Self::Point, n: i64) -> Self::Point {
        let mut q = *p;
        if n >= 0 {
            for _ in 0..n {
                q = self.step(&q);
            }
        } else {
            for _ in 0..(-n) {
                q = self.step_back(&q);
            }
        }
        q
    }
}

pub type PointFn<B> = Arc<dyn Fn(&<B as BaseSystem>::Point) -> f64 + Send + Sync>;

/// Worst isometry defect on random pairs; the shipped bases are exact.
pub fn isometry_defect<B: BaseSystem>(base: &B, pairs: usize, seed: u64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let a = base.sample(&mut rng);
        let b = base.sample(&mut rng);
        let d = (base.dist(&a, &b) - base.dist(&base.step(&a), &base.step(&b))).abs();
        worst = worst.max(d);
    }
    worst
}

/// Largest gap of { n <= horizon | displacement(n) < eps }; bounded gaps are
/// the syndeticity signature of almost periodicity.
pub fn syndeticity_max_gap<B: BaseSystem>(base: &B, eps: f64, horizon: u64) -> u64 {
    let mut last = 0u64;
    let mut max_gap = 0u64;
    for n in 1..=horizon {
        if base.displacement(n) < eps {
            max_gap = max_gap.max(n - last);
            last = n;
        }
    }
    max_gap.max(horizon - last)
}

/// Two disjoint sequences approaching theta*, with the scale constant of the
/// distance-based band profiles.
#[derive(Clone)]
pub struct PinchSequences<P> {
    center: P,
    s_points: Vec<P>,
    t_points: Vec<P>,
    scale: f64,
}

impl<P: Copy + PartialEq + Debug> PinchSequences<P> {
    pub fn build<B: BaseSystem<Point = P>>(
        base: &B,
        center: P,
        depth: u32,
        scale: f64,
    ) -> Result<Self> {
        if scale.is_nan() || scale <= 0.0 {
            return Err(Error::Domain {
                name: "scale",
                value: scale,
                domain: "(0, inf)",
            });
        }
        let mut s_points = Vec::new();
        let mut t_points = Vec::new();
        let mut prev_s = f64::INFINITY;
        let mut prev_t = f64::INFINITY;
        for n in 1..=depth {
            let (s, t) = base.approach_pair(&center, n);
            let ds = base.dist(&s, &center);
            let dt = base.dist(&t, &center);
            if ds <= 0.0 || dt <= 0.0 {
                return Err(Error::Precondition(format!(
                    "approach point coincides with the center at n = {n}"
                )));
            }
            if ds >= prev_s || dt >= prev_t {
                return Err(Error::Precondition(format!(
                    "approach distances not strictly decreasing at n = {n}"
                )));
            }
            prev_s = ds;
            prev_t = dt;
            s_points.push(s);
            t_points.push(t);
        }
        for s in &s_points {
            if t_points.iter().any(|t| t == s) {
                return Err(Error::Precondition(
                    "approach sequences are not disjoint".into(),
                ));
            }
        }
        Ok(Self {
            center,
            s_points,
            t_points,
            scale,
        })
    }

    pub fn center(&self) -> P {
        self.center
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn s_points(&self) -> &[P] {
        &self.s_points
    }

    pub fn t_points(&self) -> &[P] {
        &self.t_points
    }
}

/// Distance to a stored sequence prefix together with its limit point. The
/// omitted tail only matters within d(theta, center) of the center, which is
/// exactly the bound the limit term provides.
fn dist_to_sequence<B: BaseSystem>(
    base: &B,
    theta: &B::Point,
    points: &[B::Point],
    center: &B::Point,
) -> f64 {
    let mut d = base.dist(theta, center);
    for p in points {
        d = d.min(base.dist(theta, p));
    }
    d
}

/// Band profiles phi = gamma + c dist(., S), psi = gamma - c dist(., T) for a
/// general base. Validates that the bands stay strictly inside the fibre
/// interval on a dense orbit sample.
pub fn make_pinch_general<B: BaseSystem + 'static>(
    base: &B,
    curve: PointFn<B>,
    seqs: &PinchSequences<B::Point>,
) -> Result<(PointFn<B>, PointFn<B>)> {
    let phi: PointFn<B> = {
        let base = base.clone();
        let curve = curve.clone();
        let s = seqs.s_points.to_vec();
        let center = seqs.center;
        let c = seqs.scale;
        Arc::new(move |theta: &B::Point| {
            curve(theta) + c * dist_to_sequence(&base, theta, &s, &center)
        })
    };
    let psi: PointFn<B> = {
        let base = base.clone();
        let curve = curve.clone();
        let t = seqs.t_points.to_vec();
        let center = seqs.center;
        let c = seqs.scale;
        Arc::new(move |theta: &B::Point| {
            curve(theta) - c * dist_to_sequence(&base, theta, &t, &center)
        })
    };
    let margin = 0.02;
    let mut probe = base.origin();
    for _ in 0..2048 {
        probe = base.step(&probe);
        if phi(&probe) > 1.0 - margin || psi(&probe) < margin {
            let head = curve(&probe).max(1.0 - curve(&probe));
            return Err(Error::PinchScale {
                scale: seqs.scale,
                max_scale: (1.0 - margin - head).max(1e-3),
            });
        }
    }
    Ok((phi, psi))
}
