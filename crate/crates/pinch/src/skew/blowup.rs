//! The blown-up extension fhat and its fibre measure family.
//!
//! Fibre measures: mu_theta = sum_{|n|<=N} a_n mu^n_theta + b' Leb with
//! mu^n_theta = mu^0_{theta-n omega} o f_theta^{-n} and mu^0 a normalized
//! uniform band between the pinch functions (a Dirac at the curve on the
//! pinch fibre itself). The truncation tail is folded into the Lebesgue
//! coefficient b' = b + tail(N), so each mu_theta is an exact probability
//! measure of full support and all comparisons with the untruncated object
//! widen by at most 2 tail(N).
//!
//! The delicate numerical point is the atomic term on a blown-up fibre:
//! composing fibre inverses expands round-off exponentially, so the Dirac
//! indicator is never evaluated in the composed coordinate. Instead the jump
//! location is transported through the invariant curve, where it sits exactly
//! at gamma of the blown-up fibre, and the indicator is evaluated directly in
//! the query coordinate.

use crate::circle::{self, frac};
use crate::error::{Error, Result};
use crate::weights::WeightSequence;

use super::{ForcedIntervalSystem, PinchFunctions, PinchMode, EXACT_FIBRE_TOL};

/// Bisection tolerance of the fibre quantile maps.
const H_TOL: f64 = 1e-13;

/// Vertical segment h^-1(theta*_n, gamma(theta*_n)) over a blown-up fibre.
#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub index: i64,
    /// Base coordinate theta*_n of the fibre.
    pub fibre: f64,
    /// Curve height gamma(theta*_n) the segment collapses to.
    pub anchor: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Segment {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

#[derive(Clone, Copy, Debug)]
struct OrbitPoint {
    position: f64,
    index: i64,
    anchor: f64,
}

#[derive(Clone, Copy, Debug)]
enum TermKind {
    /// Normalized uniform band.
    Band { lo: f64, width: f64 },
    /// Degenerate band (round-off width next to the pinch fibre).
    Step { at: f64 },
    /// Atom of the queried blown-up fibre: indicator in the query coordinate,
    /// where the jump location is exact.
    AtomQuery { anchor: f64 },
    /// mu^0 Dirac met along the walk without the query fibre being blown up
    /// (proximity sliver): indicator in the transported coordinate.
    AtomPath { anchor: f64 },
}

#[derive(Clone, Copy, Debug)]
struct SweepTerm {
    weight: f64,
    kind: TermKind,
    /// Source fibre of the step map feeding this term.
    th: f64,
    /// Chord images bounding the endpoint-fixing transport at the step.
    v_lo: f64,
    v_hi: f64,
}

/// The y-independent part of one fibre CDF evaluation.
struct FibreSweep {
    leb: f64,
    term0: (f64, TermKind),
    back: Vec<SweepTerm>,
    fwd: Vec<SweepTerm>,
}

#[derive(Clone, Copy, Debug)]
pub struct AttractorEnvelope {
    pub theta: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug)]
pub struct JumpEstimate {
    /// Extrapolated one-sided limit difference of mu_theta at the curve.
    pub estimate: f64,
    /// Raw (delta, difference) pairs along the approach theta* -+ delta.
    pub samples: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvelopeVerdict {
    NonFilledIn,
    FilledIn,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct EnvelopeReport {
    /// Per-bin (theta, inf, sup, count) envelopes of the sample.
    pub bins: Vec<(f64, f64, f64, usize)>,
    pub verdict: EnvelopeVerdict,
    /// Min vertical distance from near-pinch samples to the midpoint of S_0.
    pub midpoint_margin: f64,
    /// Max over S_0 heights of the distance to the nearest sample.
    pub segment_cover_gap: f64,
    pub near_samples: usize,
}

pub struct BlownUpSystem {
    system: ForcedIntervalSystem,
    pinch: PinchFunctions,
    weights: WeightSequence,
    trunc: i64,
    /// b' = b + tail(N).
    leb_coeff: f64,
    /// Blown-up fibres sorted by base position.
    orbit_sorted: Vec<OrbitPoint>,
    /// Same fibres indexed by n + trunc.
    orbit_by_index: Vec<OrbitPoint>,
    segments: Vec<Segment>,
    /// Endpoint-fixing extension thresholds for the measure transport.
    cap_lo: f64,
    cap_hi: f64,
}

impl BlownUpSystem {
    pub fn new(
        system: ForcedIntervalSystem,
        pinch: PinchFunctions,
        weights: WeightSequence,
        trunc: i64,
    ) -> Result<Self> {
        let curve = system.curve_oracle();
        pinch.validate(&curve, 2048, 0.02)?;
        let leb_coeff = weights.lebesgue_coeff() + weights.tail(trunc);
        let mut orbit_by_index = Vec::new();
        if trunc >= 0 {
            for n in -trunc..=trunc {
                let position = frac(pinch.theta_star() + n as f64 * system.omega());
                orbit_by_index.push(OrbitPoint {
                    position,
                    index: n,
                    anchor: system.curve(position),
                });
            }
        }
        let mut orbit_sorted = orbit_by_index.clone();
        orbit_sorted.sort_by(|a, b| a.position.partial_cmp(&b.position).unwrap());
        for pair in orbit_sorted.windows(2) {
            if pair[1].position - pair[0].position < 10.0 * EXACT_FIBRE_TOL {
                return Err(Error::Precondition(format!(
                    "blown-up fibres {} and {} collide at {}",
                    pair[0].index, pair[1].index, pair[0].position
                )));
            }
        }
        // Measures are transported by an endpoint-fixing homeomorphism
        // extension of the fibre maps: outside [cap_lo, cap_hi] the maps are
        // replaced by the chords through (0,0) and (1,1). Bands and their
        // forward images never leave the core, so every transported quantity
        // is unchanged, but no mass can escape the fibre interval and each
        // mu_theta stays an exact probability measure.
        let mut band_lo = f64::INFINITY;
        let mut band_hi = f64::NEG_INFINITY;
        let mut img_lo = f64::INFINITY;
        let mut img_hi = f64::NEG_INFINITY;
        let mut probe = 0.0;
        for _ in 0..512 {
            probe = frac(probe + system.omega());
            band_lo = band_lo.min(pinch.psi(probe));
            band_hi = band_hi.max(pinch.phi(probe));
            img_lo = img_lo.min(system.fibre(probe, 0.0));
            img_hi = img_hi.max(system.fibre(probe, 1.0));
        }
        let cap_lo = (0.5 * band_lo.min(img_lo)).max(0.0);
        let cap_hi = (0.5 * (1.0 + band_hi.max(img_hi))).min(1.0);
        let mut me = Self {
            system,
            pinch,
            weights,
            trunc,
            leb_coeff,
            orbit_sorted,
            orbit_by_index,
            segments: Vec::new(),
            cap_lo,
            cap_hi,
        };
        let mut segments = Vec::with_capacity(me.orbit_by_index.len());
        for o in me.orbit_by_index.iter() {
            segments.push(Segment {
                index: o.index,
                fibre: o.position,
                anchor: o.anchor,
                lo: me.mu_cdf_impl(o.position, o.anchor, me.trunc, true),
                hi: me.mu_cdf_impl(o.position, o.anchor, me.trunc, false),
            });
        }
        me.segments = segments;
        Ok(me)
    }

    /// Default construction on the standard system.
    pub fn standard(mode: PinchMode, trunc: i64) -> Result<Self> {
        let sys = ForcedIntervalSystem::standard();
        let pinch = PinchFunctions::standard(mode, sys.curve_oracle());
        Self::new(sys, pinch, WeightSequence::default_quarter(), trunc)
    }

    pub fn system(&self) -> &ForcedIntervalSystem {
        &self.system
    }

    pub fn pinch(&self) -> &PinchFunctions {
        &self.pinch
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn leb_coeff(&self) -> f64 {
        self.leb_coeff
    }

    pub fn omega(&self) -> f64 {
        self.system.omega()
    }

    pub fn theta_star(&self) -> f64 {
        self.pinch.theta_star()
    }

    /// Tolerance slack inherited from the atomic truncation.
    pub fn tail(&self) -> f64 {
        self.weights.tail(self.trunc)
    }

    /// The blown-up fibre index at this base point, if any (exact match up to
    /// [`EXACT_FIBRE_TOL`]).
    pub fn blown_fibre(&self, theta: f64) -> Option<i64> {
        self.lookup_orbit(theta).map(|o| o.index)
    }

    fn lookup_orbit(&self, theta: f64) -> Option<&OrbitPoint> {
        if self.orbit_sorted.is_empty() {
            return None;
        }
        let n = self.orbit_sorted.len();
        let idx = self.orbit_sorted.partition_point(|o| o.position < theta);
        for cand in [idx % n, (idx + n - 1) % n] {
            let o = &self.orbit_sorted[cand];
            if circle::dist(o.position, theta) < EXACT_FIBRE_TOL {
                return Some(o);
            }
        }
        None
    }

    /// Fibre map of the endpoint-fixing transport extension.
    fn transport_fwd(&self, theta: f64, x: f64) -> f64 {
        if x < self.cap_lo && self.cap_lo > 0.0 {
            let v = self.system.fibre(theta, self.cap_lo);
            return x * (v / self.cap_lo);
        }
        if x > self.cap_hi && self.cap_hi < 1.0 {
            let v = self.system.fibre(theta, self.cap_hi);
            return 1.0 - (1.0 - x) * ((1.0 - v) / (1.0 - self.cap_hi));
        }
        self.system.fibre(theta, x)
    }

    fn transport_inv(&self, theta: f64, y: f64) -> f64 {
        if self.cap_lo > 0.0 {
            let v = self.system.fibre(theta, self.cap_lo);
            if y < v {
                return y * (self.cap_lo / v);
            }
        }
        if self.cap_hi < 1.0 {
            let v = self.system.fibre(theta, self.cap_hi);
            if y > v {
                return 1.0 - (1.0 - y) * ((1.0 - self.cap_hi) / (1.0 - v));
            }
        }
        self.system.fibre_inv(theta, y)
    }

    /// Band CDF of mu^0 at a non-pinch fibre; `strict` picks the left limit.
    fn band(&self, theta: f64, y: f64) -> f64 {
        let lo = self.pinch.psi(theta);
        let w = self.pinch.phi(theta) - lo;
        if w <= 0.0 {
            // Degenerate width can only arise from round-off immediately next
            // to theta*; the band carries no interior there.
            return if y >= lo { 1.0 } else { 0.0 };
        }
        ((y - lo) / w).clamp(0.0, 1.0)
    }

    /// mu^0_theta\[0, y\] (right-continuous) or [0, y) (strict).
    fn mu0_impl(&self, theta: f64, y: f64, strict: bool) -> f64 {
        if circle::dist(theta, self.pinch.theta_star()) < EXACT_FIBRE_TOL {
            let anchor = self.system.curve(self.pinch.theta_star());
            let hit = if strict { y > anchor } else { y >= anchor };
            return if hit { 1.0 } else { 0.0 };
        }
        self.band(theta, y)
    }

    fn classify_term(&self, th: f64, blown: Option<&OrbitPoint>, index: i64) -> TermKind {
        match blown {
            Some(o) if o.index == index => TermKind::AtomQuery { anchor: o.anchor },
            _ => {
                if circle::dist(th, self.pinch.theta_star()) < EXACT_FIBRE_TOL {
                    TermKind::AtomPath {
                        anchor: self.system.curve(self.pinch.theta_star()),
                    }
                } else {
                    let lo = self.pinch.psi(th);
                    let width = self.pinch.phi(th) - lo;
                    if width <= 0.0 {
                        TermKind::Step { at: lo }
                    } else {
                        TermKind::Band { lo, width }
                    }
                }
            }
        }
    }

    /// Precomputes everything y-independent along the sweep for one fibre:
    /// the visited base points, band data and atom flags per term, and the
    /// transport chord images. The quantile bisection re-evaluates the fibre
    /// CDF tens of times, and this is where the time goes.
    fn build_sweep(&self, theta: f64, k: i64) -> FibreSweep {
        let leb = 1.0 - self.weights.partial(k);
        let mut sweep = FibreSweep {
            leb,
            term0: (0.0, TermKind::Step { at: 0.0 }),
            back: Vec::new(),
            fwd: Vec::new(),
        };
        if k < 0 {
            return sweep;
        }
        let blown = self.lookup_orbit(theta).filter(|o| o.index.abs() <= k);
        sweep.term0 = (self.weights.weight(0), self.classify_term(theta, blown, 0));
        sweep.back.reserve(k as usize);
        sweep.fwd.reserve(k as usize);
        let chords = |th: f64| -> (f64, f64) {
            let v_lo = if self.cap_lo > 0.0 {
                self.system.fibre(th, self.cap_lo)
            } else {
                f64::NAN
            };
            let v_hi = if self.cap_hi < 1.0 {
                self.system.fibre(th, self.cap_hi)
            } else {
                f64::NAN
            };
            (v_lo, v_hi)
        };
        let mut th = theta;
        for n in 1..=k {
            th = frac(th - self.system.omega());
            let (v_lo, v_hi) = chords(th);
            sweep.back.push(SweepTerm {
                weight: self.weights.weight(n),
                kind: self.classify_term(th, blown, n),
                th,
                v_lo,
                v_hi,
            });
        }
        let mut th = theta;
        for m in 1..=k {
            let src = th;
            let (v_lo, v_hi) = chords(src);
            th = frac(th + self.system.omega());
            sweep.fwd.push(SweepTerm {
                weight: self.weights.weight(-m),
                kind: self.classify_term(th, blown, -m),
                th: src,
                v_lo,
                v_hi,
            });
        }
        sweep
    }

    fn term_value(kind: &TermKind, y: f64, z: f64, strict: bool) -> f64 {
        match *kind {
            TermKind::Band { lo, width } => ((z - lo) / width).clamp(0.0, 1.0),
            TermKind::Step { at } => {
                if z >= at {
                    1.0
                } else {
                    0.0
                }
            }
            TermKind::AtomQuery { anchor } => {
                let hit = if strict { y > anchor } else { y >= anchor };
                if hit {
                    1.0
                } else {
                    0.0
                }
            }
            TermKind::AtomPath { anchor } => {
                let hit = if strict { z > anchor } else { z >= anchor };
                if hit {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn eval_sweep(&self, sweep: &FibreSweep, y: f64, strict: bool) -> f64 {
        let y = y.clamp(0.0, 1.0);
        let mut sum = sweep.leb * y;
        if sweep.back.is_empty() && sweep.fwd.is_empty() && sweep.term0.0 == 0.0 {
            return sum.clamp(0.0, 1.0);
        }
        sum += sweep.term0.0 * Self::term_value(&sweep.term0.1, y, y, strict);
        let mut z = y;
        for t in &sweep.back {
            z = if self.cap_lo > 0.0 && z < t.v_lo {
                z * (self.cap_lo / t.v_lo)
            } else if self.cap_hi < 1.0 && z > t.v_hi {
                1.0 - (1.0 - z) * ((1.0 - self.cap_hi) / (1.0 - t.v_hi))
            } else {
                self.system.fibre_inv(t.th, z)
            };
            sum += t.weight * Self::term_value(&t.kind, y, z, strict);
        }
        let mut z = y;
        for t in &sweep.fwd {
            z = if z < self.cap_lo && self.cap_lo > 0.0 {
                z * (t.v_lo / self.cap_lo)
            } else if z > self.cap_hi && self.cap_hi < 1.0 {
                1.0 - (1.0 - z) * ((1.0 - t.v_hi) / (1.0 - self.cap_hi))
            } else {
                self.system.fibre(t.th, z)
            };
            sum += t.weight * Self::term_value(&t.kind, y, z, strict);
        }
        sum.clamp(0.0, 1.0)
    }

    /// mu_theta^(k)\[0, y\] with atoms truncated to |n| <= k and the remaining
    /// mass on Lebesgue. `strict` gives the left limit mu[0, y).
    fn mu_cdf_impl(&self, theta: f64, y: f64, k: i64, strict: bool) -> f64 {
        let sweep = self.build_sweep(theta, k);
        self.eval_sweep(&sweep, y, strict)
    }

    /// mu^0_theta\[0, y\]: Dirac CDF on the pinch fibre, normalized uniform on
    /// the band elsewhere.
    pub fn mu0_cdf(&self, theta: f64, y: f64) -> Result<f64> {
        let theta = frac(theta);
        if circle::dist(theta, self.pinch.theta_star()) >= EXACT_FIBRE_TOL
            && self.pinch.width(theta) <= 0.0
        {
            return Err(Error::PinchDegenerate(theta));
        }
        Ok(self.mu0_impl(theta, y.clamp(0.0, 1.0), false))
    }

    /// mu^n_theta\[0, y\], the n-step push-forward of mu^0.
    pub fn mun_cdf(&self, n: i64, theta: f64, y: f64) -> Result<f64> {
        if n.abs() > self.trunc.max(0) {
            return Err(Error::Domain {
                name: "n",
                value: n as f64,
                domain: "|n| <= trunc",
            });
        }
        let theta = frac(theta);
        let omega = self.system.omega();
        let mut th = theta;
        let mut z = y.clamp(0.0, 1.0);
        if n >= 0 {
            for _ in 0..n {
                th = frac(th - omega);
                z = self.transport_inv(th, z);
            }
        } else {
            for _ in 0..(-n) {
                z = self.transport_fwd(th, z);
                th = frac(th + omega);
            }
        }
        Ok(self.mu0_impl(th, z, false))
    }

    /// Full fibre CDF mu_theta\[0, y\].
    pub fn mu_cdf(&self, theta: f64, y: f64) -> f64 {
        self.mu_cdf_impl(frac(theta), y, self.trunc, false)
    }

    /// Left limit mu_theta[0, y).
    pub fn mu_cdf_left(&self, theta: f64, y: f64) -> f64 {
        self.mu_cdf_impl(frac(theta), y, self.trunc, true)
    }

    fn quantile_impl(&self, theta: f64, x: f64, k: i64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let sweep = self.build_sweep(theta, k);
        if self.eval_sweep(&sweep, 0.0, false) >= x {
            return 0.0;
        }
        let mut lo = 0.0;
        let mut hi = 1.0;
        while hi - lo > H_TOL {
            let mid = 0.5 * (lo + hi);
            if self.eval_sweep(&sweep, mid, false) >= x {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Fibre factor map h_theta(x) = min { y | mu_theta\[0,y\] >= x }.
    pub fn h_fibre(&self, theta: f64, x: f64) -> f64 {
        self.quantile_impl(frac(theta), x, self.trunc)
    }

    /// Truncated factor map h^(k); converges uniformly to h as k grows.
    pub fn h_truncated(&self, k: i64, theta: f64, x: f64) -> Result<f64> {
        if k > self.trunc {
            return Err(Error::Domain {
                name: "k",
                value: k as f64,
                domain: "k <= trunc",
            });
        }
        Ok(self.quantile_impl(frac(theta), x, k))
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment(&self, n: i64) -> Option<&Segment> {
        if self.trunc < 0 || n.abs() > self.trunc {
            None
        } else {
            Some(&self.segments[(n + self.trunc) as usize])
        }
    }

    /// Segment endpoints over theta*_n, degenerating to a single point beyond
    /// the truncation range.
    pub fn segment_span(&self, n: i64) -> (f64, f64, f64) {
        if let Some(s) = self.segment(n) {
            return (s.fibre, s.lo, s.hi);
        }
        let position = frac(self.pinch.theta_star() + n as f64 * self.system.omega());
        let anchor = self.system.curve(position);
        let p = self.mu_cdf_impl(position, anchor, self.trunc, false);
        (position, p, p)
    }

    /// Upper boundary of the pinched set h^-1(Gamma) over theta.
    pub fn gamma_plus(&self, theta: f64) -> f64 {
        let theta = frac(theta);
        self.mu_cdf(theta, self.system.curve(theta))
    }

    /// Lower boundary of the pinched set over theta.
    pub fn gamma_minus(&self, theta: f64) -> f64 {
        let theta = frac(theta);
        self.mu_cdf_left(theta, self.system.curve(theta))
    }

    /// The extension fhat. Off blown-up fibres the second coordinate is
    /// mu_{theta+omega}[0, f_theta(h_theta(x))); on a blown-up fibre the
    /// segment S_n is carried onto S_{n+1} affinely, matching the outer
    /// branch at both endpoints.
    pub fn fhat(&self, theta: f64, x: f64) -> (f64, f64) {
        let theta = frac(theta);
        let x = x.clamp(0.0, 1.0);
        let th2 = frac(theta + self.system.omega());
        if let Some(n) = self.blown_fibre(theta) {
            if let Some(s) = self.segment(n) {
                if x >= s.lo && x <= s.hi && s.hi > s.lo {
                    let t = (x - s.lo) / (s.hi - s.lo);
                    let (_, lo2, hi2) = self.segment_span(n + 1);
                    return (th2, lo2 + t * (hi2 - lo2));
                }
            }
        }
        let v = self.h_fibre(theta, x);
        let img = self.system.fibre(theta, v).clamp(0.0, 1.0);
        (th2, self.mu_cdf_left(th2, img))
    }

    /// Inverse extension: mirror of [`Self::fhat`] with the backward rotation
    /// and fibre inverses; S_n is carried onto S_{n-1}.
    pub fn fhat_inv(&self, theta: f64, x: f64) -> (f64, f64) {
        let theta = frac(theta);
        let x = x.clamp(0.0, 1.0);
        let th2 = frac(theta - self.system.omega());
        if let Some(n) = self.blown_fibre(theta) {
            if let Some(s) = self.segment(n) {
                if x >= s.lo && x <= s.hi && s.hi > s.lo {
                    let t = (x - s.lo) / (s.hi - s.lo);
                    let (_, lo2, hi2) = self.segment_span(n - 1);
                    return (th2, lo2 + t * (hi2 - lo2));
                }
            }
        }
        let v = self.h_fibre(theta, x);
        let img = self.system.fibre_inv(th2, v).clamp(0.0, 1.0);
        (th2, self.mu_cdf_left(th2, img))
    }

    /// |h(fhat(theta, x)) - f(h(theta, x))| in the fibre coordinate.
    pub fn semiconjugacy_residual(&self, theta: f64, x: f64) -> f64 {
        let (th2, x2) = self.fhat(theta, x);
        let lhs = self.h_fibre(th2, x2);
        let rhs = self.system.fibre(frac(theta), self.h_fibre(theta, x));
        (lhs - rhs).abs()
    }

    /// One-sided limit difference of theta -> mu_theta\[0, gamma(theta)\] across
    /// theta*, extrapolated along delta = 2^-j. Converges to the central atom
    /// weight in one-sided mode.
    pub fn discontinuity_jump(&self, approach_count: u32) -> Result<JumpEstimate> {
        if self.pinch.mode() != PinchMode::OneSided {
            return Err(Error::Precondition(
                "the one-sided limit difference needs one-sided pinch functions".into(),
            ));
        }
        let star = self.pinch.theta_star();
        let j_lo = 5u32;
        let j_hi = approach_count.clamp(j_lo + 3, 40);
        let mut samples = Vec::new();
        let mut diffs = Vec::new();
        for j in j_lo..=j_hi {
            let delta = 0.5f64.powi(j as i32);
            let left = frac(star - delta);
            let right = frac(star + delta);
            let d = self.mu_cdf_left(left, self.system.curve(left))
                - self.mu_cdf(right, self.system.curve(right));
            samples.push((delta, d));
            diffs.push(d);
        }
        // Richardson step assuming a leading error term linear in delta.
        let m = diffs.len();
        let ext_last = 2.0 * diffs[m - 1] - diffs[m - 2];
        let ext_prev = 2.0 * diffs[m - 2] - diffs[m - 3];
        if (ext_last - ext_prev).abs() > 5e-7 {
            return Err(Error::NonConvergent(diffs));
        }
        Ok(JumpEstimate {
            estimate: ext_last,
            samples,
        })
    }

    /// K sample points of the unique minimal set: the forward orbit of the
    /// lower endpoint of S_0 plus the backward orbit, the latter re-projected
    /// onto the pinched fibre interval each step (the true backward orbit
    /// stays inside it; the projection only removes the exponential growth of
    /// round-off under the expanding fibre inverses).
    pub fn minimal_set_sample(&self, k: usize) -> Vec<(f64, f64)> {
        let (theta0, lo0, _) = self.segment_span(0);
        let mut out = Vec::with_capacity(k);
        let fwd = k.div_ceil(2);
        let mut p = (theta0, lo0);
        for _ in 0..fwd {
            out.push(p);
            p = self.fhat(p.0, p.1);
        }
        let mut p = (theta0, lo0);
        for _ in fwd..k {
            p = self.fhat_inv(p.0, p.1);
            let lo = self.gamma_minus(p.0);
            let hi = self.gamma_plus(p.0);
            p.1 = p.1.clamp(lo, hi);
            out.push(p);
        }
        out
    }

    /// Distance of (theta, x) from the pinched set, measured through h.
    pub fn pinched_set_residual(&self, theta: f64, x: f64) -> f64 {
        (self.h_fibre(theta, x) - self.system.curve(frac(theta))).abs()
    }

    /// Fibrewise inf/sup envelopes of a minimal-set sample plus the
    /// filled-in / non-filled-in verdict probes around segment S_0.
    pub fn filled_in_envelope(&self, sample: &[(f64, f64)], bins: usize) -> Result<EnvelopeReport> {
        let bins_n = bins.max(8);
        let mut acc: Vec<(f64, f64, usize)> = vec![(f64::INFINITY, f64::NEG_INFINITY, 0); bins_n];
        for &(theta, x) in sample {
            let b = ((frac(theta) * bins_n as f64) as usize).min(bins_n - 1);
            acc[b].0 = acc[b].0.min(x);
            acc[b].1 = acc[b].1.max(x);
            acc[b].2 += 1;
        }
        let bins_out: Vec<(f64, f64, f64, usize)> = acc
            .iter()
            .enumerate()
            .filter(|(_, e)| e.2 > 0)
            .map(|(i, e)| ((i as f64 + 0.5) / bins_n as f64, e.0, e.1, e.2))
            .collect();

        let star = self.pinch.theta_star();
        let (_, lo0, hi0) = self.segment_span(0);
        let mid = 0.5 * (lo0 + hi0);
        let theta_window = 1e-3;
        let near: Vec<f64> = sample
            .iter()
            .filter(|&&(theta, _)| circle::dist(theta, star) <= theta_window)
            .map(|&(_, x)| x)
            .collect();
        if near.len() < 10 {
            return Ok(EnvelopeReport {
                bins: bins_out,
                verdict: EnvelopeVerdict::Inconclusive,
                midpoint_margin: f64::NAN,
                segment_cover_gap: f64::NAN,
                near_samples: near.len(),
            });
        }
        let midpoint_margin = near
            .iter()
            .map(|x| (x - mid).abs())
            .fold(f64::INFINITY, f64::min);

        // Coverage of the whole segment by samples in the torus metric.
        let heights = 64;
        let mut cover_gap = 0.0f64;
        for i in 0..=heights {
            let h = lo0 + (hi0 - lo0) * i as f64 / heights as f64;
            let d = sample
                .iter()
                .map(|&(theta, x)| circle::dist(theta, star).max((x - h).abs()))
                .fold(f64::INFINITY, f64::min);
            cover_gap = cover_gap.max(d);
        }

        let a0 = self.weights.weight(0);
        let verdict = if midpoint_margin >= 0.25 * a0 && cover_gap > 1e-2 {
            EnvelopeVerdict::NonFilledIn
        } else if cover_gap <= 1e-2 {
            EnvelopeVerdict::FilledIn
        } else {
            EnvelopeVerdict::Inconclusive
        };
        Ok(EnvelopeReport {
            bins: bins_out,
            verdict,
            midpoint_margin,
            segment_cover_gap: cover_gap,
            near_samples: near.len(),
        })
    }

    /// Envelope of fhat^depth applied to the full annulus over one fibre,
    /// computed by walking the exact base orbit (no grid interpolation).
    pub fn attractor_envelope(&self, theta: f64, depth: usize) -> (f64, f64) {
        let theta = frac(theta);
        let mut path = Vec::with_capacity(depth);
        let mut t = theta;
        for _ in 0..depth {
            t = frac(t - self.system.omega());
            path.push(t);
        }
        path.reverse();
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        for &t in &path {
            lo = self.fhat(t, lo).1;
            hi = self.fhat(t, hi).1;
        }
        (lo, hi)
    }

    /// Attractor envelopes over a fibre grid; requires the annulus to map
    /// strictly inside itself.
    pub fn global_attractor(&self, thetas: &[f64], depth: usize) -> Result<Vec<AttractorEnvelope>> {
        let margin = self.system.contraction_margin(256);
        if margin <= 0.0 {
            return Err(Error::NoContraction(margin));
        }
        Ok(thetas
            .iter()
            .map(|&theta| {
                let (lower, upper) = self.attractor_envelope(theta, depth);
                AttractorEnvelope {
                    theta: frac(theta),
                    lower,
                    upper,
                }
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn standard(trunc: i64) -> BlownUpSystem {
        BlownUpSystem::standard(PinchMode::OneSided, trunc).unwrap()
    }

    #[test]
    fn mu0_is_dirac_on_pinch_fibre() {
        let b = standard(10);
        let star = b.theta_star();
        let anchor = b.system().curve(star);
        assert_eq!(b.mu0_cdf(star, anchor + 1e-9).unwrap(), 1.0);
        assert_eq!(b.mu0_cdf(star, anchor).unwrap(), 1.0);
        assert_eq!(b.mu0_cdf(star, anchor - 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn mu0_band_endpoints_and_midpoint() {
        let b = standard(10);
        let theta = frac(b.theta_star() + 0.31);
        let (lo, hi) = (b.pinch().psi(theta), b.pinch().phi(theta));
        assert_eq!(b.mu0_cdf(theta, lo).unwrap(), 0.0);
        assert_eq!(b.mu0_cdf(theta, hi).unwrap(), 1.0);
        let m = b.mu0_cdf(theta, 0.5 * (lo + hi)).unwrap();
        assert!((m - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mun_reduces_to_mu0_and_respects_curve_invariance() {
        let b = standard(10);
        let mut rng = SplitMix64::new(11);
        for _ in 0..50 {
            let theta = rng.next_f64();
            let y = rng.next_f64();
            let direct = b.mun_cdf(0, theta, y).unwrap();
            let base = b.mu0_cdf(theta, y).unwrap();
            assert!((direct - base).abs() < 1e-14);
        }
        // At y = gamma(theta) the n-step pull-back sits at the pulled-back
        // curve point; oracle = direct evaluation of mu^0 there.
        for n in [-7i64, -2, 1, 5, 10] {
            for _ in 0..20 {
                let theta = rng.next_f64();
                let y = b.system().curve(theta);
                let lhs = b.mun_cdf(n, theta, y).unwrap();
                let th_src = frac(theta - n as f64 * b.omega());
                let rhs = b.mu0_cdf(th_src, b.system().curve(th_src)).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-9,
                    "n = {n}, theta = {theta}: {lhs} vs {rhs}"
                );
            }
        }
        assert!(b.mun_cdf(11, 0.3, 0.5).is_err());
    }

    #[test]
    fn mun_monotone_in_y() {
        let b = standard(10);
        for n in [-5i64, 0, 3] {
            let theta = 0.123;
            let mut prev = -1.0;
            for i in 0..=200 {
                let y = i as f64 / 200.0;
                let v = b.mun_cdf(n, theta, y).unwrap();
                assert!(v >= prev - 1e-15);
                prev = v;
            }
        }
    }

    #[test]
    fn mu_cdf_normalized_and_monotone() {
        let b = standard(20);
        let mut rng = SplitMix64::new(12);
        for _ in 0..30 {
            let theta = rng.next_f64();
            assert_eq!(b.mu_cdf(theta, 0.0), 0.0);
            assert!((b.mu_cdf(theta, 1.0) - 1.0).abs() < 1e-12);
            let mut prev = -1.0;
            for i in 0..=100 {
                let y = i as f64 / 100.0;
                let v = b.mu_cdf(theta, y);
                assert!(v >= prev - 1e-15);
                prev = v;
            }
        }
    }

    #[test]
    fn mu_jump_on_blown_fibre_equals_weight() {
        let b = standard(20);
        for n in [-10i64, -3, 0, 1, 8] {
            let s = b.segment(n).unwrap();
            let jump = b.mu_cdf(s.fibre, s.anchor) - b.mu_cdf_left(s.fibre, s.anchor);
            let a_n = b.weights().weight(n);
            assert!(
                (jump - a_n).abs() < 1e-13 + 2.0 * b.tail(),
                "n = {n}: jump {jump} vs weight {a_n}"
            );
        }
    }

    #[test]
    fn mu_continuous_off_atoms() {
        let b = standard(10);
        // Refining grids around an atom-free fibre: max increment shrinks.
        let theta = frac(b.theta_star() + 0.4111);
        let mut prev_max = f64::INFINITY;
        for &grid in &[200usize, 2000, 20000] {
            let mut max_inc = 0.0f64;
            let mut prev = b.mu_cdf(theta, 0.0);
            for i in 1..=grid {
                let v = b.mu_cdf(theta, i as f64 / grid as f64);
                max_inc = max_inc.max(v - prev);
                prev = v;
            }
            assert!(max_inc < prev_max);
            prev_max = max_inc;
        }
        assert!(prev_max < 1e-2);
    }

    #[test]
    fn segment_widths_match_atom_masses() {
        let b = standard(20);
        for s in b.segments() {
            let a_n = b.weights().weight(s.index);
            assert!(
                (s.width() - a_n).abs() <= 1e-13 + 2.0 * b.tail(),
                "segment {}: width {} vs weight {}",
                s.index,
                s.width(),
                a_n
            );
        }
        // Distinct fibres for distinct indices.
        for pair in b.segments().windows(2) {
            assert!(circle::dist(pair[0].fibre, pair[1].fibre) > 1e-6);
        }
    }

    #[test]
    fn h_fibre_endpoints_and_plateau() {
        let b = standard(20);
        let mut rng = SplitMix64::new(13);
        for _ in 0..20 {
            let theta = rng.next_f64();
            assert_eq!(b.h_fibre(theta, 0.0), 0.0);
            assert!((b.h_fibre(theta, 1.0) - 1.0).abs() < 1e-10);
        }
        // The preimage of gamma(theta*_n) under h has width a_n.
        let s = b.segment(0).unwrap();
        let inside = b.h_fibre(s.fibre, s.midpoint());
        assert!((inside - s.anchor).abs() < 1e-10);
        let just_below = b.h_fibre(s.fibre, s.lo - 1e-6);
        let just_above = b.h_fibre(s.fibre, s.hi + 1e-6);
        assert!(just_below < s.anchor && s.anchor < just_above);
    }

    #[test]
    fn h_strictly_increasing_off_blown_fibres() {
        let b = standard(10);
        let theta = frac(b.theta_star() + 0.377);
        let mut prev = 0.0;
        for i in 1..=500 {
            let x = i as f64 / 500.0;
            let h = b.h_fibre(theta, x);
            assert!(h > prev, "h plateaued at generic fibre, x = {x}");
            prev = h;
        }
    }

    #[test]
    fn h_truncated_converges_monotonically() {
        let b = standard(20);
        let mut rng = SplitMix64::new(14);
        let pts: Vec<(f64, f64)> = (0..200).map(|_| (rng.next_f64(), rng.next_f64())).collect();
        let mut prev_gap = f64::INFINITY;
        for k in [0i64, 2, 5, 10, 15] {
            let gap = pts
                .iter()
                .map(|&(t, x)| (b.h_truncated(k, t, x).unwrap() - b.h_fibre(t, x)).abs())
                .fold(0.0f64, f64::max);
            assert!(
                gap <= prev_gap + 1e-12,
                "sup gap grew at k = {k}: {gap} > {prev_gap}"
            );
            // Quantile stability: |h^(k) - h| <= 2 tail(k) / leb floor.
            assert!(
                gap <= 4.0 * b.weights().tail(k) + 1e-9,
                "k = {k}: gap {gap}"
            );
            prev_gap = gap;
        }
        assert!(
            b.h_truncated(20, 0.3, 0.7).unwrap() == b.h_fibre(0.3, 0.7),
            "k = trunc must reproduce h exactly"
        );
        assert!(b.h_truncated(21, 0.3, 0.7).is_err());
    }

    #[test]
    fn fhat_semiconjugate_to_base_system() {
        let b = standard(20);
        let mut rng = SplitMix64::new(15);
        let mut sup = 0.0f64;
        for _ in 0..500 {
            let theta = rng.next_f64();
            let x = rng.next_f64();
            sup = sup.max(b.semiconjugacy_residual(theta, x));
        }
        assert!(sup < 1e-8 + 2.0 * b.tail(), "sup residual {sup}");
    }

    #[test]
    fn fhat_round_trip() {
        let b = standard(20);
        let mut rng = SplitMix64::new(16);
        for _ in 0..300 {
            let theta = rng.next_f64();
            let x = rng.next_f64();
            let (t1, x1) = b.fhat(theta, x);
            let (t0, x0) = b.fhat_inv(t1, x1);
            assert!(circle::dist(t0, theta) < 1e-12);
            assert!((x0 - x).abs() < 1e-8, "round trip {x} -> {x0}");
        }
    }

    #[test]
    fn fhat_carries_segments_endpoint_to_endpoint() {
        let b = standard(20);
        for n in -19i64..19 {
            let s = b.segment(n).unwrap();
            let s2 = b.segment(n + 1).unwrap();
            let (th_lo, lo_img) = b.fhat(s.fibre, s.lo);
            let (_, hi_img) = b.fhat(s.fibre, s.hi);
            assert!(circle::dist(th_lo, s2.fibre) < 1e-12);
            assert!((lo_img - s2.lo).abs() < 1e-8, "lower endpoint, n = {n}");
            assert!((hi_img - s2.hi).abs() < 1e-8, "upper endpoint, n = {n}");
        }
    }

    #[test]
    fn discontinuity_jump_measures_central_weight() {
        let b = standard(20);
        let jump = b.discontinuity_jump(32).unwrap();
        assert!(
            (jump.estimate - 0.25).abs() < 2.0 * b.tail() + 1e-6,
            "estimate {}",
            jump.estimate
        );
        // Halving the central weight halves the jump.
        let sys = ForcedIntervalSystem::standard();
        let pinch = PinchFunctions::standard(PinchMode::OneSided, sys.curve_oracle());
        let half = BlownUpSystem::new(
            sys,
            pinch,
            WeightSequence::geometric(0.125, 1.0 / 3.0).unwrap(),
            20,
        )
        .unwrap();
        let jump_half = half.discontinuity_jump(32).unwrap();
        assert!((jump_half.estimate - 0.125).abs() < 1e-6);
    }

    #[test]
    fn discontinuity_jump_vanishes_without_blowup() {
        let b = standard(-1);
        let jump = b.discontinuity_jump(32).unwrap();
        assert!(jump.estimate.abs() < 1e-9, "estimate {}", jump.estimate);
    }

    #[test]
    fn discontinuity_jump_requires_one_sided_mode() {
        let b = BlownUpSystem::standard(PinchMode::Oscillating, 10).unwrap();
        assert!(b.discontinuity_jump(30).is_err());
    }

    #[test]
    fn no_blowup_degenerates_to_identity_factor() {
        let b = standard(-1);
        let mut rng = SplitMix64::new(17);
        for _ in 0..50 {
            let theta = rng.next_f64();
            let x = rng.next_f64();
            assert!((b.mu_cdf(theta, x) - x).abs() < 1e-15);
            assert!((b.h_fibre(theta, x) - x).abs() < 1e-12);
            let (_, x2) = b.fhat(theta, x);
            let direct = b.system().fibre(theta, x);
            assert!((x2 - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_envelopes_follow_the_curve() {
        // Without blow-up the minimal set is the curve itself: every sample
        // sits on it and the segment is fully covered.
        let b = standard(-1);
        let sample = b.minimal_set_sample(30_000);
        for &(theta, x) in &sample {
            let expected = b.mu_cdf(theta, b.system().curve(theta));
            assert!((x - expected).abs() < 1e-9, "sample off the curve image");
        }
        let report = b.filled_in_envelope(&sample, 64).unwrap();
        assert_eq!(report.verdict, EnvelopeVerdict::FilledIn);
        for &(theta, lower, upper, _) in &report.bins {
            let _ = theta;
            assert!(
                upper - lower < 2e-2,
                "bin envelope spread {}",
                upper - lower
            );
        }
    }

    #[test]
    fn minimal_set_sample_stays_on_pinched_set() {
        let b = standard(20);
        let sample = b.minimal_set_sample(400);
        for &(theta, x) in &sample {
            assert!(
                b.pinched_set_residual(theta, x) < 1e-8,
                "sample off pinched set at theta = {theta}, x = {x}"
            );
        }
    }

    #[test]
    fn attractor_pinches_generic_fibres_but_not_the_segment() {
        let b = standard(20);
        let star = b.theta_star();
        // Depth 0 is the full fibre.
        let (lo, hi) = b.attractor_envelope(0.3, 0);
        assert_eq!((lo, hi), (0.0, 1.0));
        // Generic fibre collapses at rate lambda^depth.
        let (lo, hi) = b.attractor_envelope(frac(star + 0.4), 30);
        assert!(hi - lo < 1e-3, "generic width {}", hi - lo);
        // The blown-up fibre keeps at least the segment.
        let (lo, hi) = b.attractor_envelope(star, 30);
        assert!(
            hi - lo >= b.weights().weight(0) - 2.0 * b.tail() - 1e-9,
            "segment fibre width {}",
            hi - lo
        );
    }
}
