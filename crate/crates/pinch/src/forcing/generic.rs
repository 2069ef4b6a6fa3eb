//! The blow-up extension over a generic base system.
//!
//! Same measure family as the concrete circle version (atoms on the orbit
//! of the pinch point, normalized uniform bands elsewhere, Lebesgue floor,
//! endpoint-fixing transport extension) with the base accessed only through
//! the [`BaseSystem`] trait. Fibre maps are the affine curve-anchored family
//! f_theta(x) = gamma(alpha(theta)) + lambda (x - gamma(theta)).

use crate::error::{Error, Result};
use crate::weights::WeightSequence;

use super::{BaseSystem, PointFn};

const EXACT_FIBRE_TOL: f64 = 1e-13;
const H_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug)]
pub struct GeneralSegment<P> {
    pub index: i64,
    pub fibre: P,
    pub anchor: f64,
    pub lo: f64,
    pub hi: f64,
}

impl<P> GeneralSegment<P> {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Clone, Copy, Debug)]
enum GTermKind {
    Band { lo: f64, width: f64 },
    Step { at: f64 },
    AtomQuery { anchor: f64 },
    AtomPath { anchor: f64 },
}

#[derive(Clone, Copy, Debug)]
struct GTerm<P> {
    weight: f64,
    kind: GTermKind,
    th: P,
    v_lo: f64,
    v_hi: f64,
}

struct GSweep<P> {
    term0: (f64, GTermKind),
    back: Vec<GTerm<P>>,
    fwd: Vec<GTerm<P>>,
}

pub struct GeneralBlownUp<B: BaseSystem> {
    base: B,
    center: B::Point,
    curve: PointFn<B>,
    phi: PointFn<B>,
    psi: PointFn<B>,
    lambda: f64,
    weights: WeightSequence,
    trunc: i64,
    leb_coeff: f64,
    orbit: Vec<(B::Point, f64)>,
    segments: Vec<GeneralSegment<B::Point>>,
    cap_lo: f64,
    cap_hi: f64,
    certify_minimality: bool,
}

impl<B: BaseSystem> GeneralBlownUp<B> {
    /// Builds the extension over `base`. `horizon` bounds the aperiodicity
    /// scan of the pinch point (return distance must stay above 1e-12).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        base: B,
        center: B::Point,
        curve: PointFn<B>,
        phi: PointFn<B>,
        psi: PointFn<B>,
        lambda: f64,
        weights: WeightSequence,
        trunc: i64,
        horizon: u64,
    ) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::Domain {
                name: "lambda",
                value: lambda,
                domain: "(0, 1)",
            });
        }
        let mut p = center;
        for n in 1..=horizon {
            p = base.step(&p);
            let d = base.dist(&p, &center);
            if d < 1e-12 {
                return Err(Error::PeriodicBasePoint {
                    period: n,
                    horizon,
                    dist: d,
                });
            }
        }
        let leb_coeff = weights.lebesgue_coeff() + weights.tail(trunc);
        let mut orbit = Vec::new();
        if trunc >= 0 {
            for n in -trunc..=trunc {
                let pos = base.advance(&center, n);
                orbit.push((pos, curve(&pos)));
            }
        }
        // Transport caps from an orbit sample of the band range and the
        // fibre images of the interval endpoints.
        let mut band_lo = f64::INFINITY;
        let mut band_hi = f64::NEG_INFINITY;
        let mut img_lo = f64::INFINITY;
        let mut img_hi = f64::NEG_INFINITY;
        let mut probe = base.origin();
        for _ in 0..512 {
            probe = base.step(&probe);
            band_lo = band_lo.min(psi(&probe));
            band_hi = band_hi.max(phi(&probe));
            let g0 = curve(&probe);
            let g1 = curve(&base.step(&probe));
            img_lo = img_lo.min(g1 - lambda * g0);
            img_hi = img_hi.max(g1 + lambda * (1.0 - g0));
        }
        let cap_lo = (0.5 * band_lo.min(img_lo)).max(0.0);
        let cap_hi = (0.5 * (1.0 + band_hi.max(img_hi))).min(1.0);
        let mut me = Self {
            base,
            center,
            curve,
            phi,
            psi,
            lambda,
            weights,
            trunc,
            leb_coeff,
            orbit,
            segments: Vec::new(),
            cap_lo,
            cap_hi,
            certify_minimality: true,
        };
        me.certify_minimality = me.base.is_minimal() && me.base.is_almost_periodic();
        let mut segments = Vec::with_capacity(me.orbit.len());
        for (i, &(pos, anchor)) in me.orbit.iter().enumerate() {
            let n = i as i64 - me.trunc.max(0);
            segments.push(GeneralSegment {
                index: n,
                fibre: pos,
                anchor,
                lo: me.mu_cdf_impl(&pos, anchor, true),
                hi: me.mu_cdf_impl(&pos, anchor, false),
            });
        }
        me.segments = segments;
        Ok(me)
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn center(&self) -> B::Point {
        self.center
    }

    pub fn curve(&self, theta: &B::Point) -> f64 {
        (self.curve)(theta)
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn tail(&self) -> f64 {
        self.weights.tail(self.trunc)
    }

    pub fn leb_coeff(&self) -> f64 {
        self.leb_coeff
    }

    /// False when the base flags rule out the minimality/almost-periodicity
    /// certificates (the pinched-set geometry still holds).
    pub fn certifies_minimality(&self) -> bool {
        self.certify_minimality
    }

    pub fn segments(&self) -> &[GeneralSegment<B::Point>] {
        &self.segments
    }

    pub fn segment(&self, n: i64) -> Option<&GeneralSegment<B::Point>> {
        if self.trunc < 0 || n.abs() > self.trunc {
            None
        } else {
            Some(&self.segments[(n + self.trunc) as usize])
        }
    }

    pub fn blown_fibre(&self, theta: &B::Point) -> Option<i64> {
        for (i, (pos, _)) in self.orbit.iter().enumerate() {
            if self.base.dist(pos, theta) < EXACT_FIBRE_TOL {
                return Some(i as i64 - self.trunc);
            }
        }
        None
    }

    fn fibre_fwd(&self, theta: &B::Point, x: f64) -> f64 {
        let g0 = (self.curve)(theta);
        let g1 = (self.curve)(&self.base.step(theta));
        g1 + self.lambda * (x - g0)
    }

    fn fibre_inv(&self, theta: &B::Point, y: f64) -> f64 {
        let g0 = (self.curve)(theta);
        let g1 = (self.curve)(&self.base.step(theta));
        g0 + (y - g1) / self.lambda
    }

    fn classify(&self, th: &B::Point, blown: Option<i64>, index: i64) -> GTermKind {
        if blown == Some(index) {
            return GTermKind::AtomQuery {
                anchor: self.orbit[(index + self.trunc) as usize].1,
            };
        }
        if self.base.dist(th, &self.center) < EXACT_FIBRE_TOL {
            return GTermKind::AtomPath {
                anchor: (self.curve)(&self.center),
            };
        }
        let lo = (self.psi)(th);
        let w = (self.phi)(th) - lo;
        if w <= 0.0 {
            GTermKind::Step { at: lo }
        } else {
            GTermKind::Band { lo, width: w }
        }
    }

    /// Precomputes the y-independent sweep data for one fibre (the quantile
    /// bisection re-evaluates the CDF tens of times per call).
    fn build_sweep(&self, theta: &B::Point) -> GSweep<B::Point> {
        let mut sweep = GSweep {
            term0: (0.0, GTermKind::Step { at: 0.0 }),
            back: Vec::new(),
            fwd: Vec::new(),
        };
        if self.trunc < 0 {
            return sweep;
        }
        let blown = self.blown_fibre(theta);
        sweep.term0 = (self.weights.weight(0), self.classify(theta, blown, 0));
        let chords = |th: &B::Point| -> (f64, f64) {
            let v_lo = if self.cap_lo > 0.0 {
                self.fibre_fwd(th, self.cap_lo)
            } else {
                f64::NAN
            };
            let v_hi = if self.cap_hi < 1.0 {
                self.fibre_fwd(th, self.cap_hi)
            } else {
                f64::NAN
            };
            (v_lo, v_hi)
        };
        let mut th = *theta;
        for n in 1..=self.trunc {
            th = self.base.step_back(&th);
            let (v_lo, v_hi) = chords(&th);
            sweep.back.push(GTerm {
                weight: self.weights.weight(n),
                kind: self.classify(&th, blown, n),
                th,
                v_lo,
                v_hi,
            });
        }
        let mut th = *theta;
        for m in 1..=self.trunc {
            let src = th;
            let (v_lo, v_hi) = chords(&src);
            th = self.base.step(&th);
            sweep.fwd.push(GTerm {
                weight: self.weights.weight(-m),
                kind: self.classify(&th, blown, -m),
                th: src,
                v_lo,
                v_hi,
            });
        }
        sweep
    }

    fn term_value(kind: &GTermKind, y: f64, z: f64, strict: bool) -> f64 {
        match *kind {
            GTermKind::Band { lo, width } => ((z - lo) / width).clamp(0.0, 1.0),
            GTermKind::Step { at } => {
                if z >= at {
                    1.0
                } else {
                    0.0
                }
            }
            GTermKind::AtomQuery { anchor } => {
                let hit = if strict { y > anchor } else { y >= anchor };
                if hit {
                    1.0
                } else {
                    0.0
                }
            }
            GTermKind::AtomPath { anchor } => {
                let hit = if strict { z > anchor } else { z >= anchor };
                if hit {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn eval_sweep(&self, sweep: &GSweep<B::Point>, y: f64, strict: bool) -> f64 {
        let y = y.clamp(0.0, 1.0);
        let mut sum = self.leb_coeff * y;
        if self.trunc < 0 {
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
                self.fibre_inv(&t.th, z)
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
                self.fibre_fwd(&t.th, z)
            };
            sum += t.weight * Self::term_value(&t.kind, y, z, strict);
        }
        sum.clamp(0.0, 1.0)
    }

    fn mu_cdf_impl(&self, theta: &B::Point, y: f64, strict: bool) -> f64 {
        let sweep = self.build_sweep(theta);
        self.eval_sweep(&sweep, y, strict)
    }

    pub fn mu_cdf(&self, theta: &B::Point, y: f64) -> f64 {
        self.mu_cdf_impl(theta, y, false)
    }

    pub fn mu_cdf_left(&self, theta: &B::Point, y: f64) -> f64 {
        self.mu_cdf_impl(theta, y, true)
    }

    pub fn h_fibre(&self, theta: &B::Point, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let sweep = self.build_sweep(theta);
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

    pub fn gamma_plus(&self, theta: &B::Point) -> f64 {
        self.mu_cdf(theta, (self.curve)(theta))
    }

    pub fn gamma_minus(&self, theta: &B::Point) -> f64 {
        self.mu_cdf_left(theta, (self.curve)(theta))
    }

    fn segment_span(&self, n: i64) -> (B::Point, f64, f64) {
        if let Some(s) = self.segment(n) {
            return (s.fibre, s.lo, s.hi);
        }
        let pos = self.base.advance(&self.center, n);
        let p = self.mu_cdf_impl(&pos, (self.curve)(&pos), false);
        (pos, p, p)
    }

    pub fn fhat(&self, theta: &B::Point, x: f64) -> (B::Point, f64) {
        let x = x.clamp(0.0, 1.0);
        let th2 = self.base.step(theta);
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
        let img = self.fibre_fwd(theta, v).clamp(0.0, 1.0);
        (th2, self.mu_cdf_left(&th2, img))
    }

    pub fn fhat_inv(&self, theta: &B::Point, x: f64) -> (B::Point, f64) {
        let x = x.clamp(0.0, 1.0);
        let th2 = self.base.step_back(theta);
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
        let img = self.fibre_inv(&th2, v).clamp(0.0, 1.0);
        (th2, self.mu_cdf_left(&th2, img))
    }

    pub fn semiconjugacy_residual(&self, theta: &B::Point, x: f64) -> f64 {
        let (th2, x2) = self.fhat(theta, x);
        let lhs = self.h_fibre(&th2, x2);
        let rhs = self.fibre_fwd(theta, self.h_fibre(theta, x));
        (lhs - rhs).abs()
    }

    /// Width of the pinched-set fibre over theta.
    pub fn pinched_width(&self, theta: &B::Point) -> f64 {
        self.gamma_plus(theta) - self.gamma_minus(theta)
    }
}
