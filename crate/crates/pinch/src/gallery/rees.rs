//! Point-distal, non-distal torus homeomorphisms.
//!
//! A rigid torus rotation (theta, x) -> (theta + omega, x + rho) is blown up
//! along the orbit of one point z* = (theta*, x*): cut the torus along
//! T^1 x {0}, run the fibre-measure construction on the resulting annulus
//! with circle-valued fibres, and glue back. The fibre measures put the atom
//! of weight a_n at x* + n rho on the fibre theta* + n omega and uniform
//! bands around the transported center elsewhere; since the fibre maps are
//! rotations the transport is exact arc arithmetic. No atom may sit on the
//! cut line, which is exactly the condition for the glued map to be
//! continuous across x = 0.
//!
//! Points inside one vertical segment are squeezed together along the orbit
//! (the segment lengths a_n decay), so they are non-distal pairs; everything
//! off the segments keeps a positive Lebesgue floor between its h-images and
//! stays distal.

use crate::circle::{self, frac};
use crate::error::{Error, Result};
use crate::skew::PinchFunctions;
use crate::weights::WeightSequence;

const EXACT_FIBRE_TOL: f64 = 1e-13;
const H_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug)]
pub struct ReesSegment {
    pub index: i64,
    /// Base fibre theta*_n.
    pub fibre: f64,
    /// Atom position x* + n rho on the fibre circle.
    pub atom: f64,
    pub lo: f64,
    pub hi: f64,
}

impl ReesSegment {
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DistalityRecord {
    /// Min torus distance over n in \[-horizon, horizon\] and its argmin.
    pub min_two_sided: f64,
    pub argmin_two_sided: i64,
    /// Forward-only companion (n in \[0, horizon\]).
    pub min_forward: f64,
    pub argmin_forward: i64,
}

#[derive(Clone, Copy, Debug)]
enum ReesTerm {
    Atom { at: f64 },
    Band { lo: f64, width: f64 },
}

pub struct ReesSystem {
    omega: f64,
    rho: f64,
    theta_star: f64,
    x_star: f64,
    weights: WeightSequence,
    trunc: i64,
    leb_coeff: f64,
    pinch: PinchFunctions,
    /// (theta*_n, atom position) indexed by n + trunc.
    orbit: Vec<(f64, f64)>,
    /// Base fibre positions sorted for membership lookup: (position, index).
    sorted: Vec<(f64, i64)>,
    segments: Vec<ReesSegment>,
}

/// Mass of \[0, y\] under the uniform distribution on the arc starting at
/// `lo` of length `width` (the arc may wrap through the cut).
fn wrapped_uniform_mass(lo: f64, width: f64, y: f64) -> f64 {
    if width <= 0.0 {
        return if lo <= y { 1.0 } else { 0.0 };
    }
    let hi = lo + width;
    if hi <= 1.0 {
        ((y - lo).clamp(0.0, width)) / width
    } else {
        let head = y.min(hi - 1.0); // portion of [0, y] inside [0, hi-1)
        let tail = (y - lo).max(0.0); // portion inside [lo, 1)
        (head + tail) / width
    }
}

impl ReesSystem {
    pub fn new(
        omega: f64,
        rho: f64,
        theta_star: f64,
        x_star: f64,
        weights: WeightSequence,
        trunc: i64,
    ) -> Result<Self> {
        if !circle::rationally_independent(omega, rho) {
            return Err(Error::RationallyDependent { omega, rho });
        }
        let theta_star = frac(theta_star);
        let x_star = frac(x_star);
        let leb_coeff = weights.lebesgue_coeff() + weights.tail(trunc);
        let mut orbit = Vec::new();
        if trunc >= 0 {
            for n in -trunc..=trunc {
                let atom = frac(x_star + n as f64 * rho);
                let d = circle::dist(atom, 0.0);
                if d < 1e-9 {
                    return Err(Error::OrbitHitsCut {
                        dist: d,
                        suggestion: frac(x_star + 0.01),
                    });
                }
                orbit.push((frac(theta_star + n as f64 * omega), atom));
            }
        }
        let mut sorted: Vec<(f64, i64)> = orbit
            .iter()
            .enumerate()
            .map(|(i, &(pos, _))| (pos, i as i64 - trunc.max(0)))
            .collect();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        // Band profile on the cut circle around the constant height x*; any
        // profile with the three band properties works here, so the one-sided
        // tents are reused.
        let x_const = x_star;
        let pinch =
            PinchFunctions::one_sided(theta_star, std::sync::Arc::new(move |_| x_const), 0.25)?;
        let mut me = Self {
            omega,
            rho,
            theta_star,
            x_star,
            weights,
            trunc,
            leb_coeff,
            pinch,
            orbit,
            sorted,
            segments: Vec::new(),
        };
        let mut segments = Vec::with_capacity(me.orbit.len());
        for (i, &(pos, atom)) in me.orbit.iter().enumerate() {
            segments.push(ReesSegment {
                index: i as i64 - me.trunc.max(0),
                fibre: pos,
                atom,
                lo: me.cdf_impl(pos, atom, true),
                hi: me.cdf_impl(pos, atom, false),
            });
        }
        me.segments = segments;
        Ok(me)
    }

    /// Defaults: golden base frequency, rho = sqrt(2) - 1, z* = (1/4, 0.3).
    pub fn standard(trunc: i64) -> Result<Self> {
        Self::new(
            circle::golden_mean(),
            std::f64::consts::SQRT_2 - 1.0,
            0.25,
            0.3,
            WeightSequence::default_quarter(),
            trunc,
        )
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn blow_up_point(&self) -> (f64, f64) {
        (self.theta_star, self.x_star)
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

    pub fn segments(&self) -> &[ReesSegment] {
        &self.segments
    }

    pub fn segment(&self, n: i64) -> Option<&ReesSegment> {
        if self.trunc < 0 || n.abs() > self.trunc {
            None
        } else {
            Some(&self.segments[(n + self.trunc) as usize])
        }
    }

    pub fn blown_fibre(&self, theta: f64) -> Option<i64> {
        if self.sorted.is_empty() {
            return None;
        }
        let n = self.sorted.len();
        let idx = self.sorted.partition_point(|s| s.0 < theta);
        for cand in [idx % n, (idx + n - 1) % n] {
            if circle::dist(self.sorted[cand].0, theta) < EXACT_FIBRE_TOL {
                return Some(self.sorted[cand].1);
            }
        }
        None
    }

    /// Precomputed fibre measure: band positions and atoms do not depend on
    /// the query height, so the quantile bisection reuses them.
    fn build_terms(&self, theta: f64) -> Vec<(f64, ReesTerm)> {
        let mut terms = Vec::with_capacity(self.orbit.len());
        if self.trunc < 0 {
            return terms;
        }
        let blown = self.blown_fibre(theta);
        for (i, &(_, atom)) in self.orbit.iter().enumerate() {
            let n = i as i64 - self.trunc;
            let a_n = self.weights.weight(n);
            if blown == Some(n) {
                terms.push((a_n, ReesTerm::Atom { at: atom }));
                continue;
            }
            // Band of mu^n at this fibre: the mu^0 band at theta - n omega,
            // rotated by n rho around the fibre circle.
            let src = frac(theta - n as f64 * self.omega);
            let lo = self.pinch.psi(src);
            let width = self.pinch.phi(src) - lo;
            let lo_rot = frac(lo + n as f64 * self.rho);
            terms.push((a_n, ReesTerm::Band { lo: lo_rot, width }));
        }
        terms
    }

    fn eval_terms(&self, terms: &[(f64, ReesTerm)], y: f64, strict: bool) -> f64 {
        let y = y.clamp(0.0, 1.0);
        let mut sum = self.leb_coeff * y;
        for &(a_n, term) in terms {
            match term {
                ReesTerm::Atom { at } => {
                    let hit = if strict { at < y } else { at <= y };
                    if hit {
                        sum += a_n;
                    }
                }
                ReesTerm::Band { lo, width } => {
                    sum += a_n * wrapped_uniform_mass(lo, width, y);
                }
            }
        }
        sum.clamp(0.0, 1.0)
    }

    /// Fibre CDF mu_theta(arc \[0, y\]) in cut coordinates; `strict` excludes
    /// an atom sitting exactly at y.
    fn cdf_impl(&self, theta: f64, y: f64, strict: bool) -> f64 {
        self.eval_terms(&self.build_terms(theta), y, strict)
    }

    pub fn cdf(&self, theta: f64, y: f64) -> f64 {
        self.cdf_impl(frac(theta), y, false)
    }

    pub fn cdf_left(&self, theta: f64, y: f64) -> f64 {
        self.cdf_impl(frac(theta), y, true)
    }

    /// Fibre factor map anchored at the cut: h_theta(0) = 0.
    pub fn h_fibre(&self, theta: f64, x: f64) -> f64 {
        let theta = frac(theta);
        let x = x.clamp(0.0, 1.0);
        let terms = self.build_terms(theta);
        if self.eval_terms(&terms, 0.0, false) >= x {
            return 0.0;
        }
        let mut lo = 0.0;
        let mut hi = 1.0;
        while hi - lo > H_TOL {
            let mid = 0.5 * (lo + hi);
            if self.eval_terms(&terms, mid, false) >= x {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if hi >= 1.0 {
            0.0
        } else {
            hi
        }
    }

    fn segment_span(&self, n: i64) -> (f64, f64) {
        if let Some(s) = self.segment(n) {
            return (s.lo, s.hi);
        }
        let pos = frac(self.theta_star + n as f64 * self.omega);
        let atom = frac(self.x_star + n as f64 * self.rho);
        let p = self.cdf_impl(pos, atom, false);
        (p, p)
    }

    /// The glued torus homeomorphism.
    pub fn apply(&self, theta: f64, x: f64) -> (f64, f64) {
        let theta = frac(theta);
        let x = frac(x);
        let th2 = frac(theta + self.omega);
        if let Some(n) = self.blown_fibre(theta) {
            if let Some(s) = self.segment(n) {
                if x >= s.lo && x <= s.hi && s.hi > s.lo {
                    let t = (x - s.lo) / (s.hi - s.lo);
                    let (lo2, hi2) = self.segment_span(n + 1);
                    return (th2, lo2 + t * (hi2 - lo2));
                }
            }
        }
        let v = self.h_fibre(theta, x);
        (th2, self.cdf_impl(th2, frac(v + self.rho), true))
    }

    pub fn apply_inv(&self, theta: f64, x: f64) -> (f64, f64) {
        let theta = frac(theta);
        let x = frac(x);
        let th2 = frac(theta - self.omega);
        if let Some(n) = self.blown_fibre(theta) {
            if let Some(s) = self.segment(n) {
                if x >= s.lo && x <= s.hi && s.hi > s.lo {
                    let t = (x - s.lo) / (s.hi - s.lo);
                    let (lo2, hi2) = self.segment_span(n - 1);
                    return (th2, lo2 + t * (hi2 - lo2));
                }
            }
        }
        let v = self.h_fibre(theta, x);
        (th2, self.cdf_impl(th2, frac(v - self.rho), true))
    }

    /// |h(fhat(p)) - R(h(p))| on the torus, R the product rotation.
    pub fn semiconjugacy_residual(&self, theta: f64, x: f64) -> f64 {
        let (th2, x2) = self.apply(theta, x);
        let lhs = self.h_fibre(th2, x2);
        let rhs = frac(self.h_fibre(theta, x) + self.rho);
        circle::dist(lhs, rhs)
    }

    /// Continuity defect across the glue line x = 0 at one fibre.
    pub fn glue_residual(&self, theta: f64) -> f64 {
        let (_, a) = self.apply(theta, 0.0);
        let (_, b) = self.apply(theta, 1.0 - 1e-9);
        circle::dist(a, b)
    }

    pub fn torus_dist(a: (f64, f64), b: (f64, f64)) -> f64 {
        circle::dist(a.0, b.0).max(circle::dist(a.1, b.1))
    }

    /// Min torus distance between the orbits of p and q within the horizon,
    /// scanning both time directions.
    pub fn distality_probe(&self, p: (f64, f64), q: (f64, f64), horizon: u32) -> DistalityRecord {
        let mut rec = DistalityRecord {
            min_two_sided: Self::torus_dist(p, q),
            argmin_two_sided: 0,
            min_forward: Self::torus_dist(p, q),
            argmin_forward: 0,
        };
        let mut fp = p;
        let mut fq = q;
        for n in 1..=horizon {
            fp = self.apply(fp.0, fp.1);
            fq = self.apply(fq.0, fq.1);
            let d = Self::torus_dist(fp, fq);
            if d < rec.min_forward {
                rec.min_forward = d;
                rec.argmin_forward = n as i64;
            }
            if d < rec.min_two_sided {
                rec.min_two_sided = d;
                rec.argmin_two_sided = n as i64;
            }
        }
        let mut bp = p;
        let mut bq = q;
        for n in 1..=horizon {
            bp = self.apply_inv(bp.0, bp.1);
            bq = self.apply_inv(bq.0, bq.1);
            let d = Self::torus_dist(bp, bq);
            if d < rec.min_two_sided {
                rec.min_two_sided = d;
                rec.argmin_two_sided = -(n as i64);
            }
        }
        rec
    }

    /// A point of the blown-up invariant set off the segments: the h-preimage
    /// of (theta, x* level) at a generic fibre.
    pub fn invariant_point(&self, theta: f64) -> (f64, f64) {
        let theta = frac(theta);
        (theta, self.cdf_impl(theta, self.x_star, true))
    }
}
