//! Denjoy-type circle homeomorphisms built by blowing up a rotation orbit.
//!
//! A blow-up measure nu = sum a_n delta_{x_n} + b Leb over the orbit
//! x_n = x_0 + n*omega turns, through its quantile map h, into a circle
//! homeomorphism f = h^{-1} o R o h with wandering intervals I_n = h^{-1}{x_n}.
//! The atoms are truncated to |n| <= N and the dropped tail mass is folded
//! into the Lebesgue coefficient, so nu stays an exact probability measure
//! and every assertion about the ideal system widens by at most tail(N).

use crate::circle::{self, frac};
use crate::error::{Error, Result};
use crate::measure::{Atom, HybridMeasure};
use crate::weights::WeightSequence;

/// Bisection tolerance for the factor map. Kept near the f64 resolution:
/// the off-gap branch misattributes the adjacent atom mass on a band of this
/// width next to each gap edge, so tightening it shrinks those bands to
/// measure ~1e-13 of the circle.
const H_TOL: f64 = 1e-15;

/// A blown-up gap I_n = \[left, right\] collapsing to the orbit point x_n.
#[derive(Clone, Copy, Debug)]
pub struct Gap {
    pub index: i64,
    pub left: f64,
    pub right: f64,
    pub weight: f64,
}

impl Gap {
    pub fn length(&self) -> f64 {
        self.right - self.left
    }
}

pub struct DenjoySystem {
    omega: f64,
    basepoint: f64,
    weights: WeightSequence,
    trunc: i64,
    nu: HybridMeasure,
    /// Gaps ordered by index n = -N..=N.
    gaps: Vec<Gap>,
    /// Same gaps ordered by position, for membership lookup.
    by_position: Vec<Gap>,
    leb_coeff: f64,
}

impl DenjoySystem {
    /// Builds the blow-up measure and gap system. `trunc = -1` disables the
    /// blow-up entirely (nu = Lebesgue, h = identity, f = rotation).
    pub fn new(omega: f64, basepoint: f64, weights: WeightSequence, trunc: i64) -> Result<Self> {
        if !circle::is_numerically_irrational(omega) {
            return Err(Error::RationalAngle(omega));
        }
        let tail = weights.tail(trunc);
        let leb_coeff = weights.lebesgue_coeff() + tail;
        let mut atoms = Vec::new();
        if trunc >= 0 {
            for n in -trunc..=trunc {
                let pos = frac(basepoint + n as f64 * omega);
                let d = circle::dist(pos, 0.0);
                if d < 1e-9 {
                    return Err(Error::OrbitHitsCut {
                        dist: d,
                        suggestion: frac(basepoint + 0.01),
                    });
                }
                atoms.push(Atom {
                    position: pos,
                    mass: weights.weight(n),
                });
            }
        }
        let nu = HybridMeasure::atoms_plus_uniform(atoms, leb_coeff, tail)?;
        let mut gaps = Vec::new();
        if trunc >= 0 {
            for n in -trunc..=trunc {
                let pos = frac(basepoint + n as f64 * omega);
                let (left, right) = nu.preimage_interval(pos)?;
                gaps.push(Gap {
                    index: n,
                    left,
                    right,
                    weight: weights.weight(n),
                });
            }
        }
        let mut by_position = gaps.clone();
        by_position.sort_by(|a, b| a.left.partial_cmp(&b.left).unwrap());
        Ok(Self {
            omega,
            basepoint,
            weights,
            trunc,
            nu,
            gaps,
            by_position,
            leb_coeff,
        })
    }

    /// Defaults: golden rotation, x0 = 0.1, a_n = (1/4) 3^-|n|, N = 40.
    pub fn standard() -> Result<Self> {
        Self::new(
            circle::golden_mean(),
            0.1,
            WeightSequence::default_quarter(),
            40,
        )
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn basepoint(&self) -> f64 {
        self.basepoint
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn nu(&self) -> &HybridMeasure {
        &self.nu
    }

    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    pub fn leb_coeff(&self) -> f64 {
        self.leb_coeff
    }

    /// Orbit point x_n.
    pub fn orbit_point(&self, n: i64) -> f64 {
        frac(self.basepoint + n as f64 * self.omega)
    }

    pub fn gap(&self, n: i64) -> Option<&Gap> {
        if self.trunc < 0 || n.abs() > self.trunc {
            None
        } else {
            Some(&self.gaps[(n + self.trunc) as usize])
        }
    }

    /// Gap containing y (endpoints included), if any.
    pub fn gap_containing(&self, y: f64) -> Option<&Gap> {
        let idx = self.by_position.partition_point(|g| g.left <= y);
        if idx == 0 {
            return None;
        }
        let g = &self.by_position[idx - 1];
        (y <= g.right).then_some(g)
    }

    /// The semiconjugacy h: quantile of nu. Collapses each gap I_n to x_n and
    /// satisfies h(0) = 0.
    pub fn factor_map(&self, y: f64) -> f64 {
        let v = self
            .nu
            .quantile(y.clamp(0.0, 1.0), H_TOL)
            .expect("nu has full support by construction");
        if v >= 1.0 {
            0.0
        } else {
            v
        }
    }

    /// Left-continuous inverse of h off the gaps: nu[0, x).
    fn section(&self, x: f64) -> f64 {
        self.nu
            .cdf_left(x.clamp(0.0, 1.0))
            .expect("x clamped into domain")
    }

    /// Image of the gap with index n+1, degenerate beyond the truncation.
    fn gap_or_point(&self, n: i64) -> (f64, f64) {
        match self.gap(n) {
            Some(g) => (g.left, g.right),
            None => {
                let p = self.section(self.orbit_point(n));
                (p, p)
            }
        }
    }

    /// The Denjoy homeomorphism. Off gaps this is nu[0, h(y) + omega); each
    /// gap I_n is carried onto I_{n+1} affinely, which matches the outer
    /// branch at both endpoints.
    pub fn forward(&self, y: f64) -> f64 {
        let y = frac(y);
        if let Some(g) = self.gap_containing(y) {
            let (lo, hi) = self.gap_or_point(g.index + 1);
            let t = if g.right > g.left {
                (y - g.left) / (g.right - g.left)
            } else {
                0.0
            };
            return lo + t * (hi - lo);
        }
        self.section(frac(self.factor_map(y) + self.omega))
    }

    pub fn inverse(&self, y: f64) -> f64 {
        let y = frac(y);
        if let Some(g) = self.gap_containing(y) {
            let (lo, hi) = self.gap_or_point(g.index - 1);
            let t = if g.right > g.left {
                (y - g.left) / (g.right - g.left)
            } else {
                0.0
            };
            return lo + t * (hi - lo);
        }
        self.section(frac(self.factor_map(y) - self.omega))
    }

    /// Rotation number estimate of the forward map.
    pub fn rotation_number(&self, iters: u32) -> f64 {
        circle::rotation_number(|y| self.forward(y), 0.0, iters)
    }

    /// First k points of the forward orbit of the left endpoint of I_0
    /// (of nu[0, x_0) when the blow-up is disabled). The orbit stays on the
    /// complement of the open gaps.
    pub fn minimal_set_sample(&self, k: usize) -> Vec<f64> {
        let mut y = match self.gap(0) {
            Some(g) => g.left,
            None => self.section(self.orbit_point(0)),
        };
        let mut out = Vec::with_capacity(k);
        for _ in 0..k {
            out.push(y);
            y = self.forward(y);
        }
        out
    }

    /// True if y lies strictly inside some gap, with `margin` shaved off both
    /// ends to absorb orbit round-off.
    pub fn in_open_gap(&self, y: f64, margin: f64) -> bool {
        match self.gap_containing(y) {
            Some(g) => y > g.left + margin && y < g.right - margin,
            None => false,
        }
    }

    /// Total displacement of the q-th iterate along an orbit: lift^q(y) - y.
    pub fn lift_displacement(&self, y0: f64, q: u32) -> f64 {
        let mut y = frac(y0);
        let mut total = 0.0;
        for _ in 0..q {
            let fy = self.forward(y);
            total += frac(fy - y);
            y = fy;
        }
        total
    }
}
