//! Circle parametrization of the pinched set.
//!
//! The pinched set h^-1(Gamma) is a topological circle: stretching the base
//! by eta(theta) = b' theta + sum of atom weights below theta opens each
//! blown-up fibre into an interval, and
//!
//!   xi(t) = ( eta_hat(t), gamma_plus(eta_hat(t)) - (t - eta(eta_hat(t))) )
//!
//! walks it: along the curve off the blown-up fibres, down each vertical
//! segment across them. Conjugating fhat through xi produces a circle map
//! with wandering intervals and rotation number omega, which is how the
//! restricted dynamics are identified.

use crate::circle::{self, frac};

use super::BlownUpSystem;

const ETA_TOL: f64 = 1e-13;

pub struct PinchedTrace<'a> {
    sys: &'a BlownUpSystem,
    /// (position, weight) of the blown-up fibres, sorted by position.
    atoms: Vec<(f64, f64)>,
    /// prefix[i] = total weight of atoms[..i].
    prefix: Vec<f64>,
}

impl<'a> PinchedTrace<'a> {
    pub fn new(sys: &'a BlownUpSystem) -> Self {
        let mut atoms: Vec<(f64, f64)> = sys
            .segments()
            .iter()
            .map(|s| (s.fibre, sys.weights().weight(s.index)))
            .collect();
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut prefix = Vec::with_capacity(atoms.len() + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for a in &atoms {
            acc += a.1;
            prefix.push(acc);
        }
        Self { sys, atoms, prefix }
    }

    /// eta(theta) = b' theta + sum of weights at fibres strictly below theta.
    pub fn eta(&self, theta: f64) -> f64 {
        let theta = frac(theta);
        let idx = self.atoms.partition_point(|a| a.0 < theta);
        self.sys.leb_coeff() * theta + self.prefix[idx]
    }

    /// Right-continuous companion (atom at theta included).
    fn eta_right(&self, theta: f64) -> f64 {
        let theta = frac(theta);
        let idx = self.atoms.partition_point(|a| a.0 <= theta);
        self.sys.leb_coeff() * theta + self.prefix[idx]
    }

    /// Generalized inverse eta_hat(t) = inf { theta | eta(theta) >= t }.
    pub fn eta_hat(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        if self.eta_right(0.0) >= t {
            return 0.0;
        }
        let mut lo = 0.0;
        let mut hi = 1.0;
        while hi - lo > ETA_TOL {
            let mid = 0.5 * (lo + hi);
            if self.eta_right(mid) >= t {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // For t inside a jump the bisection stops a hair above the atom
        // fibre; snap down so that eta(eta_hat(t)) excludes the jump and the
        // plateau slack comes out in [0, a_n].
        let idx = self.atoms.partition_point(|a| a.0 < hi);
        if idx > 0 && (hi - self.atoms[idx - 1].0).abs() < 1e-11 {
            return self.atoms[idx - 1].0;
        }
        if idx < self.atoms.len() && (self.atoms[idx].0 - hi).abs() < 1e-11 {
            return self.atoms[idx].0;
        }
        hi
    }

    /// The parametrization of the pinched set.
    pub fn xi(&self, t: f64) -> (f64, f64) {
        let theta = self.eta_hat(frac(t));
        let slack = frac(t) - self.eta(theta);
        (theta, self.sys.gamma_plus(theta) - slack.max(0.0))
    }

    /// Inverse parametrization for points on the pinched set.
    pub fn xi_inv(&self, theta: f64, x: f64) -> f64 {
        frac(self.eta(theta) + (self.sys.gamma_plus(theta) - x))
    }

    /// The conjugated circle map xi^-1 o fhat o xi.
    pub fn circle_map(&self, t: f64) -> f64 {
        let (theta, x) = self.xi(t);
        let (theta2, x2) = self.sys.fhat(theta, x);
        self.xi_inv(theta2, x2)
    }

    pub fn rotation_number(&self, iters: u32) -> f64 {
        circle::rotation_number(|t| self.circle_map(t), 0.0, iters)
    }
}
