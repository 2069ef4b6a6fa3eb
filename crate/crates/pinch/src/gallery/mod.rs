//! Derived counterexamples built on the blow-up machinery: the surgery
//! producing a forced interval map with a three-periodic curve but no
//! invariant curve, and the point-distal, non-distal torus homeomorphism.

mod rees;
mod sharkovsky;

pub use rees::{DistalityRecord, ReesSystem};
pub use sharkovsky::{BasinReport, CurveAbsenceCertificate, SurgerySystem};

use crate::error::{Error, Result};

/// Piecewise-linear interval map; exact at its knots.
#[derive(Clone, Debug)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Precondition("need at least two knots".into()));
        }
        for pair in knots.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::Precondition(format!(
                    "knot abscissae must strictly increase ({} then {})",
                    pair[0].0, pair[1].0
                )));
            }
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if x <= self.knots[0].0 {
            return self.knots[0].1;
        }
        if x >= self.knots[n - 1].0 {
            return self.knots[n - 1].1;
        }
        // Exact values at knots, linear interpolation between.
        let idx = self.knots.partition_point(|k| k.0 <= x);
        let (x0, y0) = self.knots[idx - 1];
        if x == x0 {
            return y0;
        }
        let (x1, y1) = self.knots[idx];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn iterate(&self, x: f64, times: u32) -> f64 {
        let mut y = x;
        for _ in 0..times {
            y = self.eval(y);
        }
        y
    }
}

/// The interval map driving the surgery: exact 3-cycle 0 -> 1/2 -> 1 -> 0
/// and a unique, attracting fixed point with slope in (0, 1).
///
/// Knots: (0, 1/2), (1/2, 1), (5/8, 0.64), (3/4, 0.70), (1, 0). The map
/// descends from 1 after the half point, stays just above the diagonal until
/// 5/8, crosses it once on the slow ascending stretch \[5/8, 3/4\] (slope
/// 0.48), and descends to 0 afterwards; the crossing x0 = 17/26 is the only
/// fixed point and is attracting.
pub fn three_cycle_map() -> PiecewiseLinear {
    PiecewiseLinear::new(vec![
        (0.0, 0.5),
        (0.5, 1.0),
        (0.625, 0.64),
        (0.75, 0.70),
        (1.0, 0.0),
    ])
    .expect("knots are strictly increasing")
}

/// The fixed point of [`three_cycle_map`].
pub fn three_cycle_fixed_point() -> f64 {
    17.0 / 26.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cycle_is_exact() {
        let g = three_cycle_map();
        assert_eq!(g.eval(0.0), 0.5);
        assert_eq!(g.eval(0.5), 1.0);
        assert_eq!(g.eval(1.0), 0.0);
        assert_eq!(g.iterate(0.0, 3), 0.0);
        assert_eq!(g.iterate(0.5, 3), 0.5);
        assert_eq!(g.iterate(1.0, 3), 1.0);
    }

    #[test]
    fn unique_fixed_point_is_attracting() {
        let g = three_cycle_map();
        let x0 = three_cycle_fixed_point();
        assert!((g.eval(x0) - x0).abs() < 1e-15);
        // Attracting: strictly increasing near x0 with slope < 1.
        for eps in [1e-3, 1e-2, 3e-2] {
            assert!((g.eval(x0 + eps) - x0).abs() < eps);
            assert!((g.eval(x0 - eps) - x0).abs() < eps);
            assert!(g.eval(x0 + eps) > g.eval(x0 - eps));
        }
        let slope = (g.eval(x0 + 1e-3) - g.eval(x0 - 1e-3)) / 2e-3;
        assert!((slope - 0.48).abs() < 1e-12);
    }

    #[test]
    fn exactly_one_diagonal_crossing() {
        let g = three_cycle_map();
        let mut changes = 0;
        let mut prev = (g.eval(1e-6) - 1e-6).signum();
        for i in 1..10_000 {
            let x = i as f64 / 10_000.0;
            let s = (g.eval(x) - x).signum();
            if s != prev && s != 0.0 {
                changes += 1;
                prev = s;
            }
        }
        assert_eq!(changes, 1, "g(x) - x must change sign exactly once");
    }

    #[test]
    fn no_three_periodic_points_in_the_trap() {
        let g = three_cycle_map();
        let x0 = three_cycle_fixed_point();
        // On [0.63, 0.74] the only fixed point of g^3 is x0 itself.
        let mut crossings = Vec::new();
        let n = 2000;
        let mut prev = (g.iterate(0.63, 3) - 0.63).signum();
        for i in 1..=n {
            let x = 0.63 + 0.11 * i as f64 / n as f64;
            let s = (g.iterate(x, 3) - x).signum();
            if s != prev {
                crossings.push(x);
                prev = s;
            }
        }
        assert_eq!(crossings.len(), 1);
        assert!((crossings[0] - x0).abs() < 1e-3);
    }

    #[test]
    fn trap_interval_bullets() {
        let g = three_cycle_map();
        let (a_minus, a_plus) = (0.63, 0.74);
        let x0 = three_cycle_fixed_point();
        assert!(a_minus < g.eval(a_minus));
        assert!(g.eval(a_minus) < x0);
        assert!(x0 < g.eval(a_plus));
        assert!(g.eval(a_plus) < a_plus);
    }
}
