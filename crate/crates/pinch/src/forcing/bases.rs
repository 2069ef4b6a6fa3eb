//! Shipped base systems: circle rotation, two-torus translation, and the
//! binary odometer. All three are minimal almost periodic isometries.

use crate::circle::{self, frac};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

use super::BaseSystem;

#[derive(Clone, Copy, Debug)]
pub struct CircleRotation {
    omega: f64,
}

impl CircleRotation {
    pub fn new(omega: f64) -> Result<Self> {
        if !circle::is_numerically_irrational(omega) {
            return Err(Error::RationalAngle(omega));
        }
        Ok(Self { omega })
    }

    pub fn golden() -> Self {
        Self::new(circle::golden_mean()).expect("golden mean is irrational")
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

impl BaseSystem for CircleRotation {
    type Point = f64;

    fn step(&self, p: &f64) -> f64 {
        frac(p + self.omega)
    }

    fn step_back(&self, p: &f64) -> f64 {
        frac(p - self.omega)
    }

    fn dist(&self, a: &f64, b: &f64) -> f64 {
        circle::dist(*a, *b)
    }

    fn displacement(&self, n: u64) -> f64 {
        circle::dist(frac(n as f64 * self.omega), 0.0)
    }

    fn is_minimal(&self) -> bool {
        true
    }

    fn is_almost_periodic(&self) -> bool {
        true
    }

    fn origin(&self) -> f64 {
        0.0
    }

    fn sample(&self, rng: &mut SplitMix64) -> f64 {
        rng.next_f64()
    }

    fn approach_pair(&self, center: &f64, n: u32) -> (f64, f64) {
        let d = 3.0f64.powi(-(n as i32));
        (frac(center + d), frac(center - d))
    }

    fn advance(&self, p: &f64, n: i64) -> f64 {
        frac(p + n as f64 * self.omega)
    }
}

/// Translation by a rationally independent vector on T^2; metric is the max
/// of the coordinate arc distances.
#[derive(Clone, Copy, Debug)]
pub struct TorusTranslation {
    omega1: f64,
    omega2: f64,
}

impl TorusTranslation {
    pub fn new(omega1: f64, omega2: f64) -> Result<Self> {
        if !circle::rationally_independent(omega1, omega2) {
            return Err(Error::RationallyDependent {
                omega: omega1,
                rho: omega2,
            });
        }
        Ok(Self { omega1, omega2 })
    }

    /// Golden mean and sqrt(2) - 1.
    pub fn standard() -> Self {
        Self::new(circle::golden_mean(), std::f64::consts::SQRT_2 - 1.0)
            .expect("standard torus frequencies are independent")
    }

    pub fn frequencies(&self) -> (f64, f64) {
        (self.omega1, self.omega2)
    }
}

impl BaseSystem for TorusTranslation {
    type Point = [f64; 2];

    fn step(&self, p: &[f64; 2]) -> [f64; 2] {
        [frac(p[0] + self.omega1), frac(p[1] + self.omega2)]
    }

    fn step_back(&self, p: &[f64; 2]) -> [f64; 2] {
        [frac(p[0] - self.omega1), frac(p[1] - self.omega2)]
    }

    fn dist(&self, a: &[f64; 2], b: &[f64; 2]) -> f64 {
        circle::dist(a[0], b[0]).max(circle::dist(a[1], b[1]))
    }

    fn displacement(&self, n: u64) -> f64 {
        circle::dist(frac(n as f64 * self.omega1), 0.0)
            .max(circle::dist(frac(n as f64 * self.omega2), 0.0))
    }

    fn is_minimal(&self) -> bool {
        true
    }

    fn is_almost_periodic(&self) -> bool {
        true
    }

    fn origin(&self) -> [f64; 2] {
        [0.0, 0.0]
    }

    fn sample(&self, rng: &mut SplitMix64) -> [f64; 2] {
        [rng.next_f64(), rng.next_f64()]
    }

    fn approach_pair(&self, center: &[f64; 2], n: u32) -> ([f64; 2], [f64; 2]) {
        let d = 3.0f64.powi(-(n as i32));
        (
            [frac(center[0] + d), frac(center[1] + d)],
            [frac(center[0] - d), frac(center[1] - d)],
        )
    }

    fn advance(&self, p: &[f64; 2], n: i64) -> [f64; 2] {
        [
            frac(p[0] + n as f64 * self.omega1),
            frac(p[1] + n as f64 * self.omega2),
        ]
    }
}

/// Binary adding machine on truncated 2-adic expansions.
///
/// A point is the first `depth` binary digits packed into a u64 (bit 0 =
/// first coordinate); the map adds one with carry, which is exact integer
/// arithmetic. d(s, t) = 2^-(first disagreeing digit) makes it an isometry.
#[derive(Clone, Copy, Debug)]
pub struct Odometer {
    depth: u32,
    mask: u64,
}

impl Odometer {
    pub fn new(depth: u32) -> Result<Self> {
        if !(1..=64).contains(&depth) {
            return Err(Error::Domain {
                name: "depth",
                value: depth as f64,
                domain: "[1, 64]",
            });
        }
        let mask = if depth == 64 {
            u64::MAX
        } else {
            (1u64 << depth) - 1
        };
        Ok(Self { depth, mask })
    }

    pub fn standard() -> Self {
        Self::new(64).expect("depth 64 is valid")
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }
}

impl BaseSystem for Odometer {
    type Point = u64;

    fn step(&self, p: &u64) -> u64 {
        p.wrapping_add(1) & self.mask
    }

    fn step_back(&self, p: &u64) -> u64 {
        p.wrapping_sub(1) & self.mask
    }

    fn dist(&self, a: &u64, b: &u64) -> f64 {
        let x = (a ^ b) & self.mask;
        if x == 0 {
            0.0
        } else {
            2.0f64.powi(-(x.trailing_zeros() as i32))
        }
    }

    fn displacement(&self, n: u64) -> f64 {
        // Adding n flips digit v_2(n) at every point, so the sup equals the
        // pointwise value.
        let n = n & self.mask;
        if n == 0 {
            0.0
        } else {
            2.0f64.powi(-(n.trailing_zeros() as i32))
        }
    }

    fn is_minimal(&self) -> bool {
        true
    }

    fn is_almost_periodic(&self) -> bool {
        true
    }

    fn origin(&self) -> u64 {
        0
    }

    fn sample(&self, rng: &mut SplitMix64) -> u64 {
        rng.next_u64() & self.mask
    }

    /// sigma_n flips digit 2n, tau_n flips digit 2n + 1: both agree with the
    /// center on longer and longer prefixes, and the parity split keeps the
    /// two sequences disjoint.
    fn approach_pair(&self, center: &u64, n: u32) -> (u64, u64) {
        let b = (2 * n).min(self.depth.saturating_sub(2));
        (center ^ (1u64 << b), center ^ (1u64 << (b + 1)))
    }

    fn advance(&self, p: &u64, n: i64) -> u64 {
        (p.wrapping_add_signed(n)) & self.mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_is_isometry() {
        let r = CircleRotation::golden();
        let mut rng = SplitMix64::new(1);
        for _ in 0..200 {
            let a = r.sample(&mut rng);
            let b = r.sample(&mut rng);
            let d0 = r.dist(&a, &b);
            let d1 = r.dist(&r.step(&a), &r.step(&b));
            assert!((d0 - d1).abs() < 1e-12);
        }
    }

    #[test]
    fn torus_is_isometry_with_exact_inverse() {
        let t = TorusTranslation::standard();
        let mut rng = SplitMix64::new(2);
        for _ in 0..200 {
            let a = t.sample(&mut rng);
            let b = t.sample(&mut rng);
            assert!((t.dist(&a, &b) - t.dist(&t.step(&a), &t.step(&b))).abs() < 1e-12);
            let round = t.step_back(&t.step(&a));
            assert!(t.dist(&a, &round) < 1e-12);
        }
    }

    #[test]
    fn torus_rejects_dependent_frequencies() {
        assert!(TorusTranslation::new(circle::golden_mean(), circle::golden_mean()).is_err());
    }

    #[test]
    fn odometer_carry_and_metric() {
        let o = Odometer::standard();
        assert_eq!(o.step(&0), 1);
        assert_eq!(o.step(&0b0111), 0b1000);
        assert_eq!(o.step(&u64::MAX), 0);
        assert_eq!(o.step_back(&0), u64::MAX);
        assert_eq!(o.dist(&0, &1), 1.0);
        assert_eq!(o.dist(&0, &0b100), 0.25);
        assert_eq!(o.dist(&5, &5), 0.0);
    }

    #[test]
    fn odometer_is_exact_isometry() {
        let o = Odometer::standard();
        let mut rng = SplitMix64::new(3);
        for _ in 0..500 {
            let a = o.sample(&mut rng);
            let b = o.sample(&mut rng);
            assert_eq!(o.dist(&a, &b), o.dist(&o.step(&a), &o.step(&b)));
        }
    }

    #[test]
    fn displacement_matches_brute_force_sup() {
        let mut rng = SplitMix64::new(4);
        let r = CircleRotation::golden();
        let t = TorusTranslation::standard();
        let o = Odometer::standard();
        for n in [1u64, 2, 3, 16, 55, 144] {
            let mut sup_r: f64 = 0.0;
            let mut sup_t: f64 = 0.0;
            let mut sup_o: f64 = 0.0;
            for _ in 0..100 {
                let p = r.sample(&mut rng);
                sup_r = sup_r.max(r.dist(&r.advance(&p, n as i64), &p));
                let q = t.sample(&mut rng);
                sup_t = sup_t.max(t.dist(&t.advance(&q, n as i64), &q));
                let w = o.sample(&mut rng);
                sup_o = sup_o.max(o.dist(&o.advance(&w, n as i64), &w));
            }
            assert!((sup_r - r.displacement(n)).abs() < 1e-9, "rotation n = {n}");
            assert!((sup_t - t.displacement(n)).abs() < 1e-9, "torus n = {n}");
            assert!(
                (sup_o - o.displacement(n)).abs() < 1e-15,
                "odometer n = {n}"
            );
        }
    }

    #[test]
    fn approach_pairs_shrink_and_stay_disjoint() {
        let o = Odometer::standard();
        let center = 0xdead_beef_u64;
        let mut prev_s = f64::INFINITY;
        let mut prev_t = f64::INFINITY;
        for n in 1..=20 {
            let (s, t) = o.approach_pair(&center, n);
            let ds = o.dist(&s, &center);
            let dt = o.dist(&t, &center);
            assert!(ds > 0.0 && dt > 0.0);
            assert!(ds < prev_s && dt < prev_t, "n = {n}");
            assert_ne!(s, t);
            prev_s = ds;
            prev_t = dt;
        }
    }
}
