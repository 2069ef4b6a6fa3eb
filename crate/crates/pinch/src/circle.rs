//! Cut-coordinate arithmetic on the circle R/Z.
//!
//! Points live in [0, 1). All constructions in this crate cut the circle at 0,
//! so wrap handling is centralised here.

/// Golden rotation angle (sqrt(5) - 1) / 2, the default driving frequency.
pub fn golden_mean() -> f64 {
    (5.0_f64.sqrt() - 1.0) / 2.0
}

/// Fractional part mapped into [0, 1).
#[inline]
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Distance on the circle: min arc length between two cut coordinates.
#[inline]
pub fn dist(a: f64, b: f64) -> f64 {
    let d = frac(a - b);
    d.min(1.0 - d)
}

/// Signed offset of `a` from `b`, in (-1/2, 1/2].
#[inline]
pub fn signed_offset(a: f64, b: f64) -> f64 {
    let d = frac(a - b);
    if d > 0.5 {
        d - 1.0
    } else {
        d
    }
}

/// Length of the counterclockwise arc from `a` to `b`.
#[inline]
pub fn arc_len(a: f64, b: f64) -> f64 {
    frac(b - a)
}

/// Checks that `omega` has no period q <= 1e6 within 1e-12, i.e. that
/// dist(q * omega, Z) > 1e-12 for all 1 <= q <= 1e6.
///
/// Uses Q64 fixed-point accumulation so the check is exact to ~2^-64 per
/// step; plain f64 products lose too many digits at q ~ 1e6.
pub fn is_numerically_irrational(omega: f64) -> bool {
    let w = frac(omega);
    if w == 0.0 {
        return false;
    }
    let step = (w * 18446744073709551616.0) as u128; // w * 2^64
    if step == 0 {
        return false;
    }
    let modulus: u128 = 1 << 64;
    let mut acc: u128 = 0;
    // 1e-12 in Q64 units
    let threshold = (1e-12 * 18446744073709551616.0) as u128;
    for _ in 0..1_000_000u32 {
        acc = (acc + step) & (modulus - 1);
        let d = acc.min(modulus - acc);
        if d <= threshold {
            return false;
        }
    }
    true
}

/// Checks that 1, omega, rho admit no integer relation p + q*omega + r*rho = 0
/// with |q|, |r| <= 1000 within 1e-10 (and (q, r) != (0, 0)).
pub fn rationally_independent(omega: f64, rho: f64) -> bool {
    for q in -1000i64..=1000 {
        for r in -1000i64..=1000 {
            if q == 0 && r == 0 {
                continue;
            }
            let v = q as f64 * omega + r as f64 * rho;
            if (v - v.round()).abs() <= 1e-10 {
                return false;
            }
        }
    }
    true
}

/// Rotation number estimate for an orientation-preserving circle map.
///
/// Accumulates the per-step displacement frac(f(y) - y) along an orbit. The
/// displacement selection is the continuous lift as long as the map has no
/// fixed point; for the identity the displacements are exactly zero. The
/// estimate satisfies |rho_est - rho| <= 1/iters for circle homeomorphisms.
pub fn rotation_number<F: Fn(f64) -> f64>(map: F, y0: f64, iters: u32) -> f64 {
    let mut y = frac(y0);
    let mut total = 0.0;
    for _ in 0..iters {
        let fy = frac(map(y));
        total += frac(fy - y);
        y = fy;
    }
    total / iters as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_wraps_into_unit_interval() {
        assert_eq!(frac(1.25), 0.25);
        assert_eq!(frac(-0.25), 0.75);
        assert_eq!(frac(3.0), 0.0);
        // A value whose fractional part rounds up to 1.0 must come back as 0.
        assert_eq!(frac(-1e-17), 0.0);
    }

    #[test]
    fn dist_is_min_arc() {
        assert!((dist(0.1, 0.9) - 0.2).abs() < 1e-15);
        assert!((dist(0.9, 0.1) - 0.2).abs() < 1e-15);
        assert_eq!(dist(0.4, 0.4), 0.0);
    }

    #[test]
    fn golden_mean_passes_irrationality_probe() {
        assert!(is_numerically_irrational(golden_mean()));
    }

    #[test]
    fn exact_rationals_fail_irrationality_probe() {
        assert!(!is_numerically_irrational(0.25));
        assert!(!is_numerically_irrational(355.0 / 113.0 - 3.0 + 0.0));
        assert!(!is_numerically_irrational(0.0));
    }

    #[test]
    fn independence_probe() {
        let omega = golden_mean();
        assert!(rationally_independent(
            omega,
            std::f64::consts::SQRT_2 - 1.0
        ));
        // rho = 1 - omega is a relation with q = r = 1.
        assert!(!rationally_independent(omega, 1.0 - omega));
        assert!(!rationally_independent(omega, omega));
    }

    #[test]
    fn rotation_number_of_rigid_rotation() {
        let w = golden_mean();
        let est = rotation_number(|y| frac(y + w), 0.3, 10_000);
        assert!((est - w).abs() <= 1.0 / 10_000.0 + 1e-12);
    }

    #[test]
    fn rotation_number_of_identity_is_zero() {
        let est = rotation_number(|y| y, 0.3, 1000);
        assert_eq!(est, 0.0);
    }
}
