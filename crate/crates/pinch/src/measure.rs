//! Hybrid measures on \[0,1\] (or the cut circle) evaluated through their CDF.
//!
//! A [`HybridMeasure`] is a finite list of atoms plus an absolutely continuous
//! part given as a monotone CDF oracle. Everything downstream (factor maps,
//! blown-up extensions, gap systems) is a composition of the four operations
//! here: `cdf`, `cdf_left`, `quantile` and `pushforward`. Exposing measures as
//! CDF closures keeps push-forward composition exact; no numerical
//! integration happens anywhere in the crate.

use std::sync::Arc;

use crate::circle::frac;
use crate::error::{Error, Result};

/// Mass-accounting slack allowed at construction time.
const MASS_TOL: f64 = 1e-12;

type CdfOracle = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type MapOracle = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub position: f64,
    pub mass: f64,
}

/// Probability measure with an atomic part and an absolutely continuous part.
///
/// The atomic list is a truncation of a possibly countable family; the mass of
/// the omitted atoms is certified to stay below `tail_bound` and callers widen
/// their tolerances accordingly.
#[derive(Clone)]
pub struct HybridMeasure {
    atoms: Vec<Atom>,      // sorted by position
    prefix_mass: Vec<f64>, // prefix_mass[i] = sum of masses of atoms[..i]
    ac_cdf: CdfOracle,
    total_mass: f64,
    tail_bound: f64,
    full_support: bool,
}

impl std::fmt::Debug for HybridMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HybridMeasure")
            .field("atoms", &self.atoms)
            .field("ac_mass", &(self.ac_cdf)(1.0))
            .field("total_mass", &self.total_mass)
            .field("tail_bound", &self.tail_bound)
            .field("full_support", &self.full_support)
            .finish()
    }
}

impl HybridMeasure {
    /// Assembles a measure from atoms and an AC part with F_ac(0) = 0.
    ///
    /// `full_support` asserts that the AC part is strictly increasing on
    /// \[0,1\]; it gates `quantile`, whose continuity needs it.
    pub fn new(
        mut atoms: Vec<Atom>,
        ac_cdf: CdfOracle,
        total_mass: f64,
        tail_bound: f64,
        full_support: bool,
    ) -> Result<Self> {
        atoms.sort_by(|a, b| a.position.partial_cmp(&b.position).unwrap());
        for pair in atoms.windows(2) {
            if pair[0].position == pair[1].position {
                return Err(Error::Precondition(format!(
                    "duplicate atom position {}",
                    pair[0].position
                )));
            }
        }
        let mut mass_sum = 0.0;
        for a in &atoms {
            if a.mass.is_nan() || a.mass <= 0.0 {
                return Err(Error::Precondition(format!(
                    "atom at {} has non-positive mass {}",
                    a.position, a.mass
                )));
            }
            if !(0.0..1.0).contains(&a.position) {
                return Err(Error::Domain {
                    name: "atom position",
                    value: a.position,
                    domain: "[0, 1)",
                });
            }
            mass_sum += a.mass;
        }
        let accounted = mass_sum + ac_cdf(1.0);
        let missing = total_mass - accounted;
        if missing < -MASS_TOL || missing > tail_bound + MASS_TOL {
            return Err(Error::Precondition(format!(
                "mass accounting failed: atoms + ac = {accounted}, total = {total_mass}, \
                 tail bound = {tail_bound}"
            )));
        }
        let mut prefix_mass = Vec::with_capacity(atoms.len() + 1);
        let mut acc = 0.0;
        prefix_mass.push(0.0);
        for a in &atoms {
            acc += a.mass;
            prefix_mass.push(acc);
        }
        Ok(Self {
            atoms,
            prefix_mass,
            ac_cdf,
            total_mass,
            tail_bound,
            full_support,
        })
    }

    /// Plain Lebesgue measure on \[0,1\].
    pub fn lebesgue() -> Self {
        Self::new(Vec::new(), Arc::new(|y: f64| y), 1.0, 0.0, true)
            .expect("lebesgue is a valid measure")
    }

    /// Atoms on top of `leb_coeff * Lebesgue`; the common blow-up shape.
    pub fn atoms_plus_uniform(atoms: Vec<Atom>, leb_coeff: f64, tail_bound: f64) -> Result<Self> {
        let mass: f64 = atoms.iter().map(|a| a.mass).sum();
        Self::new(
            atoms,
            Arc::new(move |y: f64| leb_coeff * y),
            mass + leb_coeff,
            tail_bound,
            leb_coeff > 0.0,
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn is_full_support(&self) -> bool {
        self.full_support
    }

    fn check_domain(y: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::Domain {
                name: "y",
                value: y,
                domain: "[0, 1]",
            });
        }
        Ok(())
    }

    /// Measure of \[0, y\]: right-continuous, nondecreasing.
    pub fn cdf(&self, y: f64) -> Result<f64> {
        Self::check_domain(y)?;
        let idx = self.atoms.partition_point(|a| a.position <= y);
        Ok((self.ac_cdf)(y) + self.prefix_mass[idx])
    }

    /// Measure of [0, y): excludes an atom sitting exactly at y.
    pub fn cdf_left(&self, y: f64) -> Result<f64> {
        Self::check_domain(y)?;
        let idx = self.atoms.partition_point(|a| a.position < y);
        Ok((self.ac_cdf)(y) + self.prefix_mass[idx])
    }

    /// Mass of the atom exactly at y (0.0 if none).
    pub fn atom_mass_at(&self, y: f64) -> f64 {
        match self
            .atoms
            .binary_search_by(|a| a.position.partial_cmp(&y).unwrap())
        {
            Ok(i) => self.atoms[i].mass,
            Err(_) => 0.0,
        }
    }

    /// Generalized inverse min { y | cdf(y) >= x }, located by bisection to
    /// absolute coordinate tolerance `tol`.
    ///
    /// Requires full topological support so the result is continuous in x.
    pub fn quantile(&self, x: f64, tol: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain {
                name: "x",
                value: x,
                domain: "[0, 1]",
            });
        }
        if !self.full_support {
            return Err(Error::Precondition(
                "quantile requires a measure of full topological support".into(),
            ));
        }
        if self.cdf(0.0)? >= x {
            return Ok(0.0);
        }
        // Invariant: cdf(lo) < x <= cdf(hi).
        let mut lo = 0.0;
        let mut hi = 1.0;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? >= x {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// \[cdf_left(y), cdf(y)\]: the quantile plateau over y. Degenerate exactly
    /// when y carries no atom.
    pub fn preimage_interval(&self, y: f64) -> Result<(f64, f64)> {
        Ok((self.cdf_left(y)?, self.cdf(y)?))
    }

    /// Transport under a monotone map: atoms move to g(position), the AC part
    /// composes with the inverse oracle. For circle maps the cut is re-anchored
    /// at g(0), i.e. the new CDF measures the arc \[g^{-1}(0), g^{-1}(y)\].
    pub fn pushforward(&self, g: &MonotoneMap) -> Result<HybridMeasure> {
        let moved: Result<Vec<Atom>> = self
            .atoms
            .iter()
            .map(|a| {
                let p = g.forward(a.position);
                if !p.is_finite() {
                    return Err(Error::Oracle(format!(
                        "forward map returned {p} at {}",
                        a.position
                    )));
                }
                let position = match g.domain {
                    MapDomain::Interval => p.clamp(0.0, 1.0 - f64::EPSILON),
                    MapDomain::Circle => frac(p),
                };
                Ok(Atom {
                    position,
                    mass: a.mass,
                })
            })
            .collect();
        let old_ac = self.ac_cdf.clone();
        let inv = g.inverse_oracle();
        let ac: CdfOracle = match g.domain {
            MapDomain::Interval => Arc::new(move |y: f64| old_ac(inv(y).clamp(0.0, 1.0))),
            MapDomain::Circle => {
                let cut = frac(inv(0.0));
                Arc::new(move |y: f64| {
                    if y >= 1.0 {
                        return old_ac(1.0);
                    }
                    let iy = frac(inv(y));
                    if iy >= cut {
                        old_ac(iy) - old_ac(cut)
                    } else {
                        old_ac(1.0) - old_ac(cut) + old_ac(iy)
                    }
                })
            }
        };
        let probe = ac(0.5);
        if !probe.is_finite() {
            return Err(Error::Oracle(format!("inverse map produced {probe}")));
        }
        HybridMeasure::new(
            moved?,
            ac,
            self.total_mass,
            self.tail_bound,
            self.full_support,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapDomain {
    Interval,
    Circle,
}

/// A continuous strictly increasing map with an explicit inverse oracle.
/// Circle maps are carried in cut coordinates; `domain` records the wrap
/// semantics used by push-forwards.
#[derive(Clone)]
pub struct MonotoneMap {
    forward: MapOracle,
    inverse: MapOracle,
    pub domain: MapDomain,
}

impl MonotoneMap {
    pub fn interval(
        forward: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            forward: Arc::new(forward),
            inverse: Arc::new(inverse),
            domain: MapDomain::Interval,
        }
    }

    pub fn circle(
        forward: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            forward: Arc::new(forward),
            inverse: Arc::new(inverse),
            domain: MapDomain::Circle,
        }
    }

    pub fn identity() -> Self {
        Self::interval(|y| y, |y| y)
    }

    /// Rigid rotation by `c` in cut coordinates.
    pub fn rotation(c: f64) -> Self {
        Self::circle(move |y| frac(y + c), move |y| frac(y - c))
    }

    pub fn forward(&self, y: f64) -> f64 {
        (self.forward)(y)
    }

    pub fn inverse(&self, y: f64) -> f64 {
        (self.inverse)(y)
    }

    fn inverse_oracle(&self) -> MapOracle {
        self.inverse.clone()
    }

    /// Grid check of the oracle contract: forward strictly increasing (one
    /// wrap allowed on the circle) and forward(inverse(y)) = y within 1e-10.
    pub fn validate_on_grid(&self, points: usize) -> Result<()> {
        let n = points.max(2);
        let mut wraps = 0usize;
        let mut prev = None;
        for i in 0..n {
            let y = i as f64 / n as f64;
            let fy = self.forward(y);
            let round_trip = self.forward(self.inverse(y));
            let err = match self.domain {
                MapDomain::Interval => (round_trip - y).abs(),
                MapDomain::Circle => crate::circle::dist(round_trip, y),
            };
            if err > 1e-10 {
                return Err(Error::Oracle(format!(
                    "forward(inverse({y})) = {round_trip}, off by {err:.3e}"
                )));
            }
            if let Some(p) = prev {
                if fy <= p {
                    match self.domain {
                        MapDomain::Interval => {
                            return Err(Error::Oracle(format!(
                                "forward not strictly increasing near {y}"
                            )));
                        }
                        MapDomain::Circle => {
                            wraps += 1;
                            if wraps > 1 {
                                return Err(Error::Oracle(format!(
                                    "circle map wraps more than once (degree != 1) near {y}"
                                )));
                            }
                        }
                    }
                }
            }
            prev = Some(fy);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn half_dirac_half_leb() -> HybridMeasure {
        HybridMeasure::atoms_plus_uniform(
            vec![Atom {
                position: 0.5,
                mass: 0.5,
            }],
            0.5,
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn cdf_of_lebesgue_is_identity() {
        let m = HybridMeasure::lebesgue();
        assert_eq!(m.cdf(0.3).unwrap(), 0.3);
        assert_eq!(m.cdf(0.0).unwrap(), 0.0);
        assert_eq!(m.cdf(1.0).unwrap(), 1.0);
    }

    #[test]
    fn cdf_with_atom() {
        let m = half_dirac_half_leb();
        // 1/4 from the AC part + the atom itself.
        assert!((m.cdf(0.5).unwrap() - 0.75).abs() < 1e-15);
        // Just below the atom only the AC part counts.
        assert!((m.cdf(0.49).unwrap() - 0.245).abs() < 1e-15);
        assert!((m.cdf_left(0.5).unwrap() - 0.25).abs() < 1e-15);
        // Jump at the atom equals its mass.
        let jump = m.cdf(0.5).unwrap() - m.cdf_left(0.5).unwrap();
        assert!((jump - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cdf_left_equals_cdf_off_atoms() {
        let m = half_dirac_half_leb();
        for y in [0.0, 0.1, 0.49999, 0.500001, 0.9, 1.0] {
            assert_eq!(m.cdf(y).unwrap(), m.cdf_left(y).unwrap(), "y = {y}");
        }
        let l = HybridMeasure::lebesgue();
        assert_eq!(l.cdf(0.7).unwrap(), l.cdf_left(0.7).unwrap());
    }

    #[test]
    fn cdf_rejects_out_of_domain() {
        let m = HybridMeasure::lebesgue();
        assert!(m.cdf(-0.1).is_err());
        assert!(m.cdf(1.5).is_err());
    }

    #[test]
    fn quantile_of_lebesgue_is_identity() {
        let m = HybridMeasure::lebesgue();
        let q = m.quantile(0.42, 1e-12).unwrap();
        assert!((q - 0.42).abs() <= 1e-12);
    }

    #[test]
    fn quantile_plateau_at_atom() {
        let m = half_dirac_half_leb();
        // Everything in the jump range [0.25, 0.75] lands on the atom.
        for x in [0.25, 0.3, 0.5, 0.6, 0.74999] {
            let q = m.quantile(x, 1e-12).unwrap();
            assert!((q - 0.5).abs() <= 1e-11, "x = {x} gave {q}");
        }
        let q = m.quantile(0.1, 1e-12).unwrap();
        assert!((q - 0.2).abs() <= 1e-11);
    }

    #[test]
    fn quantile_requires_full_support() {
        let m = HybridMeasure::new(
            vec![Atom {
                position: 0.5,
                mass: 1.0,
            }],
            Arc::new(|_| 0.0),
            1.0,
            0.0,
            false,
        )
        .unwrap();
        assert!(m.quantile(0.5, 1e-12).is_err());
        assert!(HybridMeasure::lebesgue().quantile(1.5, 1e-12).is_err());
    }

    #[test]
    fn preimage_interval_examples() {
        let leb = HybridMeasure::lebesgue();
        let (lo, hi) = leb.preimage_interval(0.37).unwrap();
        assert_eq!(lo, hi);
        assert_eq!(leb.preimage_interval(0.0).unwrap(), (0.0, 0.0));

        let m = half_dirac_half_leb();
        let (lo, hi) = m.preimage_interval(0.5).unwrap();
        assert!((lo - 0.25).abs() < 1e-15);
        assert!((hi - 0.75).abs() < 1e-15);
        assert!((hi - lo - m.atom_mass_at(0.5)).abs() < 1e-15);
    }

    #[test]
    fn pushforward_identity_keeps_measure() {
        let m = half_dirac_half_leb();
        let p = m.pushforward(&MonotoneMap::identity()).unwrap();
        for y in [0.0, 0.2, 0.5, 0.8, 1.0] {
            assert!((p.cdf(y).unwrap() - m.cdf(y).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn pushforward_transports_dirac_under_rotation() {
        let m = HybridMeasure::new(
            vec![Atom {
                position: 0.2,
                mass: 1.0,
            }],
            Arc::new(|_| 0.0),
            1.0,
            0.0,
            false,
        )
        .unwrap();
        let p = m.pushforward(&MonotoneMap::rotation(0.3)).unwrap();
        assert_eq!(p.atoms().len(), 1);
        assert!((p.atoms()[0].position - 0.5).abs() < 1e-15);
        assert!((p.cdf(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(p.cdf(0.49).unwrap(), 0.0);
    }

    #[test]
    fn pushforward_of_lebesgue_under_square_is_sqrt_cdf() {
        let g = MonotoneMap::interval(|y| y * y, |y: f64| y.sqrt());
        let p = HybridMeasure::lebesgue().pushforward(&g).unwrap();
        for y in [0.01, 0.1, 0.3, 0.5, 0.9, 1.0] {
            assert!((p.cdf(y).unwrap() - y.sqrt()).abs() < 1e-12);
        }
        // Independent oracle: Monte-Carlo empirical CDF of u^2 with 1e6 draws.
        let mut rng = SplitMix64::new(0x5eed);
        let n = 1_000_000usize;
        let mut below = [0usize; 5];
        let grid = [0.1, 0.3, 0.5, 0.7, 0.9];
        for _ in 0..n {
            let u = rng.next_f64();
            let v = u * u;
            for (i, &y) in grid.iter().enumerate() {
                if v <= y {
                    below[i] += 1;
                }
            }
        }
        for (i, &y) in grid.iter().enumerate() {
            let empirical = below[i] as f64 / n as f64;
            let err = (p.cdf(y).unwrap() - empirical).abs();
            // DKW bound at 1e6 samples is ~1.4e-3 at 99% confidence.
            assert!(err < 5e-3, "y = {y}: analytic vs MC differ by {err}");
        }
    }

    #[test]
    fn pushforward_preserves_total_mass() {
        let m = half_dirac_half_leb();
        let g = MonotoneMap::interval(|y| y * y, |y: f64| y.sqrt());
        let p = m.pushforward(&g).unwrap();
        assert!((p.cdf(1.0).unwrap() - m.total_mass()).abs() < 1e-12);
    }

    #[test]
    fn galois_connection_randomized() {
        let m = HybridMeasure::atoms_plus_uniform(
            vec![
                Atom {
                    position: 0.15,
                    mass: 0.2,
                },
                Atom {
                    position: 0.5,
                    mass: 0.25,
                },
                Atom {
                    position: 0.8,
                    mass: 0.15,
                },
            ],
            0.4,
            0.0,
        )
        .unwrap();
        let mut rng = SplitMix64::new(1);
        let tol = 1e-9;
        for _ in 0..1000 {
            let x = rng.next_f64();
            let y = rng.next_f64();
            let q = m.quantile(x, 1e-12).unwrap();
            let c = m.cdf(y).unwrap();
            if q <= y {
                assert!(x <= c + tol, "q({x}) = {q} <= {y} but cdf = {c}");
            }
            if x <= c {
                assert!(q <= y + tol, "x = {x} <= cdf({y}) = {c} but q = {q}");
            }
        }
    }

    #[test]
    fn quantile_pushes_lebesgue_onto_measure() {
        // cdf(quantile(x)) >= x, with equality away from plateaus; and
        // quantile(cdf(y)) <= y.
        let m = half_dirac_half_leb();
        let mut rng = SplitMix64::new(2);
        for _ in 0..1000 {
            let x = rng.next_f64();
            let q = m.quantile(x, 1e-12).unwrap();
            assert!(m.cdf(q).unwrap() >= x - 1e-9);
            let y = rng.next_f64();
            let c = m.cdf(y).unwrap();
            let qc = m.quantile(c, 1e-12).unwrap();
            assert!(qc <= y + 1e-9);
            assert!((m.cdf(qc).unwrap() - c).abs() <= 1e-9);
        }
    }

    #[test]
    fn quantile_nondecreasing_on_grid() {
        let m = half_dirac_half_leb();
        let mut prev = -1.0;
        for i in 0..=10_000 {
            let x = i as f64 / 10_000.0;
            let q = m.quantile(x, 1e-12).unwrap();
            assert!(q >= prev - 1e-12, "quantile decreased at x = {x}");
            prev = q;
        }
    }

    /// Measures the quantile plateau over an atom by bisecting in mass space,
    /// independently of the closed-form cdf/cdf_left pair.
    fn measured_plateau_width(m: &HybridMeasure, pos: f64, qtol: f64) -> f64 {
        let on_plateau = |x: f64| (m.quantile(x, qtol).unwrap() - pos).abs() <= 10.0 * qtol;
        // Left edge: inf { x | quantile(x) >= pos }.
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > qtol {
            let mid = 0.5 * (lo + hi);
            if m.quantile(mid, qtol).unwrap() >= pos - 10.0 * qtol {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let left = hi;
        assert!(on_plateau(left));
        // Right edge: sup { x | quantile(x) <= pos }.
        let (mut lo, mut hi) = (left, 1.0);
        while hi - lo > qtol {
            let mid = 0.5 * (lo + hi);
            if m.quantile(mid, qtol).unwrap() <= pos + 10.0 * qtol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo - left
    }

    #[test]
    fn plateau_width_equals_atom_mass() {
        let m = HybridMeasure::atoms_plus_uniform(
            vec![
                Atom {
                    position: 0.25,
                    mass: 0.125,
                },
                Atom {
                    position: 0.6,
                    mass: 0.375,
                },
            ],
            0.5,
            0.0,
        )
        .unwrap();
        for a in m.atoms() {
            let w = measured_plateau_width(&m, a.position, 1e-14);
            assert!(
                (w - a.mass).abs() <= 2e-12,
                "atom at {}: width {w} vs mass {}",
                a.position,
                a.mass
            );
        }
    }

    #[test]
    fn rejects_bad_constructions() {
        // Duplicate positions.
        assert!(HybridMeasure::atoms_plus_uniform(
            vec![
                Atom {
                    position: 0.5,
                    mass: 0.1
                },
                Atom {
                    position: 0.5,
                    mass: 0.1
                },
            ],
            0.3,
            0.0,
        )
        .is_err());
        // Mass accounting off by more than the tail bound.
        assert!(HybridMeasure::new(
            vec![Atom {
                position: 0.5,
                mass: 0.3
            }],
            Arc::new(|y: f64| 0.5 * y),
            1.0,
            0.0,
            true,
        )
        .is_err());
        // Same construction, but the gap is certified by the tail bound.
        assert!(HybridMeasure::new(
            vec![Atom {
                position: 0.5,
                mass: 0.3
            }],
            Arc::new(|y: f64| 0.5 * y),
            1.0,
            0.2,
            true,
        )
        .is_ok());
    }
}
