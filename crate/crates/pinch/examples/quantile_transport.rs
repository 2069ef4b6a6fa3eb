//! The measure engine: hybrid CDFs, quantiles, and push-forwards.
//!
//! Run with: cargo run --release --example quantile_transport

use pinch::measure::{Atom, HybridMeasure, MonotoneMap};

fn main() {
    // Half an atom at 1/2, half Lebesgue.
    let m = HybridMeasure::atoms_plus_uniform(
        vec![Atom {
            position: 0.5,
            mass: 0.5,
        }],
        0.5,
        0.0,
    )
    .unwrap();

    println!("measure: 1/2 * dirac(1/2) + 1/2 * lebesgue");
    for y in [0.25, 0.49, 0.5, 0.75] {
        println!(
            "  cdf({y:.2})  = {:.6}   cdf_left({y:.2}) = {:.6}",
            m.cdf(y).unwrap(),
            m.cdf_left(y).unwrap()
        );
    }

    println!("\nquantile plateau over the atom:");
    for x in [0.1, 0.25, 0.5, 0.75, 0.9] {
        println!("  quantile({x:.2}) = {:.9}", m.quantile(x, 1e-12).unwrap());
    }
    let (lo, hi) = m.preimage_interval(0.5).unwrap();
    println!("  preimage interval of y = 0.5: [{lo:.4}, {hi:.4}] (width = atom mass)");

    // Push-forward under y -> y^2: Lebesgue turns into the sqrt CDF.
    let square = MonotoneMap::interval(|y| y * y, |y: f64| y.sqrt());
    let p = HybridMeasure::lebesgue().pushforward(&square).unwrap();
    println!("\nlebesgue pushed through y -> y^2:");
    for y in [0.09, 0.25, 0.64] {
        println!(
            "  cdf({y:.2}) = {:.6}   sqrt({y:.2}) = {:.6}",
            p.cdf(y).unwrap(),
            y.sqrt()
        );
    }

    // Circle transport: a Dirac rides a rotation.
    let d = HybridMeasure::atoms_plus_uniform(
        vec![Atom {
            position: 0.2,
            mass: 0.25,
        }],
        0.75,
        0.0,
    )
    .unwrap();
    let rotated = d.pushforward(&MonotoneMap::rotation(0.3)).unwrap();
    println!(
        "\natom at 0.2 pushed by the rotation +0.3 sits at {:.3} (mass {:.3})",
        rotated.atoms()[0].position,
        rotated.atoms()[0].mass
    );
}
