//! A forced interval map with a three-periodic continuous curve but no
//! invariant continuous curve: the product of a rotation with a 3-cycle map
//! has its unique invariant curve surgically replaced by a pinched blow-up.
//!
//! Run with: cargo run --release --example sharkovsky

use pinch::gallery::{three_cycle_fixed_point, three_cycle_map, SurgerySystem};

fn main() {
    let g = three_cycle_map();
    println!(
        "outer interval map: 0 -> {}, 1/2 -> {}, 1 -> {}; fixed point x0 = {:.6}",
        g.eval(0.0),
        g.eval(0.5),
        g.eval(1.0),
        three_cycle_fixed_point()
    );

    let sys = SurgerySystem::standard(15).unwrap();
    let (a_minus, a_plus) = sys.trap();
    println!("trap annulus around the former invariant curve: [{a_minus}, {a_plus}]");

    println!(
        "\ngluing residual on the trap boundary: {:.3e}",
        sys.boundary_residual(2000)
    );
    println!(
        "3-cycle residual after surgery:          {:.3e}",
        sys.three_cycle_residual(500)
    );

    let cert = sys.certify_no_invariant_curve();
    println!(
        "\ncurve-absence certificate: oscillation {:.6} >= threshold {:.6} ({})",
        cert.oscillation,
        cert.threshold,
        if cert.passed { "PASS" } else { "FAIL" }
    );

    let control = SurgerySystem::standard(-1).unwrap();
    println!(
        "control without blow-up: oscillation {:.3e} (the curve is intact)",
        control.certify_no_invariant_curve().oscillation
    );

    let basin = sys.basin_capture(50, 2000, 7);
    println!(
        "\nbasin probe: {} captured by the trap, {} on the 3-cycle, {} escaped \
         (max capture time {} steps)",
        basin.captured, basin.on_cycle, basin.escaped, basin.max_capture_time
    );
}
