//! A circle homeomorphism with a wandering interval, built by blowing up one
//! orbit of the golden rotation through the quantile of a hybrid measure.
//!
//! Run with: cargo run --release --example denjoy

use pinch::circle;
use pinch::denjoy::DenjoySystem;
use pinch::weights::WeightSequence;

fn main() {
    let sys = DenjoySystem::new(
        circle::golden_mean(),
        0.1,
        WeightSequence::default_quarter(),
        20,
    )
    .unwrap();

    println!(
        "blow-up of the orbit of x0 = {} under the golden rotation, N = {}",
        sys.basepoint(),
        sys.trunc()
    );
    println!(
        "Lebesgue coefficient after tail redistribution: {:.12}",
        sys.leb_coeff()
    );

    println!("\ncentral gaps I_n = h^-1(x_n):");
    for n in -2i64..=2 {
        let g = sys.gap(n).unwrap();
        println!(
            "  I_{n:>2} = [{:.6}, {:.6}]   length {:.6} = a_n {:.6}",
            g.left,
            g.right,
            g.length(),
            g.weight
        );
    }

    // The gap system is carried around by the map: f(I_n) = I_{n+1}.
    let g0 = sys.gap(0).unwrap();
    let g1 = sys.gap(1).unwrap();
    println!(
        "\nf(c_0) = {:.9} vs c_1 = {:.9}",
        sys.forward(g0.left),
        g1.left
    );

    let rho = sys.rotation_number(10_000);
    println!(
        "rotation number estimate: {rho:.9} (omega = {:.9})",
        sys.omega()
    );

    let sample = sys.minimal_set_sample(50_000);
    let inside = sample.iter().filter(|&&y| sys.in_open_gap(y, 1e-9)).count();
    println!(
        "minimal set sample: {} orbit points, {} landed inside a gap",
        sample.len(),
        inside
    );

    // Semiconjugacy spot check.
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let y = i as f64 / 1000.0;
        let lhs = sys.factor_map(sys.forward(y));
        let rhs = circle::frac(sys.factor_map(y) + sys.omega());
        worst = worst.max(circle::dist(lhs, rhs));
    }
    println!("semiconjugacy residual on a grid: {worst:.3e}");
}
