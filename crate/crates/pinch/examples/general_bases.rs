//! The same blow-up over other almost periodic bases: a two-torus
//! translation and the binary odometer, with the distance-based band
//! profiles closing on two approach sequences.
//!
//! Run with: cargo run --release --example general_bases

use std::sync::Arc;

use pinch::forcing::{
    make_pinch_general, syndeticity_max_gap, BaseSystem, GeneralBlownUp, Odometer, PinchSequences,
    PointFn, TorusTranslation,
};
use pinch::rng::SplitMix64;
use pinch::weights::WeightSequence;

fn demo<B: BaseSystem + 'static>(base: B, center: B::Point, label: &str) {
    let origin = base.origin();
    let b = base.clone();
    let curve: PointFn<B> =
        Arc::new(move |theta: &B::Point| 0.5 + 0.25 * b.dist(theta, &origin).min(0.5));
    let seqs = PinchSequences::build(&base, center, 20, 0.25).unwrap();
    let (phi, psi) = make_pinch_general(&base, curve.clone(), &seqs).unwrap();
    let sys = GeneralBlownUp::new(
        base.clone(),
        center,
        curve,
        phi,
        psi,
        0.5,
        WeightSequence::default_quarter(),
        12,
        100_000,
    )
    .unwrap();

    println!("{label}");
    println!(
        "  syndetic return gaps: eps 0.1 -> {}, eps 0.01 -> {}",
        syndeticity_max_gap(&base, 0.1, 100_000),
        syndeticity_max_gap(&base, 0.01, 100_000)
    );
    let s0 = sys.segment(0).unwrap();
    println!(
        "  segment S_0: [{:.6}, {:.6}] width {:.6}",
        s0.lo,
        s0.hi,
        s0.width()
    );
    let mut rng = SplitMix64::new(9);
    let mut semi = 0.0f64;
    let mut width = 0.0f64;
    for _ in 0..200 {
        let theta = base.sample(&mut rng);
        semi = semi.max(sys.semiconjugacy_residual(&theta, rng.next_f64()));
        if sys.blown_fibre(&theta).is_none() {
            width = width.max(sys.pinched_width(&theta));
        }
    }
    println!("  semiconjugacy residual over 200 random points: {semi:.3e}");
    println!("  generic pinched-set fibre width: {width:.3e}\n");
}

fn main() {
    demo(
        TorusTranslation::standard(),
        [0.3, 0.7],
        "two-torus translation",
    );
    demo(Odometer::standard(), 0b1011, "binary odometer (depth 64)");
}
