//! Filled-in versus non-filled-in minimal sets: the one-sided band profile
//! keeps the segment interiors out of the minimal set; the oscillating
//! profile sweeps the whole segment into its closure.
//!
//! Run with: cargo run --release --example filled_in

use pinch::skew::{BlownUpSystem, PinchMode};

fn probe(mode: PinchMode, label: &str) {
    let sys = BlownUpSystem::standard(mode, 20).unwrap();
    let sample = sys.minimal_set_sample(60_000);
    let report = sys.filled_in_envelope(&sample, 128).unwrap();
    let (_, lo, hi) = sys.segment_span(0);
    println!("{label}:");
    println!(
        "  segment S_0 = [{lo:.4}, {hi:.4}], midpoint {:.4}",
        0.5 * (lo + hi)
    );
    println!(
        "  samples near theta*: {}, min distance to the midpoint: {:.4}",
        report.near_samples, report.midpoint_margin
    );
    println!(
        "  worst uncovered point of S_0 (torus distance): {:.4}",
        report.segment_cover_gap
    );
    println!("  verdict: {:?}\n", report.verdict);
}

fn main() {
    probe(PinchMode::OneSided, "one-sided profile");
    probe(PinchMode::Oscillating, "oscillating profile");
}
