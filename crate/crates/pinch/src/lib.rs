//! Blow-up constructions for one-dimensional fibres over rigid base dynamics.
//!
//! The central mechanism is measure transport: a hybrid measure (atoms plus an
//! absolutely continuous part) is turned into a monotone factor map through its
//! quantile function, and the atoms become vertical segments (or wandering
//! intervals) of the extension. The crate builds, from this one engine,
//!
//! * Denjoy circle homeomorphisms obtained by blowing up a rotation orbit
//!   ([`denjoy`]),
//! * extensions of quasiperiodically forced increasing interval maps whose
//!   factor map pinches an invariant curve into a strange minimal set
//!   ([`skew`]),
//! * the same construction over more general almost periodic bases: torus
//!   translations and the binary odometer ([`forcing`]),
//! * two derived counterexamples: a forced interval map with a three-periodic
//!   curve but no invariant curve, and a point-distal, non-distal torus
//!   homeomorphism ([`gallery`]).
//!
//! Every construction ships with a verification suite ([`runner`]) that
//! measures the residual of each claimed property and reports pass/fail
//! against fixed tolerances. See the `examples/` directory for runnable
//! walkthroughs of each capability; the `pinch` binary drives the same
//! suites from a config file.

pub mod circle;
pub mod config;
pub mod denjoy;
pub mod error;
pub mod forcing;
pub mod gallery;
pub mod measure;
pub mod report;
pub mod rng;
pub mod runner;
pub mod skew;
pub mod weights;

pub use error::{Error, Result};
pub use measure::{HybridMeasure, MonotoneMap};
pub use weights::WeightSequence;
