//! Verification suites and dataset emission for each construction.
//!
//! `verify` measures every certified property of the configured construction
//! and returns the report; `run` additionally writes the CSV datasets and
//! report.json into the output directory. Properties execute on a small
//! scoped thread pool; the report is assembled in id order, so the output is
//! independent of scheduling.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::circle::{self, frac};
use crate::config::{BaseKind, Construction, RunConfig};
use crate::denjoy::DenjoySystem;
use crate::error::Result;
use crate::forcing::{
    self, BaseSystem, CircleRotation, GeneralBlownUp, Odometer, PinchSequences, PointFn,
    TorusTranslation,
};
use crate::gallery::{ReesSystem, SurgerySystem};
use crate::report::{PropertyResult, VerificationReport};
use crate::rng::SplitMix64;
use crate::skew::{BlownUpSystem, EnvelopeVerdict, PinchMode, PinchedTrace};
use crate::weights::WeightSequence;

/// Recorded distality floor of the torus example's control pairs; the probe
/// must never dip below it (regression guard, measured once on the defaults).
pub const REES_DISTALITY_FLOOR: f64 = 0.01;

struct Prop {
    id: String,
    property: String,
    task: Box<dyn FnOnce() -> (f64, f64) + Send>,
}

impl Prop {
    fn new(
        id: impl Into<String>,
        property: &str,
        task: impl FnOnce() -> (f64, f64) + Send + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            property: property.to_string(),
            task: Box::new(task),
        }
    }
}

/// Runs the property tasks on a scoped pool and returns results in id order.
fn run_pool(props: Vec<Prop>) -> Vec<PropertyResult> {
    let n = props.len();
    let slots: Vec<Mutex<Option<Prop>>> = props.into_iter().map(|p| Mutex::new(Some(p))).collect();
    let results: Vec<Mutex<Option<PropertyResult>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(4)
        .min(n.max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let prop = slots[i].lock().unwrap().take().expect("slot taken once");
                let (residual, tolerance) = (prop.task)();
                *results[i].lock().unwrap() = Some(PropertyResult::new(
                    &prop.id,
                    &prop.property,
                    residual,
                    tolerance,
                ));
            });
        }
    });
    results
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every prop ran"))
        .collect()
}

/// Residual for "measured must reach `required`" style properties.
fn shortfall(required: f64, measured: f64) -> f64 {
    (required - measured).max(0.0)
}

fn csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> Result<()> {
    let mut out = String::with_capacity(rows.len() * 32 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            out.push_str(&format!("{v:.16e}"));
            first = false;
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn verify(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let props = build_suite(config)?;
    let results = run_pool(props);
    Ok(
        VerificationReport::new(config.construction.as_str(), config.hash(), config.seed)
            .finish(results),
    )
}

/// Verify and emit the construction's datasets plus report.json.
pub fn run(config: &RunConfig, out_dir: &Path) -> Result<(VerificationReport, Vec<PathBuf>)> {
    let report = verify(config)?;
    fs::create_dir_all(out_dir)?;
    let mut files = emit_artifacts(config, out_dir)?;
    let report_path = out_dir.join("report.json");
    fs::write(&report_path, report.to_json()?)?;
    files.push(report_path);
    Ok((report, files))
}

fn build_suite(config: &RunConfig) -> Result<Vec<Prop>> {
    match config.construction {
        Construction::Denjoy => denjoy_suite(config),
        Construction::Qpf | Construction::QpfFilled => qpf_suite(config),
        Construction::General => general_suite(config),
        Construction::Sharkovsky => sharkovsky_suite(config),
        Construction::Rees => rees_suite(config),
    }
}

fn weights_of(config: &RunConfig) -> Result<WeightSequence> {
    WeightSequence::geometric(config.weight_scale, config.weight_ratio)
}

fn denjoy_system(config: &RunConfig) -> Result<std::sync::Arc<DenjoySystem>> {
    Ok(std::sync::Arc::new(DenjoySystem::new(
        config.omega,
        config.basepoint,
        weights_of(config)?,
        config.trunc,
    )?))
}

fn qpf_system_owned(config: &RunConfig) -> Result<BlownUpSystem> {
    let mode = match config.construction {
        Construction::QpfFilled => PinchMode::Oscillating,
        _ => config.pinch_mode,
    };
    let sys = crate::skew::ForcedIntervalSystem::standard();
    let pinch = crate::skew::PinchFunctions::standard(mode, sys.curve_oracle());
    BlownUpSystem::new(sys, pinch, weights_of(config)?, config.trunc)
}

fn denjoy_suite(config: &RunConfig) -> Result<Vec<Prop>> {
    let sys = denjoy_system(config)?;
    let seed = config.seed;
    let mut props = Vec::new();

    {
        let s = sys.clone();
        props.push(Prop::new(
            "denjoy.semiconjugacy",
            "h o f = R o h on random points",
            move || {
                let mut rng = SplitMix64::new(seed);
                let mut sup = 0.0f64;
                for _ in 0..10_000 {
                    let y = rng.next_f64();
                    let lhs = s.factor_map(s.forward(y));
                    let rhs = frac(s.factor_map(y) + s.omega());
                    sup = sup.max(circle::dist(lhs, rhs));
                }
                (sup, 1e-9)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "denjoy.rotation-number",
            "lift-average rotation number equals the base angle",
            move || ((s.rotation_number(10_000) - s.omega()).abs(), 2e-3),
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "denjoy.wandering",
            "the central gap stays disjoint from its first 100 iterates",
            move || {
                let margin = s.weights().tail(s.trunc());
                let Some(g0) = s.gap(0).copied() else {
                    return (0.0, margin + 1e-12);
                };
                let (mut lo, mut hi) = (g0.left, g0.right);
                let mut worst = 0.0f64;
                for _ in 1..=100 {
                    lo = s.forward(lo);
                    hi = s.forward(hi);
                    // Overlap depth with I_0, zero when disjoint; the image
                    // may straddle the cut, in which case both arcs count.
                    let overlap = if hi >= lo {
                        (hi.min(g0.right) - lo.max(g0.left)).max(0.0)
                    } else {
                        let upper_arc = (g0.right - lo.max(g0.left)).max(0.0);
                        let lower_arc = (hi.min(g0.right) - g0.left).max(0.0);
                        upper_arc.max(lower_arc)
                    };
                    worst = worst.max(overlap);
                }
                (worst, margin + 1e-12)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "denjoy.gap-budget",
            "gap lengths sum to the atomic mass of the truncation",
            move || {
                let total: f64 = s.gaps().iter().map(|g| g.length()).sum();
                ((total - s.weights().partial(s.trunc())).abs(), 1e-9)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "denjoy.monotone",
            "forward map strictly increasing on circle and gap grids",
            move || {
                let mut inversions = 0usize;
                let mut prev = s.forward(0.0);
                for i in 1..10_000 {
                    let y = i as f64 / 10_000.0;
                    let fy = s.forward(y);
                    if fy <= prev && prev < 0.9 {
                        inversions += 1;
                    }
                    prev = fy;
                }
                if let Some(g) = s.gap(0) {
                    let mut prev = s.forward(g.left);
                    for i in 1..=200 {
                        let y = g.left + g.length() * i as f64 / 200.0;
                        let fy = s.forward(y);
                        if fy <= prev {
                            inversions += 1;
                        }
                        prev = fy;
                    }
                }
                (inversions as f64, 0.0)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "denjoy.no-periodic-points",
            "no p/q orbit up to q = 20 within defect 1e-4",
            move || {
                let mut worst = 0.0f64;
                for q in 1..=20u32 {
                    let p = (q as f64 * s.omega()).round();
                    let mut min_defect = f64::INFINITY;
                    for i in 0..50 {
                        let y = i as f64 / 50.0;
                        min_defect = min_defect.min((s.lift_displacement(y, q) - p).abs());
                    }
                    worst = worst.max(shortfall(1e-4, min_defect));
                }
                (worst, 0.0)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "denjoy.round-trip",
            "inverse o forward = id on 1e4 random points",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0xd0d0);
                let mut sup = 0.0f64;
                for _ in 0..10_000 {
                    let y = rng.next_f64();
                    sup = sup.max(circle::dist(s.inverse(s.forward(y)), y));
                }
                (sup, 1e-9)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "denjoy.minimal-set-dense",
            "orbit of the gap endpoint is 1e-2-dense off the gaps",
            move || {
                let mut sample = s.minimal_set_sample(100_000);
                sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mut worst = 0.0f64;
                for i in 0..1000 {
                    let y = i as f64 / 1000.0;
                    if s.in_open_gap(y, 1e-9) {
                        continue;
                    }
                    let idx = sample.partition_point(|&v| v < y);
                    let mut nearest =
                        circle::dist(sample[0], y).min(circle::dist(*sample.last().unwrap(), y));
                    if idx < sample.len() {
                        nearest = nearest.min(circle::dist(sample[idx], y));
                    }
                    if idx > 0 {
                        nearest = nearest.min(circle::dist(sample[idx - 1], y));
                    }
                    worst = worst.max(nearest);
                }
                (worst, 1e-2)
            },
        ));
    }
    // The measure engine itself, certified on the blow-up measure of this run.
    {
        let s = sys.clone();
        props.push(Prop::new(
            "measure.galois",
            "quantile(x) <= y iff x <= cdf(y) on random pairs",
            move || {
                let nu = s.nu();
                let mut rng = SplitMix64::new(seed ^ 0xa11ce);
                let mut worst = 0.0f64;
                for _ in 0..1000 {
                    let x = rng.next_f64();
                    let y = rng.next_f64();
                    let q = nu.quantile(x, 1e-12).unwrap();
                    let c = nu.cdf(y).unwrap();
                    if q <= y {
                        worst = worst.max(shortfall(x, c + 1e-15));
                    }
                    if x <= c {
                        worst = worst.max(shortfall(q, y + 1e-15));
                    }
                }
                (worst, 1e-9)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "measure.pushforward-identity",
            "cdf(quantile(x)) >= x with equality off plateaus",
            move || {
                let nu = s.nu();
                let mut rng = SplitMix64::new(seed ^ 0xbea7);
                let mut worst = 0.0f64;
                for _ in 0..1000 {
                    let x = rng.next_f64();
                    let q = nu.quantile(x, 1e-12).unwrap();
                    worst = worst.max(shortfall(x, nu.cdf(q).unwrap() + 1e-15));
                    let y = rng.next_f64();
                    let c = nu.cdf(y).unwrap();
                    worst = worst.max(shortfall(nu.quantile(c, 1e-12).unwrap(), y + 1e-15));
                }
                (worst, 1e-9)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "measure.plateau-widths",
            "quantile plateaus match atom masses",
            move || {
                let nu = s.nu();
                let mut worst = 0.0f64;
                // The two largest atoms; bisection measured, not closed form.
                for atom in s
                    .nu()
                    .atoms()
                    .iter()
                    .filter(|a| a.mass >= s.weights().weight(1))
                {
                    let qtol = 1e-14;
                    let edge = |target_above: bool| -> f64 {
                        let (mut lo, mut hi) = (0.0, 1.0);
                        while hi - lo > qtol {
                            let mid = 0.5 * (lo + hi);
                            let q = nu.quantile(mid, qtol).unwrap();
                            let above = if target_above {
                                q > atom.position + 10.0 * qtol
                            } else {
                                q >= atom.position - 10.0 * qtol
                            };
                            if above {
                                hi = mid;
                            } else {
                                lo = mid;
                            }
                        }
                        hi
                    };
                    let width = edge(true) - edge(false);
                    worst = worst.max((width - atom.mass).abs());
                }
                (worst, 2e-12)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "measure.pushforward-mass",
            "push-forward under the base rotation preserves total mass",
            move || {
                let g = crate::measure::MonotoneMap::rotation(s.omega());
                match s.nu().pushforward(&g) {
                    Ok(p) => ((p.cdf(1.0).unwrap() - s.nu().total_mass()).abs(), 1e-12),
                    Err(_) => (f64::INFINITY, 1e-12),
                }
            },
        ));
    }
    {
        let s = sys;
        props.push(Prop::new(
            "measure.quantile-monotone",
            "quantile nondecreasing on a 1e4 grid",
            move || {
                let nu = s.nu();
                let mut prev = -1.0;
                let mut inversions = 0usize;
                for i in 0..=10_000 {
                    let x = i as f64 / 10_000.0;
                    let q = nu.quantile(x, 1e-12).unwrap();
                    if q < prev - 1e-12 {
                        inversions += 1;
                    }
                    prev = q;
                }
                (inversions as f64, 0.0)
            },
        ));
    }
    Ok(props)
}

fn qpf_system(config: &RunConfig) -> Result<std::sync::Arc<BlownUpSystem>> {
    Ok(std::sync::Arc::new(qpf_system_owned(config)?))
}

fn qpf_suite(config: &RunConfig) -> Result<Vec<Prop>> {
    let sys = qpf_system(config)?;
    let seed = config.seed;
    let depth = config.depth.max(1);
    let mode = sys.pinch().mode();
    let mut props = Vec::new();

    {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.fibre-monotone",
            "extension fibre maps strictly increase (100 x 1000 grids)",
            move || {
                let mut inversions = 0usize;
                for i in 0..100 {
                    let theta = frac(0.317 + i as f64 / 100.0);
                    let mut prev = f64::NEG_INFINITY;
                    for j in 0..=1000 {
                        let x = j as f64 / 1000.0;
                        let (_, y) = s.fhat(theta, x);
                        if y <= prev {
                            inversions += 1;
                        }
                        prev = y;
                    }
                }
                (inversions as f64, 0.0)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.h-nondecreasing",
            "factor maps nondecreasing (100 x 1000 grids)",
            move || {
                let mut inversions = 0usize;
                for i in 0..100 {
                    let theta = frac(0.577 + i as f64 / 100.0);
                    let mut prev = f64::NEG_INFINITY;
                    for j in 0..=1000 {
                        let x = j as f64 / 1000.0;
                        let h = s.h_fibre(theta, x);
                        if h < prev - 1e-12 {
                            inversions += 1;
                        }
                        prev = h;
                    }
                }
                (inversions as f64, 0.0)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.injective-off-curve",
            "factor maps strictly increase off the blown-up fibres",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x1213);
                let mut violations = 0usize;
                for _ in 0..200 {
                    let theta = rng.next_f64();
                    if s.blown_fibre(theta).is_some() {
                        continue;
                    }
                    let x = rng.next_f64().min(0.999);
                    let x2 = (x + 1e-3).min(1.0);
                    if s.h_fibre(theta, x2) <= s.h_fibre(theta, x) {
                        violations += 1;
                    }
                }
                (violations as f64, 0.0)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.segment-widths",
            "vertical segments have exactly the atom masses (|n| <= 10)",
            move || {
                let mut worst = 0.0f64;
                for n in -10i64..=10 {
                    if let Some(seg) = s.segment(n) {
                        worst = worst.max((seg.width() - s.weights().weight(n)).abs());
                    }
                }
                (worst, 2.0 * s.tail() + 1e-12)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.semiconjugacy",
            "h o fhat = f o h on 1e4 random points",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x5e31);
                let mut sup = 0.0f64;
                for _ in 0..10_000 {
                    sup = sup.max(s.semiconjugacy_residual(rng.next_f64(), rng.next_f64()));
                }
                (sup, 1e-8 + 2.0 * s.tail())
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.round-trip",
            "fhat_inv o fhat = id on 1e4 random points",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x0f0f);
                let mut sup = 0.0f64;
                for _ in 0..10_000 {
                    let theta = rng.next_f64();
                    let x = rng.next_f64();
                    let (t1, x1) = s.fhat(theta, x);
                    let (t0, x0) = s.fhat_inv(t1, x1);
                    sup = sup.max(circle::dist(t0, theta)).max((x0 - x).abs());
                }
                (sup, 1e-8)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.pinching",
            "generic fibres of the curve preimage are singletons",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x9111);
                let mut worst = 0.0f64;
                let mut used = 0;
                while used < 100 {
                    let theta = rng.next_f64();
                    let near_orbit = s
                        .segments()
                        .iter()
                        .any(|seg| circle::dist(theta, seg.fibre) < 1e-3);
                    if near_orbit {
                        continue;
                    }
                    used += 1;
                    worst = worst.max(s.gamma_plus(theta) - s.gamma_minus(theta));
                }
                (worst, 1e-8)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.curve-absence",
            "upper boundary of the pinched set oscillates by a_0 at theta*",
            move || {
                if s.trunc() < 0 {
                    return (0.0, 0.0);
                }
                let star = s.theta_star();
                let required = s.weights().weight(0) - 2.0 * s.tail() - 1e-6;
                // Oscillation over the interval (theta* - delta_j, theta* + delta_j):
                // sup - inf over the sampled points inside, i.e. over all
                // deeper approach pairs.
                let samples: Vec<(f64, f64)> = (8..=32)
                    .map(|j| {
                        let delta = 0.5f64.powi(j);
                        (
                            s.gamma_plus(frac(star - delta)),
                            s.gamma_plus(frac(star + delta)),
                        )
                    })
                    .collect();
                // Each window keeps at least eight deeper approach pairs so
                // both contact phases of an oscillating profile are seen.
                let mut min_osc = f64::INFINITY;
                for j in 0..samples.len() - 8 {
                    let sup = samples[j..]
                        .iter()
                        .map(|p| p.0.max(p.1))
                        .fold(f64::NEG_INFINITY, f64::max);
                    let inf = samples[j..]
                        .iter()
                        .map(|p| p.0.min(p.1))
                        .fold(f64::INFINITY, f64::min);
                    min_osc = min_osc.min(sup - inf);
                }
                (shortfall(required, min_osc), 0.0)
            },
        ));
    }
    if mode == PinchMode::OneSided && config.trunc >= 0 {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.discontinuity-jump",
            "one-sided limit difference at theta* equals a_0",
            move || match s.discontinuity_jump(32) {
                Ok(j) => (
                    (j.estimate - s.weights().weight(0)).abs(),
                    2.0 * s.tail() + 1e-6,
                ),
                Err(_) => (f64::INFINITY, 1e-6),
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.attractor",
            "attractor envelopes collapse at generic fibres but keep the segment",
            move || {
                let star = s.theta_star();
                let mut worst_generic = 0.0f64;
                for i in 0..32 {
                    let theta = frac(star + 0.037 + i as f64 / 32.0);
                    if s.segments()
                        .iter()
                        .any(|seg| circle::dist(theta, seg.fibre) < 1e-3)
                    {
                        continue;
                    }
                    let (lo, hi) = s.attractor_envelope(theta, depth);
                    worst_generic = worst_generic.max(hi - lo);
                }
                let pinned = if s.trunc() >= 0 {
                    let (lo, hi) = s.attractor_envelope(star, depth);
                    shortfall(s.weights().weight(0) - 1e-6, hi - lo)
                } else {
                    // No blow-up: the pinch fibre collapses like everywhere else.
                    let (lo, hi) = s.attractor_envelope(star, depth);
                    hi - lo
                };
                (worst_generic.max(pinned), 1e-3)
            },
        ));
    }
    if config.trunc < 0 {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.trivial-control",
            "blow-up disabled: the factor map is the identity on fibres",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x3d3d);
                let mut sup = 0.0f64;
                for _ in 0..1000 {
                    let theta = rng.next_f64();
                    let x = rng.next_f64();
                    sup = sup.max((s.h_fibre(theta, x) - x).abs());
                }
                (sup, 1e-9)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.envelope-verdict",
            "minimal-set envelopes match the pinch mode",
            move || {
                let sample = s.minimal_set_sample(100_000);
                // Sample points must lie on the pinched set.
                let mut on_set = 0.0f64;
                for (k, &(theta, x)) in sample.iter().enumerate() {
                    if k % 100 == 0 {
                        on_set = on_set.max(s.pinched_set_residual(theta, x));
                    }
                }
                if on_set > 1e-8 {
                    return (1.0 + on_set, 0.0);
                }
                let report = match s.filled_in_envelope(&sample, 256) {
                    Ok(r) => r,
                    Err(_) => return (f64::INFINITY, 0.0),
                };
                let expected = match (s.trunc() >= 0, s.pinch().mode()) {
                    (false, _) => EnvelopeVerdict::FilledIn,
                    (true, PinchMode::OneSided) => EnvelopeVerdict::NonFilledIn,
                    (true, PinchMode::Oscillating) => EnvelopeVerdict::FilledIn,
                };
                ((report.verdict != expected) as u8 as f64, 0.0)
            },
        ));
    }
    if mode == PinchMode::OneSided {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.xi-parametrization",
            "xi is a monotone bijection conjugating to a circle map of rotation number omega",
            move || {
                let tr = PinchedTrace::new(&s);
                let mut worst = 0.0f64;
                let mut prev = tr.xi(0.0);
                for i in 1..10_000 {
                    let t = i as f64 / 10_000.0;
                    let (theta, x) = tr.xi(t);
                    let ordered =
                        theta > prev.0 || ((theta - prev.0).abs() < 1e-12 && x < prev.1 + 1e-12);
                    if !ordered {
                        worst += 1.0;
                    }
                    worst = worst.max(circle::dist(tr.xi_inv(theta, x), t));
                    prev = (theta, x);
                }
                let rho = tr.rotation_number(10_000);
                worst = worst.max(((rho - s.omega()).abs() - 2e-3).max(0.0));
                (worst, 1e-8)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "qpf.h-truncation",
            "truncated factor maps converge uniformly",
            move || {
                let mut k = 0;
                while k < s.trunc() && s.weights().tail(k) >= 1e-6 {
                    k += 1;
                }
                let mut rng = SplitMix64::new(seed ^ 0x7777);
                let mut sup = 0.0f64;
                for _ in 0..1000 {
                    let theta = rng.next_f64();
                    let x = rng.next_f64();
                    let hk = s.h_truncated(k, theta, x).unwrap_or(f64::NAN);
                    sup = sup.max((hk - s.h_fibre(theta, x)).abs());
                }
                (sup, 1e-4)
            },
        ));
    }
    {
        let s = sys;
        props.push(Prop::new(
            "qpf.grid-continuity",
            "fhat increments shrink under grid refinement",
            move || {
                let theta = frac(s.theta_star() + 0.21);
                let mut prev_max = f64::INFINITY;
                for &grid in &[250usize, 1000, 4000] {
                    let mut max_inc = 0.0f64;
                    let mut prev = s.fhat(theta, 0.0).1;
                    for j in 1..=grid {
                        let v = s.fhat(theta, j as f64 / grid as f64).1;
                        max_inc = max_inc.max((v - prev).abs());
                        prev = v;
                    }
                    if max_inc > prev_max {
                        return (max_inc - prev_max, 0.0);
                    }
                    prev_max = max_inc;
                }
                (0.0, 0.0)
            },
        ));
    }
    Ok(props)
}

fn general_suite(config: &RunConfig) -> Result<Vec<Prop>> {
    match config.base {
        BaseKind::Rotation => {
            let base = CircleRotation::new(config.omega)?;
            general_suite_for(config, base, config.theta_star, "general.rotation", true)
        }
        BaseKind::Torus2 => {
            let base = TorusTranslation::new(config.omega, config.omega2)?;
            general_suite_for(
                config,
                base,
                [config.theta_star, frac(config.theta_star + 0.37)],
                "general.torus2",
                false,
            )
        }
        BaseKind::Odometer => {
            let base = Odometer::standard();
            general_suite_for(config, base, 0b1011, "general.odometer", false)
        }
    }
}

fn general_curve<B: BaseSystem + 'static>(base: &B) -> PointFn<B> {
    let b = base.clone();
    let origin = base.origin();
    std::sync::Arc::new(move |theta: &B::Point| 0.5 + 0.25 * b.dist(theta, &origin).min(0.5))
}

fn general_suite_for<B: BaseSystem + 'static>(
    config: &RunConfig,
    base: B,
    center: B::Point,
    prefix: &'static str,
    cross_check: bool,
) -> Result<Vec<Prop>>
where
    B::Point: 'static,
{
    let curve = general_curve(&base);
    let seqs = PinchSequences::build(&base, center, 24, 0.25)?;
    let (phi, psi) = forcing::make_pinch_general(&base, curve.clone(), &seqs)?;
    let sys = std::sync::Arc::new(GeneralBlownUp::new(
        base.clone(),
        center,
        curve,
        phi,
        psi,
        0.5,
        weights_of(config)?,
        config.trunc,
        1_000_000,
    )?);
    let seed = config.seed;
    let mut props = Vec::new();

    {
        let s = sys.clone();
        props.push(Prop::new(
            format!("{prefix}.segment-widths"),
            "vertical segments carry the atom masses",
            move || {
                let mut worst = 0.0f64;
                for seg in s.segments() {
                    worst = worst.max((seg.width() - s.weights().weight(seg.index)).abs());
                }
                (worst, 2.0 * s.tail() + 1e-12)
            },
        ));
    }
    {
        let s = sys.clone();
        let b = base.clone();
        props.push(Prop::new(
            format!("{prefix}.fibre-monotone"),
            "extension fibre maps strictly increase",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x21);
                let mut inversions = 0usize;
                for _ in 0..50 {
                    let theta = b.sample(&mut rng);
                    let mut prev = f64::NEG_INFINITY;
                    for j in 0..=200 {
                        let (_, y) = s.fhat(&theta, j as f64 / 200.0);
                        if y <= prev {
                            inversions += 1;
                        }
                        prev = y;
                    }
                }
                (inversions as f64, 0.0)
            },
        ));
    }
    {
        let s = sys.clone();
        let b = base.clone();
        props.push(Prop::new(
            format!("{prefix}.h-nondecreasing"),
            "factor maps nondecreasing",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x22);
                let mut inversions = 0usize;
                for _ in 0..50 {
                    let theta = b.sample(&mut rng);
                    let mut prev = f64::NEG_INFINITY;
                    for j in 0..=200 {
                        let h = s.h_fibre(&theta, j as f64 / 200.0);
                        if h < prev - 1e-12 {
                            inversions += 1;
                        }
                        prev = h;
                    }
                }
                (inversions as f64, 0.0)
            },
        ));
    }
    {
        let s = sys.clone();
        let b = base.clone();
        props.push(Prop::new(
            format!("{prefix}.semiconjugacy"),
            "h o fhat = f o h on random points",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x23);
                let mut sup = 0.0f64;
                for _ in 0..1000 {
                    let theta = b.sample(&mut rng);
                    sup = sup.max(s.semiconjugacy_residual(&theta, rng.next_f64()));
                }
                (sup, 1e-8 + 2.0 * s.tail())
            },
        ));
    }
    {
        let s = sys.clone();
        let b = base.clone();
        props.push(Prop::new(
            format!("{prefix}.round-trip"),
            "fhat_inv o fhat = id on random points",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x24);
                let mut sup = 0.0f64;
                for _ in 0..1000 {
                    let theta = b.sample(&mut rng);
                    let x = rng.next_f64();
                    let (t1, x1) = s.fhat(&theta, x);
                    let (t0, x0) = s.fhat_inv(&t1, x1);
                    sup = sup.max(b.dist(&t0, &theta)).max((x0 - x).abs());
                }
                (sup, 1e-8)
            },
        ));
    }
    if sys.certifies_minimality() {
        let s = sys.clone();
        let b = base.clone();
        props.push(Prop::new(
            format!("{prefix}.pinching"),
            "generic fibres of the curve preimage are singletons",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x25);
                let mut worst = 0.0f64;
                let mut used = 0;
                while used < 100 {
                    let theta = b.sample(&mut rng);
                    if s.blown_fibre(&theta).is_some() {
                        continue;
                    }
                    used += 1;
                    worst = worst.max(s.pinched_width(&theta));
                }
                (worst, 1e-8)
            },
        ));
    }
    {
        let b = base.clone();
        props.push(Prop::new(
            format!("{prefix}.isometry"),
            "the base map is an isometry on random pairs",
            move || (forcing::isometry_defect(&b, 300, seed ^ 0x26), 1e-12),
        ));
    }
    {
        let b = base.clone();
        let bound = match prefix {
            "general.rotation" => (40.0, 400.0),
            "general.torus2" => (500.0, 50_000.0),
            _ => (16.0, 128.0),
        };
        props.push(Prop::new(
            format!("{prefix}.syndetic-returns"),
            "near-identity return times have bounded gaps",
            move || {
                let g1 = forcing::syndeticity_max_gap(&b, 0.1, 100_000) as f64;
                let g2 = forcing::syndeticity_max_gap(&b, 0.01, 100_000) as f64;
                let excess = (g1 - bound.0).max(g2 - bound.1).max(0.0);
                (excess, 0.0)
            },
        ));
    }
    if cross_check {
        let s = sys.clone();
        props.push(Prop::new(
            format!("{prefix}.cross-check"),
            "generic path agrees with the concrete circle implementation",
            move || {
                let concrete_sys = crate::skew::ForcedIntervalSystem::standard();
                let pinch = crate::skew::PinchFunctions::standard(
                    PinchMode::OneSided,
                    concrete_sys.curve_oracle(),
                );
                let trunc = s.trunc();
                let concrete =
                    match BlownUpSystem::new(concrete_sys, pinch.clone(), *s.weights(), trunc) {
                        Ok(c) => c,
                        Err(_) => return (f64::INFINITY, 1e-9),
                    };
                // Rebuild the generic system with the concrete pinch so both
                // paths evaluate the same construction.
                let base = CircleRotation::golden();
                let curve: PointFn<CircleRotation> =
                    std::sync::Arc::new(|theta: &f64| 0.5 + 0.25 * circle::dist(*theta, 0.0));
                let p_up = pinch.clone();
                let p_dn = pinch;
                let phi: PointFn<CircleRotation> =
                    std::sync::Arc::new(move |theta: &f64| p_up.phi(*theta));
                let psi: PointFn<CircleRotation> =
                    std::sync::Arc::new(move |theta: &f64| p_dn.psi(*theta));
                let generic = match GeneralBlownUp::new(
                    base,
                    crate::skew::DEFAULT_THETA_STAR,
                    curve,
                    phi,
                    psi,
                    0.5,
                    *s.weights(),
                    trunc,
                    100_000,
                ) {
                    Ok(g) => g,
                    Err(_) => return (f64::INFINITY, 1e-9),
                };
                let mut rng = SplitMix64::new(seed ^ 0x27);
                let mut sup = 0.0f64;
                for _ in 0..1000 {
                    let theta = rng.next_f64();
                    let x = rng.next_f64();
                    sup = sup.max((generic.h_fibre(&theta, x) - concrete.h_fibre(theta, x)).abs());
                    let (t1, x1) = generic.fhat(&theta, x);
                    let (t2, x2) = concrete.fhat(theta, x);
                    sup = sup.max(circle::dist(t1, t2)).max((x1 - x2).abs());
                }
                (sup, 1e-9)
            },
        ));
    }
    Ok(props)
}

fn sharkovsky_suite(config: &RunConfig) -> Result<Vec<Prop>> {
    let inner = qpf_system_owned(&RunConfig {
        construction: Construction::Qpf,
        pinch_mode: PinchMode::OneSided,
        ..config.clone()
    })?;
    let sys = std::sync::Arc::new(SurgerySystem::new(inner, 0.63, 0.74)?);
    let grid = config.grid;
    let mut props = Vec::new();

    {
        let s = sys.clone();
        props.push(Prop::new(
            "sharkovsky.boundary-continuity",
            "outer and glued branches agree on the trap boundary",
            move || (s.boundary_residual(grid.min(10_000)), 1e-8),
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "sharkovsky.three-cycle",
            "the constant curves 0, 1/2, 1 form a pointwise 3-cycle",
            move || (s.three_cycle_residual(1000), 1e-9),
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "sharkovsky.curve-absence",
            "glued attractor oscillation certifies no invariant curve",
            move || {
                let cert = s.certify_no_invariant_curve();
                (shortfall(cert.threshold, cert.oscillation), 0.0)
            },
        ));
    }
    {
        let cfg = config.clone();
        props.push(Prop::new(
            "sharkovsky.control-oscillation",
            "without blow-up the oscillation collapses (intact curve)",
            move || {
                let inner = match qpf_system_owned(&RunConfig {
                    construction: Construction::Qpf,
                    pinch_mode: PinchMode::OneSided,
                    trunc: -1,
                    ..cfg.clone()
                }) {
                    Ok(i) => i,
                    Err(_) => return (f64::INFINITY, 1e-6),
                };
                match SurgerySystem::new(inner, 0.63, 0.74) {
                    Ok(c) => (c.certify_no_invariant_curve().oscillation, 1e-6),
                    Err(_) => (f64::INFINITY, 1e-6),
                }
            },
        ));
    }
    {
        let s = sys.clone();
        let seed = config.seed;
        props.push(Prop::new(
            "sharkovsky.basin-capture",
            "orbits outside the trap reach it or ride the 3-cycle",
            move || {
                let report = s.basin_capture(50, 2000, seed ^ 0x3c);
                (report.escaped as f64, 0.0)
            },
        ));
    }
    {
        let s = sys;
        props.push(Prop::new(
            "sharkovsky.trap-monotone",
            "glued fibre maps increase inside the trap",
            move || (s.trap_monotonicity_inversions(50, 400) as f64, 0.0),
        ));
    }
    Ok(props)
}

fn rees_system(config: &RunConfig) -> Result<std::sync::Arc<ReesSystem>> {
    Ok(std::sync::Arc::new(ReesSystem::new(
        config.omega,
        config.rho,
        config.theta_star,
        config.x_star,
        weights_of(config)?,
        config.trunc,
    )?))
}

fn rees_suite(config: &RunConfig) -> Result<Vec<Prop>> {
    let sys = rees_system(config)?;
    let seed = config.seed;
    let mut props = Vec::new();

    {
        let s = sys.clone();
        props.push(Prop::new(
            "rees.glue-continuity",
            "the glued torus map is continuous across the cut line",
            move || {
                let mut worst = 0.0f64;
                for i in 0..1000 {
                    worst = worst.max(s.glue_residual(i as f64 / 1000.0));
                }
                (worst, 1e-8)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "rees.segment-lengths",
            "vertical segments carry the atom masses",
            move || {
                let mut worst = 0.0f64;
                for seg in s.segments() {
                    worst = worst.max((seg.length() - s.weights().weight(seg.index)).abs());
                }
                (worst, 2.0 * s.tail() + 1e-12)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "rees.semiconjugacy",
            "h o fhat = R o h on 1e4 random points",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x4e);
                let mut sup = 0.0f64;
                for _ in 0..10_000 {
                    sup = sup.max(s.semiconjugacy_residual(rng.next_f64(), rng.next_f64()));
                }
                (sup, 1e-8 + 2.0 * s.tail())
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "rees.round-trip",
            "the glued map is a bijection on random points",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x4f);
                let mut sup = 0.0f64;
                for _ in 0..10_000 {
                    let p = (rng.next_f64(), rng.next_f64());
                    let q = s.apply(p.0, p.1);
                    let r = s.apply_inv(q.0, q.1);
                    sup = sup.max(ReesSystem::torus_dist(p, r));
                }
                (sup, 1e-8)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "rees.same-segment-collapse",
            "points of one segment approach each other along the orbit",
            move || {
                let Some(seg) = s.segment(0).copied() else {
                    return (0.0, 0.0);
                };
                let horizon = 40.min(s.trunc().max(0) as u32);
                let p = (seg.fibre, seg.lo + seg.length() / 3.0);
                let q = (seg.fibre, seg.lo + 2.0 * seg.length() / 3.0);
                let rec = s.distality_probe(p, q, horizon);
                let bound = s.weights().weight(horizon as i64) + 2.0 * s.tail();
                ((rec.min_two_sided - bound).max(0.0), 0.0)
            },
        ));
    }
    {
        let s = sys.clone();
        props.push(Prop::new(
            "rees.distality-floor",
            "off-segment control pairs keep a positive orbit distance",
            move || {
                let mut rng = SplitMix64::new(seed ^ 0x50);
                let mut floor = f64::INFINITY;
                for _ in 0..100 {
                    let p = s.invariant_point(rng.next_f64());
                    let q = (p.0, frac(p.1 + 0.3));
                    let rec = s.distality_probe(p, q, 200);
                    floor = floor.min(rec.min_two_sided);
                }
                (shortfall(REES_DISTALITY_FLOOR, floor), 0.0)
            },
        ));
    }
    {
        let s = sys;
        props.push(Prop::new(
            "rees.independence",
            "frequencies pass the integer-relation scan",
            move || {
                let ok = circle::rationally_independent(s.omega(), s.rho());
                ((!ok) as u8 as f64, 0.0)
            },
        ));
    }
    Ok(props)
}

fn emit_artifacts(config: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    match config.construction {
        Construction::Denjoy => {
            let sys = denjoy_system(config)?;
            let gaps: Vec<Vec<f64>> = sys
                .gaps()
                .iter()
                .map(|g| vec![g.index as f64, g.left, g.right, g.weight])
                .collect();
            let p = out_dir.join("gaps.csv");
            csv(&p, "n,c_n,d_n,a_n", &gaps)?;
            files.push(p);

            let n = config.grid;
            let graph: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    let y = i as f64 / n as f64;
                    vec![y, sys.forward(y)]
                })
                .collect();
            let p = out_dir.join("graph.csv");
            csv(&p, "y,f_y", &graph)?;
            files.push(p);

            let cdf: Vec<Vec<f64>> = (0..=n)
                .map(|i| {
                    let y = i as f64 / n as f64;
                    vec![y, sys.nu().cdf(y).unwrap_or(f64::NAN)]
                })
                .collect();
            let p = out_dir.join("cdf.csv");
            csv(&p, "y,nu_0_y", &cdf)?;
            files.push(p);

            let quant: Vec<Vec<f64>> = (0..=n)
                .map(|i| {
                    let x = i as f64 / n as f64;
                    vec![x, sys.factor_map(x)]
                })
                .collect();
            let p = out_dir.join("quantile.csv");
            csv(&p, "x,h_x", &quant)?;
            files.push(p);
        }
        Construction::Qpf | Construction::QpfFilled => {
            let sys = qpf_system(config)?;
            let n = config.grid;
            let mut rows: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    let theta = i as f64 / n as f64;
                    vec![
                        theta,
                        sys.gamma_minus(theta),
                        sys.gamma_plus(theta),
                        f64::NAN,
                    ]
                })
                .collect();
            for seg in sys.segments() {
                rows.push(vec![seg.fibre, seg.lo, seg.hi, seg.index as f64]);
            }
            let p = out_dir.join("pinched_set.csv");
            csv(&p, "theta,lower,upper,segment_index", &rows)?;
            files.push(p);

            for depth in [0usize, config.depth / 3, 2 * config.depth / 3, config.depth] {
                let thetas: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
                let env = sys.global_attractor(&thetas, depth)?;
                let rows: Vec<Vec<f64>> = env
                    .iter()
                    .map(|e| vec![e.theta, e.lower, e.upper])
                    .collect();
                let p = out_dir.join(format!("attractor_depth_{depth}.csv"));
                csv(&p, "theta,lower,upper", &rows)?;
                files.push(p);
            }
        }
        Construction::General => {
            // The general bases expose no canonical grid; emit the segment
            // table, which is the construction's fingerprint.
            let rows: Vec<Vec<f64>> = match config.base {
                BaseKind::Rotation => {
                    let base = CircleRotation::new(config.omega)?;
                    general_segments_rows(config, base, config.theta_star)?
                }
                BaseKind::Torus2 => {
                    let base = TorusTranslation::new(config.omega, config.omega2)?;
                    general_segments_rows(
                        config,
                        base,
                        [config.theta_star, frac(config.theta_star + 0.37)],
                    )?
                }
                BaseKind::Odometer => general_segments_rows(config, Odometer::standard(), 0b1011)?,
            };
            let p = out_dir.join("general_segments.csv");
            csv(&p, "n,lower,upper,width", &rows)?;
            files.push(p);
        }
        Construction::Sharkovsky => {
            let inner = qpf_system_owned(&RunConfig {
                construction: Construction::Qpf,
                pinch_mode: PinchMode::OneSided,
                ..config.clone()
            })?;
            let sys = SurgerySystem::new(inner, 0.63, 0.74)?;
            let n = config.grid.min(10_000);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    let theta = i as f64 / n as f64;
                    let lo = sys.glue(theta, sys.inner().gamma_minus(theta));
                    let hi = sys.glue(theta, sys.inner().gamma_plus(theta));
                    vec![theta, lo, hi]
                })
                .collect();
            let p = out_dir.join("sharkovsky_attractor.csv");
            csv(&p, "theta,lower,upper", &rows)?;
            files.push(p);

            let mut rows = Vec::new();
            for &x in &[0.0, 0.5, 1.0] {
                for i in 0..1000 {
                    let theta = i as f64 / 1000.0;
                    let mut pnt = (theta, x);
                    for _ in 0..3 {
                        pnt = sys.apply(pnt.0, pnt.1);
                    }
                    rows.push(vec![theta, x, (pnt.1 - x).abs()]);
                }
            }
            let p = out_dir.join("sharkovsky_3cycle.csv");
            csv(&p, "theta,x,residual_after_3_steps", &rows)?;
            files.push(p);
        }
        Construction::Rees => {
            let sys = rees_system(config)?;
            let rows: Vec<Vec<f64>> = sys
                .segments()
                .iter()
                .map(|s| vec![s.index as f64, s.fibre, s.atom, s.lo, s.hi, s.length()])
                .collect();
            let p = out_dir.join("rees_segments.csv");
            csv(&p, "n,theta_n,atom,lower,upper,length", &rows)?;
            files.push(p);

            // Probe record: the same-segment pair and the control floor.
            let mut rng = SplitMix64::new(config.seed ^ 0x50);
            let mut pairs = Vec::new();
            let mut floor = f64::INFINITY;
            for _ in 0..100 {
                let p0 = sys.invariant_point(rng.next_f64());
                let q0 = (p0.0, frac(p0.1 + 0.3));
                let rec = sys.distality_probe(p0, q0, 200);
                floor = floor.min(rec.min_two_sided);
                pairs.push(serde_json::json!({
                    "theta": p0.0,
                    "min_two_sided": rec.min_two_sided,
                    "argmin": rec.argmin_two_sided,
                    "min_forward": rec.min_forward,
                }));
            }
            let segment_rec = sys.segment(0).map(|seg| {
                let horizon = 40.min(sys.trunc().max(0) as u32);
                let p = (seg.fibre, seg.lo + seg.length() / 3.0);
                let q = (seg.fibre, seg.lo + 2.0 * seg.length() / 3.0);
                let rec = sys.distality_probe(p, q, horizon);
                serde_json::json!({
                    "horizon": horizon,
                    "min_two_sided": rec.min_two_sided,
                    "argmin": rec.argmin_two_sided,
                    "min_forward": rec.min_forward,
                })
            });
            let doc = serde_json::json!({
                "schema": "pinch-distality/1",
                "floor_recorded": REES_DISTALITY_FLOOR,
                "floor_measured": floor,
                "same_segment_pair": segment_rec,
                "control_pairs": pairs,
            });
            let p = out_dir.join("distality_report.json");
            fs::write(&p, serde_json::to_string_pretty(&doc)?)?;
            files.push(p);
        }
    }
    Ok(files)
}

fn general_segments_rows<B: BaseSystem + 'static>(
    config: &RunConfig,
    base: B,
    center: B::Point,
) -> Result<Vec<Vec<f64>>>
where
    B::Point: 'static,
{
    let curve = general_curve(&base);
    let seqs = PinchSequences::build(&base, center, 24, 0.25)?;
    let (phi, psi) = forcing::make_pinch_general(&base, curve.clone(), &seqs)?;
    let sys = GeneralBlownUp::new(
        base,
        center,
        curve,
        phi,
        psi,
        0.5,
        weights_of(config)?,
        config.trunc,
        1_000_000,
    )?;
    Ok(sys
        .segments()
        .iter()
        .map(|s| vec![s.index as f64, s.lo, s.hi, s.width()])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(construction: Construction) -> RunConfig {
        RunConfig {
            construction,
            trunc: 10,
            grid: 500,
            depth: 20,
            ..RunConfig::default()
        }
    }

    #[test]
    fn denjoy_verification_passes() {
        let report = verify(&small_cfg(Construction::Denjoy)).unwrap();
        assert!(report.pass, "\n{}", report.summary());
    }

    #[test]
    fn reports_are_bit_identical_for_same_seed() {
        let cfg = small_cfg(Construction::Denjoy);
        let a = verify(&cfg).unwrap().to_json().unwrap();
        let b = verify(&cfg).unwrap().to_json().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn run_emits_denjoy_artifacts() {
        let cfg = small_cfg(Construction::Denjoy);
        let dir = std::env::temp_dir().join("pinch-runner-test");
        let _ = fs::remove_dir_all(&dir);
        let (report, files) = run(&cfg, &dir).unwrap();
        assert!(report.pass);
        for name in [
            "gaps.csv",
            "graph.csv",
            "cdf.csv",
            "quantile.csv",
            "report.json",
        ] {
            assert!(
                files.iter().any(|f| f.ends_with(name)),
                "missing artifact {name}"
            );
        }
        let gaps = fs::read_to_string(dir.join("gaps.csv")).unwrap();
        assert!(gaps.lines().count() == 22, "21 gaps + header");
    }
}
