//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints its PASS/FAIL line with the measured numbers.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slicsim::analysis::{
    half_max_width, linspace, sweep_curve, sweep_map, xi_cslic_nominal, xi_slic_nominal, Probe,
};
use slicsim::hetero::{run_pipeline_traced, PipelineConfig, PipelineOptions};
use slicsim::propagator::{average_hamiltonian_first_order, sequence_propagator};
use slicsim::pulse::{
    build_adslic, build_cslic, build_slic, optimal_repetitions, parse_cycle, AdiabaticShape, CslicParams,
    PulseSegment, Sequence, DEFAULT_ADSLIC_SAMPLES,
};
use slicsim::spin_ops::{decompose_transitions, singlet_triplet_basis};
use slicsim::{Channel, OffsetSetting, SpinSystem};

/// Half-maximum width ratio (cSLIC / SLIC) measured on the 101×101 grid.
/// The cSLIC line never falls below half inside ε ∈ [−0.5, 0.5], so its
/// width saturates at the axis and the ratio is a lower bound.
const FROZEN_WIDTH_RATIO: f64 = 7.0624;
const FROZEN_WIDTH_RTOL: f64 = 1e-3;

struct Outcome {
    pass: bool,
    detail: String,
}

type Check = fn() -> Result<Outcome, Box<dyn std::error::Error>>;

fn h() -> Channel {
    Channel::from("H")
}

fn probe(sys: &SpinSystem) -> Probe {
    Probe::singlet_order(sys, &h(), (1, 2)).expect("AB probe")
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed <= limit
}

fn analytic_identities() -> Result<Outcome, Box<dyn std::error::Error>> {
    let rabi = TAU * 10.0 / SQRT_2;
    let slic0 = xi_slic_nominal(rabi, TAU * 100.0, 0.0);
    let cslic0 = xi_cslic_nominal(rabi, 0.0);
    let reversed = xi_cslic_nominal(rabi, -2.0);
    let worst = (slic0 - 1.0).abs().max((cslic0 - 1.0).abs()).max((reversed + 1.0).abs());
    Ok(Outcome {
        pass: worst < 1e-12,
        detail: format!("slic(0)={slic0:.15} cslic(0)={cslic0:.15} cslic(-2)={reversed:.15} worst={worst:.2e}"),
    })
}

fn analytic_vs_numeric() -> Result<Outcome, Box<dyn std::error::Error>> {
    let start = Instant::now();
    let (j, d) = (100.0, 10.0);
    let sys = SpinSystem::ab(j, d)?;
    let p = probe(&sys);
    let eps = linspace(-0.2, 0.2, 41)?;
    let rabi = TAU * d / SQRT_2;
    let slic = build_slic(j, 1.0 / (SQRT_2 * d), 0.0, &h())?;
    let cslic = build_cslic(&CslicParams::new(j, 0.99, optimal_repetitions(j, d)?)?, &h())?;
    let deviation = |seq: &Sequence, model: &dyn Fn(f64) -> f64| -> Result<f64, slicsim::Error> {
        let reference = sweep_curve(seq, &sys, &[0.0], &p)?[0];
        let curve = sweep_curve(seq, &sys, &eps, &p)?;
        Ok(eps.iter().zip(&curve).map(|(&e, &v)| (v / reference - model(e)).abs()).fold(0.0, f64::max))
    };
    let ds = deviation(&slic, &|e| xi_slic_nominal(rabi, TAU * j, e))?;
    let dc = deviation(&cslic, &|e| xi_cslic_nominal(rabi, e))?;
    let elapsed = start.elapsed();
    Ok(Outcome {
        pass: ds < 0.03 && dc < 0.03 && within(Duration::from_secs(5), elapsed),
        detail: format!("max |numeric - analytic|: slic {ds:.4} cslic {dc:.4} (limit 0.03), {elapsed:.2?}"),
    })
}

fn effective_hamiltonian() -> Result<Outcome, Box<dyn std::error::Error>> {
    let start = Instant::now();
    let (j, d) = (15.0, 1.9);
    let sys = SpinSystem::ab(j, d)?;
    let avg = average_hamiltonian_first_order(&build_slic(j, 1.0 / j, 0.0, &h())?, &sys)?;
    let states = singlet_triplet_basis((1, 2), 2)?;
    let dec = decompose_transitions(&avg.operator, &states, &["S0", "T+", "T0", "T-"])?;
    let target = -SQRT_2 * PI * d;
    let (dominant, dominant_y) = dec.coefficient(0, 1).ok_or("missing S0-T+ coefficient")?;
    let rel = ((dominant - target) / target).abs();
    let others = dec
        .transitions
        .iter()
        .flat_map(|&(r, s, cx, cy)| if (r, s) == (0, 1) { vec![cy] } else { vec![cx, cy] })
        .map(f64::abs)
        .fold(dominant_y.abs(), f64::max);
    let elapsed = start.elapsed();
    Ok(Outcome {
        pass: rel < 1e-6 && others < 1e-6 && within(Duration::from_secs(1), elapsed),
        detail: format!(
            "S0-T+ x coefficient {dominant:.9} vs {target:.9} (rel {rel:.1e}), largest other {others:.1e}, {elapsed:.2?}"
        ),
    })
}

fn contour_maps() -> Result<Outcome, Box<dyn std::error::Error>> {
    let start = Instant::now();
    let (j, d) = (15.0, 1.9);
    let sys = SpinSystem::ab(j, d)?;
    let p = probe(&sys);
    let offsets = linspace(-0.2 * j, 0.2 * j, 101)?;
    let eps = linspace(-0.5, 0.5, 101)?;
    let slic = sweep_map(&build_slic(j, 0.375, 0.0, &h())?, &sys, &offsets, &eps, &p)?;
    let cslic = sweep_map(&build_cslic(&CslicParams::new(j, 0.99, 6)?, &h())?, &sys, &offsets, &eps, &p)?;
    let (centre, minus, plus) = (50, 20, 80);
    let ws = half_max_width(&eps, &slic.eps_line(centre)).ok_or("no SLIC peak")?;
    let wc = half_max_width(&eps, &cslic.eps_line(centre)).ok_or("no cSLIC peak")?;
    let ratio = wc / ws;
    let origin = cslic.get(centre, centre);
    let (lo, hi) = (cslic.get(minus, centre) / origin, cslic.get(plus, centre) / origin);
    let frozen = ((ratio - FROZEN_WIDTH_RATIO) / FROZEN_WIDTH_RATIO).abs() < FROZEN_WIDTH_RTOL;
    let elapsed = start.elapsed();
    Ok(Outcome {
        pass: ratio >= 3.0 && frozen && lo >= 0.8 && hi >= 0.8 && within(Duration::from_secs(30), elapsed),
        detail: format!(
            "width slic {ws:.4} cslic {wc:.4} ratio {ratio:.4} (frozen {FROZEN_WIDTH_RATIO}); \
             cslic at eps -0.3/+0.3 = {lo:.3}/{hi:.3} of origin, {elapsed:.2?}"
        ),
    })
}

fn supercycle_sign() -> Result<Outcome, Box<dyn std::error::Error>> {
    let start = Instant::now();
    let (j, d, alpha) = (100.0, 3.0, 0.99);
    let sys = SpinSystem::ab(j, d)?;
    let p = probe(&sys);
    let strong = CslicParams::new(j, alpha, 1)?.strong_nut_hz;
    let offsets = linspace(-0.2 * j, 0.2 * j, 101)?;
    let eps = linspace(-0.5, 0.5, 101)?;
    let s3 = parse_cycle("S3", j, strong, alpha, &h())?.repeated(8);
    let s1 = parse_cycle("S1", j, strong, alpha, &h())?.repeated(24);
    let m3 = sweep_map(&s3, &sys, &offsets, &eps, &p)?.min();
    let m1 = sweep_map(&s1, &sys, &offsets, &eps, &p)?.min();
    let elapsed = start.elapsed();
    Ok(Outcome {
        pass: m3 >= -0.02 && m1 < -0.2 && within(Duration::from_secs(60), elapsed),
        detail: format!("min S3x8 {m3:.4} (need >= -0.02), min S1x24 {m1:.4} (need < -0.2), {elapsed:.2?}"),
    })
}

fn random_sequence(rng: &mut ChaCha8Rng, channels: &[Channel]) -> Result<Sequence, slicsim::Error> {
    let len = rng.random_range(1..=24);
    let segments = (0..len)
        .map(|_| {
            let ch = channels[rng.random_range(0..channels.len())].clone();
            PulseSegment::new(ch, rng.random_range(0.0..400.0), rng.random_range(0.0..TAU), rng.random_range(1e-4..0.05))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Sequence::new("random", slicsim::pulse::Nominal::Custom, segments)
}

fn structural() -> Result<Outcome, Box<dyn std::error::Error>> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x51C5);
    let ab = SpinSystem::ab(15.0, 1.9)?;
    let three = slicsim::hetero::build_fumarate_like(15.0, 5.8, 3.1, 0.4)?;
    let mut worst_unitary = 0.0f64;
    for k in 0..100 {
        let (sys, channels) = if k % 2 == 0 { (&ab, vec![h()]) } else { (&three, vec![h(), "C".into()]) };
        let seq = random_sequence(&mut rng, &channels)?;
        let off = OffsetSetting::with_resonance_offset(sys, &h(), rng.random_range(-20.0..20.0))?;
        let u = sequence_propagator(&seq, sys, &off, rng.random_range(-0.5..0.5))?;
        worst_unitary = worst_unitary.max(u.unitary_deviation());
    }
    let mut worst_period = 0.0f64;
    for _ in 0..20 {
        let j = rng.random_range(1.0..300.0);
        let alpha = rng.random_range(0.51..0.999);
        let seq = build_cslic(&CslicParams::new(j, alpha, 1)?, &h())?;
        worst_period = worst_period.max((seq.total_duration() * j - 1.0).abs());
    }
    let p = CslicParams::new(15.0, 0.99, 1)?;
    let parsed = parse_cycle("ABBA", 15.0, p.strong_nut_hz, 0.99, &h())?;
    let same = parsed.coalesced().segments() == build_cslic(&p, &h())?.coalesced().segments();
    let n = optimal_repetitions(15.0, 1.9)?;
    let elapsed = start.elapsed();
    Ok(Outcome {
        pass: worst_unitary < 1e-9 && worst_period < 1e-12 && same && n == 6 && within(Duration::from_secs(5), elapsed),
        detail: format!(
            "max |U*U - 1| {worst_unitary:.1e}, max |J T - 1| {worst_period:.1e}, ABBA == cSLIC(1): {same}, \
             n(15, 1.9) = {n}, {elapsed:.2?}"
        ),
    })
}

fn config_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn pipeline_ordering() -> Result<Outcome, Box<dyn std::error::Error>> {
    let start = Instant::now();
    let mut means = Vec::new();
    let mut shapes = Vec::new();
    for name in ["slic", "adslic", "cslic"] {
        let cfg = PipelineConfig::load(config_dir().join(format!("fumarate_{name}.toml")))?;
        let ens = cfg.ensemble.as_ref().ok_or("config lacks an ensemble")?;
        if ens.distribution != (slicsim::analysis::Distribution::Gaussian { sigma: 0.1 }) {
            return Err(format!("{name}: expected a Gaussian sigma = 0.1 ensemble").into());
        }
        means.push(cfg.run()?.ensemble_mean.ok_or("no ensemble mean")?);
        let (sys, hs, cs) = cfg.build()?;
        let opts = PipelineOptions { scope: cfg.rf_error, ..Default::default() };
        let at = |e: f64| run_pipeline_traced(&hs, &cs, &sys, e, &opts).map(|t| t.signal);
        shapes.push([at(0.0)?, at(-0.1)?, at(0.1)?, at(-0.5)?, at(0.5)?]);
    }
    let [slic, _, cslic] = [shapes[0], shapes[1], shapes[2]];
    let slic_drop = (slic[1] / slic[0]).max(slic[2] / slic[0]);
    let cslic_keep = (cslic[3] / cslic[0]).min(cslic[4] / cslic[0]);
    let ordered = means[2] > means[1] && means[1] > means[0];
    let elapsed = start.elapsed();
    Ok(Outcome {
        pass: ordered && slic_drop <= 0.6 && cslic_keep >= 0.5 && within(Duration::from_secs(30), elapsed),
        detail: format!(
            "ensemble means slic {:.4} adslic {:.4} cslic {:.4}; slic at eps +-0.1 <= {slic_drop:.3} of peak, \
             cslic at eps +-0.5 >= {cslic_keep:.3} of peak, {elapsed:.2?}",
            means[0], means[1], means[2]
        ),
    })
}

fn determinism() -> Result<Outcome, Box<dyn std::error::Error>> {
    let start = Instant::now();
    let dir = tempfile::tempdir()?;
    let run = |threads: u32| -> Result<Vec<u8>, Box<dyn std::error::Error>> {
        let out = dir.path().join(format!("map_{threads}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_slicsim"))
            .args(["--threads", &threads.to_string(), "map", "--sequence", "cslic", "--j", "15", "--delta", "1.9"])
            .args(["--n", "6", "--alpha", "0.99", "--res", "101", "--out"])
            .arg(&out)
            .status()?;
        if !status.success() {
            return Err(format!("slicsim exited with {status}").into());
        }
        Ok(std::fs::read(out)?)
    };
    let one = run(1)?;
    let eight = run(8)?;
    let elapsed = start.elapsed();
    Ok(Outcome {
        pass: one == eight && !one.is_empty() && within(Duration::from_secs(30), elapsed),
        detail: format!("{} bytes, identical: {}, {elapsed:.2?}", one.len(), one == eight),
    })
}

fn adslic_discretization() -> Result<Outcome, Box<dyn std::error::Error>> {
    let (j, d) = (15.0, 1.9);
    let sys = SpinSystem::ab(j, d)?;
    let p = probe(&sys);
    let offsets = [-0.2 * j, 0.0, 0.2 * j];
    let eps = [-0.5, -0.3, 0.0, 0.3, 0.5];
    let mut worst = 0.0f64;
    for total in [0.5, 1.56] {
        let map = |n| -> Result<Vec<f64>, slicsim::Error> {
            let seq = build_adslic(&AdiabaticShape::new(0.5, 0.9, total, n)?, j, &h())?;
            Ok(sweep_map(&seq, &sys, &offsets, &eps, &p)?.amplitudes().to_vec())
        };
        let (coarse, fine) = (map(DEFAULT_ADSLIC_SAMPLES)?, map(2 * DEFAULT_ADSLIC_SAMPLES)?);
        worst = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    Ok(Outcome {
        pass: worst < 1e-6,
        detail: format!("{DEFAULT_ADSLIC_SAMPLES} vs {} segments: max change {worst:.2e}", 2 * DEFAULT_ADSLIC_SAMPLES),
    })
}

fn main() {
    let checks: [(&str, Check); 9] = [
        ("1 analytic identities", analytic_identities),
        ("2 analytic vs numeric response", analytic_vs_numeric),
        ("3 SLIC effective Hamiltonian", effective_hamiltonian),
        ("4 contour-map robustness", contour_maps),
        ("5 supercycle sign uniformity", supercycle_sign),
        ("6 structural invariants", structural),
        ("7 heteronuclear pipeline ordering", pipeline_ordering),
        ("8 CLI determinism across thread counts", determinism),
        ("adSLIC discretization convergence", adslic_discretization),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("{} [{name}] {detail}", if pass { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
