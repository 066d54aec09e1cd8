use std::f64::consts::{PI, SQRT_2};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use slicsim::analysis::{
    linspace, map_to_json, sweep_curve, sweep_map, write_curve_csv, write_map_csv, xi_cslic_nominal,
    xi_slic_nominal, Curve, Distribution, Probe,
};
use slicsim::hetero::{EnsembleConfig, EpsGrid, PipelineConfig};
use slicsim::propagator::{average_hamiltonian_with, AhtOptions};
use slicsim::pulse::{
    build_adslic, build_cslic, build_slic, expand_cycle, matching_catalog, optimal_repetitions, parse_cycle,
    AdiabaticShape, Couplings, CslicParams, Sequence, Variant,
};
use slicsim::spin_ops::{decompose_transitions, singlet_triplet_basis};
use slicsim::{Channel, SpinSystem};

use crate::args::{
    EffhamArgs, MapArgs, ParseArgs, PipelineArgs, RangeArg, ResponseArgs, ResponseMode, SequenceArgs, SequenceKind,
};
use crate::CliError;

fn proton() -> Channel {
    Channel::from("H")
}

fn axis(range: &RangeArg, res: usize) -> Result<Vec<f64>, CliError> {
    Ok(linspace(range.start, range.stop, range.points.unwrap_or(res))?)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// J periods in a cycle string: every period holds two A elements.
fn cycle_periods(text: &str) -> Result<u32, CliError> {
    let a = expand_cycle(text)?.chars().filter(|&c| c == 'A').count() as u32;
    Ok((a / 2).max(1))
}

fn build_sequence(a: &SequenceArgs) -> Result<Sequence, CliError> {
    let nominal_t = || 1.0 / (SQRT_2 * a.delta.abs());
    let h = proton();
    let seq = match &a.sequence {
        SequenceKind::Slic => build_slic(a.j, a.t.unwrap_or_else(nominal_t), a.phase.0, &h)?,
        SequenceKind::Adslic => {
            let t = a.t.ok_or_else(|| CliError::Usage("--t is required for adslic".into()))?;
            let shape = AdiabaticShape::new(a.delta_max, a.xi, t, a.samples)?;
            build_adslic(&shape, a.j, &h)?.phase_shifted(a.phase.0)
        }
        SequenceKind::Cslic => {
            let n = match a.n {
                Some(n) => n,
                None => optimal_repetitions(a.j, a.delta)?,
            };
            build_cslic(&CslicParams::new(a.j, a.alpha, n)?, &h)?.phase_shifted(a.phase.0)
        }
        SequenceKind::Cycle(text) => {
            let n = match a.n {
                Some(n) => n,
                None => {
                    let total = optimal_repetitions(a.j, a.delta)? as f64;
                    ((total / cycle_periods(text)? as f64).round() as u32).max(1)
                }
            };
            let strong = CslicParams::new(a.j, a.alpha, 1)?.strong_nut_hz;
            parse_cycle(text, a.j, strong, a.alpha, &h)?.repeated(n).phase_shifted(a.phase.0)
        }
    };
    Ok(seq)
}

pub fn map(a: &MapArgs) -> Result<(), CliError> {
    let sys = SpinSystem::ab(a.seq.j, a.seq.delta)?;
    let seq = build_sequence(&a.seq)?;
    let default_off = RangeArg { start: -0.2 * a.seq.j, stop: 0.2 * a.seq.j, points: None };
    let offsets = axis(a.offset_range.as_ref().unwrap_or(&default_off), a.res)?;
    let eps = axis(&a.eps_range, a.res)?;
    let probe = Probe::singlet_order(&sys, &proton(), (1, 2))?;
    let m = sweep_map(&seq, &sys, &offsets, &eps, &probe)?;
    let mut w = output(a.out.as_deref())?;
    write_map_csv(&m, &mut w)?;
    w.flush()?;
    if let Some(p) = &a.json {
        std::fs::write(p, map_to_json(&m)?)?;
    }
    log::info!("map of {} points, min {:.6}, max {:.6}", m.amplitudes().len(), m.min(), m.max());
    Ok(())
}

pub fn response(a: &ResponseArgs) -> Result<(), CliError> {
    let eps = axis(&a.eps_range, a.res)?;
    let cond = matching_catalog(Variant::Ab, &Couplings { delta: Some(a.seq.delta), j12: Some(a.seq.j), ..Default::default() })?;
    let rabi = 2.0 * PI * cond.rabi_hz.abs();
    let resonance = 2.0 * PI * cond.resonance_hz;
    let amplitude = match a.mode {
        ResponseMode::AnalyticSlic => eps.iter().map(|&e| xi_slic_nominal(rabi, resonance, e)).collect(),
        ResponseMode::AnalyticCslic => eps.iter().map(|&e| xi_cslic_nominal(rabi, e)).collect(),
        ResponseMode::Numeric => {
            let sys = SpinSystem::ab(a.seq.j, a.seq.delta)?;
            let seq = build_sequence(&a.seq)?;
            let probe = Probe::singlet_order(&sys, &proton(), (1, 2))?;
            let mut curve = sweep_curve(&seq, &sys, &eps, &probe)?;
            if !a.raw {
                let peak = sweep_curve(&seq, &sys, &[0.0], &probe)?[0];
                if peak == 0.0 {
                    return Err(CliError::Run(slicsim::Error::InvalidParameter(
                        "no transfer at exact matching; cannot normalize (use --raw)".into(),
                    )));
                }
                curve.iter_mut().for_each(|v| *v /= peak);
            }
            curve
        }
    };
    let mut w = output(a.out.as_deref())?;
    write_curve_csv(&Curve { eps_axis: eps, amplitude }, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn effham(a: &EffhamArgs) -> Result<(), CliError> {
    let sys = SpinSystem::ab(a.j, a.delta)?;
    let h = proton();
    let seq = match &a.sequence {
        SequenceKind::Slic => build_slic(a.j, 1.0 / a.j.abs(), a.phase.0, &h)?,
        SequenceKind::Cslic => build_cslic(&CslicParams::new(a.j, a.alpha, 1)?, &h)?.phase_shifted(a.phase.0),
        SequenceKind::Cycle(text) => {
            let strong = CslicParams::new(a.j, a.alpha, 1)?.strong_nut_hz;
            parse_cycle(text, a.j, strong, a.alpha, &h)?.phase_shifted(a.phase.0)
        }
        SequenceKind::Adslic => return Err(CliError::Usage("adslic has no cycle; use slic, cslic or cycle:".into())),
    };
    let opts = AhtOptions { eps_rf: a.eps, steps: a.steps, ..Default::default() };
    let avg = average_hamiltonian_with(&seq, &sys, &opts)?;
    let states = singlet_triplet_basis((1, 2), 2)?;
    let labels = ["S0", "T+", "T0", "T-"];
    let dec = decompose_transitions(&avg.operator, &states, &labels)?;

    let mut out = io::stdout().lock();
    writeln!(out, "sequence: {}", seq.name)?;
    writeln!(out, "period_s: {:.9}", seq.total_duration())?;
    writeln!(out, "cyclic: {} (deviation {:.3e})", if avg.is_cyclic() { "yes" } else { "no" }, avg.cycle_deviation)?;
    writeln!(out, "matrix (rad/s, Zeeman basis aa ab ba bb):")?;
    let m = avg.operator.matrix();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format!("{:+.6}{:+.6}i", m[(r, c)].re, m[(r, c)].im)).collect();
        writeln!(out, "  {}", row.join("  "))?;
    }
    writeln!(out, "single-transition coefficients (rad/s):")?;
    let mut dominant = (0.0f64, String::new());
    for &(r, s, cx, cy) in &dec.transitions {
        let name = format!("{},{}", labels[r], labels[s]);
        writeln!(out, "  I_x^{{{name}}} {cx:+.9}  I_y^{{{name}}} {cy:+.9}")?;
        for (v, axis) in [(cx, 'x'), (cy, 'y')] {
            if v.abs() > dominant.0.abs() {
                dominant = (v, format!("I_{axis}^{{{name}}}"));
            }
        }
    }
    let diag: Vec<String> = dec.diagonal.iter().zip(labels).map(|(d, l)| format!("{l} {d:+.6}")).collect();
    writeln!(out, "diagonal: {}", diag.join("  "))?;
    writeln!(out, "dominant: {} = {:+.9}", dominant.1, dominant.0)?;
    writeln!(out, "reference -sqrt(2)*pi*delta = {:+.9}", -SQRT_2 * PI * a.delta)?;
    Ok(())
}

pub fn parse(a: &ParseArgs) -> Result<(), CliError> {
    let strong = CslicParams::new(a.j, a.alpha, 1)?.strong_nut_hz;
    let seq = parse_cycle(&a.text, a.j, strong, a.alpha, &proton())?;
    let mut out = io::stdout().lock();
    if a.json {
        writeln!(out, "{}", seq.to_json())?;
        return Ok(());
    }
    writeln!(out, "{}", expand_cycle(&a.text)?)?;
    writeln!(out, "{} elements", seq.len())?;
    writeln!(out, "weak {:.6} Hz, strong {:.6} Hz, alpha {}", a.j, strong, a.alpha)?;
    let mut t = 0.0;
    for (k, s) in seq.segments().iter().enumerate() {
        let tag = if s.phase_rad == 0.0 { 'A' } else { 'B' };
        writeln!(out, "{:>3} {tag} start {:.9} s duration {:.9} s", k + 1, t, s.duration_s)?;
        t += s.duration_s;
    }
    writeln!(out, "total {:.9} s", seq.total_duration())?;
    Ok(())
}

pub fn pipeline(a: &PipelineArgs) -> Result<(), CliError> {
    let mut cfg = PipelineConfig::load(&a.config)?;
    if let Some(r) = &a.eps_range {
        cfg.eps = EpsGrid { start: r.start, stop: r.stop, points: r.points.unwrap_or(a.res) };
    }
    if let Some(sigma) = a.sigma {
        let points = cfg.ensemble.map(|e| e.points).unwrap_or(32);
        cfg.ensemble = Some(EnsembleConfig { distribution: Distribution::Gaussian { sigma }, points });
    }
    let run = cfg.run()?;
    let mut w = output(a.out.as_deref())?;
    write_curve_csv(&run.curve, &mut w)?;
    w.flush()?;
    if let Some(mean) = run.ensemble_mean {
        eprintln!("ensemble mean: {mean:.9}");
    }
    Ok(())
}
