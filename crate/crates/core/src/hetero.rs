//! Singlet-mediated ¹H → ¹³C polarization transfer on a three-spin
//! H₂C system: excitation, proton singlet preparation, an ideal singlet
//! filter, and carbon conversion to observable magnetization.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{linspace, quadrature_nodes, Curve, Distribution};

use crate::error::{invalid, Error, Result};
use crate::propagator::{segment_propagator, Evolver};
use crate::pulse::{matching_catalog, Couplings, MatchingCondition, Sequence, SequenceSpec, Variant};
use crate::spin_ops::{angular_momentum, singlet_order_op, Axis, Operator};
use crate::system::{OffsetSetting, SpinSystemConfig};
use crate::{Channel, SpinSystem};

/// Two protons (spins 1, 2) on channel `H` and one carbon (spin 3) on `C`.
///
/// The protons sit at ±δ/2; the carbon at 0. The couplings are
/// J₁₂ = J_HH, J₁₃ = J_CH and J₂₃ = J_CH′.
pub fn build_fumarate_like(j_hh_hz: f64, j_ch_hz: f64, j_ch_prime_hz: f64, proton_delta_hz: f64) -> Result<SpinSystem> {
    SpinSystem::new(
        vec!["H".into(), "H".into(), "C".into()],
        vec![proton_delta_hz / 2.0, -proton_delta_hz / 2.0, 0.0],
        &[j_hh_hz, j_ch_hz, j_ch_prime_hz],
    )
}

/// Matching condition for the carbon step: the differential CH coupling
/// drives the proton singlet–triplet transition at ν_nut = J_HH.
pub fn pipeline_matching(sys: &SpinSystem, pair: (usize, usize), hetero_spin: usize) -> Result<MatchingCondition> {
    let c = Couplings {
        j_is: Some(sys.j(pair.0, hetero_spin)),
        j_i2s: Some(sys.j(pair.1, hetero_spin)),
        j_ii: Some(sys.j(pair.0, pair.1)),
        ..Default::default()
    };
    matching_catalog(Variant::Phip, &c)
}

/// Keeps the part of ρ along Q_SO ⊗ 1 and Q_SO ⊗ 2I_kz for every spectator
/// spin k, discarding everything else.
pub fn singlet_filter(rho: &Operator, pair: (usize, usize), num_spins: usize) -> Result<Operator> {
    let dim = 1usize << num_spins;
    if rho.dim() != dim {
        return Err(Error::Dimension { expected: dim, found: rho.dim() });
    }
    let q = singlet_order_op(pair, num_spins)?;
    let mut basis = vec![q.clone()];
    for k in (1..=num_spins).filter(|&k| k != pair.0 && k != pair.1) {
        let z = angular_momentum(num_spins, k, Axis::Z)?.scale(2.0);
        basis.push(Operator::hermitian_part(&(q.matrix() * z.matrix())));
    }
    // the basis is orthogonal: spectator Zeeman terms are traceless
    let mut out = Operator::zeros(dim);
    for b in &basis {
        let c = b.inner(rho).re / b.inner(b).re;
        out = &out + &b.scale(c);
    }
    Ok(out)
}

/// Which stages see the rf amplitude error ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RfErrorScope {
    /// Only the carbon stage, the quantity a carbon nutation calibration
    /// would miss.
    #[default]
    Carbon,
    Proton,
    Both,
}

impl RfErrorScope {
    fn factor(self, channel: &Channel, proton: &Channel, carbon: &Channel, eps: f64) -> f64 {
        let hit = match self {
            RfErrorScope::Both => true,
            RfErrorScope::Carbon => channel == carbon,
            RfErrorScope::Proton => channel == proton,
        };
        if hit {
            1.0 + eps
        } else {
            1.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub proton: Channel,
    pub carbon: Channel,
    pub pair: (usize, usize),
    pub scope: RfErrorScope,
    pub filter: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self { proton: "H".into(), carbon: "C".into(), pair: (1, 2), scope: RfErrorScope::default(), filter: true }
    }
}

/// Density operator after each stage.
#[derive(Debug, Clone)]
pub struct PipelineTrace {
    pub initial: Operator,
    pub excited: Operator,
    pub prepared: Operator,
    pub filtered: Operator,
    pub converted: Operator,
    /// Tr{I_φ(C) ρ} / Tr{I_z(C)²} with φ the phase of the first carbon
    /// segment.
    pub signal: f64,
}

pub fn run_pipeline(seq_h: &Sequence, seq_c: &Sequence, sys: &SpinSystem, eps_rf: f64) -> Result<f64> {
    Ok(run_pipeline_traced(seq_h, seq_c, sys, eps_rf, &PipelineOptions::default())?.signal)
}

/// ρ₀ = Σ I_z(H), an ideal 90° pulse about the axis 90° ahead of the first
/// proton segment's phase (90°_y for an x-phase lock), the proton sequence,
/// the filter, the carbon sequence, then carbon transverse readout.
pub fn run_pipeline_traced(
    seq_h: &Sequence,
    seq_c: &Sequence,
    sys: &SpinSystem,
    eps_rf: f64,
    opts: &PipelineOptions,
) -> Result<PipelineTrace> {
    let (first_h, first_c) = match (seq_h.segments().first(), seq_c.segments().first()) {
        (Some(h), Some(c)) => (h, c),
        _ => return Err(invalid("pipeline sequences must not be empty")),
    };
    for (seq, ch) in [(seq_h, &opts.proton), (seq_c, &opts.carbon)] {
        if let Some(s) = seq.segments().iter().find(|s| &s.channel != ch) {
            return Err(invalid(format!(
                "sequence '{}' irradiates channel {} but belongs on {ch}",
                seq.name, s.channel
            )));
        }
    }
    let protons = sys.spins_on(&opts.proton);
    let carbons = sys.spins_on(&opts.carbon);
    if protons.is_empty() {
        return Err(Error::UnknownChannel(opts.proton.to_string()));
    }
    if carbons.is_empty() {
        return Err(Error::UnknownChannel(opts.carbon.to_string()));
    }
    let n = sys.num_spins();
    let total = |spins: &[usize], axis: Axis| -> Result<Operator> {
        let mut o = Operator::zeros(sys.dim());
        for &k in spins {
            o = &o + &angular_momentum(n, k, axis)?;
        }
        Ok(o)
    };
    let initial = total(&protons, Axis::Z)?;

    let axis = first_h.phase_rad + FRAC_PI_2;
    let gen = &total(&protons, Axis::X)?.scale(axis.cos()) + &total(&protons, Axis::Y)?.scale(axis.sin());
    let excited = segment_propagator(&gen, FRAC_PI_2)?.conjugate(&initial);

    let evolver = Evolver::new(sys, &OffsetSetting::on_resonance(sys))?;
    let scale = |c: &Channel| opts.scope.factor(c, &opts.proton, &opts.carbon, eps_rf);
    let prepared = evolver.propagate(seq_h, &scale)?.conjugate(&excited);
    let filtered = if opts.filter { singlet_filter(&prepared, opts.pair, n)? } else { prepared.clone() };
    let converted = evolver.propagate(seq_c, &scale)?.conjugate(&filtered);

    let phi = first_c.phase_rad;
    let detect = &total(&carbons, Axis::X)?.scale(phi.cos()) + &total(&carbons, Axis::Y)?.scale(phi.sin());
    let cz = total(&carbons, Axis::Z)?;
    let signal = detect.inner(&converted).re / cz.inner(&cz).re;
    Ok(PipelineTrace { initial, excited, prepared, filtered, converted, signal })
}

/// Pipeline recipe as stored on disk.
///
/// ```toml
/// rf_error = "carbon"
///
/// [system]
/// num_spins = 3
/// channels = ["H", "H", "C"]
/// offsets_hz = [0.0, 0.0, 0.0]
/// j_hz = [15.0, 5.8, 3.1]
///
/// [proton]
/// kind = "slic"
/// duration_s = 0.524
///
/// [carbon]
/// kind = "slic"
/// duration_s = 0.370
///
/// [eps]
/// start = -0.5
/// stop = 0.5
/// points = 51
///
/// [ensemble]
/// kind = "gaussian"
/// sigma = 0.1
/// points = 32
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub rf_error: RfErrorScope,
    /// Matching amplitude of both stages; J₁₂ of the system when absent.
    #[serde(default)]
    pub matching_hz: Option<f64>,
    pub system: SpinSystemConfig,
    pub proton: SequenceSpec,
    pub carbon: SequenceSpec,
    pub eps: EpsGrid,
    #[serde(default)]
    pub ensemble: Option<EnsembleConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    #[serde(flatten)]
    pub distribution: Distribution,
    #[serde(default = "default_nodes")]
    pub points: usize,
}

fn default_nodes() -> usize {
    32
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineRun {
    pub curve: Curve,
    pub ensemble_mean: Option<f64>,
}

impl PipelineConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// System and the two sequences, built at the matching amplitude.
    pub fn build(&self) -> Result<(SpinSystem, Sequence, Sequence)> {
        let sys = SpinSystem::from_config(&self.system)?;
        let opts = PipelineOptions::default();
        let pair = opts.pair;
        if sys.num_spins() < 3 {
            return Err(Error::InvalidSystem("the pipeline needs two protons and a heteronucleus".into()));
        }
        let j = self.matching_hz.unwrap_or_else(|| sys.j(pair.0, pair.1));
        let h = self.proton.build(j, &opts.proton)?;
        let c = self.carbon.build(j, &opts.carbon)?;
        Ok((sys, h, c))
    }

    /// ε curve on the configured grid and, if configured, the ensemble
    /// mean; grid points and quadrature nodes run in parallel.
    pub fn run(&self) -> Result<PipelineRun> {
        let (sys, h, c) = self.build()?;
        let opts = PipelineOptions { scope: self.rf_error, ..Default::default() };
        let eval = |eps: f64| run_pipeline_traced(&h, &c, &sys, eps, &opts).map(|t| t.signal);
        let eps_axis = linspace(self.eps.start, self.eps.stop, self.eps.points)?;
        let amplitude = eps_axis.par_iter().map(|&e| eval(e)).collect::<Result<Vec<f64>>>()?;
        let ensemble_mean = match &self.ensemble {
            Some(ens) => {
                let nodes = quadrature_nodes(&ens.distribution, ens.points)?;
                let values = nodes.par_iter().map(|&(x, _)| eval(x)).collect::<Result<Vec<f64>>>()?;
                Some(nodes.iter().zip(&values).map(|((_, w), v)| w * v).sum())
            }
            None => None,
        };
        Ok(PipelineRun { curve: Curve { eps_axis, amplitude }, ensemble_mean })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::build_slic;
    use std::f64::consts::PI;

    fn sys() -> SpinSystem {
        build_fumarate_like(15.0, 5.8, 3.1, 0.0).unwrap()
    }

    fn slic_pair(j: f64, th: f64, tc: f64) -> (Sequence, Sequence) {
        (build_slic(j, th, 0.0, &"H".into()).unwrap(), build_slic(j, tc, 0.0, &"C".into()).unwrap())
    }

    #[test]
    fn filter_keeps_singlet_order() {
        let q = singlet_order_op((1, 2), 3).unwrap();
        let f = singlet_filter(&q, (1, 2), 3).unwrap();
        assert!(f.max_abs_diff(&q) < 1e-14);
        let qz = Operator::hermitian_part(&(q.matrix() * angular_momentum(3, 3, Axis::Z).unwrap().matrix()));
        assert!(singlet_filter(&qz, (1, 2), 3).unwrap().max_abs_diff(&qz) < 1e-14);
    }

    #[test]
    fn filter_removes_transverse_magnetization() {
        let ix = angular_momentum(3, 1, Axis::X).unwrap();
        assert!(singlet_filter(&ix, (1, 2), 3).unwrap().max_abs() < 1e-15);
        assert!(singlet_filter(&Operator::zeros(4), (1, 2), 3).is_err());
    }

    #[test]
    fn rabi_is_quarter_coupling_difference() {
        let m = pipeline_matching(&sys(), (1, 2), 3).unwrap();
        assert!((m.rabi_hz - 2.7 / 4.0).abs() < 1e-12);
        assert_eq!(m.matched_nut_hz, 15.0);
    }

    #[test]
    fn equal_couplings_transfer_nothing() {
        let s = build_fumarate_like(15.0, 4.0, 4.0, 0.0).unwrap();
        let (h, c) = slic_pair(15.0, 0.5, 0.35);
        assert!(run_pipeline(&h, &c, &s, 0.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn nominal_slic_pipeline_gives_signal() {
        let (h, c) = slic_pair(15.0, 0.524, 0.370);
        let v = run_pipeline(&h, &c, &sys(), 0.0).unwrap();
        assert!(v > 0.3, "{v}");
    }

    #[test]
    fn global_phase_invariance() {
        let (h, c) = slic_pair(15.0, 0.524, 0.370);
        let a = run_pipeline(&h, &c, &sys(), 0.05).unwrap();
        let b = run_pipeline(&h.phase_shifted(0.7), &c.phase_shifted(0.7), &sys(), 0.05).unwrap();
        assert!((a - b).abs() < 1e-12);
        let b = run_pipeline(&h.phase_shifted(PI), &c.phase_shifted(PI), &sys(), 0.05).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn stages_stay_hermitian_and_filter_shrinks_norm() {
        let (h, c) = slic_pair(15.0, 0.524, 0.370);
        let t = run_pipeline_traced(&h, &c, &sys(), 0.1, &PipelineOptions::default()).unwrap();
        for rho in [&t.excited, &t.prepared, &t.filtered, &t.converted] {
            assert!(rho.hermitian_deviation() < 1e-12);
            assert!(rho.trace().norm() < 1e-12);
        }
        let norm = |o: &Operator| o.inner(o).re.sqrt();
        assert!(norm(&t.filtered) <= norm(&t.prepared) + 1e-12);
        assert!((norm(&t.converted) - norm(&t.filtered)).abs() < 1e-10);
    }

    #[test]
    fn config_round_trip_and_run() {
        let text = r#"
            [system]
            num_spins = 3
            channels = ["H", "H", "C"]
            offsets_hz = [0.0, 0.0, 0.0]
            j_hz = [15.0, 5.8, 3.1]

            [proton]
            kind = "slic"
            duration_s = 0.524

            [carbon]
            kind = "slic"
            duration_s = 0.370

            [eps]
            start = -0.1
            stop = 0.1
            points = 3

            [ensemble]
            kind = "uniform"
            half_width = 0.05
            points = 4
        "#;
        let cfg = PipelineConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.rf_error, RfErrorScope::Carbon);
        let back = PipelineConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        assert_eq!(back, cfg);
        let run = cfg.run().unwrap();
        assert_eq!(run.curve.amplitude.len(), 3);
        let mean = run.ensemble_mean.unwrap();
        assert!(mean < run.curve.amplitude[1] && mean > 0.0);
        assert!(PipelineConfig::from_toml_str("[system]\nbogus = 1").is_err());
    }

    #[test]
    fn channel_mismatch_rejected() {
        let (h, c) = slic_pair(15.0, 0.524, 0.370);
        assert!(run_pipeline(&c, &h, &sys(), 0.0).is_err());
    }

    #[test]
    fn filtered_signal_not_larger_than_unfiltered() {
        let (h, c) = slic_pair(15.0, 0.524, 0.370);
        let mut opts = PipelineOptions::default();
        let f = run_pipeline_traced(&h, &c, &sys(), 0.0, &opts).unwrap().signal;
        opts.filter = false;
        let u = run_pipeline_traced(&h, &c, &sys(), 0.0, &opts).unwrap().signal;
        assert!(f.abs() <= u.abs() + 1e-9, "{f} {u}");
    }
}
