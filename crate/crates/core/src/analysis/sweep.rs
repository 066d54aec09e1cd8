//! Transfer amplitudes and deterministic parallel parameter sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::propagator::Evolver;
use crate::pulse::{Nominal, Sequence};
use crate::spin_ops::{angular_momentum, singlet_order_op, Axis, Operator};
use crate::system::{OffsetSetting, SpinSystemConfig};
use crate::{Channel, SpinSystem};

const IMAG_TOL: f64 = 1e-10;

/// Tr{target · U source U†} / Tr{target · target}.
pub fn transfer_amplitude(u: &Operator, source: &Operator, target: &Operator) -> Result<f64> {
    for op in [source, target] {
        if op.dim() != u.dim() {
            return Err(Error::Dimension { expected: u.dim(), found: op.dim() });
        }
    }
    let norm = target.inner(target).re;
    if norm == 0.0 {
        return Err(invalid("target operator is zero"));
    }
    let evolved = u.conjugate(source);
    let v = target.inner(&evolved) / norm;
    if v.im.abs() > IMAG_TOL {
        return Err(Error::NonReal(v.im));
    }
    Ok(v.re)
}

/// Transverse magnetization left by an ideal (π/2)_{−y} pulse on the
/// Zeeman order of `channel`: −Σ I_jx.
pub fn excited_magnetization(sys: &SpinSystem, channel: &Channel) -> Result<Operator> {
    let spins = sys.spins_on(channel);
    if spins.is_empty() {
        return Err(Error::UnknownChannel(channel.to_string()));
    }
    let n = sys.num_spins();
    let mut out = Operator::zeros(sys.dim());
    for k in spins {
        out = &out - &angular_momentum(n, k, Axis::X)?;
    }
    Ok(out)
}

/// Source and target observables of a sweep.
#[derive(Debug, Clone)]
pub struct Probe {
    pub source: Operator,
    pub target: Operator,
    pub source_label: String,
    pub target_label: String,
}

impl Probe {
    /// Excited magnetization on `channel` to singlet order of `pair`.
    pub fn singlet_order(sys: &SpinSystem, channel: &Channel, pair: (usize, usize)) -> Result<Self> {
        Ok(Self {
            source: excited_magnetization(sys, channel)?,
            target: singlet_order_op(pair, sys.num_spins())?,
            source_label: format!("-I_x({channel})"),
            target_label: format!("Q_SO{pair:?}"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapMetadata {
    pub sequence: String,
    pub nominal: Nominal,
    pub channel: Channel,
    pub total_duration_s: f64,
    pub system: SpinSystemConfig,
    pub source: String,
    pub target: String,
}

/// Amplitudes over (ε, Ω), stored row-major with the offset index fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferMap {
    pub offset_axis_hz: Vec<f64>,
    pub eps_axis: Vec<f64>,
    amplitude: Vec<f64>,
    pub metadata: Option<MapMetadata>,
}

impl TransferMap {
    pub fn new(offset_axis_hz: Vec<f64>, eps_axis: Vec<f64>, amplitude: Vec<f64>) -> Result<Self> {
        let expected = offset_axis_hz.len() * eps_axis.len();
        if amplitude.len() != expected {
            return Err(Error::Dimension { expected, found: amplitude.len() });
        }
        Ok(Self { offset_axis_hz, eps_axis, amplitude, metadata: None })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitude
    }

    pub fn get(&self, i_eps: usize, i_offset: usize) -> f64 {
        self.amplitude[i_eps * self.offset_axis_hz.len() + i_offset]
    }

    /// Amplitude against ε at a fixed offset index.
    pub fn eps_line(&self, i_offset: usize) -> Vec<f64> {
        (0..self.eps_axis.len()).map(|e| self.get(e, i_offset)).collect()
    }

    /// Amplitude against offset at a fixed ε index.
    pub fn offset_line(&self, i_eps: usize) -> Vec<f64> {
        let n = self.offset_axis_hz.len();
        self.amplitude[i_eps * n..(i_eps + 1) * n].to_vec()
    }

    pub fn min(&self) -> f64 {
        self.amplitude.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.amplitude.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// (ε index, offset index) of the largest amplitude.
    pub fn argmax(&self) -> Option<(usize, usize)> {
        let n = self.offset_axis_hz.len();
        let (k, _) = self
            .amplitude
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (k, &v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((k, v)),
            })?;
        Some((k / n, k % n))
    }
}

/// `points` evenly spaced values from `start` to `stop` inclusive; a single
/// point is `start`.
pub fn linspace(start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(invalid("an axis needs at least one point"));
    }
    if !start.is_finite() || !stop.is_finite() {
        return Err(invalid("axis limits must be finite"));
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (points - 1) as f64;
    let mut v: Vec<f64> = (0..points).map(|i| start + step * i as f64).collect();
    v[points - 1] = stop;
    Ok(v)
}

/// Transfer amplitude of `seq` at every (ε, Ω) grid point, where Ω is the
/// carrier offset of the sequence's channel from the mean shift of its
/// spins. Points run in parallel on the current rayon pool; each value
/// depends only on its own grid point, so output is identical for any
/// worker count.
pub fn sweep_map(
    seq: &Sequence,
    sys: &SpinSystem,
    offsets_hz: &[f64],
    eps_axis: &[f64],
    probe: &Probe,
) -> Result<TransferMap> {
    let channel = seq
        .channels()
        .into_iter()
        .next()
        .ok_or_else(|| invalid("cannot sweep an empty sequence"))?;
    if offsets_hz.iter().chain(eps_axis).any(|x| !x.is_finite()) {
        return Err(invalid("sweep axes must be finite"));
    }
    let n_off = offsets_hz.len();
    let amplitude = (0..n_off * eps_axis.len())
        .into_par_iter()
        .map(|k| {
            let off = OffsetSetting::with_resonance_offset(sys, &channel, offsets_hz[k % n_off])?;
            let eps = eps_axis[k / n_off.max(1)];
            let u = Evolver::new(sys, &off)?.propagate(seq, &|_| 1.0 + eps)?;
            transfer_amplitude(&u, &probe.source, &probe.target)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut map = TransferMap::new(offsets_hz.to_vec(), eps_axis.to_vec(), amplitude)?;
    map.metadata = Some(MapMetadata {
        sequence: seq.name.clone(),
        nominal: seq.nominal.clone(),
        channel,
        total_duration_s: seq.total_duration(),
        system: sys.to_config(),
        source: probe.source_label.clone(),
        target: probe.target_label.clone(),
    });
    Ok(map)
}

/// On-resonance amplitude against ε.
pub fn sweep_curve(seq: &Sequence, sys: &SpinSystem, eps_axis: &[f64], probe: &Probe) -> Result<Vec<f64>> {
    Ok(sweep_map(seq, sys, &[0.0], eps_axis, probe)?.eps_line(0))
}

/// Full width at half maximum of the peak in `values`, linearly
/// interpolated between samples. A side that never drops below half stops
/// at the end of the axis. `None` when the peak is not positive.
pub fn half_max_width(axis: &[f64], values: &[f64]) -> Option<f64> {
    if axis.len() != values.len() || axis.is_empty() {
        return None;
    }
    let (ipk, &peak) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    if !(peak > 0.0) {
        return None;
    }
    let half = peak / 2.0;
    let crossing = |i: usize, j: usize| {
        // values[i] ≥ half > values[j]
        let f = (values[i] - half) / (values[i] - values[j]);
        axis[i] + f * (axis[j] - axis[i])
    };
    let mut left = axis[0];
    for i in (0..ipk).rev() {
        if values[i] < half {
            left = crossing(i + 1, i);
            break;
        }
    }
    let mut right = axis[axis.len() - 1];
    for i in (ipk + 1)..values.len() {
        if values[i] < half {
            right = crossing(i - 1, i);
            break;
        }
    }
    Some((right - left).abs())
}
