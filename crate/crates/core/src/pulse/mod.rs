//! Pulse sequences: segments, builders and the cycle-string language.

mod builders;
mod catalog;
mod cycle;

pub use builders::{
    adslic_amplitude, build_adslic, build_cslic, build_slic, optimal_repetitions, AdiabaticShape, CslicParams,
    DEFAULT_ADSLIC_SAMPLES,
};
pub use catalog::{matching_catalog, Couplings, MatchingCondition, Variant};
pub use cycle::{expand_cycle, parse_cycle, serialize_sequence, CycleToken};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::system::Channel;

/// One piece of constant-phase RF irradiation.
///
/// With an `envelope`, the segment is split into `envelope.len()` equal
/// sub-steps of amplitude `nut_hz * envelope[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSegment {
    pub channel: Channel,
    pub nut_hz: f64,
    pub phase_rad: f64,
    pub duration_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<Vec<f64>>,
}

impl PulseSegment {
    pub fn new(channel: Channel, nut_hz: f64, phase_rad: f64, duration_s: f64) -> Result<Self> {
        let seg = Self { channel, nut_hz, phase_rad, duration_s, envelope: None };
        seg.validate()?;
        Ok(seg)
    }

    pub fn shaped(channel: Channel, nut_hz: f64, phase_rad: f64, duration_s: f64, envelope: Vec<f64>) -> Result<Self> {
        let seg = Self { channel, nut_hz, phase_rad, duration_s, envelope: Some(envelope) };
        seg.validate()?;
        Ok(seg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration_s > 0.0) || !self.duration_s.is_finite() {
            return Err(invalid(format!("segment duration must be > 0, got {}", self.duration_s)));
        }
        if !(self.nut_hz >= 0.0) || !self.nut_hz.is_finite() {
            return Err(invalid(format!("segment amplitude must be ≥ 0, got {}", self.nut_hz)));
        }
        if !self.phase_rad.is_finite() {
            return Err(invalid("segment phase is not finite"));
        }
        if let Some(env) = &self.envelope {
            if env.is_empty() || env.iter().any(|&a| !(a >= 0.0) || !a.is_finite()) {
                return Err(invalid("envelope samples must be finite and ≥ 0"));
            }
        }
        Ok(())
    }

    /// Constant-amplitude pieces (nut_hz, duration_s) making up the segment.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        match &self.envelope {
            None => vec![(self.nut_hz, self.duration_s)],
            Some(env) => {
                let dt = self.duration_s / env.len() as f64;
                env.iter().map(|&a| (self.nut_hz * a, dt)).collect()
            }
        }
    }

    /// Same amplitude, phase, channel and envelope.
    fn mergeable(&self, other: &PulseSegment) -> bool {
        self.envelope.is_none()
            && other.envelope.is_none()
            && self.channel == other.channel
            && self.nut_hz == other.nut_hz
            && self.phase_rad == other.phase_rad
    }
}

/// Nominal parameters a sequence was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Nominal {
    Slic { j_hz: f64 },
    Adslic { j_hz: f64, shape: AdiabaticShape },
    Cslic { params: CslicParams },
    Cycle { weak_nut_hz: f64, strong_nut_hz: f64, alpha: f64, expansion: String, repeats: u32 },
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sequence {
    pub name: String,
    pub nominal: Nominal,
    segments: Vec<PulseSegment>,
}

impl Sequence {
    pub fn new(name: impl Into<String>, nominal: Nominal, segments: Vec<PulseSegment>) -> Result<Self> {
        for s in &segments {
            s.validate()?;
        }
        Ok(Self { name: name.into(), nominal, segments })
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Self { name: name.into(), nominal: Nominal::Custom, segments: Vec::new() }
    }

    pub fn segments(&self) -> &[PulseSegment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration_s).sum()
    }

    /// The sequence played `times` times back to back.
    pub fn repeated(&self, times: u32) -> Self {
        let mut segments = Vec::with_capacity(self.segments.len() * times as usize);
        for _ in 0..times {
            segments.extend(self.segments.iter().cloned());
        }
        let nominal = match &self.nominal {
            Nominal::Cycle { weak_nut_hz, strong_nut_hz, alpha, expansion, repeats } => Nominal::Cycle {
                weak_nut_hz: *weak_nut_hz,
                strong_nut_hz: *strong_nut_hz,
                alpha: *alpha,
                expansion: expansion.clone(),
                repeats: repeats * times,
            },
            Nominal::Cslic { params } => {
                let mut p = params.clone();
                p.n_reps *= times;
                Nominal::Cslic { params: p }
            }
            other => other.clone(),
        };
        Self { name: self.name.clone(), nominal, segments }
    }

    /// Every segment's phase advanced by `delta_rad`.
    pub fn phase_shifted(&self, delta_rad: f64) -> Self {
        let mut out = self.clone();
        for s in &mut out.segments {
            s.phase_rad += delta_rad;
        }
        out
    }

    /// Adjacent segments with identical amplitude, phase and channel merged
    /// into one.
    pub fn coalesced(&self) -> Self {
        let mut segments: Vec<PulseSegment> = Vec::with_capacity(self.segments.len());
        for s in &self.segments {
            match segments.last_mut() {
                Some(last) if last.mergeable(s) => last.duration_s += s.duration_s,
                _ => segments.push(s.clone()),
            }
        }
        Self { name: self.name.clone(), nominal: self.nominal.clone(), segments }
    }

    /// All channels the sequence irradiates, in order of first use.
    pub fn channels(&self) -> Vec<Channel> {
        let mut out: Vec<Channel> = Vec::new();
        for s in &self.segments {
            if !out.contains(&s.channel) {
                out.push(s.channel.clone());
            }
        }
        out
    }

    /// JSON array of `{channel, nut_hz, phase_rad, duration_s}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.segments).expect("segments serialize")
    }

    pub fn from_json(name: impl Into<String>, json: &str) -> Result<Self> {
        let segments: Vec<PulseSegment> = serde_json::from_str(json)?;
        Self::new(name, Nominal::Custom, segments)
    }
}

/// Declarative description of a sequence, used by config files and the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceSpec {
    Slic {
        duration_s: f64,
        #[serde(default)]
        phase_rad: f64,
    },
    Adslic {
        duration_s: f64,
        delta_max: f64,
        xi: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Cslic {
        n: u32,
        alpha: f64,
        #[serde(default)]
        strong_nut_hz: Option<f64>,
    },
    Cycle {
        text: String,
        #[serde(default = "default_repeats")]
        n: u32,
        alpha: f64,
    },
}

fn default_samples() -> usize {
    DEFAULT_ADSLIC_SAMPLES
}

fn default_repeats() -> u32 {
    1
}

impl SequenceSpec {
    /// Builds the sequence with matching amplitude `j_hz` on `channel`.
    pub fn build(&self, j_hz: f64, channel: &Channel) -> Result<Sequence> {
        match self {
            SequenceSpec::Slic { duration_s, phase_rad } => build_slic(j_hz, *duration_s, *phase_rad, channel),
            SequenceSpec::Adslic { duration_s, delta_max, xi, samples } => {
                let shape = AdiabaticShape::new(*delta_max, *xi, *duration_s, *samples)?;
                build_adslic(&shape, j_hz, channel)
            }
            SequenceSpec::Cslic { n, alpha, strong_nut_hz } => {
                let p = match strong_nut_hz {
                    Some(s) => CslicParams::with_strong(j_hz, *alpha, *n, *s)?,
                    None => CslicParams::new(j_hz, *alpha, *n)?,
                };
                build_cslic(&p, channel)
            }
            SequenceSpec::Cycle { text, n, alpha } => {
                if *n == 0 {
                    return Err(invalid("cycle repetition count must be ≥ 1"));
                }
                let strong = CslicParams::new(j_hz, *alpha, 1)?.strong_nut_hz;
                Ok(parse_cycle(text, j_hz, strong, *alpha, channel)?.repeated(*n))
            }
        }
    }
}

pub(crate) fn require_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
    }
    Ok(())
}
