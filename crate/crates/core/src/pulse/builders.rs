use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::{require_positive, Nominal, PulseSegment, Sequence};
use crate::error::{invalid, Error, Result};
use crate::system::Channel;

pub const DEFAULT_ADSLIC_SAMPLES: usize = 2048;

/// Single constant spin-lock at the matching amplitude ν_nut = J.
pub fn build_slic(j_hz: f64, total_s: f64, phase_rad: f64, channel: &Channel) -> Result<Sequence> {
    require_positive("J", j_hz)?;
    require_positive("SLIC duration", total_s)?;
    let seg = PulseSegment::new(channel.clone(), j_hz, phase_rad, total_s)?;
    Sequence::new("slic", Nominal::Slic { j_hz }, vec![seg])
}

/// Amplitude sweep ν(t) = J [1 − Δ_max tan(x ξ π/2) / tan(ξ π/2)], x = 2t/T − 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticShape {
    pub delta_max: f64,
    pub shape_xi: f64,
    pub total_s: f64,
    pub n_samples: usize,
}

impl AdiabaticShape {
    pub fn new(delta_max: f64, shape_xi: f64, total_s: f64, n_samples: usize) -> Result<Self> {
        let s = Self { delta_max, shape_xi, total_s, n_samples };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta_max > -1.0 && self.delta_max < 1.0) {
            return Err(invalid(format!("delta_max must lie in (-1, 1), got {}", self.delta_max)));
        }
        if !(self.shape_xi > 0.0 && self.shape_xi < 1.0) {
            return Err(invalid(format!("shape parameter xi must lie in (0, 1), got {}", self.shape_xi)));
        }
        require_positive("adSLIC duration", self.total_s)?;
        if self.n_samples < 2 {
            return Err(invalid(format!("adSLIC needs at least 2 samples, got {}", self.n_samples)));
        }
        Ok(())
    }
}

/// ν_nut(t) in Hz for 0 ≤ t ≤ T.
pub fn adslic_amplitude(shape: &AdiabaticShape, j_hz: f64, t: f64) -> Result<f64> {
    shape.validate()?;
    if !(0.0..=shape.total_s).contains(&t) {
        return Err(invalid(format!("t = {t} outside [0, {}]", shape.total_s)));
    }
    let x = 2.0 * t / shape.total_s - 1.0;
    let half = shape.shape_xi * FRAC_PI_2;
    Ok(j_hz * (1.0 - shape.delta_max * (x * half).tan() / half.tan()))
}

/// Piecewise-constant adSLIC: `n_samples` equal segments sampled at their
/// midpoints.
pub fn build_adslic(shape: &AdiabaticShape, j_hz: f64, channel: &Channel) -> Result<Sequence> {
    shape.validate()?;
    require_positive("J", j_hz)?;
    let dt = shape.total_s / shape.n_samples as f64;
    let segments = (0..shape.n_samples)
        .map(|k| {
            let t = (k as f64 + 0.5) * dt;
            PulseSegment::new(channel.clone(), adslic_amplitude(shape, j_hz, t)?, 0.0, dt)
        })
        .collect::<Result<Vec<_>>>()?;
    Sequence::new("adslic", Nominal::Adslic { j_hz, shape: shape.clone() }, segments)
}

/// Parameters of the compensated element (απ)_x − (α2π)_{−x} − (απ)_x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CslicParams {
    pub j_hz: f64,
    pub alpha: f64,
    pub n_reps: u32,
    pub strong_nut_hz: f64,
}

impl CslicParams {
    /// Strong amplitude from α = ν_s / (ν_s + J).
    pub fn new(j_hz: f64, alpha: f64, n_reps: u32) -> Result<Self> {
        require_positive("J", j_hz)?;
        check_alpha(alpha)?;
        let strong = alpha * j_hz / (1.0 - alpha);
        let p = Self { j_hz, alpha, n_reps, strong_nut_hz: strong };
        p.validate()?;
        Ok(p)
    }

    /// α and the strong amplitude both given; they must agree.
    pub fn with_strong(j_hz: f64, alpha: f64, n_reps: u32, strong_nut_hz: f64) -> Result<Self> {
        require_positive("J", j_hz)?;
        require_positive("strong amplitude", strong_nut_hz)?;
        let p = Self { j_hz, alpha, n_reps, strong_nut_hz };
        p.validate()?;
        Ok(p)
    }

    /// α from the two amplitudes.
    pub fn from_amplitudes(j_hz: f64, strong_nut_hz: f64, n_reps: u32) -> Result<Self> {
        require_positive("J", j_hz)?;
        require_positive("strong amplitude", strong_nut_hz)?;
        let alpha = strong_nut_hz / (strong_nut_hz + j_hz);
        Self::with_strong(j_hz, alpha, n_reps, strong_nut_hz)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.n_reps == 0 {
            return Err(invalid("cSLIC needs at least one repetition"));
        }
        let implied = self.strong_nut_hz / (self.strong_nut_hz + self.j_hz);
        if (implied - self.alpha).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "alpha {} inconsistent with strong amplitude {} Hz (implies {implied})",
                self.alpha, self.strong_nut_hz
            )));
        }
        Ok(())
    }

    /// Duration of each weak pulse, α/(2J).
    pub fn weak_duration(&self) -> f64 {
        self.alpha / (2.0 * self.j_hz)
    }

    /// Duration of the central strong pulse, α/ν_s.
    pub fn strong_duration(&self) -> f64 {
        self.alpha / self.strong_nut_hz
    }

    pub fn element_duration(&self) -> f64 {
        2.0 * self.weak_duration() + self.strong_duration()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (1/2, 1), got {alpha}")));
    }
    Ok(())
}

pub fn build_cslic(p: &CslicParams, channel: &Channel) -> Result<Sequence> {
    p.validate()?;
    let weak = PulseSegment::new(channel.clone(), p.j_hz, 0.0, p.weak_duration())?;
    let strong = PulseSegment::new(channel.clone(), p.strong_nut_hz, PI, p.strong_duration())?;
    let mut segments = Vec::with_capacity(3 * p.n_reps as usize);
    for _ in 0..p.n_reps {
        segments.push(weak.clone());
        segments.push(strong.clone());
        segments.push(weak.clone());
    }
    Sequence::new("cslic", Nominal::Cslic { params: p.clone() }, segments)
}

/// n = ⌊J / (√2 Δ)⌉, at least 1.
pub fn optimal_repetitions(j_hz: f64, delta_hz: f64) -> Result<u32> {
    if delta_hz == 0.0 || !delta_hz.is_finite() {
        return Err(invalid("chemical shift difference must be nonzero; the level crossing never completes"));
    }
    if !j_hz.is_finite() || j_hz == 0.0 {
        return Err(invalid(format!("J must be finite and nonzero, got {j_hz}")));
    }
    let n = (j_hz.abs() / (SQRT_2 * delta_hz.abs())).round();
    Ok((n as u32).max(1))
}
