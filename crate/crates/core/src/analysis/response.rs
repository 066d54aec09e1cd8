//! Closed-form excitation efficiencies of the driven two-level transition.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// sin(x)/x with sinc(0) = 1.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponseParams {
    /// ω_μ in rad/s.
    pub rabi_rad: f64,
    /// Ω_μ in rad/s.
    pub resonance_rad: f64,
    pub eps_rf: f64,
    pub t_s: f64,
}

impl ResponseParams {
    pub fn new(rabi_rad: f64, resonance_rad: f64, eps_rf: f64, t_s: f64) -> Result<Self> {
        if !(rabi_rad > 0.0) || !rabi_rad.is_finite() {
            return Err(invalid(format!("Rabi frequency must be > 0, got {rabi_rad}")));
        }
        if !resonance_rad.is_finite() || eps_rf.is_nan() || !t_s.is_finite() {
            return Err(invalid("response parameters must be finite"));
        }
        Ok(Self { rabi_rad, resonance_rad, eps_rf, t_s })
    }

    /// The nominal duration π/ω_μ.
    pub fn nominal_time(rabi_rad: f64) -> f64 {
        PI / rabi_rad
    }

    /// θ_μ = arctan(ω_μ / (Ω_μ ε)), π/2 when the detuning vanishes.
    pub fn theta(&self) -> f64 {
        detuning_angle(self.rabi_rad, self.resonance_rad, self.eps_rf)
    }

    pub fn f_plus(&self) -> f64 {
        PI * self.eps_rf
    }

    pub fn f_minus(&self) -> f64 {
        PI * (2.0 + self.eps_rf)
    }
}

fn detuning_angle(rabi: f64, resonance: f64, eps: f64) -> f64 {
    let detuning = resonance * eps;
    if detuning == 0.0 {
        FRAC_PI_2
    } else {
        (rabi / detuning).atan()
    }
}

/// sin²θ · sin²(½ ω_μ cscθ · t).
pub fn xi_slic(p: &ResponseParams) -> f64 {
    let theta = p.theta();
    if theta == 0.0 {
        return 0.0;
    }
    let s = theta.sin();
    s * s * (0.5 * p.rabi_rad * p.t_s / s).sin().powi(2)
}

/// (π²/4) sinc²((π/2) cscθ), the response at t = π/ω_μ.
pub fn xi_slic_nominal(rabi_rad: f64, resonance_rad: f64, eps_rf: f64) -> f64 {
    let theta = detuning_angle(rabi_rad, resonance_rad, eps_rf);
    if theta == 0.0 {
        return 0.0;
    }
    PI * PI / 4.0 * sinc(FRAC_PI_2 / theta.sin()).powi(2)
}

/// [(f₋² − f₊²)/(f₋² + f₊²)] · sin²(½ ω_μ √(sinc²f₋ + sinc²f₊) · t).
pub fn xi_cslic(rabi_rad: f64, eps_rf: f64, t_s: f64) -> f64 {
    let fp = PI * eps_rf;
    let fm = PI * (2.0 + eps_rf);
    let pre = (fm * fm - fp * fp) / (fm * fm + fp * fp);
    let eff = (sinc(fm).powi(2) + sinc(fp).powi(2)).sqrt();
    pre * (0.5 * rabi_rad * eff * t_s).sin().powi(2)
}

pub fn xi_cslic_nominal(rabi_rad: f64, eps_rf: f64) -> f64 {
    xi_cslic(rabi_rad, eps_rf, PI / rabi_rad)
}
