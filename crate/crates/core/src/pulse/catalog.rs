//! Matching conditions for SLIC analogues: which rf amplitude is resonant,
//! and the Rabi frequency of the driven two-level transition.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Homonuclear AB pair, |S₀⟩ ↔ |T±⟩.
    Ab,
    /// Parahydrogen-derived I₂S system, |α S₀⟩ ↔ |β T±⟩.
    Phip,
    /// AA′XX′, |T±ᴬ T₀ˣ⟩ ↔ |S₀ᴬ S₀ˣ⟩ (in-pair coupling sum).
    AaxxSum,
    /// AA′XX′, |T±ᴬ S₀ˣ⟩ ↔ |S₀ᴬ T₀ˣ⟩ (in-pair coupling difference).
    AaxxDiff,
    /// Electron–nucleus NOVEL transfer.
    Novel,
}

/// Couplings in Hz; each variant reads only the fields it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub delta: Option<f64>,
    pub j12: Option<f64>,
    pub j_is: Option<f64>,
    pub j_i2s: Option<f64>,
    pub j_ii: Option<f64>,
    pub j_ax: Option<f64>,
    pub j_ax2: Option<f64>,
    pub j_aa: Option<f64>,
    pub j_xx2: Option<f64>,
    pub j_en: Option<f64>,
    pub larmor_n: Option<f64>,
}

/// All values in Hz (angular frequency / 2π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchingCondition {
    pub matched_nut_hz: f64,
    pub rabi_hz: f64,
    pub resonance_hz: f64,
}

fn need(v: Option<f64>, name: &'static str) -> Result<f64> {
    v.ok_or(Error::MissingCoupling(name))
}

pub fn matching_catalog(variant: Variant, c: &Couplings) -> Result<MatchingCondition> {
    // ω_μ and Ω_μ divided by 2π
    let (rabi, resonance) = match variant {
        Variant::Ab => (need(c.delta, "delta")? / SQRT_2, need(c.j12, "j12")?),
        Variant::Phip => ((need(c.j_is, "j_is")? - need(c.j_i2s, "j_i2s")?) / 4.0, need(c.j_ii, "j_ii")?),
        Variant::AaxxSum | Variant::AaxxDiff => {
            let rabi = (need(c.j_ax, "j_ax")? - need(c.j_ax2, "j_ax2")?) / (2.0 * SQRT_2);
            let (aa, xx) = (need(c.j_aa, "j_aa")?, need(c.j_xx2, "j_xx2")?);
            let res = if variant == Variant::AaxxSum { aa + xx } else { aa - xx };
            (rabi, res)
        }
        Variant::Novel => (need(c.j_en, "j_en")? / 4.0, need(c.larmor_n, "larmor_n")?),
    };
    Ok(MatchingCondition { matched_nut_hz: resonance, rabi_hz: rabi, resonance_hz: resonance })
}
