//! Spin systems and rotating-frame Hamiltonians.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spin_ops::{angular_momentum, scalar_product, Axis, Operator, MAX_SPINS};
use crate::TWO_PI;

/// RF channel label, e.g. `H` or `C`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Channel(String);

impl Channel {
    pub fn new(label: impl Into<String>) -> Self {
        Self(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Channel {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    channels: Vec<Channel>,
    offsets_hz: Vec<f64>,
    /// Full symmetric matrix, zero diagonal.
    j_hz: Vec<Vec<f64>>,
}

impl SpinSystem {
    /// `j_upper` lists couplings in upper-triangular row-major order:
    /// (1,2), (1,3), …, (1,N), (2,3), …
    pub fn new(channels: Vec<Channel>, offsets_hz: Vec<f64>, j_upper: &[f64]) -> Result<Self> {
        let n = channels.len();
        if !(2..=MAX_SPINS).contains(&n) {
            return Err(Error::InvalidSystem(format!("num_spins must be in 2..={MAX_SPINS}, got {n}")));
        }
        if offsets_hz.len() != n {
            return Err(Error::InvalidSystem(format!(
                "expected {n} offsets, got {}",
                offsets_hz.len()
            )));
        }
        let pairs = n * (n - 1) / 2;
        if j_upper.len() != pairs {
            return Err(Error::InvalidSystem(format!(
                "expected {pairs} upper-triangular couplings, got {}",
                j_upper.len()
            )));
        }
        if offsets_hz.iter().chain(j_upper).any(|x| !x.is_finite()) {
            return Err(Error::InvalidSystem("non-finite offset or coupling".into()));
        }
        let mut j_hz = vec![vec![0.0; n]; n];
        let mut it = j_upper.iter();
        for a in 0..n {
            for b in (a + 1)..n {
                let v = *it.next().expect("length checked");
                j_hz[a][b] = v;
                j_hz[b][a] = v;
            }
        }
        Ok(Self { channels, offsets_hz, j_hz })
    }

    /// Homonuclear AB pair on channel `H`: offsets ±Δ/2, coupling J.
    pub fn ab(j_hz: f64, delta_hz: f64) -> Result<Self> {
        Self::new(vec!["H".into(), "H".into()], vec![delta_hz / 2.0, -delta_hz / 2.0], &[j_hz])
    }

    pub fn num_spins(&self) -> usize {
        self.channels.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.num_spins()
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn channel(&self, spin_index: usize) -> &Channel {
        &self.channels[spin_index - 1]
    }

    pub fn offsets_hz(&self) -> &[f64] {
        &self.offsets_hz
    }

    /// Coupling between 1-based spins.
    pub fn j(&self, a: usize, b: usize) -> f64 {
        self.j_hz[a - 1][b - 1]
    }

    pub fn j_upper(&self) -> Vec<f64> {
        let n = self.num_spins();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for a in 0..n {
            for b in (a + 1)..n {
                out.push(self.j_hz[a][b]);
            }
        }
        out
    }

    /// 1-based indices of spins on `channel`.
    pub fn spins_on(&self, channel: &Channel) -> Vec<usize> {
        self.channels
            .iter()
            .enumerate()
            .filter(|(_, c)| *c == channel)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn has_channel(&self, channel: &Channel) -> bool {
        self.channels.contains(channel)
    }

    /// Mean offset of the spins on a channel (the on-resonance carrier).
    pub fn channel_center_hz(&self, channel: &Channel) -> Result<f64> {
        let spins = self.spins_on(channel);
        if spins.is_empty() {
            return Err(Error::UnknownChannel(channel.to_string()));
        }
        Ok(spins.iter().map(|&s| self.offsets_hz[s - 1]).sum::<f64>() / spins.len() as f64)
    }

    pub fn to_config(&self) -> SpinSystemConfig {
        SpinSystemConfig {
            num_spins: self.num_spins(),
            channels: self.channels.iter().map(|c| c.to_string()).collect(),
            offsets_hz: self.offsets_hz.clone(),
            j_hz: self.j_upper(),
        }
    }

    pub fn from_config(cfg: &SpinSystemConfig) -> Result<Self> {
        if cfg.channels.len() != cfg.num_spins {
            return Err(Error::InvalidSystem(format!(
                "num_spins = {} but {} channel labels given",
                cfg.num_spins,
                cfg.channels.len()
            )));
        }
        Self::new(
            cfg.channels.iter().map(|c| Channel::new(c.as_str())).collect(),
            cfg.offsets_hz.clone(),
            &cfg.j_hz,
        )
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: SpinSystemConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_config(&cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.to_config()).expect("plain struct serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_toml_string())?;
        Ok(())
    }
}

/// On-disk form of a [`SpinSystem`].
///
/// ```toml
/// num_spins = 2
/// channels = ["H", "H"]
/// offsets_hz = [0.95, -0.95]
/// j_hz = [15.0]            # (1,2), (1,3), …, (2,3), …
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinSystemConfig {
    pub num_spins: usize,
    pub channels: Vec<String>,
    pub offsets_hz: Vec<f64>,
    pub j_hz: Vec<f64>,
}

/// Carrier (rf reference) frequency per channel, in Hz on the same scale as
/// the spin offsets. Channels without an entry use a carrier of 0 Hz.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OffsetSetting {
    pub carrier_offset_hz: BTreeMap<Channel, f64>,
}

impl OffsetSetting {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every channel's carrier at the mean offset of its spins.
    pub fn on_resonance(sys: &SpinSystem) -> Self {
        let mut out = Self::new();
        for c in sys.channels() {
            let center = sys.channel_center_hz(c).expect("channel comes from the system");
            out.carrier_offset_hz.insert(c.clone(), center);
        }
        out
    }

    /// On resonance everywhere except `channel`, whose carrier sits at
    /// Ω = Ω_rf − mean(Ω⁰) = `resonance_offset_hz`.
    pub fn with_resonance_offset(sys: &SpinSystem, channel: &Channel, resonance_offset_hz: f64) -> Result<Self> {
        let center = sys.channel_center_hz(channel)?;
        let mut out = Self::on_resonance(sys);
        out.carrier_offset_hz.insert(channel.clone(), center + resonance_offset_hz);
        Ok(out)
    }

    pub fn set(mut self, channel: impl Into<Channel>, hz: f64) -> Self {
        self.carrier_offset_hz.insert(channel.into(), hz);
        self
    }

    pub fn carrier(&self, channel: &Channel) -> f64 {
        self.carrier_offset_hz.get(channel).copied().unwrap_or(0.0)
    }

    fn validate(&self, sys: &SpinSystem) -> Result<()> {
        for (c, v) in &self.carrier_offset_hz {
            if !sys.has_channel(c) {
                return Err(Error::UnknownChannel(c.to_string()));
            }
            if !v.is_finite() {
                return Err(invalid(format!("carrier for channel {c} is not finite")));
            }
        }
        Ok(())
    }
}

/// Σ_j 2π(ν_j − ν_carrier) I_jz + Σ_{j<k} 2πJ_jk I_j·I_k in rad/s.
///
/// Couplings between spins on different channels are truncated to the
/// secular J I_jz I_kz form (the two rotating frames differ by a Larmor
/// frequency difference far larger than J).
pub fn static_hamiltonian(sys: &SpinSystem, off: &OffsetSetting) -> Result<Operator> {
    off.validate(sys)?;
    let n = sys.num_spins();
    let mut h = Operator::zeros(sys.dim());
    for k in 1..=n {
        let nu = sys.offsets_hz[k - 1] - off.carrier(sys.channel(k));
        if nu != 0.0 {
            h = &h + &angular_momentum(n, k, Axis::Z)?.scale(TWO_PI * nu);
        }
    }
    for a in 1..=n {
        for b in (a + 1)..=n {
            let j = sys.j(a, b);
            if j == 0.0 {
                continue;
            }
            let coupling = if sys.channel(a) == sys.channel(b) {
                scalar_product(n, a, b)?
            } else {
                let za = angular_momentum(n, a, Axis::Z)?;
                let zb = angular_momentum(n, b, Axis::Z)?;
                Operator::hermitian(za.matrix() * zb.matrix())?
            };
            h = &h + &coupling.scale(TWO_PI * j);
        }
    }
    Ok(h)
}

/// 2π·ν_nut · Σ_{j ∈ channel} (cos φ I_jx + sin φ I_jy).
pub fn rf_hamiltonian(sys: &SpinSystem, channel: &Channel, nut_hz: f64, phase_rad: f64) -> Result<Operator> {
    if !sys.has_channel(channel) {
        return Err(Error::UnknownChannel(channel.to_string()));
    }
    if !(nut_hz >= 0.0) || !nut_hz.is_finite() {
        return Err(invalid(format!("nutation frequency must be finite and ≥ 0, got {nut_hz}")));
    }
    let terms = RfTerms::new(sys, channel)?;
    Ok(terms.at(nut_hz, phase_rad))
}

/// Cached Σ I_x and Σ I_y for the spins of one channel.
#[derive(Debug, Clone)]
pub(crate) struct RfTerms {
    x: Operator,
    y: Operator,
}

impl RfTerms {
    pub(crate) fn new(sys: &SpinSystem, channel: &Channel) -> Result<Self> {
        let spins = sys.spins_on(channel);
        if spins.is_empty() {
            return Err(Error::UnknownChannel(channel.to_string()));
        }
        let n = sys.num_spins();
        let mut x = Operator::zeros(sys.dim());
        let mut y = Operator::zeros(sys.dim());
        for s in spins {
            x = &x + &angular_momentum(n, s, Axis::X)?;
            y = &y + &angular_momentum(n, s, Axis::Y)?;
        }
        Ok(Self { x, y })
    }

    pub(crate) fn at(&self, nut_hz: f64, phase_rad: f64) -> Operator {
        let w = TWO_PI * nut_hz;
        &self.x.scale(w * phase_rad.cos()) + &self.y.scale(w * phase_rad.sin())
    }
}

/// ε_rf = (ν − ν⁰)/ν⁰.
pub fn fractional_rf_error(nut_hz: f64, nominal_hz: f64) -> Result<f64> {
    if !(nominal_hz > 0.0) {
        return Err(invalid(format!("nominal nutation frequency must be > 0, got {nominal_hz}")));
    }
    Ok((nut_hz - nominal_hz) / nominal_hz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_ops::{single_transition_op, singlet_triplet_basis, total_angular_momentum, Component};
    use crate::C64;
    use std::f64::consts::PI;

    #[test]
    fn ab_matrix_element_is_half_delta() {
        let (j, d) = (15.0, 1.9);
        let sys = SpinSystem::ab(j, d).unwrap();
        let h = static_hamiltonian(&sys, &OffsetSetting::on_resonance(&sys)).unwrap();
        let b = singlet_triplet_basis((1, 2), 2).unwrap();
        let el = h.element(&b[2], &b[0]);
        assert!((el - C64::new(PI * d, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_system_gives_zero_operator() {
        let sys = SpinSystem::ab(0.0, 0.0).unwrap();
        let h = static_hamiltonian(&sys, &OffsetSetting::new()).unwrap();
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn ab_decomposition_matches_single_transition_form() {
        let (j, d) = (15.0, 1.9);
        let sys = SpinSystem::ab(j, d).unwrap();
        let h = static_hamiltonian(&sys, &OffsetSetting::on_resonance(&sys)).unwrap();
        let b = singlet_triplet_basis((1, 2), 2).unwrap();
        let ix = single_transition_op(&b[2], &b[0], Component::X).unwrap();
        let iz = single_transition_op(&b[2], &b[0], Component::Z).unwrap();
        let z1 = angular_momentum(2, 1, Axis::Z).unwrap();
        let z2 = angular_momentum(2, 2, Axis::Z).unwrap();
        let zz = Operator::hermitian(z1.matrix() * z2.matrix()).unwrap();
        let want = &ix.scale(TWO_PI * d) + &(&iz + &zz).scale(TWO_PI * j);
        assert!(h.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn commutes_with_total_z_when_on_carrier() {
        let sys = SpinSystem::new(vec!["H".into(); 3], vec![5.0; 3], &[15.0, 3.0, -7.0]).unwrap();
        let off = OffsetSetting::new().set("H", 5.0);
        let h = static_hamiltonian(&sys, &off).unwrap();
        let fz = total_angular_momentum(3, &[1, 2, 3], Axis::Z).unwrap();
        assert!(h.commutator(&fz).max_abs() < 1e-12);
    }

    #[test]
    fn unknown_carrier_channel_rejected() {
        let sys = SpinSystem::ab(15.0, 1.9).unwrap();
        let off = OffsetSetting::new().set("C", 1.0);
        assert!(matches!(static_hamiltonian(&sys, &off), Err(Error::UnknownChannel(_))));
    }

    #[test]
    fn rf_hamiltonian_phases() {
        let sys = SpinSystem::ab(15.0, 1.9).unwrap();
        let h = Channel::from("H");
        let h0 = rf_hamiltonian(&sys, &h, 15.0, 0.0).unwrap();
        let fx = total_angular_momentum(2, &[1, 2], Axis::X).unwrap();
        assert!(h0.max_abs_diff(&fx.scale(TWO_PI * 15.0)) < 1e-12);
        let hpi = rf_hamiltonian(&sys, &h, 15.0, PI).unwrap();
        assert!(hpi.max_abs_diff(&h0.scale(-1.0)) < 1e-12);
        assert_eq!(rf_hamiltonian(&sys, &h, 0.0, 0.3).unwrap().max_abs(), 0.0);
        assert!(matches!(rf_hamiltonian(&sys, &"C".into(), 1.0, 0.0), Err(Error::UnknownChannel(_))));
    }

    #[test]
    fn rf_only_acts_on_matching_channel() {
        let sys = SpinSystem::new(vec!["H".into(), "H".into(), "C".into()], vec![0.0; 3], &[15.0, 5.0, 3.0]).unwrap();
        let hc = rf_hamiltonian(&sys, &"C".into(), 10.0, 0.0).unwrap();
        let cx = angular_momentum(3, 3, Axis::X).unwrap();
        assert!(hc.max_abs_diff(&cx.scale(TWO_PI * 10.0)) < 1e-12);
    }

    #[test]
    fn heteronuclear_coupling_is_secular() {
        let sys = SpinSystem::new(vec!["H".into(), "C".into()], vec![0.0, 0.0], &[10.0]).unwrap();
        let h = static_hamiltonian(&sys, &OffsetSetting::new()).unwrap();
        let z1 = angular_momentum(2, 1, Axis::Z).unwrap();
        let z2 = angular_momentum(2, 2, Axis::Z).unwrap();
        let want = Operator::hermitian(z1.matrix() * z2.matrix()).unwrap().scale(TWO_PI * 10.0);
        assert!(h.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn fractional_error_examples() {
        assert_eq!(fractional_rf_error(15.0, 15.0).unwrap(), 0.0);
        assert!((fractional_rf_error(16.5, 15.0).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(fractional_rf_error(-15.0, 15.0).unwrap(), -2.0);
        assert!(fractional_rf_error(1.0, 0.0).is_err());
        assert!(fractional_rf_error(1.0, -3.0).is_err());
    }

    #[test]
    fn invalid_systems_rejected() {
        assert!(SpinSystem::new(vec!["H".into()], vec![0.0], &[]).is_err());
        assert!(SpinSystem::new(vec!["H".into(); 2], vec![0.0], &[1.0]).is_err());
        assert!(SpinSystem::new(vec!["H".into(); 3], vec![0.0; 3], &[1.0]).is_err());
        assert!(SpinSystem::new(vec!["H".into(); 2], vec![0.0, f64::NAN], &[1.0]).is_err());
    }

    #[test]
    fn toml_round_trip() {
        let sys = SpinSystem::new(
            vec!["H".into(), "H".into(), "C".into()],
            vec![0.1, -0.1, 0.0],
            &[15.7, 5.8, 3.1],
        )
        .unwrap();
        let s = sys.to_toml_string();
        assert_eq!(SpinSystem::from_toml_str(&s).unwrap(), sys);
        assert_eq!(sys.j(3, 1), 5.8);
    }

    #[test]
    fn toml_schema_mismatch_reported() {
        let bad = "num_spins = 3\nchannels = [\"H\", \"H\"]\noffsets_hz = [0.0, 0.0]\nj_hz = [1.0]\n";
        assert!(SpinSystem::from_toml_str(bad).is_err());
        assert!(matches!(SpinSystem::from_toml_str("num_spins = "), Err(Error::Config(_))));
    }
}
