//! Unitary propagators for piecewise-constant Hamiltonians and first-order
//! average Hamiltonians in the interaction frame of the rf and J terms.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::FRAC_PI_2;

use nalgebra::{DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::pulse::Sequence;
use crate::spin_ops::{angular_momentum, Axis, Operator, Role};
use crate::system::{static_hamiltonian, OffsetSetting, RfTerms, SpinSystem};
use crate::{Channel, CMatrix, C64, TWO_PI};

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;
const CYCLE_TOL: f64 = 1e-6;

/// Default number of quadrature steps for the average Hamiltonian.
pub const DEFAULT_AHT_STEPS: usize = 10_000;

struct Eigen {
    values: DVector<f64>,
    vectors: CMatrix,
}

fn eigh(h: &CMatrix) -> Result<Eigen> {
    let e = SymmetricEigen::try_new(h.clone(), EIGEN_EPS, EIGEN_MAX_ITER).ok_or(Error::Eigen)?;
    Ok(Eigen { values: e.eigenvalues, vectors: e.eigenvectors })
}

/// V diag(e^{−iλt}) V†.
fn exp_from_eigen(e: &Eigen, t: f64) -> CMatrix {
    let mut scaled = e.vectors.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= C64::from_polar(1.0, -e.values[k] * t);
    }
    scaled * e.vectors.adjoint()
}

fn checked_hermitian(h: &Operator) -> Result<()> {
    let scale = h.max_abs().max(1.0);
    let dev = h.hermitian_deviation();
    if dev >= 1e-12 * scale {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// exp(−iHt) for Hermitian H (rad/s) and t in seconds.
pub fn segment_propagator(h: &Operator, duration_s: f64) -> Result<Operator> {
    checked_hermitian(h)?;
    if !duration_s.is_finite() || duration_s < 0.0 {
        return Err(crate::error::invalid(format!("duration must be finite and ≥ 0, got {duration_s}")));
    }
    if duration_s == 0.0 {
        return Ok(Operator::identity(h.dim()));
    }
    let e = eigh(h.matrix())?;
    Ok(Operator::from_parts(exp_from_eigen(&e, duration_s), Role::Unitary))
}

/// Static Hamiltonian plus cached rf operators for every channel of a
/// system, ready to evaluate many sequences at one offset setting.
pub(crate) struct Evolver {
    h0: Operator,
    rf: BTreeMap<Channel, RfTerms>,
}

impl Evolver {
    pub(crate) fn new(sys: &SpinSystem, off: &OffsetSetting) -> Result<Self> {
        let h0 = static_hamiltonian(sys, off)?;
        let mut rf = BTreeMap::new();
        for c in sys.channels() {
            if !rf.contains_key(c) {
                rf.insert(c.clone(), RfTerms::new(sys, c)?);
            }
        }
        Ok(Self { h0, rf })
    }

    pub(crate) fn dim(&self) -> usize {
        self.h0.dim()
    }

    fn hamiltonian(&self, channel: &Channel, nut_hz: f64, phase_rad: f64) -> Result<Operator> {
        let rf = self.rf.get(channel).ok_or_else(|| Error::UnknownChannel(channel.to_string()))?;
        Ok(&self.h0 + &rf.at(nut_hz, phase_rad))
    }

    /// Ordered product of step propagators; `scale` gives the (1 + ε)
    /// factor applied to each channel's amplitudes.
    pub(crate) fn propagate(&self, seq: &Sequence, scale: &dyn Fn(&Channel) -> f64) -> Result<Operator> {
        // identical steps recur (cSLIC elements, supercycles) so cache them
        let mut cache: HashMap<(&Channel, u64, u64, u64), CMatrix> = HashMap::new();
        let mut u = CMatrix::identity(self.dim(), self.dim());
        for seg in seq.segments() {
            let s = scale(&seg.channel);
            for (nut, dt) in seg.steps() {
                let key = (&seg.channel, (nut * s).to_bits(), seg.phase_rad.to_bits(), dt.to_bits());
                let step = match cache.entry(key) {
                    Entry::Occupied(e) => e.into_mut(),
                    Entry::Vacant(e) => {
                        let h = self.hamiltonian(&seg.channel, nut * s, seg.phase_rad)?;
                        e.insert(exp_from_eigen(&eigh(h.matrix())?, dt))
                    }
                };
                u = &*step * u;
            }
        }
        Ok(Operator::from_parts(u, Role::Unitary))
    }
}

/// Propagator of a whole sequence with every amplitude scaled by (1 + ε).
pub fn sequence_propagator(seq: &Sequence, sys: &SpinSystem, off: &OffsetSetting, eps_rf: f64) -> Result<Operator> {
    Evolver::new(sys, off)?.propagate(seq, &|_| 1.0 + eps_rf)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AhtOptions {
    pub offsets: Option<OffsetSetting>,
    pub eps_rf: f64,
    /// Total quadrature steps, shared between segments by duration.
    pub steps: usize,
    /// Apply the fixed (π/2) y-rotation that aligns the rf axis with z.
    pub tilted_frame: bool,
}

impl Default for AhtOptions {
    fn default() -> Self {
        Self { offsets: None, eps_rf: 0.0, steps: DEFAULT_AHT_STEPS, tilted_frame: true }
    }
}

#[derive(Debug, Clone)]
pub struct AverageHamiltonian {
    pub operator: Operator,
    /// max |U₀(T) − e^{iφ}1|: zero when the sequence is a cycle of the
    /// reference evolution.
    pub cycle_deviation: f64,
}

impl AverageHamiltonian {
    pub fn is_cyclic(&self) -> bool {
        self.cycle_deviation < CYCLE_TOL
    }
}

/// First-order average Hamiltonian with default options: on resonance,
/// ε = 0, 10⁴ steps, tilted frame.
pub fn average_hamiltonian_first_order(seq: &Sequence, sys: &SpinSystem) -> Result<AverageHamiltonian> {
    average_hamiltonian_with(seq, sys, &AhtOptions::default())
}

/// Splits the static Hamiltonian into the reference part (J couplings,
/// channel-mean offsets) and the driving part Σ 2π(ν_j − ν̄_channel) I_jz.
fn driving_term(sys: &SpinSystem) -> Result<Operator> {
    let n = sys.num_spins();
    let mut h = Operator::zeros(sys.dim());
    for k in 1..=n {
        let d = sys.offsets_hz()[k - 1] - sys.channel_center_hz(sys.channel(k))?;
        if d != 0.0 {
            h = &h + &angular_momentum(n, k, Axis::Z)?.scale(TWO_PI * d);
        }
    }
    Ok(h)
}

/// (1/T)∫ U₀†(t) H_Δ U₀(t) dt, where U₀ is generated by everything except
/// the differential offsets H_Δ. Each constant piece is integrated with a
/// composite two-point Gauss–Legendre rule in the eigenbasis of its
/// reference Hamiltonian.
pub fn average_hamiltonian_with(seq: &Sequence, sys: &SpinSystem, opts: &AhtOptions) -> Result<AverageHamiltonian> {
    if seq.is_empty() {
        return Err(crate::error::invalid("average Hamiltonian of an empty sequence"));
    }
    if opts.steps == 0 {
        return Err(crate::error::invalid("at least one integration step is required"));
    }
    let off = opts.offsets.clone().unwrap_or_else(|| OffsetSetting::on_resonance(sys));
    let h_delta = driving_term(sys)?;
    let full = Evolver::new(sys, &off)?;
    let reference = Evolver { h0: &full.h0 - &h_delta, rf: full.rf };
    let dim = reference.dim();
    let total = seq.total_duration();
    let scale = 1.0 + opts.eps_rf;

    let gl = 0.5 / 3f64.sqrt();
    let mut u0 = CMatrix::identity(dim, dim);
    let mut acc = CMatrix::zeros(dim, dim);
    for seg in seq.segments() {
        for (nut, dt) in seg.steps() {
            let h = reference.hamiltonian(&seg.channel, nut * scale, seg.phase_rad)?;
            let e = eigh(h.matrix())?;
            let m = e.vectors.adjoint() * h_delta.matrix() * &e.vectors;
            let n_steps = ((opts.steps as f64 * dt / total).round() as usize).max(1);
            let h_step = dt / n_steps as f64;
            let mut piece = CMatrix::zeros(dim, dim);
            for i in 0..n_steps {
                for node in [0.5 - gl, 0.5 + gl] {
                    let s = h_step * (i as f64 + node);
                    for a in 0..dim {
                        for b in 0..dim {
                            let w = (e.values[a] - e.values[b]) * s;
                            piece[(a, b)] += m[(a, b)] * C64::from_polar(0.5 * h_step, w);
                        }
                    }
                }
            }
            let w = u0.adjoint() * &e.vectors;
            acc += &w * piece * w.adjoint();
            u0 = exp_from_eigen(&e, dt) * u0;
        }
    }
    acc /= C64::new(total, 0.0);

    if opts.tilted_frame {
        let mut channels = seq.channels();
        channels.dedup();
        let n = sys.num_spins();
        let mut gen = Operator::zeros(dim);
        for c in &channels {
            for k in sys.spins_on(c) {
                gen = &gen + &angular_momentum(n, k, Axis::Y)?;
            }
        }
        let r = segment_propagator(&gen, FRAC_PI_2)?;
        acc = r.matrix() * acc * r.matrix().adjoint();
    }

    let cycle_deviation = phase_free_identity_deviation(&u0);
    if cycle_deviation >= CYCLE_TOL {
        log::warn!(
            "sequence '{}' is not cyclic under the reference evolution (deviation {:.3e})",
            seq.name,
            cycle_deviation
        );
    }
    Ok(AverageHamiltonian { operator: Operator::hermitian_part(&acc), cycle_deviation })
}

fn phase_free_identity_deviation(u: &CMatrix) -> f64 {
    let d = u.nrows();
    let tr = u.trace() / C64::new(d as f64, 0.0);
    let phase = if tr.norm() > 0.0 { tr / tr.norm() } else { C64::new(1.0, 0.0) };
    let target = CMatrix::identity(d, d) * phase;
    (u - target).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
