//! Operator algebra for small spin-1/2 systems.
//!
//! Basis convention: tensor-product Zeeman basis, spin 1 is the slowest
//! index and |α⟩ precedes |β⟩. For two spins the basis is
//! (|αα⟩, |αβ⟩, |βα⟩, |ββ⟩).

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, C64};

pub const MAX_SPINS: usize = 6;

const HERMITIAN_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Hermitian,
    Unitary,
    Generic,
}

/// Dense complex square matrix with a role tag.
///
/// The Hermitian tolerance is relative to the largest element magnitude
/// (floored at 1) so that Hamiltonians in rad/s are judged on the same
/// footing as dimensionless spin operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: CMatrix,
    role: Role,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Operator {
    pub fn hermitian(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let dev = hermitian_deviation(&matrix);
        if dev >= HERMITIAN_TOL * max_abs(&matrix).max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { matrix, role: Role::Hermitian })
    }

    pub fn unitary(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let dev = unitary_deviation(&matrix);
        if dev >= UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { matrix, role: Role::Unitary })
    }

    pub fn generic(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        Ok(Self { matrix, role: Role::Generic })
    }

    /// Hermitian part ½(M + M†); always succeeds.
    pub fn hermitian_part(matrix: &CMatrix) -> Self {
        let m = (matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        Self { matrix: m, role: Role::Hermitian }
    }

    pub(crate) fn from_parts(matrix: CMatrix, role: Role) -> Self {
        Self { matrix, role }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: CMatrix::zeros(dim, dim), role: Role::Hermitian }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim), role: Role::Unitary }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint(), role: self.role }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Tr{A† B}, the Hilbert–Schmidt inner product.
    pub fn inner(&self, other: &Operator) -> C64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        let role = match self.role {
            Role::Hermitian => Role::Hermitian,
            _ => Role::Generic,
        };
        Self { matrix: &self.matrix * C64::new(factor, 0.0), role }
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        Self { matrix: &self.matrix * factor, role: Role::Generic }
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        let m = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        Self { matrix: m, role: Role::Generic }
    }

    /// U A U† for this operator as U.
    pub fn conjugate(&self, a: &Operator) -> Operator {
        let m = &self.matrix * &a.matrix * self.matrix.adjoint();
        let role = if a.role == Role::Hermitian { Role::Hermitian } else { Role::Generic };
        Operator { matrix: m, role }
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.matrix)
    }

    pub fn unitary_deviation(&self) -> f64 {
        unitary_deviation(&self.matrix)
    }

    /// ⟨a|M|b⟩.
    pub fn element(&self, a: &StateVector, b: &StateVector) -> C64 {
        (a.amplitudes.adjoint() * &self.matrix * &b.amplitudes)[(0, 0)]
    }

    pub fn apply(&self, state: &StateVector) -> CVector {
        &self.matrix * &state.amplitudes
    }
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension { expected: m.nrows(), found: m.ncols() });
    }
    Ok(())
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn unitary_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let p = m.adjoint() * m;
    max_abs(&(p - CMatrix::identity(n, n)))
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        let role = if self.role == Role::Hermitian && rhs.role == Role::Hermitian {
            Role::Hermitian
        } else {
            Role::Generic
        };
        Operator { matrix: &self.matrix + &rhs.matrix, role }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        let role = if self.role == Role::Hermitian && rhs.role == Role::Hermitian {
            Role::Hermitian
        } else {
            Role::Generic
        };
        Operator { matrix: &self.matrix - &rhs.matrix, role }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        let role = if self.role == Role::Unitary && rhs.role == Role::Unitary {
            Role::Unitary
        } else {
            Role::Generic
        };
        Operator { matrix: &self.matrix * &rhs.matrix, role }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(-1.0)
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes the input; fails only for the zero vector.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes: amplitudes / C64::new(norm, 0.0) })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// |self⟩⟨other|.
    pub fn outer(&self, other: &StateVector) -> CMatrix {
        &self.amplitudes * other.amplitudes.adjoint()
    }
}

fn check_num_spins(num_spins: usize) -> Result<()> {
    if num_spins == 0 || num_spins > MAX_SPINS {
        return Err(Error::NumSpins(num_spins));
    }
    Ok(())
}

fn check_index(num_spins: usize, index: usize) -> Result<()> {
    if index == 0 || index > num_spins {
        return Err(Error::SpinIndex { index, num_spins });
    }
    Ok(())
}

fn single_spin(axis: Axis) -> [[C64; 2]; 2] {
    let z = C64::new(0.0, 0.0);
    let h = C64::new(0.5, 0.0);
    let ih = C64::new(0.0, 0.5);
    match axis {
        Axis::X => [[z, h], [h, z]],
        Axis::Y => [[z, -ih], [ih, z]],
        Axis::Z => [[h, z], [z, -h]],
    }
}

/// Bit of `spin` (0-based) in basis index `state`; 0 = α, 1 = β.
#[inline]
pub(crate) fn spin_bit(state: usize, spin: usize, num_spins: usize) -> usize {
    (state >> (num_spins - 1 - spin)) & 1
}

/// I_{k,axis} for the 1-based spin `spin_index` in an `num_spins` system.
pub fn angular_momentum(num_spins: usize, spin_index: usize, axis: Axis) -> Result<Operator> {
    check_num_spins(num_spins)?;
    check_index(num_spins, spin_index)?;
    let k = spin_index - 1;
    let dim = 1usize << num_spins;
    let s = single_spin(axis);
    let mut m = CMatrix::zeros(dim, dim);
    let mask = !(1usize << (num_spins - 1 - k));
    for r in 0..dim {
        for c in 0..dim {
            if r & mask == c & mask {
                m[(r, c)] = s[spin_bit(r, k, num_spins)][spin_bit(c, k, num_spins)];
            }
        }
    }
    Ok(Operator::from_parts(m, Role::Hermitian))
}

/// I_j · I_k.
pub fn scalar_product(num_spins: usize, j: usize, k: usize) -> Result<Operator> {
    check_num_spins(num_spins)?;
    let mut acc = Operator::zeros(1 << num_spins);
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        let a = angular_momentum(num_spins, j, axis)?;
        let b = angular_momentum(num_spins, k, axis)?;
        acc = &acc + &Operator::from_parts(a.matrix() * b.matrix(), Role::Hermitian);
    }
    Ok(acc)
}

/// Sum of I_{k,axis} over a set of 1-based spin indices.
pub fn total_angular_momentum(num_spins: usize, spins: &[usize], axis: Axis) -> Result<Operator> {
    check_num_spins(num_spins)?;
    let mut acc = Operator::zeros(1 << num_spins);
    for &s in spins {
        acc = &acc + &angular_momentum(num_spins, s, axis)?;
    }
    Ok(acc)
}

fn check_pair(pair: (usize, usize), num_spins: usize) -> Result<()> {
    check_num_spins(num_spins)?;
    check_index(num_spins, pair.0)?;
    check_index(num_spins, pair.1)?;
    if pair.0 == pair.1 {
        return Err(Error::DegeneratePair(pair.0));
    }
    Ok(())
}

/// Lifts a 4×4 operator on the pair (basis |αα⟩,|αβ⟩,|βα⟩,|ββ⟩ of spins
/// (j, k) in that order) to the full space, identity on the spectators.
pub(crate) fn embed_pair(op: &[[C64; 4]; 4], pair: (usize, usize), num_spins: usize) -> CMatrix {
    let (j, k) = (pair.0 - 1, pair.1 - 1);
    let dim = 1usize << num_spins;
    let mask = !((1usize << (num_spins - 1 - j)) | (1usize << (num_spins - 1 - k)));
    let mut m = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        let rp = 2 * spin_bit(r, j, num_spins) + spin_bit(r, k, num_spins);
        for c in 0..dim {
            if r & mask == c & mask {
                let cp = 2 * spin_bit(c, j, num_spins) + spin_bit(c, k, num_spins);
                m[(r, c)] = op[rp][cp];
            }
        }
    }
    m
}

/// Pair-space amplitudes of S₀, T₊, T₀, T₋ in the basis used by [`embed_pair`].
fn pair_states() -> [[f64; 4]; 4] {
    let s = FRAC_1_SQRT_2;
    [
        [0.0, s, -s, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, s, s, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
}

/// Returns `[S₀, T₊, T₀, T₋]` for the 1-based `pair`; spectator spins are
/// placed in |α⟩.
pub fn singlet_triplet_basis(pair: (usize, usize), num_spins: usize) -> Result<[StateVector; 4]> {
    check_pair(pair, num_spins)?;
    let (j, k) = (pair.0 - 1, pair.1 - 1);
    let dim = 1usize << num_spins;
    let states = pair_states();
    let build = |amps: &[f64; 4]| {
        let mut v = CVector::zeros(dim);
        for (p, &a) in amps.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let (bj, bk) = (p >> 1, p & 1);
            let idx = (bj << (num_spins - 1 - j)) | (bk << (num_spins - 1 - k));
            v[idx] = C64::new(a, 0.0);
        }
        StateVector { amplitudes: v }
    };
    Ok([build(&states[0]), build(&states[1]), build(&states[2]), build(&states[3])])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Component {
    X,
    Y,
    Z,
    /// cos φ · I_x + sin φ · I_y
    Phase(f64),
    Identity,
}

/// Fictitious spin-1/2 operator on span{|a⟩, |b⟩}.
pub fn single_transition_op(a: &StateVector, b: &StateVector, component: Component) -> Result<Operator> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension { expected: a.dim(), found: b.dim() });
    }
    let ov = a.overlap(b).norm();
    if ov > ORTHO_TOL {
        return Err(Error::NotOrthogonal(ov));
    }
    let ab = a.outer(b);
    let ba = b.outer(a);
    let half = C64::new(0.5, 0.0);
    let m = match component {
        Component::X => (&ab + &ba) * half,
        Component::Y => (&ab - &ba) * C64::new(0.0, -0.5),
        Component::Z => (a.outer(a) - b.outer(b)) * half,
        Component::Phase(phi) => {
            let x = (&ab + &ba) * half;
            let y = (&ab - &ba) * C64::new(0.0, -0.5);
            x * C64::new(phi.cos(), 0.0) + y * C64::new(phi.sin(), 0.0)
        }
        Component::Identity => a.outer(a) + b.outer(b),
    };
    Ok(Operator::hermitian_part(&m))
}

/// Singlet order |S₀⟩⟨S₀| − ⅓ Σ_m |T_m⟩⟨T_m| of the pair, identity on
/// spectator spins. Equals −(4/3) I_j·I_k.
pub fn singlet_order_op(pair: (usize, usize), num_spins: usize) -> Result<Operator> {
    check_pair(pair, num_spins)?;
    let states = pair_states();
    let mut q = [[C64::new(0.0, 0.0); 4]; 4];
    for (n, st) in states.iter().enumerate() {
        let w = if n == 0 { 1.0 } else { -1.0 / 3.0 };
        for r in 0..4 {
            for c in 0..4 {
                q[r][c] += C64::new(w * st[r] * st[c], 0.0);
            }
        }
    }
    Ok(Operator::from_parts(embed_pair(&q, pair, num_spins), Role::Hermitian))
}

/// Exchange operator P_jk: swaps the states of spins j and k.
pub fn swap_op(pair: (usize, usize), num_spins: usize) -> Result<Operator> {
    check_pair(pair, num_spins)?;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut p = [[zero; 4]; 4];
    p[0][0] = one;
    p[1][2] = one;
    p[2][1] = one;
    p[3][3] = one;
    Ok(Operator::from_parts(embed_pair(&p, pair, num_spins), Role::Hermitian))
}

/// Decomposition of an operator on a 4-state subspace into single-transition
/// components: for each ordered pair (r < s) the x and y coefficients
/// (c_x, c_y with O ⊇ c_x I_x^{rs} + c_y I_y^{rs}) and the diagonal
/// expectation values ⟨r|O|r⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionDecomposition {
    pub labels: Vec<String>,
    pub diagonal: Vec<f64>,
    /// (r, s, c_x, c_y)
    pub transitions: Vec<(usize, usize, f64, f64)>,
}

impl TransitionDecomposition {
    pub fn coefficient(&self, r: usize, s: usize) -> Option<(f64, f64)> {
        self.transitions
            .iter()
            .find(|t| t.0 == r && t.1 == s)
            .map(|t| (t.2, t.3))
    }
}

/// Expands a Hermitian operator over single-transition operators of the
/// given orthonormal states. Coefficients are real parts; the operator is
/// assumed to act within span(states).
pub fn decompose_transitions(op: &Operator, states: &[StateVector], labels: &[&str]) -> Result<TransitionDecomposition> {
    let mut diagonal = Vec::with_capacity(states.len());
    let mut transitions = Vec::new();
    for s in states {
        diagonal.push(op.element(s, s).re);
    }
    for r in 0..states.len() {
        for s in (r + 1)..states.len() {
            let ix = single_transition_op(&states[r], &states[s], Component::X)?;
            let iy = single_transition_op(&states[r], &states[s], Component::Y)?;
            // Tr{(I_x^{rs})²} = ½
            let cx = ix.inner(op).re * 2.0;
            let cy = iy.inner(op).re * 2.0;
            transitions.push((r, s, cx, cy));
        }
    }
    Ok(TransitionDecomposition {
        labels: labels.iter().map(|s| s.to_string()).collect(),
        diagonal,
        transitions,
    })
}

#[cfg(test)]
fn real_vector(v: &[f64]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|&x| C64::new(x, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn single_spin_z_is_half_pauli() {
        let iz = angular_momentum(1, 1, Axis::Z).unwrap();
        assert_eq!(iz.matrix()[(0, 0)], c(0.5));
        assert_eq!(iz.matrix()[(1, 1)], c(-0.5));
        assert_eq!(iz.matrix()[(0, 1)], c(0.0));
    }

    #[test]
    fn su2_commutation_all_spins() {
        for n in 1..=4 {
            for k in 1..=n {
                let ix = angular_momentum(n, k, Axis::X).unwrap();
                let iy = angular_momentum(n, k, Axis::Y).unwrap();
                let iz = angular_momentum(n, k, Axis::Z).unwrap();
                let lhs = ix.commutator(&iy);
                let rhs = iz.scale_complex(C64::new(0.0, 1.0));
                assert!(lhs.max_abs_diff(&rhs) < 1e-15);
            }
        }
    }

    #[test]
    fn distinct_spins_commute_exactly() {
        for a in [Axis::X, Axis::Y, Axis::Z] {
            for b in [Axis::X, Axis::Y, Axis::Z] {
                let p = angular_momentum(3, 1, a).unwrap();
                let q = angular_momentum(3, 3, b).unwrap();
                assert_eq!(p.commutator(&q).max_abs(), 0.0);
            }
        }
    }

    #[test]
    fn total_z_on_alpha_alpha() {
        let iz = total_angular_momentum(2, &[1, 2], Axis::Z).unwrap();
        let aa = StateVector::basis(4, 0);
        let v = iz.apply(&aa);
        assert_eq!(v, aa.amplitudes().clone());
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(angular_momentum(2, 3, Axis::X), Err(Error::SpinIndex { .. })));
        assert!(matches!(angular_momentum(2, 0, Axis::X), Err(Error::SpinIndex { .. })));
        assert!(matches!(angular_momentum(7, 1, Axis::X), Err(Error::NumSpins(7))));
    }

    #[test]
    fn singlet_triplet_orthonormal_and_symmetry() {
        let b = singlet_triplet_basis((1, 2), 2).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let ov = b[i].overlap(&b[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ov - c(want)).norm() < 1e-15);
            }
        }
        let p = swap_op((1, 2), 2).unwrap();
        assert!((p.element(&b[0], &b[0]) - c(-1.0)).norm() < 1e-15);
        assert!((p.element(&b[2], &b[2]) - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn singlet_is_eigenstate_of_scalar_coupling() {
        let b = singlet_triplet_basis((1, 2), 2).unwrap();
        let ii = scalar_product(2, 1, 2).unwrap();
        let v = ii.apply(&b[0]);
        let want = b[0].amplitudes() * c(-0.75);
        assert!((v - want).norm() < 1e-15);
    }

    #[test]
    fn equal_pair_indices_rejected() {
        assert!(matches!(singlet_triplet_basis((2, 2), 3), Err(Error::DegeneratePair(2))));
    }

    #[test]
    fn single_transition_x_matches_definition() {
        let b = singlet_triplet_basis((1, 2), 2).unwrap();
        let op = single_transition_op(&b[0], &b[2], Component::X).unwrap();
        let want = (b[0].outer(&b[2]) + b[2].outer(&b[0])) * c(0.5);
        assert!((op.matrix() - want).norm() < 1e-15);
    }

    #[test]
    fn single_transition_phase_limits() {
        let b = singlet_triplet_basis((1, 2), 2).unwrap();
        let x = single_transition_op(&b[0], &b[1], Component::X).unwrap();
        let y = single_transition_op(&b[0], &b[1], Component::Y).unwrap();
        let p0 = single_transition_op(&b[0], &b[1], Component::Phase(0.0)).unwrap();
        let p90 = single_transition_op(&b[0], &b[1], Component::Phase(std::f64::consts::FRAC_PI_2)).unwrap();
        assert!(p0.max_abs_diff(&x) < 1e-15);
        assert!(p90.max_abs_diff(&y) < 1e-15);
    }

    #[test]
    fn non_orthogonal_inputs_rejected() {
        let b = singlet_triplet_basis((1, 2), 2).unwrap();
        let mixed = StateVector::normalized(b[0].amplitudes() + b[1].amplitudes()).unwrap();
        assert!(matches!(
            single_transition_op(&b[0], &mixed, Component::X),
            Err(Error::NotOrthogonal(_))
        ));
    }

    #[test]
    fn singlet_order_trace_and_scalar_form() {
        let q = singlet_order_op((1, 2), 2).unwrap();
        let ii = scalar_product(2, 1, 2).unwrap();
        assert!((q.inner(&q) - c(4.0 / 3.0)).norm() < 1e-14);
        assert!(q.max_abs_diff(&ii.scale(-4.0 / 3.0)) < 1e-12);
        assert!(q.trace().norm() < 1e-15);
        let ix = total_angular_momentum(2, &[1, 2], Axis::X).unwrap();
        assert!(q.inner(&ix).norm() < 1e-15);
    }

    #[test]
    fn singlet_order_with_spectator() {
        let q = singlet_order_op((1, 3), 3).unwrap();
        let ii = scalar_product(3, 1, 3).unwrap();
        assert!(q.max_abs_diff(&ii.scale(-4.0 / 3.0)) < 1e-12);
        let b = singlet_triplet_basis((1, 3), 3).unwrap();
        assert!((q.element(&b[0], &b[0]) - c(1.0)).norm() < 1e-14);
        assert!((q.element(&b[1], &b[1]) - c(-1.0 / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn hermitian_constructor_rejects_asymmetric() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0);
        assert!(matches!(Operator::hermitian(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn state_vector_requires_unit_norm() {
        let v = real_vector(&[1.0, 1.0]);
        assert!(StateVector::new(v.clone()).is_err());
        assert!(StateVector::normalized(v).is_ok());
    }

    #[test]
    fn decomposition_recovers_coefficients() {
        let b = singlet_triplet_basis((1, 2), 2).unwrap();
        let x = single_transition_op(&b[0], &b[1], Component::X).unwrap().scale(-3.0);
        let y = single_transition_op(&b[2], &b[3], Component::Y).unwrap().scale(0.5);
        let op = &x + &y;
        let d = decompose_transitions(&op, &b, &["S0", "T+", "T0", "T-"]).unwrap();
        let (cx, cy) = d.coefficient(0, 1).unwrap();
        assert!((cx + 3.0).abs() < 1e-14 && cy.abs() < 1e-14);
        let (cx, cy) = d.coefficient(2, 3).unwrap();
        assert!(cx.abs() < 1e-14 && (cy - 0.5).abs() < 1e-14);
    }
}
