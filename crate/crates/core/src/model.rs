//! Physical content of the two-photon experiment.
//!
//! Basis: `|H⟩ = |l⟩ = (1, 0)`, `|V⟩ = |r⟩ = (0, 1)`.
//!
//! Tensor layout for N degrees of freedom is DOF-major: each degree of
//! freedom contributes a (photon u) ⊗ (photon d) pair, and pairs follow each
//! other in DOF order. For the polarization/path experiment that is
//! `(u-pol) ⊗ (d-pol) ⊗ (u-path) ⊗ (d-path)`, so the hyper-entangled state is
//! literally `(polarization pair) ⊗ (path pair)`. Slot `2·j + p` belongs to
//! DOF `j` and photon `p` (u = 0, d = 1).
//!
//! For N > 2 the DOF kinds repeat cyclically: polarization, path,
//! polarization, path.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{self, c, tensor_all, tensor_vec, Complex, Matrix, Vector, I, ONE, ZERO};

/// Largest number of degrees of freedom any state or operator may carry.
pub const MAX_DOFS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DofKind {
    Polarization,
    Path,
}

impl DofKind {
    pub fn symbol(self) -> &'static str {
        match self {
            DofKind::Polarization => "pi",
            DofKind::Path => "k",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Photon {
    U,
    D,
}

impl Photon {
    fn slot_offset(self) -> usize {
        match self {
            Photon::U => 0,
            Photon::D => 1,
        }
    }
}

impl fmt::Display for Photon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Photon::U => "u",
            Photon::D => "d",
        })
    }
}

/// One tensor factor of the experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DofLabel {
    pub kind: DofKind,
    pub photon: Photon,
}

/// Observable names: `A`/`a` are photon-u settings, `B`/`b` photon-d settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ObsName {
    A,
    LowerA,
    B,
    LowerB,
}

impl ObsName {
    pub fn photon(self) -> Photon {
        match self {
            ObsName::A | ObsName::LowerA => Photon::U,
            ObsName::B | ObsName::LowerB => Photon::D,
        }
    }

    /// 0 for the capital setting, 1 for the lower-case one.
    pub fn choice(self) -> usize {
        match self {
            ObsName::A | ObsName::B => 0,
            ObsName::LowerA | ObsName::LowerB => 1,
        }
    }

    pub fn for_side(photon: Photon, choice: usize) -> ObsName {
        match (photon, choice) {
            (Photon::U, 0) => ObsName::A,
            (Photon::U, _) => ObsName::LowerA,
            (Photon::D, 0) => ObsName::B,
            (Photon::D, _) => ObsName::LowerB,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ObsName::A => "A",
            ObsName::LowerA => "a",
            ObsName::B => "B",
            ObsName::LowerB => "b",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObservableId {
    pub name: ObsName,
    pub kind: DofKind,
}

impl ObservableId {
    pub const fn new(name: ObsName, kind: DofKind) -> Self {
        Self { name, kind }
    }

    pub const fn pol(name: ObsName) -> Self {
        Self::new(name, DofKind::Polarization)
    }

    pub const fn path(name: ObsName) -> Self {
        Self::new(name, DofKind::Path)
    }

    /// All eight observables: polarization first, names in A, a, B, b order.
    pub fn all() -> [ObservableId; 8] {
        use ObsName::*;
        [
            Self::pol(A),
            Self::pol(LowerA),
            Self::pol(B),
            Self::pol(LowerB),
            Self::path(A),
            Self::path(LowerA),
            Self::path(B),
            Self::path(LowerB),
        ]
    }
}

impl fmt::Display for ObservableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.name.symbol(), self.kind.symbol())
    }
}

/// Fixed basis and ordering conventions.
#[derive(Clone, Debug)]
pub struct BasisConventions {
    pub h: Vector,
    pub v: Vector,
    pub l: Vector,
    pub r: Vector,
    /// Tensor factors from slowest to fastest index.
    pub tensor_order: [DofLabel; 4],
}

impl BasisConventions {
    /// Index of `|pol_u pol_d path_u path_d⟩` in the 16-dim space, each
    /// argument being 0 (H or l) or 1 (V or r).
    pub fn index(&self, pol_u: usize, pol_d: usize, path_u: usize, path_d: usize) -> usize {
        (pol_u << 3) | (pol_d << 2) | (path_u << 1) | path_d
    }
}

pub fn basis_conventions() -> BasisConventions {
    let zero = Vector::from_real(&[1.0, 0.0]).unwrap();
    let one = Vector::from_real(&[0.0, 1.0]).unwrap();
    BasisConventions {
        h: zero.clone(),
        v: one.clone(),
        l: zero,
        r: one,
        tensor_order: [
            DofLabel { kind: DofKind::Polarization, photon: Photon::U },
            DofLabel { kind: DofKind::Polarization, photon: Photon::D },
            DofLabel { kind: DofKind::Path, photon: Photon::U },
            DofLabel { kind: DofKind::Path, photon: Photon::D },
        ],
    }
}

/// DOF kinds for an N-DOF experiment: polarization, path, polarization, ...
pub fn dof_kinds(n: usize) -> Result<Vec<DofKind>> {
    check_dof_count(n)?;
    Ok((0..n).map(|j| if j % 2 == 0 { DofKind::Polarization } else { DofKind::Path }).collect())
}

pub(crate) fn check_dof_count(n: usize) -> Result<()> {
    if (1..=MAX_DOFS).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("number of degrees of freedom must be in 1..={MAX_DOFS}, got {n}")))
    }
}

/// Hilbert-space dimension of a two-photon state with `n` qubit-like DOFs.
pub fn hilbert_dim(n: usize) -> usize {
    1 << (2 * n)
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateRepr {
    Pure(Vector),
    Mixed(Matrix),
}

/// Two-photon state over a DOF-major tensor layout.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    dofs: Vec<DofKind>,
    repr: StateRepr,
}

impl QuantumState {
    pub fn pure(dofs: Vec<DofKind>, psi: Vector) -> Result<Self> {
        check_dof_count(dofs.len())?;
        let dim = hilbert_dim(dofs.len());
        if psi.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: psi.dim() });
        }
        let n2 = psi.norm_sqr();
        if (n2 - 1.0).abs() > qcore::NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { dofs, repr: StateRepr::Pure(psi) })
    }

    pub fn mixed(dofs: Vec<DofKind>, rho: Matrix) -> Result<Self> {
        check_dof_count(dofs.len())?;
        let dim = hilbert_dim(dofs.len());
        if rho.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: rho.dim() });
        }
        qcore::validate_density(&rho)?;
        Ok(Self { dofs, repr: StateRepr::Mixed(rho) })
    }

    pub fn maximally_mixed(dofs: Vec<DofKind>) -> Result<Self> {
        check_dof_count(dofs.len())?;
        let dim = hilbert_dim(dofs.len());
        let rho = Matrix::identity(dim)?.scale(c(1.0 / dim as f64, 0.0));
        Ok(Self { dofs, repr: StateRepr::Mixed(rho) })
    }

    pub fn dofs(&self) -> &[DofKind] {
        &self.dofs
    }

    pub fn dim(&self) -> usize {
        hilbert_dim(self.dofs.len())
    }

    pub fn repr(&self) -> &StateRepr {
        &self.repr
    }

    pub fn as_pure(&self) -> Option<&Vector> {
        match &self.repr {
            StateRepr::Pure(v) => Some(v),
            StateRepr::Mixed(_) => None,
        }
    }

    pub fn density(&self) -> Matrix {
        match &self.repr {
            StateRepr::Pure(v) => v.projector(),
            StateRepr::Mixed(m) => m.clone(),
        }
    }

    /// `⟨op⟩` in this state.
    pub fn expectation(&self, op: &Matrix) -> Result<Complex> {
        match &self.repr {
            StateRepr::Pure(v) => qcore::expectation(op, v),
            StateRepr::Mixed(m) => {
                if op.dim() != m.dim() {
                    return Err(Error::DimensionMismatch { expected: m.dim(), got: op.dim() });
                }
                // validated at construction
                Ok(qcore::trace_of_product(m, op))
            }
        }
    }

    /// Product state; `other`'s DOFs follow `self`'s.
    pub fn tensor(&self, other: &QuantumState) -> Result<QuantumState> {
        let mut dofs = self.dofs.clone();
        dofs.extend_from_slice(&other.dofs);
        check_dof_count(dofs.len())?;
        let repr = match (&self.repr, &other.repr) {
            (StateRepr::Pure(a), StateRepr::Pure(b)) => StateRepr::Pure(tensor_vec(a, b)?),
            _ => StateRepr::Mixed(qcore::tensor(&self.density(), &other.density())?),
        };
        Ok(QuantumState { dofs, repr })
    }
}

/// Two-photon state of a single DOF.
///
/// Polarization: `(|HH⟩ + e^{iθ}|VV⟩)/√2`; path: `(|lr⟩ + e^{iθ}|rl⟩)/√2`.
pub fn pair_state(kind: DofKind, phase: f64) -> Result<QuantumState> {
    if !phase.is_finite() {
        return Err(Error::NonFinite("phase"));
    }
    let e = Complex::from_polar(1.0, phase) * FRAC_1_SQRT_2;
    let h = c(FRAC_1_SQRT_2, 0.0);
    let amps = match kind {
        DofKind::Polarization => vec![h, ZERO, ZERO, e],
        DofKind::Path => vec![ZERO, h, e, ZERO],
    };
    QuantumState::pure(vec![kind], Vector::new(amps)?)
}

/// `(|HH⟩ + e^{iθ}|VV⟩)/√2 ⊗ (|lr⟩ + e^{iφ}|rl⟩)/√2`.
///
/// `hyper_state(π, 0)` is the experiment's state
/// `½(|HH⟩ − |VV⟩) ⊗ (|lr⟩ + |rl⟩)`.
pub fn hyper_state(theta: f64, phi: f64) -> Result<QuantumState> {
    pair_state(DofKind::Polarization, theta)?.tensor(&pair_state(DofKind::Path, phi)?)
}

/// N-DOF generalization: one maximally entangled pair per DOF with the
/// phases of the hyper-entangled state (θ = π for polarization, φ = 0 for
/// path).
pub fn ideal_state(n: usize) -> Result<QuantumState> {
    phased_state(n, PI, 0.0)
}

/// N-DOF product of pair states, `theta` on every polarization pair and
/// `phi` on every path pair. `phased_state(2, θ, φ) == hyper_state(θ, φ)`.
pub fn phased_state(n: usize, theta: f64, phi: f64) -> Result<QuantumState> {
    let kinds = dof_kinds(n)?;
    let mut states = kinds.iter().map(|&k| pair_state(k, if k == DofKind::Polarization { theta } else { phi }));
    let first = states.next().unwrap()?;
    states.try_fold(first, |acc, s| acc.tensor(&s?))
}

fn ketbra(ket: usize, bra: usize) -> Matrix {
    let mut m = Matrix::zeros(2).unwrap();
    m[(ket, bra)] = ONE;
    m
}

fn lin(terms: &[(Complex, Matrix)]) -> Matrix {
    terms.iter().fold(Matrix::zeros(2).unwrap(), |acc, (k, m)| &acc + &m.scale(*k))
}

/// The 2×2 matrix of a local observable, written from its ket-bra form.
pub fn observable(id: ObservableId) -> Matrix {
    const H: usize = 0;
    const V: usize = 1;
    const L: usize = 0;
    const R: usize = 1;
    let s = FRAC_1_SQRT_2;
    let one = ONE;
    let neg = c(-1.0, 0.0);
    match (id.kind, id.name) {
        // |H⟩⟨H| − |V⟩⟨V|
        (DofKind::Polarization, ObsName::A) => lin(&[(one, ketbra(H, H)), (neg, ketbra(V, V))]),
        // |V⟩⟨H| + |H⟩⟨V|
        (DofKind::Polarization, ObsName::LowerA) => lin(&[(one, ketbra(V, H)), (one, ketbra(H, V))]),
        // [|H⟩⟨H| − |V⟩⟨V| + |V⟩⟨H| + |H⟩⟨V|]/√2
        (DofKind::Polarization, ObsName::B) => lin(&[
            (c(s, 0.0), ketbra(H, H)),
            (c(-s, 0.0), ketbra(V, V)),
            (c(s, 0.0), ketbra(V, H)),
            (c(s, 0.0), ketbra(H, V)),
        ]),
        // [|V⟩⟨V| − |H⟩⟨H| + |V⟩⟨H| + |H⟩⟨V|]/√2
        (DofKind::Polarization, ObsName::LowerB) => lin(&[
            (c(s, 0.0), ketbra(V, V)),
            (c(-s, 0.0), ketbra(H, H)),
            (c(s, 0.0), ketbra(V, H)),
            (c(s, 0.0), ketbra(H, V)),
        ]),
        // |l⟩⟨r| + |r⟩⟨l|
        (DofKind::Path, ObsName::A) => lin(&[(one, ketbra(L, R)), (one, ketbra(R, L))]),
        // i(|r⟩⟨l| − |l⟩⟨r|)
        (DofKind::Path, ObsName::LowerA) => lin(&[(I, ketbra(R, L)), (-I, ketbra(L, R))]),
        // [(i+1)|r⟩⟨l| − (i−1)|l⟩⟨r|]/√2
        (DofKind::Path, ObsName::B) => lin(&[((I + one) * s, ketbra(R, L)), (-(I - one) * s, ketbra(L, R))]),
        // [(i−1)|r⟩⟨l| − (i+1)|l⟩⟨r|]/√2
        (DofKind::Path, ObsName::LowerB) => lin(&[((I - one) * s, ketbra(R, L)), (-(I + one) * s, ketbra(L, R))]),
    }
}

/// Eigenprojector `(I + s·O)/2` of a dichotomic observable for outcome `s = ±1`.
pub fn outcome_projector(id: ObservableId, outcome: i8) -> Matrix {
    let o = observable(id).scale(c(outcome as f64, 0.0));
    (&Matrix::identity(2).unwrap() + &o).scale(c(0.5, 0.0))
}

/// Outcome values for a local outcome index: DOF `j` reads bit `n−1−j`,
/// 0 meaning +1 and 1 meaning −1.
pub fn outcome_values(index: usize, n: usize) -> Vec<i8> {
    (0..n).map(|j| if (index >> (n - 1 - j)) & 1 == 0 { 1 } else { -1 }).collect()
}

/// Kronecker product over the 2N photon/DOF slots.
pub(crate) fn embed_slots(slots: &[Matrix]) -> Result<Matrix> {
    tensor_all(slots)
}

/// Full-space operator for `obs` (one entry per DOF) measured on `photon`,
/// identity on the other photon. Names are not checked against the side.
pub fn embed_local(photon: Photon, obs: &[ObservableId], dofs: &[DofKind]) -> Result<Matrix> {
    let mats = obs.iter().map(|&o| observable(o)).collect::<Vec<_>>();
    embed_local_matrices(photon, &mats, obs, dofs)
}

fn embed_local_matrices(photon: Photon, mats: &[Matrix], obs: &[ObservableId], dofs: &[DofKind]) -> Result<Matrix> {
    check_local_kinds(obs, dofs)?;
    let id2 = Matrix::identity(2)?;
    let mut slots = vec![id2; 2 * dofs.len()];
    for (j, m) in mats.iter().enumerate() {
        slots[2 * j + photon.slot_offset()] = m.clone();
    }
    embed_slots(&slots)
}

fn check_local_kinds(obs: &[ObservableId], dofs: &[DofKind]) -> Result<()> {
    check_dof_count(dofs.len())?;
    if obs.len() != dofs.len() {
        return Err(Error::InvalidArgument(format!("expected {} local observables, got {}", dofs.len(), obs.len())));
    }
    for (j, (o, k)) in obs.iter().zip(dofs).enumerate() {
        if o.kind != *k {
            return Err(Error::InvalidArgument(format!("slot {j} expects a {k:?} observable, got {o}")));
        }
    }
    Ok(())
}

/// A local product observable and its joint-outcome projectors.
#[derive(Clone, Debug)]
pub struct LocalSetting {
    pub photon: Photon,
    pub observables: Vec<ObservableId>,
    /// Embedded product observable on the full space.
    pub operator: Matrix,
    /// One projector per joint outcome, indexed as in [`outcome_values`].
    pub projectors: Vec<(Vec<i8>, Matrix)>,
}

/// Embeds a local product observable (any number of DOFs) and its
/// outcome projectors. Names must belong to `photon`.
pub fn local_setting(photon: Photon, obs: &[ObservableId], dofs: &[DofKind]) -> Result<LocalSetting> {
    if let Some(bad) = obs.iter().find(|o| o.name.photon() != photon) {
        return Err(Error::InvalidArgument(format!("observable {bad} is not a setting of photon {photon}")));
    }
    let operator = embed_local(photon, obs, dofs)?;
    let n = dofs.len();
    let projectors = (0..1usize << n)
        .map(|idx| {
            let vals = outcome_values(idx, n);
            let mats: Vec<Matrix> = obs.iter().zip(&vals).map(|(&o, &s)| outcome_projector(o, s)).collect();
            embed_local_matrices(photon, &mats, obs, dofs).map(|p| (vals, p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalSetting { photon, observables: obs.to_vec(), operator, projectors })
}

/// Polarization-times-path observable on one photon of the 16-dim space.
pub fn local_setting_operator(pol: ObservableId, path: ObservableId, photon: Photon) -> Result<LocalSetting> {
    if pol.kind != DofKind::Polarization || path.kind != DofKind::Path {
        return Err(Error::InvalidArgument(format!("expected (polarization, path) observables, got ({pol}, {path})")));
    }
    local_setting(photon, &[pol, path], &[DofKind::Polarization, DofKind::Path])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    None,
    White,
    Dephasing,
}

/// Visibility noise applied independently to each DOF's two-photon block.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub v_pi: f64,
    pub v_k: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, v_pi: f64, v_k: f64) -> Result<Self> {
        for (name, v) in [("v_pi", v_pi), ("v_k", v_k)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        if kind == NoiseKind::None && (v_pi != 1.0 || v_k != 1.0) {
            return Err(Error::InvalidArgument("noise kind 'none' requires v_pi = v_k = 1".into()));
        }
        Ok(Self { kind, v_pi, v_k })
    }

    pub fn none() -> Self {
        Self { kind: NoiseKind::None, v_pi: 1.0, v_k: 1.0 }
    }

    pub fn white(v_pi: f64, v_k: f64) -> Result<Self> {
        Self::new(NoiseKind::White, v_pi, v_k)
    }

    pub fn dephasing(v_pi: f64, v_k: f64) -> Result<Self> {
        Self::new(NoiseKind::Dephasing, v_pi, v_k)
    }

    pub fn visibility(&self, kind: DofKind) -> f64 {
        match kind {
            DofKind::Polarization => self.v_pi,
            DofKind::Path => self.v_k,
        }
    }
}

/// Applies `noise` to every DOF block and returns the resulting density
/// matrix state.
///
/// * white: `X ↦ v·X + (1 − v)·Tr_j[X] ⊗ I/4` on DOF block `j`;
/// * dephasing: entries that are off-diagonal in block `j`'s computational
///   basis are multiplied by `v`.
pub fn apply_noise(state: &QuantumState, noise: &NoiseModel) -> Result<QuantumState> {
    // re-validate: the struct fields are public
    let noise = NoiseModel::new(noise.kind, noise.v_pi, noise.v_k)?;
    let dofs = state.dofs().to_vec();
    let mut rho = state.density();
    let n = dofs.len();
    let dim = rho.dim();
    let block = |idx: usize, j: usize| (idx >> (2 * (n - 1 - j))) & 3;

    match noise.kind {
        NoiseKind::None => {}
        NoiseKind::White => {
            for (j, &kind) in dofs.iter().enumerate() {
                let v = noise.visibility(kind);
                if v == 1.0 {
                    continue;
                }
                let shift = 2 * (n - 1 - j);
                let mask = !(3usize << shift);
                let mut out = Matrix::zeros(dim)?;
                for r in 0..dim {
                    for col in 0..dim {
                        let mut z = rho[(r, col)] * v;
                        if block(r, j) == block(col, j) {
                            let mut partial = ZERO;
                            for beta in 0..4 {
                                let rr = (r & mask) | (beta << shift);
                                let cc = (col & mask) | (beta << shift);
                                partial += rho[(rr, cc)];
                            }
                            z += partial * ((1.0 - v) / 4.0);
                        }
                        out[(r, col)] = z;
                    }
                }
                rho = out;
            }
        }
        NoiseKind::Dephasing => {
            for r in 0..dim {
                for col in 0..dim {
                    let mut k = 1.0;
                    for (j, &kind) in dofs.iter().enumerate() {
                        if block(r, j) != block(col, j) {
                            k *= noise.visibility(kind);
                        }
                    }
                    rho[(r, col)] *= k;
                }
            }
        }
    }
    QuantumState::mixed(dofs, rho)
}
