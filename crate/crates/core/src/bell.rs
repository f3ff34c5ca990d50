//! CHSH operators per degree of freedom and their tensor products.
//!
//! A [`BellOperator`] carries both its matrix and its term table: one
//! `(u-setting, d-setting, ±1)` entry per correlation that enters the
//! inequality. The term table is what the classical enumeration and the
//! Monte-Carlo estimators consume; the matrix is what the quantum side uses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lhv::{self, StrategyClass};
use crate::model::{self, DofKind, ObsName, ObservableId, QuantumState};
use crate::qcore::{self, c, Matrix};

/// One signed correlation term. `u[j]`/`d[j]` is the observable measured on
/// DOF `j` by photon u/d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BellTerm {
    pub u: Vec<ObservableId>,
    pub d: Vec<ObservableId>,
    pub sign: i8,
}

impl BellTerm {
    /// Local context index of one side: DOF `j` contributes bit `n−1−j`
    /// (0 for the capital setting, 1 for the lower-case one).
    pub fn context_index(obs: &[ObservableId]) -> usize {
        obs.iter().fold(0, |acc, o| (acc << 1) | o.name.choice())
    }

    pub fn u_context(&self) -> usize {
        Self::context_index(&self.u)
    }

    pub fn d_context(&self) -> usize {
        Self::context_index(&self.d)
    }
}

#[derive(Clone, Debug)]
pub struct BellOperator {
    op: Matrix,
    terms: Vec<BellTerm>,
    dofs: Vec<DofKind>,
}

impl BellOperator {
    pub fn op(&self) -> &Matrix {
        &self.op
    }

    pub fn terms(&self) -> &[BellTerm] {
        &self.terms
    }

    pub fn dofs(&self) -> &[DofKind] {
        &self.dofs
    }

    pub fn dof_count(&self) -> usize {
        self.dofs.len()
    }

    /// Full-space operator of one term (without its sign).
    pub fn term_operator(&self, term: &BellTerm) -> Result<Matrix> {
        term_operator(term, &self.dofs)
    }

    /// Signed sum of the term operators; equals [`Self::op`].
    pub fn reconstruct(&self) -> Result<Matrix> {
        let mut acc = Matrix::zeros(self.op.dim())?;
        for t in &self.terms {
            acc = acc.try_add(&self.term_operator(t)?.scale(c(t.sign as f64, 0.0)))?;
        }
        Ok(acc)
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        qcore::spectral_radius(&self.op)
    }
}

pub fn term_operator(term: &BellTerm, dofs: &[DofKind]) -> Result<Matrix> {
    if term.u.len() != dofs.len() || term.d.len() != dofs.len() {
        return Err(Error::InvalidArgument("term does not match the DOF layout".into()));
    }
    let mut slots = Vec::with_capacity(2 * dofs.len());
    for ((u, d), k) in term.u.iter().zip(&term.d).zip(dofs) {
        if u.kind != *k || d.kind != *k {
            return Err(Error::InvalidArgument(format!("term observables {u}, {d} do not act on a {k:?} slot")));
        }
        slots.push(model::observable(*u));
        slots.push(model::observable(*d));
    }
    model::embed_slots(&slots)
}

/// Single-DOF CHSH operator with term signs in (AB, Ab, aB, ab) order.
fn build_chsh(kind: DofKind, signs: [i8; 4]) -> BellOperator {
    use ObsName::*;
    let pairs = [(A, B), (A, LowerB), (LowerA, B), (LowerA, LowerB)];
    let terms: Vec<BellTerm> = pairs
        .iter()
        .zip(signs)
        .map(|(&(u, d), sign)| BellTerm {
            u: vec![ObservableId::new(u, kind)],
            d: vec![ObservableId::new(d, kind)],
            sign,
        })
        .collect();
    let dofs = vec![kind];
    let op = terms.iter().fold(Matrix::zeros(4).unwrap(), |acc, t| {
        let m = term_operator(t, &dofs).unwrap();
        &acc + &m.scale(c(t.sign as f64, 0.0))
    });
    BellOperator { op, terms, dofs }
}

/// `β_π = −A_π⊗B_π + A_π⊗b_π + a_π⊗B_π + a_π⊗b_π`.
pub fn build_beta_pi() -> BellOperator {
    build_chsh(DofKind::Polarization, [-1, 1, 1, 1])
}

/// `β_k = A_k⊗B_k − A_k⊗b_k + a_k⊗B_k + a_k⊗b_k`.
pub fn build_beta_k() -> BellOperator {
    build_chsh(DofKind::Path, [1, -1, 1, 1])
}

pub fn build_chsh_for(kind: DofKind) -> BellOperator {
    match kind {
        DofKind::Polarization => build_beta_pi(),
        DofKind::Path => build_beta_k(),
    }
}

/// Tensor product of Bell operators. Terms expand to every combination of
/// factor terms (first factor slowest) with multiplied signs; each product
/// term is one (u local observable, d local observable) pair.
pub fn build_beta_product(factors: &[BellOperator]) -> Result<BellOperator> {
    let n: usize = factors.iter().map(|f| f.dof_count()).sum();
    model::check_dof_count(n)?;
    let op = qcore::tensor_all(factors.iter().map(|f| &f.op))?;
    let mut terms = vec![BellTerm { u: vec![], d: vec![], sign: 1 }];
    for f in factors {
        terms = terms
            .iter()
            .flat_map(|t| {
                f.terms.iter().map(move |ft| {
                    let mut u = t.u.clone();
                    u.extend_from_slice(&ft.u);
                    let mut d = t.d.clone();
                    d.extend_from_slice(&ft.d);
                    BellTerm { u, d, sign: t.sign * ft.sign }
                })
            })
            .collect();
    }
    let dofs = factors.iter().flat_map(|f| f.dofs.iter().copied()).collect();
    Ok(BellOperator { op, terms, dofs })
}

/// N-fold product with DOF kinds cycling polarization, path, ...
pub fn build_beta(n: usize) -> Result<BellOperator> {
    let factors: Vec<BellOperator> = model::dof_kinds(n)?.into_iter().map(build_chsh_for).collect();
    build_beta_product(&factors)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumValue {
    pub signed: f64,
    pub magnitude: f64,
}

/// `⟨β⟩` in `state`; the state must have the operator's DOF layout.
pub fn quantum_value(bell: &BellOperator, state: &QuantumState) -> Result<QuantumValue> {
    if state.dofs() != bell.dofs() {
        return Err(Error::DimensionMismatch { expected: bell.op.dim(), got: state.dim() });
    }
    let signed = state.expectation(&bell.op)?.re;
    Ok(QuantumValue { signed, magnitude: signed.abs() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalBoundSource {
    Analytic,
    LhvBruteforce,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub n_dof: usize,
    pub quantum_value: f64,
    pub classical_bound: f64,
    pub ratio: f64,
    pub bound_source: ClassicalBoundSource,
}

/// Quantum value on the N-fold ideal state against the factorizable
/// classical bound, either `2^N` or the enumerated maximum.
pub fn scaling_report(n: usize, source: ClassicalBoundSource) -> Result<ScalingReport> {
    let bell = build_beta(n)?;
    let state = model::ideal_state(n)?;
    let quantum = quantum_value(&bell, &state)?.magnitude;
    let classical_bound = match source {
        ClassicalBoundSource::Analytic => (1u64 << n) as f64,
        ClassicalBoundSource::LhvBruteforce => lhv::max_bound(&bell, StrategyClass::Factorizable)?.bound as f64,
    };
    Ok(ScalingReport {
        n_dof: n,
        quantum_value: quantum,
        classical_bound,
        ratio: quantum / classical_bound,
        bound_source: source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn beta_pi_properties() {
        let b = build_beta_pi();
        assert_eq!(b.terms().len(), 4);
        assert_eq!(b.terms().iter().map(|t| t.sign).collect::<Vec<_>>(), vec![-1, 1, 1, 1]);
        assert!(b.op().is_hermitian(1e-12));
        assert_abs_diff_eq!(b.op().trace().norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.spectral_radius().unwrap(), 2.0 * SQRT_2, epsilon = 1e-10);

        let pol = model::pair_state(DofKind::Polarization, PI).unwrap();
        let q = quantum_value(&b, &pol).unwrap();
        assert_abs_diff_eq!(q.signed, -2.0 * SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn beta_k_properties() {
        let b = build_beta_k();
        assert!(b.op().is_hermitian(1e-12));
        assert_abs_diff_eq!(b.spectral_radius().unwrap(), 2.0 * SQRT_2, epsilon = 1e-10);
        let path = model::pair_state(DofKind::Path, 0.0).unwrap();
        assert_abs_diff_eq!(quantum_value(&b, &path).unwrap().signed, 2.0 * SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn product_of_two() {
        let b = build_beta_product(&[build_beta_pi(), build_beta_k()]).unwrap();
        assert_eq!(b.terms().len(), 16);
        assert_eq!(b.op().dim(), 16);
        let psi = model::hyper_state(PI, 0.0).unwrap();
        let q = quantum_value(&b, &psi).unwrap();
        assert_abs_diff_eq!(q.signed, -8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q.magnitude, 8.0, epsilon = 1e-12);
        assert!(b.reconstruct().unwrap().max_abs_diff(b.op()) <= 1e-12);
    }

    #[test]
    fn single_factor_product_is_identity_extension() {
        let pi = build_beta_pi();
        let p = build_beta_product(std::slice::from_ref(&pi)).unwrap();
        assert_eq!(p.op(), pi.op());
        assert_eq!(p.terms(), pi.terms());
    }

    #[test]
    fn product_rejects_too_many_dofs() {
        let f: Vec<_> = (0..5).map(|_| build_beta_pi()).collect();
        assert!(build_beta_product(&f).is_err());
        assert!(build_beta_product(&[]).is_err());
    }

    #[test]
    fn quantum_value_on_mixed_is_zero() {
        let b = build_beta(2).unwrap();
        let mm = QuantumState::maximally_mixed(b.dofs().to_vec()).unwrap();
        assert_abs_diff_eq!(quantum_value(&b, &mm).unwrap().signed, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn quantum_value_layout_mismatch() {
        let b = build_beta_pi();
        let psi = model::hyper_state(PI, 0.0).unwrap();
        assert!(quantum_value(&b, &psi).is_err());
    }

    #[test]
    fn scaling_rows() {
        let expected = [(1, 2.0 * SQRT_2, 2.0), (2, 8.0, 4.0), (3, 16.0 * SQRT_2, 8.0)];
        for (n, q, cb) in expected {
            let r = scaling_report(n, ClassicalBoundSource::Analytic).unwrap();
            assert_abs_diff_eq!(r.quantum_value, q, epsilon = 1e-10);
            assert_eq!(r.classical_bound, cb);
            assert_abs_diff_eq!(r.ratio, 2f64.powf(n as f64 / 2.0), epsilon = 1e-10);
        }
        assert!(scaling_report(0, ClassicalBoundSource::Analytic).is_err());
    }

    #[test]
    fn context_index_big_endian() {
        use ObsName::*;
        let obs = [ObservableId::pol(LowerA), ObservableId::path(A)];
        assert_eq!(BellTerm::context_index(&obs), 0b10);
    }
}
