//! Cross-checks against independent constructions: nalgebra matrices built
//! from Pauli forms, a dense eigensolver, projector traces and naive
//! enumeration loops that share no code with the library.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use hyperbell::bell::{self, ClassicalBoundSource};
use hyperbell::lhv::{self, StrategyClass};
use hyperbell::model::{self, DofKind, NoiseModel, ObsName, ObservableId};
use hyperbell::qcore::{self, Matrix};
use hyperbell::simlab::{self, JointSetting};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C;

type M = DMatrix<C>;

fn m2(a: [[C; 2]; 2]) -> M {
    M::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
}

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

fn sx() -> M {
    m2([[re(0.0), re(1.0)], [re(1.0), re(0.0)]])
}

fn sy() -> M {
    m2([[re(0.0), C::new(0.0, -1.0)], [C::new(0.0, 1.0), re(0.0)]])
}

fn sz() -> M {
    m2([[re(1.0), re(0.0)], [re(0.0), re(-1.0)]])
}

fn eye(n: usize) -> M {
    M::identity(n, n)
}

/// Observable table in Pauli form.
fn pauli_obs(kind: DofKind, name: ObsName) -> M {
    let s = re(FRAC_1_SQRT_2);
    match (kind, name) {
        (DofKind::Polarization, ObsName::A) => sz(),
        (DofKind::Polarization, ObsName::LowerA) => sx(),
        (DofKind::Polarization, ObsName::B) => (sz() + sx()) * s,
        (DofKind::Polarization, ObsName::LowerB) => (sx() - sz()) * s,
        (DofKind::Path, ObsName::A) => sx(),
        (DofKind::Path, ObsName::LowerA) => sy(),
        (DofKind::Path, ObsName::B) => (sx() + sy()) * s,
        (DofKind::Path, ObsName::LowerB) => (sy() - sx()) * s,
    }
}

fn to_na(m: &Matrix) -> M {
    M::from_row_slice(m.dim(), m.dim(), m.entries())
}

fn kron_all(ms: &[M]) -> M {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.kronecker(m))
}

/// Ideal state written amplitude by amplitude on the 16 basis kets
/// `|pol_u pol_d path_u path_d⟩`: ½(|HH⟩ − |VV⟩)(|lr⟩ + |rl⟩).
fn ideal_amplitudes() -> DVector<C> {
    let mut v = DVector::from_element(16, re(0.0));
    for (pu, pd, sp) in [(0, 0, 1.0), (1, 1, -1.0)] {
        for (ku, kd) in [(0, 1), (1, 0)] {
            v[(pu << 3) | (pd << 2) | (ku << 1) | kd] = re(0.5 * sp);
        }
    }
    v
}

const POL_SIGNS: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];
const PATH_SIGNS: [f64; 4] = [1.0, -1.0, 1.0, 1.0];
// (u, d) pairs in the order AB, Ab, aB, ab
const PAIRS: [(ObsName, ObsName); 4] = [
    (ObsName::A, ObsName::B),
    (ObsName::A, ObsName::LowerB),
    (ObsName::LowerA, ObsName::B),
    (ObsName::LowerA, ObsName::LowerB),
];

fn chsh_na(kind: DofKind) -> M {
    let signs = if kind == DofKind::Polarization { POL_SIGNS } else { PATH_SIGNS };
    let mut acc = M::zeros(4, 4);
    for (i, (a, b)) in PAIRS.iter().enumerate() {
        acc += pauli_obs(kind, *a).kronecker(&pauli_obs(kind, *b)) * re(signs[i]);
    }
    acc
}

fn max_abs(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn observables_match_pauli_forms() {
    for id in ObservableId::all() {
        let ours = to_na(&model::observable(id));
        assert!(max_abs(&ours, &pauli_obs(id.kind, id.name)) < 1e-15, "{id}");
    }
}

#[test]
fn hyper_state_matches_written_amplitudes() {
    let st = model::hyper_state(PI, 0.0).unwrap();
    let psi = st.as_pure().unwrap();
    let expected = ideal_amplitudes();
    for i in 0..16 {
        assert!((psi[i] - expected[i]).norm() < 1e-15, "amplitude {i}");
    }
}

#[test]
fn bell_operators_match_dense_oracle() {
    assert!(max_abs(&to_na(bell::build_beta_pi().op()), &chsh_na(DofKind::Polarization)) < 1e-14);
    assert!(max_abs(&to_na(bell::build_beta_k().op()), &chsh_na(DofKind::Path)) < 1e-14);
    let beta = chsh_na(DofKind::Polarization).kronecker(&chsh_na(DofKind::Path));
    assert!(max_abs(&to_na(bell::build_beta(2).unwrap().op()), &beta) < 1e-13);
}

#[test]
fn ideal_values_from_dense_oracle() {
    let psi = ideal_amplitudes();
    let beta = chsh_na(DofKind::Polarization).kronecker(&chsh_na(DofKind::Path));
    let oracle = (psi.adjoint() * &beta * &psi)[(0, 0)];
    assert!((oracle.re + 8.0).abs() < 1e-12);
    assert!(oracle.im.abs() < 1e-12);

    let st = model::hyper_state(PI, 0.0).unwrap();
    let q = bell::quantum_value(&bell::build_beta(2).unwrap(), &st).unwrap();
    assert!((q.signed - oracle.re).abs() < 1e-12);

    // single-DOF values via the partial operators β_π ⊗ I and I ⊗ β_k
    let bp = chsh_na(DofKind::Polarization).kronecker(&eye(4));
    let bk = eye(4).kronecker(&chsh_na(DofKind::Path));
    let vp = (psi.adjoint() * &bp * &psi)[(0, 0)].re;
    let vk = (psi.adjoint() * &bk * &psi)[(0, 0)].re;
    assert!((vp + 2.0 * SQRT_2).abs() < 1e-12);
    assert!((vk - 2.0 * SQRT_2).abs() < 1e-12);
}

fn oracle_radius(m: &M) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().fold(0.0, |a: f64, &x| a.max(x.abs()))
}

#[test]
fn spectral_radius_matches_eigensolver() {
    for n in 1..=3 {
        let op = bell::build_beta(n).unwrap();
        let oracle = oracle_radius(&to_na(op.op()));
        let ours = op.spectral_radius().unwrap();
        assert!((ours - oracle).abs() < 1e-9, "N={n}: {ours} vs {oracle}");
        assert!((oracle - 2f64.powf(1.5 * n as f64)).abs() < 1e-9);
    }
}

#[test]
fn spectral_radius_of_random_hermitian_matches_eigensolver() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for dim in [2usize, 3, 5, 8, 16] {
        for _ in 0..5 {
            let mut a = M::zeros(dim, dim);
            for r in 0..dim {
                for c in 0..dim {
                    a[(r, c)] = C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                }
            }
            let h = (&a + a.adjoint()) * re(0.5);
            let ours =
                qcore::spectral_radius(&Matrix::from_entries(dim, h.transpose().iter().copied().collect()).unwrap())
                    .unwrap();
            let oracle = oracle_radius(&h);
            assert!((ours - oracle).abs() < 1e-8 * oracle.max(1.0), "dim {dim}: {ours} vs {oracle}");
        }
    }
}

/// Born probabilities by tracing ρ against Kronecker products of
/// eigenprojectors, in the slot order (pol u)(pol d)(path u)(path d).
fn projector_oracle(rho: &M, s: &JointSetting) -> Vec<f64> {
    let n = s.dof_count();
    let proj = |kind: DofKind, name: ObsName, outcome: f64| (eye(2) + pauli_obs(kind, name) * re(outcome)) * re(0.5);
    let mut out = Vec::new();
    for ou in 0..1usize << n {
        for od in 0..1usize << n {
            let mut slots = Vec::new();
            for j in 0..n {
                let su = if (ou >> (n - 1 - j)) & 1 == 0 { 1.0 } else { -1.0 };
                let sd = if (od >> (n - 1 - j)) & 1 == 0 { 1.0 } else { -1.0 };
                slots.push(proj(s.u[j].kind, s.u[j].name, su));
                slots.push(proj(s.d[j].kind, s.d[j].name, sd));
            }
            // Tr[ρK] = Σ ρ_ij K_ji
            out.push(rho.transpose().component_mul(&kron_all(&slots)).sum().re);
        }
    }
    out
}

fn all_pairs(kind: DofKind) -> Vec<(ObservableId, ObservableId)> {
    let names = [ObsName::A, ObsName::LowerA, ObsName::B, ObsName::LowerB];
    let mut v = Vec::new();
    for a in names {
        for b in names {
            v.push((ObservableId::new(a, kind), ObservableId::new(b, kind)));
        }
    }
    v
}

#[test]
fn born_distribution_matches_projector_traces() {
    let states = [
        model::hyper_state(PI, 0.0).unwrap(),
        model::hyper_state(0.7, -1.3).unwrap(),
        model::apply_noise(&model::hyper_state(PI, 0.0).unwrap(), &NoiseModel::white(0.8, 0.6).unwrap()).unwrap(),
        model::apply_noise(&model::hyper_state(0.4, 2.0).unwrap(), &NoiseModel::dephasing(0.3, 0.9).unwrap()).unwrap(),
    ];
    for st in &states {
        let rho = to_na(&st.density());
        for (pu, pd) in all_pairs(DofKind::Polarization) {
            for (ku, kd) in all_pairs(DofKind::Path).into_iter().step_by(3) {
                let s = JointSetting::new(vec![pu, ku], vec![pd, kd]).unwrap();
                let ours = simlab::born_distribution(st, &s).unwrap();
                let oracle = projector_oracle(&rho, &s);
                for (a, b) in ours.probs.iter().zip(&oracle) {
                    assert!((a - b).abs() < 1e-12, "{s:?}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn born_distribution_matches_projector_traces_three_dofs() {
    let st = model::apply_noise(&model::ideal_state(3).unwrap(), &NoiseModel::white(0.9, 0.7).unwrap()).unwrap();
    let rho = to_na(&st.density());
    let op = bell::build_beta(3).unwrap();
    for s in simlab::bell_settings(&op).iter().step_by(5) {
        let ours = simlab::born_distribution(&st, s).unwrap();
        let oracle = projector_oracle(&rho, s);
        for (a, b) in ours.probs.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

/// White noise at visibility v maps a correlation E to vE on a maximally
/// entangled pair, so the product operator scales by v_π·v_k.
#[test]
fn white_noise_scales_quantum_values() {
    let (vp, vk) = (0.83, 0.61);
    let st = model::apply_noise(&model::hyper_state(PI, 0.0).unwrap(), &NoiseModel::white(vp, vk).unwrap()).unwrap();
    let exp = simlab::exact_experiment(&st).unwrap();
    assert!((exp.dof_reports[0].beta_estimate + 2.0 * SQRT_2 * vp).abs() < 1e-12);
    assert!((exp.dof_reports[1].beta_estimate - 2.0 * SQRT_2 * vk).abs() < 1e-12);
    assert!((exp.beta.beta_estimate + 8.0 * vp * vk).abs() < 1e-12);

    let rho = to_na(&st.density());
    let beta = chsh_na(DofKind::Polarization).kronecker(&chsh_na(DofKind::Path));
    assert!(((&rho * &beta).trace().re + 8.0 * vp * vk).abs() < 1e-12);
}

fn value(bits: u64, i: usize) -> f64 {
    if (bits >> i) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Naive maximum over factorizable strategies: each photon fixes one ±1 per
/// (DOF, observable), and a product term is the product of its factors.
fn naive_factorizable(n: usize) -> i64 {
    let kinds: Vec<DofKind> = (0..n).map(|j| if j % 2 == 0 { DofKind::Polarization } else { DofKind::Path }).collect();
    let mut best = f64::MIN;
    for u in 0..1u64 << (2 * n) {
        for d in 0..1u64 << (2 * n) {
            let mut total = 0.0;
            for term in 0..4usize.pow(n as u32) {
                let mut prod = 1.0;
                let mut t = term;
                for j in (0..n).rev() {
                    let p = t % 4;
                    t /= 4;
                    let signs = if kinds[j] == DofKind::Polarization { POL_SIGNS } else { PATH_SIGNS };
                    let (ua, db) = (p / 2, p % 2);
                    prod *= signs[p] * value(u, 2 * j + ua) * value(d, 2 * j + db);
                }
                total += prod;
            }
            best = best.max(total);
        }
    }
    best as i64
}

#[test]
fn factorizable_bounds_match_naive_enumeration() {
    for n in 1..=3 {
        let naive = naive_factorizable(n);
        let ours = lhv::max_bound(&bell::build_beta(n).unwrap(), StrategyClass::Factorizable).unwrap();
        assert_eq!(ours.bound, naive, "N={n}");
        assert_eq!(naive, 1 << n);
    }
}

#[test]
fn unrestricted_bound_matches_naive_enumeration() {
    // one free ±1 per 4-outcome setting on each side
    let mut best = f64::MIN;
    for u in 0..1u64 << 4 {
        for d in 0..1u64 << 4 {
            let mut total = 0.0;
            for (pi, (pa, pb)) in PAIRS.iter().enumerate() {
                for (ki, (ka, kb)) in PAIRS.iter().enumerate() {
                    let cu = 2 * pa.choice() + ka.choice();
                    let cd = 2 * pb.choice() + kb.choice();
                    total += POL_SIGNS[pi] * PATH_SIGNS[ki] * value(u, cu) * value(d, cd);
                }
            }
            best = best.max(total);
        }
    }
    // equal to the quantum value
    assert_eq!(best, 8.0);
    let ours = lhv::max_bound(&bell::build_beta(2).unwrap(), StrategyClass::ContextUnrestricted).unwrap();
    assert_eq!(ours.bound as f64, best);
}

#[test]
fn scaling_ratios_from_both_bound_sources() {
    for n in 1..=4 {
        let a = bell::scaling_report(n, ClassicalBoundSource::Analytic).unwrap();
        let b = bell::scaling_report(n, ClassicalBoundSource::LhvBruteforce).unwrap();
        assert_eq!(a.classical_bound, b.classical_bound);
        assert!((b.ratio - 2f64.powf(n as f64 / 2.0)).abs() < 1e-10);
    }
}
