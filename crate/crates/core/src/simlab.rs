//! Born-rule outcome statistics, seeded coincidence sampling and the
//! estimators built on them.
//!
//! Outcome indexing: a local outcome index `o` in `0..2^N` encodes the ±1
//! results per DOF as in [`model::outcome_values`]; the joint index of an
//! outcome distribution is `o_u · 2^N + o_d`.
//!
//! Random numbers come from `ChaCha8Rng::seed_from_u64` (rand_chacha 0.9);
//! multinomial counts are drawn as a chain of conditional binomials
//! (rand_distr 0.5). [`GENERATOR_ID`] names that combination and is recorded
//! in every sampled report. Per-setting seeds are derived with
//! [`derive_seed`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bell::{self, BellOperator, BellTerm};
use crate::error::{Error, Result};
use crate::model::{self, DofKind, ObsName, ObservableId, QuantumState, StateRepr};
use crate::qcore::Complex;

pub const GENERATOR_ID: &str = "chacha8-rand_chacha-0.9/seed_from_u64+conditional-binomial-rand_distr-0.5";

/// Events per setting used when nothing else is configured.
pub const DEFAULT_EVENTS: u64 = 100_000;

/// Probabilities down to this value are clamped to zero.
pub const NEGATIVE_PROB_TOL: f64 = 1e-12;
pub const PROB_SUM_TOL: f64 = 1e-9;

/// Seed streams keep the different sampling campaigns of one run independent.
pub mod stream {
    pub const BETA: u64 = 1;
    pub const CHSH: u64 = 2;
    pub const ASSUMPTIONS: u64 = 3;
}

/// SplitMix64 finalizer of `seed ⊕ (stream·φ64) ⊕ (index·φ64²)`, where φ64 is
/// the 64-bit golden-ratio constant.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = seed ^ stream.wrapping_mul(GOLDEN) ^ index.wrapping_mul(GOLDEN).wrapping_mul(GOLDEN);
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Observables measured by each photon, one per DOF.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JointSetting {
    pub u: Vec<ObservableId>,
    pub d: Vec<ObservableId>,
}

impl JointSetting {
    /// Any per-DOF pair of same-kind observables; names are not tied to a
    /// side (the context-independence tests measure `A` on both photons).
    pub fn new(u: Vec<ObservableId>, d: Vec<ObservableId>) -> Result<Self> {
        model::check_dof_count(u.len())?;
        if u.len() != d.len() {
            return Err(Error::InvalidArgument("u and d settings cover different DOFs".into()));
        }
        for (a, b) in u.iter().zip(&d) {
            if a.kind != b.kind {
                return Err(Error::InvalidArgument(format!("{a} and {b} act on different DOFs")));
            }
        }
        Ok(Self { u, d })
    }

    /// A Bell-experiment setting: u uses `A`/`a`, d uses `B`/`b`.
    pub fn bell(u: Vec<ObservableId>, d: Vec<ObservableId>) -> Result<Self> {
        let s = Self::new(u, d)?;
        let ok = s.u.iter().all(|o| o.name.photon() == model::Photon::U)
            && s.d.iter().all(|o| o.name.photon() == model::Photon::D);
        if !ok {
            return Err(Error::InvalidArgument("Bell settings use A/a on photon u and B/b on photon d".into()));
        }
        Ok(s)
    }

    pub fn from_term(term: &BellTerm) -> Self {
        Self { u: term.u.clone(), d: term.d.clone() }
    }

    pub fn dofs(&self) -> Vec<DofKind> {
        self.u.iter().map(|o| o.kind).collect()
    }

    pub fn dof_count(&self) -> usize {
        self.u.len()
    }

    /// Restriction to DOF `j`.
    pub fn restrict(&self, j: usize) -> JointSetting {
        JointSetting { u: vec![self.u[j]], d: vec![self.d[j]] }
    }

    pub fn label_u(&self) -> String {
        label(&self.u)
    }

    pub fn label_d(&self) -> String {
        label(&self.d)
    }
}

fn label(obs: &[ObservableId]) -> String {
    obs.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("*")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub setting: JointSetting,
    pub probs: Vec<f64>,
}

impl OutcomeDistribution {
    fn local_outcomes(&self) -> usize {
        1 << self.setting.dof_count()
    }

    pub fn marginal_u(&self) -> Vec<f64> {
        let m = self.local_outcomes();
        (0..m).map(|ou| self.probs[ou * m..(ou + 1) * m].iter().sum()).collect()
    }

    pub fn marginal_d(&self) -> Vec<f64> {
        let m = self.local_outcomes();
        (0..m).map(|od| (0..m).map(|ou| self.probs[ou * m + od]).sum()).collect()
    }

    /// Exact `E[Π all outcomes]`.
    pub fn joint_correlation(&self) -> f64 {
        let n = self.setting.dof_count();
        self.probs.iter().enumerate().map(|(idx, p)| p * joint_parity(idx, n) as f64).sum()
    }

    /// Exact `E[u_j · d_j]` for DOF `j`.
    pub fn dof_correlation(&self, j: usize) -> f64 {
        let n = self.setting.dof_count();
        self.probs.iter().enumerate().map(|(idx, p)| p * dof_parity(idx, n, j) as f64).sum()
    }
}

fn split(idx: usize, n: usize) -> (usize, usize) {
    (idx >> n, idx & ((1 << n) - 1))
}

fn joint_parity(idx: usize, n: usize) -> i64 {
    let (ou, od) = split(idx, n);
    if (ou ^ od).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn dof_parity(idx: usize, n: usize, j: usize) -> i64 {
    let (ou, od) = split(idx, n);
    let bit = n - 1 - j;
    if ((ou ^ od) >> bit) & 1 == 0 {
        1
    } else {
        -1
    }
}

/// `p(o_u, o_d) = Tr[ρ · P_u(o_u) ⊗ P_d(o_d)]`.
///
/// Every local observable is a ±1 observable on one qubit-like slot, so the
/// joint projectors are rank one in the product eigenbasis: the state is
/// rotated slot by slot into that basis and the probabilities are read off
/// the diagonal.
pub fn born_distribution(state: &QuantumState, setting: &JointSetting) -> Result<OutcomeDistribution> {
    let dofs = setting.dofs();
    if state.dofs() != dofs.as_slice() {
        return Err(Error::DimensionMismatch { expected: state.dim(), got: model::hilbert_dim(dofs.len()) });
    }
    let n = dofs.len();
    let slots = 2 * n;
    let rotations: Vec<[[Complex; 2]; 2]> =
        (0..n).flat_map(|j| [eigen_rows(setting.u[j]), eigen_rows(setting.d[j])]).collect();

    let diag: Vec<f64> = match state.repr() {
        StateRepr::Pure(psi) => {
            let mut amps = psi.entries().to_vec();
            for (s, w) in rotations.iter().enumerate() {
                rotate_slot(&mut amps, slots, s, w);
            }
            amps.iter().map(|z| z.norm_sqr()).collect()
        }
        StateRepr::Mixed(rho) => {
            let dim = rho.dim();
            let mut m = rho.entries().to_vec();
            // rows: W·ρ, applied per column
            for (s, w) in rotations.iter().enumerate() {
                for col in 0..dim {
                    rotate_slot_strided(&mut m, slots, s, w, col, dim);
                }
            }
            // diagonal of (W·ρ)·W†
            (0..dim)
                .map(|i| {
                    let row = &m[i * dim..(i + 1) * dim];
                    row.iter()
                        .enumerate()
                        .map(|(col, z)| z * slot_product(&rotations, slots, i, col).conj())
                        .sum::<Complex>()
                        .re
                })
                .collect()
        }
    };

    // basis index carries slot bits (u0 d0 u1 d1 ...); regroup to o_u·2^N + o_d
    let m = 1usize << n;
    let mut probs = vec![0.0; m * m];
    for (idx, p) in diag.into_iter().enumerate() {
        let (mut ou, mut od) = (0usize, 0usize);
        for j in 0..n {
            ou = (ou << 1) | ((idx >> (slots - 1 - 2 * j)) & 1);
            od = (od << 1) | ((idx >> (slots - 2 - 2 * j)) & 1);
        }
        probs[ou * m + od] = p;
    }
    let probs = clean_probabilities(probs)?;
    Ok(OutcomeDistribution { setting: setting.clone(), probs })
}

/// Rows are `⟨e₊|` and `⟨e₋|` for the ±1 eigenvectors of `id`.
fn eigen_rows(id: ObservableId) -> [[Complex; 2]; 2] {
    let row = |outcome: i8| {
        let p = model::outcome_projector(id, outcome);
        let col0 = [p[(0, 0)], p[(1, 0)]];
        let col1 = [p[(0, 1)], p[(1, 1)]];
        let norm = |v: &[Complex; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        let v = if norm(&col0) >= norm(&col1) { col0 } else { col1 };
        let k = norm(&v);
        [v[0].conj() / k, v[1].conj() / k]
    };
    [row(1), row(-1)]
}

fn rotate_slot(amps: &mut [Complex], slots: usize, slot: usize, w: &[[Complex; 2]; 2]) {
    let bit = 1usize << (slots - 1 - slot);
    for i in 0..amps.len() {
        if i & bit != 0 {
            continue;
        }
        let (a, b) = (amps[i], amps[i | bit]);
        amps[i] = w[0][0] * a + w[0][1] * b;
        amps[i | bit] = w[1][0] * a + w[1][1] * b;
    }
}

fn rotate_slot_strided(m: &mut [Complex], slots: usize, slot: usize, w: &[[Complex; 2]; 2], col: usize, dim: usize) {
    let bit = 1usize << (slots - 1 - slot);
    for i in 0..dim {
        if i & bit != 0 {
            continue;
        }
        let (ia, ib) = (i * dim + col, (i | bit) * dim + col);
        let (a, b) = (m[ia], m[ib]);
        m[ia] = w[0][0] * a + w[0][1] * b;
        m[ib] = w[1][0] * a + w[1][1] * b;
    }
}

/// `W_full[row, col]` of the slot-wise rotation.
fn slot_product(w: &[[[Complex; 2]; 2]], slots: usize, row: usize, col: usize) -> Complex {
    let mut acc = Complex::new(1.0, 0.0);
    for (s, ws) in w.iter().enumerate() {
        let shift = slots - 1 - s;
        acc *= ws[(row >> shift) & 1][(col >> shift) & 1];
    }
    acc
}

fn clean_probabilities(mut probs: Vec<f64>) -> Result<Vec<f64>> {
    for p in probs.iter_mut() {
        if *p < -NEGATIVE_PROB_TOL || !p.is_finite() {
            return Err(Error::Numerical(format!("Born probability {p} is negative")));
        }
        if *p < 0.0 {
            *p = 0.0;
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > PROB_SUM_TOL {
        return Err(Error::Numerical(format!("Born probabilities sum to {total}")));
    }
    for p in probs.iter_mut() {
        *p /= total;
    }
    Ok(probs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub setting: JointSetting,
    pub counts: Vec<u64>,
    pub seed: u64,
}

impl Counts {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Multinomial draw of `n_events` outcomes, fully determined by
/// `(dist, n_events, seed)`.
pub fn sample(dist: &OutcomeDistribution, n_events: u64, seed: u64) -> Result<Counts> {
    if n_events == 0 {
        return Err(Error::InvalidArgument("at least one event is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining = n_events;
    let mut mass = 1.0f64;
    let mut counts = vec![0u64; dist.probs.len()];
    let last = dist.probs.len() - 1;
    for (i, &p) in dist.probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i == last {
            counts[i] = remaining;
            break;
        }
        let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let k = if q == 0.0 {
            0
        } else if q == 1.0 {
            remaining
        } else {
            Binomial::new(remaining, q)
                .map_err(|e| Error::Numerical(format!("binomial draw failed: {e}")))?
                .sample(&mut rng)
        };
        counts[i] = k;
        remaining -= k;
        mass -= p;
    }
    Ok(Counts { setting: dist.setting.clone(), counts, seed })
}

/// Estimated correlation of one setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRecord {
    pub label: JointSetting,
    pub e: f64,
    pub std_err: f64,
    pub n_events: u64,
}

impl CorrelationRecord {
    /// `E = parity_sum / n`, `σ = sqrt((1 − E²)/n)`.
    pub fn from_parity_sum(label: JointSetting, parity_sum: i64, n_events: u64) -> Self {
        let n = n_events as f64;
        let e = parity_sum as f64 / n;
        let std_err = ((1.0 - e * e).max(0.0) / n).sqrt();
        Self { label, e, std_err, n_events }
    }

    /// Exact value with no sampling error.
    pub fn exact(label: JointSetting, e: f64) -> Self {
        Self { label, e, std_err: 0.0, n_events: 0 }
    }
}

/// Full joint correlation plus the per-DOF correlations of one setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub joint: CorrelationRecord,
    pub per_dof: Vec<CorrelationRecord>,
}

pub fn estimate(counts: &Counts) -> Result<Estimate> {
    let total = counts.total();
    if total < 2 {
        return Err(Error::InvalidArgument(format!("estimation needs at least 2 events, got {total}")));
    }
    let n = counts.setting.dof_count();
    let parity_sum =
        |f: &dyn Fn(usize) -> i64| -> i64 { counts.counts.iter().enumerate().map(|(idx, &c)| f(idx) * c as i64).sum() };
    let joint =
        CorrelationRecord::from_parity_sum(counts.setting.clone(), parity_sum(&|idx| joint_parity(idx, n)), total);
    let per_dof = (0..n)
        .map(|j| {
            CorrelationRecord::from_parity_sum(
                counts.setting.restrict(j),
                parity_sum(&|idx| dof_parity(idx, n, j)),
                total,
            )
        })
        .collect();
    Ok(Estimate { joint, per_dof })
}

/// Exact counterpart of [`estimate`] from the Born distribution.
pub fn exact_estimate(state: &QuantumState, setting: &JointSetting) -> Result<Estimate> {
    let dist = born_distribution(state, setting)?;
    Ok(Estimate {
        joint: CorrelationRecord::exact(setting.clone(), dist.joint_correlation()),
        per_dof: (0..setting.dof_count())
            .map(|j| CorrelationRecord::exact(setting.restrict(j), dist.dof_correlation(j)))
            .collect(),
    })
}

/// Samples every setting with seed `derive_seed(seed, stream, index)`.
pub fn simulate_settings(
    state: &QuantumState,
    settings: &[JointSetting],
    n_events: u64,
    seed: u64,
    stream: u64,
) -> Result<Vec<Estimate>> {
    settings
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let dist = born_distribution(state, s)?;
            let counts = sample(&dist, n_events, derive_seed(seed, stream, i as u64))?;
            estimate(&counts)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub beta_estimate: f64,
    pub beta_std_err: f64,
    pub bound: f64,
    pub sigmas: f64,
}

impl ViolationReport {
    /// `sigmas = (|β| − bound)/σ_β`.
    pub fn from_summary(beta_estimate: f64, beta_std_err: f64, bound: f64) -> Self {
        let sigmas = (beta_estimate.abs() - bound) / beta_std_err;
        Self { beta_estimate, beta_std_err, bound, sigmas }
    }
}

/// `β = Σ sign·E`, `σ_β = sqrt(Σ σ²)`. Each record must carry exactly one
/// term's setting.
pub fn violation_report(records: &[CorrelationRecord], bell: &BellOperator, bound: f64) -> Result<ViolationReport> {
    let terms = bell.terms();
    if records.len() != terms.len() {
        return Err(Error::InvalidArgument(format!("{} records for {} terms", records.len(), terms.len())));
    }
    let mut used = vec![false; records.len()];
    let mut beta = 0.0;
    let mut var = 0.0;
    for t in terms {
        let target = JointSetting::from_term(t);
        let pos = records.iter().enumerate().position(|(i, r)| !used[i] && r.label == target).ok_or_else(|| {
            Error::InvalidArgument(format!("no record for term ({} | {})", target.label_u(), target.label_d()))
        })?;
        used[pos] = true;
        beta += t.sign as f64 * records[pos].e;
        var += records[pos].std_err * records[pos].std_err;
    }
    Ok(ViolationReport::from_summary(beta, var.sqrt(), bound))
}

/// The joint settings of a Bell operator, in term order.
pub fn bell_settings(bell: &BellOperator) -> Vec<JointSetting> {
    bell.terms().iter().map(JointSetting::from_term).collect()
}

/// Settings for the CHSH test of DOF `j` inside a multi-DOF state: DOF `j`
/// runs over its four CHSH settings, every other DOF is measured with its
/// capital observables (`A` on u, `B` on d). Records are read from the
/// DOF-`j` marginal.
pub fn chsh_settings_in(dofs: &[DofKind], j: usize) -> (BellOperator, Vec<JointSetting>) {
    let chsh = bell::build_chsh_for(dofs[j]);
    let settings = chsh
        .terms()
        .iter()
        .map(|t| {
            let mut u: Vec<ObservableId> = dofs.iter().map(|&k| ObservableId::new(ObsName::A, k)).collect();
            let mut d: Vec<ObservableId> = dofs.iter().map(|&k| ObservableId::new(ObsName::B, k)).collect();
            u[j] = t.u[0];
            d[j] = t.d[0];
            JointSetting { u, d }
        })
        .collect();
    (chsh, settings)
}

/// A simulated Bell experiment: per-DOF CHSH tests and the full product
/// operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub dof_records: Vec<Vec<CorrelationRecord>>,
    pub dof_reports: Vec<ViolationReport>,
    pub beta_records: Vec<CorrelationRecord>,
    pub beta: ViolationReport,
    pub generator_id: Option<String>,
}

/// Samples `n_events` per setting. CHSH bound 2 per DOF, product bound `2^N`.
pub fn run_experiment(state: &QuantumState, n_events: u64, seed: u64) -> Result<Experiment> {
    let n = state.dofs().len();
    let beta_op = bell::build_beta_product(&state.dofs().iter().map(|&k| bell::build_chsh_for(k)).collect::<Vec<_>>())?;
    let mut dof_records = Vec::new();
    let mut dof_reports = Vec::new();
    for j in 0..n {
        let (chsh, settings) = chsh_settings_in(state.dofs(), j);
        let est = simulate_settings(state, &settings, n_events, seed, stream::CHSH * 16 + j as u64)?;
        let records: Vec<CorrelationRecord> = est.into_iter().map(|e| e.per_dof[j].clone()).collect();
        dof_reports.push(violation_report(&records, &chsh, 2.0)?);
        dof_records.push(records);
    }
    let est = simulate_settings(state, &bell_settings(&beta_op), n_events, seed, stream::BETA)?;
    let beta_records: Vec<CorrelationRecord> = est.into_iter().map(|e| e.joint).collect();
    let beta = violation_report(&beta_records, &beta_op, (1u64 << n) as f64)?;
    Ok(Experiment { dof_records, dof_reports, beta_records, beta, generator_id: Some(GENERATOR_ID.to_string()) })
}

/// Exact counterpart of [`run_experiment`].
pub fn exact_experiment(state: &QuantumState) -> Result<Experiment> {
    let n = state.dofs().len();
    let beta_op = bell::build_beta_product(&state.dofs().iter().map(|&k| bell::build_chsh_for(k)).collect::<Vec<_>>())?;
    let mut dof_records = Vec::new();
    let mut dof_reports = Vec::new();
    for j in 0..n {
        let (chsh, settings) = chsh_settings_in(state.dofs(), j);
        let records = settings
            .iter()
            .map(|s| exact_estimate(state, s).map(|e| e.per_dof[j].clone()))
            .collect::<Result<Vec<_>>>()?;
        dof_reports.push(violation_report(&records, &chsh, 2.0)?);
        dof_records.push(records);
    }
    let beta_records = bell_settings(&beta_op)
        .iter()
        .map(|s| exact_estimate(state, s).map(|e| e.joint))
        .collect::<Result<Vec<_>>>()?;
    let beta = violation_report(&beta_records, &beta_op, (1u64 << n) as f64)?;
    Ok(Experiment { dof_records, dof_reports, beta_records, beta, generator_id: None })
}

/// One observable pair measured under four contexts of the other DOF.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssumptionRow {
    pub dof: DofKind,
    pub observable_u: ObservableId,
    pub observable_d: ObservableId,
    /// One record per context, labelled with the single-DOF setting.
    pub cells: Vec<CorrelationRecord>,
    pub contexts: Vec<(ObservableId, ObservableId)>,
    pub mean: f64,
    /// `max − min` of the cell correlations.
    pub spread: f64,
    /// Worst-context `max(P(match), P(anti-match))`.
    pub predictability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub rows: Vec<AssumptionRow>,
    pub generator_id: Option<String>,
}

impl AssumptionReport {
    pub fn max_spread(&self) -> f64 {
        self.rows.iter().map(|r| r.spread).fold(0.0, f64::max)
    }

    pub fn min_predictability(&self) -> f64 {
        self.rows.iter().map(|r| r.predictability).fold(1.0, f64::min)
    }
}

type ObsPair = (ObsName, ObsName);

/// Same-DOF observable pairs whose remote prediction is tested, and the
/// contexts of the other DOF they are measured in.
fn assumption_layout() -> [(DofKind, [ObsPair; 4], [ObsPair; 4]); 2] {
    use ObsName::*;
    let contexts = [(A, B), (A, LowerB), (LowerA, B), (LowerA, LowerB)];
    [
        (DofKind::Polarization, [(A, A), (LowerA, LowerA), (B, LowerB), (LowerB, B)], contexts),
        (DofKind::Path, [(A, A), (LowerA, LowerA), (B, B), (LowerB, LowerB)], contexts),
    ]
}

/// One observable pair under one context.
struct AssumptionCell {
    j: usize,
    dof: DofKind,
    observable_u: ObservableId,
    observable_d: ObservableId,
    context: (ObservableId, ObservableId),
    setting: JointSetting,
}

fn assumption_settings() -> Vec<AssumptionCell> {
    let mut out = Vec::new();
    for (target, rows, contexts) in assumption_layout() {
        let other = match target {
            DofKind::Polarization => DofKind::Path,
            DofKind::Path => DofKind::Polarization,
        };
        let j = if target == DofKind::Polarization { 0 } else { 1 };
        for (ru, rd) in rows {
            let (ou, od) = (ObservableId::new(ru, target), ObservableId::new(rd, target));
            for (cu, cd) in contexts {
                let (xu, xd) = (ObservableId::new(cu, other), ObservableId::new(cd, other));
                let setting = if j == 0 {
                    JointSetting { u: vec![ou, xu], d: vec![od, xd] }
                } else {
                    JointSetting { u: vec![xu, ou], d: vec![xd, od] }
                };
                out.push(AssumptionCell {
                    j,
                    dof: target,
                    observable_u: ou,
                    observable_d: od,
                    context: (xu, xd),
                    setting,
                });
            }
        }
    }
    out
}

fn assemble_assumptions(cells: Vec<(AssumptionCell, Estimate)>, generator_id: Option<String>) -> AssumptionReport {
    let rows = cells
        .chunks(4)
        .map(|chunk| {
            let head = &chunk[0].0;
            let records: Vec<CorrelationRecord> = chunk.iter().map(|(_, e)| e.per_dof[head.j].clone()).collect();
            let es: Vec<f64> = records.iter().map(|r| r.e).collect();
            let max = es.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = es.iter().copied().fold(f64::INFINITY, f64::min);
            let mean = es.iter().sum::<f64>() / es.len() as f64;
            let predictability = es.iter().map(|e| ((1.0 + e) / 2.0).max((1.0 - e) / 2.0)).fold(1.0, f64::min);
            AssumptionRow {
                dof: head.dof,
                observable_u: head.observable_u,
                observable_d: head.observable_d,
                cells: records,
                contexts: chunk.iter().map(|(c, _)| c.context).collect(),
                mean,
                spread: max - min,
                predictability,
            }
        })
        .collect();
    AssumptionReport { rows, generator_id }
}

fn check_assumption_state(state: &QuantumState) -> Result<()> {
    if state.dofs() != [DofKind::Polarization, DofKind::Path] {
        return Err(Error::InvalidArgument("context-independence tests need a polarization+path state".into()));
    }
    Ok(())
}

/// Sampled context-independence test: every same-DOF observable pair is
/// measured under all four settings of the other DOF.
pub fn assumption_test(state: &QuantumState, n_events: u64, seed: u64) -> Result<AssumptionReport> {
    check_assumption_state(state)?;
    let layout = assumption_settings();
    let settings: Vec<JointSetting> = layout.iter().map(|c| c.setting.clone()).collect();
    let est = simulate_settings(state, &settings, n_events, seed, stream::ASSUMPTIONS)?;
    let cells = layout.into_iter().zip(est).collect();
    Ok(assemble_assumptions(cells, Some(GENERATOR_ID.to_string())))
}

/// Exact counterpart of [`assumption_test`] from Born distributions.
pub fn assumption_exact(state: &QuantumState) -> Result<AssumptionReport> {
    check_assumption_state(state)?;
    let cells = assumption_settings()
        .into_iter()
        .map(|c| exact_estimate(state, &c.setting).map(|e| (c, e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_assumptions(cells, None))
}

/// Published single-number results of the reference experiment.
pub mod reference {
    use serde::Serialize;

    use super::ViolationReport;

    #[derive(Clone, Copy, Debug, PartialEq, Serialize)]
    pub struct PublishedViolation {
        pub label: &'static str,
        pub beta: f64,
        pub std_err: f64,
        pub bound: f64,
        pub stated_sigmas: f64,
    }

    pub const BETA_PI: PublishedViolation =
        PublishedViolation { label: "beta_pi", beta: 2.5762, std_err: 0.0068, bound: 2.0, stated_sigmas: 85.0 };
    pub const BETA_K: PublishedViolation =
        PublishedViolation { label: "beta_k", beta: 2.5658, std_err: 0.0067, bound: 2.0, stated_sigmas: 84.0 };
    pub const BETA: PublishedViolation =
        PublishedViolation { label: "beta", beta: 7.019, std_err: 0.015, bound: 4.0, stated_sigmas: 196.0 };

    pub const ALL: [PublishedViolation; 3] = [BETA_PI, BETA_K, BETA];

    /// Stated and recomputed significance differing by more than this many
    /// standard deviations are flagged.
    pub const SIGMA_FLAG_THRESHOLD: f64 = 1.0;

    /// Visibility-equivalent of a single-DOF CHSH result: `|β|/(2√2)`.
    pub fn visibility(beta: f64) -> f64 {
        beta / (2.0 * std::f64::consts::SQRT_2)
    }

    #[derive(Clone, Copy, Debug, PartialEq, Serialize)]
    pub struct SignificanceCheck {
        pub label: &'static str,
        pub report: ViolationReport,
        pub stated_sigmas: f64,
        pub discrepancy: f64,
        pub flagged: bool,
    }

    pub fn check(p: &PublishedViolation) -> SignificanceCheck {
        let report = ViolationReport::from_summary(p.beta, p.std_err, p.bound);
        let discrepancy = report.sigmas - p.stated_sigmas;
        SignificanceCheck {
            label: p.label,
            report,
            stated_sigmas: p.stated_sigmas,
            discrepancy,
            flagged: discrepancy.abs() > SIGMA_FLAG_THRESHOLD,
        }
    }

    pub fn check_all() -> Vec<SignificanceCheck> {
        ALL.iter().map(check).collect()
    }
}
