//! Classical bounds by exhaustive enumeration of deterministic local
//! strategies.
//!
//! Two strategy classes are supported:
//!
//! * **Factorizable**: each side assigns one ±1 value to every single
//!   observable it can measure (2N observables per side). The outcome of a
//!   local product observable is the product of its factors' values, so a
//!   given value is the same in every setting that contains it.
//! * **Context-unrestricted**: each side assigns one ±1 value to every local
//!   context (the 2^N product observables it can measure), with no
//!   consistency between contexts that share a factor. Assigning the
//!   individual factor outcomes per context instead would give the same
//!   bound, because a Bell operator only sees the per-context products.
//!
//! Side strategies are bitmasks; a set bit means −1. Factorizable bit
//! `2·j + c` holds the value of the observable with choice `c` (0 capital,
//! 1 lower-case) on DOF `j`. Context-unrestricted bit `k` holds the value of
//! local context `k` as numbered by [`BellTerm::context_index`].
//!
//! The search maximizes the signed value. Negating every context value of
//! one side negates the Bell value; doing it on both sides leaves it
//! unchanged. The negation is a XOR with a mask containing the most
//! significant side bit (the last DOF's two bits for factorizable strategies,
//! all bits for unrestricted ones), so it maps any u with that bit set to a
//! smaller u. Pinning the bit to 0 therefore keeps the smallest `(u, d)`
//! maximizer, and results are identical with and without pinning and
//! independent of thread count.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bell::{self, BellOperator, BellTerm};
use crate::error::{Error, Result};
use crate::model::{DofKind, ObsName, ObservableId, Photon};

/// Default ceiling on the total number of strategy pairs.
pub const DEFAULT_GUARD: u128 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyClass {
    Factorizable,
    ContextUnrestricted,
}

impl StrategyClass {
    /// Number of ±1 values one side assigns for `n` DOFs.
    pub fn bits_per_side(self, n: usize) -> u32 {
        match self {
            StrategyClass::Factorizable => 2 * n as u32,
            StrategyClass::ContextUnrestricted => 1u32 << n,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyClass::Factorizable => "factorizable",
            StrategyClass::ContextUnrestricted => "context-unrestricted",
        }
    }
}

impl fmt::Display for StrategyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LhvStrategy {
    pub class: StrategyClass,
    pub dofs: Vec<DofKind>,
    pub u: u64,
    pub d: u64,
}

impl LhvStrategy {
    pub fn new(class: StrategyClass, dofs: Vec<DofKind>, u: u64, d: u64) -> Result<Self> {
        crate::model::check_dof_count(dofs.len())?;
        let bits = class.bits_per_side(dofs.len());
        if (u | d) >> bits != 0 {
            return Err(Error::InvalidArgument(format!("strategy bits exceed the {bits}-bit side assignment")));
        }
        Ok(Self { class, dofs, u, d })
    }

    fn side_bits(&self, photon: Photon) -> u64 {
        match photon {
            Photon::U => self.u,
            Photon::D => self.d,
        }
    }

    /// Value assigned to a local context on one side.
    pub fn context_value(&self, photon: Photon, context: usize) -> i64 {
        side_context_value(self.class, self.dofs.len(), self.side_bits(photon), context)
    }

    /// Human-readable assignment: one entry per single observable
    /// (factorizable) or per local context (unrestricted).
    pub fn assignments(&self, photon: Photon) -> Vec<(Vec<ObservableId>, i8)> {
        let n = self.dofs.len();
        let bits = self.side_bits(photon);
        let val = |b: u64, i: u32| if (b >> i) & 1 == 0 { 1 } else { -1 };
        match self.class {
            StrategyClass::Factorizable => self
                .dofs
                .iter()
                .enumerate()
                .flat_map(|(j, &k)| {
                    (0..2).map(move |ch| {
                        let id = ObservableId::new(ObsName::for_side(photon, ch), k);
                        (vec![id], val(bits, (2 * j + ch) as u32))
                    })
                })
                .collect(),
            StrategyClass::ContextUnrestricted => (0..1usize << n)
                .map(|ctx| {
                    let obs = self
                        .dofs
                        .iter()
                        .enumerate()
                        .map(|(j, &k)| ObservableId::new(ObsName::for_side(photon, (ctx >> (n - 1 - j)) & 1), k))
                        .collect();
                    (obs, val(bits, ctx as u32))
                })
                .collect(),
        }
    }

    pub fn describe(&self, photon: Photon) -> String {
        self.assignments(photon)
            .iter()
            .map(|(obs, v)| {
                let label: Vec<String> = obs.iter().map(|o| o.to_string()).collect();
                format!("{}={:+}", label.join("*"), v)
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn side_context_value(class: StrategyClass, n: usize, bits: u64, context: usize) -> i64 {
    match class {
        StrategyClass::Factorizable => {
            let mut v = 1;
            for j in 0..n {
                let ch = (context >> (n - 1 - j)) & 1;
                if (bits >> (2 * j + ch)) & 1 == 1 {
                    v = -v;
                }
            }
            v
        }
        StrategyClass::ContextUnrestricted => {
            if (bits >> context) & 1 == 0 {
                1
            } else {
                -1
            }
        }
    }
}

/// Classical value `Σ sign · u(ctx_u) · d(ctx_d)` of a deterministic strategy.
pub fn evaluate_strategy(bell: &BellOperator, s: &LhvStrategy) -> Result<i64> {
    evaluate_terms(bell.terms(), bell.dofs(), s)
}

pub fn evaluate_terms(terms: &[BellTerm], dofs: &[DofKind], s: &LhvStrategy) -> Result<i64> {
    if s.dofs != dofs {
        return Err(Error::InvalidArgument(format!(
            "strategy assigns values for DOFs {:?}, operator needs {:?}",
            s.dofs, dofs
        )));
    }
    Ok(terms
        .iter()
        .map(|t| t.sign as i64 * s.context_value(Photon::U, t.u_context()) * s.context_value(Photon::D, t.d_context()))
        .sum())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub bound: i64,
    pub witness: LhvStrategy,
    pub strategies_evaluated: u128,
    pub class: StrategyClass,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub guard: u128,
    pub pin_sign_symmetry: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { guard: DEFAULT_GUARD, pin_sign_symmetry: true }
    }
}

/// Total number of (u, d) strategy pairs in a class.
pub fn strategy_count(class: StrategyClass, n: usize) -> u128 {
    let bits = 2 * class.bits_per_side(n);
    if bits >= 128 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

pub fn max_bound(bell: &BellOperator, class: StrategyClass) -> Result<BoundResult> {
    max_bound_with(bell, class, SearchOptions::default())
}

pub fn max_bound_with(bell: &BellOperator, class: StrategyClass, opts: SearchOptions) -> Result<BoundResult> {
    let n = bell.dof_count();
    let count = strategy_count(class, n);
    if count > opts.guard {
        return Err(Error::GuardExceeded { count, limit: opts.guard });
    }
    let bits = class.bits_per_side(n);
    let contexts = 1usize << n;

    // signs[cu * contexts + cd]
    let mut signs = vec![0i64; contexts * contexts];
    for t in bell.terms() {
        signs[t.u_context() * contexts + t.d_context()] += t.sign as i64;
    }

    let side_vectors: Vec<Vec<i64>> =
        (0..1u64 << bits).map(|b| (0..contexts).map(|ctx| side_context_value(class, n, b, ctx)).collect()).collect();

    let u_range = if opts.pin_sign_symmetry { 1u64 << (bits - 1) } else { 1u64 << bits };

    // (value, u, d); larger value wins, then smaller (u, d)
    let better = |a: (i64, u64, u64), b: (i64, u64, u64)| {
        if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
            b
        } else {
            a
        }
    };

    let best = (0..u_range)
        .into_par_iter()
        .map(|u| {
            let cu = &side_vectors[u as usize];
            let mut w = vec![0i64; contexts];
            for (i, &x) in cu.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (k, wk) in w.iter_mut().enumerate() {
                    *wk += x * signs[i * contexts + k];
                }
            }
            let mut local = (i64::MIN, u, 0u64);
            for (d, cd) in side_vectors.iter().enumerate() {
                let v: i64 = w.iter().zip(cd).map(|(a, b)| a * b).sum();
                if v > local.0 {
                    local = (v, u, d as u64);
                }
            }
            local
        })
        .reduce(|| (i64::MIN, u64::MAX, u64::MAX), better);

    let witness = LhvStrategy::new(class, bell.dofs().to_vec(), best.1, best.2)?;
    let evaluated = u_range as u128 * side_vectors.len() as u128;
    Ok(BoundResult { bound: best.0, witness, strategies_evaluated: evaluated, class })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub n_dof: usize,
    pub bound: i64,
    pub product_bound: i64,
    pub strategies_evaluated: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaRecord {
    /// Distinct classical values reached by factorizable strategies on the
    /// polarization and path CHSH operators.
    pub chsh_values: Vec<(DofKind, Vec<i64>)>,
    /// True when every factorizable strategy gives exactly ±2 on both.
    pub chsh_values_are_pm2: bool,
    pub rows: Vec<LemmaRow>,
    /// True when each row's enumerated bound equals `2^N`.
    pub product_bound_holds: bool,
}

/// Enumerates every factorizable strategy on both CHSH operators, then the
/// product bound for N = 1..=3.
pub fn factorizable_chsh_lemma_check() -> Result<LemmaRecord> {
    let mut chsh_values = Vec::new();
    let mut all_pm2 = true;
    for kind in [DofKind::Polarization, DofKind::Path] {
        let op = bell::build_chsh_for(kind);
        let mut seen = Vec::new();
        for u in 0..4 {
            for d in 0..4 {
                let s = LhvStrategy::new(StrategyClass::Factorizable, vec![kind], u, d)?;
                let v = evaluate_strategy(&op, &s)?;
                all_pm2 &= v.abs() == 2;
                if !seen.contains(&v) {
                    seen.push(v);
                }
            }
        }
        seen.sort_unstable();
        chsh_values.push((kind, seen));
    }
    let mut rows = Vec::new();
    for n in 1..=3 {
        let r = max_bound(&bell::build_beta(n)?, StrategyClass::Factorizable)?;
        rows.push(LemmaRow {
            n_dof: n,
            bound: r.bound,
            product_bound: 1 << n,
            strategies_evaluated: r.strategies_evaluated,
        });
    }
    let product_bound_holds = rows.iter().all(|r| r.bound == r.product_bound);
    Ok(LemmaRecord { chsh_values, chsh_values_are_pm2: all_pm2, rows, product_bound_holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{build_beta, build_beta_k, build_beta_pi};

    #[test]
    fn all_plus_strategies() {
        let pi = build_beta_pi();
        let s = LhvStrategy::new(StrategyClass::Factorizable, vec![DofKind::Polarization], 0, 0).unwrap();
        assert_eq!(evaluate_strategy(&pi, &s).unwrap(), 2);

        let beta = build_beta(2).unwrap();
        let s = LhvStrategy::new(StrategyClass::Factorizable, beta.dofs().to_vec(), 0, 0).unwrap();
        let sign_sum: i64 = beta.terms().iter().map(|t| t.sign as i64).sum();
        // (−1+1+1+1)·(1−1+1+1)
        assert_eq!(sign_sum, 4);
        assert_eq!(evaluate_strategy(&beta, &s).unwrap(), sign_sum);
    }

    #[test]
    fn chsh_bounds() {
        for op in [build_beta_pi(), build_beta_k()] {
            let r = max_bound(&op, StrategyClass::Factorizable).unwrap();
            assert_eq!(r.bound, 2);
            assert_eq!(evaluate_strategy(&op, &r.witness).unwrap(), 2);
        }
    }

    #[test]
    fn mismatched_strategy_rejected() {
        let beta = build_beta(2).unwrap();
        let s = LhvStrategy::new(StrategyClass::Factorizable, vec![DofKind::Polarization], 0, 0).unwrap();
        assert!(evaluate_strategy(&beta, &s).is_err());
        assert!(LhvStrategy::new(StrategyClass::Factorizable, vec![DofKind::Polarization], 4, 0).is_err());
    }

    #[test]
    fn guard_refuses() {
        let beta = build_beta(2).unwrap();
        let opts = SearchOptions { guard: 100, pin_sign_symmetry: true };
        match max_bound_with(&beta, StrategyClass::Factorizable, opts) {
            Err(Error::GuardExceeded { count, limit }) => {
                assert_eq!(count, 256);
                assert_eq!(limit, 100);
            }
            other => panic!("expected guard refusal, got {other:?}"),
        }
    }

    #[test]
    fn lemma() {
        let rec = factorizable_chsh_lemma_check().unwrap();
        assert!(rec.chsh_values_are_pm2);
        assert!(rec.product_bound_holds);
        assert_eq!(rec.chsh_values[0].1, vec![-2, 2]);
        assert_eq!(rec.rows.iter().map(|r| r.bound).collect::<Vec<_>>(), vec![2, 4, 8]);
    }

    #[test]
    fn assignments_cover_domain() {
        let s =
            LhvStrategy::new(StrategyClass::ContextUnrestricted, vec![DofKind::Polarization, DofKind::Path], 0b1010, 0)
                .unwrap();
        let a = s.assignments(Photon::U);
        assert_eq!(a.len(), 4);
        assert_eq!(a[1].1, -1);
        assert_eq!(a[1].0[1].name, ObsName::LowerA);
        let f = LhvStrategy::new(StrategyClass::Factorizable, vec![DofKind::Polarization], 0b01, 0b10).unwrap();
        assert_eq!(f.describe(Photon::U), "A_pi=-1 a_pi=+1");
        assert_eq!(f.describe(Photon::D), "B_pi=+1 b_pi=-1");
    }
}
