use std::f64::consts::{PI, SQRT_2};

use hyperbell::bell;
use hyperbell::model::{self, DofKind, NoiseModel, ObsName, ObservableId};
use hyperbell::simlab::{self, reference, JointSetting, OutcomeDistribution};

const Z: f64 = 5.0;

fn uniform_setting() -> JointSetting {
    // A_π with a_π on a maximally mixed pair gives uniform outcomes
    JointSetting::new(
        vec![ObservableId::pol(ObsName::A), ObservableId::path(ObsName::A)],
        vec![ObservableId::pol(ObsName::LowerA), ObservableId::path(ObsName::LowerA)],
    )
    .unwrap()
}

#[test]
fn uniform_counts_within_five_sigma() {
    let n = 1_000_000u64;
    let dist = OutcomeDistribution { setting: uniform_setting(), probs: vec![1.0 / 16.0; 16] };
    let counts = simlab::sample(&dist, n, 2024).unwrap();
    let mean = n as f64 / 16.0;
    let sigma = (n as f64 * (1.0 / 16.0) * (15.0 / 16.0)).sqrt();
    for (i, &k) in counts.counts.iter().enumerate() {
        assert!((k as f64 - mean).abs() < Z * sigma, "cell {i}: {k} vs {mean}");
    }
    assert_eq!(counts.total(), n);
}

#[test]
fn maximally_mixed_state_gives_uniform_distribution() {
    let st = model::QuantumState::maximally_mixed(vec![DofKind::Polarization, DofKind::Path]).unwrap();
    let dist = simlab::born_distribution(&st, &uniform_setting()).unwrap();
    for p in &dist.probs {
        assert!((p - 1.0 / 16.0).abs() < 1e-12);
    }
}

#[test]
fn skewed_counts_within_five_sigma() {
    let n = 1_000_000u64;
    let probs: Vec<f64> = (1..=16).map(|i| i as f64 / 136.0).collect();
    let dist = OutcomeDistribution { setting: uniform_setting(), probs: probs.clone() };
    let counts = simlab::sample(&dist, n, 99).unwrap();
    for (p, &k) in probs.iter().zip(&counts.counts) {
        let mean = n as f64 * p;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((k as f64 - mean).abs() < Z * sigma);
    }
}

#[test]
fn estimator_consistent_at_one_million_events() {
    let st = model::apply_noise(&model::hyper_state(PI, 0.0).unwrap(), &NoiseModel::white(0.9, 0.8).unwrap()).unwrap();
    let op = bell::build_beta(2).unwrap();
    let settings = simlab::bell_settings(&op);
    let sampled = simlab::simulate_settings(&st, &settings, 1_000_000, 5, 77).unwrap();
    for (s, est) in settings.iter().zip(&sampled) {
        let exact = simlab::exact_estimate(&st, s).unwrap();
        let e = &est.joint;
        assert!((e.e - exact.joint.e).abs() < Z * e.std_err, "{}|{}", s.label_u(), s.label_d());
        for (a, b) in est.per_dof.iter().zip(&exact.per_dof) {
            assert!((a.e - b.e).abs() < Z * a.std_err);
        }
    }
}

#[test]
fn std_err_formula() {
    let r = simlab::CorrelationRecord::from_parity_sum(uniform_setting(), 600, 1000);
    assert_eq!(r.e, 0.6);
    assert!((r.std_err - (0.64f64 / 1000.0).sqrt()).abs() < 1e-15);
}

#[test]
fn experiment_reproducible_and_seed_sensitive() {
    let st = model::apply_noise(&model::hyper_state(PI, 0.0).unwrap(), &NoiseModel::white(0.9, 0.9).unwrap()).unwrap();
    let a = simlab::run_experiment(&st, 10_000, 3).unwrap();
    let b = simlab::run_experiment(&st, 10_000, 3).unwrap();
    let c = simlab::run_experiment(&st, 10_000, 4).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.beta, c.beta);
    assert_eq!(a.generator_id.as_deref(), Some(simlab::GENERATOR_ID));
}

#[test]
fn simulated_ideal_experiment_near_eight() {
    let st = model::hyper_state(PI, 0.0).unwrap();
    let exp = simlab::run_experiment(&st, 1_000_000, 7).unwrap();
    assert!((exp.beta.beta_estimate.abs() - 8.0).abs() < Z * exp.beta.beta_std_err.max(1e-3));
    for rep in &exp.dof_reports {
        assert!((rep.beta_estimate.abs() - 2.0 * SQRT_2).abs() < Z * rep.beta_std_err);
    }
}

#[test]
fn published_significance_figures() {
    let checks = reference::check_all();
    let got: Vec<(String, f64, bool)> =
        checks.iter().map(|c| (c.label.to_string(), (c.report.sigmas * 10.0).round() / 10.0, c.flagged)).collect();
    assert_eq!(
        got,
        vec![
            ("beta_pi".to_string(), 84.7, false),
            ("beta_k".to_string(), 84.4, false),
            ("beta".to_string(), 201.3, true),
        ]
    );
    // (7.019 − 4)/0.015
    assert!((checks[2].report.sigmas - 3.019 / 0.015).abs() < 1e-9);
}

#[test]
fn assumption_spread_exact_and_sampled() {
    let states = [
        model::hyper_state(PI, 0.0).unwrap(),
        model::apply_noise(&model::hyper_state(PI, 0.0).unwrap(), &NoiseModel::white(0.9, 0.9).unwrap()).unwrap(),
    ];
    for st in &states {
        let exact = simlab::assumption_exact(st).unwrap();
        assert_eq!(exact.rows.len(), 8);
        assert!(exact.max_spread() <= 1e-12);
        let sampled = simlab::assumption_test(st, 100_000, 1).unwrap();
        assert!(sampled.max_spread() < 0.02);
    }
}

#[test]
fn ideal_assumption_rows_have_table_signs() {
    let exact = simlab::assumption_exact(&model::hyper_state(PI, 0.0).unwrap()).unwrap();
    let means: Vec<(String, f64)> =
        exact.rows.iter().map(|r| (format!("{}{}", r.observable_u, r.observable_d), r.mean)).collect();
    // |HH⟩ − |VV⟩: ⟨σzσz⟩ = +1, ⟨σxσx⟩ = −1; |lr⟩ + |rl⟩: ⟨σxσx⟩ = ⟨σyσy⟩ = +1
    let expected = [
        ("A_piA_pi", 1.0),
        ("a_pia_pi", -1.0),
        ("B_pib_pi", -1.0),
        ("b_piB_pi", -1.0),
        ("A_kA_k", 1.0),
        ("a_ka_k", 1.0),
        ("B_kB_k", 1.0),
        ("b_kb_k", 1.0),
    ];
    for ((name, mean), (en, ev)) in means.iter().zip(expected) {
        assert_eq!(name, en);
        assert!((mean - ev).abs() < 1e-12, "{name}");
    }
    assert!((exact.min_predictability() - 1.0).abs() < 1e-12);
}
