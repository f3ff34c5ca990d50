//! Batch front end: configuration, the five studies and report emission.
//!
//! Configuration layers, lowest to highest priority: built-in defaults, a
//! flat TOML file (`--config`), command-line flags. Every value is validated
//! before any computation starts.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::bell::{self, ClassicalBoundSource};
use crate::error::Error;
use crate::lhv::{self, StrategyClass};
use crate::model::{self, NoiseKind, NoiseModel, Photon};
use crate::simlab::{self, reference, AssumptionReport, CorrelationRecord, Experiment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Study {
    Ideal,
    Bounds,
    Simulate,
    Scaling,
    Assumptions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

/// `--class` values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ClassArg {
    Factorizable,
    Unrestricted,
}

impl From<ClassArg> for StrategyClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Factorizable => StrategyClass::Factorizable,
            ClassArg::Unrestricted => StrategyClass::ContextUnrestricted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum NoiseArg {
    None,
    White,
    Dephasing,
}

impl From<NoiseArg> for NoiseKind {
    fn from(n: NoiseArg) -> Self {
        match n {
            NoiseArg::None => NoiseKind::None,
            NoiseArg::White => NoiseKind::White,
            NoiseArg::Dephasing => NoiseKind::Dephasing,
        }
    }
}

pub const DEFAULT_VISIBILITY: f64 = 0.9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub study: Study,
    pub theta: f64,
    pub phi: f64,
    pub noise: NoiseModel,
    pub events: u64,
    pub seed: u64,
    pub dof: usize,
    /// Restricts the bounds study to one class; both when absent.
    pub class: Option<StrategyClass>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    /// Largest strategy count the bounds study will enumerate.
    pub guard: u64,
}

/// A partial configuration from one source.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigLayer {
    pub study: Option<Study>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub noise: Option<NoiseKind>,
    pub v_pi: Option<f64>,
    pub v_k: Option<f64>,
    pub events: Option<u64>,
    pub seed: Option<u64>,
    pub dof: Option<usize>,
    pub class: Option<StrategyClass>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub guard: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(key: &str, message: impl Into<String>) -> Self {
        Self { key: key.to_string(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config key `{}`: {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn get_float(key: &str, v: &toml::Value) -> Result<f64, ConfigError> {
    match v {
        toml::Value::Float(x) => Ok(*x),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => Err(ConfigError::new(key, "expected a number")),
    }
}

fn get_uint(key: &str, v: &toml::Value) -> Result<u64, ConfigError> {
    match v {
        toml::Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => Err(ConfigError::new(key, "expected a non-negative integer")),
    }
}

fn get_str<'a>(key: &str, v: &'a toml::Value) -> Result<&'a str, ConfigError> {
    v.as_str().ok_or_else(|| ConfigError::new(key, "expected a string"))
}

fn parse_enum<T: clap::ValueEnum>(key: &str, s: &str) -> Result<T, ConfigError> {
    T::from_str(s, false).map_err(|_| {
        let options: Vec<String> = T::value_variants()
            .iter()
            .filter_map(|v| v.to_possible_value().map(|p| p.get_name().to_string()))
            .collect();
        ConfigError::new(key, format!("`{s}` is not one of {}", options.join("|")))
    })
}

impl ConfigLayer {
    /// Parses a flat TOML file. Keys: study, theta, phi, noise, v, v_pi,
    /// v_k, events, seed, dof, class, format, out, guard. `v` sets both
    /// visibilities.
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let table: toml::Table =
            text.parse().map_err(|e: toml::de::Error| ConfigError::new("<file>", e.message().to_string()))?;
        let mut layer = ConfigLayer::default();
        for (key, value) in &table {
            let k = key.as_str();
            match k {
                "study" => layer.study = Some(parse_enum(k, get_str(k, value)?)?),
                "theta" => layer.theta = Some(get_float(k, value)?),
                "phi" => layer.phi = Some(get_float(k, value)?),
                "noise" => layer.noise = Some(parse_enum::<NoiseArg>(k, get_str(k, value)?)?.into()),
                "v" => {
                    let v = get_float(k, value)?;
                    layer.v_pi = Some(v);
                    layer.v_k = Some(v);
                }
                "v_pi" => layer.v_pi = Some(get_float(k, value)?),
                "v_k" => layer.v_k = Some(get_float(k, value)?),
                "events" => layer.events = Some(get_uint(k, value)?),
                "seed" => layer.seed = Some(get_uint(k, value)?),
                "dof" => layer.dof = Some(get_uint(k, value)? as usize),
                "class" => layer.class = Some(parse_enum::<ClassArg>(k, get_str(k, value)?)?.into()),
                "format" => layer.format = Some(parse_enum(k, get_str(k, value)?)?),
                "out" => layer.out = Some(PathBuf::from(get_str(k, value)?)),
                "guard" => layer.guard = Some(get_uint(k, value)?),
                _ => return Err(ConfigError::new(k, "unknown key")),
            }
        }
        Ok(layer)
    }

    /// Fields set in `top` win over fields set in `self`.
    pub fn overlay(self, top: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            study: top.study.or(self.study),
            theta: top.theta.or(self.theta),
            phi: top.phi.or(self.phi),
            noise: top.noise.or(self.noise),
            v_pi: top.v_pi.or(self.v_pi),
            v_k: top.v_k.or(self.v_k),
            events: top.events.or(self.events),
            seed: top.seed.or(self.seed),
            dof: top.dof.or(self.dof),
            class: top.class.or(self.class),
            format: top.format.or(self.format),
            out: top.out.or(self.out),
            guard: top.guard.or(self.guard),
        }
    }

    /// Fills defaults and validates.
    pub fn resolve(self) -> Result<RunConfig, ConfigError> {
        let study = self.study.ok_or_else(|| ConfigError::new("study", "missing"))?;
        let theta = self.theta.unwrap_or(PI);
        let phi = self.phi.unwrap_or(0.0);
        for (k, v) in [("theta", theta), ("phi", phi)] {
            if !v.is_finite() {
                return Err(ConfigError::new(k, "must be finite"));
            }
        }
        let kind = self.noise.unwrap_or(NoiseKind::White);
        let default_v = if kind == NoiseKind::None { 1.0 } else { DEFAULT_VISIBILITY };
        let v_pi = self.v_pi.unwrap_or(default_v);
        let v_k = self.v_k.unwrap_or(default_v);
        for (k, v) in [("v_pi", v_pi), ("v_k", v_k)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ConfigError::new(k, format!("{v} is outside [0, 1]")));
            }
            if kind == NoiseKind::None && v != 1.0 {
                return Err(ConfigError::new(k, "noise `none` requires visibility 1"));
            }
        }
        let noise = NoiseModel::new(kind, v_pi, v_k).map_err(|e| ConfigError::new("noise", e.to_string()))?;

        let events = self.events.unwrap_or(simlab::DEFAULT_EVENTS);
        if events < 2 {
            return Err(ConfigError::new("events", "at least 2 events per setting are required"));
        }
        let dof = self.dof.unwrap_or(2);
        if !(1..=model::MAX_DOFS).contains(&dof) {
            return Err(ConfigError::new("dof", format!("must be in 1..={}", model::MAX_DOFS)));
        }
        if matches!(study, Study::Simulate | Study::Assumptions) && dof != 2 {
            return Err(ConfigError::new(
                "dof",
                "the simulate and assumptions studies run the polarization+path experiment (dof = 2)",
            ));
        }
        Ok(RunConfig {
            study,
            theta,
            phi,
            noise,
            events,
            seed: self.seed.unwrap_or(0),
            dof,
            class: self.class,
            format: self.format.unwrap_or_default(),
            out: self.out,
            guard: self.guard.unwrap_or(lhv::DEFAULT_GUARD as u64),
        })
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Guard(Error),
    Numerical(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Guard(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "configuration error: {e}"),
            CliError::Guard(e) => write!(f, "{e}"),
            CliError::Numerical(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "output error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::GuardExceeded { .. } => CliError::Guard(e),
            other => CliError::Numerical(other),
        }
    }
}

/// One output row. Correlation rows carry the csv schema
/// `setting_u,setting_d,E,std_err,n_events`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Row {
    Correlation {
        table: String,
        setting_u: String,
        setting_d: String,
        #[serde(rename = "E")]
        e: f64,
        std_err: f64,
        n_events: u64,
    },
    Value {
        name: String,
        signed: f64,
        magnitude: f64,
        spectral_radius: f64,
    },
    Violation {
        name: String,
        beta: f64,
        std_err: f64,
        bound: f64,
        sigmas: Option<f64>,
    },
    Bound {
        class: StrategyClass,
        n_dof: usize,
        bound: i64,
        strategies_evaluated: u64,
        witness_u: String,
        witness_d: String,
        witness_value: i64,
    },
    Scaling {
        n_dof: usize,
        quantum_value: f64,
        classical_bound: f64,
        ratio: f64,
    },
    Assumption {
        table: String,
        observable_u: String,
        observable_d: String,
        contexts: Vec<String>,
        values: Vec<f64>,
        std_errs: Vec<f64>,
        mean: f64,
        spread: f64,
        predictability: f64,
        exact_spread: f64,
    },
    Published {
        name: String,
        beta: f64,
        std_err: f64,
        bound: f64,
        sigmas: f64,
        stated_sigmas: f64,
        flagged: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub study: Study,
    pub config: RunConfig,
    pub rows: Vec<Row>,
    pub beta: Option<f64>,
    pub std_err: Option<f64>,
    pub bound: Option<f64>,
    pub sigmas: Option<f64>,
    pub generator_id: Option<String>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn correlation_row(table: &str, r: &CorrelationRecord) -> Row {
    Row::Correlation {
        table: table.to_string(),
        setting_u: r.label.label_u(),
        setting_d: r.label.label_d(),
        e: r.e,
        std_err: r.std_err,
        n_events: r.n_events,
    }
}

fn dof_table(kind: model::DofKind) -> String {
    format!("chsh_{}", kind.symbol())
}

fn experiment_rows(state_dofs: &[model::DofKind], exp: &Experiment, rows: &mut Vec<Row>) {
    for (j, kind) in state_dofs.iter().enumerate() {
        let rep = exp.dof_reports[j];
        rows.push(Row::Violation {
            name: format!("beta_{}", kind.symbol()),
            beta: rep.beta_estimate,
            std_err: rep.beta_std_err,
            bound: rep.bound,
            sigmas: finite(rep.sigmas),
        });
        rows.extend(exp.dof_records[j].iter().map(|r| correlation_row(&dof_table(*kind), r)));
    }
    rows.extend(exp.beta_records.iter().map(|r| correlation_row("beta", r)));
}

fn assumption_rows(sampled: &AssumptionReport, exact: &AssumptionReport, rows: &mut Vec<Row>) {
    for (row, ex) in sampled.rows.iter().zip(&exact.rows) {
        rows.push(Row::Assumption {
            table: format!("assumptions_{}", row.dof.symbol()),
            observable_u: row.observable_u.to_string(),
            observable_d: row.observable_d.to_string(),
            contexts: row.contexts.iter().map(|(a, b)| format!("{a}*{b}")).collect(),
            values: row.cells.iter().map(|c| c.e).collect(),
            std_errs: row.cells.iter().map(|c| c.std_err).collect(),
            mean: row.mean,
            spread: row.spread,
            predictability: row.predictability,
            exact_spread: ex.spread,
        });
    }
}

/// Runs one study. The returned report holds every number that is emitted.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let mut rows = Vec::new();
    let mut report = Report {
        study: config.study,
        config: config.clone(),
        rows: Vec::new(),
        beta: None,
        std_err: None,
        bound: None,
        sigmas: None,
        generator_id: None,
    };
    match config.study {
        Study::Ideal => {
            let state = model::phased_state(config.dof, config.theta, config.phi)?;
            let exp = simlab::exact_experiment(&state)?;
            for (j, &kind) in state.dofs().iter().enumerate() {
                let rep = exp.dof_reports[j];
                rows.push(Row::Value {
                    name: format!("beta_{}", kind.symbol()),
                    signed: rep.beta_estimate,
                    magnitude: rep.beta_estimate.abs(),
                    spectral_radius: bell::build_chsh_for(kind).spectral_radius()?,
                });
            }
            let beta_op = bell::build_beta(config.dof)?;
            let q = bell::quantum_value(&beta_op, &state)?;
            rows.push(Row::Value {
                name: "beta".into(),
                signed: q.signed,
                magnitude: q.magnitude,
                spectral_radius: beta_op.spectral_radius()?,
            });
            rows.extend(exp.beta_records.iter().map(|r| correlation_row("beta", r)));
            report.beta = Some(q.signed);
            report.std_err = Some(0.0);
            report.bound = Some(exp.beta.bound);
            report.sigmas = finite(exp.beta.sigmas);
        }
        Study::Bounds => {
            let beta_op = bell::build_beta(config.dof)?;
            let classes = match config.class {
                Some(c) => vec![c],
                None => vec![StrategyClass::Factorizable, StrategyClass::ContextUnrestricted],
            };
            for class in classes {
                let opts = lhv::SearchOptions { guard: config.guard as u128, ..Default::default() };
                let r = lhv::max_bound_with(&beta_op, class, opts)?;
                let replay = lhv::evaluate_strategy(&beta_op, &r.witness)?;
                rows.push(Row::Bound {
                    class,
                    n_dof: config.dof,
                    bound: r.bound,
                    strategies_evaluated: r.strategies_evaluated as u64,
                    witness_u: r.witness.describe(Photon::U),
                    witness_d: r.witness.describe(Photon::D),
                    witness_value: replay,
                });
                if class == StrategyClass::Factorizable {
                    report.bound = Some(r.bound as f64);
                }
            }
        }
        Study::Scaling => {
            for n in 1..=config.dof {
                let s = bell::scaling_report(n, ClassicalBoundSource::LhvBruteforce)?;
                rows.push(Row::Scaling {
                    n_dof: s.n_dof,
                    quantum_value: s.quantum_value,
                    classical_bound: s.classical_bound,
                    ratio: s.ratio,
                });
            }
        }
        Study::Simulate => {
            let pure = model::hyper_state(config.theta, config.phi)?;
            let state = model::apply_noise(&pure, &config.noise)?;
            let sampled = simlab::assumption_test(&state, config.events, config.seed)?;
            let exact = simlab::assumption_exact(&state)?;
            assumption_rows(&sampled, &exact, &mut rows);
            let exp = simlab::run_experiment(&state, config.events, config.seed)?;
            experiment_rows(state.dofs(), &exp, &mut rows);
            for chk in reference::check_all() {
                rows.push(Row::Published {
                    name: chk.label.to_string(),
                    beta: chk.report.beta_estimate,
                    std_err: chk.report.beta_std_err,
                    bound: chk.report.bound,
                    sigmas: chk.report.sigmas,
                    stated_sigmas: chk.stated_sigmas,
                    flagged: chk.flagged,
                });
            }
            report.beta = Some(exp.beta.beta_estimate);
            report.std_err = Some(exp.beta.beta_std_err);
            report.bound = Some(exp.beta.bound);
            report.sigmas = finite(exp.beta.sigmas);
            report.generator_id = exp.generator_id.clone();
        }
        Study::Assumptions => {
            let pure = model::hyper_state(config.theta, config.phi)?;
            let state = model::apply_noise(&pure, &config.noise)?;
            let sampled = simlab::assumption_test(&state, config.events, config.seed)?;
            let exact = simlab::assumption_exact(&state)?;
            assumption_rows(&sampled, &exact, &mut rows);
            report.generator_id = sampled.generator_id.clone();
        }
    }
    report.rows = rows;
    Ok(report)
}

/// Serializes a report. Identical reports give identical bytes.
pub fn emit(report: &Report, format: OutputFormat) -> Result<Vec<u8>, CliError> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::Numerical(Error::Numerical(e.to_string())))?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        OutputFormat::Csv => Ok(emit_csv(report).into_bytes()),
        OutputFormat::Table => Ok(emit_table(report).into_bytes()),
    }
}

fn main_table(study: Study) -> &'static str {
    match study {
        Study::Assumptions => "assumptions",
        _ => "beta",
    }
}

fn emit_csv(report: &Report) -> String {
    let mut out = String::new();
    match report.study {
        Study::Bounds => {
            out.push_str("class,n_dof,bound,strategies_evaluated,witness_u,witness_d\n");
            for row in &report.rows {
                if let Row::Bound { class, n_dof, bound, strategies_evaluated, witness_u, witness_d, .. } = row {
                    let _ = writeln!(out, "{class},{n_dof},{bound},{strategies_evaluated},{witness_u},{witness_d}");
                }
            }
        }
        Study::Scaling => {
            out.push_str("n_dof,quantum_value,classical_bound,ratio\n");
            for row in &report.rows {
                if let Row::Scaling { n_dof, quantum_value, classical_bound, ratio } = row {
                    let _ = writeln!(out, "{n_dof},{quantum_value},{classical_bound},{ratio}");
                }
            }
        }
        Study::Assumptions => {
            out.push_str("setting_u,setting_d,E,std_err,n_events\n");
            for row in &report.rows {
                if let Row::Assumption { observable_u, observable_d, contexts, values, std_errs, .. } = row {
                    for ((ctx, e), se) in contexts.iter().zip(values).zip(std_errs) {
                        let (cu, cd) = ctx.split_once('*').unwrap_or((ctx, ""));
                        let _ =
                            writeln!(out, "{observable_u}|{cu},{observable_d}|{cd},{e},{se},{}", report.config.events);
                    }
                }
            }
        }
        Study::Ideal | Study::Simulate => {
            out.push_str("setting_u,setting_d,E,std_err,n_events\n");
            let main = main_table(report.study);
            for row in &report.rows {
                if let Row::Correlation { table, setting_u, setting_d, e, std_err, n_events } = row {
                    if table == main {
                        let _ = writeln!(out, "{setting_u},{setting_d},{e},{std_err},{n_events}");
                    }
                }
            }
        }
    }
    out
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn opt6(x: Option<f64>) -> String {
    x.map(f6).unwrap_or_else(|| "n/a".into())
}

fn emit_table(report: &Report) -> String {
    let mut out = String::new();
    let cfg = &report.config;
    let _ = writeln!(
        out,
        "# hyperbell {:?} | dof={} theta={} phi={} noise={:?} v_pi={} v_k={} events={} seed={}",
        report.study,
        cfg.dof,
        f6(cfg.theta),
        f6(cfg.phi),
        cfg.noise.kind,
        f6(cfg.noise.v_pi),
        f6(cfg.noise.v_k),
        cfg.events,
        cfg.seed
    );
    match report.study {
        Study::Ideal => {
            let _ = writeln!(out, "\n{:<10} {:>12} {:>12} {:>16}", "operator", "<beta>", "|<beta>|", "spectral_radius");
            for row in &report.rows {
                if let Row::Value { name, signed, magnitude, spectral_radius } = row {
                    let _ = writeln!(
                        out,
                        "{:<10} {:>12} {:>12} {:>16}",
                        name,
                        f6(*signed),
                        f6(*magnitude),
                        f6(*spectral_radius)
                    );
                }
            }
            write_joint_table(&mut out, report, "beta");
        }
        Study::Bounds => {
            for row in &report.rows {
                if let Row::Bound { class, n_dof, bound, strategies_evaluated, witness_u, witness_d, witness_value } =
                    row
                {
                    let _ = writeln!(out, "\nclass {class}, N = {n_dof}");
                    let _ = writeln!(out, "  bound                {bound}");
                    let _ = writeln!(out, "  strategies evaluated {strategies_evaluated}");
                    let _ = writeln!(out, "  witness u            {witness_u}");
                    let _ = writeln!(out, "  witness d            {witness_d}");
                    let _ = writeln!(out, "  witness replay       {witness_value}");
                }
            }
        }
        Study::Scaling => {
            let _ = writeln!(out, "\n{:>3} {:>14} {:>16} {:>12}", "N", "quantum", "classical_bound", "ratio");
            for row in &report.rows {
                if let Row::Scaling { n_dof, quantum_value, classical_bound, ratio } = row {
                    let _ = writeln!(
                        out,
                        "{:>3} {:>14} {:>16} {:>12}",
                        n_dof,
                        f6(*quantum_value),
                        f6(*classical_bound),
                        f6(*ratio)
                    );
                }
            }
        }
        Study::Simulate => {
            write_assumption_tables(&mut out, report);
            for row in &report.rows {
                if let Row::Violation { name, beta, std_err, bound, sigmas } = row {
                    let _ = writeln!(
                        out,
                        "\n{name}: {} +/- {} (bound {}, {} standard deviations)",
                        f6(*beta),
                        f6(*std_err),
                        f6(*bound),
                        opt6(*sigmas)
                    );
                    let table = format!("chsh_{}", name.trim_start_matches("beta_"));
                    for r in &report.rows {
                        if let Row::Correlation { table: t, setting_u, setting_d, e, std_err, .. } = r {
                            if *t == table {
                                let _ = writeln!(
                                    out,
                                    "  {:<10} {:<10} {:>10} {:>10}",
                                    setting_u,
                                    setting_d,
                                    f6(*e),
                                    f6(*std_err)
                                );
                            }
                        }
                    }
                }
            }
            write_joint_table(&mut out, report, "beta");
            let _ = writeln!(out, "\npublished figures, recomputed significance");
            for row in &report.rows {
                if let Row::Published { name, beta, std_err, bound, sigmas, stated_sigmas, flagged } = row {
                    let _ = writeln!(
                        out,
                        "  {:<8} ({} - {})/{} = {:.1} sigma, stated {}{}",
                        name,
                        beta,
                        bound,
                        std_err,
                        sigmas,
                        stated_sigmas,
                        if *flagged { "  [MISMATCH]" } else { "" }
                    );
                }
            }
        }
        Study::Assumptions => write_assumption_tables(&mut out, report),
    }
    if let Some(g) = &report.generator_id {
        let _ = writeln!(out, "\ngenerator_id: {g}");
    }
    out
}

fn write_assumption_tables(out: &mut String, report: &Report) {
    for (table, title) in [
        ("assumptions_pi", "polarization correlations across path contexts"),
        ("assumptions_k", "path correlations across polarization contexts"),
    ] {
        let rows: Vec<&Row> =
            report.rows.iter().filter(|r| matches!(r, Row::Assumption { table: t, .. } if t == table)).collect();
        let Some(Row::Assumption { contexts, .. }) = rows.first() else { continue };
        let _ = writeln!(out, "\n{title}");
        let mut header = format!("{:<12}", "");
        for c in contexts {
            let _ = write!(header, " {:>12}", c);
        }
        let _ = write!(header, " {:>10} {:>10} {:>10}", "mean", "spread", "predict");
        let _ = writeln!(out, "{header}");
        for r in rows {
            if let Row::Assumption { observable_u, observable_d, values, mean, spread, predictability, .. } = r {
                let mut line = format!("{:<12}", format!("{observable_u}*{observable_d}"));
                for v in values {
                    let _ = write!(line, " {:>12}", f6(*v));
                }
                let _ = write!(line, " {:>10} {:>10} {:>10}", f6(*mean), f6(*spread), f6(*predictability));
                let _ = writeln!(out, "{line}");
            }
        }
    }
}

/// Joint correlations laid out with polarization settings as rows and path
/// settings as columns (N = 2); a flat list otherwise.
fn write_joint_table(out: &mut String, report: &Report, table: &str) {
    let cells: Vec<(&str, &str, f64, f64)> = report
        .rows
        .iter()
        .filter_map(|r| match r {
            Row::Correlation { table: t, setting_u, setting_d, e, std_err, .. } if t == table => {
                Some((setting_u.as_str(), setting_d.as_str(), *e, *std_err))
            }
            _ => None,
        })
        .collect();
    let _ = writeln!(out, "\njoint correlations");
    if report.config.dof == 2 && cells.len() == 16 {
        let split = |s: &str| -> (String, String) {
            let (a, b) = s.split_once('*').unwrap_or((s, ""));
            (a.to_string(), b.to_string())
        };
        let mut rows_l: Vec<String> = Vec::new();
        let mut cols_l: Vec<String> = Vec::new();
        for (u, d, _, _) in &cells {
            let (up, uk) = split(u);
            let (dp, dk) = split(d);
            let r = format!("{up}*{dp}");
            let c = format!("{uk}*{dk}");
            if !rows_l.contains(&r) {
                rows_l.push(r);
            }
            if !cols_l.contains(&c) {
                cols_l.push(c);
            }
        }
        // row order AB, aB, Ab, ab
        if rows_l.len() == 4 {
            rows_l.swap(1, 2);
        }
        let mut header = format!("{:<12}", "");
        for c in &cols_l {
            let _ = write!(header, " {:>12}", c);
        }
        let _ = writeln!(out, "{header}");
        for r in &rows_l {
            let mut line = format!("{:<12}", r);
            for c in &cols_l {
                let v = cells.iter().find(|(u, d, _, _)| {
                    let (up, uk) = split(u);
                    let (dp, dk) = split(d);
                    format!("{up}*{dp}") == *r && format!("{uk}*{dk}") == *c
                });
                let _ = write!(line, " {:>12}", v.map(|x| f6(x.2)).unwrap_or_default());
            }
            let _ = writeln!(out, "{line}");
        }
    } else {
        for (u, d, e, se) in &cells {
            let _ = writeln!(out, "  {:<24} {:<24} {:>10} {:>10}", u, d, f6(*e), f6(*se));
        }
    }
    let _ = writeln!(
        out,
        "\nbeta = {} +/- {} (bound {}, {} standard deviations)",
        opt6(report.beta),
        opt6(report.std_err),
        opt6(report.bound),
        opt6(report.sigmas)
    );
}
