use log::{info, warn};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{set_path, Goal, Scenario, ScenarioConfig, Sweep, TaskConfig};
use super::output::{tag, Metadata, Sink, Table};
use super::CliError;
use crate::chain::{scaling_fit, ChainSpec};
use crate::error::Error;
use crate::metrics::{f_map, find_phase_for_target_r, max_snr_over_omega, ComparisonConfig, Readout};
use crate::model::{SystemModel, Topology};
use crate::oracle::{compare, expected_welch, simulate, OracleConfig};
use crate::spectra::{
    asymmetry, asymmetry_spectrum, output_spectrum, snr_spectrum, transmission_du, transmission_three,
    SpectrumOptions, SpectrumTable, TransferEngine,
};

/// Runs `task` on a resolved scenario and writes its artifacts.
///
/// Everything is computed before the first file is written, so a failing
/// run leaves no partial output behind.
pub fn run_task(sc: &Scenario, task: &TaskConfig, sink: &mut Sink, seed: Option<u64>) -> Result<(), CliError> {
    if !matches!(task, TaskConfig::Chain { .. }) {
        let verdict = sc.model.stability()?;
        verdict.require_stable()?;
    }
    let kind = task.kind().name();
    match task {
        TaskConfig::Spectrum { ports, sweep } => spectrum(sc, ports.as_deref(), sweep.as_ref(), sink),
        TaskConfig::Asymmetry { omegas, phases } => asymmetry_scan(sc, omegas, phases, sink),
        TaskConfig::Snr {
            signal,
            readout,
            baseline,
        } => snr(sc, signal.as_deref(), readout.as_deref(), *baseline, sink),
        TaskConfig::Fmap {} => fmap(sc, sink),
        TaskConfig::Chain {
            n_min,
            n_max,
            omega,
            alternating_detuning,
        } => chain(sc, *n_min, *n_max, *omega, *alternating_detuning, sink),
        TaskConfig::Oracle { .. } => oracle(sc, task, seed, sink),
        TaskConfig::Optimize { goal } => optimize(sc, goal, sink),
    }
    .inspect(|_| info!("{kind}: wrote {} file(s)", sink.written().len()))
}

fn port_index(model: &SystemModel, label: &str, key: &str) -> Result<usize, CliError> {
    model
        .port(label)
        .ok_or_else(|| CliError::Config(format!("{key}: no mode labelled '{label}'")))
}

fn variant(base: &ScenarioConfig, sweep: &Sweep, value: f64) -> Result<SystemModel, CliError> {
    let mut doc = serde_json::to_value(base).expect("config serializes");
    set_path(&mut doc, &format!("system.{}", sweep.path), json!(value))
        .map_err(|e| CliError::Config(format!("task.sweep.path: {e}")))?;
    let cfg = ScenarioConfig::from_value(doc)?;
    Ok(cfg.build_model()?.0)
}

fn spectrum(sc: &Scenario, ports: Option<&[String]>, sweep: Option<&Sweep>, sink: &mut Sink) -> Result<(), CliError> {
    let omega = sc.config.grid.omega.samples();
    let variants: Vec<(String, SystemModel)> = match sweep {
        None => vec![(String::new(), sc.model.clone())],
        Some(sw) => {
            if sw.values.is_empty() {
                return Err(CliError::Config("task.sweep.values is empty".into()));
            }
            sw.values
                .iter()
                .map(|&v| Ok((format!("@{}={}", sw.path, v), variant(&sc.config, sw, v)?)))
                .collect::<Result<_, CliError>>()?
        }
    };
    let mut table = SpectrumTable::new(omega.clone())?;
    for (suffix, model) in &variants {
        let mut part = SpectrumTable::new(omega.clone())?;
        if model.topology != Topology::Chain(model.mode_count()) {
            part.merge_suffixed(asymmetry_spectrum(model, &omega, &sc.options)?, "")?;
        }
        let labels: Vec<String> = match ports {
            Some(p) => p.to_vec(),
            None => model.modes.iter().map(|m| m.label.clone()).collect(),
        };
        for l in &labels {
            let p = port_index(model, l, "task.ports")?;
            part.merge_suffixed(output_spectrum(model, &omega, p, &sc.options)?, "")?;
        }
        table.merge_suffixed(part, suffix)?;
    }
    let meta = Metadata::new(sc, "spectrum");
    sink.table("", &meta, &Table::from(&table))
}

/// Transmissions and asymmetry factors at one point; undefined factors are NaN.
fn asymmetry_row(model: &SystemModel, omega: f64, opts: &SpectrumOptions) -> Result<Vec<f64>, Error> {
    let engine = match TransferEngine::new(model, opts.convention) {
        Ok(e) => e,
        Err(Error::Unstable { abscissa }) => {
            warn!("unstable point (abscissa {abscissa:.3e}) reported as NaN");
            let n = if model.topology == Topology::Du { 5 } else { 6 };
            return Ok(vec![f64::NAN; n]);
        }
        Err(e) => return Err(e),
    };
    let tr = engine.at(omega)?;
    let r = |p: f64, m: f64| asymmetry(p, m).unwrap_or(f64::NAN);
    Ok(match model.topology {
        Topology::Du => {
            let t = transmission_du(&tr)?;
            vec![t.t_a_plus, t.t_a_minus, t.t_b_plus, t.t_b_minus, r(t.t_a_plus, t.t_b_minus)]
        }
        _ => {
            let t = transmission_three(&tr)?;
            vec![
                t.t_m_pm,
                t.t_pm_b,
                t.t_b_pm,
                t.t_pm_c,
                r(t.t_m_pm, t.t_pm_b),
                r(t.t_b_pm, t.t_pm_c),
            ]
        }
    })
}

fn asymmetry_scan(sc: &Scenario, omegas: &[f64], phases: &[usize], sink: &mut Sink) -> Result<(), CliError> {
    let model = &sc.model;
    let names: &[&str] = match model.topology {
        Topology::Du => &["T_a+", "T_a-", "T_b+", "T_b-", "R_ab"],
        Topology::ThreeMode => &["T_m+-", "T_+-b", "T_b+-", "T_+-c", "R_mb", "R_bc"],
        Topology::Chain(_) => {
            return Err(CliError::Config(
                "task.asymmetry needs a du or three_mode system".into(),
            ))
        }
    };
    if omegas.is_empty() || omegas.iter().any(|w| !w.is_finite()) {
        return Err(CliError::Config("task.omegas must be a non-empty list of finite values".into()));
    }
    if phases.is_empty() || phases.len() > 2 || phases.iter().any(|&k| k >= model.couplings.len()) {
        return Err(CliError::Config(format!(
            "task.phases must hold one or two coupling indices below {}",
            model.couplings.len()
        )));
    }
    let theta = sc.config.grid.theta.samples();
    let points: Vec<Vec<f64>> = match phases {
        [_] => theta.iter().map(|&t| vec![t]).collect(),
        _ => theta
            .iter()
            .flat_map(|&a| theta.iter().map(move |&b| vec![a, b]))
            .collect(),
    };
    let mut columns: Vec<String> = phases.iter().map(|k| format!("theta_{k}")).collect();
    columns.extend(names.iter().map(|s| s.to_string()));

    let mut tables = Vec::with_capacity(omegas.len());
    for &w in omegas {
        let rows: Vec<Vec<f64>> = points
            .par_iter()
            .map(|pt| {
                let mut m = model.clone();
                for (k, t) in phases.iter().zip(pt) {
                    m.couplings[*k].phase = *t;
                }
                let mut row = pt.clone();
                row.extend(asymmetry_row(&m, w, &sc.options)?);
                Ok(row)
            })
            .collect::<Result<_, Error>>()?;
        let mut t = Table::new(columns.clone());
        rows.into_iter().for_each(|r| t.push(r));
        tables.push((w, t));
    }
    for (w, t) in &tables {
        let meta = Metadata::new(sc, "asymmetry").with("omega", json!(w));
        sink.table(&format!("_omega_{}", tag(*w)), &meta, t)?;
    }
    Ok(())
}

fn readout(sc: &Scenario, signal: Option<&str>, readout: Option<&str>) -> Result<Readout, CliError> {
    let mut r = Readout::end_to_end(&sc.model, sc.options);
    if let Some(s) = signal {
        r.signal = port_index(&sc.model, s, "task.signal")?;
    }
    if let Some(s) = readout {
        r.readout = port_index(&sc.model, s, "task.readout")?;
    }
    Ok(r)
}

fn snr(sc: &Scenario, signal: Option<&str>, read: Option<&str>, baseline: bool, sink: &mut Sink) -> Result<(), CliError> {
    let r = readout(sc, signal, read)?;
    let omega = sc.config.grid.omega.samples();
    let search = sc.config.grid.omega_search;
    let mut table = snr_spectrum(&sc.model, &omega, r.signal, r.readout, &sc.options)?;
    let best = max_snr_over_omega(&sc.model, &search, &r)?;
    let mut meta = Metadata::new(sc, "snr").with("max_snr", json!(best));
    if baseline {
        let cmp = ComparisonConfig::new(sc.model.clone(), search, r)?;
        let ics = snr_spectrum(&cmp.ics, &omega, r.signal, r.readout, &sc.options)?;
        table.merge_suffixed(ics, "_ics")?;
        let ics_best = cmp.ics_max()?;
        meta = meta
            .with("max_snr_ics", json!(ics_best))
            .with("f", json!(best.snr / ics_best.snr));
    }
    sink.table("", &meta, &Table::from(&table))
}

fn fmap(sc: &Scenario, sink: &mut Sink) -> Result<(), CliError> {
    if sc.model.topology != Topology::ThreeMode {
        return Err(CliError::Config("task.fmap needs a three_mode system".into()));
    }
    let r = readout(sc, None, None)?;
    let cfg = ComparisonConfig::new(sc.model.clone(), sc.config.grid.omega_search, r)?;
    let delta = sc.config.grid.delta.samples();
    let map = f_map(&cfg, &delta, &delta)?;
    let region = map.region_report();
    let mut t = Table::new(
        ["delta_c", "delta_m", "f", "lg_f", "s_ap", "lg_s_ap", "omega_star"]
            .map(String::from)
            .to_vec(),
    );
    for c in &map.cells {
        let f = c.f.unwrap_or(f64::NAN);
        let s = c.s_ap.unwrap_or(f64::NAN);
        t.push(vec![
            c.delta_c,
            c.delta_m,
            f,
            f.log10(),
            s,
            s.log10(),
            c.omega_star.unwrap_or(f64::NAN),
        ]);
    }
    let meta = Metadata::new(sc, "fmap")
        .with("max_snr_ics", json!(map.ics))
        .with("region", json!(region));
    sink.table("", &meta, &t)
}

fn chain(
    sc: &Scenario,
    n_min: usize,
    n_max: usize,
    omega: f64,
    alternating: Option<[f64; 2]>,
    sink: &mut Sink,
) -> Result<(), CliError> {
    if n_min < 2 || n_max < n_min || !omega.is_finite() {
        return Err(CliError::Config(format!(
            "task.chain: need 2 <= n_min <= n_max and finite omega, got n_min={n_min}, n_max={n_max}, omega={omega}"
        )));
    }
    let mut spec = ChainSpec::from_template(&sc.model);
    if let Some([a, b]) = alternating {
        spec = spec.with_alternating_detuning(a, b);
    }
    let report = scaling_fit(&spec, n_min..=n_max, omega, &sc.options)?;
    let mut t = Table::new(["n", "gain", "ln_gain"].map(String::from).to_vec());
    for n in n_min..=n_max {
        match report.n_values.iter().position(|&k| k == n) {
            Some(i) => t.push(vec![n as f64, report.gains[i], report.gains[i].ln()]),
            None => t.push(vec![n as f64, f64::NAN, f64::NAN]),
        }
    }
    let meta = Metadata::new(sc, "chain")
        .with("omega", json!(omega))
        .with("base", json!(report.base))
        .with("fit", json!(report.fit))
        .with("reference_base", json!(report.reference_base))
        .with("excluded", json!(report.excluded));
    sink.table("", &meta, &t)
}

fn oracle(sc: &Scenario, task: &TaskConfig, seed: Option<u64>, sink: &mut Sink) -> Result<(), CliError> {
    let TaskConfig::Oracle {
        ports,
        seed: task_seed,
        ensemble,
        segments,
        segment_len,
        dt,
        compare_convention,
        min_pass_fraction,
    } = task
    else {
        unreachable!("dispatched on kind")
    };
    let labels: Vec<String> = match ports {
        Some(p) => p.clone(),
        None => sc.model.modes.iter().map(|m| m.label.clone()).collect(),
    };
    let idx: Vec<usize> = labels
        .iter()
        .map(|l| port_index(&sc.model, l, "task.ports"))
        .collect::<Result<_, _>>()?;
    if !(0.0..=1.0).contains(min_pass_fraction) {
        return Err(CliError::Config("task.min_pass_fraction must lie in [0, 1]".into()));
    }
    let mut cfg = OracleConfig::new(seed.unwrap_or(*task_seed), idx.clone());
    cfg.ensemble = *ensemble;
    cfg.segments = *segments;
    cfg.segment_len = *segment_len;
    cfg.dt = *dt;
    cfg.psi = sc.options.psi;
    let run = simulate(&sc.model, &cfg).map_err(|e| match e {
        Error::InvalidParameter(m) => CliError::Config(format!("task.oracle: {m}")),
        other => other.into(),
    })?;
    let opts = SpectrumOptions {
        convention: *compare_convention,
        psi: sc.options.psi,
    };
    let mut outputs = Vec::new();
    let mut failures = Vec::new();
    for (&p, label) in idx.iter().zip(&labels) {
        let pred = expected_welch(&sc.model, &run.omega, run.dt, *segment_len, p, &opts)?;
        let psd = run.port(p).expect("simulated port");
        let rep = compare(&run.omega, psd, &run.omega, &pred)?;
        info!("oracle port {label}: pass fraction {:.4}, max |z| {:.2}", rep.pass_fraction, rep.max_abs_z);
        if rep.pass_fraction < *min_pass_fraction {
            failures.push(format!("{label}: {:.4}", rep.pass_fraction));
        }
        let mut t = Table::new(["omega", "psd", "stderr", "predicted", "z"].map(String::from).to_vec());
        for i in 0..rep.omega.len() {
            t.push(vec![rep.omega[i], rep.measured[i], rep.stderr[i], rep.predicted[i], rep.z[i]]);
        }
        let meta = Metadata::new(sc, "oracle")
            .with("oracle", json!(run.config))
            .with("dt", json!(run.dt))
            .with("steps", json!(run.steps))
            .with("pass_fraction", json!(rep.pass_fraction))
            .with("max_abs_z", json!(rep.max_abs_z))
            .with("skipped_bins", json!(rep.skipped));
        outputs.push((label.clone(), meta, t));
    }
    for (label, meta, t) in &outputs {
        sink.table(&format!("_{label}"), meta, t)?;
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Oracle(format!(
            "pass fraction below {min_pass_fraction} at {}",
            failures.join(", ")
        )))
    }
}

fn optimize(sc: &Scenario, goal: &Goal, sink: &mut Sink) -> Result<(), CliError> {
    let data: Value = match *goal {
        Goal::PhaseTarget {
            which,
            target,
            omega,
            points,
        } => {
            if !(-1.0..=1.0).contains(&target) {
                return Err(CliError::Config(format!("task.goal.target {target} outside [-1, 1]")));
            }
            let found = find_phase_for_target_r(&sc.model, target, which, omega, &sc.options, points)?;
            json!({ "goal": goal, "result": found })
        }
        Goal::MaxSnr => {
            let r = readout(sc, None, None)?;
            let best = max_snr_over_omega(&sc.model, &sc.config.grid.omega_search, &r)?;
            json!({ "goal": goal, "result": best })
        }
    };
    let meta = Metadata::new(sc, "optimize");
    sink.json("", &meta, &data)
}
