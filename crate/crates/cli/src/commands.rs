use std::fs;
use std::io::Write;
use std::path::Path;

use blockcoh::analysis::{
    alpha_grid, default_alpha_grid, dis_curve, inequality_battery, ordering_check, sample_states,
    trial_pair, BatteryConfig, DIS_EDGE,
};
use blockcoh::dynamics::{
    batch_yield_experiment, initial_state, simulate, TimeSeriesRecord, YieldTable,
};
use blockcoh::exec::{map_range, Execution};
use blockcoh::free_search::OptimizerBudget;
use blockcoh::measures::{Measure, MeasureParams, MeasureReport};
use blockcoh::output::{g12, CsvTable};
use blockcoh::{ProjectorSet, StateKind};
use log::{info, warn};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::io::{load_state, parse_projectors};
use crate::manifest::{default_path, RunManifest};
use crate::{
    BatchArgs, Command, FuzzArgs, MeasureArgs, OrderingArgs, OutputArgs, ReplayArgs, SimulateArgs,
};

/// Rendered output plus an error to raise after it has been written.
struct Rendered {
    text: String,
    deferred: Option<CliError>,
}

impl From<String> for Rendered {
    fn from(text: String) -> Self {
        Rendered {
            text,
            deferred: None,
        }
    }
}

pub fn run(cmd: Command, exec: Execution) -> CliResult<()> {
    match cmd {
        Command::Replay(r) => replay(r, exec),
        other => execute(other, exec),
    }
}

fn output_args(cmd: &mut Command) -> &mut OutputArgs {
    match cmd {
        Command::Measure(a) => &mut a.output,
        Command::Ordering(a) => &mut a.output,
        Command::Fuzz(a) => &mut a.output,
        Command::Simulate(a) => &mut a.output,
        Command::Batch(a) => &mut a.output,
        Command::Replay(_) => unreachable!("replay records no output"),
    }
}

fn execute(mut cmd: Command, exec: Execution) -> CliResult<()> {
    let rendered = match &cmd {
        Command::Measure(a) => measure(a, exec)?.into(),
        Command::Ordering(a) => ordering(a, exec)?.into(),
        Command::Fuzz(a) => fuzz(a, exec)?,
        Command::Simulate(a) => simulate_cmd(a)?.into(),
        Command::Batch(a) => batch(a, exec)?.into(),
        Command::Replay(_) => unreachable!("handled by run"),
    };
    let output = output_args(&mut cmd).clone();
    let outputs = output.out.iter().cloned().collect();
    let manifest = RunManifest::new(cmd, outputs).to_json();
    match &output.out {
        Some(path) => {
            write_file(path, &rendered.text)?;
            let mpath = output.manifest.clone().unwrap_or_else(|| default_path(path));
            write_file(&mpath, &manifest)?;
            info!("wrote {} and {}", path.display(), mpath.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(rendered.text.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))?;
            match &output.manifest {
                Some(mpath) => write_file(mpath, &manifest)?,
                None => eprint!("{manifest}"),
            }
        }
    }
    match rendered.deferred {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn replay(r: ReplayArgs, exec: Execution) -> CliResult<()> {
    let manifest = RunManifest::load(&r.manifest)?;
    if manifest.version != env!("CARGO_PKG_VERSION") {
        warn!(
            "manifest written by version {}, replaying with {}",
            manifest.version,
            env!("CARGO_PKG_VERSION")
        );
    }
    let mut cmd = manifest.run;
    if let Some(out) = r.out {
        let o = output_args(&mut cmd);
        o.out = Some(out);
        o.manifest = None;
    }
    execute(cmd, exec)
}

#[derive(Serialize)]
struct MeasureOutput<'a> {
    state: String,
    projectors: &'a str,
    projection_distance: f64,
    report: MeasureReport,
}

fn measure(a: &MeasureArgs, exec: Execution) -> CliResult<String> {
    let loaded = load_state(&a.state)?;
    let q = parse_projectors(&a.projectors, Some(loaded.state.dim()))?;
    let budget = OptimizerBudget::new(
        a.optimizer.restarts,
        a.optimizer.max_iter,
        OptimizerBudget::default().tolerance,
        a.optimizer.seed,
    )?
    .with_execution(exec);
    let params = MeasureParams::new(a.alpha, a.z, a.beta, budget)?;
    let m = Measure::from_name(&a.measure, &params)?;
    let report = m.evaluate(&loaded.state, &q, &budget)?;
    let out = MeasureOutput {
        state: a.state.display().to_string(),
        projectors: &a.projectors,
        projection_distance: loaded.projection_distance,
        report,
    };
    let mut s = serde_json::to_string_pretty(&out).expect("report serializes");
    s.push('\n');
    Ok(s)
}

fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("bad grid {spec:?}"));
    match spec {
        "default" => Ok(default_alpha_grid()),
        "table" => Ok((1..=9).map(|i| i as f64 / 10.0).collect()),
        _ => {
            let parts: Vec<&str> = spec.split(':').collect();
            match parts.as_slice() {
                [n] => {
                    let n: usize = n.parse().map_err(|_| bad())?;
                    Ok(alpha_grid(n, DIS_EDGE, 1.0 - DIS_EDGE)?)
                }
                [lo, hi, n] => {
                    let lo: f64 = lo.parse().map_err(|_| bad())?;
                    let hi: f64 = hi.parse().map_err(|_| bad())?;
                    let n: usize = n.parse().map_err(|_| bad())?;
                    Ok(alpha_grid(n, lo, hi)?)
                }
                _ => Err(bad()),
            }
        }
    }
}

fn ordering(a: &OrderingArgs, exec: Execution) -> CliResult<String> {
    let r1 = load_state(&a.state)?.state;
    let r2 = load_state(&a.state2)?.state;
    if r1.dim() != r2.dim() {
        return Err(blockcoh::Error::DimensionMismatch {
            expected: r1.dim(),
            found: r2.dim(),
        }
        .into());
    }
    let q = parse_projectors(&a.projectors, Some(r1.dim()))?;
    let grid = parse_grid(&a.grid)?;
    let c = dis_curve(&r1, &r2, &q, &grid, exec)?;
    let mut t = CsvTable::new(&["alpha", "C1", "C2", "DIS"]);
    for i in 0..c.alpha.len() {
        t.push(&[c.alpha[i], c.first[i], c.second[i], c.values[i]]);
    }
    let zeros = if c.zeros.is_empty() {
        "none".to_string()
    } else {
        c.zeros.iter().map(|&z| g12(z)).collect::<Vec<_>>().join(",")
    };
    t.comment(&format!("zeros: {zeros}"));
    Ok(t.into_string())
}

fn state_kind(s: &str) -> CliResult<StateKind> {
    match s {
        "mixed" => Ok(StateKind::Mixed),
        "pure" => Ok(StateKind::Pure),
        _ => Err(CliError::Usage(format!("kind must be mixed or pure, got {s:?}"))),
    }
}

fn fuzz(a: &FuzzArgs, exec: Execution) -> CliResult<Rendered> {
    if a.trials == 0 {
        return Err(CliError::Usage("trials must be positive".into()));
    }
    let q = parse_projectors(&a.projectors, None)?;
    if a.measure == "battery" {
        return battery(a, &q, exec);
    }
    let names: Vec<&str> = a.measure.split(',').collect();
    let [ma, mb] = names.as_slice() else {
        return Err(CliError::Usage(format!(
            "expected two measures or \"battery\", got {:?}",
            a.measure
        )));
    };
    let ma: Measure = ma.trim().parse()?;
    let mb: Measure = mb.trim().parse()?;
    let kind = state_kind(&a.kind)?;
    let verdicts = map_range(a.trials, exec, |k| {
        let (r, s) = trial_pair(&q, kind, a.seed, k);
        ordering_check(&r, &s, &ma, &mb, &q)
    });
    let mut t = CsvTable::new(&["trial", "A_rho", "A_sigma", "B_rho", "B_sigma", "agree"]);
    let mut reversals = 0;
    for (k, v) in verdicts.into_iter().enumerate() {
        let v = v?;
        if !v.agree {
            reversals += 1;
        }
        t.push_raw(&[
            k.to_string(),
            g12(v.first.0),
            g12(v.first.1),
            g12(v.second.0),
            g12(v.second.1),
            u8::from(v.agree).to_string(),
        ]);
    }
    t.comment(&format!(
        "A={ma} B={mb} kind={} trials={} reversals={reversals}",
        a.kind, a.trials
    ));
    info!("{reversals} reversals in {} trials", a.trials);
    Ok(t.into_string().into())
}

fn battery(a: &FuzzArgs, q: &ProjectorSet, exec: Execution) -> CliResult<Rendered> {
    let mixed = sample_states(a.trials, q.dim(), StateKind::Mixed, a.seed);
    let pure = sample_states(a.trials, q.dim(), StateKind::Pure, a.seed.wrapping_add(1));
    let mut cfg = BatteryConfig {
        seed: a.seed,
        ..BatteryConfig::default()
    };
    cfg.budget = cfg.budget.with_execution(exec);
    let report = inequality_battery(&mixed, &pure, q, &cfg)?;
    let mut t = CsvTable::new(&["proposition", "checked", "violations", "worst_margin"]);
    for tally in &report.tallies {
        t.push_raw(&[
            tally.proposition.label().to_string(),
            tally.checked.to_string(),
            tally.violations.len().to_string(),
            g12(tally.worst_margin),
        ]);
    }
    for tally in &report.tallies {
        for c in &tally.violations {
            t.comment(&format!(
                "violation {} state={} lhs={} rhs={} slack={}",
                tally.proposition.label(),
                c.state,
                g12(c.lhs),
                g12(c.rhs),
                g12(c.slack)
            ));
        }
    }
    for (k, e) in &report.errors {
        t.comment(&format!("error state={k}: {e}"));
    }
    let violations = report.violation_count();
    let deferred = if violations > 0 {
        Some(CliError::Violations(violations))
    } else if let Some((k, e)) = report.errors.first() {
        Some(CliError::Core(blockcoh::Error::OptimizationFailed(format!(
            "state {k}: {e}"
        ))))
    } else {
        None
    };
    Ok(Rendered {
        text: t.into_string(),
        deferred,
    })
}

fn simulate_cmd(a: &SimulateArgs) -> CliResult<String> {
    let cfg = a.dynamics.config()?;
    let initial = match &a.state {
        Some(path) => load_state(path)?.state,
        None => initial_state(&a.initial)?,
    };
    let traj = simulate(&cfg, &initial)?;
    if let Some(t) = traj.frozen_at {
        info!("population exhausted at t = {t}");
    }
    let mut table = CsvTable::new(&TimeSeriesRecord::HEADER);
    for r in &traj.records {
        table.push(&r.values());
    }
    Ok(table.into_string())
}

fn yield_csv(table: &YieldTable) -> String {
    let mut t = CsvTable::new(&["id", "YS", "YT", "ratio", "status"]);
    for r in &table.rows {
        let status = match &r.error {
            None => "ok".to_string(),
            Some(e) => format!("\"{}\"", e.replace('"', "'")),
        };
        t.push_raw(&[r.id.to_string(), g12(r.y_s), g12(r.y_t), g12(r.ratio), status]);
    }
    let s = &table.summary;
    t.comment(&format!(
        "summary count={} failures={} mean_ratio={} std_ratio={} min_ratio={} max_ratio={} ys_above_yt={} ys_below_yt={}",
        s.count,
        s.failures,
        g12(s.mean),
        g12(s.std_dev),
        g12(s.min),
        g12(s.max),
        s.above_one,
        s.below_one
    ));
    t.into_string()
}

fn batch(a: &BatchArgs, exec: Execution) -> CliResult<String> {
    let cfg = a.dynamics.config()?;
    if a.n == 0 {
        return Err(CliError::Usage("n must be positive".into()));
    }
    let table = match &a.initial {
        Some(label) => {
            let states = vec![initial_state(label)?; a.n];
            blockcoh::dynamics::yields_for_states(&cfg, &states, exec)?
        }
        None => batch_yield_experiment(a.n, &cfg, a.seed, exec)?,
    };
    for r in &table.rows {
        if let Some(e) = &r.error {
            warn!("state {} failed: {e}", r.id);
        }
    }
    Ok(yield_csv(&table))
}
