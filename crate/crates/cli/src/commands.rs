use std::fs;
use std::path::Path;

use chainlab_core::causality::{self, intervene as clamp_run, interventional_shift, ShiftSpec};
use chainlab_core::dynamics::Clamp;
use chainlab_core::format::{diagram_csv, events_csv, parse_events, trajectory_csv};
use chainlab_core::perturbation::{merge_events, simulate_with_events};
use chainlab_core::{
    generate_schedule, integrate_lv, integrate_ode, simulate as simulate_lde, stats::sig6, sweep,
};
use serde_json::json;

use crate::config::{ExperimentConfig, Model};
use crate::CliError;

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn echo(config: &ExperimentConfig) -> Result<(), CliError> {
    write(&config.output_dir, "config.json", &config.to_json())
}

fn require_lde(config: &ExperimentConfig, command: &str) -> Result<(), CliError> {
    if config.model != Model::CoupledLde {
        return Err(CliError::Config(format!(
            "{command} supports only the coupled_lde model"
        )));
    }
    Ok(())
}

pub fn simulate(config: &ExperimentConfig) -> Result<(), CliError> {
    let initial = config.initial.state();
    let t = match config.model {
        Model::CoupledLde => simulate_lde(initial, &config.params, config.steps)?,
        Model::Ode => integrate_ode(initial, &config.params, config.dt, config.t_end)?,
        Model::LotkaVolterra => {
            integrate_lv(initial.x, initial.y, &config.lv, config.dt, config.t_end)?
        }
    };
    echo(config)?;
    write(&config.output_dir, "trajectory.csv", &trajectory_csv(&t))
}

pub fn bifurcate(config: &ExperimentConfig) -> Result<(), CliError> {
    let diagram = sweep(&config.sweep, config.initial.state())?;
    let diverged = diagram.cells.iter().filter(|c| c.diverged).count();
    if diverged > 0 {
        eprintln!("{diverged} of {} cells diverged", diagram.cells.len());
    }
    echo(config)?;
    write(
        &config.output_dir,
        "bifurcation.csv",
        &diagram_csv(&diagram),
    )
}

pub fn perturb(config: &ExperimentConfig) -> Result<(), CliError> {
    require_lde(config, "perturb")?;
    let schedules = config
        .perturbations
        .iter()
        .map(|p| {
            let seed = p.seed.expect("normalized config carries seeds");
            generate_schedule(p.target, p.rate, p.low, p.high, seed, config.steps)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut events = merge_events(&schedules)?;
    if let Some(path) = &config.events_file {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let explicit = parse_events(&text).map_err(|e| CliError::Config(e.to_string()))?;
        if explicit
            .iter()
            .any(|e| config.perturbations.iter().any(|p| p.target == e.target))
        {
            return Err(CliError::Config(
                "events_file and perturbations target the same parameter".into(),
            ));
        }
        events.extend(explicit);
    }
    let mut t = simulate_with_events(
        config.initial.state(),
        &config.params,
        &mut events,
        config.steps,
    )?;
    t.provenance.seeds = schedules.iter().map(|s| s.seed).collect();
    eprintln!("{} shock events applied", t.provenance.events.len());
    echo(config)?;
    write(&config.output_dir, "trajectory.csv", &trajectory_csv(&t))?;
    write(
        &config.output_dir,
        "events.csv",
        &events_csv(&t.provenance.events),
    )
}

pub fn detect(config: &ExperimentConfig) -> Result<(), CliError> {
    require_lde(config, "detect")?;
    let initial = config.initial.state();
    let schedules = config
        .perturbations
        .iter()
        .map(|p| {
            generate_schedule(
                p.target,
                p.rate,
                p.low,
                p.high,
                p.seed.unwrap_or(config.seed),
                config.steps,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let observed =
        chainlab_core::simulate_perturbed(initial, &config.params, &schedules, config.steps)?;
    let report = causality::detect(&observed, &config.params, initial, &config.detect)?;
    eprintln!(
        "verdict: overall {:?}, flags {:?}",
        report.verdict.overall, report.verdict.flags
    );
    echo(config)?;
    write(&config.output_dir, "report.json", &report.to_json())
}

pub fn intervene(config: &ExperimentConfig) -> Result<(), CliError> {
    require_lde(config, "intervene")?;
    let iv = &config.intervene;
    let value = iv.value.expect("normalized config carries a clamp value");
    let initial = config.initial.state();
    let t = clamp_run(
        &config.params,
        Clamp {
            chain: iv.chain,
            value,
        },
        initial,
        iv.n_steps,
    )?;
    let spec = ShiftSpec {
        clamp_values: vec![value],
        n_steps: iv.n_steps.max(causality::intervention::MIN_SHIFT_STEPS),
        burn_in: iv.burn_in,
        epsilon: iv.epsilon,
    };
    let shift = interventional_shift(&config.params, iv.chain, iv.chain.other(), initial, &spec)?;
    let threshold = config.detect.thresholds.shift;
    let doc = json!({
        "clamped": iv.chain,
        "probe": iv.chain.other(),
        "value": sig6(value),
        "n_steps": spec.n_steps,
        "burn_in": spec.burn_in,
        "epsilon": sig6(spec.epsilon),
        "shift": sig6(shift.shift),
        "threshold": sig6(threshold),
        "causal_influence": shift.shift > threshold,
    });
    echo(config)?;
    write(&config.output_dir, "trajectory.csv", &trajectory_csv(&t))?;
    let mut text = serde_json::to_string_pretty(&doc).expect("shift serializes");
    text.push('\n');
    write(&config.output_dir, "shift.json", &text)
}
