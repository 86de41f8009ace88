use std::path::{Path, PathBuf};

use crate::beam::{simulate, BeamModel, BeamRun, BeamState};
use crate::constitutive::{clausius_duhem_residuals, drive_field, drive_stress, residual_scale, PointTrajectory};
use crate::error::Result;

use super::config::{DriveMode, RunConfig};
use super::output::{write_beam_energy, write_beam_snapshots, write_point_csv};
use super::report::Check;
use super::waveform::{ramp, sample_waveform};

pub const POINT_FILE: &str = "point_trajectory.csv";
pub const SNAPSHOT_FILE: &str = "beam_snapshots.csv";
pub const ENERGY_FILE: &str = "beam_energy.csv";

#[derive(Debug, Clone)]
pub struct PointRun {
    pub trajectory: PointTrajectory<f64>,
    /// Stress mode: index of the record where the compressive ramp starts.
    pub ramp_start: Option<usize>,
}

/// Material-point scenario: a bipolar field program, or poling followed by a compressive
/// ramp with the displacement datum frozen.
pub fn point_scenario(cfg: &RunConfig) -> Result<PointRun> {
    let material = cfg.material()?;
    let start = material.virgin_state(cfg.point_grid(&material)?)?;
    let d = &cfg.drive;
    match d.mode {
        DriveMode::Field => {
            let (t, e) = sample_waveform(d.waveform, d.amplitude, d.periods, d.samples_per_period);
            let zeros = vec![0.0; t.len()];
            let (trajectory, _) = drive_field(&material, &start, &t, &e, &zeros)?;
            Ok(PointRun { trajectory, ramp_start: None })
        }
        DriveMode::Stress => {
            let n = d.pole_samples;
            let dt = 1.0 / n as f64;
            let up = n / 2;
            let (mut t, mut e) = ramp(0.0, dt, 0.0, d.pole_amplitude, up);
            let (t2, e2) = ramp(up as f64 * dt, dt, d.pole_amplitude, d.hold_field, n - up);
            t.extend(t2);
            e.extend(e2);
            let (mut trajectory, poled) = drive_field(&material, &start, &t, &e, &vec![0.0; n])?;
            let ramp_start = trajectory.len() - 1;
            let m = d.stress_samples;
            let (ts, s) = ramp(poled.t, 1.0 / m as f64, 0.0, -d.stress_max, m);
            let (loaded, _) = drive_stress(&material, &poled, &ts, &s, &vec![poled.d; m])?;
            trajectory.extend_from(&loaded);
            Ok(PointRun { trajectory, ramp_start: Some(ramp_start) })
        }
    }
}

pub fn beam_scenario(cfg: &RunConfig) -> Result<(BeamModel<f64>, BeamRun<f64>)> {
    let model = cfg.beam_model()?;
    let boundary = cfg.boundary()?;
    let n = model.mesh.nodes();
    let zeros = vec![0.0; n];
    let initial = BeamState::initial(&model, &zeros, &zeros, boundary.r.at(0.0))?;
    let run = simulate(&model, &initial, &boundary, cfg.beam.t_end, &cfg.stepper())?;
    Ok((model, run))
}

/// Post-hoc checks of a point trajectory.
pub fn point_checks(cfg: &RunConfig, run: &PointRun) -> Vec<Check> {
    let traj = &run.trajectory;
    let recs = &traj.records;
    let scale = residual_scale(traj);
    let worst = clausius_duhem_residuals(traj).into_iter().fold(f64::INFINITY, f64::min);
    let mut checks = vec![Check::at_least("clausius-duhem min residual / scale", worst / scale, -1e-8)];
    let min_diss = recs.iter().map(|r| r.diss).fold(f64::INFINITY, f64::min);
    checks.push(Check::at_least("min dissipation increment", min_diss, -1e-10 * scale));
    match run.ramp_start {
        None => {
            let spp = cfg.drive.samples_per_period;
            // first return to E = 0 after the positive peak (half period)
            if recs.len() > spp / 2 {
                checks.push(Check::at_least("remanent polarization", recs[spp / 2].p, f64::MIN_POSITIVE));
                // coercive field: E at the first sign change of P on the descending branch
                let coercive = recs[spp / 2..]
                    .windows(2)
                    .find(|w| w[0].p > 0.0 && w[1].p <= 0.0)
                    .map(|w| -w[1].field)
                    .unwrap_or(0.0);
                checks.push(Check::at_least("coercive field", coercive, f64::MIN_POSITIVE));
            }
            if cfg.drive.periods >= 2 {
                // periodic from the first peak on
                let dev = (spp + spp / 4..recs.len())
                    .map(|k| {
                        let (a, b) = (&recs[k - spp], &recs[k]);
                        (a.p - b.p).abs().max((a.eps - b.eps).abs()).max((a.sigma - b.sigma).abs())
                    })
                    .fold(0.0, f64::max);
                checks.push(Check::at_most("loop closure deviation", dev, 1e-8));
            }
            let min_eps = recs.iter().map(|r| r.eps).fold(f64::INFINITY, f64::min);
            if cfg.material.e == 0.0 {
                checks.push(Check::at_least("butterfly strain minimum", min_eps, 0.0));
            }
        }
        Some(k0) => {
            let rise = recs[k0..].windows(2).map(|w| w[1].p.abs() - w[0].p.abs()).fold(f64::NEG_INFINITY, f64::max);
            checks.push(Check::at_most("max |P| increase on compressive ramp", rise, 1e-12));
            let r = recs[k0].d;
            let d_res = recs[k0..].iter().map(|x| (x.d - r).abs()).fold(0.0, f64::max);
            checks.push(Check::at_most("displacement datum residual", d_res, 1e-10));
        }
    }
    checks
}

pub fn beam_checks(run: &BeamRun<f64>) -> Vec<Check> {
    let e = &run.energy;
    let scale = 1.0 + e.iter().map(|r| r.work_boundary.abs() + r.kinetic + r.free_energy).fold(0.0, f64::max);
    let min_step = |f: &dyn Fn(usize) -> f64| (1..e.len()).map(f).fold(f64::INFINITY, f64::min);
    let hyst = min_step(&|k| e[k].diss_hyst - e[k - 1].diss_hyst);
    let visc = min_step(&|k| e[k].diss_visc - e[k - 1].diss_visc);
    let last = e.last().map(|r| r.residual.abs()).unwrap_or(0.0);
    vec![
        Check::at_least("min hysteretic dissipation per step", hyst.min(0.0) / scale, -1e-8),
        Check::at_least("min viscous dissipation per step", visc.min(0.0) / scale, -1e-8),
        Check::at_most("final energy residual / scale", last / scale, 1e-2),
    ]
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub files: Vec<PathBuf>,
    pub checks: Vec<Check>,
}

/// Runs the configured scenario and writes its CSV files into `out_dir`.
pub fn run_scenario(cfg: &RunConfig, out_dir: &Path) -> Result<ScenarioOutcome> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir)?;
    if cfg.scenario == "beam-demo" {
        return run_beam(cfg, out_dir);
    }
    let run = point_scenario(cfg)?;
    let path = out_dir.join(POINT_FILE);
    write_point_csv(&path, &run.trajectory)?;
    Ok(ScenarioOutcome { files: vec![path], checks: point_checks(cfg, &run) })
}

/// Runs the beam described by `cfg` regardless of its scenario name.
pub fn run_beam(cfg: &RunConfig, out_dir: &Path) -> Result<ScenarioOutcome> {
    std::fs::create_dir_all(out_dir)?;
    let (model, run) = beam_scenario(cfg)?;
    let snaps = out_dir.join(SNAPSHOT_FILE);
    let energy = out_dir.join(ENERGY_FILE);
    write_beam_snapshots(&snaps, &model, &run.snapshots)?;
    write_beam_energy(&energy, &run.energy)?;
    Ok(ScenarioOutcome { files: vec![snaps, energy], checks: beam_checks(&run) })
}
