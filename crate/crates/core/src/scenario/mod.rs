//! Scenario configuration, built-in runs, property suites and refinement studies used by the
//! `ferrohyst` command line tool.

mod config;
mod convergence;
mod output;
mod random;
mod report;
mod run;
mod verify;
mod waveform;

pub use config::{
    BeamSection, DensityKind, DensitySection, DriveMode, DriveSection, MaterialSection, RunConfig, ShapeKind,
    SignalSpec, Waveform, SCENARIOS,
};
pub use convergence::{
    fitted_order, hysteretic_run, linear_strain_at, observed_order, point_errors, restrict, run_convergence,
    ConvergenceOptions, ConvergenceReport, Target, CONVERGENCE_HEADER,
};
pub use output::{
    num, read_table, write_beam_energy, write_beam_snapshots, write_point_csv, write_table, ENERGY_HEADER,
    POINT_HEADER, SNAPSHOT_HEADER,
};
pub use random::{case_rng, monotone_knots, random_walk, refine, sample_knots};
pub use report::{all_passed, Check};
pub use run::{
    beam_checks, beam_scenario, point_checks, point_scenario, run_beam, run_scenario, PointRun, ScenarioOutcome,
    ENERGY_FILE, POINT_FILE, SNAPSHOT_FILE,
};
pub use verify::{run_verify, stack_lipschitz_ratio, SuiteReport, VerifyOptions, SUITES};
pub use waveform::{ramp, sample_waveform};
