//! Refinement ladders. Point: r-grid levels against the closed-form saturation and virgin
//! curve values. Beam: strain against a fine-mesh reference (space), successive differences
//! and the cumulative energy residual under dt refinement (time).

use std::sync::Arc;

use crate::beam::{simulate, BeamMesh, BeamModel, BeamRun, BeamState, BoundaryData, Signal, StepperConfig};
use crate::constitutive::{Material, MaterialParams};
use crate::error::{Error, Result};
use crate::hysteresis::{potential_output, preisach_output, MemoryState, PreisachDensity};

use super::output::num;
use super::report::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Point,
    Beam,
}

impl std::str::FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "point" => Ok(Target::Point),
            "beam" => Ok(Target::Beam),
            other => Err(Error::InvalidParameter(format!("unknown convergence target '{other}' (point|beam)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceOptions {
    pub levels: usize,
    /// Coarsest r-grid size (point) or element count (beam); `None` for the default.
    pub base: Option<usize>,
    /// Refinement factor between levels.
    pub ratio: usize,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        ConvergenceOptions { levels: 4, base: None, ratio: 2 }
    }
}

pub const CONVERGENCE_HEADER: [&str; 6] = ["study", "level", "size", "step", "error", "order"];

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub rows: Vec<Vec<String>>,
    pub checks: Vec<Check>,
}

/// `log(e_k / e_{k+1}) / log(ratio)`; NaN when either error is at round-off.
pub fn observed_order(coarse: f64, fine: f64, ratio: f64) -> f64 {
    if coarse <= 1e-14 || fine <= 1e-14 {
        f64::NAN
    } else {
        (coarse / fine).ln() / ratio.ln()
    }
}

/// Least-squares slope of `log e` against `log(1 / step)`.
pub fn fitted_order(steps: &[f64], errors: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = steps.iter().zip(errors).map(|(&h, &e)| (-h.ln(), e.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    -sxy / sxx
}

fn check_options(opts: &ConvergenceOptions) -> Result<()> {
    if opts.levels < 3 {
        return Err(Error::InvalidParameter(format!(
            "a refinement study needs at least 3 levels, got {}",
            opts.levels
        )));
    }
    if opts.ratio < 2 {
        return Err(Error::InvalidParameter("refinement ratio must be at least 2 (levels would be identical)".into()));
    }
    if opts.base == Some(0) {
        return Err(Error::InvalidParameter("base size must be positive".into()));
    }
    Ok(())
}

pub fn run_convergence(target: Target, opts: &ConvergenceOptions) -> Result<ConvergenceReport> {
    check_options(opts)?;
    match target {
        Target::Point => point_study(opts),
        Target::Beam => beam_study(opts),
    }
}

/// Errors of `(P_sat, U_sat, P(q*), U(q*))` on a uniform grid with `m` levels, `q* = 1/sqrt 2`.
pub fn point_errors(m: usize) -> Result<[f64; 4]> {
    let density = PreisachDensity::Projection;
    let grid = Arc::new(density.build_grid(m, 1.0)?);
    let sat = MemoryState::virgin(grid.clone()).evolve(2.0);
    let q = std::f64::consts::FRAC_1_SQRT_2;
    let virgin = MemoryState::virgin(grid).evolve(q);
    Ok([
        (preisach_output(&density, &sat)? - 0.5).abs(),
        (potential_output(&density, &sat)? - 1.0 / 6.0).abs(),
        (preisach_output(&density, &virgin)? - q * q / 2.0).abs(),
        (potential_output(&density, &virgin)? - q * q * q / 6.0).abs(),
    ])
}

fn point_study(opts: &ConvergenceOptions) -> Result<ConvergenceReport> {
    let base = opts.base.unwrap_or(125);
    let ratio = opts.ratio as f64;
    let sizes: Vec<usize> = (0..opts.levels).map(|k| base * opts.ratio.pow(k as u32)).collect();
    let errors = sizes.iter().map(|&m| point_errors(m)).collect::<Result<Vec<_>>>()?;
    let names = ["p_sat", "u_sat", "p_virgin", "u_virgin"];
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (qi, name) in names.iter().enumerate() {
        for (k, &m) in sizes.iter().enumerate() {
            let order = if k == 0 { f64::NAN } else { observed_order(errors[k - 1][qi], errors[k][qi], ratio) };
            rows.push(vec![
                name.to_string(),
                k.to_string(),
                m.to_string(),
                num(1.0 / m as f64),
                num(errors[k][qi]),
                num(order),
            ]);
        }
    }
    for k in 1..sizes.len() {
        for qi in 0..2 {
            let (c, f) = (errors[k - 1][qi], errors[k][qi]);
            checks.push(Check::at_most(
                format!("{} error halves: m {} -> {}", names[qi], sizes[k - 1], sizes[k]),
                f,
                c / 2.0 + 1e-12,
            ));
        }
    }
    let steps: Vec<f64> = sizes.iter().map(|&m| 1.0 / m as f64).collect();
    for qi in 2..4 {
        let e: Vec<f64> = errors.iter().map(|x| x[qi].max(1e-300)).collect();
        checks.push(Check::at_least(format!("{} fitted order in dr", names[qi]), fitted_order(&steps, &e), 1.0));
    }
    Ok(ConvergenceReport { rows, checks })
}

fn linear_beam(n: usize) -> Result<BeamModel<f64>> {
    let params = MaterialParams { nu: 0.01, ..MaterialParams::default() };
    let material = Material::new(params, PreisachDensity::Zero)?;
    let grid = material.grid(1, 1.0)?;
    Ok(BeamModel { mesh: BeamMesh::new(1.0, n)?, material, grid })
}

/// Full hysteretic beam used by the time study.
pub fn hysteretic_beam(n: usize) -> Result<(BeamModel<f64>, BoundaryData<f64>)> {
    let params = MaterialParams { nu: 0.01, ..MaterialParams::default() };
    let material = Material::new(params, PreisachDensity::Projection)?;
    let grid = material.grid(200, 1.0)?;
    let boundary =
        BoundaryData { r: Signal::Sine { amplitude: 0.55, period: 1.0, offset: 0.0 }, s: Signal::Constant(0.0) };
    Ok((BeamModel { mesh: BeamMesh::new(1.0, n)?, material, grid }, boundary))
}

fn final_strains(run: &BeamRun<f64>) -> Vec<f64> {
    run.snapshots.last().map(|s| s.elements.iter().map(|e| e.eps).collect()).unwrap_or_default()
}

/// Smooth free vibration `u0 = 0.1 sin(pi x / 2)` of the linear beam to `t = 0.5`.
pub fn linear_strain_at(n: usize, dt: f64) -> Result<Vec<f64>> {
    let model = linear_beam(n)?;
    let u0: Vec<f64> = (0..=n).map(|i| 0.1 * (std::f64::consts::FRAC_PI_2 * model.mesh.x(i)).sin()).collect();
    let init = BeamState::initial(&model, &u0, &vec![0.0; n + 1], 0.0)?;
    let cfg = StepperConfig { dt, output_stride: usize::MAX, ..StepperConfig::default() };
    Ok(final_strains(&simulate(&model, &init, &BoundaryData::zero(), 0.5, &cfg)?))
}

/// Runs the hysteretic beam with step `dt` to `t_end`.
pub fn hysteretic_run(n: usize, dt: f64, t_end: f64) -> Result<BeamRun<f64>> {
    let (model, boundary) = hysteretic_beam(n)?;
    let init = BeamState::zero(&model)?;
    let cfg = StepperConfig { dt, output_stride: usize::MAX, ..StepperConfig::default() };
    simulate(&model, &init, &boundary, t_end, &cfg)
}

fn l2(h: f64, a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y) * h).sum::<f64>().sqrt()
}

/// Averages a fine element field onto `coarse` elements.
pub fn restrict(fine: &[f64], coarse: usize) -> Vec<f64> {
    let k = fine.len() / coarse;
    fine.chunks(k).map(|c| c.iter().sum::<f64>() / k as f64).collect()
}

fn beam_study(opts: &ConvergenceOptions) -> Result<ConvergenceReport> {
    let base = opts.base.unwrap_or(8);
    let r = opts.ratio;
    let ratio = r as f64;
    let mut rows = Vec::new();
    let mut checks = Vec::new();

    // space
    let sizes: Vec<usize> = (0..opts.levels).map(|k| base * r.pow(k as u32)).collect();
    let reference = linear_strain_at(sizes[sizes.len() - 1] * r * r, 1e-3)?;
    let mut errors = Vec::new();
    for (k, &n) in sizes.iter().enumerate() {
        let e = l2(1.0 / n as f64, &linear_strain_at(n, 1e-3)?, &restrict(&reference, n));
        let order = if k == 0 { f64::NAN } else { observed_order(errors[k - 1], e, ratio) };
        rows.push(vec!["space".into(), k.to_string(), n.to_string(), num(1.0 / n as f64), num(e), num(order)]);
        errors.push(e);
    }
    let hs: Vec<f64> = sizes.iter().map(|&n| 1.0 / n as f64).collect();
    checks.push(Check::at_least("beam strain fitted order in h", fitted_order(&hs, &errors), 1.0));

    // time
    let n = 16;
    let dts: Vec<f64> = (0..opts.levels).map(|k| 4e-3 / ratio.powi(k as i32)).collect();
    let runs = dts.iter().map(|&dt| hysteretic_run(n, dt, 0.5)).collect::<Result<Vec<_>>>()?;
    let strains: Vec<Vec<f64>> = runs.iter().map(final_strains).collect();
    let diffs: Vec<f64> = strains.windows(2).map(|w| l2(1.0 / n as f64, &w[0], &w[1])).collect();
    for (k, d) in diffs.iter().enumerate() {
        let order = if k == 0 { f64::NAN } else { observed_order(diffs[k - 1], *d, ratio) };
        rows.push(vec!["time".into(), k.to_string(), n.to_string(), num(dts[k]), num(*d), num(order)]);
        if k > 0 {
            checks.push(Check::at_least(format!("time order dt {:e} (low)", dts[k]), order, 0.8));
            checks.push(Check::at_most(format!("time order dt {:e} (high)", dts[k]), order, 1.2));
        }
    }

    // energy audit and Picard effort
    let residuals: Vec<f64> = runs.iter().map(|run| run.energy.last().map_or(0.0, |e| e.residual.abs())).collect();
    let mut picard = Vec::new();
    for (k, run) in runs.iter().enumerate() {
        let order = if k == 0 { f64::NAN } else { observed_order(residuals[k - 1], residuals[k], ratio) };
        rows.push(vec!["energy".into(), k.to_string(), n.to_string(), num(dts[k]), num(residuals[k]), num(order)]);
        if k > 0 {
            checks.push(Check::at_least(format!("energy residual order dt {:e}", dts[k]), order, 0.8));
        }
        let e = &run.energy;
        let min_diss = (1..e.len())
            .map(|i| (e[i].diss_hyst - e[i - 1].diss_hyst).min(e[i].diss_visc - e[i - 1].diss_visc))
            .fold(f64::INFINITY, f64::min);
        checks.push(Check::at_least(format!("min dissipation per step dt {:e}", dts[k]), min_diss, -1e-8));
        let mean = run.steps.iter().map(|s| s.iterations as f64).sum::<f64>() / run.steps.len().max(1) as f64;
        rows.push(vec!["picard".into(), k.to_string(), n.to_string(), num(dts[k]), num(mean), num(f64::NAN)]);
        picard.push(mean);
    }
    let rise = picard.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::at_most("Picard mean iterations increase under dt refinement", rise, 0.0));
    Ok(ConvergenceReport { rows, checks })
}
