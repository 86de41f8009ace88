//! Property suites behind `ferrohyst verify`. Every suite draws its cases from a seeded
//! ChaCha stream per case, evaluates them in parallel and reports one row per case.

use rand::Rng;
use rayon::prelude::*;
use std::sync::Arc;

use crate::constitutive::{
    clausius_duhem_residuals, drive_field, drive_stress, residual_scale, Material, MaterialParams, ShapeFunction,
};
use crate::error::{Error, Result};
use crate::hysteresis::{
    dissipation_increment, play_init, play_update, preisach_output, MemoryState, PreisachDensity, RGrid,
};
use crate::inversion::{
    discrete_stack_bound, invert_trajectory_with, lipschitz_bound_fixed_b, InversionProblem, InvertMode,
};

use super::convergence::{run_convergence, ConvergenceOptions, Target};
use super::output::num;
use super::random::{case_rng, monotone_knots, random_walk, refine, sample_knots};
use super::report::Check;

pub const SUITES: [&str; 7] =
    ["dissipation", "lipschitz", "brokate", "madelung", "rate-independence", "clausius-duhem", "convergence"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub cases: usize,
    /// `lipschitz`: number of pairs (defaults to `cases`).
    pub pairs: Option<usize>,
    /// `lipschitz`: sup of the coefficient `b`.
    pub bbar: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, cases: 200, pairs: None, bbar: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

const CASE_HEADER: [&str; 3] = ["case_id", "value", "bound"];

fn projection_grid(m: usize) -> Arc<RGrid<f64>> {
    Arc::new(PreisachDensity::<f64>::Projection.build_grid(m, 1.0).expect("valid grid"))
}

fn random_stack(rng: &mut impl Rng) -> PreisachDensity<f64> {
    let n = rng.gen_range(1..=8);
    let mut radii: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..2.0)).collect();
    radii.sort_by(|a, b| a.total_cmp(b));
    radii.dedup();
    let pairs: Vec<(f64, f64)> = radii.into_iter().map(|r| (r, rng.gen_range(0.05..1.0))).collect();
    PreisachDensity::prandtl(&pairs).expect("valid stack")
}

/// Even cases use the projection density on 1000 levels, odd cases a random stack.
fn case_density(rng: &mut impl Rng, case: usize) -> (PreisachDensity<f64>, Arc<RGrid<f64>>) {
    if case.is_multiple_of(2) {
        (PreisachDensity::Projection, projection_grid(1000))
    } else {
        let d = random_stack(rng);
        let grid = Arc::new(d.build_grid(0, 0.0).expect("stack grid"));
        (d, grid)
    }
}

fn finish(
    suite: &str,
    header: &[&'static str],
    rows: Vec<(f64, f64)>,
    check: impl Fn(usize, f64, f64) -> Check,
) -> SuiteReport {
    let checks: Vec<Check> = rows.iter().enumerate().map(|(i, &(v, b))| check(i, v, b)).collect();
    // keep the worst case first in the summary
    let mut summary: Vec<Check> = Vec::new();
    if let Some(worst) = checks.iter().min_by(|a, b| a.margin().total_cmp(&b.margin())) {
        summary.push(Check { name: format!("{suite}: worst {}", worst.name), ..worst.clone() });
    }
    summary.extend(checks.into_iter().filter(|c| !c.passed()));
    SuiteReport {
        suite: suite.to_string(),
        header: header.to_vec(),
        rows: rows.iter().enumerate().map(|(i, &(v, b))| vec![i.to_string(), num(v), num(b)]).collect(),
        checks: summary,
    }
}

/// Every discrete increment `q dP - dU` on random piecewise monotone inputs.
pub fn dissipation_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let rows = (0..opts.cases)
        .into_par_iter()
        .map(|case| -> Result<(f64, f64)> {
            let mut rng = case_rng(opts.seed, case);
            let (density, grid) = case_density(&mut rng, case);
            let amplitude = rng.gen_range(0.1..=2.0);
            let knots = monotone_knots(&mut rng, 50, amplitude);
            let (input, _) = refine(&mut rng, &knots, 4);
            let m = density.slope_integral()?;
            let qmax = input.iter().fold(0.0f64, |a, &q| a.max(q.abs()));
            let scale = 1.0 + m * qmax * qmax;
            let mut mem = MemoryState::virgin(grid);
            let mut worst = f64::INFINITY;
            for &q in &input[1..] {
                let next = mem.evolve(q);
                worst = worst.min(dissipation_increment(&density, &mem, &next, q)?);
                mem = next;
            }
            Ok((worst / scale, -1e-10))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish("dissipation", &CASE_HEADER, rows, |i, v, b| {
        Check::at_least(format!("case {i} min increment / scale"), v, b)
    }))
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Ratios `||q1 - q2|| / ||w1 - w2||` (shared `b`) and `||q1 - q2|| / (||dw|| + M1 ||db||)`
/// (different `b`) for the projection density, against `exp(bbar M)`. Pair ids `0..n` are
/// the first kind, `n..2n` the second.
pub fn lipschitz_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let n = opts.pairs.unwrap_or(opts.cases);
    let bbar = opts.bbar;
    if !(bbar >= 0.0 && bbar.is_finite()) {
        return Err(Error::InvalidParameter(format!("bbar must be finite and >= 0, got {bbar}")));
    }
    let density = PreisachDensity::Projection;
    let grid = projection_grid(200);
    let m = density.slope_integral()?;
    let m1 = density.output_bound()?;
    let bound = lipschitz_bound_fixed_b(bbar, m);
    let invert = |b: &[f64], w: &[f64]| {
        let problem = InversionProblem {
            b: b.to_vec(),
            w: w.to_vec(),
            density: density.clone(),
            initial_memory: MemoryState::virgin(grid.clone()),
        };
        invert_trajectory_with(&problem, InvertMode::Bracketed)
    };
    let rows = (0..2 * n)
        .into_par_iter()
        .map(|id| -> Result<(f64, f64)> {
            let mut rng = case_rng(opts.seed, id);
            let len = rng.gen_range(20..=60);
            let b1: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..=bbar)).collect();
            let w1 = random_walk(&mut rng, len, 0.4, 1.5);
            let w2: Vec<f64> = if rng.gen_bool(0.5) {
                let d = random_walk(&mut rng, len, 0.02, 0.1);
                w1.iter().zip(&d).map(|(a, b)| a + b).collect()
            } else {
                random_walk(&mut rng, len, 0.4, 1.5)
            };
            let b2 = if id < n { b1.clone() } else { (0..len).map(|_| rng.gen_range(0.0..=bbar)).collect() };
            let q1 = invert(&b1, &w1)?;
            let q2 = invert(&b2, &w2)?;
            let denom = sup(&w1, &w2) + m1 * sup(&b1, &b2);
            let ratio = if denom > 0.0 { sup(&q1, &q2) / denom } else { 0.0 };
            Ok((ratio, bound))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish("lipschitz", &["pair_id", "ratio", "bound"], rows, |i, v, b| {
        Check::at_most(format!("pair {i} ratio"), v, b + 1e-8)
    }))
}

/// Stack version of the Lipschitz check against `prod (1 + bbar mu_j)`.
pub fn stack_lipschitz_ratio(seed: u64, case: usize, bbar: f64) -> Result<(f64, f64)> {
    let mut rng = case_rng(seed, case);
    let density = random_stack(&mut rng);
    let grid = Arc::new(density.build_grid(0, 0.0)?);
    let len = rng.gen_range(20..=60);
    let b: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..=bbar)).collect();
    let w1 = random_walk(&mut rng, len, 0.4, 1.5);
    let w2 = random_walk(&mut rng, len, 0.4, 1.5);
    let solve = |w: &[f64]| {
        invert_trajectory_with(
            &InversionProblem {
                b: b.clone(),
                w: w.to_vec(),
                density: density.clone(),
                initial_memory: MemoryState::virgin(grid.clone()),
            },
            InvertMode::Bracketed,
        )
    };
    let (q1, q2) = (solve(&w1)?, solve(&w2)?);
    let weights = density.discrete_weights(&grid);
    Ok((sup(&q1, &q2) / sup(&w1, &w2), discrete_stack_bound(bbar, &weights)))
}

fn play_path(input: &[f64], r: f64) -> Result<Vec<f64>> {
    let mut xi = play_init(input[0], r)?;
    let mut out = vec![xi];
    for &q in &input[1..] {
        xi = play_update(xi, q, r)?;
        out.push(xi);
    }
    Ok(out)
}

/// `play_{r2 - r1}[play_{r1}[q]] = play_{r2}[q]` and `|xi_{r_i} - xi_{r_j}| <= |r_i - r_j|`.
pub fn brokate_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let grid = projection_grid(100);
    let rows = (0..opts.cases)
        .into_par_iter()
        .map(|case| -> Result<(f64, f64)> {
            let mut rng = case_rng(opts.seed, case);
            let mut knots = monotone_knots(&mut rng, 50, 2.0);
            knots[0] = rng.gen_range(-2.0..=2.0);
            let r1 = rng.gen_range(0.01..1.5);
            let r2 = r1 + rng.gen_range(0.01..1.5);
            let inner = play_path(&knots, r1)?;
            let composed = play_path(&inner, r2 - r1)?;
            let direct = play_path(&knots, r2)?;
            let mut err = sup(&composed, &direct);
            let mut mem = MemoryState::with_input(grid.clone(), knots[0]);
            for &q in &knots[1..] {
                mem.advance(q);
                if mem.check_invariants(1e-12).is_err() {
                    err = f64::INFINITY;
                }
            }
            Ok((err, 1e-12))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish("brokate", &CASE_HEADER, rows, |i, v, b| Check::at_most(format!("case {i} composition error"), v, b)))
}

/// Minor loops between the current input and a random target close on themselves: the
/// memory after every repeated arrival equals the memory after the first.
pub fn madelung_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let rows = (0..opts.cases)
        .into_par_iter()
        .map(|case| -> Result<(f64, f64)> {
            let mut rng = case_rng(opts.seed, case);
            let (density, grid) = case_density(&mut rng, case);
            let knots = monotone_knots(&mut rng, 30, 2.0);
            let mut mem = MemoryState::virgin(grid);
            for &q in &knots[1..] {
                mem.advance(q);
            }
            let qa = mem.input();
            let qb = rng.gen_range(-2.0..=2.0);
            let at_b = mem.evolve(qb);
            let at_a = at_b.evolve(qa);
            let (pb, pa) = (preisach_output(&density, &at_b)?, preisach_output(&density, &at_a)?);
            let mut cur = at_a.clone();
            let mut err = 0.0f64;
            for _ in 0..3 {
                cur.advance(qb);
                err = err.max(sup(cur.xi(), at_b.xi())).max((preisach_output(&density, &cur)? - pb).abs());
                cur.advance(qa);
                err = err.max(sup(cur.xi(), at_a.xi())).max((preisach_output(&density, &cur)? - pa).abs());
            }
            Ok((err, 1e-12))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish("madelung", &CASE_HEADER, rows, |i, v, b| Check::at_most(format!("case {i} loop closure error"), v, b)))
}

/// Refining monotone segments and re-timing a drive program leave the outputs bit-identical.
pub fn rate_independence_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let material = Material::new(MaterialParams::default(), PreisachDensity::Projection)?;
    let rows = (0..opts.cases)
        .into_par_iter()
        .map(|case| -> Result<(f64, f64)> {
            let mut rng = case_rng(opts.seed, case);
            let (density, grid) = case_density(&mut rng, case);
            let knots = monotone_knots(&mut rng, 30, 2.0);
            let (fine, marks) = refine(&mut rng, &knots, 6);
            let mut coarse_mem = MemoryState::virgin(grid.clone());
            let mut fine_mem = MemoryState::virgin(grid.clone());
            let mut outputs = Vec::new();
            for &q in &knots[1..] {
                coarse_mem.advance(q);
                outputs.push((preisach_output(&density, &coarse_mem)?, coarse_mem.xi().to_vec()));
            }
            let mut mismatch = 0.0f64;
            let mut next = 1;
            for (k, &q) in fine.iter().enumerate().skip(1) {
                fine_mem.advance(q);
                if next < marks.len() && marks[next] == k {
                    let (p, xi) = &outputs[next - 1];
                    let pf = preisach_output(&density, &fine_mem)?;
                    if pf.to_bits() != p.to_bits()
                        || fine_mem.xi().iter().zip(xi).any(|(a, b)| a.to_bits() != b.to_bits())
                    {
                        mismatch = mismatch.max((pf - p).abs().max(f64::MIN_POSITIVE));
                    }
                    next += 1;
                }
            }
            // the same field program on two clocks through the material driver
            let field: Vec<f64> = sample_knots(&knots.iter().map(|q| q * 0.5).collect::<Vec<_>>(), 8);
            let t1: Vec<f64> = (1..=field.len()).map(|k| k as f64).collect();
            let mut t2 = Vec::with_capacity(field.len());
            let mut acc = 0.0;
            for _ in 0..field.len() {
                acc += rng.gen_range(0.01..5.0);
                t2.push(acc);
            }
            let start = material.virgin_state(projection_grid(100))?;
            let zeros = vec![0.0; field.len()];
            let (a, _) = drive_field(&material, &start, &t1, &field, &zeros)?;
            let (b, _) = drive_field(&material, &start, &t2, &field, &zeros)?;
            for (x, y) in a.records.iter().zip(&b.records) {
                if x.eps.to_bits() != y.eps.to_bits()
                    || x.p.to_bits() != y.p.to_bits()
                    || x.sigma.to_bits() != y.sigma.to_bits()
                {
                    mismatch = mismatch.max((x.eps - y.eps).abs().max(f64::MIN_POSITIVE));
                }
            }
            Ok((mismatch, 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish("rate-independence", &CASE_HEADER, rows, |i, v, b| Check::at_most(format!("case {i} mismatch"), v, b)))
}

/// Random field programs (bipolar, with random target stress) and stress programs after
/// poling, on both shapes; the minimum discrete admissibility residual over the scale.
pub fn clausius_duhem_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let rows = (0..opts.cases)
        .into_par_iter()
        .map(|case| -> Result<(f64, f64)> {
            let mut rng = case_rng(opts.seed, case);
            let shape = if rng.gen_bool(0.5) { ShapeFunction::Linear } else { ShapeFunction::Quartic };
            let material =
                Material::new(MaterialParams { shape, ..MaterialParams::default() }, PreisachDensity::Projection)?;
            let start = material.virgin_state(projection_grid(200))?;
            let per = rng.gen_range(20..=100);
            let field = sample_knots(&monotone_knots(&mut rng, 10, 1.0), per);
            let t: Vec<f64> = (1..=field.len()).map(|k| k as f64 / per as f64).collect();
            let traj = if case % 2 == 0 {
                let stress_knots: Vec<f64> = (0..field.len() / per + 1).map(|_| rng.gen_range(-0.3..=0.3)).collect();
                let sigma = sample_knots(&stress_knots, per);
                drive_field(&material, &start, &t, &field, &sigma[..field.len()])?.0
            } else {
                let pole = rng.gen_range(0.3..=1.0);
                let hold = rng.gen_range(0.0..=0.3);
                let pf = sample_knots(&[0.0, pole, hold], per);
                let tp: Vec<f64> = (1..=pf.len()).map(|k| k as f64 / per as f64).collect();
                let (mut traj, poled) = drive_field(&material, &start, &tp, &pf, &vec![0.0; pf.len()])?;
                let mut knots = vec![0.0];
                knots.extend((0..rng.gen_range(1..=6)).map(|_| rng.gen_range(-1.0..=0.3)));
                let sigma = sample_knots(&knots, per);
                let ts: Vec<f64> = (1..=sigma.len()).map(|k| poled.t + k as f64 / per as f64).collect();
                let (loaded, _) = drive_stress(&material, &poled, &ts, &sigma, &vec![poled.d; sigma.len()])?;
                traj.extend_from(&loaded);
                traj
            };
            let worst = clausius_duhem_residuals(&traj).into_iter().fold(f64::INFINITY, f64::min);
            Ok((worst / residual_scale(&traj), -1e-8))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish("clausius-duhem", &CASE_HEADER, rows, |i, v, b| {
        Check::at_least(format!("case {i} min residual / scale"), v, b)
    }))
}

/// Short point and beam refinement ladders; every observed order must reach its target.
pub fn convergence_suite(_opts: &VerifyOptions) -> Result<SuiteReport> {
    let point = run_convergence(Target::Point, &ConvergenceOptions::default())?;
    let beam = run_convergence(Target::Beam, &ConvergenceOptions { levels: 3, ..ConvergenceOptions::default() })?;
    let mut checks = point.checks;
    checks.extend(beam.checks);
    let rows = checks.iter().enumerate().map(|(i, c)| vec![i.to_string(), num(c.value), num(c.bound)]).collect();
    Ok(SuiteReport { suite: "convergence".into(), header: CASE_HEADER.to_vec(), rows, checks })
}

pub fn run_verify(suite: &str, opts: &VerifyOptions) -> Result<SuiteReport> {
    match suite {
        "dissipation" => dissipation_suite(opts),
        "lipschitz" => lipschitz_suite(opts),
        "brokate" => brokate_suite(opts),
        "madelung" => madelung_suite(opts),
        "rate-independence" => rate_independence_suite(opts),
        "clausius-duhem" => clausius_duhem_suite(opts),
        "convergence" => convergence_suite(opts),
        other => Err(Error::InvalidParameter(format!("unknown suite '{other}' (known: {})", SUITES.join(", ")))),
    }
}
