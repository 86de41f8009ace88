//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use ferrohyst::beam::{simulate, BeamMesh, BeamModel, BeamState, BoundaryData, Signal, StepperConfig};
use ferrohyst::constitutive::{drive_field, Material, MaterialParams, PointTrajectory};
use ferrohyst::hysteresis::{
    play_init, play_update, potential_output, preisach_output, MemoryState, PreisachDensity, RGrid,
};
use ferrohyst::inversion::{forward_trajectory, invert_trajectory_with, InversionProblem, InvertMode};
use ferrohyst::scenario::{
    beam_scenario, case_rng, monotone_knots, point_scenario, random_walk, refine, run_convergence, run_verify,
    sample_knots, Check, ConvergenceOptions, RunConfig, Target, VerifyOptions, SCENARIOS,
};
use ferrohyst::Result;

const SEED: u64 = 20240611;

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn oracle_play(xi: f64, q: f64, r: f64) -> f64 {
    (q - r).max(xi.min(q + r))
}

fn projection_grid(m: usize) -> Arc<RGrid<f64>> {
    Arc::new(RGrid::uniform(m, 1.0).unwrap())
}

fn random_stack(rng: &mut impl Rng) -> PreisachDensity<f64> {
    let n = rng.gen_range(1..=6);
    let pairs: Vec<(f64, f64)> =
        (0..n).map(|j| (0.2 * (j + 1) as f64 + rng.gen_range(0.0..0.1), rng.gen_range(0.05..1.0))).collect();
    PreisachDensity::prandtl(&pairs).unwrap()
}

fn saturation() -> Outcome {
    let mut errs = Vec::new();
    for m in [125, 250, 500, 1000] {
        let mem = MemoryState::virgin(projection_grid(m)).evolve(2.0);
        let p = preisach_output(&PreisachDensity::Projection, &mem)?;
        let u = potential_output(&PreisachDensity::Projection, &mem)?;
        errs.push(((p - 0.5).abs(), (u - 1.0 / 6.0).abs()));
    }
    let (ep, eu) = errs[3];
    let mut ok = ep <= 2e-3 && eu <= 2e-3;
    for w in errs.windows(2) {
        ok &= w[1].0 <= w[0].0 / 2.0 * (1.0 + 1e-3) + 1e-12;
        ok &= w[1].1 <= w[0].1 / 2.0 * (1.0 + 1e-3) + 1e-12;
    }
    let ladder: Vec<String> = errs.iter().map(|e| format!("{:.2e}", e.1)).collect();
    Ok((ok, format!("m=1000 |P-1/2|={ep:.2e} |U-1/6|={eu:.2e}; U errors over m=125..1000: {}", ladder.join(" "))))
}

fn virgin_curve() -> Outcome {
    let mut worst = 0.0f64;
    for q in [0.25, 0.5, 0.75, 1.0] {
        let mem = MemoryState::virgin(projection_grid(1000)).evolve(q);
        let p = preisach_output(&PreisachDensity::Projection, &mem)?;
        let u = potential_output(&PreisachDensity::Projection, &mem)?;
        worst = worst.max((p - q * q / 2.0).abs()).max((u - q * q * q / 6.0).abs());
    }
    Ok((worst <= 2e-3, format!("max error {worst:.2e} <= 2e-3")))
}

fn energy_inequality() -> Outcome {
    let worst = (0..1000)
        .into_par_iter()
        .map(|case| -> Result<f64> {
            let mut rng = case_rng(SEED, case);
            let (density, grid) = if case % 2 == 0 {
                (PreisachDensity::Projection, projection_grid(1000))
            } else {
                let d = random_stack(&mut rng);
                let g = Arc::new(d.build_grid(0, 0.0)?);
                (d, g)
            };
            let amplitude = rng.gen_range(0.1..=2.0);
            let knots = monotone_knots(&mut rng, 50, amplitude);
            let (input, _) = refine(&mut rng, &knots, 4);
            let mut mem = MemoryState::virgin(grid);
            let (mut p, mut u) = (0.0, 0.0);
            let mut incs = Vec::with_capacity(input.len());
            let mut big = 0.0f64;
            for &q in &input[1..] {
                mem.advance(q);
                let (p1, u1) = (preisach_output(&density, &mem)?, potential_output(&density, &mem)?);
                incs.push(q * (p1 - p) - (u1 - u));
                big = big.max(q.abs() * p1.abs()).max(u1.abs());
                (p, u) = (p1, u1);
            }
            let scale = 1.0 + big;
            Ok(incs.into_iter().fold(f64::INFINITY, f64::min) / scale)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok((worst >= -1e-10, format!("1000 inputs, min increment / scale {worst:.3e} >= -1e-10")))
}

fn lipschitz() -> Outcome {
    let grid = projection_grid(200);
    let bbar = 1.0;
    let invert = |b: &[f64], w: &[f64]| {
        let problem = InversionProblem {
            b: b.to_vec(),
            w: w.to_vec(),
            density: PreisachDensity::Projection,
            initial_memory: MemoryState::virgin(grid.clone()),
        };
        invert_trajectory_with(&problem, InvertMode::Bracketed)
    };
    let ratios = (0..1000)
        .into_par_iter()
        .map(|id| -> Result<(bool, f64)> {
            let mut rng = case_rng(SEED ^ 0x11, id);
            let len = rng.gen_range(20..=60);
            let b1: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..=bbar)).collect();
            let w1 = random_walk(&mut rng, len, 0.4, 1.5);
            let w2: Vec<f64> = if id % 3 == 0 {
                random_walk(&mut rng, len, 0.4, 1.5)
            } else {
                let d = random_walk(&mut rng, len, 0.02, 0.1);
                w1.iter().zip(&d).map(|(a, b)| a + b).collect()
            };
            let varying = id >= 500;
            let b2 = if varying { (0..len).map(|_| rng.gen_range(0.0..=bbar)).collect() } else { b1.clone() };
            let (q1, q2) = (invert(&b1, &w1)?, invert(&b2, &w2)?);
            // output bound of the projection density is 1
            let denom = sup(&w1, &w2) + sup(&b1, &b2);
            Ok((varying, if denom > 0.0 { sup(&q1, &q2) / denom } else { 0.0 }))
        })
        .collect::<Result<Vec<_>>>()?;
    let fixed = ratios.iter().filter(|r| !r.0).map(|r| r.1).fold(0.0, f64::max);
    let varying = ratios.iter().filter(|r| r.0).map(|r| r.1).fold(0.0, f64::max);
    let bound = std::f64::consts::E + 1e-8;
    Ok((
        fixed <= bound && varying <= bound,
        format!(
            "500 pairs shared b: max ratio {fixed:.6}; 500 pairs varying b: max ratio {varying:.6}; bound e + 1e-8"
        ),
    ))
}

fn round_trip() -> Outcome {
    let worst = (0..200)
        .into_par_iter()
        .map(|case| -> Result<(f64, f64)> {
            let mut rng = case_rng(SEED ^ 0x22, case);
            let (density, grid) = if case % 2 == 0 {
                (PreisachDensity::Projection, projection_grid(200))
            } else {
                let d = random_stack(&mut rng);
                let g = Arc::new(d.build_grid(0, 0.0)?);
                (d, g)
            };
            let len = rng.gen_range(30..=120);
            let q = random_walk(&mut rng, len, 0.3, 1.5);
            let b: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..=2.0)).collect();
            let initial = MemoryState::virgin(grid);
            let w = forward_trajectory(&initial, &density, &b, &q)?;
            let problem = InversionProblem { b, w, density, initial_memory: initial };
            let bracketed = invert_trajectory_with(&problem, InvertMode::Bracketed)?;
            let picard = invert_trajectory_with(&problem, InvertMode::Picard)?;
            Ok((sup(&bracketed, &q), sup(&bracketed, &picard)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((0.0f64, 0.0f64), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    Ok((
        worst.0 <= 1e-8 && worst.1 <= 1e-8,
        format!("200 trajectories, recovery error {:.2e}, bracketed vs Picard {:.2e}, both <= 1e-8", worst.0, worst.1),
    ))
}

fn brokate() -> Outcome {
    let grid = projection_grid(100);
    let worst = (0..200)
        .into_par_iter()
        .map(|case| -> Result<(f64, f64)> {
            let mut rng = case_rng(SEED ^ 0x33, case);
            let mut knots = monotone_knots(&mut rng, 50, 2.0);
            knots[0] = rng.gen_range(-2.0..=2.0);
            let (r1, r2) = {
                let a = rng.gen_range(0.01..1.5);
                (a, a + rng.gen_range(0.01..1.5))
            };
            let path = |input: &[f64], r: f64| -> Result<Vec<f64>> {
                let mut xi = play_init(input[0], r)?;
                let mut out = vec![xi];
                for &q in &input[1..] {
                    xi = play_update(xi, q, r)?;
                    out.push(xi);
                }
                Ok(out)
            };
            let inner = path(&knots, r1)?;
            let mut err = sup(&path(&inner, r2 - r1)?, &path(&knots, r2)?);
            // library plays against the closed form
            let mut xi = (knots[0] - r2).max((knots[0] + r2).min(0.0));
            let lib = path(&knots, r2)?;
            err = err.max((lib[0] - xi).abs());
            for (k, &q) in knots.iter().enumerate().skip(1) {
                xi = oracle_play(xi, q, r2);
                err = err.max((lib[k] - xi).abs());
            }
            let mut mem = MemoryState::with_input(grid.clone(), knots[0]);
            let mut order = 0.0f64;
            for &q in &knots[1..] {
                mem.advance(q);
                let (xi, r) = (mem.xi(), grid.radii());
                for i in 0..xi.len() {
                    for j in i + 1..xi.len() {
                        order = order.max((xi[i] - xi[j]).abs() - (r[j] - r[i]).abs());
                    }
                }
            }
            Ok((err, order))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((0.0f64, f64::NEG_INFINITY), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    Ok((
        worst.0 <= 1e-12 && worst.1 <= 1e-12,
        format!("200 inputs, composition error {:.2e} <= 1e-12, max ordering excess {:.2e} <= 0", worst.0, worst.1),
    ))
}

fn memory_and_rate() -> Outcome {
    let opts = VerifyOptions { seed: SEED, cases: 200, ..VerifyOptions::default() };
    let madelung = run_verify("madelung", &opts)?;
    let rate = run_verify("rate-independence", &opts)?;
    // independent re-timing of a bipolar field program through the material driver
    let material = Material::new(MaterialParams::default(), PreisachDensity::Projection)?;
    let start = material.virgin_state(projection_grid(200))?;
    let field = sample_knots(&[0.0, 1.0, -1.0, 0.5, -0.25, 1.0], 40);
    let zeros = vec![0.0; field.len()];
    let t1: Vec<f64> = (1..=field.len()).map(|k| k as f64 * 1e-3).collect();
    let t2: Vec<f64> = (1..=field.len()).map(|k| (k as f64).powi(2)).collect();
    let (a, _) = drive_field(&material, &start, &t1, &field, &zeros)?;
    let (b, _) = drive_field(&material, &start, &t2, &field, &zeros)?;
    let identical = a.records.iter().zip(&b.records).all(|(x, y)| {
        [x.eps, x.p, x.u, x.sigma, x.d]
            .iter()
            .zip([y.eps, y.p, y.u, y.sigma, y.d])
            .all(|(u, v)| u.to_bits() == v.to_bits())
    });
    let first = |c: &[Check]| c.first().map(|c| c.to_string()).unwrap_or_default();
    Ok((
        madelung.passed() && rate.passed() && identical,
        format!("{}; {}; driver re-timing bit-identical: {identical}", first(&madelung.checks), first(&rate.checks)),
    ))
}

fn cd_residual(traj: &PointTrajectory<f64>) -> f64 {
    let r = &traj.records;
    let scale =
        1.0 + r.iter().map(|x| x.sigma.abs()).fold(0.0, f64::max) + r.iter().map(|x| x.field.abs()).fold(0.0, f64::max);
    r.windows(2)
        .map(|w| {
            (w[1].eps - w[0].eps) * w[1].sigma + (w[1].d - w[0].d) * w[1].field - (w[1].free_energy - w[0].free_energy)
        })
        .fold(f64::INFINITY, f64::min)
        / scale
}

fn clausius_duhem() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in SCENARIOS {
        let cfg = RunConfig::builtin(name)?;
        if name == "beam-demo" {
            let (_, run) = beam_scenario(&cfg)?;
            let e = &run.energy;
            let scale = 1.0 + e.iter().map(|r| r.work_boundary.abs() + r.kinetic + r.free_energy).fold(0.0, f64::max);
            let worst = e
                .windows(2)
                .map(|w| (w[1].diss_hyst - w[0].diss_hyst) + (w[1].diss_visc - w[0].diss_visc))
                .fold(f64::INFINITY, f64::min)
                / scale;
            ok &= worst >= -1e-8;
            parts.push(format!("{name} {worst:.2e}"));
        } else {
            let worst = cd_residual(&point_scenario(&cfg)?.trajectory);
            ok &= worst >= -1e-8;
            parts.push(format!("{name} {worst:.2e}"));
        }
    }
    let suite = run_verify("clausius-duhem", &VerifyOptions { seed: SEED, cases: 200, ..VerifyOptions::default() })?;
    ok &= suite.passed();
    Ok((ok, format!("min residual / scale: {}; random programs: {}", parts.join(", "), suite.checks[0])))
}

fn figure_properties() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["bipolar-linear", "bipolar-quartic"] {
        let cfg = RunConfig::builtin(name)?;
        let r = point_scenario(&cfg)?.trajectory.records;
        let spp = cfg.drive.samples_per_period;
        let peak = (0..r.len()).max_by(|&a, &b| r[a].field.total_cmp(&r[b].field)).unwrap();
        let zero = (peak..r.len()).find(|&k| r[k].field <= 0.0).unwrap();
        let remanence = r[zero].p;
        let cross = (zero..r.len() - 1).find(|&k| r[k].p > 0.0 && r[k + 1].p <= 0.0).unwrap();
        let (a, b) = (&r[cross], &r[cross + 1]);
        let coercive = -(a.field + (b.field - a.field) * a.p / (a.p - b.p));
        let closure = (spp + spp / 4..r.len())
            .map(|k| (r[k].p - r[k - spp].p).abs().max((r[k].eps - r[k - spp].eps).abs()))
            .fold(0.0, f64::max);
        let min_eps = r.iter().map(|x| x.eps).fold(f64::INFINITY, f64::min);
        ok &= remanence > 0.0 && coercive > 0.0 && closure <= 1e-8 && min_eps >= 0.0;
        let mut part =
            format!("{name}: P_r {remanence:.4} E_c {coercive:.4} closure {closure:.1e} min eps {min_eps:.1e}");
        if name == "bipolar-linear" {
            let c = cfg.material.c;
            let butterfly = r.iter().map(|x| (x.eps - x.u / c).abs()).fold(0.0, f64::max);
            ok &= butterfly <= 1e-12;
            part += &format!(" |eps - U/c| {butterfly:.1e}");
        }
        parts.push(part);
    }
    for name in ["stress-linear", "stress-quartic"] {
        let run = point_scenario(&RunConfig::builtin(name)?)?;
        let k0 = run.ramp_start.unwrap();
        let r = &run.trajectory.records;
        let rise = r[k0..].windows(2).map(|w| w[1].p.abs() - w[0].p.abs()).fold(f64::NEG_INFINITY, f64::max);
        let drop = r[k0].p.abs() - r.last().unwrap().p.abs();
        ok &= rise <= 1e-12 && drop > 0.0;
        parts.push(format!("{name}: max |P| rise {rise:.1e}, total drop {drop:.3e}"));
    }
    Ok((ok, parts.join("; ")))
}

fn beam() -> Outcome {
    // (a) linear limit against u = s0 x / c
    let c: f64 = 2.0;
    let material = Material::new(MaterialParams { c, nu: 1.0, ..MaterialParams::default() }, PreisachDensity::Zero)?;
    let grid = material.grid(10, 1.0)?;
    let model = BeamModel { mesh: BeamMesh::new(1.0, 16)?, material, grid };
    let s0 = 0.05;
    let boundary = BoundaryData { r: Signal::Constant(0.0), s: Signal::Constant(s0) };
    let cfg = StepperConfig { dt: 1e-2, output_stride: usize::MAX, ..StepperConfig::default() };
    let run = simulate(&model, &BeamState::zero(&model)?, &boundary, 60.0, &cfg)?;
    let last = run.snapshots.last().unwrap();
    let steady = (0..model.mesh.nodes()).map(|i| (last.u[i] - s0 * model.mesh.x(i) / c).abs()).fold(0.0, f64::max);
    let mut ok = steady <= 1e-6;
    // (b)-(d) refinement ladders
    let report = run_convergence(Target::Beam, &ConvergenceOptions { levels: 4, ..ConvergenceOptions::default() })?;
    ok &= report.checks.iter().all(Check::passed);
    let pick = |prefix: &str| {
        report
            .checks
            .iter()
            .filter(|c| c.name.starts_with(prefix))
            .map(|c| format!("{:.3}", c.value))
            .collect::<Vec<_>>()
            .join("/")
    };
    Ok((
        ok,
        format!(
            "(a) steady error {steady:.1e} <= 1e-6; (b) strain order in h {}; (c) time orders {}; (d) energy residual orders {}, min dissipation {}",
            pick("beam strain fitted order"),
            pick("time order dt 1e-3 (low)"),
            pick("energy residual order"),
            pick("min dissipation per step dt 5e-4"),
        ),
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("saturation", saturation),
        ("virgin curve", virgin_curve),
        ("energy inequality", energy_inequality),
        ("inverse Lipschitz bound", lipschitz),
        ("inversion round trip", round_trip),
        ("play composition and ordering", brokate),
        ("return-point memory and rate independence", memory_and_rate),
        ("Clausius-Duhem inequality", clausius_duhem),
        ("hysteresis loop, butterfly and depolarization", figure_properties),
        ("beam solver", beam),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let (ok, detail) = match check() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("{} {name}: {detail} ({:.1}s)", if ok { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
