use rayon::prelude::*;
use std::sync::Arc;

use crate::constitutive::{Material, PointState};
use crate::error::{Error, Result};
use crate::hysteresis::{trial_potential, MemoryState, RGrid};
use crate::inversion::solve_scalar;
use crate::scalar::Real;

use super::energy::{EnergyAccumulator, EnergyRecord};
use super::linalg::Tridiagonal;
use super::signal::BoundaryData;

/// Uniform mesh of `(0, length)` with `elements` linear elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamMesh<T> {
    length: T,
    elements: usize,
}

impl<T: Real> BeamMesh<T> {
    pub fn new(length: T, elements: usize) -> Result<Self> {
        if elements == 0 || !(length > T::zero() && length.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mesh needs length > 0 and at least one element (length {length}, elements {elements})"
            )));
        }
        Ok(BeamMesh { length, elements })
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn nodes(&self) -> usize {
        self.elements + 1
    }

    pub fn h(&self) -> T {
        self.length / T::of_usize(self.elements)
    }

    pub fn x(&self, i: usize) -> T {
        self.length * T::of_usize(i) / T::of_usize(self.elements)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig<T> {
    pub dt: T,
    /// Picard stops when successive strain rates differ by less than this in discrete L2.
    pub picard_tol: T,
    pub picard_max: usize,
    pub lumped_mass: bool,
    /// Keep every `output_stride`-th state (the first and last are always kept).
    pub output_stride: usize,
}

impl<T: Real> Default for StepperConfig<T> {
    fn default() -> Self {
        StepperConfig {
            dt: T::lit(1e-3),
            picard_tol: T::lit(1e-10),
            picard_max: 50,
            lumped_mass: false,
            output_stride: 10,
        }
    }
}

impl<T: Real> StepperConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > T::zero() && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.picard_tol > T::zero()) || self.picard_max == 0 {
            return Err(Error::InvalidParameter("Picard tolerance and iteration cap must be positive".into()));
        }
        if self.output_stride == 0 {
            return Err(Error::InvalidParameter("output stride must be at least 1".into()));
        }
        Ok(())
    }
}

/// Mesh, material and the memory grid shared by all elements.
#[derive(Debug, Clone)]
pub struct BeamModel<T> {
    pub mesh: BeamMesh<T>,
    pub material: Material<T>,
    pub grid: Arc<RGrid<T>>,
}

#[derive(Debug, Clone)]
pub struct BeamState<T> {
    pub t: T,
    /// Nodal displacements, `u[0] = 0`.
    pub u: Vec<T>,
    /// Nodal velocities.
    pub v: Vec<T>,
    /// Element states: strain, strain rate, field, memory and derived quantities.
    pub elements: Vec<PointState<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo<T> {
    pub iterations: usize,
    pub last_update: T,
}

#[derive(Debug, Clone)]
pub struct BeamRun<T> {
    pub snapshots: Vec<BeamState<T>>,
    pub energy: Vec<EnergyRecord<T>>,
    pub steps: Vec<StepInfo<T>>,
}

fn strains<T: Real>(mesh: &BeamMesh<T>, u: &[T]) -> Vec<T> {
    let h = mesh.h();
    u.windows(2).map(|w| (w[1] - w[0]) / h).collect()
}

/// `W = -e E + f'(eps) U[q]` with `E` from the displacement datum; returns `W` and the
/// evolved memory.
pub fn hysteretic_stress_functional<T: Real>(
    material: &Material<T>,
    eps: T,
    memory: &MemoryState<T>,
    r: T,
) -> Result<(T, MemoryState<T>)> {
    let (q, field, mem) = material.solve_field_from_d(eps, r, memory)?;
    let (_, df) = material.shape_at(eps)?;
    let u = trial_potential(&material.density, memory, q);
    Ok((-material.params.e * field + df * u, mem))
}

fn stress_trial<T: Real>(material: &Material<T>, eps: T, memory: &MemoryState<T>, r: T) -> Result<T> {
    let (f, df) = material.shape_at(eps)?;
    let p = &material.params;
    let kf = p.kappa * f;
    let q = solve_scalar(memory, T::one() / kf, (r - p.e * eps) / kf, &material.density)?;
    Ok(-p.e * f * q + df * trial_potential(&material.density, memory, q))
}

impl<T: Real> BeamState<T> {
    /// Initial state from nodal displacement and velocity; element fields follow from `r0`.
    pub fn initial(model: &BeamModel<T>, u0: &[T], u1: &[T], r0: T) -> Result<Self> {
        let n = model.mesh.nodes();
        if u0.len() != n || u1.len() != n {
            return Err(Error::InvalidParameter(format!("initial data must have {n} nodal values")));
        }
        if u0[0] != T::zero() || u1[0] != T::zero() {
            return Err(Error::InvalidParameter("initial data must satisfy the clamp u(0) = 0".into()));
        }
        model.material.density.check_grid(&model.grid)?;
        let eps = strains(&model.mesh, u0);
        let rate = strains(&model.mesh, u1);
        let virgin = MemoryState::virgin(model.grid.clone());
        let elements = eps
            .iter()
            .zip(&rate)
            .map(|(&e, &ed)| {
                let (_, field, mem) = model.material.solve_field_from_d(e, r0, &virgin)?;
                model.material.state_at(T::zero(), e, ed, field, mem)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BeamState { t: T::zero(), u: u0.to_vec(), v: u1.to_vec(), elements })
    }

    pub fn zero(model: &BeamModel<T>) -> Result<Self> {
        let n = model.mesh.nodes();
        Self::initial(model, &vec![T::zero(); n], &vec![T::zero(); n], T::zero())
    }
}

/// Factored system `rho/dt M + (nu + c dt) K` on the free nodes `1..=N`.
struct Stepper<'a, T> {
    model: &'a BeamModel<T>,
    cfg: StepperConfig<T>,
    matrix: Tridiagonal<T>,
}

impl<'a, T: Real> Stepper<'a, T> {
    fn new(model: &'a BeamModel<T>, cfg: StepperConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let n = model.mesh.elements();
        let h = model.mesh.h();
        let p = &model.material.params;
        let mass = p.rho / cfg.dt;
        let stiff = (p.nu + p.c * cfg.dt) / h;
        let (m_diag, m_off) =
            if cfg.lumped_mass { (h, T::zero()) } else { (T::lit(4.0) * h / T::lit(6.0), h / T::lit(6.0)) };
        let mut diag = vec![mass * m_diag + T::two() * stiff; n];
        diag[n - 1] = mass * m_diag * T::half() + stiff;
        let off = vec![mass * m_off - stiff; n.saturating_sub(1)];
        Ok(Stepper { model, cfg, matrix: Tridiagonal::factor(&diag, &off) })
    }

    fn mass_times(&self, v: &[T], e: usize) -> (T, T) {
        let h = self.model.mesh.h();
        let (a, b) = (v[e], v[e + 1]);
        if self.cfg.lumped_mass {
            (h * T::half() * a, h * T::half() * b)
        } else {
            let six = T::lit(6.0);
            (h / six * (T::two() * a + b), h / six * (a + T::two() * b))
        }
    }

    fn kinetic(&self, v: &[T]) -> T {
        let rho = self.model.material.params.rho;
        (0..self.model.mesh.elements())
            .map(|e| {
                let (ma, mb) = self.mass_times(v, e);
                v[e] * ma + v[e + 1] * mb
            })
            .fold(T::zero(), |a, b| a + b)
            * rho
            * T::half()
    }

    fn solve_velocity(&self, state: &BeamState<T>, eps_n: &[T], w: &[T], s: T) -> Vec<T> {
        let n = self.model.mesh.elements();
        let p = &self.model.material.params;
        let mass = p.rho / self.cfg.dt;
        let mut rhs = vec![T::zero(); n + 1];
        for e in 0..n {
            let (ma, mb) = self.mass_times(&state.v, e);
            let flux = p.c * eps_n[e] + w[e];
            rhs[e] = rhs[e] + mass * ma + flux;
            rhs[e + 1] = rhs[e + 1] + mass * mb - flux;
        }
        rhs[n] = rhs[n] + s;
        let mut free = rhs.split_off(1);
        self.matrix.solve(&mut free);
        let mut v = Vec::with_capacity(n + 1);
        v.push(T::zero());
        v.extend(free);
        v
    }

    fn step(&self, state: &BeamState<T>, boundary: &BoundaryData<T>) -> Result<(BeamState<T>, StepInfo<T>)> {
        let model = self.model;
        let mesh = &model.mesh;
        let material = &model.material;
        let dt = self.cfg.dt;
        let h = mesh.h();
        let t_new = state.t + dt;
        let r_new = boundary.r.at(t_new);
        let s_new = boundary.s.at(t_new);
        let eps_n = strains(mesh, &state.u);

        let mut rate: Vec<T> = state.elements.iter().map(|el| el.eps_dot).collect();
        let mut info = StepInfo { iterations: 0, last_update: T::infinity() };
        let mut v_new = Vec::new();
        for it in 1..=self.cfg.picard_max {
            let w = state
                .elements
                .par_iter()
                .enumerate()
                .map(|(e, el)| stress_trial(material, eps_n[e] + dt * rate[e], &el.memory, r_new))
                .collect::<Result<Vec<_>>>()?;
            v_new = self.solve_velocity(state, &eps_n, &w, s_new);
            let next_rate = strains(mesh, &v_new);
            let diff = next_rate
                .iter()
                .zip(&rate)
                .map(|(&a, &b)| (a - b) * (a - b))
                .fold(T::zero(), |acc, x| acc + x * h)
                .sqrt();
            rate = next_rate;
            info = StepInfo { iterations: it, last_update: diff };
            if diff < self.cfg.picard_tol {
                break;
            }
        }
        if !(info.last_update < self.cfg.picard_tol) {
            return Err(Error::StepDivergence {
                iterations: info.iterations,
                t: t_new.to_f64().unwrap_or(f64::NAN),
                last_update: info.last_update.to_f64().unwrap_or(f64::NAN),
            });
        }

        let u_new: Vec<T> = state.u.iter().zip(&v_new).map(|(&u, &v)| u + dt * v).collect();
        let eps_new = strains(mesh, &u_new);
        let elements = state
            .elements
            .par_iter()
            .enumerate()
            .map(|(e, el)| {
                let (_, field, mem) = material.solve_field_from_d(eps_new[e], r_new, &el.memory)?;
                material.state_at(t_new, eps_new[e], rate[e], field, mem)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((BeamState { t: t_new, u: u_new, v: v_new, elements }, info))
    }
}

/// Advances one backward-Euler step.
pub fn step<T: Real>(
    model: &BeamModel<T>,
    state: &BeamState<T>,
    boundary: &BoundaryData<T>,
    cfg: &StepperConfig<T>,
) -> Result<(BeamState<T>, StepInfo<T>)> {
    Stepper::new(model, *cfg)?.step(state, boundary)
}

/// Integrates from `initial` to `t_end` (rounded to whole steps), keeping snapshots every
/// `cfg.output_stride` steps and an energy record every step.
pub fn simulate<T: Real>(
    model: &BeamModel<T>,
    initial: &BeamState<T>,
    boundary: &BoundaryData<T>,
    t_end: T,
    cfg: &StepperConfig<T>,
) -> Result<BeamRun<T>> {
    boundary.r.validate()?;
    boundary.s.validate()?;
    let stepper = Stepper::new(model, *cfg)?;
    let steps = (t_end / cfg.dt).round().to_usize().unwrap_or(0);
    let mut acc = EnergyAccumulator::new(model, initial, stepper.kinetic(&initial.v))?;
    let mut run = BeamRun { snapshots: vec![initial.clone()], energy: vec![acc.record()], steps: Vec::new() };
    let mut state = initial.clone();
    for k in 1..=steps {
        let (mut next, info) = stepper.step(&state, boundary)?;
        next.t = initial.t + T::of_usize(k) * cfg.dt;
        for el in &mut next.elements {
            el.t = next.t;
        }
        acc.advance(model, boundary, &state, &next, stepper.kinetic(&next.v), cfg.dt)?;
        run.energy.push(acc.record());
        run.steps.push(info);
        if k % cfg.output_stride == 0 || k == steps {
            run.snapshots.push(next.clone());
        }
        state = next;
    }
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::{energy_audit, Signal};
    use crate::constitutive::MaterialParams;
    use crate::hysteresis::PreisachDensity;

    fn model(n: usize, density: PreisachDensity<f64>, params: MaterialParams<f64>) -> BeamModel<f64> {
        let material = Material::new(params, density).unwrap();
        let grid = material.grid(100, 1.0).unwrap();
        BeamModel { mesh: BeamMesh::new(1.0, n).unwrap(), material, grid }
    }

    fn linear(n: usize, nu: f64) -> BeamModel<f64> {
        model(n, PreisachDensity::Zero, MaterialParams { nu, ..MaterialParams::default() })
    }

    /// `u(l, t)` for the damped step load from rest, by modal superposition.
    fn modal_tip(s0: f64, c: f64, nu: f64, rho: f64, t: f64) -> f64 {
        let mut u = s0 / c;
        for n in 0..20000 {
            let k = (n as f64 + 0.5) * std::f64::consts::PI;
            let amp = -2.0 * s0 / (c * k * k);
            let alpha = nu * k * k / (2.0 * rho);
            let disc = c * k * k / rho - alpha * alpha;
            let a = if disc > 0.0 {
                let w = disc.sqrt();
                (-alpha * t).exp() * ((w * t).cos() + alpha / w * (w * t).sin())
            } else {
                let s = (-disc).sqrt();
                let (l1, l2) = (-alpha + s, -alpha - s);
                (l2 * (l1 * t).exp() - l1 * (l2 * t).exp()) / (l2 - l1)
            };
            u += amp * a;
        }
        u
    }

    #[test]
    fn zero_data_stays_zero() {
        let m = model(16, PreisachDensity::Projection, MaterialParams { nu: 0.01, ..MaterialParams::default() });
        let s0 = BeamState::zero(&m).unwrap();
        let cfg = StepperConfig { output_stride: 5, ..StepperConfig::default() };
        let run = simulate(&m, &s0, &BoundaryData::zero(), 0.02, &cfg).unwrap();
        for s in &run.snapshots {
            assert!(s.u.iter().chain(&s.v).all(|&x| x == 0.0));
        }
        assert!(run.energy.iter().all(|e| e.kinetic == 0.0 && e.residual == 0.0));
        assert_eq!(run.snapshots.len(), 5);
    }

    #[test]
    fn functional_examples() {
        let lin = linear(4, 0.0);
        let virgin = MemoryState::virgin(lin.grid.clone());
        assert_eq!(hysteretic_stress_functional(&lin.material, 0.3, &virgin, 0.2).unwrap().0, 0.0);

        let m = model(4, PreisachDensity::Projection, MaterialParams::default());
        let virgin = MemoryState::virgin(m.grid.clone());
        assert_eq!(hysteretic_stress_functional(&m.material, 0.0, &virgin, 0.0).unwrap().0, 0.0);
        // r large enough to saturate: q = (r - 1/2)/(kappa f) >= 1
        let (w, mem) = hysteretic_stress_functional(&m.material, 0.0, &virgin, 0.6).unwrap();
        assert!((w + 1.0 / 6.0).abs() < 1e-4, "W = {w}");
        assert!(mem.input() > 1.0);
    }

    #[test]
    fn steady_state_under_constant_traction() {
        let m = linear(16, 1.0);
        let s0 = 0.05;
        let b = BoundaryData { r: Signal::Constant(0.0), s: Signal::Constant(s0) };
        let cfg = StepperConfig { dt: 1e-2, output_stride: 1000, ..StepperConfig::default() };
        let run = simulate(&m, &BeamState::zero(&m).unwrap(), &b, 40.0, &cfg).unwrap();
        let last = run.snapshots.last().unwrap();
        for i in 0..m.mesh.nodes() {
            assert!((last.u[i] - s0 * m.mesh.x(i)).abs() < 1e-6);
        }
        assert_eq!(last.u[0], 0.0);
    }

    #[test]
    fn matches_modal_solution() {
        let (s0, nu) = (0.05, 0.1);
        let m = linear(64, nu);
        let b = BoundaryData { r: Signal::Constant(0.0), s: Signal::Constant(s0) };
        let cfg = StepperConfig { dt: 5e-4, output_stride: 100, ..StepperConfig::default() };
        let run = simulate(&m, &BeamState::zero(&m).unwrap(), &b, 2.0, &cfg).unwrap();
        for snap in run.snapshots.iter().skip(1) {
            let exact = modal_tip(s0, 1.0, nu, 1.0, snap.t);
            let got = snap.u[64];
            assert!((got - exact).abs() < 1e-4, "t = {}: {got} vs {exact}", snap.t);
        }
    }

    #[test]
    fn hysteretic_run_balances_energy() {
        let params = MaterialParams { nu: 0.01, ..MaterialParams::default() };
        let m = model(16, PreisachDensity::Projection, params);
        let b = BoundaryData { r: Signal::Sine { amplitude: 0.3, period: 1.0, offset: 0.0 }, s: Signal::Constant(0.0) };
        let cfg = StepperConfig { dt: 2e-3, output_stride: 50, ..StepperConfig::default() };
        let run = simulate(&m, &BeamState::zero(&m).unwrap(), &b, 1.0, &cfg).unwrap();
        let last = run.energy.last().unwrap();
        assert!(last.diss_hyst > 0.0);
        for w in run.energy.windows(2) {
            assert!(w[1].diss_hyst - w[0].diss_hyst >= -1e-12);
        }
        let audit = energy_audit(&run.energy);
        assert_eq!(audit.len(), run.energy.len() - 1);
        assert!(last.residual.abs() < 0.05 * (last.work_boundary.abs() + last.diss_hyst), "{last:?}");
        for s in &run.snapshots {
            assert_eq!(s.u[0], 0.0);
            for el in &s.elements {
                el.memory.check_invariants(1e-12).unwrap();
            }
        }
        assert!(run.steps.iter().all(|s| s.iterations <= 50));
    }

    #[test]
    fn mesh_and_config_validation() {
        assert!(BeamMesh::<f64>::new(1.0, 0).is_err());
        assert!(BeamMesh::<f64>::new(-1.0, 4).is_err());
        let m = linear(4, 0.0);
        let bad = StepperConfig { dt: 0.0, ..StepperConfig::default() };
        assert!(step(&m, &BeamState::zero(&m).unwrap(), &BoundaryData::zero(), &bad).is_err());
        assert!(BeamState::initial(&m, &[1.0; 5], &[0.0; 5], 0.0).is_err());
    }
}
