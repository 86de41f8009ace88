use std::sync::Arc;

use ferrohyst::beam::{simulate, BeamMesh, BeamModel, BeamState, BoundaryData, Signal, StepperConfig};
use ferrohyst::constitutive::{clausius_duhem_residuals, drive_field, Material, MaterialParams, ShapeFunction};
use ferrohyst::hysteresis::{potential_output, preisach_output, MemoryState, PreisachDensity, RGrid};
use ferrohyst::inversion::{forward_trajectory, invert_trajectory, InversionProblem};

#[test]
fn saturation_in_f32() {
    let grid = Arc::new(RGrid::<f32>::uniform(200, 1.0).unwrap());
    let mem = MemoryState::virgin(grid).evolve(2.0);
    let d = PreisachDensity::<f32>::Projection;
    assert!((preisach_output(&d, &mem).unwrap() - 0.5).abs() < 1e-5);
    assert!((potential_output(&d, &mem).unwrap() - 1.0 / 6.0).abs() < 1e-4);
}

#[test]
fn inversion_round_trip_in_f32() {
    let grid = Arc::new(RGrid::<f32>::uniform(100, 1.0).unwrap());
    let q: Vec<f32> = (0..60).map(|k| 1.2 * (k as f32 * 0.3).sin()).collect();
    let b = vec![0.7f32; q.len()];
    let initial = MemoryState::virgin(grid);
    let d = PreisachDensity::Projection;
    let w = forward_trajectory(&initial, &d, &b, &q).unwrap();
    let back = invert_trajectory(&InversionProblem { b, w, density: d, initial_memory: initial }).unwrap();
    for (x, y) in back.iter().zip(&q) {
        assert!((x - y).abs() < 1e-5, "{x} vs {y}");
    }
}

#[test]
fn field_drive_in_f32() {
    let params = MaterialParams::<f32> { shape: ShapeFunction::Quartic, ..MaterialParams::default() };
    let material = Material::new(params, PreisachDensity::Projection).unwrap();
    let start = material.virgin_state(material.grid(100, 1.0).unwrap()).unwrap();
    let n = 200;
    let t: Vec<f32> = (1..=n).map(|k| k as f32 / n as f32).collect();
    let field: Vec<f32> = t.iter().map(|&s| (std::f32::consts::TAU * s).sin()).collect();
    let (traj, _) = drive_field(&material, &start, &t, &field, &vec![0.0; n]).unwrap();
    assert_eq!(traj.len(), n + 1);
    let worst = clausius_duhem_residuals(&traj).into_iter().fold(f32::INFINITY, f32::min);
    assert!(worst > -1e-4, "{worst}");
}

#[test]
fn beam_step_in_f32() {
    let material =
        Material::new(MaterialParams::<f32> { nu: 0.05, ..MaterialParams::default() }, PreisachDensity::Projection)
            .unwrap();
    let grid = material.grid(50, 1.0).unwrap();
    let model = BeamModel { mesh: BeamMesh::new(1.0, 16).unwrap(), material, grid };
    let boundary =
        BoundaryData { r: Signal::Sine { amplitude: 0.55, period: 1.0, offset: 0.0 }, s: Signal::Constant(0.0) };
    let cfg = StepperConfig { dt: 4e-3, picard_tol: 1e-5, output_stride: 50, ..StepperConfig::default() };
    let run = simulate(&model, &BeamState::zero(&model).unwrap(), &boundary, 0.4, &cfg).unwrap();
    let last = run.energy.last().unwrap();
    assert!(last.diss_hyst >= 0.0 && last.residual.is_finite());
}
