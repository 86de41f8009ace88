use std::sync::Arc;

use proptest::prelude::*;

use ferrohyst::hysteresis::{
    dissipation_increment, play_init, play_update, preisach_output, MemoryState, PreisachDensity, RGrid,
};
use ferrohyst::inversion::{forward_trajectory, invert_trajectory, InversionProblem};

fn grid(m: usize) -> Arc<RGrid<f64>> {
    Arc::new(RGrid::uniform(m, 1.0).unwrap())
}

fn inputs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 2..40)
}

proptest! {
    #[test]
    fn play_stays_within_radius(q in inputs(), r in 0.01f64..1.5) {
        let mut xi = play_init(q[0], r).unwrap();
        prop_assert!((xi - q[0]).abs() <= r + 1e-15);
        for &x in &q[1..] {
            let next = play_update(xi, x, r).unwrap();
            prop_assert!((next - x).abs() <= r + 1e-15);
            // moves only when the constraint is active
            if next != xi {
                prop_assert!(((next - x).abs() - r).abs() <= 1e-15);
            }
            xi = next;
        }
    }

    #[test]
    fn play_composition(q in inputs(), r1 in 0.01f64..1.0, dr in 0.01f64..1.0) {
        let run = |input: &[f64], r: f64| {
            let mut xi = play_init(input[0], r).unwrap();
            let mut out = vec![xi];
            for &x in &input[1..] {
                xi = play_update(xi, x, r).unwrap();
                out.push(xi);
            }
            out
        };
        let composed = run(&run(&q, r1), dr);
        let direct = run(&q, r1 + dr);
        for (a, b) in composed.iter().zip(&direct) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn memory_profile_is_one_lipschitz(q in inputs()) {
        let g = grid(64);
        let mut mem = MemoryState::virgin(g.clone());
        for &x in &q {
            mem.advance(x);
            let (xi, r) = (mem.xi(), g.radii());
            for j in 1..xi.len() {
                prop_assert!((xi[j] - xi[j - 1]).abs() <= r[j] - r[j - 1] + 1e-12);
            }
        }
    }

    #[test]
    fn output_is_monotone_and_lipschitz_in_input(q in inputs(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let d = PreisachDensity::Projection;
        let mut mem = MemoryState::virgin(grid(100));
        for &x in &q {
            mem.advance(x);
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (pl, ph) = (preisach_output(&d, &mem.evolve(lo)).unwrap(), preisach_output(&d, &mem.evolve(hi)).unwrap());
        prop_assert!(pl <= ph);
        prop_assert!(ph - pl <= hi - lo + 1e-12);
        prop_assert!(pl.abs() <= 0.5 + 1e-12 && ph.abs() <= 0.5 + 1e-12);
    }

    #[test]
    fn dissipation_nonnegative(q in inputs()) {
        let d = PreisachDensity::Projection;
        let mut mem = MemoryState::virgin(grid(100));
        for &x in &q {
            let next = mem.evolve(x);
            prop_assert!(dissipation_increment(&d, &mem, &next, x).unwrap() >= -1e-14);
            mem = next;
        }
    }

    #[test]
    fn minor_loops_close(q in inputs(), a in -2.0f64..2.0) {
        let mut mem = MemoryState::virgin(grid(50));
        for &x in &q {
            mem.advance(x);
        }
        let start = mem.input();
        let there = mem.evolve(a);
        let back = there.evolve(start);
        let again = back.evolve(a);
        prop_assert_eq!(again.xi(), there.xi());
        let closed = again.evolve(start);
        prop_assert_eq!(closed.xi(), back.xi());
    }

    #[test]
    fn repeated_inputs_are_stationary(q in inputs(), reps in 1usize..4) {
        let mut once = MemoryState::virgin(grid(50));
        let mut repeated = once.clone();
        for &x in &q {
            once.advance(x);
            for _ in 0..reps {
                repeated.advance(x);
            }
        }
        prop_assert_eq!(once.xi(), repeated.xi());
    }

    #[test]
    fn inversion_recovers_input(q in prop::collection::vec(-1.5f64..1.5, 2..30), b in 0.0f64..3.0) {
        let initial = MemoryState::virgin(grid(100));
        let d = PreisachDensity::Projection;
        let bs = vec![b; q.len()];
        let w = forward_trajectory(&initial, &d, &bs, &q).unwrap();
        let recovered = invert_trajectory(&InversionProblem { b: bs, w, density: d, initial_memory: initial }).unwrap();
        for (x, y) in recovered.iter().zip(&q) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }
}
