use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for case `case` of a suite: the seed selects the key, the case the stream, so
/// cases are independent of evaluation order.
pub fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

/// Turning points of a piecewise monotone input: `1..=max_segments` segments, values in
/// `[-amplitude, amplitude]`, starting at 0.
pub fn monotone_knots(rng: &mut ChaCha8Rng, max_segments: usize, amplitude: f64) -> Vec<f64> {
    let n = rng.gen_range(1..=max_segments);
    let mut knots = vec![0.0];
    for _ in 0..n {
        knots.push(rng.gen_range(-amplitude..=amplitude));
    }
    knots
}

/// Inserts up to `max_inner` sorted interior points into each segment of `knots` and marks
/// the positions of the original knots in the refined sequence.
pub fn refine(rng: &mut ChaCha8Rng, knots: &[f64], max_inner: usize) -> (Vec<f64>, Vec<usize>) {
    let mut out = vec![knots[0]];
    let mut marks = vec![0];
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (lo, hi) = (a.min(b), a.max(b));
        let mut fr: Vec<f64> = (0..rng.gen_range(0..=max_inner)).map(|_| rng.gen_range(0.0..1.0)).collect();
        fr.sort_by(|x, y| x.total_cmp(y));
        for s in fr {
            out.push((a + s * (b - a)).clamp(lo, hi));
            // occasional hold: the same value again
            if rng.gen_bool(0.2) {
                out.push(*out.last().unwrap());
            }
        }
        out.push(b);
        marks.push(out.len() - 1);
    }
    (out, marks)
}

/// Random walk of `n` samples with steps in `[-step, step]`, clipped to `[-amplitude, amplitude]`.
pub fn random_walk(rng: &mut ChaCha8Rng, n: usize, step: f64, amplitude: f64) -> Vec<f64> {
    let mut x = 0.0;
    (0..n)
        .map(|_| {
            x = (x + rng.gen_range(-step..=step)).clamp(-amplitude, amplitude);
            x
        })
        .collect()
}

/// Samples a piecewise linear program through `knots` with `per_segment` samples each.
pub fn sample_knots(knots: &[f64], per_segment: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(knots.len() * per_segment);
    for w in knots.windows(2) {
        for k in 1..=per_segment {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / per_segment as f64);
        }
    }
    out
}
