use super::config::Waveform;

/// Samples `periods` periods of unit period at `t_k = k / samples_per_period`, `k >= 1`.
/// Triangles start at 0, peak at a quarter period and return to 0.
pub fn sample_waveform(
    kind: Waveform,
    amplitude: f64,
    periods: usize,
    samples_per_period: usize,
) -> (Vec<f64>, Vec<f64>) {
    let n = periods * samples_per_period;
    let spp = samples_per_period as f64;
    let mut t = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for k in 1..=n {
        let i = k % samples_per_period;
        t.push(k as f64 / spp);
        let y = match kind {
            Waveform::Triangle => {
                // 4 i / spp, folded; exact at the quarter points when spp % 4 == 0
                let x = 4.0 * i as f64 / spp;
                if x <= 1.0 {
                    x
                } else if x <= 3.0 {
                    2.0 - x
                } else {
                    x - 4.0
                }
            }
            Waveform::Sine => (std::f64::consts::TAU * i as f64 / spp).sin(),
        };
        v.push(amplitude * y);
    }
    (t, v)
}

/// Linear ramp from `from` to `to` over `n` samples after `t0` with spacing `dt`.
pub fn ramp(t0: f64, dt: f64, from: f64, to: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    (1..=n)
        .map(|k| {
            let s = k as f64 / n as f64;
            (t0 + k as f64 * dt, from + (to - from) * s)
        })
        .unzip()
}
