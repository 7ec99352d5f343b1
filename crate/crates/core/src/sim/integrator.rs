//! Dormand–Prince 5(4) with a fixed step.

use serde::{Deserialize, Serialize};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Advances `y` by one step `h` from `t`; returns the max-norm difference
/// between the fifth- and fourth-order solutions.
pub fn dopri5_step<F>(rhs: &mut F, t: f64, y: &mut [f64], h: f64) -> f64
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y.len();
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    for s in 0..7 {
        for i in 0..n {
            let mut acc = y[i];
            for (j, kj) in k.iter().enumerate().take(s) {
                acc += h * A[s][j] * kj[i];
            }
            tmp[i] = acc;
        }
        rhs(t + C[s] * h, &tmp, &mut k[s]);
    }
    let mut err: f64 = 0.0;
    for i in 0..n {
        let mut hi = 0.0;
        let mut lo = 0.0;
        for s in 0..7 {
            hi += B5[s] * k[s][i];
            lo += B4[s] * k[s][i];
        }
        err = err.max((h * (hi - lo)).abs());
        y[i] += h * hi;
    }
    err
}

/// Integrates from `t0` to `t1` with `steps` equal steps.
pub fn integrate<F>(mut rhs: F, y0: &[f64], t0: f64, t1: f64, steps: usize) -> Vec<f64>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let h = (t1 - t0) / steps as f64;
    let mut y = y0.to_vec();
    for s in 0..steps {
        dopri5_step(&mut rhs, t0 + s as f64 * h, &mut y, h);
    }
    y
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfTestReport {
    /// Max error against `exp(-t)` on [0, 5].
    pub decay_error: f64,
    /// Max state error of a unit harmonic oscillator after one period.
    pub oscillator_error: f64,
    pub passed: bool,
}

pub const DECAY_TOLERANCE: f64 = 1e-6;
pub const OSCILLATOR_TOLERANCE: f64 = 1e-5;

/// Checks the integrator at the simulator's step size on two closed-form problems.
pub fn integrator_self_test() -> SelfTestReport {
    let h: f64 = 0.06;
    let mut y = [1.0];
    let mut decay_error: f64 = 0.0;
    let steps = (5.0 / h).ceil() as usize;
    let mut t: f64 = 0.0;
    let mut decay = |_: f64, y: &[f64], d: &mut [f64]| d[0] = -y[0];
    for s in 0..steps {
        let step = (5.0 - t).min(h);
        dopri5_step(&mut decay, t, &mut y, step);
        t = if s + 1 == steps { 5.0 } else { (s + 1) as f64 * h };
        decay_error = decay_error.max((y[0] - (-t).exp()).abs());
    }

    let period = 2.0 * std::f64::consts::PI;
    let n = (period / h).ceil() as usize;
    let end = integrate(
        |_, y: &[f64], d: &mut [f64]| {
            d[0] = y[1];
            d[1] = -y[0];
        },
        &[1.0, 0.0],
        0.0,
        period,
        n,
    );
    let oscillator_error = (end[0] - 1.0).abs().max(end[1].abs());
    SelfTestReport {
        decay_error,
        oscillator_error,
        passed: decay_error < DECAY_TOLERANCE && oscillator_error < OSCILLATOR_TOLERANCE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_stays_constant() {
        let y = integrate(|_, _, d: &mut [f64]| d[0] = 0.0, &[3.25], 0.0, 4.0, 50);
        assert_eq!(y, vec![3.25]);
    }

    #[test]
    fn polynomial_exact_to_fifth_order() {
        // y' = 5 t^4 -> y = t^5, integrated exactly by a fifth-order method
        let y = integrate(|t, _, d: &mut [f64]| d[0] = 5.0 * t.powi(4), &[0.0], 0.0, 2.0, 7);
        assert!((y[0] - 32.0).abs() < 1e-12);
    }

    #[test]
    fn error_estimate_shrinks_with_step() {
        let mut f = |_: f64, y: &[f64], d: &mut [f64]| d[0] = -y[0];
        let e1 = dopri5_step(&mut f, 0.0, &mut [1.0], 0.2);
        let e2 = dopri5_step(&mut f, 0.0, &mut [1.0], 0.1);
        assert!(e2 < e1 / 16.0);
    }

    #[test]
    fn self_test_passes() {
        let r = integrator_self_test();
        assert!(r.passed, "{r:?}");
    }
}
