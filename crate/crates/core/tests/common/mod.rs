#![allow(dead_code)]

use colored_limits::langevin::InitialCondition;
use colored_limits::noise::FieldEvaluator;
use colored_limits::System;

/// Classical RK4 for `ẋ = y`, `m ẏ = b(x) + f(x) η/ε − y` with frozen `η`,
/// sampled every `refine` internal steps so that the output nodes coincide
/// with a grid of step `dt`.
pub fn rk4_frozen(
    system: &System,
    eta: &[f64],
    epsilon: f64,
    relaxation: f64,
    init: &InitialCondition,
    dt: f64,
    steps: usize,
    refine: usize,
) -> Vec<Vec<f64>> {
    let d = system.dim();
    let field = FieldEvaluator::new(&system.spectrum);
    let rhs = |x: &[f64], y: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let mut b = vec![0.0; d];
        let mut v = vec![0.0; d];
        system.drift.eval(x, &mut b);
        field.field(eta, x, &mut v);
        let dy = (0..d).map(|i| (b[i] + v[i] / epsilon - y[i]) / relaxation).collect();
        (y.to_vec(), dy)
    };
    let h = dt / refine as f64;
    let mut x = init.x0.clone();
    let mut y = init.y0.clone().unwrap_or_else(|| vec![0.0; d]);
    let axpy = |a: &[f64], s: f64, b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p + s * q).collect() };
    let mut out = vec![x.clone()];
    for _ in 0..steps {
        for _ in 0..refine {
            let (k1x, k1y) = rhs(&x, &y);
            let (k2x, k2y) = rhs(&axpy(&x, h / 2.0, &k1x), &axpy(&y, h / 2.0, &k1y));
            let (k3x, k3y) = rhs(&axpy(&x, h / 2.0, &k2x), &axpy(&y, h / 2.0, &k2y));
            let (k4x, k4y) = rhs(&axpy(&x, h, &k3x), &axpy(&y, h, &k3y));
            for i in 0..d {
                x[i] += h / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
                y[i] += h / 6.0 * (k1y[i] + 2.0 * k2y[i] + 2.0 * k3y[i] + k4y[i]);
            }
        }
        out.push(x.clone());
    }
    out
}

/// `max_n ‖x_n − oracle_n‖` for a row-major history.
pub fn global_error(history_x: &[f64], dim: usize, oracle: &[Vec<f64>]) -> f64 {
    oracle
        .iter()
        .enumerate()
        .map(|(n, o)| {
            let x = &history_x[n * dim..(n + 1) * dim];
            x.iter().zip(o).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max)
}
