//! Derivative-free minimization: Nelder–Mead with seeded random restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Objective evaluations allowed for each start.
    pub max_evals: usize,
    /// Number of independent starts; the first begins at the supplied point.
    pub restarts: usize,
    /// Stop a run once the simplex values agree to within this spread.
    pub f_tol: f64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { max_evals: 2000, restarts: 5, f_tol: 1e-12, initial_step: 0.6, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Whether the best run met `f_tol` before the budget ran out.
    pub converged: bool,
}

/// Minimizes `f` starting from `x0`, then from uniform points in
/// `[-π, π]^d` for the remaining restarts. Returns the best point seen.
pub fn minimize(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], cfg: &OptimizerConfig) -> Minimum {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut used = 0;
    let mut best: Option<Minimum> = None;
    for r in 0..cfg.restarts.max(1) {
        let start: Vec<f64> = if r == 0 {
            x0.to_vec()
        } else {
            x0.iter().map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect()
        };
        let run = nelder_mead(&mut f, &start, cfg.max_evals, cfg.f_tol, cfg.initial_step);
        used += run.evaluations;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    let mut best = best.expect("at least one start");
    best.evaluations = used;
    best
}

/// Standard Nelder–Mead (reflection 1, expansion 2, contraction ½,
/// shrink ½).
pub fn nelder_mead(f: &mut impl FnMut(&[f64]) -> f64, x0: &[f64], max_evals: usize, f_tol: f64, step: f64) -> Minimum {
    let d = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };
    if d == 0 {
        return Minimum { x: vec![], value: eval(x0, &mut evals), evaluations: evals, converged: true };
    }

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), eval(x0, &mut evals)));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let mut converged = false;
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[d].1 - simplex[0].1 <= f_tol {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..d).map(|j| simplex[..d].iter().map(|p| p.0[j]).sum::<f64>() / d as f64).collect();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[d].0).map(|(c, w)| c + t * (c - w)).collect()
        };

        let xr = along(1.0);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe, &mut evals);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
            continue;
        }
        // outside contraction if the reflection improved on the worst point
        let xc = along(if fr < simplex[d].1 { 0.5 } else { -0.5 });
        let fc = eval(&xc, &mut evals);
        if fc < simplex[d].1.min(fr) {
            simplex[d] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for p in simplex.iter_mut().skip(1) {
            p.0 = best.iter().zip(&p.0).map(|(b, x)| b + 0.5 * (x - b)).collect();
            p.1 = eval(&p.0, &mut evals);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, evaluations: evals, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let m = minimize(f, &[0.0, 0.0], &OptimizerConfig::default());
        assert!(m.value < 1e-10, "{m:?}");
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] + 0.5).abs() < 1e-4);
        assert!(m.evaluations <= 5 * 2000);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(&mut { f }, &[-1.2, 1.0], 5000, 1e-14, 0.5);
        assert!(m.value < 1e-8, "{m:?}");
    }

    #[test]
    fn budget_respected_and_seeded() {
        let f = |x: &[f64]| x.iter().map(|v| v.sin()).sum::<f64>();
        let cfg = OptimizerConfig { max_evals: 300, restarts: 3, seed: 9, ..Default::default() };
        let a = minimize(f, &[0.3; 4], &cfg);
        let b = minimize(f, &[0.3; 4], &cfg);
        assert_eq!(a, b);
        // a final iteration may overrun by at most one shrink
        assert!(a.evaluations <= 3 * (300 + 5));
    }
}
