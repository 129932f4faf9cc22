//! Derivative-free box-constrained maximization: a cell-centered grid scan
//! followed by Nelder-Mead refinement from the best cell, with seeded restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Grid cells per axis.
    pub grid_resolution: usize,
    /// Nelder-Mead iterations per run.
    pub refine_iters: usize,
    /// Simplex spread in objective value at which a run stops.
    pub tol: f64,
    pub seed: u64,
    /// Extra refinement runs started near the incumbent.
    pub restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_resolution: 21,
            refine_iters: 500,
            tol: 1e-13,
            seed: 0,
            restarts: 2,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_resolution < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid resolution must be >= 2, got {}",
                self.grid_resolution
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub argmax: Vec<f64>,
    pub value: f64,
    /// Best grid sample.
    pub grid_best: ScanPoint,
    /// Every grid sample, last axis varying fastest.
    pub scan: Vec<ScanPoint>,
    /// Incumbent value after the scan and after each refinement iteration.
    pub history: Vec<f64>,
}

fn check_bounds(bounds: &[(f64, f64)]) -> Result<()> {
    if bounds.is_empty() {
        return Err(Error::InvalidArgument("empty search box".into()));
    }
    for (i, &(lo, hi)) in bounds.iter().enumerate() {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!("axis {i}: invalid bounds [{lo}, {hi}]")));
        }
    }
    Ok(())
}

/// Cell centers lo + (i + ½)(hi - lo)/n.
pub fn cell_centers(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect()
}

/// Folds `x` back into [lo, hi] by mirror reflection.
pub fn reflect_into(x: f64, lo: f64, hi: f64) -> f64 {
    let w = hi - lo;
    let mut t = (x - lo).rem_euclid(2.0 * w);
    if t > w {
        t = 2.0 * w - t;
    }
    lo + t
}

fn evaluate<F: Fn(&[f64]) -> f64>(objective: &F, x: &[f64]) -> Result<f64> {
    let v = objective(x);
    if v.is_nan() {
        return Err(Error::ObjectiveNaN { point: x.to_vec() });
    }
    Ok(v)
}

/// Evaluates the objective on the cell-centered grid.
pub fn grid_scan<F>(objective: &F, bounds: &[(f64, f64)], resolution: usize) -> Result<Vec<ScanPoint>>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    check_bounds(bounds)?;
    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(lo, hi)| cell_centers(lo, hi, resolution))
        .collect();
    let total = resolution.pow(bounds.len() as u32);
    (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rem = flat;
            let mut point = vec![0.0; axes.len()];
            for (d, axis) in axes.iter().enumerate().rev() {
                point[d] = axis[rem % resolution];
                rem /= resolution;
            }
            let value = evaluate(objective, &point)?;
            Ok(ScanPoint { point, value })
        })
        .collect()
}

struct Refiner<'a, F> {
    objective: &'a F,
    bounds: &'a [(f64, f64)],
    best: ScanPoint,
    history: Vec<f64>,
}

impl<F: Fn(&[f64]) -> f64> Refiner<'_, F> {
    fn eval(&mut self, x: Vec<f64>) -> Result<(Vec<f64>, f64)> {
        let x: Vec<f64> = x
            .iter()
            .zip(self.bounds)
            .map(|(&v, &(lo, hi))| reflect_into(v, lo, hi))
            .collect();
        let v = evaluate(self.objective, &x)?;
        if v > self.best.value {
            self.best = ScanPoint {
                point: x.clone(),
                value: v,
            };
        }
        Ok((x, v))
    }

    /// Nelder-Mead on -objective from `start` with per-axis initial steps.
    fn run(&mut self, start: &[f64], steps: &[f64], iters: usize, tol: f64) -> Result<()> {
        let n = start.len();
        let mut simplex = vec![self.eval(start.to_vec())?];
        for d in 0..n {
            let mut x = start.to_vec();
            x[d] += steps[d];
            simplex.push(self.eval(x)?);
        }
        for _ in 0..iters {
            simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
            self.history.push(self.best.value);
            if (simplex[0].1 - simplex[n].1).abs() < tol {
                break;
            }
            let centroid: Vec<f64> = (0..n)
                .map(|d| simplex[..n].iter().map(|p| p.0[d]).sum::<f64>() / n as f64)
                .collect();
            let along = |t: f64, worst: &[f64]| -> Vec<f64> {
                centroid.iter().zip(worst).map(|(c, w)| c + t * (c - w)).collect()
            };
            let worst = simplex[n].0.clone();
            let reflected = self.eval(along(1.0, &worst))?;
            if reflected.1 > simplex[0].1 {
                let expanded = self.eval(along(2.0, &worst))?;
                simplex[n] = if expanded.1 > reflected.1 { expanded } else { reflected };
            } else if reflected.1 > simplex[n - 1].1 {
                simplex[n] = reflected;
            } else {
                let contracted = if reflected.1 > simplex[n].1 {
                    self.eval(along(0.5, &worst))?
                } else {
                    self.eval(along(-0.5, &worst))?
                };
                if contracted.1 > simplex[n].1.max(reflected.1) {
                    simplex[n] = contracted;
                } else {
                    let top = simplex[0].0.clone();
                    for p in simplex.iter_mut().skip(1) {
                        let x: Vec<f64> = top.iter().zip(&p.0).map(|(b, v)| b + 0.5 * (v - b)).collect();
                        *p = self.eval(x)?;
                    }
                }
            }
        }
        self.history.push(self.best.value);
        Ok(())
    }
}

/// Maximizes `objective` over the box. The result is a deterministic function
/// of (objective, bounds, cfg).
pub fn maximize<F>(objective: F, bounds: &[(f64, f64)], cfg: &SearchConfig) -> Result<SearchResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    let scan = grid_scan(&objective, bounds, cfg.grid_resolution)?;
    let mut grid_best = scan[0].clone();
    for p in &scan[1..] {
        if p.value > grid_best.value {
            grid_best = p.clone();
        }
    }
    let steps: Vec<f64> = bounds
        .iter()
        .map(|&(lo, hi)| (hi - lo) / cfg.grid_resolution as f64)
        .collect();
    let mut refiner = Refiner {
        objective: &objective,
        bounds,
        best: grid_best.clone(),
        history: vec![grid_best.value],
    };
    refiner.run(&grid_best.point, &steps, cfg.refine_iters, cfg.tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.restarts {
        let start: Vec<f64> = refiner
            .best
            .point
            .iter()
            .zip(&steps)
            .map(|(&x, &h)| x + h * rng.gen_range(-0.5..0.5))
            .collect();
        let restart_steps: Vec<f64> = steps.iter().map(|h| h * 0.25).collect();
        refiner.run(&start, &restart_steps, cfg.refine_iters, cfg.tol)?;
    }
    Ok(SearchResult {
        argmax: refiner.best.point.clone(),
        value: refiner.best.value,
        grid_best,
        scan,
        history: refiner.history,
    })
}
