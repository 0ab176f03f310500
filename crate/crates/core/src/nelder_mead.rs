//! Nelder–Mead simplex search with an optional projection of every
//! proposal onto a feasible set.

#[derive(Debug, Clone, Copy)]
pub(crate) struct NelderMead {
    pub max_evals: usize,
    /// Stop when the spread of simplex values is below this.
    pub f_tol: f64,
    /// Stop when the simplex diameter is below this.
    pub x_tol: f64,
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_evals: 2000,
            f_tol: 1e-10,
            x_tol: 1e-10,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn minimize(
        &self,
        f: &dyn Fn(&[f64]) -> f64,
        x0: &[f64],
        project: &dyn Fn(&mut [f64]),
    ) -> Minimum {
        let dim = x0.len();
        let evals = std::cell::Cell::new(0usize);
        let eval = |x: &mut Vec<f64>| {
            project(x);
            evals.set(evals.get() + 1);
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        let mut start = x0.to_vec();
        let v0 = eval(&mut start);
        simplex.push((start, v0));
        for i in 0..dim {
            let mut x = simplex[0].0.clone();
            x[i] += self.initial_step;
            let v = eval(&mut x);
            simplex.push((x, v));
        }
        let mut converged = false;
        while evals.get() < self.max_evals {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[dim].1;
            let spread = (worst - best).abs();
            let size = simplex[1..]
                .iter()
                .map(|(x, _)| {
                    x.iter()
                        .zip(&simplex[0].0)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if spread <= self.f_tol * (1.0 + best.abs()) && size <= self.x_tol {
                converged = true;
                break;
            }
            let centroid: Vec<f64> = (0..dim)
                .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[dim].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };
            let mut xr = along(1.0);
            let fr = eval(&mut xr);
            if fr < simplex[0].1 {
                let mut xe = along(2.0);
                let fe = eval(&mut xe);
                simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[dim - 1].1 {
                simplex[dim] = (xr, fr);
            } else {
                let (mut xc, fc) = if fr < worst {
                    let mut x = along(0.5);
                    let v = eval(&mut x);
                    (x, v)
                } else {
                    let mut x = along(-0.5);
                    let v = eval(&mut x);
                    (x, v)
                };
                if fc < fr.min(worst) {
                    simplex[dim] = (std::mem::take(&mut xc), fc);
                } else {
                    let x0 = simplex[0].0.clone();
                    for k in 1..=dim {
                        let mut x: Vec<f64> = simplex[k]
                            .0
                            .iter()
                            .zip(&x0)
                            .map(|(a, b)| b + 0.5 * (a - b))
                            .collect();
                        let v = eval(&mut x);
                        simplex[k] = (x, v);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        Minimum {
            x,
            value,
            evals: evals.get(),
            converged,
        }
    }
}
