//! Seeded multi-start direct search for polynomials with small `M_q(p)`
//! among those with all zeros in `K`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, best_lower_bound, FCheckReport, LocalDepthReport};
use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, GeometrySummary, Point};
use crate::nelder_mead::NelderMead;
use crate::norms::{self, BoundaryMeasureReport, CheckReport, InnerCurve, Norm, QuadratureConfig};
use crate::polynomials::{MonicPolynomial, ZeroSet};

/// How proposals leaving `K` are brought back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Projection {
    /// Nearest point of `K`.
    #[default]
    Clamp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Objective evaluations allowed per restart.
    pub max_iter: usize,
    pub seed: u64,
    /// Convergence tolerance on `M_q`, relative.
    pub tol: f64,
    pub projection: Projection,
    pub quadrature: QuadratureConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iter: 2000,
            seed: 0,
            tol: 1e-6,
            projection: Projection::Clamp,
            quadrature: QuadratureConfig::default(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Invalid("restarts must be >= 1".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::Invalid("max_iter must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Invalid(format!("tol must be > 0, got {}", self.tol)));
        }
        self.quadrature.validate()
    }
}

/// Seed of restart `index`: one splitmix64 step applied to
/// `master ^ (index · 0x9E3779B97F4A7C15)`.
pub fn restart_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartTrace {
    pub restart: usize,
    pub seed: u64,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub n: usize,
    pub q: Norm,
    pub best_zeros: ZeroSet,
    pub best_value: f64,
    pub best_restart: usize,
    pub trace: Vec<RestartTrace>,
    pub lower_bound: f64,
    pub lower_bound_name: Option<String>,
    /// `(best - lower) / lower`, absent when no bound applies.
    pub margin: Option<f64>,
    /// The best value fell below a certified lower bound.
    pub violation: bool,
}

/// Uniform point of `K` by rejection from the bounding box.
fn random_point(domain: &ConvexDomain, rng: &mut ChaCha8Rng) -> Point {
    let (lo, hi) = domain.bounding_box();
    loop {
        let z = Complex64::new(rng.gen_range(lo.re..=hi.re), rng.gen_range(lo.im..=hi.im));
        if domain.contains(z, 0.0) {
            return z;
        }
    }
}

pub fn random_polynomial(domain: &ConvexDomain, n: usize, seed: u64) -> Result<MonicPolynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MonicPolynomial::from_zeros((0..n).map(|_| random_point(domain, &mut rng)).collect())
}

fn decode(v: &[f64]) -> Vec<Point> {
    v.chunks(2).map(|w| Complex64::new(w[0], w[1])).collect()
}

fn run_restart(
    domain: &ConvexDomain,
    n: usize,
    norm: Norm,
    cfg: &SearchConfig,
    restart: usize,
) -> (RestartTrace, Vec<f64>) {
    let seed = restart_seed(cfg.seed, restart as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: Vec<f64> = (0..n)
        .flat_map(|_| {
            let z = random_point(domain, &mut rng);
            [z.re, z.im]
        })
        .collect();
    let objective = |v: &[f64]| {
        MonicPolynomial::from_zeros(decode(v))
            .and_then(|p| norms::oscillation(domain, &p, norm, &cfg.quadrature))
            .unwrap_or(f64::INFINITY)
    };
    let project = |v: &mut [f64]| {
        for w in v.chunks_mut(2) {
            let z = domain.project(Complex64::new(w[0], w[1]));
            w[0] = z.re;
            w[1] = z.im;
        }
    };
    let d = domain.diameter();
    let nm = NelderMead {
        max_evals: cfg.max_iter,
        f_tol: cfg.tol,
        x_tol: 1e-6 * d,
        initial_step: 0.1 * d,
    };
    let m = nm.minimize(&objective, &start, &project);
    (
        RestartTrace {
            restart,
            seed,
            value: m.value,
            iterations: m.evals,
            converged: m.converged,
        },
        m.x,
    )
}

/// Multi-start Nelder–Mead over the `2n` real coordinates of the zeros,
/// every proposal projected onto `K`. Restarts run in parallel; the best
/// value wins, ties going to the lower restart index.
pub fn minimize_oscillation(
    domain: &ConvexDomain,
    n: usize,
    norm: Norm,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    if n == 0 {
        return Err(Error::OutOfRange("degree must be >= 1".into()));
    }
    cfg.validate()?;
    let runs: Vec<(RestartTrace, Vec<f64>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(domain, n, norm, cfg, r))
        .collect();
    let mut best = 0;
    for (i, (t, _)) in runs.iter().enumerate() {
        if t.value < runs[best].0.value {
            best = i;
        }
    }
    let best_value = runs[best].0.value;
    let zeros = ZeroSet::new(decode(&runs[best].1))?;
    let lower = best_lower_bound(domain, n, norm);
    let lb = lower.value();
    let violation = best_value < lb * (1.0 - norms::COMPARE_TOL);
    Ok(SearchResult {
        n,
        q: norm,
        best_zeros: zeros,
        best_value,
        best_restart: best,
        trace: runs.into_iter().map(|(t, _)| t).collect(),
        lower_bound: lb,
        lower_bound_name: lower.best.map(|c| c.name),
        margin: (lb > 0.0).then(|| (best_value - lb) / lb),
        violation,
    })
}

/// Outcome of the inequality checks on one search result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyEntry {
    pub n: usize,
    pub q: Norm,
    pub search: SearchResult,
    pub measurement: BoundaryMeasureReport,
    pub checks: Vec<CheckReport>,
    pub localdepth: Option<LocalDepthReport>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub geometry: GeometrySummary,
    /// `h_K >= μ_K`.
    pub depth_check: CheckReport,
    pub f_check: FCheckReport,
    pub entries: Vec<VerifyEntry>,
    pub failures: Vec<String>,
    pub holds: bool,
}

/// Searches every `(n, q)` pair and checks the best polynomial against the
/// certified lower bound and the auxiliary inequalities, after the
/// geometric `h_K >= μ_K` and the `f > 0.7` checks. Failures are collected
/// rather than returned as errors.
pub fn verify_paper_bounds(
    domain: &ConvexDomain,
    n_list: &[usize],
    q_list: &[Norm],
    cfg: &SearchConfig,
) -> Result<VerifyReport> {
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    let geometry = domain.summarize();
    let depth_check = CheckReport::at_least("depth_vs_mu", geometry.depth, geometry.mu);
    if !depth_check.holds {
        failures.push(format!("h_K = {} < mu_K = {}", geometry.depth, geometry.mu));
    }
    let f_check = bounds::f_check(100_000)?;
    if !f_check.holds {
        failures.push(format!("f_check: min {} on the grid", f_check.grid_min));
    }
    for &n in n_list {
        for &norm in q_list {
            let search = minimize_oscillation(domain, n, norm, cfg)?;
            let p = MonicPolynomial::new(search.best_zeros.clone());
            let qc = &cfg.quadrature;
            let measurement = norms::oscillation_ratio(domain, &p, norm, qc)?;
            let mut checks = vec![
                CheckReport::at_least("best_lower_bound", search.best_value, search.lower_bound),
                norms::markov_check(domain, &p),
            ];
            let mut localdepth = None;
            if let Norm::Lq(q) = norm {
                checks.push(norms::nikolskii_check(domain, &p, q, qc)?);
                checks.extend(norms::h_mass_check(domain, &p, q, qc)?);
                checks.push(norms::gabriel_lower_check(domain, &p, q, qc)?);
                let inner = InnerCurve::Domain {
                    domain: domain.transformed(0.5, 0.5 * domain.centroid())?,
                };
                checks.push(norms::gabriel_check(domain, &inner, &p, q, qc)?);
                localdepth = Some(bounds::localdepth_pointwise_check(domain, &p, q, qc)?);
            }
            for c in &checks {
                if !c.holds {
                    failures.push(format!("n={n} q={norm}: {} ({} vs {})", c.name, c.lhs, c.rhs));
                }
            }
            if let Some(l) = &localdepth {
                if !l.holds {
                    failures.push(format!("n={n} q={norm}: localdepth"));
                }
            }
            let holds = checks.iter().all(|c| c.holds) && localdepth.as_ref().is_none_or(|l| l.holds);
            entries.push(VerifyEntry {
                n,
                q: norm,
                search,
                measurement,
                checks,
                localdepth,
                holds,
            });
        }
    }
    let holds = failures.is_empty();
    Ok(VerifyReport {
        geometry,
        depth_check,
        f_check,
        entries,
        failures,
        holds,
    })
}

/// Finite-difference consistency of `M_q` in the zero coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientReport {
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    /// Largest `|coarse_i / fine_i - 1|` over components that are not
    /// negligible.
    pub max_deviation: f64,
    pub holds: bool,
}

pub const GRADIENT_STEPS: (f64, f64) = (1e-5, 1e-6);

/// Central differences of `M_q` at steps `1e-5` and `1e-6`; they should
/// agree to 20% where the objective is smooth. Zeros must stay `1e-3` away
/// from the boundary.
pub fn gradient_consistency(
    domain: &ConvexDomain,
    p: &MonicPolynomial,
    norm: Norm,
    cfg: &QuadratureConfig,
) -> Result<GradientReport> {
    if let Some(z) = p
        .zeros()
        .iter()
        .find(|z| !domain.contains(**z, 0.0) || domain.distance_to_boundary(**z) <= 1e-3)
    {
        return Err(Error::Precondition(format!(
            "zero {z} is within 1e-3 of the boundary or outside"
        )));
    }
    let x: Vec<f64> = p.zeros().iter().flat_map(|z| [z.re, z.im]).collect();
    let m = |v: &[f64]| -> Result<f64> {
        norms::oscillation(domain, &MonicPolynomial::from_zeros(decode(v))?, norm, cfg)
    };
    let grad = |h: f64| -> Result<Vec<f64>> {
        (0..x.len())
            .map(|i| {
                let mut a = x.clone();
                let mut b = x.clone();
                a[i] += h;
                b[i] -= h;
                Ok((m(&a)? - m(&b)?) / (2.0 * h))
            })
            .collect()
    };
    let coarse = grad(GRADIENT_STEPS.0)?;
    let fine = grad(GRADIENT_STEPS.1)?;
    let scale = coarse.iter().fold(0.0f64, |a, g| a.max(g.abs()));
    let max_deviation = coarse
        .iter()
        .zip(&fine)
        .filter(|(c, _)| c.abs() > 1e-6 * scale.max(1e-12))
        .map(|(c, f)| (c / f - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(GradientReport {
        coarse,
        fine,
        max_deviation,
        holds: max_deviation <= 0.2,
    })
}
