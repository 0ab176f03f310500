//! Transfinite diameter, Chebyshev constants and Fekete point estimates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryParametrization, ConvexDomain, Point, Shape};
use crate::nelder_mead::NelderMead;
use crate::optimizer::restart_seed;

/// A compact set whose capacity is estimated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CompactSet {
    Segment { a: Point, b: Point },
    Domain { domain: ConvexDomain },
    /// Disjoint closed intervals of the real line.
    RealIntervals { intervals: Vec<(f64, f64)> },
}

impl CompactSet {
    pub fn segment(a: Point, b: Point) -> Result<Self> {
        if a == b {
            return Err(Error::Invalid("segment endpoints must differ".into()));
        }
        Ok(CompactSet::Segment { a, b })
    }

    pub fn intervals(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Invalid("need at least one interval".into()));
        }
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (i, &(a, b)) in intervals.iter().enumerate() {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::Invalid(format!("interval {i} is empty or not finite")));
            }
            if i > 0 && a <= intervals[i - 1].1 {
                return Err(Error::Invalid("intervals must be disjoint".into()));
            }
        }
        Ok(CompactSet::RealIntervals { intervals })
    }

    pub fn diameter(&self) -> f64 {
        match self {
            CompactSet::Segment { a, b } => (b - a).norm(),
            CompactSet::Domain { domain } => domain.diameter(),
            CompactSet::RealIntervals { intervals } => {
                intervals[intervals.len() - 1].1 - intervals[0].0
            }
        }
    }

    /// Whether the set lies on the real line (possibly after a rigid motion).
    fn is_linear(&self) -> bool {
        !matches!(self, CompactSet::Domain { .. })
    }
}

/// The "outer boundary" of a set in one real coordinate `x ∈ [0, P]`.
enum Coordinates {
    Closed(BoundaryParametrization),
    Segment(Point, Point),
    Intervals(Vec<(f64, f64)>),
}

impl Coordinates {
    fn new(set: &CompactSet) -> Self {
        match set {
            CompactSet::Segment { a, b } => Coordinates::Segment(*a, *b),
            CompactSet::Domain { domain } => Coordinates::Closed(domain.parametrize()),
            CompactSet::RealIntervals { intervals } => Coordinates::Intervals(intervals.clone()),
        }
    }

    fn period(&self) -> f64 {
        match self {
            Coordinates::Closed(par) => par.length(),
            Coordinates::Segment(a, b) => (b - a).norm(),
            Coordinates::Intervals(iv) => iv.iter().map(|(a, b)| b - a).sum(),
        }
    }

    fn closed(&self) -> bool {
        matches!(self, Coordinates::Closed(_))
    }

    fn point(&self, x: f64) -> Point {
        match self {
            Coordinates::Closed(par) => par.point(x),
            Coordinates::Segment(a, b) => a + (b - a) * (x / (b - a).norm()),
            Coordinates::Intervals(iv) => {
                let mut s = x;
                for &(a, b) in iv {
                    if s <= b - a {
                        return Complex64::new(a + s, 0.0);
                    }
                    s -= b - a;
                }
                Complex64::new(iv[iv.len() - 1].1, 0.0)
            }
        }
    }

    /// Which connected piece a coordinate belongs to (for midpoints).
    fn component(&self, x: f64) -> usize {
        match self {
            Coordinates::Intervals(iv) => {
                let mut s = x;
                for (k, &(a, b)) in iv.iter().enumerate() {
                    if s <= b - a {
                        return k;
                    }
                    s -= b - a;
                }
                iv.len() - 1
            }
            _ => 0,
        }
    }

    /// Dense samples of the set for sup norms.
    fn samples(&self, count: usize) -> Vec<Point> {
        let p = self.period();
        let last = if self.closed() { count } else { count + 1 };
        let mut out: Vec<Point> = (0..last)
            .map(|k| self.point(p * k as f64 / count as f64))
            .collect();
        if let Coordinates::Closed(par) = self {
            out.extend(par.corner_positions().into_iter().map(|t| par.point(t)));
        }
        if let Coordinates::Intervals(iv) = self {
            out.extend(iv.iter().flat_map(|&(a, b)| [Complex64::new(a, 0.0), Complex64::new(b, 0.0)]));
        }
        out
    }
}

/// `2 (|J|/4)^k`: the smallest sup norm on a segment of length `|J|` of a
/// monic polynomial of degree `k`.
pub fn segment_chebyshev_lower(segment_length: f64, k: u32) -> f64 {
    2.0 * (segment_length / 4.0).powi(k as i32)
}

/// `Γ(1/k) / (√π 2^{1+2/k} Γ(1/2+1/k)) · h` for the regular `k`-gon of side
/// `h`.
pub fn regular_polygon_capacity(k: usize, side: f64) -> f64 {
    let kf = k as f64;
    gamma(1.0 / kf) / (PI.sqrt() * 2f64.powf(1.0 + 2.0 / kf) * gamma(0.5 + 1.0 / kf)) * side
}

/// Side length when `vertices` form a regular polygon, within `1e-9`
/// relative.
fn regular_side(vertices: &[Point]) -> Option<f64> {
    let n = vertices.len();
    let c: Point = vertices.iter().sum::<Point>() / n as f64;
    let r0 = (vertices[0] - c).norm();
    let s0 = (vertices[1] - vertices[0]).norm();
    let regular = (0..n).all(|i| {
        ((vertices[i] - c).norm() - r0).abs() <= 1e-9 * r0
            && ((vertices[(i + 1) % n] - vertices[i]).norm() - s0).abs() <= 1e-9 * s0
    });
    regular.then_some(s0)
}

/// Closed-form transfinite diameter where one is known: segments `ℓ/4`,
/// disks `R`, ellipses `(a+b)/2`, regular polygons and single intervals.
pub fn transfinite_diameter_exact(set: &CompactSet) -> Option<f64> {
    match set {
        CompactSet::Segment { a, b } => Some((b - a).norm() / 4.0),
        CompactSet::RealIntervals { intervals } if intervals.len() == 1 => {
            Some((intervals[0].1 - intervals[0].0) / 4.0)
        }
        CompactSet::RealIntervals { .. } => None,
        CompactSet::Domain { domain } => match domain.shape() {
            Shape::Disk { radius, .. } => Some(*radius),
            Shape::Ellipse { a, b, .. } => Some((a + b) / 2.0),
            Shape::Polygon { vertices } => {
                regular_side(vertices).map(|h| regular_polygon_capacity(vertices.len(), h))
            }
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeketeConfig {
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Stop once a sweep improves the mean log distance by less than this,
    /// relative.
    pub rel_tol: f64,
}

impl Default for FeketeConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_sweeps: 4000,
            rel_tol: 1e-10,
        }
    }
}

/// An approximate Fekete configuration and the capacity estimates read off
/// from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeketeResult {
    pub m: usize,
    /// `δ_m`, the geometric mean of pairwise distances. Decreases to `Δ`.
    pub delta_m: f64,
    /// `exp` of the mean of `(1/m) Σ log|ζ - z_j|` over the midpoints `ζ`
    /// between consecutive points: the equilibrium potential level.
    pub potential_estimate: f64,
    /// `‖p_F‖^{1/m}` for the Fekete polynomial `p_F`; an upper bound for the
    /// Chebyshev constant `Δ`.
    pub chebyshev_estimate: f64,
    pub points: Vec<Point>,
    pub sweeps: usize,
    pub converged: bool,
    pub best_restart: usize,
}

/// Mean of `log|z_i - z_j|` over pairs.
fn mean_log_distance(z: &[Point]) -> f64 {
    let m = z.len();
    let mut acc = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            acc += (z[i] - z[j]).norm().ln();
        }
    }
    acc * 2.0 / (m * (m - 1)) as f64
}

struct Sweep {
    energy: f64,
    coords: Vec<f64>,
    sweeps: usize,
    converged: bool,
}

fn fekete_restart(c: &Coordinates, m: usize, seed: u64, cfg: &FeketeConfig) -> Sweep {
    let p = c.period();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let closed = c.closed();
    let spacing = if closed { p / m as f64 } else { p / (m - 1) as f64 };
    let offset = if closed { rng.gen_range(0.0..spacing) } else { 0.0 };
    let mut x: Vec<f64> = (0..m)
        .map(|i| {
            let base = offset + spacing * i as f64;
            let jitter = if !closed && (i == 0 || i + 1 == m) {
                0.0
            } else {
                rng.gen_range(-0.25..0.25) * spacing
            };
            base + jitter
        })
        .collect();
    if !closed {
        // cosine-like clustering towards the ends
        for xi in x.iter_mut() {
            let s = (*xi / p).clamp(0.0, 1.0);
            *xi = p * 0.5 * (1.0 - (PI * s).cos());
        }
    }
    let mut z: Vec<Point> = x.iter().map(|&xi| c.point(xi)).collect();
    let mut energy = mean_log_distance(&z);
    let mut sweeps = 0;
    let mut converged = false;
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    while sweeps < cfg.max_sweeps {
        sweeps += 1;
        for i in 0..m {
            let (lo, hi) = if closed {
                let prev = x[(i + m - 1) % m] - if i == 0 { p } else { 0.0 };
                let next = x[(i + 1) % m] + if i + 1 == m { p } else { 0.0 };
                (prev, next)
            } else {
                (
                    if i == 0 { 0.0 } else { x[i - 1] },
                    if i + 1 == m { p } else { x[i + 1] },
                )
            };
            let g = |xi: f64| {
                let w = c.point(xi.rem_euclid(p.max(f64::MIN_POSITIVE)).min(p));
                let mut s = 0.0;
                for (j, zj) in z.iter().enumerate() {
                    if j != i {
                        s += (w - zj).norm().ln();
                    }
                }
                s
            };
            let (mut a, mut b) = (lo, hi);
            let mut u = b - INV_PHI * (b - a);
            let mut v = a + INV_PHI * (b - a);
            let (mut gu, mut gv) = (g(u), g(v));
            for _ in 0..30 {
                if gu > gv {
                    b = v;
                    v = u;
                    gv = gu;
                    u = b - INV_PHI * (b - a);
                    gu = g(u);
                } else {
                    a = u;
                    u = v;
                    gu = gv;
                    v = a + INV_PHI * (b - a);
                    gv = g(v);
                }
            }
            let (cand, gc) = if gu > gv { (u, gu) } else { (v, gv) };
            // ends of an open set are candidates too
            let (cand, gc) = if !closed && (i == 0 || i + 1 == m) {
                let end = if i == 0 { 0.0 } else { p };
                let ge = g(end);
                if ge >= gc { (end, ge) } else { (cand, gc) }
            } else {
                (cand, gc)
            };
            if gc > g(x[i]) {
                x[i] = if closed { cand.rem_euclid(p) } else { cand.clamp(0.0, p) };
                z[i] = c.point(x[i]);
            }
        }
        if closed {
            // keep cyclic order with x sorted in [0, p)
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
            x = order.iter().map(|&k| x[k]).collect();
            z = order.iter().map(|&k| z[k]).collect();
        }
        let e = mean_log_distance(&z);
        let improvement = e - energy;
        energy = energy.max(e);
        if improvement.abs() <= cfg.rel_tol * energy.abs().max(1e-300) {
            converged = true;
            break;
        }
    }
    Sweep {
        energy,
        coords: x,
        sweeps,
        converged,
    }
}

/// Approximate Fekete points of `set` by seeded multi-start coordinate-wise
/// golden-section sweeps over boundary coordinates.
pub fn transfinite_diameter_fekete(
    set: &CompactSet,
    m: usize,
    seed: u64,
    cfg: &FeketeConfig,
) -> Result<FeketeResult> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("need m >= 2 points, got {m}")));
    }
    if cfg.restarts == 0 {
        return Err(Error::Invalid("restarts must be >= 1".into()));
    }
    let c = Coordinates::new(set);
    let runs: Vec<Sweep> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| fekete_restart(&c, m, restart_seed(seed, r as u64), cfg))
        .collect();
    let (best_restart, best) = runs
        .iter()
        .enumerate()
        .fold(None::<(usize, &Sweep)>, |acc, (k, s)| match acc {
            Some((_, b)) if b.energy >= s.energy => acc,
            _ => Some((k, s)),
        })
        .expect("at least one restart");
    let mut x = best.coords.clone();
    x.sort_by(f64::total_cmp);
    let z: Vec<Point> = x.iter().map(|&xi| c.point(xi)).collect();
    let delta_m = best.energy.exp();

    let p = c.period();
    let mut mids = Vec::new();
    for k in 0..m {
        let (a, b) = if k + 1 < m {
            (x[k], x[k + 1])
        } else if c.closed() {
            (x[k], x[0] + p)
        } else {
            continue;
        };
        let mid = 0.5 * (a + b);
        if c.component(a) == c.component(b) {
            mids.push(mid.rem_euclid(p.max(f64::MIN_POSITIVE)));
        }
    }
    let level = |w: Point| z.iter().map(|zj| (w - zj).norm().ln()).sum::<f64>() / m as f64;
    let potential = mids.iter().map(|&t| level(c.point(t))).sum::<f64>() / mids.len().max(1) as f64;
    let sup_log = c
        .samples(8192)
        .into_iter()
        .map(level)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(FeketeResult {
        m,
        delta_m,
        potential_estimate: potential.exp(),
        chebyshev_estimate: sup_log.exp(),
        points: z,
        sweeps: best.sweeps,
        converged: runs.iter().all(|s| s.converged),
        best_restart,
    })
}

/// Closed form (when known) against the Fekete estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub set: CompactSet,
    pub exact: Option<f64>,
    /// Side length when the set is a regular polygon.
    pub regular_side: Option<f64>,
    pub fekete: FeketeResult,
    /// `(potential_estimate - exact) / exact`.
    pub relative_error: Option<f64>,
}

pub fn capacity_report(
    set: &CompactSet,
    m: usize,
    seed: u64,
    cfg: &FeketeConfig,
) -> Result<CapacityReport> {
    let fekete = transfinite_diameter_fekete(set, m, seed, cfg)?;
    let exact = transfinite_diameter_exact(set);
    let regular_side = match set {
        CompactSet::Domain { domain } => domain.vertices().and_then(regular_side),
        _ => None,
    };
    Ok(CapacityReport {
        set: set.clone(),
        exact,
        regular_side,
        relative_error: exact.map(|e| (fekete.potential_estimate - e) / e),
        fekete,
    })
}

/// Numerically minimized `max_E |∏(z - w_j)|` over monic polynomials of
/// degree `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaxResult {
    pub k: usize,
    pub value: f64,
    pub zeros: Vec<Point>,
    /// `Δ^k` when a closed form for `Δ` exists.
    pub lower_bound: Option<f64>,
    pub converged: bool,
}

/// Samples used for the inner maximum of the minimax search.
pub const MINIMAX_SAMPLES: usize = 4096;

const MINIMAX_RESTARTS: usize = 6;

/// Multi-start simplex search for the Chebyshev polynomial of degree `k`.
/// Sets on a line keep the zeros on that line.
pub fn chebyshev_min_norm_numeric(set: &CompactSet, k: usize, seed: u64) -> Result<MinimaxResult> {
    if !(1..=8).contains(&k) {
        return Err(Error::OutOfRange(format!("degree must be in 1..=8, got {k}")));
    }
    let c = Coordinates::new(set);
    let pts = c.samples(MINIMAX_SAMPLES);
    let (lo, hi) = bounding(&pts);
    let scale = (hi - lo).norm().max(f64::MIN_POSITIVE);
    let linear = set.is_linear();
    // line through the set: origin + s·dir
    let (origin, dir) = match set {
        CompactSet::Segment { a, b } => (*a, (b - a) / (b - a).norm()),
        _ => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
    };
    let decode = |v: &[f64]| -> Vec<Point> {
        if linear {
            v.iter().map(|&s| origin + dir * s).collect()
        } else {
            v.chunks(2).map(|w| Complex64::new(w[0], w[1])).collect()
        }
    };
    let objective = |v: &[f64]| {
        let zeros = decode(v);
        pts.iter()
            .map(|&w| zeros.iter().map(|zj| (w - zj).norm()).product::<f64>())
            .fold(0.0, f64::max)
    };
    let dim = if linear { k } else { 2 * k };
    let (s0, s1) = line_extent(&pts, origin, dir);
    let centroid = pts.iter().sum::<Point>() / pts.len() as f64;
    let runs: Vec<(f64, Vec<f64>, bool)> = (0..MINIMAX_RESTARTS)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(seed, r as u64));
            let start: Vec<f64> = match (linear, r) {
                // Chebyshev nodes of the extent
                (true, 0) => (0..k)
                    .map(|j| {
                        let c = (PI * (2 * j + 1) as f64 / (2 * k) as f64).cos();
                        0.5 * (s0 + s1) - 0.5 * (s1 - s0) * c
                    })
                    .collect(),
                (true, _) => {
                    let mut s: Vec<f64> = (0..k).map(|_| rng.gen_range(s0..s1)).collect();
                    s.sort_by(f64::total_cmp);
                    s
                }
                (false, 0) => (0..k).flat_map(|_| [centroid.re, centroid.im]).collect(),
                (false, _) => (0..k)
                    .flat_map(|_| [rng.gen_range(lo.re..=hi.re), rng.gen_range(lo.im..=hi.im)])
                    .collect(),
            };
            let nm = NelderMead {
                max_evals: 600 * dim,
                f_tol: 1e-12,
                x_tol: 1e-10 * scale,
                initial_step: 0.1 * scale,
            };
            let mut best = nm.minimize(&objective, &start, &|_: &mut [f64]| {});
            for _ in 0..4 {
                let next = nm.minimize(&objective, &best.x, &|_: &mut [f64]| {});
                let progressed = next.value < best.value * (1.0 - 1e-12);
                if next.value <= best.value {
                    best = next;
                }
                if !progressed {
                    break;
                }
            }
            (best.value, best.x, best.converged)
        })
        .collect();
    let (_, idx) = runs
        .iter()
        .enumerate()
        .map(|(i, r)| (r.0, i))
        .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
    let (sampled, x, converged) = &runs[idx];
    let mut zeros = decode(x);
    // refine the inner maximum around the sampled argmax
    let value = refine_sup(&c, &zeros, *sampled);
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(MinimaxResult {
        k,
        value,
        zeros,
        lower_bound: transfinite_diameter_exact(set).map(|d| d.powi(k as i32)),
        converged: *converged,
    })
}

fn refine_sup(c: &Coordinates, zeros: &[Point], sampled: f64) -> f64 {
    let p = c.period();
    let f = |x: f64| zeros.iter().map(|zj| (c.point(x) - zj).norm()).product::<f64>();
    let n = MINIMAX_SAMPLES;
    let h = p / n as f64;
    let mut best = sampled;
    for k in 0..=n {
        let x = h * k as f64;
        let v = f(x);
        if v >= best * (1.0 - 1e-6) {
            let (a, b) = ((x - h).max(0.0), (x + h).min(p));
            let (_, m) = crate::geometry::golden_search(&|t| -f(t), a, b, 1e-14 * p);
            best = best.max(-m).max(v);
        }
    }
    best
}

fn bounding(pts: &[Point]) -> (Point, Point) {
    pts.iter().fold(
        (
            Complex64::new(f64::INFINITY, f64::INFINITY),
            Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        ),
        |(lo, hi), z| {
            (
                Complex64::new(lo.re.min(z.re), lo.im.min(z.im)),
                Complex64::new(hi.re.max(z.re), hi.im.max(z.im)),
            )
        },
    )
}

fn line_extent(pts: &[Point], origin: Point, dir: Point) -> (f64, f64) {
    pts.iter()
        .map(|z| crate::geometry::dot(z - origin, dir))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| (a.min(s), b.max(s)))
}

/// Outcome of the inequality `|J| <= 4 Δ(J)` for a union of intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyaReport {
    pub total_length: f64,
    /// `δ_m`, an upper approximation of `Δ(J)`.
    pub delta_estimate: f64,
    pub holds: bool,
    /// `(4 δ_m - |J|) / |J|`.
    pub margin: f64,
    /// Set when the margin is below 5%: re-run with a larger `m`.
    pub low_margin: bool,
}

pub fn polya_check(set: &CompactSet, m: usize, seed: u64) -> Result<PolyaReport> {
    let CompactSet::RealIntervals { intervals } = set else {
        return Err(Error::Invalid("polya_check needs a union of real intervals".into()));
    };
    let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
    let fek = transfinite_diameter_fekete(set, m, seed, &FeketeConfig::default())?;
    let margin = (4.0 * fek.delta_m - total) / total;
    Ok(PolyaReport {
        total_length: total,
        delta_estimate: fek.delta_m,
        holds: total <= 4.0 * fek.delta_m * (1.0 + 1e-12),
        margin,
        low_margin: margin < 0.05,
    })
}
