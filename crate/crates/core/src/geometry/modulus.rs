use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::depth::golden;
use super::{
    closest_on_segment, cross, point_segment_distance, wrap_angle_pi, ConvexDomain, GridConfig,
    Point, Shape, ANGLE_TOL, HALF_PI,
};
use crate::error::{Error, Result};

/// Relative tolerance for comparing feature distances with a chord length.
const DIST_TOL: f64 = 1e-12;

/// Left and right limits `(ω₋(t), ω₊(t))` of the multivalued modulus of
/// continuity of the outer normal direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Modulus {
    pub lower: f64,
    pub upper: f64,
}

impl Modulus {
    /// Closed-interval membership.
    pub fn contains(&self, angle: f64, tol: f64) -> bool {
        self.lower - tol <= angle && angle <= self.upper + tol
    }
}

/// A boundary feature of a polygon: a vertex with its normal cone or an
/// edge with its single normal. Angles are outer normal directions.
#[derive(Debug, Clone, Copy)]
enum Feature {
    Vertex { p: Point, lo: f64, hi: f64 },
    Edge { a: Point, b: Point, normal: f64 },
}

impl Feature {
    fn arc(&self) -> (f64, f64) {
        match *self {
            Feature::Vertex { lo, hi, .. } => (lo, hi),
            Feature::Edge { normal, .. } => (normal, normal),
        }
    }
}

fn segment_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return true;
    }
    let on = |p: Point, q: Point, r: Point| (closest_on_segment(r, p, q) - r).norm() == 0.0;
    on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b)
}

fn feature_distance(f: &Feature, g: &Feature) -> f64 {
    match (*f, *g) {
        (Feature::Vertex { p, .. }, Feature::Vertex { p: q, .. }) => (p - q).norm(),
        (Feature::Vertex { p, .. }, Feature::Edge { a, b, .. })
        | (Feature::Edge { a, b, .. }, Feature::Vertex { p, .. }) => point_segment_distance(p, a, b),
        (Feature::Edge { a, b, .. }, Feature::Edge { a: c, b: d, .. }) => {
            segment_distance(a, b, c, d)
        }
    }
}

/// Largest circular distance between a direction in `[a0, a1]` and one in
/// `[b0, b1]` (arcs shorter than `π`).
fn arc_distance((a0, a1): (f64, f64), (b0, b1): (f64, f64)) -> f64 {
    // the antipodal arc of b meets a: distance π is attained
    let (c0, c1) = (b0 + PI, b1 + PI);
    let shift = TAU * ((a0 - c0) / TAU).floor();
    let (c0, c1) = (c0 + shift, c1 + shift);
    let meets = |lo: f64, hi: f64| lo <= a1 + 1e-15 && a0 <= hi + 1e-15;
    if meets(c0, c1) || meets(c0 + TAU, c1 + TAU) {
        return PI;
    }
    [a0, a1]
        .iter()
        .flat_map(|&x| [b0, b1].map(move |y| wrap_angle_pi(x - y)))
        .fold(0.0, f64::max)
}

/// `(distance, angle)` for every unordered pair of polygon features,
/// including each vertex paired with itself.
fn polygon_pairs(vertices: &[Point]) -> Vec<(f64, f64)> {
    let n = vertices.len();
    let normal = |i: usize| {
        let e = vertices[(i + 1) % n] - vertices[i];
        e.arg() - HALF_PI
    };
    let mut feats = Vec::with_capacity(2 * n);
    for i in 0..n {
        let prev = normal((i + n - 1) % n);
        let mut cur = normal(i);
        while cur < prev {
            cur += TAU;
        }
        feats.push(Feature::Vertex {
            p: vertices[i],
            lo: prev,
            hi: cur,
        });
        feats.push(Feature::Edge {
            a: vertices[i],
            b: vertices[(i + 1) % n],
            normal: normal(i),
        });
    }
    let mut out = Vec::with_capacity(feats.len() * (feats.len() + 1) / 2);
    for (i, f) in feats.iter().enumerate() {
        for g in &feats[i..] {
            out.push((feature_distance(f, g), arc_distance(f.arc(), g.arc())));
        }
    }
    out
}

impl ConvexDomain {
    /// `(ω₋(t), ω₊(t))`: the largest angular distance between outer normals
    /// at boundary points with `|z - z'| < t` and `<= t` respectively.
    pub fn modulus_of_continuity(&self, t: f64) -> Result<Modulus> {
        self.modulus_of_continuity_with(t, &GridConfig::default())
    }

    pub fn modulus_of_continuity_with(&self, t: f64, grid: &GridConfig) -> Result<Modulus> {
        if !(t >= 0.0) {
            return Err(Error::OutOfRange(format!("chord length must be >= 0, got {t}")));
        }
        let w = self.width();
        if t > w {
            return Ok(Modulus {
                lower: PI,
                upper: PI,
            });
        }
        let m = match self.shape() {
            Shape::Polygon { vertices } => {
                let pairs = polygon_pairs(vertices);
                let tol = DIST_TOL * self.diameter();
                let upper = pairs
                    .iter()
                    .filter(|(d, _)| *d <= t + tol)
                    .map(|p| p.1)
                    .fold(0.0, f64::max);
                let lower = pairs
                    .iter()
                    .filter(|(d, _)| *d < t - tol)
                    .map(|p| p.1)
                    .fold(0.0, f64::max);
                Modulus { lower, upper }
            }
            Shape::Disk { radius, .. } => {
                let v = 2.0 * (t / (2.0 * radius)).min(1.0).asin();
                Modulus { lower: v, upper: v }
            }
            Shape::Ellipse { .. } => {
                let v = EllipseNormals::new(self).modulus(t, grid);
                Modulus { lower: v, upper: v }
            }
        };
        if t >= w {
            return Ok(Modulus { upper: PI, ..m });
        }
        Ok(m)
    }

    /// `ω_γ(s)`: the largest increase of the tangent angle over a boundary
    /// arc of length at most `s`, with the right-continuous angle `α₊`.
    pub fn modulus_of_continuity_arclength(&self, s: f64) -> Result<f64> {
        self.modulus_of_continuity_arclength_with(s, &GridConfig::default())
    }

    pub fn modulus_of_continuity_arclength_with(&self, s: f64, grid: &GridConfig) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::OutOfRange(format!("arc length must be >= 0, got {s}")));
        }
        let par = self.parametrize();
        let l = par.length();
        let turns = (s / l).floor();
        let r = s - turns * l;
        let base = turns * TAU;
        if r == 0.0 {
            return Ok(base);
        }
        let within = match self.shape() {
            Shape::Polygon { .. } => {
                let pos = par.corner_positions();
                let jumps = par.corner_jumps();
                let n = pos.len();
                let mut best: f64 = 0.0;
                for i in 0..n {
                    // windows [s_i, s_i + r) and (s_i, s_i + r]
                    let mut half_open = 0.0;
                    let mut closed_right = 0.0;
                    for k in 0..n {
                        let mut off = pos[(i + k) % n] - pos[i];
                        if off < 0.0 {
                            off += l;
                        }
                        let tol = 1e-12 * l;
                        if off < r - tol || (k == 0) {
                            half_open += jumps[(i + k) % n];
                        }
                        if k > 0 && off <= r + tol {
                            closed_right += jumps[(i + k) % n];
                        }
                    }
                    best = best.max(half_open).max(closed_right);
                }
                best
            }
            Shape::Disk { radius, .. } => r / radius,
            Shape::Ellipse { .. } => {
                let inc = |t: f64| par.tangent_angles(t + r).left - par.tangent_angles(t).left;
                let n = grid.samples.max(8);
                let h = l / n as f64;
                let (mut x, mut fx) = (0.0, f64::NEG_INFINITY);
                for k in 0..n {
                    let v = inc(k as f64 * h);
                    if v > fx {
                        (x, fx) = (k as f64 * h, v);
                    }
                }
                let (_, m) = golden(&|t| -inc(t), x - h, x + h, 1e-12 * l);
                fx.max(-m)
            }
        };
        Ok(base + within.min(TAU))
    }

    /// `μ_K = max ω⁻¹(π/2)`: the largest `t` with `π/2 ∈ [ω₋(t), ω₊(t)]`.
    pub fn mu(&self) -> f64 {
        self.mu_with(&GridConfig::default())
    }

    pub fn mu_with(&self, grid: &GridConfig) -> f64 {
        let w = self.width();
        let first_exceed = match self.shape() {
            Shape::Polygon { vertices } => polygon_pairs(vertices)
                .into_iter()
                .filter(|(_, a)| *a > HALF_PI + ANGLE_TOL)
                .map(|p| p.0)
                .fold(f64::INFINITY, f64::min),
            Shape::Disk { radius, .. } => std::f64::consts::SQRT_2 * radius,
            Shape::Ellipse { .. } => EllipseNormals::new(self).first_exceed(HALF_PI, grid),
        };
        first_exceed.min(w)
    }
}

/// Sampled ellipse boundary in the eccentric anomaly `θ` with the lifted
/// tangent angle.
struct EllipseNormals<'a> {
    par: super::BoundaryParametrization,
    _domain: &'a ConvexDomain,
}

impl<'a> EllipseNormals<'a> {
    fn new(domain: &'a ConvexDomain) -> Self {
        Self {
            par: domain.parametrize(),
            _domain: domain,
        }
    }

    fn point(&self, th: f64) -> Point {
        self.par.piece_point(0, th)
    }

    /// Increase of the tangent angle from `θ` to `θ + u`, `u ∈ [0, 2π]`.
    fn turn(&self, th: f64, u: f64) -> f64 {
        let a0 = self.par.piece_tangent_angle(0, th);
        let mut a1 = self.par.piece_tangent_angle(0, th + u);
        // both lifts carry `+ θ`, so the difference is already continuous in u
        if a1 < a0 {
            a1 = a0;
        }
        a1 - a0
    }

    /// Offset `u` with `turn(θ, u) = target`.
    fn offset_for_turn(&self, th: f64, target: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, TAU);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.turn(th, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// For fixed `θ`: the largest turn over forward offsets with chord at
    /// most `t`, before the normal reverses.
    fn best_turn_at(&self, th: f64, t: f64, inner: usize) -> f64 {
        let z = self.point(th);
        let u_pi = self.offset_for_turn(th, PI);
        let dist = |u: f64| (self.point(th + u) - z).norm();
        let h = u_pi / inner as f64;
        let mut last = 0;
        for k in 1..=inner {
            if dist(k as f64 * h) <= t {
                last = k;
            }
        }
        if last == inner {
            return PI;
        }
        let (mut lo, mut hi) = (last as f64 * h, (last + 1) as f64 * h);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if dist(mid) <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.turn(th, lo)
    }

    fn modulus(&self, t: f64, grid: &GridConfig) -> f64 {
        let n = grid.samples.max(8);
        let inner = (n / 8).max(64);
        let f = |th: f64| self.best_turn_at(th, t, inner);
        maximize_periodic(&f, n, grid.refinements)
    }

    /// Smallest chord between points whose normals differ by more than
    /// `angle`.
    fn first_exceed(&self, angle: f64, grid: &GridConfig) -> f64 {
        let n = grid.samples.max(8);
        let inner = 256;
        let f = |th: f64| {
            let z = self.point(th);
            let u0 = self.offset_for_turn(th, angle);
            let u1 = self.offset_for_turn(th, PI);
            let dist = |u: f64| (self.point(th + u) - z).norm();
            let h = (u1 - u0) / inner as f64;
            let (mut x, mut fx) = (u0, dist(u0));
            for k in 1..=inner {
                let u = u0 + k as f64 * h;
                let v = dist(u);
                if v < fx {
                    (x, fx) = (u, v);
                }
            }
            let (_, m) = golden(&dist, (x - h).max(u0), (x + h).min(u1), 1e-13);
            fx.min(m)
        };
        -maximize_periodic(&|th| -f(th), n, grid.refinements)
    }
}

/// Maximum of a `2π`-periodic function: grid, zoom rounds, golden polish.
fn maximize_periodic(f: &dyn Fn(f64) -> f64, n: usize, rounds: usize) -> f64 {
    let h = TAU / n as f64;
    let (mut x, mut fx) = (0.0, f64::NEG_INFINITY);
    for k in 0..n {
        let v = f(k as f64 * h);
        if v > fx {
            (x, fx) = (k as f64 * h, v);
        }
    }
    let mut width = h;
    for _ in 0..rounds {
        let m = 32;
        let step = 2.0 * width / m as f64;
        let lo = x - width;
        for k in 0..=m {
            let u = lo + step * k as f64;
            let v = f(u);
            if v > fx {
                (x, fx) = (u, v);
            }
        }
        width = step;
    }
    let (_, m) = golden(&|u| -f(u), x - width, x + width, 1e-13);
    fx.max(-m)
}
