use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{dot, ConvexDomain, GridConfig, Point, Shape, ANGLE_TOL};

/// Cases of the positive-depth characterization by the largest
/// supplementary angle `Ω_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DepthClass {
    /// `Ω_K < π/2`: positive depth.
    I,
    /// `Ω_K > π/2`: zero depth.
    II,
    /// `Ω_K = π/2` and every maximal corner joins two straight pieces:
    /// positive depth.
    III,
    /// `Ω_K = π/2` at a corner touching a curved piece: zero depth.
    IV,
}

impl DepthClass {
    pub fn has_positive_depth(self) -> bool {
        matches!(self, DepthClass::I | DepthClass::III)
    }
}

/// Step of the direction grid over a corner's normal cone.
const CONE_STEP: f64 = 1e-4;

impl ConvexDomain {
    /// Length of `K ∩ {ζ + s·dir : s ≥ 0}` for a boundary point `ζ` and an
    /// inward unit direction.
    pub(crate) fn chord_from(&self, zeta: Point, dir: Complex64) -> f64 {
        match self.shape() {
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                let mut s_max = f64::INFINITY;
                for i in 0..n {
                    let a = vertices[i];
                    let e = vertices[(i + 1) % n] - a;
                    let len = e.norm();
                    // outward unit normal of a counterclockwise edge
                    let nrm = Complex64::new(e.im, -e.re) / len;
                    let denom = dot(nrm, dir);
                    if denom > 1e-12 {
                        let slack = dot(nrm, a - zeta);
                        s_max = s_max.min(slack.max(0.0) / denom);
                    }
                }
                if s_max.is_finite() {
                    s_max
                } else {
                    0.0
                }
            }
            Shape::Disk { center, radius } => {
                ray_quadric_exit(zeta - center, dir, *radius, *radius)
            }
            Shape::Ellipse {
                center,
                a,
                b,
                rotation,
            } => {
                let r = Complex64::from_polar(1.0, -rotation);
                ray_quadric_exit((zeta - center) * r, dir * r, *a, *b)
            }
        }
    }

    /// Local depth at arc-length parameter `t`: the longest chord of `K`
    /// cut by an inward normal line at `γ(t)`, maximized over the normal
    /// cone.
    pub fn local_depth(&self, t: f64) -> f64 {
        let par = self.parametrize();
        let zeta = par.point(t);
        let ta = par.tangent_angles(t);
        // inward normal for tangent direction β is i·e^{iβ}
        let chord = |beta: f64| self.chord_from(zeta, Complex64::from_polar(1.0, beta + FRAC_PI_2));
        if ta.jump() <= ANGLE_TOL {
            return chord(ta.left);
        }
        let (lo, hi) = (ta.left, ta.right);
        let mut best = chord(lo).max(chord(hi));
        if let Some(vertices) = self.vertices() {
            for v in vertices {
                let d = v - zeta;
                if d.norm() < 1e-12 {
                    continue;
                }
                // direction towards v as a tangent angle, lifted into [lo, hi]
                let mut beta = d.arg() - FRAC_PI_2;
                beta += TAU * ((lo - beta) / TAU).ceil();
                if beta <= hi {
                    best = best.max(chord(beta));
                }
            }
        }
        let steps = ((hi - lo) / CONE_STEP).ceil() as usize;
        let h = (hi - lo) / steps as f64;
        let mut arg_best = (f64::NEG_INFINITY, lo);
        for k in 0..=steps {
            let beta = lo + h * k as f64;
            let c = chord(beta);
            if c > arg_best.0 {
                arg_best = (c, beta);
            }
        }
        let (a, b) = ((arg_best.1 - h).max(lo), (arg_best.1 + h).min(hi));
        let refined = golden_max(&chord, a, b, 1e-13);
        best.max(arg_best.0).max(refined)
    }

    /// Global depth `h_K = inf_ζ h_K(ζ)`.
    pub fn global_depth(&self) -> f64 {
        self.global_depth_with(&GridConfig::default())
    }

    pub fn global_depth_with(&self, grid: &GridConfig) -> f64 {
        match self.shape() {
            Shape::Polygon { vertices } => {
                // chord length along a fixed normal is concave along an edge,
                // so the infimum sits at an edge endpoint
                let n = vertices.len();
                let mut best = f64::INFINITY;
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    let e = b - a;
                    let inward = Complex64::new(-e.im, e.re) / e.norm();
                    best = best.min(self.chord_from(a, inward)).min(self.chord_from(b, inward));
                }
                // rounding leaves chords of order 1e-16 at acute corners
                if best < 1e-12 * self.diameter() {
                    0.0
                } else {
                    best
                }
            }
            Shape::Disk { radius, .. } => 2.0 * radius,
            Shape::Ellipse { .. } => {
                let par = self.parametrize();
                let chord = |u: f64| {
                    let z = par.piece_point(0, u);
                    let beta = par.piece_tangent_angle(0, u);
                    self.chord_from(z, Complex64::from_polar(1.0, beta + FRAC_PI_2))
                };
                minimize_periodic(&chord, grid)
            }
        }
    }

    /// `Ω(t) = α₊(t) - α₋(t)`.
    pub fn supplementary_angle(&self, t: f64) -> f64 {
        self.parametrize().tangent_angles(t).jump()
    }

    /// `Ω_K`, the largest supplementary angle (zero iff the domain is smooth).
    pub fn largest_supplementary_angle(&self) -> f64 {
        self.parametrize()
            .corner_jumps()
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// Which case of the positive-depth characterization applies.
    pub fn depth_classification(&self) -> DepthClass {
        let omega = self.largest_supplementary_angle();
        if omega < FRAC_PI_2 - ANGLE_TOL {
            DepthClass::I
        } else if omega > FRAC_PI_2 + ANGLE_TOL {
            DepthClass::II
        } else if self.is_polygon() {
            // every corner of a polygon joins two straight segments
            DepthClass::III
        } else {
            DepthClass::IV
        }
    }
}

/// Exit distance of the ray `p + s·d` (`p` on or inside the quadric
/// `x²/a² + y²/b² = 1`).
fn ray_quadric_exit(p: Complex64, d: Complex64, a: f64, b: f64) -> f64 {
    let qa = (d.re / a).powi(2) + (d.im / b).powi(2);
    let qb = 2.0 * (p.re * d.re / (a * a) + p.im * d.im / (b * b));
    let qc = (p.re / a).powi(2) + (p.im / b).powi(2) - 1.0;
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
    let sq = disc.sqrt();
    // larger root, computed without cancellation
    let s = if qb <= 0.0 {
        (-qb + sq) / (2.0 * qa)
    } else {
        (2.0 * -qc) / (qb + sq)
    };
    s.max(0.0)
}

pub(crate) fn golden_max(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (x, fx) = golden(&|x| -f(x), a, b, tol);
    let _ = x;
    -fx
}

/// Golden-section minimization on `[a, b]`; returns `(argmin, min)`.
pub(crate) fn golden(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while (b - a).abs() > tol && iter < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    let (fa, fb) = (f(a), f(b));
    [(c, fc), (d, fd), (a, fa), (b, fb)]
        .into_iter()
        .fold((c, f64::INFINITY), |best, cand| if cand.1 < best.1 { cand } else { best })
}

/// Minimum of a `2π`-periodic function: grid, zoom-in rounds, golden polish.
pub(crate) fn minimize_periodic(f: &dyn Fn(f64) -> f64, grid: &GridConfig) -> f64 {
    let n = grid.samples.max(8);
    let h = TAU / n as f64;
    let (mut x, mut fx) = (0.0, f64::INFINITY);
    for k in 0..n {
        let u = k as f64 * h;
        let v = f(u);
        if v < fx {
            (x, fx) = (u, v);
        }
    }
    let mut width = h;
    for _ in 0..grid.refinements {
        let m = 32;
        let (lo, step) = (x - width, 2.0 * width / m as f64);
        for k in 0..=m {
            let u = lo + step * k as f64;
            let v = f(u);
            if v < fx {
                (x, fx) = (u, v);
            }
        }
        width = step;
    }
    let (_, polished) = golden(f, x - width, x + width, 1e-14);
    fx.min(polished)
}
