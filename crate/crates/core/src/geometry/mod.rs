//! Compact convex planar domains and their metric invariants.
//!
//! Points of the plane are represented as [`Complex64`]. A [`ConvexDomain`]
//! is one of a strictly convex counterclockwise polygon, a disk or a
//! (possibly rotated) ellipse; every constructor validates the shape so
//! that downstream code can assume a nonempty interior.

mod boundary;
pub mod catalogue;
mod depth;
mod modulus;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use boundary::{BoundaryParametrization, Piece, TangentAngles};
pub use depth::DepthClass;
pub(crate) use depth::golden as golden_search;
pub use modulus::Modulus;

/// A point of the plane.
pub type Point = Complex64;

/// Sampling parameters for smooth (ellipse) boundaries, where depth and
/// modulus of continuity have no closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Number of parameter samples on the boundary.
    pub samples: usize,
    /// Rounds of local zoom-in around the best sample.
    pub refinements: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            samples: 4096,
            refinements: 3,
        }
    }
}

/// The shape of a [`ConvexDomain`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Shape {
    Polygon {
        /// Counterclockwise, strictly convex.
        vertices: Vec<Point>,
    },
    Disk {
        center: Point,
        radius: f64,
    },
    Ellipse {
        center: Point,
        /// Semi-major axis.
        a: f64,
        /// Semi-minor axis, `0 < b <= a`.
        b: f64,
        /// Angle of the major axis against the real axis.
        rotation: f64,
    },
}

/// A validated compact convex domain with nonempty interior.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ConvexDomain {
    shape: Shape,
}

/// Relative tolerance used for collinearity and angle equality tests.
pub(crate) const ANGLE_TOL: f64 = 1e-9;

#[inline]
pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a.re * b.im - a.im * b.re
}

#[inline]
pub(crate) fn dot(a: Point, b: Point) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Distance from `p` to the segment `[a, b]`.
pub(crate) fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    (p - closest_on_segment(p, a, b)).norm()
}

pub(crate) fn closest_on_segment(p: Point, a: Point, b: Point) -> Point {
    let e = b - a;
    let len2 = e.norm_sqr();
    if len2 == 0.0 {
        return a;
    }
    let s = (dot(p - a, e) / len2).clamp(0.0, 1.0);
    a + e * s
}

impl ConvexDomain {
    /// A polygon from counterclockwise vertices.
    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Invalid(format!(
                "polygon needs at least 3 vertices, got {n}"
            )));
        }
        if vertices.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Invalid("vertices must be finite".into()));
        }
        let scale = vertices
            .iter()
            .flat_map(|a| vertices.iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::Invalid("polygon has empty interior".into()));
        }
        let eps = 1e-12 * scale * scale;
        let mut positive = 0;
        let mut negative = 0;
        let mut turning = 0.0;
        for i in 0..n {
            let e0 = vertices[(i + 1) % n] - vertices[i];
            let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
            if e0.norm() == 0.0 {
                return Err(Error::Invalid(format!("repeated vertex at index {i}")));
            }
            let c = cross(e0, e1);
            if c > eps {
                positive += 1;
            } else if c < -eps {
                negative += 1;
            } else {
                return Err(Error::Invalid(format!(
                    "vertices {}, {}, {} are collinear",
                    i,
                    (i + 1) % n,
                    (i + 2) % n
                )));
            }
            turning += (e1 / e0).arg();
        }
        if positive == 0 && negative == n {
            return Err(Error::Invalid("vertices not counterclockwise".into()));
        }
        if negative > 0 {
            return Err(Error::Invalid("vertices are not strictly convex".into()));
        }
        if (turning - TAU).abs() > 1e-6 {
            return Err(Error::Invalid(
                "vertices wind more than once (not a simple convex polygon)".into(),
            ));
        }
        Ok(Self {
            shape: Shape::Polygon { vertices },
        })
    }

    pub fn disk(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Invalid(format!("disk radius must be > 0, got {radius}")));
        }
        if !center.re.is_finite() || !center.im.is_finite() {
            return Err(Error::Invalid("center must be finite".into()));
        }
        Ok(Self {
            shape: Shape::Disk { center, radius },
        })
    }

    pub fn ellipse(center: Point, a: f64, b: f64, rotation: f64) -> Result<Self> {
        if !(b > 0.0) || !(b <= a) || !a.is_finite() {
            return Err(Error::Invalid(format!(
                "ellipse axes must satisfy 0 < b <= a, got a = {a}, b = {b}"
            )));
        }
        if !center.re.is_finite() || !center.im.is_finite() || !rotation.is_finite() {
            return Err(Error::Invalid("center and rotation must be finite".into()));
        }
        Ok(Self {
            shape: Shape::Ellipse {
                center,
                a,
                b,
                rotation,
            },
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_polygon(&self) -> bool {
        matches!(self.shape, Shape::Polygon { .. })
    }

    /// Polygon vertices, or `None` for curved domains.
    pub fn vertices(&self) -> Option<&[Point]> {
        match &self.shape {
            Shape::Polygon { vertices } => Some(vertices),
            _ => None,
        }
    }

    /// Applies `z -> scale * z + shift` to the whole domain.
    pub fn transformed(&self, scale: f64, shift: Point) -> Result<Self> {
        match &self.shape {
            Shape::Polygon { vertices } => {
                Self::polygon(vertices.iter().map(|v| v * scale + shift).collect())
            }
            Shape::Disk { center, radius } => Self::disk(center * scale + shift, radius * scale),
            Shape::Ellipse {
                center,
                a,
                b,
                rotation,
            } => Self::ellipse(center * scale + shift, a * scale, b * scale, *rotation),
        }
    }

    /// Center of mass of the domain.
    pub fn centroid(&self) -> Point {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                let (mut area, mut c) = (0.0, Complex64::new(0.0, 0.0));
                for i in 0..n {
                    let (p, q) = (vertices[i], vertices[(i + 1) % n]);
                    let w = cross(p, q);
                    area += w;
                    c += (p + q) * w;
                }
                c / (3.0 * area)
            }
            Shape::Disk { center, .. } | Shape::Ellipse { center, .. } => *center,
        }
    }

    /// Distance from `z` to the boundary curve.
    pub fn distance_to_boundary(&self, z: Point) -> f64 {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| point_segment_distance(z, vertices[i], vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
            Shape::Disk { center, radius } => ((z - center).norm() - radius).abs(),
            Shape::Ellipse { .. } => {
                let (x, y, a, b) = self.ellipse_local(z);
                let dist = |t: f64| Complex64::new(a * t.cos() - x, b * t.sin() - y).norm();
                depth::minimize_periodic(&dist, &GridConfig::default())
            }
        }
    }

    /// Arc-length parametrization of the boundary.
    pub fn parametrize(&self) -> BoundaryParametrization {
        BoundaryParametrization::new(self)
    }

    /// `max |z' - z''|` over the domain.
    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let mut d: f64 = 0.0;
                for (i, a) in vertices.iter().enumerate() {
                    for b in &vertices[i + 1..] {
                        d = d.max((a - b).norm());
                    }
                }
                d
            }
            Shape::Disk { radius, .. } => 2.0 * radius,
            Shape::Ellipse { a, .. } => 2.0 * a,
        }
    }

    /// Endpoints of one diameter; for polygons the lexicographically first
    /// vertex pair realizing the maximum.
    pub fn diameter_endpoints(&self) -> (Point, Point) {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let mut best = (0.0, vertices[0], vertices[1]);
                for (i, a) in vertices.iter().enumerate() {
                    for b in &vertices[i + 1..] {
                        let d = (a - b).norm();
                        if d > best.0 {
                            best = (d, *a, *b);
                        }
                    }
                }
                (best.1, best.2)
            }
            Shape::Disk { center, radius } => (center - radius, center + radius),
            Shape::Ellipse {
                center,
                a,
                rotation,
                ..
            } => {
                let u = Complex64::from_polar(*a, *rotation);
                (center - u, center + u)
            }
        }
    }

    /// Minimal distance between two parallel supporting lines.
    pub fn width(&self) -> f64 {
        match &self.shape {
            Shape::Polygon { vertices } => {
                // the minimal strip is flush with an edge (rotating calipers)
                let n = vertices.len();
                let mut w = f64::INFINITY;
                for i in 0..n {
                    let a = vertices[i];
                    let e = vertices[(i + 1) % n] - a;
                    let far = vertices
                        .iter()
                        .map(|v| cross(e, v - a))
                        .fold(0.0, f64::max);
                    w = w.min(far / e.norm());
                }
                w
            }
            Shape::Disk { radius, .. } => 2.0 * radius,
            Shape::Ellipse { b, .. } => 2.0 * b,
        }
    }

    /// Perimeter.
    pub fn perimeter(&self) -> f64 {
        self.parametrize().length()
    }

    /// Euclidean distance to the domain (0 inside).
    pub fn distance(&self, z: Point) -> f64 {
        (z - self.project(z)).norm()
    }

    /// `true` when `z` lies in the domain or within `tol` of it.
    pub fn contains(&self, z: Point, tol: f64) -> bool {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                let inside = (0..n).all(|i| {
                    let e = vertices[(i + 1) % n] - vertices[i];
                    cross(e, z - vertices[i]) >= 0.0
                });
                inside || (tol > 0.0 && self.distance(z) <= tol)
            }
            Shape::Disk { center, radius } => (z - center).norm() <= radius + tol,
            Shape::Ellipse { .. } => {
                let (x, y, a, b) = self.ellipse_local(z);
                if (x / a).powi(2) + (y / b).powi(2) <= 1.0 {
                    return true;
                }
                tol > 0.0 && self.distance(z) <= tol
            }
        }
    }

    /// Nearest point of the domain. Points inside are returned unchanged;
    /// for polygons ties between edges go to the lower edge index.
    pub fn project(&self, z: Point) -> Point {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                let inside = (0..n).all(|i| {
                    let e = vertices[(i + 1) % n] - vertices[i];
                    cross(e, z - vertices[i]) >= 0.0
                });
                if inside {
                    return z;
                }
                let mut best = (f64::INFINITY, z);
                for i in 0..n {
                    let c = closest_on_segment(z, vertices[i], vertices[(i + 1) % n]);
                    let d = (z - c).norm();
                    if d < best.0 {
                        best = (d, c);
                    }
                }
                best.1
            }
            Shape::Disk { center, radius } => {
                let r = z - center;
                let m = r.norm();
                if m <= *radius {
                    z
                } else {
                    center + r * (radius / m)
                }
            }
            Shape::Ellipse {
                center, rotation, ..
            } => {
                let (x, y, a, b) = self.ellipse_local(z);
                if (x / a).powi(2) + (y / b).powi(2) <= 1.0 {
                    return z;
                }
                let (px, py) = ellipse_closest_point(a, b, x, y);
                center + Complex64::new(px, py) * Complex64::from_polar(1.0, *rotation)
            }
        }
    }

    /// Coordinates of `z` in the frame of the ellipse axes, plus the axes.
    fn ellipse_local(&self, z: Point) -> (f64, f64, f64, f64) {
        match &self.shape {
            Shape::Ellipse {
                center,
                a,
                b,
                rotation,
            } => {
                let w = (z - center) * Complex64::from_polar(1.0, -rotation);
                (w.re, w.im, *a, *b)
            }
            _ => unreachable!("ellipse_local on a non-ellipse"),
        }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let mut lo = vertices[0];
                let mut hi = vertices[0];
                for v in vertices {
                    lo = Complex64::new(lo.re.min(v.re), lo.im.min(v.im));
                    hi = Complex64::new(hi.re.max(v.re), hi.im.max(v.im));
                }
                (lo, hi)
            }
            Shape::Disk { center, radius } => (
                center - Complex64::new(*radius, *radius),
                center + Complex64::new(*radius, *radius),
            ),
            Shape::Ellipse {
                center,
                a,
                b,
                rotation,
            } => {
                let (s, c) = rotation.sin_cos();
                let hx = ((a * c).powi(2) + (b * s).powi(2)).sqrt();
                let hy = ((a * s).powi(2) + (b * c).powi(2)).sqrt();
                (center - Complex64::new(hx, hy), center + Complex64::new(hx, hy))
            }
        }
    }

    /// Reciprocal of the minimal boundary curvature: the radius `R` for
    /// which the domain is `R`-circular. Polygons have flat edges and are
    /// not `R`-circular for any `R`.
    pub fn circularity_radius(&self) -> Option<f64> {
        match &self.shape {
            Shape::Polygon { .. } => None,
            Shape::Disk { radius, .. } => Some(*radius),
            Shape::Ellipse { a, b, .. } => Some(a * a / b),
        }
    }

    /// Aggregates every geometric quantity into one summary.
    pub fn summarize(&self) -> GeometrySummary {
        self.summarize_with(&GridConfig::default())
    }

    pub fn summarize_with(&self, grid: &GridConfig) -> GeometrySummary {
        GeometrySummary {
            diameter: self.diameter(),
            width: self.width(),
            perimeter: self.perimeter(),
            depth: self.global_depth_with(grid),
            largest_supplementary_angle: self.largest_supplementary_angle(),
            mu: self.mu_with(grid),
            classification: self.depth_classification(),
            circularity_radius: self.circularity_radius(),
        }
    }
}

/// Closest point on the ellipse `x²/a² + y²/b² = 1` to an exterior point,
/// by bisection on the Lagrange multiplier.
fn ellipse_closest_point(a: f64, b: f64, x: f64, y: f64) -> (f64, f64) {
    let (sx, sy) = (x.signum(), y.signum());
    let (x, y) = (x.abs(), y.abs());
    // F(t) = (a x / (t + a²))² + (b y / (t + b²))² - 1 decreases on t > -b²
    let f = |t: f64| (a * x / (t + a * a)).powi(2) + (b * y / (t + b * b)).powi(2) - 1.0;
    let mut lo = -b * b + 1e-300;
    if y == 0.0 {
        lo = (a * x - a * a).max(-b * b).max(lo);
    }
    let mut hi = (a * x).max(b * y).max(1.0) * (a + b);
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    if f(lo) < 0.0 {
        lo = -b * b;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-17 * hi.abs().max(1.0) {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    let px = a * a * x / (t + a * a);
    let py = if y == 0.0 {
        0.0
    } else {
        b * b * y / (t + b * b)
    };
    // renormalise onto the curve
    let r = ((px / a).powi(2) + (py / b).powi(2)).sqrt();
    (sx * px / r, sy * py / r)
}

/// Every geometric quantity of a domain in one record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub diameter: f64,
    pub width: f64,
    pub perimeter: f64,
    /// Global depth `h_K`.
    pub depth: f64,
    /// `Ω_K`, radians.
    pub largest_supplementary_angle: f64,
    /// `μ_K`, the largest chord length at which the modulus of continuity
    /// still attains `π/2`.
    pub mu: f64,
    pub classification: DepthClass,
    pub circularity_radius: Option<f64>,
}

pub(crate) fn wrap_angle_pi(x: f64) -> f64 {
    // distance of x from 2πZ
    let r = x.rem_euclid(TAU);
    r.min(TAU - r)
}

pub(crate) const HALF_PI: f64 = PI / 2.0;
