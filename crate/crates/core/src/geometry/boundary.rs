use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ConvexDomain, Point, Shape};
use crate::quadrature::gauss_legendre;

const ELLIPSE_PANELS: usize = 256;
const ELLIPSE_NODES: usize = 16;

/// Left and right tangent angles `α₋(t) <= α₊(t)` of the boundary, lifted
/// continuously so that they increase by exactly `2π` per revolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentAngles {
    pub left: f64,
    pub right: f64,
}

impl TangentAngles {
    /// The supplementary angle `α₊ - α₋`.
    pub fn jump(&self) -> f64 {
        self.right - self.left
    }
}

/// A smooth piece of the boundary in its native parameter `u ∈ [u0, u1]`,
/// occupying arc-length parameters `[t0, t1]`. Polygon edges and the disk
/// use `u = t`; the ellipse uses the eccentric anomaly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub index: usize,
    pub u0: f64,
    pub u1: f64,
    pub t0: f64,
    pub t1: f64,
}

#[derive(Debug, Clone)]
enum Kind {
    Polygon {
        vertices: Vec<Point>,
        /// Arc length at each vertex, `starts[n] = L`.
        starts: Vec<f64>,
        /// Lifted direction angle of each edge.
        angles: Vec<f64>,
    },
    Disk {
        center: Point,
        radius: f64,
    },
    Ellipse {
        center: Point,
        a: f64,
        b: f64,
        rot: Complex64,
        rotation: f64,
        /// Arc length at `θ_k = 2πk / ELLIPSE_PANELS`.
        table: Vec<f64>,
    },
}

/// Counterclockwise arc-length parametrization `t ↦ γ(t)`, `t ∈ [0, L)`,
/// extended periodically.
#[derive(Debug, Clone)]
pub struct BoundaryParametrization {
    kind: Kind,
    length: f64,
}

impl BoundaryParametrization {
    pub(crate) fn new(domain: &ConvexDomain) -> Self {
        match domain.shape() {
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                let mut starts = Vec::with_capacity(n + 1);
                let mut angles = Vec::with_capacity(n);
                let mut acc = 0.0;
                let mut angle = (vertices[1] - vertices[0]).arg();
                for i in 0..n {
                    starts.push(acc);
                    let e = vertices[(i + 1) % n] - vertices[i];
                    acc += e.norm();
                    if i > 0 {
                        let prev = vertices[i] - vertices[i - 1];
                        angle += (e / prev).arg();
                    }
                    angles.push(angle);
                }
                starts.push(acc);
                Self {
                    kind: Kind::Polygon {
                        vertices: vertices.clone(),
                        starts,
                        angles,
                    },
                    length: acc,
                }
            }
            Shape::Disk { center, radius } => Self {
                kind: Kind::Disk {
                    center: *center,
                    radius: *radius,
                },
                length: TAU * radius,
            },
            Shape::Ellipse {
                center,
                a,
                b,
                rotation,
            } => {
                let (a, b) = (*a, *b);
                let rule = gauss_legendre(ELLIPSE_NODES);
                let h = TAU / ELLIPSE_PANELS as f64;
                let mut table = Vec::with_capacity(ELLIPSE_PANELS + 1);
                let mut acc = 0.0;
                table.push(0.0);
                for k in 0..ELLIPSE_PANELS {
                    let lo = k as f64 * h;
                    acc += rule.integrate(lo, lo + h, |th| ellipse_speed(a, b, th));
                    table.push(acc);
                }
                Self {
                    kind: Kind::Ellipse {
                        center: *center,
                        a,
                        b,
                        rot: Complex64::from_polar(1.0, *rotation),
                        rotation: *rotation,
                        table,
                    },
                    length: acc,
                }
            }
        }
    }

    /// Total arc length `L`.
    pub fn length(&self) -> f64 {
        self.length
    }

    fn wrap(&self, t: f64) -> f64 {
        let r = t.rem_euclid(self.length);
        if r >= self.length {
            0.0
        } else {
            r
        }
    }

    /// `γ(t)`.
    pub fn point(&self, t: f64) -> Point {
        let (piece, u) = self.locate(t);
        self.piece_point(piece, u)
    }

    /// Piece index and native parameter of arc-length parameter `t`.
    pub fn locate(&self, t: f64) -> (usize, f64) {
        let t = self.wrap(t);
        match &self.kind {
            Kind::Polygon { starts, .. } => {
                let n = starts.len() - 1;
                let i = match starts[..n].binary_search_by(|s| s.total_cmp(&t)) {
                    Ok(i) => i,
                    Err(i) => i - 1,
                };
                (i, t)
            }
            Kind::Disk { .. } => (0, t),
            Kind::Ellipse { .. } => (0, self.ellipse_theta(t)),
        }
    }

    /// The smooth pieces of the boundary in counterclockwise order.
    pub fn pieces(&self) -> Vec<Piece> {
        match &self.kind {
            Kind::Polygon { starts, .. } => (0..starts.len() - 1)
                .map(|i| Piece {
                    index: i,
                    u0: starts[i],
                    u1: starts[i + 1],
                    t0: starts[i],
                    t1: starts[i + 1],
                })
                .collect(),
            Kind::Disk { .. } => vec![Piece {
                index: 0,
                u0: 0.0,
                u1: self.length,
                t0: 0.0,
                t1: self.length,
            }],
            Kind::Ellipse { .. } => vec![Piece {
                index: 0,
                u0: 0.0,
                u1: TAU,
                t0: 0.0,
                t1: self.length,
            }],
        }
    }

    /// Point at native parameter `u` of a piece.
    pub fn piece_point(&self, piece: usize, u: f64) -> Point {
        match &self.kind {
            Kind::Polygon {
                vertices, starts, ..
            } => {
                let n = vertices.len();
                let a = vertices[piece];
                let b = vertices[(piece + 1) % n];
                let len = starts[piece + 1] - starts[piece];
                a + (b - a) * ((u - starts[piece]) / len)
            }
            Kind::Disk { center, radius } => center + Complex64::from_polar(*radius, u / radius),
            Kind::Ellipse {
                center, a, b, rot, ..
            } => center + rot * Complex64::new(a * u.cos(), b * u.sin()),
        }
    }

    /// `|dγ/du|` on a piece.
    pub fn piece_speed(&self, _piece: usize, u: f64) -> f64 {
        match &self.kind {
            Kind::Ellipse { a, b, .. } => ellipse_speed(*a, *b, u),
            _ => 1.0,
        }
    }

    /// Arc-length parameter of native parameter `u`.
    pub fn piece_arclength(&self, _piece: usize, u: f64) -> f64 {
        match &self.kind {
            Kind::Ellipse { a, b, table, .. } => ellipse_arclength(*a, *b, table, u),
            _ => u,
        }
    }

    /// Lifted tangent angle on the interior of a piece.
    pub fn piece_tangent_angle(&self, piece: usize, u: f64) -> f64 {
        match &self.kind {
            Kind::Polygon { angles, .. } => angles[piece],
            Kind::Disk { radius, .. } => u / radius + FRAC_PI_2,
            Kind::Ellipse {
                a, b, rotation, ..
            } => {
                let d = Complex64::new(-a * u.sin(), b * u.cos());
                let base = Complex64::new(-u.sin(), u.cos());
                rotation + FRAC_PI_2 + u + (d / base).arg()
            }
        }
    }

    /// Left and right tangent angles at `t`, lifted so that
    /// `α(t + L) = α(t) + 2π`.
    pub fn tangent_angles(&self, t: f64) -> TangentAngles {
        let turns = (t / self.length).floor();
        let lift = TAU * turns;
        let tw = self.wrap(t);
        let ta = match &self.kind {
            Kind::Polygon { starts, angles, .. } => {
                let n = angles.len();
                let tol = 1e-12 * self.length;
                let (i, _) = self.locate(tw);
                // snap to the nearest vertex
                let (vertex, pos) = if (tw - starts[i]).abs() <= tol {
                    (Some(i), i)
                } else if (starts[i + 1] - tw).abs() <= tol {
                    (Some((i + 1) % n), (i + 1) % n)
                } else {
                    (None, i)
                };
                match vertex {
                    Some(v) => {
                        let left = if v == 0 {
                            angles[n - 1] - TAU
                        } else {
                            angles[v - 1]
                        };
                        // vertex 0 reached from the end of the period
                        let extra = if v == 0 && tw > 0.5 * self.length {
                            TAU
                        } else {
                            0.0
                        };
                        TangentAngles {
                            left: left + extra,
                            right: angles[pos] + extra,
                        }
                    }
                    None => TangentAngles {
                        left: angles[i],
                        right: angles[i],
                    },
                }
            }
            _ => {
                let (p, u) = self.locate(tw);
                let mut a = self.piece_tangent_angle(p, u);
                if let Kind::Ellipse { rotation, .. } = &self.kind {
                    // keep α(0) = rotation + π/2 and α increasing over [0, L)
                    let base = rotation + FRAC_PI_2;
                    while a < base - 1e-12 {
                        a += TAU;
                    }
                }
                TangentAngles { left: a, right: a }
            }
        };
        TangentAngles {
            left: ta.left + lift,
            right: ta.right + lift,
        }
    }

    /// Arc-length positions of the corners (polygons only).
    pub fn corner_positions(&self) -> Vec<f64> {
        match &self.kind {
            Kind::Polygon { starts, .. } => starts[..starts.len() - 1].to_vec(),
            _ => Vec::new(),
        }
    }

    /// Supplementary angles at the corners, aligned with
    /// [`corner_positions`](Self::corner_positions).
    pub fn corner_jumps(&self) -> Vec<f64> {
        self.corner_positions()
            .iter()
            .map(|&t| self.tangent_angles(t).jump())
            .collect()
    }

    fn ellipse_theta(&self, t: f64) -> f64 {
        let Kind::Ellipse { a, b, table, .. } = &self.kind else {
            unreachable!()
        };
        let (a, b) = (*a, *b);
        let h = TAU / ELLIPSE_PANELS as f64;
        let k = match table.binary_search_by(|s| s.total_cmp(&t)) {
            Ok(k) => return (k as f64 * h).min(TAU),
            Err(k) => k - 1,
        };
        let (lo, hi) = (k as f64 * h, (k + 1) as f64 * h);
        let frac = (t - table[k]) / (table[k + 1] - table[k]);
        let mut th = lo + frac * h;
        for _ in 0..30 {
            let f = ellipse_arclength(a, b, table, th) - t;
            let step = f / ellipse_speed(a, b, th);
            th = (th - step).clamp(lo, hi);
            if step.abs() < 1e-15 {
                break;
            }
        }
        th
    }
}

fn ellipse_speed(a: f64, b: f64, th: f64) -> f64 {
    let (s, c) = th.sin_cos();
    ((a * s).powi(2) + (b * c).powi(2)).sqrt()
}

fn ellipse_arclength(a: f64, b: f64, table: &[f64], th: f64) -> f64 {
    let h = TAU / ELLIPSE_PANELS as f64;
    let turns = (th / TAU).floor();
    let r = th - turns * TAU;
    let k = ((r / h) as usize).min(ELLIPSE_PANELS - 1);
    let lo = k as f64 * h;
    let rule = gauss_legendre(ELLIPSE_NODES);
    let part = if r > lo {
        rule.integrate(lo, r, |x| ellipse_speed(a, b, x))
    } else {
        0.0
    };
    turns * table[ELLIPSE_PANELS] + table[k] + part
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalogue;
    use std::f64::consts::PI;

    #[test]
    fn unit_disk_parametrization() {
        let p = catalogue::unit_disk().parametrize();
        assert!((p.length() - TAU).abs() < 1e-15);
        for k in 0..16 {
            let t = k as f64 * 0.4;
            let z = p.point(t);
            assert!((z - Complex64::new(t.cos(), t.sin())).norm() < 1e-14);
        }
    }

    #[test]
    fn square_angles_jump_at_corners() {
        let p = catalogue::unit_square().parametrize();
        assert!((p.length() - 4.0).abs() < 1e-15);
        for (k, t) in [0.0, 1.0, 2.0, 3.0].into_iter().enumerate() {
            let ta = p.tangent_angles(t);
            assert!((ta.jump() - PI / 2.0).abs() < 1e-12, "corner {k}");
        }
        let mid = p.tangent_angles(0.5);
        assert_eq!(mid.left, mid.right);
        // total increase over one period is 2π
        let a0 = p.tangent_angles(0.5).right;
        let a1 = p.tangent_angles(4.5).right;
        assert!((a1 - a0 - TAU).abs() < 1e-12);
    }

    #[test]
    fn ellipse_perimeter() {
        // oracle: adaptive Simpson on the speed of the standard parametrization
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let l = (m - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + m)) + f(m));
            let r = (b - m) / 6.0 * (f(m) + 4.0 * f(0.5 * (m + b)) + f(b));
            if depth == 0 || (l + r - whole).abs() < 1e-13 {
                return l + r;
            }
            simpson(f, a, m, l, depth - 1) + simpson(f, m, b, r, depth - 1)
        }
        let speed = |th: f64| ((th.sin()).powi(2) + (0.5 * th.cos()).powi(2)).sqrt();
        let whole = TAU / 6.0 * (speed(0.0) + 4.0 * speed(PI) + speed(TAU));
        let oracle = simpson(&speed, 0.0, TAU, whole, 40);
        let e = ConvexDomain::ellipse(Complex64::new(0.0, 0.0), 1.0, 0.5, 0.0).unwrap();
        let l = e.parametrize().length();
        assert!((l - oracle).abs() < 1e-10, "{l} vs {oracle}");
        assert!((l - 4.84422).abs() < 1e-5);
    }

    #[test]
    fn ellipse_is_arc_length_parametrized() {
        let e = ConvexDomain::ellipse(Complex64::new(0.3, 0.1), 1.0, 0.5, 0.4).unwrap();
        let p = e.parametrize();
        let l = p.length();
        let n = 2000;
        let h = l / n as f64;
        for k in 0..n {
            let d = (p.point((k + 1) as f64 * h) - p.point(k as f64 * h)).norm();
            assert!(d <= h * (1.0 + 1e-12));
            assert!(d >= h * (1.0 - 1e-4));
        }
        let a0 = p.tangent_angles(0.0).right;
        let a1 = p.tangent_angles(l * 0.999_999).right;
        assert!(a1 > a0 && a1 - a0 < TAU);
        assert!((p.tangent_angles(l).right - a0 - TAU).abs() < 1e-9);
    }
}
