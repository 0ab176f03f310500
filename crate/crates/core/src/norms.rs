//! Boundary `L^q` and sup norms of polynomials, the oscillation factor
//! `M_q(p)`, the `H`-set and the norm inequalities used by the lower-bound
//! argument.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryParametrization, ConvexDomain, Point};
use crate::polynomials::MonicPolynomial;
use crate::quadrature::{adaptive, gauss_legendre, Integral};

/// Boundary samples used by the sup-norm sampler and the `H`-set scan.
pub const SUP_SAMPLES: usize = 8192;

/// Relative slack allowed when comparing two computed norms.
pub const COMPARE_TOL: f64 = 1e-8;

/// The constant `π(e+1)+e` of the Gabriel type comparison of curve
/// integrals.
pub const GABRIEL_CONSTANT: f64 = PI * (E + 1.0) + E;

/// Adaptive Gauss–Legendre quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Gauss nodes per panel.
    pub nodes: usize,
    /// Panels per smooth arc before refinement.
    pub initial_panels: usize,
    pub rel_tol: f64,
    pub max_depth: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            nodes: 32,
            initial_panels: 4,
            rel_tol: 1e-9,
            max_depth: 12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::Invalid(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if self.max_depth < 1 || self.nodes < 1 || self.initial_panels < 1 {
            return Err(Error::Invalid(
                "nodes, initial_panels and max_depth must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Which boundary norm: `L^q` for `q >= 1`, or the sup norm (`q = ∞`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Norm {
    Lq(f64),
    Sup,
}

impl Norm {
    pub fn new(q: f64) -> Result<Self> {
        if q == f64::INFINITY {
            Ok(Norm::Sup)
        } else if q >= 1.0 && q.is_finite() {
            Ok(Norm::Lq(q))
        } else {
            Err(Error::OutOfRange(format!("norm exponent must be in [1, inf], got {q}")))
        }
    }

    pub fn q(&self) -> f64 {
        match self {
            Norm::Lq(q) => *q,
            Norm::Sup => f64::INFINITY,
        }
    }

    pub fn is_sup(&self) -> bool {
        matches!(self, Norm::Sup)
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Lq(q) => write!(f, "{q}"),
            Norm::Sup => f.write_str("inf"),
        }
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "sup" | "∞" => Ok(Norm::Sup),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad norm exponent '{s}'")))
                .and_then(Norm::new),
        }
    }
}

impl Serialize for Norm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Norm::Lq(q) => s.serialize_f64(*q),
            Norm::Sup => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Norm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(q) => Norm::new(q),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// A norm value with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// `∫_a^b g(γ(t)) dt` for `0 <= a <= b <= L`, split at corners.
fn integrate_arclength(
    par: &BoundaryParametrization,
    g: &dyn Fn(Point) -> f64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Integral {
    let rule = gauss_legendre(cfg.nodes);
    let mut panels = Vec::new();
    for piece in par.pieces() {
        let lo = a.max(piece.t0);
        let hi = b.min(piece.t1);
        if hi <= lo {
            continue;
        }
        let native = |t: f64| {
            if t >= piece.t1 {
                piece.u1
            } else if t <= piece.t0 {
                piece.u0
            } else {
                par.locate(t).1
            }
        };
        let (u0, u1) = (native(lo), native(hi));
        let k = cfg.initial_panels;
        for j in 0..k {
            let x0 = u0 + (u1 - u0) * j as f64 / k as f64;
            let x1 = if j + 1 == k {
                u1
            } else {
                u0 + (u1 - u0) * (j + 1) as f64 / k as f64
            };
            panels.push((piece.index, x0, x1));
        }
    }
    let integrand = |piece: usize, u: f64| g(par.piece_point(piece, u)) * par.piece_speed(piece, u);
    let coarse: f64 = panels
        .iter()
        .map(|&(p, x0, x1)| rule.integrate(x0, x1, |u| integrand(p, u)))
        .sum();
    let width: f64 = panels.iter().map(|&(_, x0, x1)| x1 - x0).sum();
    if width <= 0.0 {
        return Integral::ZERO;
    }
    let density = (cfg.rel_tol * coarse.abs() / width).max(f64::MIN_POSITIVE);
    panels.iter().fold(Integral::ZERO, |acc, &(p, x0, x1)| {
        let mut f = |u: f64| integrand(p, u);
        acc.add(adaptive(&rule, &mut f, x0, x1, density, cfg.max_depth))
    })
}

/// `∫_Γ g |dz|`.
pub fn boundary_integral(
    domain: &ConvexDomain,
    g: &dyn Fn(Point) -> f64,
    cfg: &QuadratureConfig,
) -> Integral {
    let par = domain.parametrize();
    integrate_arclength(&par, g, 0.0, par.length(), cfg)
}

fn root_of_integral(i: Integral, q: f64) -> NormEstimate {
    let value = i.value.max(0.0).powf(1.0 / q);
    // first-order propagation through x ↦ x^{1/q}
    let error = if i.value > 0.0 {
        value / (q * i.value) * i.error
    } else {
        i.error.powf(1.0 / q)
    };
    NormEstimate {
        value,
        error,
        converged: i.converged,
    }
}

/// `(∫_Γ |f|^q |dz|)^{1/q}`.
pub fn boundary_lq_norm(
    domain: &ConvexDomain,
    f: &dyn Fn(Point) -> Complex64,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<NormEstimate> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::OutOfRange(format!("q must be in [1, inf), got {q}")));
    }
    cfg.validate()?;
    let i = boundary_integral(domain, &|z| f(z).norm().powf(q), cfg);
    Ok(root_of_integral(i, q))
}

/// Maximum of `g(γ(t))` and its arc-length location: a uniform scan with
/// the corners added, then golden-section refinement around the largest
/// local maxima.
pub fn boundary_sup(domain: &ConvexDomain, g: &dyn Fn(Point) -> f64) -> (f64, f64) {
    let par = domain.parametrize();
    sup_on(&par, g, SUP_SAMPLES)
}

fn sup_on(par: &BoundaryParametrization, g: &dyn Fn(Point) -> f64, samples: usize) -> (f64, f64) {
    let l = par.length();
    let mut ts: Vec<f64> = (0..samples).map(|k| l * k as f64 / samples as f64).collect();
    ts.extend(par.corner_positions());
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let vals: Vec<f64> = ts.iter().map(|&t| g(par.point(t))).collect();
    let m = ts.len();
    let mut peaks: Vec<usize> = (0..m)
        .filter(|&k| vals[k] >= vals[(k + m - 1) % m] && vals[k] >= vals[(k + 1) % m])
        .collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    let mut best = (vals[peaks[0]], ts[peaks[0]]);
    for &k in peaks.iter().take(8) {
        let lo = if k == 0 { ts[m - 1] - l } else { ts[k - 1] };
        let hi = if k + 1 == m { ts[0] + l } else { ts[k + 1] };
        let (t, v) = crate::geometry::golden_search(&|t| -g(par.point(t)), lo, hi, 1e-13 * l);
        if -v > best.0 {
            best = (-v, t.rem_euclid(l));
        }
    }
    best
}

/// `‖p‖_∞ = max_Γ |p|` and where it is attained.
pub fn boundary_sup_norm(domain: &ConvexDomain, p: &MonicPolynomial) -> (f64, f64) {
    boundary_sup(domain, &|z| p.eval(z).norm())
}

/// Everything measured for one `(K, p, q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMeasureReport {
    pub q: Norm,
    /// `‖p‖` in the chosen norm.
    pub lq_norm_p: f64,
    /// `‖p'‖` in the chosen norm.
    pub lq_norm_dp: f64,
    pub sup_norm_p: f64,
    /// `M_q(p) = ‖p'‖ / ‖p‖`.
    pub oscillation: f64,
    pub error_p: f64,
    pub error_dp: f64,
    /// `false` when some quadrature panel hit the depth limit.
    pub converged: bool,
    /// `H`-set as arc-length intervals (empty for the sup norm).
    pub h_intervals: Vec<(f64, f64)>,
}

/// Just `M_q(p)`, without the report extras.
pub fn oscillation(
    domain: &ConvexDomain,
    p: &MonicPolynomial,
    norm: Norm,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (a, b) = norm_pair(domain, p, norm, cfg)?;
    Ok(b.value / a.value)
}

fn norm_pair(
    domain: &ConvexDomain,
    p: &MonicPolynomial,
    norm: Norm,
    cfg: &QuadratureConfig,
) -> Result<(NormEstimate, NormEstimate)> {
    match norm {
        Norm::Sup => {
            let exact = |v: f64| NormEstimate {
                value: v,
                error: 0.0,
                converged: true,
            };
            Ok((
                exact(boundary_sup_norm(domain, p).0),
                exact(boundary_sup(domain, &|z| p.eval_derivative(z).norm()).0),
            ))
        }
        Norm::Lq(q) => Ok((
            boundary_lq_norm(domain, &|z| p.eval(z), q, cfg)?,
            boundary_lq_norm(domain, &|z| p.eval_derivative(z), q, cfg)?,
        )),
    }
}

/// Full measurement report for `M_q(p)`.
pub fn oscillation_ratio(
    domain: &ConvexDomain,
    p: &MonicPolynomial,
    norm: Norm,
    cfg: &QuadratureConfig,
) -> Result<BoundaryMeasureReport> {
    let (a, b) = norm_pair(domain, p, norm, cfg)?;
    if !(a.value > 0.0) {
        return Err(Error::Precondition("polynomial vanishes on the boundary".into()));
    }
    let sup = match norm {
        Norm::Sup => a.value,
        Norm::Lq(_) => boundary_sup_norm(domain, p).0,
    };
    let h_intervals = match norm {
        Norm::Sup => Vec::new(),
        Norm::Lq(q) => h_set_with_sup(domain, p, q, sup),
    };
    Ok(BoundaryMeasureReport {
        q: norm,
        lq_norm_p: a.value,
        lq_norm_dp: b.value,
        sup_norm_p: sup,
        oscillation: b.value / a.value,
        error_p: a.error,
        error_dp: b.error,
        converged: a.converged && b.converged,
        h_intervals,
    })
}

/// `c_q = (8π(q+1))^{-1/q}`.
pub fn h_set_constant(q: f64) -> f64 {
    (8.0 * PI * (q + 1.0)).powf(-1.0 / q)
}

/// The `H`-set threshold `c_q n^{-2/q} ‖p‖_∞`.
pub fn h_set_threshold(q: f64, n: usize, sup: f64) -> f64 {
    h_set_constant(q) * (n as f64).powf(-2.0 / q) * sup
}

/// `H = {t : |p(γ(t))| > c_q n^{-2/q} ‖p‖_∞}` as disjoint arc-length
/// intervals in `[0, L]`. A set wrapping through `t = 0` is returned as two
/// intervals `[0, a]` and `[b, L]`.
pub fn h_set(domain: &ConvexDomain, p: &MonicPolynomial, q: f64) -> Result<Vec<(f64, f64)>> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::OutOfRange(format!("q must be in [1, inf), got {q}")));
    }
    let sup = boundary_sup_norm(domain, p).0;
    Ok(h_set_with_sup(domain, p, q, sup))
}

fn h_set_with_sup(domain: &ConvexDomain, p: &MonicPolynomial, q: f64, sup: f64) -> Vec<(f64, f64)> {
    let thr = h_set_threshold(q, p.degree(), sup);
    let par = domain.parametrize();
    let g = |t: f64| p.eval(par.point(t)).norm() - thr;
    superlevel_intervals(&g, par.length(), SUP_SAMPLES)
}

/// Intervals of `[0, l]` where `g > 0`, from `samples` grid points with
/// bisection of each sign change to `1e-10`.
fn superlevel_intervals(g: &dyn Fn(f64) -> f64, l: f64, samples: usize) -> Vec<(f64, f64)> {
    let h = l / samples as f64;
    let vals: Vec<f64> = (0..=samples).map(|k| g(h * k as f64)).collect();
    let crossing = |mut a: f64, mut b: f64| {
        // g(a) and g(b) on opposite sides of zero
        let ga_pos = g(a) > 0.0;
        while b - a > 1e-10 {
            let m = 0.5 * (a + b);
            if (g(m) > 0.0) == ga_pos {
                a = m;
            } else {
                b = m;
            }
        }
        if ga_pos {
            a
        } else {
            b
        }
    };
    let mut out = Vec::new();
    let mut start = if vals[0] > 0.0 { Some(0.0) } else { None };
    for k in 0..samples {
        let (a, b) = (h * k as f64, h * (k + 1) as f64);
        let (pa, pb) = (vals[k] > 0.0, vals[k + 1] > 0.0);
        if pa && !pb {
            out.push((start.take().unwrap_or(a), crossing(a, b)));
        } else if !pa && pb {
            start = Some(crossing(a, b));
        }
    }
    if let Some(s) = start {
        out.push((s, l));
    }
    out
}

/// Outcome of one inequality check `lhs >= rhs` (or `<=` for upper
/// comparisons, with the sides arranged so that `lhs >= rhs` is claimed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// `(lhs - rhs) / |rhs|`.
    pub margin: f64,
}

impl CheckReport {
    pub fn at_least(name: &str, lhs: f64, rhs: f64) -> Self {
        let scale = rhs.abs().max(f64::MIN_POSITIVE);
        Self {
            name: name.to_string(),
            holds: lhs >= rhs - COMPARE_TOL * scale,
            lhs,
            rhs,
            margin: (lhs - rhs) / scale,
        }
    }
}

fn require_q(q: f64) -> Result<()> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::OutOfRange(format!("q must be in [1, inf), got {q}")));
    }
    Ok(())
}

/// `‖p‖_q >= (d/(2(q+1)))^{1/q} n^{-2/q} ‖p‖_∞`.
pub fn nikolskii_check(
    domain: &ConvexDomain,
    p: &MonicPolynomial,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<CheckReport> {
    require_q(q)?;
    let lq = boundary_lq_norm(domain, &|z| p.eval(z), q, cfg)?.value;
    let sup = boundary_sup_norm(domain, p).0;
    let d = domain.diameter();
    let n = p.degree() as f64;
    let rhs = (d / (2.0 * (q + 1.0))).powf(1.0 / q) * sup * n.powf(-2.0 / q);
    Ok(CheckReport::at_least("nikolskii", lq, rhs))
}

/// `∫_H |p|^q >= ½ ‖p‖_q^q`, and for `n >= 8` also
/// `log(‖p‖_∞ / |p(ζ)|) <= log(16π) + 2 log n` on sampled points of `H`.
pub fn h_mass_check(
    domain: &ConvexDomain,
    p: &MonicPolynomial,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<CheckReport>> {
    require_q(q)?;
    let par = domain.parametrize();
    let sup = boundary_sup_norm(domain, p).0;
    let h = h_set_with_sup(domain, p, q, sup);
    let g = |z: Point| p.eval(z).norm().powf(q);
    let total = integrate_arclength(&par, &g, 0.0, par.length(), cfg).value;
    let on_h: f64 = h
        .iter()
        .map(|&(a, b)| integrate_arclength(&par, &g, a, b, cfg).value)
        .sum();
    let mut out = vec![CheckReport::at_least("h_mass", on_h, 0.5 * total)];
    let n = p.degree();
    if n >= 8 {
        let bound = (16.0 * PI).ln() + 2.0 * (n as f64).ln();
        let worst = h
            .iter()
            .flat_map(|&(a, b)| (0..=16).map(move |k| a + (b - a) * k as f64 / 16.0))
            .map(|t| (sup / p.eval(par.point(t)).norm()).ln())
            .fold(0.0, f64::max);
        out.push(CheckReport::at_least("h_log_ratio", bound, worst));
    }
    Ok(out)
}

/// The inner curve of a Gabriel comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InnerCurve {
    Domain { domain: ConvexDomain },
    /// A segment, traversed there and back.
    Segment { a: Point, b: Point },
}

/// `∫_C |p|^λ |dz| <= (π(e+1)+e) ∫_Γ |p|^λ |dz|` for a convex curve `C`
/// inside `K`.
pub fn gabriel_check(
    outer: &ConvexDomain,
    inner: &InnerCurve,
    p: &MonicPolynomial,
    lambda: f64,
    cfg: &QuadratureConfig,
) -> Result<CheckReport> {
    if !(lambda >= 0.0) {
        return Err(Error::OutOfRange(format!("lambda must be >= 0, got {lambda}")));
    }
    let tol = 1e-9 * outer.diameter();
    let g = |z: Point| p.eval(z).norm().powf(lambda);
    let inner_integral = match inner {
        InnerCurve::Domain { domain } => {
            let par = domain.parametrize();
            let l = par.length();
            let samples: Vec<Point> = match domain.vertices() {
                Some(v) => v.to_vec(),
                None => (0..1024).map(|k| par.point(l * k as f64 / 1024.0)).collect(),
            };
            if let Some(z) = samples.iter().find(|z| !outer.contains(**z, tol)) {
                return Err(Error::Precondition(format!(
                    "inner curve leaves the outer domain near {z}"
                )));
            }
            boundary_integral(domain, &g, cfg).value
        }
        InnerCurve::Segment { a, b } => {
            if !outer.contains(*a, tol) || !outer.contains(*b, tol) {
                return Err(Error::Precondition(
                    "segment endpoints must lie in the outer domain".into(),
                ));
            }
            let len = (b - a).norm();
            let rule = gauss_legendre(cfg.nodes);
            let mut f = |s: f64| g(a + (b - a) * s) * len;
            let k = cfg.initial_panels;
            let coarse: f64 = (0..k)
                .map(|j| rule.integrate(j as f64 / k as f64, (j + 1) as f64 / k as f64, &mut f))
                .sum();
            let density = (cfg.rel_tol * coarse.abs()).max(f64::MIN_POSITIVE);
            let once = (0..k).fold(Integral::ZERO, |acc, j| {
                acc.add(adaptive(
                    &rule,
                    &mut f,
                    j as f64 / k as f64,
                    (j + 1) as f64 / k as f64,
                    density,
                    cfg.max_depth,
                ))
            });
            2.0 * once.value
        }
    };
    let outer_integral = boundary_integral(outer, &g, cfg).value;
    let ratio = inner_integral / outer_integral;
    let mut r = CheckReport::at_least("gabriel", GABRIEL_CONSTANT, ratio);
    r.lhs = ratio;
    r.rhs = GABRIEL_CONSTANT;
    r.margin = (GABRIEL_CONSTANT - ratio) / GABRIEL_CONSTANT;
    Ok(r)
}

/// `‖p'‖_q > ‖p‖_q / (45.3 d)`.
pub fn gabriel_lower_check(
    domain: &ConvexDomain,
    p: &MonicPolynomial,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<CheckReport> {
    require_q(q)?;
    let m = oscillation(domain, p, Norm::Lq(q), cfg)?;
    Ok(CheckReport::at_least(
        "gabriel_lower",
        m,
        crate::bounds::gabriel_lower(domain.diameter()),
    ))
}

/// `‖p'‖_∞ <= (4/d) n² ‖p‖_∞`.
pub fn markov_check(domain: &ConvexDomain, p: &MonicPolynomial) -> CheckReport {
    let sup_p = boundary_sup_norm(domain, p).0;
    let sup_dp = boundary_sup(domain, &|z| p.eval_derivative(z).norm()).0;
    let n = p.degree() as f64;
    let bound = 4.0 * n * n / domain.diameter() * sup_p;
    let mut r = CheckReport::at_least("markov", bound, sup_dp);
    r.lhs = sup_dp;
    r.rhs = bound;
    r.margin = (bound - sup_dp) / bound;
    r
}
