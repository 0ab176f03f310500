//! Lower and upper bounds for the oscillation factor as evaluable
//! certificates, plus the numeric checks behind the depth-based bound.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, Point, Shape};
use crate::norms::{self, CheckReport, Norm, QuadratureConfig, COMPARE_TOL};
use crate::polynomials::MonicPolynomial;

/// `n/2`: sup norm on the unit disk.
pub fn turan_disk(n: usize) -> f64 {
    n as f64 / 2.0
}

/// `√n/6`: sup norm on `[-1, 1]`. Reference constant only; a segment has
/// no interior and is never an input domain.
pub fn turan_interval(n: usize) -> f64 {
    (n as f64).sqrt() / 6.0
}

/// `n/(2R)` for `R`-circular domains.
pub fn circular_bound(r: f64, n: usize) -> f64 {
    n as f64 / (2.0 * r)
}

/// `b n / 2` for the ellipse with semi-axes `1` and `b` (sup norm).
pub fn erod_ellipse(b: f64, n: usize) -> f64 {
    b * n as f64 / 2.0
}

/// `√n / (20 d)` for any compact convex set (sup norm).
pub fn levenberg_poletsky(d: f64, n: usize) -> f64 {
    (n as f64).sqrt() / (20.0 * d)
}

/// `0.0003 (w/d²) n` for any compact convex domain (sup norm).
pub fn width_diameter_sup_bound(w: f64, d: f64, n: usize) -> f64 {
    0.0003 * w / (d * d) * n as f64
}

/// `n/(1+R)` for `R <= 1` and `n/(1+Rⁿ)` for `R >= 1`: polynomials with all
/// zeros in `|z| <= R`, sup norm on the unit circle.
pub fn malik_govil(r: f64, n: usize) -> f64 {
    if r <= 1.0 {
        n as f64 / (1.0 + r)
    } else {
        n as f64 / (1.0 + r.powi(n as i32))
    }
}

/// `(Γ(q/2+1)/(2√π Γ(q/2+1/2)))^{1/q} · n/2`: `‖p'‖_∞` against `‖p‖_q` on the
/// unit circle.
pub fn malik_lq_sup(q: f64, n: usize) -> f64 {
    let log_c = ln_gamma(q / 2.0 + 1.0) - ln_gamma(q / 2.0 + 0.5) - (2.0 * PI.sqrt()).ln();
    (log_c / q).exp() * n as f64 / 2.0
}

/// `1/(45.3 d)`, an `n`-independent `L^q` floor.
pub fn gabriel_lower(d: f64) -> f64 {
    1.0 / (45.3 * d)
}

/// `h⁴/(3000 d⁵) n`; zero (vacuous) for `h = 0`.
pub fn posdepth_bound(h: f64, d: f64, n: usize) -> f64 {
    h.powi(4) / (3000.0 * d.powi(5)) * n as f64
}

/// `h⁴/(1500 d⁵) n`, the pointwise factor on the `H`-set.
pub fn localdepth_pointwise_bound(h: f64, d: f64, n: usize) -> f64 {
    h.powi(4) / (1500.0 * d.powi(5)) * n as f64
}

/// `h⁴/(1500 · 2^{1/q} d⁵) n`: the depth bound before `2^{1/q}` is
/// replaced by `2`. Reported, never used as a certificate.
pub fn posdepth_tight(h: f64, d: f64, n: usize, q: f64) -> f64 {
    let two_q = if q.is_finite() { 2f64.powf(1.0 / q) } else { 1.0 };
    h.powi(4) / (1500.0 * two_q * d.powi(5)) * n as f64
}

/// `(4π+2) n / d`, the upper constant for convex domains.
pub fn upper_certificate(d: f64, n: usize) -> f64 {
    (4.0 * PI + 2.0) * n as f64 / d
}

/// `(2/d)(L + min(d, ℓ))/min(d, ℓ) · n` with `ℓ = L` for convex curves.
pub fn upper_explicit(d: f64, l: f64, n: usize) -> f64 {
    let m = d.min(l);
    2.0 / d * (l + m) / m * n as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
}

/// Which norms a certificate covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormScope {
    AllQ,
    SupOnly,
}

/// One bound evaluated for a concrete `(K, n, q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub name: String,
    pub kind: BoundKind,
    pub scope: NormScope,
    pub applicable: bool,
    pub reason: String,
    /// `None` exactly when not applicable.
    pub value: Option<f64>,
    /// Whether the certificate may be used as a proven bound.
    pub asserted: bool,
    pub provenance: String,
}

impl BoundCertificate {
    fn lower(name: &str, scope: NormScope, provenance: &str) -> Self {
        Self {
            name: name.into(),
            kind: BoundKind::Lower,
            scope,
            applicable: false,
            reason: String::new(),
            value: None,
            asserted: true,
            provenance: provenance.into(),
        }
    }

    fn with(mut self, applicable: bool, reason: impl Into<String>, value: f64) -> Self {
        self.applicable = applicable;
        self.reason = reason.into();
        self.value = applicable.then_some(value);
        self
    }
}

/// All lower-bound certificates for `(K, n, q)` and the strongest one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundSummary {
    pub certificates: Vec<BoundCertificate>,
    pub best: Option<BoundCertificate>,
}

impl LowerBoundSummary {
    pub fn value(&self) -> f64 {
        self.best.as_ref().and_then(|c| c.value).unwrap_or(0.0)
    }
}

/// Evaluates every lower bound that covers the requested norm.
pub fn best_lower_bound(domain: &ConvexDomain, n: usize, norm: Norm) -> LowerBoundSummary {
    let d = domain.diameter();
    let width = domain.width();
    let sup = norm.is_sup();
    let mut certs = Vec::new();

    let circ = BoundCertificate::lower(
        "circular",
        NormScope::AllQ,
        "n/(2R) for R-circular convex domains",
    );
    certs.push(match domain.circularity_radius() {
        Some(r) => circ.with(true, format!("domain is R-circular with R = {r}"), circular_bound(r, n)),
        None => circ.with(false, "polygons are not R-circular", 0.0),
    });

    let pos = BoundCertificate::lower(
        "posdepth",
        NormScope::AllQ,
        "h_K^4/(3000 d^5) n for domains of positive depth",
    );
    let h = domain.global_depth();
    certs.push(if h > 0.0 {
        pos.with(true, format!("depth h_K = {h}"), posdepth_bound(h, d, n))
    } else {
        pos.with(false, "depth is zero, bound vacuous", 0.0)
    });

    let mut tight = BoundCertificate::lower(
        "posdepth_tight",
        NormScope::AllQ,
        "h_K^4/(1500 2^{1/q} d^5) n, depth bound before the 2^{1/q} <= 2 step",
    );
    tight.asserted = false;
    certs.push(if h > 0.0 {
        tight.with(true, "informational, not a stated bound", posdepth_tight(h, d, n, norm.q()))
    } else {
        tight.with(false, "depth is zero, bound vacuous", 0.0)
    });

    certs.push(
        BoundCertificate::lower("gabriel_lower", NormScope::AllQ, "1/(45.3 d) for convex domains")
            .with(true, "any convex domain", gabriel_lower(d)),
    );

    let sup_reason = "proven for the sup norm only";
    let wd = BoundCertificate::lower(
        "width_diameter_sup_bound",
        NormScope::SupOnly,
        "0.0003 w/d^2 n for compact convex domains",
    );
    certs.push(if sup {
        wd.with(true, "any convex domain", width_diameter_sup_bound(width, d, n))
    } else {
        wd.with(false, sup_reason, 0.0)
    });

    let lp = BoundCertificate::lower(
        "levenberg_poletsky",
        NormScope::SupOnly,
        "sqrt(n)/(20 d) for compact convex sets",
    );
    certs.push(if sup {
        lp.with(true, "any convex set", levenberg_poletsky(d, n))
    } else {
        lp.with(false, sup_reason, 0.0)
    });

    let erod = BoundCertificate::lower("erod_ellipse", NormScope::SupOnly, "b n/2 on the ellipse with axes 1 and b");
    certs.push(match (domain.shape(), sup) {
        (Shape::Ellipse { a, b, .. }, true) => erod.with(
            true,
            format!("ellipse rescaled by 1/a = {}", 1.0 / a),
            erod_ellipse(b / a, n) / a,
        ),
        (Shape::Ellipse { .. }, false) => erod.with(false, sup_reason, 0.0),
        _ => erod.with(false, "domain is not an ellipse", 0.0),
    });

    let turan = BoundCertificate::lower("turan_disk", NormScope::SupOnly, "n/2 on the unit disk");
    certs.push(match (domain.shape(), sup) {
        (Shape::Disk { radius, .. }, true) => {
            turan.with(true, format!("disk rescaled by 1/R = {}", 1.0 / radius), turan_disk(n) / radius)
        }
        (Shape::Disk { .. }, false) => turan.with(false, sup_reason, 0.0),
        _ => turan.with(false, "domain is not a disk", 0.0),
    });

    let best = certs
        .iter()
        .filter(|c| c.applicable && c.asserted)
        .fold(None::<&BoundCertificate>, |acc, c| match acc {
            Some(b) if b.value >= c.value => Some(b),
            _ => Some(c),
        })
        .cloned();
    LowerBoundSummary {
        certificates: certs,
        best,
    }
}

/// Result of the pointwise local-depth check on the `H`-set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalDepthReport {
    pub holds: bool,
    pub samples: usize,
    /// Samples with `n >= 32 d⁴/h⁴`, where the pointwise form is claimed.
    pub pointwise_samples: usize,
    /// Smallest `|p'(ζ)| / (h⁴ n |p(ζ)| / (1500 d⁵))` over those samples.
    pub worst_pointwise_ratio: Option<f64>,
    pub failing_point: Option<Point>,
    /// Same ratio over every sample, including `n < 32 d⁴/h⁴`
    /// (informational).
    pub worst_raw_ratio: Option<f64>,
    /// Norm form `‖p'‖_q >= h⁴ n ‖p‖_q / (1500 d⁵)` covering the samples with
    /// `n < 32 d⁴/h⁴`, with `h` the largest local depth among them.
    pub norm_fallback: Option<CheckReport>,
}

/// Samples of `H` at which the local-depth check is run.
pub const LOCALDEPTH_SAMPLES: usize = 512;

/// Checks `|p'(ζ)| >= h(ζ)⁴/(1500 d⁵) n |p(ζ)|` on sampled `ζ ∈ H`. Below
/// `n₀ = 32 d⁴/h⁴` the estimate is only available in norm form, which is
/// checked instead.
pub fn localdepth_pointwise_check(
    domain: &ConvexDomain,
    p: &MonicPolynomial,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<LocalDepthReport> {
    let h_set = norms::h_set(domain, p, q)?;
    let par = domain.parametrize();
    let total: f64 = h_set.iter().map(|(a, b)| b - a).sum();
    let d = domain.diameter();
    let n = p.degree();
    let mut ts = Vec::new();
    if total > 0.0 {
        for k in 0..LOCALDEPTH_SAMPLES {
            let mut s = total * (k as f64 + 0.5) / LOCALDEPTH_SAMPLES as f64;
            for &(a, b) in &h_set {
                if s <= b - a {
                    ts.push(a + s);
                    break;
                }
                s -= b - a;
            }
        }
    }
    let mut worst_pt: Option<(f64, Point)> = None;
    let mut worst_raw: Option<f64> = None;
    let mut small_h: Option<f64> = None;
    let mut pointwise = 0;
    for &t in &ts {
        let z = par.point(t);
        let h = domain.local_depth(t);
        let (pz, dpz) = p.eval_with_derivative(z);
        let rhs = localdepth_pointwise_bound(h, d, n) * pz.norm();
        let ratio = if rhs > 0.0 { dpz.norm() / rhs } else { f64::INFINITY };
        worst_raw = Some(worst_raw.map_or(ratio, |w| w.min(ratio)));
        let n0 = 32.0 * d.powi(4) / h.powi(4);
        if n as f64 >= n0 {
            pointwise += 1;
            if worst_pt.is_none_or(|(w, _)| ratio < w) {
                worst_pt = Some((ratio, z));
            }
        } else {
            small_h = Some(small_h.map_or(h, |m| m.max(h)));
        }
    }
    let norm_fallback = match small_h {
        Some(h) => {
            let m = norms::oscillation(domain, p, Norm::Lq(q), cfg)?;
            let mut r = CheckReport {
                name: "localdepth_norm_form".into(),
                holds: false,
                lhs: m,
                rhs: localdepth_pointwise_bound(h, d, n),
                margin: 0.0,
            };
            r.margin = (r.lhs - r.rhs) / r.rhs.max(f64::MIN_POSITIVE);
            r.holds = r.lhs >= r.rhs * (1.0 - COMPARE_TOL);
            Some(r)
        }
        None => None,
    };
    let pointwise_ok = worst_pt.is_none_or(|(w, _)| w >= 1.0 - COMPARE_TOL);
    let holds = pointwise_ok && norm_fallback.as_ref().is_none_or(|r| r.holds);
    Ok(LocalDepthReport {
        holds,
        samples: ts.len(),
        pointwise_samples: pointwise,
        worst_pointwise_ratio: worst_pt.map(|w| w.0),
        failing_point: worst_pt.filter(|w| w.0 < 1.0 - COMPARE_TOL).map(|w| w.1),
        worst_raw_ratio: worst_raw,
        norm_fallback,
    })
}

/// `f(t) = (1/t) ln((1-3t)/(1-6t)) - 4 ln(4π) t + 16 t ln t` on `(0, 1/8]`.
pub fn f_value(t: f64) -> f64 {
    let log_ratio = (-3.0 * t).ln_1p() - (-6.0 * t).ln_1p();
    log_ratio / t - 4.0 * (4.0 * PI).ln() * t + 16.0 * t * t.ln()
}

/// Analytic `f'(t)`.
pub fn f_derivative(t: f64) -> f64 {
    let log_ratio = (-3.0 * t).ln_1p() - (-6.0 * t).ln_1p();
    -log_ratio / (t * t) + (6.0 / (1.0 - 6.0 * t) - 3.0 / (1.0 - 3.0 * t)) / t
        - 4.0 * (4.0 * PI).ln()
        + 16.0 * t.ln()
        + 16.0
}

/// The touching point used for the supporting-line estimate.
pub const F_TAU: f64 = 0.078628;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FCheckReport {
    pub tau: f64,
    pub f_tau: f64,
    pub df_tau: f64,
    /// Central difference of `f` at `τ` with step `1e-7`.
    pub df_tau_central: f64,
    pub grid_points: usize,
    pub grid_min: f64,
    pub argmin: f64,
    /// `f(τ) + f'(τ)(1/8 - τ)`.
    pub supporting_line: f64,
    pub convex: bool,
    pub holds: bool,
}

/// Evaluates `f` on a logarithmic plus uniform grid of `(0, 1/8]` and
/// verifies that it stays above `0.7`.
pub fn f_check(grid_size: usize) -> Result<FCheckReport> {
    if grid_size < 1000 {
        return Err(Error::OutOfRange(format!("grid_size must be >= 1000, got {grid_size}")));
    }
    let end = 0.125;
    let half = grid_size / 2;
    let uniform: Vec<f64> = (1..=grid_size - half).map(|k| end * k as f64 / (grid_size - half) as f64).collect();
    let (lo, hi) = (1e-9f64.ln(), (end / (grid_size - half) as f64).ln());
    let logs: Vec<f64> = (0..half).map(|k| (lo + (hi - lo) * k as f64 / (half - 1) as f64).exp()).collect();
    let mut grid = logs.clone();
    grid.extend_from_slice(&uniform);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let vals: Vec<f64> = grid.iter().map(|&t| f_value(t)).collect();
    let (argmin, grid_min) = grid
        .iter()
        .zip(&vals)
        .fold((0.0, f64::INFINITY), |b, (&t, &v)| if v < b.1 { (t, v) } else { b });

    // second differences on the uniform grid, slopes on the log grid
    let fu: Vec<f64> = uniform.iter().map(|&t| f_value(t)).collect();
    let mut convex = fu.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -1e-9);
    // on the log grid: slope increments scaled by the local step
    let fl: Vec<f64> = logs.iter().map(|&t| f_value(t)).collect();
    convex &= (1..logs.len() - 1).all(|k| {
        let s0 = (fl[k] - fl[k - 1]) / (logs[k] - logs[k - 1]);
        let s1 = (fl[k + 1] - fl[k]) / (logs[k + 1] - logs[k]);
        (s1 - s0) * 0.5 * (logs[k + 1] - logs[k - 1]) >= -1e-9
    });

    let f_tau = f_value(F_TAU);
    let df_tau = f_derivative(F_TAU);
    let step = 1e-7;
    let df_tau_central = (f_value(F_TAU + step) - f_value(F_TAU - step)) / (2.0 * step);
    let supporting_line = f_tau + df_tau * (end - F_TAU);
    Ok(FCheckReport {
        tau: F_TAU,
        f_tau,
        df_tau,
        df_tau_central,
        grid_points: grid.len(),
        grid_min,
        argmin,
        supporting_line,
        convex,
        holds: grid_min > 0.7 && supporting_line > 0.7 && convex,
    })
}

/// The near-extremal polynomial `(z - z₀)ⁿ` with `z₀` a diameter endpoint,
/// its measured oscillation and the upper certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperConstruction {
    pub polynomial: MonicPolynomial,
    pub norm: Norm,
    pub measured: f64,
    /// `(4π+2) n / d`.
    pub certificate: f64,
    /// `(2/d)(L+d)/d · n`.
    pub explicit: f64,
    /// `n/d`, the exact sup-norm value of the construction.
    pub sup_value: f64,
    pub holds: bool,
}

pub fn upper_construction(
    domain: &ConvexDomain,
    n: usize,
    norm: Norm,
    cfg: &QuadratureConfig,
) -> Result<UpperConstruction> {
    if n == 0 {
        return Err(Error::OutOfRange("degree must be >= 1".into()));
    }
    let (z0, _) = domain.diameter_endpoints();
    let p = MonicPolynomial::power(z0, n)?;
    let measured = norms::oscillation(domain, &p, norm, cfg)?;
    let d = domain.diameter();
    let certificate = upper_certificate(d, n);
    Ok(UpperConstruction {
        polynomial: p,
        norm,
        measured,
        certificate,
        explicit: upper_explicit(d, domain.perimeter(), n),
        sup_value: n as f64 / d,
        holds: measured <= certificate * (1.0 + COMPARE_TOL),
    })
}
