//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! A criterion that cannot be met as stated prints
//! `FAIL [unattainable: ...]` and does not change the exit status; any
//! other failure exits with status 1.

use std::f64::consts::PI;
use std::fs;
use std::time::{Duration, Instant};

use tempfile::TempDir;
use turan_cli::run;
use turan_core::bounds::{self, localdepth_pointwise_check, posdepth_bound, upper_construction};
use turan_core::capacity::{
    chebyshev_min_norm_numeric, regular_polygon_capacity, segment_chebyshev_lower,
    transfinite_diameter_fekete, CompactSet, FeketeConfig,
};
use turan_core::geometry::catalogue;
use turan_core::norms::{self, InnerCurve};
use turan_core::optimizer::{self, random_polynomial, SearchConfig};
use turan_core::{Complex64, ConvexDomain, DepthClass, MonicPolynomial, Norm, QuadratureConfig};

struct Verdict {
    pass: bool,
    detail: String,
    /// Why the criterion cannot be met as stated, when that is the only
    /// failing part.
    unattainable: Option<String>,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
            unattainable: None,
        }
    }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn c(x: f64, y: f64) -> Complex64 {
    Complex64::new(x, y)
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("turan").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn theorem_domains() -> Vec<(&'static str, ConvexDomain)> {
    vec![
        ("square", catalogue::unit_square()),
        ("pentagon", catalogue::regular_polygon(5, 1.0)),
        ("hexagon", catalogue::regular_polygon(6, 1.0)),
        ("ellipse(1,0.5)", catalogue::ellipse(1.0, 0.5)),
    ]
}

fn disk_exactness() -> Verdict {
    let start = Instant::now();
    let disk = catalogue::unit_disk();
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for n in 1..=16 {
        let p = MonicPolynomial::power(c(0.0, 0.0), n).unwrap();
        for q in [Norm::Lq(1.0), Norm::Lq(2.0), Norm::Sup] {
            let m = norms::oscillation(&disk, &p, q, &cfg).unwrap();
            worst = worst.max((m - n as f64).abs() / n as f64);
        }
    }
    let t = start.elapsed();
    Verdict::new(
        worst <= 1e-6 && within(t, 5.0),
        format!("max relative error {worst:.2e}, {:.2} s (limit 5 s)", t.as_secs_f64()),
    )
}

fn turan_equality(dir: &TempDir) -> Verdict {
    let disk = dir.path().join("disk.json");
    fs::write(&disk, r#"{"type": "disk", "center": [0, 0], "radius": 1}"#).unwrap();
    let start = Instant::now();
    let mut values = Vec::new();
    for q in ["inf", "2"] {
        let (code, out, err) = cli(&["search", "--domain", disk.to_str().unwrap(), "--n", "1", "--q", q]);
        if code != 0 {
            return Verdict::new(false, format!("search --q {q} exited {code}: {err}"));
        }
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        values.push(doc["result"]["best_value"].as_f64().unwrap());
    }
    let t = start.elapsed();
    let ok = (values[0] - 0.5).abs() <= 1e-3 && (values[1] - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-3;
    Verdict::new(
        ok && within(t, 30.0),
        format!(
            "q=inf {:.6} (0.5), q=2 {:.6} (0.70711), {:.1} s (limit 30 s)",
            values[0],
            values[1],
            t.as_secs_f64()
        ),
    )
}

fn hexagon_geometry() -> Verdict {
    let hex = catalogue::regular_polygon(6, 1.0).summarize();
    let depth_ok = (hex.depth - 2.0).abs() <= 1e-12;
    let mu_ok = (hex.mu - 1.0).abs() <= 1e-12;
    let mut bad = Vec::new();
    for seed in 0..100u64 {
        let k = catalogue::random_polygon(seed, 3 + (seed % 10) as usize);
        let s = k.summarize();
        if s.depth < s.mu - 1e-12 * s.diameter {
            bad.push(seed);
        }
    }
    let detail = format!(
        "h_K = {:.15} (stated 2), mu_K = {:.15}, h_K >= mu_K on {}/100 random polygons",
        hex.depth,
        hex.mu,
        100 - bad.len()
    );
    let mut v = Verdict::new(depth_ok && mu_ok && bad.is_empty(), detail);
    if !depth_ok && mu_ok && bad.is_empty() {
        v.unattainable = Some(
            "every inward normal chord of the side-1 hexagon joins opposite edges and has length sqrt(3); 2 is the depth at a vertex only"
                .into(),
        );
    }
    v
}

fn depth_classification() -> Verdict {
    let sq = catalogue::unit_square().summarize();
    let tri = catalogue::equilateral_triangle(1.0).summarize();
    let el = catalogue::ellipse(1.0, 0.5).summarize();
    let ok = sq.classification == DepthClass::III
        && sq.depth == 1.0
        && tri.classification == DepthClass::II
        && tri.depth == 0.0
        && el.classification == DepthClass::I;
    Verdict::new(
        ok,
        format!(
            "square {:?} h={}, triangle {:?} h={}, ellipse {:?}",
            sq.classification, sq.depth, tri.classification, tri.depth, el.classification
        ),
    )
}

fn capacity() -> Verdict {
    let start = Instant::now();
    let sq = regular_polygon_capacity(4, 1.0);
    let sq_ok = (sq - 0.59017).abs() <= 1e-4;
    let first = (3..=16).find(|&k| regular_polygon_capacity(k, 1.0) > 1.0);
    let cfg = FeketeConfig::default();
    let sets = [
        ("disk", CompactSet::Domain { domain: catalogue::unit_disk() }, 1.0),
        ("segment", CompactSet::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap(), 0.5),
        ("square", CompactSet::Domain { domain: catalogue::unit_square() }, sq),
    ];
    let mut errs = Vec::new();
    for (name, set, exact) in &sets {
        let f = transfinite_diameter_fekete(set, 64, 1, &cfg).unwrap();
        errs.push((name, (f.potential_estimate - exact).abs() / exact));
    }
    let t = start.elapsed();
    let fek_ok = errs.iter().all(|(_, e)| *e <= 0.02);
    Verdict::new(
        sq_ok && first == Some(7) && fek_ok && within(t, 60.0),
        format!(
            "square {sq:.6}, first k with capacity > side: {first:?}, Fekete m=64 errors {}, {:.1} s (limit 60 s)",
            errs.iter()
                .map(|(n, e)| format!("{n} {:.2}%", 100.0 * e))
                .collect::<Vec<_>>()
                .join(", "),
            t.as_secs_f64()
        ),
    )
}

fn chebyshev() -> Verdict {
    let seg = CompactSet::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
    let mut worst: f64 = 0.0;
    let mut lemma_gap: f64 = 0.0;
    for k in 1..=5u32 {
        let r = chebyshev_min_norm_numeric(&seg, k as usize, 1).unwrap();
        worst = worst.max((r.value - 2f64.powi(1 - k as i32)).abs());
        lemma_gap = lemma_gap.max((r.value - segment_chebyshev_lower(2.0, k)).abs());
    }
    Verdict::new(
        worst <= 1e-4 && lemma_gap <= 1e-4,
        format!("max |minimax - 2^(1-k)| = {worst:.2e}, max gap to 2(|J|/4)^k = {lemma_gap:.2e}"),
    )
}

fn lemma_suites() -> Verdict {
    let named = catalogue::named();
    let cfg = QuadratureConfig::default();
    let mut failures = Vec::new();
    let mut checks = 0;
    for seed in 0..200u64 {
        let (name, k) = &named[(seed % named.len() as u64) as usize];
        let n = 1 + (seed / 7 % 12) as usize;
        let q = [1.0, 2.0, 3.0][(seed % 3) as usize];
        let p = random_polynomial(k, n, 1000 + seed).unwrap();
        let inner = if seed % 2 == 0 {
            InnerCurve::Domain {
                domain: k.transformed(0.5, 0.5 * k.centroid()).unwrap(),
            }
        } else {
            let (a, b) = k.diameter_endpoints();
            InnerCurve::Segment { a, b }
        };
        let mut reports = vec![
            norms::nikolskii_check(k, &p, q, &cfg).unwrap(),
            norms::gabriel_check(k, &inner, &p, q, &cfg).unwrap(),
            norms::gabriel_lower_check(k, &p, q, &cfg).unwrap(),
            norms::markov_check(k, &p),
        ];
        reports.extend(norms::h_mass_check(k, &p, q, &cfg).unwrap());
        for r in reports {
            checks += 1;
            if !r.holds {
                failures.push(format!("seed {seed} {name} n={n} q={q} {}", r.name));
            }
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!("{checks} checks on 200 instances, {} violations {:?}", failures.len(), failures),
    )
}

fn main_theorem() -> Verdict {
    let cfg = QuadratureConfig::default();
    let search = SearchConfig {
        restarts: 2,
        max_iter: 200,
        seed: 3,
        ..SearchConfig::default()
    };
    let mut failures = Vec::new();
    let mut tested = 0;
    let mut min_ratio = f64::INFINITY;
    let mut pointwise = 0;
    let mut norm_form = 0;
    for (name, k) in theorem_domains() {
        let h = k.global_depth();
        let d = k.diameter();
        for n in 1..=16usize {
            for q in [1.0, 2.0, 4.0] {
                let mut polys: Vec<MonicPolynomial> = (0..2)
                    .map(|j| random_polynomial(&k, n, 7919 * n as u64 + j).unwrap())
                    .collect();
                let best = optimizer::minimize_oscillation(&k, n, Norm::Lq(q), &search).unwrap();
                polys.push(MonicPolynomial::new(best.best_zeros));
                for p in polys {
                    tested += 1;
                    let m = norms::oscillation(&k, &p, Norm::Lq(q), &cfg).unwrap();
                    let lower = posdepth_bound(h, d, n);
                    min_ratio = min_ratio.min(m / lower);
                    if m < lower * (1.0 - norms::COMPARE_TOL) {
                        failures.push(format!("{name} n={n} q={q} posdepth"));
                    }
                    let local = localdepth_pointwise_check(&k, &p, q, &cfg).unwrap();
                    pointwise += local.pointwise_samples;
                    norm_form += local.norm_fallback.is_some() as usize;
                    if !local.holds {
                        failures.push(format!("{name} n={n} q={q} localdepth"));
                    }
                }
            }
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!(
            "{tested} polynomials, min M_q / posdepth bound = {min_ratio:.1}, local depth: {pointwise} pointwise samples, {norm_form} norm-form checks, violations {:?}",
            failures
        ),
    )
}

fn upper() -> Verdict {
    let cfg = QuadratureConfig::default();
    let mut failures = Vec::new();
    let mut worst_sup: f64 = 0.0;
    for (name, k) in theorem_domains() {
        let d = k.diameter();
        for n in 1..=16usize {
            for q in [Norm::Lq(1.0), Norm::Lq(2.0), Norm::Lq(4.0), Norm::Sup] {
                let r = upper_construction(&k, n, q, &cfg).unwrap();
                if !r.holds || r.measured > (4.0 * PI + 2.0) * n as f64 / d {
                    failures.push(format!("{name} n={n} q={q}"));
                }
                if q.is_sup() {
                    worst_sup = worst_sup.max((r.measured - n as f64 / d).abs());
                }
            }
        }
    }
    Verdict::new(
        failures.is_empty() && worst_sup <= 1e-8,
        format!("max |M_inf - n/d| = {worst_sup:.2e}, certificate violations {:?}", failures),
    )
}

fn f_verification() -> Verdict {
    let f = bounds::f_value(bounds::F_TAU);
    let df = bounds::f_derivative(bounds::F_TAU);
    let r = bounds::f_check(100_000).unwrap();
    let ok = (f - 0.700037).abs() <= 1e-5
        && (df + 0.000321).abs() <= 1e-5
        && r.grid_min > 0.7
        && r.convex
        && r.grid_points >= 100_000;
    Verdict::new(
        ok,
        format!(
            "f(tau) = {f:.6}, f'(tau) = {df:.6}, grid min {:.6} over {} points, convex {}",
            r.grid_min, r.grid_points, r.convex
        ),
    )
}

fn determinism(dir: &TempDir) -> Verdict {
    let sq = dir.path().join("square.json");
    fs::write(&sq, r#"{"type": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}"#).unwrap();
    let args = [
        "search",
        "--domain",
        sq.to_str().unwrap(),
        "--n",
        "3",
        "--q",
        "2",
        "--restarts",
        "8",
        "--seed",
        "2024",
    ];
    let a = cli(&args);
    let b = cli(&args);
    Verdict::new(
        a.0 == 0 && a == b,
        format!("exit {}, {} bytes, identical: {}", a.0, a.1.len(), a == b),
    )
}

fn main() {
    let dir = TempDir::new().unwrap();
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict + '_>)> = vec![
        ("disk exactness", Box::new(disk_exactness)),
        ("Turán equality", Box::new(|| turan_equality(&dir))),
        ("hexagon geometry", Box::new(hexagon_geometry)),
        ("depth classification", Box::new(depth_classification)),
        ("capacity", Box::new(capacity)),
        ("Chebyshev minimax", Box::new(chebyshev)),
        ("lemma suites", Box::new(lemma_suites)),
        ("main theorem consistency", Box::new(main_theorem)),
        ("upper construction", Box::new(upper)),
        ("f verification", Box::new(f_verification)),
        ("determinism", Box::new(|| determinism(&dir))),
    ];
    let mut unexpected = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let secs = start.elapsed().as_secs_f64();
        let status = match (&v.pass, &v.unattainable) {
            (true, _) => "PASS".to_string(),
            (false, Some(why)) => format!("FAIL [unattainable: {why}]"),
            (false, None) => {
                unexpected += 1;
                "FAIL".to_string()
            }
        };
        println!("{status} {:>2} {name} ({secs:.1} s): {}", i + 1, v.detail);
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
