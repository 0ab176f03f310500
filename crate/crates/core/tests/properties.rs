//! Invariants over randomly generated domains and polynomials.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use turan_core::bounds::{self, posdepth_bound};
use turan_core::capacity::{self, CompactSet, FeketeConfig};
use turan_core::geometry::catalogue;
use turan_core::norms::{self, InnerCurve};
use turan_core::optimizer::random_polynomial;
use turan_core::{Complex64, ConvexDomain, MonicPolynomial, Norm, QuadratureConfig};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn any_domain() -> impl Strategy<Value = ConvexDomain> {
    any::<u64>().prop_map(catalogue::random_domain)
}

fn any_polygon() -> impl Strategy<Value = ConvexDomain> {
    (any::<u64>(), 3usize..12).prop_map(|(s, n)| catalogue::random_polygon(s, n))
}

fn norm_of(q: u8) -> Norm {
    match q {
        0 => Norm::Sup,
        1 => Norm::Lq(1.0),
        2 => Norm::Lq(2.0),
        _ => Norm::Lq(4.0),
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn local_depth_dominates_global(k in any_domain(), u in 0.0..1.0f64) {
        let h = k.global_depth();
        let t = u * k.parametrize().length();
        prop_assert!(k.local_depth(t) >= h - 1e-9);
    }

    #[test]
    fn h_at_least_mu(k in any_polygon()) {
        prop_assert!(k.global_depth() >= k.mu() - 1e-9 * k.diameter());
    }

    #[test]
    fn depth_sign_follows_supplementary_angle(k in any_polygon()) {
        let omega = k.largest_supplementary_angle();
        let h = k.global_depth();
        if omega < FRAC_PI_2 - 1e-9 {
            prop_assert!(h > 0.0);
        } else if omega > FRAC_PI_2 + 1e-9 {
            prop_assert!(h < 1e-9);
        }
    }

    #[test]
    fn width_diameter_perimeter(k in any_domain()) {
        let (w, d, l) = (k.width(), k.diameter(), k.perimeter());
        prop_assert!(w <= d * (1.0 + 1e-12));
        prop_assert!(2.0 * d <= l * (1.0 + 1e-12));
        prop_assert!(l <= PI * d * (1.0 + 1e-12));
    }

    #[test]
    fn no_acute_angles_means_positive_depth(k in (any::<u64>(), 7usize..12)
        .prop_map(|(s, n)| catalogue::random_polygon(s, n)))
    {
        if k.largest_supplementary_angle() <= FRAC_PI_2 + 1e-12 {
            prop_assert!(k.depth_classification().has_positive_depth());
            prop_assert!(k.global_depth() > 0.0);
        }
    }

    #[test]
    fn modulus_is_nondecreasing(k in any_domain(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let w = k.width();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let m0 = k.modulus_of_continuity(lo * w).unwrap();
        let m1 = k.modulus_of_continuity(hi * w).unwrap();
        prop_assert!(m0.lower <= m0.upper + 1e-12);
        prop_assert!(m0.lower <= m1.lower + 1e-6);
        prop_assert!(m0.upper <= m1.upper + 1e-6);
        let at_width = k.modulus_of_continuity(w).unwrap();
        prop_assert!((at_width.upper - PI).abs() < 1e-6);
    }

    #[test]
    fn disk_modulus_closed_form(r in 0.2..3.0f64, u in 0.0..1.0f64) {
        let k = ConvexDomain::disk(Complex64::new(0.3, -0.2), r).unwrap();
        let t = u * 2.0 * r;
        let m = k.modulus_of_continuity(t).unwrap();
        let exact = 2.0 * (t / (2.0 * r)).asin();
        prop_assert!(m.contains(exact, 1e-6));
    }

    #[test]
    fn derivative_is_value_times_log_derivative(
        zs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..9),
        x in -2.0..2.0f64, y in -2.0..2.0f64,
    ) {
        let p = MonicPolynomial::from_zeros(zs.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap();
        let z = Complex64::new(x, y);
        if let Ok(ld) = p.log_derivative(z) {
            let lhs = p.eval_derivative(z);
            let rhs = p.eval(z) * ld;
            prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn turan_disk_pointwise(
        r in 0.2..2.0f64,
        zs in prop::collection::vec((0.0..1.0f64, 0.0..TAU), 1..9),
        phi in 0.0..TAU,
    ) {
        let c = Complex64::new(0.5, -0.3);
        let p = MonicPolynomial::from_zeros(
            zs.iter().map(|&(s, a)| c + Complex64::from_polar(r * s.sqrt(), a)).collect(),
        ).unwrap();
        let z = c + Complex64::from_polar(r, phi);
        let n = p.degree() as f64;
        let lhs = p.eval_derivative(z).norm();
        let rhs = n / (2.0 * r) * p.eval(z).norm();
        prop_assert!(lhs >= rhs * (1.0 - 1e-9));
    }

    #[test]
    fn sector_counts_partition(
        zs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..12),
        cuts in prop::collection::vec(0.0..TAU, 1..6),
        base in 0.0..TAU,
    ) {
        let p = MonicPolynomial::from_zeros(zs.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap();
        let apex = Complex64::new(1.5, 1.5);
        let mut angles: Vec<f64> = cuts.iter().map(|c| base + c).collect();
        angles.push(base);
        angles.sort_by(f64::total_cmp);
        angles.push(base + TAU);
        let total: usize = angles
            .windows(2)
            .map(|w| p.sector_count(apex, w[0], w[1]).unwrap())
            .sum();
        // a zero on a shared ray is counted by both neighbours
        prop_assert!(total >= p.degree() && total <= p.degree() * angles.len());
        let on_ray = p.zeros().iter().filter(|z| {
            let a = (*z - apex).arg();
            angles.iter().any(|s| ((a - s).rem_euclid(TAU)).min((s - a).rem_euclid(TAU)) < 1e-12)
        }).count();
        if on_ray == 0 {
            prop_assert_eq!(total, p.degree());
        }
    }

    #[test]
    fn polynomial_serde_round_trip(zs in prop::collection::vec((-1e3..1e3f64, -1e3..1e3f64), 1..9)) {
        let p = MonicPolynomial::from_zeros(zs.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap();
        let back: MonicPolynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn domain_serde_round_trip(k in any_domain()) {
        let back: ConvexDomain = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
        prop_assert_eq!(back, k);
    }

    #[test]
    fn projection_is_idempotent_and_inside(k in any_domain(), x in -4.0..4.0f64, y in -4.0..4.0f64) {
        let z = Complex64::new(x, y);
        let p = k.project(z);
        let tol = 1e-9 * k.diameter();
        prop_assert!(k.contains(p, tol));
        prop_assert!((k.project(p) - p).norm() <= tol);
        if k.contains(z, 0.0) {
            prop_assert!((p - z).norm() <= tol);
        }
    }

    #[test]
    fn posdepth_bound_is_monotone(h0 in 0.0..1.0f64, h1 in 0.0..1.0f64, d in 1.0..3.0f64, n in 1usize..40) {
        let (lo, hi) = if h0 <= h1 { (h0, h1) } else { (h1, h0) };
        prop_assert!(posdepth_bound(lo * d, d, n) <= posdepth_bound(hi * d, d, n));
        prop_assert!(posdepth_bound(hi * d, d, n) <= posdepth_bound(hi * d, d, n + 1));
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn lq_bounded_by_sup(k in any_domain(), n in 1usize..7, seed in any::<u64>(), q in 1.0..6.0f64) {
        let p = random_polynomial(&k, n, seed).unwrap();
        let lq = norms::boundary_lq_norm(&k, &|z| p.eval(z), q, &cfg()).unwrap().value;
        let sup = norms::boundary_sup_norm(&k, &p).0;
        prop_assert!(lq <= k.perimeter().powf(1.0 / q) * sup * (1.0 + 1e-9));
    }

    #[test]
    fn oscillation_scales_inversely(seed in any::<u64>(), n in 1usize..6, s in 0.25..4.0f64, q in 0u8..4) {
        let k = catalogue::random_domain(seed);
        let p = random_polynomial(&k, n, seed).unwrap();
        let big = k.transformed(s, Complex64::new(0.0, 0.0)).unwrap();
        let ps = MonicPolynomial::from_zeros(p.zeros().iter().map(|z| z * s).collect()).unwrap();
        let m = norms::oscillation(&k, &p, norm_of(q), &cfg()).unwrap();
        let ms = norms::oscillation(&big, &ps, norm_of(q), &cfg()).unwrap();
        prop_assert!((ms * s - m).abs() <= 1e-7 * m);
    }

    #[test]
    fn oscillation_respects_lower_and_upper_bounds(k in any_domain(), n in 1usize..7, seed in any::<u64>(), q in 0u8..4) {
        let p = random_polynomial(&k, n, seed).unwrap();
        let norm = norm_of(q);
        let m = norms::oscillation(&k, &p, norm, &cfg()).unwrap();
        let lower = bounds::best_lower_bound(&k, n, norm).value();
        prop_assert!(m >= lower * (1.0 - 1e-9), "{m} < {lower}");
        prop_assert!(m <= bounds::upper_certificate(k.diameter(), n) * (1.0 + 1e-9));
    }

    #[test]
    fn markov_and_gabriel_hold(k in any_domain(), n in 1usize..7, seed in any::<u64>(), q in 1.0..4.0f64) {
        let p = random_polynomial(&k, n, seed).unwrap();
        prop_assert!(norms::markov_check(&k, &p).holds);
        let inner = InnerCurve::Domain { domain: k.transformed(0.5, k.centroid() * 0.5).unwrap() };
        let r = norms::gabriel_check(&k, &inner, &p, q, &cfg()).unwrap();
        prop_assert!(r.holds, "{r:?}");
    }

    #[test]
    fn quadrature_converges(k in any_domain(), n in 1usize..7, seed in any::<u64>(), q in 1.0..5.0f64) {
        let p = random_polynomial(&k, n, seed).unwrap();
        let coarse = QuadratureConfig { rel_tol: 1e-8, ..cfg() };
        let fine = QuadratureConfig { rel_tol: 1e-12, ..cfg() };
        let a = norms::boundary_lq_norm(&k, &|z| p.eval(z), q, &coarse).unwrap();
        let b = norms::boundary_lq_norm(&k, &|z| p.eval(z), q, &fine).unwrap();
        prop_assert!(a.converged && b.converged);
        prop_assert!((a.value - b.value).abs() <= a.error + 1e-7 * b.value);
    }

    #[test]
    fn disk_rotation_invariance(n in 1usize..7, seed in any::<u64>(), phi in 0.0..TAU, q in 0u8..4) {
        let k = catalogue::unit_disk();
        let p = random_polynomial(&k, n, seed).unwrap();
        let rot = Complex64::from_polar(1.0, phi);
        let pr = MonicPolynomial::from_zeros(p.zeros().iter().map(|z| z * rot).collect()).unwrap();
        let m = norms::oscillation(&k, &p, norm_of(q), &cfg()).unwrap();
        let mr = norms::oscillation(&k, &pr, norm_of(q), &cfg()).unwrap();
        prop_assert!((m - mr).abs() <= 1e-8 * m);
    }
}

#[test]
fn malik_govil_is_continuous_at_one() {
    for n in 1..20 {
        let below = bounds::malik_govil(1.0 - 1e-12, n);
        let above = bounds::malik_govil(1.0 + 1e-12, n);
        assert!((below - above).abs() < 1e-9 * n as f64);
        assert_eq!(bounds::malik_govil(1.0, n), n as f64 / 2.0);
    }
}

#[test]
fn fekete_delta_is_nonincreasing() {
    let fast = FeketeConfig {
        restarts: 4,
        ..FeketeConfig::default()
    };
    let sets = [
        CompactSet::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap(),
        CompactSet::Domain {
            domain: catalogue::unit_square(),
        },
    ];
    for set in &sets {
        let exact = capacity::transfinite_diameter_exact(set);
        let mut last = f64::INFINITY;
        for m in [4, 8, 16, 32] {
            let r = capacity::transfinite_diameter_fekete(set, m, 1, &fast).unwrap();
            assert!(r.delta_m <= last * (1.0 + 1e-9), "{m}: {} > {last}", r.delta_m);
            if let Some(e) = exact {
                assert!(r.delta_m >= e * (1.0 - 1e-9));
            }
            last = r.delta_m;
        }
    }
}

#[test]
fn capacity_between_quarter_and_half_diameter() {
    let fast = FeketeConfig {
        restarts: 2,
        ..FeketeConfig::default()
    };
    for seed in 0..6 {
        let k = catalogue::random_domain(seed);
        let d = k.diameter();
        let set = CompactSet::Domain { domain: k };
        let r = capacity::transfinite_diameter_fekete(&set, 24, seed, &fast).unwrap();
        assert!(r.potential_estimate <= d / 2.0 * (1.0 + 1e-2), "{seed}");
        assert!(r.delta_m >= d / 4.0, "{seed}");
        if let Some(e) = capacity::transfinite_diameter_exact(&set) {
            assert!(e <= d / 2.0 * (1.0 + 1e-12) && e >= d / 4.0);
        }
    }
}

#[test]
fn minimax_at_least_capacity_power() {
    let sets = [
        CompactSet::segment(Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)).unwrap(),
        CompactSet::Domain {
            domain: catalogue::unit_disk(),
        },
        CompactSet::Domain {
            domain: catalogue::regular_polygon(6, 1.0),
        },
    ];
    for set in &sets {
        let cap = capacity::transfinite_diameter_exact(set).unwrap();
        for k in 1..=4 {
            let r = capacity::chebyshev_min_norm_numeric(set, k, 0).unwrap();
            assert!(r.value >= cap.powi(k as i32) * (1.0 - 1e-9), "k {k}: {} < {}", r.value, cap.powi(k as i32));
        }
    }
}
