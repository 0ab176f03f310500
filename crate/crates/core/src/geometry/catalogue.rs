//! Named test domains and seeded random convex polygons.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ConvexDomain;

/// Unit disk centred at the origin.
pub fn unit_disk() -> ConvexDomain {
    ConvexDomain::disk(Complex64::new(0.0, 0.0), 1.0).expect("valid disk")
}

/// The square with corners `0, 1, 1+i, i`.
pub fn unit_square() -> ConvexDomain {
    ConvexDomain::polygon(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(0.0, 1.0),
    ])
    .expect("valid square")
}

/// Regular `k`-gon with the given side, centred at the origin, with a
/// horizontal bottom edge.
///
/// # Panics
/// If `k < 3` or `side <= 0`.
pub fn regular_polygon(k: usize, side: f64) -> ConvexDomain {
    assert!(k >= 3 && side > 0.0, "regular polygon needs k >= 3 and side > 0");
    let circum = side / (2.0 * (std::f64::consts::PI / k as f64).sin());
    let start = -std::f64::consts::FRAC_PI_2 - std::f64::consts::PI / k as f64;
    let vertices = (0..k)
        .map(|j| Complex64::from_polar(circum, start + TAU * j as f64 / k as f64))
        .collect();
    ConvexDomain::polygon(vertices).expect("valid regular polygon")
}

pub fn equilateral_triangle(side: f64) -> ConvexDomain {
    regular_polygon(3, side)
}

/// Axis-aligned ellipse centred at the origin.
pub fn ellipse(a: f64, b: f64) -> ConvexDomain {
    ConvexDomain::ellipse(Complex64::new(0.0, 0.0), a, b, 0.0).expect("valid ellipse")
}

/// A random strictly convex polygon with `n` vertices: sorted random points
/// on the unit circle mapped through a random orientation-preserving
/// linear map and shift.
pub fn random_polygon(seed: u64, n: usize) -> ConvexDomain {
    let n = n.max(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let min_gap = angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .chain(std::iter::once(angles[0] + TAU - angles[n - 1]))
            .fold(f64::INFINITY, f64::min);
        if min_gap < 1e-3 {
            continue;
        }
        let stretch = rng.gen_range(0.3..1.0);
        let rot = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
        let shear = rng.gen_range(-0.5..0.5);
        let scale = rng.gen_range(0.5..2.0);
        let shift = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let vertices = angles
            .iter()
            .map(|&a| {
                let (s, c) = a.sin_cos();
                let p = Complex64::new(c + shear * s, stretch * s);
                shift + scale * rot * p
            })
            .collect();
        if let Ok(p) = ConvexDomain::polygon(vertices) {
            return p;
        }
    }
}

/// A random domain of any kind.
pub fn random_domain(seed: u64) -> ConvexDomain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let center = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    match rng.gen_range(0..4) {
        0 => ConvexDomain::disk(center, rng.gen_range(0.3..2.0)).expect("valid disk"),
        1 => {
            let a = rng.gen_range(0.5..2.0);
            let b = a * rng.gen_range(0.3..1.0);
            ConvexDomain::ellipse(center, a, b, rng.gen_range(0.0..TAU)).expect("valid ellipse")
        }
        _ => random_polygon(rng.gen(), rng.gen_range(3..10)),
    }
}

/// Named domains used throughout the test suites.
pub fn named() -> Vec<(&'static str, ConvexDomain)> {
    vec![
        ("unit_disk", unit_disk()),
        ("unit_square", unit_square()),
        ("triangle", equilateral_triangle(1.0)),
        ("hexagon", regular_polygon(6, 1.0)),
        ("octagon", regular_polygon(8, 0.5)),
        ("ellipse", ellipse(1.0, 0.5)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_polygon_sides() {
        for k in 3..10 {
            let p = regular_polygon(k, 0.7);
            let v = p.vertices().unwrap();
            for i in 0..k {
                assert!(((v[(i + 1) % k] - v[i]).norm() - 0.7).abs() < 1e-12);
            }
            assert!(v[0].im == v[1].im || (v[0].im - v[1].im).abs() < 1e-15);
        }
    }

    #[test]
    fn random_polygons_are_valid_and_seeded() {
        for s in 0..50 {
            let p = random_polygon(s, 3 + (s as usize % 9));
            assert_eq!(p, random_polygon(s, 3 + (s as usize % 9)));
        }
    }
}
