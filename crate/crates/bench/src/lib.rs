//! Fixed inputs shared by the benchmarks.

use turan_core::geometry::catalogue;
use turan_core::optimizer::random_polynomial;
use turan_core::{ConvexDomain, MonicPolynomial};

/// Named domains paired with a degree-`n` polynomial with zeros inside.
pub fn fixtures(n: usize) -> Vec<(&'static str, ConvexDomain, MonicPolynomial)> {
    [
        ("disk", catalogue::unit_disk()),
        ("square", catalogue::unit_square()),
        ("ellipse", catalogue::ellipse(1.0, 0.5)),
        ("heptagon", catalogue::random_polygon(7, 7)),
    ]
    .into_iter()
    .map(|(name, k)| {
        let p = random_polynomial(&k, n, 42).expect("zeros sampled inside the domain");
        (name, k, p)
    })
    .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_have_zeros_inside() {
        for (_, k, p) in super::fixtures(5) {
            assert_eq!(p.degree(), 5);
            assert!(p.zeros_in_domain(&k, 1e-12));
        }
    }
}
