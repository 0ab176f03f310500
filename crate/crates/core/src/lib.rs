//! Geometry of compact convex planar domains, boundary `L^q` norms of
//! polynomials with constrained zeros, and certified lower and upper
//! bounds for the oscillation factor
//! `M_q(p) = ||p'||_{L^q(∂K)} / ||p||_{L^q(∂K)}`.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: convex domains, arc-length boundary parametrization,
//!   diameter, width, depth, supplementary angles, modulus of continuity of
//!   the normal direction.
//! * [`capacity`]: transfinite diameter, Chebyshev constants and Fekete
//!   point estimates.
//! * [`polynomials`]: monic polynomials given by their zeros.
//! * [`quadrature`]: Gauss–Legendre panels with adaptive subdivision.
//! * [`norms`]: boundary `L^q` and sup norms, the `H`-set and the
//!   Nikolskii/Gabriel style inequality checks.
//! * [`bounds`]: every lower/upper bound formula as a [`bounds::BoundCertificate`].
//! * [`optimizer`]: seeded multi-start direct search for small `M_q(p)`.
//! * [`io`]: input documents (domains, zero sets).

pub mod bounds;
pub mod capacity;
pub mod error;
pub mod geometry;
pub mod io;
pub mod norms;
pub mod optimizer;
pub mod polynomials;
pub mod quadrature;

mod nelder_mead;

pub use error::{Error, Result};
pub use geometry::{
    BoundaryParametrization, ConvexDomain, DepthClass, GeometrySummary, Point, Shape,
};
pub use norms::{BoundaryMeasureReport, Norm, QuadratureConfig};
pub use polynomials::{MonicPolynomial, ZeroSet};

pub use num_complex::Complex64;

/// Library version string.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
