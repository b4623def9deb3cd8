//! Exact mirror maps, Batyrev elements and Seidel elements of smooth
//! projective toric varieties with nef anticanonical class.
//!
//! The pipeline runs forward from a fan to the Seidel elements and backward
//! from the Seidel elements to the mirror map:
//!
//! ```
//! use mirrorseidel::{catalog, elements, mirror_engine};
//!
//! let f2 = catalog::hirzebruch_f2();
//! let g0 = mirror_engine::correction_term_g0(&f2, 1, 3);
//! assert_eq!(g0.len(), 3);
//! let seidel = elements::seidel_elements(&f2, 3).unwrap();
//! assert_eq!(seidel.len(), 4);
//! ```
//!
//! All arithmetic is over exact rationals; series are truncated by the degree
//! of an ample class.

pub mod catalog;
pub mod elements;
pub mod error;
pub mod linalg;
pub mod mirror_engine;
pub mod polyhedral;
pub mod reconstruct;
pub mod series_ring;
pub mod toric_lattice;

pub use error::{Error, Result};
pub use series_ring::{Coordinates, DivisorSeries, MapDirection, MirrorMap, NovikovSeries};
pub use toric_lattice::{
    build_associated_bundle, enumerate_classes, fan_polytope_vertices, validate_fan, wall_curve_classes,
    Comparison, Constraint, CurveClass, FanInput, Grading, ToricData,
};

/// Exact rational scalar used throughout.
pub type Rational = num_rational::BigRational;

/// The integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `num / den` as a [`Rational`]. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().ok()?;
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            if d == num_bigint::BigInt::from(0) {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

/// `"num/den"`, always with an explicit denominator.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fans.md")]
    mod fans {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/mirror-maps.md")]
    mod mirror_maps {}
    #[doc = include_str!("../../../book/src/elements.md")]
    mod elements {}
    #[doc = include_str!("../../../book/src/reconstruction.md")]
    mod reconstruction {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
