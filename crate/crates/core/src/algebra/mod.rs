//! Exact algebra: integer polynomials, factorization, Pisot certification
//! and linear algebra over ℚ and ℚ(λ).

pub mod charpoly;
pub mod dilatation;
pub mod factor;
pub mod field;
pub mod linalg;
pub mod pisot;
pub mod poly;
pub mod roots;
pub mod sturm;

pub use charpoly::char_poly;
pub use dilatation::{minimal_polynomial_of_dilatation, pisot_report_for_matrix, PisotReport};
pub use factor::{factor_over_integers, Factorization};
pub use field::{FieldElement, FieldOps, NumberField, Rationals};
pub use pisot::{pisot_check, PisotCheck};
pub use poly::{IntPolynomial, RatPoly};
