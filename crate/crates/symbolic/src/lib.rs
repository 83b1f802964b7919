//! Exact symbolic kernel: rational arithmetic, multivariate and Laurent
//! polynomials, Gröbner bases, determinantal ideals, syzygies, homology
//! presentations of polynomial complexes, tangent cones and Smith forms.

pub mod error;
pub mod groebner;
pub mod homology;
pub mod ideal;
pub mod laurent;
pub mod matrix;
pub mod minors;
pub mod module;
pub mod monomial;
pub mod poly;
pub mod rational;
pub mod smith;
pub mod tangent;

pub use error::{AlgebraError, ParseError};
pub use groebner::{groebner_basis, GroebnerBasis};
pub use ideal::{linear_basis, Ideal};
pub use monomial::{Monomial, MonomialOrder, MAX_VARS};
pub use poly::MultiPoly;
pub use rational::Rational;
pub use homology::{fitting_support, CochainComplex, PolyComplex, Presentation};
pub use laurent::LaurentPoly;
pub use matrix::{PolyMatrix, QMatrix};
pub use minors::{determinantal_ideal, fitting_style_ideal};
pub use module::{syzygy_basis, ColumnSpan};
pub use smith::{smith_normal_form, smith_normal_form_i64, SmithForm};
pub use tangent::tangent_cone_ideal;
