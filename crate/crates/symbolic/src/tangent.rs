//! Tangent cones: the ideal of initial (lowest-degree) forms at a point.

use crate::error::{AlgebraError, Result};
use crate::groebner::groebner_basis;
use crate::ideal::Ideal;
use crate::monomial::{MonomialOrder, MAX_VARS};
use crate::poly::MultiPoly;
use crate::rational::Rational;

/// Ideal of the tangent cone of V(I) at `base`, in coordinates centred at
/// `base`. Unit when `base ∉ V(I)`.
///
/// The generators are homogenized, a Gröbner basis is taken for a degree
/// order in which powers of the homogenizing variable dominate, and the
/// dehomogenized elements form a standard basis for the local order; their
/// lowest forms generate the initial ideal.
pub fn tangent_cone_ideal(i: &Ideal, base: &[Rational]) -> Result<Ideal> {
    let n = i.nvars();
    if base.len() != n {
        return Err(AlgebraError::DimensionMismatch(format!("point has {} coordinates, ring has {n}", base.len())));
    }
    if n + 1 > MAX_VARS {
        return Err(AlgebraError::TooManyVariables(n + 1));
    }
    let names = i.names().to_vec();
    if i.is_zero_ideal() {
        return Ok(Ideal::zero(names));
    }
    let shifted: Vec<MultiPoly> = i.gens().iter().map(|g| g.translate(base)).collect();
    let homog: Vec<MultiPoly> = shifted.iter().map(|g| g.homogenize()).collect();
    let gb = groebner_basis(n + 1, &homog, MonomialOrder::HomogLocal { h: n });
    let forms: Vec<MultiPoly> = gb.polys().iter().map(|g| g.dehomogenize(n).lowest_form()).collect();
    Ok(Ideal::new(names, forms).minimalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::names_from;

    fn ideal(gens: &[&str], names: &[&str]) -> Ideal {
        let names = names_from(names);
        let g = gens.iter().map(|s| MultiPoly::parse(s, &names).unwrap()).collect();
        Ideal::new(names, g)
    }

    fn zero(n: usize) -> Vec<Rational> {
        vec![Rational::zero(); n]
    }

    #[test]
    fn homogeneous_ideal_is_its_own_cone() {
        let i = ideal(&["x*y"], &["x", "y"]);
        assert_eq!(tangent_cone_ideal(&i, &zero(2)).unwrap(), i);
    }

    #[test]
    fn point_off_variety_gives_unit() {
        let i = ideal(&["x - 1"], &["x"]);
        assert!(tangent_cone_ideal(&i, &zero(1)).unwrap().is_unit());
    }

    #[test]
    fn hypersurface_through_one() {
        let i = ideal(&["t2 - t1*t3 + t1 - t3"], &["t1", "t2", "t3"]);
        let one = vec![Rational::one(); 3];
        let tc = tangent_cone_ideal(&i, &one).unwrap();
        assert_eq!(tc, ideal(&["t2 - 2*t3"], &["t1", "t2", "t3"]));
    }

    #[test]
    fn cusp_and_node() {
        let cusp = ideal(&["y^2 - x^3"], &["x", "y"]);
        assert_eq!(tangent_cone_ideal(&cusp, &zero(2)).unwrap(), ideal(&["y^2"], &["x", "y"]));
        let node = ideal(&["y^2 - x^2 - x^3"], &["x", "y"]);
        assert_eq!(tangent_cone_ideal(&node, &zero(2)).unwrap(), ideal(&["y^2 - x^2"], &["x", "y"]));
    }

    #[test]
    fn non_principal_needs_standard_basis() {
        // I = (x^2 + y^3, x*y): lowest forms of the generators give (x^2, x*y),
        // and y^4 = y*(x^2+y^3) - x*(x*y) lies in the initial ideal too.
        let i = ideal(&["x^2 + y^3", "x*y"], &["x", "y"]);
        let tc = tangent_cone_ideal(&i, &zero(2)).unwrap();
        assert!(tc.contains(&MultiPoly::parse("y^4", &names_from(&["x", "y"])).unwrap()));
        assert!(tc.is_homogeneous());
    }
}
