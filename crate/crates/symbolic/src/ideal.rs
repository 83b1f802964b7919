//! Ideals of ℚ[x₁..xₙ] with an optional attached Gröbner basis.

use std::borrow::Cow;
use std::collections::HashMap;

use crate::groebner::{groebner_basis, GroebnerBasis};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{default_names, MultiPoly};
use crate::rational::Rational;

/// An ideal given by generators. A basis computed by [`Ideal::groebner`] is
/// carried by the returned value; the original is never mutated.
#[derive(Clone, Debug)]
pub struct Ideal {
    names: Vec<String>,
    gens: Vec<MultiPoly>,
    gb: Option<GroebnerBasis>,
}

impl PartialEq for Ideal {
    /// Equality as ideals (same reduced grevlex basis).
    fn eq(&self, other: &Self) -> bool {
        self.nvars() == other.nvars() && self.basis().polys() == other.basis().polys()
    }
}

impl Ideal {
    pub fn new(names: Vec<String>, gens: Vec<MultiPoly>) -> Self {
        for g in &gens {
            assert_eq!(g.nvars(), names.len(), "generator ring mismatch");
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { names, gens, gb: None }
    }

    pub fn with_default_names(nvars: usize, gens: Vec<MultiPoly>) -> Self {
        Self::new(default_names(nvars), gens)
    }

    pub fn zero(names: Vec<String>) -> Self {
        Ideal { names, gens: Vec::new(), gb: None }
    }

    pub fn unit(names: Vec<String>) -> Self {
        let n = names.len();
        Ideal { names, gens: vec![MultiPoly::one(n)], gb: None }
    }

    /// Ideal generated by the coordinates of the point `p`, i.e. its maximal ideal.
    pub fn point(names: Vec<String>, p: &[Rational]) -> Self {
        let n = names.len();
        let gens = (0..n)
            .map(|i| &MultiPoly::var(n, i) - &MultiPoly::constant(n, p[i].clone()))
            .collect();
        Self::new(names, gens)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    /// Returns this ideal with a reduced Gröbner basis for `order` attached.
    pub fn groebner(&self, order: MonomialOrder) -> Ideal {
        if let Some(gb) = &self.gb {
            if gb.order() == order {
                return self.clone();
            }
        }
        let gb = groebner_basis(self.nvars(), &self.gens, order);
        Ideal { names: self.names.clone(), gens: self.gens.clone(), gb: Some(gb) }
    }

    pub fn cached_basis(&self) -> Option<&GroebnerBasis> {
        self.gb.as_ref()
    }

    /// Grevlex basis: the cached one when available, otherwise computed.
    pub fn basis(&self) -> Cow<'_, GroebnerBasis> {
        match &self.gb {
            Some(gb) if gb.order() == MonomialOrder::GrevLex => Cow::Borrowed(gb),
            _ => Cow::Owned(groebner_basis(self.nvars(), &self.gens, MonomialOrder::GrevLex)),
        }
    }

    /// Checks the attached basis against the generators in both directions.
    pub fn cache_consistent(&self) -> bool {
        match &self.gb {
            None => true,
            Some(gb) => {
                self.gens.iter().all(|g| gb.contains(g))
                    && gb.polys().iter().all(|b| {
                        let plain = groebner_basis(self.nvars(), &self.gens, gb.order());
                        plain.contains(b)
                    })
            }
        }
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        if self.gens.iter().any(|g| g.is_unit()) {
            return true;
        }
        if self.gens.is_empty() {
            return false;
        }
        self.basis().is_unit()
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        f.is_zero() || self.basis().contains(f)
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        let gb = self.basis();
        other.gens.iter().all(|g| gb.contains(g))
    }

    /// Whether `f` vanishes on V(I), i.e. `f ∈ √I`.
    ///
    /// Small powers of `f` are tried against the basis first; the decision
    /// itself is the Rabinowitsch test `1 ∈ I + (1 - t·f)`.
    pub fn radical_contains(&self, f: &MultiPoly) -> bool {
        self.radical_contains_with(&self.basis(), f)
    }

    fn radical_contains_with(&self, gb: &GroebnerBasis, f: &MultiPoly) -> bool {
        assert_eq!(f.nvars(), self.nvars(), "ring mismatch");
        if f.is_zero() || gb.is_unit() {
            return true;
        }
        if gb.is_zero_ideal() {
            return false;
        }
        let mut pw = f.clone();
        for _ in 0..3 {
            if gb.contains(&pw) {
                return true;
            }
            pw = &pw * f;
        }
        rabinowitsch(self.nvars(), gb.polys(), f)
    }

    /// V(self) ⊆ V(other).
    pub fn variety_contained_in(&self, other: &Ideal) -> bool {
        let gb = self.basis();
        other.gens.iter().all(|g| self.radical_contains_with(&gb, g))
    }

    /// V(self) = V(other), decided by mutual radical membership.
    pub fn variety_eq(&self, other: &Ideal) -> bool {
        self.variety_contained_in(other) && other.variety_contained_in(self)
    }

    /// First generator of `other` that is not in √self.
    pub fn radical_witness(&self, other: &Ideal) -> Option<MultiPoly> {
        let gb = self.basis();
        other.gens.iter().find(|g| !self.radical_contains_with(&gb, g)).cloned()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.names.clone(), linear_basis(gens))
    }

    /// Product ideal; its variety is the union V(self) ∪ V(other).
    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a * b);
            }
        }
        Ideal::new(self.names.clone(), linear_basis(gens))
    }

    pub fn vanishes_at(&self, point: &[Rational]) -> bool {
        self.gens.iter().all(|g| g.eval(point).is_zero())
    }

    /// Whether the reduced basis consists of homogeneous polynomials.
    pub fn is_homogeneous(&self) -> bool {
        self.basis().polys().iter().all(|g| g.is_homogeneous())
    }

    /// Replaces the generators by the reduced grevlex basis.
    pub fn minimalized(&self) -> Ideal {
        let gb = self.basis().into_owned();
        Ideal { names: self.names.clone(), gens: gb.polys().to_vec(), gb: Some(gb) }
    }

    /// Substitutes a parametrization into every generator.
    pub fn pullback(&self, images: &[MultiPoly]) -> Vec<MultiPoly> {
        self.gens.iter().map(|g| g.substitute(images)).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.display(&self.names).to_string()).collect()
    }
}

fn rabinowitsch(n: usize, gens: &[MultiPoly], f: &MultiPoly) -> bool {
    let mut ext: Vec<MultiPoly> = gens.iter().map(|g| g.extend(1)).collect();
    let t = MultiPoly::var(n + 1, n);
    ext.push(&MultiPoly::one(n + 1) - &(&t * &f.extend(1)));
    groebner_basis(n + 1, &ext, MonomialOrder::GrevLex).is_unit()
}

/// Echelon basis of the ℚ-span of `polys` (drops zero and linearly dependent
/// generators). Used before Gröbner computations on long minor lists.
pub fn linear_basis(polys: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut pivots: HashMap<Monomial, MultiPoly> = HashMap::new();
    let mut out_order: Vec<Monomial> = Vec::new();
    for p in polys {
        let mut p = p;
        loop {
            let Some((lm, lc)) = p.terms().first().cloned() else { break };
            match pivots.get(&lm) {
                Some(q) => {
                    // q is monic in its leading term
                    p = &p - &q.scale(&lc);
                }
                None => {
                    let m = p.monic();
                    pivots.insert(lm, m);
                    out_order.push(lm);
                    break;
                }
            }
        }
    }
    out_order.into_iter().map(|m| pivots.remove(&m).expect("pivot")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::names_from;

    fn id(gens: &[&str], names: &[&str]) -> Ideal {
        let names = names_from(names);
        let gens = gens.iter().map(|g| MultiPoly::parse(g, &names).unwrap()).collect();
        Ideal::new(names, gens)
    }

    fn poly(s: &str, names: &[&str]) -> MultiPoly {
        MultiPoly::parse(s, &names_from(names)).unwrap()
    }

    #[test]
    fn radical_of_square() {
        let i = id(&["x^2"], &["x"]);
        assert!(i.radical_contains(&poly("x", &["x"])));
        assert!(!i.radical_contains(&poly("x + 1", &["x"])));
        assert!(!i.contains(&poly("x", &["x"])));
    }

    #[test]
    fn rabinowitsch_path() {
        // x^5 ∈ (x^5 + y^7, y) but small powers are not
        let n = ["x", "y"];
        let i = id(&["x^5 + y^7", "y"], &n);
        assert!(i.radical_contains(&poly("x", &n)));
        assert!(!i.radical_contains(&poly("x + y + 1", &n)));
    }

    #[test]
    fn unit_and_zero_edge_cases() {
        let u = Ideal::unit(names_from(&["x"]));
        let z = Ideal::zero(names_from(&["x"]));
        assert!(u.is_unit());
        assert!(!z.is_unit());
        assert!(u.radical_contains(&poly("x + 3", &["x"])));
        assert!(!z.radical_contains(&poly("x", &["x"])));
        // V(unit) = ∅ ⊆ anything; V(0) = everything
        assert!(u.variety_contained_in(&z));
        assert!(!z.variety_contained_in(&u));
    }

    #[test]
    fn variety_equality_of_unions() {
        let n = ["x", "y"];
        let a = id(&["x*y"], &n);
        let b = id(&["x"], &n).product(&id(&["y"], &n));
        let c = id(&["x^2*y", "x*y^3"], &n);
        assert!(a.variety_eq(&b));
        assert!(a.variety_eq(&c));
        assert!(!a.variety_eq(&id(&["x"], &n)));
    }

    #[test]
    fn cached_basis_is_consistent() {
        let i = id(&["x^2 - y", "x*y - 1"], &["x", "y"]).groebner(MonomialOrder::Lex);
        assert!(i.cache_consistent());
        assert_eq!(i.cached_basis().unwrap().order(), MonomialOrder::Lex);
    }

    #[test]
    fn linear_basis_drops_dependents() {
        let n = ["x", "y"];
        let polys = vec![poly("x + y", &n), poly("2*x + 2*y", &n), poly("x - y", &n), poly("x", &n)];
        assert_eq!(linear_basis(polys).len(), 2);
    }
}
