//! Buchberger's algorithm over ℚ.
//!
//! Pairs are pruned with the Gebauer–Möller update and selected by sugar
//! degree. The output is the reduced, monic basis, sorted by leading
//! monomial, so it is unique for a given ideal and order.

use std::cmp::Ordering;

use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::MultiPoly;
use crate::rational::Rational;

/// Terms sorted descending with respect to a fixed order.
#[derive(Clone, Debug)]
pub(crate) struct OPoly {
    pub terms: Vec<(Monomial, Rational)>,
}

#[derive(Clone, Copy)]
pub(crate) struct Ctx {
    pub order: MonomialOrder,
    pub n: usize,
}

impl Ctx {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b, self.n)
    }

    pub fn from_poly(&self, p: &MultiPoly) -> OPoly {
        let mut terms = p.terms().to_vec();
        if self.order != MonomialOrder::GrevLex {
            terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        }
        OPoly { terms }
    }

    pub fn to_poly(&self, p: &OPoly) -> MultiPoly {
        if self.order == MonomialOrder::GrevLex {
            MultiPoly::from_sorted_unchecked(self.n, p.terms.clone())
        } else {
            MultiPoly::from_terms(self.n, p.terms.iter().cloned())
        }
    }

    /// `f[start..] - c * m * g`
    pub fn sub_mul(&self, f: &[(Monomial, Rational)], c: &Rational, m: &Monomial, g: &[(Monomial, Rational)]) -> Vec<(Monomial, Rational)> {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let (mut i, mut j) = (0, 0);
        while i < f.len() && j < g.len() {
            let gm = g[j].0.mul(m);
            match self.cmp(&f[i].0, &gm) {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((gm, -(c * &g[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &f[i].1 - &(c * &g[j].1);
                    if !v.is_zero() {
                        out.push((gm, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f[i..]);
        while j < g.len() {
            out.push((g[j].0.mul(m), -(c * &g[j].1)));
            j += 1;
        }
        out
    }

    /// Full reduction of `f` modulo monic `basis`.
    pub fn normal_form(&self, f: &OPoly, basis: &[&OPoly]) -> OPoly {
        let mut p = f.terms.clone();
        let mut rem: Vec<(Monomial, Rational)> = Vec::new();
        let mut start = 0;
        while start < p.len() {
            let (lm, lc) = (p[start].0, p[start].1.clone());
            match basis.iter().find(|g| g.terms[0].0.divides(&lm)) {
                Some(g) => {
                    let q = g.terms[0].0.quotient_of(&lm);
                    // leading terms cancel exactly; skip them
                    p = self.sub_mul(&p[start + 1..], &lc, &q, &g.terms[1..]);
                    start = 0;
                }
                None => {
                    rem.push((lm, lc));
                    start += 1;
                }
            }
        }
        OPoly { terms: rem }
    }

    /// Reduces only until the leading term is irreducible.
    fn top_reduce(&self, f: &OPoly, basis: &[&OPoly]) -> OPoly {
        let mut p = f.terms.clone();
        while let Some((lm, lc)) = p.first().cloned() {
            match basis.iter().find(|g| g.terms[0].0.divides(&lm)) {
                Some(g) => {
                    let q = g.terms[0].0.quotient_of(&lm);
                    p = self.sub_mul(&p[1..], &lc, &q, &g.terms[1..]);
                }
                None => break,
            }
        }
        OPoly { terms: p }
    }

    fn spoly(&self, f: &OPoly, g: &OPoly) -> OPoly {
        let (fm, gm) = (f.terms[0].0, g.terms[0].0);
        let l = fm.lcm(&gm);
        let uf = fm.quotient_of(&l);
        let ug = gm.quotient_of(&l);
        // both monic: uf*f - ug*g
        let scaled: Vec<_> = f.terms[1..].iter().map(|(m, c)| (m.mul(&uf), c.clone())).collect();
        OPoly { terms: self.sub_mul(&scaled, &Rational::one(), &ug, &g.terms[1..]) }
    }
}

impl OPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> Monomial {
        self.terms[0].0
    }

    pub fn make_monic(&mut self) {
        if let Some((_, c)) = self.terms.first() {
            if !c.is_one() {
                let inv = c.recip();
                for t in &mut self.terms {
                    t.1 = &t.1 * &inv;
                }
            }
        }
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// A reduced Gröbner basis together with its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    order: MonomialOrder,
    polys: Vec<MultiPoly>,
}

impl GroebnerBasis {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_unit()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        let ctx = Ctx { order: self.order, n: self.nvars };
        self.polys.iter().map(|p| ctx.from_poly(p).lm()).collect()
    }

    /// Remainder of `f` on division by the basis.
    pub fn reduce(&self, f: &MultiPoly) -> MultiPoly {
        let ctx = Ctx { order: self.order, n: self.nvars };
        let basis: Vec<OPoly> = self.polys.iter().map(|p| ctx.from_poly(p)).collect();
        let refs: Vec<&OPoly> = basis.iter().collect();
        ctx.to_poly(&ctx.normal_form(&ctx.from_poly(f), &refs))
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.reduce(f).is_zero()
    }
}

/// Computes the reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis(nvars: usize, gens: &[MultiPoly], order: MonomialOrder) -> GroebnerBasis {
    let ctx = Ctx { order, n: nvars };
    let mut store: Vec<OPoly> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut input: Vec<OPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            assert_eq!(g.nvars(), nvars, "ring mismatch");
            let mut p = ctx.from_poly(g);
            p.make_monic();
            p
        })
        .collect();
    // small leading monomials first keeps intermediate growth down
    input.sort_by(|a, b| ctx.cmp(&a.lm(), &b.lm()));

    for f in input {
        let refs: Vec<&OPoly> = store.iter().zip(&active).filter(|(_, &a)| a).map(|(p, _)| p).collect();
        let mut h = ctx.normal_form(&f, &refs);
        if h.is_zero() {
            continue;
        }
        h.make_monic();
        let s = h.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0);
        if insert(&mut store, &mut sugar, &mut active, &mut pairs, h, s) {
            return unit_basis(nvars, order);
        }
    }

    while !pairs.is_empty() {
        // select by sugar, then by lcm
        let mut best = 0;
        for k in 1..pairs.len() {
            let (a, b) = (&pairs[k], &pairs[best]);
            if a.sugar < b.sugar || (a.sugar == b.sugar && ctx.cmp(&a.lcm, &b.lcm) == Ordering::Less) {
                best = k;
            }
        }
        let pair = pairs.swap_remove(best);
        let sp = ctx.spoly(&store[pair.i], &store[pair.j]);
        if sp.is_zero() {
            continue;
        }
        let refs: Vec<&OPoly> = store.iter().zip(&active).filter(|(_, &a)| a).map(|(p, _)| p).collect();
        let mut h = ctx.top_reduce(&sp, &refs);
        if h.is_zero() {
            continue;
        }
        h = ctx.normal_form(&h, &refs);
        h.make_monic();
        if insert(&mut store, &mut sugar, &mut active, &mut pairs, h, pair.sugar) {
            return unit_basis(nvars, order);
        }
    }

    let basis: Vec<OPoly> = store.into_iter().zip(active).filter(|(_, a)| *a).map(|(p, _)| p).collect();
    finalize(&ctx, basis)
}

fn unit_basis(nvars: usize, order: MonomialOrder) -> GroebnerBasis {
    GroebnerBasis { nvars, order, polys: vec![MultiPoly::one(nvars)] }
}

/// Adds `h` to the basis with the Gebauer–Möller update. Returns true when
/// `h` is a constant (unit ideal).
fn insert(
    store: &mut Vec<OPoly>,
    sugar: &mut Vec<u32>,
    active: &mut Vec<bool>,
    pairs: &mut Vec<Pair>,
    h: OPoly,
    s: u32,
) -> bool {
    let hm = h.lm();
    if hm.is_one() {
        return true;
    }
    let hi = store.len();
    let sugar_of = |i: usize, l: &Monomial, store: &Vec<OPoly>, sugar: &Vec<u32>, sh: u32, hm: &Monomial| -> u32 {
        let si = sugar[i] + l.degree() - store[i].lm().degree();
        let sh2 = sh + l.degree() - hm.degree();
        si.max(sh2)
    };

    // candidate pairs (g, h)
    let cands: Vec<(usize, Monomial)> = (0..store.len()).filter(|&g| active[g]).map(|g| (g, store[g].lm().lcm(&hm))).collect();
    let mut kept: Vec<(usize, Monomial)> = Vec::new();
    for (k, &(g, l)) in cands.iter().enumerate() {
        let coprime = store[g].lm().is_coprime(&hm);
        let dominated_later = cands[k + 1..].iter().any(|(_, l2)| l2.divides(&l));
        let dominated_kept = kept.iter().any(|(_, l2)| l2.divides(&l));
        if coprime || (!dominated_later && !dominated_kept) {
            kept.push((g, l));
        }
    }
    let new_pairs: Vec<(usize, Monomial)> = kept.into_iter().filter(|(g, _)| !store[*g].lm().is_coprime(&hm)).collect();

    pairs.retain(|p| {
        let l1 = store[p.i].lm().lcm(&hm);
        let l2 = store[p.j].lm().lcm(&hm);
        !(hm.divides(&p.lcm) && l1 != p.lcm && l2 != p.lcm)
    });

    for (g, l) in new_pairs {
        let sg = sugar_of(g, &l, store, sugar, s, &hm);
        pairs.push(Pair { i: g, j: hi, lcm: l, sugar: sg });
    }

    for g in 0..store.len() {
        if active[g] && hm.divides(&store[g].lm()) {
            active[g] = false;
        }
    }
    store.push(h);
    sugar.push(s);
    active.push(true);
    false
}

/// Interreduces a Gröbner basis into the reduced basis.
fn finalize(ctx: &Ctx, mut basis: Vec<OPoly>) -> GroebnerBasis {
    // drop elements whose leading monomial is divisible by another's
    basis.sort_by(|a, b| ctx.cmp(&a.lm(), &b.lm()));
    let mut minimal: Vec<OPoly> = Vec::new();
    for p in basis {
        if !minimal.iter().any(|q| q.lm().divides(&p.lm())) {
            minimal.retain(|q| !p.lm().divides(&q.lm()));
            minimal.push(p);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&OPoly> = minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p).collect();
        let lead = OPoly { terms: vec![minimal[k].terms[0].clone()] };
        let tail = OPoly { terms: minimal[k].terms[1..].to_vec() };
        let mut r = ctx.normal_form(&tail, &others);
        let mut terms = lead.terms;
        terms.append(&mut r.terms);
        let mut p = OPoly { terms };
        p.make_monic();
        reduced.push(p);
    }
    reduced.sort_by(|a, b| ctx.cmp(&a.lm(), &b.lm()));
    GroebnerBasis { nvars: ctx.n, order: ctx.order, polys: reduced.iter().map(|p| ctx.to_poly(p)).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{default_names, names_from};

    fn p(s: &str, names: &[String]) -> MultiPoly {
        MultiPoly::parse(s, names).unwrap()
    }

    #[test]
    fn already_a_basis() {
        let n = names_from(&["x", "y"]);
        let gb = groebner_basis(2, &[p("x^2", &n), p("x*y", &n)], MonomialOrder::GrevLex);
        assert_eq!(gb.polys(), &[p("x*y", &n), p("x^2", &n)]);
    }

    #[test]
    fn unit_ideal() {
        let n = names_from(&["x"]);
        let gb = groebner_basis(1, &[p("x - 1", &n), p("x", &n)], MonomialOrder::GrevLex);
        assert!(gb.is_unit());
    }

    #[test]
    fn zero_ideal() {
        let gb = groebner_basis(2, &[MultiPoly::zero(2)], MonomialOrder::GrevLex);
        assert!(gb.is_zero_ideal());
    }

    #[test]
    fn lex_elimination() {
        // x^2 - y, x^3 - z: eliminating x leaves the twisted-cubic relation
        let n = names_from(&["x", "y", "z"]);
        let gb = groebner_basis(3, &[p("x^2 - y", &n), p("x^3 - z", &n)], MonomialOrder::Lex);
        assert!(gb.polys().contains(&p("y^3 - z^2", &n)), "{:?}", gb.polys());
        // hand Buchberger: {x^2 - y, x*y - z, x*z - y^2, y^3 - z^2}
        let expected = vec![p("y^3 - z^2", &n), p("x*z - y^2", &n), p("x*y - z", &n), p("x^2 - y", &n)];
        assert_eq!(gb.polys(), expected.as_slice());
    }

    #[test]
    fn cyclic3() {
        let n = default_names(3);
        let gens = [p("x1 + x2 + x3", &n), p("x1*x2 + x2*x3 + x3*x1", &n), p("x1*x2*x3 - 1", &n)];
        let gb = groebner_basis(3, &gens, MonomialOrder::Lex);
        // classical result: x3^3 - 1 is in the basis
        assert!(gb.polys().contains(&p("x3^3 - 1", &n)));
        for g in &gens {
            assert!(gb.contains(g));
        }
    }

    #[test]
    fn order_independent_ideal() {
        let n = default_names(3);
        let gens = [p("x1^2 - x2*x3", &n), p("x2^2 - x1*x3 + x3", &n)];
        let a = groebner_basis(3, &gens, MonomialOrder::GrevLex);
        let b = groebner_basis(3, &gens, MonomialOrder::Lex);
        for g in a.polys() {
            assert!(b.contains(g));
        }
        for g in b.polys() {
            assert!(a.contains(g));
        }
    }
}
