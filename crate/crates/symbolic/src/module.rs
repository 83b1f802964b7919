//! Gröbner bases for submodules of free modules Sʳ, position-over-term.
//!
//! Used for syzygies and for expressing vectors in terms of given generators:
//! each generator column `c_j` of a matrix `M` is augmented to `(c_j, e_j)` in
//! `S^(r+g)`. Positions `0..r` dominate, so basis elements whose first `r`
//! components vanish carry the syzygies in their tail, and reducing `(b, 0)`
//! to a vector with zero head yields coefficients of `b` in terms of the
//! columns.

use std::cmp::Ordering;

use crate::matrix::PolyMatrix;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::MultiPoly;
use crate::rational::Rational;

type Term = (usize, Monomial, Rational);

#[derive(Clone, Copy)]
struct MCtx {
    n: usize,
    order: MonomialOrder,
}

impl MCtx {
    #[inline]
    fn cmp(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        b.0.cmp(&a.0).then_with(|| self.order.cmp(a.1, b.1, self.n))
    }

    fn from_vec(&self, v: &[MultiPoly]) -> Vec<Term> {
        let mut t: Vec<Term> = v
            .iter()
            .enumerate()
            .flat_map(|(p, f)| f.terms().iter().map(move |(m, c)| (p, *m, c.clone())))
            .collect();
        t.sort_by(|a, b| self.cmp((b.0, &b.1), (a.0, &a.1)));
        t
    }

    fn to_vec(&self, t: &[Term], rank: usize) -> Vec<MultiPoly> {
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); rank];
        for (p, m, c) in t {
            buckets[*p].push((*m, c.clone()));
        }
        buckets.into_iter().map(|b| MultiPoly::from_terms(self.n, b)).collect()
    }

    /// `f - c * m * g`
    fn sub_mul(&self, f: &[Term], c: &Rational, m: &Monomial, g: &[Term]) -> Vec<Term> {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let (mut i, mut j) = (0, 0);
        while i < f.len() && j < g.len() {
            let gm = g[j].1.mul(m);
            match self.cmp((f[i].0, &f[i].1), (g[j].0, &gm)) {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((g[j].0, gm, -(c * &g[j].2)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &f[i].2 - &(c * &g[j].2);
                    if !v.is_zero() {
                        out.push((f[i].0, gm, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f[i..]);
        while j < g.len() {
            out.push((g[j].0, g[j].1.mul(m), -(c * &g[j].2)));
            j += 1;
        }
        out
    }

    fn find_divisor<'a>(&self, pos: usize, m: &Monomial, basis: &'a [Vec<Term>]) -> Option<&'a Vec<Term>> {
        basis.iter().find(|g| g[0].0 == pos && g[0].1.divides(m))
    }

    /// Full reduction modulo a list of monic elements.
    fn normal_form(&self, f: Vec<Term>, basis: &[Vec<Term>]) -> Vec<Term> {
        let mut p = f;
        let mut rem = Vec::new();
        let mut start = 0;
        while start < p.len() {
            let (pos, lm, lc) = p[start].clone();
            match self.find_divisor(pos, &lm, basis) {
                Some(g) => {
                    let q = g[0].1.quotient_of(&lm);
                    p = self.sub_mul(&p[start + 1..], &lc, &q, &g[1..]);
                    start = 0;
                }
                None => {
                    rem.push((pos, lm, lc));
                    start += 1;
                }
            }
        }
        rem
    }

    /// Reduces while the leading position is below `stop`; returns the
    /// remainder and whether its head (positions `< stop`) vanished.
    fn reduce_head(&self, f: Vec<Term>, basis: &[Vec<Term>], stop: usize) -> (Vec<Term>, bool) {
        let mut p = f;
        while let Some((pos, lm, lc)) = p.first().cloned() {
            if pos >= stop {
                return (p, true);
            }
            match self.find_divisor(pos, &lm, basis) {
                Some(g) => {
                    let q = g[0].1.quotient_of(&lm);
                    p = self.sub_mul(&p[1..], &lc, &q, &g[1..]);
                }
                None => return (p, false),
            }
        }
        (p, true)
    }
}

fn make_monic(t: &mut [Term]) {
    if let Some(lc) = t.first().map(|x| x.2.clone()) {
        if !lc.is_one() {
            let inv = lc.recip();
            for x in t.iter_mut() {
                x.2 = &x.2 * &inv;
            }
        }
    }
}

fn sugar_of(t: &[Term]) -> u32 {
    t.iter().map(|x| x.1.degree()).max().unwrap_or(0)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Reduced Gröbner basis (position-over-term, grevlex within a position) of
/// the submodule generated by `gens` ⊂ S^rank.
fn module_gb(ctx: MCtx, gens: Vec<Vec<Term>>) -> Vec<Vec<Term>> {
    let mut basis: Vec<Vec<Term>> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut queue: Vec<Vec<Term>> = gens.into_iter().filter(|g| !g.is_empty()).collect();
    queue.sort_by(|a, b| ctx.cmp((a[0].0, &a[0].1), (b[0].0, &b[0].1)));

    let insert = |h: Vec<Term>, sugar: u32, basis: &mut Vec<Vec<Term>>, sugars: &mut Vec<u32>, pairs: &mut Vec<Pair>| {
        let (hp, hm) = (h[0].0, h[0].1);
        let k = basis.len();
        // candidate new pairs at the same position
        let mut cand: Vec<(usize, Monomial)> = basis
            .iter()
            .enumerate()
            .filter(|(_, g)| g[0].0 == hp)
            .map(|(i, g)| (i, g[0].1.lcm(&hm)))
            .collect();
        // chain criterion on old pairs
        pairs.retain(|p| {
            if basis[p.i][0].0 != hp || !hm.divides(&p.lcm) {
                return true;
            }
            let li = basis[p.i][0].1.lcm(&hm);
            let lj = basis[p.j][0].1.lcm(&hm);
            li == p.lcm || lj == p.lcm
        });
        // among new pairs keep only those with lcm-minimal, one per lcm
        cand.sort_by(|a, b| a.1.degree().cmp(&b.1.degree()));
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for (i, l) in cand {
            if kept.iter().any(|(_, kl)| kl.divides(&l)) {
                continue;
            }
            kept.push((i, l));
        }
        for (i, l) in kept {
            let s = (sugars[i] + l.degree() - basis[i][0].1.degree()).max(sugar + l.degree() - hm.degree());
            pairs.push(Pair { i, j: k, lcm: l, sugar: s });
        }
        basis.push(h);
        sugars.push(sugar);
    };

    for g in queue {
        let mut r = ctx.normal_form(g, &basis);
        if r.is_empty() {
            continue;
        }
        make_monic(&mut r);
        let s = sugar_of(&r);
        insert(r, s, &mut basis, &mut sugars, &mut pairs);
    }

    while !pairs.is_empty() {
        let mut best = 0;
        for (idx, p) in pairs.iter().enumerate() {
            let b = &pairs[best];
            if p.sugar < b.sugar || (p.sugar == b.sugar && ctx.order.cmp(&p.lcm, &b.lcm, ctx.n) == Ordering::Less) {
                best = idx;
            }
        }
        let p = pairs.swap_remove(best);
        let (f, g) = (&basis[p.i], &basis[p.j]);
        let uf = f[0].1.quotient_of(&p.lcm);
        let ug = g[0].1.quotient_of(&p.lcm);
        let scaled: Vec<Term> = f[1..].iter().map(|(q, m, c)| (*q, m.mul(&uf), c.clone())).collect();
        let s = ctx.sub_mul(&scaled, &Rational::one(), &ug, &g[1..]);
        let mut r = ctx.normal_form(s, &basis);
        if r.is_empty() {
            continue;
        }
        make_monic(&mut r);
        insert(r, p.sugar, &mut basis, &mut sugars, &mut pairs);
    }

    // minimalize and tail-reduce
    let mut keep: Vec<Vec<Term>> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h[0].0 == g[0].0 && h[0].1.divides(&g[0].1) && (h[0].1 != g[0].1 || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Vec<Term>> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let head = keep[i][0].clone();
        let mut tail = ctx.normal_form(keep[i][1..].to_vec(), &others);
        tail.insert(0, head);
        out.push(tail);
    }
    out.sort_by(|a, b| ctx.cmp((a[0].0, &a[0].1), (b[0].0, &b[0].1)));
    out
}

/// Gröbner data for the submodule of Sʳ spanned by the columns of a matrix,
/// with enough bookkeeping to express members in terms of those columns.
#[derive(Clone, Debug)]
pub struct ColumnSpan {
    nvars: usize,
    rank: usize,
    ngens: usize,
    basis: Vec<Vec<Term>>,
}

impl ColumnSpan {
    pub fn new(m: &PolyMatrix) -> Self {
        let (n, r, g) = (m.nvars(), m.nrows(), m.ncols());
        let ctx = MCtx { n, order: MonomialOrder::GrevLex };
        let gens = (0..g)
            .map(|j| {
                let mut v = m.col(j);
                for k in 0..g {
                    v.push(if k == j { MultiPoly::one(n) } else { MultiPoly::zero(n) });
                }
                ctx.from_vec(&v)
            })
            .collect();
        let basis = module_gb(ctx, gens);
        ColumnSpan { nvars: n, rank: r, ngens: g, basis }
    }

    fn ctx(&self) -> MCtx {
        MCtx { n: self.nvars, order: MonomialOrder::GrevLex }
    }

    /// Coefficients `c` with `M c = b`, or `None` when `b` is not in the span.
    pub fn lift(&self, b: &[MultiPoly]) -> Option<Vec<MultiPoly>> {
        assert_eq!(b.len(), self.rank, "vector length");
        let ctx = self.ctx();
        let mut v = b.to_vec();
        v.extend((0..self.ngens).map(|_| MultiPoly::zero(self.nvars)));
        let (rem, ok) = ctx.reduce_head(ctx.from_vec(&v), &self.basis, self.rank);
        if !ok {
            return None;
        }
        let full = ctx.to_vec(&rem, self.rank + self.ngens);
        Some(full[self.rank..].iter().map(|p| -p).collect())
    }

    pub fn contains(&self, b: &[MultiPoly]) -> bool {
        self.lift(b).is_some()
    }

    /// Generators of the syzygy module {c : M c = 0}, as matrix columns.
    pub fn syzygies(&self) -> PolyMatrix {
        let ctx = self.ctx();
        let cols: Vec<Vec<MultiPoly>> = self
            .basis
            .iter()
            .filter(|g| g[0].0 >= self.rank)
            .map(|g| ctx.to_vec(g, self.rank + self.ngens)[self.rank..].to_vec())
            .collect();
        PolyMatrix::from_columns(self.nvars, self.ngens, cols)
    }
}

/// Columns generating the kernel of `m` as a submodule of S^cols.
pub fn syzygy_basis(m: &PolyMatrix) -> PolyMatrix {
    ColumnSpan::new(m).syzygies()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::names_from;

    fn pm(rows: &[&[&str]], names: &[String]) -> PolyMatrix {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        PolyMatrix::parse(&rows, names).unwrap()
    }

    fn col(v: &[&str], names: &[String]) -> Vec<MultiPoly> {
        v.iter().map(|s| MultiPoly::parse(s, names).unwrap()).collect()
    }

    #[test]
    fn koszul_pair() {
        let n = names_from(&["x", "y"]);
        let m = pm(&[&["x", "y"]], &n);
        let k = syzygy_basis(&m);
        assert_eq!(k.ncols(), 1);
        assert!(m.mul(&k).unwrap().is_zero());
        let span = ColumnSpan::new(&k);
        assert!(span.contains(&col(&["y", "-x"], &n)));
    }

    #[test]
    fn zero_column_kernel() {
        let n = names_from(&["x"]);
        let m = pm(&[&["x", "0"]], &n);
        let k = syzygy_basis(&m);
        assert_eq!(k.ncols(), 1);
        assert_eq!(k.col(0), col(&["0", "1"], &n));
    }

    #[test]
    fn koszul_triple_generates() {
        let n = names_from(&["x", "y", "z"]);
        let m = pm(&[&["x", "y", "z"]], &n);
        let k = syzygy_basis(&m);
        assert!(m.mul(&k).unwrap().is_zero());
        let span = ColumnSpan::new(&k);
        for c in [["y", "-x", "0"], ["z", "0", "-x"], ["0", "z", "-y"]] {
            assert!(span.contains(&col(&c, &n)));
        }
        // and conversely each computed syzygy is in the Koszul span
        let koszul = pm(&[&["y", "z", "0"], &["-x", "0", "z"], &["0", "-x", "-y"]], &n);
        let ks = ColumnSpan::new(&koszul);
        for j in 0..k.ncols() {
            assert!(ks.contains(&k.col(j)));
        }
    }

    #[test]
    fn lift_recovers_combination() {
        let n = names_from(&["x", "y"]);
        let m = pm(&[&["x", "y^2"], &["1", "x*y"]], &n);
        let c = col(&["y + 1", "x - 2"], &n);
        let b = m.mul_vec(&c);
        let span = ColumnSpan::new(&m);
        let got = span.lift(&b).unwrap();
        assert_eq!(m.mul_vec(&got), b);
        assert!(span.lift(&col(&["1", "0"], &n)).is_none());
    }
}
