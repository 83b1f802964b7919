//! Quotients of an exterior algebra on degree-one generators by a
//! homogeneous ideal, built degree by degree with exact linear algebra.

use std::collections::{BTreeMap, HashMap};

use jumploci_symbolic::{QMatrix, Rational};

use crate::cdga::FiniteCdga;
use crate::error::{CoreError, Result};

/// Exterior monomial as a bitmask over generators.
pub type Mask = u64;

/// Element of the exterior algebra: monomial → coefficient.
pub type ExtElt = BTreeMap<Mask, Rational>;

pub fn monomial(indices: &[usize]) -> (Mask, i64) {
    let mut mask = 0u64;
    let mut sign = 1;
    for &i in indices {
        if mask & (1 << i) != 0 {
            return (0, 0);
        }
        // move past the set bits above i
        if (mask >> (i + 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= 1 << i;
    }
    (mask, sign)
}

/// Product of monomials with its sign (0 when they share a generator).
pub fn mul_masks(a: Mask, b: Mask) -> (Mask, i64) {
    if a & b != 0 {
        return (0, 0);
    }
    // sign: number of pairs (i in a, j in b) with i > j
    let mut inv = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        inv += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    (a | b, if inv % 2 == 0 { 1 } else { -1 })
}

pub fn mul_elts(x: &ExtElt, y: &ExtElt) -> ExtElt {
    let mut out = ExtElt::new();
    for (a, c) in x {
        for (b, e) in y {
            let (m, s) = mul_masks(*a, *b);
            if s == 0 {
                continue;
            }
            let v = &(c * e) * &Rational::from_int(s);
            let entry = out.entry(m).or_insert_with(Rational::zero);
            *entry = &*entry + &v;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn elt(terms: &[(&[usize], i64)]) -> ExtElt {
    let mut out = ExtElt::new();
    for (idx, c) in terms {
        let (m, s) = monomial(idx);
        if s == 0 {
            continue;
        }
        let e = out.entry(m).or_insert_with(Rational::zero);
        *e = &*e + &Rational::from_int(c * s);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn indices(mask: Mask) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}

/// Description of `Λ(generators) / I` with an optional differential.
#[derive(Clone, Debug)]
pub struct ExteriorQuotient {
    pub names: Vec<String>,
    /// Generators of class 1 are listed after class 0 in monomial keys.
    pub classes: Vec<u8>,
    pub relations: Vec<ExtElt>,
    /// Image of each generator under d (degree-2 elements); empty = closed.
    pub differential: Vec<ExtElt>,
    pub weights: Option<Vec<i64>>,
    pub max_degree: usize,
}

impl ExteriorQuotient {
    fn key(&self, m: Mask) -> (usize, Vec<usize>, Vec<usize>) {
        let idx = indices(m);
        let hi: Vec<usize> = idx.iter().copied().filter(|&i| self.classes[i] == 1).collect();
        let lo: Vec<usize> = idx.iter().copied().filter(|&i| self.classes[i] != 1).collect();
        (hi.len(), hi, lo)
    }

    /// Builds the quotient algebra; basis monomials in each degree are the
    /// non-pivots of the ideal, the largest monomials being eliminated first.
    pub fn build(&self) -> Result<FiniteCdga> {
        let g = self.names.len();
        if g > 20 {
            return Err(CoreError::SizeBound { what: "exterior generators".into(), size: g, bound: 20 });
        }
        let top = self.max_degree.min(g);
        // monomials of each degree, sorted by key
        let mut mons: Vec<Vec<Mask>> = vec![Vec::new(); top + 1];
        for m in 0u64..(1u64 << g) {
            let k = m.count_ones() as usize;
            if k <= top {
                mons[k].push(m);
            }
        }
        for l in mons.iter_mut() {
            l.sort_by_key(|&m| self.key(m));
        }
        // ideal in each degree, reduced echelon with pivots at the largest monomials
        let mut reducers: Vec<HashMap<Mask, ExtElt>> = vec![HashMap::new(); top + 1];
        let mut spans: Vec<Vec<ExtElt>> = vec![Vec::new(); top + 1];
        for r in &self.relations {
            let Some(d) = homogeneous_degree(r) else {
                return Err(CoreError::Input("relation is not homogeneous".into()));
            };
            for k in d..=top {
                for &m in &mons[k - d] {
                    let mut single = ExtElt::new();
                    single.insert(m, Rational::one());
                    let p = mul_elts(&single, r);
                    if !p.is_empty() {
                        spans[k].push(p);
                    }
                }
            }
        }
        for k in 0..=top {
            let pos: HashMap<Mask, usize> = mons[k].iter().enumerate().map(|(i, &m)| (m, i)).collect();
            let ncols = mons[k].len();
            if spans[k].is_empty() {
                continue;
            }
            // columns in decreasing key order so pivots land on largest monomials
            let rows: Vec<Vec<Rational>> = spans[k]
                .iter()
                .map(|e| {
                    let mut row = vec![Rational::zero(); ncols];
                    for (m, c) in e {
                        row[ncols - 1 - pos[m]] = c.clone();
                    }
                    row
                })
                .collect();
            let (rr, piv) = QMatrix::from_rows_with_cols(rows, ncols).rref();
            for (i, &p) in piv.iter().enumerate() {
                let m = mons[k][ncols - 1 - p];
                let mut e = ExtElt::new();
                for (c, v) in rr.row(i).iter().enumerate() {
                    if !v.is_zero() {
                        e.insert(mons[k][ncols - 1 - c], v.clone());
                    }
                }
                reducers[k].insert(m, e);
            }
        }
        let basis: Vec<Vec<Mask>> =
            mons.iter().enumerate().map(|(k, l)| l.iter().copied().filter(|m| !reducers[k].contains_key(m)).collect()).collect();
        let mut last = top;
        while last > 0 && basis[last].is_empty() {
            last -= 1;
        }
        let reduce = |e: &ExtElt| -> ExtElt {
            let mut out = ExtElt::new();
            for (m, c) in e {
                let k = m.count_ones() as usize;
                if k > top {
                    continue;
                }
                match reducers[k].get(m) {
                    None => {
                        let x = out.entry(*m).or_insert_with(Rational::zero);
                        *x = &*x + c;
                    }
                    Some(row) => {
                        for (m2, c2) in row {
                            if m2 != m {
                                let x = out.entry(*m2).or_insert_with(Rational::zero);
                                *x = &*x - &(c * c2);
                            }
                        }
                    }
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        };
        let dmon = |m: Mask| -> ExtElt {
            let idx = indices(m);
            let mut out = ExtElt::new();
            for (p, &i) in idx.iter().enumerate() {
                let Some(di) = self.differential.get(i) else { continue };
                if di.is_empty() {
                    continue;
                }
                let before: Mask = idx[..p].iter().fold(0, |a, &j| a | (1 << j));
                let after: Mask = idx[p + 1..].iter().fold(0, |a, &j| a | (1 << j));
                let mut b = ExtElt::new();
                b.insert(before, Rational::from_int(if p % 2 == 0 { 1 } else { -1 }));
                let mut a = ExtElt::new();
                a.insert(after, Rational::one());
                for (mm, c) in mul_elts(&mul_elts(&b, di), &a) {
                    let x = out.entry(mm).or_insert_with(Rational::zero);
                    *x = &*x + &c;
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        };
        let dlin = |e: &ExtElt| -> ExtElt {
            let mut out = ExtElt::new();
            for (m, c) in e {
                for (mm, cc) in dmon(*m) {
                    let x = out.entry(mm).or_insert_with(Rational::zero);
                    *x = &*x + &(c * &cc);
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        };
        // d must preserve the ideal
        for k in 0..top {
            for s in &spans[k] {
                if !reduce(&dlin(s)).is_empty() {
                    return Err(CoreError::Input("the differential does not preserve the relation ideal".into()));
                }
            }
        }
        let name_of = |m: Mask| -> String {
            if m == 0 {
                "1".into()
            } else {
                indices(m).iter().map(|&i| self.names[i].as_str()).collect()
            }
        };
        let names: Vec<Vec<String>> = (0..=last).map(|k| basis[k].iter().map(|&m| name_of(m)).collect()).collect();
        let mut offsets = vec![0usize];
        for l in &names {
            offsets.push(offsets.last().unwrap() + l.len());
        }
        let bpos: Vec<HashMap<Mask, usize>> =
            basis.iter().map(|l| l.iter().enumerate().map(|(i, &m)| (m, i)).collect()).collect();
        let mut mult = HashMap::new();
        for i in 1..=last {
            for j in 1..=last {
                if i + j > last {
                    continue;
                }
                for (a, &ma) in basis[i].iter().enumerate() {
                    for (b, &mb) in basis[j].iter().enumerate() {
                        let (m, s) = mul_masks(ma, mb);
                        if s == 0 {
                            continue;
                        }
                        let mut e = ExtElt::new();
                        e.insert(m, Rational::from_int(s));
                        let terms: Vec<(usize, Rational)> =
                            reduce(&e).into_iter().map(|(mm, c)| (offsets[i + j] + bpos[i + j][&mm], c)).collect();
                        mult.insert((offsets[i] + a, offsets[j] + b), terms);
                    }
                }
            }
        }
        let diff = (0..=last)
            .map(|k| {
                let rows = if k < last { basis[k + 1].len() } else { 0 };
                let mut q = QMatrix::zeros(rows, basis[k].len());
                if k < last {
                    for (c, &m) in basis[k].iter().enumerate() {
                        for (mm, v) in reduce(&dmon(m)) {
                            q.set(bpos[k + 1][&mm], c, v);
                        }
                    }
                }
                q
            })
            .collect();
        let weights = self.weights.as_ref().map(|w| {
            basis[..=last].iter().flatten().map(|&m| indices(m).iter().map(|&i| w[i]).sum()).collect()
        });
        Ok(FiniteCdga::from_parts(names, mult, diff, weights, None))
    }
}

fn homogeneous_degree(e: &ExtElt) -> Option<usize> {
    let mut it = e.keys().map(|m| m.count_ones() as usize);
    let d = it.next()?;
    it.all(|x| x == d).then_some(d)
}
