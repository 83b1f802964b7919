//! Minors and determinantal ideals of polynomial matrices.

use std::collections::HashMap;

use crate::error::{AlgebraError, Result};
use crate::ideal::{linear_basis, Ideal};
use crate::matrix::PolyMatrix;
use crate::poly::MultiPoly;

/// Largest minor size handled by the memoized expansion; larger minors are
/// expanded along their sparsest line first.
const MEMO_LIMIT: usize = 8;

/// The ideal generated by all k×k minors of `m`.
pub fn determinantal_ideal(m: &PolyMatrix, k: usize, names: &[String]) -> Result<Ideal> {
    if k == 0 || k > m.nrows().min(m.ncols()) {
        return Err(AlgebraError::MinorSizeOutOfRange { k, rows: m.nrows(), cols: m.ncols() });
    }
    check_ring(m, names)?;
    Ok(Ideal::new(names.to_vec(), all_minors(m, k)))
}

/// Iₖ(m) with the conventions I₀ = (1) and Iₖ = (0) for k > min(rows, cols).
///
/// Unit entries are eliminated first (Iₖ(M) = Iₖ₋₁(M′) for the Schur
/// complement M′ of a constant pivot), and the resulting minors are reduced
/// to a linearly independent list.
pub fn fitting_style_ideal(m: &PolyMatrix, k: usize, names: &[String]) -> Result<Ideal> {
    check_ring(m, names)?;
    let (reduced, k) = eliminate_units(m, k);
    if k == 0 {
        return Ok(Ideal::unit(names.to_vec()));
    }
    let reduced = drop_zero_lines(&reduced);
    if k > reduced.nrows().min(reduced.ncols()) {
        return Ok(Ideal::zero(names.to_vec()));
    }
    Ok(Ideal::new(names.to_vec(), linear_basis(all_minors(&reduced, k))))
}

fn check_ring(m: &PolyMatrix, names: &[String]) -> Result<()> {
    if m.nvars() != names.len() {
        return Err(AlgebraError::RingMismatch { expected: names.len(), found: m.nvars() });
    }
    Ok(())
}

/// Repeatedly pivots on a constant entry, lowering the minor size each time.
pub fn eliminate_units(m: &PolyMatrix, mut k: usize) -> (PolyMatrix, usize) {
    let mut cur = m.clone();
    while k > 0 {
        let Some((r, c)) = find_unit(&cur) else { break };
        cur = schur_complement(&cur, r, c);
        k -= 1;
    }
    (cur, k)
}

fn find_unit(m: &PolyMatrix) -> Option<(usize, usize)> {
    // Prefer pivots whose row and column are sparse: less fill-in.
    let mut best: Option<((usize, usize), usize)> = None;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if m.get(r, c).is_unit() {
                let fill = m.row(r).iter().filter(|p| !p.is_zero()).count()
                    * (0..m.nrows()).filter(|&i| !m.get(i, c).is_zero()).count();
                if best.as_ref().map_or(true, |&(_, f)| fill < f) {
                    best = Some(((r, c), fill));
                }
            }
        }
    }
    best.map(|(p, _)| p)
}

fn schur_complement(m: &PolyMatrix, r: usize, c: usize) -> PolyMatrix {
    let n = m.nvars();
    let inv = m.get(r, c).constant_term().recip();
    let rows: Vec<usize> = (0..m.nrows()).filter(|&i| i != r).collect();
    let cols: Vec<usize> = (0..m.ncols()).filter(|&j| j != c).collect();
    let mut out = PolyMatrix::zeros(n, rows.len(), cols.len());
    for (ii, &i) in rows.iter().enumerate() {
        let f = m.get(i, c).scale(&inv);
        for (jj, &j) in cols.iter().enumerate() {
            let v = if f.is_zero() || m.get(r, j).is_zero() {
                m.get(i, j).clone()
            } else {
                m.get(i, j) - &(&f * m.get(r, j))
            };
            out.set(ii, jj, v);
        }
    }
    out
}

fn drop_zero_lines(m: &PolyMatrix) -> PolyMatrix {
    let rows: Vec<usize> = (0..m.nrows()).filter(|&r| m.row(r).iter().any(|p| !p.is_zero())).collect();
    let cols: Vec<usize> = (0..m.ncols()).filter(|&c| (0..m.nrows()).any(|r| !m.get(r, c).is_zero())).collect();
    m.submatrix(&rows, &cols)
}

/// All k×k minors (zero minors omitted), in lexicographic order of
/// (row subset, column subset).
pub fn all_minors(m: &PolyMatrix, k: usize) -> Vec<MultiPoly> {
    let rows: Vec<usize> = (0..m.nrows()).collect();
    let cols: Vec<usize> = (0..m.ncols()).collect();
    let mut ctx = MinorCtx::new(m);
    let mut out = Vec::new();
    for rs in subsets(&rows, k) {
        for cs in subsets(&cols, k) {
            let d = ctx.det(&rs, &cs);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

/// Determinant of a square polynomial matrix.
pub fn determinant(m: &PolyMatrix) -> MultiPoly {
    assert_eq!(m.nrows(), m.ncols(), "determinant of a non-square matrix");
    if m.nrows() == 0 {
        return MultiPoly::one(m.nvars());
    }
    let idx: Vec<usize> = (0..m.nrows()).collect();
    MinorCtx::new(m).det(&idx, &idx)
}

pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..items.len() {
            if items.len() - i < need {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

struct MinorCtx<'a> {
    m: &'a PolyMatrix,
    memo: HashMap<(u128, u128), MultiPoly>,
    memo_ok: bool,
}

fn mask(idx: &[usize]) -> u128 {
    idx.iter().fold(0u128, |acc, &i| acc | (1u128 << i))
}

impl<'a> MinorCtx<'a> {
    fn new(m: &'a PolyMatrix) -> Self {
        MinorCtx { m, memo: HashMap::new(), memo_ok: m.nrows() <= 128 && m.ncols() <= 128 }
    }

    fn det(&mut self, rows: &[usize], cols: &[usize]) -> MultiPoly {
        let k = rows.len();
        match k {
            1 => return self.m.get(rows[0], cols[0]).clone(),
            2 => {
                let a = self.m.get(rows[0], cols[0]);
                let b = self.m.get(rows[0], cols[1]);
                let c = self.m.get(rows[1], cols[0]);
                let d = self.m.get(rows[1], cols[1]);
                let ad = if a.is_zero() || d.is_zero() { MultiPoly::zero(self.m.nvars()) } else { a * d };
                let bc = if b.is_zero() || c.is_zero() { MultiPoly::zero(self.m.nvars()) } else { b * c };
                return &ad - &bc;
            }
            _ => {}
        }
        if k > MEMO_LIMIT || !self.memo_ok {
            return self.det_sparsest(rows, cols);
        }
        let key = (mask(rows), mask(cols));
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        // expand along the first column
        let c0 = cols[0];
        let rest_cols = &cols[1..];
        let mut acc = MultiPoly::zero(self.m.nvars());
        let mut sub_rows = Vec::with_capacity(k - 1);
        for (pos, &r) in rows.iter().enumerate() {
            let e = self.m.get(r, c0);
            if e.is_zero() {
                continue;
            }
            sub_rows.clear();
            sub_rows.extend(rows.iter().copied().filter(|&x| x != r));
            let sub = self.det(&sub_rows, rest_cols);
            if sub.is_zero() {
                continue;
            }
            let term = e * &sub;
            acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        self.memo.insert(key, acc.clone());
        acc
    }

    /// Laplace expansion along the line with the fewest nonzero entries.
    fn det_sparsest(&mut self, rows: &[usize], cols: &[usize]) -> MultiPoly {
        let count_row = |r: usize| cols.iter().filter(|&&c| !self.m.get(r, c).is_zero()).count();
        let count_col = |c: usize| rows.iter().filter(|&&r| !self.m.get(r, c).is_zero()).count();
        let (br, rcount) = rows.iter().enumerate().map(|(i, &r)| (i, count_row(r))).min_by_key(|x| x.1).unwrap();
        let (bc, ccount) = cols.iter().enumerate().map(|(i, &c)| (i, count_col(c))).min_by_key(|x| x.1).unwrap();
        let mut acc = MultiPoly::zero(self.m.nvars());
        if rcount <= ccount {
            let r = rows[br];
            let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
            for (pos, &c) in cols.iter().enumerate() {
                let e = self.m.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = e * &self.det(&sub_rows, &sub_cols);
                acc = if (br + pos) % 2 == 0 { &acc + &term } else { &acc - &term };
            }
        } else {
            let c = cols[bc];
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            for (pos, &r) in rows.iter().enumerate() {
                let e = self.m.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
                let term = e * &self.det(&sub_rows, &sub_cols);
                acc = if (bc + pos) % 2 == 0 { &acc + &term } else { &acc - &term };
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::QMatrix;
    use crate::poly::names_from;
    use crate::rational::Rational;

    fn pm(rows: &[&[&str]], names: &[String]) -> PolyMatrix {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        PolyMatrix::parse(&rows, names).unwrap()
    }

    #[test]
    fn one_minors_of_row() {
        let n = names_from(&["x", "y"]);
        let m = pm(&[&["x", "y"], &["0", "0"]], &n);
        let i = determinantal_ideal(&m, 1, &n).unwrap();
        let expect = Ideal::new(n.clone(), vec![MultiPoly::parse("x", &n).unwrap(), MultiPoly::parse("y", &n).unwrap()]);
        assert_eq!(i, expect);
    }

    #[test]
    fn size_out_of_range() {
        let n = names_from(&["x"]);
        let m = pm(&[&["x"]], &n);
        assert!(determinantal_ideal(&m, 2, &n).is_err());
        assert!(determinantal_ideal(&m, 0, &n).is_err());
    }

    #[test]
    fn column_zero_then_x_minus_one() {
        let n = names_from(&["x"]);
        let m = pm(&[&["0"], &["x - 1"]], &n);
        let i = determinantal_ideal(&m, 1, &n).unwrap();
        assert_eq!(i, Ideal::new(n.clone(), vec![MultiPoly::parse("x - 1", &n).unwrap()]));
    }

    #[test]
    fn unit_elimination_agrees_with_plain_minors() {
        let n = names_from(&["x", "y", "z"]);
        let m = pm(
            &[&["1", "x", "y"], &["z", "x*y", "0"], &["x", "1", "y + z"], &["0", "z", "x"]],
            &n,
        );
        for k in 1..=3 {
            let plain = determinantal_ideal(&m, k, &n).unwrap();
            let fast = fitting_style_ideal(&m, k, &n).unwrap();
            assert_eq!(plain, fast, "k = {k}");
        }
        assert!(fitting_style_ideal(&m, 4, &n).unwrap().is_zero_ideal());
        assert!(fitting_style_ideal(&m, 0, &n).unwrap().is_unit());
    }

    #[test]
    fn polynomial_determinant_matches_numeric() {
        let n = names_from(&["x"]);
        let m = pm(
            &[
                &["1", "2", "0", "x", "1"],
                &["x", "1", "3", "0", "2"],
                &["0", "x", "1", "1", "0"],
                &["2", "0", "x", "1", "1"],
                &["1", "1", "1", "x", "x"],
            ],
            &n,
        );
        let d = determinant(&m);
        for v in -3..4 {
            let p = [Rational::from_int(v)];
            let numeric: QMatrix = m.eval(&p);
            assert_eq!(d.eval(&p), numeric.determinant());
        }
    }

    #[test]
    fn large_minor_uses_sparse_expansion() {
        let n = names_from(&["x"]);
        let size = 10;
        let mut m = PolyMatrix::zeros(1, size, size);
        for i in 0..size {
            m.set(i, i, MultiPoly::parse("x", &n).unwrap());
            m.set(i, (i + 1) % size, MultiPoly::one(1));
        }
        // det = x^10 - (-1)^10 ... circulant: x^n + (-1)^(n+1)
        let d = determinant(&m);
        assert_eq!(d, MultiPoly::parse("x^10 - 1", &n).unwrap());
    }
}
