//! Dense matrices over ℚ and over ℚ[x₁..xₙ].

use std::fmt;

use crate::error::{AlgebraError, Result};
use crate::poly::MultiPoly;
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix with an explicit column count (needed when `rows` is empty).
    pub fn from_rows_with_cols(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        assert!(rows.iter().all(|x| x.len() == cols), "ragged rows");
        QMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Rational::from_int(v)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let rv = m.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * rv);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel {v : M v = 0}, one vector per free column,
    /// normalized to 1 at its free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f);
                }
                v
            })
            .collect()
    }

    /// Some solution of M x = b, if one exists.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let data = rows.iter().flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone())).collect();
        QMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rational::one();
        }
        let mut m = self.clone();
        let mut sign = false;
        let mut prev = Rational::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Rational::zero();
                };
                m.swap_rows(k, p);
                sign = !sign;
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&(m.get(i, j) * &pivot) - &(m.get(i, k) * m.get(k, j))) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, Rational::zero());
            }
            prev = pivot;
        }
        let d = m.get(n - 1, n - 1).clone();
        if sign {
            -d
        } else {
            d
        }
    }
}

/// Dense matrix whose entries lie in a common polynomial ring.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    nvars: usize,
    rows: usize,
    cols: usize,
    data: Vec<MultiPoly>,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} over {} vars", self.rows, self.cols, self.nvars)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_canonical_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl PolyMatrix {
    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix { nvars, rows, cols, data: vec![MultiPoly::zero(nvars); rows * cols] }
    }

    pub fn identity(nvars: usize, n: usize) -> Self {
        let mut m = Self::zeros(nvars, n, n);
        for i in 0..n {
            m.set(i, i, MultiPoly::one(nvars));
        }
        m
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<MultiPoly>>) -> Self {
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_rows_with_cols(nvars, rows, c)
    }

    pub fn from_rows_with_cols(nvars: usize, rows: Vec<Vec<MultiPoly>>, cols: usize) -> Self {
        assert!(rows.iter().all(|x| x.len() == cols), "ragged rows");
        assert!(rows.iter().flatten().all(|p| p.nvars() == nvars), "entries in different rings");
        PolyMatrix { nvars, rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(nvars: usize, nrows: usize, cols: Vec<Vec<MultiPoly>>) -> Self {
        let mut m = Self::zeros(nvars, nrows, cols.len());
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), nrows, "column length");
            for (i, p) in col.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        m
    }

    pub fn from_qmatrix(nvars: usize, q: &QMatrix) -> Self {
        let data = q.data.iter().map(|c| MultiPoly::constant(nvars, c.clone())).collect();
        PolyMatrix { nvars, rows: q.rows, cols: q.cols, data }
    }

    pub fn parse(rows: &[Vec<String>], names: &[String]) -> Result<Self> {
        let n = names.len();
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let mut row = Vec::with_capacity(r.len());
            for s in r {
                row.push(MultiPoly::parse(s, names)?);
            }
            out.push(row);
        }
        let cols = out.first().map_or(0, |x| x.len());
        if out.iter().any(|r| r.len() != cols) {
            return Err(AlgebraError::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Self::from_rows_with_cols(n, out, cols))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &MultiPoly {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: MultiPoly) {
        debug_assert_eq!(v.nvars(), self.nvars);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[MultiPoly] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<MultiPoly> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<MultiPoly>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = Self::zeros(self.nvars, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.nvars != other.nvars {
            return Err(AlgebraError::RingMismatch { expected: self.nvars, found: other.nvars });
        }
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.nvars, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = MultiPoly::zero(self.nvars);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[MultiPoly]) -> Vec<MultiPoly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = MultiPoly::zero(self.nvars);
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn eval(&self, point: &[Rational]) -> QMatrix {
        let data = self.data.iter().map(|p| p.eval(point)).collect();
        QMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> PolyMatrix {
        let data: Vec<MultiPoly> = self.data.iter().map(f).collect();
        let nvars = data.first().map_or(self.nvars, |p| p.nvars());
        PolyMatrix { nvars, rows: self.rows, cols: self.cols, data }
    }

    pub fn substitute(&self, images: &[MultiPoly]) -> PolyMatrix {
        let nvars = images.first().map_or(self.nvars, |p| p.nvars());
        let mut m = self.map(|p| p.substitute(images));
        m.nvars = nvars;
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let data = rows.iter().flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone())).collect();
        PolyMatrix { nvars: self.nvars, rows: rows.len(), cols: cols.len(), data }
    }

    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> PolyMatrix {
        self.submatrix(row_perm, col_perm)
    }

    /// Largest total degree over all entries (None for the zero matrix).
    pub fn max_degree(&self) -> Option<u32> {
        self.data.iter().filter_map(|p| p.total_degree()).max()
    }

    pub fn to_strings(&self, names: &[String]) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|p| p.display(names).to_string()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::names_from;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn rank_and_kernel() {
        let m = QMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = QMatrix::from_i64_rows(&[&[1, 1], &[1, -1]]);
        let x = m.solve(&[q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let s = QMatrix::from_i64_rows(&[&[1, 1], &[2, 2]]);
        assert!(s.solve(&[q(1), q(3)]).is_none());
    }

    #[test]
    fn bareiss_determinant() {
        let m = QMatrix::from_i64_rows(&[&[0, 2, 1], &[3, 1, 4], &[1, 5, 9]]);
        // 0*(9-20) - 2*(27-4) + 1*(15-1) = -46 + 14
        assert_eq!(m.determinant(), q(-32));
        let half = QMatrix::from_rows(vec![vec![Rational::new(1, 2), q(1)], vec![q(1), q(4)]]);
        assert_eq!(half.determinant(), q(1));
    }

    #[test]
    fn poly_product_and_eval() {
        let names = names_from(&["x", "y"]);
        let a = PolyMatrix::parse(&[vec!["x".into(), "y".into()]], &names).unwrap();
        let b = PolyMatrix::parse(&[vec!["y".into()], vec!["-x".into()]], &names).unwrap();
        assert!(a.mul(&b).unwrap().is_zero());
        let e = a.eval(&[q(2), q(3)]);
        assert_eq!(e.row(0), &[q(2), q(3)]);
    }
}
