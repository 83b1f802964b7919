//! Smith normal form over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `P · M · Q = D` with `P`, `Q` unimodular and `D` diagonal,
/// `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub d: Vec<Vec<BigInt>>,
    pub p: Vec<Vec<BigInt>>,
    pub q: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Nonzero elementary divisors.
    pub fn divisors(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn divisors_i64(&self) -> Vec<i64> {
        self.divisors().iter().map(|d| i64::try_from(d).expect("divisor fits in i64")).collect()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn smith_normal_form_i64(m: &[Vec<i64>]) -> SmithForm {
    let cols = m.first().map_or(0, |r| r.len());
    smith_normal_form(&m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect::<Vec<_>>(), cols)
}

pub fn smith_normal_form(m: &[Vec<BigInt>], cols: usize) -> SmithForm {
    let rows = m.len();
    let mut d: Vec<Vec<BigInt>> = m.to_vec();
    let mut p = identity(rows);
    let mut q = identity(cols);

    let row_op = |a: &mut Vec<Vec<BigInt>>, tgt: usize, src: usize, f: &BigInt| {
        // row tgt -= f * row src
        let s = a[src].clone();
        for (x, y) in a[tgt].iter_mut().zip(s.iter()) {
            *x -= f * y;
        }
    };
    let col_op = |a: &mut Vec<Vec<BigInt>>, tgt: usize, src: usize, f: &BigInt| {
        for r in a.iter_mut() {
            let v = &r[src] * f;
            r[tgt] -= v;
        }
    };
    let swap_cols = |a: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for r in a.iter_mut() {
            r.swap(i, j);
        }
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero() && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        p.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut q, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let f = d[i][t].div_floor(&d[t][t]);
                row_op(&mut d, i, t, &f);
                row_op(&mut p, i, t, &f);
                if !d[i][t].is_zero() {
                    d.swap(t, i);
                    p.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let f = d[t][j].div_floor(&d[t][t]);
                col_op(&mut d, j, t, &f);
                col_op(&mut q, j, t, &f);
                if !d[t][j].is_zero() {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut q, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let mut fix = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&d[i][j] % &d[t][t]).is_zero() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    // add row i to row t and redo
                    let neg = -BigInt::one();
                    row_op(&mut d, t, i, &neg);
                    row_op(&mut p, t, i, &neg);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in p[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let diagonal = (0..rows.min(cols)).map(|i| d[i][i].clone()).collect();
    SmithForm { diagonal, d, p, q }
}
