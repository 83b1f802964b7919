//! Laurent polynomials in t₁^±1 … tₙ^±1.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::ParseError;
use crate::monomial::Monomial;
use crate::poly::MultiPoly;
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Rational>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&crate::poly::default_names(self.nvars)))
    }
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(nvars, vec![0; nvars], Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, exps: Vec<i32>, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<i32>, c: Rational) {
        assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn from_poly(p: &MultiPoly) -> Self {
        let n = p.nvars();
        Self::from_terms(n, p.terms().iter().map(|(m, c)| (m.exps(n).iter().map(|&e| e as i32).collect(), c.clone())))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponent vectors with nonzero coefficient.
    pub fn support(&self) -> Vec<Vec<i32>> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, e: &[i32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    /// Multiplies by the monomial t^shift.
    pub fn shift(&self, shift: &[i32]) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, v)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), v.clone())),
        )
    }

    /// Evaluation at a point of (ℚ*)ⁿ.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = &t * &x.pow(k as u32);
                } else if k < 0 {
                    t = &t * &x.recip().pow((-k) as u32);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Polynomial obtained by multiplying with the smallest monomial that
    /// clears all negative exponents (same zero set on the torus), together
    /// with that monomial's exponents.
    pub fn to_poly(&self) -> (MultiPoly, Vec<i32>) {
        let n = self.nvars;
        let mut shift = vec![0; n];
        for e in self.terms.keys() {
            for i in 0..n {
                shift[i] = shift[i].max(-e[i]);
            }
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let ex: Vec<u32> = e.iter().zip(&shift).map(|(a, b)| (a + b) as u32).collect();
            (Monomial::from_exps(&ex), c.clone())
        });
        (MultiPoly::from_terms(n, terms), shift)
    }

    /// Polynomial with the lowest exponent in every variable shifted to zero
    /// (a normal form up to units of the Laurent ring).
    pub fn normalized_poly(&self) -> MultiPoly {
        let n = self.nvars;
        if self.is_zero() {
            return MultiPoly::zero(n);
        }
        let mut low = vec![i32::MAX; n];
        for e in self.terms.keys() {
            for i in 0..n {
                low[i] = low[i].min(e[i]);
            }
        }
        let neg: Vec<i32> = low.iter().map(|v| -v).collect();
        self.shift(&neg).to_poly().0
    }

    /// Substitutes `t_j = 1 + y_j` and returns the result as a polynomial in
    /// y, truncated to total degree `≤ max_deg`.
    pub fn taylor_at_one(&self, max_deg: u32) -> MultiPoly {
        let n = self.nvars;
        let mut acc = MultiPoly::zero(n);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(n, c.clone());
            for (j, &k) in e.iter().enumerate() {
                if k != 0 {
                    t = truncate(&(&t * &binomial_series(n, j, k, max_deg)), max_deg);
                }
            }
            acc = &acc + &t;
        }
        truncate(&acc, max_deg)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> LaurentDisplay<'a> {
        LaurentDisplay { p: self, names }
    }

    /// Parses a Laurent polynomial; negative exponents are written `t1^-2`.
    pub fn parse(s: &str, names: &[String]) -> Result<Self, ParseError> {
        let n = names.len();
        let mut p = LaurentParser { s: s.as_bytes(), pos: 0, names };
        let out = p.expr(n)?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(ParseError::new(p.pos, "unexpected trailing input"));
        }
        Ok(out)
    }
}

/// (1 + y_j)^k as a power series truncated at `max_deg`.
fn binomial_series(n: usize, j: usize, k: i32, max_deg: u32) -> MultiPoly {
    let mut terms = Vec::new();
    let mut coef = Rational::one();
    for d in 0..=max_deg {
        if d > 0 {
            // coef = C(k, d) generalized
            coef = &(&coef * &Rational::from_int((k - (d as i32 - 1)) as i64)) / &Rational::from_int(d as i64);
        }
        if coef.is_zero() {
            break;
        }
        let mut m = Monomial::one();
        m.set_exp(j, d);
        terms.push((m, coef.clone()));
    }
    MultiPoly::from_terms(n, terms)
}

fn truncate(p: &MultiPoly, max_deg: u32) -> MultiPoly {
    MultiPoly::from_terms(p.nvars(), p.terms().iter().filter(|(m, _)| m.degree() <= max_deg).cloned())
}

pub struct LaurentDisplay<'a> {
    p: &'a LaurentPoly,
    names: &'a [String],
}

impl fmt::Display for LaurentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        // highest exponents first
        for (idx, (e, c)) in self.p.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| if k == 1 { self.names[i].clone() } else { format!("{}^{}", self.names[i], k) })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

struct LaurentParser<'a> {
    s: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl LaurentParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self, n: usize) -> Result<LaurentPoly, ParseError> {
        let mut acc = LaurentPoly::zero(n);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.product(n)?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self, n: usize) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.factor(n)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor(n)?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && self.s[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ParseError::new(start, "expected an integer"))
    }

    fn factor(&mut self, n: usize) -> Result<LaurentPoly, ParseError> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr(n)?;
                if self.peek() != Some(b')') {
                    return Err(ParseError::new(self.pos, "expected ')'"));
                }
                self.pos += 1;
                e
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'/') {
                    self.pos += 1;
                }
                let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let r: Rational = txt.parse().map_err(|_| ParseError::new(start, "bad number"))?;
                LaurentPoly::constant(n, r)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let i = self
                    .names
                    .iter()
                    .position(|x| x == name)
                    .ok_or_else(|| ParseError::new(start, format!("unknown variable '{name}'")))?;
                LaurentPoly::var(n, i)
            }
            _ => return Err(ParseError::new(self.pos, "expected a term")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.int()?;
            return Ok(base.pow(k).ok_or_else(|| ParseError::new(self.pos, "negative power of a non-monomial"))?);
        }
        Ok(base)
    }
}

impl LaurentPoly {
    /// Integer power; negative powers exist only for monomials.
    pub fn pow(&self, k: i64) -> Option<Self> {
        if k < 0 {
            if self.terms.len() != 1 {
                return None;
            }
            let (e, c) = self.terms.iter().next().unwrap();
            let ne: Vec<i32> = e.iter().map(|x| x * k as i32).collect();
            return Some(Self::monomial(self.nvars, ne, c.recip().pow((-k) as u32)));
        }
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        Some(acc)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut acc: BTreeMap<Vec<i32>, Rational> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let e: Vec<i32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                let v = acc.entry(e).or_insert_with(Rational::zero);
                *v = &*v + &(x * y);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        LaurentPoly { nvars: self.nvars, terms: acc }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&Rational::from_int(-1))
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}
