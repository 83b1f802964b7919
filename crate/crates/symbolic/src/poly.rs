//! Sparse multivariate polynomials over ℚ.
//!
//! Terms are kept sorted by descending graded reverse lex order with no zero
//! coefficients, which makes structural equality coincide with polynomial
//! equality. Gröbner computations use their own order-specific layout (see
//! [`crate::groebner`]).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::ParseError;
use crate::monomial::{Monomial, MonomialOrder, MAX_VARS};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(Monomial, Rational)>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        MultiPoly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((Monomial::one(), c));
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        MultiPoly { nvars, terms: vec![(Monomial::var(i), Rational::one())] }
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            *acc.entry(m).or_default() += &c;
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| MonomialOrder::GrevLex.cmp(&b.0, &a.0, nvars));
        MultiPoly { nvars, terms }
    }

    /// Terms already sorted descending in grevlex with no duplicates or zeros.
    pub(crate) fn from_sorted_unchecked(nvars: usize, terms: Vec<(Monomial, Rational)>) -> Self {
        MultiPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Nonzero constant, i.e. a unit of the polynomial ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.degree() == m0.degree()),
        }
    }

    /// The homogeneous component of lowest degree (the initial form at 0).
    pub fn lowest_form(&self) -> MultiPoly {
        match self.min_degree() {
            None => self.clone(),
            Some(d) => self.homogeneous_part(d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect(),
        }
    }

    /// Leading term with respect to `order`.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<&(Monomial, Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0, self.nvars))
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Monic with respect to grevlex (leading coefficient 1).
    pub fn monic(&self) -> MultiPoly {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        // multiplying by a monomial preserves grevlex order
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    v = &v * &x.pow(e);
                }
            }
            total += &v;
        }
        total
    }

    /// Substitutes `images[i]` for variable `i`; all images must share a ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars, "substitution arity mismatch");
        let target = images.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(p.nvars), p.clone()]).collect();
        let mut acc = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for i in 0..self.nvars {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// `p(x + shift)`.
    pub fn translate(&self, shift: &[Rational]) -> MultiPoly {
        let images: Vec<MultiPoly> = (0..self.nvars)
            .map(|i| &MultiPoly::var(self.nvars, i) + &MultiPoly::constant(self.nvars, shift[i].clone()))
            .collect();
        self.substitute(&images)
    }

    /// Reinterprets in a ring with `extra` more variables appended at the end.
    pub fn extend(&self, extra: usize) -> MultiPoly {
        let n = self.nvars + extra;
        assert!(n <= MAX_VARS, "at most {MAX_VARS} variables supported");
        MultiPoly { nvars: n, terms: self.terms.clone() }.resorted()
    }

    /// Inserts a new variable at position `i` (existing variables shift up).
    pub fn insert_var(&self, i: usize) -> MultiPoly {
        let n = self.nvars + 1;
        assert!(n <= MAX_VARS);
        let terms = self.terms.iter().map(|(m, c)| (m.insert_var(i, 0), c.clone()));
        MultiPoly::from_terms(n, terms)
    }

    /// Sets variable `i` to 1 and removes it from the ring.
    pub fn dehomogenize(&self, i: usize) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.drop_var(i), c.clone()));
        MultiPoly::from_terms(self.nvars - 1, terms)
    }

    /// Homogenizes with respect to a new variable appended at index `nvars`.
    pub fn homogenize(&self) -> MultiPoly {
        let d = self.total_degree().unwrap_or(0);
        let n = self.nvars + 1;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = *m;
            m2.set_exp(self.nvars, d - m.degree());
            (m2, c.clone())
        });
        MultiPoly::from_terms(n, terms)
    }

    fn resorted(mut self) -> MultiPoly {
        let n = self.nvars;
        self.terms.sort_by(|a, b| MonomialOrder::GrevLex.cmp(&b.0, &a.0, n));
        self
    }

    /// Variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exp(i) > 0))
            .collect()
    }

    /// Clears denominators and content so the result has coprime integer
    /// coefficients and a positive leading coefficient.
    pub fn primitive(&self) -> MultiPoly {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            l = l.lcm(&c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let v = c.numer() * (&l / c.denom());
            g = g.gcd(&v);
        }
        let mut factor = Rational::from_bigint(l) / Rational::from_bigint(g.abs());
        if self.terms[0].1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }

    /// Canonical string with default names `x1..xn`.
    pub fn to_canonical_string(&self) -> String {
        let names = default_names(self.nvars);
        self.display(&names).to_string()
    }

    pub fn parse(s: &str, names: &[String]) -> Result<MultiPoly, ParseError> {
        Parser::new(s, names).parse_poly()
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn names_from(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn merge_add(a: &MultiPoly, b: &MultiPoly, negate_b: bool) -> MultiPoly {
    assert_eq!(a.nvars, b.nvars, "ring mismatch");
    let n = a.nvars;
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() && j < b.terms.len() {
        let (ma, ca) = &a.terms[i];
        let (mb, cb) = &b.terms[j];
        match MonomialOrder::GrevLex.cmp(ma, mb, n) {
            std::cmp::Ordering::Greater => {
                out.push((*ma, ca.clone()));
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((*mb, if negate_b { -cb } else { cb.clone() }));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b { ca - cb } else { ca + cb };
                if !c.is_zero() {
                    out.push((*ma, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    out.extend(b.terms[j..].iter().map(|(m, c)| (*m, if negate_b { -c } else { c.clone() })));
    MultiPoly { nvars: n, terms: out }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        merge_add(self, rhs, false)
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        merge_add(self, rhs, true)
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        if rhs.terms.len() == 1 {
            return self.mul_monomial(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|e| *e += &c)
                    .or_insert(c);
            }
        }
        MultiPoly::from_map(self.nvars, acc)
    }
}

macro_rules! forward_owned_poly {
    ($tr:ident, $m:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned_poly!(Add, add);
forward_owned_poly!(Sub, sub);
forward_owned_poly!(Mul, mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    names: &'a [String],
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: &[String], n: usize) -> fmt::Result {
    let mut first = true;
    for i in 0..n {
        let e = m.exp(i);
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", names[i])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.poly;
        if p.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in p.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, m, self.names, p.nvars)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

/// Recursive-descent parser for `c*x1^2*x3 - x2 + 1/2`.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(s: &'a str, names: &'a [String]) -> Self {
        Parser { src: s.as_bytes(), pos: 0, names }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(self.pos, msg))
    }

    fn parse_poly(&mut self) -> Result<MultiPoly, ParseError> {
        let n = self.names.len();
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            Some(_) => 1,
            None => return self.err("empty polynomial"),
        };
        loop {
            let (m, c) = self.parse_term()?;
            terms.push((m, if sign < 0 { -c } else { c }));
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                Some(ch) => return self.err(format!("unexpected character `{}`", ch as char)),
            }
        }
        Ok(MultiPoly::from_terms(n, terms))
    }

    fn parse_term(&mut self) -> Result<(Monomial, Rational), ParseError> {
        let mut coeff = Rational::one();
        let mut mono = Monomial::one();
        loop {
            match self.peek() {
                Some(ch) if ch.is_ascii_digit() => coeff = &coeff * &self.parse_number()?,
                Some(ch) if ch.is_ascii_alphabetic() || ch == b'_' => {
                    let (i, e) = self.parse_power()?;
                    let mut m = Monomial::one();
                    m.set_exp(i, e);
                    mono = mono.mul(&m);
                }
                Some(ch) => return self.err(format!("expected a factor, found `{}`", ch as char)),
                None => return self.err("expected a factor, found end of input"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((mono, coeff))
    }

    fn parse_uint(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn parse_number(&mut self) -> Result<Rational, ParseError> {
        let start = self.pos;
        let num = self.parse_uint()?;
        let mut text = num.to_string();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.parse_uint()?;
            text = format!("{num}/{den}");
        }
        text.parse::<Rational>().map_err(|e| ParseError::new(start, e.msg))
    }

    fn parse_power(&mut self) -> Result<(usize, u32), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let ident = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let Some(i) = self.names.iter().position(|n| n == ident) else {
            return Err(ParseError::new(start, format!("unknown variable `{ident}`")));
        };
        let mut e = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            e = self.parse_uint()?.parse().map_err(|_| ParseError::new(at, "exponent too large"))?;
        }
        Ok((i, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> MultiPoly {
        MultiPoly::parse(s, &default_names(n)).unwrap()
    }

    #[test]
    fn parse_print_roundtrip() {
        let f = p("3*x1^2*x3 - x2 + 1/2 - x1^2*x3", 3);
        assert_eq!(f.to_canonical_string(), "2*x1^2*x3 - x2 + 1/2");
        assert_eq!(p(&f.to_canonical_string(), 3), f);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = MultiPoly::parse("x1 + y", &default_names(2)).unwrap_err();
        assert_eq!(err.pos, 5);
        assert!(MultiPoly::parse("x1 +", &default_names(2)).is_err());
        assert!(MultiPoly::parse("x1 ** x2", &default_names(2)).is_err());
    }

    #[test]
    fn arithmetic() {
        let f = p("x1 + x2", 2);
        let g = p("x1 - x2", 2);
        assert_eq!(&f * &g, p("x1^2 - x2^2", 2));
        assert!((&f - &f).is_zero());
        assert_eq!(f.pow(2), p("x1^2 + 2*x1*x2 + x2^2", 2));
    }

    #[test]
    fn translate_and_lowest_form() {
        // (z2+1) - (z1+1)(z3+1) + (z1+1) - (z3+1)
        let f = p("x2 - x1*x3 + x1 - x3", 3);
        let g = f.translate(&[Rational::one(), Rational::one(), Rational::one()]);
        assert_eq!(g, p("x2 - x1*x3 - 2*x3", 3));
        assert_eq!(g.lowest_form(), p("x2 - 2*x3", 3));
    }

    #[test]
    fn homogenize_roundtrip() {
        let f = p("x1^2 + x2 + 3", 2);
        let h = f.homogenize();
        assert!(h.is_homogeneous());
        assert_eq!(h.dehomogenize(2), f);
    }

    #[test]
    fn primitive_form() {
        let f = p("1/2*x1 - 3/4*x2", 2);
        assert_eq!(f.primitive(), p("2*x1 - 3*x2", 2));
        assert_eq!((-&f).primitive(), p("2*x1 - 3*x2", 2));
    }
}
