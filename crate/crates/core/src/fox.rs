//! Finitely presented groups, Fox free differential calculus, and Alexander
//! matrices.

use std::collections::BTreeMap;

use jumploci_symbolic::{
    determinantal_ideal, smith_normal_form_i64, Ideal, LaurentPoly, MultiPoly, ParseError, PolyMatrix, Rational,
};
use num_traits::ToPrimitive;

use crate::error::{CoreError, Result};

/// A letter `x_g^{±1}`.
pub type Letter = (usize, i8);

/// A freely reduced word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&(l.0, -l.1)) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, s)| (g, -s)).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::empty();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0i64; ngens];
        for &(g, s) in &self.0 {
            v[g] += s as i64;
        }
        v
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        // group runs of one generator into powers
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let (g, s) = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == (g, s) {
                j += 1;
            }
            let e = (j - i) as i64 * s as i64;
            parts.push(if e == 1 { names[g].clone() } else { format!("{}^{e}", names[g]) });
            i = j;
        }
        parts.join(" ")
    }
}

/// `ℤ`-linear combination of free-group words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreeGroupRingElt(BTreeMap<Word, i64>);

impl FreeGroupRingElt {
    pub fn zero() -> Self {
        FreeGroupRingElt(BTreeMap::new())
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, 1)
    }

    pub fn term(w: Word, c: i64) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.0.entry(w.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.0 {
            out.add_term(w.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.0 {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                out.add_term(a.concat(b), x * y);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &i64)> {
        self.0.iter()
    }

    /// Augmentation `ε`: sum of coefficients.
    pub fn augmentation(&self) -> i64 {
        self.0.values().sum()
    }

    /// Linear extension of the Fox derivative.
    pub fn fox(&self, j: usize) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.0 {
            for (v, d) in fox_derivative(w, j).0 {
                out.add_term(v, c * d);
            }
        }
        out
    }

    /// Image in the group ring of the abelianization, `xⱼ ↦ t^{φ(xⱼ)}`.
    pub fn abelianize(&self, phi: &[Vec<i64>]) -> LaurentPoly {
        let b = phi.first().map_or(0, |r| r.len());
        let mut terms: Vec<(Vec<i32>, Rational)> = Vec::new();
        for (w, c) in &self.0 {
            let mut e = vec![0i64; b];
            for &(g, s) in w.letters() {
                for (k, x) in phi[g].iter().enumerate() {
                    e[k] += s as i64 * x;
                }
            }
            terms.push((e.into_iter().map(|v| v as i32).collect(), Rational::from_int(*c)));
        }
        LaurentPoly::from_terms(b, terms)
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        self.0
            .iter()
            .map(|(w, c)| match c {
                1 => w.display(names),
                -1 => format!("-{}", w.display(names)),
                c => format!("{c}*{}", w.display(names)),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `∂w/∂xⱼ` with `∂(uv) = ∂u + u ∂v`, `∂xⱼ = 1`, `∂xⱼ⁻¹ = −xⱼ⁻¹`.
pub fn fox_derivative(w: &Word, j: usize) -> FreeGroupRingElt {
    let mut out = FreeGroupRingElt::zero();
    let mut prefix = Word::empty();
    for &(g, s) in w.letters() {
        if g == j {
            if s > 0 {
                out.add_term(prefix.clone(), 1);
            } else {
                out.add_term(prefix.concat(&Word(vec![(g, s)])), -1);
            }
        }
        prefix.push((g, s));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
    /// Relator text as given, for error messages.
    sources: Vec<String>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        let sources = relators.iter().map(|r| r.display(&generators)).collect();
        GroupPresentation { generators, relators, sources }
    }

    /// Parses `gens: x1 x2; rel: x1 x2 x1^-1 x2^-1; rel: ...`.
    /// Words allow `^k` powers, `[u,v] = u v u⁻¹ v⁻¹`, and parentheses.
    pub fn parse(s: &str) -> Result<Self> {
        let mut gens: Option<Vec<String>> = None;
        let mut rels = Vec::new();
        let mut offset = 0;
        for part in s.split(';') {
            let start = offset;
            offset += part.len() + 1;
            let trimmed = part.trim();
            if trimmed.is_empty() {
                continue;
            }
            let Some((key, body)) = part.split_once(':') else {
                return Err(ParseError { pos: start, msg: "expected 'gens:' or 'rel:'".into() }.into());
            };
            let body_pos = start + key.len() + 1;
            match key.trim() {
                "gens" => {
                    let g: Vec<String> = body.split_whitespace().map(str::to_string).collect();
                    if let Some(bad) = g.iter().find(|n| !valid_name(n)) {
                        return Err(ParseError { pos: body_pos, msg: format!("invalid generator name '{bad}'") }.into());
                    }
                    gens = Some(g);
                }
                "rel" => {
                    let g = gens.as_ref().ok_or_else(|| ParseError { pos: start, msg: "relator before 'gens:'".into() })?;
                    let mut p = WordParser { s: body.as_bytes(), pos: 0, base: body_pos, gens: g };
                    let w = p.word()?;
                    p.skip_ws();
                    if p.pos < p.s.len() {
                        return Err(p.err("unexpected character"));
                    }
                    rels.push((w, body.trim().to_string()));
                }
                other => return Err(ParseError { pos: start, msg: format!("unknown section '{other}'") }.into()),
            }
        }
        let generators = gens.ok_or_else(|| ParseError { pos: 0, msg: "missing 'gens:' section".into() })?;
        let (relators, sources) = rels.into_iter().unzip();
        Ok(GroupPresentation { generators, relators, sources })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Relator exponent-sum matrix (m × n).
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|r| r.exponent_sums(self.ngens())).collect()
    }

    /// Abelianization `ℤⁿ → ℤᵇ`, one row per generator; errors on torsion.
    pub fn abelianization(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.ngens();
        let e = self.exponent_matrix();
        if e.is_empty() || e.iter().all(|r| r.iter().all(|&v| v == 0)) {
            return Ok((0..n).map(|j| (0..n).map(|k| i64::from(j == k)).collect()).collect());
        }
        let s = smith_normal_form_i64(&e);
        if let Some(d) = s.divisors_i64().into_iter().find(|&d| d != 1) {
            return Err(CoreError::Unsupported(format!("abelianization has torsion (elementary divisor {d})")));
        }
        let r = s.rank();
        let mut phi: Vec<Vec<i64>> = (0..n)
            .map(|j| (r..n).map(|k| s.q[j][k].to_i64().expect("small transform entry")).collect())
            .collect();
        // orient each coordinate so that its first nonzero image is positive
        for k in 0..n - r {
            if let Some(j) = (0..n).find(|&j| phi[j][k] != 0) {
                if phi[j][k] < 0 {
                    for row in phi.iter_mut() {
                        row[k] = -row[k];
                    }
                }
            }
        }
        Ok(phi)
    }

    pub fn betti1(&self) -> Result<usize> {
        Ok(self.abelianization()?.first().map_or(0, |r| r.len()))
    }

    /// Torus coordinates `t1..tb`.
    pub fn torus_names(&self) -> Result<Vec<String>> {
        Ok((1..=self.betti1()?).map(|i| format!("t{i}")).collect())
    }
}

fn valid_name(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|f| f.is_ascii_alphabetic()) && c.all(|x| x.is_ascii_alphanumeric() || x == '_')
}

struct WordParser<'a> {
    s: &'a [u8],
    pos: usize,
    base: usize,
    gens: &'a [String],
}

impl WordParser<'_> {
    fn err(&self, msg: &str) -> CoreError {
        ParseError { pos: self.base + self.pos, msg: msg.to_string() }.into()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut w = Word::empty();
        loop {
            self.skip_ws();
            match self.s.get(self.pos) {
                None | Some(b',') | Some(b']') | Some(b')') => return Ok(w),
                _ => {
                    let f = self.factor()?;
                    w = w.concat(&f);
                }
            }
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        self.skip_ws();
        if self.s.get(self.pos) == Some(&b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            if self.s.get(self.pos) == Some(&b'-') {
                self.pos += 1;
            }
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
            let k: i64 = txt.parse().map_err(|_| {
                self.pos = start;
                self.err("expected an integer exponent")
            })?;
            return Ok(atom.pow(k));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Word> {
        self.skip_ws();
        match self.s.get(self.pos) {
            Some(b'[') => {
                self.pos += 1;
                let u = self.word()?;
                if self.s.get(self.pos) != Some(&b',') {
                    return Err(self.err("expected ',' in commutator"));
                }
                self.pos += 1;
                let v = self.word()?;
                if self.s.get(self.pos) != Some(&b']') {
                    return Err(self.err("expected ']'"));
                }
                self.pos += 1;
                Ok(u.concat(&v).concat(&u.inverse()).concat(&v.inverse()))
            }
            Some(b'(') => {
                self.pos += 1;
                let u = self.word()?;
                if self.s.get(self.pos) != Some(&b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(u)
            }
            Some(b'1') if !self.s.get(self.pos + 1).is_some_and(|c| c.is_ascii_alphanumeric()) => {
                self.pos += 1;
                Ok(Word::empty())
            }
            Some(_) => {
                // longest generator name at this position
                let rest = &self.s[self.pos..];
                let best = self
                    .gens
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| rest.starts_with(g.as_bytes()))
                    .max_by_key(|(_, g)| g.len());
                match best {
                    Some((i, g)) => {
                        self.pos += g.len();
                        Ok(Word(vec![(i, 1)]))
                    }
                    None => Err(self.err("unknown generator")),
                }
            }
            None => Err(self.err("unexpected end of word")),
        }
    }
}

/// Alexander matrix: entry `(i, j)` is the abelianized `∂rᵢ/∂xⱼ`.
pub fn alexander_matrix(p: &GroupPresentation) -> Result<Vec<Vec<LaurentPoly>>> {
    let phi = p.abelianization()?;
    Ok(p.relators
        .iter()
        .map(|r| (0..p.ngens()).map(|j| fox_derivative(r, j).abelianize(&phi)).collect())
        .collect())
}

/// Generators of `E₁`: minors of size `n − 1` of the Alexander matrix, as
/// Laurent polynomials.
pub fn v1_generators(p: &GroupPresentation) -> Result<Vec<LaurentPoly>> {
    Ok(v1_ideal(p)?.gens().iter().map(LaurentPoly::from_poly).collect())
}

/// `E₁` in `ℚ[t₁..t_b]`: rows are cleared of negative exponents (units in the
/// Laurent ring) before taking minors of size `n − 1`.
pub fn v1_ideal(p: &GroupPresentation) -> Result<Ideal> {
    let names = p.torus_names()?;
    let b = names.len();
    let n = p.ngens();
    let a = alexander_matrix(p)?;
    if n <= 1 {
        return Ok(Ideal::unit(names));
    }
    if a.len() < n - 1 {
        return Ok(Ideal::zero(names));
    }
    let rows: Vec<Vec<MultiPoly>> = a
        .iter()
        .map(|row| {
            let mut shift = vec![0i32; b];
            for e in row {
                for (m, _) in e.terms() {
                    for k in 0..b {
                        shift[k] = shift[k].min(m[k]);
                    }
                }
            }
            let neg: Vec<i32> = shift.iter().map(|v| -v).collect();
            row.iter().map(|e| e.shift(&neg).to_poly().0).collect()
        })
        .collect();
    let m = PolyMatrix::from_rows_with_cols(b, rows, n);
    Ok(determinantal_ideal(&m, n - 1, &names)?)
}

/// Linearized Alexander matrix `Σₖ ε(∂ₖ∂ⱼrᵢ) zₖ` over `ℚ[z₁..zₙ]`.
pub fn linearized_alexander_matrix(p: &GroupPresentation) -> Result<PolyMatrix> {
    let n = p.ngens();
    for (i, r) in p.relators.iter().enumerate() {
        if r.exponent_sums(n).iter().any(|&e| e != 0) {
            return Err(CoreError::Input(format!(
                "relator {} '{}' is not a product of commutators (nonzero exponent sum)",
                i + 1,
                p.sources[i]
            )));
        }
    }
    let rows = p
        .relators
        .iter()
        .map(|r| {
            (0..n)
                .map(|j| {
                    let dj = fox_derivative(r, j);
                    let mut e = MultiPoly::zero(n);
                    for k in 0..n {
                        let c = dj.fox(k).augmentation();
                        if c != 0 {
                            e = &e + &MultiPoly::var(n, k).scale(&Rational::from_int(c));
                        }
                    }
                    e
                })
                .collect()
        })
        .collect();
    Ok(PolyMatrix::from_rows_with_cols(n, rows, n))
}

pub fn linear_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

/// Ideal of `(n−1)`-minors of the linearized Alexander matrix; its variety is
/// the degree-1 resonance variety.
pub fn linearized_r1_ideal(p: &GroupPresentation) -> Result<Ideal> {
    let n = p.ngens();
    let names = linear_names(n);
    let m = linearized_alexander_matrix(p)?;
    if n <= 1 {
        return Ok(Ideal::unit(names));
    }
    if m.nrows() < n - 1 {
        return Ok(Ideal::zero(names));
    }
    Ok(determinantal_ideal(&m, n - 1, &names)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn parse_words() {
        let p = GroupPresentation::parse("gens: x1 x2; rel: [x1, x2]; rel: x1^-2 (x2 x1)^2").unwrap();
        assert_eq!(p.relators()[0], Word(vec![(0, 1), (1, 1), (0, -1), (1, -1)]));
        assert_eq!(p.relators()[1], Word(vec![(0, -1), (0, -1), (1, 1), (0, 1), (1, 1), (0, 1)]));
        let e = GroupPresentation::parse("gens: x; rel: x y").unwrap_err();
        assert!(matches!(e, CoreError::Parse(ref pe) if pe.pos == 16), "{e:?}");
    }

    #[test]
    fn fox_of_commutator() {
        let p = GroupPresentation::parse("gens: x1 x2; rel: [x1, x2]").unwrap();
        let d = fox_derivative(&p.relators()[0], 0);
        let g = names(&["x1", "x2"]);
        assert_eq!(d.display(&g), "1 + -x1 x2 x1^-1");
        let phi = p.abelianization().unwrap();
        let t = names(&["t1", "t2"]);
        assert_eq!(d.abelianize(&phi), LaurentPoly::parse("1 - t2", &t).unwrap());
    }

    #[test]
    fn torsion_rejected() {
        let p = GroupPresentation::parse("gens: x; rel: x^2").unwrap();
        assert!(matches!(alexander_matrix(&p), Err(CoreError::Unsupported(_))));
    }

    #[test]
    fn non_commutator_named() {
        let p = GroupPresentation::parse("gens: x y; rel: x y x y^-1 x^-1 y^-1").unwrap();
        let e = linearized_alexander_matrix(&p).unwrap_err();
        assert!(e.to_string().contains("x y x y^-1 x^-1 y^-1"), "{e}");
    }

    #[test]
    fn free_group_has_zero_ideal() {
        let p = GroupPresentation::parse("gens: x1 x2").unwrap();
        assert!(v1_ideal(&p).unwrap().is_zero_ideal());
    }
}
