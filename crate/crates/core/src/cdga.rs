//! Finite-dimensional connected CDGAs over ℚ, given by a graded basis,
//! structure constants and differential matrices.

use std::collections::{BTreeMap, HashMap};

use jumploci_symbolic::{CochainComplex, MultiPoly, PolyComplex, PolyMatrix, QMatrix, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// JSON form of a CDGA. Products are listed for one order of each basis
/// pair; the other order follows from graded commutativity.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct CdgaSpec {
    pub degrees: Vec<Vec<String>>,
    #[serde(default)]
    pub products: Vec<(String, String, Vec<String>)>,
    #[serde(default)]
    pub differential: Vec<(String, Vec<String>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, i64>>,
    /// Names for the coordinates of H¹ (x1, x2, … when absent).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
}

impl CdgaSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

impl Violation {
    fn new(kind: &str, detail: impl Into<String>) -> Self {
        Violation { kind: kind.to_string(), detail: detail.into() }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

/// Parses `"2*bc"`, `"-ab"`, `"1/2*c"` or a bare basis name.
pub fn parse_term(s: &str) -> std::result::Result<(Rational, String), String> {
    let t = s.trim();
    let (neg, rest) = match t.strip_prefix('-') {
        Some(r) => (true, r.trim_start()),
        None => (false, t.strip_prefix('+').unwrap_or(t).trim_start()),
    };
    let (coef, name) = match rest.split_once('*') {
        Some((c, n)) if c.trim().chars().next().is_some_and(|ch| ch.is_ascii_digit()) => {
            let c: Rational = c.trim().parse().map_err(|_| format!("bad coefficient in term '{s}'"))?;
            (c, n.trim().to_string())
        }
        _ => (Rational::one(), rest.to_string()),
    };
    if name.is_empty() {
        return Err(format!("empty basis name in term '{s}'"));
    }
    Ok((if neg { -coef } else { coef }, name))
}

fn format_term(c: &Rational, name: &str) -> String {
    if c.is_one() {
        name.to_string()
    } else if (-c.clone()).is_one() {
        format!("-{name}")
    } else {
        format!("{c}*{name}")
    }
}

type Sparse = Vec<(usize, Rational)>;

#[derive(Clone, Debug)]
pub struct FiniteCdga {
    names: Vec<Vec<String>>,
    offsets: Vec<usize>,
    deg_of: Vec<usize>,
    index: HashMap<String, usize>,
    /// Products of non-unit basis pairs (global indices); absent = 0.
    mult: HashMap<(usize, usize), Sparse>,
    /// `diff[i]: A^i -> A^{i+1}`, a `dim(i+1) x dim(i)` matrix.
    diff: Vec<QMatrix>,
    weights: Option<Vec<Option<i64>>>,
    variables: Option<Vec<String>>,
}

impl FiniteCdga {
    /// Builds and validates; any violation is an error.
    pub fn from_spec(spec: &CdgaSpec) -> Result<Self> {
        let (a, structural) = Self::build(spec);
        if !structural.is_empty() {
            return Err(CoreError::InvalidCdga(structural));
        }
        let a = a.expect("built when no structural violations");
        let v = a.validate();
        if !v.is_empty() {
            return Err(CoreError::InvalidCdga(v));
        }
        Ok(a)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_spec(&CdgaSpec::from_json(s)?)
    }

    /// All violations of a spec: structural ones (names, degrees) and, if
    /// the structure is sound, the algebraic identities.
    pub fn validate_spec(spec: &CdgaSpec) -> Vec<Violation> {
        let (a, structural) = Self::build(spec);
        if !structural.is_empty() {
            return structural;
        }
        let mut v = a.expect("built").validate();
        if spec.weights.is_some() {
            v.extend(Self::build(spec).0.expect("built").validate_weights().unwrap_or_default());
        }
        v
    }

    fn build(spec: &CdgaSpec) -> (Option<Self>, Vec<Violation>) {
        let mut viol = Vec::new();
        let names = spec.degrees.clone();
        if names.is_empty() || names[0].len() != 1 {
            viol.push(Violation::new("connected", "degree 0 must be spanned by the unit alone"));
            return (None, viol);
        }
        let mut offsets = Vec::with_capacity(names.len() + 1);
        let mut deg_of = Vec::new();
        let mut index = HashMap::new();
        let mut total = 0;
        for (d, layer) in names.iter().enumerate() {
            offsets.push(total);
            for n in layer {
                if index.insert(n.clone(), total).is_some() {
                    viol.push(Violation::new("names", format!("duplicate basis name '{n}'")));
                }
                deg_of.push(d);
                total += 1;
            }
        }
        offsets.push(total);
        let top = names.len() - 1;
        let parse = |terms: &[String], want: Option<usize>, ctx: &str, viol: &mut Vec<Violation>| -> Sparse {
            let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
            for t in terms {
                match parse_term(t) {
                    Err(e) => viol.push(Violation::new("syntax", format!("{ctx}: {e}"))),
                    Ok((c, n)) => match index.get(&n) {
                        None => viol.push(Violation::new("unknown-name", format!("{ctx}: unknown basis element '{n}'"))),
                        Some(&g) => {
                            if let Some(w) = want {
                                if deg_of[g] != w {
                                    viol.push(Violation::new(
                                        "degree",
                                        format!("{ctx}: term '{n}' has degree {}, expected {w}", deg_of[g]),
                                    ));
                                    continue;
                                }
                            }
                            let e = out.entry(g).or_insert_with(Rational::zero);
                            *e = &*e + &c;
                        }
                    },
                }
            }
            out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        };

        let mut given: HashMap<(usize, usize), Sparse> = HashMap::new();
        for (a, b, terms) in &spec.products {
            let (Some(&ga), Some(&gb)) = (index.get(a), index.get(b)) else {
                viol.push(Violation::new("unknown-name", format!("product {a}*{b}: unknown factor")));
                continue;
            };
            let d = deg_of[ga] + deg_of[gb];
            let ctx = format!("product {a}*{b}");
            if d > top {
                if !terms.is_empty() {
                    viol.push(Violation::new("degree", format!("{ctx}: lands above the top degree {top}")));
                }
                continue;
            }
            let v = parse(terms, Some(d), &ctx, &mut viol);
            if deg_of[ga] == 0 || deg_of[gb] == 0 {
                let other = if deg_of[ga] == 0 { gb } else { ga };
                if v != vec![(other, Rational::one())] {
                    viol.push(Violation::new("unit", format!("{ctx}: the unit must act as the identity")));
                }
                continue;
            }
            if given.insert((ga, gb), v).is_some() {
                viol.push(Violation::new("products", format!("{ctx}: listed twice")));
            }
        }
        let mut mult = given.clone();
        for (&(a, b), v) in &given {
            if !given.contains_key(&(b, a)) && a != b {
                let sign = if (deg_of[a] * deg_of[b]) % 2 == 1 { -Rational::one() } else { Rational::one() };
                mult.insert((b, a), v.iter().map(|(g, c)| (*g, c * &sign)).collect());
            }
        }
        mult.retain(|_, v| !v.is_empty());

        let dims: Vec<usize> = names.iter().map(|l| l.len()).collect();
        let mut diff: Vec<QMatrix> = (0..=top)
            .map(|i| QMatrix::zeros(if i < top { dims[i + 1] } else { 0 }, dims[i]))
            .collect();
        for (n, terms) in &spec.differential {
            let Some(&g) = index.get(n) else {
                viol.push(Violation::new("unknown-name", format!("differential of unknown element '{n}'")));
                continue;
            };
            let i = deg_of[g];
            let ctx = format!("d({n})");
            let before = viol.len();
            let v = parse(terms, None, &ctx, &mut viol);
            if viol.len() > before {
                continue;
            }
            for (h, c) in v {
                if deg_of[h] != i + 1 {
                    viol.push(Violation::new(
                        "degree",
                        format!("differential not degree +1: {ctx} has term '{}' in degree {}", all_name(&names, &offsets, h), deg_of[h]),
                    ));
                    continue;
                }
                diff[i].set(h - offsets[i + 1], g - offsets[i], c);
            }
        }
        let weights = spec.weights.as_ref().map(|w| {
            (0..total)
                .map(|g| w.get(&all_name(&names, &offsets, g)).copied())
                .collect::<Vec<_>>()
        });
        if let Some(w) = &spec.weights {
            for k in w.keys() {
                if !index.contains_key(k) {
                    viol.push(Violation::new("unknown-name", format!("weight for unknown element '{k}'")));
                }
            }
        }
        let a = FiniteCdga { names, offsets, deg_of, index, mult, diff, weights, variables: spec.variables.clone() };
        (Some(a), viol)
    }

    /// Assembles an algebra from degree-wise names, structure constants on
    /// all non-unit basis pairs (global indices) and differentials.
    pub fn from_parts(
        names: Vec<Vec<String>>,
        mult: HashMap<(usize, usize), Vec<(usize, Rational)>>,
        diff: Vec<QMatrix>,
        weights: Option<Vec<i64>>,
        variables: Option<Vec<String>>,
    ) -> Self {
        let mut offsets = Vec::new();
        let mut deg_of = Vec::new();
        let mut index = HashMap::new();
        let mut total = 0;
        for (d, layer) in names.iter().enumerate() {
            offsets.push(total);
            for n in layer {
                index.insert(n.clone(), total);
                deg_of.push(d);
                total += 1;
            }
        }
        offsets.push(total);
        let mut mult = mult;
        mult.retain(|_, v| {
            v.retain(|(_, c)| !c.is_zero());
            !v.is_empty()
        });
        FiniteCdga {
            names,
            offsets,
            deg_of,
            index,
            mult,
            diff,
            weights: weights.map(|w| w.into_iter().map(Some).collect()),
            variables,
        }
    }

    pub fn top_degree(&self) -> usize {
        self.names.len() - 1
    }

    pub fn dim(&self, i: usize) -> usize {
        self.names.get(i).map_or(0, |l| l.len())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.names.iter().map(|l| l.len()).collect()
    }

    pub fn names(&self, i: usize) -> &[String] {
        self.names.get(i).map_or(&[], |l| l.as_slice())
    }

    pub fn global(&self, i: usize, k: usize) -> usize {
        self.offsets[i] + k
    }

    pub fn lookup(&self, name: &str) -> Option<(usize, usize)> {
        self.index.get(name).map(|&g| (self.deg_of[g], g - self.offsets[self.deg_of[g]]))
    }

    pub fn weights(&self) -> Option<Vec<Option<i64>>> {
        self.weights.clone()
    }

    pub fn with_variables(mut self, variables: Vec<String>) -> Self {
        self.variables = Some(variables);
        self
    }

    pub fn variables(&self) -> Option<&[String]> {
        self.variables.as_deref()
    }

    /// `d^i: A^i -> A^{i+1}` as a `dim(i+1) x dim(i)` matrix.
    pub fn differential(&self, i: usize) -> QMatrix {
        self.diff.get(i).cloned().unwrap_or_else(|| QMatrix::zeros(self.dim(i + 1), self.dim(i)))
    }

    pub fn has_zero_differential(&self) -> bool {
        self.diff.iter().all(|d| d.is_zero())
    }

    /// Product of basis elements `(i, a)` and `(j, b)` as a vector in degree `i + j`.
    pub fn mul_basis(&self, i: usize, a: usize, j: usize, b: usize) -> Vec<Rational> {
        let d = i + j;
        let mut out = vec![Rational::zero(); self.dim(d)];
        if d > self.top_degree() {
            return out;
        }
        if i == 0 {
            out[b] = Rational::one();
            return out;
        }
        if j == 0 {
            out[a] = Rational::one();
            return out;
        }
        if let Some(v) = self.mult.get(&(self.global(i, a), self.global(j, b))) {
            for (g, c) in v {
                out[g - self.offsets[d]] = c.clone();
            }
        }
        out
    }

    pub fn mul(&self, i: usize, u: &[Rational], j: usize, v: &[Rational]) -> Vec<Rational> {
        let d = i + j;
        let mut out = vec![Rational::zero(); self.dim(d)];
        if d > self.top_degree() {
            return out;
        }
        for (a, x) in u.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in v.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.mul_basis(i, a, j, b).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&xy * c);
                    }
                }
            }
        }
        out
    }

    /// Left multiplication by a degree-`p` element, as a matrix `A^i -> A^{i+p}`.
    pub fn left_mul_matrix(&self, p: usize, x: &[Rational], i: usize) -> QMatrix {
        let rows = self.dim(i + p);
        let cols = self.dim(i);
        let mut m = QMatrix::zeros(rows, cols);
        if i + p > self.top_degree() {
            return m;
        }
        for b in 0..cols {
            let mut e = vec![Rational::zero(); cols];
            e[b] = Rational::one();
            let col = self.mul(p, x, i, &e);
            for (r, c) in col.into_iter().enumerate() {
                m.set(r, b, c);
            }
        }
        m
    }

    pub fn d(&self, i: usize, u: &[Rational]) -> Vec<Rational> {
        if i >= self.top_degree() {
            return Vec::new();
        }
        self.diff[i].mul_vec(u)
    }

    fn unit_vec(&self, i: usize, k: usize) -> Vec<Rational> {
        let mut e = vec![Rational::zero(); self.dim(i)];
        e[k] = Rational::one();
        e
    }

    fn name(&self, i: usize, k: usize) -> &str {
        &self.names[i][k]
    }

    /// Checks graded commutativity, associativity, the Leibniz rule and d² = 0.
    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let top = self.top_degree();
        if self.dim(0) != 1 {
            v.push(Violation::new("connected", "degree 0 must be one-dimensional"));
            return v;
        }
        if !self.differential(0).is_zero() {
            v.push(Violation::new("unit", "d(1) must vanish"));
        }
        for i in 1..=top {
            for j in i..=top {
                if i + j > top {
                    continue;
                }
                for a in 0..self.dim(i) {
                    for b in 0..self.dim(j) {
                        if i == j && b < a {
                            continue;
                        }
                        let uv = self.mul_basis(i, a, j, b);
                        let vu = self.mul_basis(j, b, i, a);
                        let sign = if (i * j) % 2 == 1 { -Rational::one() } else { Rational::one() };
                        if uv.iter().zip(&vu).any(|(x, y)| x != &(y * &sign)) {
                            v.push(Violation::new(
                                "commutativity",
                                format!("{}*{} != (-1)^{} {}*{}", self.name(i, a), self.name(j, b), i * j, self.name(j, b), self.name(i, a)),
                            ));
                        }
                    }
                }
            }
        }
        for i in 1..=top {
            for j in 1..=top {
                for k in 1..=top {
                    if i + j + k > top {
                        continue;
                    }
                    for a in 0..self.dim(i) {
                        for b in 0..self.dim(j) {
                            let ab = self.mul_basis(i, a, j, b);
                            for c in 0..self.dim(k) {
                                let left = self.mul(i + j, &ab, k, &self.unit_vec(k, c));
                                let bc = self.mul_basis(j, b, k, c);
                                let right = self.mul(i, &self.unit_vec(i, a), j + k, &bc);
                                if left != right {
                                    v.push(Violation::new(
                                        "associativity",
                                        format!("({}*{})*{} != {}*({}*{})", self.name(i, a), self.name(j, b), self.name(k, c), self.name(i, a), self.name(j, b), self.name(k, c)),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        for i in 0..top {
            let dd = self.differential(i + 1).mul(&self.differential(i)).expect("shapes");
            if i + 2 <= top && !dd.is_zero() {
                for c in 0..self.dim(i) {
                    if dd.col(c).iter().any(|x| !x.is_zero()) {
                        v.push(Violation::new("d-squared", format!("d(d({})) != 0", self.name(i, c))));
                    }
                }
            }
        }
        for i in 1..=top {
            for j in 1..=top {
                if i + j + 1 > top {
                    continue;
                }
                for a in 0..self.dim(i) {
                    for b in 0..self.dim(j) {
                        let ua = self.unit_vec(i, a);
                        let vb = self.unit_vec(j, b);
                        let lhs = self.d(i + j, &self.mul(i, &ua, j, &vb));
                        let t1 = self.mul(i + 1, &self.d(i, &ua), j, &vb);
                        let t2 = self.mul(i, &ua, j + 1, &self.d(j, &vb));
                        let sign = if i % 2 == 1 { -Rational::one() } else { Rational::one() };
                        let rhs: Vec<Rational> = t1.iter().zip(&t2).map(|(x, y)| x + &(y * &sign)).collect();
                        if lhs != rhs {
                            v.push(Violation::new(
                                "leibniz",
                                format!("d({}*{}) != d({})*{} + (-1)^{} {}*d({})", self.name(i, a), self.name(j, b), self.name(i, a), self.name(j, b), i, self.name(i, a), self.name(j, b)),
                            ));
                        }
                    }
                }
            }
        }
        v
    }

    /// Positive weights in degree 1, additive under products, preserved by d.
    pub fn validate_weights(&self) -> Result<Vec<Violation>> {
        let Some(w) = &self.weights else {
            return Err(CoreError::Input("no weight decoration present".into()));
        };
        let mut v = Vec::new();
        let top = self.top_degree();
        for (g, wt) in w.iter().enumerate() {
            let d = self.deg_of[g];
            let n = self.name(d, g - self.offsets[d]);
            match wt {
                None => v.push(Violation::new("weight", format!("missing weight for '{n}'"))),
                Some(x) if d == 1 && *x <= 0 => v.push(Violation::new("weight", format!("degree-1 element '{n}' has non-positive weight {x}"))),
                Some(x) if d == 0 && *x != 0 => v.push(Violation::new("weight", format!("the unit has nonzero weight {x}"))),
                _ => {}
            }
        }
        if !v.is_empty() {
            return Ok(v);
        }
        let wt = |i: usize, k: usize| w[self.global(i, k)].expect("checked");
        for i in 1..=top {
            for j in 1..=top {
                if i + j > top {
                    continue;
                }
                for a in 0..self.dim(i) {
                    for b in 0..self.dim(j) {
                        for (k, c) in self.mul_basis(i, a, j, b).iter().enumerate() {
                            if !c.is_zero() && wt(i + j, k) != wt(i, a) + wt(j, b) {
                                v.push(Violation::new(
                                    "weight",
                                    format!("{}*{} has a term '{}' of weight {} != {}", self.name(i, a), self.name(j, b), self.name(i + j, k), wt(i + j, k), wt(i, a) + wt(j, b)),
                                ));
                            }
                        }
                    }
                }
            }
        }
        for i in 0..top {
            let d = &self.diff[i];
            for c in 0..self.dim(i) {
                for r in 0..self.dim(i + 1) {
                    if !d.get(r, c).is_zero() && wt(i + 1, r) != wt(i, c) {
                        v.push(Violation::new(
                            "weight",
                            format!("d({}) has a term '{}' of different weight", self.name(i, c), self.name(i + 1, r)),
                        ));
                    }
                }
            }
        }
        Ok(v)
    }

    /// Dimension and representatives of `H^i`: kernel vectors (in row-reduced
    /// order) that are independent modulo the image of `d^{i-1}`.
    pub fn cohomology(&self, i: usize) -> Cohomology {
        if i > self.top_degree() {
            return Cohomology { degree: i, reps: Vec::new(), boundaries: Vec::new() };
        }
        let z = self.differential(i).kernel();
        let b: Vec<Vec<Rational>> = if i == 0 {
            Vec::new()
        } else {
            let d = self.differential(i - 1);
            let (r, piv) = d.transpose().rref();
            (0..piv.len()).map(|k| r.row(k).to_vec()).collect()
        };
        let mut chosen: Vec<Vec<Rational>> = Vec::new();
        let mut span = b.clone();
        let mut rank = span.len();
        for v in z {
            span.push(v.clone());
            let r = QMatrix::from_rows_with_cols(span.clone(), self.dim(i)).rank();
            if r > rank {
                rank = r;
                chosen.push(v);
            } else {
                span.pop();
            }
        }
        Cohomology { degree: i, reps: chosen, boundaries: b }
    }

    pub fn betti(&self, i: usize) -> usize {
        self.cohomology(i).reps.len()
    }

    /// Coordinate names for H¹.
    pub fn h1_names(&self) -> Vec<String> {
        let n = self.betti(1);
        match &self.variables {
            Some(v) if v.len() == n => v.clone(),
            _ => (1..=n).map(|i| format!("x{i}")).collect(),
        }
    }

    /// The Aomoto complex `δ_a(u) = a·u + du` for a degree-1 cocycle `a`.
    pub fn aomoto(&self, a: &[Rational]) -> Result<QComplex> {
        if a.len() != self.dim(1) {
            return Err(CoreError::DimensionMismatch(format!("element has {} coordinates, A^1 has dimension {}", a.len(), self.dim(1))));
        }
        if self.d(1, a).iter().any(|x| !x.is_zero()) {
            return Err(CoreError::NotACocycle);
        }
        let top = self.top_degree();
        let maps = (0..top)
            .map(|i| {
                let l = self.left_mul_matrix(1, a, i);
                let d = self.differential(i);
                let rows: Vec<Vec<Rational>> = (0..l.nrows())
                    .map(|r| (0..l.ncols()).map(|c| l.get(r, c) + d.get(r, c)).collect())
                    .collect();
                QMatrix::from_rows_with_cols(rows, self.dim(i))
            })
            .collect();
        Ok(QComplex { ranks: self.dims(), maps })
    }

    /// Aomoto complex at the class `Σ aⱼ eⱼ` of H¹ coordinates `a`.
    pub fn aomoto_at(&self, coords: &[Rational]) -> Result<QComplex> {
        let reps = self.cohomology(1).reps;
        if coords.len() != reps.len() {
            return Err(CoreError::DimensionMismatch(format!("point has {} coordinates, H^1 has dimension {}", coords.len(), reps.len())));
        }
        let mut a = vec![Rational::zero(); self.dim(1)];
        for (c, e) in coords.iter().zip(&reps) {
            for (k, x) in e.iter().enumerate() {
                a[k] = &a[k] + &(c * x);
            }
        }
        self.aomoto(&a)
    }

    /// The universal complex `A ⊗ S`, `S = ℚ[x₁..xₙ]`, `n = dim H¹`, with
    /// `δ^i(u) = Σ xⱼ eⱼ·u + du`.
    pub fn universal_complex(&self) -> UniversalComplex {
        let reps = self.cohomology(1).reps;
        let n = reps.len();
        let top = self.top_degree();
        let mults: Vec<Vec<QMatrix>> = reps.iter().map(|e| (0..top).map(|i| self.left_mul_matrix(1, e, i)).collect()).collect();
        let maps = (0..top)
            .map(|i| {
                let d = self.differential(i);
                let mut m = PolyMatrix::zeros(n, self.dim(i + 1), self.dim(i));
                for r in 0..self.dim(i + 1) {
                    for c in 0..self.dim(i) {
                        let mut p = MultiPoly::constant(n, d.get(r, c).clone());
                        for (j, lm) in mults.iter().enumerate() {
                            let coef = lm[i].get(r, c);
                            if !coef.is_zero() {
                                p = &p + &MultiPoly::var(n, j).scale(coef);
                            }
                        }
                        m.set(r, c, p);
                    }
                }
                m
            })
            .collect();
        UniversalComplex { names: self.h1_names(), ranks: self.dims(), coboundaries: maps }
    }

    /// `(H•(A), 0)` with products induced on the chosen representatives.
    pub fn cohomology_algebra(&self) -> FiniteCdga {
        let top = self.top_degree();
        let coh: Vec<Cohomology> = (0..=top).map(|i| self.cohomology(i)).collect();
        let mut last = top;
        while last > 0 && coh[last].reps.is_empty() {
            last -= 1;
        }
        let names: Vec<Vec<String>> = (0..=last)
            .map(|i| {
                (0..coh[i].reps.len())
                    .map(|k| if i == 0 { self.names[0][0].clone() } else { coh[i].rep_name(self, k) })
                    .collect()
            })
            .collect();
        let mut offsets = vec![0];
        for l in &names {
            offsets.push(offsets.last().unwrap() + l.len());
        }
        let mut mult = HashMap::new();
        for i in 1..=last {
            for j in 1..=last {
                if i + j > last {
                    continue;
                }
                for (a, u) in coh[i].reps.iter().enumerate() {
                    for (b, v) in coh[j].reps.iter().enumerate() {
                        let p = self.mul(i, u, j, v);
                        let c = coh[i + j].coordinates(&p, self.dim(i + j));
                        let terms: Vec<(usize, Rational)> =
                            c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (offsets[i + j] + k, x)).collect();
                        mult.insert((offsets[i] + a, offsets[j] + b), terms);
                    }
                }
            }
        }
        let dims: Vec<usize> = names.iter().map(|l| l.len()).collect();
        let diff = (0..=last).map(|i| QMatrix::zeros(if i < last { dims[i + 1] } else { 0 }, dims[i])).collect();
        let weights = self.weights.as_ref().and_then(|w| {
            // weight of a class: common weight of its representative's terms
            let mut out = Vec::new();
            for (i, c) in coh.iter().enumerate().take(last + 1) {
                for r in &c.reps {
                    let ws: Vec<Option<i64>> =
                        r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, _)| w[self.global(i, k)]).collect();
                    let first = ws.first().copied().flatten()?;
                    if ws.iter().any(|x| *x != Some(first)) {
                        return None;
                    }
                    out.push(first);
                }
            }
            Some(out)
        });
        FiniteCdga::from_parts(names, mult, diff, weights, self.variables.clone())
    }

    /// Graded tensor product with Koszul signs.
    pub fn tensor(&self, other: &FiniteCdga) -> FiniteCdga {
        let top = self.top_degree() + other.top_degree();
        // degree k basis: pairs (i, a, j, b), i descending
        let mut basis: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); top + 1];
        for (k, layer) in basis.iter_mut().enumerate() {
            for i in (0..=k.min(self.top_degree())).rev() {
                let j = k - i;
                if j > other.top_degree() {
                    continue;
                }
                for a in 0..self.dim(i) {
                    for b in 0..other.dim(j) {
                        layer.push((i, a, j, b));
                    }
                }
            }
        }
        let pos: HashMap<(usize, usize, usize, usize), usize> =
            basis.iter().flat_map(|l| l.iter().enumerate().map(|(p, &t)| (t, p))).collect();
        let names: Vec<Vec<String>> = basis
            .iter()
            .map(|l| {
                l.iter()
                    .map(|&(i, a, j, b)| match (i, j) {
                        (0, 0) => "1".to_string(),
                        (0, _) => other.name(j, b).to_string(),
                        (_, 0) => self.name(i, a).to_string(),
                        _ => format!("{}⊗{}", self.name(i, a), other.name(j, b)),
                    })
                    .collect()
            })
            .collect();
        let mut offsets = vec![0];
        for l in &names {
            offsets.push(offsets.last().unwrap() + l.len());
        }
        let mut mult = HashMap::new();
        for k1 in 1..=top {
            for k2 in 1..=top {
                if k1 + k2 > top {
                    continue;
                }
                for (p1, &(i1, a1, j1, b1)) in basis[k1].iter().enumerate() {
                    for (p2, &(i2, a2, j2, b2)) in basis[k2].iter().enumerate() {
                        let uu = self.mul_basis(i1, a1, i2, a2);
                        let vv = other.mul_basis(j1, b1, j2, b2);
                        let sign = if (j1 * i2) % 2 == 1 { -Rational::one() } else { Rational::one() };
                        let mut terms = Vec::new();
                        for (x, cx) in uu.iter().enumerate() {
                            if cx.is_zero() {
                                continue;
                            }
                            for (y, cy) in vv.iter().enumerate() {
                                if cy.is_zero() {
                                    continue;
                                }
                                let p = pos[&(i1 + i2, x, j1 + j2, y)];
                                terms.push((offsets[k1 + k2] + p, &(cx * cy) * &sign));
                            }
                        }
                        mult.insert((offsets[k1] + p1, offsets[k2] + p2), terms);
                    }
                }
            }
        }
        let diff = (0..=top)
            .map(|k| {
                let rows = if k < top { basis[k + 1].len() } else { 0 };
                let mut m = QMatrix::zeros(rows, basis[k].len());
                if k < top {
                    for (p, &(i, a, j, b)) in basis[k].iter().enumerate() {
                        let du = self.d(i, &self.unit_vec(i, a));
                        for (x, c) in du.iter().enumerate() {
                            if !c.is_zero() {
                                m.set(pos[&(i + 1, x, j, b)], p, c.clone());
                            }
                        }
                        let dv = other.d(j, &other.unit_vec(j, b));
                        let sign = if i % 2 == 1 { -Rational::one() } else { Rational::one() };
                        for (y, c) in dv.iter().enumerate() {
                            if !c.is_zero() {
                                let r = pos[&(i, a, j + 1, y)];
                                let v = m.get(r, p) + &(c * &sign);
                                m.set(r, p, v);
                            }
                        }
                    }
                }
                m
            })
            .collect();
        let weights = match (&self.weights, &other.weights) {
            (Some(w1), Some(w2)) => basis
                .iter()
                .flatten()
                .map(|&(i, a, j, b)| Some(w1[self.global(i, a)]? + w2[other.global(j, b)]?))
                .collect::<Option<Vec<i64>>>(),
            _ => None,
        };
        let variables = match (&self.variables, &other.variables) {
            (Some(v1), Some(v2)) if v1.iter().all(|x| !v2.contains(x)) => Some(v1.iter().chain(v2).cloned().collect()),
            _ => None,
        };
        FiniteCdga::from_parts(names, mult, diff, weights, variables)
    }

    /// JSON form (products listed once per unordered pair).
    pub fn to_spec(&self) -> CdgaSpec {
        let top = self.top_degree();
        let all = |g: usize| all_name(&self.names, &self.offsets, g);
        let mut keys: Vec<&(usize, usize)> = self.mult.keys().filter(|(a, b)| a <= b).collect();
        keys.sort();
        let products = keys
            .into_iter()
            .map(|&(a, b)| (all(a), all(b), self.mult[&(a, b)].iter().map(|(g, c)| format_term(c, &all(*g))).collect()))
            .collect();
        let mut differential = Vec::new();
        for i in 0..top {
            for c in 0..self.dim(i) {
                let col = self.differential(i).col(c);
                let terms: Vec<String> = col
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(r, x)| format_term(x, self.name(i + 1, r)))
                    .collect();
                if !terms.is_empty() {
                    differential.push((self.name(i, c).to_string(), terms));
                }
            }
        }
        let weights = self.weights.as_ref().and_then(|w| {
            w.iter().enumerate().map(|(g, x)| x.map(|v| (all(g), v))).collect::<Option<BTreeMap<_, _>>>()
        });
        CdgaSpec { degrees: self.names.clone(), products, differential, weights, variables: self.variables.clone() }
    }
}

fn all_name(names: &[Vec<String>], offsets: &[usize], g: usize) -> String {
    let d = offsets.iter().rposition(|&o| o <= g).expect("index in range");
    let d = d.min(names.len() - 1);
    let mut d = d;
    while offsets[d] > g || g >= offsets[d] + names[d].len() {
        d -= 1;
    }
    names[d][g - offsets[d]].clone()
}

#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: usize,
    /// Cocycle representatives of a basis of `H^i`.
    pub reps: Vec<Vec<Rational>>,
    /// Row-reduced basis of the coboundaries `B^i`.
    pub boundaries: Vec<Vec<Rational>>,
}

impl Cohomology {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of a cocycle with respect to `reps`.
    pub fn coordinates(&self, z: &[Rational], ambient: usize) -> Vec<Rational> {
        if self.reps.is_empty() {
            return Vec::new();
        }
        let cols: Vec<&Vec<Rational>> = self.reps.iter().chain(self.boundaries.iter()).collect();
        let rows: Vec<Vec<Rational>> = (0..ambient).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let m = QMatrix::from_rows_with_cols(rows, cols.len());
        let x = m.solve(z).expect("product of cocycles is a cocycle");
        x[..self.reps.len()].to_vec()
    }

    fn rep_name(&self, a: &FiniteCdga, k: usize) -> String {
        let r = &self.reps[k];
        let nz: Vec<usize> = (0..r.len()).filter(|&i| !r[i].is_zero()).collect();
        if nz.len() == 1 && r[nz[0]].is_one() {
            a.name(self.degree, nz[0]).to_string()
        } else {
            format!("h{}_{}", self.degree, k + 1)
        }
    }
}

/// A cochain complex of finite-dimensional ℚ-vector spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct QComplex {
    pub ranks: Vec<usize>,
    /// `maps[i]: C^i -> C^{i+1}`.
    pub maps: Vec<QMatrix>,
}

impl QComplex {
    pub fn rank_of(&self, i: usize) -> usize {
        self.maps.get(i).map_or(0, |m| m.rank())
    }

    pub fn cohomology_dim(&self, i: usize) -> usize {
        let r = self.ranks.get(i).copied().unwrap_or(0);
        let out = self.rank_of(i);
        let inc = if i == 0 { 0 } else { self.rank_of(i - 1) };
        r - out - inc
    }

    pub fn is_complex(&self) -> bool {
        self.maps.windows(2).all(|w| w[1].mul(&w[0]).map(|m| m.is_zero()).unwrap_or(false))
    }
}

/// `A ⊗ S` with its cochain differentials; the chain version has the
/// transposed matrices.
#[derive(Clone, Debug)]
pub struct UniversalComplex {
    pub names: Vec<String>,
    pub ranks: Vec<usize>,
    /// `δ^i: A^i ⊗ S -> A^{i+1} ⊗ S`, shape `dim(i+1) x dim(i)`.
    pub coboundaries: Vec<PolyMatrix>,
}

impl UniversalComplex {
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// `δ^i`, or a zero map when `i` is outside the complex.
    pub fn delta(&self, i: usize) -> PolyMatrix {
        self.coboundaries.get(i).cloned().unwrap_or_else(|| {
            PolyMatrix::zeros(self.nvars(), self.ranks.get(i + 1).copied().unwrap_or(0), self.ranks.get(i).copied().unwrap_or(0))
        })
    }

    /// `∂_i = (δ^{i-1})ᵀ`: rows indexed by the basis of `A_{i-1}`, columns by `A_i`.
    pub fn boundary(&self, i: usize) -> PolyMatrix {
        assert!(i >= 1);
        self.delta(i - 1).transpose()
    }

    pub fn cochain(&self) -> CochainComplex {
        PolyComplex::from_cochain(self.nvars(), self.ranks.clone(), self.coboundaries.clone()).expect("shapes are consistent")
    }

    pub fn chain(&self) -> PolyComplex {
        let b: Vec<PolyMatrix> = self.coboundaries.iter().map(|m| m.transpose()).collect();
        PolyComplex::from_boundaries(self.nvars(), self.ranks.clone(), b).expect("shapes are consistent")
    }

    /// Evaluates every entry at `point` (the Aomoto complex of that class).
    pub fn specialize(&self, point: &[Rational]) -> Result<QComplex> {
        if point.len() != self.nvars() {
            return Err(CoreError::DimensionMismatch(format!("point has {} coordinates, ring has {}", point.len(), self.nvars())));
        }
        Ok(QComplex { ranks: self.ranks.clone(), maps: self.coboundaries.iter().map(|m| m.eval(point)).collect() })
    }
}

/// Exterior algebra on `n` degree-one generators `e1..en`, zero differential.
pub fn exterior_algebra(n: usize) -> FiniteCdga {
    let gens: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
    let mut names: Vec<Vec<String>> = vec![Vec::new(); n + 1];
    let mut subsets: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n + 1];
    for mask in 0u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        subsets[s.len()].push(s);
    }
    for l in subsets.iter_mut() {
        l.sort();
    }
    for (k, l) in subsets.iter().enumerate() {
        for s in l {
            names[k].push(if k == 0 { "1".into() } else { s.iter().map(|&i| gens[i].clone()).collect::<Vec<_>>().join("") });
        }
    }
    let pos: HashMap<Vec<usize>, usize> = subsets.iter().flat_map(|l| l.iter().enumerate().map(|(p, s)| (s.clone(), p))).collect();
    let mut offsets = vec![0];
    for l in &names {
        offsets.push(offsets.last().unwrap() + l.len());
    }
    let mut mult = HashMap::new();
    for i in 1..=n {
        for j in 1..=n {
            if i + j > n {
                continue;
            }
            for (a, s) in subsets[i].iter().enumerate() {
                for (b, t) in subsets[j].iter().enumerate() {
                    if s.iter().any(|x| t.contains(x)) {
                        continue;
                    }
                    let mut w: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
                    let sign = permutation_sign(&mut w);
                    mult.insert((offsets[i] + a, offsets[j] + b), vec![(offsets[i + j] + pos[&w], Rational::from_int(sign))]);
                }
            }
        }
    }
    let dims: Vec<usize> = names.iter().map(|l| l.len()).collect();
    let diff = (0..=n).map(|i| QMatrix::zeros(if i < n { dims[i + 1] } else { 0 }, dims[i])).collect();
    let weights: Vec<i64> = (0..=n).flat_map(|k| std::iter::repeat(k as i64).take(dims[k])).collect();
    FiniteCdga::from_parts(names, mult, diff, Some(weights), None)
}

/// Sorts in place; returns the sign of the sorting permutation.
pub fn permutation_sign(w: &mut [usize]) -> i64 {
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    const LAMBDA: &str = r#"{
        "degrees": [["1"], ["a", "b"], ["ab"]],
        "products": [["a", "b", ["ab"]]],
        "differential": [["b", ["-ab"]]],
        "variables": ["x"]
    }"#;

    #[test]
    fn terms_parse() {
        assert_eq!(parse_term("2*bc").unwrap(), (q(2), "bc".into()));
        assert_eq!(parse_term("-ab").unwrap(), (q(-1), "ab".into()));
        assert_eq!(parse_term("1/2*c").unwrap(), (Rational::new(1, 2), "c".into()));
        assert!(parse_term("-").is_err());
    }

    #[test]
    fn lambda_cohomology() {
        let a = FiniteCdga::from_json(LAMBDA).unwrap();
        let h1 = a.cohomology(1);
        assert_eq!(h1.reps, vec![vec![q(1), q(0)]]);
        assert_eq!(a.betti(2), 0);
    }

    #[test]
    fn degree_violation_reported() {
        let spec = CdgaSpec::from_json(
            r#"{"degrees": [["1"], ["a", "b", "c"], ["ab", "ac", "bc"]],
                "products": [["a", "b", ["ab"]], ["a", "c", ["ac"]], ["b", "c", ["bc"]]],
                "differential": [["c", ["a"]]]}"#,
        )
        .unwrap();
        let v = FiniteCdga::validate_spec(&spec);
        assert!(v.iter().any(|x| x.kind == "degree" && x.detail.contains("not degree +1")), "{v:?}");
    }

    #[test]
    fn commutativity_violation_reported() {
        // b·a must equal -(a·b) in degree 1
        let spec = CdgaSpec::from_json(
            r#"{"degrees": [["1"], ["a", "b"], ["ab"]],
                "products": [["a", "b", ["-ab"]], ["b", "a", ["-ab"]]]}"#,
        )
        .unwrap();
        let v = FiniteCdga::validate_spec(&spec);
        assert!(v.iter().any(|x| x.kind == "commutativity"), "{v:?}");
    }

    #[test]
    fn exterior_algebra_is_valid() {
        for n in 1..=4 {
            let e = exterior_algebra(n);
            assert!(e.validate().is_empty());
            assert!(e.validate_weights().unwrap().is_empty());
            assert_eq!(e.dims().iter().sum::<usize>(), 1 << n);
        }
    }

    #[test]
    fn aomoto_rejects_non_cocycle() {
        let a = FiniteCdga::from_json(LAMBDA).unwrap();
        assert!(matches!(a.aomoto(&[q(0), q(1)]), Err(CoreError::NotACocycle)));
    }

    #[test]
    fn tensor_of_exterior_algebras() {
        let e1 = exterior_algebra(1);
        let e2 = e1.tensor(&exterior_algebra(1));
        assert!(e2.validate().is_empty());
        assert_eq!(e2.dims(), vec![1, 2, 1]);
        let e = exterior_algebra(2);
        assert_eq!(e2.betti(1), e.betti(1));
        assert_eq!(e2.betti(2), e.betti(2));
    }

    #[test]
    fn spec_roundtrip() {
        let a = FiniteCdga::from_json(LAMBDA).unwrap();
        let b = FiniteCdga::from_spec(&a.to_spec()).unwrap();
        assert_eq!(a.to_spec(), b.to_spec());
    }
}
