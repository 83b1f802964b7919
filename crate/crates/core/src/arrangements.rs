//! Central hyperplane arrangements: rank-2 flats, Orlik–Solomon algebras,
//! local and 3-net resonance components.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use jumploci_symbolic::{MultiPoly, Rational};
use serde::{Deserialize, Serialize};

use crate::cdga::FiniteCdga;
use crate::error::{CoreError, Result};
use crate::exterior::{elt, ExtElt, ExteriorQuotient};
use crate::jump_loci::{aomoto_betti, certify_linear_cover, resonance_locus, AffineLocus, CoverCertificate, LinearSubspace};

pub const DEFAULT_MAX_ARRANGEMENT_SIZE: usize = 12;

/// `a + bω` in `ℚ(ω)`, `ω² + ω + 1 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Cyclo3 {
    pub a: Rational,
    pub b: Rational,
}

impl Cyclo3 {
    pub fn new(a: Rational, b: Rational) -> Self {
        Cyclo3 { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        Cyclo3 { a, b: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// `N(a + bω) = a² − ab + b²`.
    pub fn norm(&self) -> Rational {
        &(&(&self.a * &self.a) - &(&self.a * &self.b)) + &(&self.b * &self.b)
    }

    pub fn inverse(&self) -> Self {
        // conjugate a + bω² = (a − b) − bω
        let n = self.norm();
        Cyclo3 { a: &(&self.a - &self.b) / &n, b: &(-self.b.clone()) / &n }
    }

    /// Parses a polynomial in `w` (reduced with `w³ = 1`, `w² = −w − 1`).
    pub fn parse(s: &str) -> Result<Self> {
        let names = vec!["w".to_string()];
        let p = MultiPoly::parse(s, &names)?;
        let mut out = Cyclo3::zero();
        for (m, c) in p.terms() {
            let term = match m.exp(0) % 3 {
                0 => Cyclo3::rational(c.clone()),
                1 => Cyclo3::new(Rational::zero(), c.clone()),
                _ => Cyclo3::new(-c.clone(), -c.clone()),
            };
            out = out + term;
        }
        Ok(out)
    }
}

impl fmt::Display for Cyclo3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*w", self.b),
            _ => write!(f, "{} + {}*w", self.a, self.b),
        }
    }
}

impl Add for Cyclo3 {
    type Output = Cyclo3;
    fn add(self, o: Cyclo3) -> Cyclo3 {
        Cyclo3 { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for Cyclo3 {
    type Output = Cyclo3;
    fn sub(self, o: Cyclo3) -> Cyclo3 {
        Cyclo3 { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Neg for Cyclo3 {
    type Output = Cyclo3;
    fn neg(self) -> Cyclo3 {
        Cyclo3 { a: -self.a, b: -self.b }
    }
}

impl Mul for Cyclo3 {
    type Output = Cyclo3;
    fn mul(self, o: Cyclo3) -> Cyclo3 {
        // (a + bω)(c + dω) = ac + (ad + bc)ω + bd ω² = (ac − bd) + (ad + bc − bd)ω
        let ac = &self.a * &o.a;
        let bd = &self.b * &o.b;
        let ad = &self.a * &o.b;
        let bc = &self.b * &o.a;
        Cyclo3 { a: &ac - &bd, b: &(&ad + &bc) - &bd }
    }
}

/// Rank over `ℚ(ω)` of a list of vectors.
pub fn rank(vectors: &[Vec<Cyclo3>]) -> usize {
    let mut m: Vec<Vec<Cyclo3>> = vectors.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inverse();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() * inv.clone();
            for k in c..cols {
                let v = m[i][k].clone() - f.clone() * m[r][k].clone();
                m[i][k] = v;
            }
        }
        r += 1;
    }
    r
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ArrangementJson {
    pub dim: usize,
    pub forms: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperplaneArrangement {
    dim: usize,
    forms: Vec<Vec<Cyclo3>>,
    labels: Vec<String>,
}

impl HyperplaneArrangement {
    pub fn new(dim: usize, forms: Vec<Vec<Cyclo3>>, labels: Option<Vec<String>>) -> Result<Self> {
        for (i, f) in forms.iter().enumerate() {
            if f.len() != dim {
                return Err(CoreError::DimensionMismatch(format!("form {} has {} coefficients, dimension is {dim}", i + 1, f.len())));
            }
            if f.iter().all(|c| c.is_zero()) {
                return Err(CoreError::Input(format!("form {} is zero", i + 1)));
            }
        }
        for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                if rank(&[forms[i].clone(), forms[j].clone()]) < 2 {
                    return Err(CoreError::Input(format!("forms {} and {} are proportional", i + 1, j + 1)));
                }
            }
        }
        let labels = labels.unwrap_or_else(|| (1..=forms.len()).map(|i| i.to_string()).collect());
        if labels.len() != forms.len() {
            return Err(CoreError::Input("one label per hyperplane required".into()));
        }
        Ok(HyperplaneArrangement { dim, forms, labels })
    }

    pub fn from_json(j: &ArrangementJson) -> Result<Self> {
        let forms = j
            .forms
            .iter()
            .map(|f| f.iter().map(|c| Cyclo3::parse(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(j.dim, forms, j.labels.clone())
    }

    pub fn from_i64(dim: usize, forms: &[&[i64]]) -> Result<Self> {
        let f = forms.iter().map(|r| r.iter().map(|&v| Cyclo3::rational(Rational::from_int(v))).collect()).collect();
        Self::new(dim, f, None)
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coordinate_names(&self) -> Vec<String> {
        (1..=self.len()).map(|i| format!("x{i}")).collect()
    }

    pub fn to_json(&self) -> ArrangementJson {
        ArrangementJson {
            dim: self.dim,
            forms: self.forms.iter().map(|f| f.iter().map(|c| c.to_string()).collect()).collect(),
            labels: Some(self.labels.clone()),
        }
    }
}

/// Maximal sets of hyperplanes through a common codimension-2 subspace.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rank2Flat {
    pub hyperplanes: Vec<usize>,
}

impl Rank2Flat {
    pub fn multiplicity(&self) -> usize {
        self.hyperplanes.len()
    }
}

pub fn rank2_flats(a: &HyperplaneArrangement) -> Vec<Rank2Flat> {
    let m = a.len();
    let mut seen = BTreeSet::new();
    for i in 0..m {
        for j in i + 1..m {
            let members: Vec<usize> = (0..m)
                .filter(|&k| k == i || k == j || rank(&[a.forms[i].clone(), a.forms[j].clone(), a.forms[k].clone()]) == 2)
                .collect();
            seen.insert(members);
        }
    }
    seen.into_iter().map(|hyperplanes| Rank2Flat { hyperplanes }).collect()
}

/// Orlik–Solomon algebra truncated at `max_degree`, zero differential.
/// Degree-2 relations are `∂e_{ijk}` for triples inside a rank-2 flat.
pub fn os_algebra(a: &HyperplaneArrangement, max_degree: usize) -> Result<FiniteCdga> {
    let m = a.len();
    if max_degree > 2 && m > 16 {
        return Err(CoreError::SizeBound { what: "arrangement size for higher OS degrees".into(), size: m, bound: 16 });
    }
    let mut relations: Vec<ExtElt> = Vec::new();
    for f in rank2_flats(a) {
        let h = &f.hyperplanes;
        for x in 0..h.len() {
            for y in x + 1..h.len() {
                for z in y + 1..h.len() {
                    let (i, j, k) = (h[x], h[y], h[z]);
                    relations.push(elt(&[(&[j, k], 1), (&[i, k], -1), (&[i, j], 1)]));
                }
            }
        }
    }
    if max_degree > 2 {
        // dependent sets of size ≥ 4: any 4 forms in a space of rank ≤ 3
        for s in subsets_of(m, 4) {
            let vs: Vec<Vec<Cyclo3>> = s.iter().map(|&i| a.forms[i].clone()).collect();
            if rank(&vs) < 4 {
                let terms: Vec<(Vec<usize>, i64)> = (0..4)
                    .map(|p| (s.iter().enumerate().filter(|(q, _)| *q != p).map(|(_, &v)| v).collect(), if p % 2 == 0 { 1 } else { -1 }))
                    .collect();
                let refs: Vec<(&[usize], i64)> = terms.iter().map(|(v, c)| (v.as_slice(), *c)).collect();
                relations.push(elt(&refs));
            }
        }
    }
    let q = ExteriorQuotient {
        names: a.labels.iter().map(|l| format!("e{l}")).collect(),
        classes: vec![0; m],
        relations,
        differential: Vec::new(),
        weights: Some(vec![1; m]),
        max_degree,
    };
    let mut alg = q.build()?;
    alg = alg.with_variables(a.coordinate_names());
    Ok(alg)
}

fn subsets_of(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// `{x : Σ_{H∈X} x_H = 0, x_H = 0 off X}` for every flat of multiplicity ≥ 3.
pub fn local_components(a: &HyperplaneArrangement) -> Vec<LinearSubspace> {
    let m = a.len();
    rank2_flats(a)
        .into_iter()
        .filter(|f| f.multiplicity() >= 3)
        .map(|f| {
            let mut rows = Vec::new();
            rows.push((0..m).map(|k| Rational::from_int(i64::from(f.hyperplanes.contains(&k)))).collect());
            for k in (0..m).filter(|k| !f.hyperplanes.contains(k)) {
                rows.push(unit(m, k));
            }
            LinearSubspace::homogeneous(m, rows)
        })
        .collect()
}

fn unit(m: usize, k: usize) -> Vec<Rational> {
    let mut r = vec![Rational::zero(); m];
    r[k] = Rational::one();
    r
}

/// A partition of a sub-arrangement into three blocks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThreeNet {
    pub blocks: [Vec<usize>; 3],
    /// The net is supported on the whole arrangement.
    pub essential: bool,
}

impl ThreeNet {
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        s.sort();
        s
    }

    pub fn display(&self, labels: &[String]) -> String {
        let b: Vec<String> = self.blocks.iter().map(|b| b.iter().map(|&i| labels[i].as_str()).collect::<String>()).collect();
        format!("({})", b.join("|"))
    }
}

/// Checks the net condition for `assign[k] ∈ {0 = absent, 1, 2, 3}`: every
/// flat meeting two blocks contains exactly one hyperplane of each block.
fn net_condition(flats: &[Rank2Flat], assign: &[u8], complete: bool) -> bool {
    for f in flats {
        let mut count = [0usize; 4];
        for &h in &f.hyperplanes {
            if h < assign.len() {
                count[assign[h] as usize] += 1;
            }
        }
        let blocks_met = (1..4).filter(|&b| count[b] > 0).count();
        if blocks_met >= 2 {
            if (1..4).any(|b| count[b] > 1) {
                return false;
            }
            if complete && blocks_met != 3 {
                return false;
            }
        }
    }
    true
}

/// All reduced 3-nets on sub-arrangements, up to permuting blocks; nets
/// supported on a single flat (which give the local components) are skipped.
pub fn find_3nets(a: &HyperplaneArrangement, max_size: usize) -> Result<Vec<ThreeNet>> {
    let m = a.len();
    if m > max_size {
        return Err(CoreError::SizeBound { what: "arrangement size".into(), size: m, bound: max_size });
    }
    let flats = rank2_flats(a);
    let mut out = Vec::new();
    let mut assign: Vec<u8> = Vec::with_capacity(m);
    search(&flats, m, &mut assign, 0, &mut out);
    let mut nets: Vec<ThreeNet> = out
        .into_iter()
        .filter_map(|asg| {
            let blocks = [1u8, 2, 3].map(|b| (0..m).filter(|&k| asg[k] == b).collect::<Vec<_>>());
            if blocks.iter().any(|b| b.is_empty()) {
                return None;
            }
            let support: Vec<usize> = (0..m).filter(|&k| asg[k] != 0).collect();
            if flats.iter().any(|f| support.iter().all(|h| f.hyperplanes.contains(h))) {
                return None;
            }
            Some(ThreeNet { blocks, essential: support.len() == m })
        })
        .collect();
    nets.sort();
    Ok(nets)
}

fn search(flats: &[Rank2Flat], m: usize, assign: &mut Vec<u8>, used: u8, out: &mut Vec<Vec<u8>>) {
    if !net_condition(flats, assign, false) {
        return;
    }
    if assign.len() == m {
        if used == 3 && net_condition(flats, assign, true) {
            out.push(assign.clone());
        }
        return;
    }
    // blocks are opened in order, so each unordered partition appears once
    for b in 0..=(used + 1).min(3) {
        assign.push(b);
        search(flats, m, assign, used.max(b), out);
        assign.pop();
    }
}

/// `{x : x constant on each block, block values summing to 0, 0 off the net}`.
pub fn net_component(net: &ThreeNet, m: usize) -> LinearSubspace {
    let mut rows = Vec::new();
    for b in &net.blocks {
        for &h in &b[1..] {
            let mut r = vec![Rational::zero(); m];
            r[h] = Rational::one();
            r[b[0]] = -Rational::one();
            rows.push(r);
        }
    }
    let mut s = vec![Rational::zero(); m];
    for b in &net.blocks {
        s[b[0]] = Rational::one();
    }
    rows.push(s);
    let support = net.support();
    for k in (0..m).filter(|k| !support.contains(k)) {
        rows.push(unit(m, k));
    }
    LinearSubspace::homogeneous(m, rows)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComponentReport {
    pub kind: String,
    pub label: String,
    pub dim: usize,
    pub equations: Vec<String>,
}

/// Largest `dim A¹` for which R¹ is computed exactly from determinantal
/// ideals; beyond it the minor count grows past what fits in memory.
pub const MAX_EXACT_R1_RANK: usize = 8;

/// Membership of a component in R¹ tested at sample points.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SampleCheck {
    pub component: usize,
    pub points: usize,
    /// Smallest dim H¹(A, a) over the sampled points.
    pub min_betti: usize,
}

#[derive(Clone, Debug)]
pub struct R1Arrangement {
    /// Exact locus, when `dim A¹ ≤ MAX_EXACT_R1_RANK`.
    pub locus: Option<AffineLocus>,
    pub components: Vec<ComponentReport>,
    pub subspaces: Vec<LinearSubspace>,
    /// Cover certificate against the exact locus.
    pub certificate: Option<CoverCertificate>,
    /// Point samples, used when the exact locus is out of reach.
    pub samples: Vec<SampleCheck>,
}

impl R1Arrangement {
    pub fn is_certified(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.is_certified())
    }
}

/// Points `base + Σ cⱼ dirⱼ` with distinct small-prime coefficients.
fn sample_points(s: &LinearSubspace, count: usize) -> Vec<Vec<Rational>> {
    const PRIMES: [i64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let Some((base, dirs)) = s.parametrization() else { return Vec::new() };
    (0..count)
        .map(|p| {
            let mut x = base.clone();
            for (j, d) in dirs.iter().enumerate() {
                let c = Rational::from_int(PRIMES[(p * dirs.len() + j) % PRIMES.len()] * if (p + j) % 2 == 0 { 1 } else { -1 });
                for (xi, di) in x.iter_mut().zip(d) {
                    *xi = &*xi + &(&c * di);
                }
            }
            x
        })
        .collect()
}

/// `R¹` of the Orlik–Solomon algebra: local and 3-net components, with a
/// certified cover when the exact locus is computable and point samples
/// otherwise.
pub fn r1_arrangement(a: &HyperplaneArrangement, max_size: usize) -> Result<R1Arrangement> {
    if a.len() > max_size {
        return Err(CoreError::SizeBound { what: "arrangement size".into(), size: a.len(), bound: max_size });
    }
    let os = os_algebra(a, 2)?;
    let locus = if a.len() <= MAX_EXACT_R1_RANK { Some(resonance_locus(&os, 1)?) } else { None };
    let names = a.coordinate_names();
    let m = a.len();
    let mut components = Vec::new();
    let mut subspaces = Vec::new();
    for (f, s) in rank2_flats(a).into_iter().filter(|f| f.multiplicity() >= 3).zip(local_components(a)) {
        components.push(ComponentReport {
            kind: "local".into(),
            label: f.hyperplanes.iter().map(|&i| a.labels[i].as_str()).collect(),
            dim: s.dim().unwrap_or(0),
            equations: s.to_strings(&names),
        });
        subspaces.push(s);
    }
    for net in find_3nets(a, max_size)? {
        let s = net_component(&net, m);
        if let Some(l) = &locus {
            if !l.pieces().iter().any(|p| s.lies_in(p)) {
                return Err(CoreError::Certification(format!("net {} does not lie in R¹", net.display(&a.labels))));
            }
        }
        components.push(ComponentReport {
            kind: if net.essential { "essential-net" } else { "net" }.into(),
            label: net.display(&a.labels),
            dim: s.dim().unwrap_or(0),
            equations: s.to_strings(&names),
        });
        subspaces.push(s);
    }
    // the origin is always in R¹ when there are hyperplanes
    if subspaces.is_empty() && !a.is_empty() {
        let origin = LinearSubspace::homogeneous(m, (0..m).map(|k| unit(m, k)).collect());
        components.push(ComponentReport { kind: "origin".into(), label: "0".into(), dim: 0, equations: origin.to_strings(&names) });
        subspaces.push(origin);
    }
    let certificate = locus.as_ref().map(|l| certify_linear_cover(l, &subspaces));
    let mut samples = Vec::new();
    if locus.is_none() {
        for (k, s) in subspaces.iter().enumerate() {
            let pts = sample_points(s, 3);
            let mut min_betti = usize::MAX;
            for p in &pts {
                min_betti = min_betti.min(aomoto_betti(&os, 1, p)?);
            }
            if min_betti == 0 {
                return Err(CoreError::Certification(format!("component {} misses R¹ at a sample point", components[k].label)));
            }
            samples.push(SampleCheck { component: k, points: pts.len(), min_betti });
        }
    }
    Ok(R1Arrangement { locus, components, subspaces, certificate, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclo3_arithmetic() {
        let w = Cyclo3::parse("w").unwrap();
        let w2 = w.clone() * w.clone();
        assert_eq!(w2, Cyclo3::parse("-1 - w").unwrap());
        assert_eq!(w2 * w.clone(), Cyclo3::parse("1").unwrap());
        let x = Cyclo3::parse("2 + 3*w").unwrap();
        assert_eq!(x.clone() * x.inverse(), Cyclo3::parse("1").unwrap());
        assert_eq!(Cyclo3::parse("w^2").unwrap(), Cyclo3::parse("-1-w").unwrap());
    }

    #[test]
    fn pencil_and_generic() {
        let pencil = HyperplaneArrangement::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let f = rank2_flats(&pencil);
        assert_eq!(f, vec![Rank2Flat { hyperplanes: vec![0, 1, 2] }]);
        assert_eq!(os_algebra(&pencil, 2).unwrap().dims(), vec![1, 3, 2]);
        assert_eq!(local_components(&pencil).len(), 1);
        assert!(find_3nets(&pencil, 12).unwrap().is_empty());
        let generic = HyperplaneArrangement::from_i64(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(rank2_flats(&generic).len(), 3);
        assert!(local_components(&generic).is_empty());
        assert!(find_3nets(&generic, 12).unwrap().is_empty());
    }

    #[test]
    fn proportional_forms_rejected() {
        assert!(HyperplaneArrangement::from_i64(2, &[&[1, 1], &[2, 2]]).is_err());
    }
}
