//! Resonance varieties, support loci of the universal complex, and
//! certified covers by rational linear subspaces.

use jumploci_symbolic::{fitting_style_ideal, Ideal, MultiPoly, QMatrix, Rational};
use serde::{Deserialize, Serialize};

use crate::cdga::FiniteCdga;
use crate::error::{CoreError, Result};

/// An affine-linear subspace of ℚⁿ cut out by forms `Σ cⱼxⱼ + c₀ = 0`,
/// stored row-reduced (each row is `[c₁, …, cₙ, c₀]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearSubspace {
    n: usize,
    rows: Vec<Vec<Rational>>,
}

impl LinearSubspace {
    /// Subspace `{x : M x = 0}` for rows of length `n`.
    pub fn homogeneous(n: usize, rows: Vec<Vec<Rational>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|mut r| {
                assert_eq!(r.len(), n, "form length");
                r.push(Rational::zero());
                r
            })
            .collect();
        Self::affine(n, rows)
    }

    /// Rows of length `n + 1`, the last entry being the constant term.
    pub fn affine(n: usize, rows: Vec<Vec<Rational>>) -> Self {
        let m = QMatrix::from_rows_with_cols(rows, n + 1);
        let (r, piv) = m.rref();
        let rows = (0..piv.len()).map(|i| r.row(i).to_vec()).collect();
        LinearSubspace { n, rows }
    }

    pub fn from_i64(n: usize, rows: &[&[i64]]) -> Self {
        Self::homogeneous(n, rows.iter().map(|r| r.iter().map(|&v| Rational::from_int(v)).collect()).collect())
    }

    /// Subspace cut out by polynomials of degree ≤ 1.
    pub fn from_linear_polys(n: usize, forms: &[MultiPoly]) -> Result<Self> {
        let mut rows = Vec::new();
        for f in forms {
            if f.total_degree().unwrap_or(0) > 1 {
                return Err(CoreError::Input(format!("form of degree {} is not linear", f.total_degree().unwrap_or(0))));
            }
            let mut r = vec![Rational::zero(); n + 1];
            for (m, c) in f.terms() {
                match (0..n).find(|&j| m.exp(j) == 1) {
                    Some(j) => r[j] = c.clone(),
                    None => r[n] = c.clone(),
                }
            }
            rows.push(r);
        }
        Ok(Self::affine(n, rows))
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Row-reduced equations `[c₁, …, cₙ, c₀]`.
    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Whether the equations are inconsistent (`1 = 0` among them).
    pub fn is_empty(&self) -> bool {
        self.rows.iter().any(|r| r[..self.n].iter().all(|c| c.is_zero()))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rows.iter().all(|r| r[self.n].is_zero())
    }

    pub fn dim(&self) -> Option<usize> {
        if self.is_empty() {
            None
        } else {
            Some(self.n - self.rows.len())
        }
    }

    pub fn forms(&self) -> Vec<MultiPoly> {
        self.rows
            .iter()
            .map(|r| {
                let mut p = MultiPoly::constant(self.n, r[self.n].clone());
                for (j, c) in r[..self.n].iter().enumerate() {
                    if !c.is_zero() {
                        p = &p + &MultiPoly::var(self.n, j).scale(c);
                    }
                }
                p
            })
            .collect()
    }

    pub fn ideal(&self, names: &[String]) -> Ideal {
        Ideal::new(names.to_vec(), self.forms())
    }

    /// `(base point, direction vectors)`; `None` for the empty subspace.
    pub fn parametrization(&self) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
        if self.is_empty() {
            return None;
        }
        let n = self.n;
        let pivots: Vec<usize> =
            self.rows.iter().map(|r| r.iter().position(|c| !c.is_zero()).expect("nonzero row")).collect();
        let mut base = vec![Rational::zero(); n];
        for (r, &p) in self.rows.iter().zip(&pivots) {
            base[p] = -r[n].clone();
        }
        let dirs = (0..n)
            .filter(|j| !pivots.contains(j))
            .map(|f| {
                let mut v = vec![Rational::zero(); n];
                v[f] = Rational::one();
                for (r, &p) in self.rows.iter().zip(&pivots) {
                    v[p] = -r[f].clone();
                }
                v
            })
            .collect();
        Some((base, dirs))
    }

    /// Coordinates as polynomials in `dim` parameters.
    pub fn parametric_images(&self) -> Option<Vec<MultiPoly>> {
        let (base, dirs) = self.parametrization()?;
        let k = dirs.len();
        Some(
            (0..self.n)
                .map(|j| {
                    let mut p = MultiPoly::constant(k, base[j].clone());
                    for (t, d) in dirs.iter().enumerate() {
                        if !d[j].is_zero() {
                            p = &p + &MultiPoly::var(k, t).scale(&d[j]);
                        }
                    }
                    p
                })
                .collect(),
        )
    }

    pub fn contains_point(&self, p: &[Rational]) -> bool {
        self.forms().iter().all(|f| f.eval(p).is_zero())
    }

    /// Whether all of `ideal`'s generators vanish identically on this subspace.
    pub fn lies_in(&self, ideal: &Ideal) -> bool {
        match self.parametric_images() {
            None => true,
            Some(img) => ideal.gens().iter().all(|g| g.substitute(&img).is_zero()),
        }
    }

    pub fn contained_in(&self, other: &LinearSubspace) -> bool {
        match self.parametric_images() {
            None => true,
            Some(img) => other.forms().iter().all(|f| f.substitute(&img).is_zero()),
        }
    }

    pub fn intersect(&self, other: &LinearSubspace) -> LinearSubspace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self::affine(self.n, rows)
    }

    pub fn to_strings(&self, names: &[String]) -> Vec<String> {
        self.forms().iter().map(|f| f.display(names).to_string()).collect()
    }
}

/// Removes subspaces contained in others and sorts the rest.
pub fn prune_subspaces(mut v: Vec<LinearSubspace>) -> Vec<LinearSubspace> {
    v.retain(|s| !s.is_empty());
    v.sort();
    v.dedup();
    let keep: Vec<bool> = (0..v.len()).map(|i| !(0..v.len()).any(|j| j != i && v[i].contained_in(&v[j]))).collect();
    v.into_iter().zip(keep).filter(|(_, k)| *k).map(|(s, _)| s).collect()
}

/// Outcome of [`certify_linear_cover`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CoverCertificate {
    /// Each candidate lies in the listed piece, and every generator of the
    /// product of the candidates' ideals lies in the radical of every piece.
    Certified { containment: Vec<(usize, usize)>, reverse_checked: usize },
    /// A candidate lies in no piece.
    NotContained { candidate: usize },
    /// A generator of the candidates' product ideal does not vanish on a piece.
    Uncovered { piece: usize, generator: String },
}

impl CoverCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, CoverCertificate::Certified { .. })
    }
}

/// A finite union of varieties `V(Iₖ)` in affine n-space.
#[derive(Clone, Debug)]
pub struct AffineLocus {
    names: Vec<String>,
    pieces: Vec<Ideal>,
    decomposition: Option<Vec<LinearSubspace>>,
    certificate: Option<CoverCertificate>,
}

impl AffineLocus {
    /// Unit pieces are dropped.
    pub fn new(names: Vec<String>, pieces: Vec<Ideal>) -> Self {
        let pieces = pieces.into_iter().filter(|p| !p.is_unit()).collect();
        AffineLocus { names, pieces, decomposition: None, certificate: None }
    }

    pub fn empty(names: Vec<String>) -> Self {
        Self::new(names, Vec::new())
    }

    pub fn whole(names: Vec<String>) -> Self {
        let z = Ideal::zero(names.clone());
        Self::new(names, vec![z])
    }

    pub fn from_subspaces(names: Vec<String>, subspaces: &[LinearSubspace]) -> Self {
        let pieces = subspaces.iter().map(|s| s.ideal(&names)).collect();
        let mut l = Self::new(names, pieces);
        l.decomposition = Some(subspaces.to_vec());
        l
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn pieces(&self) -> &[Ideal] {
        &self.pieces
    }

    pub fn decomposition(&self) -> Option<&[LinearSubspace]> {
        self.decomposition.as_deref()
    }

    pub fn certificate(&self) -> Option<&CoverCertificate> {
        self.certificate.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.pieces.iter().any(|p| p.is_zero_ideal())
    }

    pub fn contains_point(&self, p: &[Rational]) -> bool {
        self.pieces.iter().any(|i| i.vanishes_at(p))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.pieces.iter().all(|p| p.is_homogeneous())
    }

    /// Ideal of the union (product of the pieces).
    pub fn product_ideal(&self) -> Ideal {
        let mut it = self.pieces.iter();
        match it.next() {
            None => Ideal::unit(self.names.clone()),
            Some(first) => it.fold(first.clone(), |acc, p| acc.product(p)),
        }
    }

    pub fn union(&self, other: &AffineLocus) -> AffineLocus {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        AffineLocus::new(self.names.clone(), pieces)
    }

    /// Drops pieces whose variety lies inside another piece's.
    pub fn pruned(&self) -> AffineLocus {
        let n = self.pieces.len();
        let mut alive = vec![true; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && alive[i] && alive[j] && self.pieces[i].variety_contained_in(&self.pieces[j]) {
                    alive[i] = false;
                }
            }
        }
        let pieces = self.pieces.iter().zip(alive).filter(|(_, a)| *a).map(|(p, _)| p.clone()).collect();
        AffineLocus { names: self.names.clone(), pieces, decomposition: self.decomposition.clone(), certificate: self.certificate.clone() }
    }

    /// `V(self) ⊆ V(other)`; on failure, a generator of `other`'s product
    /// ideal not vanishing on some piece of `self`.
    pub fn contained_in(&self, other: &AffineLocus) -> std::result::Result<(), MultiPoly> {
        if self.is_empty() {
            return Ok(());
        }
        // a piece inside a single piece of `other` needs no product ideal
        let mut rest = Vec::new();
        for p in &self.pieces {
            if !other.pieces.iter().any(|q| p.variety_contained_in(q)) {
                rest.push(p);
            }
        }
        if rest.is_empty() {
            return Ok(());
        }
        let prod = other.product_ideal();
        for p in rest {
            if let Some(w) = p.radical_witness(&prod) {
                return Err(w);
            }
        }
        Ok(())
    }

    pub fn variety_eq(&self, other: &AffineLocus) -> bool {
        self.contained_in(other).is_ok() && other.contained_in(self).is_ok()
    }

    pub fn to_json(&self) -> AffineLocusJson {
        AffineLocusJson {
            n: self.nvars(),
            variables: self.names.clone(),
            pieces: self.pieces.iter().map(|p| p.to_strings()).collect(),
            decomposition: self.decomposition.as_ref().map(|d| {
                d.iter().map(|s| SubspaceJson { forms: s.to_strings(&self.names), dim: s.dim() }).collect()
            }),
            certificate: self.certificate.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SubspaceJson {
    pub forms: Vec<String>,
    pub dim: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AffineLocusJson {
    pub n: usize,
    pub variables: Vec<String>,
    pub pieces: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Vec<SubspaceJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CoverCertificate>,
}

/// `Rⁱ(A) = {a ∈ H¹ : Hⁱ(A, δ_a) ≠ 0}` as the union over `r + s = dim Aⁱ − 1`
/// of `V(I_{r+1}(δ^{i-1}) + I_{s+1}(δ^i))`, minors taken in the universal complex.
pub fn resonance_locus(a: &FiniteCdga, i: usize) -> Result<AffineLocus> {
    let u = a.universal_complex();
    let names = u.names.clone();
    let d = a.dim(i);
    if d == 0 {
        return Ok(AffineLocus::empty(names));
    }
    let before = if i == 0 { None } else { Some(u.delta(i - 1)) };
    let after = u.delta(i);
    let mut pieces = Vec::new();
    for r in 0..d {
        let s = d - 1 - r;
        let left = match &before {
            None => Ideal::zero(names.clone()),
            Some(m) => fitting_style_ideal(m, r + 1, &names)?,
        };
        if left.is_unit() {
            continue;
        }
        let right = fitting_style_ideal(&after, s + 1, &names)?;
        let piece = if left.is_zero_ideal() {
            right
        } else if right.is_zero_ideal() {
            left
        } else {
            left.sum(&right)
        };
        if !piece.is_unit() {
            pieces.push(piece);
        }
    }
    Ok(AffineLocus::new(names, pieces).pruned())
}

/// Resonance of `(H•(A), 0)`.
pub fn resonance_of_cohomology(a: &FiniteCdga, i: usize) -> Result<AffineLocus> {
    resonance_locus(&a.cohomology_algebra(), i)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportVariant {
    /// `Ṽᵢ`: homology of the chain complex with transposed differentials.
    Homological,
    /// `Ṽⁱ`: cohomology of `A ⊗ S`.
    Cohomological,
}

/// Support of the `i`-th (co)homology module of the universal complex.
pub fn support_locus(a: &FiniteCdga, i: usize, variant: SupportVariant) -> Result<AffineLocus> {
    let u = a.universal_complex();
    let names = u.names.clone();
    let pres = match variant {
        SupportVariant::Homological => u.chain().homology_presentation(i)?,
        SupportVariant::Cohomological => u.cochain().cohomology_presentation(i)?,
    };
    let ideal = pres.fitting_support(&names)?;
    Ok(AffineLocus::new(names, vec![ideal]))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Comparison {
    pub degree: usize,
    pub equal: bool,
    /// Which side failed to be contained in the other, and the witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ComparisonWitness>,
    pub resonance: AffineLocusJson,
    pub support: AffineLocusJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComparisonWitness {
    pub direction: String,
    pub generator: String,
}

/// Compares `∪_{i≤q} Rⁱ(A)` with `∪_{i≤q} Ṽᵢ(A)` as varieties.
pub fn compare_res_supports(a: &FiniteCdga, q: usize) -> Result<Comparison> {
    let names = a.h1_names();
    let mut res = AffineLocus::empty(names.clone());
    let mut sup = AffineLocus::empty(names.clone());
    for i in 0..=q {
        res = res.union(&resonance_locus(a, i)?);
        sup = sup.union(&support_locus(a, i, SupportVariant::Homological)?);
    }
    let res = res.pruned();
    let sup = sup.pruned();
    let witness = match res.contained_in(&sup) {
        Err(w) => Some(ComparisonWitness { direction: "resonance ⊄ support".into(), generator: w.display(&names).to_string() }),
        Ok(()) => match sup.contained_in(&res) {
            Err(w) => Some(ComparisonWitness { direction: "support ⊄ resonance".into(), generator: w.display(&names).to_string() }),
            Ok(()) => None,
        },
    };
    Ok(Comparison { degree: q, equal: witness.is_none(), witness, resonance: res.to_json(), support: sup.to_json() })
}

/// Certifies `V(L) = ∪ candidates`: each candidate lies in a piece (by
/// substituting its parametrization) and every piece lies in the union (by
/// radical membership of the product of the candidates' ideals).
pub fn certify_linear_cover(l: &AffineLocus, candidates: &[LinearSubspace]) -> CoverCertificate {
    let names = l.names();
    let mut containment = Vec::new();
    for (c, s) in candidates.iter().enumerate() {
        match l.pieces().iter().position(|p| s.lies_in(p)) {
            Some(p) => containment.push((c, p)),
            None => return CoverCertificate::NotContained { candidate: c },
        }
    }
    let cover = AffineLocus::from_subspaces(names.to_vec(), candidates);
    let mut checked = 0;
    for (pi, piece) in l.pieces().iter().enumerate() {
        // cheap path: the piece is one of the candidates
        if cover.pieces().iter().any(|q| piece.variety_contained_in(q)) {
            checked += 1;
            continue;
        }
        let prod = cover.product_ideal();
        match piece.radical_witness(&prod) {
            Some(g) => return CoverCertificate::Uncovered { piece: pi, generator: g.display(names).to_string() },
            None => checked += prod.gens().len(),
        }
    }
    CoverCertificate::Certified { containment, reverse_checked: checked }
}

/// `Rⁱ(A)` against `Rⁱ(H•(A))`, with a witness when they differ.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResonanceInclusion {
    pub degree: usize,
    pub model: AffineLocusJson,
    pub cohomology: AffineLocusJson,
    pub model_in_cohomology: bool,
    pub cohomology_in_model: bool,
    /// `model ⊊ cohomology`.
    pub strict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<i64>>,
}

pub fn compare_model_cohomology(a: &FiniteCdga, i: usize) -> Result<ResonanceInclusion> {
    let r = resonance_locus(a, i)?;
    let rh = resonance_of_cohomology(a, i)?;
    let names = r.names().to_vec();
    let fwd = r.contained_in(&rh);
    let back = rh.contained_in(&r);
    let strict = fwd.is_ok() && back.is_err();
    let generator = back.as_ref().err().map(|g| g.display(&names).to_string());
    let point = if strict { crate::tcone::grid_witness(&rh, &r) } else { None };
    Ok(ResonanceInclusion {
        degree: i,
        model: r.to_json(),
        cohomology: rh.to_json(),
        model_in_cohomology: fwd.is_ok(),
        cohomology_in_model: back.is_ok(),
        strict,
        generator,
        point,
    })
}

/// Attaches a certified decomposition, or fails with the refutation.
pub fn with_certified_cover(l: AffineLocus, candidates: Vec<LinearSubspace>) -> std::result::Result<AffineLocus, CoverCertificate> {
    let cert = certify_linear_cover(&l, &candidates);
    if !cert.is_certified() {
        return Err(cert);
    }
    Ok(AffineLocus { decomposition: Some(candidates), certificate: Some(cert), ..l })
}

/// `dim Hⁱ(A, δ_a)` at the class with H¹-coordinates `point`, over ℚ.
pub fn aomoto_betti(a: &FiniteCdga, i: usize, point: &[Rational]) -> Result<usize> {
    Ok(a.aomoto_at(point)?.cohomology_dim(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn subspace_parametrization() {
        // x1 - x3 = 0, x2 - 2 x3 = 0
        let s = LinearSubspace::from_i64(3, &[&[1, 0, -1], &[0, 1, -2]]);
        assert_eq!(s.dim(), Some(1));
        let (base, dirs) = s.parametrization().unwrap();
        assert_eq!(base, vec![q(0); 3]);
        assert_eq!(dirs, vec![vec![q(1), q(2), q(1)]]);
    }

    #[test]
    fn affine_point_subspace() {
        let s = LinearSubspace::affine(1, vec![vec![q(1), q(-1)]]);
        assert!(s.contains_point(&[q(1)]));
        assert!(!s.is_homogeneous());
        assert_eq!(s.dim(), Some(0));
    }

    #[test]
    fn pruning_drops_contained() {
        let line = LinearSubspace::from_i64(2, &[&[1, 0]]);
        let origin = LinearSubspace::from_i64(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(prune_subspaces(vec![origin, line.clone()]), vec![line]);
    }
}
