//! Exponential and classical tangent cones at 1 of subvarieties of the
//! algebraic torus, and the tangent-cone formality test.

use jumploci_symbolic::{smith_normal_form_i64, tangent_cone_ideal, Ideal, LaurentPoly, MultiPoly, Rational};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::jump_loci::{prune_subspaces, AffineLocus, AffineLocusJson, LinearSubspace};

pub const DEFAULT_MAX_PARTITION_SUPPORT: usize = 12;

/// `{t : t^{mᵢ} = exp(2πi ρᵢ)}` for integer rows `mᵢ` and rotation numbers `ρᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslatedTorus {
    n: usize,
    rows: Vec<Vec<i64>>,
    rotations: Vec<Rational>,
}

impl TranslatedTorus {
    pub fn new(n: usize, rows: Vec<Vec<i64>>, rotations: Vec<Rational>) -> Result<Self> {
        if rows.len() != rotations.len() {
            return Err(CoreError::Input(format!("{} equations but {} rotation numbers", rows.len(), rotations.len())));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(CoreError::DimensionMismatch(format!("equation row of length {}, ambient dimension {n}", r.len())));
        }
        if !rows.is_empty() {
            let s = smith_normal_form_i64(&rows);
            if s.rank() != rows.len() || s.divisors_i64().iter().any(|&d| d != 1) {
                return Err(CoreError::Input("equation rows do not span a saturated lattice".into()));
            }
        }
        let rotations = rotations.into_iter().map(|r| frac_part(&r)).collect();
        Ok(TranslatedTorus { n, rows, rotations })
    }

    /// Untranslated subtorus.
    pub fn subtorus(n: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        let k = rows.len();
        Self::new(n, rows, vec![Rational::zero(); k])
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn rotations(&self) -> &[Rational] {
        &self.rotations
    }

    pub fn dim(&self) -> usize {
        self.n - self.rows.len()
    }

    pub fn passes_through_one(&self) -> bool {
        self.rotations.iter().all(|r| r.is_zero())
    }

    /// Tangent space at 1, `{z : ⟨mᵢ, z⟩ = 0}` (only meaningful through 1).
    pub fn tangent_space(&self) -> LinearSubspace {
        LinearSubspace::homogeneous(
            self.n,
            self.rows.iter().map(|r| r.iter().map(|&v| Rational::from_int(v)).collect()).collect(),
        )
    }

    /// Polynomial generators over ℚ of the Zariski closure of the Galois
    /// orbit of the torus, in `ℚ[t₁..tₙ]`.
    pub fn ideal_generators(&self) -> Vec<MultiPoly> {
        self.rows
            .iter()
            .zip(&self.rotations)
            .map(|(m, rho)| {
                let plus: Vec<i32> = m.iter().map(|&v| v.max(0) as i32).collect();
                let minus: Vec<i32> = m.iter().map(|&v| (-v).max(0) as i32).collect();
                let q = rho.denom().to_string().parse::<u64>().expect("small denominator");
                // Φ_q(u) with u = t^{m+}/t^{m-}, cleared by (t^{m-})^{deg Φ_q}
                let phi = cyclotomic(q);
                let deg = phi.len() - 1;
                let mut terms = Vec::new();
                for (k, c) in phi.iter().enumerate() {
                    if *c == 0 {
                        continue;
                    }
                    let e: Vec<i32> = (0..self.n).map(|j| plus[j] * k as i32 + minus[j] * (deg - k) as i32).collect();
                    terms.push((e, Rational::from_int(*c)));
                }
                LaurentPoly::from_terms(self.n, terms).to_poly().0
            })
            .collect()
    }

    pub fn ideal(&self, names: &[String]) -> Ideal {
        Ideal::new(names.to_vec(), self.ideal_generators())
    }

    pub fn contains_in(&self, other: &TranslatedTorus) -> bool {
        // same translation class and lattice containment: every row of other
        // is an integer combination of our rows with matching rotations
        let rows: Vec<Vec<Rational>> =
            self.rows.iter().map(|r| r.iter().map(|&v| Rational::from_int(v)).collect()).collect();
        other.rows.iter().zip(&other.rotations).all(|(m, rho)| {
            let mq: Vec<Rational> = m.iter().map(|&v| Rational::from_int(v)).collect();
            let cols: Vec<Vec<Rational>> = (0..self.n).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
            let a = jumploci_symbolic::QMatrix::from_rows_with_cols(cols, rows.len());
            match a.solve(&mq) {
                Some(c) if c.iter().all(|x| x.is_integer()) => {
                    let mut total = Rational::zero();
                    for (ci, r) in c.iter().zip(&self.rotations) {
                        total = &total + &(ci * r);
                    }
                    frac_part(&total) == *rho
                }
                _ => false,
            }
        })
    }
}

fn frac_part(r: &Rational) -> Rational {
    let n = r.numer();
    let d = r.denom();
    let m = n.mod_floor(&d);
    Rational::from_big(num_rational::BigRational::new(m, d))
}

/// Coefficients of the cyclotomic polynomial `Φ_q`, constant term first.
pub fn cyclotomic(q: u64) -> Vec<i64> {
    // x^q - 1 divided by Φ_d for proper divisors d
    let mut p = vec![0i64; q as usize + 1];
    p[0] = -1;
    p[q as usize] = 1;
    for d in 1..q {
        if q % d == 0 {
            p = poly_div_exact(&p, &cyclotomic(d));
        }
    }
    p
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut out = vec![0i64; da - db + 1];
    for k in (0..=da - db).rev() {
        let c = r[k + db] / b[db];
        out[k] = c;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= c * bi;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    out
}

/// Finite union of translated subtori plus isolated torsion points.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusLocus {
    n: usize,
    tori: Vec<TranslatedTorus>,
    /// Torsion points, each given by rotation numbers per coordinate.
    points: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TorusJson {
    pub rows: Vec<Vec<i64>>,
    #[serde(default)]
    pub rotations: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TorusLocusJson {
    pub n: usize,
    #[serde(default)]
    pub tori: Vec<TorusJson>,
    #[serde(default)]
    pub points: Vec<Vec<String>>,
}

impl TorusLocus {
    /// Drops components contained in others.
    pub fn new(n: usize, tori: Vec<TranslatedTorus>, points: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(t) = tori.iter().find(|t| t.ambient() != n) {
            return Err(CoreError::DimensionMismatch(format!("torus in dimension {}, locus in {n}", t.ambient())));
        }
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(CoreError::DimensionMismatch(format!("point with {} coordinates, locus in {n}", p.len())));
        }
        let k = tori.len();
        let keep: Vec<bool> = (0..k)
            .map(|i| !(0..k).any(|j| j != i && tori[i].contains_in(&tori[j]) && (!tori[j].contains_in(&tori[i]) || j < i)))
            .collect();
        let tori: Vec<TranslatedTorus> = tori.into_iter().zip(keep).filter(|(_, k)| *k).map(|(t, _)| t).collect();
        let mut pts: Vec<Vec<Rational>> = points.into_iter().map(|p| p.iter().map(frac_part).collect()).collect();
        pts.sort();
        pts.dedup();
        let pts = pts.into_iter().filter(|p| !tori.iter().any(|t| torus_contains_point(t, p))).collect();
        Ok(TorusLocus { n, tori, points: pts })
    }

    pub fn from_json(j: &TorusLocusJson) -> Result<Self> {
        let parse = |s: &String| s.parse::<Rational>().map_err(|_| CoreError::Input(format!("bad rotation number '{s}'")));
        let mut tori = Vec::new();
        for t in &j.tori {
            let rot = if t.rotations.is_empty() {
                vec![Rational::zero(); t.rows.len()]
            } else {
                t.rotations.iter().map(parse).collect::<Result<Vec<_>>>()?
            };
            tori.push(TranslatedTorus::new(j.n, t.rows.clone(), rot)?);
        }
        let points = j.points.iter().map(|p| p.iter().map(parse).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Self::new(j.n, tori, points)
    }

    pub fn to_json(&self) -> TorusLocusJson {
        TorusLocusJson {
            n: self.n,
            tori: self
                .tori
                .iter()
                .map(|t| TorusJson { rows: t.rows.clone(), rotations: t.rotations.iter().map(|r| r.to_string()).collect() })
                .collect(),
            points: self.points.iter().map(|p| p.iter().map(|r| r.to_string()).collect()).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn tori(&self) -> &[TranslatedTorus] {
        &self.tori
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn contains_one(&self) -> bool {
        self.tori.iter().any(|t| t.passes_through_one()) || self.points.iter().any(|p| p.iter().all(|r| r.is_zero()))
    }
}

fn torus_contains_point(t: &TranslatedTorus, p: &[Rational]) -> bool {
    t.rows.iter().zip(&t.rotations).all(|(m, rho)| {
        let mut s = Rational::zero();
        for (mj, pj) in m.iter().zip(p) {
            s = &s + &(&Rational::from_int(*mj) * pj);
        }
        frac_part(&s) == *rho
    })
}

pub fn z_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

/// `τ₁(V(f))`: for every partition of the support of `f` into blocks with
/// zero coefficient sums, the subspace on which `⟨m, z⟩` is constant on
/// each block.
pub fn exp_tcone_hypersurface(f: &LaurentPoly, max_support: usize) -> Result<Vec<LinearSubspace>> {
    if f.is_zero() {
        return Err(CoreError::Input("the zero polynomial does not define a hypersurface".into()));
    }
    let terms: Vec<(Vec<i32>, Rational)> = f.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    if terms.len() > max_support {
        return Err(CoreError::SizeBound { what: "polynomial support".into(), size: terms.len(), bound: max_support });
    }
    let n = f.nvars();
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut sums: Vec<Rational> = Vec::new();
    partitions(&terms, 0, &mut blocks, &mut sums, &mut |blocks| {
        let mut rows = Vec::new();
        for b in blocks {
            let m0 = &terms[b[0]].0;
            for &k in &b[1..] {
                rows.push(terms[k].0.iter().zip(m0).map(|(a, b)| Rational::from_int((a - b) as i64)).collect());
            }
        }
        out.push(LinearSubspace::homogeneous(n, rows));
    });
    Ok(prune_subspaces(out))
}

fn partitions(
    terms: &[(Vec<i32>, Rational)],
    k: usize,
    blocks: &mut Vec<Vec<usize>>,
    sums: &mut Vec<Rational>,
    emit: &mut dyn FnMut(&[Vec<usize>]),
) {
    let open = sums.iter().filter(|s| !s.is_zero()).count();
    if open > terms.len() - k {
        return;
    }
    if k == terms.len() {
        if open == 0 {
            emit(blocks);
        }
        return;
    }
    let c = &terms[k].1;
    for b in 0..blocks.len() {
        blocks[b].push(k);
        let old = sums[b].clone();
        sums[b] = &old + c;
        partitions(terms, k + 1, blocks, sums, emit);
        sums[b] = old;
        blocks[b].pop();
    }
    blocks.push(vec![k]);
    sums.push(c.clone());
    partitions(terms, k + 1, blocks, sums, emit);
    sums.pop();
    blocks.pop();
}

/// `τ₁(V(f₁, …, f_k)) = ∩ τ₁(V(fᵢ))` (τ₁ commutes with intersections).
pub fn exp_tcone_ideal(gens: &[LaurentPoly], n: usize, max_support: usize) -> Result<Vec<LinearSubspace>> {
    let mut acc = vec![LinearSubspace::homogeneous(n, Vec::new())];
    for g in gens.iter().filter(|g| !g.is_zero()) {
        if g.nvars() != n {
            return Err(CoreError::DimensionMismatch(format!("generator in {} variables, expected {n}", g.nvars())));
        }
        let cones = exp_tcone_hypersurface(g, max_support)?;
        let mut next = Vec::new();
        for a in &acc {
            for c in &cones {
                next.push(a.intersect(c));
            }
        }
        acc = prune_subspaces(next);
        if acc.is_empty() {
            break;
        }
    }
    Ok(acc)
}

/// τ₁ of a union of translated tori: tangent spaces of the components through 1.
pub fn exp_tcone_tori(l: &TorusLocus) -> Vec<LinearSubspace> {
    let mut out: Vec<LinearSubspace> = l.tori.iter().filter(|t| t.passes_through_one()).map(|t| t.tangent_space()).collect();
    if l.points.iter().any(|p| p.iter().all(|r| r.is_zero())) {
        out.push(LinearSubspace::homogeneous(l.n, (0..l.n).map(|j| unit_row(l.n, j)).collect()));
    }
    prune_subspaces(out)
}

fn unit_row(n: usize, j: usize) -> Vec<Rational> {
    let mut r = vec![Rational::zero(); n];
    r[j] = Rational::one();
    r
}

/// TC₁ of a union of tori: the union of tangent spaces of components through 1.
pub fn classical_tcone_tori(l: &TorusLocus, names: &[String]) -> AffineLocus {
    AffineLocus::from_subspaces(names.to_vec(), &exp_tcone_tori(l))
}

/// TC₁ of `V(gens)` at 1: substitute `tⱼ = zⱼ + 1` and take initial forms.
/// Exact for a single generator; for several it is the cone of the
/// variety they present.
pub fn classical_tcone(gens: &[LaurentPoly], names: &[String]) -> Result<AffineLocus> {
    let n = names.len();
    let polys: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.normalized_poly()).collect();
    if polys.iter().any(|p| p.nvars() != n) {
        return Err(CoreError::DimensionMismatch("generator ring does not match variable names".into()));
    }
    let i = Ideal::new(names.to_vec(), polys);
    let tc = tangent_cone_ideal(&i, &vec![Rational::one(); n])?;
    Ok(AffineLocus::new(names.to_vec(), vec![tc]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    ConsistentWithFormality,
    NonFormal,
    /// The inclusions τ₁ ⊆ TC₁ ⊆ R fail, so the data cannot come from one space.
    Inconsistent,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FormalityReport {
    pub tau1: Vec<Vec<String>>,
    pub tc1: AffineLocusJson,
    pub tau1_in_tc1: bool,
    pub tc1_in_resonance: bool,
    pub tau1_eq_tc1: bool,
    pub tc1_eq_resonance: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_eq_tc1: Option<bool>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<StrictnessCertificate>,
}

/// A strict inclusion `X ⊊ Y`: a generator of `X`'s ideal not vanishing on
/// `Y`, and a small integer point of `Y` off `X` when one is found.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StrictnessCertificate {
    pub inclusion: String,
    pub generator: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<i64>>,
}

/// Checks `τ₁(V) ⊆ TC₁(V) ⊆ R` and the equalities of the tangent cone formula.
pub fn tangent_cone_formula_check(
    v: &TorusLocus,
    r_model: Option<&AffineLocus>,
    r_coh: &AffineLocus,
) -> Result<FormalityReport> {
    let n = v.ambient();
    if r_coh.nvars() != n || r_model.is_some_and(|m| m.nvars() != n) {
        return Err(CoreError::DimensionMismatch(format!(
            "torus locus in dimension {n}, resonance in dimension {}",
            r_coh.nvars()
        )));
    }
    let names = r_coh.names().to_vec();
    // independent route: initial ideals of the torus ideals
    for t in v.tori().iter().filter(|t| t.passes_through_one()) {
        let cone = tangent_cone_ideal(&t.ideal(&names), &vec![Rational::one(); n])?;
        if !cone.variety_eq(&t.tangent_space().ideal(&names)) {
            return Err(CoreError::Certification("initial ideal of a subtorus differs from its tangent space".into()));
        }
    }
    Ok(compare_cones(exp_tcone_tori(v), classical_tcone_tori(v, &names), r_model, r_coh))
}

/// The same check for `V` given by Laurent polynomial equations.
pub fn tangent_cone_formula_check_ideal(
    gens: &[LaurentPoly],
    r_model: Option<&AffineLocus>,
    r_coh: &AffineLocus,
    max_support: usize,
) -> Result<FormalityReport> {
    let n = r_coh.nvars();
    if gens.iter().any(|g| g.nvars() != n) || r_model.is_some_and(|m| m.nvars() != n) {
        return Err(CoreError::DimensionMismatch(format!("equations and resonance live in different dimensions (resonance: {n})")));
    }
    let names = r_coh.names().to_vec();
    let tau = exp_tcone_ideal(gens, n, max_support)?;
    let tc = classical_tcone(gens, &names)?;
    Ok(compare_cones(tau, tc, r_model, r_coh))
}

fn compare_cones(tau: Vec<LinearSubspace>, tc: AffineLocus, r_model: Option<&AffineLocus>, r_coh: &AffineLocus) -> FormalityReport {
    let names = r_coh.names().to_vec();
    let tau_locus = AffineLocus::from_subspaces(names.clone(), &tau);
    let tau_in_tc = tau_locus.contained_in(&tc).is_ok();
    let tc_in_r = tc.contained_in(r_coh);
    let tau_eq_tc = tau_in_tc && tc.contained_in(&tau_locus).is_ok();
    let r_in_tc = r_coh.contained_in(&tc);
    let model_eq = r_model.map(|m| m.variety_eq(&tc));
    let (verdict, certificate) = if !tau_in_tc || tc_in_r.is_err() {
        (Verdict::Inconsistent, None)
    } else if let Err(g) = &r_in_tc {
        let point = grid_witness(r_coh, &tc);
        (
            Verdict::NonFormal,
            Some(StrictnessCertificate {
                inclusion: "TC1 ⊊ R".into(),
                generator: g.display(&names).to_string(),
                point,
            }),
        )
    } else if !tau_eq_tc {
        let g = tc.contained_in(&tau_locus).err().map(|g| g.display(&names).to_string()).unwrap_or_default();
        (
            Verdict::NonFormal,
            Some(StrictnessCertificate { inclusion: "tau1 ⊊ TC1".into(), generator: g, point: grid_witness(&tc, &tau_locus) }),
        )
    } else {
        (Verdict::ConsistentWithFormality, None)
    };
    FormalityReport {
        tau1: tau.iter().map(|s| s.to_strings(&names)).collect(),
        tc1: tc.to_json(),
        tau1_in_tc1: tau_in_tc,
        tc1_in_resonance: tc_in_r.is_ok(),
        tau1_eq_tc1: tau_eq_tc,
        tc1_eq_resonance: r_in_tc.is_ok() && tc_in_r.is_ok(),
        model_eq_tc1: model_eq,
        verdict,
        certificate,
    }
}

/// A point with coordinates in `[-2, 2]` lying on `big` but not on `small`.
pub fn grid_witness(big: &AffineLocus, small: &AffineLocus) -> Option<Vec<i64>> {
    let n = big.nvars();
    let mut p = vec![-2i64; n];
    loop {
        let q: Vec<Rational> = p.iter().map(|&v| Rational::from_int(v)).collect();
        if big.contains_point(&q) && !small.contains_point(&q) {
            return Some(p);
        }
        let mut k = 0;
        while k < n && p[k] == 2 {
            p[k] = -2;
            k += 1;
        }
        if k == n {
            return None;
        }
        p[k] += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum QuadricVerdict {
    /// `q = l₁·l₂` over ℚ.
    SplitsOverQ { factors: [String; 2] },
    IrreducibleOverQ,
    /// Rank ≥ 3; non-linearity is better certified by a cover refutation.
    Inconclusive { rank: usize },
}

/// Decides whether a homogeneous quadric factors into rational linear forms,
/// for forms of rank ≤ 2.
pub fn rational_quadric_test(q: &MultiPoly, names: &[String]) -> Result<QuadricVerdict> {
    if q.is_zero() || !q.is_homogeneous() || q.total_degree() != Some(2) {
        return Err(CoreError::Input("expected a homogeneous quadratic form".into()));
    }
    let n = q.nvars();
    // symmetric matrix of q
    let mut s = vec![vec![Rational::zero(); n]; n];
    let half = Rational::new(1, 2);
    for (m, c) in q.terms() {
        let vars: Vec<usize> = (0..n).flat_map(|j| std::iter::repeat(j).take(m.exp(j) as usize)).collect();
        let (i, j) = (vars[0], vars[1]);
        if i == j {
            s[i][i] = c.clone();
        } else {
            s[i][j] = c * &half;
            s[j][i] = c * &half;
        }
    }
    let (diag, forms) = congruence_diagonalize(s);
    let nz: Vec<usize> = (0..n).filter(|&k| !diag[k].is_zero()).collect();
    let lin = |v: &[Rational]| -> MultiPoly {
        let mut p = MultiPoly::zero(n);
        for (j, c) in v.iter().enumerate() {
            if !c.is_zero() {
                p = &p + &MultiPoly::var(n, j).scale(c);
            }
        }
        p
    };
    match nz.len() {
        1 => {
            let l = lin(&forms[nz[0]]);
            let l2 = l.scale(&diag[nz[0]]);
            Ok(QuadricVerdict::SplitsOverQ { factors: [l.display(names).to_string(), l2.display(names).to_string()] })
        }
        2 => {
            let (a, b) = (&diag[nz[0]], &diag[nz[1]]);
            let ratio = -(b / a);
            match ratio.sqrt_exact() {
                Some(r) => {
                    let l1 = lin(&forms[nz[0]]);
                    let l2 = lin(&forms[nz[1]]).scale(&r);
                    let f1 = (&l1 - &l2).scale(a);
                    let f2 = &l1 + &l2;
                    Ok(QuadricVerdict::SplitsOverQ { factors: [f1.display(names).to_string(), f2.display(names).to_string()] })
                }
                None => Ok(QuadricVerdict::IrreducibleOverQ),
            }
        }
        r => Ok(QuadricVerdict::Inconclusive { rank: r }),
    }
}

/// Writes `xᵀSx = Σ dₖ lₖ(x)²`; returns `(d, coefficient rows of lₖ)`.
fn congruence_diagonalize(mut s: Vec<Vec<Rational>>) -> (Vec<Rational>, Vec<Vec<Rational>>) {
    let n = s.len();
    // forms[k] expresses the current k-th coordinate in terms of x
    let mut forms: Vec<Vec<Rational>> = (0..n).map(|k| unit_row(n, k)).collect();
    let mut diag = Vec::new();
    let mut out_forms = Vec::new();
    let mut alive: Vec<usize> = (0..n).collect();
    while !alive.is_empty() {
        let piv = alive.iter().copied().find(|&i| !s[i][i].is_zero());
        let p = match piv {
            Some(p) => p,
            None => {
                let Some((i, j)) = alive.iter().flat_map(|&i| alive.iter().map(move |&j| (i, j))).find(|&(i, j)| i != j && !s[i][j].is_zero())
                else {
                    break;
                };
                // y_j = x_j - x_i... realized as congruence: add row/col j to i
                for k in 0..n {
                    let v = &s[i][k] + &s[j][k];
                    s[i][k] = v;
                }
                for k in 0..n {
                    let v = &s[k][i] + &s[k][j];
                    s[k][i] = v;
                }
                // new coordinate i' with x = ... : old y_j becomes y_j - y_i'
                let fi = forms[i].clone();
                let fj = forms[j].clone();
                // q(y) with y_i = u, y_j = u + w, i.e. u = y_i, w = y_j - y_i
                forms[j] = fj.iter().zip(&fi).map(|(a, b)| a - b).collect();
                i
            }
        };
        let a = s[p][p].clone();
        // q = a (y_p + Σ_{k≠p} s_pk/a y_k)² + rest
        let mut l = vec![Rational::zero(); n];
        for &k in &alive {
            let coef = &s[p][k] / &a;
            for (lj, fj) in l.iter_mut().zip(&forms[k]) {
                *lj = &*lj + &(&coef * fj);
            }
        }
        diag.push(a.clone());
        out_forms.push(l);
        let row = s[p].clone();
        for &i in &alive {
            for &j in &alive {
                let v = &s[i][j] - &(&(&row[i] * &row[j]) / &a);
                s[i][j] = v;
            }
        }
        alive.retain(|&k| k != p);
    }
    while diag.len() < n {
        diag.push(Rational::zero());
        out_forms.push(vec![Rational::zero(); n]);
    }
    (diag, out_forms)
}
