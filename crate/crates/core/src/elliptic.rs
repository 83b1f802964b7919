//! Unimodular elliptic arrangements in `E^×n` and their CDGA models.

use jumploci_symbolic::{smith_normal_form_i64, MultiPoly, PolyMatrix, Rational};
use serde::{Deserialize, Serialize};

use crate::cdga::FiniteCdga;
use crate::error::{CoreError, Result};
use crate::exterior::{elt, ExtElt, ExteriorQuotient};
use crate::jump_loci::{
    resonance_locus, resonance_of_cohomology, support_locus, with_certified_cover, AffineLocus, AffineLocusJson,
    LinearSubspace, SupportVariant,
};
use crate::tcone::{tangent_cone_formula_check, FormalityReport, TorusLocus, Verdict};

const MAX_ROWS: usize = 16;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EllipticJson {
    pub n: usize,
    pub rows: Vec<Vec<i64>>,
    /// Translation points of the hyperplanes; the model does not depend on them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translations: Option<Vec<serde_json::Value>>,
}

/// Hypersurfaces `f_i(z) = Σ c_ij z_j = ζ_i` in `E^×n`, given by the rows `c_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticArrangement {
    n: usize,
    rows: Vec<Vec<i64>>,
    translations_ignored: bool,
}

impl EllipticArrangement {
    pub fn new(n: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(CoreError::DimensionMismatch(format!("row {} has {} entries, n = {n}", i + 1, r.len())));
            }
            if r.iter().all(|&v| v == 0) {
                return Err(CoreError::Input(format!("row {} is zero", i + 1)));
            }
        }
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if int_rank(&[rows[i].clone(), rows[j].clone()]) < 2 {
                    return Err(CoreError::Input(format!("rows {} and {} are proportional", i + 1, j + 1)));
                }
            }
        }
        Ok(EllipticArrangement { n, rows, translations_ignored: false })
    }

    pub fn from_json(j: &EllipticJson) -> Result<Self> {
        let mut a = Self::new(j.n, j.rows.clone())?;
        a.translations_ignored = j.translations.is_some();
        Ok(a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn translations_ignored(&self) -> bool {
        self.translations_ignored
    }

    /// `x1, y1, …, xn, yn`, dual to `a1, b1, …, an, bn`.
    pub fn variable_names(&self) -> Vec<String> {
        (1..=self.n).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect()
    }
}

fn int_rank(rows: &[Vec<i64>]) -> usize {
    smith_normal_form_i64(rows).rank()
}

fn subsets(m: usize, max: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1u32 << m))
        .filter(move |s| s.count_ones() as usize <= max)
        .map(move |s| (0..m).filter(|&i| s & (1 << i) != 0).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Unimodularity {
    Ok,
    Fail {
        /// 1-based row indices.
        witness: Vec<usize>,
        divisors: Vec<i64>,
    },
}

/// Every intersection of hypersurfaces is connected iff for every subset of
/// rows the nonzero elementary divisors are all 1.
pub fn unimodularity_check(a: &EllipticArrangement) -> Result<Unimodularity> {
    let m = a.len();
    if m > MAX_ROWS {
        return Err(CoreError::SizeBound { what: "elliptic arrangement rows".into(), size: m, bound: MAX_ROWS });
    }
    let mut all: Vec<Vec<usize>> = subsets(m, m).collect();
    all.sort_by_key(|s| (s.len(), s.clone()));
    for s in all {
        let sub: Vec<Vec<i64>> = s.iter().map(|&i| a.rows[i].clone()).collect();
        let d = smith_normal_form_i64(&sub).divisors_i64();
        if d.iter().any(|&v| v != 1) {
            return Ok(Unimodularity::Fail { witness: s.iter().map(|i| i + 1).collect(), divisors: d });
        }
    }
    Ok(Unimodularity::Ok)
}

/// Model `Λ(a_i, b_i, e_j) / I` with `I` generated by `f_j*(a) e_j`,
/// `f_j*(b) e_j` and `∂e_S` for dependent sets `S`, and `d e_j = f_j*(a) f_j*(b)`.
pub fn elliptic_model(a: &EllipticArrangement) -> Result<FiniteCdga> {
    if let Unimodularity::Fail { witness, .. } = unimodularity_check(a)? {
        return Err(CoreError::NotUnimodular { witness });
    }
    let n = a.n;
    let m = a.len();
    let ai = |j: usize| 2 * j;
    let bi = |j: usize| 2 * j + 1;
    let ei = |k: usize| 2 * n + k;
    let pull = |row: &[i64], gen: &dyn Fn(usize) -> usize, extra: &[usize]| -> ExtElt {
        let terms: Vec<(Vec<usize>, i64)> = row
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| {
                let mut idx = vec![gen(j)];
                idx.extend_from_slice(extra);
                (idx, c)
            })
            .collect();
        let refs: Vec<(&[usize], i64)> = terms.iter().map(|(v, c)| (v.as_slice(), *c)).collect();
        elt(&refs)
    };
    let mut names = Vec::new();
    for j in 1..=n {
        names.push(format!("a{j}"));
        names.push(format!("b{j}"));
    }
    names.extend((1..=m).map(|k| format!("e{k}")));
    let mut relations = Vec::new();
    for (k, row) in a.rows.iter().enumerate() {
        relations.push(pull(row, &ai, &[ei(k)]));
        relations.push(pull(row, &bi, &[ei(k)]));
    }
    let top = 2 * n;
    for s in subsets(m, m) {
        if s.len() < 3 {
            continue;
        }
        let sub: Vec<Vec<i64>> = s.iter().map(|&i| a.rows[i].clone()).collect();
        if int_rank(&sub) == s.len() || s.len() - 1 > top + 1 {
            continue;
        }
        let terms: Vec<(Vec<usize>, i64)> = (0..s.len())
            .map(|p| {
                let idx: Vec<usize> = s.iter().enumerate().filter(|(q, _)| *q != p).map(|(_, &i)| ei(i)).collect();
                (idx, if p % 2 == 0 { 1 } else { -1 })
            })
            .collect();
        let refs: Vec<(&[usize], i64)> = terms.iter().map(|(v, c)| (v.as_slice(), *c)).collect();
        relations.push(elt(&refs));
    }
    let mut differential = vec![ExtElt::new(); 2 * n];
    for row in &a.rows {
        let fa = pull(row, &ai, &[]);
        let fb = pull(row, &bi, &[]);
        differential.push(crate::exterior::mul_elts(&fa, &fb));
    }
    let mut classes = vec![0u8; 2 * n];
    classes.extend(std::iter::repeat(1).take(m));
    let mut weights = vec![1i64; 2 * n];
    weights.extend(std::iter::repeat(2).take(m));
    let q = ExteriorQuotient { names, classes, relations, differential, weights: Some(weights), max_degree: top + 1 };
    let model = q.build()?;
    if model.top_degree() > top {
        return Err(CoreError::Certification(format!("model has classes in degree {} > 2n", model.top_degree())));
    }
    Ok(model.with_variables(a.variable_names()))
}

/// `Conf(E*, 2)`: the hypersurfaces `z₁ = 0`, `z₂ = 0`, `z₁ = z₂` in `E²`.
pub fn conf_e_star_2() -> EllipticArrangement {
    EllipticArrangement::new(2, vec![vec![1, 0], vec![0, 1], vec![1, -1]]).expect("valid arrangement")
}

/// `∂₂` of the universal complex of the `Conf(E*, 2)` model; rows
/// `a1 b1 a2 b2 e1 e2 e3`, columns
/// `a1b1 a1a2 a1b2 b1a2 b1b2 a2b2 a2e1 b2e1 a1e2 b1e2 a1e3 b1e3 e1e2 e1e3`.
pub const CONF_BOUNDARY2: [[&str; 14]; 7] = [
    ["-y1", "-x2", "-y2", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["x1", "0", "0", "-x2", "-y2", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "x1", "0", "y1", "0", "-y2", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "x1", "0", "y1", "x2", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["1", "0", "0", "0", "0", "0", "x2", "y2", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "1", "0", "0", "x1", "y1", "0", "0", "0", "0"],
    ["1", "0", "-1", "1", "0", "1", "0", "0", "0", "0", "x1 + x2", "y1 + y2", "0", "0"],
];

pub const CONF_BOUNDARY1: [&str; 7] = ["x1", "y1", "x2", "y2", "0", "0", "0"];

pub const CONF_DEGREE2_BASIS: [&str; 14] =
    ["a1b1", "a1a2", "a1b2", "b1a2", "b1b2", "a2b2", "a2e1", "b2e1", "a1e2", "b1e2", "a1e3", "b1e3", "e1e2", "e1e3"];

pub fn conf_resonance_planes() -> Vec<LinearSubspace> {
    vec![
        LinearSubspace::from_i64(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]),
        LinearSubspace::from_i64(4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]),
        LinearSubspace::from_i64(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]),
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConfPipelineReport {
    pub dims: Vec<usize>,
    pub degree2_basis: Vec<String>,
    pub h1_basis: Vec<String>,
    pub boundary1: Vec<String>,
    pub boundary2: Vec<Vec<String>>,
    pub r1_model: AffineLocusJson,
    pub r1_cohomology: AffineLocusJson,
    pub h1_support: AffineLocusJson,
    pub formality: FormalityReport,
    pub checks: Vec<Check>,
}

impl ConfPipelineReport {
    pub fn verdict(&self) -> Verdict {
        self.formality.verdict
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

fn compare_matrix(label: &str, got: &PolyMatrix, want: &[Vec<&str>], rows: &[String], cols: &[String], names: &[String]) -> Result<()> {
    if got.nrows() != want.len() || want.iter().any(|r| r.len() != got.ncols()) {
        return Err(CoreError::Mismatch(format!("{label}: shape {}x{}", got.nrows(), got.ncols())));
    }
    for (r, row) in want.iter().enumerate() {
        for (c, w) in row.iter().enumerate() {
            let w = MultiPoly::parse(w, names)?;
            if got.get(r, c) != &w {
                return Err(CoreError::Mismatch(format!(
                    "{label}[{}, {}]: expected {}, got {}",
                    rows[r],
                    cols[c],
                    w.display(names),
                    got.get(r, c).display(names)
                )));
            }
        }
    }
    Ok(())
}

/// Builds the `Conf(E*, 2)` model, checks it against the known matrices and
/// loci, and runs the tangent cone formula against `v1`.
pub fn conf_e_pipeline(v1: &TorusLocus) -> Result<ConfPipelineReport> {
    let model = elliptic_model(&conf_e_star_2())?;
    let mut checks = Vec::new();
    let mut check = |name: &str, ok: bool, detail: Option<String>| checks.push(Check { name: name.into(), ok, detail });

    let violations = model.validate();
    let wv = model.validate_weights()?;
    if !violations.is_empty() || !wv.is_empty() {
        return Err(CoreError::InvalidCdga(violations.into_iter().chain(wv).collect()));
    }
    check("model validates with positive weights", true, None);
    let basis2 = model.names(2).to_vec();
    if basis2 != CONF_DEGREE2_BASIS {
        return Err(CoreError::Mismatch(format!("degree-2 basis {basis2:?}")));
    }
    let h1_basis: Vec<String> = model.cohomology(1).reps.iter().map(|r| render_rep(&model, r)).collect();
    if h1_basis != ["a1", "b1", "a2", "b2"] {
        return Err(CoreError::Mismatch(format!("H¹ basis {h1_basis:?}")));
    }
    check("H¹ has basis a1 b1 a2 b2", true, None);

    let u = model.universal_complex();
    let names = u.names.clone();
    let b2 = u.boundary(2);
    let b1 = u.boundary(1);
    let want2: Vec<Vec<&str>> = CONF_BOUNDARY2.iter().map(|r| r.to_vec()).collect();
    compare_matrix("∂₂", &b2, &want2, model.names(1), &basis2, &names)?;
    compare_matrix("∂₁", &b1, &[CONF_BOUNDARY1.to_vec()], &["1".to_string()], model.names(1), &names)?;
    check("∂₂ and ∂₁ match", true, None);

    let r1 = resonance_locus(&model, 1)?;
    let r1 = with_certified_cover(r1, conf_resonance_planes())
        .map_err(|c| CoreError::Certification(format!("R¹ is not the three planes: {c:?}")))?;
    check("R¹(A) is the union of three planes", true, None);

    let quadric = MultiPoly::parse("x1*y2 - x2*y1", &names)?;
    let r1h = resonance_of_cohomology(&model, 1)?;
    let q_locus = AffineLocus::new(names.clone(), vec![jumploci_symbolic::Ideal::new(names.clone(), vec![quadric])]);
    if !r1h.variety_eq(&q_locus) {
        return Err(CoreError::Mismatch("R¹(H) is not the quadric x1*y2 - x2*y1".into()));
    }
    check("R¹(H) is the quadric x1*y2 - x2*y1", true, None);

    let planes = AffineLocus::from_subspaces(names.clone(), &conf_resonance_planes());
    let sup = support_locus(&model, 1, SupportVariant::Homological)?;
    let sup_ok = sup.variety_eq(&planes);
    check("support of H₁ is the three planes", sup_ok, None);

    let formality = tangent_cone_formula_check(v1, Some(&r1), &r1h)?;
    let tau_ok = formality.tau1_eq_tc1 && formality.model_eq_tc1 == Some(true);
    check("τ₁ = TC₁ = R¹(A)", tau_ok, None);
    check("verdict NON-FORMAL", formality.verdict == Verdict::NonFormal, formality.certificate.as_ref().map(|c| c.generator.clone()));

    Ok(ConfPipelineReport {
        dims: model.dims(),
        degree2_basis: basis2,
        h1_basis,
        boundary1: b1.to_strings(&names).remove(0),
        boundary2: b2.to_strings(&names),
        r1_model: r1.to_json(),
        r1_cohomology: r1h.to_json(),
        h1_support: sup.to_json(),
        formality,
        checks,
    })
}

fn render_rep(a: &FiniteCdga, v: &[Rational]) -> String {
    let names = a.names(1);
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    if nz.len() == 1 && v[nz[0]] == Rational::one() {
        names[nz[0]].clone()
    } else {
        nz.iter().map(|&i| format!("{}*{}", v[i], names[i])).collect::<Vec<_>>().join(" + ")
    }
}
