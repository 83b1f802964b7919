//! Presentations of homology modules of complexes of free S-modules and
//! their Fitting-ideal supports.

use crate::error::{AlgebraError, Result};
use crate::ideal::Ideal;
use crate::matrix::PolyMatrix;
use crate::minors::{eliminate_units, fitting_style_ideal};
use crate::module::ColumnSpan;

/// Chain complex `F_0 <- F_1 <- ... <- F_len` of free modules; cochain
/// complexes are built with [`PolyComplex::from_cochain`].
#[derive(Clone, Debug)]
pub struct PolyComplex {
    nvars: usize,
    ranks: Vec<usize>,
    /// `maps[i]` goes from position `i + 1` to position `i`.
    maps: Vec<PolyMatrix>,
}

impl PolyComplex {
    /// Chain complex from boundary matrices `∂_1, ∂_2, ...` where `∂_i`
    /// maps `C_i -> C_{i-1}` and has shape `rank(C_{i-1}) x rank(C_i)`.
    pub fn from_boundaries(nvars: usize, ranks: Vec<usize>, boundaries: Vec<PolyMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != ranks.len() {
            return Err(AlgebraError::DimensionMismatch("need one boundary per consecutive pair of ranks".into()));
        }
        for (i, m) in boundaries.iter().enumerate() {
            if m.nvars() != nvars {
                return Err(AlgebraError::RingMismatch { expected: nvars, found: m.nvars() });
            }
            if m.nrows() != ranks[i] || m.ncols() != ranks[i + 1] {
                return Err(AlgebraError::DimensionMismatch(format!(
                    "boundary {} is {}x{}, expected {}x{}",
                    i + 1,
                    m.nrows(),
                    m.ncols(),
                    ranks[i],
                    ranks[i + 1]
                )));
            }
        }
        Ok(PolyComplex { nvars, ranks, maps: boundaries })
    }

    /// Cochain complex from `δ^0, δ^1, ...` where `δ^i: C^i -> C^{i+1}` has
    /// shape `rank(C^{i+1}) x rank(C^i)`. Position `i` of the result is `C^i`;
    /// use [`CochainComplex::cohomology_presentation`] on it.
    pub fn from_cochain(nvars: usize, ranks: Vec<usize>, coboundaries: Vec<PolyMatrix>) -> Result<CochainComplex> {
        if coboundaries.len() + 1 != ranks.len() {
            return Err(AlgebraError::DimensionMismatch("need one coboundary per consecutive pair of ranks".into()));
        }
        for (i, m) in coboundaries.iter().enumerate() {
            if m.nvars() != nvars {
                return Err(AlgebraError::RingMismatch { expected: nvars, found: m.nvars() });
            }
            if m.nrows() != ranks[i + 1] || m.ncols() != ranks[i] {
                return Err(AlgebraError::DimensionMismatch(format!(
                    "coboundary {} is {}x{}, expected {}x{}",
                    i,
                    m.nrows(),
                    m.ncols(),
                    ranks[i + 1],
                    ranks[i]
                )));
            }
        }
        Ok(CochainComplex { nvars, ranks, maps: coboundaries })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `∂_i: C_i -> C_{i-1}` for `1 <= i <= len`.
    pub fn boundary(&self, i: usize) -> Option<&PolyMatrix> {
        if i == 0 {
            return None;
        }
        self.maps.get(i - 1)
    }

    pub fn boundaries(&self) -> &[PolyMatrix] {
        &self.maps
    }

    /// Presentation of `H_i = ker ∂_i / im ∂_{i+1}`.
    pub fn homology_presentation(&self, i: usize) -> Result<Presentation> {
        if i >= self.ranks.len() {
            return Ok(Presentation::zero(self.nvars));
        }
        present(self.nvars, self.ranks[i], self.boundary(i), self.boundary(i + 1), i)
    }
}

#[derive(Clone, Debug)]
pub struct CochainComplex {
    nvars: usize,
    ranks: Vec<usize>,
    maps: Vec<PolyMatrix>,
}

impl CochainComplex {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `δ^i: C^i -> C^{i+1}`.
    pub fn coboundary(&self, i: usize) -> Option<&PolyMatrix> {
        self.maps.get(i)
    }

    pub fn coboundaries(&self) -> &[PolyMatrix] {
        &self.maps
    }

    /// Presentation of `H^i = ker δ^i / im δ^{i-1}`.
    pub fn cohomology_presentation(&self, i: usize) -> Result<Presentation> {
        if i >= self.ranks.len() {
            return Ok(Presentation::zero(self.nvars));
        }
        let incoming = if i == 0 { None } else { self.maps.get(i - 1) };
        present(self.nvars, self.ranks[i], self.maps.get(i), incoming, i)
    }
}

/// A finitely presented module `S^g / (columns of relations)`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: usize,
    pub relations: PolyMatrix,
}

impl Presentation {
    fn zero(nvars: usize) -> Self {
        Presentation { generators: 0, relations: PolyMatrix::zeros(nvars, 0, 0) }
    }

    /// Zeroth Fitting ideal: its variety is the support of the module.
    pub fn fitting_support(&self, names: &[String]) -> Result<Ideal> {
        fitting_support(&self.relations, self.generators, names)
    }
}

/// Fitting ideal `I_g` of a relations matrix with `g` rows; `(1)` when
/// `g = 0`, `(0)` when there are fewer than `g` relations.
pub fn fitting_support(p: &PolyMatrix, g: usize, names: &[String]) -> Result<Ideal> {
    if p.nrows() != g {
        return Err(AlgebraError::DimensionMismatch(format!("presentation has {} rows, expected {g}", p.nrows())));
    }
    fitting_style_ideal(p, g, names)
}

/// `ker(out) / im(inc)` at a position of rank `r`.
fn present(nvars: usize, r: usize, out: Option<&PolyMatrix>, inc: Option<&PolyMatrix>, position: usize) -> Result<Presentation> {
    if let (Some(a), Some(b)) = (out, inc) {
        if !a.mul(b)?.is_zero() {
            return Err(AlgebraError::NotAComplex { position });
        }
    }
    let kernel = match out {
        Some(a) if !a.is_zero() => ColumnSpan::new(a).syzygies(),
        _ => PolyMatrix::identity(nvars, r),
    };
    let g = kernel.ncols();
    let span = ColumnSpan::new(&kernel);
    let mut rel_cols = Vec::new();
    if let Some(b) = inc {
        for j in 0..b.ncols() {
            let c = b.col(j);
            if c.iter().all(|p| p.is_zero()) {
                continue;
            }
            let lifted = span.lift(&c).ok_or(AlgebraError::NotAComplex { position })?;
            rel_cols.push(lifted);
        }
    }
    let syz = span.syzygies();
    rel_cols.extend(syz.columns().into_iter().filter(|c| c.iter().any(|p| !p.is_zero())));
    let relations = PolyMatrix::from_columns(nvars, g, rel_cols);
    Ok(prune(Presentation { generators: g, relations }))
}

/// Removes generator/relation pairs joined by a constant entry.
pub fn prune(p: Presentation) -> Presentation {
    let g = p.generators;
    let (m, left) = eliminate_units(&p.relations, g);
    let cols: Vec<usize> = (0..m.ncols()).filter(|&c| (0..m.nrows()).any(|r| !m.get(r, c).is_zero())).collect();
    let relations = m.submatrix(&(0..m.nrows()).collect::<Vec<_>>(), &cols);
    debug_assert_eq!(relations.nrows(), left);
    Presentation { generators: left, relations }
}
