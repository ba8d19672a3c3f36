use std::sync::Arc;

use super::norm::op_norm;
use super::{basis_vector, build_algebra, Algebra, Element, MultTable, NormKind, OpDomain};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64, ONE};

/// The multiplier unitization `A¹` of an algebra.
///
/// A unital base is its own unitization. A base with an algebraic identity of
/// norm other than one keeps its dimension and is renormed by its left
/// regular representation. Otherwise an identity is adjoined as the last
/// coordinate.
#[derive(Debug, Clone)]
pub struct Unitization {
    base: Arc<Algebra>,
    algebra: Arc<Algebra>,
    adjoined: bool,
}

///
/// The result is cached on the base, so repeated calls share one algebra.
pub fn unitize(base: &Arc<Algebra>) -> Result<Unitization> {
    if let Some((algebra, adjoined)) = base.unitized.get() {
        return Ok(Unitization { base: base.clone(), algebra: algebra.clone(), adjoined: *adjoined });
    }
    let u = build_unitization(base)?;
    let (algebra, adjoined) = base.unitized.get_or_init(|| (u.algebra, u.adjoined));
    Ok(Unitization { base: base.clone(), algebra: algebra.clone(), adjoined: *adjoined })
}

fn build_unitization(base: &Arc<Algebra>) -> Result<Unitization> {
    if base.is_unital() {
        return Ok(Unitization { base: base.clone(), algebra: base.clone(), adjoined: false });
    }
    let n = base.dim();
    let (domain, weights, mut rep) = match base.norm_kind() {
        NormKind::L1 { weights } => {
            let rep: Vec<CMatrix> = (0..n).map(|i| base.left_basis_matrix(i).clone()).collect();
            for (i, r) in rep.iter().enumerate() {
                let rep_norm = op_norm(r, OpDomain::L1, weights.as_deref(), false)?.value;
                let norm = base.try_norm(&basis_vector(n, i))?;
                if (rep_norm - norm).abs() > 1e-12 * norm.max(1.0) {
                    return Err(Error::NotIsometricRegularRep { index: i, rep_norm, norm });
                }
            }
            (OpDomain::L1, weights.clone(), rep)
        }
        NormKind::OpNorm { domain, weights, rep } => (*domain, weights.clone(), rep.clone()),
        NormKind::LinfSum { .. } => return Err(Error::UnsupportedNormKind("unitization of an l-infinity sum")),
    };
    let label = format!("{}^1", base.label());

    // L1 bases with an algebraic identity u have L_u = I already.
    if let (Some(u), NormKind::L1 { .. }) = (base.algebraic_identity(), base.norm_kind()) {
        let table = table_of(base, n);
        let kind = NormKind::OpNorm { domain, weights, rep };
        let algebra = build_algebra(table, kind, Some(u.clone()), label)?;
        return Ok(Unitization { base: base.clone(), algebra, adjoined: false });
    }

    let size = rep[0].nrows();
    rep.push(CMatrix::identity(size, size));
    let mut table = table_of(base, n + 1);
    for j in 0..=n {
        table.add(n, j, j, ONE);
        if j < n {
            table.add(j, n, j, ONE);
        }
    }
    let kind = NormKind::OpNorm { domain, weights, rep };
    let algebra = build_algebra(table, kind, Some(basis_vector(n + 1, n)), label)?;
    Ok(Unitization { base: base.clone(), algebra, adjoined: true })
}

fn table_of(base: &Algebra, dim: usize) -> MultTable {
    let mut t = MultTable::new(dim);
    for term in base.terms() {
        t.add(term.i, term.j, term.k, term.value);
    }
    t
}

impl Unitization {
    pub fn base(&self) -> &Arc<Algebra> {
        &self.base
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    /// Whether an identity coordinate was adjoined.
    pub fn is_adjoined(&self) -> bool {
        self.adjoined
    }

    /// Image of a base element in `A¹`. Elements already in `A¹` pass through.
    pub fn embed(&self, a: &Element) -> Result<Element> {
        if Arc::ptr_eq(a.algebra(), &self.algebra) {
            return Ok(a.clone());
        }
        if !Arc::ptr_eq(a.algebra(), &self.base) {
            return Err(Error::AlgebraMismatch);
        }
        let mut c = a.coeffs().clone();
        if self.adjoined {
            c = c.push(C64::from(0.0));
        }
        Element::new(&self.algebra, c)
    }

    /// `a + λ1` in `A¹`.
    pub fn element(&self, a: &Element, lambda: C64) -> Result<Element> {
        self.embed(a)?.plus_scalar(lambda)
    }

    /// The trivial character `a + λ1 ↦ λ`; defined only when an identity was adjoined.
    pub fn trivial_character(&self, x: &Element) -> Option<C64> {
        self.adjoined.then(|| x.coeffs()[self.base.dim()])
    }

    /// Maps an element of `A¹` with vanishing scalar part back to the base.
    /// The scalar coordinate, if any, is dropped.
    pub fn to_base(&self, x: &Element) -> Result<Element> {
        if Arc::ptr_eq(x.algebra(), &self.base) {
            return Ok(x.clone());
        }
        if !Arc::ptr_eq(x.algebra(), &self.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        match self.base_part(x) {
            Some(b) => Ok(b),
            None => x.rebind(&self.base),
        }
    }

    /// The base component `a` of `a + λ1`; defined only when an identity was adjoined.
    pub fn base_part(&self, x: &Element) -> Option<Element> {
        if !self.adjoined {
            return None;
        }
        let n = self.base.dim();
        Some(Element::from_vec_unchecked(&self.base, CVector::from(x.coeffs().rows(0, n).clone_owned())))
    }
}
