use std::sync::Arc;

use super::{build_algebra, Algebra, MultTable, NormKind};
use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::mideals::MIdealIdeal;

fn sum_pair(b: &Arc<Algebra>, c: &Arc<Algebra>) -> Result<Arc<Algebra>> {
    let (ub, uc) = match (b.identity(), c.identity()) {
        (Some(ub), Some(uc)) => (ub, uc),
        _ => return Err(Error::NotUnital),
    };
    let n = b.dim();
    let mut table = MultTable::new(n + c.dim());
    for t in b.terms() {
        table.add(t.i, t.j, t.k, t.value);
    }
    for t in c.terms() {
        table.add(t.i + n, t.j + n, t.k + n, t.value);
    }
    let identity = CVector::from_iterator(n + c.dim(), ub.iter().chain(uc.iter()).copied());
    let label = format!("{} (+)inf {}", b.label(), c.label());
    build_algebra(table, NormKind::LinfSum { left: b.clone(), right: c.clone() }, Some(identity), label)
}

/// `B ⊕∞ C` together with the M-ideal `B ⊕ 0`.
pub fn linf_sum(b: &Arc<Algebra>, c: &Arc<Algebra>) -> Result<(Arc<Algebra>, MIdealIdeal)> {
    let alg = sum_pair(b, c)?;
    let mut mask = vec![true; b.dim()];
    mask.extend(std::iter::repeat_n(false, c.dim()));
    let ideal = MIdealIdeal::coordinate(&alg, &mask)?;
    Ok((alg, ideal))
}

/// `A_1 ⊕∞ ... ⊕∞ A_m`, nested to the left, with the coordinate range of each summand.
pub fn linf_sum_many(parts: &[Arc<Algebra>]) -> Result<(Arc<Algebra>, Vec<std::ops::Range<usize>>)> {
    let (first, rest) = parts.split_first().ok_or_else(|| Error::InvalidInput("empty list of summands".into()))?;
    let mut acc = first.clone();
    let mut ranges = Vec::with_capacity(rest.len() + 1);
    ranges.push(0..first.dim());
    for p in rest {
        let start = acc.dim();
        acc = sum_pair(&acc, p)?;
        ranges.push(start..start + p.dim());
    }
    if !acc.is_unital() {
        return Err(Error::NotUnital);
    }
    Ok((acc, ranges))
}
