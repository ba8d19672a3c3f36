use super::{Algebra, NormKind, OpDomain};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64, ONE, ZERO};
use crate::tol::Tolerances;

const POWER_ITERATION_CAP: usize = 20_000;

/// Value of an operator norm together with a functional attaining it.
pub(crate) struct Normed {
    pub value: f64,
    /// `φ` with `Re Σ φ_i a_i = ‖a‖` and `|Re Σ φ_i b_i| ≤ ‖b‖` for every `b`.
    pub functional: CVector,
}

impl Algebra {
    /// Norm of a coefficient vector. Fails only when l2 power iteration stalls.
    pub fn try_norm(&self, a: &CVector) -> Result<f64> {
        match &self.norm_kind {
            NormKind::L1 { weights } => Ok(weighted_l1(a, weights.as_deref())),
            NormKind::OpNorm { domain, weights, rep } => {
                let m = represent(rep, a);
                op_norm(&m, *domain, weights.as_deref(), false).map(|n| n.value)
            }
            NormKind::LinfSum { left, right } => {
                let (b, c) = split(a, left.dim);
                Ok(left.try_norm(&b)?.max(right.try_norm(&c)?))
            }
        }
    }

    /// Norm of a coefficient vector; a stalled l2 power iteration returns its
    /// last estimate. Use [`Algebra::try_norm`] to surface the stall.
    pub fn norm(&self, a: &CVector) -> f64 {
        match self.try_norm(a) {
            Ok(n) => n,
            Err(Error::PowerIterationStalled { estimate }) => estimate,
            Err(_) => unreachable!("norm evaluation only fails by stalling"),
        }
    }

    /// A norming functional for `a` in coefficient coordinates.
    pub(crate) fn norming_functional(&self, a: &CVector) -> Normed {
        match &self.norm_kind {
            NormKind::L1 { weights } => {
                let functional = CVector::from_iterator(
                    a.len(),
                    a.iter().enumerate().map(|(i, z)| {
                        let w = weights.as_ref().map_or(1.0, |w| w[i]);
                        sign(*z).conj() * w
                    }),
                );
                Normed { value: weighted_l1(a, weights.as_deref()), functional }
            }
            NormKind::OpNorm { domain, weights, rep } => {
                let m = represent(rep, a);
                let n = match op_norm(&m, *domain, weights.as_deref(), true) {
                    Ok(n) => n,
                    Err(_) => op_norm_l2_lenient(&m),
                };
                // n.functional is a matrix functional tr(F M); pull back through rep.
                let f = CMatrix::from_column_slice(m.nrows(), m.ncols(), n.functional.as_slice());
                let functional = CVector::from_iterator(rep.len(), rep.iter().map(|r| r.component_mul(&f).sum()));
                Normed { value: n.value, functional }
            }
            NormKind::LinfSum { left, right } => {
                let (b, c) = split(a, left.dim);
                let nb = left.norming_functional(&b);
                let nc = right.norming_functional(&c);
                let mut functional = CVector::zeros(a.len());
                let value = if nb.value >= nc.value {
                    functional.rows_mut(0, left.dim).copy_from(&nb.functional);
                    nb.value
                } else {
                    functional.rows_mut(left.dim, right.dim).copy_from(&nc.functional);
                    nc.value
                };
                Normed { value, functional }
            }
        }
    }
}

/// Minimizes `‖a0 + B t‖` over complex `t` by subgradient descent with steps
/// `c/√k`, `B` having orthonormal columns. Returns the best point and value.
pub(crate) fn minimize_norm_affine(alg: &Algebra, a0: &CVector, b: &CMatrix, iters: usize) -> (CVector, f64) {
    let mut best = (a0.clone(), alg.norm(a0));
    if b.ncols() == 0 {
        return best;
    }
    let c = 0.5 * crate::linalg::norm2(a0).max(1e-12);
    let mut t = CVector::zeros(b.ncols());
    for k in 1..=iters {
        let a = a0 + b * &t;
        let n = alg.norming_functional(&a);
        if n.value < best.1 {
            best = (a.clone(), n.value);
        }
        // Re φᵀ(a0 + Bt) is a supporting affine minorant; its gradient in t is conj(Bᵀφ).
        let g = (b.transpose() * &n.functional).map(|z| z.conj());
        let gn = crate::linalg::norm2(&g);
        if gn == 0.0 {
            break;
        }
        t -= g * C64::from(c / (k as f64).sqrt() / gn);
    }
    best
}

pub(crate) fn split(a: &CVector, n: usize) -> (CVector, CVector) {
    (a.rows(0, n).clone_owned(), a.rows(n, a.len() - n).clone_owned())
}

pub(crate) fn represent(rep: &[CMatrix], a: &CVector) -> CMatrix {
    let mut m = CMatrix::zeros(rep[0].nrows(), rep[0].ncols());
    for (r, z) in rep.iter().zip(a.iter()) {
        if *z != ZERO {
            m += r * *z;
        }
    }
    m
}

fn weighted_l1(a: &CVector, weights: Option<&[f64]>) -> f64 {
    match weights {
        None => a.iter().map(|z| z.norm()).sum(),
        Some(w) => a.iter().zip(w).map(|(z, w)| z.norm() * w).sum(),
    }
}

fn sign(z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        ONE
    } else {
        z / r
    }
}

/// Operator norm of a matrix on a weighted coordinate space. When
/// `with_functional` is set the returned functional `F` (stored column-major)
/// satisfies `Re Σ F_ij M_ij = ‖M‖` and `|Re Σ F_ij N_ij| ≤ ‖N‖`.
pub(crate) fn op_norm(m: &CMatrix, domain: OpDomain, weights: Option<&[f64]>, with_functional: bool) -> Result<Normed> {
    let (r, c) = m.shape();
    match domain {
        OpDomain::L1 => {
            let w = |i: usize| weights.map_or(1.0, |w| w[i]);
            let mut best = (0.0, 0);
            for j in 0..c {
                let s: f64 = (0..r).map(|i| w(i) * m[(i, j)].norm()).sum::<f64>() / w(j);
                if s > best.0 {
                    best = (s, j);
                }
            }
            let mut f = CMatrix::zeros(r, c);
            if with_functional {
                let j = best.1;
                for i in 0..r {
                    f[(i, j)] = sign(m[(i, j)]).conj() * (w(i) / w(j));
                }
            }
            Ok(Normed { value: best.0, functional: flatten(f) })
        }
        OpDomain::Linf => {
            let mut best = (0.0, 0);
            for i in 0..r {
                let s: f64 = (0..c).map(|j| m[(i, j)].norm()).sum();
                if s > best.0 {
                    best = (s, i);
                }
            }
            let mut f = CMatrix::zeros(r, c);
            if with_functional {
                let i = best.1;
                for j in 0..c {
                    f[(i, j)] = sign(m[(i, j)]).conj();
                }
            }
            Ok(Normed { value: best.0, functional: flatten(f) })
        }
        OpDomain::L2 => {
            let (value, u, v) = power_iteration(m)?;
            let f = if with_functional {
                // Re u* M v = σ, so F_ij = conj(u_i) v_j.
                CMatrix::from_fn(r, c, |i, j| u[i].conj() * v[j])
            } else {
                CMatrix::zeros(r, c)
            };
            Ok(Normed { value, functional: flatten(f) })
        }
    }
}

fn flatten(f: CMatrix) -> CVector {
    let (r, c) = f.shape();
    CVector::from_vec(f.reshape_generic(nalgebra::Dyn(r * c), nalgebra::Dyn(1)).as_slice().to_vec())
}

fn op_norm_l2_lenient(m: &CMatrix) -> Normed {
    let (value, u, v) = crate::linalg::top_singular_triple(m);
    let f = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| u[i].conj() * v[j]);
    Normed { value, functional: flatten(f) }
}

/// Largest singular value by power iteration on `M* M`, with the left and
/// right singular vectors.
fn power_iteration(m: &CMatrix) -> Result<(f64, CVector, CVector)> {
    let (r, c) = m.shape();
    if m.iter().all(|z| *z == ZERO) {
        let mut u = CVector::zeros(r);
        u[0] = ONE;
        let mut v = CVector::zeros(c);
        v[0] = ONE;
        return Ok((0.0, u, v));
    }
    let tol = Tolerances::DEFAULT.power_iteration;
    // Deterministic start with no special alignment.
    let mut v = CVector::from_fn(c, |j, _| C64::new(1.0 + 0.37 * j as f64, 0.11 * (j as f64 + 1.0).sqrt()));
    v /= C64::from(v.norm());
    let mh = m.adjoint();
    let mut prev = 0.0;
    let mut sigma = 0.0;
    for it in 0..POWER_ITERATION_CAP {
        let mv = m * &v;
        sigma = mv.norm();
        if sigma == 0.0 {
            // Start vector fell in the kernel; restart on a basis vector.
            v = CVector::zeros(c);
            v[it % c] = ONE;
            continue;
        }
        let mut w = &mh * &mv;
        let wn = w.norm();
        w /= C64::from(wn);
        v = w;
        if it > 2 && (sigma - prev).abs() <= tol * sigma {
            let mv = m * &v;
            let s = mv.norm();
            let u = mv / C64::from(s);
            return Ok((s, u, v));
        }
        prev = sigma;
    }
    Err(Error::PowerIterationStalled { estimate: sigma })
}
