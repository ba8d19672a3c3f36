//! Finite-dimensional complex Banach algebras given by structure constants.

mod element;
mod functions;
mod norm;
mod sum;
mod unitization;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{lstsq, max_abs, norm2, CMatrix, CVector, C64, ZERO};
use crate::tol::Tolerances;

pub use element::{multiply, Element};
pub use functions::{exp_scaled, invert, resolvent};
pub(crate) use norm::minimize_norm_affine;
pub use sum::{linf_sum, linf_sum_many};
pub use unitization::{unitize, Unitization};

/// Largest supported algebra dimension.
pub const MAX_DIM: usize = 64;

/// Coordinate space on which an operator-norm algebra acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpDomain {
    L1,
    Linf,
    L2,
}

#[derive(Debug, Clone)]
pub enum NormKind {
    /// Weighted coefficient l1 norm.
    L1 { weights: Option<Vec<f64>> },
    /// Operator norm of a faithful representation on a normed coordinate
    /// space. Weights only apply to the l1 domain.
    OpNorm { domain: OpDomain, weights: Option<Vec<f64>>, rep: Vec<CMatrix> },
    /// `left ⊕∞ right`, coordinates of `left` first.
    LinfSum { left: Arc<Algebra>, right: Arc<Algebra> },
}

impl NormKind {
    pub fn l1() -> Self {
        NormKind::L1 { weights: None }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NormKind::L1 { .. } => "l1",
            NormKind::OpNorm { .. } => "opnorm",
            NormKind::LinfSum { .. } => "linf_sum",
        }
    }
}

/// One nonzero structure constant: `e_i · e_j` has coefficient `value` on `e_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: C64,
}

/// Sparse multiplication table.
#[derive(Debug, Clone, Default)]
pub struct MultTable {
    dim: usize,
    terms: Vec<Term>,
}

impl MultTable {
    pub fn new(dim: usize) -> Self {
        MultTable { dim, terms: Vec::new() }
    }

    /// Adds `value` to the coefficient of `e_k` in `e_i · e_j`.
    pub fn add(&mut self, i: usize, j: usize, k: usize, value: C64) -> &mut Self {
        if value != ZERO {
            self.terms.push(Term { i, j, k, value });
        }
        self
    }

    /// Builds the table from a closure returning the product `e_i · e_j`.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Vec<(usize, C64)>) -> Self {
        let mut t = MultTable::new(dim);
        for i in 0..dim {
            for j in 0..dim {
                for (k, v) in f(i, j) {
                    t.add(i, j, k, v);
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }
}

pub struct Algebra {
    dim: usize,
    label: String,
    terms: Vec<Term>,
    norm_kind: NormKind,
    identity: Option<CVector>,
    algebraic_identity: Option<CVector>,
    left_basis: Vec<CMatrix>,
    right_basis: Vec<CMatrix>,
    unitized: OnceLock<(Arc<Algebra>, bool)>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("norm", &self.norm_kind.name())
            .field("unital", &self.identity.is_some())
            .finish()
    }
}

/// Builds and validates an algebra.
///
/// Checks associativity, the homomorphism property of operator-norm
/// representations, submultiplicativity on basis pairs, and the identity.
/// When no hint is given an identity is searched for by solving
/// `u e_j = e_j = e_j u`; an identity whose norm is not 1 is kept only as
/// [`Algebra::algebraic_identity`] and the algebra is treated as non-unital.
pub fn build_algebra(
    table: MultTable,
    norm_kind: NormKind,
    identity_hint: Option<CVector>,
    label: impl Into<String>,
) -> Result<Arc<Algebra>> {
    let dim = table.dim;
    let tol = Tolerances::DEFAULT;
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InconsistentDimensions(format!("dimension {dim} outside 1..={MAX_DIM}")));
    }
    if let Some(t) = table.terms.iter().find(|t| t.i >= dim || t.j >= dim || t.k >= dim) {
        return Err(Error::InconsistentDimensions(format!(
            "term ({}, {}, {}) out of range for dim {dim}",
            t.i, t.j, t.k
        )));
    }
    validate_norm_kind(dim, &norm_kind)?;

    let mut left_basis = vec![CMatrix::zeros(dim, dim); dim];
    let mut right_basis = vec![CMatrix::zeros(dim, dim); dim];
    for t in &table.terms {
        left_basis[t.i][(t.k, t.j)] += t.value;
        right_basis[t.j][(t.k, t.i)] += t.value;
    }

    let mut alg = Algebra {
        dim,
        label: label.into(),
        terms: table.terms,
        norm_kind,
        identity: None,
        algebraic_identity: None,
        left_basis,
        right_basis,
        unitized: OnceLock::new(),
    };
    alg.check_associative(tol.structure)?;
    alg.check_representation(tol.structure)?;
    alg.check_submultiplicative(tol.structure)?;

    match identity_hint {
        Some(u) => {
            if u.len() != dim {
                return Err(Error::InconsistentDimensions(format!(
                    "identity hint has length {}, expected {dim}",
                    u.len()
                )));
            }
            let defect = alg.identity_defect(&u);
            if defect > 1e-10 {
                return Err(Error::NotIdentity(defect));
            }
            let n = alg.try_norm(&u)?;
            if (n - 1.0).abs() > tol.structure {
                return Err(Error::IdentityNorm(n));
            }
            alg.algebraic_identity = Some(u.clone());
            alg.identity = Some(u);
        }
        None => {
            if let Some(u) = alg.find_identity() {
                let n = alg.try_norm(&u)?;
                if (n - 1.0).abs() <= tol.structure {
                    alg.identity = Some(u.clone());
                }
                alg.algebraic_identity = Some(u);
            }
        }
    }
    Ok(Arc::new(alg))
}

fn validate_norm_kind(dim: usize, kind: &NormKind) -> Result<()> {
    let check_weights = |w: &Option<Vec<f64>>, n: usize| -> Result<()> {
        if let Some(w) = w {
            if w.len() != n {
                return Err(Error::InconsistentDimensions(format!("{} weights for a space of dimension {n}", w.len())));
            }
            if w.iter().any(|&x| !x.is_finite() || x <= 0.0) {
                return Err(Error::InvalidInput("weights must be positive".into()));
            }
        }
        Ok(())
    };
    match kind {
        NormKind::L1 { weights } => check_weights(weights, dim),
        NormKind::OpNorm { rep, weights, domain } => {
            if rep.len() != dim {
                return Err(Error::InconsistentDimensions(format!(
                    "{} representing matrices for dimension {dim}",
                    rep.len()
                )));
            }
            let n = rep[0].nrows();
            if rep.iter().any(|m| m.nrows() != n || m.ncols() != n) || n == 0 {
                return Err(Error::InconsistentDimensions(
                    "representing matrices must be square and of equal size".into(),
                ));
            }
            if weights.is_some() && *domain != OpDomain::L1 {
                return Err(Error::InvalidInput("weights are only supported on the l1 domain".into()));
            }
            check_weights(weights, n)
        }
        NormKind::LinfSum { left, right } => {
            if left.dim + right.dim != dim {
                return Err(Error::InconsistentDimensions(format!(
                    "summands have dimensions {} + {} != {dim}",
                    left.dim, right.dim
                )));
            }
            Ok(())
        }
    }
}

impl Algebra {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn norm_kind(&self) -> &NormKind {
        &self.norm_kind
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Coefficients of the norm-one identity, if the algebra is unital.
    pub fn identity(&self) -> Option<&CVector> {
        self.identity.as_ref()
    }

    /// Coefficients of an algebraic identity regardless of its norm.
    pub fn algebraic_identity(&self) -> Option<&CVector> {
        self.algebraic_identity.as_ref()
    }

    pub fn is_unital(&self) -> bool {
        self.identity.is_some()
    }

    pub(crate) fn identity_or_err(&self) -> Result<&CVector> {
        self.identity.as_ref().ok_or(Error::NotUnital)
    }

    /// Coefficient product `a · b`.
    pub fn product(&self, a: &CVector, b: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim);
        for t in &self.terms {
            out[t.k] += a[t.i] * b[t.j] * t.value;
        }
        out
    }

    /// Matrix of `y ↦ a·y` in the coefficient basis.
    pub fn left_matrix(&self, a: &CVector) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for t in &self.terms {
            m[(t.k, t.j)] += a[t.i] * t.value;
        }
        m
    }

    /// Matrix of `y ↦ y·a` in the coefficient basis.
    pub fn right_matrix(&self, a: &CVector) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for t in &self.terms {
            m[(t.k, t.i)] += a[t.j] * t.value;
        }
        m
    }

    pub fn left_basis_matrix(&self, i: usize) -> &CMatrix {
        &self.left_basis[i]
    }

    pub fn right_basis_matrix(&self, j: usize) -> &CMatrix {
        &self.right_basis[j]
    }

    /// Largest `|e_i e_j - e_j e_i|` coefficient over basis pairs.
    pub fn commutativity_defect(&self) -> f64 {
        (0..self.dim).map(|i| max_abs_matrix(&(&self.left_basis[i] - &self.right_basis[i]))).fold(0.0, f64::max)
    }

    pub fn is_commutative(&self) -> bool {
        self.commutativity_defect() <= Tolerances::DEFAULT.structure
    }

    fn scale(&self) -> f64 {
        self.terms.iter().fold(1.0f64, |m, t| m.max(t.value.norm()))
    }

    fn check_associative(&self, tol: f64) -> Result<()> {
        let tol = tol * self.scale() * self.scale();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let eij = self.left_basis[i].column(j).clone_owned();
                let lhs = self.left_matrix(&eij);
                let rhs = &self.left_basis[i] * &self.left_basis[j];
                let diff = &lhs - &rhs;
                for k in 0..self.dim {
                    let defect = diff.column(k).iter().fold(0.0f64, |m, z| m.max(z.norm()));
                    if defect > tol {
                        return Err(Error::NotAssociative { i, j, k, defect });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_representation(&self, tol: f64) -> Result<()> {
        let NormKind::OpNorm { rep, .. } = &self.norm_kind else {
            return Ok(());
        };
        let scale = rep.iter().fold(1.0f64, |m, r| m.max(max_abs_matrix(r)));
        for i in 0..self.dim {
            for j in 0..self.dim {
                let eij = self.left_basis[i].column(j).clone_owned();
                let mut expect = CMatrix::zeros(rep[0].nrows(), rep[0].ncols());
                for (k, r) in rep.iter().enumerate() {
                    expect += r * eij[k];
                }
                let defect = max_abs_matrix(&(&rep[i] * &rep[j] - expect));
                if defect > tol * scale * scale * self.scale() {
                    return Err(Error::NotHomomorphism { i, j, defect });
                }
            }
        }
        Ok(())
    }

    fn check_submultiplicative(&self, tol: f64) -> Result<()> {
        let norms: Vec<f64> =
            (0..self.dim).map(|i| self.try_norm(&basis_vector(self.dim, i))).collect::<Result<_>>()?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let eij = self.left_basis[i].column(j).clone_owned();
                let lhs = self.try_norm(&eij)?;
                let rhs = norms[i] * norms[j];
                if lhs > rhs + tol * rhs.max(1.0) {
                    return Err(Error::NotSubmultiplicative { i, j, lhs, rhs });
                }
            }
        }
        Ok(())
    }

    fn identity_defect(&self, u: &CVector) -> f64 {
        (0..self.dim)
            .map(|j| {
                let e = basis_vector(self.dim, j);
                let l = &self.left_matrix(u) * &e - &e;
                let r = &self.right_matrix(u) * &e - &e;
                max_abs(&l).max(max_abs(&r))
            })
            .fold(0.0, f64::max)
    }

    fn find_identity(&self) -> Option<CVector> {
        let n = self.dim;
        // u e_j = R_{e_j} u and e_j u = L_{e_j} u.
        let mut sys = CMatrix::zeros(2 * n * n, n);
        let mut rhs = CVector::zeros(2 * n * n);
        for j in 0..n {
            sys.view_mut((2 * j * n, 0), (n, n)).copy_from(&self.right_basis[j]);
            sys.view_mut(((2 * j + 1) * n, 0), (n, n)).copy_from(&self.left_basis[j]);
            rhs[2 * j * n + j] = crate::linalg::ONE;
            rhs[(2 * j + 1) * n + j] = crate::linalg::ONE;
        }
        let (u, resid) = lstsq(&sys, &rhs, 1e-13);
        if resid > 1e-10 * norm2(&rhs).max(1.0) {
            return None;
        }
        // Integer tables have integer identities; prefer the exact vector.
        let rounded = u.map(|z| C64::new(z.re.round(), z.im.round()));
        if self.identity_defect(&rounded) <= 1e-14 {
            return Some(rounded);
        }
        let u = u.map(|z| if z.norm() < 1e-14 { ZERO } else { z });
        (self.identity_defect(&u) <= 1e-10).then_some(u)
    }
}

pub(crate) fn basis_vector(dim: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[i] = crate::linalg::ONE;
    v
}

pub(crate) fn max_abs_matrix(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
