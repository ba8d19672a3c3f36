//! Principal ideals, support idempotents, pseudo-inverses, Cohen-type
//! factorization and the commutative join calculus.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{invert, minimize_norm_affine, unitize, Algebra, Element, Unitization};
use crate::error::{Error, Result};
use crate::linalg::{
    eigenvalues, lstsq, lu_solve, norm2, null_space, orth_basis, span_contains, span_sum, spans_equal, CMatrix,
    CVector, C64,
};
use crate::roots::{f_transform, principal_power};
use crate::states::cone_report;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Right,
    Left,
    TwoSided,
    /// `zAz`-type compressions.
    Compression,
}

/// A subspace of the algebra given by an orthonormal coefficient basis.
#[derive(Debug, Clone)]
pub struct IdealBasis {
    alg: Arc<Algebra>,
    side: Side,
    generators: Vec<Element>,
    basis: CMatrix,
}

fn columns(parts: &[CMatrix], rows: usize) -> CMatrix {
    let cols: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut m = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        m.view_mut((0, at), (rows, p.ncols())).copy_from(p);
        at += p.ncols();
    }
    m
}

fn as_column(v: &CVector) -> CMatrix {
    CMatrix::from_column_slice(v.len(), 1, v.as_slice())
}

impl IdealBasis {
    fn from_columns(alg: &Arc<Algebra>, side: Side, generators: Vec<Element>, m: CMatrix) -> Self {
        let basis = orth_basis(&m, Tolerances::DEFAULT.ideal_rank);
        IdealBasis { alg: alg.clone(), side, generators, basis }
    }

    /// `gA¹` summed over the generators: the right ideal they generate.
    pub fn right_generated(gens: &[Element]) -> Result<Self> {
        let alg = first_algebra(gens)?;
        let parts: Vec<CMatrix> = gens.iter().flat_map(|g| [g.left_matrix(), as_column(g.coeffs())]).collect();
        Ok(Self::from_columns(&alg, Side::Right, gens.to_vec(), columns(&parts, alg.dim())))
    }

    /// `A¹g` summed over the generators.
    pub fn left_generated(gens: &[Element]) -> Result<Self> {
        let alg = first_algebra(gens)?;
        let parts: Vec<CMatrix> = gens.iter().flat_map(|g| [g.right_matrix(), as_column(g.coeffs())]).collect();
        Ok(Self::from_columns(&alg, Side::Left, gens.to_vec(), columns(&parts, alg.dim())))
    }

    /// `A¹gA¹` summed over the generators.
    pub fn two_sided_generated(gens: &[Element]) -> Result<Self> {
        let alg = first_algebra(gens)?;
        let mut parts = Vec::new();
        for g in gens {
            let (l, r) = (g.left_matrix(), g.right_matrix());
            parts.push(as_column(g.coeffs()));
            parts.push(l.clone());
            parts.push(r.clone());
            for i in 0..alg.dim() {
                parts.push(alg.left_basis_matrix(i) * &r);
            }
        }
        Ok(Self::from_columns(&alg, Side::TwoSided, gens.to_vec(), columns(&parts, alg.dim())))
    }

    /// `z A¹ z`.
    pub fn compression(z: &Element) -> Self {
        let alg = z.algebra().clone();
        let lr = z.left_matrix() * z.right_matrix();
        let zz = z * z;
        let m = columns(&[lr, as_column(zz.coeffs())], alg.dim());
        Self::from_columns(&alg, Side::Compression, vec![z.clone()], m)
    }

    /// Span of the given elements, with no closure.
    pub fn span(elements: &[Element], side: Side) -> Result<Self> {
        let alg = first_algebra(elements)?;
        let parts: Vec<CMatrix> = elements.iter().map(|e| as_column(e.coeffs())).collect();
        Ok(Self::from_columns(&alg, side, elements.to_vec(), columns(&parts, alg.dim())))
    }

    pub fn zero(alg: &Arc<Algebra>, side: Side) -> Self {
        IdealBasis { alg: alg.clone(), side, generators: Vec::new(), basis: CMatrix::zeros(alg.dim(), 0) }
    }

    pub(crate) fn from_orthonormal(alg: &Arc<Algebra>, side: Side, basis: CMatrix) -> Self {
        IdealBasis { alg: alg.clone(), side, generators: Vec::new(), basis }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// Orthonormal coefficient basis, one column per basis vector.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn elements(&self) -> Vec<Element> {
        self.basis
            .column_iter()
            .map(|c| Element::new(&self.alg, c.clone_owned()).expect("basis has algebra dimension"))
            .collect()
    }

    pub fn contains(&self, x: &Element, tol: f64) -> bool {
        span_contains(&self.basis, &as_column(x.coeffs()), tol)
    }

    pub fn same_span(&self, other: &IdealBasis) -> bool {
        spans_equal(&self.basis, &other.basis, Tolerances::DEFAULT.span_rank)
    }

    pub fn contained_in(&self, other: &IdealBasis) -> bool {
        span_contains(&other.basis, &self.basis, Tolerances::DEFAULT.span_rank)
    }

    pub fn sum(&self, other: &IdealBasis) -> IdealBasis {
        let b = span_sum(&self.basis, &other.basis, Tolerances::DEFAULT.ideal_rank);
        IdealBasis::from_orthonormal(&self.alg, self.side, b)
    }

    pub fn intersection(&self, other: &IdealBasis) -> IdealBasis {
        let b = crate::linalg::span_intersection(&self.basis, &other.basis, Tolerances::DEFAULT.ideal_rank);
        IdealBasis::from_orthonormal(&self.alg, self.side, b)
    }

    /// Largest distance from `b·e_i` (right) or `e_i·b` (left) to the span,
    /// over basis vectors `b` and algebra basis elements `e_i`.
    pub fn closure_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.alg.dim() {
            let maps: Vec<&CMatrix> = match self.side {
                Side::Right => vec![self.alg.right_basis_matrix(i)],
                Side::Left => vec![self.alg.left_basis_matrix(i)],
                Side::TwoSided => vec![self.alg.right_basis_matrix(i), self.alg.left_basis_matrix(i)],
                Side::Compression => vec![],
            };
            for m in maps {
                let img = m * &self.basis;
                for col in img.column_iter() {
                    worst = worst.max(crate::linalg::distance_to_span(&self.basis, &col.clone_owned()));
                }
            }
        }
        worst
    }
}

fn first_algebra(elements: &[Element]) -> Result<Arc<Algebra>> {
    let first = elements.first().ok_or_else(|| Error::InvalidInput("no generators".into()))?;
    for e in elements {
        first.same_algebra(e)?;
    }
    Ok(first.algebra().clone())
}

/// `xA¹`, which equals `xA` when the algebra is unital.
pub fn principal_right_ideal(x: &Element) -> IdealBasis {
    IdealBasis::right_generated(std::slice::from_ref(x)).expect("one generator")
}

/// `A¹x`.
pub fn principal_left_ideal(x: &Element) -> IdealBasis {
    IdealBasis::left_generated(std::slice::from_ref(x)).expect("one generator")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportDefects {
    /// `‖s² − s‖`.
    pub idempotent: f64,
    /// `‖sx − x‖`.
    pub left: f64,
    /// `‖xs − x‖`.
    pub right: f64,
    /// `‖1 − s‖ − 1`, computed in the unitization.
    pub f_excess: f64,
}

impl SupportDefects {
    pub fn max(&self) -> f64 {
        self.idempotent.max(self.left).max(self.right).max(self.f_excess)
    }
}

#[derive(Debug, Clone)]
pub struct SupportIdempotent {
    /// The algebraic-route support idempotent.
    pub s: Element,
    /// The extrapolated limit of `x^{1/n}`.
    pub limit: Element,
    pub route_gap: f64,
    pub defects: SupportDefects,
}

fn lift(x: &Element) -> Result<(Unitization, Element)> {
    let u = unitize(x.algebra())?;
    let y = u.embed(x)?;
    Ok((u, y))
}

const ROUTE_TOL: f64 = 1e-6;
const LIMIT_TOL: f64 = 1e-8;

/// Support idempotent `s(x)` of an accretive element.
///
/// With `w = x` if `x ∈ 𝔉_A` and `w = 𝔉(x)` otherwise, the algebraic route
/// takes `r = w^{1/2}`, solves `w y = r` and returns `s = r y`. The limit
/// route extrapolates `w^{1/n}`, `n = 2^k`, in `1/n`. The two must agree.
pub fn support_idempotent(x: &Element) -> Result<SupportIdempotent> {
    let (u, xl) = lift(x)?;
    let report = cone_report(&xl, Tolerances::DEFAULT.cone)?;
    if !report.accretive {
        return Err(Error::NotAccretive(report.min_re));
    }
    let w = if report.in_f { xl.clone() } else { f_transform(&xl)? };
    let tol = 1e-12;

    let r = principal_power(&w, 0.5, tol)?.value;
    let (y, _) = lstsq(&w.left_matrix(), r.coeffs(), Tolerances::DEFAULT.singular_rel);
    let y = Element::new(w.algebra(), y)?;
    let s = &r * &y;

    let limit = limit_route(&w, tol)?;
    let route_gap = s.dist(&limit);
    if route_gap > ROUTE_TOL {
        return Err(Error::RouteDisagreement(route_gap));
    }

    let defects = SupportDefects {
        idempotent: s.idempotent_defect_norm(),
        left: (&s * &xl - &xl).norm(),
        right: (&xl * &s - &xl).norm(),
        f_excess: (s.one_minus()?.norm() - 1.0).max(0.0),
    };
    let bound = Tolerances::DEFAULT.idempotent;
    if defects.max() > bound * xl.norm().max(1.0) {
        return Err(Error::SupportNotIdempotent(format!("{defects:?}")));
    }
    if !principal_right_ideal(&s).same_span(&principal_right_ideal(&xl)) {
        return Err(Error::SpanMismatch("s(x)A differs from xA".into()));
    }
    Ok(SupportIdempotent { s: u.to_base(&s)?, limit: u.to_base(&limit)?, route_gap, defects })
}

/// Eigenvalues of `w` at most this fraction of `‖w‖` count as rounding noise.
const NULL_REL: f64 = 1e-9;
/// Required ratio between the smallest nonzero and the largest null eigenvalue.
const MIN_GAP: f64 = 1e3;
const CONTOUR_POINTS: usize = 64;

/// Riesz projection of `w` onto its eigenvalues near zero, by the trapezoid
/// rule on a circle in the spectral gap. `None` when no eigenvalue is null.
fn null_projection(w: &Element) -> Result<Option<Element>> {
    let scale = w.norm();
    let moduli: Vec<f64> = eigenvalues(&w.left_matrix()).iter().map(|z| z.norm()).collect();
    let (null, live): (Vec<f64>, Vec<f64>) = moduli.iter().partition(|&&m| m <= NULL_REL * scale);
    if null.is_empty() {
        return Ok(None);
    }
    let smallest_live = live.iter().copied().fold(f64::INFINITY, f64::min);
    let largest_null = null.iter().copied().fold(0.0, f64::max).max(1e-18 * scale);
    if smallest_live < MIN_GAP * largest_null {
        return Err(Error::NonConvergent { estimate: smallest_live, err: largest_null });
    }
    let r = if smallest_live.is_finite() { (smallest_live * largest_null).sqrt() } else { scale.max(1.0) };
    let one = Element::one(w.algebra())?;
    let lw = w.left_matrix();
    let lid = one.left_matrix();
    let mut e = CVector::zeros(w.dim());
    for k in 0..CONTOUR_POINTS {
        let lambda = C64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / CONTOUR_POINTS as f64);
        // (1/2πi)∮(λ − w)^{-1} dλ with dλ = iλ dθ.
        let v = lu_solve(&(&lid * lambda - &lw), one.coeffs()).ok_or(Error::Singular(r))?;
        e += v * (lambda / C64::from(CONTOUR_POINTS as f64));
    }
    Ok(Some(Element::new(w.algebra(), e)?))
}

/// Richardson limit of `w^{1/n}`, `n = 2^k`. A rounding-level eigenvalue `ε`
/// of a singular `w` would drive `ε^{1/n}` to 1, so the sequence is taken
/// on the complement of the Riesz projection at zero.
fn limit_route(w: &Element, tol: f64) -> Result<Element> {
    const LEVELS: usize = 4;
    let keep = null_projection(w)?.map(|e| e.one_minus()).transpose()?;
    let mut rows: Vec<Vec<Element>> = Vec::new();
    for k in 1..=24u32 {
        let n = 2f64.powi(k as i32);
        let pr = principal_power(w, 1.0 / n, tol)?;
        let root = pr.value;
        let mut row = vec![match &keep {
            Some(p) => &root * p,
            None => root,
        }];
        if let Some(prev) = rows.last() {
            for m in 1..=LEVELS.min(prev.len()) {
                let f = 2f64.powi(m as i32);
                let next = (row[m - 1].scale_re(f) - &prev[m - 1]).scale_re(1.0 / (f - 1.0));
                row.push(next);
            }
            let m = (row.len() - 1).min(prev.len() - 1);
            if row[m].dist(&prev[m]) < LIMIT_TOL {
                return Ok(row[m].clone());
            }
        }
        rows.push(row);
    }
    let last = rows.last().expect("at least one level");
    Err(Error::TolNotReached { tol: LIMIT_TOL, err: f64::NAN, steps: last.len() })
}

/// Minimal-norm `y` with `x y x = x`.
pub fn pseudo_invert(x: &Element) -> Result<Element> {
    let m = x.left_matrix() * x.right_matrix();
    let (y, _) = lstsq(&m, x.coeffs(), Tolerances::DEFAULT.singular_rel);
    let y = Element::new(x.algebra(), y)?;
    let residual = (x * &y * x - x).norm();
    if residual > 1e-9 * x.norm().max(1.0) {
        return Err(Error::NotPseudoInvertible(residual));
    }
    Ok(y)
}

#[derive(Debug, Clone, Serialize)]
pub struct WsReport {
    /// `s(x)` exists in the algebra.
    pub support: bool,
    pub pseudo_invertible: bool,
    /// `x` is invertible in the closed subalgebra it generates.
    pub invertible_in_ba: bool,
    /// `xA` and `Ax` coincide with `s(x)A` and `As(x)`.
    pub ranges_match: bool,
    /// Smallest eigenvalue modulus of left multiplication by `x` on `xA`.
    pub spectral_gap: f64,
    pub support_is_identity: bool,
    pub all: bool,
}

/// Independent checks of the pseudo-invertibility equivalences for an accretive `x`.
pub fn ws_equivalences_report(x: &Element) -> Result<WsReport> {
    let (_, xl) = lift(x)?;
    let report = cone_report(&xl, Tolerances::DEFAULT.cone)?;
    if !report.accretive {
        return Err(Error::NotAccretive(report.min_re));
    }
    let support = support_idempotent(&xl);
    let pseudo_invertible = pseudo_invert(&xl).is_ok();
    let invertible_in_ba = invertible_in_generated_subalgebra(&xl);
    let ranges_match = match &support {
        Ok(s) => {
            principal_right_ideal(&s.s).same_span(&principal_right_ideal(&xl))
                && principal_left_ideal(&s.s).same_span(&principal_left_ideal(&xl))
        }
        Err(_) => false,
    };
    let range = principal_right_ideal(&xl);
    let q = range.basis();
    let restricted = q.adjoint() * xl.left_matrix() * q;
    let spectral_gap = eigenvalues(&restricted).iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let support_is_identity =
        support.as_ref().map(|s| s.s.one_minus().map(|d| d.max_abs() < 1e-7).unwrap_or(false)).unwrap_or(false);
    let support = support.is_ok();
    let all = support && pseudo_invertible && invertible_in_ba && ranges_match && spectral_gap >= 1e-6;
    Ok(WsReport { support, pseudo_invertible, invertible_in_ba, ranges_match, spectral_gap, support_is_identity, all })
}

/// Orthonormal basis of `span{x, x², …}` by Arnoldi with one round of
/// reorthogonalization. Raw powers are too ill-conditioned to rank-reveal
/// when `x` is close to a multiple of the identity.
fn krylov_basis(x: &Element) -> CMatrix {
    let n = x.dim();
    let l = x.left_matrix();
    let mut qs: Vec<CVector> = Vec::with_capacity(n);
    let mut v = x.coeffs().clone();
    while qs.len() < n {
        let before = v.norm();
        for _ in 0..2 {
            for q in &qs {
                let h = q.dotc(&v);
                v -= q * h;
            }
        }
        let r = v.norm();
        if before == 0.0 || r <= 1e-10 * before {
            break;
        }
        let q = v.unscale(r);
        v = &l * &q;
        qs.push(q);
    }
    let mut m = CMatrix::zeros(n, qs.len());
    for (k, q) in qs.iter().enumerate() {
        m.set_column(k, q);
    }
    m
}

/// Solves within `span{x, x², …, x^dim}` for an identity `e` of that
/// subalgebra with `x e = x`, then for `z` with `x z = e`.
fn invertible_in_generated_subalgebra(x: &Element) -> bool {
    let q = krylov_basis(x);
    if q.ncols() == 0 {
        return false;
    }
    let lq = x.left_matrix() * &q;
    let scale = x.norm().max(1.0);
    let solve = |rhs: &CVector| -> Option<Element> {
        let (c, res) = lstsq(&lq, rhs, Tolerances::DEFAULT.singular_rel);
        (res <= 1e-8 * scale * norm2(rhs).max(1.0)).then(|| Element::new(x.algebra(), &q * c).expect("dim"))
    };
    let Some(e) = solve(x.coeffs()) else { return false };
    if e.idempotent_defect_norm() > 1e-7 || (&e * x - x).norm() > 1e-7 * scale {
        return false;
    }
    solve(e.coeffs()).is_some()
}

#[derive(Debug, Clone, Serialize)]
pub struct CohenStep {
    pub step: usize,
    pub chosen: usize,
    pub defect: f64,
    pub bound: f64,
    /// `‖z_n^{-1}‖`.
    pub inverse_norm: f64,
    /// `‖1 − z_n‖`.
    pub dist_one: f64,
}

#[derive(Debug, Clone)]
pub struct Factorization {
    /// The common factor: `z` with `x = z w` (Cohen) or `x = z w z` (hereditary).
    pub z: Element,
    pub factors: Vec<Element>,
    pub residuals: Vec<f64>,
    pub trace: Vec<CohenStep>,
}

const MAX_COHEN_STEPS: usize = 60;
const COHEN_STOP: f64 = 1e-11;

#[derive(Clone, Copy)]
enum Sided {
    Left,
    Both,
}

fn validate_pool(pool: &[Element]) -> Result<Vec<Element>> {
    pool.iter()
        .enumerate()
        .map(|(index, f)| {
            let norm = f.one_minus()?.norm();
            if norm > 1.0 + 1e-10 {
                return Err(Error::PoolNotInF { index, norm });
            }
            Ok(f.clone())
        })
        .collect()
}

fn factorize(targets: &[Element], pool: &[Element], eps: f64, sided: Sided) -> Result<Factorization> {
    let alg = first_algebra(pool)?;
    for t in targets {
        t.same_algebra(&pool[0])?;
    }
    let one = Element::one(&alg)?;
    let pool = validate_pool(pool)?;
    let mut z = one.clone();
    let mut trace = Vec::new();
    for n in 0..MAX_COHEN_STEPS {
        let zinv = invert(&z)?;
        let scale = 0.5f64.powi(n as i32);
        let bound = match sided {
            Sided::Left => scale * eps,
            Sided::Both => scale * scale * eps,
        };
        let defect_of = |f: &Element| -> f64 {
            let g = &one - f;
            targets
                .iter()
                .map(|x| match sided {
                    Sided::Left => (&g * &zinv * x).norm(),
                    Sided::Both => (&g * &zinv * x).norm() + (x * &zinv * &g).norm(),
                })
                .fold(0.0, f64::max)
        };
        // Deterministic tie-break: the first minimizer wins.
        let (chosen, defect) =
            pool.iter()
                .map(defect_of)
                .enumerate()
                .fold((0, f64::INFINITY), |best, (i, d)| if d < best.1 { (i, d) } else { best });
        trace.push(CohenStep {
            step: n,
            chosen,
            defect,
            bound,
            inverse_norm: zinv.norm(),
            dist_one: (&one - &z).norm(),
        });
        if defect > bound {
            return Err(Error::PoolExhausted { step: n, defect, bound });
        }
        let g = &one - &pool[chosen];
        if scale * defect <= COHEN_STOP {
            // z_n − 2^{-n}(1 − f) drops the identity component and stays in 𝔉_A.
            let zf = &z - &g.scale_re(scale);
            let factors: Vec<Element> = targets
                .iter()
                .map(|x| match sided {
                    Sided::Left => &zinv * x,
                    Sided::Both => &zinv * x * &zinv,
                })
                .collect();
            let residuals = targets
                .iter()
                .zip(&factors)
                .map(|(x, w)| match sided {
                    Sided::Left => (&zf * w - x).norm(),
                    Sided::Both => (&zf * w * &zf - x).norm(),
                })
                .collect();
            return Ok(Factorization { z: zf, factors, residuals, trace });
        }
        z = &z - &g.scale_re(scale / 2.0);
    }
    let last = trace.last().expect("at least one step");
    Err(Error::TolNotReached { tol: COHEN_STOP, err: last.defect, steps: MAX_COHEN_STEPS })
}

/// Greedy Cohen factorization `x = z w` with a common `z ∈ J ∩ 𝔉_A` built
/// as `Σ 2^{-k} f_k` from the pool.
pub fn cohen_factorize(targets: &[Element], pool: &[Element], eps: f64) -> Result<Factorization> {
    factorize(targets, pool, eps, Sided::Left)
}

/// Two-sided variant: `x = z w z`.
pub fn hsa_factorize(targets: &[Element], pool: &[Element], eps: f64) -> Result<Factorization> {
    factorize(targets, pool, eps, Sided::Both)
}

#[derive(Debug, Clone)]
pub enum LeftIdentity {
    Found {
        u: Element,
        norm: f64,
    },
    /// The linear system has no solution; `residual` is its least-squares residual.
    Infeasible {
        residual: f64,
    },
}

const LEFT_IDENTITY_ITERS: usize = 50_000;

/// Smallest-norm `u ∈ J` with `u b = b` for every `b ∈ J`. The value is a
/// best-effort upper bound from subgradient descent over the affine
/// solution set.
pub fn min_norm_left_identity(j: &IdealBasis) -> LeftIdentity {
    let q = j.basis();
    let r = q.ncols();
    let n = j.algebra().dim();
    if r == 0 {
        return LeftIdentity::Infeasible { residual: 0.0 };
    }
    let alg = j.algebra();
    // u = Q c; u b_k = R_{b_k} Q c.
    let mut sys = CMatrix::zeros(n * r, r);
    let mut rhs = CVector::zeros(n * r);
    for k in 0..r {
        let b = q.column(k).clone_owned();
        sys.view_mut((k * n, 0), (n, r)).copy_from(&(alg.right_matrix(&b) * q));
        rhs.rows_mut(k * n, n).copy_from(&b);
    }
    let (c0, res) = lstsq(&sys, &rhs, Tolerances::DEFAULT.singular_rel);
    if res > 1e-9 * norm2(&rhs).max(1.0) {
        return LeftIdentity::Infeasible { residual: res };
    }
    let null = null_space(&sys, Tolerances::DEFAULT.span_rank);
    let dirs = orth_basis(&(q * null), Tolerances::DEFAULT.span_rank);
    let (u, norm) = minimize_norm_affine(alg, &(q * c0), &dirs, LEFT_IDENTITY_ITERS);
    LeftIdentity::Found { u: Element::new(alg, u).expect("dim"), norm }
}

fn require_commutative(alg: &Algebra) -> Result<()> {
    let d = alg.commutativity_defect();
    if d > Tolerances::DEFAULT.structure {
        return Err(Error::NotCommutative(d));
    }
    Ok(())
}

fn require_in_f(x: &Element) -> Result<()> {
    let (_, xl) = lift(x)?;
    let d = xl.one_minus()?.norm();
    if d > 1.0 + 1e-9 {
        return Err(Error::NotInF(d));
    }
    Ok(())
}

/// `(x + y)/2`, checking `(x+y)/2·A` equals `xA + yA`.
pub fn comm_join(x: &Element, y: &Element) -> Result<Element> {
    x.same_algebra(y)?;
    require_commutative(x.algebra())?;
    require_in_f(x)?;
    require_in_f(y)?;
    let m = (x + y).scale_re(0.5);
    let joined = principal_right_ideal(x).sum(&principal_right_ideal(y));
    if !principal_right_ideal(&m).same_span(&joined) {
        return Err(Error::SpanMismatch("(x+y)/2·A differs from xA + yA".into()));
    }
    Ok(m)
}

#[derive(Debug, Clone)]
pub struct SupportJoin {
    pub s: Element,
    pub idempotent_defect: f64,
    /// `‖1 − s‖`, in the unitization.
    pub dist_one: f64,
    /// `max(‖s s(x) − s(x)‖, ‖s s(y) − s(y)‖)`.
    pub domination_defect: f64,
    /// Distance to the support of `(x+y)/2` when `x, y ∈ 𝔉_A`.
    pub midpoint_gap: Option<f64>,
}

/// `s(x, y) = s(x) + s(y) − s(x)s(y)` for commuting accretive `x, y`.
pub fn support_join(x: &Element, y: &Element) -> Result<SupportJoin> {
    x.same_algebra(y)?;
    require_commutative(x.algebra())?;
    let sx = support_idempotent(x)?.s;
    let sy = support_idempotent(y)?.s;
    let s = &sx + &sy - &sx * &sy;
    let (_, sl) = lift(&s)?;
    let dist_one = sl.one_minus()?.norm();
    let idempotent_defect = s.idempotent_defect_norm();
    let domination_defect = (&s * &sx - &sx).norm().max((&s * &sy - &sy).norm());
    let midpoint_gap = if require_in_f(x).is_ok() && require_in_f(y).is_ok() {
        let m = comm_join(x, y)?;
        Some(support_idempotent(&m)?.s.dist(&s))
    } else {
        None
    };
    let tol = Tolerances::DEFAULT.idempotent;
    if idempotent_defect > tol || domination_defect > tol || dist_one > 1.0 + 1e-8 {
        return Err(Error::SupportNotIdempotent(format!(
            "join defects: idempotent {idempotent_defect:.3e}, domination {domination_defect:.3e}, |1 - s| = {dist_one}"
        )));
    }
    if midpoint_gap.is_some_and(|g| g > ROUTE_TOL) {
        return Err(Error::SpanMismatch("s(x, y) differs from s((x + y)/2)".into()));
    }
    Ok(SupportJoin { s, idempotent_defect, dist_one, domination_defect, midpoint_gap })
}

/// Scalar helper used by callers building pools: `s − η(s − g)`.
pub fn blend(s: &Element, g: &Element, eta: f64) -> Element {
    s - &(s - g).scale_re(eta)
}
